//! Low-pass denoising of a smooth signal on random geometric digraphs.
//!
//! Per graph the Laplacian of each kind is decomposed once; every noise
//! realization is then projected onto the first `m` Fourier modes and
//! scored by SNR. All kinds and all `m` share the same graphs and the same
//! noise draws, and `σ` only rescales a fixed standard-normal vector.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{plane_signal, random_geometric, GeoGraphParams};
use crate::laplacian::{laplacian, Construction, LaplacianKind};
use crate::rng::{derive_seed, stream_rng, Stream};
use crate::spectral::{gft_real, hermitian_eig, igft, truncate_spectrum, Spectrum};
use crate::Complex64;

/// Reported SNR when the reconstruction is exact.
pub const SNR_CAP_DB: f64 = 300.0;

/// Graph regenerations allowed per experiment when a builder rejects a graph.
pub const MAX_REJECTIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DenoiseConfig {
    pub kinds: Vec<Construction>,
    pub normalized: bool,
    pub m_values: Vec<usize>,
    pub sigmas: Vec<f64>,
    pub graphs: usize,
    pub runs: usize,
    pub seed: u64,
    pub n: usize,
    /// Connection radius; `None` means `2/√n`.
    pub r: Option<f64>,
    pub p: f64,
    pub w_min: f64,
    pub w_max: f64,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        DenoiseConfig {
            kinds: vec![
                Construction::Haar,
                Construction::Magnetic { q: 0.25 },
                Construction::SignMagnetic,
            ],
            normalized: false,
            m_values: vec![10, 25, 50, 100],
            sigmas: vec![0.25, 0.5, 0.75, 1.0, 1.25, 1.5],
            graphs: 10,
            runs: 100,
            seed: 0,
            n: 500,
            r: None,
            p: 0.5,
            w_min: 0.8,
            w_max: 1.2,
        }
    }
}

impl DenoiseConfig {
    pub fn radius(&self) -> f64 {
        self.r.unwrap_or_else(|| 2.0 / (self.n as f64).sqrt())
    }

    pub fn graph_params(&self, seed: u64) -> GeoGraphParams {
        GeoGraphParams {
            n: self.n,
            r: self.radius(),
            p: self.p,
            w_min: self.w_min,
            w_max: self.w_max,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.kinds.is_empty() || self.m_values.is_empty() || self.sigmas.is_empty() {
            return bad("kinds, m values and sigmas must be nonempty".into());
        }
        if self.graphs == 0 || self.runs == 0 {
            return bad("graph and run counts must be at least 1".into());
        }
        if let Some(&m) = self.m_values.iter().find(|&&m| m == 0 || m > self.n) {
            return bad(format!("kept coefficient count {m} outside 1..={}", self.n));
        }
        if let Some(s) = self.sigmas.iter().find(|s| !(**s >= 0.0 && s.is_finite())) {
            return bad(format!("noise level {s} must be finite and >= 0"));
        }
        self.graph_params(0).validate()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseRow {
    pub kind: Construction,
    pub m: usize,
    pub sigma: f64,
    pub mean_snr_db: f64,
    pub std_snr_db: f64,
    pub n_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DenoiseResult {
    /// Ordered by kind, then `m`, then `σ`, following the config.
    pub rows: Vec<DenoiseRow>,
    pub rejections: usize,
}

impl DenoiseResult {
    pub fn get(&self, kind: Construction, m: usize, sigma: f64) -> Option<&DenoiseRow> {
        self.rows
            .iter()
            .find(|r| r.kind == kind && r.m == m && r.sigma == sigma)
    }
}

/// `z + σ ε` with `ε` i.i.d. standard normal from the noise stream of `seed`.
pub fn add_noise(z: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "noise level {sigma} must be finite and >= 0"
        )));
    }
    let mut rng = stream_rng(seed, Stream::Noise, &[]);
    Ok(z
        .iter()
        .map(|&x| {
            let e: f64 = StandardNormal.sample(&mut rng);
            x + sigma * e
        })
        .collect())
}

/// `Re(igft(truncate(gft(z̃), m)))`.
pub fn denoise(spectrum: &Spectrum, noisy: &[f64], m: usize) -> Result<Vec<f64>> {
    let xhat = truncate_spectrum(&gft_real(spectrum, noisy)?, m)?;
    Ok(igft(spectrum, &xhat)?.into_iter().map(|z| z.re).collect())
}

/// Same result as [`denoise`] from precomputed coefficients, summing only the
/// kept modes.
fn reconstruct(spectrum: &Spectrum, xhat: &[Complex64], m: usize) -> Vec<f64> {
    let u = &spectrum.vectors;
    (0..spectrum.n())
        .map(|r| {
            u.row(r)[..m]
                .iter()
                .zip(&xhat[..m])
                .map(|(a, b)| a.re * b.re - a.im * b.im)
                .sum()
        })
        .collect()
}

/// `−20 log₁₀(‖ẑ − z‖/‖z‖)`, capped at [`SNR_CAP_DB`].
pub fn snr(estimate: &[f64], reference: &[f64]) -> Result<f64> {
    if estimate.len() != reference.len() {
        return Err(Error::DimensionMismatch(format!(
            "estimate has {} entries, reference {}",
            estimate.len(),
            reference.len()
        )));
    }
    let norm = reference.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return Err(Error::InvalidParameter("SNR of a zero reference signal".into()));
    }
    let err = estimate
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if err == 0.0 {
        return Ok(SNR_CAP_DB);
    }
    Ok((-20.0 * (err / norm).log10()).min(SNR_CAP_DB))
}

struct GraphOutcome {
    rejections: usize,
    /// `snr[kind][m][sigma][run]`
    snr: Vec<Vec<Vec<Vec<f64>>>>,
}

fn run_graph(config: &DenoiseConfig, index: usize) -> Result<GraphOutcome> {
    let mut rejections = 0;
    loop {
        let seed = derive_seed(config.seed, Stream::Graph, &[index as u64, rejections as u64]);
        let geo = random_geometric(&config.graph_params(seed))?;
        match per_graph(config, index, &geo.graph, &plane_signal(&geo.coords)) {
            Ok(snr) => return Ok(GraphOutcome { rejections, snr }),
            Err(Error::ZeroDegree(u)) if rejections < MAX_REJECTIONS => {
                log::debug!("graph {index}: node {u} has zero degree, regenerating");
                rejections += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn per_graph(
    config: &DenoiseConfig,
    index: usize,
    g: &crate::DirectedGraph,
    z: &[f64],
) -> Result<Vec<Vec<Vec<Vec<f64>>>>> {
    let noise: Vec<Vec<f64>> = (0..config.runs)
        .map(|run| {
            let seed = derive_seed(config.seed, Stream::Noise, &[index as u64, run as u64]);
            add_noise(&vec![0.0; z.len()], 1.0, seed)
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(config.kinds.len());
    for &construction in &config.kinds {
        let kind = LaplacianKind {
            construction,
            normalized: config.normalized,
        };
        let spectrum = hermitian_eig(&laplacian(g, kind)?)?;
        let mut by_m = vec![vec![Vec::with_capacity(config.runs); config.sigmas.len()]; config.m_values.len()];
        for eps in &noise {
            for (si, &sigma) in config.sigmas.iter().enumerate() {
                let noisy: Vec<f64> = z.iter().zip(eps).map(|(a, e)| a + sigma * e).collect();
                let xhat = gft_real(&spectrum, &noisy)?;
                for (mi, &m) in config.m_values.iter().enumerate() {
                    by_m[mi][si].push(snr(&reconstruct(&spectrum, &xhat, m), z)?);
                }
            }
        }
        out.push(by_m);
    }
    Ok(out)
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Runs the full sweep. Graphs are processed in parallel on the current
/// rayon pool; the reduction walks graphs in index order, so the result does
/// not depend on the thread count.
pub fn run_denoise_experiment(config: &DenoiseConfig) -> Result<DenoiseResult> {
    config.validate()?;
    let outcomes: Vec<GraphOutcome> = (0..config.graphs)
        .into_par_iter()
        .map(|i| run_graph(config, i))
        .collect::<Result<_>>()?;
    let rejections: usize = outcomes.iter().map(|o| o.rejections).sum();
    if rejections > MAX_REJECTIONS {
        return Err(Error::InvalidParameter(format!(
            "{rejections} graphs rejected for zero degrees (limit {MAX_REJECTIONS})"
        )));
    }
    let mut rows = Vec::new();
    for (ki, &kind) in config.kinds.iter().enumerate() {
        for (mi, &m) in config.m_values.iter().enumerate() {
            for (si, &sigma) in config.sigmas.iter().enumerate() {
                let samples: Vec<f64> = outcomes
                    .iter()
                    .flat_map(|o| o.snr[ki][mi][si].iter().copied())
                    .collect();
                let (mean, std) = mean_std(&samples);
                rows.push(DenoiseRow {
                    kind,
                    m,
                    sigma,
                    mean_snr_db: mean,
                    std_snr_db: std,
                    n_samples: samples.len(),
                });
            }
        }
    }
    Ok(DenoiseResult { rows, rejections })
}

/// `‖trunc(gft(z̃), m)‖` for each `m` in `1..=n`: the energy of the complex
/// projection onto the first `m` modes, before the real part is taken.
///
/// This is nondecreasing in `m`. The energy of the real-part estimate
/// `Re(U trunc(Uᴴ z̃))` is not: dropping the imaginary part can remove more
/// energy at larger `m`.
pub fn truncation_energies(spectrum: &Spectrum, noisy: &[f64]) -> Result<Vec<f64>> {
    let xhat = gft_real(spectrum, noisy)?;
    (1..=spectrum.n())
        .map(|m| {
            let kept = truncate_spectrum(&xhat, m)?;
            Ok(igft(spectrum, &kept)?.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::directed_cycle;

    fn small_config() -> DenoiseConfig {
        DenoiseConfig {
            m_values: vec![5, 20],
            sigmas: vec![0.0, 0.5],
            graphs: 3,
            runs: 4,
            seed: 42,
            n: 40,
            ..DenoiseConfig::default()
        }
    }

    fn norm(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    #[test]
    fn noise_examples() {
        let z = vec![1.0, 2.0, 3.0];
        assert_eq!(add_noise(&z, 0.0, 7).unwrap(), z);
        assert_eq!(add_noise(&z, 1.0, 7).unwrap(), add_noise(&z, 1.0, 7).unwrap());
        assert!(add_noise(&z, -1.0, 7).is_err());

        let zeros = vec![0.0; 10_000];
        let e = add_noise(&zeros, 1.0, 3).unwrap();
        let mean = e.iter().sum::<f64>() / 1e4;
        let std = (e.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / 9999.0).sqrt();
        assert!((0.97..=1.03).contains(&std), "std {std}");
    }

    #[test]
    fn snr_examples() {
        let z = vec![3.0, 4.0];
        assert_eq!(snr(&z, &z).unwrap(), SNR_CAP_DB);
        assert!(snr(&[0.0, 0.0], &z).unwrap().abs() < 1e-12);
        assert!((snr(&[3.3, 4.4], &z).unwrap() - 20.0).abs() < 1e-9);
        assert!(snr(&z, &[0.0, 0.0]).is_err());
        assert!(snr(&z, &[1.0]).is_err());
    }

    #[test]
    fn denoise_full_rank_is_identity() {
        let l = laplacian(&directed_cycle(9).unwrap(), LaplacianKind::raw(Construction::Haar))
            .unwrap();
        let s = hermitian_eig(&l).unwrap();
        let x: Vec<f64> = (0..9).map(|i| (i as f64).sin() + 2.0).collect();
        let back = denoise(&s, &x, 9).unwrap();
        for (a, b) in x.iter().zip(&back) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!(denoise(&s, &x, 0).is_err());
        assert!(denoise(&s, &x, 10).is_err());
    }

    #[test]
    fn denoise_does_not_increase_norm_and_matches_fast_path() {
        let config = small_config();
        let geo = random_geometric(&config.graph_params(5)).unwrap();
        for c in &config.kinds {
            let s = hermitian_eig(&laplacian(&geo.graph, LaplacianKind::raw(*c)).unwrap()).unwrap();
            let noisy = add_noise(&plane_signal(&geo.coords), 0.7, 1).unwrap();
            let xhat = gft_real(&s, &noisy).unwrap();
            for m in [1, 7, 25, 40] {
                let slow = denoise(&s, &noisy, m).unwrap();
                assert!(norm(&slow) <= norm(&noisy) + 1e-9);
                let fast = reconstruct(&s, &xhat, m);
                for (a, b) in slow.iter().zip(&fast) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
            let energies = truncation_energies(&s, &noisy).unwrap();
            assert!(energies.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        }
    }

    #[test]
    fn lowest_mode_is_reproduced() {
        let config = small_config();
        let geo = random_geometric(&config.graph_params(8)).unwrap();
        let s = hermitian_eig(
            &laplacian(&geo.graph, LaplacianKind::raw(Construction::Haar)).unwrap(),
        )
        .unwrap();
        let x: Vec<f64> = s.vector(0).iter().map(|z| z.re).collect();
        let coef = gft_real(&s, &x).unwrap()[0];
        let expected: Vec<f64> = s.vector(0).iter().map(|u| (u * coef).re).collect();
        let got = denoise(&s, &x, 1).unwrap();
        for (a, b) in got.iter().zip(&expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn clean_plane_signal_has_finite_snr() {
        let config = DenoiseConfig {
            n: 100,
            ..small_config()
        };
        let geo = random_geometric(&config.graph_params(2)).unwrap();
        let z = plane_signal(&geo.coords);
        let s = hermitian_eig(
            &laplacian(&geo.graph, LaplacianKind::raw(Construction::Haar)).unwrap(),
        )
        .unwrap();
        let v = snr(&denoise(&s, &z, 50).unwrap(), &z).unwrap();
        assert!(v.is_finite() && v > 0.0 && v < SNR_CAP_DB);
    }

    #[test]
    fn experiment_shape_and_determinism() {
        let config = small_config();
        let a = run_denoise_experiment(&config).unwrap();
        assert_eq!(a.rows.len(), 3 * 2 * 2);
        assert!(a.rows.iter().all(|r| r.n_samples == 12));
        assert_eq!(a, run_denoise_experiment(&config).unwrap());

        // at σ = 0 the noise seed is irrelevant
        let mut other = config.clone();
        other.sigmas = vec![0.0];
        let b = run_denoise_experiment(&other).unwrap();
        other.runs = 1;
        let c = run_denoise_experiment(&other).unwrap();
        for (x, y) in b.rows.iter().zip(&c.rows) {
            assert!((x.mean_snr_db - y.mean_snr_db).abs() < 1e-12 * x.mean_snr_db.abs());
        }
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let config = small_config();
        let pool = |t| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap();
        let a = pool(1).install(|| run_denoise_experiment(&config)).unwrap();
        let b = pool(3).install(|| run_denoise_experiment(&config)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn config_validation_and_toml() {
        let mut c = small_config();
        c.m_values = vec![0];
        assert!(run_denoise_experiment(&c).is_err());
        let mut c = small_config();
        c.sigmas = vec![-1.0];
        assert!(c.validate().is_err());

        let parsed: DenoiseConfig = toml::from_str(
            "kinds = [\"haar\", \"magnetic:0.25\"]\nm_values = [5]\nsigmas = [1.0]\nn = 30\n",
        )
        .unwrap();
        assert_eq!(parsed.kinds, vec![Construction::Haar, Construction::Magnetic { q: 0.25 }]);
        assert_eq!(parsed.graphs, 10);
        let text = toml::to_string(&parsed).unwrap();
        assert_eq!(toml::from_str::<DenoiseConfig>(&text).unwrap(), parsed);
        assert!(toml::from_str::<DenoiseConfig>("bogus = 1").is_err());
    }
}
