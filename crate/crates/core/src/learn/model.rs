use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Task;
use crate::error::{Error, Result};
use crate::laplacian::Construction;
use crate::rng::{stream_rng, Stream};
use crate::sparse::SparseComplex;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelShape {
    pub construction: Construction,
    pub task: Task,
    /// Input channels `C`.
    pub in_dim: usize,
    /// Layer width `d`.
    pub d: usize,
    pub layers: usize,
    pub dropout: f64,
}

impl ModelShape {
    pub fn validate(&self) -> Result<()> {
        if self.in_dim == 0 || self.d == 0 || self.layers == 0 {
            return Err(Error::InvalidParameter(
                "input width, layer width and layer count must be positive".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return Err(Error::InvalidParameter(format!(
                "dropout rate {} outside [0,1)",
                self.dropout
            )));
        }
        Ok(())
    }

    fn layer_rows(&self, l: usize) -> usize {
        if l == 0 {
            self.in_dim
        } else {
            self.d
        }
    }

    /// Offset of `Re Θ_l`; `Im Θ_l` follows immediately.
    fn layer_offset(&self, l: usize) -> usize {
        (0..l).map(|k| 2 * self.layer_rows(k) * self.d).sum()
    }

    fn head_offset(&self) -> usize {
        self.layer_offset(self.layers)
    }

    pub fn param_count(&self) -> usize {
        let s = self.task.output_width();
        self.head_offset() + 4 * self.d * s + s
    }
}

/// Parameters live in one flat vector: per layer `Re Θ_l` then `Im Θ_l`
/// (row-major, `rows × d`), then the head `W` (`4d × s`) and bias `b` (`s`).
#[derive(Debug, Clone, PartialEq)]
pub struct HaarNetModel {
    pub shape: ModelShape,
    pub params: Vec<f64>,
}

impl HaarNetModel {
    /// Glorot-uniform filters (split evenly between real and imaginary
    /// parts) and a `U(±1/√(4d))` head.
    pub fn init(shape: ModelShape, seed: u64) -> Result<Self> {
        shape.validate()?;
        let mut rng = stream_rng(seed, Stream::Init, &[]);
        let mut params = Vec::with_capacity(shape.param_count());
        for l in 0..shape.layers {
            let rows = shape.layer_rows(l);
            let limit = (6.0 / (rows + shape.d) as f64).sqrt() / std::f64::consts::SQRT_2;
            for _ in 0..2 * rows * shape.d {
                params.push(rng.random_range(-limit..limit));
            }
        }
        let limit = 1.0 / ((4 * shape.d) as f64).sqrt();
        while params.len() < shape.param_count() {
            params.push(rng.random_range(-limit..limit));
        }
        Ok(HaarNetModel { shape, params })
    }

    pub fn from_params(shape: ModelShape, params: Vec<f64>) -> Result<Self> {
        shape.validate()?;
        if params.len() != shape.param_count() {
            return Err(Error::DimensionMismatch(format!(
                "{} parameters for a model needing {}",
                params.len(),
                shape.param_count()
            )));
        }
        Ok(HaarNetModel { shape, params })
    }

    pub fn theta(&self, l: usize) -> (&[f64], &[f64]) {
        let size = self.shape.layer_rows(l) * self.shape.d;
        let start = self.shape.layer_offset(l);
        self.params[start..start + 2 * size].split_at(size)
    }

    pub fn head(&self) -> (&[f64], &[f64]) {
        let w = 4 * self.shape.d * self.shape.task.output_width();
        self.params[self.shape.head_offset()..].split_at(w)
    }

    pub fn layer_rows(&self, l: usize) -> usize {
        self.shape.layer_rows(l)
    }
}

/// Inverted dropout: each entry is 0 with probability `rate`, otherwise
/// `1/(1 − rate)`.
pub fn dropout_mask(rng: &mut impl Rng, len: usize, rate: f64) -> Vec<f64> {
    let keep = 1.0 / (1.0 - rate);
    (0..len)
        .map(|_| if rng.random::<f64>() < rate { 0.0 } else { keep })
        .collect()
}

/// Intermediates of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardCache {
    /// `Y_0 = X, Y_1, …, Y_L` as (re, im), each `n × width`.
    activations: Vec<(Vec<f64>, Vec<f64>)>,
    /// Pre-activations `P Y_{l-1} Θ_l` as (re, im), each `n × d`.
    pre: Vec<(Vec<f64>, Vec<f64>)>,
    /// Head input after dropout, `e × 4d`.
    head_input: Vec<f64>,
    mask: Option<Vec<f64>>,
}

impl ForwardCache {
    /// The unwound embeddings after dropout, `e × 4d`.
    pub fn head_input(&self) -> &[f64] {
        &self.head_input
    }
}

/// `Y Θ` for row-major complex `Y` (`n × k`) and `Θ` (`k × d`).
fn complex_matmul(
    y: (&[f64], &[f64]),
    theta: (&[f64], &[f64]),
    n: usize,
    k: usize,
    d: usize,
) -> (Vec<f64>, Vec<f64>) {
    let mut re = vec![0.0; n * d];
    let mut im = vec![0.0; n * d];
    for i in 0..n {
        let (ore, oim) = (&mut re[i * d..(i + 1) * d], &mut im[i * d..(i + 1) * d]);
        for t in 0..k {
            let (a, b) = (y.0[i * k + t], y.1[i * k + t]);
            if a == 0.0 && b == 0.0 {
                continue;
            }
            let (tr, ti) = (&theta.0[t * d..(t + 1) * d], &theta.1[t * d..(t + 1) * d]);
            for j in 0..d {
                ore[j] += a * tr[j] - b * ti[j];
                oim[j] += a * ti[j] + b * tr[j];
            }
        }
    }
    (re, im)
}

fn check_pairs(pairs: &[(usize, usize)], n: usize) -> Result<()> {
    if let Some(&(u, v)) = pairs.iter().find(|&&(u, v)| u >= n || v >= n) {
        return Err(Error::DimensionMismatch(format!(
            "pair ({u},{v}) outside a graph with {n} nodes"
        )));
    }
    Ok(())
}

/// Computes `Z` (`e × s`, row-major) for the ordered `pairs`. `x` is the real
/// `n × C` feature matrix. A dropout `mask` of length `e·4d` marks a
/// training pass.
pub fn forward(
    model: &HaarNetModel,
    p: &SparseComplex,
    x: &[f64],
    pairs: &[(usize, usize)],
    mask: Option<&[f64]>,
) -> Result<(Vec<f64>, ForwardCache)> {
    let shape = &model.shape;
    let n = p.rows();
    let d = shape.d;
    let s = shape.task.output_width();
    if x.len() != n * shape.in_dim {
        return Err(Error::DimensionMismatch(format!(
            "features have {} values, expected {n}x{}",
            x.len(),
            shape.in_dim
        )));
    }
    check_pairs(pairs, n)?;
    if let Some(m) = mask {
        if m.len() != pairs.len() * 4 * d {
            return Err(Error::DimensionMismatch("dropout mask length".into()));
        }
    }

    let mut activations = vec![(x.to_vec(), vec![0.0; x.len()])];
    let mut pre = Vec::with_capacity(shape.layers);
    for l in 0..shape.layers {
        let (yr, yi) = activations.last().expect("nonempty");
        let t = complex_matmul((yr, yi), model.theta(l), n, model.layer_rows(l), d);
        let mut pr = vec![0.0; n * d];
        let mut pi = vec![0.0; n * d];
        p.matmul_split(&t.0, &t.1, d, &mut pr, &mut pi);
        if pr.iter().chain(&pi).any(|v| !v.is_finite()) {
            return Err(Error::Divergence(format!("non-finite activation in layer {l}")));
        }
        let yr: Vec<f64> = pr.iter().map(|&v| v.max(0.0)).collect();
        let yi: Vec<f64> = pi.iter().map(|&v| v.max(0.0)).collect();
        pre.push((pr, pi));
        activations.push((yr, yi));
    }

    let (yr, yi) = activations.last().expect("nonempty");
    let width = 4 * d;
    let mut head_input = vec![0.0; pairs.len() * width];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let row = &mut head_input[i * width..(i + 1) * width];
        row[..d].copy_from_slice(&yr[u * d..(u + 1) * d]);
        row[d..2 * d].copy_from_slice(&yi[u * d..(u + 1) * d]);
        row[2 * d..3 * d].copy_from_slice(&yr[v * d..(v + 1) * d]);
        row[3 * d..].copy_from_slice(&yi[v * d..(v + 1) * d]);
    }
    if let Some(m) = mask {
        for (h, k) in head_input.iter_mut().zip(m) {
            *h *= k;
        }
    }

    let (w, b) = model.head();
    let mut z = vec![0.0; pairs.len() * s];
    for i in 0..pairs.len() {
        let row = &head_input[i * width..(i + 1) * width];
        let out = &mut z[i * s..(i + 1) * s];
        out.copy_from_slice(b);
        for (t, &h) in row.iter().enumerate() {
            if h != 0.0 {
                for (o, &wt) in out.iter_mut().zip(&w[t * s..(t + 1) * s]) {
                    *o += h * wt;
                }
            }
        }
    }
    if z.iter().any(|v| !v.is_finite()) {
        return Err(Error::Divergence("non-finite network output".into()));
    }
    Ok((
        z,
        ForwardCache {
            activations,
            pre,
            head_input,
            mask: mask.map(<[f64]>::to_vec),
        },
    ))
}

/// Gradient of the loss with respect to every parameter, laid out like
/// `model.params`, given `dz = ∂loss/∂Z` from the pass that built `cache`.
///
/// Complex quantities carry gradients as `G = ∂/∂Re + i ∂/∂Im`. Through
/// `pre = P T` this gives `G_T = Pᴴ G_pre = P G_pre` (P is Hermitian); through
/// `T = Y Θ` it gives `G_Θ = Yᴴ G_T` and `G_Y = G_T Θᴴ`.
pub fn backward(
    model: &HaarNetModel,
    p: &SparseComplex,
    pairs: &[(usize, usize)],
    cache: &ForwardCache,
    dz: &[f64],
) -> Result<Vec<f64>> {
    let shape = &model.shape;
    let n = p.rows();
    let d = shape.d;
    let s = shape.task.output_width();
    let width = 4 * d;
    if dz.len() != pairs.len() * s || cache.head_input.len() != pairs.len() * width {
        return Err(Error::DimensionMismatch(
            "gradient or cache does not match the pair list".into(),
        ));
    }
    let mut grads = vec![0.0; model.params.len()];
    let head_off = shape.head_offset();
    let (w, _) = model.head();

    // head: dW = Hᵀ dZ, db = Σ dZ, dH = dZ Wᵀ
    let mut g_head = vec![0.0; pairs.len() * width];
    {
        let (gw, gb) = grads[head_off..].split_at_mut(width * s);
        for i in 0..pairs.len() {
            let h = &cache.head_input[i * width..(i + 1) * width];
            let g = &dz[i * s..(i + 1) * s];
            for (o, &gk) in gb.iter_mut().zip(g) {
                *o += gk;
            }
            let gh = &mut g_head[i * width..(i + 1) * width];
            for t in 0..width {
                let wt = &w[t * s..(t + 1) * s];
                let gwt = &mut gw[t * s..(t + 1) * s];
                let mut acc = 0.0;
                for k in 0..s {
                    gwt[k] += h[t] * g[k];
                    acc += g[k] * wt[k];
                }
                gh[t] = acc;
            }
        }
    }
    if let Some(m) = &cache.mask {
        for (g, k) in g_head.iter_mut().zip(m) {
            *g *= k;
        }
    }

    // unwind: scatter back onto node embeddings
    let mut gr = vec![0.0; n * d];
    let mut gi = vec![0.0; n * d];
    for (i, &(u, v)) in pairs.iter().enumerate() {
        let g = &g_head[i * width..(i + 1) * width];
        for j in 0..d {
            gr[u * d + j] += g[j];
            gi[u * d + j] += g[d + j];
            gr[v * d + j] += g[2 * d + j];
            gi[v * d + j] += g[3 * d + j];
        }
    }

    for l in (0..shape.layers).rev() {
        let (pr, pi) = &cache.pre[l];
        for k in 0..n * d {
            if pr[k] <= 0.0 {
                gr[k] = 0.0;
            }
            if pi[k] <= 0.0 {
                gi[k] = 0.0;
            }
        }
        let mut tr = vec![0.0; n * d];
        let mut ti = vec![0.0; n * d];
        p.matmul_split(&gr, &gi, d, &mut tr, &mut ti);

        let rows = model.layer_rows(l);
        let (yr, yi) = &cache.activations[l];
        let off = shape.layer_offset(l);
        let (g_re, g_im) = grads[off..off + 2 * rows * d].split_at_mut(rows * d);
        // G_Θ = Yᴴ G_T
        for i in 0..n {
            let (gtr, gti) = (&tr[i * d..(i + 1) * d], &ti[i * d..(i + 1) * d]);
            for t in 0..rows {
                let (a, b) = (yr[i * rows + t], yi[i * rows + t]);
                if a == 0.0 && b == 0.0 {
                    continue;
                }
                let (or, oi) = (&mut g_re[t * d..(t + 1) * d], &mut g_im[t * d..(t + 1) * d]);
                for j in 0..d {
                    or[j] += a * gtr[j] + b * gti[j];
                    oi[j] += a * gti[j] - b * gtr[j];
                }
            }
        }
        if l == 0 {
            break;
        }
        // G_Y = G_T Θᴴ
        let (th_re, th_im) = model.theta(l);
        gr = vec![0.0; n * rows];
        gi = vec![0.0; n * rows];
        for i in 0..n {
            let (gtr, gti) = (&tr[i * d..(i + 1) * d], &ti[i * d..(i + 1) * d]);
            for t in 0..rows {
                let (thr, thi) = (&th_re[t * d..(t + 1) * d], &th_im[t * d..(t + 1) * d]);
                let (mut ar, mut ai) = (0.0, 0.0);
                for j in 0..d {
                    ar += gtr[j] * thr[j] + gti[j] * thi[j];
                    ai += gti[j] * thr[j] - gtr[j] * thi[j];
                }
                gr[i * rows + t] = ar;
                gi[i * rows + t] = ai;
            }
        }
    }
    Ok(grads)
}
