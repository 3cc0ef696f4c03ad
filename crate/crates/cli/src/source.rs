use std::path::PathBuf;
use std::str::FromStr;

use clap::Args;
use haarlap::generators::{directed_cycle, g15, random_geometric, G15Variant, GeoGraphParams};
use haarlap::io::{load_edge_list, LoadOptions};
use haarlap::{DirectedGraph, Error};
use serde::Serialize;

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct Origin {
    /// Edge list: `source,target[,weight[,timestamp]]` per line.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// cycle:<n>, g15:<A|B|C> or geometric:<n>[:<p>] (r = 2/√n, w in [0.8, 1.2]).
    #[arg(long)]
    pub generate: Option<Generator>,
}

#[derive(Args, Debug)]
pub struct GraphSource {
    #[command(flatten)]
    pub origin: Origin,
    /// Drop negative-weight edges from an input file.
    #[arg(long)]
    pub drop_negative: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum Generator {
    Cycle { n: usize },
    G15 { variant: char },
    Geometric { n: usize, p: f64 },
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || {
            Error::InvalidParameter(format!(
                "bad generator {s:?} (expected cycle:<n>, g15:<A|B|C> or geometric:<n>[:<p>])"
            ))
        };
        let parts: Vec<&str> = s.split(':').collect();
        match parts.as_slice() {
            ["cycle", n] => Ok(Generator::Cycle {
                n: n.parse().map_err(|_| bad())?,
            }),
            ["g15", v] => {
                let variant: G15Variant = v.parse()?;
                Ok(Generator::G15 {
                    variant: match variant {
                        G15Variant::A => 'A',
                        G15Variant::B => 'B',
                        G15Variant::C => 'C',
                    },
                })
            }
            ["geometric", n] => Ok(Generator::Geometric {
                n: n.parse().map_err(|_| bad())?,
                p: 0.5,
            }),
            ["geometric", n, p] => Ok(Generator::Geometric {
                n: n.parse().map_err(|_| bad())?,
                p: p.parse().map_err(|_| bad())?,
            }),
            _ => Err(bad()),
        }
    }
}

/// What the run read, for the config echo.
#[derive(Debug, Clone, Serialize)]
pub struct SourceEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generate: Option<Generator>,
    pub drop_negative: bool,
    pub nodes: usize,
    pub edges: usize,
}

impl GraphSource {
    pub fn load(&self, seed: u64) -> Result<(DirectedGraph, SourceEcho), Error> {
        let g = match (&self.origin.input, self.origin.generate) {
            (Some(path), _) => {
                load_edge_list(
                    path,
                    LoadOptions {
                        drop_negative: self.drop_negative,
                    },
                )?
                .graph
            }
            (None, Some(Generator::Cycle { n })) => directed_cycle(n)?,
            (None, Some(Generator::G15 { variant })) => g15(variant.to_string().parse()?),
            (None, Some(Generator::Geometric { n, p })) => {
                random_geometric(&GeoGraphParams::denoising(n, p, seed))?.graph
            }
            (None, None) => unreachable!("clap requires a graph source"),
        };
        let echo = SourceEcho {
            input: self.origin.input.clone(),
            generate: self.origin.generate,
            drop_negative: self.drop_negative,
            nodes: g.n(),
            edges: g.edge_count(),
        };
        Ok((g, echo))
    }
}
