use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{families, is_connected, WeightedGraph};
use crate::error::{Error, Result};

/// Resampling budget for the random models.
pub const DEFAULT_RETRIES: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
pub enum Model {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    Star {
        n: usize,
    },
    Complete {
        n: usize,
    },
    ErdosRenyi {
        n: usize,
        p: f64,
    },
    /// Stochastic block model: consecutive vertex blocks of the given sizes,
    /// edge probability `probs[a][b]` between blocks `a` and `b`.
    Sbm {
        sizes: Vec<usize>,
        probs: Vec<Vec<f64>>,
    },
}

impl Model {
    pub fn is_random(&self) -> bool {
        matches!(self, Model::ErdosRenyi { .. } | Model::Sbm { .. })
    }

    pub fn order(&self) -> usize {
        match self {
            Model::Path { n }
            | Model::Cycle { n }
            | Model::Star { n }
            | Model::Complete { n }
            | Model::ErdosRenyi { n, .. } => *n,
            Model::Sbm { sizes, .. } => sizes.iter().sum(),
        }
    }

    fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidParameter(msg));
        match self {
            Model::Cycle { n } if *n < 3 => invalid(format!("cycle needs n >= 3, got {n}")),
            Model::Path { n } | Model::Star { n } | Model::Complete { n } if *n < 2 => {
                invalid(format!("n must be at least 2, got {n}"))
            }
            Model::ErdosRenyi { n, p } => {
                if *n < 2 {
                    invalid(format!("n must be at least 2, got {n}"))
                } else if !(*p > 0.0 && *p <= 1.0) {
                    invalid(format!("p must lie in (0, 1], got {p}"))
                } else {
                    Ok(())
                }
            }
            Model::Sbm { sizes, probs } => {
                let k = sizes.len();
                if k == 0 || sizes.contains(&0) {
                    return invalid("block sizes must be positive".into());
                }
                if sizes.iter().sum::<usize>() < 2 {
                    return invalid("sbm needs at least 2 vertices".into());
                }
                if probs.len() != k || probs.iter().any(|row| row.len() != k) {
                    return invalid(format!("probability matrix must be {k}x{k}"));
                }
                for a in 0..k {
                    for b in 0..k {
                        let p = probs[a][b];
                        if !(0.0..=1.0).contains(&p) {
                            return invalid(format!("probability {p} outside [0, 1]"));
                        }
                        if p != probs[b][a] {
                            return invalid("probability matrix must be symmetric".into());
                        }
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Path { n } => write!(f, "path(n={n})"),
            Model::Cycle { n } => write!(f, "cycle(n={n})"),
            Model::Star { n } => write!(f, "star(n={n})"),
            Model::Complete { n } => write!(f, "complete(n={n})"),
            Model::ErdosRenyi { n, p } => write!(f, "er(n={n},p={p})"),
            Model::Sbm { sizes, probs } => {
                let sizes: Vec<String> = sizes.iter().map(|s| s.to_string()).collect();
                let rows: Vec<String> = probs
                    .iter()
                    .map(|r| {
                        r.iter()
                            .map(|p| p.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "sbm(sizes={},B={})", sizes.join(","), rows.join(";"))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generated {
    pub graph: WeightedGraph,
    /// Number of samples drawn, 1 for the deterministic families.
    pub attempts: usize,
}

/// Samples a connected graph. Deterministic families ignore `seed`; the random
/// models resample from a single seeded stream until connected.
pub fn generate(model: &Model, seed: u64, max_attempts: usize) -> Result<Generated> {
    model.validate()?;
    let graph = match model {
        Model::Path { n } => families::path(*n),
        Model::Cycle { n } => families::cycle(*n),
        Model::Star { n } => families::star(*n),
        Model::Complete { n } => families::complete(*n),
        Model::ErdosRenyi { .. } | Model::Sbm { .. } => {
            return sample_connected(model, seed, max_attempts)
        }
    };
    Ok(Generated { graph, attempts: 1 })
}

fn sample_connected(model: &Model, seed: u64, max_attempts: usize) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = model.order();
    let block_of: Vec<usize> = match model {
        Model::Sbm { sizes, .. } => sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect(),
        _ => vec![0; n],
    };
    let prob = |u: usize, v: usize| match model {
        Model::ErdosRenyi { p, .. } => *p,
        Model::Sbm { probs, .. } => probs[block_of[u]][block_of[v]],
        _ => unreachable!("deterministic family"),
    };
    for attempt in 1..=max_attempts {
        let mut pairs = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                if rng.random::<f64>() < prob(u, v) {
                    pairs.push((u, v));
                }
            }
        }
        let g = WeightedGraph::unweighted(n, pairs)?;
        if is_connected(&g) {
            let graph = g.with_name(format!("{model}#seed={seed}"));
            return Ok(Generated {
                graph,
                attempts: attempt,
            });
        }
    }
    Err(Error::RetriesExhausted(max_attempts))
}
