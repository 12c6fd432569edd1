//! Sampling-based lower estimates of the growth constant
//! `G = sup_{x ∈ Q} Dist(x, Opt)/(f(x) − f_slb)`.

use serde::{Deserialize, Serialize};

use crate::parallel::Execution;
use crate::problem::{Objective, ProblemInstance};
use crate::rng::SplitMix64;
use crate::{Error, Result};

/// Where to evaluate the growth ratio. Points outside `Q` are projected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Sampler {
    /// `per_axis` evenly spaced values per coordinate over `[lower, upper]`.
    Grid { lower: f64, upper: f64, per_axis: usize },
    /// Uniform in the cube of half-width `radius` around `center`.
    Random {
        center: Vec<f64>,
        radius: f64,
        count: usize,
        seed: u64,
    },
    Points { points: Vec<Vec<f64>> },
    /// `(β², β)` for `count` evenly spaced `β` in `[beta_min, beta_max]`.
    CurvePath { beta_min: f64, beta_max: f64, count: usize },
}

impl Sampler {
    /// Default plan for `n` samples at scale `range`: the `(β², β)` curve
    /// with `β ∈ [1, range]` for the counterexample, an even grid on
    /// `[−range, range]` in one dimension, and seeded uniform samples
    /// otherwise.
    pub fn for_problem(problem: &ProblemInstance, n: usize, range: f64, seed: u64) -> Sampler {
        if matches!(problem.objective(), Objective::Counterexample) {
            Sampler::CurvePath {
                beta_min: 1.0,
                beta_max: range,
                count: n,
            }
        } else if problem.dim() == 1 {
            Sampler::Grid {
                lower: -range,
                upper: range,
                per_axis: n,
            }
        } else {
            Sampler::Random {
                center: vec![0.0; problem.dim()],
                radius: range,
                count: n,
                seed,
            }
        }
    }

    pub fn points(&self, dim: usize) -> Result<Vec<Vec<f64>>> {
        let pts = match self {
            Sampler::Grid { lower, upper, per_axis } => {
                if !(lower <= upper) {
                    return Err(Error::InvalidSampler(format!("grid bounds {lower} > {upper}")));
                }
                let total = per_axis.checked_pow(dim as u32).filter(|t| *t <= 50_000_000);
                let Some(total) = total else {
                    return Err(Error::InvalidSampler("grid has too many points".into()));
                };
                let axis = linspace(*lower, *upper, *per_axis);
                (0..total)
                    .map(|mut idx| {
                        (0..dim)
                            .map(|_| {
                                let v = axis[idx % per_axis];
                                idx /= per_axis;
                                v
                            })
                            .collect()
                    })
                    .collect()
            }
            Sampler::Random {
                center,
                radius,
                count,
                seed,
            } => {
                if center.len() != dim {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: center.len(),
                    });
                }
                let mut rng = SplitMix64::new(*seed);
                (0..*count)
                    .map(|_| center.iter().map(|c| c + rng.uniform(-radius, *radius)).collect())
                    .collect()
            }
            Sampler::Points { points } => {
                if let Some(p) = points.iter().find(|p| p.len() != dim) {
                    return Err(Error::DimensionMismatch {
                        expected: dim,
                        got: p.len(),
                    });
                }
                points.clone()
            }
            Sampler::CurvePath {
                beta_min,
                beta_max,
                count,
            } => {
                if dim != 2 {
                    return Err(Error::InvalidSampler("the (β², β) curve needs dimension 2".into()));
                }
                if !(beta_min <= beta_max) {
                    return Err(Error::InvalidSampler(format!("β range {beta_min} > {beta_max}")));
                }
                linspace(*beta_min, *beta_max, *count)
                    .into_iter()
                    .map(|b| vec![b * b, b])
                    .collect()
            }
        };
        if pts.is_empty() {
            return Err(Error::InvalidSampler("sampling plan produces no points".into()));
        }
        if pts.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSampler("sample points must be finite".into()));
        }
        Ok(pts)
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrowthCertificate {
    pub g_lower: f64,
    pub sample_count: usize,
    pub witness: Vec<f64>,
    /// Running maximum of the ratio in sample order.
    pub running_max: Vec<f64>,
}

impl GrowthCertificate {
    /// Whether the running maximum never decreases and ends above `threshold`.
    pub fn diverges_past(&self, threshold: f64) -> bool {
        self.g_lower >= threshold && self.running_max.windows(2).all(|w| w[0] <= w[1])
    }
}

/// `Dist(x, Opt)/(f(x) − f_slb)` at a feasible point.
pub fn growth_ratio(problem: &ProblemInstance, x: &[f64]) -> Result<f64> {
    let d = problem.dist_to_opt(x).ok_or(Error::MissingCertificate("dist_to_opt"))?;
    let gap = problem.value(x) - problem.f_slb();
    if !(gap > 0.0) {
        return Err(Error::NotStrictLowerBound {
            f_slb: problem.f_slb(),
            f_star: problem.value(x),
        });
    }
    Ok(d / gap)
}

pub fn estimate_growth_constant(problem: &ProblemInstance, sampler: &Sampler, exec: Execution) -> Result<GrowthCertificate> {
    if problem.metadata().opt_set.is_none() {
        return Err(Error::MissingCertificate("dist_to_opt"));
    }
    let pts: Vec<Vec<f64>> = sampler
        .points(problem.dim())?
        .into_iter()
        .map(|p| problem.project(&p))
        .collect();
    let ratios = exec.map(&pts, |x| growth_ratio(problem, x));
    let mut running_max = Vec::with_capacity(pts.len());
    let (mut best, mut arg) = (f64::NEG_INFINITY, 0usize);
    for (k, r) in ratios.into_iter().enumerate() {
        let r = r?;
        if r > best {
            best = r;
            arg = k;
        }
        running_max.push(best);
    }
    Ok(GrowthCertificate {
        g_lower: best,
        sample_count: pts.len(),
        witness: pts[arg].clone(),
        running_max,
    })
}
