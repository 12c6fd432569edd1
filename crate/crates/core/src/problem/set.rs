use serde::{Deserialize, Serialize};

use crate::linalg::{dist, norm};
use crate::{Error, Result};

/// Closed convex feasible region with an exact Euclidean projection.
///
/// Box bounds may be infinite, which covers half-spaces such as `{x₁ ≥ 1}`
/// and degenerate boxes such as rays and segments. Infinite bounds are
/// written as `null` in JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum FeasibleSet {
    Full {
        dim: usize,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Box {
        #[serde(with = "lower_bounds")]
        lower: Vec<f64>,
        #[serde(with = "upper_bounds")]
        upper: Vec<f64>,
    },
    Simplex {
        dim: usize,
    },
}

impl FeasibleSet {
    pub fn full(dim: usize) -> Self {
        FeasibleSet::Full { dim }
    }

    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) || !radius.is_finite() {
            return Err(Error::invalid(format!("ball radius {radius} must be finite and >= 0")));
        }
        Ok(FeasibleSet::Ball { center, radius })
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                got: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l > u || l.is_nan() || u.is_nan()) {
            return Err(Error::invalid("box requires lower <= upper componentwise"));
        }
        Ok(FeasibleSet::Box { lower, upper })
    }

    /// `{x ∈ ℝⁿ : x[axis] ≥ bound}`
    pub fn half_space(dim: usize, axis: usize, bound: f64) -> Result<Self> {
        if axis >= dim {
            return Err(Error::invalid(format!("axis {axis} out of range for dimension {dim}")));
        }
        let mut lower = vec![f64::NEG_INFINITY; dim];
        lower[axis] = bound;
        Self::boxed(lower, vec![f64::INFINITY; dim])
    }

    pub fn simplex(dim: usize) -> Self {
        FeasibleSet::Simplex { dim }
    }

    pub fn dim(&self) -> usize {
        match self {
            FeasibleSet::Full { dim } | FeasibleSet::Simplex { dim } => *dim,
            FeasibleSet::Ball { center, .. } => center.len(),
            FeasibleSet::Box { lower, .. } => lower.len(),
        }
    }

    pub fn is_full(&self) -> bool {
        matches!(self, FeasibleSet::Full { .. })
    }

    /// Euclidean projection `argmin_{y ∈ Q} ‖y − x‖`.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.dim());
        match self {
            FeasibleSet::Full { .. } => x.to_vec(),
            FeasibleSet::Ball { center, radius } => {
                let d = dist(x, center);
                if d <= *radius {
                    x.to_vec()
                } else {
                    let t = radius / d;
                    center
                        .iter()
                        .zip(x)
                        .map(|(c, xi)| c + t * (xi - c))
                        .collect()
                }
            }
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(xi, (l, u))| xi.clamp(*l, *u))
                .collect(),
            FeasibleSet::Simplex { .. } => project_simplex(x),
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim() {
            return false;
        }
        match self {
            FeasibleSet::Full { .. } => true,
            FeasibleSet::Ball { center, radius } => dist(x, center) <= radius + tol,
            FeasibleSet::Box { lower, upper } => x
                .iter()
                .zip(lower.iter().zip(upper))
                .all(|(xi, (l, u))| *xi >= l - tol && *xi <= u + tol),
            FeasibleSet::Simplex { .. } => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
        }
    }

    /// Euclidean distance from `x` to the set.
    pub fn distance(&self, x: &[f64]) -> f64 {
        dist(x, &self.project(x))
    }

    pub(crate) fn validate(&self) -> Result<()> {
        match self {
            FeasibleSet::Full { dim } | FeasibleSet::Simplex { dim } if *dim == 0 => {
                Err(Error::invalid("set dimension must be positive"))
            }
            FeasibleSet::Ball { center, radius } => {
                if center.is_empty() || center.iter().any(|c| !c.is_finite()) {
                    return Err(Error::invalid("ball center must be finite and nonempty"));
                }
                Self::ball(center.clone(), *radius).map(|_| ())
            }
            FeasibleSet::Box { lower, upper } => {
                if lower.is_empty() {
                    return Err(Error::invalid("box dimension must be positive"));
                }
                Self::boxed(lower.clone(), upper.clone()).map(|_| ())
            }
            _ => Ok(()),
        }
    }
}

/// Sort-and-threshold projection onto `{λ ≥ 0, Σλ = 1}`.
fn project_simplex(x: &[f64]) -> Vec<f64> {
    let mut u = x.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &uk) in u.iter().enumerate() {
        cumsum += uk;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if uk - t > 0.0 {
            theta = t;
        }
    }
    x.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Length of the projection step, `‖x − Π_Q(x)‖`; zero means feasible.
pub fn projection_residual(set: &FeasibleSet, x: &[f64]) -> f64 {
    norm(
        &x.iter()
            .zip(set.project(x))
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>(),
    )
}

fn to_nullable(v: &[f64]) -> Vec<Option<f64>> {
    v.iter()
        .map(|x| if x.is_finite() { Some(*x) } else { None })
        .collect()
}

mod lower_bounds {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        super::to_nullable(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.unwrap_or(f64::NEG_INFINITY)).collect())
    }
}

mod upper_bounds {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &[f64], s: S) -> Result<S::Ok, S::Error> {
        super::to_nullable(v).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<f64>, D::Error> {
        let v: Vec<Option<f64>> = Vec::deserialize(d)?;
        Ok(v.into_iter().map(|x| x.unwrap_or(f64::INFINITY)).collect())
    }
}
