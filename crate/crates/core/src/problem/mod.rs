//! Problem oracles, feasible sets, tolerances and certified test problems.

pub mod catalog;
mod doc;
mod objective;
mod set;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::linalg::Matrix;
use crate::{Error, Result};

pub use doc::{ProblemDoc, ProblemKind, SmoothingKind, SmoothingSpec};
pub use objective::{log_mean_exp, softmax, Objective, PNorm};
pub use set::{projection_residual, FeasibleSet};

/// Relative accuracy `ε′` together with its absolute form `ε = ε′/(1+ε′)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeTolerance {
    eps_prime: f64,
    eps: f64,
}

impl RelativeTolerance {
    pub fn new(eps_prime: f64) -> Result<Self> {
        if !(eps_prime > 0.0) || !eps_prime.is_finite() {
            return Err(Error::invalid(format!("eps_prime must be positive and finite, got {eps_prime}")));
        }
        Ok(RelativeTolerance {
            eps_prime,
            eps: eps_prime / (1.0 + eps_prime),
        })
    }

    pub fn eps_prime(&self) -> f64 {
        self.eps_prime
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Whether `value` is an `ε′`-relative solution value.
    pub fn is_met(&self, value: f64, f_star: f64, f_slb: f64) -> bool {
        relative_gap(value, f_star, f_slb) <= self.eps_prime
    }
}

/// `(f − f*)/(f* − f_slb)`
pub fn relative_gap(value: f64, f_star: f64, f_slb: f64) -> f64 {
    (value - f_star) / (f_star - f_slb)
}

/// Certified facts about a problem instance. Every field is optional.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    /// Set when `f_star` came from a high-accuracy reference run rather than
    /// a closed form.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub f_star_derived: bool,
    #[serde(rename = "lipschitz_M", default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_m: Option<f64>,
    #[serde(rename = "lipschitz_L", default, skip_serializing_if = "Option::is_none")]
    pub lipschitz_l: Option<f64>,
    /// Upper bound on the growth constant for the instance's `f_slb`.
    #[serde(rename = "growth_G", default, skip_serializing_if = "Option::is_none")]
    pub growth_g: Option<f64>,
    /// The optimal solution set, when it has an exact projection. Drives
    /// `dist_to_opt`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub opt_set: Option<FeasibleSet>,
}

/// An objective on a feasible set, with its strict lower bound and whatever
/// certificates are known. Cheap to clone and safe to share across threads.
#[derive(Debug, Clone)]
pub struct ProblemInstance {
    objective: Arc<Objective>,
    set: FeasibleSet,
    f_slb: f64,
    meta: Metadata,
}

impl ProblemInstance {
    pub fn new(objective: Objective, set: FeasibleSet, f_slb: f64, meta: Metadata) -> Result<Self> {
        let p = ProblemInstance {
            objective: Arc::new(objective),
            set,
            f_slb,
            meta,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.dim();
        if n == 0 {
            return Err(Error::invalid("dimension must be positive"));
        }
        self.set.validate()?;
        if self.set.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.set.dim(),
            });
        }
        if !self.f_slb.is_finite() {
            return Err(Error::invalid("f_slb must be finite"));
        }
        if let Some(f_star) = self.meta.f_star {
            if !(self.f_slb < f_star) {
                return Err(Error::NotStrictLowerBound {
                    f_slb: self.f_slb,
                    f_star,
                });
            }
        }
        if let Some(opt) = &self.meta.opt_set {
            opt.validate()?;
            if opt.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: opt.dim(),
                });
            }
        }
        for (name, v) in [
            ("lipschitz_M", self.meta.lipschitz_m),
            ("lipschitz_L", self.meta.lipschitz_l),
            ("growth_G", self.meta.growth_g),
        ] {
            if let Some(v) = v {
                if !(v > 0.0) || !v.is_finite() {
                    return Err(Error::invalid(format!("{name} must be positive and finite, got {v}")));
                }
            }
        }
        Ok(())
    }

    /// `f(x) = maxᵢ (aᵢᵀx + bᵢ)` on `set`, with `M = maxᵢ ‖aᵢ‖` attached.
    pub fn piecewise_linear(a: Matrix, b: Vec<f64>, set: FeasibleSet, f_slb: f64) -> Result<Self> {
        if b.len() != a.rows() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                got: b.len(),
            });
        }
        if b.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("offsets must be finite"));
        }
        let meta = Metadata {
            lipschitz_m: positive(a.max_row_norm()),
            ..Metadata::default()
        };
        Self::new(Objective::PiecewiseLinear { a, b }, set, f_slb, meta)
    }

    /// `f(β) = ½‖y − Xβ‖² + λ‖β‖_p^r` on ℝⁿ with `f_slb = 0`. `L` is attached
    /// whenever the regulariser is absent or is `λ‖β‖₂²`.
    pub fn least_squares(x: Matrix, y: Vec<f64>, lambda: f64, p_norm: PNorm, r: f64) -> Result<Self> {
        if y.len() != x.rows() {
            return Err(Error::DimensionMismatch {
                expected: x.rows(),
                got: y.len(),
            });
        }
        if !(lambda >= 0.0) || !(r >= 1.0) {
            return Err(Error::invalid("least squares needs lambda >= 0 and r >= 1"));
        }
        let quadratic = lambda == 0.0 || (p_norm == PNorm::L2 && r == 2.0);
        let lipschitz_l = if quadratic {
            positive(x.spectral_norm(1e-13).powi(2) + 2.0 * lambda)
        } else {
            None
        };
        let n = x.cols();
        let meta = Metadata {
            lipschitz_l,
            ..Metadata::default()
        };
        Self::new(
            Objective::LeastSquares {
                x,
                y,
                lambda,
                p_norm,
                r,
            },
            FeasibleSet::full(n),
            0.0,
            meta,
        )
    }

    /// Mean logistic loss on ℝⁿ with `f_slb = 0` and `L = ‖A‖²/(4m)`.
    pub fn logistic(a: Matrix) -> Result<Self> {
        let n = a.cols();
        let l = a.spectral_norm(1e-13).powi(2) / (4.0 * a.rows() as f64);
        let meta = Metadata {
            lipschitz_l: positive(l),
            ..Metadata::default()
        };
        Self::new(Objective::Logistic { a }, FeasibleSet::full(n), 0.0, meta)
    }

    /// `f(x₁, x₂) = x₂²/x₁` on `{x₁ ≥ 1}` with `f* = 0`, `f_slb = −1` and
    /// `Opt = {(x₁, 0) : x₁ ≥ 1}`. Its growth constant is infinite.
    pub fn counterexample() -> Result<Self> {
        let opt = FeasibleSet::boxed(vec![1.0, 0.0], vec![f64::INFINITY, 0.0])?;
        let meta = Metadata {
            f_star: Some(0.0),
            opt_set: Some(opt),
            ..Metadata::default()
        };
        Self::new(
            Objective::Counterexample,
            FeasibleSet::half_space(2, 0, 1.0)?,
            -1.0,
            meta,
        )
    }

    /// Replaces `f_slb`, re-checking strictness against a known `f*`.
    pub fn with_f_slb(mut self, f_slb: f64) -> Result<Self> {
        self.f_slb = f_slb;
        self.validate()?;
        Ok(self)
    }

    pub fn with_metadata(mut self, meta: Metadata) -> Result<Self> {
        self.meta = meta;
        self.validate()?;
        Ok(self)
    }

    /// Closed-form certificates for a quadratic least-squares instance with
    /// positive definite Hessian `H = XᵀX + 2λI`: the minimiser, `f*`, and
    /// `G = 1/√(2 λ_min(H) (f* − f_slb))`, which is exact for a quadratic
    /// whose minimum is attained at an interior point.
    pub fn certify_quadratic(self) -> Result<Self> {
        let (x, y, lambda) = match self.objective.as_ref() {
            Objective::LeastSquares {
                x,
                y,
                lambda,
                p_norm,
                r,
            } if *lambda == 0.0 || (*p_norm == PNorm::L2 && *r == 2.0) => (x, y, *lambda),
            _ => {
                return Err(Error::Incompatible(
                    "closed-form certificates need a quadratic least-squares objective".into(),
                ))
            }
        };
        let mut h = x.gram().to_rows();
        for (i, row) in h.iter_mut().enumerate() {
            row[i] += 2.0 * lambda;
        }
        let h = Matrix::from_rows(h)?;
        let beta = h.solve_spd(&x.tmul_vec(y))?;
        let f_star = self.objective.value(&beta);
        let h_min = h.min_eigenvalue_sym(1e-15);
        let mut meta = self.meta.clone();
        meta.f_star = Some(f_star);
        meta.f_star_derived = false;
        meta.opt_set = Some(FeasibleSet::boxed(beta.clone(), beta)?);
        meta.growth_g = if h_min > 0.0 && f_star > self.f_slb {
            Some(1.0 / (2.0 * h_min * (f_star - self.f_slb)).sqrt())
        } else {
            None
        };
        self.with_metadata(meta)
    }

    pub fn objective(&self) -> &Objective {
        &self.objective
    }

    pub fn set(&self) -> &FeasibleSet {
        &self.set
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    pub fn f_slb(&self) -> f64 {
        self.f_slb
    }

    pub fn metadata(&self) -> &Metadata {
        &self.meta
    }

    pub fn f_star(&self) -> Option<f64> {
        self.meta.f_star
    }

    pub fn lipschitz_m(&self) -> Option<f64> {
        self.meta.lipschitz_m
    }

    pub fn lipschitz_l(&self) -> Option<f64> {
        self.meta.lipschitz_l
    }

    pub fn growth_g(&self) -> Option<f64> {
        self.meta.growth_g
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        self.objective.value(x)
    }

    pub fn first_order(&self, x: &[f64]) -> Vec<f64> {
        self.objective.first_order(x)
    }

    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        self.set.project(x)
    }

    /// `Dist(x, Opt)` when the optimal set is certified.
    pub fn dist_to_opt(&self, x: &[f64]) -> Option<f64> {
        self.meta.opt_set.as_ref().map(|o| o.distance(x))
    }

    /// A nearest optimal point, when the optimal set is certified.
    pub fn nearest_optimum(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.meta.opt_set.as_ref().map(|o| o.project(x))
    }

    /// `(f(x) − f*)/(f* − f_slb)`; `None` without a certified `f*`.
    pub fn relative_gap(&self, x: &[f64]) -> Option<f64> {
        self.meta
            .f_star
            .map(|fs| relative_gap(self.value(x), fs, self.f_slb))
    }

    pub fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("point must be finite"));
        }
        if !self.set.contains(x, 1e-9) {
            return Err(Error::invalid("start point is not feasible; project it first"));
        }
        Ok(())
    }
}

fn positive(v: f64) -> Option<f64> {
    (v > 0.0 && v.is_finite()).then_some(v)
}
