//! Entropy smoothing families and the parametric smoothing/restarting method.
//!
//! Two families are supported. For a piecewise-linear maximum the smoothed
//! function is the log-mean-exp at temperature `μ`, with `D̄ = ln m` and
//! `L_μ = Ā/μ`, `Ā = maxᵢ ‖aᵢ‖²`. For a smooth log-mean-exp at base
//! temperature `τ` (entropy on the simplex, scaled by `τ`), extra-smoothing
//! raises the temperature to `τ(1 + μ)`, with `D̄ = τ ln m` and
//! `L_μ = L/(1 + μ)`, `L = ‖A‖²/τ`.

use serde::{Deserialize, Serialize};

use crate::accelerated::{agm_step, AgmState};
use crate::linalg::{dist, Matrix};
use crate::parallel::Execution;
use crate::problem::{FeasibleSet, Metadata, Objective, ProblemInstance};
use crate::trace::{Recorder, SolverRun, StopCriterion, Stream, Termination};
use crate::{Error, Result};

/// Ratio-test threshold of the smoothing/restart scheme.
pub const RESTART_B: f64 = 0.5;
/// Fraction of the current gap to `f_slb` spent on the smoothing error.
pub const SMOOTHING_T: f64 = 0.125;
/// Tolerance on the sampled sandwich inequality.
pub const SANDWICH_TOL: f64 = 1e-9;
/// Relative tolerance on sampled gradient difference quotients.
pub const LIPSCHITZ_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    NonsmoothNesterov,
    AdjointExtra,
}

/// `μ ln((1/m) Σ exp((aᵢᵀx + bᵢ)/μ))`.
pub fn entropy_smooth_pwl(a: &Matrix, b: &[f64], mu: f64) -> Result<Objective> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::invalid(format!("smoothing parameter must be positive, got {mu}")));
    }
    check_rows(a, b)?;
    Ok(Objective::LogSumExp {
        a: a.clone(),
        b: b.to_vec(),
        temperature: mu,
    })
}

/// Extra-smoothing of the temperature-`tau` log-mean-exp: the entropy term
/// is scaled by `1 + μ`. `μ = 0` reproduces the base function.
pub fn adjoint_extra_smooth(a: &Matrix, b: &[f64], tau: f64, mu: f64) -> Result<Objective> {
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::invalid(format!("extra-smoothing parameter must be nonnegative, got {mu}")));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid(format!("base temperature must be positive, got {tau}")));
    }
    check_rows(a, b)?;
    Ok(Objective::LogSumExp {
        a: a.clone(),
        b: b.to_vec(),
        temperature: tau * (1.0 + mu),
    })
}

fn check_rows(a: &Matrix, b: &[f64]) -> Result<()> {
    if a.rows() == b.len() {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            expected: a.rows(),
            got: b.len(),
        })
    }
}

/// A base objective with a certified one-parameter family of smooth
/// under-approximations `f − D̄μ ≤ f_μ ≤ f`.
#[derive(Debug, Clone)]
pub struct SmoothingFamily {
    kind: FamilyKind,
    base: ProblemInstance,
    a: Matrix,
    b: Vec<f64>,
    tau: f64,
    d_bar: f64,
    /// `Ā` for the non-smooth family, base `L` for the adjoint family.
    scale: f64,
}

impl SmoothingFamily {
    /// Entropy family of a piecewise-linear base with at least two pieces.
    pub fn entropy(base: &ProblemInstance) -> Result<Self> {
        let Objective::PiecewiseLinear { a, b } = base.objective() else {
            return Err(Error::Incompatible("entropy smoothing needs a piecewise-linear objective".into()));
        };
        if a.rows() < 2 {
            return Err(Error::invalid("a single affine piece is already smooth; D̄ = ln 1 = 0"));
        }
        let a_bar = a.max_row_norm().powi(2);
        if !(a_bar > 0.0) {
            return Err(Error::invalid("all pieces are constant"));
        }
        Ok(SmoothingFamily {
            kind: FamilyKind::NonsmoothNesterov,
            base: base.clone(),
            a: a.clone(),
            b: b.clone(),
            tau: 0.0,
            d_bar: (a.rows() as f64).ln(),
            scale: a_bar,
        })
    }

    /// Adjoint extra-smoothing family of a log-mean-exp base.
    pub fn adjoint_entropy(base: &ProblemInstance) -> Result<Self> {
        let Objective::LogSumExp { a, b, temperature } = base.objective() else {
            return Err(Error::Incompatible(
                "adjoint extra-smoothing needs a log-sum-exp objective".into(),
            ));
        };
        if a.rows() < 2 {
            return Err(Error::invalid("adjoint representation needs at least two rows"));
        }
        let l = a.spectral_norm(1e-10).powi(2) / temperature;
        if !(l > 0.0) {
            return Err(Error::invalid("zero matrix has no useful smoothing"));
        }
        Ok(SmoothingFamily {
            kind: FamilyKind::AdjointExtra,
            base: base.clone(),
            a: a.clone(),
            b: b.clone(),
            tau: *temperature,
            d_bar: temperature * (a.rows() as f64).ln(),
            scale: l,
        })
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn base(&self) -> &ProblemInstance {
        &self.base
    }

    pub fn d_bar(&self) -> f64 {
        self.d_bar
    }

    /// `Ā` (non-smooth family) or the base gradient Lipschitz constant `L`
    /// (adjoint family).
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn l_mu(&self, mu: f64) -> f64 {
        match self.kind {
            FamilyKind::NonsmoothNesterov => self.scale / mu,
            FamilyKind::AdjointExtra => self.scale / (1.0 + mu),
        }
    }

    /// `f_μ` on the base feasible set, with `L_μ` attached. Its strict lower
    /// bound is `f_slb − D̄μ`.
    pub fn smoothed(&self, mu: f64) -> Result<ProblemInstance> {
        let objective = match self.kind {
            FamilyKind::NonsmoothNesterov => entropy_smooth_pwl(&self.a, &self.b, mu)?,
            FamilyKind::AdjointExtra => adjoint_extra_smooth(&self.a, &self.b, self.tau, mu)?,
        };
        let meta = Metadata {
            lipschitz_l: Some(self.l_mu(mu)),
            ..Metadata::default()
        };
        ProblemInstance::new(objective, self.base.set().clone(), self.base.f_slb() - self.d_bar * mu, meta)
    }

    /// Largest violation of `f − D̄μ ≤ f_μ ≤ f` over `points`; the sandwich
    /// holds when this is at most [`SANDWICH_TOL`].
    pub fn sandwich_violation(&self, mu: f64, points: &[Vec<f64>], exec: Execution) -> Result<f64> {
        let fm = self.smoothed(mu)?;
        let v = exec.map(points, |x| {
            let (f, g) = (self.base.value(x), fm.value(x));
            (f - self.d_bar * mu - g).max(g - f)
        });
        Ok(v.into_iter().fold(f64::NEG_INFINITY, f64::max))
    }

    /// Largest sampled `‖∇f_μ(x) − ∇f_μ(y)‖/‖x − y‖` divided by `L_μ`.
    pub fn lipschitz_ratio(&self, mu: f64, pairs: &[(Vec<f64>, Vec<f64>)], exec: Execution) -> Result<f64> {
        let fm = self.smoothed(mu)?;
        let l = self.l_mu(mu);
        let v = exec.map(pairs, |(x, y)| {
            let d = dist(x, y);
            if d == 0.0 {
                0.0
            } else {
                dist(&fm.first_order(x), &fm.first_order(y)) / d / l
            }
        });
        Ok(v.into_iter().fold(0.0, f64::max))
    }
}

/// Caps `(T, U)` on inner iterations per outer iteration for the
/// non-smooth family: `⌈G√(2ĀD̄)/t − 1⌉` and `⌈G√(2ĀD̄)/(ε′t) − 1⌉`.
pub fn diagnostics_caps_alg4(g: f64, a_bar: f64, d_bar: f64, eps_prime: f64, t: f64) -> (u64, u64) {
    let base = g * (2.0 * a_bar * d_bar).sqrt() / t;
    let cap = |v: f64| (v - 1.0).ceil().max(0.0) as u64;
    (cap(base), cap(base / eps_prime))
}

/// Caps `(T, Iᵢ)` for the adjoint family: `⌈G√(2LD̄)/t − 1⌉` and
/// `⌈G√(2L(f(x_{i,0}) − f_slb)/(tε′)) − 1⌉`.
pub fn diagnostics_caps_adjoint(g: f64, l: f64, d_bar: f64, eps_prime: f64, t: f64, start_gap: f64) -> (u64, u64) {
    let cap = |v: f64| (v - 1.0).ceil().max(0.0) as u64;
    (
        cap(g * (2.0 * l * d_bar).sqrt() / t),
        cap(g * (2.0 * l * start_gap / (t * eps_prime)).sqrt()),
    )
}

/// Parametric smoothing/restarting. Each outer iteration sets
/// `μ¹ = t(f(x_{i,0}) − f_slb)/D̄` and `μ² = ε′μ¹`, then advances an AGM
/// stream on `f_{μ¹}` (stream `a`) and one on `f_{μ²}` (stream `b`) in
/// lock-step until the true value of stream `a` falls below half the
/// starting gap to `f_slb`.
pub fn run_parametric_smoothing_restart(
    family: &SmoothingFamily,
    x0: &[f64],
    eps_prime: f64,
    budget: u64,
    stop: Option<StopCriterion>,
) -> Result<SolverRun> {
    let base = family.base();
    base.check_point(x0)?;
    if !(eps_prime > 0.0) || !eps_prime.is_finite() {
        return Err(Error::invalid(format!("eps_prime must be positive, got {eps_prime}")));
    }
    let f_slb = base.f_slb();
    let f0 = base.value(x0);
    if !(f0 > f_slb) {
        return Err(Error::invalid(format!("f(x0) = {f0} must exceed f_slb = {f_slb}")));
    }
    let name = match family.kind() {
        FamilyKind::NonsmoothNesterov => "alg4_nonsmooth",
        FamilyKind::AdjointExtra => "alg4_adjoint",
    };
    let mut rec = Recorder::new(name, f_slb, x0, f0, stop);
    rec.record(1, 0, Stream::A, x0, f0);
    rec.record(1, 0, Stream::B, x0, f0);
    let mut start = x0.to_vec();
    let mut fs = f0;
    let mut i = 1usize;
    loop {
        let gap = fs - f_slb;
        let mu1 = SMOOTHING_T * gap / family.d_bar();
        let mu2 = eps_prime * mu1;
        rec.start_outer(fs);
        rec.smoothing_params(mu1, mu2);
        let (p1, p2) = (family.smoothed(mu1)?, family.smoothed(mu2)?);
        let (l1, l2) = (family.l_mu(mu1), family.l_mu(mu2));
        let mut sa = AgmState::new(&start);
        let mut sb = AgmState::new(&start);
        let mut fx = fs;
        let mut j = 0usize;
        loop {
            if rec.done() {
                return Ok(rec.finish(Termination::ToleranceMet));
            }
            if (fx - f_slb) / gap < RESTART_B {
                rec.restart(i, j, Stream::A, fs, fx);
                start = sa.x;
                fs = fx;
                i += 1;
                break;
            }
            if !rec.fits(2, budget) {
                return Ok(rec.finish(Termination::BudgetExhausted));
            }
            sa = agm_step(&p1, &sa, l1);
            sb = agm_step(&p2, &sb, l2);
            rec.count(2);
            j += 1;
            fx = base.value(&sa.x);
            let fy = base.value(&sb.x);
            rec.record(i, j, Stream::A, &sa.x, fx);
            rec.record(i, j, Stream::B, &sb.x, fy);
        }
    }
}

/// Deterministic sample of points of `set` near `center`: uniform in the
/// cube of half-width `radius`, then projected.
pub fn sample_points(set: &FeasibleSet, center: &[f64], radius: f64, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = crate::rng::SplitMix64::new(seed);
    (0..n)
        .map(|_| {
            let x: Vec<f64> = center.iter().map(|c| c + rng.uniform(-radius, radius)).collect();
            set.project(&x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{bound_adjoint_smoothing, bound_smoothing_restart};
    use crate::problem::catalog;
    use approx::assert_relative_eq;

    #[test]
    fn single_piece_is_reproduced() {
        let a = Matrix::from_rows(vec![vec![2.0, -1.0]]).unwrap();
        let o = entropy_smooth_pwl(&a, &[0.5], 0.3).unwrap();
        assert_relative_eq!(o.value(&[1.0, 4.0]), -1.5, epsilon = 1e-14);
        assert!(entropy_smooth_pwl(&a, &[0.5], 0.0).is_err());
    }

    #[test]
    fn abs_value_sandwich_points() {
        let a = Matrix::from_rows(vec![vec![1.0], vec![-1.0]]).unwrap();
        let o = entropy_smooth_pwl(&a, &[0.0, 0.0], 1.0).unwrap();
        assert_eq!(o.value(&[0.0]), 0.0);
        let o = entropy_smooth_pwl(&a, &[0.0, 0.0], 0.1).unwrap();
        let v = o.value(&[10.0]);
        assert!(v <= 10.0 && v >= 10.0 - 0.1 * 2f64.ln(), "{v}");
        // No overflow at tiny temperature.
        let o = entropy_smooth_pwl(&a, &[0.0, 0.0], 1e-6).unwrap();
        assert!(o.value(&[1e3]).is_finite());
    }

    #[test]
    fn adjoint_zero_is_base_and_one_doubles_temperature() {
        let p = catalog::log_cosh(1.0).unwrap();
        let fam = SmoothingFamily::adjoint_entropy(&p).unwrap();
        let f0 = fam.smoothed(0.0).unwrap();
        for x in [-3.0, 0.0, 0.4, 7.0] {
            assert_eq!(f0.value(&[x]), p.value(&[x]));
        }
        let f1 = fam.smoothed(1.0).unwrap();
        for x in [-3.0, 0.0, 0.4, 7.0] {
            let expected = 2.0 * (x / 2.0f64).cosh().ln();
            assert_relative_eq!(f1.value(&[x]), expected, epsilon = 1e-12);
        }
        let pts = sample_points(p.set(), &[0.0], 20.0, 1000, 3);
        assert!(fam.sandwich_violation(1.0, &pts, Execution::Parallel).unwrap() <= SANDWICH_TOL);
        assert!(fam.smoothed(-0.1).is_err());
    }

    #[test]
    fn adjoint_gradient_is_softmax_combination() {
        let p = catalog::log_mean_cosh(2).unwrap();
        let fam = SmoothingFamily::adjoint_entropy(&p).unwrap();
        let f = fam.smoothed(0.7).unwrap();
        for x in sample_points(p.set(), &[0.0, 0.0], 3.0, 100, 9) {
            let g = f.first_order(&x);
            for k in 0..2 {
                let h = 1e-6;
                let mut xp = x.clone();
                let mut xm = x.clone();
                xp[k] += h;
                xm[k] -= h;
                let fd = (f.value(&xp) - f.value(&xm)) / (2.0 * h);
                assert!((fd - g[k]).abs() <= 1e-5 * (1.0 + g[k].abs()), "{fd} vs {}", g[k]);
            }
        }
    }

    #[test]
    fn families_are_certified_on_samples() {
        let mut fams = Vec::new();
        for e in catalog::nonsmooth_matrix().unwrap() {
            if let Ok(f) = SmoothingFamily::entropy(&e.problem) {
                fams.push((e, f));
            }
        }
        for e in catalog::adjoint_matrix().unwrap() {
            let f = SmoothingFamily::adjoint_entropy(&e.problem).unwrap();
            fams.push((e, f));
        }
        for (e, fam) in &fams {
            let n = e.problem.dim();
            let pts = sample_points(e.problem.set(), &e.anchor, 10.0, 1000, 11);
            let pairs: Vec<_> = sample_points(e.problem.set(), &e.anchor, 10.0, 500, 12)
                .into_iter()
                .zip(sample_points(e.problem.set(), &vec![0.0; n], 10.0, 500, 13))
                .collect();
            for mu in [0.01, 0.3, 2.0] {
                assert!(fam.sandwich_violation(mu, &pts, Execution::Parallel).unwrap() <= SANDWICH_TOL, "{}", e.name);
                assert!(
                    fam.lipschitz_ratio(mu, &pairs, Execution::Parallel).unwrap() <= 1.0 + LIPSCHITZ_REL_TOL,
                    "{}",
                    e.name
                );
            }
        }
    }

    #[test]
    fn first_smoothing_parameters() {
        let p = catalog::abs_value().unwrap();
        let fam = SmoothingFamily::entropy(&p).unwrap();
        let run = run_parametric_smoothing_restart(&fam, &[4.0], 0.5, 2, None).unwrap();
        let (mu1, mu2) = run.smoothing_params[0];
        assert_relative_eq!(mu1, 0.125 * 5.0 / 2f64.ln(), epsilon = 1e-14);
        assert_relative_eq!(mu1, 0.9016844006, epsilon = 1e-9);
        assert_relative_eq!(mu2, 0.5 * mu1, epsilon = 1e-15);
    }

    #[test]
    fn caps_values() {
        assert_eq!(diagnostics_caps_alg4(1.0, 1.0, 1.0, 0.5, SMOOTHING_T), (11, 22));
        let (t, u) = diagnostics_caps_alg4(1.0, 1.0, 1.0, 1.0, SMOOTHING_T);
        assert_eq!(t, u);
    }

    #[test]
    fn nonsmooth_run_within_bound_with_contracting_restarts() {
        let p = catalog::abs_value().unwrap();
        let fam = SmoothingFamily::entropy(&p).unwrap();
        let eps_prime = 0.1;
        let run = run_parametric_smoothing_restart(&fam, &[1000.0], eps_prime, 100_000, Some(StopCriterion::new(0.0, eps_prime)))
            .unwrap();
        assert!(run.succeeded());
        let bound = bound_smoothing_restart(1.0, fam.scale(), fam.d_bar(), eps_prime, 1001.0);
        assert!((run.first_success.unwrap() as f64) <= bound);
        for ev in &run.restarts {
            assert!(ev.f_next + 1.0 < 0.5 * (ev.f_start + 1.0));
        }
        for w in run.smoothing_params.windows(2) {
            assert!(w[1].0 <= w[0].0 && w[1].1 <= w[0].1);
        }
    }

    #[test]
    fn adjoint_run_within_bound() {
        let p = catalog::log_cosh(2.0).unwrap();
        let fam = SmoothingFamily::adjoint_entropy(&p).unwrap();
        let eps_prime = 0.05;
        let f_star = p.f_star().unwrap();
        let x0 = [30.0];
        let run = run_parametric_smoothing_restart(&fam, &x0, eps_prime, 100_000, Some(StopCriterion::new(f_star, eps_prime)))
            .unwrap();
        assert!(run.succeeded());
        let opt_gap = f_star - p.f_slb();
        let ratio = (p.value(&x0) - f_star) / opt_gap;
        let bound = bound_adjoint_smoothing(p.growth_g().unwrap(), fam.scale(), fam.d_bar(), eps_prime, ratio, opt_gap);
        assert!((run.first_success.unwrap() as f64) <= bound);
    }
}
