//! Projected subgradient descent and the two-step-size simultaneous restart
//! scheme.

use crate::linalg::{axpy, norm};
use crate::problem::{ProblemInstance, RelativeTolerance};
use crate::trace::{Recorder, SolverRun, StopCriterion, Stream, Termination};
use crate::{Error, Result};

pub use crate::analysis::bound_polyak_relative;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSizeRule {
    /// `α = ε/‖g‖²` for an absolute target accuracy `ε`.
    ConstantEpsilon { eps: f64 },
    /// `α = (f(x) − f*)/‖g‖²`, clamped at zero.
    Polyak { f_star: f64 },
    /// `α = R/(√(N+1)‖g‖)` for a distance estimate `R` and horizon `N`.
    Normalized { r: f64, n: u64 },
    Fixed { alpha: f64 },
}

impl StepSizeRule {
    pub fn alpha(&self, f: f64, g_norm: f64) -> f64 {
        match *self {
            StepSizeRule::ConstantEpsilon { eps } => eps / (g_norm * g_norm),
            StepSizeRule::Polyak { f_star } => ((f - f_star) / (g_norm * g_norm)).max(0.0),
            StepSizeRule::Normalized { r, n } => r / (((n + 1) as f64).sqrt() * g_norm),
            StepSizeRule::Fixed { alpha } => alpha,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepSizeRule::ConstantEpsilon { eps } => eps > 0.0 && eps.is_finite(),
            StepSizeRule::Polyak { f_star } => f_star.is_finite(),
            StepSizeRule::Normalized { r, .. } => r > 0.0 && r.is_finite(),
            StepSizeRule::Fixed { alpha } => alpha >= 0.0 && alpha.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid step-size rule {self:?}")))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdmStep {
    pub x_next: Vec<f64>,
    pub g: Vec<f64>,
    pub alpha: f64,
}

/// One projected subgradient step. A zero subgradient certifies optimality
/// and is reported as [`Error::ZeroSubgradient`].
pub fn sdm_step(problem: &ProblemInstance, x: &[f64], rule: StepSizeRule) -> Result<SdmStep> {
    let g = problem.first_order(x);
    let g_norm = norm(&g);
    if g_norm == 0.0 {
        return Err(Error::ZeroSubgradient);
    }
    let alpha = rule.alpha(problem.value(x), g_norm);
    let x_next = problem.project(&axpy(x, -alpha, &g));
    Ok(SdmStep { x_next, g, alpha })
}

/// Projected subgradient descent from `x0` for at most `budget` iterates.
///
/// Every record carries the step taken from it, so step-sum envelopes can be
/// evaluated along the trace.
pub fn run_subgradient(
    problem: &ProblemInstance,
    x0: &[f64],
    rule: StepSizeRule,
    budget: u64,
    stop: Option<StopCriterion>,
) -> Result<SolverRun> {
    problem.check_point(x0)?;
    rule.validate()?;
    let f0 = problem.value(x0);
    let mut rec = Recorder::new("sdm", problem.f_slb(), x0, f0, stop);
    rec.start_outer(f0);
    rec.record(1, 0, Stream::Single, x0, f0);
    let mut x = x0.to_vec();
    let mut k = 0;
    loop {
        if rec.done() {
            return Ok(rec.finish(Termination::ToleranceMet));
        }
        let step = match sdm_step(problem, &x, rule) {
            Ok(s) => s,
            Err(Error::ZeroSubgradient) => return Ok(rec.finish(Termination::ZeroSubgradient)),
            Err(e) => return Err(e),
        };
        rec.annotate_step(step.alpha, norm(&step.g));
        if step.alpha == 0.0 && matches!(rule, StepSizeRule::Polyak { .. }) {
            return Ok(rec.finish(Termination::ToleranceMet));
        }
        if !rec.fits(1, budget) {
            return Ok(rec.finish(Termination::BudgetExhausted));
        }
        rec.count(1);
        k += 1;
        x = step.x_next;
        let f = problem.value(&x);
        rec.record(1, k, Stream::Single, &x, f);
    }
}

/// Constants of the two-step-size restart scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RestartConfig3 {
    pub b: f64,
    pub f: f64,
    pub eps_bar_prime: f64,
}

impl Default for RestartConfig3 {
    fn default() -> Self {
        RestartConfig3 {
            b: (-0.5f64).exp(),
            f: 0.5f64.exp(),
            eps_bar_prime: 0.9,
        }
    }
}

impl RestartConfig3 {
    pub fn eps_bar(&self) -> f64 {
        self.eps_bar_prime / (1.0 + self.eps_bar_prime)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b > 0.0 && self.b < 1.0 && self.f > 1.0 / (2.0 * self.b) && self.eps_bar_prime > 0.0 {
            Ok(())
        } else {
            Err(Error::invalid(format!("restart constants violate B in (0,1), F > 1/(2B): {self:?}")))
        }
    }

    /// Start ratio `(f(x_{i,0}) − f_slb)/(f* − f_slb)` above which an outer
    /// iteration must finish within `V` inner iterations.
    pub fn cap_threshold(&self) -> f64 {
        (1.0 + self.eps_bar_prime) / self.b
    }
}

/// The per-outer-iteration caps `(U, V)` for relative accuracy `ε′` and the
/// fixed secondary accuracy `ε̄′`.
pub fn diagnostics_caps_alg3(m: f64, g: f64, eps_prime: f64, config: RestartConfig3) -> Result<(u64, u64)> {
    if !(m > 0.0 && g > 0.0) {
        return Err(Error::invalid("M and G must be positive"));
    }
    let eps = RelativeTolerance::new(eps_prime)?.eps();
    let denom = config.b - 1.0 / (2.0 * config.f);
    let cap = |e: f64| (config.f * m * m * g * g / (2.0 * e * e * denom)).floor() as u64;
    Ok((cap(eps), cap(config.eps_bar())))
}

/// Two subgradient streams with step sizes scaled by `ε` and `ε̄`, restarted
/// together from whichever stream first drops below `B` times the current
/// gap to `f_slb`.
pub fn run_two_rate_restart(
    problem: &ProblemInstance,
    x0: &[f64],
    eps_prime: f64,
    budget: u64,
    stop: Option<StopCriterion>,
) -> Result<SolverRun> {
    run_two_rate_restart_with(problem, x0, eps_prime, budget, stop, RestartConfig3::default())
}

pub fn run_two_rate_restart_with(
    problem: &ProblemInstance,
    x0: &[f64],
    eps_prime: f64,
    budget: u64,
    stop: Option<StopCriterion>,
    config: RestartConfig3,
) -> Result<SolverRun> {
    problem.check_point(x0)?;
    config.validate()?;
    let eps = RelativeTolerance::new(eps_prime)?.eps();
    let eps_bar = config.eps_bar();
    let f_slb = problem.f_slb();
    let f0 = problem.value(x0);
    if !(f0 > f_slb) {
        return Err(Error::invalid(format!(
            "f(x0) = {f0} must exceed f_slb = {f_slb}; f_slb is not a strict lower bound"
        )));
    }

    let mut rec = Recorder::new("alg3", f_slb, x0, f0, stop);
    rec.start_outer(f0);
    rec.record(1, 0, Stream::A, x0, f0);
    rec.record(1, 0, Stream::B, x0, f0);
    let (mut xa, mut xb) = (x0.to_vec(), x0.to_vec());
    let (mut fs, mut fa, mut fb) = (f0, f0, f0);
    let (mut i, mut j) = (1usize, 0usize);
    loop {
        if rec.done() {
            return Ok(rec.finish(Termination::ToleranceMet));
        }
        let ra = (fa - f_slb) / (fs - f_slb);
        let rb = (fb - f_slb) / (fs - f_slb);
        if ra >= config.b && rb >= config.b {
            if !rec.fits(2, budget) {
                return Ok(rec.finish(Termination::BudgetExhausted));
            }
            let ga = problem.first_order(&xa);
            let gb = problem.first_order(&xb);
            let (na, nb) = (norm(&ga), norm(&gb));
            if na == 0.0 || nb == 0.0 {
                return Ok(rec.finish(Termination::ZeroSubgradient));
            }
            let alpha = eps * (fs - f_slb) / (config.f * na * na);
            let alpha_bar = eps_bar * (fs - f_slb) / (config.f * nb * nb);
            xa = problem.project(&axpy(&xa, -alpha, &ga));
            xb = problem.project(&axpy(&xb, -alpha_bar, &gb));
            fa = problem.value(&xa);
            fb = problem.value(&xb);
            rec.count(2);
            j += 1;
            rec.record(i, j, Stream::A, &xa, fa);
            rec.record(i, j, Stream::B, &xb, fb);
        } else {
            let (stream, x_next, f_next) = if ra < config.b {
                (Stream::A, xa.clone(), fa)
            } else {
                (Stream::B, xb.clone(), fb)
            };
            rec.restart(i, j, stream, fs, f_next);
            xa = x_next.clone();
            xb = x_next;
            fs = f_next;
            fa = f_next;
            fb = f_next;
            i += 1;
            j = 0;
            rec.start_outer(fs);
        }
    }
}
