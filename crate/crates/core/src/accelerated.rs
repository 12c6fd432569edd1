//! The accelerated gradient method and its ratio-test restart variant.

use crate::linalg::{axpy, dist, lerp};
use crate::problem::ProblemInstance;
use crate::trace::{Recorder, SolverRun, StopCriterion, Stream, Termination};
use crate::{Error, Result};

pub use crate::analysis::{bound_agm_restart, bound_standard_agm};

/// Ratio-test threshold of the simple restart scheme.
pub const RESTART_B: f64 = 0.5;
/// Analysis-only constant used in the per-outer-iteration caps.
pub const CAP_V: f64 = 0.25;

/// Positive root of `1/θ⁺² − 1/θ⁺ = 1/θ²`.
pub fn theta_next(theta: f64) -> f64 {
    2.0 / (1.0 + (1.0 + 4.0 / (theta * theta)).sqrt())
}

#[derive(Debug, Clone, PartialEq)]
pub struct AgmState {
    pub x: Vec<f64>,
    pub z: Vec<f64>,
    pub i: u64,
    pub theta: f64,
}

impl AgmState {
    pub fn new(x0: &[f64]) -> Self {
        AgmState {
            x: x0.to_vec(),
            z: x0.to_vec(),
            i: 0,
            theta: 1.0,
        }
    }
}

/// One step with the closed-form prox step `z⁺ = Π_Q(z − ∇f(y)/(θL))`.
pub fn agm_step(problem: &ProblemInstance, state: &AgmState, l: f64) -> AgmState {
    let th = state.theta;
    let y = lerp(&state.x, &state.z, th);
    let g = problem.first_order(&y);
    let z = problem.project(&axpy(&state.z, -1.0 / (th * l), &g));
    let x = lerp(&state.x, &z, th);
    AgmState {
        x,
        z,
        i: state.i + 1,
        theta: theta_next(th),
    }
}

fn check_l(l: f64) -> Result<()> {
    if l > 0.0 && l.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("L must be positive and finite, got {l}")))
    }
}

pub fn run_agm(
    problem: &ProblemInstance,
    x0: &[f64],
    l: f64,
    budget: u64,
    stop: Option<StopCriterion>,
) -> Result<SolverRun> {
    problem.check_point(x0)?;
    check_l(l)?;
    let f0 = problem.value(x0);
    let mut rec = Recorder::new("agm", problem.f_slb(), x0, f0, stop);
    rec.start_outer(f0);
    rec.record(1, 0, Stream::Single, x0, f0);
    let mut state = AgmState::new(x0);
    loop {
        if rec.done() {
            return Ok(rec.finish(Termination::ToleranceMet));
        }
        if !rec.fits(1, budget) {
            return Ok(rec.finish(Termination::BudgetExhausted));
        }
        state = agm_step(problem, &state, l);
        rec.count(1);
        let f = problem.value(&state.x);
        rec.record(1, state.i as usize, Stream::Single, &state.x, f);
    }
}

/// Restarts a fresh AGM stream at the current iterate whenever
/// `(f(x_{i,j}) − f_slb)/(f(x_{i,0}) − f_slb)` drops below one half.
pub fn run_agm_simple_restart(
    problem: &ProblemInstance,
    x0: &[f64],
    l: f64,
    budget: u64,
    stop: Option<StopCriterion>,
) -> Result<SolverRun> {
    problem.check_point(x0)?;
    check_l(l)?;
    let f_slb = problem.f_slb();
    let f0 = problem.value(x0);
    if !(f0 > f_slb) {
        return Err(Error::invalid(format!("f(x0) = {f0} must exceed f_slb = {f_slb}")));
    }
    let mut rec = Recorder::new("alg5", f_slb, x0, f0, stop);
    rec.start_outer(f0);
    rec.record(1, 0, Stream::Single, x0, f0);
    let mut state = AgmState::new(x0);
    let (mut fs, mut fx) = (f0, f0);
    let (mut i, mut j) = (1usize, 0usize);
    loop {
        if rec.done() {
            return Ok(rec.finish(Termination::ToleranceMet));
        }
        if (fx - f_slb) / (fs - f_slb) >= RESTART_B {
            if !rec.fits(1, budget) {
                return Ok(rec.finish(Termination::BudgetExhausted));
            }
            state = agm_step(problem, &state, l);
            rec.count(1);
            j += 1;
            fx = problem.value(&state.x);
            rec.record(i, j, Stream::Single, &state.x, fx);
        } else {
            rec.restart(i, j, Stream::Single, fs, fx);
            fs = fx;
            state = AgmState::new(&state.x);
            i += 1;
            j = 0;
            rec.start_outer(fs);
        }
    }
}

/// Caps `(Jᵢ, Iᵢ)` for an outer iteration starting at value `f_start`:
/// `⌈G√(2L(f_start − f_slb)/v) − 1⌉` and the same with `v ε′`.
pub fn diagnostics_caps_alg5(g: f64, l: f64, f_start_gap: f64, eps_prime: f64) -> (u64, u64) {
    let cap = |v: f64| (g * (2.0 * l * f_start_gap / v).sqrt() - 1.0).ceil().max(0.0) as u64;
    (cap(CAP_V), cap(CAP_V * eps_prime))
}

/// High-accuracy minimiser for smooth instances without a closed form:
/// AGM with gradient-based adaptive restarting, stopped once the
/// gradient-mapping norm `L‖x − Π_Q(x − ∇f(x)/L)‖` falls below `tol`.
/// Restarts are decided on gradients rather than values so that progress
/// below the resolution of `f` is still made.
pub fn reference_optimum(problem: &ProblemInstance, x0: &[f64], l: f64, tol: f64, max_iter: u64) -> Result<(Vec<f64>, f64)> {
    check_l(l)?;
    let mut state = AgmState::new(&problem.project(x0));
    for _ in 0..max_iter {
        let y = lerp(&state.x, &state.z, state.theta);
        let gy = problem.first_order(&y);
        let next = agm_step(problem, &state, l);
        let moved: Vec<f64> = next.x.iter().zip(&state.x).map(|(a, b)| a - b).collect();
        state = if crate::linalg::dot(&gy, &moved) > 0.0 {
            AgmState::new(&state.x)
        } else {
            next
        };
        let g = problem.first_order(&state.x);
        let mapped = problem.project(&axpy(&state.x, -1.0 / l, &g));
        if l * dist(&state.x, &mapped) <= tol {
            break;
        }
    }
    let f = problem.value(&state.x);
    Ok((state.x, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::catalog;
    use crate::linalg::norm;
    use crate::FeasibleSet;
    use approx::assert_relative_eq;

    #[test]
    fn theta_values() {
        let t1 = theta_next(1.0);
        assert_relative_eq!(t1, 2.0 / (1.0 + 5f64.sqrt()), epsilon = 1e-16);
        assert_relative_eq!(t1, 0.6180339887, epsilon = 1e-10);
        let t2 = theta_next(t1);
        assert_relative_eq!(t2, 0.4558867801, epsilon = 1e-10);
        assert!((1.0 / (t2 * t2) - 1.0 / t2 - 1.0 / (t1 * t1)).abs() < 1e-12);
    }

    #[test]
    fn unit_step_on_half_square() {
        let p = catalog::half_square().unwrap();
        let s = agm_step(&p, &AgmState::new(&[1.0]), 1.0);
        assert_eq!((s.x[0], s.z[0]), (0.0, 0.0));
        let ball = ProblemInstance::least_squares(crate::linalg::Matrix::identity(1), vec![0.0], 0.0, crate::problem::PNorm::L2, 2.0)
            .unwrap();
        let constrained = ProblemInstance::new(
            ball.objective().clone(),
            FeasibleSet::ball(vec![0.0], 0.5).unwrap(),
            -1.0,
            Default::default(),
        )
        .unwrap();
        let s = agm_step(&constrained, &AgmState::new(&[0.5]), 1.0);
        assert_eq!(s.x[0], 0.0);
    }

    /// Line-by-line transcription of the method for ½‖x‖² in 2-D, L = 2 so
    /// the iterates do not collapse after one step.
    #[test]
    fn two_steps_match_hand_transcription() {
        let p = ProblemInstance::least_squares(crate::linalg::Matrix::identity(2), vec![0.0, 0.0], 0.0, crate::problem::PNorm::L2, 2.0)
            .unwrap()
            .with_f_slb(-1.0)
            .unwrap();
        let l = 2.0;
        let (mut x, mut z, mut th) = ([1.0f64, 1.0], [1.0f64, 1.0], 1.0f64);
        for _ in 0..2 {
            let y = [(1.0 - th) * x[0] + th * z[0], (1.0 - th) * x[1] + th * z[1]];
            z = [z[0] - y[0] / (th * l), z[1] - y[1] / (th * l)];
            x = [(1.0 - th) * x[0] + th * z[0], (1.0 - th) * x[1] + th * z[1]];
            th = 2.0 / (1.0 + (1.0 + 4.0 / (th * th)).sqrt());
        }
        let mut s = AgmState::new(&[1.0, 1.0]);
        for _ in 0..2 {
            s = agm_step(&p, &s, l);
        }
        assert_eq!(s.x, x.to_vec());
        assert_eq!(s.z, z.to_vec());
        assert_eq!(s.theta, th);
    }

    #[test]
    fn alg5_half_square_single_step_restart() {
        let p = catalog::half_square().unwrap();
        let run = run_agm_simple_restart(&p, &[4.0], 1.0, 3, None).unwrap();
        let ev = &run.restarts[0];
        assert_eq!((ev.outer, ev.k), (1, 1));
        assert_eq!(ev.f_next, 0.0);
        assert!(ev.f_next < 3.5);
    }

    #[test]
    fn reruns_are_identical() {
        let p = catalog::ridge_diag3().unwrap();
        let a = run_agm(&p, &[5.0, -3.0, 2.0], p.lipschitz_l().unwrap(), 50, None).unwrap();
        let b = run_agm(&p, &[5.0, -3.0, 2.0], p.lipschitz_l().unwrap(), 50, None).unwrap();
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.best_point, b.best_point);
    }

    #[test]
    fn reference_optimum_matches_closed_form() {
        let p = catalog::ridge_diag3().unwrap();
        let (x, f) = reference_optimum(&p, &[10.0, 10.0, 10.0], p.lipschitz_l().unwrap(), 1e-13, 100_000).unwrap();
        let opt = p.nearest_optimum(&x).unwrap();
        assert!(crate::linalg::dist(&x, &opt) < 1e-10, "{x:?} {opt:?}");
        assert!((f - p.f_star().unwrap()).abs() < 1e-12);
        assert!(norm(&p.first_order(&x)) < 1e-12);
    }

    #[test]
    fn alg5_caps() {
        // G = 1/√2, L = 1, gap 8: ⌈√32 − 1⌉ = ⌈4.657⌉ and ⌈√(8/0.075) − 1⌉ = ⌈9.33⌉.
        let (j, i) = diagnostics_caps_alg5(1.0 / 2f64.sqrt(), 1.0, 8.0, 0.3);
        assert_eq!(j, 5);
        assert_eq!(i, 10);
    }
}
