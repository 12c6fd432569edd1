//! Iteration-bound formulas, bound-versus-observed reports and pointwise
//! envelope checks along solver traces.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::trace::{SolverRun, Stream};
use crate::{Error, Result};

/// Absolute constants of the iteration bounds, kept in one place.
pub mod constants {
    /// Two-step-size restart: `18 M²G² (2.7 ln(1 + r) + ((1+ε′)/ε′)²)`.
    pub const TWO_RATE_SCALE: f64 = 18.0;
    pub const TWO_RATE_LOG: f64 = 2.7;

    /// Polyak rule: `2 M²G² (1 + 2.9 ln r + 2.9 ln(1/ε′) + 6.8/ε′ + 2/ε′²)`.
    pub const POLYAK_SCALE: f64 = 2.0;
    pub const POLYAK_LOG: f64 = 2.9;
    pub const POLYAK_INV: f64 = 6.8;
    pub const POLYAK_INV_SQ: f64 = 2.0;

    /// Smoothing restart: `23 G√(ĀD̄) (1 + 1.42 ln(1 + r) + 2/ε′)`.
    pub const SMOOTHING_SCALE: f64 = 23.0;
    pub const SMOOTHING_LOG: f64 = 1.42;
    pub const SMOOTHING_INV: f64 = 2.0;

    /// AGM restart: `G√L (10 √(f(x⁰) − f_slb) + 12 √(f* − f_slb)/√ε′)`.
    pub const AGM_RESTART_START: f64 = 10.0;
    pub const AGM_RESTART_OPT: f64 = 12.0;

    /// Adjoint smoothing: `G√(LD̄) (22.7 + 32.7 ln(1 + r) + 32 √((f* − f_slb)/ε′))`.
    pub const ADJOINT_CONST: f64 = 22.7;
    pub const ADJOINT_LOG: f64 = 32.7;
    pub const ADJOINT_OPT: f64 = 32.0;

    /// Slack allowed on pointwise envelopes.
    pub const ENVELOPE_SLACK: f64 = 1e-9;
}

use constants::*;

/// Standard subgradient bound `M²D²/ε² − 1` for absolute accuracy `ε`.
pub fn bound_standard_subgradient(m: f64, dist0: f64, eps_abs: f64) -> f64 {
    m * m * dist0 * dist0 / (eps_abs * eps_abs) - 1.0
}

/// Two-step-size simultaneous restart; `ratio = (f(x⁰) − f*)/(f* − f_slb)`.
pub fn bound_two_rate_restart(m: f64, g: f64, eps_prime: f64, ratio: f64) -> f64 {
    let q = (1.0 + eps_prime) / eps_prime;
    TWO_RATE_SCALE * m * m * g * g * (TWO_RATE_LOG * ratio.ln_1p() + q * q)
}

/// Subgradient descent with the Polyak step when `f*` is known.
pub fn bound_polyak_relative(m: f64, g: f64, eps_prime: f64, ratio: f64) -> f64 {
    POLYAK_SCALE
        * m
        * m
        * g
        * g
        * (1.0
            + POLYAK_LOG * ratio.ln()
            + POLYAK_LOG * (1.0 / eps_prime).ln()
            + POLYAK_INV / eps_prime
            + POLYAK_INV_SQ / (eps_prime * eps_prime))
}

/// Parametric smoothing/restarting on a non-smooth objective.
pub fn bound_smoothing_restart(g: f64, a_bar: f64, d_bar: f64, eps_prime: f64, ratio: f64) -> f64 {
    SMOOTHING_SCALE * g * (a_bar * d_bar).sqrt() * (1.0 + SMOOTHING_LOG * ratio.ln_1p() + SMOOTHING_INV / eps_prime)
}

/// Standard smoothing bound `⌈√(8ĀD̄)·D/ε − 1⌉`.
pub fn bound_standard_smoothing(a_bar: f64, d_bar: f64, dist0: f64, eps_abs: f64) -> f64 {
    ((8.0 * a_bar * d_bar).sqrt() * dist0 / eps_abs - 1.0).ceil()
}

/// AGM with simple restarting; `f0_gap = f(x⁰) − f_slb`, `opt_gap = f* − f_slb`.
pub fn bound_agm_restart(g: f64, l: f64, f0_gap: f64, opt_gap: f64, eps_prime: f64) -> f64 {
    g * l.sqrt() * (AGM_RESTART_START * f0_gap.sqrt() + AGM_RESTART_OPT * opt_gap.sqrt() / eps_prime.sqrt())
}

/// Upper estimate of [`bound_agm_restart`] that separates the distance term,
/// using `f(x⁰) − f* ≤ (L/2) Dist(x⁰, Opt)²`.
pub fn bound_agm_restart_relaxed(g: f64, l: f64, dist0: f64, opt_gap: f64, eps_prime: f64) -> f64 {
    g * l.sqrt()
        * (AGM_RESTART_START * opt_gap.sqrt()
            + AGM_RESTART_START * (l / 2.0).sqrt() * dist0
            + AGM_RESTART_OPT * opt_gap.sqrt() / eps_prime.sqrt())
}

/// Standard AGM bound `√(2L)·D/√(ε′(f* − f_slb)) − 1`.
pub fn bound_standard_agm(l: f64, dist0: f64, eps_prime: f64, opt_gap: f64) -> f64 {
    (2.0 * l).sqrt() * dist0 / (eps_prime * opt_gap).sqrt() - 1.0
}

/// Parametric smoothing/restarting with adjoint extra-smoothing of a smooth
/// objective.
pub fn bound_adjoint_smoothing(g: f64, l: f64, d_bar: f64, eps_prime: f64, ratio: f64, opt_gap: f64) -> f64 {
    g * (l * d_bar).sqrt() * (ADJOINT_CONST + ADJOINT_LOG * ratio.ln_1p() + ADJOINT_OPT * (opt_gap / eps_prime).sqrt())
}

/// Identifier of a bound in reports; the serialized names are part of the
/// report format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BoundId {
    T4,
    T5,
    T6,
    T7,
    T8,
    Eq8,
    Eq17,
    Eq25,
}

impl BoundId {
    pub const ALL: [BoundId; 8] = [
        BoundId::T4,
        BoundId::T5,
        BoundId::T6,
        BoundId::T7,
        BoundId::T8,
        BoundId::Eq8,
        BoundId::Eq17,
        BoundId::Eq25,
    ];

    /// Input names the formula reads.
    pub fn required_inputs(self) -> &'static [&'static str] {
        match self {
            BoundId::T4 | BoundId::T5 => &["M", "G", "eps_prime", "f0_gap_ratio"],
            BoundId::T6 => &["G", "A_bar", "D_bar", "eps_prime", "f0_gap_ratio"],
            BoundId::T7 => &["G", "L", "f0_gap", "opt_gap", "eps_prime"],
            BoundId::T8 => &["G", "L", "D_bar", "eps_prime", "f0_gap_ratio", "opt_gap"],
            BoundId::Eq8 => &["M", "dist0", "eps_prime", "opt_gap"],
            BoundId::Eq17 => &["A_bar", "D_bar", "dist0", "eps_prime", "opt_gap"],
            BoundId::Eq25 => &["L", "dist0", "eps_prime", "opt_gap"],
        }
    }

    /// Standard bounds are "N ≥ expression" conditions, met by the smallest
    /// integer at or above the expression.
    fn is_threshold(self) -> bool {
        matches!(self, BoundId::Eq8 | BoundId::Eq17 | BoundId::Eq25)
    }

    /// Evaluates the formula. Standard bounds use the absolute accuracy
    /// `ε′(f* − f_slb)` equivalent to the relative target.
    pub fn evaluate(self, inputs: &BTreeMap<String, f64>) -> Result<f64> {
        let get = |k: &str| -> Result<f64> {
            inputs
                .get(k)
                .copied()
                .ok_or_else(|| Error::invalid(format!("bound {self} needs input {k:?}")))
        };
        for k in self.required_inputs() {
            let v = get(k)?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!("bound input {k} = {v} must be finite and nonnegative")));
            }
        }
        let eps_abs = || Ok::<f64, Error>(get("eps_prime")? * get("opt_gap")?);
        Ok(match self {
            BoundId::T4 => bound_two_rate_restart(get("M")?, get("G")?, get("eps_prime")?, get("f0_gap_ratio")?),
            BoundId::T5 => bound_polyak_relative(get("M")?, get("G")?, get("eps_prime")?, get("f0_gap_ratio")?),
            BoundId::T6 => bound_smoothing_restart(
                get("G")?,
                get("A_bar")?,
                get("D_bar")?,
                get("eps_prime")?,
                get("f0_gap_ratio")?,
            ),
            BoundId::T7 => bound_agm_restart(get("G")?, get("L")?, get("f0_gap")?, get("opt_gap")?, get("eps_prime")?),
            BoundId::T8 => bound_adjoint_smoothing(
                get("G")?,
                get("L")?,
                get("D_bar")?,
                get("eps_prime")?,
                get("f0_gap_ratio")?,
                get("opt_gap")?,
            ),
            BoundId::Eq8 => bound_standard_subgradient(get("M")?, get("dist0")?, eps_abs()?),
            BoundId::Eq17 => bound_standard_smoothing(get("A_bar")?, get("D_bar")?, get("dist0")?, eps_abs()?),
            BoundId::Eq25 => bound_standard_agm(get("L")?, get("dist0")?, get("eps_prime")?, get("opt_gap")?),
        })
    }

    pub fn admits(self, theoretical: f64, observed: u64) -> bool {
        if self.is_threshold() {
            observed as f64 <= theoretical.ceil().max(0.0)
        } else {
            observed as f64 <= theoretical
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A bound paired with the iterate count at first relative success.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub theorem: BoundId,
    pub inputs: BTreeMap<String, f64>,
    pub theoretical: f64,
    pub observed: u64,
    pub satisfied: bool,
}

impl BoundReport {
    pub fn new(theorem: BoundId, inputs: BTreeMap<String, f64>, theoretical: f64, observed: u64) -> Self {
        BoundReport {
            theorem,
            inputs,
            theoretical,
            observed,
            satisfied: theorem.admits(theoretical, observed),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Builds an input map from name/value pairs.
pub fn inputs(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// Pairs the run's first-success iterate count with the bound. A run that
/// never reached the target yields [`Error::BudgetExhausted`].
pub fn compare_report(run: &SolverRun, theorem: BoundId, inputs: BTreeMap<String, f64>) -> Result<BoundReport> {
    let observed = run.first_success.ok_or(Error::BudgetExhausted)?;
    let theoretical = theorem.evaluate(&inputs)?;
    Ok(BoundReport::new(theorem, inputs, theoretical, observed))
}

/// Pointwise guarantees along a single-stream trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Envelope {
    /// `f_b^k ≤ f* + (D₀² + M²Σα²)/(2Σα)` with sums over steps `0..=k`.
    StepSum,
    /// `f_b^k ≤ f* + M·D₀/√(k+1)` for Polyak steps.
    Polyak,
    /// `f(x^k) − f* ≤ 2L·D₀²/(k+1)²` for the accelerated method.
    Accelerated,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnvelopeInputs {
    pub f_star: Option<f64>,
    pub m: Option<f64>,
    pub l: Option<f64>,
    pub dist0: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeOutcome {
    pub holds: bool,
    /// Position in the single-stream trace of the first violation.
    pub first_violation: Option<usize>,
    /// Smallest `bound − value` seen.
    pub min_slack: f64,
}

pub fn envelope_check(run: &SolverRun, envelope: Envelope, inp: EnvelopeInputs) -> Result<EnvelopeOutcome> {
    let f_star = inp.f_star.ok_or(Error::MissingCertificate("f_star"))?;
    let d0 = inp.dist0.ok_or(Error::MissingCertificate("dist_to_opt"))?;
    let records: Vec<_> = run.records(Stream::Single).collect();
    if records.is_empty() {
        return Err(Error::invalid("envelope check needs a nonempty single-stream trace"));
    }
    let mut out = EnvelopeOutcome {
        holds: true,
        first_violation: None,
        min_slack: f64::INFINITY,
    };
    let mut note = |idx: usize, slack: f64| {
        out.min_slack = out.min_slack.min(slack);
        if slack < -ENVELOPE_SLACK && out.first_violation.is_none() {
            out.holds = false;
            out.first_violation = Some(idx);
        }
    };
    match envelope {
        Envelope::StepSum => {
            let m = inp.m.ok_or(Error::MissingCertificate("lipschitz_M"))?;
            let (mut s1, mut s2, mut fb) = (0.0, 0.0, f64::INFINITY);
            for (idx, r) in records.iter().enumerate() {
                fb = fb.min(r.f);
                let Some(a) = r.step else { continue };
                s1 += a;
                s2 += a * a;
                if s1 > 0.0 {
                    note(idx, f_star + (d0 * d0 + m * m * s2) / (2.0 * s1) - fb);
                }
            }
        }
        Envelope::Polyak => {
            let m = inp.m.ok_or(Error::MissingCertificate("lipschitz_M"))?;
            let mut fb = f64::INFINITY;
            for (idx, r) in records.iter().enumerate() {
                fb = fb.min(r.f);
                note(idx, f_star + m * d0 / ((idx + 1) as f64).sqrt() - fb);
            }
        }
        Envelope::Accelerated => {
            let l = inp.l.ok_or(Error::MissingCertificate("lipschitz_L"))?;
            for (idx, r) in records.iter().enumerate() {
                let k1 = (idx + 1) as f64;
                note(idx, 2.0 * l * d0 * d0 / (k1 * k1) - (r.f - f_star));
            }
        }
    }
    Ok(out)
}
