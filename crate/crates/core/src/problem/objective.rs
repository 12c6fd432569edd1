use serde::{Deserialize, Serialize};

use crate::linalg::{dot, norm, Matrix};
use crate::{Error, Result};

/// Which `ℓ_p` norm the least-squares regulariser uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub enum PNorm {
    L1,
    L2,
}

impl TryFrom<u8> for PNorm {
    type Error = Error;

    fn try_from(p: u8) -> Result<Self> {
        match p {
            1 => Ok(PNorm::L1),
            2 => Ok(PNorm::L2),
            _ => Err(Error::invalid(format!("p_norm must be 1 or 2, got {p}"))),
        }
    }
}

impl From<PNorm> for u8 {
    fn from(p: PNorm) -> u8 {
        match p {
            PNorm::L1 => 1,
            PNorm::L2 => 2,
        }
    }
}

/// Objective function together with its first-order oracle.
///
/// All variants are pure functions of `x`.
#[derive(Debug, Clone, PartialEq)]
pub enum Objective {
    /// `f(x) = maxᵢ (aᵢᵀx + bᵢ)`; the oracle returns the row of the smallest
    /// maximising index.
    PiecewiseLinear { a: Matrix, b: Vec<f64> },
    /// `f(x) = τ ln((1/m) Σᵢ exp((aᵢᵀx + bᵢ)/τ))`, the entropy-regularised
    /// maximum over the simplex with weight `τ` on the shifted entropy.
    LogSumExp {
        a: Matrix,
        b: Vec<f64>,
        temperature: f64,
    },
    /// `f(β) = ½‖y − Xβ‖² + λ‖β‖_p^r`
    LeastSquares {
        x: Matrix,
        y: Vec<f64>,
        lambda: f64,
        p_norm: PNorm,
        r: f64,
    },
    /// `f(x) = (1/m) Σᵢ ln(1 + exp(−aᵢᵀx))`
    Logistic { a: Matrix },
    /// `f(x₁, x₂) = x₂²/x₁` on `x₁ ≥ 1`.
    Counterexample,
}

impl Objective {
    pub fn dim(&self) -> usize {
        match self {
            Objective::PiecewiseLinear { a, .. }
            | Objective::LogSumExp { a, .. }
            | Objective::Logistic { a } => a.cols(),
            Objective::LeastSquares { x, .. } => x.cols(),
            Objective::Counterexample => 2,
        }
    }

    /// Whether the objective is differentiable everywhere on its domain.
    pub fn is_smooth(&self) -> bool {
        match self {
            Objective::PiecewiseLinear { a, .. } => a.rows() == 1,
            Objective::LeastSquares {
                lambda, p_norm, r, ..
            } => *lambda == 0.0 || (*p_norm == PNorm::L2 && *r > 1.0),
            _ => true,
        }
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        match self {
            Objective::PiecewiseLinear { a, b } => a
                .row_iter()
                .zip(b)
                .map(|(r, bi)| dot(r, x) + bi)
                .fold(f64::NEG_INFINITY, f64::max),
            Objective::LogSumExp { a, b, temperature } => {
                let z = affine(a, b, x);
                log_mean_exp(&z, *temperature)
            }
            Objective::LeastSquares {
                x: xm,
                y,
                lambda,
                p_norm,
                r,
            } => {
                let res: Vec<f64> = xm.mul_vec(x).iter().zip(y).map(|(p, yi)| p - yi).collect();
                0.5 * dot(&res, &res) + lambda * p_norm_value(*p_norm, x).powf(*r)
            }
            Objective::Logistic { a } => {
                let m = a.rows() as f64;
                a.row_iter().map(|r| softplus(-dot(r, x))).sum::<f64>() / m
            }
            Objective::Counterexample => x[1] * x[1] / x[0],
        }
    }

    /// Subgradient (non-smooth case) or gradient (smooth case) at `x`.
    pub fn first_order(&self, x: &[f64]) -> Vec<f64> {
        match self {
            Objective::PiecewiseLinear { a, b } => {
                let i = argmax_piece(a, b, x);
                a.row(i).to_vec()
            }
            Objective::LogSumExp { a, b, temperature } => {
                let z = affine(a, b, x);
                a.tmul_vec(&softmax(&z, *temperature))
            }
            Objective::LeastSquares {
                x: xm,
                y,
                lambda,
                p_norm,
                r,
            } => {
                let res: Vec<f64> = xm.mul_vec(x).iter().zip(y).map(|(p, yi)| p - yi).collect();
                let mut g = xm.tmul_vec(&res);
                if *lambda != 0.0 {
                    let reg = p_norm_gradient(*p_norm, *r, x);
                    for (gi, ri) in g.iter_mut().zip(reg) {
                        *gi += lambda * ri;
                    }
                }
                g
            }
            Objective::Logistic { a } => {
                let m = a.rows() as f64;
                let w: Vec<f64> = a
                    .row_iter()
                    .map(|r| -sigmoid(-dot(r, x)) / m)
                    .collect();
                a.tmul_vec(&w)
            }
            Objective::Counterexample => {
                let (x1, x2) = (x[0], x[1]);
                vec![-x2 * x2 / (x1 * x1), 2.0 * x2 / x1]
            }
        }
    }

    /// Maximising weights `λ̃` of the simplex representation, for the
    /// log-sum-exp family.
    pub fn dual_weights(&self, x: &[f64]) -> Option<Vec<f64>> {
        match self {
            Objective::LogSumExp { a, b, temperature } => {
                Some(softmax(&affine(a, b, x), *temperature))
            }
            _ => None,
        }
    }
}

pub(crate) fn affine(a: &Matrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    a.row_iter().zip(b).map(|(r, bi)| dot(r, x) + bi).collect()
}

/// Smallest index attaining `maxᵢ aᵢᵀx + bᵢ`.
pub(crate) fn argmax_piece(a: &Matrix, b: &[f64], x: &[f64]) -> usize {
    let mut best = (0, f64::NEG_INFINITY);
    for (i, (r, bi)) in a.row_iter().zip(b).enumerate() {
        let v = dot(r, x) + bi;
        if v > best.1 {
            best = (i, v);
        }
    }
    best.0
}

/// `τ ln((1/m) Σ exp(zᵢ/τ))`, evaluated after subtracting the maximum.
pub fn log_mean_exp(z: &[f64], tau: f64) -> f64 {
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = z.iter().map(|zi| ((zi - zmax) / tau).exp()).sum();
    zmax + tau * (s / z.len() as f64).ln()
}

pub fn softmax(z: &[f64], tau: f64) -> Vec<f64> {
    let zmax = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|zi| ((zi - zmax) / tau).exp()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|v| v / s).collect()
}

fn softplus(t: f64) -> f64 {
    if t > 0.0 {
        t + (-t).exp().ln_1p()
    } else {
        t.exp().ln_1p()
    }
}

fn sigmoid(t: f64) -> f64 {
    if t >= 0.0 {
        1.0 / (1.0 + (-t).exp())
    } else {
        let e = t.exp();
        e / (1.0 + e)
    }
}

fn p_norm_value(p: PNorm, x: &[f64]) -> f64 {
    match p {
        PNorm::L1 => x.iter().map(|v| v.abs()).sum(),
        PNorm::L2 => norm(x),
    }
}

/// A subgradient of `‖x‖_p^r`; zero at the origin.
fn p_norm_gradient(p: PNorm, r: f64, x: &[f64]) -> Vec<f64> {
    let nrm = p_norm_value(p, x);
    if nrm == 0.0 {
        return vec![0.0; x.len()];
    }
    let outer = r * nrm.powf(r - 1.0);
    match p {
        PNorm::L1 => x.iter().map(|v| outer * sign(*v)).collect(),
        PNorm::L2 => x.iter().map(|v| outer * v / nrm).collect(),
    }
}

fn sign(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn m(rows: Vec<Vec<f64>>) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn tie_breaks_to_smallest_index() {
        let f = Objective::PiecewiseLinear {
            a: m(vec![vec![2.0], vec![-1.0]]),
            b: vec![0.0, 3.0],
        };
        assert_eq!(f.value(&[1.0]), 2.0);
        assert_eq!(f.first_order(&[1.0]), vec![2.0]);
    }

    #[test]
    fn log_mean_exp_is_stable() {
        // |x| smoothed at x = 10, μ = 0.1: 10 + 0.1 ln((1 + e^-200)/2)
        let v = log_mean_exp(&[10.0, -10.0], 0.1);
        assert_relative_eq!(v, 10.0 - 0.1 * 2f64.ln(), epsilon = 1e-12);
        assert!(log_mean_exp(&[1e4, -1e4], 1e-3).is_finite());
    }

    #[test]
    fn counterexample_gradient() {
        let f = Objective::Counterexample;
        assert_eq!(f.value(&[1.0, 1.0]), 1.0);
        assert_eq!(f.first_order(&[1.0, 1.0]), vec![-1.0, 2.0]);
    }

    fn fd_gradient(f: &Objective, x: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|i| {
                let mut xp = x.to_vec();
                let mut xm = x.to_vec();
                xp[i] += h;
                xm[i] -= h;
                (f.value(&xp) - f.value(&xm)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn smooth_gradients_match_finite_differences() {
        let a = m(vec![vec![1.0, 2.0], vec![-0.5, 1.0], vec![0.3, -2.0]]);
        let fs = [
            Objective::LogSumExp {
                a: a.clone(),
                b: vec![0.1, -0.2, 0.0],
                temperature: 0.7,
            },
            Objective::Logistic { a: a.clone() },
            Objective::LeastSquares {
                x: a.clone(),
                y: vec![1.0, 0.0, -1.0],
                lambda: 0.3,
                p_norm: PNorm::L2,
                r: 2.0,
            },
        ];
        let x = [0.4, -0.9];
        for f in &fs {
            let g = f.first_order(&x);
            let fd = fd_gradient(f, &x);
            for (u, v) in g.iter().zip(&fd) {
                assert_relative_eq!(u, v, epsilon = 1e-6);
            }
        }
    }
}
