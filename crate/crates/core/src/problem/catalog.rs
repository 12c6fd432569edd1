//! Test problems with analytically certified `f*`, `Opt`, Lipschitz and
//! growth constants.
//!
//! Every `growth_G` attached here is the exact supremum of
//! `Dist(x, Opt)/(f(x) − f_slb)` over `Q` or a proven upper bound on it; the
//! derivation is noted on each constructor.

use std::f64::consts::SQRT_2;

use super::{FeasibleSet, Metadata, Objective, PNorm, ProblemInstance};
use crate::linalg::{norm, Matrix};
use crate::Result;

/// A catalog problem plus a ray along which the distance to `Opt` grows
/// linearly, used to generate cold starts.
#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub name: String,
    pub problem: ProblemInstance,
    pub anchor: Vec<f64>,
    pub direction: Vec<f64>,
}

impl CatalogEntry {
    fn new(name: impl Into<String>, problem: ProblemInstance, anchor: Vec<f64>, direction: Vec<f64>) -> Self {
        let n = norm(&direction);
        CatalogEntry {
            name: name.into(),
            problem,
            anchor,
            direction: direction.into_iter().map(|d| d / n).collect(),
        }
    }

    /// `Π_Q(anchor + dist · direction)`. On unconstrained entries the result
    /// is exactly `dist` away from `Opt`.
    pub fn start_at_distance(&self, dist: f64) -> Vec<f64> {
        let x: Vec<f64> = self
            .anchor
            .iter()
            .zip(&self.direction)
            .map(|(a, d)| a + dist * d)
            .collect();
        self.problem.project(&x)
    }
}

fn pwl(rows: Vec<Vec<f64>>, b: Vec<f64>, set: FeasibleSet, f_slb: f64, certs: Metadata) -> Result<ProblemInstance> {
    let p = ProblemInstance::piecewise_linear(Matrix::from_rows(rows)?, b, set, f_slb)?;
    let meta = Metadata {
        lipschitz_m: p.lipschitz_m(),
        ..certs
    };
    p.with_metadata(meta)
}

fn point(x: Vec<f64>) -> Result<FeasibleSet> {
    FeasibleSet::boxed(x.clone(), x)
}

/// `|x|` on ℝ with `f_slb = −1`. `G = sup |x|/(|x| + 1) = 1`.
pub fn abs_value() -> Result<ProblemInstance> {
    pwl(
        vec![vec![1.0], vec![-1.0]],
        vec![0.0, 0.0],
        FeasibleSet::full(1),
        -1.0,
        Metadata {
            f_star: Some(0.0),
            growth_g: Some(1.0),
            opt_set: Some(point(vec![0.0])?),
            ..Metadata::default()
        },
    )
}

/// `max(|x₁| − 1, |x₂|)` on ℝ² with `f_slb = −1`; `Opt = [−1, 1] × {0}`.
///
/// With `u = (|x₁| − 1)⁺` and `v = |x₂|`, `Dist = √(u² + v²) ≤ √2 max(u, v)`
/// and `f ≥ max(u, v)`, so the ratio stays below `√2` and approaches it along
/// `u = v → ∞`: `G = √2`.
pub fn slab_2d() -> Result<ProblemInstance> {
    pwl(
        vec![
            vec![1.0, 0.0],
            vec![-1.0, 0.0],
            vec![0.0, 1.0],
            vec![0.0, -1.0],
        ],
        vec![-1.0, -1.0, 0.0, 0.0],
        FeasibleSet::full(2),
        -1.0,
        Metadata {
            f_star: Some(0.0),
            growth_g: Some(SQRT_2),
            opt_set: Some(FeasibleSet::boxed(vec![-1.0, 0.0], vec![1.0, 0.0])?),
            ..Metadata::default()
        },
    )
}

/// `‖x‖₁` on ℝⁿ as the maximum of `2ⁿ` sign patterns, `f_slb = −1`.
/// `‖x‖₂ ≤ ‖x‖₁` gives `G = 1` (approached along a coordinate axis).
pub fn l1_norm(n: usize) -> Result<ProblemInstance> {
    let rows: Vec<Vec<f64>> = (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { -1.0 } else { 1.0 })
                .collect()
        })
        .collect();
    let m = rows.len();
    pwl(
        rows,
        vec![0.0; m],
        FeasibleSet::full(n),
        -1.0,
        Metadata {
            f_star: Some(0.0),
            growth_g: Some(1.0),
            opt_set: Some(point(vec![0.0; n])?),
            ..Metadata::default()
        },
    )
}

/// `‖x‖∞` on ℝⁿ with `f_slb = −1`. `‖x‖₂ ≤ √n ‖x‖∞` with equality on the
/// diagonal, so `G = √n`.
pub fn linf_norm(n: usize) -> Result<ProblemInstance> {
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1.0, -1.0] {
            let mut r = vec![0.0; n];
            r[i] = s;
            rows.push(r);
        }
    }
    pwl(
        rows,
        vec![0.0; 2 * n],
        FeasibleSet::full(n),
        -1.0,
        Metadata {
            f_star: Some(0.0),
            growth_g: Some((n as f64).sqrt()),
            opt_set: Some(point(vec![0.0; n])?),
            ..Metadata::default()
        },
    )
}

/// `2|x₁| + |x₂| + ½` on ℝ² with `f_slb = 0`, so `f* − f_slb = ½`.
/// `2|x₁| + |x₂| ≥ ‖x‖₁ ≥ ‖x‖₂` keeps the ratio below 1, and it tends to 1
/// along the `x₂` axis: `G = 1`.
pub fn weighted_l1_offset() -> Result<ProblemInstance> {
    pwl(
        vec![
            vec![2.0, 1.0],
            vec![2.0, -1.0],
            vec![-2.0, 1.0],
            vec![-2.0, -1.0],
        ],
        vec![0.5; 4],
        FeasibleSet::full(2),
        0.0,
        Metadata {
            f_star: Some(0.5),
            growth_g: Some(1.0),
            opt_set: Some(point(vec![0.0, 0.0])?),
            ..Metadata::default()
        },
    )
}

/// `|x₁| + |x₂|` on the box `[1, 3] × [−2, 2]` with `f_slb = 0`; the optimum
/// is `(1, 0)` with `f* = 1`.
///
/// `‖x − (1,0)‖ / (x₁ + |x₂|)` is quasiconvex on each orthant piece of the
/// box (its sublevel sets are second-order cones intersected with the box),
/// so the supremum is at a vertex: `(1, ±2)` gives `2/3`, `(3, ±2)` gives
/// `√8/5`. `G = 2/3`.
pub fn boxed_l1() -> Result<ProblemInstance> {
    pwl(
        vec![
            vec![1.0, 1.0],
            vec![1.0, -1.0],
            vec![-1.0, 1.0],
            vec![-1.0, -1.0],
        ],
        vec![0.0; 4],
        FeasibleSet::boxed(vec![1.0, -2.0], vec![3.0, 2.0])?,
        0.0,
        Metadata {
            f_star: Some(1.0),
            growth_g: Some(2.0 / 3.0),
            opt_set: Some(point(vec![1.0, 0.0])?),
            ..Metadata::default()
        },
    )
}

/// `½x²` on ℝ with `f_slb = −1`: `G = 1/√2`, `L = 1`.
pub fn half_square() -> Result<ProblemInstance> {
    ProblemInstance::least_squares(Matrix::identity(1), vec![0.0], 0.0, PNorm::L2, 2.0)?
        .with_f_slb(-1.0)?
        .certify_quadratic()
}

/// `½(β² + (β − 2)²)`: `f* = 1` at `β = 1`, `G = ½`, `L = 2`.
pub fn two_point_fit() -> Result<ProblemInstance> {
    let x = Matrix::from_rows(vec![vec![1.0], vec![1.0]])?;
    ProblemInstance::least_squares(x, vec![0.0, 2.0], 0.0, PNorm::L2, 2.0)?.certify_quadratic()
}

/// `½(β − 2)² + β²`: `f* = 4/3` at `β = 2/3`, `L = 3`.
pub fn ridge_1d() -> Result<ProblemInstance> {
    ProblemInstance::least_squares(Matrix::identity(1), vec![2.0], 1.0, PNorm::L2, 2.0)?.certify_quadratic()
}

/// Ridge regression with `X = diag(1, 2, 3)`, `y = (1, 1, 1)`, `λ = ½`.
pub fn ridge_diag3() -> Result<ProblemInstance> {
    let x = Matrix::from_rows(vec![
        vec![1.0, 0.0, 0.0],
        vec![0.0, 2.0, 0.0],
        vec![0.0, 0.0, 3.0],
    ])?;
    ProblemInstance::least_squares(x, vec![1.0, 1.0, 1.0], 0.5, PNorm::L2, 2.0)?.certify_quadratic()
}

/// `ln cosh(c·x)` written as `ln((e^{cx} + e^{−cx})/2)`, the simplex/entropy
/// maximum with `A = [c; −c]`, `f_slb = −1`.
///
/// `ln cosh u ≥ |u| − ln 2` gives `|x|/(f + 1) < 1/c`, approached as
/// `|x| → ∞`: `G = 1/c`. `L = ‖A‖² = 2c²`.
pub fn log_cosh(c: f64) -> Result<ProblemInstance> {
    let a = Matrix::from_rows(vec![vec![c], vec![-c]])?;
    let l = a.spectral_norm(1e-13).powi(2);
    ProblemInstance::new(
        Objective::LogSumExp {
            a,
            b: vec![0.0, 0.0],
            temperature: 1.0,
        },
        FeasibleSet::full(1),
        -1.0,
        Metadata {
            f_star: Some(0.0),
            lipschitz_l: Some(l),
            growth_g: Some(1.0 / c),
            opt_set: Some(point(vec![0.0])?),
            ..Metadata::default()
        },
    )
}

/// `ln((1/n) Σᵢ cosh xᵢ)` on ℝⁿ with `A = [I; −I]`, `f* = 0` at the origin
/// and `f_slb = −1 − ln(2n)`.
///
/// With `s = ‖x‖∞`, `f ≥ ln(cosh(s)/n) ≥ s − ln(2n)`, so
/// `f − f_slb ≥ s + 1` and `‖x‖₂/(f − f_slb) < √n s/(s + 1) < √n`:
/// `G ≤ √n`. `L = ‖A‖² = 2`.
pub fn log_mean_cosh(n: usize) -> Result<ProblemInstance> {
    let mut rows = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = 1.0;
        rows.push(r);
    }
    for i in 0..n {
        let mut r = vec![0.0; n];
        r[i] = -1.0;
        rows.push(r);
    }
    let a = Matrix::from_rows(rows)?;
    let l = a.spectral_norm(1e-13).powi(2);
    ProblemInstance::new(
        Objective::LogSumExp {
            a,
            b: vec![0.0; 2 * n],
            temperature: 1.0,
        },
        FeasibleSet::full(n),
        -1.0 - (2.0 * n as f64).ln(),
        Metadata {
            f_star: Some(0.0),
            lipschitz_l: Some(l),
            growth_g: Some((n as f64).sqrt()),
            opt_set: Some(point(vec![0.0; n])?),
            ..Metadata::default()
        },
    )
}

/// Logistic loss on a small non-separable data set; `f*` is not certified.
pub fn logistic_small() -> Result<ProblemInstance> {
    ProblemInstance::logistic(Matrix::from_rows(vec![
        vec![1.0, 0.0],
        vec![-1.0, 0.5],
        vec![0.0, 1.0],
        vec![0.3, -1.0],
        vec![-0.5, -0.5],
    ])?)
}

/// Certified non-smooth instances used by the subgradient and entropy
/// smoothing acceptance checks.
pub fn nonsmooth_matrix() -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        CatalogEntry::new("abs", abs_value()?, vec![0.0], vec![1.0]),
        CatalogEntry::new("slab2", slab_2d()?, vec![1.0, 0.0], vec![1.0, 1.0]),
        CatalogEntry::new("l1_3", l1_norm(3)?, vec![0.0; 3], vec![1.0, 2.0, -1.0]),
        CatalogEntry::new("linf_3", linf_norm(3)?, vec![0.0; 3], vec![1.0, 1.0, 1.0]),
        CatalogEntry::new("wl1_offset", weighted_l1_offset()?, vec![0.0, 0.0], vec![1.0, -3.0]),
        CatalogEntry::new("boxed_l1", boxed_l1()?, vec![1.0, 0.0], vec![1.0, 1.0]),
    ])
}

/// Certified smooth instances for the accelerated gradient checks.
pub fn smooth_matrix() -> Result<Vec<CatalogEntry>> {
    let ridge3 = ridge_diag3()?;
    let opt3 = ridge3.nearest_optimum(&[0.0; 3]).expect("certified");
    Ok(vec![
        CatalogEntry::new("half_square", half_square()?, vec![0.0], vec![1.0]),
        CatalogEntry::new("two_point_fit", two_point_fit()?, vec![1.0], vec![-1.0]),
        CatalogEntry::new("ridge_1d", ridge_1d()?, vec![2.0 / 3.0], vec![1.0]),
        CatalogEntry::new("ridge_diag3", ridge3, opt3, vec![1.0, 1.0, 1.0]),
    ])
}

/// Smooth instances carrying the simplex/entropy maximum representation.
pub fn adjoint_matrix() -> Result<Vec<CatalogEntry>> {
    Ok(vec![
        CatalogEntry::new("log_cosh_1", log_cosh(1.0)?, vec![0.0], vec![1.0]),
        CatalogEntry::new("log_cosh_2", log_cosh(2.0)?, vec![0.0], vec![-1.0]),
        CatalogEntry::new("log_mean_cosh_2", log_mean_cosh(2)?, vec![0.0, 0.0], vec![1.0, 0.5]),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    /// Dense-grid check of `f*`, `Opt` and `G` for the two-dimensional slab
    /// problem over `[−5, 5]²`.
    #[test]
    fn slab_certificates_on_grid() {
        let p = slab_2d().unwrap();
        let g = p.growth_g().unwrap();
        let mut fmin = f64::INFINITY;
        let mut gmax: f64 = 0.0;
        let n = 1001;
        for i in 0..n {
            for j in 0..n {
                let x = [-5.0 + 10.0 * i as f64 / (n - 1) as f64, -5.0 + 10.0 * j as f64 / (n - 1) as f64];
                let f = p.value(&x);
                fmin = fmin.min(f);
                let d = p.dist_to_opt(&x).unwrap();
                assert_eq!(d == 0.0, f == 0.0, "Opt mismatch at {x:?}");
                gmax = gmax.max(d / (f - p.f_slb()));
            }
        }
        assert_eq!(fmin, 0.0);
        assert!(gmax <= g);
        assert!(gmax > 1.13, "grid supremum {gmax}");
    }

    #[test]
    fn certificates_dominate_sampled_ratios() {
        let mut entries = nonsmooth_matrix().unwrap();
        entries.extend(smooth_matrix().unwrap());
        entries.extend(adjoint_matrix().unwrap());
        let mut rng = SplitMix64::new(3);
        for e in &entries {
            let p = &e.problem;
            let fs = p.f_star().unwrap();
            let g = p.growth_g().unwrap();
            for k in 0..20_000 {
                let scale = 10f64.powi(k % 7 - 2);
                let raw: Vec<f64> = (0..p.dim()).map(|_| scale * rng.uniform(-1.0, 1.0)).collect();
                let x = p.project(&raw);
                let f = p.value(&x);
                assert!(f >= fs - 1e-12, "{}: f below f* at {x:?}", e.name);
                let ratio = p.dist_to_opt(&x).unwrap() / (f - p.f_slb());
                assert!(ratio <= g * (1.0 + 1e-12), "{}: ratio {ratio} > G {g}", e.name);
                if let Some(m) = p.lipschitz_m() {
                    assert!(crate::linalg::norm(&p.first_order(&x)) <= m + 1e-9);
                }
            }
            let opt = p.nearest_optimum(&e.anchor).unwrap();
            assert!((p.value(&opt) - fs).abs() < 1e-12, "{}", e.name);
        }
    }

    #[test]
    fn cold_starts_have_requested_distance() {
        for e in nonsmooth_matrix().unwrap().iter().filter(|e| e.problem.set().is_full()) {
            for d in [10.0, 1e3] {
                let x0 = e.start_at_distance(d);
                let got = e.problem.dist_to_opt(&x0).unwrap();
                assert!((got - d).abs() <= 1e-9 * d, "{}: {got} vs {d}", e.name);
            }
        }
    }
}
