use growthopt::analysis::{
    bound_adjoint_smoothing, bound_agm_restart, bound_agm_restart_relaxed, bound_polyak_relative, bound_smoothing_restart,
    bound_two_rate_restart,
};
use growthopt::growth::{estimate_growth_constant, Sampler};
use growthopt::linalg::{dot, Matrix};
use growthopt::problem::catalog;
use growthopt::smoothing::{run_parametric_smoothing_restart, SmoothingFamily};
use growthopt::{Execution, FeasibleSet, ProblemInstance};
use proptest::prelude::*;

fn vec3() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-20.0..20.0f64, 3)
}

fn sets() -> Vec<FeasibleSet> {
    vec![
        FeasibleSet::full(3),
        FeasibleSet::ball(vec![1.0, -2.0, 0.5], 3.0).unwrap(),
        FeasibleSet::boxed(vec![-1.0, 0.0, 2.0], vec![1.0, 4.0, 2.5]).unwrap(),
        FeasibleSet::half_space(3, 1, 1.0).unwrap(),
        FeasibleSet::simplex(3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn projection_is_idempotent_and_obtuse(x in vec3(), y in vec3()) {
        for set in sets() {
            let px = set.project(&x);
            let ppx = set.project(&px);
            for (a, b) in px.iter().zip(&ppx) {
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
            }
            let py = set.project(&y);
            let lhs: Vec<f64> = x.iter().zip(&px).map(|(a, b)| a - b).collect();
            let rhs: Vec<f64> = py.iter().zip(&px).map(|(a, b)| a - b).collect();
            prop_assert!(dot(&lhs, &rhs) <= 1e-9, "{set:?}");
        }
    }

    #[test]
    fn piecewise_linear_subgradient_inequality(
        rows in prop::collection::vec(prop::collection::vec(-5.0..5.0f64, 3), 1..8),
        x in vec3(),
        y in vec3(),
    ) {
        let m = rows.len();
        let b: Vec<f64> = (0..m).map(|i| i as f64 * 0.3 - 1.0).collect();
        let p = ProblemInstance::piecewise_linear(Matrix::from_rows(rows).unwrap(), b, FeasibleSet::full(3), -1e6).unwrap();
        let g = p.first_order(&x);
        let d: Vec<f64> = y.iter().zip(&x).map(|(a, b)| a - b).collect();
        prop_assert!(p.value(&y) >= p.value(&x) + dot(&g, &d) - 1e-9);
        prop_assert!(dot(&g, &g).sqrt() <= p.lipschitz_m().unwrap() + 1e-9);
    }

    #[test]
    fn relaxed_agm_bound_dominates(
        g in 0.01..10.0f64, l in 0.01..10.0f64, dist0 in 0.0..1e4f64,
        opt_gap in 1e-3..1e3f64, frac in 0.0..1.0f64, eps_prime in 1e-4..10.0f64,
    ) {
        // Any start with f(x⁰) − f* ≤ (L/2)·dist0².
        let f0_gap = opt_gap + frac * 0.5 * l * dist0 * dist0;
        let exact = bound_agm_restart(g, l, f0_gap, opt_gap, eps_prime);
        let relaxed = bound_agm_restart_relaxed(g, l, dist0, opt_gap, eps_prime);
        prop_assert!(relaxed >= exact * (1.0 - 1e-12));
    }

    #[test]
    fn bounds_monotone(
        m in 0.1..10.0f64, g in 0.1..10.0f64, r in 0.0..1e6f64,
        eps_prime in 1e-3..10.0f64, bump in 1.0..3.0f64,
    ) {
        let two = |m: f64, g: f64, e: f64, r: f64| bound_two_rate_restart(m, g, e, r);
        prop_assert!(two(m * bump, g, eps_prime, r) >= two(m, g, eps_prime, r));
        prop_assert!(two(m, g * bump, eps_prime, r) >= two(m, g, eps_prime, r));
        prop_assert!(two(m, g, eps_prime, r * bump + 1.0) >= two(m, g, eps_prime, r));
        prop_assert!(two(m, g, eps_prime * bump, r) <= two(m, g, eps_prime, r));
        let sm = |g: f64, a: f64, e: f64, r: f64| bound_smoothing_restart(g, a, 0.7, e, r);
        prop_assert!(sm(g * bump, m, eps_prime, r) >= sm(g, m, eps_prime, r));
        prop_assert!(sm(g, m * bump, eps_prime, r) >= sm(g, m, eps_prime, r));
        prop_assert!(sm(g, m, eps_prime * bump, r) <= sm(g, m, eps_prime, r));
        let ad = |l: f64, e: f64, gap: f64| bound_adjoint_smoothing(g, l, 0.7, e, r, gap);
        prop_assert!(ad(m * bump, eps_prime, 1.0) >= ad(m, eps_prime, 1.0));
        prop_assert!(ad(m, eps_prime * bump, 1.0) <= ad(m, eps_prime, 1.0));
        prop_assert!(ad(m, eps_prime, bump) >= ad(m, eps_prime, 1.0));
        let ag = |l: f64, f0: f64, e: f64| bound_agm_restart(g, l, f0, 1.0, e);
        prop_assert!(ag(m * bump, 2.0, eps_prime) >= ag(m, 2.0, eps_prime));
        prop_assert!(ag(m, 2.0 * bump, eps_prime) >= ag(m, 2.0, eps_prime));
        prop_assert!(ag(m, 2.0, eps_prime * bump) <= ag(m, 2.0, eps_prime));
        // The Polyak bound has ln(ratio), so it is monotone in the ratio
        // only above zero.
        let po = |e: f64, r: f64| bound_polyak_relative(m, g, e, r);
        prop_assert!(po(eps_prime, r * bump + 1e-3) >= po(eps_prime, r + 1e-3));
        prop_assert!(po(eps_prime * bump, r + 1e-3) <= po(eps_prime, r + 1e-3));
    }

    #[test]
    fn growth_estimate_grows_with_samples(seed in any::<u64>(), n in 1usize..200, extra in 1usize..200) {
        let p = catalog::slab_2d().unwrap();
        let mk = |count| Sampler::Random { center: vec![0.0, 0.0], radius: 30.0, count, seed };
        let a = estimate_growth_constant(&p, &mk(n), Execution::Sequential).unwrap();
        let b = estimate_growth_constant(&p, &mk(n + extra), Execution::Parallel).unwrap();
        prop_assert!(b.g_lower >= a.g_lower);
        prop_assert_eq!(&b.running_max[..n], &a.running_max[..]);
    }

    #[test]
    fn smoothing_run_invariants(x0 in prop::collection::vec(-500.0..500.0f64, 3), eps_prime in 0.01..1.0f64) {
        let p = catalog::l1_norm(3).unwrap();
        let fam = SmoothingFamily::entropy(&p).unwrap();
        let run = run_parametric_smoothing_restart(&fam, &x0, eps_prime, 4_000, None).unwrap();
        for w in run.smoothing_params.windows(2) {
            prop_assert!(w[1].0 <= w[0].0 && w[1].1 <= w[0].1);
        }
        for ev in &run.restarts {
            prop_assert!(ev.f_next - p.f_slb() < 0.5 * (ev.f_start - p.f_slb()));
        }
        prop_assert!(run.iterates_computed.is_multiple_of(2));
    }
}

#[test]
fn parallel_and_sequential_maps_agree() {
    let items: Vec<Vec<f64>> = (0..500).map(|i| vec![i as f64, -(i as f64)]).collect();
    let p = catalog::slab_2d().unwrap();
    let a = Execution::Sequential.map(&items, |x| p.value(x).to_bits());
    let b = Execution::Parallel.map(&items, |x| p.value(x).to_bits());
    assert_eq!(a, b);
}
