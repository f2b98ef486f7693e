use hzmt_core::herglotz::{double_zeta, herglotz_f, higher_herglotz_f, phi};
use hzmt_core::mordell_tornheim::{theta, theta_direct, ThetaPoint};
use hzmt_core::numeric::{digamma, hurwitz_zeta, riemann_zeta};
use hzmt_core::verifier::{run_identities, run_suite, GridSpec, IdentityId, TolPolicy};
use hzmt_core::Context;
use proptest::prelude::*;

fn ctx() -> Context {
    Context::with_digits(25).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn two_term_relation_holds(x in 0.1f64..8.0) {
        let c = ctx();
        let tol = TolPolicy::default_for(&c);
        let r = hzmt_core::verifier::verify_fe2(&c, x, &tol).unwrap();
        prop_assert!(r.pass, "x={x} residual {}", r.abs_residual.to_f64());
    }

    #[test]
    fn digamma_recurrence(y in 0.05f64..50.0) {
        let c = ctx();
        let y = c.real(y);
        let a = digamma(&c, &y).unwrap().value;
        let b = digamma(&c, &(&y + 1)).unwrap().value;
        prop_assert!((b - a - y.recip()).abs().to_f64() < 1e-20);
    }

    #[test]
    fn hurwitz_shift(s in 1.1f64..6.0, a in 0.1f64..5.0) {
        let c = ctx();
        let (s, a) = (c.real(s), c.real(a));
        let h0 = hurwitz_zeta(&c, &s, &a).unwrap().value;
        let h1 = hurwitz_zeta(&c, &s, &(&a + 1)).unwrap().value;
        let d = (&h0 - &h1 - a.pow(&-s.clone())).abs().to_f64();
        prop_assert!(d < 1e-18 * h0.abs().to_f64().max(1.0));
    }

    #[test]
    fn theta_inversion_symmetry(r in 0.6f64..3.0, s in 0.6f64..3.0, t in 0.8f64..2.5, x in 0.3f64..3.0) {
        let c = ctx();
        let p = ThetaPoint::from_f64(&c, r, s, t, x).unwrap();
        prop_assume!(p.region_margin() >= 0.25);
        let a = theta(&c, &p).unwrap().value;
        let b = theta(&c, &p.inverted()).unwrap().value;
        let expect = b * c.real(x).pow(&-c.real(t));
        prop_assert!((&a - &expect).abs().to_f64() <= 1e-18 * a.abs().to_f64().max(1.0));
    }

    #[test]
    fn theta_is_decreasing_in_x_for_positive_exponents(r in 1.0f64..3.0, s in 1.0f64..3.0, t in 0.5f64..2.0, x in 0.3f64..3.0) {
        let c = ctx();
        let p = ThetaPoint::from_f64(&c, r, s, t, x).unwrap();
        let q = ThetaPoint::from_f64(&c, r, s, t, x * 1.5).unwrap();
        prop_assume!(p.region_margin() >= 0.25);
        let a = theta_direct(&c, &p).unwrap().value;
        let b = theta_direct(&c, &q).unwrap().value;
        prop_assert!(a > b);
    }

    #[test]
    fn higher_herglotz_dominated_by_first_term(x in 0.5f64..5.0) {
        // F_r(x) − ψ(x) → 0 as r grows
        let c = ctx();
        let xr = c.real(x);
        let f8 = higher_herglotz_f(&c, 8, &xr).unwrap().value;
        let p = digamma(&c, &xr).unwrap().value;
        let d = (f8 - p).abs().to_f64();
        prop_assert!(d < 0.02 * (1.0 + (2.0 * x).ln().abs()));
    }
}

#[test]
fn herglotz_f_at_one_is_finite_and_negative() {
    let c = ctx();
    let v = herglotz_f(&c, &c.one()).unwrap();
    assert!(v.converged);
    assert!(v.value.to_f64() < 0.0);
}

#[test]
fn double_zeta_sum_formula() {
    // ζ_D(2,1) = ζ(3)
    let c = ctx();
    let v = double_zeta(&c, &c.int(2), &c.one()).unwrap().value;
    let z3 = riemann_zeta(&c, &c.int(3)).unwrap().value;
    assert!((v - z3).abs().to_f64() < 1e-22);
}

#[test]
fn phi_rejects_nonpositive_x() {
    let c = ctx();
    assert!(phi(&c, &c.int(2), &c.zero()).is_err());
    assert!(phi(&c, &c.int(2), &c.real(-1.0)).is_err());
}

#[test]
fn suite_is_deterministic_and_complete() {
    let c = Context::default();
    let grid = GridSpec {
        x_values: vec![0.5, 2.0],
        r_values: vec![2, 3],
        z_values: vec![3],
        theta_points: vec![[2.0, 2.0, 1.0]],
        recursion_points: vec![[3.0, 3.0, 1.0, 1.5]],
        recursion_orders: vec![1],
        decomposition_z: vec![2.5],
        stuffle_pairs: vec![(2, 3)],
        ..GridSpec::default()
    };
    let tol = TolPolicy::default_for(&c);
    let a = run_suite(&c, &grid, &tol).unwrap();
    let b = run_suite(&c, &grid, &tol).unwrap();
    assert!(a.all_pass(), "{:?}", a.failures().map(|f| f.id).collect::<Vec<_>>());
    assert_eq!(a.results.len(), b.results.len());
    for (x, y) in a.results.iter().zip(&b.results) {
        assert_eq!(x.id, y.id);
        assert_eq!(x.lhs, y.lhs);
        assert_eq!(x.rhs, y.rhs);
    }
    for id in IdentityId::ALL {
        assert!(a.summary.contains_key(&id), "{id} missing from summary");
    }
}

#[test]
fn tighter_tolerance_never_adds_passes() {
    let c = Context::default();
    let grid = GridSpec { x_values: vec![0.5, 1.0, 3.0], ..GridSpec::default() };
    let ids = [IdentityId::Fe1, IdentityId::Fe2, IdentityId::GuinandFirst];
    let loose = run_identities(&c, &grid, &TolPolicy::with_tol(&c, c.real(1e-9)), &ids).unwrap();
    let tight = run_identities(&c, &grid, &TolPolicy::with_tol(&c, c.real(1e-40)), &ids).unwrap();
    let count = |r: &hzmt_core::verifier::SuiteReport| r.results.iter().filter(|x| x.pass).count();
    assert!(count(&tight) <= count(&loose));
    assert!(tight.results.iter().any(|r| !r.pass));
}

#[test]
fn degraded_precision_still_verifies_at_loose_tolerance() {
    let c = Context::with_digits(15).unwrap();
    assert!(c.precision().is_degraded());
    let grid = GridSpec { x_values: vec![0.5, 2.0], ..GridSpec::default() };
    let rep = run_identities(&c, &grid, &TolPolicy::default_for(&c), &[IdentityId::Fe2, IdentityId::Fe1]).unwrap();
    assert!(rep.all_pass());
}
