use std::f64::consts::PI;

use uncertainty_core::dictionaries::{envelope, DictionaryId, Family};
use uncertainty_core::moments::{alpha, uncertainty_tol};
use uncertainty_core::ratpoly::{int, rat, to_f64, Polynomial};
use uncertainty_core::symmetry::{
    corollary_normalize, even_odd_split, example_cubic, modulus_split, reflections,
    theorem_bound_check, Axis, EXAMPLE_CUBIC_TOL,
};
use uncertainty_core::{bspline, PiecewisePoly};

fn u(f: &PiecewisePoly) -> f64 {
    uncertainty_tol(f, EXAMPLE_CUBIC_TOL).unwrap().to_f64()
}

fn close(got: f64, want: f64, tol: f64) -> bool {
    (got - want).abs() <= tol
}

/// `(1 − x²)(1 + x/2)` on `[−1, 1]`: lopsided but symmetric support.
fn lopsided() -> PiecewisePoly {
    let p = &Polynomial::from_ints(&[1, 0, -1]) * &Polynomial::new(vec![int(1), rat(1, 2)]);
    PiecewisePoly::single(int(-1), int(1), p).unwrap()
}

#[test]
fn cubic_origin_reflections() {
    let f = example_cubic();
    assert!(close(to_f64(&alpha(&f).unwrap()), 0.384209038102, 1e-8));
    assert!(close(u(&f), 0.328205910036, 1e-8));
    let p = reflections(&f, Axis::Origin).unwrap();
    assert!(close(u(&p.f_s), 0.488135390966, 1e-8), "{}", u(&p.f_s));
    assert!(close(u(&p.f_d), 1.064558791510, 1e-8), "{}", u(&p.f_d));
}

#[test]
fn cubic_barycentric_reflections() {
    let f = example_cubic();
    let p = reflections(&f, Axis::Barycenter).unwrap();
    assert!(close(u(&p.f_d), 0.365009365360, 1e-8), "{}", u(&p.f_d));
    // left half mirrored about α, integrated independently in rational arithmetic
    assert!(
        close(u(&p.f_s), 0.26732170974398395, 1e-12),
        "{}",
        u(&p.f_s)
    );
    let a = alpha(&f).unwrap();
    assert_eq!(p.f_s.support(), Some((int(-1), &a * int(2) + int(1))));
    assert_eq!(p.f_d.support(), Some((&a * int(2) - int(1), int(1))));
}

#[test]
fn cubic_derivative_split() {
    let s = even_odd_split(&example_cubic(), EXAMPLE_CUBIC_TOL).unwrap();
    assert!(close(to_f64(&s.u_even_norm_sq), 0.675886085, 1e-6));
    assert!(close(to_f64(&s.u_odd_norm_sq), 0.433013302, 1e-6));
    assert!(close(s.cross_term_float(), -1.526014699, 1e-6));
    assert!(close(
        s.cross_term_quad,
        s.cross_term_float(),
        1e-3 * s.cross_term_float().abs()
    ));
}

#[test]
fn cross_identity_on_several_functions() {
    let id = |f, n| DictionaryId::new(f, n).unwrap();
    let cases = [
        example_cubic(),
        PiecewisePoly::tent(),
        envelope(id(Family::G, 2)),
        envelope(id(Family::F, 3)),
        bspline::rect_p_explicit(3).unwrap(),
        lopsided(),
    ];
    for f in &cases {
        let s = even_odd_split(f, EXAMPLE_CUBIC_TOL).unwrap();
        let exact = 2.0 * PI * to_f64(&s.cross_term_exact);
        assert!(
            (s.cross_term_quad - exact).abs() <= 1e-3 * exact.abs(),
            "{f:?}: {} vs {exact}",
            s.cross_term_quad
        );
    }
    let even = even_odd_split(&envelope(id(Family::F, 2)), 0.0).unwrap();
    assert_eq!(even.u_even_norm_sq, int(0));
}

#[test]
fn uncentered_bound_fails_and_centered_bound_holds() {
    let f = example_cubic();
    let raw = theorem_bound_check(&f, false, EXAMPLE_CUBIC_TOL).unwrap();
    assert!(!raw.min_bound_holds);
    assert!(close(to_f64(&raw.u_f), 0.328205910036, 1e-8));
    assert!(close(to_f64(&raw.min_of_halves()), 0.488135390966, 1e-8));
    let centered = theorem_bound_check(&f, true, EXAMPLE_CUBIC_TOL).unwrap();
    assert!(centered.holds(), "{centered:?}");
    assert!(!centered.cs_equality_case);
    assert!(theorem_bound_check(&f, true, 0.0).is_err());
}

#[test]
fn corollary_preserves_uncertainty() {
    let f = example_cubic();
    let pair = reflections(&f, Axis::Barycenter).unwrap();
    let c = corollary_normalize(&pair, &int(1), EXAMPLE_CUBIC_TOL).unwrap();
    assert_eq!(
        c.u_s,
        Some(uncertainty_tol(&pair.f_s, EXAMPLE_CUBIC_TOL).unwrap())
    );
    assert_eq!(
        c.u_d,
        Some(uncertainty_tol(&pair.f_d, EXAMPLE_CUBIC_TOL).unwrap())
    );
    for psi in [c.psi_s.unwrap(), c.psi_d.unwrap()] {
        assert_eq!(psi.support(), Some((int(-1), int(1))));
        assert!(psi.is_even_about(&int(0), 0.0));
        assert!(psi.classify(EXAMPLE_CUBIC_TOL).class.is_plus_zero());
    }
    let tent = PiecewisePoly::tent();
    let t =
        corollary_normalize(&reflections(&tent, Axis::Barycenter).unwrap(), &int(1), 0.0).unwrap();
    assert_eq!(t.psi_s.as_ref(), Some(&tent));
    assert_eq!(t.psi_d.as_ref(), Some(&tent));
}

#[test]
fn corollary_with_one_empty_half() {
    // support [0, 2] reflected about 0: the left half is empty
    let f = PiecewisePoly::tent().shift_arg(&int(-1));
    let pair = uncertainty_core::symmetry::reflect_about(&f, &int(0)).unwrap();
    assert!(pair.f_s.is_zero());
    assert_eq!(pair.w, int(1));
    let c = corollary_normalize(&pair, &int(1), 0.0).unwrap();
    assert!(c.psi_s.is_none() && c.psi_d.is_some());
    assert_eq!(c.min(), c.u_d.unwrap());
}

#[test]
fn squared_modulus_split() {
    let grid: Vec<f64> = (0..200).map(|i| -30.0 + 0.3 * i as f64 + 1e-3).collect();
    for f in [example_cubic(), lopsided(), PiecewisePoly::rect()] {
        for (lhs, rhs) in modulus_split(&f, &grid).unwrap() {
            assert!((lhs - rhs).abs() <= 1e-10, "{lhs} vs {rhs}");
        }
    }
}
