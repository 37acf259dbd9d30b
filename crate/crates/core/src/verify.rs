//! The reproduction checklist behind `uncert verify`: every reference value
//! and claim, recomputed and compared with a pinned tolerance.

use std::f64::consts::PI;
use std::fmt::Display;

use serde::Serialize;

use crate::bspline::{limit_check, rect_p_explicit, rect_p_recursive_sequence};
use crate::dictionaries::{closed_uncertainty, dict_table, verify_minimizer, DictionaryId, Family};
use crate::error::Result;
use crate::generate::{plus_zero, rng, seed_from_env, small_rational};
use crate::moments::{alpha, uncertainty, uncertainty_tol, AtomParams, ExtReal};
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{int, rat, to_f64, Rational};
use crate::spectrum::{atom_frequency_mean, f_n_energy, quad_freq_moment, Transform};
use crate::symmetry::{
    even_odd_split, example_cubic, reflect_about, reflections, theorem_bound_check, Axis,
    EXAMPLE_CUBIC_TOL,
};

pub const GROUPS: [&str; 5] = ["dict", "rect", "symmetry", "property", "spectrum"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckOutcome {
    pub group: &'static str,
    pub claim: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

struct Checks {
    group: &'static str,
    out: Vec<CheckOutcome>,
}

impl Checks {
    fn new(group: &'static str) -> Self {
        Checks {
            group,
            out: Vec::new(),
        }
    }

    fn push(&mut self, claim: &str, expected: String, got: String, pass: bool) {
        self.out.push(CheckOutcome {
            group: self.group,
            claim: claim.into(),
            expected,
            got,
            pass,
        });
    }

    fn fail(&mut self, claim: &str, expected: String, e: impl Display) {
        self.push(claim, expected, format!("error: {e}"), false);
    }

    fn exact<T: PartialEq + Display>(&mut self, claim: &str, expected: T, got: Result<T>) {
        match got {
            Ok(g) => {
                let pass = g == expected;
                self.push(claim, expected.to_string(), g.to_string(), pass);
            }
            Err(e) => self.fail(claim, expected.to_string(), e),
        }
    }

    fn near(&mut self, claim: &str, expected: f64, tol: f64, got: Result<f64>) {
        let shown = format!("{expected} ± {tol:e}");
        match got {
            Ok(g) => {
                let pass = (g - expected).abs() <= tol;
                self.push(claim, shown, format!("{g}"), pass);
            }
            Err(e) => self.fail(claim, shown, e),
        }
    }

    fn holds(&mut self, claim: &str, got: Result<(bool, String)>) {
        match got {
            Ok((pass, detail)) => self.push(claim, "holds".into(), detail, pass),
            Err(e) => self.fail(claim, "holds".into(), e),
        }
    }
}

fn did(family: Family, n: u32) -> DictionaryId {
    DictionaryId::new(family, n).expect("valid index")
}

fn finite_f64(v: Result<ExtReal>) -> Result<f64> {
    v.map(|u| u.to_f64())
}

fn dict_checks() -> Vec<CheckOutcome> {
    let mut c = Checks::new("dict");
    let reference = [
        (Family::G, [rat(3, 10), rat(20, 63), rat(7, 20)]),
        (Family::F, [rat(3, 10), rat(5, 14), rat(196, 405)]),
    ];
    for (family, values) in reference {
        for (n, want) in (1..).zip(values) {
            let got = uncertainty(&crate::dictionaries::envelope(did(family, n)));
            c.exact(
                &format!("U({family},{n}) from envelope"),
                ExtReal::Finite(want.clone()),
                got,
            );
            c.exact(
                &format!("U({family},{n}) closed form"),
                ExtReal::Finite(want),
                Ok(closed_uncertainty(did(family, n))),
            );
        }
    }
    let columns: [(Family, &str, [Rational; 3]); 4] = [
        (Family::G, "sigma_x2", [rat(1, 10), rat(1, 21), rat(1, 36)]),
        (Family::G, "sigma_w2", [int(3), rat(20, 3), rat(63, 5)]),
        (Family::F, "sigma_x2", [rat(1, 10), rat(1, 7), rat(14, 81)]),
        (Family::F, "sigma_w2", [int(3), rat(5, 2), rat(14, 5)]),
    ];
    for (family, column, want) in columns {
        let shown = want
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join(", ");
        let got = dict_table(family, 3).map(|rows| {
            rows.iter()
                .map(|r| match column {
                    "sigma_x2" => r.sigma_x2.to_string(),
                    _ => r.sigma_w2.to_string(),
                })
                .collect::<Vec<_>>()
                .join(", ")
        });
        c.exact(&format!("{family} table {column} for n = 1..3"), shown, got);
    }
    for family in [Family::G, Family::F] {
        let report = verify_minimizer(family, 100);
        c.holds(
            &format!("argmin U({family},n) on [1,100] is n = 1 with U = 3/10"),
            report.map(|r| {
                (
                    r.argmin == 1 && r.min_value == rat(3, 10),
                    format!("n = {}, U = {}", r.argmin, r.min_value),
                )
            }),
        );
    }
    c.near(
        "U(G,100) approaches 1/2",
        0.5,
        1e-2,
        finite_f64(Ok(closed_uncertainty(did(Family::G, 100)))),
    );
    c.near(
        "U(F,100) / (100/6) approaches 1",
        1.0,
        0.02,
        Ok(closed_uncertainty(did(Family::F, 100)).to_f64() / (100.0 / 6.0)),
    );
    c.out
}

fn rect_checks() -> Vec<CheckOutcome> {
    let mut c = Checks::new("rect");
    c.holds(
        "explicit and recursive rect^p agree for p <= 64",
        rect_p_recursive_sequence(64).and_then(|seq| {
            for (p, built) in (1..).zip(&seq) {
                if rect_p_explicit(p)? != *built {
                    return Ok((false, format!("differ at p = {p}")));
                }
            }
            Ok((true, "identical".into()))
        }),
    );
    c.exact(
        "U(rect^2)",
        ExtReal::Finite(rat(3, 10)),
        rect_p_explicit(2).and_then(|f| uncertainty(&f)),
    );
    c.exact(
        "U(rect^3)",
        ExtReal::Finite(rat(215, 847)),
        rect_p_explicit(3).and_then(|f| uncertainty(&f)),
    );
    match limit_check(64) {
        Ok(report) => {
            c.push(
                "U(rect^p) strictly decreasing on [2,64], above 1/4, (U - 1/4)p bounded",
                "holds".into(),
                format!("(U(8) - 1/4)·8 = {:.6}", report.envelope_ref),
                true,
            );
            c.near(
                "U(rect^64) - 1/4 below 1e-3",
                0.0,
                1e-3,
                Ok(report.excess_at_max),
            );
        }
        Err(e) => c.fail(
            "U(rect^p) strictly decreasing on [2,64], above 1/4, (U - 1/4)p bounded",
            "holds".into(),
            e,
        ),
    }
    c.out
}

fn symmetry_checks() -> Vec<CheckOutcome> {
    let mut c = Checks::new("symmetry");
    let f = example_cubic();
    let u = |g: &PiecewisePoly| finite_f64(uncertainty_tol(g, EXAMPLE_CUBIC_TOL));
    c.near(
        "cubic alpha",
        0.384209038102,
        1e-8,
        alpha(&f).map(|a| to_f64(&a)),
    );
    c.near("cubic U[f]", 0.328205910036, 1e-8, u(&f));
    let origin = reflections(&f, Axis::Origin);
    c.near(
        "cubic U[f_s] about 0",
        0.488135390966,
        1e-8,
        origin
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|p| u(&p.f_s)),
    );
    c.near(
        "cubic U[f_d] about 0",
        1.064558791510,
        1e-8,
        origin
            .as_ref()
            .map_err(Clone::clone)
            .and_then(|p| u(&p.f_d)),
    );
    let bary = reflections(&f, Axis::Barycenter);
    c.near(
        "cubic U[f_s] about alpha",
        0.233608189515,
        1e-8,
        bary.as_ref().map_err(Clone::clone).and_then(|p| u(&p.f_s)),
    );
    c.near(
        "cubic U[f_d] about alpha",
        0.365009365360,
        1e-8,
        bary.as_ref().map_err(Clone::clone).and_then(|p| u(&p.f_d)),
    );
    match even_odd_split(&f, EXAMPLE_CUBIC_TOL) {
        Ok(s) => {
            c.near(
                "cubic |u_even|^2",
                0.675886085,
                1e-6,
                Ok(to_f64(&s.u_even_norm_sq)),
            );
            c.near(
                "cubic |u_odd|^2",
                0.433013302,
                1e-6,
                Ok(to_f64(&s.u_odd_norm_sq)),
            );
            c.near(
                "cubic cross term",
                -1.526014699,
                1e-6,
                Ok(s.cross_term_float()),
            );
            c.near(
                "cubic cross term by quadrature",
                s.cross_term_float(),
                1e-3 * s.cross_term_float().abs(),
                Ok(s.cross_term_quad),
            );
        }
        Err(e) => c.fail("cubic even/odd split", "values".into(), e),
    }
    c.holds(
        "uncentered min-bound fails for the cubic",
        theorem_bound_check(&f, false, EXAMPLE_CUBIC_TOL).map(|r| {
            (
                !r.min_bound_holds,
                format!(
                    "U = {:.12} vs min {:.12}",
                    to_f64(&r.u_f),
                    to_f64(&r.min_of_halves())
                ),
            )
        }),
    );
    c.holds(
        "centered min-bound holds for the cubic",
        theorem_bound_check(&f, true, EXAMPLE_CUBIC_TOL).map(|r| {
            (
                r.min_bound_holds,
                format!(
                    "U = {:.12} vs min {:.12}",
                    to_f64(&r.u_f),
                    to_f64(&r.min_of_halves())
                ),
            )
        }),
    );
    c.out
}

const PROPERTY_CASES: usize = 50;

fn property_checks() -> Vec<CheckOutcome> {
    let mut c = Checks::new("property");
    let seed = seed_from_env();
    let mut r = rng(seed);
    let cases: Vec<PiecewisePoly> = (0..PROPERTY_CASES).map(|_| plus_zero(&mut r)).collect();
    let tally =
        |c: &mut Checks, claim: &str, test: &mut dyn FnMut(&PiecewisePoly) -> Result<bool>| {
            let mut failures = 0;
            let mut error = None;
            for f in &cases {
                match test(f) {
                    Ok(true) => {}
                    Ok(false) => failures += 1,
                    Err(e) => {
                        failures += 1;
                        error.get_or_insert(e);
                    }
                }
            }
            let got = match error {
                Some(e) => format!("{failures} failures (first error: {e})"),
                None => format!(
                    "{} of {} (seed {seed})",
                    cases.len() - failures,
                    cases.len()
                ),
            };
            c.push(
                claim,
                format!("{0} of {0}", cases.len()),
                got,
                failures == 0,
            );
        };
    let nonzero = |r: &mut rand_chacha::ChaCha8Rng| loop {
        let v = small_rational(r, -9..=9, 5);
        if v != int(0) {
            break v;
        }
    };
    tally(&mut c, "U invariant under x -> λ f(γx - τ)", &mut |f| {
        let (l, g, t) = (
            nonzero(&mut r),
            nonzero(&mut r),
            small_rational(&mut r, -9..=9, 5),
        );
        Ok(uncertainty(&f.affine(&l, &g, &t)?)? == uncertainty(f)?)
    });
    tally(
        &mut c,
        "centered convex decompositions of sigma_x2 and sigma_w2",
        &mut |f| {
            let b = theorem_bound_check(f, true, 0.0)?;
            Ok(b.sigma_x2_decomposition && b.sigma_w2_decomposition)
        },
    );
    tally(
        &mut c,
        "weighted Cauchy-Schwarz bound (slack 1e-12)",
        &mut |f| Ok(theorem_bound_check(f, true, 0.0)?.cs_bound_holds),
    );
    tally(&mut c, "|f_s|^2 + |f_d|^2 = 2|f|^2", &mut |f| {
        let p = reflections(f, Axis::Barycenter)?;
        let q = reflect_about(f, &int(0))?;
        let twice = f.norm_sq() * int(2);
        Ok(
            p.f_s.norm_sq() + p.f_d.norm_sq() == twice
                && q.f_s.norm_sq() + q.f_d.norm_sq() == twice,
        )
    });
    tally(&mut c, "U > 1/4 whenever finite", &mut |f| {
        Ok(match uncertainty(f)? {
            ExtReal::Finite(u) => u > rat(1, 4),
            ExtReal::Infinite => true,
        })
    });
    c.out
}

fn spectrum_checks() -> Vec<CheckOutcome> {
    let mut c = Checks::new("spectrum");
    let cases: Vec<(&str, Result<PiecewisePoly>)> = vec![
        ("tent", Ok(PiecewisePoly::tent())),
        ("rect^3", rect_p_explicit(3)),
        ("rect^4", rect_p_explicit(4)),
        ("g_2", Ok(crate::dictionaries::envelope(did(Family::G, 2)))),
        ("f_2", Ok(crate::dictionaries::envelope(did(Family::F, 2)))),
    ];
    for (name, f) in cases {
        let Ok(f) = f else { continue };
        for (k, exact) in [(0, f.norm_sq()), (2, f.formal_derivative().norm_sq())] {
            let want = to_f64(&exact);
            c.near(
                &format!("(1/2π)∫ω^{k}|f̂|² for {name}"),
                want,
                1e-6 * want,
                quad_freq_moment(&f, k, 1e-7).map(|q| q.value),
            );
        }
    }
    let mut omegas: Vec<f64> = (0..94).map(|i| -47.0 + i as f64 + 0.37).collect();
    omegas.extend([0.0, 1e-9, -4e-8, 3e-6, -5e-5, 9.9e-5]);
    for p in 1..=3usize {
        let got = rect_p_explicit(p).map(|f| {
            let t = Transform::new(&f);
            omegas
                .iter()
                .map(|&w| {
                    let s = if w == 0.0 {
                        1.0
                    } else {
                        (w / 2.0).sin() / (w / 2.0)
                    };
                    (t.eval(w) - s.powi(p as i32)).norm()
                })
                .fold(0.0, f64::max)
        });
        c.near(
            &format!("f̂ of rect^{p} is sinc^{p} on 100 points"),
            0.0,
            1e-10,
            got,
        );
    }
    for n in 1..=5u32 {
        c.near(
            &format!("∫F_{n}² = π/{}", 2 * n + 1),
            PI / (2 * n + 1) as f64,
            1e-6,
            f_n_energy(n, 1e-8).map(|q| q.value),
        );
    }
    let atom = AtomParams::new(int(2), int(3), int(1)).expect("t > 0");
    c.near(
        "frequency mean of the g_1 atom (t=2, ξ=3, u=1) is 2π·3",
        2.0 * PI * 3.0,
        1e-6,
        atom_frequency_mean(
            &crate::dictionaries::envelope(did(Family::G, 1)),
            &atom,
            1e-8,
        )
        .map(|q| q.value),
    );
    c.out
}

type Runner = fn() -> Vec<CheckOutcome>;

/// Runs every group whose name contains `filter`; if no group name matches,
/// runs everything and keeps the claims that contain it.
pub fn run(filter: Option<&str>) -> Vec<CheckOutcome> {
    let runners: [(&str, Runner); 5] = [
        ("dict", dict_checks),
        ("rect", rect_checks),
        ("symmetry", symmetry_checks),
        ("property", property_checks),
        ("spectrum", spectrum_checks),
    ];
    let by_group: Vec<_> = runners
        .iter()
        .filter(|(g, _)| filter.is_none_or(|f| g.contains(f)))
        .collect();
    if !by_group.is_empty() {
        return by_group.iter().flat_map(|(_, run)| run()).collect();
    }
    let needle = filter.expect("no group matched, so a filter was given");
    runners
        .iter()
        .flat_map(|(_, run)| run())
        .filter(|o| o.claim.contains(needle))
        .collect()
}

/// Fixed-width text table: claim, expected, got, status.
pub fn render_table(outcomes: &[CheckOutcome]) -> String {
    let widths = outcomes.iter().fold((5, 8, 3), |(a, b, c), o| {
        (
            a.max(o.claim.chars().count()),
            b.max(o.expected.chars().count()),
            c.max(o.got.chars().count()),
        )
    });
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w - s.chars().count()));
    let mut out = format!(
        "{}  {}  {}  status\n",
        pad("claim", widths.0),
        pad("expected", widths.1),
        pad("got", widths.2)
    );
    for o in outcomes {
        out.push_str(&format!(
            "{}  {}  {}  {}\n",
            pad(&o.claim, widths.0),
            pad(&o.expected, widths.1),
            pad(&o.got, widths.2),
            if o.pass { "PASS" } else { "FAIL" }
        ));
    }
    let failed = outcomes.iter().filter(|o| !o.pass).count();
    out.push_str(&format!("{} checks, {} failed\n", outcomes.len(), failed));
    out
}
