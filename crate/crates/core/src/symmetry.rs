//! Left/right reflections of a function about an axis, the half-mass weight,
//! the even/odd split of `f′`, and the reflection bounds on `U`.

use std::f64::consts::PI;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{alpha, float_json, sigma_w2_tol, sigma_x2, uncertainty_tol, ExtReal};
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{int, parse_rational, to_f64, Polynomial, Rational};
use crate::spectrum::{quad_freq_moment_tol, Transform};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Origin,
    Barycenter,
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "origin" => Ok(Axis::Origin),
            "barycenter" => Ok(Axis::Barycenter),
            other => Err(Error::Precondition(format!(
                "unknown axis {other:?}, expected origin or barycenter"
            ))),
        }
    }
}

/// `f_d` keeps `f` right of the axis and mirrors it, `f_s` does the same
/// with the left part. Both are even about `axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionPair {
    pub f_s: PiecewisePoly,
    pub f_d: PiecewisePoly,
    pub axis: Rational,
    /// `‖f_d‖² / (‖f_d‖² + ‖f_s‖²)`.
    pub w: Rational,
}

/// Reflections about an arbitrary axis `c`.
pub fn reflect_about(f: &PiecewisePoly, c: &Rational) -> Result<ReflectionPair> {
    let (lo, hi) = f.support().ok_or(Error::ZeroFunction)?;
    let right = f.restrict(&c.clone().max(lo.clone()), &hi);
    let left = f.restrict(&lo, &c.clone().min(hi.clone()));
    let f_d = right.add(&right.reflect(c));
    let f_s = left.add(&left.reflect(c));
    let (nd, ns) = (f_d.norm_sq(), f_s.norm_sq());
    let w = &nd / (&nd + &ns);
    Ok(ReflectionPair {
        f_s,
        f_d,
        axis: c.clone(),
        w,
    })
}

fn symmetric_support(f: &PiecewisePoly) -> Result<Rational> {
    let (lo, hi) = f.support().ok_or(Error::ZeroFunction)?;
    if lo != -hi.clone() {
        return Err(Error::AsymmetricSupport {
            lo: Box::new(lo),
            hi: Box::new(hi),
        });
    }
    Ok(hi)
}

pub fn reflections(f: &PiecewisePoly, axis: Axis) -> Result<ReflectionPair> {
    match axis {
        Axis::Origin => {
            symmetric_support(f)?;
            reflect_about(f, &Rational::zero())
        }
        Axis::Barycenter => reflect_about(f, &alpha(f)?),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SplitReport {
    pub u_even_norm_sq: Rational,
    pub u_odd_norm_sq: Rational,
    /// `‖u_odd‖² − ‖u_even‖²`; the cross term is this times `2π`.
    pub cross_term_exact: Rational,
    /// `∫ ω² f̂_s f̂_d dω` by quadrature.
    pub cross_term_quad: f64,
}

impl SplitReport {
    pub fn cross_term_float(&self) -> f64 {
        2.0 * PI * to_f64(&self.cross_term_exact)
    }
}

impl Serialize for SplitReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "u_even_norm_sq": self.u_even_norm_sq.to_string(),
            "u_even_norm_sq_float": to_f64(&self.u_even_norm_sq),
            "u_odd_norm_sq": self.u_odd_norm_sq.to_string(),
            "u_odd_norm_sq_float": to_f64(&self.u_odd_norm_sq),
            "cross_term_coeff_2pi": self.cross_term_exact.to_string(),
            "cross_term_float": float_json(self.cross_term_float()),
            "cross_term_quad": float_json(self.cross_term_quad),
        })
        .serialize(s)
    }
}

const SPLIT_REL_TOL: f64 = 1e-8;

/// Even and odd parts of `u = f′` about the origin. `f` must be continuous
/// and vanish at its support edges; jumps up to `jump_tol` are ignored.
pub fn even_odd_split(f: &PiecewisePoly, jump_tol: f64) -> Result<SplitReport> {
    symmetric_support(f)?;
    if let Some(at) = f.interior_jumps(jump_tol).into_iter().next() {
        return Err(Error::InteriorJump { at });
    }
    if !f.vanishes_continuously(jump_tol) {
        return Err(Error::Precondition(
            "f must vanish at its support edges".into(),
        ));
    }
    let u = f.formal_derivative();
    let mirrored = u.reflect(&Rational::zero());
    let half = Rational::new(1.into(), 2.into());
    let even = u.add(&mirrored).scale(&half);
    let odd = u.sub(&mirrored).scale(&half);
    let (ne, no) = (even.norm_sq(), odd.norm_sq());
    let pair = reflect_about(f, &Rational::zero())?;
    let q = |g: &PiecewisePoly| -> Result<f64> {
        if g.is_zero() {
            return Ok(0.0);
        }
        Ok(quad_freq_moment_tol(g, 2, SPLIT_REL_TOL, jump_tol)?.value)
    };
    let sum = q(&pair.f_s.add(&pair.f_d))?;
    let cross_term_quad = PI * (sum - q(&pair.f_s)? - q(&pair.f_d)?);
    Ok(SplitReport {
        cross_term_exact: &no - &ne,
        u_even_norm_sq: ne,
        u_odd_norm_sq: no,
        cross_term_quad,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub centered: bool,
    pub alpha: Rational,
    pub axis: Rational,
    pub w: Rational,
    pub u_f: Rational,
    /// `None` when that half of `f` is empty.
    pub u_s: Option<Rational>,
    pub u_d: Option<Rational>,
    /// `U[f] ≥ min{U[f_s], U[f_d]}`, exact.
    pub min_bound_holds: bool,
    /// `(w √U[f_d] + (1 − w) √U[f_s])²`.
    pub cs_bound: f64,
    pub cs_bound_holds: bool,
    /// `σ_x²[f_d] σ_ω²[f_s] = σ_x²[f_s] σ_ω²[f_d]`, the equality case of the
    /// Cauchy–Schwarz step.
    pub cs_equality_case: bool,
    pub sigma_x2_decomposition: bool,
    pub sigma_w2_decomposition: bool,
}

impl BoundReport {
    pub fn min_of_halves(&self) -> Rational {
        match (&self.u_s, &self.u_d) {
            (Some(s), Some(d)) => s.clone().min(d.clone()),
            (Some(v), None) | (None, Some(v)) => v.clone(),
            (None, None) => unreachable!("f is nonzero"),
        }
    }

    pub fn holds(&self) -> bool {
        self.min_bound_holds
            && self.cs_bound_holds
            && self.sigma_x2_decomposition
            && self.sigma_w2_decomposition
    }
}

impl Serialize for BoundReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let opt = |v: &Option<Rational>| v.as_ref().map(|r| r.to_string());
        let optf = |v: &Option<Rational>| v.as_ref().map(to_f64);
        serde_json::json!({
            "centered": self.centered,
            "alpha": self.alpha.to_string(),
            "alpha_float": to_f64(&self.alpha),
            "axis": self.axis.to_string(),
            "w": self.w.to_string(),
            "w_float": to_f64(&self.w),
            "U_f": self.u_f.to_string(),
            "U_f_float": to_f64(&self.u_f),
            "U_s": opt(&self.u_s),
            "U_s_float": optf(&self.u_s),
            "U_d": opt(&self.u_d),
            "U_d_float": optf(&self.u_d),
            "min_bound_holds": self.min_bound_holds,
            "cs_bound": float_json(self.cs_bound),
            "cs_bound_holds": self.cs_bound_holds,
            "cs_equality_case": self.cs_equality_case,
            "sigma_x2_decomposition": self.sigma_x2_decomposition,
            "sigma_w2_decomposition": self.sigma_w2_decomposition,
        })
        .serialize(s)
    }
}

const CS_SLACK: f64 = 1e-12;

fn finite(v: ExtReal, what: &str) -> Result<Rational> {
    match v {
        ExtReal::Finite(r) => Ok(r),
        ExtReal::Infinite => Err(Error::ClassViolation(format!(
            "{what} has infinite frequency variance"
        ))),
    }
}

/// Reflection bounds for a continuous nonnegative `f` vanishing at its
/// support edges. With `centered` the reflection axis is the barycenter
/// (equivalently, `f` is translated so that `α = 0`); without it the axis
/// is the origin and the support must be symmetric.
pub fn theorem_bound_check(f: &PiecewisePoly, centered: bool, tol: f64) -> Result<BoundReport> {
    let tag = f.classify(tol);
    if !tag.class.is_plus_zero() {
        return Err(Error::ClassViolation(format!(
            "expected a continuous nonnegative function vanishing at its edges, got {:?}",
            tag.class
        )));
    }
    let a = alpha(f)?;
    let (g, pair) = if centered {
        let g = f.shift_arg(&a);
        let pair = reflect_about(&g, &Rational::zero())?;
        (g, pair)
    } else {
        (f.clone(), reflections(f, Axis::Origin)?)
    };
    let u_f = finite(uncertainty_tol(&g, tol)?, "f")?;
    let half = |h: &PiecewisePoly, what: &str| -> Result<Option<(Rational, Rational)>> {
        if h.is_zero() {
            return Ok(None);
        }
        Ok(Some((sigma_x2(h)?, finite(sigma_w2_tol(h, tol)?, what)?)))
    };
    let s = half(&pair.f_s, "f_s")?;
    let d = half(&pair.f_d, "f_d")?;
    let w = pair.w.clone();
    let one_minus_w = Rational::one() - &w;
    let u_s = s.as_ref().map(|(x, o)| x * o);
    let u_d = d.as_ref().map(|(x, o)| x * o);
    let root = |v: &Option<Rational>| v.as_ref().map_or(0.0, |r| to_f64(r).sqrt());
    let cs = (to_f64(&w) * root(&u_d) + to_f64(&one_minus_w) * root(&u_s)).powi(2);
    let zero = || (Rational::zero(), Rational::zero());
    let (sx_s, sw_s) = s.clone().unwrap_or_else(zero);
    let (sx_d, sw_d) = d.clone().unwrap_or_else(zero);
    let sx_f = sigma_x2(&g)?;
    let sw_f = finite(sigma_w2_tol(&g, tol)?, "f")?;
    let mut report = BoundReport {
        centered,
        alpha: a,
        axis: if centered {
            alpha(f)?
        } else {
            Rational::zero()
        },
        u_f: u_f.clone(),
        min_bound_holds: false,
        cs_bound: cs,
        cs_bound_holds: to_f64(&u_f) >= cs - CS_SLACK,
        cs_equality_case: &sx_d * &sw_s == &sx_s * &sw_d,
        sigma_x2_decomposition: sx_f == &w * &sx_d + &one_minus_w * &sx_s,
        sigma_w2_decomposition: sw_f == &w * &sw_d + &one_minus_w * &sw_s,
        u_s,
        u_d,
        w,
    };
    report.min_bound_holds = report.u_f >= report.min_of_halves();
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorollaryReport {
    pub psi_s: Option<PiecewisePoly>,
    pub psi_d: Option<PiecewisePoly>,
    pub u_s: Option<ExtReal>,
    pub u_d: Option<ExtReal>,
}

impl CorollaryReport {
    pub fn min(&self) -> ExtReal {
        self.u_s
            .iter()
            .chain(self.u_d.iter())
            .min()
            .cloned()
            .expect("at least one half is nonzero")
    }
}

/// Rescales each reflection onto `[−a, a]`: `ψ_i(x) = f_i((r_i/a)x + axis)`
/// where `r_i` is the half-width of `f_i`'s support. An empty half is
/// reported as `None`.
pub fn corollary_normalize(
    pair: &ReflectionPair,
    a: &Rational,
    tol: f64,
) -> Result<CorollaryReport> {
    if !a.is_positive() {
        return Err(Error::Precondition(format!(
            "target half-width must be positive, got {a}"
        )));
    }
    if pair.f_s.is_zero() && pair.f_d.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let one = Rational::one();
    let normalize =
        |h: &PiecewisePoly, name: &str| -> Result<(Option<PiecewisePoly>, Option<ExtReal>)> {
            let Some((lo, hi)) = h.support() else {
                return Ok((None, None));
            };
            if !h.is_even_about(&pair.axis, 0.0) || &lo + &hi != &pair.axis * int(2) {
                return Err(Error::Precondition(format!(
                    "{name} is not even about {}",
                    pair.axis
                )));
            }
            let r = (hi - lo) / int(2);
            let psi = h.affine(&one, &(r / a), &-pair.axis.clone())?;
            let (u_psi, u_h) = (uncertainty_tol(&psi, tol)?, uncertainty_tol(h, tol)?);
            if u_psi != u_h {
                return Err(Error::Inconsistent(format!(
                    "U[ψ] = {u_psi} differs from U[{name}] = {u_h}"
                )));
            }
            Ok((Some(psi), Some(u_psi)))
        };
    let (psi_s, u_s) = normalize(&pair.f_s, "f_s")?;
    let (psi_d, u_d) = normalize(&pair.f_d, "f_d")?;
    Ok(CorollaryReport {
        psi_s,
        psi_d,
        u_s,
        u_d,
    })
}

/// Both sides of `|f̂(ω)|² = ¼(f̂_s + f̂_d)² + (Im ĝ_d − Im ĝ_s)²`, where
/// `g_i` is `f_i` cut to `[0, a]` and the reflections are about the origin.
pub fn modulus_split(f: &PiecewisePoly, omegas: &[f64]) -> Result<Vec<(f64, f64)>> {
    let a = symmetric_support(f)?;
    let pair = reflect_about(f, &Rational::zero())?;
    let zero = Rational::zero();
    let whole = Transform::new(f);
    let (ts, td) = (Transform::new(&pair.f_s), Transform::new(&pair.f_d));
    let gs = Transform::new(&pair.f_s.restrict(&zero, &a));
    let gd = Transform::new(&pair.f_d.restrict(&zero, &a));
    Ok(omegas
        .iter()
        .map(|&w| {
            let even = 0.5 * (ts.eval(w).re + td.eval(w).re);
            let odd = gd.eval(w).im - gs.eval(w).im;
            (whole.eval(w).norm_sqr(), even * even + odd * odd)
        })
        .collect())
}

/// The two-piece cubic on `[−1, 1]` used as the worked example for the
/// reflection bounds, with its decimal coefficients taken exactly.
pub fn example_cubic() -> PiecewisePoly {
    let poly = |c: [&str; 4]| {
        Polynomial::new(
            c.iter()
                .rev()
                .map(|s| parse_rational(s).expect("literal decimal"))
                .collect(),
        )
    };
    let minus = poly([
        "0.5526139574",
        "1.2275239864",
        "0.9779994788",
        "0.3030894498",
    ]);
    let plus = poly([
        "0.0095109093",
        "-1.6176420481",
        "1.3050416889",
        "0.3030894498",
    ]);
    PiecewisePoly::new(vec![int(-1), int(0), int(1)], vec![minus, plus]).expect("valid grid")
}

/// Tolerance that absorbs the rounded-coefficient residue `f(1) = −1e−10`.
pub const EXAMPLE_CUBIC_TOL: f64 = 1e-9;
