//! Spatial and spectral moments of real piecewise-polynomial envelopes.
//!
//! Everything here is computed on the time side. The frequency variance uses
//! `σ_ω² = ‖f′‖² / ‖f‖²`, which holds exactly when `f` is continuous and
//! vanishes at both ends of its support. Any jump (interior or at an edge)
//! makes `f̂` decay like `1/ω`, and the frequency variance is then infinite.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{to_f64, Rational};

/// A nonnegative extended real: exact rational or `+∞`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtReal {
    Finite(Rational),
    Infinite,
}

impl ExtReal {
    pub fn is_finite(&self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtReal::Finite(r) => Some(r),
            ExtReal::Infinite => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtReal::Finite(r) => to_f64(r),
            ExtReal::Infinite => f64::INFINITY,
        }
    }

    /// Product; `0 · ∞` is an error.
    pub fn mul(&self, other: &ExtReal) -> Result<ExtReal> {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => Ok(ExtReal::Finite(a * b)),
            (ExtReal::Finite(a), ExtReal::Infinite) | (ExtReal::Infinite, ExtReal::Finite(a)) => {
                if a.is_zero() {
                    Err(Error::ZeroTimesInfinity)
                } else {
                    Ok(ExtReal::Infinite)
                }
            }
            (ExtReal::Infinite, ExtReal::Infinite) => Ok(ExtReal::Infinite),
        }
    }

    /// Multiplies a finite value by a positive rational; `∞` stays `∞`.
    pub fn scale(&self, k: &Rational) -> ExtReal {
        debug_assert!(k.is_positive());
        match self {
            ExtReal::Finite(r) => ExtReal::Finite(r * k),
            ExtReal::Infinite => ExtReal::Infinite,
        }
    }
}

impl PartialOrd for ExtReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtReal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => a.cmp(b),
            (ExtReal::Finite(_), ExtReal::Infinite) => Ordering::Less,
            (ExtReal::Infinite, ExtReal::Finite(_)) => Ordering::Greater,
            (ExtReal::Infinite, ExtReal::Infinite) => Ordering::Equal,
        }
    }
}

impl From<Rational> for ExtReal {
    fn from(r: Rational) -> Self {
        ExtReal::Finite(r)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Finite(r) => write!(f, "{r}"),
            ExtReal::Infinite => write!(f, "inf"),
        }
    }
}

impl fmt::Debug for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Float companion for JSON output: a number, or `"inf"`.
pub(crate) fn float_json(x: f64) -> serde_json::Value {
    if x.is_finite() {
        serde_json::json!(x)
    } else {
        serde_json::json!("inf")
    }
}

/// Atom parameters `γ = (t, ξ, u)`: scale, modulation frequency, translation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AtomParams {
    t: Rational,
    xi: Rational,
    u: Rational,
}

impl AtomParams {
    pub fn new(t: Rational, xi: Rational, u: Rational) -> Result<Self> {
        if !t.is_positive() {
            return Err(Error::Precondition(format!(
                "atom scale t must be positive, got {t}"
            )));
        }
        Ok(AtomParams { t, xi, u })
    }

    pub fn identity() -> Self {
        AtomParams {
            t: Rational::from_integer(1.into()),
            xi: Rational::zero(),
            u: Rational::zero(),
        }
    }

    pub fn t(&self) -> &Rational {
        &self.t
    }

    pub fn xi(&self) -> &Rational {
        &self.xi
    }

    pub fn u(&self) -> &Rational {
        &self.u
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentsReport {
    pub alpha: Rational,
    /// Frequency mean as a multiple of `2π`.
    pub beta_coeff: Rational,
    pub sigma_x2: Rational,
    pub sigma_w2: ExtReal,
    pub uncertainty: ExtReal,
    pub norm_sq: Rational,
}

impl Serialize for MomentsReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(12))?;
        m.serialize_entry("alpha", &self.alpha.to_string())?;
        m.serialize_entry("alpha_float", &to_f64(&self.alpha))?;
        m.serialize_entry("beta_coeff", &self.beta_coeff.to_string())?;
        m.serialize_entry(
            "beta_float",
            &(2.0 * std::f64::consts::PI * to_f64(&self.beta_coeff)),
        )?;
        m.serialize_entry("sigma_x2", &self.sigma_x2.to_string())?;
        m.serialize_entry("sigma_x2_float", &to_f64(&self.sigma_x2))?;
        m.serialize_entry("sigma_w2", &self.sigma_w2)?;
        m.serialize_entry("sigma_w2_float", &float_json(self.sigma_w2.to_f64()))?;
        m.serialize_entry("U", &self.uncertainty)?;
        m.serialize_entry("U_float", &float_json(self.uncertainty.to_f64()))?;
        m.serialize_entry("norm_sq", &self.norm_sq.to_string())?;
        m.serialize_entry("norm_sq_float", &to_f64(&self.norm_sq))?;
        m.end()
    }
}

pub fn norm_sq(f: &PiecewisePoly) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    Ok(f.norm_sq())
}

/// Spatial mean `∫x f² / ∫f²`.
pub fn alpha(f: &PiecewisePoly) -> Result<Rational> {
    let n = norm_sq(f)?;
    Ok(f.moment(1, true) / n)
}

/// Spatial variance `∫x² f² / ∫f² − α²`.
pub fn sigma_x2(f: &PiecewisePoly) -> Result<Rational> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let m = f.squared_moments(2);
    let a = &m[1] / &m[0];
    Ok(&m[2] / &m[0] - &a * &a)
}

/// Frequency variance with exact regularity test.
pub fn sigma_w2(f: &PiecewisePoly) -> Result<ExtReal> {
    sigma_w2_tol(f, 0.0)
}

/// Frequency variance where jumps of magnitude at most `tol` count as zero.
pub fn sigma_w2_tol(f: &PiecewisePoly, tol: f64) -> Result<ExtReal> {
    let n = norm_sq(f)?;
    if !f.vanishes_continuously(tol) {
        return Ok(ExtReal::Infinite);
    }
    Ok(ExtReal::Finite(f.formal_derivative().norm_sq() / n))
}

pub fn uncertainty(f: &PiecewisePoly) -> Result<ExtReal> {
    uncertainty_tol(f, 0.0)
}

pub fn uncertainty_tol(f: &PiecewisePoly, tol: f64) -> Result<ExtReal> {
    ExtReal::Finite(sigma_x2(f)?).mul(&sigma_w2_tol(f, tol)?)
}

/// Full report for an unmodulated real envelope.
pub fn moments_report(f: &PiecewisePoly, tol: f64) -> Result<MomentsReport> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let m = f.squared_moments(2);
    let norm_sq = m[0].clone();
    let alpha = &m[1] / &norm_sq;
    let sigma_x2 = &m[2] / &norm_sq - &alpha * &alpha;
    let sigma_w2 = sigma_w2_tol(f, tol)?;
    let uncertainty = ExtReal::Finite(sigma_x2.clone()).mul(&sigma_w2)?;
    Ok(MomentsReport {
        alpha,
        beta_coeff: Rational::zero(),
        sigma_x2,
        sigma_w2,
        uncertainty,
        norm_sq,
    })
}

/// Moments of the atom `x ↦ envelope((x − u)/t) · e^{2πiξx}` from the
/// covariance rules of scaling, translation and modulation.
pub fn atom_moments(
    envelope: &PiecewisePoly,
    gamma: &AtomParams,
    tol: f64,
) -> Result<MomentsReport> {
    let base = moments_report(envelope, tol)?;
    let t = &gamma.t;
    let t2 = t * t;
    let sigma_w2 = match &base.sigma_w2 {
        ExtReal::Finite(r) => ExtReal::Finite(r / &t2),
        ExtReal::Infinite => ExtReal::Infinite,
    };
    let sigma_x2 = &base.sigma_x2 * &t2;
    let uncertainty = ExtReal::Finite(sigma_x2.clone()).mul(&sigma_w2)?;
    Ok(MomentsReport {
        alpha: &gamma.u + t * &base.alpha,
        beta_coeff: &gamma.xi + &base.beta_coeff / t,
        sigma_x2,
        sigma_w2,
        uncertainty,
        norm_sq: &base.norm_sq * t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratpoly::{int, rat, Polynomial};

    fn g_n(n: usize) -> PiecewisePoly {
        let sign = if n.is_multiple_of(2) { int(1) } else { int(-1) };
        let left = Polynomial::shifted_power(&int(-1), n);
        let right = Polynomial::shifted_power(&int(1), n).scale(&sign);
        PiecewisePoly::new(vec![int(-1), int(0), int(1)], vec![left, right]).unwrap()
    }

    fn f_n(n: usize) -> PiecewisePoly {
        let one = Polynomial::from_ints(&[1]);
        let xn = Polynomial::monomial(int(1), n);
        let left = &one - &xn.compose_affine(&int(-1), &int(0));
        PiecewisePoly::new(vec![int(-1), int(0), int(1)], vec![left, &one - &xn]).unwrap()
    }

    #[test]
    fn alpha_examples() {
        let tent = PiecewisePoly::tent();
        assert_eq!(alpha(&tent).unwrap(), int(0));
        let moved = tent.affine(&int(1), &int(1), &int(1)).unwrap();
        assert_eq!(alpha(&moved).unwrap(), int(1));
    }

    #[test]
    fn sigma_x2_examples() {
        assert_eq!(sigma_x2(&PiecewisePoly::tent()).unwrap(), rat(1, 10));
        assert_eq!(sigma_x2(&g_n(2)).unwrap(), rat(1, 21));
        assert_eq!(sigma_x2(&f_n(3)).unwrap(), rat(14, 81));
    }

    #[test]
    fn sigma_w2_examples() {
        assert_eq!(
            sigma_w2(&PiecewisePoly::tent()).unwrap(),
            ExtReal::Finite(int(3))
        );
        assert_eq!(sigma_w2(&PiecewisePoly::rect()).unwrap(), ExtReal::Infinite);
        let b3 = PiecewisePoly::new(
            vec![rat(-3, 2), rat(-1, 2), rat(1, 2), rat(3, 2)],
            vec![
                Polynomial::shifted_power(&rat(-3, 2), 2).scale(&rat(1, 2)),
                Polynomial::new(vec![rat(3, 4), int(0), int(-1)]),
                Polynomial::shifted_power(&rat(3, 2), 2).scale(&rat(1, 2)),
            ],
        )
        .unwrap();
        assert_eq!(b3.norm_sq(), rat(11, 20));
        assert_eq!(b3.formal_derivative().norm_sq(), int(1));
        assert_eq!(sigma_w2(&b3).unwrap(), ExtReal::Finite(rat(20, 11)));
    }

    #[test]
    fn interior_jump_is_infinite() {
        let step = PiecewisePoly::new(
            vec![int(-1), int(0), int(1)],
            vec![
                Polynomial::from_ints(&[1, 1]),
                Polynomial::from_ints(&[2, -2]),
            ],
        )
        .unwrap();
        assert_eq!(sigma_w2(&step).unwrap(), ExtReal::Infinite);
        assert_eq!(uncertainty(&step).unwrap(), ExtReal::Infinite);
    }

    #[test]
    fn uncertainty_examples() {
        assert_eq!(
            uncertainty(&PiecewisePoly::tent()).unwrap(),
            ExtReal::Finite(rat(3, 10))
        );
        assert_eq!(
            uncertainty(&PiecewisePoly::rect()).unwrap(),
            ExtReal::Infinite
        );
    }

    #[test]
    fn zero_function_rejected() {
        let z = PiecewisePoly::zero();
        assert_eq!(alpha(&z).unwrap_err(), Error::ZeroFunction);
        assert_eq!(sigma_x2(&z).unwrap_err(), Error::ZeroFunction);
        assert_eq!(sigma_w2(&z).unwrap_err(), Error::ZeroFunction);
        assert_eq!(uncertainty(&z).unwrap_err(), Error::ZeroFunction);
        assert!(atom_moments(&z, &AtomParams::identity(), 0.0).is_err());
    }

    #[test]
    fn atom_examples() {
        let gamma = AtomParams::new(int(2), int(5), int(7)).unwrap();
        let r = atom_moments(&PiecewisePoly::tent(), &gamma, 0.0).unwrap();
        assert_eq!(r.alpha, int(7));
        assert_eq!(r.beta_coeff, int(5));
        assert_eq!(r.sigma_x2, rat(2, 5));
        assert_eq!(r.sigma_w2, ExtReal::Finite(rat(3, 4)));
        assert_eq!(r.uncertainty, ExtReal::Finite(rat(3, 10)));

        let id = AtomParams::identity();
        assert_eq!(
            atom_moments(&g_n(3), &id, 0.0).unwrap().sigma_w2,
            ExtReal::Finite(rat(63, 5))
        );
        assert_eq!(
            atom_moments(&f_n(2), &id, 0.0).unwrap().sigma_w2,
            ExtReal::Finite(rat(5, 2))
        );
    }

    #[test]
    fn atom_params_require_positive_scale() {
        assert!(AtomParams::new(int(0), int(0), int(0)).is_err());
        assert!(AtomParams::new(int(-1), int(0), int(0)).is_err());
    }

    #[test]
    fn ext_real_arithmetic() {
        let two = ExtReal::Finite(int(2));
        assert_eq!(
            two.mul(&ExtReal::Finite(rat(1, 4))).unwrap(),
            ExtReal::Finite(rat(1, 2))
        );
        assert_eq!(two.mul(&ExtReal::Infinite).unwrap(), ExtReal::Infinite);
        assert_eq!(
            ExtReal::Finite(int(0)).mul(&ExtReal::Infinite).unwrap_err(),
            Error::ZeroTimesInfinity
        );
        assert!(ExtReal::Finite(int(1_000_000)) < ExtReal::Infinite);
        assert_eq!(ExtReal::Infinite.to_string(), "inf");
    }

    #[test]
    fn report_json_shape() {
        let r = moments_report(&PiecewisePoly::rect(), 0.0).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["sigma_w2"], "inf");
        assert_eq!(v["U"], "inf");
        assert_eq!(v["sigma_x2"], "1/12");
        let t = moments_report(&PiecewisePoly::tent(), 0.0).unwrap();
        let v = serde_json::to_value(&t).unwrap();
        assert_eq!(v["U"], "3/10");
        assert_eq!(v["U_float"], 0.3);
    }
}
