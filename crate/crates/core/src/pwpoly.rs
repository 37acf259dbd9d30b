//! Compactly supported piecewise polynomials with exact rational pieces.
//!
//! A function is a strictly increasing list of breakpoints `a_1 < ... < a_{n+1}`
//! and one polynomial per interval. Piece `i` owns `[a_i, a_{i+1})`; the last
//! piece also owns its right endpoint. Outside `[a_1, a_{n+1}]` the function
//! is zero. Values at breakpoints never enter an integral.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ratpoly::{int, parse_rational, rat, to_f64, Polynomial, Rational};

/// Samples per piece used by the nonnegativity probe (plus both endpoints).
const NONNEG_SAMPLES: i64 = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Polynomial>,
}

impl PiecewisePoly {
    /// Builds and canonicalizes a function. Adjacent identical pieces are
    /// merged and zero pieces at either edge are trimmed, so two
    /// representations of the same function compare equal.
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidPiecewise(
                "at least one piece is required".into(),
            ));
        }
        if breakpoints.len() != pieces.len() + 1 {
            return Err(Error::InvalidPiecewise(format!(
                "{} breakpoints for {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPiecewise(format!(
                "breakpoints not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        Ok(Self::canonical(breakpoints, pieces))
    }

    pub fn zero() -> Self {
        PiecewisePoly {
            breakpoints: Vec::new(),
            pieces: Vec::new(),
        }
    }

    /// `poly` on `[lo, hi]`, zero elsewhere.
    pub fn single(lo: Rational, hi: Rational, poly: Polynomial) -> Result<Self> {
        Self::new(vec![lo, hi], vec![poly])
    }

    /// Indicator of `[lo, hi]`.
    pub fn indicator(lo: Rational, hi: Rational) -> Result<Self> {
        Self::single(lo, hi, Polynomial::constant(Rational::one()))
    }

    /// `1 - |x|` on `[-1, 1]`.
    pub fn tent() -> Self {
        Self::new(
            vec![int(-1), int(0), int(1)],
            vec![
                Polynomial::from_ints(&[1, 1]),
                Polynomial::from_ints(&[1, -1]),
            ],
        )
        .expect("static tent")
    }

    /// Unit rectangle on `[-1/2, 1/2]`.
    pub fn rect() -> Self {
        Self::indicator(rat(-1, 2), rat(1, 2)).expect("static rect")
    }

    fn canonical(breakpoints: Vec<Rational>, pieces: Vec<Polynomial>) -> Self {
        let mut bps: Vec<Rational> = Vec::with_capacity(breakpoints.len());
        let mut out: Vec<Polynomial> = Vec::with_capacity(pieces.len());
        let mut iter = breakpoints.into_iter();
        if let Some(first) = iter.next() {
            bps.push(first);
        }
        for (right, poly) in iter.zip(pieces) {
            if out.last() == Some(&poly) {
                *bps.last_mut().expect("nonempty") = right;
            } else {
                bps.push(right);
                out.push(poly);
            }
        }
        let lead = out.iter().take_while(|p| p.is_zero()).count();
        if lead == out.len() {
            return Self::zero();
        }
        let trail = out.iter().rev().take_while(|p| p.is_zero()).count();
        let pieces = out[lead..out.len() - trail].to_vec();
        let breakpoints = bps[lead..bps.len() - trail].to_vec();
        PiecewisePoly {
            breakpoints,
            pieces,
        }
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Polynomial] {
        &self.pieces
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.is_empty()
    }

    pub fn support(&self) -> Option<(Rational, Rational)> {
        Some((
            self.breakpoints.first()?.clone(),
            self.breakpoints.last()?.clone(),
        ))
    }

    /// `(lo, hi, poly)` for each piece.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational, &Polynomial)> {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| (&w[0], &w[1], p))
    }

    pub fn max_degree(&self) -> usize {
        self.pieces
            .iter()
            .filter_map(Polynomial::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let Some((lo, hi)) = self.support() else {
            return Rational::zero();
        };
        if x < &lo || x > &hi {
            return Rational::zero();
        }
        if x == &hi {
            return self.pieces.last().expect("nonempty").eval(x);
        }
        let i = self.breakpoints.partition_point(|b| b <= x) - 1;
        self.pieces[i].eval(x)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        let Some((lo, hi)) = self.support() else {
            return 0.0;
        };
        if x < to_f64(&lo) || x > to_f64(&hi) {
            return 0.0;
        }
        let i = self
            .breakpoints
            .partition_point(|b| to_f64(b) <= x)
            .clamp(1, self.pieces.len())
            - 1;
        self.pieces[i].eval_f64(x)
    }

    /// The polynomial in force on `[lo, hi]`, which must lie inside one piece
    /// or entirely outside the support.
    fn piece_on(&self, lo: &Rational, hi: &Rational) -> Polynomial {
        let Some((a, b)) = self.support() else {
            return Polynomial::zero();
        };
        if hi <= &a || lo >= &b {
            return Polynomial::zero();
        }
        let i = self.breakpoints.partition_point(|x| x <= lo) - 1;
        debug_assert!(&self.breakpoints[i + 1] >= hi);
        self.pieces[i].clone()
    }

    fn merged_grid(&self, other: &Self, lo: &Rational, hi: &Rational) -> Vec<Rational> {
        let mut grid: Vec<Rational> = self
            .breakpoints
            .iter()
            .chain(&other.breakpoints)
            .filter(|x| *x >= lo && *x <= hi)
            .cloned()
            .collect();
        grid.push(lo.clone());
        grid.push(hi.clone());
        grid.sort();
        grid.dedup();
        grid
    }

    /// Applies `op` piece by piece on the common refinement of both grids.
    fn combine(
        &self,
        other: &Self,
        over_union: bool,
        op: impl Fn(&Polynomial, &Polynomial) -> Polynomial,
    ) -> Self {
        let range = match (self.support(), other.support()) {
            (Some((a, b)), Some((c, d))) => {
                if over_union {
                    (a.min(c), b.max(d))
                } else {
                    (a.max(c), b.min(d))
                }
            }
            (Some(s), None) | (None, Some(s)) if over_union => s,
            _ => return Self::zero(),
        };
        if range.0 >= range.1 {
            return Self::zero();
        }
        let grid = self.merged_grid(other, &range.0, &range.1);
        let pieces = grid
            .windows(2)
            .map(|w| op(&self.piece_on(&w[0], &w[1]), &other.piece_on(&w[0], &w[1])))
            .collect();
        Self::canonical(grid, pieces)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, true, |p, q| p + q)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, true, |p, q| p - q)
    }

    /// Exact product on the refined grid; the support is the intersection.
    pub fn product(&self, other: &Self) -> Self {
        self.combine(other, false, |p, q| p * q)
    }

    pub fn scale(&self, lambda: &Rational) -> Self {
        if lambda.is_zero() {
            return Self::zero();
        }
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(lambda)).collect(),
        }
    }

    /// `x ↦ λ f(γx − τ)`.
    pub fn affine(&self, lambda: &Rational, gamma: &Rational, tau: &Rational) -> Result<Self> {
        if gamma.is_zero() {
            return Err(Error::ZeroScale);
        }
        if lambda.is_zero() || self.is_zero() {
            return Ok(Self::zero());
        }
        let mut breakpoints: Vec<Rational> =
            self.breakpoints.iter().map(|b| (b + tau) / gamma).collect();
        let mut pieces: Vec<Polynomial> = self
            .pieces
            .iter()
            .map(|p| p.compose_affine(gamma, &-tau).scale(lambda))
            .collect();
        if gamma.is_negative() {
            breakpoints.reverse();
            pieces.reverse();
        }
        Ok(Self::canonical(breakpoints, pieces))
    }

    /// `x ↦ f(x + shift)`, i.e. the graph moved left by `shift`.
    pub fn shift_arg(&self, shift: &Rational) -> Self {
        self.affine(&Rational::one(), &Rational::one(), &-shift)
            .expect("unit scale")
    }

    /// `x ↦ f(2c − x)`.
    pub fn reflect(&self, c: &Rational) -> Self {
        self.affine(&Rational::one(), &-Rational::one(), &(-c * int(2)))
            .expect("unit scale")
    }

    /// Part of `f` on `[lo, hi]`, zero elsewhere.
    pub fn restrict(&self, lo: &Rational, hi: &Rational) -> Self {
        if lo >= hi {
            return Self::zero();
        }
        let window = Self::indicator(lo.clone(), hi.clone()).expect("lo < hi");
        self.product(&window)
    }

    /// Jump `f(x⁺) − f(x⁻)` at every breakpoint, edges included (the function
    /// is zero outside its support).
    pub fn jumps(&self) -> Vec<(Rational, Rational)> {
        let n = self.pieces.len();
        self.breakpoints
            .iter()
            .enumerate()
            .map(|(i, x)| {
                let right = if i < n {
                    self.pieces[i].eval(x)
                } else {
                    Rational::zero()
                };
                let left = if i > 0 {
                    self.pieces[i - 1].eval(x)
                } else {
                    Rational::zero()
                };
                (x.clone(), right - left)
            })
            .collect()
    }

    /// Interior breakpoints where `|f(x⁺) − f(x⁻)| > tol` (exact comparison
    /// when `tol == 0`).
    pub fn interior_jumps(&self, tol: f64) -> Vec<Rational> {
        let jumps = self.jumps();
        if jumps.len() < 3 {
            return Vec::new();
        }
        jumps[1..jumps.len() - 1]
            .iter()
            .filter(|(_, j)| exceeds(j, tol))
            .map(|(x, _)| x.clone())
            .collect()
    }

    /// `(f(a⁺), f(b⁻))` at the support edges.
    pub fn boundary_values(&self) -> (Rational, Rational) {
        match self.support() {
            None => (Rational::zero(), Rational::zero()),
            Some((a, b)) => (
                self.pieces[0].eval(&a),
                self.pieces.last().expect("nonempty").eval(&b),
            ),
        }
    }

    /// Continuous across interior knots and zero at both edges, up to `tol`.
    /// This is exactly the condition for `f′ ∈ L²` as a distribution.
    pub fn vanishes_continuously(&self, tol: f64) -> bool {
        self.jumps().iter().all(|(_, j)| !exceeds(j, tol))
    }

    /// Piecewise formal derivative on the same grid, ignoring any jumps.
    pub fn formal_derivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self::canonical(
            self.breakpoints.clone(),
            self.pieces.iter().map(Polynomial::derivative).collect(),
        )
    }

    /// Derivative of a function without interior jumps.
    pub fn derivative(&self) -> Result<Self> {
        if let Some(at) = self.interior_jumps(0.0).into_iter().next() {
            return Err(Error::InteriorJump { at });
        }
        Ok(self.formal_derivative())
    }

    /// `∫ x^k f(x) dx`, or `∫ x^k f(x)² dx` when `squared`.
    pub fn moment(&self, k: usize, squared: bool) -> Rational {
        if squared {
            return self.squared_moments(k).pop().expect("k_max + 1 entries");
        }
        let one = Polynomial::from_ints(&[1]);
        self.intervals()
            .map(|(a, b, p)| {
                Polynomial::integrate_product_moments(p, &one, k, a, b)
                    .expect("ordered breakpoints")
                    .pop()
                    .expect("k + 1 entries")
            })
            .sum()
    }

    /// `[∫ f², ∫ x f², ..., ∫ x^k_max f²]`, squaring each piece once.
    pub fn squared_moments(&self, k_max: usize) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); k_max + 1];
        for (a, b, p) in self.intervals() {
            let parts = Polynomial::integrate_product_moments(p, p, k_max, a, b)
                .expect("ordered breakpoints");
            for (slot, v) in acc.iter_mut().zip(parts) {
                *slot += v;
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> Rational {
        self.moment(0, true)
    }

    /// Evenness about `c`. Exact structural comparison when `tol == 0`,
    /// otherwise sampled on a dyadic refinement of both grids.
    pub fn is_even_about(&self, c: &Rational, tol: f64) -> bool {
        let mirrored = self.reflect(c);
        if tol == 0.0 {
            return &mirrored == self;
        }
        let Some((lo, hi)) = self
            .support()
            .zip(mirrored.support())
            .map(|((a, b), (c, d))| (a.min(c), b.max(d)))
        else {
            return true;
        };
        let grid = self.merged_grid(&mirrored, &lo, &hi);
        grid.windows(2).all(|w| {
            dyadic(&w[0], &w[1]).all(|x| {
                let d = self.eval(&x) - mirrored.eval(&x);
                !exceeds(&d, tol)
            })
        })
    }

    /// Samples every piece at `2^6 + 1` dyadic points. `NotVerified` means a
    /// sample fell below `-tol`.
    pub fn nonnegativity(&self, tol: f64) -> Nonnegativity {
        let ok = self.intervals().all(|(a, b, p)| {
            dyadic(a, b).all(|x| {
                let v = p.eval(&x);
                !v.is_negative() || !exceeds(&v, tol)
            })
        });
        if ok {
            Nonnegativity::Verified
        } else {
            Nonnegativity::NotVerified
        }
    }

    pub fn classify(&self, tol: f64) -> ClassTag {
        let interior_jumps = self.interior_jumps(tol);
        let boundary_values = self.boundary_values();
        let nonnegativity = self.nonnegativity(tol);
        let even = match self.support() {
            Some((a, b)) => self.is_even_about(&((a + b) / int(2)), tol),
            None => true,
        };
        let class = if self.is_zero() || !interior_jumps.is_empty() {
            FunctionClass::None
        } else if nonnegativity != Nonnegativity::Verified {
            FunctionClass::FSupp
        } else if !exceeds(&boundary_values.0, tol) && !exceeds(&boundary_values.1, tol) {
            if even {
                FunctionClass::PPlusZero
            } else {
                FunctionClass::FPlusZero
            }
        } else {
            FunctionClass::FPlusSupp
        };
        ClassTag {
            class,
            interior_jumps,
            boundary_values,
            nonnegativity,
            even,
        }
    }

    pub fn to_descriptor(&self) -> FunctionDescriptor {
        FunctionDescriptor {
            breakpoints: self.breakpoints.iter().map(|b| b.to_string()).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| p.coeffs().iter().map(|c| c.to_string()).collect())
                .collect(),
        }
    }

    pub fn from_descriptor(d: &FunctionDescriptor) -> Result<Self> {
        if d.breakpoints.is_empty() && d.pieces.is_empty() {
            return Ok(Self::zero());
        }
        let breakpoints = d
            .breakpoints
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>>>()?;
        let pieces = d
            .pieces
            .iter()
            .map(|cs| {
                cs.iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<Vec<_>>>()
                    .map(Polynomial::new)
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(breakpoints, pieces)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let d: FunctionDescriptor = serde_json::from_str(s).map_err(|e| {
            Error::InvalidPiecewise(format!("line {} column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_descriptor(&d)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_descriptor()).expect("plain strings")
    }
}

impl fmt::Debug for PiecewisePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "PiecewisePoly(0)");
        }
        let mut list = f.debug_list();
        for (a, b, p) in self.intervals() {
            list.entry(&format_args!("[{a}, {b}): {p}"));
        }
        list.finish()
    }
}

impl Serialize for PiecewisePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for PiecewisePoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let desc = FunctionDescriptor::deserialize(d)?;
        Self::from_descriptor(&desc).map_err(serde::de::Error::custom)
    }
}

/// Wire form: rationals as strings, pieces in ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDescriptor {
    pub breakpoints: Vec<String>,
    pub pieces: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctionClass {
    #[serde(rename = "F_supp")]
    FSupp,
    #[serde(rename = "F_plus_supp")]
    FPlusSupp,
    #[serde(rename = "F_plus_zero")]
    FPlusZero,
    #[serde(rename = "P_plus_zero")]
    PPlusZero,
    #[serde(rename = "none")]
    None,
}

impl FunctionClass {
    /// Whether the class is contained in `F⁺_0` (nonnegative, continuous,
    /// vanishing at both edges).
    pub fn is_plus_zero(self) -> bool {
        matches!(self, FunctionClass::FPlusZero | FunctionClass::PPlusZero)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Nonnegativity {
    Verified,
    NotVerified,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassTag {
    pub class: FunctionClass,
    #[serde(with = "crate::ratpoly::rational_str::vec")]
    pub interior_jumps: Vec<Rational>,
    #[serde(serialize_with = "ser_pair")]
    pub boundary_values: (Rational, Rational),
    pub nonnegativity: Nonnegativity,
    pub even: bool,
}

fn ser_pair<S: serde::Serializer>(
    v: &(Rational, Rational),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    [v.0.to_string(), v.1.to_string()].serialize(s)
}

fn exceeds(value: &Rational, tol: f64) -> bool {
    if tol == 0.0 {
        !value.is_zero()
    } else {
        to_f64(value).abs().partial_cmp(&tol) == Some(Ordering::Greater)
    }
}

fn dyadic<'a>(a: &'a Rational, b: &'a Rational) -> impl Iterator<Item = Rational> + 'a {
    let width = b - a;
    (0..=NONNEG_SAMPLES).map(move |j| a + &width * rat(j, NONNEG_SAMPLES))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_ints(c)
    }

    #[test]
    fn rejects_bad_layouts() {
        assert!(PiecewisePoly::new(vec![int(0)], vec![]).is_err());
        assert!(PiecewisePoly::new(vec![int(0), int(1)], vec![p(&[1]), p(&[2])]).is_err());
        assert!(PiecewisePoly::new(vec![int(1), int(1)], vec![p(&[1])]).is_err());
        assert!(PiecewisePoly::new(vec![int(2), int(1)], vec![p(&[1])]).is_err());
    }

    #[test]
    fn canonical_merge_and_trim() {
        let f = PiecewisePoly::new(
            vec![int(-2), int(-1), int(0), int(1), int(2)],
            vec![p(&[]), p(&[3]), p(&[3]), p(&[])],
        )
        .unwrap();
        assert_eq!(f.breakpoints(), &[int(-1), int(1)]);
        assert_eq!(f.pieces(), &[p(&[3])]);
        let z = PiecewisePoly::new(vec![int(0), int(1)], vec![p(&[0])]).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn eval_examples() {
        let tent = PiecewisePoly::tent();
        assert_eq!(tent.eval(&int(0)), int(1));
        assert_eq!(tent.eval(&int(2)), int(0));
        assert_eq!(tent.eval(&rat(1, 2)), rat(1, 2));
        // right-continuous convention, closed at the last breakpoint
        let step =
            PiecewisePoly::new(vec![int(0), int(1), int(2)], vec![p(&[1]), p(&[5])]).unwrap();
        assert_eq!(step.eval(&int(1)), int(5));
        assert_eq!(step.eval(&int(2)), int(5));
        assert_eq!(step.eval(&int(0)), int(1));
        assert_eq!(step.eval_f64(1.0), 5.0);
        assert_eq!(step.eval_f64(2.5), 0.0);
    }

    #[test]
    fn affine_examples() {
        let tent = PiecewisePoly::tent();
        let moved = tent.affine(&int(1), &int(1), &int(1)).unwrap();
        assert_eq!(moved.support(), Some((int(0), int(2))));
        assert_eq!(moved.eval(&int(1)), int(1));
        let tall = tent.affine(&int(2), &int(1), &int(0)).unwrap();
        assert_eq!(tall.eval(&int(0)), int(2));
        assert_eq!(tent.affine(&int(1), &int(-1), &int(0)).unwrap(), tent);
        assert_eq!(
            tent.affine(&int(1), &int(0), &int(0)).unwrap_err(),
            Error::ZeroScale
        );
    }

    #[test]
    fn derivative_examples() {
        let d = PiecewisePoly::tent().derivative().unwrap();
        assert_eq!(d.pieces(), &[p(&[1]), p(&[-1])]);
        assert_eq!(d.breakpoints(), &[int(-1), int(0), int(1)]);
        let mid = PiecewisePoly::single(
            rat(-1, 2),
            rat(1, 2),
            Polynomial::new(vec![rat(3, 4), int(0), int(-1)]),
        )
        .unwrap();
        assert_eq!(mid.derivative().unwrap().pieces(), &[p(&[0, -2])]);
        let constant = PiecewisePoly::indicator(int(0), int(1)).unwrap();
        assert!(constant.derivative().unwrap().is_zero());
    }

    #[test]
    fn derivative_rejects_interior_jump() {
        let step =
            PiecewisePoly::new(vec![int(0), int(1), int(2)], vec![p(&[1]), p(&[2])]).unwrap();
        assert_eq!(
            step.derivative().unwrap_err(),
            Error::InteriorJump { at: int(1) }
        );
    }

    #[test]
    fn product_examples() {
        let tent = PiecewisePoly::tent();
        let sq = tent.product(&tent);
        assert_eq!(sq.pieces(), &[p(&[1, 2, 1]), p(&[1, -2, 1])]);
        assert!(tent.product(&PiecewisePoly::zero()).is_zero());
        let rect = PiecewisePoly::rect();
        assert_eq!(rect.product(&rect), rect);
    }

    #[test]
    fn moment_examples() {
        let tent = PiecewisePoly::tent();
        assert_eq!(tent.moment(0, true), rat(2, 3));
        assert_eq!(tent.moment(1, true), int(0));
        assert_eq!(tent.moment(2, true), rat(1, 15));
        assert_eq!(tent.moment(0, false), int(1));
    }

    #[test]
    fn classify_examples() {
        let rect = PiecewisePoly::rect().classify(0.0);
        assert_eq!(rect.class, FunctionClass::FPlusSupp);
        assert_eq!(rect.boundary_values, (int(1), int(1)));
        assert_eq!(
            PiecewisePoly::tent().classify(0.0).class,
            FunctionClass::PPlusZero
        );
        let step =
            PiecewisePoly::new(vec![int(0), int(1), int(2)], vec![p(&[1]), p(&[2])]).unwrap();
        let tag = step.classify(0.0);
        assert_eq!(tag.class, FunctionClass::None);
        assert_eq!(tag.interior_jumps, vec![int(1)]);
        let negative = PiecewisePoly::single(int(0), int(1), p(&[0, -1, 1])).unwrap();
        assert_eq!(negative.classify(0.0).class, FunctionClass::FSupp);
        let lopsided = PiecewisePoly::single(int(0), int(1), p(&[0, 1, -1])).unwrap();
        assert_eq!(lopsided.classify(0.0).class, FunctionClass::PPlusZero);
        let skew = PiecewisePoly::single(int(0), int(1), p(&[0, 1, 0, -1])).unwrap();
        assert_eq!(skew.classify(0.0).class, FunctionClass::FPlusZero);
    }

    #[test]
    fn tolerance_relaxes_boundary_zero() {
        let eps = rat(-1, 10_000_000_000);
        let f = PiecewisePoly::single(
            int(0),
            int(1),
            Polynomial::new(vec![int(0), int(1), int(-1)])
                + Polynomial::new(vec![int(0), eps.clone()]),
        )
        .unwrap();
        assert_eq!(f.classify(0.0).class, FunctionClass::FSupp);
        assert_eq!(f.classify(1e-9).class, FunctionClass::PPlusZero);
        assert!(!f.vanishes_continuously(0.0));
        assert!(f.vanishes_continuously(1e-9));
    }

    #[test]
    fn reflect_examples() {
        let tent = PiecewisePoly::tent();
        assert_eq!(tent.reflect(&int(0)), tent);
        let unit = PiecewisePoly::indicator(int(0), int(1)).unwrap();
        assert_eq!(
            unit.reflect(&int(0)),
            PiecewisePoly::indicator(int(-1), int(0)).unwrap()
        );
        let ramp = PiecewisePoly::single(int(0), int(1), p(&[0, 1])).unwrap();
        assert_eq!(
            ramp.reflect(&rat(1, 2)),
            PiecewisePoly::single(int(0), int(1), p(&[1, -1])).unwrap()
        );
    }

    #[test]
    fn descriptor_round_trip() {
        let json = r#"{"breakpoints": ["-1","0","1"], "pieces": [["1","1"],["1","-1"]]}"#;
        let f = PiecewisePoly::from_json(json).unwrap();
        assert_eq!(f, PiecewisePoly::tent());
        assert_eq!(PiecewisePoly::from_json(&f.to_json()).unwrap(), f);
        let err =
            PiecewisePoly::from_json("{\"breakpoints\": [\"0\",\n \"x\"], \"pieces\": [[\"1\"]]}")
                .unwrap_err();
        assert!(matches!(err, Error::ParseRational { .. }));
        let err = PiecewisePoly::from_json("{\"breakpoints\": [\n1]}").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");
    }

    #[test]
    fn add_sub_over_union() {
        let left = PiecewisePoly::indicator(int(0), int(1)).unwrap();
        let right = PiecewisePoly::indicator(int(2), int(3)).unwrap();
        let both = left.add(&right);
        assert_eq!(both.support(), Some((int(0), int(3))));
        assert_eq!(both.eval(&rat(3, 2)), int(0));
        assert!(both.sub(&right).sub(&left).is_zero());
    }
}
