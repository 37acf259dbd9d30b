//! The cardinal B-spline family `rect^{p}`: the `p`-fold self-convolution of
//! the unit rectangle, supported on `[-p/2, p/2]` with integer-spaced knots.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{float_json, ExtReal};
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{int, rat, to_f64, Polynomial, Rational};

fn check_order(p: usize) -> Result<()> {
    if p < 1 {
        return Err(Error::Precondition(format!("rect^p needs p >= 1, got {p}")));
    }
    Ok(())
}

fn knots(p: usize) -> Vec<Rational> {
    let half = rat(p as i64, 2);
    (0..=p).map(|j| int(j as i64) - &half).collect()
}

/// Truncated-power form: `(1/(p−1)!) Σ_j (−1)^j C(p,j) max(0, x + p/2 − j)^{p−1}`,
/// expanded one knot interval at a time.
pub fn rect_p_explicit(p: usize) -> Result<PiecewisePoly> {
    check_order(p)?;
    let knots = knots(p);
    if p == 1 {
        return PiecewisePoly::indicator(knots[0].clone(), knots[1].clone());
    }
    let factorial: BigInt = (1..p).map(BigInt::from).product();
    let mut binom = BigInt::one();
    let mut running = Polynomial::zero();
    let mut pieces = Vec::with_capacity(p);
    for (j, knot) in knots.iter().take(p).enumerate() {
        let sign = if j.is_multiple_of(2) { 1 } else { -1 };
        let weight = Rational::new(binom.clone() * sign, factorial.clone());
        running = &running + &Polynomial::shifted_power(knot, p - 1).scale(&weight);
        pieces.push(running.clone());
        binom = binom * BigInt::from(p - j) / BigInt::from(j + 1);
    }
    PiecewisePoly::new(knots, pieces)
}

/// Builds `rect^{p}(x) = A(x + 1/2) − A(x − 1/2)` from the exact
/// antiderivative `A` of `rect^{p−1}`, starting from the indicator.
pub fn rect_p_recursive(p: usize) -> Result<PiecewisePoly> {
    check_order(p)?;
    let mut current = PiecewisePoly::rect();
    for order in 2..=p {
        current = smooth_once(&current, order)?;
    }
    Ok(current)
}

/// `rect^{1}, ..., rect^{p_max}` by repeated smoothing, one pass.
pub fn rect_p_recursive_sequence(p_max: usize) -> Result<Vec<PiecewisePoly>> {
    check_order(p_max)?;
    let mut out = vec![PiecewisePoly::rect()];
    for order in 2..=p_max {
        let next = smooth_once(out.last().expect("nonempty"), order)?;
        out.push(next);
    }
    Ok(out)
}

/// One convolution with the unit rectangle. `prev` is `rect^{order−1}`,
/// whose pieces sit on `[i − (order−1)/2, i + 1 − (order−1)/2]`.
fn smooth_once(prev: &PiecewisePoly, order: usize) -> Result<PiecewisePoly> {
    let half = rat(1, 2);
    // antiderivative pieces, continuous, starting at zero on the left
    let mut anti: Vec<Polynomial> = Vec::with_capacity(prev.pieces().len());
    let mut offset = Rational::zero();
    for (a, b, poly) in prev.intervals() {
        let prim = poly.antiderivative();
        let shift = &offset - prim.eval(a);
        let piece = &prim + &Polynomial::constant(shift);
        offset = piece.eval(b);
        anti.push(piece);
    }
    let total = Polynomial::constant(offset);
    let n = anti.len();
    let anti_at = |i: isize| -> Polynomial {
        if i < 0 {
            Polynomial::zero()
        } else if i as usize >= n {
            total.clone()
        } else {
            anti[i as usize].clone()
        }
    };
    let pieces = (0..order as isize)
        .map(|j| {
            let ahead = anti_at(j).compose_affine(&Rational::one(), &half);
            let behind = anti_at(j - 1).compose_affine(&Rational::one(), &-half.clone());
            &ahead - &behind
        })
        .collect();
    PiecewisePoly::new(knots(order), pieces)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    pub p: usize,
    pub u_p: Rational,
    pub nu_p: ExtReal,
    pub uncertainty: ExtReal,
    pub uncertainty_float: f64,
}

impl Serialize for ScanRow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serde_json::json!({
            "p": self.p,
            "u_p": self.u_p.to_string(),
            "nu_p": self.nu_p.to_string(),
            "U": self.uncertainty.to_string(),
            "U_float": float_json(self.uncertainty_float),
        })
        .serialize(s)
    }
}

/// Exact `u_p`, `ν_p` and `U` for one order. `p = 1` gives `ν_1 = ∞`.
pub fn scan_row(p: usize) -> Result<ScanRow> {
    let f = rect_p_explicit(p)?;
    let m = f.squared_moments(2);
    let norm = &m[0];
    let u_p = &m[2] / norm;
    let nu_p = if f.vanishes_continuously(0.0) {
        ExtReal::Finite(f.formal_derivative().norm_sq() / norm)
    } else {
        ExtReal::Infinite
    };
    let uncertainty = ExtReal::Finite(u_p.clone()).mul(&nu_p)?;
    Ok(ScanRow {
        p,
        uncertainty_float: uncertainty.to_f64(),
        u_p,
        nu_p,
        uncertainty,
    })
}

/// Rows for `p_min..=p_max`, sorted by `p`. Fails if `U` is not strictly
/// decreasing across the range.
pub fn rect_scan(p_min: usize, p_max: usize) -> Result<Vec<ScanRow>> {
    if p_min < 2 || p_min > p_max {
        return Err(Error::Precondition(format!(
            "rect scan needs 2 <= p_min <= p_max, got {p_min}..{p_max}"
        )));
    }
    let rows = (p_min..=p_max).map(scan_row).collect::<Result<Vec<_>>>()?;
    if let Some(w) = rows
        .windows(2)
        .find(|w| w[1].uncertainty >= w[0].uncertainty)
    {
        return Err(Error::ClaimFailed {
            claim: "U(rect^p) strictly decreasing".into(),
            detail: format!(
                "U({}) = {} <= U({}) = {}",
                w[0].p, w[0].uncertainty, w[1].p, w[1].uncertainty
            ),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct LimitReport {
    pub rows: Vec<ScanRow>,
    /// `(U(8) − 1/4)·8`, the reference for the `O(1/p)` envelope.
    pub envelope_ref: f64,
    pub excess_at_max: f64,
}

/// Checks strict decrease on `[2, p_max]`, the Heisenberg floor `U > 1/4`
/// and that `(U(p) − 1/4)·p` stays below twice its value at `p = 8`.
pub fn limit_check(p_max: usize) -> Result<LimitReport> {
    if p_max < 8 {
        return Err(Error::Precondition(format!(
            "limit check needs p_max >= 8, got {p_max}"
        )));
    }
    let rows = rect_scan(2, p_max)?;
    let quarter = rat(1, 4);
    let excess = |row: &ScanRow| -> Rational {
        row.uncertainty.finite().expect("finite for p >= 2") - &quarter
    };
    for row in &rows {
        if excess(row) <= Rational::zero() {
            return Err(Error::ClaimFailed {
                claim: "U(rect^p) > 1/4".into(),
                detail: format!("p = {}: U = {}", row.p, row.uncertainty),
            });
        }
    }
    let scaled = |row: &ScanRow| excess(row) * int(row.p as i64);
    let reference = scaled(&rows[6]);
    debug_assert_eq!(rows[6].p, 8);
    let bound = &reference * int(2);
    for row in rows.iter().filter(|r| r.p >= 8) {
        if scaled(row) > bound {
            return Err(Error::ClaimFailed {
                claim: "(U(p) - 1/4)·p <= 2·(U(8) - 1/4)·8".into(),
                detail: format!(
                    "p = {}: {} > {}",
                    row.p,
                    to_f64(&scaled(row)),
                    to_f64(&bound)
                ),
            });
        }
    }
    let excess_at_max = to_f64(&excess(rows.last().expect("nonempty")));
    Ok(LimitReport {
        envelope_ref: to_f64(&reference),
        excess_at_max,
        rows,
    })
}
