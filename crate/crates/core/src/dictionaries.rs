//! The two envelope families on `[−1, 1]` (at scale `t = 1`):
//! `G_n ∝ (1 − |x|)ⁿ` and `F_n ∝ 1 − |x|ⁿ`, with closed-form moments.
//!
//! Envelopes are stored without their normalizing prefactor, whose square
//! is rational while the prefactor itself usually is not.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moments::{sigma_w2, sigma_x2, ExtReal};
use crate::pwpoly::PiecewisePoly;
use crate::ratpoly::{int, rat, to_f64, Polynomial, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Family {
    G,
    F,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::G => 'G',
            Family::F => 'F',
        }
    }

    /// Smallest admissible index.
    pub fn first(self) -> u32 {
        match self {
            Family::G => 0,
            Family::F => 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "G" | "g" => Ok(Family::G),
            "F" | "f" => Ok(Family::F),
            other => Err(Error::Precondition(format!(
                "unknown family {other:?}, expected G or F"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DictionaryId {
    family: Family,
    n: u32,
}

impl DictionaryId {
    pub fn new(family: Family, n: u32) -> Result<Self> {
        if n < family.first() {
            return Err(Error::InvalidDictionary {
                family: family.letter(),
                n,
            });
        }
        Ok(DictionaryId { family, n })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }
}

impl fmt::Display for DictionaryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.n)
    }
}

fn sign(n: u32) -> Rational {
    if n.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Unnormalized envelope shape on `[−1, 1]`.
pub fn envelope(id: DictionaryId) -> PiecewisePoly {
    let n = id.n as usize;
    let (left, right) = match id.family {
        // (1 + x)ⁿ and (1 − x)ⁿ
        Family::G => (
            Polynomial::shifted_power(&int(-1), n),
            Polynomial::shifted_power(&int(1), n).scale(&sign(id.n)),
        ),
        // 1 − (−x)ⁿ and 1 − xⁿ
        Family::F => {
            let one = Polynomial::from_ints(&[1]);
            let xn = Polynomial::monomial(int(1), n);
            (&one - &xn.scale(&sign(id.n)), &one - &xn)
        }
    };
    PiecewisePoly::new(vec![int(-1), int(0), int(1)], vec![left, right]).expect("valid grid")
}

/// Square of the factor that gives the envelope unit `L²` norm.
pub fn prefactor_sq(id: DictionaryId) -> Rational {
    let n = int(id.n as i64);
    let one = int(1);
    let two = int(2);
    match id.family {
        Family::G => (&two * &n + &one) / two,
        Family::F => (&two * &n + &one) * (&n + &one) / (int(4) * &n * &n),
    }
}

pub fn closed_sigma_x2(id: DictionaryId) -> Rational {
    let n = int(id.n as i64);
    match id.family {
        Family::G => (&n * &n * int(2) + &n * int(5) + int(3)).recip(),
        Family::F => {
            (&n * int(2) + int(1)) * (&n + int(1))
                / ((&n * &n * int(2) + &n * int(9) + int(9)) * int(3))
        }
    }
}

pub fn closed_sigma_w2(id: DictionaryId) -> ExtReal {
    let n = int(id.n as i64);
    match id.family {
        Family::G if id.n == 0 => ExtReal::Infinite,
        Family::G => ExtReal::Finite(&n * &n * (&n * int(2) + int(1)) / (&n * int(2) - int(1))),
        Family::F => ExtReal::Finite(
            (&n * int(2) + int(1)) * (&n + int(1)) / ((&n * int(2) - int(1)) * int(2)),
        ),
    }
}

pub fn closed_uncertainty(id: DictionaryId) -> ExtReal {
    let n = int(id.n as i64);
    let two_n_plus_1 = &n * int(2) + int(1);
    let two_n_minus_1 = &n * int(2) - int(1);
    match id.family {
        Family::G if id.n == 0 => ExtReal::Infinite,
        Family::G => ExtReal::Finite(
            &n * &n * &two_n_plus_1 / ((&n * &n * int(2) + &n * int(5) + int(3)) * two_n_minus_1),
        ),
        Family::F => {
            let np1 = &n + int(1);
            ExtReal::Finite(
                &two_n_plus_1 * &two_n_plus_1 * &np1 * &np1
                    / (two_n_minus_1 * (&n * &n * int(2) + &n * int(9) + int(9)) * int(6)),
            )
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DictRow {
    pub id: DictionaryId,
    pub sigma_x2: Rational,
    pub sigma_w2: ExtReal,
    pub uncertainty: ExtReal,
}

impl DictRow {
    pub fn uncertainty_float(&self) -> f64 {
        self.uncertainty.to_f64()
    }
}

/// Row for one index, computed from the envelope and checked against the
/// closed forms.
pub fn dict_row(id: DictionaryId) -> Result<DictRow> {
    let f = envelope(id);
    let sx = sigma_x2(&f)?;
    let sw = sigma_w2(&f)?;
    let u = ExtReal::Finite(sx.clone()).mul(&sw)?;
    let closed = (
        closed_sigma_x2(id),
        closed_sigma_w2(id),
        closed_uncertainty(id),
    );
    if (&sx, &sw, &u) != (&closed.0, &closed.1, &closed.2) {
        return Err(Error::Inconsistent(format!(
            "{id}: pipeline (σ_x² {sx}, σ_ω² {sw}, U {u}) vs closed form ({}, {}, {})",
            closed.0, closed.1, closed.2
        )));
    }
    Ok(DictRow {
        id,
        sigma_x2: sx,
        sigma_w2: sw,
        uncertainty: u,
    })
}

/// Rows `n = 1..=n_max`.
pub fn dict_table(family: Family, n_max: u32) -> Result<Vec<DictRow>> {
    if n_max < 1 {
        return Err(Error::Precondition(
            "dictionary table needs n_max >= 1".into(),
        ));
    }
    (1..=n_max)
        .map(|n| dict_row(DictionaryId::new(family, n)?))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct MinimizerReport {
    pub family: Family,
    pub n_max: u32,
    pub argmin: u32,
    #[serde(with = "crate::ratpoly::rational_str")]
    pub min_value: Rational,
    pub max_value: f64,
    /// `U(n_max) / (n_max/6)`, reported for the `F` family.
    pub growth_ratio: Option<f64>,
}

fn claim(name: &str, detail: String) -> Error {
    Error::ClaimFailed {
        claim: name.into(),
        detail,
    }
}

/// Checks the minimizer and growth claims on `1..=n_max` from the closed
/// forms: the minimum is `3/10` at `n = 1`; `U_G` is strictly increasing and
/// below `1/2`; `U_F(n_max)/(n_max/6)` is within 5% of 1 once `n_max ≥ 100`.
pub fn verify_minimizer(family: Family, n_max: u32) -> Result<MinimizerReport> {
    if n_max < 2 {
        return Err(Error::Precondition(
            "minimizer check needs n_max >= 2".into(),
        ));
    }
    let values: Vec<Rational> = (1..=n_max)
        .map(|n| {
            closed_uncertainty(DictionaryId::new(family, n)?)
                .finite()
                .cloned()
                .ok_or_else(|| Error::Inconsistent(format!("U({family}{n}) infinite")))
        })
        .collect::<Result<_>>()?;
    let (idx, min) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.cmp(b.1).then(a.0.cmp(&b.0)))
        .expect("nonempty");
    let argmin = idx as u32 + 1;
    if argmin != 1 || *min != rat(3, 10) {
        return Err(claim(
            "argmin U is n = 1 with value 3/10",
            format!("argmin {argmin}, value {min}"),
        ));
    }
    if let Some(w) = values.windows(2).position(|w| w[1] <= w[0]) {
        return Err(claim(
            "U strictly increasing in n",
            format!(
                "U({}) = {} >= U({}) = {}",
                w + 2,
                values[w + 1],
                w + 1,
                values[w]
            ),
        ));
    }
    let last = values.last().expect("nonempty");
    let mut growth_ratio = None;
    match family {
        Family::G => {
            if *last >= rat(1, 2) {
                return Err(claim("U_G < 1/2", format!("U({n_max}) = {last}")));
            }
        }
        Family::F => {
            let ratio = to_f64(last) / (n_max as f64 / 6.0);
            if n_max >= 100 && !(0.95..=1.05).contains(&ratio) {
                return Err(claim(
                    "U_F(n)/(n/6) -> 1",
                    format!("ratio {ratio} at n = {n_max}"),
                ));
            }
            growth_ratio = Some(ratio);
        }
    }
    Ok(MinimizerReport {
        family,
        n_max,
        argmin,
        min_value: min.clone(),
        max_value: to_f64(last),
        growth_ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn id(family: Family, n: u32) -> DictionaryId {
        DictionaryId::new(family, n).unwrap()
    }

    #[test]
    fn index_validation() {
        assert!(DictionaryId::new(Family::G, 0).is_ok());
        assert_eq!(
            DictionaryId::new(Family::F, 0),
            Err(Error::InvalidDictionary { family: 'F', n: 0 })
        );
        assert_eq!("g".parse::<Family>().unwrap(), Family::G);
        assert!("H".parse::<Family>().is_err());
    }

    #[test]
    fn envelope_shapes() {
        assert_eq!(envelope(id(Family::G, 1)), PiecewisePoly::tent());
        assert_eq!(
            envelope(id(Family::G, 0)),
            PiecewisePoly::indicator(int(-1), int(1)).unwrap()
        );
        assert_eq!(envelope(id(Family::F, 1)), envelope(id(Family::G, 1)));
        let f2 = envelope(id(Family::F, 2));
        assert_eq!(f2.pieces().len(), 1);
        assert_eq!(f2.pieces()[0], Polynomial::from_ints(&[1, 0, -1]));
    }

    #[test]
    fn normalization() {
        for family in [Family::G, Family::F] {
            for n in 1..=12 {
                let i = id(family, n);
                assert_eq!(envelope(i).norm_sq() * prefactor_sq(i), int(1), "{i}");
            }
        }
        assert_eq!(envelope(id(Family::G, 1)).norm_sq(), rat(2, 3));
    }

    #[test]
    fn closed_form_examples() {
        let u = |f, n| closed_uncertainty(id(f, n));
        assert_eq!(u(Family::G, 1), ExtReal::Finite(rat(3, 10)));
        assert_eq!(u(Family::G, 2), ExtReal::Finite(rat(20, 63)));
        assert_eq!(u(Family::G, 3), ExtReal::Finite(rat(7, 20)));
        assert_eq!(u(Family::F, 2), ExtReal::Finite(rat(5, 14)));
        assert_eq!(u(Family::F, 3), ExtReal::Finite(rat(196, 405)));
        assert_eq!(u(Family::G, 0), ExtReal::Infinite);
    }

    #[test]
    fn tables() {
        let g = dict_table(Family::G, 3).unwrap();
        let sx: Vec<_> = g.iter().map(|r| r.sigma_x2.clone()).collect();
        assert_eq!(sx, vec![rat(1, 10), rat(1, 21), rat(1, 36)]);
        let f = dict_table(Family::F, 3).unwrap();
        let sw: Vec<_> = f.iter().map(|r| r.sigma_w2.clone()).collect();
        assert_eq!(
            sw,
            [rat(3, 1), rat(5, 2), rat(14, 5)]
                .map(ExtReal::Finite)
                .to_vec()
        );
        assert!(dict_table(Family::G, 0).is_err());
        assert_eq!(
            dict_row(id(Family::G, 0)).unwrap().uncertainty,
            ExtReal::Infinite
        );
    }

    #[test]
    fn minimizer_examples() {
        let g = verify_minimizer(Family::G, 100).unwrap();
        assert_eq!((g.argmin, g.min_value.clone()), (1, rat(3, 10)));
        assert!((g.max_value - 0.4926).abs() < 1e-4 && g.max_value < 0.5);
        let f = verify_minimizer(Family::F, 100).unwrap();
        assert!((f.growth_ratio.unwrap() - 0.990).abs() < 1e-3);
        assert_eq!(verify_minimizer(Family::G, 2).unwrap().argmin, 1);
        assert!(verify_minimizer(Family::G, 1).is_err());
    }
}
