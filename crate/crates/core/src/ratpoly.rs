//! Exact rational scalars and dense single-variable polynomials.
//!
//! Every time-domain integral in the crate reduces to integrating a
//! polynomial with rational coefficients between rational bounds, so this
//! module carries the whole exactness contract.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ToPrimitive only fails on overflow of the exponent range.
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"n"`, `"n/d"` or a plain decimal literal such as `"-0.0095109093"`
/// or `"1.5e-3"`. Decimals convert digit for digit, with no rounding.
pub fn parse_rational(input: &str) -> Result<Rational> {
    let s = input.trim();
    let fail = |reason: &str| Error::ParseRational {
        input: input.to_string(),
        reason: reason.to_string(),
    };
    if s.is_empty() {
        return Err(fail("empty string"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| fail("bad numerator"))?;
        let d: BigInt = d.trim().parse().map_err(|_| fail("bad denominator"))?;
        if d.is_zero() {
            return Err(fail("zero denominator"));
        }
        return Ok(Rational::new(n, d));
    }

    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i64 = s[i + 1..].parse().map_err(|_| fail("bad exponent"))?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(fail("no digits"));
    }
    if !whole
        .chars()
        .chain(frac.chars())
        .all(|c| c.is_ascii_digit())
    {
        return Err(fail("unexpected character"));
    }
    let all_digits = format!("{whole}{frac}");
    let mut value = Rational::from_integer(
        all_digits
            .parse::<BigInt>()
            .map_err(|_| fail("bad digits"))?,
    );
    let scale = exponent - frac.len() as i64;
    let ten = BigInt::from(10);
    let power = Rational::from_integer(num_traits::pow(ten, scale.unsigned_abs() as usize));
    if scale >= 0 {
        value *= power;
    } else {
        value /= power;
    }
    Ok(if negative { -value } else { value })
}

/// Serde adapter storing a [`Rational`] as its `"num/den"` string.
pub mod rational_str {
    use super::*;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(
            v: &[Rational],
            s: S,
        ) -> std::result::Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&r.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(
            d: D,
        ) -> std::result::Result<Vec<Rational>, D::Error> {
            Vec::<String>::deserialize(d)?
                .iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}

/// Dense polynomial, coefficients in ascending degree, stored as integer
/// numerators over one positive common denominator. The representation is
/// canonical: no trailing zero numerators, and the numerators share no
/// common factor with the denominator. The zero polynomial has no
/// coefficients and denominator 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Default for Polynomial {
    fn default() -> Self {
        Self::zero()
    }
}

impl Polynomial {
    pub fn new(coeffs: Vec<Rational>) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        Self::from_parts(num, den)
    }

    fn from_parts(mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        while num.last().is_some_and(Zero::is_zero) {
            num.pop();
        }
        if num.is_empty() {
            return Self::zero();
        }
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -&*c;
            }
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            for c in &mut num {
                *c /= &g;
            }
            den /= &g;
        }
        Polynomial { num, den }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_parts(
            coeffs.iter().map(|&c| BigInt::from(c)).collect(),
            BigInt::one(),
        )
    }

    pub fn zero() -> Self {
        Polynomial {
            num: Vec::new(),
            den: BigInt::one(),
        }
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c * x^k`
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `(x - root)^n` expanded.
    pub fn shifted_power(root: &Rational, n: usize) -> Self {
        // (x - p/q)^n = q^-n (q x - p)^n; coefficient of x^i is C(n,i) q^i (-p)^(n-i)
        let p = -root.numer();
        let q = root.denom();
        let mut num = vec![BigInt::zero(); n + 1];
        let mut binom = BigInt::one();
        let mut q_pow = BigInt::one();
        for (i, slot) in num.iter_mut().enumerate() {
            *slot = &binom * &q_pow * num_traits::pow(p.clone(), n - i);
            binom = binom * BigInt::from(n - i) / BigInt::from(i + 1);
            q_pow *= q;
        }
        Self::from_parts(num, num_traits::pow(q.clone(), n))
    }

    pub fn coeffs(&self) -> Vec<Rational> {
        (0..self.num.len()).map(|k| self.coeff(k)).collect()
    }

    pub fn coeff(&self, k: usize) -> Rational {
        match self.num.get(k) {
            Some(c) => Rational::new(c.clone(), self.den.clone()),
            None => Rational::zero(),
        }
    }

    /// Coefficients converted to floats.
    pub fn coeffs_f64(&self) -> Vec<f64> {
        (0..self.num.len())
            .map(|k| to_f64(&self.coeff(k)))
            .collect()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.num.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Homogeneous Horner: `Σ z_i xn^i xd^(n-i)` over `den · xd^n`.
    fn eval_parts(&self, x: &Rational) -> (BigInt, BigInt) {
        let Some(n) = self.degree() else {
            return (BigInt::zero(), BigInt::one());
        };
        let (xn, xd) = (x.numer(), x.denom());
        let mut acc = self.num[n].clone();
        let mut xd_pow = BigInt::one();
        for c in self.num[..n].iter().rev() {
            xd_pow *= xd;
            acc = acc * xn + c * &xd_pow;
        }
        (acc, &self.den * xd_pow)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let (n, d) = self.eval_parts(x);
        Rational::new(n, d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs_f64()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self::from_parts(
            self.num.iter().map(|c| c * k.numer()).collect(),
            &self.den * k.denom(),
        )
    }

    /// Multiplies by `x^k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut num = vec![BigInt::zero(); k];
        num.extend(self.num.iter().cloned());
        Polynomial {
            num,
            den: self.den.clone(),
        }
    }

    /// Returns `q` with `q(x) = p(s*x + r)`.
    pub fn compose_affine(&self, s: &Rational, r: &Rational) -> Self {
        let Some(n) = self.degree() else {
            return Self::zero();
        };
        // s x + r = (a x + b) / c with integers a, b, c
        let c = s.denom() * r.denom();
        let a = s.numer() * r.denom();
        let b = r.numer() * s.denom();
        // Horner: acc <- acc (a x + b) + z_i c^(n-i)
        let mut acc: Vec<BigInt> = vec![self.num[n].clone()];
        let mut c_pow = BigInt::one();
        for z in self.num[..n].iter().rev() {
            c_pow *= &c;
            let mut next = vec![BigInt::zero(); acc.len() + 1];
            for (i, v) in acc.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                next[i] += v * &b;
                next[i + 1] += v * &a;
            }
            next[0] += z * &c_pow;
            acc = next;
        }
        Self::from_parts(acc, &self.den * c_pow)
    }

    pub fn derivative(&self) -> Self {
        Self::from_parts(
            self.num
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
            self.den.clone(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = (1..=self.num.len()).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
        let mut num = Vec::with_capacity(self.num.len() + 1);
        num.push(BigInt::zero());
        num.extend(
            self.num
                .iter()
                .enumerate()
                .map(|(k, c)| c * (&l / BigInt::from(k + 1))),
        );
        Self::from_parts(num, &self.den * l)
    }

    /// Exact `∫_a^b p(x) dx`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a > b {
            return Err(Error::ReversedInterval {
                a: Box::new(a.clone()),
                b: Box::new(b.clone()),
            });
        }
        let anti = self.antiderivative();
        let (bn, bd) = anti.eval_parts(b);
        let (an, ad) = anti.eval_parts(a);
        Ok(Rational::new(bn * &ad - an * &bd, ad * bd))
    }

    /// Exact `∫_a^b x^k p(x) q(x) dx` for each `k` in `0..=k_max`. Works
    /// on the raw integer numerators, so the only gcd is in the final
    /// reduction of each result.
    pub fn integrate_product_moments(
        p: &Polynomial,
        q: &Polynomial,
        k_max: usize,
        a: &Rational,
        b: &Rational,
    ) -> Result<Vec<Rational>> {
        if a > b {
            return Err(Error::ReversedInterval {
                a: Box::new(a.clone()),
                b: Box::new(b.clone()),
            });
        }
        if p.is_zero() || q.is_zero() {
            return Ok(vec![Rational::zero(); k_max + 1]);
        }
        let mut conv = vec![BigInt::zero(); p.num.len() + q.num.len() - 1];
        for (i, x) in p.num.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in q.num.iter().enumerate() {
                conv[i + j] += x * y;
            }
        }
        let den = &p.den * &q.den;
        let top = conv.len() + k_max; // highest power after integration
        let l = (1..=top).fold(BigInt::one(), |acc, k| acc.lcm(&BigInt::from(k)));
        let powers = |x: &Rational| -> (Vec<BigInt>, Vec<BigInt>) {
            let mut n = Vec::with_capacity(top + 1);
            let mut d = Vec::with_capacity(top + 1);
            n.push(BigInt::one());
            d.push(BigInt::one());
            for i in 1..=top {
                n.push(&n[i - 1] * x.numer());
                d.push(&d[i - 1] * x.denom());
            }
            (n, d)
        };
        let (bn, bd) = powers(b);
        let (an, ad) = powers(a);
        // Σ_j c_j (L/e) x^e with e = j + k + 1, scaled by xd^top
        let endpoint = |k: usize, xn: &[BigInt], xd: &[BigInt]| -> BigInt {
            conv.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| {
                    let e = j + k + 1;
                    c * (&l / BigInt::from(e)) * &xn[e] * &xd[top - e]
                })
                .sum()
        };
        let scale = &l * &den * &ad[top] * &bd[top];
        Ok((0..=k_max)
            .map(|k| {
                let upper = endpoint(k, &bn, &bd) * &ad[top];
                let lower = endpoint(k, &an, &ad) * &bd[top];
                Rational::new(upper - lower, scale.clone())
            })
            .collect())
    }

    /// Upper bound on `max |p(x)|` for `x` in `[a, b]`, computed in floats
    /// from the expansion about the interval midpoint.
    pub fn sup_bound(&self, a: &Rational, b: &Rational) -> f64 {
        let two = int(2);
        let mid = (a + b) / &two;
        let half = to_f64(&((b - a) / two));
        self.compose_affine(&Rational::one(), &mid)
            .coeffs_f64()
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * half + c.abs())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        add_scaled(self, rhs, false)
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        add_scaled(self, rhs, true)
    }
}

fn add_scaled(p: &Polynomial, q: &Polynomial, negate: bool) -> Polynomial {
    let den = p.den.lcm(&q.den);
    let fp = &den / &p.den;
    let mut fq = &den / &q.den;
    if negate {
        fq = -fq;
    }
    let n = p.num.len().max(q.num.len());
    let zero = BigInt::zero();
    let num = (0..n)
        .map(|k| p.num.get(k).unwrap_or(&zero) * &fp + q.num.get(k).unwrap_or(&zero) * &fq)
        .collect();
    Polynomial::from_parts(num, den)
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![BigInt::zero(); self.num.len() + rhs.num.len() - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.num.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::from_parts(out, &self.den * &rhs.den)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
