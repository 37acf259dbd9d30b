//! Seeded random members of the class of continuous, nonnegative piecewise
//! polynomials that vanish at both ends of their support.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::pwpoly::{Nonnegativity, PiecewisePoly};
use crate::ratpoly::{rat, Polynomial, Rational};

pub const DEFAULT_SEED: u64 = 0x5EED_0FF0;

/// Seed from `UNCERT_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("UNCERT_SEED")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(
    rng: &mut impl Rng,
    num: std::ops::RangeInclusive<i64>,
    max_den: i64,
) -> Rational {
    rat(rng.gen_range(num), rng.gen_range(1..=max_den))
}

/// Up to five knots with nonnegative interior values (zero at the ends),
/// linear interpolation plus a bubble `(x − a)(b − x)·r(x)` of degree at
/// most 4 per piece. If a sampled value is negative the function is squared.
pub fn plus_zero(rng: &mut impl Rng) -> PiecewisePoly {
    loop {
        let knots_count = rng.gen_range(2..=5);
        let mut knots = vec![small_rational(rng, -8..=0, 4)];
        for _ in 1..knots_count {
            let step = small_rational(rng, 1..=6, 4);
            knots.push(knots.last().expect("nonempty") + step);
        }
        let mut values: Vec<Rational> = (0..knots_count)
            .map(|_| small_rational(rng, 0..=8, 4))
            .collect();
        values[0] = Rational::from_integer(0.into());
        values[knots_count - 1] = Rational::from_integer(0.into());
        let pieces: Vec<Polynomial> = knots
            .windows(2)
            .zip(values.windows(2))
            .map(|(k, v)| {
                let (a, b) = (&k[0], &k[1]);
                let slope = (&v[1] - &v[0]) / (b - a);
                let line = Polynomial::new(vec![&v[0] - &slope * a, slope]);
                let bubble_degree = rng.gen_range(0..=2);
                let r = Polynomial::new(
                    (0..=bubble_degree)
                        .map(|_| small_rational(rng, -6..=6, 4))
                        .collect(),
                );
                // (x − a)(b − x) = −x² + (a + b)x − ab
                let hat = Polynomial::new(vec![-(a * b), a + b, rat(-1, 1)]);
                &line + &(&hat * &r)
            })
            .collect();
        let f = PiecewisePoly::new(knots, pieces).expect("increasing knots");
        if f.is_zero() {
            continue;
        }
        return match f.nonnegativity(0.0) {
            Nonnegativity::Verified => f,
            Nonnegativity::NotVerified => f.product(&f),
        };
    }
}
