//! Exact rational scalars.
//!
//! Every probability, advantage, and cap in this crate is a [`Rat`]
//! (arbitrary-precision rational). Entropy levels are carried as guessing
//! probabilities gamma = 2^-k so that quantities like 2^{m} * gamma stay
//! rational for any real k; -log2 appears only in display helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

/// `n / d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

/// 2^-bits.
pub fn pow2_inv(bits: u32) -> Rat {
    BigRational::new(BigInt::one(), BigInt::one() << bits)
}

/// 2^bits.
pub fn pow2(bits: u32) -> Rat {
    BigRational::from_integer(BigInt::one() << bits)
}

/// Exact integer power of a rational.
pub fn rat_pow(base: &Rat, exp: u32) -> Rat {
    if exp == 0 {
        return rat_one();
    }
    BigRational::new(base.numer().pow(exp), base.denom().pow(exp))
}

/// -log2 of a positive rational, for presentation only.
pub fn neg_log2(r: &Rat) -> f64 {
    let n = r.numer().to_f64().unwrap_or(f64::NAN);
    let d = r.denom().to_f64().unwrap_or(f64::NAN);
    if n > 0.0 && d > 0.0 {
        d.log2() - n.log2()
    } else {
        f64::INFINITY
    }
}

pub fn to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Canonical `"p/q"` form (`"p"` when the denominator is one).
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `"p/q"`, `"p"`, or a plain integer, rejecting zero denominators.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |m: &str| Error::Scenario(format!("bad rational {s:?}: {m}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad("numerator"))?;
        let q: BigInt = q.trim().parse().map_err(|_| bad("denominator"))?;
        if q.is_zero() {
            return Err(bad("zero denominator"));
        }
        Ok(BigRational::new(p, q))
    } else {
        let p: BigInt = s.parse().map_err(|_| bad("integer"))?;
        Ok(BigRational::from_integer(p))
    }
}

/// Distance from `x` to the closed interval `[lo, hi]`.
pub fn dist_to_interval(x: &Rat, lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        rat_zero()
    }
}

pub fn clamp_to_interval(x: &Rat, lo: &Rat, hi: &Rat) -> Rat {
    debug_assert!(lo <= hi);
    if x < lo {
        lo.clone()
    } else if x > hi {
        hi.clone()
    } else {
        x.clone()
    }
}

pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_round_trip() {
        for s in ["1/2", "0", "3", "-7/8", "1024/1"] {
            let r = parse_rat(s).unwrap();
            let back = parse_rat(&format_rat(&r)).unwrap();
            assert_eq!(r, back);
        }
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn interval_distance() {
        let lo = rat(1, 4);
        let hi = rat(1, 2);
        assert_eq!(dist_to_interval(&rat(1, 8), &lo, &hi), rat(1, 8));
        assert_eq!(dist_to_interval(&rat(3, 8), &lo, &hi), rat_zero());
        assert_eq!(dist_to_interval(&rat(3, 4), &lo, &hi), rat(1, 4));
    }

    #[test]
    fn neg_log2_of_dyadics() {
        assert_eq!(neg_log2(&rat(1, 4)), 2.0);
        assert_eq!(neg_log2(&rat(1, 1024)), 10.0);
    }
}
