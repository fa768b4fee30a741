//! Small exact-arithmetic helpers shared across the crate.

use crate::{Error, Int, Rational, Result};
use num::bigint::Sign;
use num::{BigInt, One, Signed, ToPrimitive, Zero};

/// Binomial coefficient C(n, k) computed by the multiplicative formula.
/// Every intermediate division is exact.
pub fn binomial(n: u64, k: u64) -> Int {
    if k > n {
        return Int::zero();
    }
    let k = k.min(n - k);
    let mut acc = Int::one();
    for j in 0..k {
        acc = acc * Int::from(n - j) / Int::from(j + 1);
    }
    acc
}

/// Generalized binomial C(t, j) = t (t-1) ... (t-j+1) / j! for rational t.
pub fn binomial_rational(t: &Rational, j: u64) -> Rational {
    let mut acc = Rational::one();
    for i in 0..j {
        acc *= t - Rational::from(Int::from(i));
        acc /= Rational::from(Int::from(i + 1));
    }
    acc
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(Int::from(p), Int::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    Rational::from(Int::from(p))
}

/// 2^e as a rational, e may be negative.
pub fn pow2(e: i64) -> Rational {
    let two = Int::from(2);
    if e >= 0 {
        Rational::from(two.pow(e as u32))
    } else {
        Rational::new(Int::one(), two.pow((-e) as u32))
    }
}

/// Parses "p/q", plain integers, and decimal strings ("0.375") exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::parse("empty rational"));
    }
    if let Some((p, q)) = s.split_once('/') {
        let p: Int = p
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad numerator in {s:?}")))?;
        let q: Int = q
            .trim()
            .parse()
            .map_err(|_| Error::parse(format!("bad denominator in {s:?}")))?;
        if q.is_zero() {
            return Err(Error::parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let neg = int_part.trim_start().starts_with('-');
        let int_part = if int_part.is_empty() || int_part == "-" {
            "0"
        } else {
            int_part
        };
        let whole: Int = int_part
            .parse()
            .map_err(|_| Error::parse(format!("bad decimal in {s:?}")))?;
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::parse(format!("bad decimal in {s:?}")));
        }
        let frac: Int = frac_part
            .parse()
            .map_err(|_| Error::parse(format!("bad decimal in {s:?}")))?;
        let denom = Int::from(10).pow(frac_part.len() as u32);
        let frac = Rational::new(frac, denom);
        let whole = Rational::from(whole);
        return Ok(if neg { whole - frac } else { whole + frac });
    }
    let p: Int = s
        .parse()
        .map_err(|_| Error::parse(format!("bad rational {s:?}")))?;
    Ok(Rational::from(p))
}

/// Exact square root of a nonnegative rational, when one exists.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (num, den) = (r.numer(), r.denom());
    let sn = num.sqrt();
    let sd = den.sqrt();
    if &(&sn * &sn) == num && &(&sd * &sd) == den {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Code size M = a 2^n when a is dyadic for this n; domain error otherwise.
pub fn dyadic_size(n: usize, a: &Rational) -> Result<Int> {
    if !a.is_positive() {
        return Err(Error::domain(format!("density a = {a} must be positive")));
    }
    let scaled = a * pow2(n as i64);
    if scaled.denom().is_one() {
        Ok(scaled.numer().clone())
    } else {
        Err(Error::domain(format!(
            "density a = {a} is not dyadic at n = {n} (a 2^n = {scaled})"
        )))
    }
}

/// Smallest-first integer conversion used by size guards.
pub fn int_to_u64(v: &BigInt) -> Option<u64> {
    if v.sign() == Sign::Minus {
        None
    } else {
        v.to_u64()
    }
}
