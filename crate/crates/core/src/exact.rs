//! Exact rational arithmetic and the number-theoretic constants feeding the
//! recursion kernels.
//!
//! Rationals are `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. This module adds the few operations the
//! rest of the crate needs on top of it: checked division, factorials and
//! binomials over big integers, Bernoulli numbers and the rational parts of
//! the even zeta values.

use std::sync::RwLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// Rational from a pair of machine integers.
///
/// Panics if `den` is zero.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `a / b`, or [`Error::DivisionByZero`] when `b == 0`.
pub fn checked_div(a: &BigRational, b: &BigRational) -> Result<BigRational> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(a / b)
}

/// Parses `"num"` or `"num/den"` into a canonical rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

/// Lossy conversion used only for reports and numeric cross-checks.
pub fn to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Fall back to scaled division when numerator or denominator overflow f64.
    let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000) as usize;
    let num = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
    let den = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
    num / den
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Double factorial with the convention `(-1)!! = 0!! = 1`.
pub fn double_factorial(n: i64) -> BigInt {
    let mut acc = BigInt::one();
    let mut k = n;
    while k > 1 {
        acc *= k;
        k -= 2;
    }
    acc
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

static BERNOULLI: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// The Bernoulli number `B_m` with `B_1 = -1/2`.
///
/// Values come from `sum_{k=0}^{m} C(m+1, k) B_k = 0` and are memoized in a
/// process-wide table that only ever grows.
pub fn bernoulli(m: usize) -> BigRational {
    if let Some(b) = BERNOULLI.read().expect("bernoulli table poisoned").get(m) {
        return b.clone();
    }
    let mut table = BERNOULLI.write().expect("bernoulli table poisoned");
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= m {
        let next = table.len();
        if next >= 3 && next % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        let mut sum = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                sum += b * BigRational::from_integer(binomial(next as u32 + 1, k as u32));
            }
        }
        let lead = BigRational::from_integer(BigInt::from(next + 1));
        table.push(-sum / lead);
    }
    table[m].clone()
}

/// The rational `q_i` with `zeta(2i) = q_i * pi^(2i)`.
///
/// `q_0 = zeta(0) = -1/2`; for `i >= 1`,
/// `zeta(2i) = (-1)^(i+1) B_{2i} (2 pi)^(2i) / (2 (2i)!)`.
pub fn zeta_even_coeff(i: usize) -> BigRational {
    if i == 0 {
        return ratio(-1, 2);
    }
    let b = bernoulli(2 * i);
    let two_pow = BigInt::one() << (2 * i);
    let den = BigInt::from(2) * factorial(2 * i as u32);
    let q = b * BigRational::new(two_pow, den);
    if i % 2 == 1 {
        q
    } else {
        -q
    }
}

/// Exact `2^e` for a possibly negative exponent.
pub fn pow2(e: i64) -> BigRational {
    if e >= 0 {
        BigRational::from_integer(BigInt::one() << e as usize)
    } else {
        BigRational::new(BigInt::one(), BigInt::one() << (-e) as usize)
    }
}

pub fn is_nonnegative(q: &BigRational) -> bool {
    !q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn small_arithmetic() {
        assert_eq!(ratio(1, 2) + ratio(1, 3), ratio(5, 6));
        let half = BigRational::new(BigInt::from(2), BigInt::from(4));
        assert_eq!(half.numer(), &BigInt::from(1));
        assert_eq!(half.denom(), &BigInt::from(2));
        assert!(matches!(
            checked_div(&ratio(1, 3), &BigRational::zero()),
            Err(Error::DivisionByZero)
        ));
        assert_eq!(checked_div(&ratio(1, 3), &ratio(2, 3)).unwrap(), ratio(1, 2));
    }

    #[test]
    fn bernoulli_values() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), ratio(-1, 2));
        assert_eq!(bernoulli(2), ratio(1, 6));
        assert_eq!(bernoulli(4), ratio(-1, 30));
        assert_eq!(bernoulli(12), ratio(-691, 2730));
        for m in (3..40).step_by(2) {
            assert!(bernoulli(m).is_zero(), "B_{m}");
        }
    }

    #[test]
    fn bernoulli_is_thread_consistent() {
        let handles: Vec<_> = (0..4)
            .map(|t| std::thread::spawn(move || (0..30 + t).map(bernoulli).collect::<Vec<_>>()))
            .collect();
        let tables: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        for t in &tables {
            assert_eq!(t[..30], tables[0][..30]);
        }
    }

    #[test]
    fn zeta_coefficients() {
        assert_eq!(zeta_even_coeff(0), ratio(-1, 2));
        assert_eq!(zeta_even_coeff(1), ratio(1, 6));
        assert_eq!(zeta_even_coeff(2), ratio(1, 90));
        assert_eq!(zeta_even_coeff(3), ratio(1, 945));
        assert_eq!(zeta_even_coeff(4), ratio(1, 9450));
    }

    #[test]
    fn zeta_against_partial_sums() {
        // zeta(2i) by direct summation with an Euler-Maclaurin tail estimate.
        let pi = std::f64::consts::PI;
        for i in 1..=6 {
            let s = 2.0 * i as f64;
            let n = 2000usize;
            let mut sum: f64 = (1..n).map(|k| (k as f64).powf(-s)).sum();
            let nf = n as f64;
            sum += nf.powf(1.0 - s) / (s - 1.0) + 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0);
            let exact = to_f64(&zeta_even_coeff(i)) * pi.powi(2 * i as i32);
            assert!(((sum - exact) / exact).abs() < 1e-12, "i={i}: {sum} vs {exact}");
        }
    }

    #[test]
    fn combinatorial_helpers() {
        assert_eq!(factorial(0), BigInt::one());
        assert_eq!(factorial(5), BigInt::from(120));
        assert_eq!(double_factorial(-1), BigInt::one());
        assert_eq!(double_factorial(7), BigInt::from(105));
        assert_eq!(binomial(6, 2), BigInt::from(15));
        assert_eq!(binomial(2, 6), BigInt::zero());
        assert_eq!(parse_rational(" -3/6 ").unwrap(), ratio(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn to_f64_handles_huge_parts() {
        let big = BigRational::new(BigInt::one() << 2000, (BigInt::one() << 1999) * 3);
        assert!((to_f64(&big) - 2.0 / 3.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn add_then_subtract_is_identity(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = ratio(a, b);
            let y = ratio(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            prop_assert_eq!(&x * &y, &y * &x);
        }
    }
}
