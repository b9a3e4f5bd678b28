//! Large-genus diagnostics built from exact volumes. Ratios are kept as
//! `c * p^k` with `c` rational until they are printed, so the trend checks
//! below are exact.

use std::fmt::Write as _;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, int, ratio, BigRational};
use crate::intersection::{bracket_norm, closed_volume};
use crate::recursion::{compute_volume, is_stable, level, VolumeCache};
use crate::report::{Check, Report};

/// `coeff * p^p_exp`, with its floating value.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactRatio {
    pub coeff: BigRational,
    pub p_exp: i64,
    pub value: f64,
}

impl ExactRatio {
    fn new(coeff: BigRational, p_exp: i64) -> Self {
        let pi2 = std::f64::consts::PI * std::f64::consts::PI;
        let value = exact::to_f64(&coeff) * pi2.powi(p_exp as i32);
        ExactRatio { coeff, p_exp, value }
    }
}

/// `V_{g,n}(0) = c p^{3g-3+n}`; `n = 0` goes through the closed volume.
pub fn volume_at_zero(g: u32, n: usize, cache: &VolumeCache) -> Result<BigRational> {
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let v = if n == 0 {
        closed_volume(g, cache)?
    } else {
        (*compute_volume(g, n, cache)?).clone()
    };
    Ok(v.coeff_of(level(g, n) as u32, &vec![0; n]))
}

/// `V_{g,n+1}(0) / (2g V_{g,n}(0))`, which tends to `4 pi^2`.
pub fn ratio_boundary(g: u32, n: usize, cache: &VolumeCache) -> Result<ExactRatio> {
    if g == 0 {
        return Err(Error::InvalidArgument("the boundary ratio needs g >= 1".into()));
    }
    let top = volume_at_zero(g, n + 1, cache)?;
    let bottom = volume_at_zero(g, n, cache)?;
    Ok(ExactRatio::new(top / (bottom * int(2 * g as i64)), 1))
}

/// `V_{g,n}(0) / V_{g-1,n+2}(0)`.
pub fn ratio_genus(g: u32, n: usize, cache: &VolumeCache) -> Result<ExactRatio> {
    if g == 0 {
        return Err(Error::InvalidArgument("the genus ratio needs g >= 1".into()));
    }
    let top = volume_at_zero(g, n, cache)?;
    let bottom = volume_at_zero(g - 1, n + 2, cache)?;
    Ok(ExactRatio::new(top / bottom, level(g, n) - level(g - 1, n + 2)))
}

/// `[tau_alpha]_{g,n} / V_{g,n}(0)`.
pub fn bracket_ratio(g: u32, alpha: &[u32], cache: &VolumeCache) -> Result<ExactRatio> {
    let n = alpha.len();
    let signed: Vec<i64> = alpha.iter().map(|&a| a as i64).collect();
    let b = bracket_norm(g as i64, &signed, cache)?;
    if b.coeff.is_zero() {
        return Err(Error::Missing(format!("[tau {alpha:?}] vanishes for g = {g}")));
    }
    let v = volume_at_zero(g, n, cache)?;
    Ok(ExactRatio::new(b.coeff / v, b.p_exp as i64 - level(g, n)))
}

/// `V_{g,n}(0) / ((g pi)^{-1/2} (4 pi^2)^{2g-3+n} (2g-3+n)!)`, reported only.
pub fn zograf_conjecture_report(g: u32, n: usize, cache: &VolumeCache) -> Result<f64> {
    let k = 2 * g as i64 - 3 + n as i64;
    if g == 0 || k < 0 {
        return Err(Error::InvalidArgument(format!("no prediction for (g, n) = ({g}, {n})")));
    }
    let pi = std::f64::consts::PI;
    let v = exact::to_f64(&volume_at_zero(g, n, cache)?) * (pi * pi).powi(level(g, n) as i32);
    let fact = exact::to_f64(&BigRational::from_integer(exact::factorial(k as u32)));
    let prediction = (4.0 * pi * pi).powi(k as i32) * fact / (g as f64 * pi).sqrt();
    Ok(v / prediction)
}

/// Rational bounds `lo < pi^2 < hi`.
fn pi_squared_bounds() -> (BigRational, BigRational) {
    (ratio(98_696_044, 10_000_000), ratio(98_696_045, 10_000_000))
}

/// Decides `0 < c p^k <= 1` exactly when possible.
fn in_unit_interval(r: &ExactRatio) -> Option<bool> {
    if !r.coeff.is_positive() {
        return Some(false);
    }
    if r.p_exp == 0 {
        return Some(r.coeff <= int(1));
    }
    let (lo, hi) = pi_squared_bounds();
    let e = r.p_exp.unsigned_abs() as usize;
    let (small, large) = if r.p_exp > 0 { (lo, hi) } else { (hi.recip(), lo.recip()) };
    let max = &r.coeff * num_traits::pow(large, e);
    let min = &r.coeff * num_traits::pow(small, e);
    if max <= int(1) {
        Some(true)
    } else if min > int(1) {
        Some(false)
    } else {
        None
    }
}

/// One CSV row: `g,n,ratio,reference-constant`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioRow {
    pub g: u32,
    pub n: usize,
    pub ratio: ExactRatio,
    pub reference: f64,
}

/// Boundary ratios for `g` in a range at fixed `n`, with the reference `4 pi^2`.
pub fn boundary_ratio_rows(genera: std::ops::RangeInclusive<u32>, n: usize, cache: &VolumeCache) -> Result<Vec<RatioRow>> {
    let reference = 4.0 * std::f64::consts::PI * std::f64::consts::PI;
    genera
        .map(|g| {
            Ok(RatioRow {
                g,
                n,
                ratio: ratio_boundary(g, n, cache)?,
                reference,
            })
        })
        .collect()
}

pub fn rows_to_csv(rows: &[RatioRow]) -> String {
    let mut out = String::from("g,n,ratio,reference-constant\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:.12},{:.12}", r.g, r.n, r.ratio.value, r.reference);
    }
    out
}

/// `V_{g,1}(0) / (2g V_{g,0})` strictly increasing in `g` and below `4 pi^2`,
/// decided on the exact rational multipliers of `p`.
pub fn check_boundary_trend(genera: std::ops::RangeInclusive<u32>, cache: &VolumeCache) -> Result<Report> {
    let rows = boundary_ratio_rows(genera, 0, cache)?;
    let mut report = Report::new();
    let increasing = rows.windows(2).all(|w| w[0].ratio.coeff < w[1].ratio.coeff);
    let values: Vec<String> = rows.iter().map(|r| format!("{:.4}", r.ratio.value)).collect();
    let id = "boundary ratio strictly increasing".to_string();
    report.push(if increasing {
        Check::pass(id)
    } else {
        Check::fail(id, values.join(", "))
    });
    let bounded = rows.iter().all(|r| r.ratio.coeff < int(4));
    let id = "boundary ratio below 4π²".to_string();
    report.push(if bounded {
        Check::pass(id)
    } else {
        Check::fail(id, values.join(", "))
    });
    Ok(report)
}

/// Bracket ratios of every exponent tuple of `V_{g,n}` lie in `(0, 1]`, and
/// equal 1 exactly when all exponents are zero.
pub fn check_bracket_ratios(g: u32, n: usize, cache: &VolumeCache) -> Result<Check> {
    let id = format!("bracket ratios of ({g},{n}) in (0,1]");
    let dim = level(g, n) as u32;
    for alpha in crate::intersection::compositions_up_to(dim, n) {
        if alpha.windows(2).any(|w| w[0] > w[1]) {
            continue;
        }
        let r = bracket_ratio(g, &alpha, cache)?;
        if alpha.iter().all(|&a| a == 0) && (r.coeff != int(1) || r.p_exp != 0) {
            return Ok(Check::fail(id, format!("alpha = {alpha:?} gives {} p^{}", r.coeff, r.p_exp)));
        }
        match in_unit_interval(&r) {
            Some(true) => {}
            Some(false) => return Ok(Check::fail(id, format!("alpha = {alpha:?} gives {}", r.value))),
            None => return Ok(Check::inconclusive(id, format!("alpha = {alpha:?} too close to 1"))),
        }
    }
    Ok(Check::pass(id))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn boundary_ratio_examples() {
        let cache = VolumeCache::new();
        assert!(close(ratio_boundary(2, 0, &cache).unwrap().value, 18.72, 0.01));
        assert!(close(ratio_boundary(3, 0, &cache).unwrap().value, 25.65, 0.01));
        let r = ratio_boundary(2, 0, &cache).unwrap();
        assert_eq!(r.coeff, ratio(29 * 2160, 192 * 4 * 43));
    }

    #[test]
    fn genus_ratio_examples() {
        let cache = VolumeCache::new();
        let r = ratio_genus(2, 0, &cache).unwrap();
        assert_eq!((r.coeff, r.p_exp), (ratio(43 * 4, 2160), 1));
        assert!(ratio_genus(2, 1, &cache).unwrap().value > 0.0);
        assert!(ratio_genus(0, 3, &cache).is_err());
    }

    #[test]
    fn bracket_ratio_examples() {
        let cache = VolumeCache::new();
        assert!(close(bracket_ratio(1, &[1], &cache).unwrap().value, 0.608, 0.001));
        assert!(close(bracket_ratio(2, &[1], &cache).unwrap().value, 0.945, 0.001));
        let r = bracket_ratio(1, &[0], &cache).unwrap();
        assert_eq!((r.coeff, r.p_exp), (int(1), 0));
        for (g, n) in [(1, 1), (1, 2), (2, 1), (0, 5)] {
            assert!(check_bracket_ratios(g, n, &cache).unwrap().is_pass());
        }
    }

    #[test]
    fn conjecture_report_is_finite() {
        let cache = VolumeCache::new();
        for (g, n) in [(2, 1), (3, 1)] {
            let v = zograf_conjecture_report(g, n, &cache).unwrap();
            assert!(v.is_finite() && v > 0.0);
        }
    }

    #[test]
    fn trend_and_csv() {
        let cache = VolumeCache::new();
        assert!(check_boundary_trend(2..=3, &cache).unwrap().all_passed());
        let csv = rows_to_csv(&boundary_ratio_rows(2..=2, 0, &cache).unwrap());
        assert!(csv.starts_with("g,n,ratio,reference-constant\n2,0,18.7"));
    }

    #[test]
    fn unit_interval_decisions() {
        assert_eq!(in_unit_interval(&ExactRatio::new(ratio(1, 12), 1)), Some(true));
        assert_eq!(in_unit_interval(&ExactRatio::new(ratio(6, 1), -1)), Some(true));
        assert_eq!(in_unit_interval(&ExactRatio::new(int(10), -1)), Some(false));
        assert_eq!(in_unit_interval(&ExactRatio::new(int(0), 0)), Some(false));
    }
}
