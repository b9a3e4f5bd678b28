//! Intersection numbers from volumes, and the identities tying volumes of
//! different `(g, n)` together.
//!
//! The coefficient of `p^m prod x_k^{a_k}` in `V_{g,n}` equals
//! `2^m int psi^a kappa_1^m / (2^{|a|} prod a_k! m!)` with `m = 3g-3+n-|a|`.
//! Inverting that gives every `int psi^a kappa_1^m`, and the `m = 0` part
//! gives the psi-class correlators `<tau_a1 ... tau_an>`.
//!
//! Identities involving `L = 2 pi i` are restated over `Q[p]` with the factor
//! `2 pi i` divided out by hand, so no complex numbers appear.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{self, int, BigRational};
use crate::poly::{format_pi_term, Monomial, VolumePolynomial};
use crate::recursion::{compute_volume, is_stable, level, VolumeCache};
use crate::report::{Check, Report};

/// `int psi_1^{alpha_1} ... psi_n^{alpha_n} kappa_1^m` over the moduli space
/// of genus `g` curves with `n = alpha.len()` marked points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionRecord {
    pub g: u32,
    pub alpha: Vec<u32>,
    pub m: u32,
    pub value: BigRational,
}

/// `coeff * p^p_exp`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiTerm {
    pub coeff: BigRational,
    pub p_exp: u32,
}

impl PiTerm {
    pub fn zero() -> Self {
        PiTerm {
            coeff: BigRational::zero(),
            p_exp: 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        exact::to_f64(&self.coeff) * (std::f64::consts::PI * std::f64::consts::PI).powi(self.p_exp as i32)
    }
}

impl fmt::Display for PiTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_pi_term(&self.coeff, self.p_exp))
    }
}

fn factorial_q(n: u32) -> BigRational {
    BigRational::from_integer(exact::factorial(n))
}

/// Inverts the volume/intersection dictionary for one exponent tuple.
///
/// `alpha` may be shorter than `n`; missing exponents are zero.
pub fn extract_psi_kappa(v: &VolumePolynomial, alpha: &[u32]) -> Result<IntersectionRecord> {
    let n = v.n();
    if alpha.len() > n {
        return Err(Error::InvalidArgument(format!(
            "exponent tuple {alpha:?} is longer than n = {n}"
        )));
    }
    let mut a = alpha.to_vec();
    a.resize(n, 0);
    let total: u32 = a.iter().sum();
    let dim = level(v.g(), n);
    if total as i64 > dim {
        return Err(Error::InvalidArgument(format!(
            "|alpha| = {total} exceeds the dimension {dim} of M_({},{n})",
            v.g()
        )));
    }
    let m = (dim - total as i64) as u32;
    let coeff = v.coeff(&Monomial::new(m, a.clone()));
    let mut value = coeff * exact::pow2(total as i64 - m as i64) * factorial_q(m);
    for &ak in &a {
        value *= factorial_q(ak);
    }
    Ok(IntersectionRecord {
        g: v.g(),
        alpha: a,
        m,
        value,
    })
}

/// `int_{M_{g,n}} psi^alpha kappa_1^m` with `n = alpha.len()`, zero when the
/// degree does not match the dimension or `(g, n)` is unstable.
pub fn psi_kappa(g: u32, alpha: &[u32], m: u32, cache: &VolumeCache) -> Result<BigRational> {
    let n = alpha.len();
    let total: i64 = alpha.iter().map(|&a| a as i64).sum::<i64>() + m as i64;
    if n == 0 || !is_stable(g, n) || total != level(g, n) {
        return Ok(BigRational::zero());
    }
    let v = compute_volume(g, n, cache)?;
    Ok(extract_psi_kappa(&v, alpha)?.value)
}

/// The genus implied by `|alpha| = 3g - 3 + n`, if it is a non-negative integer.
pub fn implied_genus(alpha: &[u32]) -> Option<u32> {
    let num = alpha.iter().map(|&a| a as i64).sum::<i64>() - alpha.len() as i64 + 3;
    (num >= 0 && num % 3 == 0).then_some((num / 3) as u32)
}

/// `<tau_alpha_1 ... tau_alpha_n>` in genus `g`; zero whenever `|alpha|`
/// differs from `3g - 3 + n` or `n = 0`.
pub fn correlator(g: u32, alpha: &[u32], cache: &VolumeCache) -> Result<BigRational> {
    psi_kappa(g, alpha, 0, cache)
}

/// `<tau_alpha>` with the genus read off from the dimension constraint.
pub fn correlator_any_genus(alpha: &[u32], cache: &VolumeCache) -> Result<BigRational> {
    match implied_genus(alpha) {
        Some(g) => correlator(g, alpha, cache),
        None => Ok(BigRational::zero()),
    }
}

/// Rebuilds `V_{g,n}` from all of its intersection numbers.
pub fn reconstruct_volume(g: u32, n: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    let v = compute_volume(g, n, cache)?;
    let dim = level(g, n) as u32;
    let mut out = VolumePolynomial::zero(g, n);
    for alpha in compositions_up_to(dim, n) {
        let total: u32 = alpha.iter().sum();
        let m = dim - total;
        let rec = extract_psi_kappa(&v, &alpha)?;
        let mut c = rec.value * exact::pow2(m as i64 - total as i64) / factorial_q(m);
        for &a in &alpha {
            c /= factorial_q(a);
        }
        out.add_term(Monomial::new(m, alpha), c);
    }
    Ok(out)
}

/// All `n`-tuples of non-negative integers with sum at most `max`.
pub fn compositions_up_to(max: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0; n];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for a in 0..=left {
            cur[i] = a;
            rec(i + 1, left - a, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max, &mut cur, &mut out);
    out
}

/// `n`-tuples with sum exactly `total`.
pub fn compositions(total: u32, n: usize) -> Vec<Vec<u32>> {
    compositions_up_to(total, n)
        .into_iter()
        .filter(|a| a.iter().sum::<u32>() == total)
        .collect()
}

/// String and dilaton equations at `L_{n+1} = 2 pi i`:
///
/// * `V_{g,n+1}(L, 2 pi i) = sum_k int_0^{L_k} L_k V_{g,n} dL_k`
/// * `2 (dV_{g,n+1}/dx_{n+1})(L, x_{n+1} = -4p) = (2g - 2 + n) V_{g,n}`
///
/// For `n = 0` only the first applies, in the form `V_{g,1}(2 pi i) = 0`;
/// the second is what defines [`closed_volume`].
pub fn check_string_dilaton_volume(g: u32, n: usize, cache: &VolumeCache) -> Result<Report> {
    if !is_stable(g, n + 1) || (n > 0 && !is_stable(g, n)) {
        return Err(Error::Unstable { g, n });
    }
    let big = compute_volume(g, n + 1, cache)?;
    let at_2pi_i = big.substitute_2pi_i(n)?;
    let mut report = Report::new();
    if n == 0 {
        report.push(Check::compare(
            format!("V_({g},1)(2πi) = 0"),
            &at_2pi_i,
            &VolumePolynomial::zero(g, 0),
        ));
        return Ok(report);
    }
    let small = compute_volume(g, n, cache)?;
    let mut string_rhs = VolumePolynomial::zero(g, n);
    for k in 0..n {
        string_rhs = string_rhs.add(&small.integrate_l(k)?)?;
    }
    report.push(Check::compare(format!("string ({g},{n})"), &at_2pi_i, &string_rhs));

    let lhs = big.derivative_x(n)?.substitute_2pi_i(n)?.scale(&int(2));
    let rhs = small.scale(&int(2 * g as i64 - 2 + n as i64));
    report.push(Check::compare(format!("dilaton ({g},{n})"), &lhs, &rhs));
    Ok(report)
}

/// `x_k * P`.
fn times_x(poly: &VolumePolynomial, k: usize) -> VolumePolynomial {
    let mut out = VolumePolynomial::zero(poly.g(), poly.n());
    for (m, c) in poly.terms() {
        let mut x = m.x_exps().to_vec();
        x[k] += 1;
        out.add_term(Monomial::new(m.p_exp(), x), c.clone());
    }
    out
}

/// Coefficient of `V_{g,n}` in the second-derivative relation
/// `d^2V_{g,n+1}/dL_{n+1}^2 (L, 2 pi i) = sum_k L_k dV_{g,n}/dL_k - c V_{g,n}`.
pub fn second_derivative_constant(g: u32, n: usize) -> i64 {
    4 * g as i64 - 4 + n as i64
}

/// Second-derivative relation at `L_{n+1} = 2 pi i`, with
/// `d^2/dL^2 = 2 d/dx + 4x d^2/dx^2` and `L dV/dL = 2x dV/dx`.
pub fn check_second_derivative(g: u32, n: usize, cache: &VolumeCache) -> Result<Check> {
    if !is_stable(g, n) || n == 0 {
        return Err(Error::Unstable { g, n });
    }
    let big = compute_volume(g, n + 1, cache)?;
    let small = compute_volume(g, n, cache)?;
    let d1 = big.derivative_x(n)?;
    let d2 = d1.derivative_x(n)?;
    let lhs = d1.scale(&int(2)).add(&times_x(&d2, n).scale(&int(4)))?.substitute_2pi_i(n)?;
    let mut rhs = small.scale(&int(-second_derivative_constant(g, n)));
    for k in 0..n {
        rhs = rhs.add(&times_x(&small.derivative_x(k)?, k).scale(&int(2)))?;
    }
    Ok(Check::compare(format!("second derivative ({g},{n})"), &lhs, &rhs))
}

/// `V_{g,0} = V'_{g,1}(2 pi i) / (2 pi i (2g - 2))`, computed as
/// `2 (dV_{g,1}/dx_1)(x_1 = -4p) / (2g - 2)`. The result is also stored in the cache.
pub fn closed_volume(g: u32, cache: &VolumeCache) -> Result<VolumePolynomial> {
    if g < 2 {
        return Err(Error::InvalidArgument(format!("closed volumes need g >= 2, got {g}")));
    }
    if let Some(v) = cache.get(g, 0) {
        return Ok((*v).clone());
    }
    let v1 = compute_volume(g, 1, cache)?;
    let closed = v1
        .derivative_x(0)?
        .substitute_2pi_i(0)?
        .scale(&BigRational::new(BigInt::from(2), BigInt::from(2 * g as i64 - 2)))
        .with_genus(g);
    Ok((*cache.insert(closed)?).clone())
}

/// Generalised string and dilaton relations between `psi/kappa` numbers on
/// `M_{g,n+1}` and `M_{g,n}`:
///
/// * `sum_j (-1)^j C(m,j) <psi^alpha psi_{n+1}^j kappa^{m-j}> = sum_k <psi^{alpha - e_k} kappa^m>`
/// * `sum_j (-1)^j C(m,j) <psi^alpha psi_{n+1}^{j+1} kappa^{m-j}> = (2g-2+n) <psi^alpha kappa^m>`
///
/// Both are evaluated for every input; terms of the wrong degree are zero.
pub fn check_generalized_relations(g: u32, alpha: &[u32], m: u32, cache: &VolumeCache) -> Result<Report> {
    let n = alpha.len();
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let lifted = |j: u32| {
        let mut a = alpha.to_vec();
        a.push(j);
        a
    };
    let sign_binom = |j: u32| {
        let b = BigRational::from_integer(exact::binomial(m, j));
        if j % 2 == 1 {
            -b
        } else {
            b
        }
    };
    let mut string_lhs = BigRational::zero();
    let mut dilaton_lhs = BigRational::zero();
    for j in 0..=m {
        string_lhs += sign_binom(j) * psi_kappa(g, &lifted(j), m - j, cache)?;
        dilaton_lhs += sign_binom(j) * psi_kappa(g, &lifted(j + 1), m - j, cache)?;
    }
    let mut string_rhs = BigRational::zero();
    for k in 0..n {
        if alpha[k] > 0 {
            let mut a = alpha.to_vec();
            a[k] -= 1;
            string_rhs += psi_kappa(g, &a, m, cache)?;
        }
    }
    let dilaton_rhs = int(2 * g as i64 - 2 + n as i64) * psi_kappa(g, alpha, m, cache)?;

    let mut report = Report::new();
    for (name, lhs, rhs) in [
        ("generalized string", string_lhs, string_rhs),
        ("generalized dilaton", dilaton_lhs, dilaton_rhs),
    ] {
        let id = format!("{name} g={g} alpha={alpha:?} m={m}");
        report.push(if lhs == rhs {
            Check::pass(id)
        } else {
            Check::fail(id, format!("{lhs} vs {rhs}"))
        });
    }
    Ok(report)
}

/// `[tau_alpha]_{g,n} = prod(2^{2a_k} (2a_k+1)!!) / m! * int psi^alpha omega^m`
/// with `m = 3g-3+n-|alpha|` and `int psi^alpha omega^m = (2p)^m int psi^alpha kappa_1^m`.
///
/// Zero for unstable `(g, n)`, negative exponents or `|alpha| > 3g-3+n`.
pub fn bracket_norm(g: i64, alpha: &[i64], cache: &VolumeCache) -> Result<PiTerm> {
    let n = alpha.len();
    if g < 0 || n == 0 || !is_stable(g as u32, n) || alpha.iter().any(|&a| a < 0) {
        return Ok(PiTerm::zero());
    }
    let g = g as u32;
    let total: i64 = alpha.iter().sum();
    let dim = level(g, n);
    if total > dim {
        return Ok(PiTerm::zero());
    }
    let m = (dim - total) as u32;
    let a: Vec<u32> = alpha.iter().map(|&x| x as u32).collect();
    let v = compute_volume(g, n, cache)?;
    let rec = extract_psi_kappa(&v, &a)?;
    let mut coeff = rec.value * exact::pow2(m as i64) / factorial_q(m);
    for &ak in &a {
        coeff *= exact::pow2(2 * ak as i64) * BigRational::from_integer(exact::double_factorial(2 * ak as i64 + 1));
    }
    Ok(PiTerm { coeff, p_exp: m })
}

/// `b_m = zeta(2m) (1 - 2^{1-2m})` as a rational multiple of `p^m`;
/// `b_0 = 1/2` from `zeta(0) = -1/2`.
pub fn b_coeff(m: u32) -> BigRational {
    exact::zeta_even_coeff(m as usize) * (BigRational::one() - exact::pow2(1 - 2 * m as i64))
}

/// Weights of the three sums in the bracket form of the recursion, in the
/// order (non-separating, separating, boundary).
///
/// With the sums taken literally (ordered splittings, `b_m` as above) these
/// are the weights that make the identity agree with the volumes.
pub const BRACKET_WEIGHTS: (i64, i64, i64) = (16, 16, 8);

/// Right-hand side of the bracket recursion for `[tau_alpha]_{g,n}`, as the
/// rational multiplying `p^{3g-3+n-|alpha|}`.
pub fn bracket_recursion_rhs(g: u32, alpha: &[u32], cache: &VolumeCache) -> Result<BigRational> {
    let n = alpha.len();
    let total: i64 = alpha.iter().map(|&a| a as i64).sum();
    let top = level(g, n) - total;
    if top < 0 {
        return Err(Error::InvalidArgument(format!("|alpha| exceeds the dimension of M_({g},{n})")));
    }
    let a1 = alpha[0] as i64;
    let rest: Vec<i64> = alpha[1..].iter().map(|&a| a as i64).collect();
    let (w_ns, w_sep, w_bd) = BRACKET_WEIGHTS;
    let g = g as i64;

    let mut nonsep = BigRational::zero();
    let mut sep = BigRational::zero();
    let mut bd = BigRational::zero();
    for m in 0..=top as u32 {
        let b = b_coeff(m);
        let s = a1 + m as i64 - 2;
        for i in 0..=s.max(-1) {
            let j = s - i;
            let mut child = vec![i, j];
            child.extend_from_slice(&rest);
            nonsep += &b * bracket_norm(g - 1, &child, cache)?.coeff;

            for g1 in 0..=g {
                for mask in 0u64..(1u64 << rest.len()) {
                    let mut left = vec![i];
                    let mut right = vec![j];
                    for (t, &r) in rest.iter().enumerate() {
                        if mask >> t & 1 == 1 {
                            left.push(r);
                        } else {
                            right.push(r);
                        }
                    }
                    let l = bracket_norm(g1, &left, cache)?;
                    if l.coeff.is_zero() {
                        continue;
                    }
                    let r = bracket_norm(g - g1, &right, cache)?;
                    sep += &b * l.coeff * r.coeff;
                }
            }
        }
        for k in 0..rest.len() {
            let mut child = rest.clone();
            child[k] += a1 + m as i64 - 1;
            let w = int(2 * rest[k] + 1);
            bd += &b * w * bracket_norm(g, &child, cache)?.coeff;
        }
    }
    Ok(int(w_ns) * nonsep + int(w_sep) * sep + int(w_bd) * bd)
}

/// Checks the bracket recursion for `[tau_alpha]_{g,n}`. The base cases
/// `(0,3)` and `(1,1)` are outside its range and reported as skipped.
pub fn check_bracket_recursion(g: u32, alpha: &[u32], cache: &VolumeCache) -> Result<Check> {
    let n = alpha.len();
    let id = format!("bracket recursion g={g} alpha={alpha:?}");
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    if (g, n) == (0, 3) || (g, n) == (1, 1) {
        return Ok(Check::skipped(id, "base case of the recursion"));
    }
    let signed: Vec<i64> = alpha.iter().map(|&a| a as i64).collect();
    let lhs = bracket_norm(g as i64, &signed, cache)?;
    let rhs = bracket_recursion_rhs(g, alpha, cache)?;
    Ok(if lhs.coeff == rhs {
        Check::pass(id)
    } else {
        Check::fail(id, format!("{} vs {}", lhs.coeff, rhs))
    })
}

/// Sanity helper: every extracted number of `V_{g,n}` is nonnegative and
/// symmetric in `alpha`.
pub fn check_extracted_numbers(g: u32, n: usize, cache: &VolumeCache) -> Result<Check> {
    let v = compute_volume(g, n, cache)?;
    let dim = level(g, n) as u32;
    let id = format!("intersection numbers of M_({g},{n}) nonnegative and symmetric");
    for alpha in compositions_up_to(dim, n) {
        let rec = extract_psi_kappa(&v, &alpha)?;
        if rec.value.is_negative() {
            return Ok(Check::fail(id, format!("alpha={alpha:?} gives {}", rec.value)));
        }
        let mut sorted = alpha.clone();
        sorted.sort_unstable();
        if extract_psi_kappa(&v, &sorted)?.value != rec.value {
            return Ok(Check::fail(id, format!("alpha={alpha:?} differs from {sorted:?}")));
        }
    }
    Ok(Check::pass(id))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    #[test]
    fn extraction_examples() {
        let cache = VolumeCache::new();
        let v11 = compute_volume(1, 1, &cache).unwrap();
        assert_eq!(extract_psi_kappa(&v11, &[1]).unwrap().value, ratio(1, 24));
        let kappa = extract_psi_kappa(&v11, &[0]).unwrap();
        assert_eq!((kappa.m, kappa.value), (1, ratio(1, 24)));
        let v21 = compute_volume(2, 1, &cache).unwrap();
        let r = extract_psi_kappa(&v21, &[1]).unwrap();
        assert_eq!((r.m, r.value), (3, ratio(169, 1920)));
        assert!(extract_psi_kappa(&v11, &[1, 0]).is_err());
        assert!(extract_psi_kappa(&v11, &[2]).is_err());
    }

    #[test]
    fn correlator_examples() {
        let cache = VolumeCache::new();
        assert_eq!(correlator(0, &[0, 0, 0], &cache).unwrap(), int(1));
        assert_eq!(correlator(1, &[1], &cache).unwrap(), ratio(1, 24));
        assert_eq!(correlator(0, &[1, 0, 0, 0], &cache).unwrap(), int(1));
        assert_eq!(correlator(1, &[1, 1], &cache).unwrap(), ratio(1, 24));
        assert_eq!(correlator(2, &[4], &cache).unwrap(), ratio(1, 1152));
        assert!(correlator(1, &[0], &cache).unwrap().is_zero());
        assert!(correlator(0, &[], &cache).unwrap().is_zero());
        assert!(correlator_any_genus(&[2], &cache).unwrap().is_zero());
        assert_eq!(implied_genus(&[1]), Some(1));
        assert_eq!(implied_genus(&[0, 0]), None);
    }

    #[test]
    fn string_dilaton_examples() {
        let cache = VolumeCache::new();
        for &(g, n) in &[(1, 1), (0, 3), (1, 0), (2, 0), (1, 2), (0, 4)] {
            let r = check_string_dilaton_volume(g, n, &cache).unwrap();
            assert!(r.all_passed(), "({g},{n}): {:?}", r.checks);
        }
        assert!(check_string_dilaton_volume(0, 2, &cache).is_err());
    }

    #[test]
    fn second_derivative_examples() {
        let cache = VolumeCache::new();
        for &(g, n) in &[(1, 1), (0, 3), (2, 1), (0, 4), (1, 2)] {
            let c = check_second_derivative(g, n, &cache).unwrap();
            assert!(c.is_pass(), "{c}");
        }
    }

    #[test]
    fn closed_volumes() {
        let cache = VolumeCache::new();
        let v20 = closed_volume(2, &cache).unwrap();
        assert_eq!(v20.as_single_term(), Some((ratio(43, 2160), 3)));
        let v30 = closed_volume(3, &cache).unwrap();
        assert_eq!(v30.as_single_term(), Some((ratio(176557, 1209600), 6)));
        assert!(cache.get(2, 0).is_some());
        assert!(closed_volume(1, &cache).is_err());
    }

    #[test]
    fn generalized_relations() {
        let cache = VolumeCache::new();
        for (g, alpha, m) in [(1, vec![1], 0), (1, vec![0], 1), (0, vec![0, 0, 0], 1), (1, vec![0, 1], 1), (2, vec![2], 2)] {
            let r = check_generalized_relations(g, &alpha, m, &cache).unwrap();
            assert!(r.all_passed(), "{:?}", r.checks);
        }
    }

    #[test]
    fn bracket_examples() {
        let cache = VolumeCache::new();
        let t1 = bracket_norm(1, &[1], &cache).unwrap();
        assert_eq!((t1.coeff, t1.p_exp), (ratio(1, 2), 0));
        let t0 = bracket_norm(1, &[0], &cache).unwrap();
        assert_eq!((t0.coeff, t0.p_exp), (ratio(1, 12), 1));
        let t000 = bracket_norm(0, &[0, 0, 0], &cache).unwrap();
        assert_eq!((t000.coeff, t000.p_exp), (int(1), 0));
        assert_eq!(b_coeff(0), ratio(1, 2));
        assert_eq!(b_coeff(1), ratio(1, 12));
    }

    #[test]
    fn bracket_recursion_examples() {
        let cache = VolumeCache::new();
        assert_eq!(check_bracket_recursion(1, &[1], &cache).unwrap().status, crate::report::Status::Skipped);
        for (g, alpha) in [(1, vec![0, 1]), (2, vec![4]), (0, vec![0, 0, 0, 0]), (1, vec![0, 0]), (2, vec![1]), (0, vec![1, 0, 0, 0, 0])] {
            let c = check_bracket_recursion(g, &alpha, &cache).unwrap();
            assert!(c.is_pass(), "{c}");
        }
    }

    #[test]
    fn reconstruction_round_trip() {
        let cache = VolumeCache::new();
        for &(g, n) in &[(1, 1), (0, 5), (1, 3), (2, 2)] {
            let v = compute_volume(g, n, &cache).unwrap();
            assert_eq!(reconstruct_volume(g, n, &cache).unwrap(), *v);
            assert!(check_extracted_numbers(g, n, &cache).unwrap().is_pass());
        }
    }
}
