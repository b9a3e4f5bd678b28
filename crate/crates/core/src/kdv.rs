//! Psi-class correlators packaged as the coefficients of
//! `F(t_0, t_1, ...) = sum <tau_0^{d_0} tau_1^{d_1} ...> prod t_k^{d_k} / d_k!`,
//! and the KdV and Virasoro constraints on `F`.
//!
//! `F` itself is never built. Every check extracts the coefficient of one
//! monomial `t^e` from both sides, using
//! `[t^e] d_{D} F = <tau_D tau^e> / e!` and the Cauchy product for products
//! of two derivatives. A correlator with index sum `3g - 3 + n` above the
//! table's level is reported as missing, which turns the check inconclusive.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, int, ratio, BigRational};
use crate::intersection::{compositions, extract_psi_kappa};
use crate::recursion::{compute_volume, is_stable, VolumeCache};
use crate::report::{Check, Report};

/// Exponent sequence `(d_0, d_1, ...)`: `d_k` copies of `tau_k`, or the
/// monomial `prod t_k^{d_k}`. Trailing zeros are irrelevant.
pub type Counts = Vec<u32>;

/// Default level bound for [`build_table`].
pub const DEFAULT_TABLE_LEVEL: u32 = 6;

/// Every nonzero `<tau_alpha>` with `3g - 3 + n <= max_level`.
#[derive(Clone, Debug)]
pub struct CorrelatorTable {
    values: BTreeMap<Counts, BigRational>,
    max_level: u32,
}

/// Drops trailing zeros.
pub fn trim(counts: &[u32]) -> Counts {
    let end = counts.iter().rposition(|&c| c > 0).map_or(0, |i| i + 1);
    counts[..end].to_vec()
}

/// `(d_0, d_1, ...)` from a list of indices.
pub fn counts_of(alpha: &[u32]) -> Counts {
    let mut c = Vec::new();
    for &a in alpha {
        let a = a as usize;
        if c.len() <= a {
            c.resize(a + 1, 0);
        }
        c[a] += 1;
    }
    c
}

/// Sorted list of indices from `(d_0, d_1, ...)`.
pub fn indices_of(counts: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    for (k, &d) in counts.iter().enumerate() {
        out.extend(std::iter::repeat_n(k as u32, d as usize));
    }
    out
}

fn weight(counts: &[u32]) -> u64 {
    counts.iter().enumerate().map(|(k, &d)| k as u64 * d as u64).sum()
}

fn size(counts: &[u32]) -> u64 {
    counts.iter().map(|&d| d as u64).sum()
}

fn add_counts(a: &[u32], b: &[u32]) -> Counts {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, &x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, &x) in b.iter().enumerate() {
        out[i] += x;
    }
    out
}

fn counts_factorial(counts: &[u32]) -> BigRational {
    counts
        .iter()
        .map(|&d| BigRational::from_integer(exact::factorial(d)))
        .fold(BigRational::one(), |a, b| a * b)
}

/// Renders `t^e` as `t0^2 t1`, or `1` for the empty monomial.
pub fn format_monomial(e: &[u32]) -> String {
    let mut s = String::new();
    for (k, &d) in e.iter().enumerate() {
        if d == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push(' ');
        }
        let _ = write!(s, "t{k}");
        if d > 1 {
            let _ = write!(s, "^{d}");
        }
    }
    if s.is_empty() {
        s.push('1');
    }
    s
}

/// Fills the table from the volumes `V_{g,n}` with `3g - 3 + n <= max_level`.
pub fn build_table(max_level: u32, cache: &VolumeCache) -> Result<CorrelatorTable> {
    let mut shapes = Vec::new();
    for g in 0..=(max_level + 3) / 3 {
        for n in 1..=(max_level as usize + 3).saturating_sub(3 * g as usize) {
            if is_stable(g, n) {
                shapes.push((g, n));
            }
        }
    }
    for &(g, n) in &shapes {
        compute_volume(g, n, cache).map_err(|e| match e {
            Error::Budget(msg) => Error::Budget(format!("partial correlator table: {msg}")),
            other => other,
        })?;
    }
    let parts: Vec<Vec<(Counts, BigRational)>> = shapes
        .par_iter()
        .map(|&(g, n)| {
            let v = compute_volume(g, n, cache)?;
            let dim = (3 * g + n as u32) - 3;
            let mut out = Vec::new();
            for alpha in compositions(dim, n) {
                if alpha.windows(2).any(|w| w[0] > w[1]) {
                    continue;
                }
                let value = extract_psi_kappa(&v, &alpha)?.value;
                out.push((counts_of(&alpha), value));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    Ok(CorrelatorTable {
        values: parts.into_iter().flatten().collect(),
        max_level,
    })
}

impl CorrelatorTable {
    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Counts, &BigRational)> {
        self.values.iter()
    }

    /// `<tau^counts>`; zero when the implied genus is not a non-negative
    /// integer, `None` when the correlator lies above the table's level.
    pub fn get(&self, counts: &[u32]) -> Option<BigRational> {
        let n = size(counts);
        let w = weight(counts);
        if n == 0 {
            return Some(BigRational::zero());
        }
        let num = w as i64 - n as i64 + 3;
        if num < 0 || num % 3 != 0 {
            return Some(BigRational::zero());
        }
        if w > self.max_level as u64 {
            return None;
        }
        Some(self.values.get(&trim(counts)).cloned().unwrap_or_else(BigRational::zero))
    }

    /// `<tau_alpha>` for a list of indices.
    pub fn correlator(&self, alpha: &[u32]) -> Option<BigRational> {
        self.get(&counts_of(alpha))
    }

    /// `[t^e] d_{t_D} F` where `d` lists the derivative indices.
    fn derivative_coeff(&self, d: &[usize], e: &[u32]) -> Option<BigRational> {
        let dc = counts_of(&d.iter().map(|&i| i as u32).collect::<Vec<_>>());
        let v = self.get(&add_counts(&dc, e))?;
        Some(v / counts_factorial(e))
    }
}

/// `coeff * prod t_shift * prod_f d_{factors[f]} F`; with no factors the term
/// is the monomial `coeff * prod t_shift` itself.
#[derive(Clone, Debug)]
struct Term {
    coeff: BigRational,
    shift: Vec<usize>,
    factors: Vec<Vec<usize>>,
}

impl Term {
    fn new(coeff: BigRational, shift: Vec<usize>, factors: Vec<Vec<usize>>) -> Self {
        Term { coeff, shift, factors }
    }
}

/// All `e1 <= e` componentwise.
fn sub_counts(e: &[u32]) -> Vec<Counts> {
    let mut out = vec![Vec::new()];
    for &d in e {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..=d).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out
}

/// `[t^e]` of a sum of terms, or `None` if some needed correlator is missing.
fn coefficient(table: &CorrelatorTable, terms: &[Term], e: &[u32]) -> Option<BigRational> {
    let mut total = BigRational::zero();
    for term in terms {
        let mut rest = e.to_vec();
        let shift = counts_of(&term.shift.iter().map(|&i| i as u32).collect::<Vec<_>>());
        rest.resize(rest.len().max(shift.len()), 0);
        if shift.iter().zip(&rest).any(|(s, r)| s > r) {
            continue;
        }
        for (r, s) in rest.iter_mut().zip(&shift) {
            *r -= s;
        }
        let value = match term.factors.as_slice() {
            [] => {
                if rest.iter().all(|&r| r == 0) {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }
            [d] => table.derivative_coeff(d, &rest)?,
            [d1, d2] => {
                let mut acc = BigRational::zero();
                for e1 in sub_counts(&rest) {
                    let e2: Counts = rest.iter().zip(&e1).map(|(r, a)| r - a).collect();
                    let a = table.derivative_coeff(d1, &e1)?;
                    if a.is_zero() {
                        continue;
                    }
                    acc += a * table.derivative_coeff(d2, &e2)?;
                }
                acc
            }
            _ => unreachable!("at most quadratic terms"),
        };
        total += &term.coeff * value;
    }
    Some(total)
}

fn verdict(id: String, lhs_minus_rhs: Option<BigRational>) -> Check {
    match lhs_minus_rhs {
        None => Check::inconclusive(id, "needs correlators above the table level"),
        Some(v) if v.is_zero() => Check::pass(id),
        Some(v) => Check::fail(id, format!("residual {v}")),
    }
}

/// `<tau_0 tau_alpha> = sum_k <tau_alpha - e_k>` and
/// `<tau_1 tau_alpha> = (2g - 2 + n) <tau_alpha>` for every table entry that
/// can play the left-hand side. `<tau_0^3>` and `<tau_1>` are the initial
/// values and are skipped.
pub fn check_correlator_string_dilaton(table: &CorrelatorTable) -> Report {
    let mut report = Report::new();
    for (counts, value) in table.entries() {
        let alpha = indices_of(counts);
        let n = alpha.len();
        if alpha.first() == Some(&0) {
            report.push(string_check(table, &alpha, value));
        }
        if let Some(pos) = alpha.iter().position(|&a| a == 1) {
            let mut rest = alpha.clone();
            rest.remove(pos);
            let g = crate::intersection::implied_genus(&alpha).unwrap_or(0) as i64;
            let id = format!("dilaton <{}>", format_indices(&alpha));
            if rest.is_empty() || (g == 0 && rest.len() == 2) {
                report.push(Check::skipped(id, "smaller moduli space is unstable"));
                continue;
            }
            let rhs = table
                .correlator(&rest)
                .map(|r| int(2 * g - 2 + n as i64 - 1) * r);
            report.push(verdict(id, rhs.map(|r| value - r)));
        }
    }
    report
}

fn string_check(table: &CorrelatorTable, alpha: &[u32], value: &BigRational) -> Check {
    let id = format!("string <{}>", format_indices(alpha));
    let rest = &alpha[1..];
    if rest.len() == 2 && rest.iter().all(|&a| a == 0) {
        return Check::skipped(id, "initial value");
    }
    let mut rhs = Some(BigRational::zero());
    for k in 0..rest.len() {
        if rest[k] == 0 {
            continue;
        }
        let mut lowered = rest.to_vec();
        lowered[k] -= 1;
        rhs = match (rhs, table.correlator(&lowered)) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
    }
    verdict(id, rhs.map(|r| value - r))
}

fn format_indices(alpha: &[u32]) -> String {
    alpha.iter().map(|a| format!("τ{a}")).collect::<Vec<_>>().join(" ")
}

/// Coefficient of `t^e` in
/// `(2n+1) F_{n00} - F_{n-1,0} F_{000} - 2 F_{n-1,00} F_{00} - 1/4 F_{n-1,0000}`.
pub fn check_kdv_pde(n: u32, monomial: &[u32], table: &CorrelatorTable) -> Result<Check> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the KdV relation needs n >= 1 (it involves t_{n-1})".into(),
        ));
    }
    let n = n as usize;
    let terms = [
        Term::new(int(2 * n as i64 + 1), vec![], vec![vec![n, 0, 0]]),
        Term::new(int(-1), vec![], vec![vec![n - 1, 0], vec![0, 0, 0]]),
        Term::new(int(-2), vec![], vec![vec![n - 1, 0, 0], vec![0, 0]]),
        Term::new(ratio(-1, 4), vec![], vec![vec![n - 1, 0, 0, 0, 0]]),
    ];
    let id = format!("KdV n={n} at {}", format_monomial(monomial));
    Ok(verdict(id, coefficient(table, &terms, monomial)))
}

/// The operator `L_n` applied as `L_n(e^F) e^{-F}`, restricted to the
/// `t_k d_{n+k}` terms that can reach `t^e`.
fn virasoro_terms(n: i64, e: &[u32]) -> Vec<Term> {
    let df = |k: i64| BigRational::from_integer(exact::double_factorial(k));
    let mut terms = vec![Term::new(
        -df(2 * n + 3) / int(2),
        vec![],
        vec![vec![(n + 1) as usize]],
    )];
    for (k, &d) in e.iter().enumerate() {
        let k = k as i64;
        if d == 0 || n + k < 0 {
            continue;
        }
        let c = df(2 * k + 2 * n + 1) / (int(2) * df(2 * k - 1));
        terms.push(Term::new(c, vec![k as usize], vec![vec![(n + k) as usize]]));
    }
    match n {
        -1 => terms.push(Term::new(ratio(1, 4), vec![0, 0], vec![])),
        0 => terms.push(Term::new(ratio(1, 16), vec![], vec![])),
        _ => {
            for i in 0..n {
                let j = n - 1 - i;
                let c = df(2 * i + 1) * df(2 * j + 1) / int(4);
                let (i, j) = (i as usize, j as usize);
                terms.push(Term::new(c.clone(), vec![], vec![vec![i, j]]));
                terms.push(Term::new(c, vec![], vec![vec![i], vec![j]]));
            }
        }
    }
    terms
}

/// Coefficient of `t^e` in `L_n(e^F) e^{-F}`, which must vanish.
///
/// The constant in `L_0` is `1/16`, the value forced by `<tau_1> = 1/24`.
pub fn check_virasoro(n: i64, monomial: &[u32], table: &CorrelatorTable) -> Result<Check> {
    if n < -1 {
        return Err(Error::InvalidArgument(format!("Virasoro operators start at n = -1, got {n}")));
    }
    let terms = virasoro_terms(n, monomial);
    let id = format!("Virasoro L_{n} at {}", format_monomial(monomial));
    Ok(verdict(id, coefficient(table, &terms, monomial)))
}

/// All monomials `t^e` of weight at most `max_weight` and at most `max_size`
/// factors.
pub fn monomials(max_weight: u32, max_size: u32) -> Vec<Counts> {
    fn rec(k: u32, top: u32, weight_left: u32, size_left: u32, cur: &mut Counts, out: &mut Vec<Counts>) {
        if k > top {
            out.push(trim(cur));
            return;
        }
        let cap = weight_left.checked_div(k).map_or(size_left, |c| c.min(size_left));
        for d in 0..=cap {
            cur.push(d);
            rec(k + 1, top, weight_left - d * k, size_left - d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, max_weight, max_weight, max_size, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Monomials whose every correlator could have level at most `max_level`;
/// beyond `max_level + 3` factors all correlators vanish identically.
fn candidate_monomials(table: &CorrelatorTable) -> Vec<Counts> {
    monomials(table.max_level, table.max_level + 3)
}

/// KdV at every monomial, for `n = 1..=max_n`; inconclusive ones are kept
/// in the report so the caller can tell how many were decidable.
pub fn check_kdv_all(max_n: u32, table: &CorrelatorTable) -> Report {
    let mut report = Report::new();
    let monos = candidate_monomials(table);
    for n in 1..=max_n {
        let checks: Vec<Check> = monos
            .par_iter()
            .map(|e| check_kdv_pde(n, e, table).expect("n >= 1"))
            .collect();
        report.checks.extend(checks);
    }
    report
}

/// `L_n` at every monomial for each `n` in `ns`.
pub fn check_virasoro_all(ns: &[i64], table: &CorrelatorTable) -> Result<Report> {
    let mut report = Report::new();
    let monos = candidate_monomials(table);
    for &n in ns {
        let checks: Vec<Check> = monos
            .par_iter()
            .map(|e| check_virasoro(n, e, table))
            .collect::<Result<_>>()?;
        report.checks.extend(checks);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn table(level: u32) -> CorrelatorTable {
        build_table(level, &VolumeCache::new()).unwrap()
    }

    #[test]
    fn table_values() {
        let t = table(3);
        assert_eq!(t.get(&[3]), Some(int(1)));
        assert_eq!(t.get(&[3, 1]), Some(int(1)));
        assert_eq!(t.get(&[4]), Some(int(0)));
        assert_eq!(t.get(&[0, 1]), Some(ratio(1, 24)));
        assert_eq!(t.get(&[0, 2]), Some(ratio(1, 24)));
        assert_eq!(t.get(&[2]), Some(int(0)));
        assert_eq!(t.get(&[]), Some(int(0)));
        assert_eq!(t.get(&[0, 0, 0, 0, 1]), None);
        assert!(t.entries().all(|(_, v)| *v > BigRational::zero()));
    }

    #[test]
    fn counts_helpers() {
        assert_eq!(counts_of(&[0, 2, 0]), vec![2, 0, 1]);
        assert_eq!(indices_of(&[2, 0, 1]), vec![0, 0, 2]);
        assert_eq!(trim(&[1, 0, 0]), vec![1]);
        assert_eq!(format_monomial(&[2, 1]), "t0^2 t1");
        assert_eq!(format_monomial(&[]), "1");
        assert!(monomials(2, 2).contains(&vec![0, 0, 1]));
        assert!(monomials(2, 2).contains(&vec![0, 2]));
        assert!(monomials(2, 2).contains(&vec![1, 0, 1]));
        assert!(!monomials(2, 2).contains(&vec![0, 0, 0, 1]));
    }

    #[test]
    fn string_dilaton_on_table() {
        let t = table(4);
        let r = check_correlator_string_dilaton(&t);
        assert_eq!(r.count(Status::Fail), 0, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r.count(Status::Pass) > 10);
    }

    #[test]
    fn kdv_examples() {
        let t = table(4);
        for (n, e) in [(1, vec![]), (2, vec![]), (1, vec![1])] {
            let c = check_kdv_pde(n, &e, &t).unwrap();
            assert!(c.is_pass(), "{c}");
        }
        assert!(check_kdv_pde(0, &[], &t).is_err());
        let far = check_kdv_pde(5, &[0, 0, 0, 2], &t).unwrap();
        assert_eq!(far.status, Status::Inconclusive);
    }

    #[test]
    fn virasoro_examples() {
        let t = table(4);
        for n in -1..=2 {
            for e in [vec![], vec![1], vec![2], vec![0, 1], vec![3, 1]] {
                let c = check_virasoro(n, &e, &t).unwrap();
                assert_ne!(c.status, Status::Fail, "{c}");
            }
        }
        assert!(check_virasoro(0, &[], &t).unwrap().is_pass());
        assert!(check_virasoro(-2, &[], &t).is_err());
    }

    #[test]
    fn wrong_constant_would_fail() {
        let t = table(2);
        let mut terms = virasoro_terms(0, &[]);
        terms.pop();
        terms.push(Term::new(ratio(1, 48), vec![], vec![]));
        assert_ne!(coefficient(&t, &terms, &[]), Some(BigRational::zero()));
    }

    #[test]
    fn all_checks_level_four() {
        let t = table(4);
        let kdv = check_kdv_all(3, &t);
        assert_eq!(kdv.count(Status::Fail), 0);
        assert!(kdv.count(Status::Pass) > 20);
        let vir = check_virasoro_all(&[-1, 0, 1, 2], &t).unwrap();
        assert_eq!(vir.count(Status::Fail), 0, "{:?}", vir.failures().take(3).collect::<Vec<_>>());
        assert!(vir.count(Status::Pass) > 40);
    }
}
