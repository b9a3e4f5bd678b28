//! Sparse exact polynomials in `p = pi^2` and the squared boundary lengths
//! `x_k = L_k^2`.
//!
//! `pi` never appears as a number. Every identity used by the crate is
//! algebraic in `pi^2`, including the evaluations at `L = 2 pi i`, which
//! become the substitution `x = -4p`.
//!
//! Variable indices are 0-based: `x_exps()[0]` is the exponent of `x_1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, BigRational};

/// `p^p_exp * prod_k x_k^{x_exps[k]}`.
///
/// Ordered graded-lexicographically: by total degree `p_exp + sum(x_exps)`,
/// then by `p_exp`, then lexicographically by `x_exps`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    degree: u32,
    p: u32,
    x: Vec<u32>,
}

impl Monomial {
    pub fn new(p_exp: u32, x_exps: Vec<u32>) -> Self {
        let degree = p_exp + x_exps.iter().sum::<u32>();
        Monomial {
            degree,
            p: p_exp,
            x: x_exps,
        }
    }

    pub fn constant(n: usize) -> Self {
        Monomial::new(0, vec![0; n])
    }

    pub fn p_exp(&self) -> u32 {
        self.p
    }

    pub fn x_exps(&self) -> &[u32] {
        &self.x
    }

    pub fn x_degree(&self) -> u32 {
        self.degree - self.p
    }

    /// Total degree `p_exp + sum(x_exps)`.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.x.len(), other.x.len());
        let x = self.x.iter().zip(&other.x).map(|(a, b)| a + b).collect();
        Monomial::new(self.p + other.p, x)
    }

    fn swapped(&self, i: usize, j: usize) -> Monomial {
        let mut m = self.clone();
        m.x.swap(i, j);
        m
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree
            .cmp(&other.degree)
            .then(self.p.cmp(&other.p))
            .then_with(|| self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A polynomial in `p, x_1, ..., x_n` tagged with the `(g, n)` it belongs to.
///
/// Zero coefficients are never stored; the zero polynomial has no terms. The
/// `g` tag is metadata carried along by the caller and does not take part in
/// the ring operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VolumePolynomial {
    g: u32,
    n: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

/// One orbit of the monomial symmetric basis: `coeff * p^p_exp * m_(partition)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricTerm {
    /// Non-increasing list of positive exponents of the `x_k`.
    pub partition: Vec<u32>,
    pub p_exp: u32,
    pub coeff: BigRational,
}

impl VolumePolynomial {
    pub fn zero(g: u32, n: usize) -> Self {
        VolumePolynomial {
            g,
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(g: u32, n: usize, c: BigRational) -> Self {
        let mut poly = Self::zero(g, n);
        poly.add_term(Monomial::constant(n), c);
        poly
    }

    pub fn one(g: u32, n: usize) -> Self {
        Self::constant(g, n, BigRational::one())
    }

    /// Builds a polynomial from `(p_exp, x_exps, coeff)` triples, summing
    /// repeated monomials.
    pub fn from_terms<I>(g: u32, n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u32, Vec<u32>, BigRational)>,
    {
        let mut poly = Self::zero(g, n);
        for (p, x, c) in terms {
            if x.len() != n {
                return Err(Error::RingMismatch {
                    left: n,
                    right: x.len(),
                });
            }
            poly.add_term(Monomial::new(p, x), c);
        }
        Ok(poly)
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn with_genus(mut self, g: u32) -> Self {
        self.g = g;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `p^p_exp * prod x_k^{x_exps[k]}`.
    pub fn coeff_of(&self, p_exp: u32, x_exps: &[u32]) -> BigRational {
        self.coeff(&Monomial::new(p_exp, x_exps.to_vec()))
    }

    /// Adds `c * m` in place, dropping the term if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        debug_assert_eq!(m.n(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::RingMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut out = Self::zero(self.g, self.n);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.g, self.n);
        }
        VolumePolynomial {
            g: self.g,
            n: self.n,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    /// Multiplies by `p^e`.
    pub fn mul_p_pow(&self, e: u32) -> Self {
        VolumePolynomial {
            g: self.g,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (Monomial::new(m.p + e, m.x.clone()), v.clone()))
                .collect(),
        }
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(Error::IndexOutOfRange { index: k, n: self.n });
        }
        Ok(())
    }

    /// Formal partial derivative with respect to `x_k`.
    pub fn derivative_x(&self, k: usize) -> Result<Self> {
        self.check_index(k)?;
        let mut out = Self::zero(self.g, self.n);
        for (m, c) in &self.terms {
            let a = m.x[k];
            if a == 0 {
                continue;
            }
            let mut x = m.x.clone();
            x[k] -= 1;
            out.add_term(Monomial::new(m.p, x), c * BigRational::from_integer(a.into()));
        }
        Ok(out)
    }

    /// `int_0^{L_k} L_k P dL_k` written in the `x` variables: each `x_k^a`
    /// becomes `x_k^{a+1} / (2a + 2)`.
    pub fn integrate_l(&self, k: usize) -> Result<Self> {
        self.check_index(k)?;
        let mut out = Self::zero(self.g, self.n);
        for (m, c) in &self.terms {
            let a = m.x[k];
            let mut x = m.x.clone();
            x[k] += 1;
            out.add_term(Monomial::new(m.p, x), c / BigRational::from_integer((2 * a + 2).into()));
        }
        Ok(out)
    }

    /// Formal evaluation at `L_k = 2 pi i`, i.e. `x_k = -4p`. The variable is
    /// removed, leaving a polynomial in `n - 1` lengths.
    pub fn substitute_2pi_i(&self, k: usize) -> Result<Self> {
        self.check_index(k)?;
        let mut out = Self::zero(self.g, self.n - 1);
        for (m, c) in &self.terms {
            let a = m.x[k];
            let mut x = m.x.clone();
            x.remove(k);
            let factor = BigRational::from_integer(BigInt::from(-4).pow(a));
            out.add_term(Monomial::new(m.p + a, x), c * factor);
        }
        Ok(out)
    }

    /// Floating-point value at `x_k = lengths[k]^2`, `p = pi_value^2`.
    pub fn eval_numeric(&self, lengths: &[f64], pi_value: f64) -> Result<f64> {
        if lengths.len() != self.n {
            return Err(Error::RingMismatch {
                left: self.n,
                right: lengths.len(),
            });
        }
        let p = pi_value * pi_value;
        let xs: Vec<f64> = lengths.iter().map(|l| l * l).collect();
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| {
                let mut v = exact::to_f64(c) * p.powi(m.p as i32);
                for (xk, &a) in xs.iter().zip(&m.x) {
                    v *= xk.powi(a as i32);
                }
                v
            })
            .sum())
    }

    /// Value at `L = 0`: the sum of the pure `p`-power terms, as a polynomial in `p`.
    pub fn at_zero(&self) -> Self {
        let mut out = Self::zero(self.g, 0);
        for (m, c) in &self.terms {
            if m.x_degree() == 0 {
                out.add_term(Monomial::new(m.p, vec![]), c.clone());
            }
        }
        out
    }

    /// Reads a polynomial in `p` alone as `c * p^e` if it has that form.
    pub fn as_single_term(&self) -> Option<(BigRational, u32)> {
        match self.terms.len() {
            0 => Some((BigRational::zero(), 0)),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                (m.x_degree() == 0).then(|| (c.clone(), m.p))
            }
            _ => None,
        }
    }

    /// Renames variables: `x_k` of `self` becomes `x_{target[k]}` of the
    /// result, which lives in `new_n` variables.
    pub fn relabel(&self, target: &[usize], new_n: usize) -> Result<Self> {
        if target.len() != self.n {
            return Err(Error::RingMismatch {
                left: self.n,
                right: target.len(),
            });
        }
        if let Some(&bad) = target.iter().find(|&&t| t >= new_n) {
            return Err(Error::IndexOutOfRange { index: bad, n: new_n });
        }
        let mut out = Self::zero(self.g, new_n);
        for (m, c) in &self.terms {
            let mut x = vec![0; new_n];
            for (k, &a) in m.x.iter().enumerate() {
                x[target[k]] += a;
            }
            out.add_term(Monomial::new(m.p, x), c.clone());
        }
        Ok(out)
    }

    /// Every term has total degree `d`.
    pub fn is_homogeneous(&self, d: u32) -> bool {
        self.terms.keys().all(|m| m.degree == d)
    }

    pub fn all_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// First adjacent transposition `(i, i+1)` that changes the polynomial.
    /// Invariance under all of them is invariance under the full symmetric group.
    pub fn symmetry_violation(&self) -> Option<(usize, usize)> {
        for i in 0..self.n.saturating_sub(1) {
            for (m, c) in &self.terms {
                if self.terms.get(&m.swapped(i, i + 1)) != Some(c) {
                    return Some((i, i + 1));
                }
            }
        }
        None
    }

    /// Checks homogeneity of degree `3g - 3 + n`, full symmetry,
    /// nonnegativity and a positive value at `L = 0`.
    pub fn check_volume_invariants(&self) -> Result<()> {
        let dim = 3 * self.g as i64 - 3 + self.n as i64;
        if dim < 0 || !self.is_homogeneous(dim as u32) {
            return Err(Error::Internal(format!(
                "V_({},{}) is not homogeneous of degree {dim}",
                self.g, self.n
            )));
        }
        if let Some((i, j)) = self.symmetry_violation() {
            return Err(Error::Internal(format!(
                "V_({},{}) is not symmetric under x_{} <-> x_{}",
                self.g,
                self.n,
                i + 1,
                j + 1
            )));
        }
        if !self.all_nonnegative() {
            return Err(Error::Internal(format!(
                "V_({},{}) has a negative coefficient",
                self.g, self.n
            )));
        }
        if !self.coeff_of(dim as u32, &vec![0; self.n]).is_positive() {
            return Err(Error::Internal(format!(
                "V_({},{}) has no positive constant term",
                self.g, self.n
            )));
        }
        Ok(())
    }

    /// Regroups a symmetric polynomial in the monomial symmetric basis.
    ///
    /// Orbits come out by decreasing `x`-degree, and within one degree by
    /// decreasing partition in lexicographic order, e.g. `m_(3)`, `m_(2,1)`,
    /// `m_(1,1,1)`.
    pub fn to_monomial_symmetric(&self) -> Result<Vec<SymmetricTerm>> {
        if let Some((i, j)) = self.symmetry_violation() {
            return Err(Error::NotSymmetric { i: i + 1, j: j + 1 });
        }
        let mut orbits: BTreeMap<(Vec<u32>, u32), BigRational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut part: Vec<u32> = m.x.iter().copied().filter(|&a| a > 0).collect();
            part.sort_unstable_by(|a, b| b.cmp(a));
            // All monomials of an orbit share the coefficient; keep one.
            orbits.entry((part, m.p)).or_insert_with(|| c.clone());
        }
        let mut out: Vec<SymmetricTerm> = orbits
            .into_iter()
            .map(|((partition, p_exp), coeff)| SymmetricTerm {
                partition,
                p_exp,
                coeff,
            })
            .collect();
        out.sort_by(|a, b| {
            let da: u32 = a.partition.iter().sum();
            let db: u32 = b.partition.iter().sum();
            db.cmp(&da)
                .then_with(|| b.partition.cmp(&a.partition))
                .then(a.p_exp.cmp(&b.p_exp))
        });
        Ok(out)
    }

    /// Expands monomial symmetric terms back into `n` variables.
    pub fn from_monomial_symmetric(g: u32, n: usize, terms: &[SymmetricTerm]) -> Result<Self> {
        let mut poly = Self::zero(g, n);
        for t in terms {
            if t.partition.len() > n {
                return Err(Error::InvalidArgument(format!(
                    "partition {:?} has more than {n} parts",
                    t.partition
                )));
            }
            let mut exps = t.partition.clone();
            exps.resize(n, 0);
            for perm in distinct_permutations(exps) {
                poly.add_term(Monomial::new(t.p_exp, perm), t.coeff.clone());
            }
        }
        Ok(poly)
    }

    pub fn to_record(&self) -> PolyRecord {
        PolyRecord {
            g: self.g,
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRecord {
                    p: m.p,
                    x: m.x.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_record(rec: &PolyRecord) -> Result<Self> {
        let mut poly = Self::zero(rec.g, rec.n);
        for t in &rec.terms {
            if t.x.len() != rec.n {
                return Err(Error::Parse(format!(
                    "term has {} exponents, expected {}",
                    t.x.len(),
                    rec.n
                )));
            }
            let c = exact::parse_rational(&format!("{}/{}", t.num, t.den))?;
            poly.add_term(Monomial::new(t.p, t.x.clone()), c);
        }
        Ok(poly)
    }

    /// One CSV row per term: `g,n,p,x,num,den` with `x` joined by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("g,n,p,x,num,den\n");
        for (m, c) in &self.terms {
            let x: Vec<String> = m.x.iter().map(u32::to_string).collect();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                self.g,
                self.n,
                m.p,
                x.join(";"),
                c.numer(),
                c.denom()
            ));
        }
        out
    }
}

fn distinct_permutations(mut v: Vec<u32>) -> Vec<Vec<u32>> {
    v.sort_unstable();
    let mut out = vec![v.clone()];
    // Next lexicographic permutation until exhausted.
    loop {
        let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
            return out;
        };
        let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot");
        v.swap(i - 1, j);
        v[i..].reverse();
        out.push(v.clone());
    }
}

/// Serialized form of a polynomial. Big integers are decimal strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyRecord {
    pub g: u32,
    pub n: usize,
    pub terms: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub p: u32,
    pub x: Vec<u32>,
    pub num: String,
    pub den: String,
}

const SUPERSCRIPTS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];

fn superscript(n: u32) -> String {
    n.to_string()
        .chars()
        .map(|c| SUPERSCRIPTS[c.to_digit(10).unwrap() as usize])
        .collect()
}

/// Renders `c * p^e` as e.g. `13π⁴/24`, `2π²`, `1/96`.
pub fn format_pi_term(c: &BigRational, p_exp: u32) -> String {
    let sign = if c.is_negative() { "-" } else { "" };
    let num = c.numer().abs();
    let den = c.denom();
    let pi = match p_exp {
        0 => String::new(),
        e => format!("π{}", superscript(2 * e)),
    };
    let num_str = if num.is_one() && !pi.is_empty() {
        String::new()
    } else {
        num.to_string()
    };
    if den.is_one() {
        format!("{sign}{num_str}{pi}")
    } else {
        format!("{sign}{num_str}{pi}/{den}")
    }
}

impl fmt::Display for SymmetricTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let coeff = format_pi_term(&self.coeff, self.p_exp);
        if self.partition.is_empty() {
            return f.write_str(&coeff);
        }
        let parts: Vec<String> = self.partition.iter().map(u32::to_string).collect();
        let basis = format!("m_({})", parts.join(","));
        if self.coeff.is_one() && self.p_exp == 0 {
            f.write_str(&basis)
        } else {
            write!(f, "{coeff} {basis}")
        }
    }
}

/// Human rendering in the monomial symmetric basis, e.g.
/// `1/192 m_(2) + 1/96 m_(1,1) + π²/12 m_(1) + π⁴/4`.
pub fn render_symmetric(terms: &[SymmetricTerm]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, t) in terms.iter().enumerate() {
        let s = t.to_string();
        if i == 0 {
            out.push_str(&s);
        } else if let Some(rest) = s.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&s);
        }
    }
    out
}

impl fmt::Display for VolumePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        // Descending order reads like the usual way of writing polynomials.
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mut factors = Vec::new();
            for (k, &a) in m.x.iter().enumerate() {
                match a {
                    0 => {}
                    1 => factors.push(format!("x{}", k + 1)),
                    _ => factors.push(format!("x{}^{a}", k + 1)),
                }
            }
            let mut term = format_pi_term(c, m.p);
            if !factors.is_empty() {
                if term == "1" {
                    term = factors.join("*");
                } else {
                    term = format!("{term}*{}", factors.join("*"));
                }
            }
            if first {
                f.write_str(&term)?;
                first = false;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}
