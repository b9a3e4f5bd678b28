//! Mirzakhani's recursion for `V_{g,n}(L)`.
//!
//! The right-hand side
//!
//! ```text
//! 2 d/dL_1 (L_1 V_{g,n}) = int int xy H(x+y, L_1) V_{g-1,n+1}(x, y, L_2..L_n)
//!                        + sum_{g1+g2=g, I+J={2..n}} int int xy H(x+y, L_1) V_{g1}(x, L_I) V_{g2}(y, L_J)
//!                        + sum_{k=2}^{n} int x [H(x, L_1+L_k) + H(x, L_1-L_k)] V_{g,n-1}(x, ..)
//! ```
//!
//! is assembled monomial by monomial through the kernel transforms, then
//! integrated in `L_1` and divided by `2 L_1`. The splitting sum runs over
//! ordered pairs `(g1, I)` and relies on `V_{0,1} = V_{0,2} = 0` to drop
//! unstable pieces.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{ratio, BigRational};
use crate::kernel::{double_factor, kernel_f, transform_boundary};
use crate::poly::{Monomial, VolumePolynomial};

/// `3g - 3 + n`, the complex dimension of the moduli space and the degree
/// of `V_{g,n}` in `(p, x_1, ..., x_n)`.
pub fn level(g: u32, n: usize) -> i64 {
    3 * g as i64 - 3 + n as i64
}

pub fn is_stable(g: u32, n: usize) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// Memo table of computed volumes keyed by `(g, n)`.
///
/// Safe to share between threads: reads are concurrent, insertion is
/// exclusive. Every stored polynomial has passed the volume invariants.
#[derive(Debug)]
pub struct VolumeCache {
    entries: RwLock<HashMap<(u32, usize), Arc<VolumePolynomial>>>,
    max_level: u32,
}

impl Default for VolumeCache {
    fn default() -> Self {
        Self::new()
    }
}

impl VolumeCache {
    /// Default budget: volumes up to `3g - 3 + n = 16`.
    pub const DEFAULT_MAX_LEVEL: u32 = 16;

    pub fn new() -> Self {
        Self::with_max_level(Self::DEFAULT_MAX_LEVEL)
    }

    /// A cache that refuses to compute volumes with `3g - 3 + n > max_level`.
    pub fn with_max_level(max_level: u32) -> Self {
        VolumeCache {
            entries: RwLock::new(HashMap::new()),
            max_level,
        }
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn get(&self, g: u32, n: usize) -> Option<Arc<VolumePolynomial>> {
        self.entries.read().expect("volume cache poisoned").get(&(g, n)).cloned()
    }

    /// Stores a volume after checking homogeneity, symmetry and nonnegativity.
    /// An existing entry is kept.
    pub fn insert(&self, poly: VolumePolynomial) -> Result<Arc<VolumePolynomial>> {
        if !is_stable(poly.g(), poly.n()) {
            return Err(Error::Unstable { g: poly.g(), n: poly.n() });
        }
        poly.check_volume_invariants()?;
        let mut map = self.entries.write().expect("volume cache poisoned");
        Ok(Arc::clone(map.entry((poly.g(), poly.n())).or_insert_with(|| Arc::new(poly))))
    }

    pub fn len(&self) -> usize {
        self.entries.read().expect("volume cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All cached volumes sorted by `(g, n)`.
    pub fn entries(&self) -> Vec<Arc<VolumePolynomial>> {
        let map = self.entries.read().expect("volume cache poisoned");
        let mut keys: Vec<_> = map.keys().copied().collect();
        keys.sort_unstable();
        keys.iter().map(|k| Arc::clone(&map[k])).collect()
    }

    pub fn keys(&self) -> Vec<(u32, usize)> {
        let mut keys: Vec<_> = self.entries.read().expect("volume cache poisoned").keys().copied().collect();
        keys.sort_unstable();
        keys
    }
}

/// `V_{0,3} = 1`.
pub fn base_v03() -> VolumePolynomial {
    VolumePolynomial::one(0, 3)
}

/// `V_{1,1} = x_1/48 + p/12`.
pub fn base_v11() -> VolumePolynomial {
    VolumePolynomial::from_terms(1, 1, [(0, vec![1], ratio(1, 48)), (1, vec![0], ratio(1, 12))])
        .expect("V_(1,1) is well formed")
}

/// Computes (or fetches) `V_{g,n}`. Closed surfaces (`n = 0`) go through
/// [`crate::intersection::closed_volume`] instead.
pub fn compute_volume(g: u32, n: usize, cache: &VolumeCache) -> Result<Arc<VolumePolynomial>> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "the recursion needs at least one boundary; use closed_volume for n = 0".into(),
        ));
    }
    if !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    if let Some(v) = cache.get(g, n) {
        return Ok(v);
    }
    if level(g, n) > cache.max_level() as i64 {
        return Err(Error::Budget(format!(
            "V_({g},{n}) has level {} above the configured maximum {}",
            level(g, n),
            cache.max_level()
        )));
    }
    let poly = match (g, n) {
        (0, 3) => base_v03(),
        (1, 1) => base_v11(),
        _ => {
            let rhs = recursion_rhs(g, n, cache)?;
            integrate_rhs(&rhs).with_genus(g)
        }
    };
    cache.insert(poly)
}

/// `V` from `2 d/dL_1 (L_1 V) = rhs`: each `x_1^a` picks up `1 / (2(2a+1))`.
fn integrate_rhs(rhs: &VolumePolynomial) -> VolumePolynomial {
    let mut out = VolumePolynomial::zero(rhs.g(), rhs.n());
    for (m, c) in rhs.terms() {
        let a = m.x_exps()[0];
        out.add_term(m.clone(), c / BigRational::from_integer((2 * (2 * a + 1)).into()));
    }
    out
}

/// The child volume a term of the recursion reads, or `None` when it is an
/// unstable conventional zero.
fn child(g: i64, n: usize, cache: &VolumeCache) -> Result<Option<Arc<VolumePolynomial>>> {
    if g < 0 || !is_stable(g as u32, n) {
        return Ok(None);
    }
    compute_volume(g as u32, n, cache).map(Some)
}

/// Groups a child volume by the exponent of its first variable. The
/// remaining variables `1..` are renamed to `targets` in a ring of `n_parent`
/// variables whose slot 0 stays empty.
fn split_first(poly: &VolumePolynomial, targets: &[usize], n_parent: usize) -> BTreeMap<u32, VolumePolynomial> {
    let mut out: BTreeMap<u32, VolumePolynomial> = BTreeMap::new();
    for (m, c) in poly.terms() {
        let xs = m.x_exps();
        let mut x = vec![0; n_parent];
        for (j, &t) in targets.iter().enumerate() {
            x[t] = xs[j + 1];
        }
        out.entry(xs[0])
            .or_insert_with(|| VolumePolynomial::zero(0, n_parent))
            .add_term(Monomial::new(m.p_exp(), x), c.clone());
    }
    out
}

/// Multiplies each `Q_k` (free of `x_1`) by `F_{2k-1}(L_1)` and sums.
fn apply_kernels(by_k: BTreeMap<u32, VolumePolynomial>, n: usize) -> VolumePolynomial {
    let mut out = VolumePolynomial::zero(0, n);
    for (k, q) in by_k {
        let f = kernel_f(k);
        for (m, c) in q.terms() {
            for (i, fc) in f.coeffs().iter().enumerate() {
                let mut x = m.x_exps().to_vec();
                x[0] = k - i as u32;
                out.add_term(Monomial::new(m.p_exp() + i as u32, x), c * fc);
            }
        }
    }
    out
}

fn add_into(by_k: &mut BTreeMap<u32, VolumePolynomial>, k: u32, q: VolumePolynomial) {
    match by_k.get_mut(&k) {
        Some(acc) => {
            for (m, c) in q.terms() {
                acc.add_term(m.clone(), c.clone());
            }
        }
        None => {
            by_k.insert(k, q);
        }
    }
}

/// `int int xy H(x+y, L_1) V_{g-1,n+1}(x, y, L_2, ..., L_n) dx dy`.
fn nonseparating_term(g: u32, n: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    let Some(v) = child(g as i64 - 1, n + 1, cache)? else {
        return Ok(VolumePolynomial::zero(0, n));
    };
    let mut by_k: BTreeMap<u32, VolumePolynomial> = BTreeMap::new();
    for (m, c) in v.terms() {
        let xs = m.x_exps();
        let (a, b) = (xs[0], xs[1]);
        let mut x = vec![0; n];
        x[1..].copy_from_slice(&xs[2..]);
        let mut q = VolumePolynomial::zero(0, n);
        q.add_term(Monomial::new(m.p_exp(), x), c * double_factor(a, b));
        add_into(&mut by_k, a + b + 2, q);
    }
    Ok(apply_kernels(by_k, n))
}

/// Both halves of a splitting are stable. Checked before touching the cache:
/// with `g1 = g` and `I = {2..n}` the first half is `V_{g,n}` itself.
fn split_is_stable(g: u32, n: usize, g1: u32, subset_len: usize) -> bool {
    g1 <= g && is_stable(g1, subset_len + 1) && is_stable(g - g1, n - subset_len)
}

/// One ordered splitting `(g1, I)` of the separating sum.
fn separating_term(g: u32, n: usize, g1: u32, subset: &[usize], cache: &VolumeCache) -> Result<VolumePolynomial> {
    let complement: Vec<usize> = (1..n).filter(|i| !subset.contains(i)).collect();
    if !split_is_stable(g, n, g1, subset.len()) {
        return Ok(VolumePolynomial::zero(0, n));
    }
    let (Some(v1), Some(v2)) = (
        child(g1 as i64, subset.len() + 1, cache)?,
        child(g as i64 - g1 as i64, complement.len() + 1, cache)?,
    ) else {
        return Ok(VolumePolynomial::zero(0, n));
    };
    let left = split_first(&v1, subset, n);
    let right = split_first(&v2, &complement, n);
    let mut by_k: BTreeMap<u32, VolumePolynomial> = BTreeMap::new();
    for (&a, ra) in &left {
        for (&b, rb) in &right {
            let prod = ra.mul(rb)?.scale(&double_factor(a, b));
            add_into(&mut by_k, a + b + 2, prod);
        }
    }
    Ok(apply_kernels(by_k, n))
}

/// `int x [H(x, L_1+L_k) + H(x, L_1-L_k)] V_{g,n-1}(x, L_2, .., ^L_k, .., L_n) dx`
/// with `k` a 0-based index in `1..n`.
fn boundary_term(g: u32, n: usize, k: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    let Some(v) = child(g as i64, n - 1, cache)? else {
        return Ok(VolumePolynomial::zero(0, n));
    };
    let targets: Vec<usize> = (1..n).filter(|&i| i != k).collect();
    let mut out = VolumePolynomial::zero(0, n);
    let mut transforms: HashMap<u32, VolumePolynomial> = HashMap::new();
    for (m, c) in v.terms() {
        let xs = m.x_exps();
        let a = xs[0];
        let t = transforms.entry(a).or_insert_with(|| transform_boundary(a));
        let mut rest = vec![0; n];
        for (j, &tg) in targets.iter().enumerate() {
            rest[tg] = xs[j + 1];
        }
        for (tm, tc) in t.terms() {
            let mut x = rest.clone();
            x[0] += tm.x_exps()[0];
            x[k] += tm.x_exps()[1];
            out.add_term(Monomial::new(m.p_exp() + tm.p_exp(), x), c * tc);
        }
    }
    Ok(out)
}

enum Piece {
    NonSeparating,
    Separating { g1: u32, subset: Vec<usize> },
    Boundary { k: usize },
}

/// The assembled right-hand side `2 d/dL_1 (L_1 V_{g,n})` as a polynomial in
/// `(p, x_1, .., x_n)`.
///
/// Child volumes are computed first; the individual pieces are then
/// assembled in parallel and summed. Exact arithmetic makes the result
/// independent of evaluation order.
pub fn recursion_rhs(g: u32, n: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    if n == 0 || !is_stable(g, n) {
        return Err(Error::Unstable { g, n });
    }
    let mut pieces = vec![Piece::NonSeparating];
    let others = n - 1;
    for g1 in 0..=g {
        for mask in 0u64..(1u64 << others) {
            let subset: Vec<usize> = (0..others).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            pieces.push(Piece::Separating { g1, subset });
        }
    }
    pieces.extend((1..n).map(|k| Piece::Boundary { k }));
    build_rhs(g, n, &pieces, cache)
}

fn build_rhs(g: u32, n: usize, pieces: &[Piece], cache: &VolumeCache) -> Result<VolumePolynomial> {
    // Children first, so the parallel assembly below only reads the cache.
    for piece in pieces {
        match piece {
            Piece::NonSeparating => {
                child(g as i64 - 1, n + 1, cache)?;
            }
            Piece::Separating { g1, subset } => {
                if split_is_stable(g, n, *g1, subset.len()) {
                    child(*g1 as i64, subset.len() + 1, cache)?;
                    child(g as i64 - *g1 as i64, n - subset.len(), cache)?;
                }
            }
            Piece::Boundary { .. } => {
                child(g as i64, n - 1, cache)?;
            }
        }
    }
    let parts: Vec<VolumePolynomial> = pieces
        .par_iter()
        .map(|piece| match piece {
            Piece::NonSeparating => nonseparating_term(g, n, cache),
            Piece::Separating { g1, subset } => separating_term(g, n, *g1, subset, cache),
            Piece::Boundary { k } => boundary_term(g, n, *k, cache),
        })
        .collect::<Result<_>>()?;
    let mut rhs = VolumePolynomial::zero(g, n);
    for part in parts {
        for (m, c) in part.terms() {
            if !c.is_zero() {
                rhs.add_term(m.clone(), c.clone());
            }
        }
    }
    Ok(rhs)
}

/// Same as [`recursion_rhs`] but with the pieces visited in reverse order
/// and summed sequentially. Exists to test order independence.
pub fn recursion_rhs_reversed(g: u32, n: usize, cache: &VolumeCache) -> Result<VolumePolynomial> {
    let others = n - 1;
    let mut pieces: Vec<Piece> = (1..n).rev().map(|k| Piece::Boundary { k }).collect();
    for g1 in (0..=g).rev() {
        for mask in (0u64..(1u64 << others)).rev() {
            let subset: Vec<usize> = (0..others).filter(|b| mask >> b & 1 == 1).map(|b| b + 1).collect();
            pieces.push(Piece::Separating { g1, subset });
        }
    }
    pieces.push(Piece::NonSeparating);
    let mut rhs = VolumePolynomial::zero(g, n);
    for piece in &pieces {
        let part = build_rhs(g, n, std::slice::from_ref(piece), cache)?;
        rhs = rhs.add(&part)?;
    }
    Ok(rhs)
}

/// Computes every `V_{g,n}` with `n >= 1` and `3g - 3 + n <= max_level`.
pub fn compute_up_to_level(max_level: u32, cache: &VolumeCache) -> Result<()> {
    for g in 0..=(max_level + 3) / 3 {
        for n in 1..=(max_level as i64 + 3 - 3 * g as i64).max(0) as usize {
            if is_stable(g, n) {
                compute_volume(g, n, cache)?;
            }
        }
    }
    Ok(())
}
