//! Trivalent ribbon graphs as permutation triples, and Kontsevich's formula
//!
//! ```text
//! sum_{|a| = 3g-3+n} <tau_a> prod (2a_k - 1)!! / s_k^{2a_k + 1}
//!     = sum_G 2^{2g-2+n} / |Aut G| prod_edges 1 / (s_left + s_right)
//! ```
//!
//! A graph lives on darts `0..2E`. The vertex rotation `s0` is fixed to
//! `(0 1 2)(3 4 5)...`; every fixed-point-free involution `s1` is tried, and
//! the faces are the cycles of `s2 = s1 s0^{-1}`. Labelled graphs are
//! identified through a canonical code (a breadth-first relabelling from
//! the best starting dart), and the number of starting darts reaching that
//! code is the automorphism count.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{self, BigRational};
use crate::intersection::compositions;
use crate::kdv::CorrelatorTable;
use crate::recursion::is_stable;
use crate::report::{Check, Report};

/// Largest edge count enumerated unless a caller asks for more.
pub const DEFAULT_MAX_EDGES: usize = 9;

/// A connected ribbon graph with labelled faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RibbonGraph {
    /// Vertex rotation.
    pub s0: Vec<usize>,
    /// Edge pairing, a fixed-point-free involution.
    pub s1: Vec<usize>,
    /// Face label (`0..n`) of every dart, constant on the cycles of `s1 s0^{-1}`.
    pub face_of: Vec<usize>,
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        out.push(cyc);
    }
    out
}

fn trivalent_rotation(darts: usize) -> Vec<usize> {
    (0..darts).map(|x| 3 * (x / 3) + (x + 1) % 3).collect()
}

fn face_permutation(s0: &[usize], s1: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; s0.len()];
    for (x, &y) in s0.iter().enumerate() {
        inv[y] = x;
    }
    (0..s0.len()).map(|x| s1[inv[x]]).collect()
}

impl RibbonGraph {
    pub fn num_darts(&self) -> usize {
        self.s0.len()
    }

    pub fn num_edges(&self) -> usize {
        self.s0.len() / 2
    }

    pub fn num_vertices(&self) -> usize {
        cycles(&self.s0).len()
    }

    pub fn num_faces(&self) -> usize {
        cycles(&self.s2()).len()
    }

    pub fn s2(&self) -> Vec<usize> {
        face_permutation(&self.s0, &self.s1)
    }

    /// From `V - E + n = 2 - 2g`; `None` if that is not a non-negative integer.
    pub fn genus(&self) -> Option<u32> {
        let chi = self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64;
        (chi <= 2 && chi % 2 == 0).then_some(((2 - chi) / 2) as u32)
    }

    pub fn is_connected(&self) -> bool {
        let d = self.num_darts();
        if d == 0 {
            return false;
        }
        let mut seen = vec![false; d];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for y in [self.s0[x], self.s1[x]] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Face labels on the two sides of every edge, smaller label first.
    pub fn edge_faces(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.num_darts() {
            let y = self.s1[x];
            if x < y {
                let (a, b) = (self.face_of[x], self.face_of[y]);
                out.push((a.min(b), a.max(b)));
            }
        }
        out.sort_unstable();
        out
    }

    /// Trivalence, involution, connectedness and a consistent face labelling.
    pub fn check_invariants(&self) -> Result<()> {
        let d = self.num_darts();
        let bad = |m: &str| Err(Error::Internal(format!("ribbon graph: {m}")));
        if self.s1.len() != d || self.face_of.len() != d || !d.is_multiple_of(2) {
            return bad("size mismatch");
        }
        if cycles(&self.s0).iter().any(|c| c.len() != 3) {
            return bad("vertex of degree other than 3");
        }
        if (0..d).any(|x| self.s1[x] == x || self.s1[self.s1[x]] != x) {
            return bad("edge pairing is not a fixed-point-free involution");
        }
        if !self.is_connected() {
            return bad("not connected");
        }
        let faces = cycles(&self.s2());
        let mut labels: Vec<usize> = Vec::new();
        for f in &faces {
            let l = self.face_of[f[0]];
            if f.iter().any(|&x| self.face_of[x] != l) {
                return bad("face label not constant on a face");
            }
            labels.push(l);
        }
        labels.sort_unstable();
        if labels != (0..faces.len()).collect::<Vec<_>>() {
            return bad("face labels are not a bijection onto 0..n");
        }
        if self.genus().is_none() {
            return bad("Euler characteristic inconsistent");
        }
        Ok(())
    }

    /// Breadth-first code from `start`, or `None` as soon as it exceeds `bound`.
    fn code_from(&self, start: usize, bound: Option<&[u32]>) -> Option<Vec<u32>> {
        let d = self.num_darts();
        let mut new_index = vec![u32::MAX; d];
        let mut order = Vec::with_capacity(d);
        new_index[start] = 0;
        order.push(start);
        let mut code = Vec::with_capacity(3 * d);
        let mut head = 0;
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [self.s0[x], self.s1[x]] {
                if new_index[y] == u32::MAX {
                    new_index[y] = order.len() as u32;
                    order.push(y);
                }
                code.push(new_index[y]);
            }
            code.push(self.face_of[x] as u32);
            if let Some(b) = bound {
                let k = code.len();
                match code[..].cmp(&b[..k]) {
                    std::cmp::Ordering::Greater => return None,
                    std::cmp::Ordering::Less => return Some(self.finish_code(code, new_index, order, head)),
                    std::cmp::Ordering::Equal => {}
                }
            }
        }
        Some(code)
    }

    fn finish_code(&self, mut code: Vec<u32>, mut new_index: Vec<u32>, mut order: Vec<usize>, mut head: usize) -> Vec<u32> {
        while head < order.len() {
            let x = order[head];
            head += 1;
            for y in [self.s0[x], self.s1[x]] {
                if new_index[y] == u32::MAX {
                    new_index[y] = order.len() as u32;
                    order.push(y);
                }
                code.push(new_index[y]);
            }
            code.push(self.face_of[x] as u32);
        }
        code
    }

    /// Canonical code (equal exactly for isomorphic labelled graphs) and
    /// the number of label-preserving automorphisms.
    pub fn canonical(&self) -> (Vec<u32>, usize) {
        let mut best: Option<Vec<u32>> = None;
        let mut aut = 0;
        for start in 0..self.num_darts() {
            let Some(code) = self.code_from(start, best.as_deref()) else {
                continue;
            };
            match &best {
                Some(b) if *b == code => aut += 1,
                _ => {
                    best = Some(code);
                    aut = 1;
                }
            }
        }
        (best.unwrap_or_default(), aut)
    }

    /// Automorphisms counted by brute force over relabellings determined by
    /// the image of dart 0. Independent of [`RibbonGraph::canonical`].
    pub fn automorphisms(&self) -> usize {
        let d = self.num_darts();
        (0..d).filter(|&t| self.extends_to_automorphism(t)).count()
    }

    fn extends_to_automorphism(&self, target: usize) -> bool {
        let d = self.num_darts();
        let mut map = vec![usize::MAX; d];
        map[0] = target;
        let mut stack = vec![0];
        while let Some(x) = stack.pop() {
            let fx = map[x];
            if self.face_of[x] != self.face_of[fx] {
                return false;
            }
            for (y, fy) in [(self.s0[x], self.s0[fx]), (self.s1[x], self.s1[fx])] {
                if map[y] == usize::MAX {
                    map[y] = fy;
                    stack.push(y);
                } else if map[y] != fy {
                    return false;
                }
            }
        }
        let mut hit = vec![false; d];
        map.iter().all(|&y| !std::mem::replace(&mut hit[y], true))
    }
}

/// One isomorphism class of labelled trivalent ribbon graphs.
#[derive(Clone, Debug)]
pub struct GraphClass {
    pub graph: RibbonGraph,
    pub aut: usize,
    /// Pairs `(s1, labelling)` on the fixed `s0` that land in this class.
    pub representatives: u64,
}

impl GraphClass {
    /// `representatives * |Aut|` must equal the centraliser order `3^V V!`.
    pub fn orbit_stabilizer_holds(&self) -> bool {
        let v = self.graph.num_vertices() as u32;
        let centraliser = BigInt::from(3u32).pow(v) * exact::factorial(v);
        BigInt::from(self.representatives) * BigInt::from(self.aut) == centraliser
    }
}

/// Sizes of the graphs in a trivalent class of type `(g, n)`.
pub fn trivalent_sizes(g: u32, n: usize) -> Result<(usize, usize)> {
    if !is_stable(g, n) || n == 0 {
        return Err(Error::Unstable { g, n });
    }
    Ok((4 * g as usize + 2 * n - 4, 6 * g as usize + 3 * n - 6))
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Number of cycles of `s1 s0^{-1}`, for at most 64 darts.
fn count_faces(s0_inv: &[usize], s1: &[usize]) -> usize {
    let mut seen: u64 = 0;
    let mut faces = 0;
    for start in 0..s1.len() {
        if seen >> start & 1 == 1 {
            continue;
        }
        faces += 1;
        let mut x = start;
        while seen >> x & 1 == 0 {
            seen |= 1 << x;
            x = s1[s0_inv[x]];
        }
    }
    faces
}

/// Every perfect matching of the darts still marked `free`, handed to `f`.
fn for_each_matching(s1: &mut Vec<usize>, free: &mut Vec<bool>, f: &mut dyn FnMut(&[usize])) {
    let Some(a) = free.iter().position(|&x| x) else {
        f(s1);
        return;
    };
    free[a] = false;
    for b in a + 1..free.len() {
        if free[b] {
            free[b] = false;
            s1[a] = b;
            s1[b] = a;
            for_each_matching(s1, free, f);
            free[b] = true;
        }
    }
    free[a] = true;
}

/// Isomorphism classes of connected trivalent ribbon graphs of type
/// `(g, n)` with labelled faces, refusing graphs with more than `max_edges` edges.
pub fn enumerate_trivalent_with_limit(g: u32, n: usize, max_edges: usize) -> Result<Vec<GraphClass>> {
    let (_, e) = trivalent_sizes(g, n)?;
    if e > max_edges {
        return Err(Error::Budget(format!(
            "type ({g},{n}) needs {e} edges, above the limit of {max_edges}"
        )));
    }
    if e > 32 {
        return Err(Error::Budget(format!("type ({g},{n}) needs {e} edges; at most 32 are supported")));
    }
    let darts = 2 * e;
    let s0 = trivalent_rotation(darts);
    let mut s0_inv = vec![0; darts];
    for (x, &y) in s0.iter().enumerate() {
        s0_inv[y] = x;
    }
    let labelings = permutations(n);

    let buckets: Vec<HashMap<Vec<u32>, GraphClass>> = (1..darts)
        .into_par_iter()
        .map(|partner| {
            let mut found: HashMap<Vec<u32>, GraphClass> = HashMap::new();
            let mut s1 = vec![0; darts];
            let mut free = vec![true; darts];
            s1[0] = partner;
            s1[partner] = 0;
            free[0] = false;
            free[partner] = false;
            for_each_matching(&mut s1, &mut free, &mut |s1| {
                if count_faces(&s0_inv, s1) != n {
                    return;
                }
                let faces = cycles(&face_permutation(&s0, s1));
                let mut graph = RibbonGraph {
                    s0: s0.clone(),
                    s1: s1.to_vec(),
                    face_of: vec![0; darts],
                };
                if !graph.is_connected() {
                    return;
                }
                for perm in &labelings {
                    for (fi, face) in faces.iter().enumerate() {
                        for &x in face {
                            graph.face_of[x] = perm[fi];
                        }
                    }
                    let (code, aut) = graph.canonical();
                    found
                        .entry(code)
                        .or_insert_with(|| GraphClass {
                            graph: graph.clone(),
                            aut,
                            representatives: 0,
                        })
                        .representatives += 1;
                }
            });
            found
        })
        .collect();

    let mut merged: BTreeMap<Vec<u32>, GraphClass> = BTreeMap::new();
    for bucket in buckets {
        for (code, class) in bucket {
            match merged.get_mut(&code) {
                Some(c) => c.representatives += class.representatives,
                None => {
                    merged.insert(code, class);
                }
            }
        }
    }
    Ok(merged.into_values().collect())
}

/// [`enumerate_trivalent_with_limit`] with [`DEFAULT_MAX_EDGES`].
pub fn enumerate_trivalent(g: u32, n: usize) -> Result<Vec<GraphClass>> {
    enumerate_trivalent_with_limit(g, n, DEFAULT_MAX_EDGES)
}

/// The graph side of Kontsevich's formula with graphs grouped by their
/// multiset of edge sides.
#[derive(Clone, Debug)]
pub struct GraphSum {
    pub g: u32,
    pub n: usize,
    terms: Vec<(Vec<(usize, usize)>, BigRational)>,
}

impl GraphSum {
    pub fn from_classes(g: u32, n: usize, classes: &[GraphClass]) -> Self {
        let prefactor = exact::pow2(2 * g as i64 - 2 + n as i64);
        let mut grouped: BTreeMap<Vec<(usize, usize)>, BigRational> = BTreeMap::new();
        for c in classes {
            let w = &prefactor / BigRational::from_integer(BigInt::from(c.aut));
            *grouped.entry(c.graph.edge_faces()).or_insert_with(BigRational::zero) += w;
        }
        GraphSum {
            g,
            n,
            terms: grouped.into_iter().collect(),
        }
    }

    pub fn build(g: u32, n: usize) -> Result<Self> {
        Ok(Self::from_classes(g, n, &enumerate_trivalent(g, n)?))
    }

    /// Largest number of edges between faces `i <= j` over all graphs.
    fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        for (edges, _) in &self.terms {
            let mut count: BTreeMap<(usize, usize), u32> = BTreeMap::new();
            for &e in edges {
                *count.entry(e).or_default() += 1;
            }
            for (e, c) in count {
                let m = out.entry(e).or_default();
                *m = (*m).max(c);
            }
        }
        out
    }

    pub fn eval(&self, s: &[BigRational]) -> Result<BigRational> {
        if s.len() != self.n {
            return Err(Error::InvalidArgument(format!("expected {} values of s, got {}", self.n, s.len())));
        }
        let mut total = BigRational::zero();
        for (edges, w) in &self.terms {
            let mut term = w.clone();
            for &(a, b) in edges {
                let d = &s[a] + &s[b];
                term = exact::checked_div(&term, &d)?;
            }
            total += term;
        }
        Ok(total)
    }
}

/// Right-hand side of Kontsevich's formula at `s`.
pub fn kontsevich_rhs_eval(g: u32, n: usize, s: &[BigRational]) -> Result<BigRational> {
    if s.iter().any(|x| *x <= BigRational::zero()) {
        return Err(Error::InvalidArgument("all s_k must be positive".into()));
    }
    GraphSum::build(g, n)?.eval(s)
}

/// Left-hand side `sum <tau_a> prod (2a_k - 1)!! / s_k^{2a_k + 1}`.
pub fn kontsevich_lhs_eval(g: u32, s: &[BigRational], table: &CorrelatorTable) -> Result<BigRational> {
    let n = s.len();
    let dim = 3 * g as i64 - 3 + n as i64;
    if dim < 0 {
        return Err(Error::Unstable { g, n });
    }
    let mut total = BigRational::zero();
    for alpha in compositions(dim as u32, n) {
        let corr = table
            .correlator(&alpha)
            .ok_or_else(|| Error::Missing(format!("<tau {alpha:?}> is above the table level")))?;
        if corr.is_zero() {
            continue;
        }
        let mut term = corr;
        for (k, &a) in alpha.iter().enumerate() {
            let df = BigRational::from_integer(exact::double_factorial(2 * a as i64 - 1));
            term = term * df / num_traits::pow(s[k].clone(), 2 * a as usize + 1);
        }
        total += term;
    }
    Ok(total)
}

/// Sample points with `s_1 = 1` and `s_k` (k >= 2) drawn from the primes
/// `q_0 < q_1 < ...` with index sum at most `degree`. Such a lattice
/// determines a polynomial of total degree `degree` in `s_2..s_n`.
pub fn sample_points(n: usize, degree: u32) -> Vec<Vec<BigRational>> {
    let primes = first_primes(degree as usize + 1);
    let vars = n.saturating_sub(1);
    let mut out = Vec::new();
    for idx in crate::intersection::compositions_up_to(degree, vars) {
        let mut point = vec![BigRational::one()];
        point.extend(idx.iter().map(|&i| BigRational::from_integer(BigInt::from(primes[i as usize]))));
        out.push(point);
    }
    out
}

fn first_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = 2u64;
    while out.len() < count {
        if (2..c).take_while(|d| d * d <= c).all(|d| !c.is_multiple_of(d)) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Checks Kontsevich's formula for `(g, n)`.
///
/// Both sides are homogeneous of degree `-E`. Multiplying by
/// `Q = prod s_k^{2(3g-3+n)+1} prod_{i<=j} (s_i + s_j)^{M_ij}` (with `M_ij` the
/// largest edge count between faces `i` and `j`) turns the difference into a
/// polynomial of degree `deg Q - E`, which vanishes iff it vanishes on the
/// dehomogenised sample lattice of that degree.
pub fn kontsevich_check(g: u32, n: usize, table: &CorrelatorTable) -> Result<Report> {
    let classes = enumerate_trivalent(g, n)?;
    let mut report = Report::new();
    let (v, e) = trivalent_sizes(g, n)?;

    let bad: Vec<String> = classes
        .iter()
        .filter_map(|c| {
            let inv = c.graph.check_invariants().err().map(|e| e.to_string());
            let shape = (c.graph.num_vertices(), c.graph.genus()) != (v, Some(g));
            let os = !c.orbit_stabilizer_holds();
            (inv.is_some() || shape || os).then(|| format!("{:?}: {inv:?} shape={shape} orbit={os}", c.graph.s1))
        })
        .collect();
    report.push(if bad.is_empty() {
        Check::pass(format!("ribbon graphs ({g},{n}): {} classes, invariants and orbit-stabilizer", classes.len()))
    } else {
        Check::fail(format!("ribbon graphs ({g},{n}) invariants"), bad.join("; "))
    });

    let sum = GraphSum::from_classes(g, n, &classes);
    let dim = 3 * g + n as u32 - 3;
    let deg_q: u32 = n as u32 * (2 * dim + 1) + sum.edge_multiplicities().values().sum::<u32>();
    let degree = deg_q - e as u32;
    let points = sample_points(n, degree);
    let mismatch = points
        .par_iter()
        .map(|s| -> Result<Option<String>> {
            let lhs = kontsevich_lhs_eval(g, s, table)?;
            let rhs = sum.eval(s)?;
            Ok((lhs != rhs).then(|| {
                let mut msg = String::from("s = (");
                for (i, x) in s.iter().enumerate() {
                    let _ = write!(msg, "{}{x}", if i > 0 { ", " } else { "" });
                }
                let _ = write!(msg, "): {lhs} vs {rhs}");
                msg
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .next();
    let id = format!("Kontsevich formula ({g},{n}) at {} points", points.len());
    report.push(match mismatch {
        None => Check::pass(id),
        Some(m) => Check::fail(id, m),
    });
    Ok(report)
}

/// `E,V,n,g,aut` per class.
pub fn census_csv(classes: &[GraphClass]) -> String {
    let mut out = String::from("E,V,n,g,aut\n");
    for c in classes {
        let gr = &c.graph;
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            gr.num_edges(),
            gr.num_vertices(),
            gr.num_faces(),
            gr.genus().map_or(-1, |g| g as i64),
            c.aut
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, ratio};
    use crate::kdv::build_table;
    use crate::recursion::VolumeCache;
    use proptest::prelude::*;

    #[test]
    fn small_types() {
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
            let classes = enumerate_trivalent(g, n).unwrap();
            assert!(!classes.is_empty());
            for c in &classes {
                c.graph.check_invariants().unwrap();
                assert_eq!(c.graph.genus(), Some(g));
                assert_eq!(c.graph.num_faces(), n);
                assert_eq!(c.aut, c.graph.automorphisms());
                assert!(c.orbit_stabilizer_holds());
            }
        }
    }

    #[test]
    fn rhs_values() {
        assert_eq!(kontsevich_rhs_eval(0, 3, &[int(1), int(1), int(1)]).unwrap(), int(1));
        assert_eq!(kontsevich_rhs_eval(1, 1, &[int(1)]).unwrap(), ratio(1, 24));
        assert_eq!(kontsevich_rhs_eval(1, 1, &[int(2)]).unwrap(), ratio(1, 192));
        assert!(kontsevich_rhs_eval(1, 1, &[int(0)]).is_err());
        assert!(matches!(enumerate_trivalent(0, 2), Err(Error::Unstable { .. })));
        assert!(matches!(enumerate_trivalent_with_limit(0, 4, 5), Err(Error::Budget(_))));
    }

    #[test]
    fn formula_holds() {
        let table = build_table(3, &VolumeCache::new()).unwrap();
        for (g, n) in [(0, 3), (1, 1), (0, 4), (1, 2)] {
            let r = kontsevich_check(g, n, &table).unwrap();
            assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn wrong_correlator_is_caught() {
        let table = build_table(3, &VolumeCache::new()).unwrap();
        let sum = GraphSum::build(1, 2).unwrap();
        let s = [int(1), int(3)];
        let lhs = kontsevich_lhs_eval(1, &s, &table).unwrap();
        assert_eq!(lhs, sum.eval(&s).unwrap());
        assert_ne!(lhs + ratio(1, 1000), sum.eval(&s).unwrap());
    }

    #[test]
    fn census_format() {
        let csv = census_csv(&enumerate_trivalent(1, 1).unwrap());
        assert_eq!(csv, "E,V,n,g,aut\n3,2,1,1,6\n");
    }

    #[test]
    #[ignore = "enumerates 17!! matchings"]
    fn genus_two_one_boundary() {
        let table = build_table(4, &VolumeCache::new()).unwrap();
        assert!(kontsevich_check(2, 1, &table).unwrap().all_passed());
    }

    proptest! {
        #[test]
        fn lattice_is_sized_for_degree(n in 1usize..4, d in 0u32..6) {
            let pts = sample_points(n, d);
            let expected = crate::exact::binomial(d + n as u32 - 1, n as u32 - 1);
            prop_assert_eq!(BigInt::from(pts.len()), expected);
            prop_assert!(pts.iter().all(|p| p[0] == BigRational::one()));
        }
    }
}
