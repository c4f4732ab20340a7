//! Finite posets, based and framed posets, admissible trees, the generators
//! `B[k]`, `A[n]`, `T[n]`, and the constructions `I^Δ` and `I^B`.

use std::fmt;

use itertools::Itertools;
use thiserror::Error;

pub const MAX_ELEMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("relation is not antisymmetric (cycle through {0} and {1})")]
    NotAPoset(usize, usize),
    #[error("element index {0} out of range")]
    OutOfRange(usize),
    #[error("too many elements ({0} > 64)")]
    TooLarge(usize),
    #[error("no final element")]
    NoFinalElement,
    #[error("basepoint {0} is not minimal")]
    NotMinimal(usize),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Order relation stored as bitset rows: bit `b` of `le[a]` is `a <= b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    n: usize,
    le: Vec<u64>,
    labels: Vec<String>,
}

pub type Edge = (usize, usize);

impl Poset {
    /// Reflexive-transitive closure of the given relations `a <= b`.
    pub fn from_relations(n: usize, rel: &[Edge]) -> Result<Self, PosetError> {
        if n > MAX_ELEMENTS {
            return Err(PosetError::TooLarge(n));
        }
        let mut le: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
        for &(a, b) in rel {
            if a >= n || b >= n {
                return Err(PosetError::OutOfRange(a.max(b)));
            }
            le[a] |= 1 << b;
        }
        // Warshall on bitsets
        for k in 0..n {
            for i in 0..n {
                if le[i] >> k & 1 == 1 {
                    le[i] |= le[k];
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if le[a] >> b & 1 == 1 && le[b] >> a & 1 == 1 {
                    return Err(PosetError::NotAPoset(a, b));
                }
            }
        }
        Ok(Self { n, le, labels: (0..n).map(|i| i.to_string()).collect() })
    }

    /// The ordinal `[n] = {0 < 1 < ... < n}`.
    pub fn chain(n: usize) -> Self {
        let rel: Vec<Edge> = (0..n).map(|i| (i, i + 1)).collect();
        Self::from_relations(n + 1, &rel).unwrap()
    }

    /// `n` pairwise incomparable elements.
    pub fn discrete(n: usize) -> Self {
        Self::from_relations(n, &[]).unwrap()
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n);
        self.labels = labels;
        self
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a] >> b & 1 == 1
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.le(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.le(a, b) || self.le(b, a)
    }

    /// Bitset of elements `>= a`.
    pub fn up_set(&self, a: usize) -> u64 {
        self.le[a]
    }

    /// The edge set `E(I)`: one edge per strict pair `a < b`.
    pub fn strict_pairs(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.lt(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cover relations (Hasse diagram).
    pub fn covers(&self) -> Vec<Edge> {
        self.strict_pairs()
            .into_iter()
            .filter(|&(a, b)| !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b)))
            .collect()
    }

    pub fn is_minimal(&self, a: usize) -> bool {
        !(0..self.n).any(|b| self.lt(b, a))
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        (0..self.n).filter(|&a| self.is_minimal(a)).collect()
    }

    /// The element above every element, if any.
    pub fn final_element(&self) -> Option<usize> {
        (0..self.n).find(|&m| (0..self.n).all(|a| self.le(a, m)))
    }

    pub fn is_monotone_map(&self, f: &[usize], target: &Poset) -> bool {
        f.len() == self.n
            && f.iter().all(|&x| x < target.n)
            && self.strict_pairs().iter().all(|&(a, b)| target.le(f[a], f[b]))
    }

    /// A path of cover relations from `a` up to `b` (`a <= b`), as a vertex list.
    pub fn cover_path(&self, a: usize, b: usize) -> Option<Vec<usize>> {
        if !self.le(a, b) {
            return None;
        }
        let mut path = vec![a];
        let mut cur = a;
        while cur != b {
            let next = (0..self.n).find(|&c| self.lt(cur, c) && self.le(c, b) && self.is_cover(cur, c))?;
            path.push(next);
            cur = next;
        }
        Some(path)
    }

    pub fn is_cover(&self, a: usize, b: usize) -> bool {
        self.lt(a, b) && !(0..self.n).any(|c| self.lt(a, c) && self.lt(c, b))
    }

    /// Every maximal path of covers from `a` to `b`.
    pub fn all_cover_paths(&self, a: usize, b: usize) -> Vec<Vec<usize>> {
        if a == b {
            return vec![vec![a]];
        }
        let mut out = Vec::new();
        for c in 0..self.n {
            if self.is_cover(a, c) && self.le(c, b) {
                for mut rest in self.all_cover_paths(c, b) {
                    rest.insert(0, a);
                    out.push(rest);
                }
            }
        }
        out
    }

    /// Text format `n; a<b, c<d`.
    pub fn parse(s: &str) -> Result<Self, PosetError> {
        let (head, rest) = s.split_once(';').unwrap_or((s, ""));
        let n: usize = head.trim().parse().map_err(|_| PosetError::Parse(format!("bad size '{head}'")))?;
        let mut rel = Vec::new();
        for item in rest.split(',').map(str::trim).filter(|x| !x.is_empty()) {
            let (a, b) = item.split_once('<').ok_or_else(|| PosetError::Parse(format!("bad relation '{item}'")))?;
            let a = a.trim().parse().map_err(|_| PosetError::Parse(format!("bad element '{a}'")))?;
            let b = b.trim().parse().map_err(|_| PosetError::Parse(format!("bad element '{b}'")))?;
            rel.push((a, b));
        }
        Self::from_relations(n, &rel)
    }
}

impl fmt::Display for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
        write!(f, "{}; {}", self.n, covers.join(", "))
    }
}

/// `(I; x_0, ..., x_k)` with a final element. Basepoints are minimal unless
/// built with [`BasedPoset::new_relaxed`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasedPoset {
    poset: Poset,
    basepoints: Vec<usize>,
    final_element: usize,
}

impl BasedPoset {
    pub fn new(poset: Poset, basepoints: Vec<usize>) -> Result<Self, PosetError> {
        let b = Self::new_relaxed(poset, basepoints)?;
        if let Some(&x) = b.basepoints.iter().find(|&&x| !b.poset.is_minimal(x)) {
            return Err(PosetError::NotMinimal(x));
        }
        Ok(b)
    }

    /// Basepoints need not be minimal.
    pub fn new_relaxed(poset: Poset, basepoints: Vec<usize>) -> Result<Self, PosetError> {
        if basepoints.is_empty() {
            return Err(PosetError::Parse("at least one basepoint required".into()));
        }
        if let Some(&x) = basepoints.iter().find(|&&x| x >= poset.len()) {
            return Err(PosetError::OutOfRange(x));
        }
        let final_element = poset.final_element().ok_or(PosetError::NoFinalElement)?;
        Ok(Self { poset, basepoints, final_element })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn basepoints(&self) -> &[usize] {
        &self.basepoints
    }

    /// `k`, one less than the number of basepoints.
    pub fn k(&self) -> usize {
        self.basepoints.len() - 1
    }

    pub fn final_element(&self) -> usize {
        self.final_element
    }

    pub fn has_distinct_basepoints(&self) -> bool {
        self.basepoints.iter().all_unique()
    }

    pub fn is_basepoint(&self, a: usize) -> bool {
        self.basepoints.contains(&a)
    }

    /// Parse a poset line followed by `base: i,j,...`.
    pub fn parse(s: &str) -> Result<Self, PosetError> {
        let mut poset_text = String::new();
        let mut base = None;
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(b) = line.strip_prefix("base:") {
                let pts = b
                    .split(',')
                    .map(str::trim)
                    .filter(|x| !x.is_empty())
                    .map(|x| x.parse::<usize>().map_err(|_| PosetError::Parse(format!("bad basepoint '{x}'"))))
                    .collect::<Result<Vec<_>, _>>()?;
                base = Some(pts);
            } else {
                poset_text.push_str(line);
            }
        }
        let base = base.ok_or_else(|| PosetError::Parse("missing 'base:' line".into()))?;
        Self::new(Poset::parse(&poset_text)?, base)
    }
}

impl fmt::Display for BasedPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b: Vec<String> = self.basepoints.iter().map(|x| x.to_string()).collect();
        write!(f, "{}\nbase: {}", self.poset, b.join(","))
    }
}

/// A based poset with an admissible maximal tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FramedPoset {
    based: BasedPoset,
    tree: Vec<Edge>,
}

impl FramedPoset {
    pub fn new(based: BasedPoset, tree: Vec<Edge>) -> Result<Self, PosetError> {
        if !is_admissible_tree(based.poset(), &tree) {
            return Err(PosetError::InvalidMorphism("tree is not admissible".into()));
        }
        Ok(Self { based, tree })
    }

    pub fn based(&self) -> &BasedPoset {
        &self.based
    }

    pub fn tree(&self) -> &[Edge] {
        &self.tree
    }
}

/// `(f, sigma)` with `f` monotone and `f(x_i) = y_{sigma(i)}`; `sigma` is a
/// weakly increasing map `[k] -> [m]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasedMorphism {
    f: Vec<usize>,
    sigma: Vec<usize>,
}

impl BasedMorphism {
    pub fn new(source: &BasedPoset, target: &BasedPoset, f: Vec<usize>, sigma: Vec<usize>) -> Result<Self, PosetError> {
        if !source.poset.is_monotone_map(&f, &target.poset) {
            return Err(PosetError::InvalidMorphism("f is not monotone".into()));
        }
        if sigma.len() != source.basepoints.len() || sigma.iter().any(|&s| s >= target.basepoints.len()) {
            return Err(PosetError::InvalidMorphism("sigma has the wrong shape".into()));
        }
        if sigma.windows(2).any(|w| w[0] > w[1]) {
            return Err(PosetError::InvalidMorphism("sigma is not monotone".into()));
        }
        for (i, &x) in source.basepoints.iter().enumerate() {
            if f[x] != target.basepoints[sigma[i]] {
                return Err(PosetError::InvalidMorphism(format!("f(x_{i}) != y_sigma({i})")));
            }
        }
        Ok(Self { f, sigma })
    }

    pub fn f(&self) -> &[usize] {
        &self.f
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn is_injective(&self) -> bool {
        self.f.iter().all_unique()
    }

    pub fn is_basepoint_bijective(&self, target: &BasedPoset) -> bool {
        self.sigma.len() == target.basepoints.len() && self.sigma.iter().enumerate().all(|(i, &s)| i == s)
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut c = x;
    while parent[c] != r {
        let next = parent[c];
        parent[c] = r;
        c = next;
    }
    r
}

/// Spanning tree of an undirected multigraph on `n` vertices.
fn is_spanning_tree(n: usize, edges: &[Edge]) -> bool {
    if edges.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &(a, b) in edges {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return false;
        }
        parent[ra] = rb;
    }
    true
}

/// Vertices reachable from each vertex along directed edges (bitsets).
fn directed_reach(n: usize, edges: &[Edge]) -> Vec<u64> {
    let mut reach: Vec<u64> = (0..n).map(|i| 1u64 << i).collect();
    for &(a, b) in edges {
        reach[a] |= 1 << b;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i] >> k & 1 == 1 {
                reach[i] |= reach[k];
            }
        }
    }
    reach
}

/// A tree `T ⊆ E(I)` is admissible when it is a spanning tree and every pair
/// of vertices has a common vertex reachable from both along oriented tree
/// paths.
pub fn is_admissible_tree(poset: &Poset, tree: &[Edge]) -> bool {
    let n = poset.len();
    if tree.iter().any(|&(a, b)| a >= n || b >= n || !poset.lt(a, b)) {
        return false;
    }
    is_admissible_on(n, tree)
}

fn is_admissible_on(n: usize, tree: &[Edge]) -> bool {
    if !is_spanning_tree(n, tree) {
        return false;
    }
    let reach = directed_reach(n, tree);
    (0..n).all(|x| (x + 1..n).all(|y| reach[x] & reach[y] != 0))
}

/// Oriented tree path from `a` to `b` as a list of edges.
pub fn tree_path(n: usize, tree: &[Edge], a: usize, b: usize) -> Option<Vec<Edge>> {
    let mut path = Vec::new();
    let mut cur = a;
    let mut seen = vec![false; n];
    while cur != b {
        if seen[cur] {
            return None;
        }
        seen[cur] = true;
        let reach = directed_reach(n, tree);
        let e = *tree.iter().find(|&&(x, y)| x == cur && reach[y] >> b & 1 == 1)?;
        path.push(e);
        cur = e.1;
    }
    Some(path)
}

/// The edges `(x, m)` for every `x != m`.
pub fn star_tree(poset: &Poset) -> Option<Vec<Edge>> {
    let m = poset.final_element()?;
    Some((0..poset.len()).filter(|&x| x != m).map(|x| (x, m)).collect())
}

/// All spanning trees of `Γ(I)` that are admissible.
pub fn admissible_trees(poset: &Poset) -> Vec<Vec<Edge>> {
    let n = poset.len();
    if n == 0 {
        return Vec::new();
    }
    poset
        .strict_pairs()
        .into_iter()
        .combinations(n - 1)
        .filter(|t| is_admissible_on(n, t))
        .collect()
}

/// `B[k]`: nonempty intervals `[i, j]` of `[k]` ordered by inclusion. The
/// singletons `{0}, ..., {k}` carry ids `0..=k` and are the basepoints; the
/// whole interval is the final element.
pub fn b_poset(k: usize) -> BasedPoset {
    let ivs = b_intervals(k);
    let mut rel = Vec::new();
    for (a, &(i, j)) in ivs.iter().enumerate() {
        for (b, &(x, y)) in ivs.iter().enumerate() {
            if a != b && x <= i && j <= y {
                rel.push((a, b));
            }
        }
    }
    let labels = ivs.iter().map(|&(i, j)| format!("[{i},{j}]")).collect();
    let p = Poset::from_relations(ivs.len(), &rel).unwrap().with_labels(labels);
    BasedPoset::new(p, (0..=k).collect()).unwrap()
}

/// Intervals of `[k]` in id order: by length, then by left end.
pub fn b_intervals(k: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for len in 0..=k {
        for i in 0..=k - len {
            out.push((i, i + len));
        }
    }
    out
}

pub fn b_index(k: usize, iv: (usize, usize)) -> usize {
    b_intervals(k).iter().position(|&x| x == iv).expect("interval in range")
}

/// Map `B[k'] -> B[k]` induced by a weakly increasing `theta: [k'] -> [k]`,
/// sending an interval to the interval spanned by its image.
pub fn b_map(k_src: usize, k_tgt: usize, theta: &[usize]) -> Vec<usize> {
    b_intervals(k_src).iter().map(|&(i, j)| b_index(k_tgt, (theta[i], theta[j]))).collect()
}

/// Coface `delta_j: [k-1] -> [k]` skipping `j`.
pub fn coface(k: usize, j: usize) -> Vec<usize> {
    (0..k).map(|i| if i < j { i } else { i + 1 }).collect()
}

/// Codegeneracy `s_j: [k+1] -> [k]` repeating `j`.
pub fn codegeneracy(k: usize, j: usize) -> Vec<usize> {
    (0..k + 2).map(|i| if i <= j { i } else { i - 1 }).collect()
}

/// `A[n] = {(x, y) : 0 <= x <= y <= n}` in lexicographic order (a chain).
/// Element ids follow that order.
pub fn a_poset(n: usize) -> Poset {
    let elems = a_elements(n);
    let rel: Vec<Edge> = (1..elems.len()).map(|i| (i - 1, i)).collect();
    let labels = elems.iter().map(|&(x, y)| format!("({x},{y})")).collect();
    Poset::from_relations(elems.len(), &rel).unwrap().with_labels(labels)
}

pub fn a_elements(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for x in 0..=n {
        for y in x..=n {
            out.push((x, y));
        }
    }
    out
}

pub fn a_index(n: usize, e: (usize, usize)) -> usize {
    a_elements(n).iter().position(|&x| x == e).expect("pair in range")
}

/// `T[n]`: basepoints `0..=n`, pairwise incomparable, below a top `n + 1`.
pub fn t_poset(n: usize) -> BasedPoset {
    let rel: Vec<Edge> = (0..=n).map(|i| (i, n + 1)).collect();
    let p = Poset::from_relations(n + 2, &rel).unwrap();
    BasedPoset::new(p, (0..=n).collect()).unwrap()
}

/// `I^Δ`: the basepoints fused into one class. Returns the quotient poset,
/// the quotient map and the id of the fused class.
pub fn collapse_basepoints(based: &BasedPoset) -> Result<(Poset, Vec<usize>, usize), PosetError> {
    let p = based.poset();
    let n = p.len();
    let rep = based.basepoints()[0];
    let mut class = vec![usize::MAX; n];
    let mut next = 0;
    for a in 0..n {
        if class[a] != usize::MAX {
            continue;
        }
        if based.is_basepoint(a) {
            for &b in based.basepoints() {
                class[b] = next;
            }
        } else {
            class[a] = next;
        }
        next += 1;
    }
    let rel: Vec<Edge> = p
        .strict_pairs()
        .into_iter()
        .map(|(a, b)| (class[a], class[b]))
        .filter(|(a, b)| a != b)
        .collect();
    let mut labels = vec![String::new(); next];
    for a in 0..n {
        if labels[class[a]].is_empty() {
            labels[class[a]] = if based.is_basepoint(a) { "*".to_string() } else { p.label(a).to_string() };
        }
    }
    let q = Poset::from_relations(next, &rel)?.with_labels(labels);
    Ok((q, class.clone(), class[rep]))
}

/// Image `T^Δ` of a tree in `I^Δ` (as an edge set), if it is an admissible tree.
pub fn collapse_tree(based: &BasedPoset, tree: &[Edge]) -> Option<(Poset, Vec<Edge>)> {
    let (q, class, _) = collapse_basepoints(based).ok()?;
    let mut edges: Vec<Edge> = tree.iter().map(|&(a, b)| (class[a], class[b])).collect();
    if edges.iter().any(|(a, b)| a == b) {
        return None;
    }
    edges.sort_unstable();
    edges.dedup();
    is_admissible_tree(&q, &edges).then_some((q, edges))
}

/// Result of [`glue_b`].
#[derive(Debug, Clone)]
pub struct Glued {
    /// `I^B`, with the singletons of `B[k]` as basepoints.
    pub poset: BasedPoset,
    /// `I -> I^B`.
    pub inclusion: BasedMorphism,
    /// `B[k] -> I^B`.
    pub from_b: BasedMorphism,
}

/// `I^B`: `I` with a copy of `B[k]` glued along `b_i = x_i`, every new
/// element below every non-basepoint of `I`. Existing elements keep their ids;
/// the non-singleton intervals of `B[k]` follow in `B[k]` id order.
pub fn glue_b(based: &BasedPoset) -> Result<Glued, PosetError> {
    let p = based.poset();
    let n = p.len();
    let k = based.k();
    let b = b_poset(k);
    let nb = b.poset().len();
    // B[k] id -> I^B id
    let mut emb = vec![0usize; nb];
    emb[..=k].copy_from_slice(based.basepoints());
    for (j, e) in emb.iter_mut().enumerate().skip(k + 1) {
        *e = n + j - (k + 1);
    }
    let total = n + nb - (k + 1);
    let mut rel = p.strict_pairs();
    for (a, bb) in b.poset().strict_pairs() {
        rel.push((emb[a], emb[bb]));
    }
    for j in 0..nb {
        for y in (0..n).filter(|&y| !based.is_basepoint(y)) {
            if emb[j] != y {
                rel.push((emb[j], y));
            }
        }
    }
    let mut labels: Vec<String> = p.labels().to_vec();
    labels.extend(b.poset().labels()[k + 1..].iter().cloned());
    let q = Poset::from_relations(total, &rel)?.with_labels(labels);
    let glued = BasedPoset::new(q, based.basepoints().to_vec())?;
    let id: Vec<usize> = (0..=k).collect();
    let inclusion = BasedMorphism::new(based, &glued, (0..n).collect(), id.clone())?;
    let from_b = BasedMorphism::new(&b, &glued, emb, id)?;
    Ok(Glued { poset: glued, inclusion, from_b })
}

/// `I` with a new element above everything; the new element gets id `|I|`.
pub fn adjoin_top(based: &BasedPoset) -> Result<(BasedPoset, BasedMorphism), PosetError> {
    let p = based.poset();
    let n = p.len();
    let mut rel = p.strict_pairs();
    rel.extend((0..n).map(|a| (a, n)));
    let mut labels = p.labels().to_vec();
    labels.push("top".into());
    let q = Poset::from_relations(n + 1, &rel)?.with_labels(labels);
    let out = BasedPoset::new(q, based.basepoints().to_vec())?;
    let m = BasedMorphism::new(based, &out, (0..n).collect(), (0..=based.k()).collect())?;
    Ok((out, m))
}

/// Every poset on `{0, .., n-1}` refining the natural order (so every poset
/// up to isomorphism) whose final element is `n - 1`.
pub fn all_posets_with_final(n: usize) -> Vec<Poset> {
    if n == 0 {
        return Vec::new();
    }
    let pairs: Vec<Edge> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut out: Vec<Poset> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let rel: Vec<Edge> = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        let mut rel = rel;
        rel.extend((0..n.saturating_sub(1)).map(|a| (a, n - 1)));
        let p = Poset::from_relations(n, &rel).unwrap();
        if seen.insert(p.le.clone()) {
            out.push(p);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_edges() {
        assert_eq!(Poset::chain(2).strict_pairs().len(), 3);
        assert_eq!(Poset::chain(0).strict_pairs().len(), 0);
        let b1 = b_poset(1);
        assert_eq!(b1.poset().strict_pairs(), vec![(0, 2), (1, 2)]);
    }

    #[test]
    fn figure_trees() {
        // a=0, b=1, c=2, d=3 with a<c, b<c, c<d
        let p = Poset::from_relations(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
        assert!(is_admissible_tree(&p, &[(0, 2), (1, 2), (2, 3)]));
        assert!(!is_admissible_tree(&p, &[(0, 3), (1, 2), (1, 3)]));
        assert!(is_admissible_tree(&p, &star_tree(&p).unwrap()));
        let c = Poset::chain(3);
        assert!(is_admissible_tree(&c, &[(0, 1), (1, 2), (2, 3)]));
    }

    #[test]
    fn generators() {
        let b2 = b_poset(2);
        assert_eq!(b2.poset().len(), 6);
        assert_eq!(b2.basepoints(), &[0, 1, 2]);
        assert_eq!(b2.final_element(), 5);
        assert_eq!(a_poset(2).len(), 6);
        assert_eq!(t_poset(3).poset().len(), 5);
    }

    #[test]
    fn collapse() {
        let (q, _, _) = collapse_basepoints(&b_poset(1)).unwrap();
        assert_eq!(q.len(), 2);
        assert_eq!(q.strict_pairs().len(), 1);
        let (q, _, _) = collapse_basepoints(&b_poset(2)).unwrap();
        assert_eq!(q.len(), 4);
        let c = BasedPoset::new(Poset::chain(2), vec![0]).unwrap();
        let (q, _, _) = collapse_basepoints(&c).unwrap();
        assert_eq!(q.le, c.poset().le);
    }

    #[test]
    fn glue() {
        let pt = BasedPoset::new(Poset::chain(0), vec![0]).unwrap();
        let g = glue_b(&pt).unwrap();
        assert_eq!(g.poset.poset().len(), 1);
        let g = glue_b(&b_poset(1)).unwrap();
        assert_eq!(g.poset.poset().len(), 4);
        assert!(g.inclusion.is_basepoint_bijective(&g.poset));
        assert!(g.from_b.is_basepoint_bijective(&g.poset));
    }

    #[test]
    fn parse_roundtrip() {
        let b = BasedPoset::parse("3; 0<2, 1<2\nbase: 0,1,1").unwrap();
        assert_eq!(b.basepoints(), &[0, 1, 1]);
        assert_eq!(BasedPoset::parse(&b.to_string()).unwrap(), b);
        assert!(matches!(Poset::parse("2; 0<1, 1<0"), Err(PosetError::NotAPoset(0, 1))));
    }
}
