//! Truncated simplicial and bisimplicial sets at desk scale: finite
//! categories and their nerves, the nerve of the free groupoid on `[n]`, the
//! bisimplicial sets `t^! NC` and `N_n Fun([m], C)^×`, restriction to the
//! row and column, Segal and coskeletal checks, and the Grothendieck
//! construction for a finite groupoid acting on simplicial sets.
//!
//! Every simplicial set stores its simplices as indices `0..size(m)` with
//! face and degeneracy tables; constructors take keyed simplices and closures.

use std::collections::{BTreeMap, HashMap};
use std::hash::Hash;

use itertools::Itertools;
use thiserror::Error;

use crate::lattice::Lattice;
use crate::schain::LatticeTuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimplicialError {
    #[error("operator {op} at level {level} leaves the stored simplices")]
    NotClosed { level: String, op: String },
    #[error("enumeration at level {level} exceeds the budget of {budget}")]
    TooLarge { level: String, budget: usize },
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("simplicial identity fails: {0}")]
    Identity(String),
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("unknown preset '{0}'")]
    UnknownPreset(String),
}

pub const DEFAULT_BUDGET: usize = 200_000;

type Table = Vec<Vec<usize>>;

/// Checks the simplicial identities on levels `0..=deg`.
fn audit(
    deg: usize,
    size: &dyn Fn(usize) -> usize,
    d: &dyn Fn(usize, usize, usize) -> usize,
    s: &dyn Fn(usize, usize, usize) -> usize,
) -> Result<(), String> {
    for m in 0..=deg {
        for x in 0..size(m) {
            if m >= 2 {
                for j in 1..=m {
                    for i in 0..j {
                        if d(m - 1, i, d(m, j, x)) != d(m - 1, j - 1, d(m, i, x)) {
                            return Err(format!("d{i} d{j} at level {m}, simplex {x}"));
                        }
                    }
                }
            }
            if m + 2 <= deg {
                for j in 0..=m {
                    for i in 0..=j {
                        if s(m + 1, i, s(m, j, x)) != s(m + 1, j + 1, s(m, i, x)) {
                            return Err(format!("s{i} s{j} at level {m}, simplex {x}"));
                        }
                    }
                }
            }
            if m < deg {
                for j in 0..=m {
                    let y = s(m, j, x);
                    for i in 0..=m + 1 {
                        let lhs = d(m + 1, i, y);
                        let rhs = if i < j {
                            s(m - 1, j - 1, d(m, i, x))
                        } else if i == j || i == j + 1 {
                            x
                        } else {
                            s(m - 1, j, d(m, i - 1, x))
                        };
                        if lhs != rhs {
                            return Err(format!("d{i} s{j} at level {m}, simplex {x}"));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

/// Simplicial set truncated at degree `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSimplicialSet {
    sizes: Vec<usize>,
    /// `faces[m][i][x] = d_i x`, empty for `m = 0`.
    faces: Vec<Table>,
    /// `degens[m][i][x] = s_i x`, empty for `m = D`.
    degens: Vec<Table>,
}

/// Index of each keyed simplex, per level.
pub type KeyIndex<K> = Vec<HashMap<K, usize>>;

impl TruncatedSimplicialSet {
    /// Builds the index tables; fails if an operator leaves `levels`.
    pub fn from_keys<K: Clone + Eq + Hash>(
        levels: Vec<Vec<K>>,
        face: impl Fn(usize, usize, &K) -> K,
        degen: impl Fn(usize, usize, &K) -> K,
    ) -> Result<(Self, KeyIndex<K>), SimplicialError> {
        let deg = levels.len() - 1;
        let index: KeyIndex<K> =
            levels.iter().map(|l| l.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()).collect();
        let look = |m: usize, k: &K, op: &str| {
            index[m].get(k).copied().ok_or_else(|| SimplicialError::NotClosed { level: m.to_string(), op: op.into() })
        };
        let mut faces = vec![Vec::new()];
        let mut degens = Vec::new();
        for m in 0..=deg {
            if m > 0 {
                let t = (0..=m)
                    .map(|i| levels[m].iter().map(|k| look(m - 1, &face(m, i, k), &format!("d{i}"))).collect())
                    .collect::<Result<Table, _>>()?;
                faces.push(t);
            }
            if m < deg {
                let t = (0..=m)
                    .map(|i| levels[m].iter().map(|k| look(m + 1, &degen(m, i, k), &format!("s{i}"))).collect())
                    .collect::<Result<Table, _>>()?;
                degens.push(t);
            }
        }
        degens.push(Vec::new());
        let sizes = levels.iter().map(Vec::len).collect();
        Ok((Self { sizes, faces, degens }, index))
    }

    pub fn degree(&self) -> usize {
        self.sizes.len() - 1
    }

    pub fn size(&self, m: usize) -> usize {
        self.sizes[m]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn face(&self, m: usize, i: usize, x: usize) -> usize {
        self.faces[m][i][x]
    }

    pub fn degen(&self, m: usize, i: usize, x: usize) -> usize {
        self.degens[m][i][x]
    }

    pub fn check_identities(&self) -> Result<(), SimplicialError> {
        audit(self.degree(), &|m| self.size(m), &|m, i, x| self.face(m, i, x), &|m, i, x| self.degen(m, i, x))
            .map_err(SimplicialError::Identity)
    }

    pub fn truncate(&self, deg: usize) -> Self {
        let deg = deg.min(self.degree());
        let mut degens = self.degens[..deg].to_vec();
        degens.push(Vec::new());
        Self { sizes: self.sizes[..=deg].to_vec(), faces: self.faces[..=deg].to_vec(), degens }
    }

    /// The face of `x` spanned by the sorted vertex set `keep`.
    pub fn restrict_to(&self, m: usize, x: usize, keep: &[usize]) -> usize {
        let mut y = x;
        let mut level = m;
        for v in (0..=m).rev() {
            if !keep.contains(&v) {
                y = self.face(level, v, y);
                level -= 1;
            }
        }
        y
    }

    /// Level-wise product, with `(a, b)` at index `a * other.size(m) + b`.
    pub fn product(&self, other: &Self) -> Self {
        let deg = self.degree().min(other.degree());
        let sizes: Vec<usize> = (0..=deg).map(|m| self.size(m) * other.size(m)).collect();
        let pair = |m: usize, a: usize, b: usize| a * other.size(m) + b;
        let mut faces = vec![Vec::new()];
        let mut degens = Vec::new();
        for m in 0..=deg {
            if m > 0 {
                faces.push(
                    (0..=m)
                        .map(|i| {
                            (0..sizes[m])
                                .map(|x| {
                                    let (a, b) = (x / other.size(m), x % other.size(m));
                                    pair(m - 1, self.face(m, i, a), other.face(m, i, b))
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
            if m < deg {
                degens.push(
                    (0..=m)
                        .map(|i| {
                            (0..sizes[m])
                                .map(|x| {
                                    let (a, b) = (x / other.size(m), x % other.size(m));
                                    pair(m + 1, self.degen(m, i, a), other.degen(m, i, b))
                                })
                                .collect()
                        })
                        .collect(),
                );
            }
        }
        degens.push(Vec::new());
        Self { sizes, faces, degens }
    }
}

/// `maps[m]` commutes with every face and degeneracy.
pub fn is_simplicial_map(src: &TruncatedSimplicialSet, tgt: &TruncatedSimplicialSet, maps: &[Vec<usize>]) -> bool {
    let deg = src.degree().min(tgt.degree()).min(maps.len().saturating_sub(1));
    for m in 0..=deg {
        if maps[m].len() != src.size(m) || maps[m].iter().any(|&y| y >= tgt.size(m)) {
            return false;
        }
        for x in 0..src.size(m) {
            for i in 0..=m {
                if m > 0 && maps[m - 1][src.face(m, i, x)] != tgt.face(m, i, maps[m][x]) {
                    return false;
                }
                if m < deg && maps[m + 1][src.degen(m, i, x)] != tgt.degen(m, i, maps[m][x]) {
                    return false;
                }
            }
        }
    }
    true
}

fn is_bijection(map: &[usize], target_size: usize) -> bool {
    let mut seen = vec![false; target_size];
    if map.len() != target_size {
        return false;
    }
    for &y in map {
        if y >= target_size || seen[y] {
            return false;
        }
        seen[y] = true;
    }
    true
}

pub fn is_isomorphism(src: &TruncatedSimplicialSet, tgt: &TruncatedSimplicialSet, maps: &[Vec<usize>]) -> bool {
    src.degree() == tgt.degree()
        && maps.len() == src.degree() + 1
        && (0..=src.degree()).all(|m| is_bijection(&maps[m], tgt.size(m)))
        && is_simplicial_map(src, tgt, maps)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegalLevel {
    pub n: usize,
    pub simplices: usize,
    pub fibre_product: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SegalReport {
    pub reduced: bool,
    pub levels: Vec<SegalLevel>,
}

impl SegalReport {
    pub fn is_segal(&self) -> bool {
        self.levels.iter().all(|l| l.injective && l.surjective)
    }
}

/// The spine map `X_n -> X_1 ×_{X_0} ... ×_{X_0} X_1` for `2 <= n <= up_to`.
pub fn segal_check(x: &TruncatedSimplicialSet, up_to: usize) -> SegalReport {
    let up_to = up_to.min(x.degree());
    let mut levels = Vec::new();
    if x.degree() >= 1 {
        let src: Vec<usize> = (0..x.size(1)).map(|e| x.face(1, 1, e)).collect();
        let tgt: Vec<usize> = (0..x.size(1)).map(|e| x.face(1, 0, e)).collect();
        for n in 2..=up_to {
            // paths of n edges ending at each vertex
            let mut ending = vec![0usize; x.size(0)];
            for e in 0..x.size(1) {
                ending[tgt[e]] += 1;
            }
            for _ in 1..n {
                let mut next = vec![0usize; x.size(0)];
                for e in 0..x.size(1) {
                    next[tgt[e]] += ending[src[e]];
                }
                ending = next;
            }
            let fibre_product: usize = ending.iter().sum();
            let mut spines = std::collections::HashSet::new();
            for s in 0..x.size(n) {
                let spine: Vec<usize> = (0..n).map(|k| x.restrict_to(n, s, &[k, k + 1])).collect();
                spines.insert(spine);
            }
            levels.push(SegalLevel {
                n,
                simplices: x.size(n),
                fibre_product,
                injective: spines.len() == x.size(n),
                surjective: spines.len() == fibre_product,
            });
        }
    }
    SegalReport { reduced: x.size(0) == 1, levels }
}

/// `X_m` is in bijection with compatible families of `k`-simplices on the
/// `(k+1)`-subsets of `[m]`, for `k < m <= D`.
pub fn coskeletal_check(x: &TruncatedSimplicialSet, k: usize) -> bool {
    for m in k + 1..=x.degree() {
        let subsets: Vec<Vec<usize>> = (0..=m).combinations(k + 1).collect();
        let mut images = std::collections::HashSet::new();
        for s in 0..x.size(m) {
            images.insert(subsets.iter().map(|sub| x.restrict_to(m, s, sub)).collect::<Vec<_>>());
        }
        if images.len() != x.size(m) {
            return false;
        }
        // pairs of subsets sharing k vertices, with the face index dropped from each
        let mut overlaps: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); subsets.len()];
        for b in 0..subsets.len() {
            for a in 0..b {
                let common: Vec<usize> = subsets[a].iter().filter(|v| subsets[b].contains(v)).copied().collect();
                if k > 0 && common.len() == k {
                    let ia = subsets[a].iter().position(|v| !common.contains(v)).unwrap();
                    let ib = subsets[b].iter().position(|v| !common.contains(v)).unwrap();
                    overlaps[b].push((a, ia, ib));
                }
            }
        }
        let mut count = 0usize;
        let mut assign = vec![0usize; subsets.len()];
        if !count_families(x, k, &overlaps, 0, &mut assign, &mut count, x.size(m)) || count != x.size(m) {
            return false;
        }
    }
    true
}

/// Counts compatible families; returns `false` once the count exceeds `cap`.
fn count_families(
    x: &TruncatedSimplicialSet,
    k: usize,
    overlaps: &[Vec<(usize, usize, usize)>],
    pos: usize,
    assign: &mut Vec<usize>,
    count: &mut usize,
    cap: usize,
) -> bool {
    if pos == assign.len() {
        *count += 1;
        return *count <= cap;
    }
    for y in 0..x.size(k) {
        let ok = overlaps[pos].iter().all(|&(a, ia, ib)| x.face(k, ia, assign[a]) == x.face(k, ib, y));
        if ok {
            assign[pos] = y;
            if !count_families(x, k, overlaps, pos + 1, assign, count, cap) {
                return false;
            }
        }
    }
    true
}

/// `Δ^n` as nondecreasing vertex sequences; `spine_only` keeps the simplices
/// whose vertices lie in some `{k, k+1}`.
pub fn standard_simplex(n: usize, deg: usize, spine_only: bool) -> TruncatedSimplicialSet {
    let levels: Vec<Vec<Vec<usize>>> = (0..=deg)
        .map(|m| {
            (0..=n)
                .combinations_with_replacement(m + 1)
                .filter(|s| !spine_only || s[m] - s[0] <= 1)
                .collect()
        })
        .collect();
    TruncatedSimplicialSet::from_keys(
        levels,
        |_, i, s| {
            let mut v = s.clone();
            v.remove(i);
            v
        },
        |_, i, s| {
            let mut v = s.clone();
            v.insert(i, s[i]);
            v
        },
    )
    .expect("closed")
    .0
}

/// The 0-coskeletal simplicial set on `k` vertices: all `(m+1)`-tuples.
pub fn codiscrete(k: usize, deg: usize) -> TruncatedSimplicialSet {
    let levels: Vec<Vec<Vec<usize>>> =
        (0..=deg).map(|m| (0..m + 1).map(|_| 0..k).multi_cartesian_product().collect()).collect();
    let levels = levels.into_iter().map(|l| if l.is_empty() && k > 0 { vec![Vec::new()] } else { l }).collect();
    tuple_set(levels)
}

fn tuple_set(levels: Vec<Vec<Vec<usize>>>) -> TruncatedSimplicialSet {
    TruncatedSimplicialSet::from_keys(
        levels,
        |_, i, s| {
            let mut v = s.clone();
            v.remove(i);
            v
        },
        |_, i, s| {
            let mut v = s.clone();
            v.insert(i, s[i]);
            v
        },
    )
    .expect("closed")
    .0
}

/// Tuples drawn from a finite set of lattices, with faces and degeneracies
/// computed on lattice tuples.
pub fn gr_tuples(lattices: &[Lattice], deg: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    let mut distinct: Vec<Lattice> = Vec::new();
    for l in lattices {
        if !distinct.contains(l) {
            distinct.push(l.clone());
        }
    }
    let levels: Vec<Vec<Vec<Lattice>>> = (0..=deg)
        .map(|m| (0..m + 1).map(|_| distinct.iter().cloned()).multi_cartesian_product().collect())
        .collect();
    let as_tuple = |v: &Vec<Lattice>| LatticeTuple::new(v.clone()).expect("same rank");
    Ok(TruncatedSimplicialSet::from_keys(
        levels,
        |_, i, s| as_tuple(s).face(i).expect("in range").lattices().to_vec(),
        |_, i, s| as_tuple(s).degeneracy(i).expect("in range").lattices().to_vec(),
    )?
    .0)
}

/// A finite category given by its full composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    name: String,
    objects: usize,
    src: Vec<usize>,
    tgt: Vec<usize>,
    identity: Vec<usize>,
    /// `comp[g][f] = g ∘ f` when `tgt f = src g`.
    comp: Vec<Vec<Option<usize>>>,
}

impl FiniteCategory {
    pub fn new(
        name: impl Into<String>,
        objects: usize,
        src: Vec<usize>,
        tgt: Vec<usize>,
        identity: Vec<usize>,
        comp: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, SimplicialError> {
        let c = Self { name: name.into(), objects, src, tgt, identity, comp };
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<(), SimplicialError> {
        let bad = |s: String| Err(SimplicialError::InvalidCategory(s));
        let n = self.src.len();
        if self.tgt.len() != n || self.comp.len() != n || self.identity.len() != self.objects {
            return bad("table sizes disagree".into());
        }
        for (o, &id) in self.identity.iter().enumerate() {
            if self.src[id] != o || self.tgt[id] != o {
                return bad(format!("identity of {o} has wrong endpoints"));
            }
        }
        for g in 0..n {
            for f in 0..n {
                match (self.tgt[f] == self.src[g], self.comp[g][f]) {
                    (true, Some(h)) => {
                        if self.src[h] != self.src[f] || self.tgt[h] != self.tgt[g] {
                            return bad(format!("{g} ∘ {f} has wrong endpoints"));
                        }
                    }
                    (false, None) => {}
                    _ => return bad(format!("composability of ({g}, {f}) inconsistent")),
                }
            }
            if self.comp[g][self.identity[self.src[g]]] != Some(g) || self.comp[self.identity[self.tgt[g]]][g] != Some(g) {
                return bad(format!("identity law fails at {g}"));
            }
        }
        for f in 0..n {
            for g in 0..n {
                let Some(gf) = self.comp[g][f] else { continue };
                for h in 0..n {
                    let Some(hg) = self.comp[h][g] else { continue };
                    if self.comp[h][gf] != self.comp[hg][f] {
                        return bad(format!("associativity fails at ({h}, {g}, {f})"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn objects(&self) -> usize {
        self.objects
    }

    pub fn morphisms(&self) -> usize {
        self.src.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.src[f]
    }

    pub fn tgt(&self, f: usize) -> usize {
        self.tgt[f]
    }

    pub fn identity(&self, o: usize) -> usize {
        self.identity[o]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.src[f]] == f
    }

    /// `g ∘ f`; panics if not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.comp[g][f].expect("composable morphisms")
    }

    pub fn hom(&self, a: usize, b: usize) -> Vec<usize> {
        (0..self.morphisms()).filter(|&f| self.src[f] == a && self.tgt[f] == b).collect()
    }

    /// The morphism `a -> b` if it is the only one.
    pub fn unique_hom(&self, a: usize, b: usize) -> Option<usize> {
        let h = self.hom(a, b);
        (h.len() == 1).then(|| h[0])
    }

    pub fn inverse(&self, f: usize) -> Option<usize> {
        self.hom(self.tgt[f], self.src[f])
            .into_iter()
            .find(|&g| self.compose(g, f) == self.identity[self.src[f]] && self.compose(f, g) == self.identity[self.tgt[f]])
    }

    pub fn is_groupoid(&self) -> bool {
        (0..self.morphisms()).all(|f| self.inverse(f).is_some())
    }

    /// Category with morphism list `mors` of `(src, tgt, payload)` and a
    /// composition on payloads.
    fn from_payloads<P: Clone + Eq + Hash>(
        name: String,
        objects: usize,
        mors: Vec<(usize, usize, P)>,
        identity_payload: impl Fn(usize) -> P,
        compose: impl Fn(&P, &P) -> P,
    ) -> Self {
        let index: HashMap<(usize, usize, P), usize> = mors.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = mors.len();
        let src: Vec<usize> = mors.iter().map(|m| m.0).collect();
        let tgt: Vec<usize> = mors.iter().map(|m| m.1).collect();
        let identity = (0..objects).map(|o| index[&(o, o, identity_payload(o))]).collect();
        let comp = (0..n)
            .map(|g| {
                (0..n)
                    .map(|f| (tgt[f] == src[g]).then(|| index[&(src[f], tgt[g], compose(&mors[g].2, &mors[f].2))]))
                    .collect()
            })
            .collect();
        Self::new(name, objects, src, tgt, identity, comp).expect("valid by construction")
    }

    /// The ordinal `[n]`: a morphism `i -> j` for each `i <= j`.
    pub fn ordinal(n: usize) -> Self {
        let mors = (0..=n).flat_map(|i| (i..=n).map(move |j| (i, j, ()))).collect();
        Self::from_payloads(format!("[{n}]"), n + 1, mors, |_| (), |_, _| ())
    }

    /// The cyclic group of order `k` on one object.
    pub fn cyclic(k: usize) -> Self {
        assert!(k >= 1);
        let mors = (0..k).map(|a| (0, 0, a)).collect();
        Self::from_payloads(format!("C{k}"), 1, mors, |_| 0, |g, f| (g + f) % k)
    }

    /// The symmetric group on `k` letters, one object.
    pub fn symmetric(k: usize) -> Self {
        let mors = (0..k).permutations(k).map(|p| (0, 0, p)).collect();
        Self::from_payloads(format!("S{k}"), 1, mors, |_| (0..k).collect(), |g: &Vec<usize>, f: &Vec<usize>| {
            f.iter().map(|&i| g[i]).collect()
        })
    }

    /// Two objects and a unique isomorphism between them.
    pub fn walking_iso() -> Self {
        let mors = (0..2).flat_map(|a| (0..2).map(move |b| (a, b, ()))).collect();
        Self::from_payloads("walking-iso".into(), 2, mors, |_| (), |_, _| ())
    }

    pub fn discrete(n: usize) -> Self {
        let mors = (0..n).map(|o| (o, o, ())).collect();
        Self::from_payloads(format!("discrete{n}"), n, mors, |_| (), |_, _| ())
    }

    /// The groupoid freely generated by `[n]`: reduced words in the
    /// generators `e_i: i -> i+1` (letter `i+1`) and their inverses (letter
    /// `-(i+1)`).
    pub fn free_groupoid(n: usize) -> Self {
        fn reduce(w: &[i32]) -> Vec<i32> {
            let mut out: Vec<i32> = Vec::new();
            for &l in w {
                if out.last() == Some(&-l) {
                    out.pop();
                } else {
                    out.push(l);
                }
            }
            out
        }
        let mut mors = Vec::new();
        for a in 0..=n {
            let mut stack = vec![(a, Vec::<i32>::new())];
            while let Some((v, w)) = stack.pop() {
                mors.push((a, v, w.clone()));
                let last = w.last().copied();
                if v < n && last != Some(-(v as i32 + 1)) {
                    stack.push((v + 1, [w.clone(), vec![v as i32 + 1]].concat()));
                }
                if v > 0 && last != Some(v as i32) {
                    stack.push((v - 1, [w.clone(), vec![-(v as i32)]].concat()));
                }
            }
        }
        Self::from_payloads(format!("free-groupoid[{n}]"), n + 1, mors, |_| Vec::new(), |g, f| {
            reduce(&[f.clone(), g.clone()].concat())
        })
    }

    /// Product category; morphism `(f, g)` has id `f * other.morphisms() + g`.
    pub fn product(&self, other: &Self) -> Self {
        let no = other.objects;
        let nm = other.morphisms();
        let n = self.morphisms() * nm;
        let src = (0..n).map(|x| self.src[x / nm] * no + other.src[x % nm]).collect();
        let tgt = (0..n).map(|x| self.tgt[x / nm] * no + other.tgt[x % nm]).collect();
        let identity = (0..self.objects * no).map(|o| self.identity[o / no] * nm + other.identity[o % no]).collect();
        let comp = (0..n)
            .map(|g| {
                (0..n)
                    .map(|f| {
                        let a = self.comp[g / nm][f / nm]?;
                        let b = other.comp[g % nm][f % nm]?;
                        Some(a * nm + b)
                    })
                    .collect()
            })
            .collect();
        Self::new(format!("{}x{}", self.name, other.name), self.objects * no, src, tgt, identity, comp)
            .expect("product of categories")
    }

    /// The core: the subcategory of isomorphisms, and the ids of its
    /// morphisms in `self`.
    pub fn core(&self) -> (Self, Vec<usize>) {
        let keep: Vec<usize> = (0..self.morphisms()).filter(|&f| self.inverse(f).is_some()).collect();
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let src = keep.iter().map(|&f| self.src[f]).collect();
        let tgt = keep.iter().map(|&f| self.tgt[f]).collect();
        let identity = self.identity.iter().map(|f| pos[f]).collect();
        let comp = keep
            .iter()
            .map(|&g| keep.iter().map(|&f| self.comp[g][f].map(|h| pos[&h])).collect())
            .collect();
        let c = Self::new(format!("core({})", self.name), self.objects, src, tgt, identity, comp).expect("core");
        (c, keep)
    }

    /// `ordinal:N`, `cyclic:K`, `sym:K`, `walking-iso`, `discrete:N`,
    /// `free:N`, or two presets joined by `x`.
    pub fn preset(s: &str) -> Result<Self, SimplicialError> {
        if let Some((a, b)) = s.split_once('x') {
            if !a.is_empty() && !b.is_empty() && a != "walking-iso" {
                return Ok(Self::preset(a)?.product(&Self::preset(b)?));
            }
        }
        let unknown = || SimplicialError::UnknownPreset(s.to_string());
        let (kind, arg) = match s.split_once(':') {
            Some((k, a)) => (k, Some(a.parse::<usize>().map_err(|_| unknown())?)),
            None => (s, None),
        };
        match (kind, arg) {
            ("ordinal", Some(n)) => Ok(Self::ordinal(n)),
            ("cyclic", Some(k)) if k >= 1 => Ok(Self::cyclic(k)),
            ("sym", Some(k)) if (1..=4).contains(&k) => Ok(Self::symmetric(k)),
            ("walking-iso", None) => Ok(Self::walking_iso()),
            ("discrete", Some(n)) => Ok(Self::discrete(n)),
            ("free", Some(n)) => Ok(Self::free_groupoid(n)),
            _ => Err(unknown()),
        }
    }
}

/// A functor given on objects and morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Functor {
    pub obj: Vec<usize>,
    pub mor: Vec<usize>,
}

impl Functor {
    pub fn is_valid(&self, src: &FiniteCategory, tgt: &FiniteCategory) -> bool {
        self.obj.len() == src.objects()
            && self.mor.len() == src.morphisms()
            && (0..src.morphisms()).all(|f| {
                tgt.src(self.mor[f]) == self.obj[src.src(f)] && tgt.tgt(self.mor[f]) == self.obj[src.tgt(f)]
            })
            && (0..src.objects()).all(|o| self.mor[src.identity(o)] == tgt.identity(self.obj[o]))
            && (0..src.morphisms()).all(|g| {
                (0..src.morphisms())
                    .all(|f| src.comp[g][f].is_none_or(|h| self.mor[h] == tgt.compose(self.mor[g], self.mor[f])))
            })
    }
}

/// All functors `src -> tgt`. Non-identity morphisms are assigned in order of
/// increasing `weight`; a morphism that is a composite of assigned ones is
/// forced.
pub fn enumerate_functors(
    src: &FiniteCategory,
    tgt: &FiniteCategory,
    weight: &dyn Fn(usize) -> usize,
    budget: usize,
) -> Result<Vec<Functor>, SimplicialError> {
    let n = src.morphisms();
    let mut order: Vec<usize> = (0..n).filter(|&f| !src.is_identity(f)).collect();
    order.sort_by_key(|&f| (weight(f), f));
    let mut involved: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for g in 0..n {
        for f in 0..n {
            if let Some(h) = src.comp[g][f] {
                if src.is_identity(g) || src.is_identity(f) {
                    continue;
                }
                for x in [g, f, h] {
                    involved[x].push((g, f, h));
                }
            }
        }
    }
    let mut st = EnumState { src, tgt, order, involved, obj: vec![None; src.objects()], mor: vec![None; n], out: Vec::new(), budget };
    st.go(0)?;
    Ok(st.out)
}

struct EnumState<'a> {
    src: &'a FiniteCategory,
    tgt: &'a FiniteCategory,
    order: Vec<usize>,
    involved: Vec<Vec<(usize, usize, usize)>>,
    obj: Vec<Option<usize>>,
    mor: Vec<Option<usize>>,
    out: Vec<Functor>,
    budget: usize,
}

impl EnumState<'_> {
    fn value(&self, f: usize) -> Option<usize> {
        if self.src.is_identity(f) {
            self.obj[self.src.src(f)].map(|o| self.tgt.identity(o))
        } else {
            self.mor[f]
        }
    }

    fn go(&mut self, k: usize) -> Result<(), SimplicialError> {
        if k == self.order.len() {
            return self.finish(0);
        }
        let f = self.order[k];
        let (s, t) = (self.src.src(f), self.src.tgt(f));
        let forced = self.involved[f].iter().find_map(|&(g, h, gh)| {
            (gh == f).then(|| Some(self.tgt.compose(self.value(g)?, self.value(h)?))).flatten()
        });
        let cands: Vec<usize> = match forced {
            Some(c) => vec![c],
            None => (0..self.tgt.morphisms()).collect(),
        };
        for c in cands {
            if self.obj[s].is_some_and(|o| o != self.tgt.src(c)) || self.obj[t].is_some_and(|o| o != self.tgt.tgt(c)) {
                continue;
            }
            if s == t && self.tgt.src(c) != self.tgt.tgt(c) {
                continue;
            }
            let (set_s, set_t) = (self.obj[s].is_none(), self.obj[t].is_none());
            self.obj[s] = Some(self.tgt.src(c));
            self.obj[t] = Some(self.tgt.tgt(c));
            self.mor[f] = Some(c);
            let ok = self.involved[f].iter().all(|&(g, h, gh)| match (self.value(g), self.value(h), self.value(gh)) {
                (Some(a), Some(b), Some(ab)) => self.tgt.compose(a, b) == ab,
                _ => true,
            });
            if ok {
                self.go(k + 1)?;
            }
            self.mor[f] = None;
            if set_s {
                self.obj[s] = None;
            }
            if set_t {
                self.obj[t] = None;
            }
        }
        Ok(())
    }

    fn finish(&mut self, o: usize) -> Result<(), SimplicialError> {
        if o == self.obj.len() {
            if self.out.len() >= self.budget {
                return Err(SimplicialError::TooLarge { level: "functors".into(), budget: self.budget });
            }
            let obj: Vec<usize> = self.obj.iter().map(|x| x.unwrap()).collect();
            let mor = (0..self.src.morphisms()).map(|f| self.value(f).unwrap()).collect();
            self.out.push(Functor { obj, mor });
            return Ok(());
        }
        if self.obj[o].is_some() {
            return self.finish(o + 1);
        }
        for c in 0..self.tgt.objects() {
            self.obj[o] = Some(c);
            self.finish(o + 1)?;
        }
        self.obj[o] = None;
        Ok(())
    }
}

/// An `m`-simplex of a nerve: the start object and `m` composable morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Chain {
    pub start: usize,
    pub mors: Vec<usize>,
}

impl Chain {
    pub fn vertex(&self, c: &FiniteCategory, i: usize) -> usize {
        if i == 0 {
            self.start
        } else {
            c.tgt(self.mors[i - 1])
        }
    }

    /// The composite from vertex `i` to vertex `j >= i`.
    pub fn composite(&self, c: &FiniteCategory, i: usize, j: usize) -> usize {
        let mut acc = c.identity(self.vertex(c, i));
        for k in i..j {
            acc = c.compose(self.mors[k], acc);
        }
        acc
    }

    fn face(&self, c: &FiniteCategory, i: usize) -> Self {
        let m = self.mors.len();
        if i == 0 {
            Self { start: c.tgt(self.mors[0]), mors: self.mors[1..].to_vec() }
        } else if i == m {
            Self { start: self.start, mors: self.mors[..m - 1].to_vec() }
        } else {
            let mut mors = self.mors[..i - 1].to_vec();
            mors.push(c.compose(self.mors[i], self.mors[i - 1]));
            mors.extend_from_slice(&self.mors[i + 1..]);
            Self { start: self.start, mors }
        }
    }

    fn degen(&self, c: &FiniteCategory, i: usize) -> Self {
        let mut mors = self.mors.clone();
        mors.insert(i, c.identity(self.vertex(c, i)));
        Self { start: self.start, mors }
    }
}

pub fn nerve_chains(c: &FiniteCategory, deg: usize, budget: usize) -> Result<Vec<Vec<Chain>>, SimplicialError> {
    let mut levels: Vec<Vec<Chain>> = vec![(0..c.objects()).map(|o| Chain { start: o, mors: Vec::new() }).collect()];
    for m in 1..=deg {
        let mut next = Vec::new();
        for ch in &levels[m - 1] {
            let end = ch.vertex(c, m - 1);
            for f in 0..c.morphisms() {
                if c.src(f) == end {
                    let mut mors = ch.mors.clone();
                    mors.push(f);
                    next.push(Chain { start: ch.start, mors });
                }
            }
            if next.len() > budget {
                return Err(SimplicialError::TooLarge { level: m.to_string(), budget });
            }
        }
        levels.push(next);
    }
    Ok(levels)
}

/// `NC` truncated at `deg`, with the chain index.
pub fn nerve_indexed(c: &FiniteCategory, deg: usize, budget: usize) -> Result<(TruncatedSimplicialSet, KeyIndex<Chain>), SimplicialError> {
    let levels = nerve_chains(c, deg, budget)?;
    TruncatedSimplicialSet::from_keys(levels, |_, i, ch| ch.face(c, i), |_, i, ch| ch.degen(c, i))
}

pub fn nerve(c: &FiniteCategory, deg: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    Ok(nerve_indexed(c, deg, DEFAULT_BUDGET)?.0)
}

/// The nerve of the groupoid freely generated by `[n]`.
pub fn delta_prime(n: usize, deg: usize) -> Result<TruncatedSimplicialSet, SimplicialError> {
    nerve(&FiniteCategory::free_groupoid(n), deg)
}

/// The level-wise bijection `N(C × C') -> NC × NC'`.
pub fn nerve_product_check(c: &FiniteCategory, d: &FiniteCategory, deg: usize) -> Result<bool, SimplicialError> {
    let cd = c.product(d);
    let (ncd, _) = nerve_indexed(&cd, deg, DEFAULT_BUDGET)?;
    let chains_cd = nerve_chains(&cd, deg, DEFAULT_BUDGET)?;
    let (nc, ic) = nerve_indexed(c, deg, DEFAULT_BUDGET)?;
    let (nd, id) = nerve_indexed(d, deg, DEFAULT_BUDGET)?;
    let prod = nc.product(&nd);
    let nm = d.morphisms();
    let maps: Vec<Vec<usize>> = chains_cd
        .iter()
        .enumerate()
        .map(|(m, level)| {
            level
                .iter()
                .map(|ch| {
                    let a = Chain { start: ch.start / d.objects(), mors: ch.mors.iter().map(|f| f / nm).collect() };
                    let b = Chain { start: ch.start % d.objects(), mors: ch.mors.iter().map(|f| f % nm).collect() };
                    ic[m][&a] * nd.size(m) + id[m][&b]
                })
                .collect()
        })
        .collect();
    Ok(is_isomorphism(&ncd, &prod, &maps))
}

/// Bisimplicial set truncated at total degree `m + n <= D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBisimplicialSet {
    degree: usize,
    sizes: BTreeMap<(usize, usize), usize>,
    hfaces: BTreeMap<(usize, usize), Table>,
    vfaces: BTreeMap<(usize, usize), Table>,
    hdegens: BTreeMap<(usize, usize), Table>,
    vdegens: BTreeMap<(usize, usize), Table>,
}

pub type BiKeyIndex<K> = BTreeMap<(usize, usize), HashMap<K, usize>>;

pub fn bidegrees(deg: usize) -> Vec<(usize, usize)> {
    (0..=deg).flat_map(|m| (0..=deg - m).map(move |n| (m, n))).collect()
}

impl TruncatedBisimplicialSet {
    #[allow(clippy::type_complexity)]
    pub fn from_keys<K: Clone + Eq + Hash>(
        deg: usize,
        levels: BTreeMap<(usize, usize), Vec<K>>,
        hface: impl Fn((usize, usize), usize, &K) -> K,
        vface: impl Fn((usize, usize), usize, &K) -> K,
        hdegen: impl Fn((usize, usize), usize, &K) -> K,
        vdegen: impl Fn((usize, usize), usize, &K) -> K,
    ) -> Result<(Self, BiKeyIndex<K>), SimplicialError> {
        let index: BiKeyIndex<K> = levels
            .iter()
            .map(|(&mn, l)| (mn, l.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()))
            .collect();
        let look = |mn: (usize, usize), k: &K, op: String| {
            index[&mn].get(k).copied().ok_or(SimplicialError::NotClosed { level: format!("{mn:?}"), op })
        };
        let table = |mn: (usize, usize), count: usize, to: (usize, usize), op: &dyn Fn((usize, usize), usize, &K) -> K, name: &str| {
            (0..count)
                .map(|i| levels[&mn].iter().map(|k| look(to, &op(mn, i, k), format!("{name}{i}"))).collect())
                .collect::<Result<Table, SimplicialError>>()
        };
        let mut s = Self {
            degree: deg,
            sizes: levels.iter().map(|(&mn, l)| (mn, l.len())).collect(),
            hfaces: BTreeMap::new(),
            vfaces: BTreeMap::new(),
            hdegens: BTreeMap::new(),
            vdegens: BTreeMap::new(),
        };
        for (m, n) in bidegrees(deg) {
            if m > 0 {
                s.hfaces.insert((m, n), table((m, n), m + 1, (m - 1, n), &hface, "dh")?);
            }
            if n > 0 {
                s.vfaces.insert((m, n), table((m, n), n + 1, (m, n - 1), &vface, "dv")?);
            }
            if m + n < deg {
                s.hdegens.insert((m, n), table((m, n), m + 1, (m + 1, n), &hdegen, "sh")?);
                s.vdegens.insert((m, n), table((m, n), n + 1, (m, n + 1), &vdegen, "sv")?);
            }
        }
        Ok((s, index))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self, m: usize, n: usize) -> usize {
        self.sizes[&(m, n)]
    }

    pub fn sizes(&self) -> &BTreeMap<(usize, usize), usize> {
        &self.sizes
    }

    pub fn hface(&self, mn: (usize, usize), i: usize, x: usize) -> usize {
        self.hfaces[&mn][i][x]
    }

    pub fn vface(&self, mn: (usize, usize), i: usize, x: usize) -> usize {
        self.vfaces[&mn][i][x]
    }

    pub fn hdegen(&self, mn: (usize, usize), i: usize, x: usize) -> usize {
        self.hdegens[&mn][i][x]
    }

    pub fn vdegen(&self, mn: (usize, usize), i: usize, x: usize) -> usize {
        self.vdegens[&mn][i][x]
    }

    /// Row `n`: `m ↦ Y_{m,n}` with the horizontal operators.
    pub fn row(&self, n: usize) -> TruncatedSimplicialSet {
        let deg = self.degree - n;
        let sizes = (0..=deg).map(|m| self.size(m, n)).collect();
        let faces = (0..=deg).map(|m| if m == 0 { Vec::new() } else { self.hfaces[&(m, n)].clone() }).collect();
        let degens = (0..=deg).map(|m| if m == deg { Vec::new() } else { self.hdegens[&(m, n)].clone() }).collect();
        TruncatedSimplicialSet { sizes, faces, degens }
    }

    /// Column `m`: `n ↦ Y_{m,n}` with the vertical operators.
    pub fn column(&self, m: usize) -> TruncatedSimplicialSet {
        let deg = self.degree - m;
        let sizes = (0..=deg).map(|n| self.size(m, n)).collect();
        let faces = (0..=deg).map(|n| if n == 0 { Vec::new() } else { self.vfaces[&(m, n)].clone() }).collect();
        let degens = (0..=deg).map(|n| if n == deg { Vec::new() } else { self.vdegens[&(m, n)].clone() }).collect();
        TruncatedSimplicialSet { sizes, faces, degens }
    }

    /// Simplicial identities in each row and column, and commutation of
    /// horizontal with vertical operators.
    pub fn check_identities(&self) -> Result<(), SimplicialError> {
        for k in 0..=self.degree {
            self.row(k).check_identities()?;
            self.column(k).check_identities()?;
        }
        let fail = |s: String| Err(SimplicialError::Identity(s));
        for (m, n) in bidegrees(self.degree) {
            for x in 0..self.size(m, n) {
                for i in 0..=m {
                    for j in 0..=n {
                        if m > 0 && n > 0 {
                            let a = self.hface((m, n - 1), i, self.vface((m, n), j, x));
                            let b = self.vface((m - 1, n), j, self.hface((m, n), i, x));
                            if a != b {
                                return fail(format!("dh{i} dv{j} at ({m},{n})"));
                            }
                        }
                        if m + n < self.degree {
                            if m > 0 {
                                let a = self.hface((m, n + 1), i, self.vdegen((m, n), j, x));
                                let b = self.vdegen((m - 1, n), j, self.hface((m, n), i, x));
                                if a != b {
                                    return fail(format!("dh{i} sv{j} at ({m},{n})"));
                                }
                            }
                            if n > 0 {
                                let a = self.vface((m + 1, n), j, self.hdegen((m, n), i, x));
                                let b = self.hdegen((m, n - 1), i, self.vface((m, n), j, x));
                                if a != b {
                                    return fail(format!("dv{j} sh{i} at ({m},{n})"));
                                }
                            }
                        }
                        if m + n + 2 <= self.degree {
                            let a = self.hdegen((m, n + 1), i, self.vdegen((m, n), j, x));
                            let b = self.vdegen((m + 1, n), j, self.hdegen((m, n), i, x));
                            if a != b {
                                return fail(format!("sh{i} sv{j} at ({m},{n})"));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `maps[(m, n)]` is a bijection commuting with all operators.
    pub fn is_isomorphism_to(&self, other: &Self, maps: &BTreeMap<(usize, usize), Vec<usize>>) -> bool {
        if self.degree != other.degree {
            return false;
        }
        for (m, n) in bidegrees(self.degree) {
            let f = &maps[&(m, n)];
            if !is_bijection(f, other.size(m, n)) || f.len() != self.size(m, n) {
                return false;
            }
            for x in 0..self.size(m, n) {
                let y = f[x];
                for i in 0..=m {
                    if m > 0 && maps[&(m - 1, n)][self.hface((m, n), i, x)] != other.hface((m, n), i, y) {
                        return false;
                    }
                    if m + n < self.degree && maps[&(m + 1, n)][self.hdegen((m, n), i, x)] != other.hdegen((m, n), i, y) {
                        return false;
                    }
                }
                for j in 0..=n {
                    if n > 0 && maps[&(m, n - 1)][self.vface((m, n), j, x)] != other.vface((m, n), j, y) {
                        return false;
                    }
                    if m + n < self.degree && maps[&(m, n + 1)][self.vdegen((m, n), j, x)] != other.vdegen((m, n), j, y) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// `ι_1^* Y` (row 0) for `j = 1`, `ι_2^* Y` (column 0) for `j = 2`.
pub fn iota_star(j: usize, y: &TruncatedBisimplicialSet) -> TruncatedSimplicialSet {
    match j {
        1 => y.row(0),
        2 => y.column(0),
        _ => panic!("iota_star index must be 1 or 2"),
    }
}

/// `p_1^* X`: `(m, n) ↦ X_m`, constant vertically; `p_2^* X`: `(m, n) ↦ X_n`.
pub fn p_star(j: usize, x: &TruncatedSimplicialSet) -> TruncatedBisimplicialSet {
    assert!(j == 1 || j == 2, "p_star index must be 1 or 2");
    let deg = x.degree();
    let levels: BTreeMap<(usize, usize), Vec<usize>> =
        bidegrees(deg).into_iter().map(|(m, n)| ((m, n), (0..x.size(if j == 1 { m } else { n })).collect())).collect();
    let moving = move |mn: (usize, usize), horizontal: bool| (j == 1) == horizontal && (if horizontal { mn.0 } else { mn.1 }) > 0;
    TruncatedBisimplicialSet::from_keys(
        deg,
        levels,
        |mn, i, &s| if moving(mn, true) { x.face(if j == 1 { mn.0 } else { mn.1 }, i, s) } else { s },
        |mn, i, &s| if moving(mn, false) { x.face(if j == 1 { mn.0 } else { mn.1 }, i, s) } else { s },
        |mn, i, &s| if j == 1 { x.degen(mn.0, i, s) } else { s },
        |mn, i, &s| if j == 2 { x.degen(mn.1, i, s) } else { s },
    )
    .expect("closed")
    .0
}

/// `[m] × J[n]` with `J[n]` the free groupoid on `[n]`.
struct Cell {
    cat: FiniteCategory,
    n: usize,
}

impl Cell {
    fn new(m: usize, n: usize) -> Self {
        Self { cat: FiniteCategory::ordinal(m).product(&FiniteCategory::free_groupoid(n)), n }
    }

    fn vertex(&self, v: usize) -> (usize, usize) {
        (v / (self.n + 1), v % (self.n + 1))
    }

    fn mor_between(&self, (i, a): (usize, usize), (j, b): (usize, usize)) -> usize {
        self.cat.unique_hom(i * (self.n + 1) + a, j * (self.n + 1) + b).expect("unique morphism")
    }

    fn weight(&self, f: usize) -> usize {
        let (i, a) = self.vertex(self.cat.src(f));
        let (j, b) = self.vertex(self.cat.tgt(f));
        (j - i) + a.abs_diff(b)
    }
}

fn cells(deg: usize) -> BTreeMap<(usize, usize), Cell> {
    bidegrees(deg).into_iter().map(|(m, n)| ((m, n), Cell::new(m, n))).collect()
}

/// Precompose a functor on `cell_tgt` with `theta x psi` from `cell_src`.
fn precompose(key: &[usize], src: &Cell, tgt: &Cell, theta: &[usize], psi: &[usize]) -> Vec<usize> {
    (0..src.cat.morphisms())
        .map(|f| {
            let (i, a) = src.vertex(src.cat.src(f));
            let (j, b) = src.vertex(src.cat.tgt(f));
            key[tgt.mor_between((theta[i], psi[a]), (theta[j], psi[b]))]
        })
        .collect()
}

fn coface(k: usize, i: usize) -> Vec<usize> {
    crate::poset::coface(k, i)
}

fn codegen(k: usize, i: usize) -> Vec<usize> {
    crate::poset::codegeneracy(k, i)
}

fn ident(k: usize) -> Vec<usize> {
    (0..=k).collect()
}

/// `t^! NC`: level `(m, n)` is the set of functors `[m] × J[n] -> C`,
/// encoded by their values on every morphism.
pub fn t_pling(
    c: &FiniteCategory,
    deg: usize,
    budget: usize,
) -> Result<(TruncatedBisimplicialSet, BiKeyIndex<Vec<usize>>), SimplicialError> {
    let cells = cells(deg);
    let mut levels = BTreeMap::new();
    for (&mn, cell) in &cells {
        let fs = enumerate_functors(&cell.cat, c, &|f| cell.weight(f), budget)
            .map_err(|_| SimplicialError::TooLarge { level: format!("{mn:?}"), budget })?;
        levels.insert(mn, fs.into_iter().map(|f| f.mor).collect::<Vec<_>>());
    }
    TruncatedBisimplicialSet::from_keys(
        deg,
        levels,
        |(m, n), i, k| precompose(k, &cells[&(m - 1, n)], &cells[&(m, n)], &coface(m, i), &ident(n)),
        |(m, n), j, k| precompose(k, &cells[&(m, n - 1)], &cells[&(m, n)], &ident(m), &coface(n, j)),
        |(m, n), i, k| precompose(k, &cells[&(m + 1, n)], &cells[&(m, n)], &codegen(m, i), &ident(n)),
        |(m, n), j, k| precompose(k, &cells[&(m, n + 1)], &cells[&(m, n)], &ident(m), &codegen(n, j)),
    )
}

/// An `(m, n)`-simplex of `N_n Fun([m], C)^×`: a functor `F_0: [m] -> C` as
/// a chain, and `n` natural isomorphisms given by their components.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RezkSimplex {
    pub f0: Chain,
    pub etas: Vec<Vec<usize>>,
}

impl RezkSimplex {
    /// The chains `F_0, ..., F_n`.
    fn functors(&self, c: &FiniteCategory) -> Vec<Chain> {
        let mut out = vec![self.f0.clone()];
        for eta in &self.etas {
            let prev = out.last().unwrap();
            let mors = prev
                .mors
                .iter()
                .enumerate()
                .map(|(i, &f)| c.compose(eta[i + 1], c.compose(f, c.inverse(eta[i]).unwrap())))
                .collect();
            out.push(Chain { start: c.tgt(eta[0]), mors });
        }
        out
    }

    /// The component at `i` of the isomorphism `F_a -> F_b`.
    fn transport(&self, c: &FiniteCategory, fs: &[Chain], i: usize, a: usize, b: usize) -> usize {
        let (lo, hi) = (a.min(b), a.max(b));
        let mut acc = c.identity(fs[lo].vertex(c, i));
        for k in lo..hi {
            acc = c.compose(self.etas[k][i], acc);
        }
        if a <= b {
            acc
        } else {
            c.inverse(acc).unwrap()
        }
    }

    fn restrict(&self, c: &FiniteCategory, theta: &[usize]) -> Self {
        let start = self.f0.vertex(c, theta[0]);
        let mors = theta.windows(2).map(|w| self.f0_composite(c, w[0], w[1])).collect();
        Self { f0: Chain { start, mors }, etas: self.etas.iter().map(|e| theta.iter().map(|&t| e[t]).collect()).collect() }
    }

    fn f0_composite(&self, c: &FiniteCategory, i: usize, j: usize) -> usize {
        self.f0.composite(c, i, j)
    }

    fn vface(&self, c: &FiniteCategory, j: usize) -> Self {
        let n = self.etas.len();
        if j == 0 {
            let f1 = self.functors(c).swap_remove(1);
            Self { f0: f1, etas: self.etas[1..].to_vec() }
        } else if j == n {
            Self { f0: self.f0.clone(), etas: self.etas[..n - 1].to_vec() }
        } else {
            let mut etas = self.etas[..j - 1].to_vec();
            etas.push(self.etas[j - 1].iter().zip(&self.etas[j]).map(|(&a, &b)| c.compose(b, a)).collect());
            etas.extend_from_slice(&self.etas[j + 1..]);
            Self { f0: self.f0.clone(), etas }
        }
    }

    fn vdegen(&self, c: &FiniteCategory, j: usize) -> Self {
        let fj = &self.functors(c)[j];
        let id = (0..=fj.mors.len()).map(|i| c.identity(fj.vertex(c, i))).collect();
        let mut etas = self.etas.clone();
        etas.insert(j, id);
        Self { f0: self.f0.clone(), etas }
    }
}

/// `(B^css C)_{m,n} = N_n Fun([m], C)^×`.
pub fn rezk_nerve(
    c: &FiniteCategory,
    deg: usize,
    budget: usize,
) -> Result<(TruncatedBisimplicialSet, BiKeyIndex<RezkSimplex>), SimplicialError> {
    let chains = nerve_chains(c, deg, budget)?;
    let isos_from: Vec<Vec<usize>> =
        (0..c.objects()).map(|o| (0..c.morphisms()).filter(|&f| c.src(f) == o && c.inverse(f).is_some()).collect()).collect();
    let mut levels = BTreeMap::new();
    for (m, n) in bidegrees(deg) {
        let mut level: Vec<RezkSimplex> = chains[m].iter().map(|f0| RezkSimplex { f0: f0.clone(), etas: Vec::new() }).collect();
        for _ in 0..n {
            let mut next = Vec::new();
            for s in &level {
                let last = s.functors(c).pop().unwrap();
                let choices = (0..=m).map(|i| isos_from[last.vertex(c, i)].iter().copied()).multi_cartesian_product();
                for eta in choices {
                    let mut etas = s.etas.clone();
                    etas.push(eta);
                    next.push(RezkSimplex { f0: s.f0.clone(), etas });
                }
                if next.len() > budget {
                    return Err(SimplicialError::TooLarge { level: format!("({m},{n})"), budget });
                }
            }
            level = next;
        }
        levels.insert((m, n), level);
    }
    TruncatedBisimplicialSet::from_keys(
        deg,
        levels,
        |(m, _), i, s| s.restrict(c, &coface(m, i)),
        |_, j, s| s.vface(c, j),
        |(m, _), i, s| s.restrict(c, &codegen(m, i)),
        |_, j, s| s.vdegen(c, j),
    )
}

/// The functor `[m] × J[n] -> C` attached to a Rezk simplex:
/// `(i, a) -> (j, b)` goes to `F_b(i -> j) ∘ (F_a -> F_b)_i`.
fn rezk_to_hom(c: &FiniteCategory, s: &RezkSimplex, cell: &Cell) -> Vec<usize> {
    let fs = s.functors(c);
    (0..cell.cat.morphisms())
        .map(|f| {
            let (i, a) = cell.vertex(cell.cat.src(f));
            let (j, b) = cell.vertex(cell.cat.tgt(f));
            c.compose(fs[b].composite(c, i, j), s.transport(c, &fs, i, a, b))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaPreReport {
    pub category: String,
    pub degree: usize,
    /// Identities hold in both bisimplicial sets.
    pub identities: bool,
    /// `N_n Fun([m], C)^× ≅ t^! NC` level-wise, compatibly with all operators.
    pub rezk_iso: bool,
    /// `NC ≅ ι_1^* t^! NC`.
    pub row_iso: bool,
    /// `NC^× ≅ ι_2^* t^! NC`.
    pub column_iso: bool,
    pub sizes: Vec<((usize, usize), usize)>,
}

impl LemmaPreReport {
    pub fn holds(&self) -> bool {
        self.identities && self.rezk_iso && self.row_iso && self.column_iso
    }
}

/// The chain `NC_m -> (t^! NC)_{m,0}` and the core chain
/// `N_n C^× -> (t^! NC)_{0,n}`, as functor keys.
fn row_key(c: &FiniteCategory, ch: &Chain, cell: &Cell) -> Vec<usize> {
    (0..cell.cat.morphisms())
        .map(|f| {
            let (i, _) = cell.vertex(cell.cat.src(f));
            let (j, _) = cell.vertex(cell.cat.tgt(f));
            ch.composite(c, i, j)
        })
        .collect()
}

fn column_key(c: &FiniteCategory, ch: &Chain, cell: &Cell) -> Vec<usize> {
    (0..cell.cat.morphisms())
        .map(|f| {
            let (_, a) = cell.vertex(cell.cat.src(f));
            let (_, b) = cell.vertex(cell.cat.tgt(f));
            if a <= b {
                ch.composite(c, a, b)
            } else {
                c.inverse(ch.composite(c, b, a)).unwrap()
            }
        })
        .collect()
}

pub fn lemma_pre_check(c: &FiniteCategory, deg: usize, budget: usize) -> Result<LemmaPreReport, SimplicialError> {
    let (hom, hom_idx) = t_pling(c, deg, budget)?;
    let (rezk, rezk_idx) = rezk_nerve(c, deg, budget)?;
    let identities = hom.check_identities().is_ok() && rezk.check_identities().is_ok();
    let cells = cells(deg);

    let mut maps = BTreeMap::new();
    let mut complete = true;
    for (&mn, idx) in &rezk_idx {
        let mut f = vec![usize::MAX; idx.len()];
        for (s, &x) in idx {
            match hom_idx[&mn].get(&rezk_to_hom(c, s, &cells[&mn])) {
                Some(&y) => f[x] = y,
                None => complete = false,
            }
        }
        maps.insert(mn, f);
    }
    let rezk_iso = complete && rezk.is_isomorphism_to(&hom, &maps);

    let (nc, nc_idx) = nerve_indexed(c, deg, budget)?;
    let row_maps: Option<Vec<Vec<usize>>> = (0..=deg)
        .map(|m| {
            let mut f = vec![0; nc.size(m)];
            for (ch, &x) in &nc_idx[m] {
                f[x] = *hom_idx[&(m, 0)].get(&row_key(c, ch, &cells[&(m, 0)]))?;
            }
            Some(f)
        })
        .collect();
    let row_iso = row_maps.is_some_and(|f| is_isomorphism(&nc, &iota_star(1, &hom), &f));

    let (core, keep) = c.core();
    let (ncore, core_idx) = nerve_indexed(&core, deg, budget)?;
    let column_maps: Option<Vec<Vec<usize>>> = (0..=deg)
        .map(|n| {
            let mut f = vec![0; ncore.size(n)];
            for (ch, &x) in &core_idx[n] {
                let lifted = Chain { start: ch.start, mors: ch.mors.iter().map(|&g| keep[g]).collect() };
                f[x] = *hom_idx[&(0, n)].get(&column_key(c, &lifted, &cells[&(0, n)]))?;
            }
            Some(f)
        })
        .collect();
    let column_iso = column_maps.is_some_and(|f| is_isomorphism(&ncore, &iota_star(2, &hom), &f));

    Ok(LemmaPreReport {
        category: c.name().to_string(),
        degree: deg,
        identities,
        rezk_iso,
        row_iso,
        column_iso,
        sizes: hom.sizes().iter().map(|(&k, &v)| (k, v)).collect(),
    })
}

/// For a functor `phi: C -> D`, the squares relating `N phi` and
/// `t^! N phi` through the row and column comparisons commute.
pub fn lemma_pre_naturality(c: &FiniteCategory, d: &FiniteCategory, phi: &Functor, deg: usize) -> Result<bool, SimplicialError> {
    if !phi.is_valid(c, d) {
        return Err(SimplicialError::InvalidCategory("functor is not valid".into()));
    }
    let cells = cells(deg);
    let chains = nerve_chains(c, deg, DEFAULT_BUDGET)?;
    let map_chain = |ch: &Chain| Chain { start: phi.obj[ch.start], mors: ch.mors.iter().map(|&f| phi.mor[f]).collect() };
    for (m, level) in chains.iter().enumerate() {
        for ch in level {
            let lhs = row_key(d, &map_chain(ch), &cells[&(m, 0)]);
            let rhs: Vec<usize> = row_key(c, ch, &cells[&(m, 0)]).iter().map(|&f| phi.mor[f]).collect();
            if lhs != rhs {
                return Ok(false);
            }
            if ch.mors.iter().all(|&f| c.inverse(f).is_some()) && m <= deg {
                let lhs = column_key(d, &map_chain(ch), &cells[&(0, m)]);
                let rhs: Vec<usize> = column_key(c, ch, &cells[&(0, m)]).iter().map(|&f| phi.mor[f]).collect();
                if lhs != rhs {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// A finite groupoid acting on simplicial sets: `values[a]` for each object
/// and `action[g][m]` the level-`m` map of `g`.
#[derive(Debug, Clone)]
pub struct GroupoidAction {
    pub groupoid: FiniteCategory,
    pub values: Vec<TruncatedSimplicialSet>,
    pub action: Vec<Vec<Vec<usize>>>,
}

impl GroupoidAction {
    /// The same simplicial set at every object, every morphism acting trivially.
    pub fn constant(groupoid: FiniteCategory, x: TruncatedSimplicialSet) -> Self {
        let id: Vec<Vec<usize>> = (0..=x.degree()).map(|m| (0..x.size(m)).collect()).collect();
        let action = vec![id; groupoid.morphisms()];
        let values = vec![x; groupoid.objects()];
        Self { groupoid, values, action }
    }

    pub fn validate(&self) -> Result<(), SimplicialError> {
        let g = &self.groupoid;
        if !g.is_groupoid() {
            return Err(SimplicialError::InvalidAction("not a groupoid".into()));
        }
        for f in 0..g.morphisms() {
            if !is_simplicial_map(&self.values[g.src(f)], &self.values[g.tgt(f)], &self.action[f]) {
                return Err(SimplicialError::InvalidAction(format!("morphism {f} does not act simplicially")));
            }
            if g.is_identity(f) && self.action[f].iter().any(|l| l.iter().enumerate().any(|(i, &y)| i != y)) {
                return Err(SimplicialError::InvalidAction(format!("identity {f} acts nontrivially")));
            }
        }
        for f in 0..g.morphisms() {
            for h in 0..g.morphisms() {
                if let Some(hf) = g.comp[h][f] {
                    for (m, level) in self.action[f].iter().enumerate() {
                        if level.iter().any(|&x| self.action[h][m][x] != self.action[hf][m][level[x]]) {
                            return Err(SimplicialError::InvalidAction(format!("action not functorial at ({h}, {f})")));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A simplex of the Grothendieck construction: a chain in the groupoid and
/// a simplex over its first object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrothendieckSimplex {
    pub chain: Chain,
    pub simplex: usize,
}

/// Level `m` consists of a chain `a_0 -> ... -> a_m` and `x ∈ F(a_0)_m`;
/// `d_0` transports `d_0 x` along the first arrow. Returns the total
/// simplicial set and the level-wise projection to the nerve.
pub fn grothendieck(act: &GroupoidAction) -> Result<(TruncatedSimplicialSet, Vec<Vec<usize>>), SimplicialError> {
    act.validate()?;
    let g = &act.groupoid;
    let deg = act.values.iter().map(|v| v.degree()).min().unwrap_or(0);
    let (ng, ng_idx) = nerve_indexed(g, deg, DEFAULT_BUDGET)?;
    let chains = nerve_chains(g, deg, DEFAULT_BUDGET)?;
    let levels: Vec<Vec<GrothendieckSimplex>> = chains
        .iter()
        .enumerate()
        .map(|(m, l)| {
            l.iter()
                .flat_map(|ch| {
                    (0..act.values[ch.start].size(m)).map(move |x| GrothendieckSimplex { chain: ch.clone(), simplex: x })
                })
                .collect()
        })
        .collect();
    let (total, idx) = TruncatedSimplicialSet::from_keys(
        levels.clone(),
        |m, i, s| {
            let x = &act.values[s.chain.start];
            let simplex = if i == 0 {
                act.action[s.chain.mors[0]][m - 1][x.face(m, 0, s.simplex)]
            } else {
                x.face(m, i, s.simplex)
            };
            GrothendieckSimplex { chain: s.chain.face(g, i), simplex }
        },
        |m, i, s| GrothendieckSimplex {
            chain: s.chain.degen(g, i),
            simplex: act.values[s.chain.start].degen(m, i, s.simplex),
        },
    )?;
    let projection = levels
        .iter()
        .enumerate()
        .map(|(m, l)| {
            let mut p = vec![0; l.len()];
            for s in l {
                p[idx[m][s]] = ng_idx[m][&s.chain];
            }
            p
        })
        .collect::<Vec<_>>();
    if !is_simplicial_map(&total, &ng, &projection) {
        return Err(SimplicialError::InvalidAction("projection is not simplicial".into()));
    }
    Ok((total, projection))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nerve_counts() {
        let n = nerve(&FiniteCategory::cyclic(2), 4).unwrap();
        assert_eq!(n.sizes(), &[1, 2, 4, 8, 16]);
        n.check_identities().unwrap();
        let d1 = nerve(&FiniteCategory::ordinal(1), 3).unwrap();
        assert_eq!(d1.sizes(), standard_simplex(1, 3, false).sizes());
    }

    #[test]
    fn delta_prime_is_codiscrete() {
        let d = delta_prime(1, 3).unwrap();
        assert_eq!(d.sizes(), &[2, 4, 8, 16]);
        assert!(coskeletal_check(&d, 0));
        assert!(!coskeletal_check(&standard_simplex(1, 3, false), 0));
    }

    #[test]
    fn segal() {
        let r = segal_check(&nerve(&FiniteCategory::cyclic(3), 4).unwrap(), 4);
        assert!(r.reduced && r.is_segal());
        let sp = segal_check(&standard_simplex(2, 3, true), 3);
        assert!(!sp.is_segal());
    }

    #[test]
    fn lemma_pre_small() {
        for c in [FiniteCategory::ordinal(1), FiniteCategory::cyclic(2), FiniteCategory::walking_iso()] {
            let r = lemma_pre_check(&c, 3, DEFAULT_BUDGET).unwrap();
            assert!(r.holds(), "{r:?}");
        }
    }

    #[test]
    fn grothendieck_constant() {
        let g = FiniteCategory::walking_iso();
        let x = codiscrete(2, 2);
        let (total, _) = grothendieck(&GroupoidAction::constant(g.clone(), x.clone())).unwrap();
        let ng = nerve(&g, 2).unwrap();
        for m in 0..=2 {
            assert_eq!(total.size(m), ng.size(m) * x.size(m));
        }
        total.check_identities().unwrap();
    }
}
