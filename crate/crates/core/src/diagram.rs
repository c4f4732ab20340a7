//! Admissible diagrams on finite posets, their splitting classes along an
//! admissible tree, the pre-index at the level of `K_0`, rigidity under
//! basepoint-bijective embeddings, and the section/contraction structure for
//! chains of basepoints.
//!
//! Two flavours share one type. Torsion-valued diagrams carry presented
//! modules and a matrix on every cover relation. Lattice-valued diagrams carry
//! lattices, and every arrow is the inclusion.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lattice::{Lattice, LatticeError};
use crate::linalg::{LinalgError, MatrixF};
use crate::poset::{collapse_tree, is_admissible_tree, tree_path, BasedMorphism, BasedPoset, Edge, Poset, PosetError};
use crate::torsion::{ModuleMap, TorsionError, TorsionModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("arrow {edge:?} is not admissible: {reason}")]
    NotAdmissible { edge: Edge, reason: String },
    #[error("diagram does not commute between {0} and {1}")]
    NotCommutative(usize, usize),
    #[error("tree is not admissible")]
    TreeNotAdmissible,
    #[error("image of the tree in the collapsed poset is not an admissible tree")]
    TreeNotCollapsible,
    #[error("condition ({0}) violated: {1}")]
    ConditionViolated(Condition, String),
    #[error("operation needs a {0} diagram")]
    FlavorMismatch(&'static str),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poset(#[from] PosetError),
}

impl From<LinalgError> for DiagramError {
    fn from(e: LinalgError) -> Self {
        DiagramError::Torsion(e.into())
    }
}

impl DiagramError {
    pub fn is_precision(&self) -> bool {
        match self {
            DiagramError::Torsion(e) => e.is_precision(),
            DiagramError::Lattice(e) => e.is_precision(),
            _ => false,
        }
    }
}

/// The four hypotheses on a contraction of basepoints.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    A,
    B,
    C,
    D,
}

impl std::fmt::Display for Condition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            Condition::A => 'a',
            Condition::B => 'b',
            Condition::C => 'c',
            Condition::D => 'd',
        };
        write!(f, "{c}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Torsion,
    Lattice,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagramObject {
    Module(TorsionModule),
    Lattice(Lattice),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibleDiagram {
    poset: Poset,
    objects: Vec<DiagramObject>,
    arrows: BTreeMap<Edge, MatrixF>,
}

/// `K_0` classes of a diagram split along a tree: the base object (absent for
/// lattice-valued diagrams) and one cokernel length per tree edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitClass {
    pub base: Option<u64>,
    pub edges: Vec<(Edge, u64)>,
}

pub type IndexVector = Vec<i64>;

impl AdmissibleDiagram {
    /// Torsion-valued diagram; `arrows` must hold a matrix for every cover.
    pub fn torsion(poset: Poset, modules: Vec<TorsionModule>, arrows: BTreeMap<Edge, MatrixF>) -> Result<Self, DiagramError> {
        let d = Self::torsion_unchecked(poset, modules, arrows)?;
        d.validate()?;
        Ok(d)
    }

    /// Builds without checking monicity or commutativity.
    pub fn torsion_unchecked(poset: Poset, modules: Vec<TorsionModule>, arrows: BTreeMap<Edge, MatrixF>) -> Result<Self, DiagramError> {
        if modules.len() != poset.len() {
            return Err(DiagramError::Shape("one module per element required".into()));
        }
        if modules.iter().any(|m| m.presentation().is_none()) {
            return Err(TorsionError::MissingPresentation.into());
        }
        for e in poset.covers() {
            if !arrows.contains_key(&e) {
                return Err(DiagramError::Shape(format!("missing arrow on cover {e:?}")));
            }
        }
        Ok(Self { poset, objects: modules.into_iter().map(DiagramObject::Module).collect(), arrows })
    }

    pub fn lattice_valued(poset: Poset, lattices: Vec<Lattice>) -> Result<Self, DiagramError> {
        if lattices.len() != poset.len() {
            return Err(DiagramError::Shape("one lattice per element required".into()));
        }
        let d = Self { poset, objects: lattices.into_iter().map(DiagramObject::Lattice).collect(), arrows: BTreeMap::new() };
        d.validate()?;
        Ok(d)
    }

    /// `x ↦ L_x / N` for a monotone lattice family containing `N`, with the
    /// maps induced by the inclusions.
    pub fn from_lattice_family(poset: Poset, lattices: &[Lattice], base: &Lattice) -> Result<Self, DiagramError> {
        if lattices.len() != poset.len() {
            return Err(DiagramError::Shape("one lattice per element required".into()));
        }
        let bn = base.basis();
        let mut modules = Vec::with_capacity(lattices.len());
        let mut inverses = Vec::with_capacity(lattices.len());
        for l in lattices {
            let inv = l.basis_inverse()?;
            let pres = inv.matmul(&bn)?;
            if !pres.is_integral() {
                return Err(LatticeError::NotContained.into());
            }
            modules.push(TorsionModule::from_presentation(&pres)?);
            inverses.push(inv);
        }
        let mut arrows = BTreeMap::new();
        for (a, b) in poset.covers() {
            arrows.insert((a, b), inverses[b].matmul(&lattices[a].basis())?);
        }
        Self::torsion(poset, modules, arrows)
    }

    /// Every element sent to `m`, every arrow the identity.
    pub fn constant(poset: Poset, m: &TorsionModule) -> Result<Self, DiagramError> {
        let p = m.presentation().ok_or(TorsionError::MissingPresentation)?;
        let id = MatrixF::identity(p.ring(), p.rows());
        let arrows = poset.covers().into_iter().map(|e| (e, id.clone())).collect();
        let n = poset.len();
        Self::torsion(poset, vec![m.clone(); n], arrows)
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn flavor(&self) -> Flavor {
        match self.objects.first() {
            Some(DiagramObject::Lattice(_)) => Flavor::Lattice,
            _ => Flavor::Torsion,
        }
    }

    pub fn object(&self, x: usize) -> &DiagramObject {
        &self.objects[x]
    }

    pub fn module(&self, x: usize) -> Option<&TorsionModule> {
        match &self.objects[x] {
            DiagramObject::Module(m) => Some(m),
            DiagramObject::Lattice(_) => None,
        }
    }

    pub fn lattice(&self, x: usize) -> Option<&Lattice> {
        match &self.objects[x] {
            DiagramObject::Lattice(l) => Some(l),
            DiagramObject::Module(_) => None,
        }
    }

    pub fn arrows(&self) -> &BTreeMap<Edge, MatrixF> {
        &self.arrows
    }

    fn presentation(&self, x: usize) -> &MatrixF {
        self.module(x).and_then(|m| m.presentation()).expect("presented module")
    }

    /// Matrix of `F(x) -> F(y)` along a cover path.
    pub fn composite(&self, x: usize, y: usize) -> Result<MatrixF, DiagramError> {
        self.path_composite(&self.poset.cover_path(x, y).ok_or_else(|| DiagramError::Shape(format!("{x} is not below {y}")))?)
    }

    fn path_composite(&self, path: &[usize]) -> Result<MatrixF, DiagramError> {
        let p = self.presentation(path[0]);
        let mut acc = MatrixF::identity(p.ring(), p.rows());
        for w in path.windows(2) {
            acc = self.arrows[&(w[0], w[1])].matmul(&acc)?;
        }
        Ok(acc)
    }

    /// `F(y) / F(x)` for `x <= y`.
    pub fn coker(&self, x: usize, y: usize) -> Result<TorsionModule, DiagramError> {
        match (&self.objects[x], &self.objects[y]) {
            (DiagramObject::Lattice(a), DiagramObject::Lattice(b)) => Ok(a.quotient(b)?),
            (DiagramObject::Module(_), DiagramObject::Module(_)) => {
                let a = self.composite(x, y)?;
                Ok(TorsionModule::from_presentation(&self.presentation(y).hconcat(&a)?)?)
            }
            _ => Err(DiagramError::FlavorMismatch("uniform")),
        }
    }

    pub fn coker_length(&self, x: usize, y: usize) -> Result<u64, DiagramError> {
        Ok(self.coker(x, y)?.length())
    }

    /// Monic arrows with torsion cokernels, and commutativity along every
    /// pair of cover paths.
    pub fn validate(&self) -> Result<(), DiagramError> {
        match self.flavor() {
            Flavor::Lattice => {
                for (a, b) in self.poset.covers() {
                    let (la, lb) = (self.lattice(a).unwrap(), self.lattice(b).unwrap());
                    if !la.leq(lb)? {
                        return Err(DiagramError::NotAdmissible { edge: (a, b), reason: "lattices not nested".into() });
                    }
                }
                Ok(())
            }
            Flavor::Torsion => {
                for (&(a, b), m) in &self.arrows {
                    let f = ModuleMap::new(self.module(a).unwrap().clone(), self.module(b).unwrap().clone(), m.clone())
                        .map_err(|e| DiagramError::NotAdmissible { edge: (a, b), reason: e.to_string() })?;
                    let check = f.is_admissible_monic()?;
                    if !check.monic {
                        return Err(DiagramError::NotAdmissible {
                            edge: (a, b),
                            reason: format!("kernel of length {}", check.kernel_length),
                        });
                    }
                }
                for (x, y) in self.poset.strict_pairs() {
                    let paths = self.poset.all_cover_paths(x, y);
                    if paths.len() < 2 {
                        continue;
                    }
                    let first = self.path_composite(&paths[0])?;
                    let pinv = self.presentation(y).inverse()?;
                    for p in &paths[1..] {
                        let d = self.path_composite(p)?.sub(&first)?;
                        if !pinv.matmul(&d)?.is_integral() {
                            return Err(DiagramError::NotCommutative(x, y));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Pullback along a monotone map `f: J -> I`.
    pub fn restrict(&self, source: &Poset, f: &[usize]) -> Result<Self, DiagramError> {
        if !source.is_monotone_map(f, &self.poset) {
            return Err(PosetError::InvalidMorphism("restriction along a non-monotone map".into()).into());
        }
        let objects: Vec<DiagramObject> = f.iter().map(|&x| self.objects[x].clone()).collect();
        let mut arrows = BTreeMap::new();
        if self.flavor() == Flavor::Torsion {
            for (a, b) in source.covers() {
                arrows.insert((a, b), self.composite(f[a], f[b])?);
            }
        }
        Ok(Self { poset: source.clone(), objects, arrows })
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, DiagramError> {
        if self.flavor() != Flavor::Torsion || other.flavor() != Flavor::Torsion {
            return Err(DiagramError::FlavorMismatch("torsion"));
        }
        if self.poset != other.poset {
            return Err(DiagramError::Shape("direct sum over different posets".into()));
        }
        let modules: Vec<TorsionModule> = (0..self.poset.len())
            .map(|x| self.module(x).unwrap().direct_sum(other.module(x).unwrap()))
            .collect();
        let arrows = self.arrows.iter().map(|(e, m)| (*e, m.block_diag(&other.arrows[e]))).collect();
        Self::torsion(self.poset.clone(), modules, arrows)
    }

    pub fn phi_t(&self, based: &BasedPoset, tree: &[Edge]) -> Result<SplitClass, DiagramError> {
        if !is_admissible_tree(&self.poset, tree) {
            return Err(DiagramError::TreeNotAdmissible);
        }
        let base = self.module(based.basepoints()[0]).map(|m| m.length());
        let edges = tree.iter().map(|&e| Ok((e, self.coker_length(e.0, e.1)?))).collect::<Result<_, DiagramError>>()?;
        Ok(SplitClass { base, edges })
    }

    /// Component `i` is `[F(m)/F(x_{i-1})] - [F(m)/F(x_i)]`.
    pub fn pre_index(&self, based: &BasedPoset) -> Result<IndexVector, DiagramError> {
        self.check_based(based)?;
        let m = based.final_element();
        let c: Vec<i64> = based
            .basepoints()
            .iter()
            .map(|&x| Ok(self.coker_length(x, m)? as i64))
            .collect::<Result<_, DiagramError>>()?;
        Ok(c.windows(2).map(|w| w[0] - w[1]).collect())
    }

    /// Component `i` is `[F(x_i)] - [F(x_{i-1})]`; torsion-valued only.
    pub fn pre_index_differences(&self, based: &BasedPoset) -> Result<IndexVector, DiagramError> {
        self.check_based(based)?;
        let lens: Vec<i64> = based
            .basepoints()
            .iter()
            .map(|&x| self.module(x).map(|m| m.length() as i64).ok_or(DiagramError::FlavorMismatch("torsion")))
            .collect::<Result<_, _>>()?;
        Ok(lens.windows(2).map(|w| w[1] - w[0]).collect())
    }

    /// The index through the splitting along `tree`: with `P_i` the sum of the
    /// edge classes on the oriented tree path from `x_i` to the final element,
    /// component `i` is `P_{i-1} - P_i`.
    pub fn idx_via_splitting(&self, based: &BasedPoset, tree: &[Edge]) -> Result<IndexVector, DiagramError> {
        self.check_based(based)?;
        let split = self.phi_t(based, tree)?;
        if collapse_tree(based, tree).is_none() {
            return Err(DiagramError::TreeNotCollapsible);
        }
        let class: BTreeMap<Edge, u64> = split.edges.into_iter().collect();
        let m = based.final_element();
        let n = self.poset.len();
        let sums: Vec<i64> = based
            .basepoints()
            .iter()
            .map(|&x| {
                let path = tree_path(n, tree, x, m).ok_or(DiagramError::TreeNotAdmissible)?;
                Ok(path.iter().map(|e| class[e] as i64).sum())
            })
            .collect::<Result<_, DiagramError>>()?;
        Ok(sums.windows(2).map(|w| w[0] - w[1]).collect())
    }

    fn check_based(&self, based: &BasedPoset) -> Result<(), DiagramError> {
        if based.poset() != &self.poset {
            return Err(DiagramError::Shape("based poset differs from the diagram's poset".into()));
        }
        Ok(())
    }

    /// Compare objects and arrow cokernels with another diagram on the same
    /// poset.
    pub fn same_invariants(&self, other: &Self) -> Result<bool, DiagramError> {
        if self.poset != other.poset || self.flavor() != other.flavor() {
            return Ok(false);
        }
        for x in 0..self.poset.len() {
            let same = match (&self.objects[x], &other.objects[x]) {
                (DiagramObject::Module(a), DiagramObject::Module(b)) => a.exponents() == b.exponents(),
                (DiagramObject::Lattice(a), DiagramObject::Lattice(b)) => a == b,
                _ => false,
            };
            if !same {
                return Ok(false);
            }
        }
        for (a, b) in self.poset.strict_pairs() {
            if self.coker(a, b)?.exponents() != other.coker(a, b)?.exponents() {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Text format: a `poset:` line in poset syntax, an optional `base:` line,
/// then `module x: <matrix>` (presentation) or `lattice x: <matrix>` (basis)
/// per element and `arrow a b: <matrix>` per cover of a torsion diagram.
impl std::fmt::Display for AdmissibleDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "poset: {}", self.poset)?;
        for (x, o) in self.objects.iter().enumerate() {
            match o {
                DiagramObject::Module(m) => writeln!(f, "module {x}: {}", m.presentation().expect("presented"))?,
                DiagramObject::Lattice(l) => writeln!(f, "lattice {x}: {}", l.basis())?,
            }
        }
        for ((a, b), m) in &self.arrows {
            writeln!(f, "arrow {a} {b}: {m}")?;
        }
        Ok(())
    }
}

impl AdmissibleDiagram {
    /// Parse the text format; returns the based poset when a `base:` line is
    /// present.
    pub fn parse(ring: crate::dvr::RingConfig, s: &str) -> Result<(Self, Option<BasedPoset>), DiagramError> {
        let bad = |m: String| DiagramError::Poset(PosetError::Parse(m));
        let mut poset = None;
        let mut base = None;
        let mut modules = BTreeMap::new();
        let mut lattices = BTreeMap::new();
        let mut arrows = BTreeMap::new();
        for line in s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (head, body) = line.split_once(':').ok_or_else(|| bad(format!("missing ':' in '{line}'")))?;
            let words: Vec<&str> = head.split_whitespace().collect();
            let num = |w: &str| w.parse::<usize>().map_err(|_| bad(format!("bad index '{w}'")));
            match words.as_slice() {
                ["poset"] => poset = Some(Poset::parse(body)?),
                ["base"] => {
                    base = Some(body.split(',').map(|w| num(w.trim())).collect::<Result<Vec<_>, _>>()?);
                }
                ["module", x] => {
                    modules.insert(num(x)?, TorsionModule::from_presentation(&MatrixF::parse(ring, body)?)?);
                }
                ["lattice", x] => {
                    lattices.insert(num(x)?, Lattice::parse(ring, body)?);
                }
                ["arrow", a, b] => {
                    arrows.insert((num(a)?, num(b)?), MatrixF::parse(ring, body)?);
                }
                _ => return Err(bad(format!("unknown line '{line}'"))),
            }
        }
        let poset = poset.ok_or_else(|| bad("missing poset line".into()))?;
        let n = poset.len();
        let d = if !lattices.is_empty() {
            if lattices.keys().copied().ne(0..n) || !modules.is_empty() {
                return Err(DiagramError::Shape("need one lattice per element".into()));
            }
            Self::lattice_valued(poset, lattices.into_values().collect())?
        } else {
            if modules.keys().copied().ne(0..n) {
                return Err(DiagramError::Shape("need one module per element".into()));
            }
            Self::torsion(poset, modules.into_values().collect(), arrows)?
        };
        let based = base.map(|b| BasedPoset::new_relaxed(d.poset.clone(), b)).transpose()?;
        Ok((d, based))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RigidityReport {
    pub restriction_matches: bool,
    pub pre_index: IndexVector,
    pub pre_index_extended: IndexVector,
    pub via_star: IndexVector,
    pub via_star_extended: IndexVector,
}

impl RigidityReport {
    pub fn holds(&self) -> bool {
        self.restriction_matches
            && self.pre_index == self.pre_index_extended
            && self.via_star == self.pre_index
            && self.via_star_extended == self.pre_index_extended
    }
}

/// Compare `F` on `I` with an extension `F'` on `I'` along a basepoint
/// bijective embedding `iota: I -> I'`.
pub fn rigidity_check(
    f: &AdmissibleDiagram,
    source: &BasedPoset,
    iota: &BasedMorphism,
    f_ext: &AdmissibleDiagram,
    target: &BasedPoset,
) -> Result<RigidityReport, DiagramError> {
    if !iota.is_injective() || !iota.is_basepoint_bijective(target) {
        return Err(PosetError::InvalidMorphism("embedding must be injective and basepoint-bijective".into()).into());
    }
    let pulled = f_ext.restrict(source.poset(), iota.f())?;
    let restriction_matches = pulled.same_invariants(f)?;
    let star = crate::poset::star_tree(source.poset()).unwrap();
    let star_ext = crate::poset::star_tree(target.poset()).unwrap();
    Ok(RigidityReport {
        restriction_matches,
        pre_index: f.pre_index(source)?,
        pre_index_extended: f_ext.pre_index(target)?,
        via_star: f.idx_via_splitting(source, &star)?,
        via_star_extended: f_ext.idx_via_splitting(target, &star_ext)?,
    })
}

/// A contraction `phi: S -> S'` of a chain of basepoints `x_0 <= ... <= x_n`
/// to one point `x`.
#[derive(Debug, Clone)]
pub struct Contraction {
    pub source: BasedPoset,
    pub target: BasedPoset,
    pub phi: Vec<usize>,
}

impl Contraction {
    /// Checks hypotheses (a) to (d); (c) asks for an element strictly above
    /// `x_n`.
    pub fn check_conditions(&self) -> Result<(), DiagramError> {
        let s = self.source.poset();
        let t = self.target.poset();
        let xs = self.source.basepoints();
        let n = xs.len() - 1;
        // (a)
        for w in xs.windows(2) {
            if !s.le(w[0], w[1]) {
                return Err(DiagramError::ConditionViolated(Condition::A, format!("{} is not below {}", w[0], w[1])));
            }
        }
        // (b)
        for (i, &xi) in xs.iter().enumerate() {
            for z in 0..s.len() {
                if s.le(z, xi) && !xs[..=i].contains(&z) {
                    return Err(DiagramError::ConditionViolated(
                        Condition::B,
                        format!("{z} lies below x_{i} but is not among x_0..x_{i}"),
                    ));
                }
            }
        }
        // (c)
        let xn = xs[n];
        if !(0..s.len()).any(|y| s.lt(xn, y) && !xs.contains(&y)) {
            return Err(DiagramError::ConditionViolated(Condition::C, "nothing lies strictly above x_n".into()));
        }
        // (d)
        if self.phi.len() != s.len() || self.phi.iter().any(|&y| y >= t.len()) {
            return Err(DiagramError::ConditionViolated(Condition::D, "phi has the wrong shape".into()));
        }
        if !s.is_monotone_map(&self.phi, t) {
            return Err(DiagramError::ConditionViolated(Condition::D, "phi is not monotone".into()));
        }
        let x = self.phi[xs[0]];
        if xs.iter().any(|&b| self.phi[b] != x) {
            return Err(DiagramError::ConditionViolated(Condition::D, "basepoints not contracted to one point".into()));
        }
        let mut hit = vec![false; t.len()];
        for &y in &self.phi {
            hit[y] = true;
        }
        if hit.iter().any(|h| !h) {
            return Err(DiagramError::ConditionViolated(Condition::D, "phi is not surjective".into()));
        }
        let rest: Vec<usize> = (0..s.len()).filter(|z| !xs.contains(z)).collect();
        for &a in &rest {
            if self.phi[a] == x {
                return Err(DiagramError::ConditionViolated(Condition::D, format!("{a} is sent to the contracted point")));
            }
            for &b in &rest {
                if a != b && self.phi[a] == self.phi[b] {
                    return Err(DiagramError::ConditionViolated(Condition::D, "phi is not injective off the basepoints".into()));
                }
                if s.le(a, b) != t.le(self.phi[a], self.phi[b]) {
                    return Err(DiagramError::ConditionViolated(Condition::D, "phi does not reflect the order".into()));
                }
            }
        }
        if self.target.basepoints().iter().any(|&b| b != x) {
            return Err(DiagramError::ConditionViolated(Condition::D, "target basepoints must all be the contracted point".into()));
        }
        Ok(())
    }

    /// The monotone section: `x ↦ x_0`, every other element to its preimage.
    pub fn section(&self) -> Vec<usize> {
        let xs = self.source.basepoints();
        let x = self.phi[xs[0]];
        let mut s = vec![usize::MAX; self.target.poset().len()];
        for (z, &y) in self.phi.iter().enumerate() {
            if y != x {
                s[y] = z;
            }
        }
        s[x] = xs[0];
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionReport {
    /// `phi^* s^* X -> X` is an admissible monic at every element.
    pub counit_monic: bool,
    /// The counit commutes with every arrow of `X`.
    pub counit_natural: bool,
    /// `s^* phi^* Y` has the invariants of `Y`.
    pub unit_iso: bool,
    /// `phi^* Y` has zero pre-index.
    pub pullback_index_zero: bool,
}

impl ContractionReport {
    pub fn holds(&self) -> bool {
        self.counit_monic && self.counit_natural && self.unit_iso && self.pullback_index_zero
    }
}

/// Check the counit `phi^* s^* X -> X` on a diagram `X` over `S` and the
/// unit `s^* phi^* Y ≅ Y` on a diagram `Y` over `S'`.
pub fn section_contraction_check(
    c: &Contraction,
    x: &AdmissibleDiagram,
    y: &AdmissibleDiagram,
) -> Result<ContractionReport, DiagramError> {
    c.check_conditions()?;
    let s_poset = c.source.poset();
    let sec = c.section();
    let sphi: Vec<usize> = c.phi.iter().map(|&z| sec[z]).collect();

    let mut counit_monic = true;
    let mut eta = Vec::with_capacity(s_poset.len());
    for z in 0..s_poset.len() {
        let m = x.composite(sphi[z], z)?;
        let f = ModuleMap::new(x.module(sphi[z]).unwrap().clone(), x.module(z).unwrap().clone(), m.clone())?;
        counit_monic &= f.is_admissible_monic()?.monic;
        eta.push(m);
    }
    let pulled = x.restrict(s_poset, &sphi)?;
    let mut counit_natural = true;
    for (a, b) in s_poset.covers() {
        let lhs = eta[b].matmul(&pulled.arrows[&(a, b)])?;
        let rhs = x.arrows[&(a, b)].matmul(&eta[a])?;
        let pinv = x.presentation(b).inverse()?;
        counit_natural &= pinv.matmul(&lhs.sub(&rhs)?)?.is_integral();
    }

    let phi_y = y.restrict(s_poset, &c.phi)?;
    let back = phi_y.restrict(c.target.poset(), &sec)?;
    let unit_iso = back.same_invariants(y)?;
    let pullback_index_zero = phi_y.pre_index(&c.source)?.iter().all(|&v| v == 0);
    Ok(ContractionReport { counit_monic, counit_natural, unit_iso, pullback_index_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::RingConfig;
    use crate::poset::{b_poset, star_tree};

    fn r() -> RingConfig {
        RingConfig::series(2)
    }

    fn presented(e: &[u32]) -> TorsionModule {
        TorsionModule::from_exponents(e.to_vec()).with_diagonal_presentation(r())
    }

    /// B[1] with F({0}) = 0, F({1}) = tO/t^3, F({01}) = O/t^3.
    fn b1_example() -> AdmissibleDiagram {
        let b = b_poset(1);
        let mut arrows = BTreeMap::new();
        arrows.insert((0, 2), MatrixF::zeros(r(), 1, 1));
        arrows.insert((1, 2), MatrixF::diag_pi(r(), &[1]));
        AdmissibleDiagram::torsion(b.poset().clone(), vec![presented(&[]), presented(&[2]), presented(&[3])], arrows).unwrap()
    }

    #[test]
    fn pre_index_b1() {
        let b = b_poset(1);
        let f = b1_example();
        assert_eq!(f.pre_index(&b).unwrap(), vec![2]);
        assert_eq!(f.pre_index_differences(&b).unwrap(), vec![2]);
        let star = star_tree(b.poset()).unwrap();
        assert_eq!(f.idx_via_splitting(&b, &star).unwrap(), vec![2]);
    }

    #[test]
    fn phi_t_chain() {
        let p = Poset::chain(1);
        let based = BasedPoset::new(p.clone(), vec![0]).unwrap();
        let mut arrows = BTreeMap::new();
        arrows.insert((0, 1), MatrixF::diag_pi(r(), &[1]));
        let f = AdmissibleDiagram::torsion(p, vec![presented(&[2]), presented(&[3])], arrows).unwrap();
        let s = f.phi_t(&based, &[(0, 1)]).unwrap();
        assert_eq!(s.base, Some(2));
        assert_eq!(s.edges, vec![((0, 1), 1)]);
    }

    #[test]
    fn constant_and_non_injective() {
        let b = b_poset(1);
        let c = AdmissibleDiagram::constant(b.poset().clone(), &presented(&[1, 2])).unwrap();
        assert_eq!(c.pre_index(&b).unwrap(), vec![0]);
        assert!(c.poset().strict_pairs().iter().all(|&(x, y)| c.coker_length(x, y).unwrap() == 0));
        let mut arrows = BTreeMap::new();
        arrows.insert((0, 2), MatrixF::diag_pi(r(), &[1]));
        arrows.insert((1, 2), MatrixF::diag_pi(r(), &[0]));
        let bad = AdmissibleDiagram::torsion(b.poset().clone(), vec![presented(&[3]), presented(&[3]), presented(&[3])], arrows);
        assert!(matches!(bad, Err(DiagramError::NotAdmissible { edge: (0, 2), .. })));
    }
}
