//! Simplicial objects built from lattices: chains `L_0 ⊆ ... ⊆ L_m`, tuples
//! `(L_0, ..., L_m)`, the chains of torsion modules `0 ↪ X_1 ↪ ... ↪ X_m`,
//! and the bar construction on `GL_n(F)`.
//!
//! The map `ḡ ↦ (L, g_1 L, g_2 g_1 L, ...)` commutes with every face but
//! `d_0`. The defect is conjugation by `alpha(ḡ)`: its component `j` carries
//! entry `j` of the image of `d_0 ḡ` onto entry `j` of `d_0` of the image.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::diagram::{AdmissibleDiagram, DiagramError, IndexVector};
use crate::dvr::RingConfig;
use crate::lattice::{index_of_automorphism, Lattice, LatticeError};
use crate::linalg::{LinalgError, MatrixF};
use crate::poset::{a_elements, a_index, a_poset, b_intervals, b_poset, t_poset, BasedPoset, Poset};
use crate::torsion::{ModuleChain, TorsionError, TorsionModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SChainError {
    #[error("lattices {0} and {1} are not nested")]
    NotNested(usize, usize),
    #[error("first object of an S-chain must be zero")]
    NonzeroStart,
    #[error("face or degeneracy index {0} out of range")]
    OutOfRange(usize),
    #[error("empty tuple")]
    Empty,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Diagram(#[from] DiagramError),
}

impl From<LinalgError> for SChainError {
    fn from(e: LinalgError) -> Self {
        SChainError::Lattice(e.into())
    }
}

impl SChainError {
    pub fn is_precision(&self) -> bool {
        match self {
            SChainError::Lattice(e) => e.is_precision(),
            SChainError::Torsion(e) => e.is_precision(),
            SChainError::Diagram(e) => e.is_precision(),
            _ => false,
        }
    }
}

fn drop_at<T: Clone>(v: &[T], i: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.remove(i);
    out
}

fn repeat_at<T: Clone>(v: &[T], i: usize) -> Vec<T> {
    let mut out = v.to_vec();
    out.insert(i, v[i].clone());
    out
}

/// `L_0 ⊆ L_1 ⊆ ... ⊆ L_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeChain {
    lattices: Vec<Lattice>,
}

impl LatticeChain {
    pub fn new(lattices: Vec<Lattice>) -> Result<Self, SChainError> {
        if lattices.is_empty() {
            return Err(SChainError::Empty);
        }
        for (i, w) in lattices.windows(2).enumerate() {
            if !w[0].leq(&w[1])? {
                return Err(SChainError::NotNested(i, i + 1));
            }
        }
        Ok(Self { lattices })
    }

    pub fn lattices(&self) -> &[Lattice] {
        &self.lattices
    }

    /// The simplicial degree `m`.
    pub fn dim(&self) -> usize {
        self.lattices.len() - 1
    }

    pub fn face(&self, i: usize) -> Result<Self, SChainError> {
        if i > self.dim() || self.dim() == 0 {
            return Err(SChainError::OutOfRange(i));
        }
        Ok(Self { lattices: drop_at(&self.lattices, i) })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self, SChainError> {
        if i > self.dim() {
            return Err(SChainError::OutOfRange(i));
        }
        Ok(Self { lattices: repeat_at(&self.lattices, i) })
    }

    pub fn act(&self, g: &MatrixF) -> Result<Self, SChainError> {
        let lattices = self.lattices.iter().map(|l| l.act(g)).collect::<Result<_, _>>()?;
        Ok(Self { lattices })
    }

    /// `(rel_index(L_0, L_1), rel_index(L_1, L_2), ...)`.
    pub fn class_vector(&self) -> Result<IndexVector, SChainError> {
        self.lattices.windows(2).map(|w| Ok(w[0].rel_index(&w[1])?)).collect()
    }
}

/// `(L_0, ..., L_m)` with no order condition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticeTuple {
    lattices: Vec<Lattice>,
}

impl LatticeTuple {
    pub fn new(lattices: Vec<Lattice>) -> Result<Self, SChainError> {
        if lattices.is_empty() {
            return Err(SChainError::Empty);
        }
        let n = lattices[0].rank();
        if let Some(l) = lattices.iter().find(|l| l.rank() != n) {
            return Err(LatticeError::RankMismatch(n, l.rank()).into());
        }
        Ok(Self { lattices })
    }

    pub fn lattices(&self) -> &[Lattice] {
        &self.lattices
    }

    pub fn dim(&self) -> usize {
        self.lattices.len() - 1
    }

    pub fn face(&self, i: usize) -> Result<Self, SChainError> {
        if i > self.dim() || self.dim() == 0 {
            return Err(SChainError::OutOfRange(i));
        }
        Ok(Self { lattices: drop_at(&self.lattices, i) })
    }

    pub fn degeneracy(&self, i: usize) -> Result<Self, SChainError> {
        if i > self.dim() {
            return Err(SChainError::OutOfRange(i));
        }
        Ok(Self { lattices: repeat_at(&self.lattices, i) })
    }
}

/// `0 = X_0 ↪ X_1 ↪ ... ↪ X_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SChainObject {
    chain: ModuleChain,
}

impl SChainObject {
    pub fn new(chain: ModuleChain) -> Result<Self, SChainError> {
        if !chain.object(0).is_zero() {
            return Err(SChainError::NonzeroStart);
        }
        Ok(Self { chain })
    }

    pub fn chain(&self) -> &ModuleChain {
        &self.chain
    }

    pub fn dim(&self) -> usize {
        self.chain.len() - 1
    }

    /// `d_0` replaces every `X_j` by `X_j / X_1`; `d_i` for `i >= 1` drops `X_i`.
    pub fn sface(&self, i: usize) -> Result<Self, SChainError> {
        let m = self.dim();
        if i > m || m == 0 {
            return Err(SChainError::OutOfRange(i));
        }
        if i > 0 {
            return Ok(Self { chain: self.chain.drop_object(i)? });
        }
        let mut objects = Vec::with_capacity(m);
        for j in 1..=m {
            let pj = self.chain.object(j).presentation().ok_or(TorsionError::MissingPresentation)?;
            let a = self.chain.composite(1, j)?;
            objects.push(TorsionModule::from_presentation(&pj.hconcat(&a)?)?);
        }
        let maps = self.chain.maps()[1..].to_vec();
        Ok(Self { chain: ModuleChain::new(objects, maps)? })
    }

    /// Repeats `X_i` with the identity.
    pub fn sdegeneracy(&self, i: usize) -> Result<Self, SChainError> {
        let m = self.dim();
        if i > m {
            return Err(SChainError::OutOfRange(i));
        }
        let objects = repeat_at(self.chain.objects(), i);
        let k = self.chain.object(i).generators().ok_or(TorsionError::MissingPresentation)?;
        let ring = self.chain.object(i).presentation().unwrap().ring();
        let mut maps = self.chain.maps().to_vec();
        maps.insert(i, MatrixF::identity(ring, k));
        Ok(Self { chain: ModuleChain::new(objects, maps)? })
    }

    pub fn invariants(&self) -> Result<Vec<Vec<u32>>, SChainError> {
        Ok(self.chain.invariants()?)
    }

    /// `(length X_1/X_0, length X_2/X_1, ...)`.
    pub fn class_vector(&self) -> Result<IndexVector, SChainError> {
        (1..=self.dim()).map(|i| Ok(self.chain.subquotient(i - 1, i)?.length() as i64)).collect()
    }

    /// The diagram `[i, j] ↦ X_j` on `B[m]`.
    pub fn b_diagram(&self) -> Result<AdmissibleDiagram, SChainError> {
        let m = self.dim();
        let b = b_poset(m);
        let ivs = b_intervals(m);
        let modules = ivs.iter().map(|&(_, j)| self.chain.object(j).clone()).collect();
        let mut arrows = BTreeMap::new();
        for (a, c) in b.poset().covers() {
            arrows.insert((a, c), self.chain.composite(ivs[a].1, ivs[c].1)?);
        }
        Ok(AdmissibleDiagram::torsion(b.poset().clone(), modules, arrows)?)
    }
}

/// `X_i = L_i / L_0` with the induced inclusions.
pub fn index_of_chain(c: &LatticeChain) -> Result<SChainObject, SChainError> {
    let l0 = &c.lattices[0];
    let b0 = l0.basis();
    let mut objects = Vec::with_capacity(c.lattices.len());
    for l in &c.lattices {
        let p = l.basis_inverse()?.matmul(&b0)?;
        if !p.is_integral() {
            return Err(LatticeError::NotContained.into());
        }
        objects.push(TorsionModule::from_presentation(&p)?);
    }
    let maps = c
        .lattices
        .windows(2)
        .map(|w| Ok(w[1].basis_inverse()?.matmul(&w[0].basis())?))
        .collect::<Result<Vec<_>, SChainError>>()?;
    SChainObject::new(ModuleChain::new(objects, maps)?)
}

/// `(g_1, ..., g_m)` in `GL_n(F)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupTuple {
    gs: Vec<MatrixF>,
}

impl GroupTuple {
    pub fn new(gs: Vec<MatrixF>) -> Result<Self, SChainError> {
        if let Some(g0) = gs.first() {
            for g in &gs {
                if !g.is_square() || g.rows() != g0.rows() || g.ring() != g0.ring() {
                    return Err(LinalgError::DimensionMismatch("group tuple".into()).into());
                }
                if g.det()?.is_zero() {
                    return Err(LinalgError::SingularMatrix.into());
                }
            }
        }
        Ok(Self { gs })
    }

    pub fn elements(&self) -> &[MatrixF] {
        &self.gs
    }

    pub fn dim(&self) -> usize {
        self.gs.len()
    }

    /// Bar construction faces: `d_0` drops `g_1`, `d_m` drops `g_m`, and
    /// `d_i` replaces `g_i, g_{i+1}` by `g_{i+1} g_i`.
    pub fn face(&self, i: usize) -> Result<Self, SChainError> {
        let m = self.dim();
        if i > m || m == 0 {
            return Err(SChainError::OutOfRange(i));
        }
        let gs = if i == 0 {
            self.gs[1..].to_vec()
        } else if i == m {
            self.gs[..m - 1].to_vec()
        } else {
            let mut v = self.gs[..i - 1].to_vec();
            v.push(self.gs[i].matmul(&self.gs[i - 1])?);
            v.extend_from_slice(&self.gs[i + 1..]);
            v
        };
        Ok(Self { gs })
    }

    /// Inserts the identity after the first `i` entries.
    pub fn degeneracy(&self, i: usize, ring: RingConfig, n: usize) -> Result<Self, SChainError> {
        if i > self.dim() {
            return Err(SChainError::OutOfRange(i));
        }
        let mut gs = self.gs.clone();
        gs.insert(i, MatrixF::identity(ring, n));
        Ok(Self { gs })
    }

    /// `g_j ... g_1` for `j = 0..=m`.
    fn partial_products(&self, ring: RingConfig, n: usize) -> Result<Vec<MatrixF>, SChainError> {
        let mut acc = MatrixF::identity(ring, n);
        let mut out = vec![acc.clone()];
        for g in &self.gs {
            acc = g.matmul(&acc)?;
            out.push(acc.clone());
        }
        Ok(out)
    }
}

/// `(L, g_1 L, g_2 g_1 L, ..., g_m ... g_1 L)`.
pub fn l_map(g: &GroupTuple, l: &Lattice) -> Result<LatticeTuple, SChainError> {
    let prods = g.partial_products(l.ring(), l.rank())?;
    LatticeTuple::new(prods.iter().map(|h| l.act(h)).collect::<Result<_, _>>()?)
}

/// Components `h_j g_1 h_j^{-1}` with `h_j = g_{j+1} ... g_2`, `j = 0..m-1`.
pub fn alpha(g: &GroupTuple) -> Result<GroupTuple, SChainError> {
    let Some(g1) = g.gs.first() else {
        return Ok(GroupTuple { gs: Vec::new() });
    };
    let ring = g1.ring();
    let n = g1.rows();
    let mut h = MatrixF::identity(ring, n);
    let mut h_inv = MatrixF::identity(ring, n);
    let mut out = Vec::with_capacity(g.dim());
    out.push(g1.clone());
    for gj in &g.gs[1..] {
        h = gj.matmul(&h)?;
        h_inv = h_inv.matmul(&gj.inverse()?)?;
        out.push(h.matmul(g1)?.matmul(&h_inv)?);
    }
    Ok(GroupTuple { gs: out })
}

/// Componentwise `(d_0 alpha(ḡ))_j · alpha(d_0 ḡ)_j = alpha(d_1 ḡ)_j`, with
/// `d_0` on components dropping the first one.
pub fn cocycle_check(g: &GroupTuple) -> Result<bool, SChainError> {
    if g.dim() < 2 {
        return Err(SChainError::OutOfRange(g.dim()));
    }
    let a = alpha(g)?;
    let a0 = alpha(&g.face(0)?)?;
    let a1 = alpha(&g.face(1)?)?;
    for j in 0..g.dim() - 1 {
        if a.gs[j + 1].matmul(&a0.gs[j])? != a1.gs[j] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `alpha(ḡ)_j` carries entry `j` of the image of `d_0 ḡ` onto entry `j` of
/// `d_0` of the image of `ḡ`.
pub fn alpha_transport_check(g: &GroupTuple, l: &Lattice) -> Result<bool, SChainError> {
    if g.dim() == 0 {
        return Err(SChainError::OutOfRange(0));
    }
    let a = alpha(g)?;
    let src = l_map(&g.face(0)?, l)?;
    let tgt = l_map(g, l)?.face(0)?;
    for (j, aj) in a.gs.iter().enumerate() {
        if src.lattices[j].act(aj)? != tgt.lattices[j] {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Component `i` is `rel_index(L_{i-1}, L_i)`, evaluated through the
/// lattice-valued diagram on the distinct entries and their join.
pub fn index_of_tuple(t: &LatticeTuple) -> Result<IndexVector, SChainError> {
    let mut distinct: Vec<Lattice> = Vec::new();
    let mut pos = Vec::with_capacity(t.lattices.len());
    let mut top = t.lattices[0].clone();
    for l in &t.lattices {
        top = top.sup(l)?;
        match distinct.iter().position(|d| d == l) {
            Some(p) => pos.push(p),
            None => {
                pos.push(distinct.len());
                distinct.push(l.clone());
            }
        }
    }
    if !distinct.contains(&top) {
        distinct.push(top);
    }
    let k = distinct.len();
    let mut rel = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if a != b && distinct[a].leq(&distinct[b])? {
                rel.push((a, b));
            }
        }
    }
    let poset = Poset::from_relations(k, &rel).map_err(DiagramError::from)?;
    let based = BasedPoset::new_relaxed(poset.clone(), pos).map_err(DiagramError::from)?;
    let d = AdmissibleDiagram::lattice_valued(poset, distinct)?;
    Ok(d.pre_index(&based)?)
}

/// `Index(g_m ... g_1)`.
pub fn index_of_product(g: &GroupTuple, ring: RingConfig, n: usize) -> Result<i64, SChainError> {
    let prods = g.partial_products(ring, n)?;
    Ok(index_of_automorphism(prods.last().unwrap())?)
}

/// The comparison of the `A[m]`, `T[m]` and `B[m]` diagrams attached to a
/// chain, at the level of `K_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnComparison {
    pub class_vector: IndexVector,
    /// `(x, y) ↦ L_x` on `A[m]`, basepoints `(i, i)`.
    pub lattice_diagram: IndexVector,
    /// `(x, y) ↦ L_x / L_0` on `A[m]`.
    pub quotient_diagram: IndexVector,
    /// `[L_m / L_x] + [L_x / L_0]` is the same for every element.
    pub kernel_constant: bool,
    /// `[i, j] ↦ X_j` on `B[m]`.
    pub b_route: IndexVector,
    /// Pulled back to `T[m]` through `A[m]`.
    pub t_via_a: IndexVector,
    /// Pulled back to `T[m]` through `B[m]`.
    pub t_via_b: IndexVector,
}

impl AnComparison {
    pub fn holds(&self) -> bool {
        let c = &self.class_vector;
        self.kernel_constant
            && [&self.lattice_diagram, &self.quotient_diagram, &self.b_route, &self.t_via_a, &self.t_via_b]
                .iter()
                .all(|v| *v == c)
    }
}

pub fn a_n_comparison(c: &LatticeChain) -> Result<AnComparison, SChainError> {
    let m = c.dim();
    let ls = &c.lattices;
    let a = a_poset(m);
    let elems = a_elements(m);
    let a_based =
        BasedPoset::new_relaxed(a.clone(), (0..=m).map(|i| a_index(m, (i, i))).collect()).map_err(DiagramError::from)?;
    let fam: Vec<Lattice> = elems.iter().map(|&(x, _)| ls[x].clone()).collect();
    let lat = AdmissibleDiagram::lattice_valued(a.clone(), fam.clone())?;
    let quot = AdmissibleDiagram::from_lattice_family(a.clone(), &fam, &ls[0])?;
    let lattice_diagram = lat.pre_index(&a_based)?;
    let quotient_diagram = quot.pre_index(&a_based)?;

    let total = ls[0].rel_index(&ls[m])?;
    let mut kernel_constant = true;
    for &(x, _) in &elems {
        kernel_constant &= ls[x].rel_index(&ls[m])? + ls[0].rel_index(&ls[x])? == total;
    }

    let s = index_of_chain(c)?;
    let bd = s.b_diagram()?;
    let b = b_poset(m);
    let b_route = bd.pre_index(&b)?;

    let t = t_poset(m);
    let to_a: Vec<usize> = (0..=m).map(|i| a_index(m, (i, i))).chain([a_index(m, (m, m))]).collect();
    let to_b: Vec<usize> = (0..=m).chain([b.final_element()]).collect();
    let t_via_a = quot.restrict(t.poset(), &to_a)?.pre_index(&t)?;
    let t_via_b = bd.restrict(t.poset(), &to_b)?.pre_index(&t)?;

    Ok(AnComparison {
        class_vector: c.class_vector()?,
        lattice_diagram,
        quotient_diagram,
        kernel_constant,
        b_route,
        t_via_a,
        t_via_b,
    })
}

/// The spine map `B_m G -> G^m` of the bar construction on a finite set of
/// group elements is a bijection onto the iterated fibre product.
pub fn bar_segal_check(elements: &[MatrixF], m: usize) -> Result<bool, SChainError> {
    let k = elements.len();
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..m {
        tuples = tuples.into_iter().flat_map(|t| (0..k).map(move |e| [t.clone(), vec![e]].concat())).collect();
    }
    let mut spines = std::collections::HashSet::new();
    for t in &tuples {
        let g = GroupTuple::new(t.iter().map(|&i| elements[i].clone()).collect())?;
        let mut edges = Vec::with_capacity(m);
        for j in 0..m {
            let mut h = g.clone();
            for _ in j + 1..m {
                h = h.face(h.dim())?;
            }
            for _ in 0..j {
                h = h.face(0)?;
            }
            edges.push(h.gs[0].clone());
        }
        spines.insert(edges);
    }
    Ok(spines.len() == k.pow(m as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dvr::RingConfig;

    fn r() -> RingConfig {
        RingConfig::series(2)
    }

    fn lat(s: &str) -> Lattice {
        Lattice::parse(r(), s).unwrap()
    }

    #[test]
    fn chain_index() {
        let c = LatticeChain::new(vec![lat("t^2"), lat("t"), lat("1")]).unwrap();
        let s = index_of_chain(&c).unwrap();
        assert_eq!(s.class_vector().unwrap(), vec![1, 1]);
        assert_eq!(s.sface(0).unwrap().class_vector().unwrap(), vec![1]);
        assert_eq!(c.face(1).unwrap().lattices().len(), 2);
        assert!(LatticeChain::new(vec![lat("1"), lat("t")]).is_err());
    }

    #[test]
    fn tuple_of_powers() {
        let g = MatrixF::diag_pi(r(), &[1, 0]);
        let gt = GroupTuple::new(vec![g.clone(), g]).unwrap();
        let t = l_map(&gt, &Lattice::standard(r(), 2)).unwrap();
        assert_eq!(index_of_tuple(&t).unwrap(), vec![-1, -1]);
        assert_eq!(index_of_product(&gt, r(), 2).unwrap(), 2);
    }

    #[test]
    fn alpha_and_cocycle() {
        let g1 = MatrixF::parse(r(), "0, 1; 1, 0").unwrap();
        let g2 = MatrixF::parse(r(), "1, t; 0, 1").unwrap();
        let g3 = MatrixF::diag_pi(r(), &[1, -2]);
        let gt = GroupTuple::new(vec![g1, g2, g3]).unwrap();
        assert!(cocycle_check(&gt).unwrap());
        assert!(alpha_transport_check(&gt, &Lattice::standard(r(), 2)).unwrap());
    }

    #[test]
    fn an_small() {
        let c = LatticeChain::new(vec![lat("t^2"), lat("t"), lat("1")]).unwrap();
        let rep = a_n_comparison(&c).unwrap();
        assert!(rep.holds(), "{rep:?}");
        assert_eq!(rep.class_vector, vec![1, 1]);
    }
}
