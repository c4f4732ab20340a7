//! Lattices in `V = F^n`: the Sato Grassmannian as a partially ordered set
//! with joins and meets, quotients, the relative index and the action of
//! `GL_n(F)`.
//!
//! Sign convention: `Index(g) = v(det g) = [L/(L ∩ gL)] - [gL/(L ∩ gL)]`,
//! so `f ↦ length(O/fO)` is nonnegative for integral `f`. Accordingly
//! `rel_index(L0, L1) = v(det M0) - v(det M1)`, which equals
//! `length(L1/L0)` when `L0 ⊆ L1`.

use std::fmt;

use thiserror::Error;

use crate::dvr::{FieldElement, RingConfig};
use crate::linalg::{hermite_over_dvr, LinalgError, MatrixF};
use crate::torsion::{TorsionError, TorsionModule};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error("lattice is not contained in the larger lattice")]
    NotContained,
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
}

impl LatticeError {
    pub fn is_precision(&self) -> bool {
        match self {
            LatticeError::Linalg(e) => e.is_precision(),
            LatticeError::Torsion(e) => e.is_precision(),
            _ => false,
        }
    }
}

/// `pi^shift * span_O(hermite)`, with `hermite` the column Hermite form of an
/// integral generating set whose minimal entry valuation is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    shift: i64,
    hermite: MatrixF,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GrassmannRelation {
    Equal,
    Less,
    Greater,
    Incomparable,
}

impl fmt::Display for GrassmannRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            GrassmannRelation::Equal => "equal",
            GrassmannRelation::Less => "less",
            GrassmannRelation::Greater => "greater",
            GrassmannRelation::Incomparable => "incomparable",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrassmannPair {
    pub l0: Lattice,
    pub l1: Lattice,
    pub relation: GrassmannRelation,
}

impl GrassmannPair {
    pub fn new(l0: Lattice, l1: Lattice) -> Result<Self, LatticeError> {
        let relation = l0.relation(&l1)?;
        Ok(Self { l0, l1, relation })
    }
}

impl Lattice {
    pub fn standard(ring: RingConfig, n: usize) -> Self {
        assert!(n >= 1, "rank must be positive");
        Self { shift: 0, hermite: MatrixF::identity(ring, n) }
    }

    /// `pi^e O^n`.
    pub fn scaled_standard(ring: RingConfig, n: usize, e: i64) -> Self {
        Self { shift: e, hermite: MatrixF::identity(ring, n) }
    }

    /// Lattice spanned by the columns of an `n x m` matrix of rank `n`.
    pub fn from_generators(m: &MatrixF) -> Result<Self, LatticeError> {
        let shift = m
            .min_valuation()
            .finite()
            .ok_or(LinalgError::RankDeficient { rank: 0, expected: m.rows() })?;
        let hermite = hermite_over_dvr(&m.shift(-shift))?;
        Ok(Self { shift, hermite })
    }

    pub fn from_basis(m: &MatrixF) -> Result<Self, LatticeError> {
        if !m.is_square() {
            return Err(LinalgError::DimensionMismatch("basis must be square".into()).into());
        }
        Self::from_generators(m)
    }

    pub fn ring(&self) -> RingConfig {
        self.hermite.ring()
    }

    pub fn rank(&self) -> usize {
        self.hermite.rows()
    }

    pub fn shift(&self) -> i64 {
        self.shift
    }

    pub fn hermite(&self) -> &MatrixF {
        &self.hermite
    }

    /// Canonical basis `pi^shift * H`.
    pub fn basis(&self) -> MatrixF {
        self.hermite.shift(self.shift)
    }

    fn check_rank(&self, other: &Self) -> Result<(), LatticeError> {
        if self.rank() != other.rank() {
            return Err(LatticeError::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    /// Inverse of the canonical basis (exact: triangular with monomial pivots).
    pub fn basis_inverse(&self) -> Result<MatrixF, LatticeError> {
        Ok(self.hermite.inverse()?.shift(-self.shift))
    }

    /// `g L`.
    pub fn act(&self, g: &MatrixF) -> Result<Self, LatticeError> {
        if !g.is_square() || g.rows() != self.rank() {
            return Err(LinalgError::DimensionMismatch("act".into()).into());
        }
        if g.det()?.is_zero() {
            return Err(LinalgError::SingularMatrix.into());
        }
        Self::from_generators(&g.matmul(&self.basis())?)
    }

    /// Basis change `M1^{-1} M0` from `self = L0` into `other = L1`.
    fn transition(&self, other: &Self) -> Result<MatrixF, LatticeError> {
        self.check_rank(other)?;
        Ok(other.basis_inverse()?.matmul(&self.basis())?)
    }

    /// `self ⊆ other`.
    pub fn leq(&self, other: &Self) -> Result<bool, LatticeError> {
        Ok(self.transition(other)?.is_integral())
    }

    pub fn relation(&self, other: &Self) -> Result<GrassmannRelation, LatticeError> {
        if self == other {
            return Ok(GrassmannRelation::Equal);
        }
        Ok(match (self.leq(other)?, other.leq(self)?) {
            (true, true) => GrassmannRelation::Equal,
            (true, false) => GrassmannRelation::Less,
            (false, true) => GrassmannRelation::Greater,
            (false, false) => GrassmannRelation::Incomparable,
        })
    }

    pub fn sup(&self, other: &Self) -> Result<Self, LatticeError> {
        self.check_rank(other)?;
        Self::from_generators(&self.basis().hconcat(&other.basis())?)
    }

    /// `{x in F^n : x^T y in O for all y in L}`, with basis `M^{-T}`.
    pub fn dual(&self) -> Result<Self, LatticeError> {
        Self::from_basis(&self.basis_inverse()?.transpose())
    }

    pub fn inf(&self, other: &Self) -> Result<Self, LatticeError> {
        self.dual()?.sup(&other.dual()?)?.dual()
    }

    /// `other / self` for `self ⊆ other`, presented in the basis of `other`.
    pub fn quotient(&self, other: &Self) -> Result<TorsionModule, LatticeError> {
        let x = self.transition(other)?;
        if !x.is_integral() {
            return Err(LatticeError::NotContained);
        }
        Ok(TorsionModule::from_presentation(&x)?)
    }

    /// `v(det M0) - v(det M1)`.
    pub fn rel_index(&self, other: &Self) -> Result<i64, LatticeError> {
        self.check_rank(other)?;
        let d0 = self.basis().det()?;
        let d1 = other.basis().det()?;
        Ok(d0.val() - d1.val())
    }

    /// `[N/L0] - [N/L1]` with `N = sup(L0, L1)`.
    pub fn rel_index_via_quotients(&self, other: &Self) -> Result<i64, LatticeError> {
        let n = self.sup(other)?;
        Ok(self.quotient(&n)?.length() as i64 - other.quotient(&n)?.length() as i64)
    }

    /// Parse a basis in matrix text format.
    pub fn parse(ring: RingConfig, s: &str) -> Result<Self, LatticeError> {
        Self::from_basis(&MatrixF::parse(ring, s)?)
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.basis())
    }
}

/// `v(det g)`.
pub fn index_of_automorphism(g: &MatrixF) -> Result<i64, LatticeError> {
    let d = g.det()?;
    if d.is_zero() {
        return Err(LinalgError::SingularMatrix.into());
    }
    Ok(d.val())
}

/// Scalar matrix `c * I_n`.
pub fn scalar(ring: RingConfig, n: usize, c: &FieldElement) -> MatrixF {
    MatrixF::diagonal(ring, &vec![c.clone(); n])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r() -> RingConfig {
        RingConfig::series(3)
    }

    fn lat(s: &str) -> Lattice {
        Lattice::parse(r(), s).unwrap()
    }

    #[test]
    fn standard_and_act() {
        let o2 = Lattice::standard(r(), 2);
        assert_eq!(o2.act(&MatrixF::identity(r(), 2)).unwrap(), o2);
        let g = MatrixF::diag_pi(r(), &[1, -1]);
        let l = o2.act(&g).unwrap();
        assert_eq!(l, lat("t, 0; 0, t^-1"));
        assert_eq!(l.shift(), -1);
        assert_eq!(l.act(&g.inverse().unwrap()).unwrap(), o2);
    }

    #[test]
    fn order() {
        let o = Lattice::standard(r(), 1);
        let to = lat("t");
        assert_eq!(to.relation(&o).unwrap(), GrassmannRelation::Less);
        assert_eq!(o.relation(&o).unwrap(), GrassmannRelation::Equal);
        let o2 = Lattice::standard(r(), 2);
        assert_eq!(o2.relation(&lat("t, 0; 0, t^-1")).unwrap(), GrassmannRelation::Incomparable);
    }

    #[test]
    fn sup_inf() {
        let o = Lattice::standard(r(), 1);
        let big = lat("t^-2");
        assert_eq!(o.sup(&big).unwrap(), big);
        assert_eq!(o.inf(&big).unwrap(), o);
        let a = lat("t^-1, 0; 0, t");
        let o2 = Lattice::standard(r(), 2);
        assert_eq!(a.sup(&o2).unwrap(), lat("t^-1, 0; 0, 1"));
        assert_eq!(a.inf(&o2).unwrap(), lat("1, 0; 0, t"));
    }

    #[test]
    fn quotients_and_index() {
        let o = Lattice::standard(r(), 1);
        assert_eq!(lat("t").quotient(&o).unwrap().length(), 1);
        let q = lat("t^2, 0; 0, t").quotient(&Lattice::standard(r(), 2)).unwrap();
        assert_eq!(q.exponents(), &[1, 2]);
        assert!(o.quotient(&o).unwrap().is_zero());
        assert_eq!(o.rel_index(&lat("t^-2")).unwrap(), 2);
        assert!(matches!(o.quotient(&lat("t")), Err(LatticeError::NotContained)));
    }

    #[test]
    fn automorphism_index() {
        let t = MatrixF::parse(r(), "t").unwrap();
        assert_eq!(index_of_automorphism(&t).unwrap(), 1);
        let u = MatrixF::parse(r(), "1 + t").unwrap();
        assert_eq!(index_of_automorphism(&u).unwrap(), 0);
    }
}
