//! Finitely generated torsion `O`-modules, maps between presented modules,
//! and chains of monics. The Grothendieck group class of a module is its
//! length.

use std::fmt;

use thiserror::Error;

use crate::dvr::{FieldElement, RingConfig};
use crate::linalg::{hermite_over_dvr, smith_over_dvr, LinalgError, MatrixF};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorsionError {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("ill-formed map: {0}")]
    IllFormedMap(String),
    #[error("presentation does not define a torsion module")]
    NotTorsion,
    #[error("not contained: {0}")]
    NotContained(String),
    #[error("operation requires a presentation")]
    MissingPresentation,
    #[error("parse error: {0}")]
    Parse(String),
}

impl TorsionError {
    pub fn is_precision(&self) -> bool {
        matches!(self, TorsionError::Linalg(e) if e.is_precision())
    }
}

/// `O/pi^{a_1} + ... + O/pi^{a_r}`, optionally with a square presentation
/// matrix (relations as columns, in column Hermite form).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorsionModule {
    exponents: Vec<u32>,
    presentation: Option<MatrixF>,
}

impl TorsionModule {
    pub fn from_exponents(mut exponents: Vec<u32>) -> Self {
        exponents.retain(|&a| a > 0);
        exponents.sort_unstable();
        Self { exponents, presentation: None }
    }

    pub fn zero() -> Self {
        Self::from_exponents(Vec::new())
    }

    /// Cokernel of a `k x r` integral matrix of rank `k`.
    pub fn from_presentation(p: &MatrixF) -> Result<Self, TorsionError> {
        let snf = smith_over_dvr(p).map_err(|e| match e {
            LinalgError::RankDeficient { .. } => TorsionError::NotTorsion,
            e => e.into(),
        })?;
        let h = hermite_over_dvr(p)?;
        let mut m = Self::from_exponents(snf.exponents);
        m.presentation = Some(h);
        Ok(m)
    }

    /// The same module with presentation `diag(pi^{a_i})` (the 1x1 unit matrix
    /// for the zero module).
    pub fn with_diagonal_presentation(&self, ring: RingConfig) -> Self {
        let p = if self.exponents.is_empty() {
            MatrixF::identity(ring, 1)
        } else {
            let e: Vec<i64> = self.exponents.iter().map(|&a| a as i64).collect();
            MatrixF::diag_pi(ring, &e)
        };
        Self { exponents: self.exponents.clone(), presentation: Some(p) }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn length(&self) -> u64 {
        self.exponents.iter().map(|&a| a as u64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.exponents.is_empty()
    }

    pub fn presentation(&self) -> Option<&MatrixF> {
        self.presentation.as_ref()
    }

    fn require_presentation(&self) -> Result<&MatrixF, TorsionError> {
        self.presentation.as_ref().ok_or(TorsionError::MissingPresentation)
    }

    /// Number of generators of the presentation.
    pub fn generators(&self) -> Option<usize> {
        self.presentation.as_ref().map(|p| p.rows())
    }

    /// Direct sum, with block diagonal presentation when both are presented.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut e = self.exponents.clone();
        e.extend_from_slice(&other.exponents);
        let mut m = Self::from_exponents(e);
        if let (Some(a), Some(b)) = (&self.presentation, &other.presentation) {
            m.presentation = Some(a.block_diag(b));
        }
        m
    }

    /// Parse `[a1,a2,...]`.
    pub fn parse(s: &str) -> Result<Self, TorsionError> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| TorsionError::Parse(format!("expected [..] in '{s}'")))?;
        let exps = inner
            .split(',')
            .map(str::trim)
            .filter(|x| !x.is_empty())
            .map(|x| x.parse::<u32>().map_err(|_| TorsionError::Parse(format!("bad exponent '{x}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_exponents(exps))
    }
}

impl fmt::Display for TorsionModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.exponents.iter().map(|a| a.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A map of presented modules, induced by `matrix` on generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleMap {
    source: TorsionModule,
    target: TorsionModule,
    matrix: MatrixF,
}

/// Outcome of [`ModuleMap::is_admissible_monic`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonicCheck {
    pub monic: bool,
    pub cokernel: TorsionModule,
    pub kernel_length: u64,
}

impl ModuleMap {
    pub fn new(source: TorsionModule, target: TorsionModule, matrix: MatrixF) -> Result<Self, TorsionError> {
        let ps = source.require_presentation()?;
        let pt = target.require_presentation()?;
        if matrix.rows() != pt.rows() || matrix.cols() != ps.rows() {
            return Err(TorsionError::IllFormedMap(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                pt.rows(),
                ps.rows()
            )));
        }
        if !matrix.is_integral() {
            return Err(TorsionError::IllFormedMap("matrix not integral".into()));
        }
        let x = pt.inverse()?.matmul(&matrix.matmul(ps)?)?;
        if !x.is_integral() {
            return Err(TorsionError::IllFormedMap("relations not sent to relations".into()));
        }
        Ok(Self { source, target, matrix })
    }

    pub fn identity(m: &TorsionModule) -> Result<Self, TorsionError> {
        let p = m.require_presentation()?;
        Self::new(m.clone(), m.clone(), MatrixF::identity(p.ring(), p.rows()))
    }

    pub fn source(&self) -> &TorsionModule {
        &self.source
    }

    pub fn target(&self) -> &TorsionModule {
        &self.target
    }

    pub fn matrix(&self) -> &MatrixF {
        &self.matrix
    }

    /// `after . self`.
    pub fn then(&self, after: &ModuleMap) -> Result<ModuleMap, TorsionError> {
        Self::new(self.source.clone(), after.target.clone(), after.matrix.matmul(&self.matrix)?)
    }

    pub fn cokernel(&self) -> Result<TorsionModule, TorsionError> {
        TorsionModule::from_presentation(&self.target.presentation.as_ref().unwrap().hconcat(&self.matrix)?)
    }

    pub fn is_admissible_monic(&self) -> Result<MonicCheck, TorsionError> {
        let cokernel = self.cokernel()?;
        let image = self.target.length() - cokernel.length();
        let kernel_length = self.source.length() - image;
        Ok(MonicCheck { monic: kernel_length == 0, cokernel, kernel_length })
    }
}

/// `X_0 -> X_1 -> ... -> X_m`, `maps[i]` from `X_i` to `X_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleChain {
    objects: Vec<TorsionModule>,
    maps: Vec<MatrixF>,
}

impl ModuleChain {
    /// Validates that every map is a well defined monic.
    pub fn new(objects: Vec<TorsionModule>, maps: Vec<MatrixF>) -> Result<Self, TorsionError> {
        if objects.is_empty() || maps.len() + 1 != objects.len() {
            return Err(TorsionError::IllFormedMap("chain needs one map per consecutive pair".into()));
        }
        for (i, a) in maps.iter().enumerate() {
            let f = ModuleMap::new(objects[i].clone(), objects[i + 1].clone(), a.clone())?;
            if !f.is_admissible_monic()?.monic {
                return Err(TorsionError::NotContained(format!("map {i} -> {} is not injective", i + 1)));
            }
        }
        Ok(Self { objects, maps })
    }

    pub fn len(&self) -> usize {
        self.objects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }

    pub fn objects(&self) -> &[TorsionModule] {
        &self.objects
    }

    pub fn object(&self, i: usize) -> &TorsionModule {
        &self.objects[i]
    }

    pub fn maps(&self) -> &[MatrixF] {
        &self.maps
    }

    /// Matrix of the composite `X_i -> X_j`.
    pub fn composite(&self, i: usize, j: usize) -> Result<MatrixF, TorsionError> {
        assert!(i <= j && j < self.objects.len());
        let n = self.objects[i].presentation.as_ref().unwrap().rows();
        let ring = self.maps.first().map_or_else(|| self.objects[i].presentation.as_ref().unwrap().ring(), |m| m.ring());
        let mut acc = MatrixF::identity(ring, n);
        for k in i..j {
            acc = self.maps[k].matmul(&acc)?;
        }
        Ok(acc)
    }

    /// `X_j / X_i`.
    pub fn subquotient(&self, i: usize, j: usize) -> Result<TorsionModule, TorsionError> {
        if i > j || j >= self.objects.len() {
            return Err(TorsionError::NotContained(format!("bad index pair ({i}, {j})")));
        }
        let a = self.composite(i, j)?;
        let pj = self.objects[j].presentation.as_ref().unwrap();
        TorsionModule::from_presentation(&pj.hconcat(&a)?)
    }

    /// Drop `X_i`, composing the adjacent maps.
    pub fn drop_object(&self, i: usize) -> Result<Self, TorsionError> {
        let mut objects = self.objects.clone();
        objects.remove(i);
        let last = self.objects.len() - 1;
        let maps = if i == 0 {
            self.maps[1..].to_vec()
        } else if i == last {
            self.maps[..last - 1].to_vec()
        } else {
            let mut m = self.maps[..i - 1].to_vec();
            m.push(self.maps[i].matmul(&self.maps[i - 1])?);
            m.extend_from_slice(&self.maps[i + 1..]);
            m
        };
        Ok(Self { objects, maps })
    }

    /// All subquotient exponent lists `X_j / X_i` for `i <= j`.
    pub fn invariants(&self) -> Result<Vec<Vec<u32>>, TorsionError> {
        let mut out = Vec::new();
        for i in 0..self.objects.len() {
            for j in i..self.objects.len() {
                out.push(self.subquotient(i, j)?.exponents().to_vec());
            }
        }
        Ok(out)
    }
}

/// Multiplication by `pi^k` on `O/pi^a` as a map of presented modules.
pub fn pi_power_map(ring: RingConfig, a: u32, b: u32, k: u32) -> Result<ModuleMap, TorsionError> {
    let s = TorsionModule::from_exponents(vec![a]).with_diagonal_presentation(ring);
    let t = TorsionModule::from_exponents(vec![b]).with_diagonal_presentation(ring);
    ModuleMap::new(s, t, MatrixF::diagonal(ring, &[FieldElement::monomial(ring, 1, k as i64)]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r2() -> RingConfig {
        RingConfig::series(2)
    }

    #[test]
    fn lengths() {
        assert_eq!(TorsionModule::from_exponents(vec![3]).length(), 3);
        assert_eq!(TorsionModule::zero().length(), 0);
        assert_eq!(TorsionModule::from_exponents(vec![2, 1]).length(), 3);
        assert_eq!(TorsionModule::parse("[2, 1]").unwrap().to_string(), "[1,2]");
    }

    #[test]
    fn multiplication_by_t_not_monic() {
        let f = pi_power_map(r2(), 3, 3, 1).unwrap();
        let c = f.is_admissible_monic().unwrap();
        assert!(!c.monic);
        assert_eq!(c.kernel_length, 1);
    }

    #[test]
    fn inclusion_t_o_mod_t3() {
        // tO/t^3 = O/t^2 -> O/t^3 by t
        let f = pi_power_map(r2(), 2, 3, 1).unwrap();
        let c = f.is_admissible_monic().unwrap();
        assert!(c.monic);
        assert_eq!(c.cokernel.exponents(), &[1]);
        let id = ModuleMap::identity(f.target()).unwrap();
        let c = id.is_admissible_monic().unwrap();
        assert!(c.monic && c.cokernel.is_zero());
    }

    #[test]
    fn ill_formed() {
        // 1: O/t -> O/t^2 does not respect relations
        let r = r2();
        let s = TorsionModule::from_exponents(vec![1]).with_diagonal_presentation(r);
        let t = TorsionModule::from_exponents(vec![2]).with_diagonal_presentation(r);
        assert!(matches!(
            ModuleMap::new(s, t, MatrixF::identity(r, 1)),
            Err(TorsionError::IllFormedMap(_))
        ));
    }

    #[test]
    fn chain_subquotients() {
        let r = r2();
        let z = TorsionModule::zero().with_diagonal_presentation(r);
        let a = TorsionModule::from_exponents(vec![2]).with_diagonal_presentation(r);
        let b = TorsionModule::from_exponents(vec![3]).with_diagonal_presentation(r);
        let c = ModuleChain::new(
            vec![z, a, b],
            vec![MatrixF::zeros(r, 1, 1), MatrixF::diag_pi(r, &[1])],
        )
        .unwrap();
        assert_eq!(c.subquotient(0, 2).unwrap().exponents(), &[3]);
        assert_eq!(c.subquotient(1, 2).unwrap().exponents(), &[1]);
        assert!(c.subquotient(1, 1).unwrap().is_zero());
        let d = c.drop_object(1).unwrap();
        assert_eq!(d.len(), 2);
        assert_eq!(d.subquotient(0, 1).unwrap().exponents(), &[3]);
        let d = c.drop_object(2).unwrap();
        assert_eq!(d.subquotient(0, 1).unwrap().exponents(), &[2]);
        let d = c.drop_object(0).unwrap();
        assert_eq!(d.subquotient(0, 1).unwrap().exponents(), &[1]);
    }
}
