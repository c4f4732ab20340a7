//! Dense matrices over `F`, determinants and inverses, and the Smith and
//! Hermite normal forms over `O`.
//!
//! Exact matrices are handled in the model ring (`F_p[t]` or `Z`) after
//! clearing denominators with a power of the uniformizer. Determinants and
//! ranks come from fraction-free (Bareiss) elimination there. The normal forms
//! are computed in `O / pi^K` where `K` exceeds the valuation of a nonzero
//! maximal minor, which determines them completely.

use std::fmt;

use thiserror::Error;

use crate::dvr::{DvrError, FieldElement, Raw, ResidueRing, RingConfig, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error(transparent)]
    Dvr(#[from] DvrError),
    #[error("singular matrix")]
    SingularMatrix,
    #[error("rank deficient: rank {rank} < {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("entry ({row}, {col}) is not integral")]
    NotIntegral { row: usize, col: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix parse error: {0}")]
    Parse(String),
}

impl LinalgError {
    pub fn is_precision(&self) -> bool {
        matches!(self, LinalgError::Dvr(DvrError::PrecisionExhausted(_)))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixF {
    ring: RingConfig,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl MatrixF {
    pub fn from_fn(ring: RingConfig, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> FieldElement) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                let x = f(i, j);
                assert_eq!(x.ring(), ring, "entry from a different ring");
                data.push(x);
            }
        }
        Self { ring, rows, cols, data }
    }

    pub fn from_rows(ring: RingConfig, rows: Vec<Vec<FieldElement>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 {
            return Err(LinalgError::DimensionMismatch("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<FieldElement> = rows.into_iter().flatten().collect();
        if data.iter().any(|x| x.ring() != ring) {
            return Err(LinalgError::DimensionMismatch("entries from different rings".into()));
        }
        Ok(Self { ring, rows: r, cols: c, data })
    }

    /// Matrix of exact integer entries.
    pub fn from_ints(ring: RingConfig, rows: &[Vec<i64>]) -> Result<Self, LinalgError> {
        Self::from_rows(ring, rows.iter().map(|r| r.iter().map(|&x| FieldElement::from_int(ring, x)).collect()).collect())
    }

    pub fn zeros(ring: RingConfig, rows: usize, cols: usize) -> Self {
        Self::from_fn(ring, rows, cols, |_, _| FieldElement::zero(ring))
    }

    pub fn identity(ring: RingConfig, n: usize) -> Self {
        Self::from_fn(ring, n, n, |i, j| if i == j { FieldElement::one(ring) } else { FieldElement::zero(ring) })
    }

    pub fn diagonal(ring: RingConfig, diag: &[FieldElement]) -> Self {
        let n = diag.len();
        Self::from_fn(ring, n, n, |i, j| if i == j { diag[i].clone() } else { FieldElement::zero(ring) })
    }

    /// `diag(pi^{e_1}, ..., pi^{e_n})`.
    pub fn diag_pi(ring: RingConfig, exps: &[i64]) -> Self {
        let d: Vec<_> = exps.iter().map(|&e| FieldElement::monomial(ring, 1, e)).collect();
        Self::diagonal(ring, &d)
    }

    pub fn ring(&self) -> RingConfig {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        assert_eq!(x.ring(), self.ring);
        self.data[i * self.cols + j] = x;
    }

    pub fn entries(&self) -> &[FieldElement] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.data.iter().all(|x| x.is_exact())
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integral())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn min_valuation(&self) -> Valuation {
        self.data.iter().map(|x| x.valuation()).min().unwrap_or(Valuation::Infinity)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Multiply every entry by `pi^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j).shift(k))
    }

    pub fn scale(&self, c: &FieldElement) -> Self {
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn neg(&self) -> Self {
        Self::from_fn(self.ring, self.rows, self.cols, |i, j| self.get(i, j).neg())
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::DimensionMismatch("add".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self { data, ..self.clone() })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        self.add(&other.neg())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        assert_eq!(self.ring, other.ring, "operands from different rings");
        let mut data = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = FieldElement::zero(self.ring);
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    let b = other.get(k, j);
                    if a.is_zero() || b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(b))?;
                }
                data.push(acc);
            }
        }
        Ok(Self { ring: self.ring, rows: self.rows, cols: other.cols, data })
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows {
            return Err(LinalgError::DimensionMismatch("hconcat".into()));
        }
        Ok(Self::from_fn(self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.get(i, j).clone()
            } else {
                other.get(i, j - self.cols).clone()
            }
        }))
    }

    /// Block diagonal `diag(self, other)`.
    pub fn block_diag(&self, other: &Self) -> Self {
        let ring = self.ring;
        Self::from_fn(ring, self.rows + other.rows, self.cols + other.cols, |i, j| {
            match (i < self.rows, j < self.cols) {
                (true, true) => self.get(i, j).clone(),
                (false, false) => other.get(i - self.rows, j - self.cols).clone(),
                _ => FieldElement::zero(ring),
            }
        })
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(self.ring, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols.min(i)).all(|j| self.get(i, j).is_zero()))
    }

    /// Exact entries over the model ring after multiplying by `pi^{-shift}`;
    /// `shift` is the minimal entry valuation (0 for the zero matrix).
    fn scaled_raw(&self) -> Option<(i64, Vec<Vec<Raw>>)> {
        if !self.is_exact() {
            return None;
        }
        let shift = self.min_valuation().finite().unwrap_or(0);
        let rows = (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.get(i, j).shift(-shift).to_raw_integral().expect("integral after shift"))
                    .collect()
            })
            .collect();
        Some((shift, rows))
    }

    pub fn det(&self) -> Result<FieldElement, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("det of non-square matrix".into()));
        }
        let n = self.rows;
        if let Some((shift, raw)) = self.scaled_raw() {
            let b = bareiss(raw, self.ring.p());
            if b.rank < n {
                return Ok(FieldElement::zero(self.ring));
            }
            let d = FieldElement::from_raw(self.ring, shift * n as i64, b.minor);
            return Ok(if b.sign < 0 { d.neg() } else { d });
        }
        self.det_by_elimination()
    }

    fn det_by_elimination(&self) -> Result<FieldElement, LinalgError> {
        let n = self.rows;
        let mut a: Vec<Vec<FieldElement>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut det = FieldElement::one(self.ring);
        for k in 0..n {
            let piv = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| (a[i][k].valuation(), i));
            let Some(pi) = piv else {
                return Ok(FieldElement::zero(self.ring));
            };
            if pi != k {
                a.swap(pi, k);
                det = det.neg();
            }
            let pinv = a[k][k].inv()?;
            det = det.mul(&a[k][k]);
            for i in k + 1..n {
                if a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].mul(&pinv);
                for j in k + 1..n {
                    let t = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&t)?;
                }
                a[i][k] = FieldElement::zero(self.ring);
            }
        }
        Ok(det)
    }

    /// Rank over `F` of an exact matrix.
    pub fn rank(&self) -> Option<usize> {
        self.scaled_raw().map(|(_, raw)| bareiss(raw, self.ring.p()).rank)
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        if !self.is_square() {
            return Err(LinalgError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        if self.is_exact() {
            if self.is_upper_triangular() && (0..n).all(|i| self.get(i, i).is_monomial()) {
                return self.upper_triangular_inverse();
            }
            if self.transpose().is_upper_triangular() && (0..n).all(|i| self.get(i, i).is_monomial()) {
                return Ok(self.transpose().upper_triangular_inverse()?.transpose());
            }
            let det = self.det()?;
            if det.is_zero() {
                return Err(LinalgError::SingularMatrix);
            }
            if n == 1 {
                return Ok(Self::from_fn(self.ring, 1, 1, |_, _| FieldElement::one(self.ring).div(&det).unwrap()));
            }
            let mut out = Self::zeros(self.ring, n, n);
            for i in 0..n {
                for j in 0..n {
                    // cofactor C_{ji}
                    let rows: Vec<usize> = (0..n).filter(|&r| r != j).collect();
                    let cols: Vec<usize> = (0..n).filter(|&c| c != i).collect();
                    let mut c = self.submatrix(&rows, &cols).det()?;
                    if (i + j) % 2 == 1 {
                        c = c.neg();
                    }
                    out.set(i, j, c.div(&det)?);
                }
            }
            return Ok(out);
        }
        self.inverse_by_elimination()
    }

    fn upper_triangular_inverse(&self) -> Result<Self, LinalgError> {
        let n = self.rows;
        let ring = self.ring;
        let dinv: Vec<FieldElement> = (0..n).map(|i| self.get(i, i).inv()).collect::<Result<_, _>>()?;
        let mut x = Self::zeros(ring, n, n);
        for j in 0..n {
            x.set(j, j, dinv[j].clone());
            for i in (0..j).rev() {
                let mut acc = FieldElement::zero(ring);
                for k in i + 1..=j {
                    let a = self.get(i, k);
                    if a.is_zero() || x.get(k, j).is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.mul(x.get(k, j)))?;
                }
                x.set(i, j, acc.neg().mul(&dinv[i]));
            }
        }
        Ok(x)
    }

    fn inverse_by_elimination(&self) -> Result<Self, LinalgError> {
        let n = self.rows;
        let ring = self.ring;
        let mut a: Vec<Vec<FieldElement>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            self.get(i, j).clone()
                        } else if j - n == i {
                            FieldElement::one(ring)
                        } else {
                            FieldElement::zero(ring)
                        }
                    })
                    .collect()
            })
            .collect();
        for k in 0..n {
            let piv = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| (a[i][k].valuation(), i));
            let Some(pi) = piv else {
                return Err(LinalgError::SingularMatrix);
            };
            a.swap(pi, k);
            let pinv = a[k][k].inv()?;
            for j in 0..2 * n {
                a[k][j] = a[k][j].mul(&pinv);
            }
            for i in 0..n {
                if i == k || a[i][k].is_zero() {
                    continue;
                }
                let q = a[i][k].clone();
                for j in 0..2 * n {
                    let t = q.mul(&a[k][j]);
                    a[i][j] = a[i][j].sub(&t)?;
                }
                a[i][k] = FieldElement::zero(ring);
            }
        }
        Ok(Self::from_fn(ring, n, n, |i, j| a[i][j + n].clone()))
    }

    /// Parse `a, b; c, d` (rows separated by `;`).
    pub fn parse(ring: RingConfig, s: &str) -> Result<Self, LinalgError> {
        let rows = s
            .split(';')
            .map(|row| row.split(',').map(|e| FieldElement::parse(ring, e)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| LinalgError::Parse(e.to_string()))?;
        Self::from_rows(ring, rows)
    }

    /// Nested arrays of entry strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect()).collect()
    }
}

impl fmt::Display for MatrixF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.to_string_rows().into_iter().map(|r| r.join(", ")).collect();
        write!(f, "{}", rows.join("; "))
    }
}

pub(crate) struct Bareiss {
    pub(crate) rank: usize,
    /// Last nonzero pivot: up to sign a nonzero `rank x rank` minor (the
    /// determinant when the matrix is square and nonsingular).
    pub(crate) minor: Raw,
    pub(crate) sign: i32,
}

/// Fraction-free elimination with full pivoting over the model ring.
pub(crate) fn bareiss(mut a: Vec<Vec<Raw>>, p: u32) -> Bareiss {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let kind_zero = a.first().and_then(|r| r.first()).cloned();
    let one = match kind_zero {
        Some(Raw::Poly(_)) => Raw::Poly(vec![1]),
        Some(Raw::Int(_)) => Raw::Int(1.into()),
        None => return Bareiss { rank: 0, minor: Raw::Poly(vec![1]), sign: 1 },
    };
    let mut prev = one.clone();
    let mut sign = 1;
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let mut piv = None;
        'search: for i in k..rows {
            for j in k..cols {
                if !a[i][j].is_zero() {
                    piv = Some((i, j));
                    break 'search;
                }
            }
        }
        let Some((pi, pj)) = piv else { break };
        if pi != k {
            a.swap(pi, k);
            sign = -sign;
        }
        if pj != k {
            for row in a.iter_mut() {
                row.swap(pj, k);
            }
            sign = -sign;
        }
        let pivot = a[k][k].clone();
        for i in k + 1..rows {
            for j in k + 1..cols {
                let num = a[i][j].mul(&pivot, p).sub(&a[i][k].mul(&a[k][j], p), p);
                a[i][j] = num.exact_div(&prev, p).expect("Bareiss division is exact");
            }
            a[i][k] = Raw::zero_like(&pivot);
        }
        prev = pivot;
        rank = k + 1;
    }
    Bareiss { rank, minor: if rank == 0 { one } else { prev }, sign }
}

impl Raw {
    pub(crate) fn zero_like(x: &Raw) -> Raw {
        match x {
            Raw::Poly(_) => Raw::Poly(Vec::new()),
            Raw::Int(_) => Raw::Int(0.into()),
        }
    }
}

/// Result of [`smith_over_dvr`]: `U * M * V` agrees with `diag(pi^{a_i})`
/// modulo `pi^modulus`, and `U`, `V` are exact matrices of unit determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub exponents: Vec<u32>,
    pub left: MatrixF,
    pub right: MatrixF,
    pub modulus: u32,
}

impl SmithForm {
    /// The `rows x cols` diagonal matrix of the form.
    pub fn diagonal(&self, ring: RingConfig) -> MatrixF {
        let (r, c) = (self.left.rows(), self.right.rows());
        MatrixF::from_fn(ring, r, c, |i, j| {
            if i == j && i < self.exponents.len() {
                FieldElement::monomial(ring, 1, self.exponents[i] as i64)
            } else {
                FieldElement::zero(ring)
            }
        })
    }
}

struct ResidueMatrix {
    rr: ResidueRing,
    rows: usize,
    cols: usize,
    a: Vec<Vec<Raw>>,
}

impl ResidueMatrix {
    fn identity(rr: &ResidueRing, n: usize) -> Self {
        let a = (0..n).map(|i| (0..n).map(|j| if i == j { rr.one() } else { rr.zero() }).collect()).collect();
        Self { rr: rr.clone(), rows: n, cols: n, a }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, c: &Raw) {
        for j in 0..self.cols {
            self.a[i][j] = self.rr.mul(&self.a[i][j], c);
        }
    }

    fn scale_col(&mut self, j: usize, c: &Raw) {
        for i in 0..self.rows {
            self.a[i][j] = self.rr.mul(&self.a[i][j], c);
        }
    }

    /// row_i -= q * row_s
    fn row_axpy(&mut self, i: usize, s: usize, q: &Raw) {
        for j in 0..self.cols {
            if self.a[s][j].is_zero() {
                continue;
            }
            let t = self.rr.mul(q, &self.a[s][j]);
            self.a[i][j] = self.rr.sub(&self.a[i][j], &t);
        }
    }

    /// col_j -= q * col_s
    fn col_axpy(&mut self, j: usize, s: usize, q: &Raw) {
        for i in 0..self.rows {
            if self.a[i][s].is_zero() {
                continue;
            }
            let t = self.rr.mul(q, &self.a[i][s]);
            self.a[i][j] = self.rr.sub(&self.a[i][j], &t);
        }
    }

    fn to_matrix(&self) -> MatrixF {
        MatrixF::from_fn(self.rr.ring, self.rows, self.cols, |i, j| self.rr.to_element(&self.a[i][j]))
    }
}

/// Working modulus for a normal form of an integral matrix whose rank must be
/// `expected`. Exact input: one more than the valuation of a nonzero maximal
/// minor. Inexact input: the smallest absolute precision of an entry.
fn working_modulus(m: &MatrixF, expected: usize) -> Result<(u32, bool), LinalgError> {
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if !m.get(i, j).is_integral() {
                return Err(LinalgError::NotIntegral { row: i, col: j });
            }
        }
    }
    if m.is_exact() {
        let raw: Vec<Vec<Raw>> = (0..m.rows())
            .map(|i| (0..m.cols()).map(|j| m.get(i, j).to_raw_integral().unwrap()).collect())
            .collect();
        let b = bareiss(raw, m.ring().p());
        if b.rank < expected {
            return Err(LinalgError::RankDeficient { rank: b.rank, expected });
        }
        let d = b.minor.valuation(m.ring().p()).expect("nonzero minor");
        return Ok((d + 1, true));
    }
    let k = m.entries().iter().filter_map(|x| x.absolute_precision()).min().expect("inexact entry present");
    Ok((k.max(1) as u32, false))
}

fn load_residues(m: &MatrixF, rr: &ResidueRing) -> Result<ResidueMatrix, LinalgError> {
    let mut a = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            row.push(m.get(i, j).to_residue(rr.k)?);
        }
        a.push(row);
    }
    Ok(ResidueMatrix { rr: rr.clone(), rows: m.rows(), cols: m.cols(), a })
}

/// Smith normal form over `O` of a matrix with integral entries and full rank
/// `min(rows, cols)`.
pub fn smith_over_dvr(m: &MatrixF) -> Result<SmithForm, LinalgError> {
    let r = m.rows().min(m.cols());
    let (k, exact) = working_modulus(m, r)?;
    let rr = ResidueRing::new(m.ring(), k);
    let mut a = load_residues(m, &rr)?;
    let mut u = ResidueMatrix::identity(&rr, m.rows());
    let mut v = ResidueMatrix::identity(&rr, m.cols());
    let mut exps = Vec::with_capacity(r);
    for s in 0..r {
        let mut best: Option<(u32, usize, usize)> = None;
        for i in s..a.rows {
            for j in s..a.cols {
                if let Some(e) = rr.valuation(&a.a[i][j]) {
                    if best.is_none_or(|(b, _, _)| e < b) {
                        best = Some((e, i, j));
                    }
                }
            }
        }
        let Some((_, pi, pj)) = best else {
            return Err(if exact {
                LinalgError::RankDeficient { rank: s, expected: r }
            } else {
                DvrError::PrecisionExhausted(format!("no pivot at step {s} modulo pi^{k}")).into()
            });
        };
        a.swap_rows(s, pi);
        u.swap_rows(s, pi);
        a.swap_cols(s, pj);
        v.swap_cols(s, pj);
        let (e, uinv) = rr.split_unit_inverse(&a.a[s][s]).unwrap();
        a.scale_row(s, &uinv);
        u.scale_row(s, &uinv);
        for i in s + 1..a.rows {
            if a.a[i][s].is_zero() {
                continue;
            }
            let q = rr.shift_down(&a.a[i][s], e);
            a.row_axpy(i, s, &q);
            u.row_axpy(i, s, &q);
        }
        for j in s + 1..a.cols {
            if a.a[s][j].is_zero() {
                continue;
            }
            let q = rr.shift_down(&a.a[s][j], e);
            a.col_axpy(j, s, &q);
            v.col_axpy(j, s, &q);
        }
        exps.push(e);
    }
    Ok(SmithForm { exponents: exps, left: u.to_matrix(), right: v.to_matrix(), modulus: k })
}

/// Column Hermite form of an `n x m` integral matrix (`m >= n`) whose columns
/// span a rank `n` module: the unique upper triangular `n x n` basis of the
/// same `O`-span with pivots `pi^{e_i}` and entries above pivot `i` reduced
/// modulo `pi^{e_i}` digit by digit.
pub fn hermite_over_dvr(m: &MatrixF) -> Result<MatrixF, LinalgError> {
    let n = m.rows();
    if m.cols() < n {
        return Err(LinalgError::RankDeficient { rank: m.cols(), expected: n });
    }
    let (k, exact) = working_modulus(m, n)?;
    let rr = ResidueRing::new(m.ring(), k);
    let mut a = load_residues(m, &rr)?;
    let mut exps = vec![0u32; n];
    for i in (0..n).rev() {
        // candidate columns: 0..=i and the surplus columns n..m
        let candidates: Vec<usize> = (0..=i).chain(n..a.cols).collect();
        let mut best: Option<(u32, usize)> = None;
        for &c in &candidates {
            if let Some(e) = rr.valuation(&a.a[i][c]) {
                if best.is_none_or(|(b, _)| e < b) {
                    best = Some((e, c));
                }
            }
        }
        let Some((_, c)) = best else {
            return Err(if exact {
                LinalgError::RankDeficient { rank: n - i - 1, expected: n }
            } else {
                DvrError::PrecisionExhausted(format!("no pivot in row {i} modulo pi^{k}")).into()
            });
        };
        a.swap_cols(i, c);
        let (e, uinv) = rr.split_unit_inverse(&a.a[i][i]).unwrap();
        a.scale_col(i, &uinv);
        for &c in &candidates {
            if c == i || a.a[i][c].is_zero() {
                continue;
            }
            let q = rr.shift_down(&a.a[i][c], e);
            a.col_axpy(c, i, &q);
        }
        exps[i] = e;
    }
    let total: u32 = exps.iter().sum();
    if total >= k {
        return Err(DvrError::PrecisionExhausted(format!("pivot valuations sum to {total} with modulus pi^{k}")).into());
    }
    for j in 1..n {
        for i in (0..j).rev() {
            let (r, q) = rr.split_at(&a.a[i][j], exps[i]);
            if q.is_zero() {
                continue;
            }
            a.col_axpy(j, i, &q);
            debug_assert_eq!(a.a[i][j], r);
        }
    }
    Ok(MatrixF::from_fn(m.ring(), n, n, |i, j| rr.to_element(&a.a[i][j])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r3() -> RingConfig {
        RingConfig::series(3)
    }

    fn el(s: &str) -> FieldElement {
        FieldElement::parse(r3(), s).unwrap()
    }

    #[test]
    fn det_small() {
        let m = MatrixF::parse(r3(), "1, t; t, t^3").unwrap();
        assert_eq!(m.det().unwrap(), el("-t^2 + t^3"));
        let d = MatrixF::diag_pi(r3(), &[1, 2]);
        assert_eq!(d.det().unwrap(), el("t^3"));
    }

    #[test]
    fn inverse_identity_and_triangular() {
        let i = MatrixF::identity(r3(), 3);
        assert_eq!(i.inverse().unwrap(), i);
        let m = MatrixF::parse(r3(), "t, 1 + t; 0, t^-1").unwrap();
        let inv = m.inverse().unwrap();
        assert!(inv.is_exact());
        assert_eq!(m.matmul(&inv).unwrap(), MatrixF::identity(r3(), 2));
    }

    #[test]
    fn smith_examples() {
        let m = MatrixF::parse(r3(), "1, t; t, t^3").unwrap();
        let s = smith_over_dvr(&m).unwrap();
        assert_eq!(s.exponents, vec![0, 2]);
        let d = MatrixF::diag_pi(r3(), &[0, 2]);
        assert_eq!(smith_over_dvr(&d).unwrap().exponents, vec![0, 2]);
    }

    #[test]
    fn hermite_examples() {
        let i = MatrixF::identity(r3(), 2);
        assert_eq!(hermite_over_dvr(&i).unwrap(), i);
        let m = MatrixF::parse(r3(), "t, 1").unwrap();
        assert_eq!(hermite_over_dvr(&m).unwrap(), MatrixF::identity(r3(), 1));
        let m = MatrixF::parse(r3(), "t, 1 + t; 0, t^2").unwrap();
        let h = hermite_over_dvr(&m).unwrap();
        assert_eq!(hermite_over_dvr(&m.hconcat(&m).unwrap()).unwrap(), h);
    }

    #[test]
    fn rank_deficient() {
        let m = MatrixF::parse(r3(), "1, t; 1, t").unwrap();
        assert!(matches!(smith_over_dvr(&m), Err(LinalgError::RankDeficient { .. })));
    }

    #[test]
    fn text_roundtrip() {
        let m = MatrixF::parse(r3(), "1, t; t^-1, 2 + t^3").unwrap();
        assert_eq!(MatrixF::parse(r3(), &m.to_string()).unwrap(), m);
    }
}
