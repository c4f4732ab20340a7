//! Seeded random instances. Every case of a suite draws from its own stream
//! of a ChaCha8 generator, so a failing case replays from `(seed, case)`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::diagram::{AdmissibleDiagram, Contraction, DiagramError};
use crate::dvr::{FieldElement, RingConfig, RingKind};
use crate::lattice::Lattice;
use crate::linalg::MatrixF;
use crate::poset::{BasedPoset, Poset};

pub const RNG_ALGORITHM: &str = "ChaCha8";

pub fn case_rng(seed: u64, case: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(case);
    rng
}

fn random_unit_coeff<R: Rng>(rng: &mut R, ring: RingConfig) -> i64 {
    match ring.kind() {
        RingKind::Series => rng.gen_range(1..ring.p() as i64),
        RingKind::Padic => {
            if rng.gen_bool(0.5) {
                1
            } else {
                -1
            }
        }
    }
}

/// Laurent polynomial with up to `terms` terms and exponents in `[-bound, bound]`.
pub fn random_laurent<R: Rng>(rng: &mut R, ring: RingConfig, bound: i64, terms: usize) -> FieldElement {
    let k = rng.gen_range(0..=terms);
    let t: Vec<(i64, i64)> =
        (0..k).map(|_| (rng.gen_range(0..ring.p() as i64), rng.gen_range(-bound..=bound))).collect();
    FieldElement::from_terms(ring, &t)
}

/// Polynomial with exponents in `[0, max_exp]`, possibly zero.
pub fn random_integral<R: Rng>(rng: &mut R, ring: RingConfig, max_exp: i64, terms: usize) -> FieldElement {
    let k = rng.gen_range(0..=terms);
    let t: Vec<(i64, i64)> = (0..k).map(|_| (rng.gen_range(0..ring.p() as i64), rng.gen_range(0..=max_exp))).collect();
    FieldElement::from_terms(ring, &t)
}

/// A unit of `O` that is usually not a monomial.
pub fn random_unit<R: Rng>(rng: &mut R, ring: RingConfig, max_exp: i64) -> FieldElement {
    let c = FieldElement::from_int(ring, rng.gen_range(1..ring.p() as i64));
    let tail = random_integral(rng, ring, max_exp, 2).shift(1);
    c.add(&tail).expect("exact addition")
}

/// Element of `GL_n(F)` with monomial determinant: a monomial diagonal matrix
/// times elementary matrices with Laurent entries. Its inverse is exact.
pub fn random_gl<R: Rng>(rng: &mut R, ring: RingConfig, n: usize, bound: i64) -> MatrixF {
    let diag: Vec<FieldElement> = (0..n)
        .map(|_| FieldElement::monomial(ring, random_unit_coeff(rng, ring), rng.gen_range(-bound..=bound)))
        .collect();
    let mut g = MatrixF::diagonal(ring, &diag);
    if n > 1 {
        for _ in 0..n + 1 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let mut e = MatrixF::identity(ring, n);
            e.set(i, j, random_laurent(rng, ring, bound, 2));
            g = g.matmul(&e).expect("exact product");
        }
    }
    g
}

/// Element of `GL_n(F)` whose determinant is a monomial times a random unit.
pub fn random_gl_general<R: Rng>(rng: &mut R, ring: RingConfig, n: usize, bound: i64) -> MatrixF {
    let g = random_gl(rng, ring, n, bound);
    let mut u = MatrixF::identity(ring, n);
    let i = rng.gen_range(0..n);
    u.set(i, i, random_unit(rng, ring, bound.max(1)));
    g.matmul(&u).expect("exact product")
}

/// Element of `GL_n(O)`: elementary matrices with integral entries and unit
/// monomial diagonal.
pub fn random_gl_o<R: Rng>(rng: &mut R, ring: RingConfig, n: usize, max_exp: i64) -> MatrixF {
    let diag: Vec<FieldElement> =
        (0..n).map(|_| FieldElement::monomial(ring, random_unit_coeff(rng, ring), 0)).collect();
    let mut g = MatrixF::diagonal(ring, &diag);
    if n > 1 {
        for _ in 0..n + 1 {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let mut e = MatrixF::identity(ring, n);
            e.set(i, j, random_integral(rng, ring, max_exp, 2));
            g = g.matmul(&e).expect("exact product");
        }
    }
    g
}

pub fn random_integral_matrix<R: Rng>(rng: &mut R, ring: RingConfig, rows: usize, cols: usize, max_exp: i64) -> MatrixF {
    MatrixF::from_fn(ring, rows, cols, |_, _| random_integral(rng, ring, max_exp, 2))
}

/// Integral matrix of full rank `min(rows, cols)`.
pub fn random_full_rank_integral<R: Rng>(rng: &mut R, ring: RingConfig, rows: usize, cols: usize, max_exp: i64) -> MatrixF {
    loop {
        let m = random_integral_matrix(rng, ring, rows, cols, max_exp);
        if m.rank() == Some(rows.min(cols)) {
            return m;
        }
    }
}

pub fn random_lattice<R: Rng>(rng: &mut R, ring: RingConfig, n: usize, bound: i64) -> Lattice {
    Lattice::standard(ring, n).act(&random_gl(rng, ring, n, bound)).expect("invertible")
}

/// `L E` with `E` integral of determinant valuation in `[0, n * bound]`.
pub fn random_sublattice<R: Rng>(rng: &mut R, l: &Lattice, bound: i64) -> Lattice {
    let ring = l.ring();
    let n = l.rank();
    let exps: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=bound)).collect();
    let e = random_gl_o(rng, ring, n, bound).matmul(&MatrixF::diag_pi(ring, &exps)).unwrap();
    Lattice::from_basis(&l.basis().matmul(&e).unwrap()).expect("invertible")
}

/// `L E` with `E^{-1}` integral.
pub fn random_superlattice<R: Rng>(rng: &mut R, l: &Lattice, bound: i64) -> Lattice {
    let ring = l.ring();
    let n = l.rank();
    let exps: Vec<i64> = (0..n).map(|_| -rng.gen_range(0..=bound)).collect();
    let e = random_gl_o(rng, ring, n, bound).matmul(&MatrixF::diag_pi(ring, &exps)).unwrap();
    Lattice::from_basis(&l.basis().matmul(&e).unwrap()).expect("invertible")
}

/// `L_0 ⊆ L_1 ⊆ ... ⊆ L_len`.
pub fn random_chain<R: Rng>(rng: &mut R, ring: RingConfig, n: usize, len: usize, bound: i64) -> Vec<Lattice> {
    let mut out = vec![random_lattice(rng, ring, n, bound)];
    for _ in 0..len {
        let next = random_superlattice(rng, out.last().unwrap(), bound.min(2));
        out.push(next);
    }
    out
}

/// Poset on `size` elements with final element `size - 1` whose first `k + 1`
/// elements are minimal; they are the basepoints.
pub fn random_based_poset<R: Rng>(rng: &mut R, size: usize, k: usize) -> BasedPoset {
    assert!(size >= k + 2, "need room for basepoints and a final element");
    let top = size - 1;
    let mut rel = Vec::new();
    for a in 0..top {
        for b in (k + 1).max(a + 1)..top {
            if rng.gen_bool(0.4) {
                rel.push((a, b));
            }
        }
        rel.push((a, top));
    }
    BasedPoset::new(Poset::from_relations(size, &rel).unwrap(), (0..=k).collect()).unwrap()
}

/// Monotone family `x ↦ L_x` with `pi^depth O^rank ⊆ L_x ⊆ O^rank`, and the
/// base `pi^depth O^rank`. Each element contributes at most one random
/// generator; `L_x` is spanned by the base and the generators below `x`.
pub fn random_lattice_family<R: Rng>(rng: &mut R, ring: RingConfig, poset: &Poset, rank: usize, depth: i64) -> (Vec<Lattice>, Lattice) {
    let base = Lattice::scaled_standard(ring, rank, depth);
    let gens: Vec<Option<MatrixF>> = (0..poset.len())
        .map(|_| {
            rng.gen_bool(0.8)
                .then(|| MatrixF::from_fn(ring, rank, 1, |_, _| random_integral(rng, ring, depth - 1, 2)))
        })
        .collect();
    let lattices = (0..poset.len())
        .map(|x| {
            let mut m = base.basis();
            for z in 0..poset.len() {
                if poset.le(z, x) {
                    if let Some(v) = &gens[z] {
                        m = m.hconcat(v).unwrap();
                    }
                }
            }
            Lattice::from_generators(&m).expect("full rank")
        })
        .collect();
    (lattices, base)
}

pub fn random_torsion_diagram<R: Rng>(rng: &mut R, ring: RingConfig, poset: &Poset, rank: usize, depth: i64) -> Result<AdmissibleDiagram, DiagramError> {
    let (lats, base) = random_lattice_family(rng, ring, poset, rank, depth);
    AdmissibleDiagram::from_lattice_family(poset.clone(), &lats, &base)
}

/// `S`: basepoints `x_0 < ... < x_n` (ids `0..=n`) and `extra` further
/// elements forming a random poset whose last element is final and lies above
/// `x_n`; each further element sits above some `x_i` or above none. `S'`
/// fuses the basepoints into the point `0`.
pub fn random_contraction<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Contraction {
    assert!(extra >= 1);
    let size = n + 1 + extra;
    let top = size - 1;
    let mut rel: Vec<(usize, usize)> = (0..n).map(|i| (i, i + 1)).collect();
    for a in n + 1..top {
        for b in a + 1..top {
            if rng.gen_bool(0.4) {
                rel.push((a, b));
            }
        }
        rel.push((a, top));
        if rng.gen_bool(0.6) {
            rel.push((rng.gen_range(0..=n), a));
        }
    }
    rel.push((n, top));
    let s = Poset::from_relations(size, &rel).unwrap();
    let source = BasedPoset::new_relaxed(s.clone(), (0..=n).collect()).unwrap();
    let phi: Vec<usize> = (0..size).map(|z| z.saturating_sub(n)).collect();
    let trel: Vec<(usize, usize)> = s.strict_pairs().into_iter().map(|(a, b)| (phi[a], phi[b])).filter(|(a, b)| a != b).collect();
    let t = Poset::from_relations(extra + 1, &trel).unwrap();
    let target = BasedPoset::new_relaxed(t, vec![0; n + 1]).unwrap();
    Contraction { source, target, phi }
}

/// A random permutation of `0..n`.
pub fn random_permutation<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (0..n).collect();
    v.shuffle(rng);
    v
}
