//! Library results against independent computations done here: Leibniz
//! determinants, gcd-of-minors elementary divisors, brute-force tree
//! enumeration and direct coset counting.

#![allow(clippy::needless_range_loop)]

use itertools::Itertools;
use rand::Rng;

use tateindex::gen::{self, case_rng};
use tateindex::linalg::smith_over_dvr;
use tateindex::poset::{admissible_trees, Poset};
use tateindex::{FieldElement, Lattice, MatrixF, RingConfig, Valuation};

fn series(p: u32) -> RingConfig {
    RingConfig::series(p)
}

fn sign(perm: &[usize]) -> bool {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

fn leibniz(m: &MatrixF) -> FieldElement {
    let r = m.ring();
    let n = m.rows();
    let mut acc = FieldElement::zero(r);
    for perm in (0..n).permutations(n) {
        let mut t = FieldElement::one(r);
        for (i, &j) in perm.iter().enumerate() {
            t = t.mul(m.get(i, j));
        }
        acc = if sign(&perm) { acc.add(&t) } else { acc.sub(&t) }.unwrap();
    }
    acc
}

fn minor_valuations(m: &MatrixF, k: usize) -> Valuation {
    let mut best = Valuation::Infinity;
    for rows in (0..m.rows()).combinations(k) {
        for cols in (0..m.cols()).combinations(k) {
            best = best.min(leibniz(&m.submatrix(&rows, &cols)).valuation());
        }
    }
    best
}

#[test]
fn bareiss_matches_leibniz() {
    for p in [2, 3, 5] {
        let r = series(p);
        for case in 0..60 {
            let mut rng = case_rng(11, case);
            let n = rng.gen_range(1..=4);
            let m = MatrixF::from_fn(r, n, n, |_, _| gen::random_laurent(&mut rng, r, 3, 3));
            assert_eq!(m.det().unwrap(), leibniz(&m), "p = {p}, case {case}: {m}");
        }
    }
}

#[test]
fn padic_det_matches_leibniz() {
    let r = RingConfig::padic(3);
    for case in 0..40 {
        let mut rng = case_rng(12, case);
        let n = rng.gen_range(1..=3);
        let m = MatrixF::from_fn(r, n, n, |_, _| gen::random_laurent(&mut rng, r, 2, 3));
        assert_eq!(m.det().unwrap(), leibniz(&m), "case {case}: {m}");
    }
}

#[test]
fn smith_exponents_are_minor_quotients() {
    for p in [2, 3] {
        let r = series(p);
        for case in 0..80 {
            let mut rng = case_rng(13, case);
            let rows = rng.gen_range(1..=4);
            let cols = rng.gen_range(1..=4);
            let m = gen::random_full_rank_integral(&mut rng, r, rows, cols, 3);
            let mut got = smith_over_dvr(&m).unwrap().exponents;
            got.sort_unstable();
            let mut prev = 0;
            let mut want = Vec::new();
            for k in 1..=rows.min(cols) {
                let d = minor_valuations(&m, k).finite().unwrap();
                want.push((d - prev) as u32);
                prev = d;
            }
            assert_eq!(got, want, "p = {p}, case {case}: {m}");
        }
    }
}

/// `|O^n / L|` for `pi^e O^n ⊆ L ⊆ O^n` by counting residues modulo `pi^e`
/// that lie in `L`, over `F_2[[t]]`: a vector is in `L` iff `B^{-1} v` is
/// integral.
fn count_index(l: &Lattice, e: i64) -> u64 {
    let r = l.ring();
    let n = l.rank();
    let binv = l.basis_inverse().unwrap();
    let digits = (n as i64 * e) as u32;
    let mut inside = 0u64;
    for bits in 0..(1u64 << digits) {
        let v = MatrixF::from_fn(r, n, 1, |i, _| {
            let terms: Vec<(i64, i64)> =
                (0..e).filter(|&d| bits >> (i as i64 * e + d) & 1 == 1).map(|d| (1, d)).collect();
            FieldElement::from_terms(r, &terms)
        });
        if binv.matmul(&v).unwrap().is_integral() {
            inside += 1;
        }
    }
    (1u64 << digits) / inside
}

#[test]
fn quotient_length_by_counting() {
    let r = series(2);
    let o = Lattice::standard(r, 2);
    let mut counted = 0;
    for case in 0..25 {
        let mut rng = case_rng(14, case);
        let l = gen::random_sublattice(&mut rng, &o, 2);
        let e = 5;
        if !Lattice::scaled_standard(r, 2, e).leq(&l).unwrap() {
            continue;
        }
        let count = count_index(&l, e);
        let len = l.quotient(&o).unwrap().length();
        assert_eq!(count, 1 << len, "case {case}: {l}");
        assert_eq!(l.rel_index(&o).unwrap(), len as i64);
        counted += 1;
    }
    assert!(counted >= 20);
}

fn reach(n: usize, tree: &[(usize, usize)]) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; n]; n];
    for (i, row) in r.iter_mut().enumerate() {
        row[i] = true;
    }
    for _ in 0..n {
        for &(a, b) in tree {
            for x in 0..n {
                if r[x][a] {
                    r[x][b] = true;
                }
            }
        }
    }
    r
}

fn connected(n: usize, tree: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        if std::mem::replace(&mut seen[v], true) {
            continue;
        }
        for &(a, b) in tree {
            if a == v {
                stack.push(b);
            }
            if b == v {
                stack.push(a);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

#[test]
fn admissible_trees_by_brute_force() {
    for n in 1..=5 {
        for p in tateindex::poset::all_posets_with_final(n) {
            let edges: Vec<(usize, usize)> =
                (0..n).cartesian_product(0..n).filter(|&(a, b)| p.lt(a, b)).collect();
            let mut want: Vec<Vec<(usize, usize)>> = edges
                .iter()
                .copied()
                .combinations(n - 1)
                .filter(|t| connected(n, t))
                .filter(|t| {
                    let r = reach(n, t);
                    (0..n).all(|x| (0..n).all(|y| (0..n).any(|z| r[x][z] && r[y][z])))
                })
                .collect();
            let mut got = admissible_trees(&p);
            want.iter_mut().for_each(|t| t.sort_unstable());
            got.iter_mut().for_each(|t| t.sort_unstable());
            want.sort();
            got.sort();
            assert_eq!(got, want, "{p}");
        }
    }
}

#[test]
fn admissible_tree_counts_on_chains() {
    // every admissible tree of a chain is obtained by sending each element
    // to some strictly larger one
    for n in 1..=6usize {
        let want: usize = (1..n).product();
        assert_eq!(admissible_trees(&Poset::chain(n - 1)).len(), want.max(1), "chain of {n}");
    }
}
