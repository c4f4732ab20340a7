//! Worked examples with values computed by hand.

use tateindex::diagram::AdmissibleDiagram;
use tateindex::lattice::index_of_automorphism;
use tateindex::poset::{admissible_trees, b_poset, is_admissible_tree, star_tree, t_poset, Poset};
use tateindex::schain::{bar_segal_check, index_of_chain, LatticeChain};
use tateindex::simplicial::{coskeletal_check, delta_prime, nerve, segal_check, FiniteCategory};
use tateindex::{FieldElement, Lattice, MatrixF, RingConfig};

fn r() -> RingConfig {
    RingConfig::series(2)
}

#[test]
fn index_of_a_scalar_is_its_valuation() {
    // dim O / fO = v(f)
    for (f, v) in [("t", 1), ("t^3 + t^4", 3), ("1 + t", 0), ("t^-2", -2)] {
        let g = MatrixF::parse(r(), f).unwrap();
        assert_eq!(index_of_automorphism(&g).unwrap(), v, "{f}");
    }
    let g = MatrixF::parse(r(), "t, 0, 0; 0, t, 0; 0, 0, t").unwrap();
    assert_eq!(index_of_automorphism(&g).unwrap(), 3);
}

#[test]
fn gamma_of_two_has_two_admissible_trees() {
    let p = Poset::chain(2);
    assert_eq!(p.strict_pairs().len(), 3);
    let mut trees = admissible_trees(&p);
    trees.iter_mut().for_each(|t| t.sort_unstable());
    trees.sort();
    assert_eq!(trees, vec![vec![(0, 1), (1, 2)], vec![(0, 2), (1, 2)]]);
    assert!(!is_admissible_tree(&p, &[(0, 1), (0, 2)]));
}

#[test]
fn two_small_trees() {
    // left: two leaves into a middle vertex, which points to the top
    let left = Poset::from_relations(4, &[(0, 2), (1, 2), (2, 3)]).unwrap();
    assert!(is_admissible_tree(&left, &[(0, 2), (1, 2), (2, 3)]));
    // right: top 0, middle 1, leaves 2 and 3; 2 -> 0, 3 -> 1, 3 -> 0
    let right = Poset::from_relations(4, &[(2, 0), (3, 1), (3, 0)]).unwrap();
    assert!(!is_admissible_tree(&right, &[(2, 0), (3, 1), (3, 0)]));
}

#[test]
fn star_tree_is_admissible() {
    for n in 1..=5 {
        for p in tateindex::poset::all_posets_with_final(n) {
            assert!(is_admissible_tree(&p, &star_tree(&p).unwrap()), "{p}");
        }
    }
}

/// `O/t -> O/t^3` by `t^2` and `O/t^3 -> O/t^3` the identity, over `T[1]`.
fn t1_diagram() -> AdmissibleDiagram {
    let text = "poset: 3; 0<2, 1<2\nmodule 0: t\nmodule 1: t^3\nmodule 2: t^3\narrow 0 2: t^2\narrow 1 2: 1\n";
    AdmissibleDiagram::parse(r(), text).unwrap().0
}

#[test]
fn differences_and_cokernel_formulas() {
    let d = t1_diagram();
    let based = t_poset(1);
    // F(x_1) - F(x_0) = 3 - 1
    assert_eq!(d.pre_index_differences(&based).unwrap(), vec![2]);
    // F(m)/F(x_0) - F(m)/F(x_1) = 2 - 0
    assert_eq!(d.pre_index(&based).unwrap(), vec![2]);
    for tree in admissible_trees(based.poset()) {
        assert_eq!(d.idx_via_splitting(&based, &tree).unwrap(), vec![2]);
    }
}

/// Rank one lattices `t^{a_x} O` over `B[2]` above the base `t^4 O`.
fn b2_diagram() -> AdmissibleDiagram {
    let a = [3, 2, 1, 1, 0, 0];
    let lats: Vec<Lattice> = a.iter().map(|&e| Lattice::scaled_standard(r(), 1, e)).collect();
    AdmissibleDiagram::from_lattice_family(b_poset(2).poset().clone(), &lats, &Lattice::scaled_standard(r(), 1, 4))
        .unwrap()
}

#[test]
fn b2_faces_add_up() {
    let d = b2_diagram();
    let b1 = b_poset(1);
    let face = |f: [usize; 3]| d.restrict(b1.poset(), &f).unwrap().pre_index(&b1).unwrap()[0];
    let (f01, f12, f02) = (face([0, 1, 3]), face([1, 2, 4]), face([0, 2, 5]));
    assert_eq!((f01, f12, f02), (1, 1, 2));
    assert_eq!(d.pre_index(&b_poset(2)).unwrap(), vec![1, 1]);
    let c = |x, y| d.coker_length(x, y).unwrap() as i64;
    assert_eq!(c(0, 3) - c(1, 3) + c(1, 4) - c(2, 4), c(0, 5) - c(2, 5));
}

#[test]
fn s_construction_classes_are_successive_quotients() {
    let chain = ["t^2, 0; 0, t", "t, 0; 0, t", "1, 0; 0, 1"].map(|s| Lattice::parse(r(), s).unwrap());
    let s = index_of_chain(&LatticeChain::new(chain.to_vec()).unwrap()).unwrap();
    assert_eq!(s.class_vector().unwrap(), vec![1, 2]);
}

#[test]
fn bar_construction_of_s3_is_segal() {
    let perms = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let ms: Vec<MatrixF> = perms
        .iter()
        .map(|p| {
            MatrixF::from_fn(r(), 3, 3, |i, j| if p[j] == i { FieldElement::one(r()) } else { FieldElement::zero(r()) })
        })
        .collect();
    for m in 2..=3 {
        assert!(bar_segal_check(&ms, m).unwrap());
    }
}

#[test]
fn nerve_of_a_group_has_g_to_the_n_simplices() {
    let x = nerve(&FiniteCategory::cyclic(3), 3).unwrap();
    assert_eq!(x.sizes(), &[1, 3, 9, 27]);
    let rep = segal_check(&x, 3);
    assert!(rep.reduced && rep.is_segal());
}

#[test]
fn zero_coskeletal_levels_are_powers() {
    for n in 0..3 {
        let d = delta_prime(n, 3).unwrap();
        let want: Vec<usize> = (0..=3).map(|m| (n + 1).pow(m + 1)).collect();
        assert_eq!(d.sizes(), want.as_slice());
        assert!(coskeletal_check(&d, 0));
    }
}
