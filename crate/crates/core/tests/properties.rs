use proptest::prelude::*;

use tateindex::diagram::AdmissibleDiagram;
use tateindex::gen::{self, case_rng};
use tateindex::lattice::index_of_automorphism;
use tateindex::linalg::smith_over_dvr;
use tateindex::poset::{admissible_trees, BasedPoset, Poset};
use tateindex::schain::{alpha, cocycle_check, GroupTuple};
use tateindex::{Lattice, MatrixF, RingConfig, RingKind, TorsionModule};

fn ring_strategy() -> impl Strategy<Value = RingConfig> {
    prop_oneof![
        Just(RingConfig::series(2)),
        Just(RingConfig::series(3)),
        Just(RingConfig::series(5)),
        Just(RingConfig::padic(2)),
        Just(RingConfig::padic(3)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sup_inf_lattice_laws(r in ring_strategy(), seed: u64, n in 1usize..=3) {
        let mut rng = case_rng(seed, 0);
        let a = gen::random_lattice(&mut rng, r, n, 3);
        let b = gen::random_lattice(&mut rng, r, n, 3);
        let c = gen::random_lattice(&mut rng, r, n, 3);
        prop_assert_eq!(a.sup(&b).unwrap(), b.sup(&a).unwrap());
        prop_assert_eq!(a.inf(&b).unwrap(), b.inf(&a).unwrap());
        prop_assert_eq!(a.sup(&a.inf(&b).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.inf(&a.sup(&b).unwrap()).unwrap(), a.clone());
        prop_assert_eq!(a.sup(&b).unwrap().sup(&c).unwrap(), a.sup(&b.sup(&c).unwrap()).unwrap());
        prop_assert_eq!(a.dual().unwrap().dual().unwrap(), a.clone());
    }

    #[test]
    fn relative_index_is_a_cocycle(r in ring_strategy(), seed: u64, n in 1usize..=3) {
        let mut rng = case_rng(seed, 1);
        let a = gen::random_lattice(&mut rng, r, n, 3);
        let b = gen::random_lattice(&mut rng, r, n, 3);
        let c = gen::random_lattice(&mut rng, r, n, 3);
        let ab = a.rel_index(&b).unwrap();
        prop_assert_eq!(ab, -b.rel_index(&a).unwrap());
        prop_assert_eq!(ab + b.rel_index(&c).unwrap(), a.rel_index(&c).unwrap());
        prop_assert_eq!(ab, a.rel_index_via_quotients(&b).unwrap());
    }

    #[test]
    fn index_is_a_homomorphism(r in ring_strategy(), seed: u64, n in 1usize..=3) {
        let mut rng = case_rng(seed, 2);
        let g = gen::random_gl_general(&mut rng, r, n, 3);
        let h = gen::random_gl_general(&mut rng, r, n, 3);
        let gh = g.matmul(&h).unwrap();
        prop_assert_eq!(
            index_of_automorphism(&gh).unwrap(),
            index_of_automorphism(&g).unwrap() + index_of_automorphism(&h).unwrap()
        );
        let o = Lattice::standard(r, n);
        prop_assert_eq!(o.rel_index(&o.act(&g).unwrap()).unwrap(), -index_of_automorphism(&g).unwrap());
    }

    #[test]
    fn smith_exponents_are_invariant(r in ring_strategy(), seed: u64, rows in 1usize..=3, cols in 1usize..=3) {
        let mut rng = case_rng(seed, 3);
        let m = gen::random_full_rank_integral(&mut rng, r, rows, cols, 3);
        let u = gen::random_gl_o(&mut rng, r, rows, 2);
        let v = gen::random_gl_o(&mut rng, r, cols, 2);
        let mut a = smith_over_dvr(&m).unwrap().exponents;
        let mut b = smith_over_dvr(&u.matmul(&m).unwrap().matmul(&v).unwrap()).unwrap().exponents;
        a.sort_unstable();
        b.sort_unstable();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn alpha_is_a_cocycle(r in ring_strategy(), seed: u64, n in 1usize..=3) {
        let mut rng = case_rng(seed, 4);
        let gs: Vec<MatrixF> = (0..3).map(|_| gen::random_gl(&mut rng, r, n, 2)).collect();
        let g = GroupTuple::new(gs).unwrap();
        prop_assert!(cocycle_check(&g).unwrap());
        prop_assert_eq!(alpha(&g).unwrap().dim(), 3);
    }

    #[test]
    fn pre_index_ignores_the_tree(seed: u64, size in 3usize..=6) {
        let mut rng = case_rng(seed, 5);
        let r = RingConfig::series(2);
        let based = gen::random_based_poset(&mut rng, size, 1);
        let d = gen::random_torsion_diagram(&mut rng, r, based.poset(), 2, 3).unwrap();
        let pre = d.pre_index(&based).unwrap();
        prop_assert_eq!(&pre, &d.pre_index_differences(&based).unwrap());
        for t in admissible_trees(based.poset()) {
            if let Ok(v) = d.idx_via_splitting(&based, &t) {
                prop_assert_eq!(&v, &pre);
            }
        }
    }

    #[test]
    fn generated_posets_have_final_elements(seed: u64, size in 2usize..=8, k in 0usize..=2) {
        prop_assume!(size >= k + 2);
        let b = gen::random_based_poset(&mut case_rng(seed, 6), size, k);
        prop_assert_eq!(b.poset().final_element(), Some(size - 1));
        prop_assert_eq!(b.k(), k);
    }

    #[test]
    fn generated_chains_are_nested(r in ring_strategy(), seed: u64, len in 0usize..=4) {
        let c = gen::random_chain(&mut case_rng(seed, 7), r, 2, len, 3);
        for w in c.windows(2) {
            prop_assert!(w[0].leq(&w[1]).unwrap());
        }
    }

    #[test]
    fn text_formats_round_trip(r in ring_strategy(), seed: u64, size in 3usize..=6) {
        let mut rng = case_rng(seed, 8);
        let g = gen::random_gl(&mut rng, r, 2, 3);
        prop_assert_eq!(MatrixF::parse(r, &g.to_string()).unwrap(), g);
        let l = gen::random_lattice(&mut rng, r, 2, 3);
        prop_assert_eq!(Lattice::parse(r, &l.to_string()).unwrap(), l);
        let b = gen::random_based_poset(&mut rng, size, 1);
        prop_assert_eq!(BasedPoset::parse(&b.to_string()).unwrap(), b.clone());
        prop_assert_eq!(Poset::parse(&b.poset().to_string()).unwrap(), b.poset().clone());
        let d = gen::random_torsion_diagram(&mut rng, r, b.poset(), 2, 3).unwrap();
        let (back, _) = AdmissibleDiagram::parse(r, &d.to_string()).unwrap();
        prop_assert!(back.same_invariants(&d).unwrap());
        prop_assert_eq!(back.pre_index(&b).unwrap(), d.pre_index(&b).unwrap());
    }
}

#[test]
fn torsion_text_round_trip() {
    let m = TorsionModule::from_exponents(vec![3, 1, 2]);
    assert_eq!(TorsionModule::parse(&m.to_string()).unwrap(), m);
    assert_eq!(m.length(), 6);
}

#[test]
fn ring_kinds_print() {
    assert_eq!(RingKind::Series.to_string(), "series");
    assert_eq!(RingKind::Padic.to_string(), "padic");
}
