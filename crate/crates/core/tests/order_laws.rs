use proptest::prelude::*;
use ultraposet::gen::{gen_additive_op, gen_downset_lattice, gen_monotone_op, gen_poset, gen_quasi_op, rng};
use ultraposet::order::{
    check_lemma_equivalence, check_lemma_equivalence_for, dm_completion, is_completely_additive,
    is_monotone, is_quasi_complete, lattice_sup_preservation, Direction, Preservation, Sup,
};
use ultraposet::{ElemId, OperationTable, Poset};

use rand::RngExt;

fn random_table(seed: u64, arity: usize, size: usize) -> OperationTable {
    let mut r = rng(seed);
    OperationTable::from_fn(arity, size, |_| r.random_range(0..size)).unwrap()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<ElemId>> {
    (0u32..1 << n).map(move |m| (0..n).filter(|&i| m >> i & 1 == 1).collect())
}

/// Least upper bound by definition, straight from `leq`.
fn brute_sup(p: &Poset, xs: &[ElemId]) -> Option<ElemId> {
    let ubs: Vec<ElemId> = p.elements().filter(|&u| xs.iter().all(|&x| p.leq(x, u))).collect();
    ubs.iter().copied().find(|&u| ubs.iter().all(|&v| p.leq(u, v)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sups_match_the_definition(seed in any::<u64>(), n in 1usize..=6) {
        let p = gen_poset(seed, n).unwrap();
        for xs in subsets(n) {
            prop_assert_eq!(p.sup(&xs, Direction::Up).unwrap().value(), brute_sup(&p, &xs));
        }
    }

    /// In a product, a sup exists exactly when every coordinate sup exists,
    /// and then it is computed coordinatewise.
    #[test]
    fn product_sups_are_coordinatewise(a in any::<u64>(), b in any::<u64>(), n in 1usize..=3, m in 1usize..=3) {
        let (p, q) = (gen_poset(a, n).unwrap(), gen_poset(b, m).unwrap());
        let prod = Poset::product(&[&p, &q]);
        for xs in subsets(n * m) {
            let left: Vec<ElemId> = xs.iter().map(|&x| x / m).collect();
            let right: Vec<ElemId> = xs.iter().map(|&x| x % m).collect();
            let expected = match (p.sup(&left, Direction::Up).unwrap(), q.sup(&right, Direction::Up).unwrap()) {
                (Sup::Exists(s), Sup::Exists(t)) => Some(s * m + t),
                _ => None,
            };
            // With an empty set both coordinates see the empty set.
            prop_assert_eq!(prod.sup(&xs, Direction::Up).unwrap().value(), expected);
        }
    }

    #[test]
    fn joint_verdict_matches_unary_instances(seed in any::<u64>(), n in 1usize..=5, arity in 2usize..=3) {
        let p = gen_poset(seed, n).unwrap();
        let f = random_table(seed ^ 0x9e37, arity, n);
        prop_assert!(check_lemma_equivalence(&p, &f).unwrap().agree);
        prop_assert!(check_lemma_equivalence_for(&p, &f, Preservation::Quasi).unwrap().agree);
        let g = gen_monotone_op(seed, &p, arity).unwrap();
        prop_assert!(check_lemma_equivalence(&p, &g).unwrap().agree);
    }

    #[test]
    fn additive_implies_quasi_implies_monotone(seed in any::<u64>(), n in 1usize..=5) {
        let p = gen_poset(seed, n).unwrap();
        let f = gen_monotone_op(seed, &p, 1).unwrap();
        let complete = is_completely_additive(&p, &f).unwrap().holds();
        let quasi = is_quasi_complete(&p, &f).unwrap().holds();
        prop_assert!(!complete || quasi);
        let g = random_table(seed, 1, n);
        if is_quasi_complete(&p, &g).unwrap().holds() {
            prop_assert!(is_monotone(&p, &g).unwrap().holds());
        }
    }

    #[test]
    fn both_routes_agree_on_lattices(seed in any::<u64>(), base in 1usize..=3, arity in 1usize..=2) {
        let l = gen_downset_lattice(seed, base).unwrap();
        prop_assume!(l.len() <= if arity == 1 { 12 } else { 8 });
        for f in [
            gen_additive_op(seed, &l, arity).unwrap(),
            gen_quasi_op(seed, &l, arity).unwrap(),
            gen_monotone_op(seed, &l, arity).unwrap(),
            random_table(seed, arity, l.len()),
        ] {
            for mode in [Preservation::Complete, Preservation::Quasi] {
                let exhaustive = ultraposet::order::check_preservation(
                    &l, &f, &ultraposet::order::SupTable::new(&l).unwrap(), mode,
                ).unwrap().holds();
                prop_assert_eq!(lattice_sup_preservation(&l, &f, mode).unwrap().holds(), exhaustive);
            }
        }
    }

    #[test]
    fn completion_is_a_complete_lattice_with_dense_embedding(seed in any::<u64>(), n in 1usize..=8) {
        let p = gen_poset(seed, n).unwrap();
        let c = dm_completion(&p).unwrap();
        let l = &c.lattice;
        prop_assert!(l.is_complete_lattice());
        for a in p.elements() {
            for b in p.elements() {
                prop_assert_eq!(p.leq(a, b), l.leq(c.embedding[a], c.embedding[b]));
            }
        }
        // Every element is a join of embedded elements and a meet of them.
        for x in l.elements() {
            let below: Vec<ElemId> = c.embedding.iter().copied().filter(|&e| l.leq(e, x)).collect();
            let above: Vec<ElemId> = c.embedding.iter().copied().filter(|&e| l.leq(x, e)).collect();
            prop_assert_eq!(l.sup(&below, Direction::Up).unwrap().value(), Some(x));
            prop_assert_eq!(l.sup(&above, Direction::Down).unwrap().value(), Some(x));
        }
        if p.is_complete_lattice() {
            prop_assert!(c.is_identity());
        }
    }
}

#[test]
fn lattice_completion_adds_nothing() {
    for p in ultraposet::fixtures::lattices() {
        let c = dm_completion(&p).unwrap();
        assert_eq!(c.lattice.len(), p.len());
        assert!(c.is_identity());
    }
}
