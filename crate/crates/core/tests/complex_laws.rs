use proptest::prelude::*;
use ultraposet::complex::{
    atom_structure, check_complete_operators, check_quasi_complete_operators, complex_algebra,
    givant_check,
};
use ultraposet::gen::gen_relational_structure;
use ultraposet::order::{is_completely_additive, tuples_of};
use ultraposet::product::{iso_search, make_filter, Family, IndexSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn complex_algebra_operators_are_normal_and_additive(seed in any::<u64>(), n in 1usize..=3) {
        let s = gen_relational_structure(seed, n, &[("R", 2), ("T", 3)]).unwrap();
        let cm = complex_algebra(&s).unwrap();
        prop_assert!(check_complete_operators(&cm));
        prop_assert!(check_quasi_complete_operators(&cm));
        for op in cm.operators().values() {
            prop_assert_eq!(op.apply(&vec![0; op.arity()]), 0);
            if cm.len() <= 8 && op.arity() == 1 {
                prop_assert!(is_completely_additive(cm.lattice(), op).unwrap().holds());
            }
        }
    }

    #[test]
    fn images_of_unions_are_unions_of_images(seed in any::<u64>(), n in 1usize..=4) {
        let s = gen_relational_structure(seed, n, &[("R", 2)]).unwrap();
        let cm = complex_algebra(&s).unwrap();
        let r = cm.operator("R").unwrap();
        for x in 0..cm.len() {
            for y in 0..cm.len() {
                prop_assert_eq!(r.apply(&[x | y]), r.apply(&[x]) | r.apply(&[y]));
            }
        }
    }

    #[test]
    fn atom_structure_inverts_complex_algebra(seed in any::<u64>(), n in 1usize..=4) {
        let s = gen_relational_structure(seed, n, &[("R", 2), ("T", 3)]).unwrap();
        let back = atom_structure(&complex_algebra(&s).unwrap()).unwrap();
        for (name, rel) in s.relations() {
            prop_assert_eq!(back.relation(name).unwrap().tuples(), rel.tuples());
        }
        prop_assert!(iso_search(&back, &s).unwrap().is_some());
    }

    #[test]
    fn canonical_map_is_an_isomorphism(seed in any::<u64>(), k in 1usize..=3) {
        let members = (0..k)
            .map(|i| gen_relational_structure(seed.wrapping_add(i as u64), 1 + (seed as usize + i) % 3, &[("R", 2)]).unwrap())
            .collect();
        let fam = Family::new(members).unwrap();
        for j in 0..k {
            let fs = make_filter(IndexSet::new(k).unwrap(), &[j]).unwrap();
            let rep = givant_check(&fam, &fs).unwrap();
            prop_assert!(rep.is_iso);
            prop_assert!(check_complete_operators(&rep.rhs));
        }
    }
}

#[test]
fn binary_relation_tables_cover_every_argument_pair() {
    let s = gen_relational_structure(3, 3, &[("T", 3)]).unwrap();
    let cm = complex_algebra(&s).unwrap();
    let t = cm.operator("T").unwrap();
    for args in tuples_of(&[8, 8]) {
        let expected = s
            .relation("T")
            .unwrap()
            .tuples()
            .iter()
            .filter(|u| args[0] >> u[0] & 1 == 1 && args[1] >> u[1] & 1 == 1)
            .fold(0, |m, u| m | 1 << u[2]);
        assert_eq!(t.apply(&args), expected);
    }
}
