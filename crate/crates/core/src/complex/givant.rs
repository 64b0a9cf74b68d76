use std::collections::BTreeMap;

use crate::order::{dm_completion, tuples_of, ElemId, OperationTable, Poset};
use crate::product::{
    is_isomorphism, reduced_product, Family, FilterSpec, ProductError, ReducedProduct,
};
use crate::structure::Structure;

use super::{complex_algebra, Bao, ComplexError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GivantReport {
    /// Complex algebra of the ultraproduct of the structures.
    pub lhs: Bao,
    /// Completion of the ultraproduct of the complex algebras.
    pub rhs: Bao,
    /// For each element of `rhs`, its image in `lhs`.
    pub canonical_map: Vec<ElemId>,
    pub is_iso: bool,
}

/// Compares the two sides for a family of relational structures modulo an
/// ultrafilter, through the canonical map
/// `X/F ↦ { u/F : {i : u_i ∈ X_i} ∈ F }`.
pub fn givant_check(fam: &Family, fs: &FilterSpec) -> Result<GivantReport, ComplexError> {
    if !fs.is_ultra() {
        return Err(ProductError::NotUltra(fs.generator().to_vec()).into());
    }
    let atoms = reduced_product(fam, fs)?;
    let lhs = complex_algebra(&atoms.structure)?;

    let algebras: Vec<Structure> = fam
        .members()
        .iter()
        .enumerate()
        .map(|(i, m)| complex_algebra(m)?.to_structure(&format!("cm{i}")))
        .collect::<Result<_, _>>()?;
    let algebras = Family::new(algebras)?;
    let ultra = reduced_product(&algebras, fs)?;

    let completion = dm_completion(ultra.structure.order())?;
    let operators = extend_operators(&ultra.structure, &completion.lattice, &completion.embedding);
    let (rhs, to_mask) = Bao::from_boolean_lattice(&completion.lattice, &operators)?;

    // rhs mask -> completion element -> ultraproduct class -> image in lhs.
    let mut canonical_map = vec![0; rhs.len()];
    for c in completion.lattice.elements() {
        let class = completion
            .preimage(c)
            .ok_or(ComplexError::IncompleteAtFiniteScale)?;
        canonical_map[to_mask[c]] = canonical_image(&atoms, ultra.representative(class));
    }
    let is_iso = is_isomorphism(
        &rhs.to_structure("rhs")?,
        &lhs.to_structure("lhs")?,
        &canonical_map,
    );
    Ok(GivantReport {
        lhs,
        rhs,
        canonical_map,
        is_iso,
    })
}

/// The set of classes `u/F` of the structures' reduced product with
/// `{i : u_i ∈ X_i}` in the filter, for a tuple of member subsets `X_i`
/// given as masks. The result is a mask over the classes.
pub fn canonical_image(atoms: &ReducedProduct, subsets: &[ElemId]) -> ElemId {
    let fs = atoms.filter();
    (0..atoms.structure.len())
        .filter(|&u| {
            let rep = atoms.representative(u);
            fs.contains_where(|i| subsets[i] >> rep[i] & 1 == 1)
        })
        .fold(0, |m, u| m | 1 << u)
}

/// Extends each non-Boolean operation of `ultra` to its completion:
/// `F(c_1..c_n)` is the join of `e(f(x_1..x_n))` over `e(x_i) <= c_i`.
fn extend_operators(
    ultra: &Structure,
    lattice: &Poset,
    embedding: &[ElemId],
) -> BTreeMap<String, OperationTable> {
    let mut out = BTreeMap::new();
    for (name, op) in ultra.operations() {
        if [super::MEET, super::JOIN, super::NEG].contains(&name.as_str()) {
            continue;
        }
        let k = op.arity();
        let rows: Vec<(Vec<ElemId>, ElemId)> = tuples_of(&vec![ultra.len(); k])
            .into_iter()
            .map(|xs| {
                let v = embedding[op.apply(&xs)];
                (xs.iter().map(|&x| embedding[x]).collect(), v)
            })
            .collect();
        let table = OperationTable::from_fn(k, lattice.len(), |cs| {
            let below = rows
                .iter()
                .filter(|(es, _)| es.iter().zip(cs).all(|(&e, &c)| lattice.leq(e, c)))
                .map(|&(_, v)| v);
            lattice
                .sup_unchecked(below, crate::order::Direction::Up)
                .value()
                .expect("completion is a complete lattice")
        })
        .expect("table over the completion");
        out.insert(name.clone(), table);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::product::{make_filter, IndexSet};
    use crate::structure::Relation;

    fn rel(name: &str, n: usize, tuples: &[(usize, usize)]) -> Structure {
        Structure::relational(name, (0..n).map(|i| format!("{name}{i}")).collect())
            .unwrap()
            .with_relation("R", Relation::new(2, tuples.iter().map(|&(a, b)| vec![a, b])))
            .unwrap()
    }

    fn filter(n: usize, j: usize) -> FilterSpec {
        make_filter(IndexSet::new(n).unwrap(), &[j]).unwrap()
    }

    #[test]
    fn copies_collapse_to_the_chosen_member() {
        let s = rel("s", 2, &[(0, 1), (1, 1)]);
        let fam = Family::new(vec![s.clone(), s.clone()]).unwrap();
        let r = givant_check(&fam, &filter(2, 0)).unwrap();
        assert!(r.is_iso);
        let cm = complex_algebra(&s).unwrap();
        assert_eq!(r.lhs.operator("R"), cm.operator("R"));
        assert_eq!(r.rhs.operator("R"), cm.operator("R"));
        assert_eq!(r.canonical_map, vec![0, 1, 2, 3]);
    }

    #[test]
    fn different_members_track_the_generator() {
        let a = rel("a", 2, &[(0, 1), (1, 1)]);
        let b = rel("b", 2, &[(0, 0), (1, 0), (1, 1)]);
        let fam = Family::new(vec![a, b.clone()]).unwrap();
        let r = givant_check(&fam, &filter(2, 1)).unwrap();
        assert!(r.is_iso);
        assert_eq!(r.lhs.operator("R"), complex_algebra(&b).unwrap().operator("R"));
    }

    #[test]
    fn three_members_of_three_elements() {
        let fam = Family::new(vec![
            rel("a", 3, &[(0, 1), (1, 2)]),
            rel("b", 3, &[(2, 2)]),
            rel("c", 3, &[(0, 0), (0, 2), (1, 0)]),
        ])
        .unwrap();
        for j in 0..3 {
            let r = givant_check(&fam, &filter(3, j)).unwrap();
            assert!(r.is_iso);
        }
    }

    #[test]
    fn image_is_independent_of_representatives() {
        let fam = Family::new(vec![rel("a", 2, &[(0, 1)]), rel("b", 3, &[(2, 0)])]).unwrap();
        let fs = filter(2, 1);
        let atoms = reduced_product(&fam, &fs).unwrap();
        for x in 0..8usize {
            let reps = [[0b00, x], [0b11, x], [0b01, x]];
            let images: Vec<ElemId> = reps.iter().map(|r| canonical_image(&atoms, r)).collect();
            assert!(images.iter().all(|&m| m == images[0]));
            assert_eq!(images[0], x);
        }
    }

    #[test]
    fn needs_an_ultrafilter() {
        let s = rel("s", 2, &[(0, 1)]);
        let fam = Family::new(vec![s.clone(), s]).unwrap();
        let fs = make_filter(IndexSet::new(2).unwrap(), &[0, 1]).unwrap();
        assert!(matches!(
            givant_check(&fam, &fs),
            Err(ComplexError::Product(ProductError::NotUltra(_)))
        ));
    }
}
