use crate::caps::Caps;
use crate::fol::Signature;
use crate::order::{table_len, tuple_label, tuples_of, ElemId, OperationTable, Poset};
use crate::structure::{Relation, Structure};

use super::{FilterSpec, IndexSet, ProductError};

/// Structures indexed by a finite set, all over one signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Family {
    index: IndexSet,
    members: Vec<Structure>,
}

impl Family {
    pub fn new(members: Vec<Structure>) -> Result<Family, ProductError> {
        let index = IndexSet::new(members.len())?;
        let sig = members[0].signature();
        for (i, m) in members.iter().enumerate().skip(1) {
            if m.signature() != sig {
                return Err(ProductError::SignatureMismatch(format!(
                    "member {i} (`{}`) differs from member 0 (`{}`)",
                    m.name(),
                    members[0].name()
                )));
            }
        }
        Ok(Family { index, members })
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn members(&self) -> &[Structure] {
        &self.members
    }

    pub fn member(&self, i: usize) -> &Structure {
        &self.members[i]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn signature(&self) -> Signature {
        self.members[0].signature()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.members.iter().map(Structure::len).collect()
    }

    /// The members at the given indices, in that order.
    pub fn subfamily(&self, indices: &[usize]) -> Result<Family, ProductError> {
        if let Some(&index) = indices.iter().find(|&&i| i >= self.len()) {
            return Err(ProductError::OutOfRangeIndex {
                index,
                size: self.len(),
            });
        }
        Family::new(indices.iter().map(|&i| self.members[i].clone()).collect())
    }

    fn check_filter(&self, fs: &FilterSpec) -> Result<(), ProductError> {
        if fs.index().size() != self.len() {
            return Err(ProductError::IndexMismatch {
                filter: fs.index().size(),
                family: self.len(),
            });
        }
        Ok(())
    }
}

fn carrier_size(sizes: &[usize]) -> Result<usize, ProductError> {
    let cap = Caps::current().product;
    let size = sizes
        .iter()
        .try_fold(1usize, |acc, &n| acc.checked_mul(n))
        .unwrap_or(usize::MAX);
    if size > cap {
        return Err(ProductError::CapExceeded {
            what: "product carrier",
            size,
            cap,
        });
    }
    Ok(size)
}

fn check_table(carrier: usize, arity: usize) -> Result<(), ProductError> {
    let cap = Caps::current().table;
    match table_len(carrier, arity) {
        Some(len) if len <= cap => Ok(()),
        other => Err(ProductError::CapExceeded {
            what: "operation or relation table",
            size: other.unwrap_or(usize::MAX),
            cap,
        }),
    }
}

/// Mixed-radix position of a tuple, first coordinate most significant.
fn tuple_index(sizes: &[usize], tuple: &[ElemId]) -> usize {
    tuple.iter().zip(sizes).fold(0, |acc, (&x, &n)| acc * n + x)
}

/// The direct product with componentwise order, relations and operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectProduct {
    pub structure: Structure,
    sizes: Vec<usize>,
    tuples: Vec<Vec<ElemId>>,
}

impl DirectProduct {
    pub fn tuple(&self, id: ElemId) -> &[ElemId] {
        &self.tuples[id]
    }

    pub fn index_of(&self, tuple: &[ElemId]) -> Option<ElemId> {
        (tuple.len() == self.sizes.len() && tuple.iter().zip(&self.sizes).all(|(&x, &n)| x < n))
            .then(|| tuple_index(&self.sizes, tuple))
    }

    /// The projection onto coordinate `i`, as a map on element ids.
    pub fn projection(&self, i: usize) -> Vec<ElemId> {
        self.tuples.iter().map(|t| t[i]).collect()
    }
}

pub fn direct_product(fam: &Family) -> Result<DirectProduct, ProductError> {
    let sizes = fam.sizes();
    let n = carrier_size(&sizes)?;
    let tuples = tuples_of(&sizes);
    debug_assert_eq!(tuples.len(), n);
    let orders: Vec<&Poset> = fam.members.iter().map(Structure::order).collect();
    let mut s = Structure::new("product", Poset::product(&orders));

    let first = &fam.members[0];
    for (name, rel) in first.relations() {
        // Choose one tuple of R in every factor; the k-tuple of product
        // elements is formed coordinate by coordinate.
        let per_member: Vec<Vec<&Vec<ElemId>>> = fam
            .members
            .iter()
            .map(|m| m.relation(name).expect("shared signature").tuples().iter().collect())
            .collect();
        let choice_sizes: Vec<usize> = per_member.iter().map(Vec::len).collect();
        let count = choice_sizes.iter().try_fold(1usize, |a, &b| a.checked_mul(b));
        check_table(count.unwrap_or(usize::MAX), 1)?;
        let tuples_out = tuples_of(&choice_sizes).into_iter().map(|choice| {
            (0..rel.arity())
                .map(|pos| {
                    let coords: Vec<ElemId> =
                        choice.iter().enumerate().map(|(i, &c)| per_member[i][c][pos]).collect();
                    tuple_index(&sizes, &coords)
                })
                .collect()
        });
        s = s.with_relation(name, Relation::new(rel.arity(), tuples_out))?;
    }
    for (name, op) in first.operations() {
        check_table(n, op.arity())?;
        let tables: Vec<&OperationTable> = fam
            .members
            .iter()
            .map(|m| m.operation(name).expect("shared signature"))
            .collect();
        let table = OperationTable::from_fn(op.arity(), n, |args| {
            let coords: Vec<ElemId> = (0..sizes.len())
                .map(|i| {
                    let member_args: Vec<ElemId> = args.iter().map(|&a| tuples[a][i]).collect();
                    tables[i].apply(&member_args)
                })
                .collect();
            tuple_index(&sizes, &coords)
        })?;
        s = s.with_operation(name, table)?;
    }
    Ok(DirectProduct {
        structure: s,
        sizes,
        tuples,
    })
}

/// The reduced product modulo a principal filter.
///
/// Each class is stored by its lexicographically least representative (zero
/// outside the generator). Order and relations hold on a class tuple when
/// the set of coordinates where they hold is in the filter; operations act on
/// representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedProduct {
    pub structure: Structure,
    filter: FilterSpec,
    sizes: Vec<usize>,
    reps: Vec<Vec<ElemId>>,
    /// Isomorphism onto the direct product of the members in the generator.
    pub to_subproduct: Vec<ElemId>,
    pub subproduct: DirectProduct,
}

impl ReducedProduct {
    pub fn filter(&self) -> &FilterSpec {
        &self.filter
    }

    pub fn representative(&self, class: ElemId) -> &[ElemId] {
        &self.reps[class]
    }

    /// The class of a full index tuple.
    pub fn class_of(&self, tuple: &[ElemId]) -> ElemId {
        let j = self.filter.generator();
        let key: Vec<ElemId> = j.iter().map(|&i| tuple[i]).collect();
        let key_sizes: Vec<usize> = j.iter().map(|&i| self.sizes[i]).collect();
        tuple_index(&key_sizes, &key)
    }

    /// Two tuples are identified when they agree on a set in the filter.
    pub fn equivalent(&self, a: &[ElemId], b: &[ElemId]) -> bool {
        self.filter.contains_where(|i| a[i] == b[i])
    }

    /// Applies operation `op` of the family to arbitrary representatives
    /// and returns the class of the result.
    pub fn apply_on(&self, fam: &Family, op: &str, args: &[Vec<ElemId>]) -> Option<ElemId> {
        let coords: Vec<ElemId> = (0..self.sizes.len())
            .map(|i| {
                let member_args: Vec<ElemId> = args.iter().map(|t| t[i]).collect();
                fam.member(i).operation(op).map(|t| t.apply(&member_args))
            })
            .collect::<Option<_>>()?;
        Some(self.class_of(&coords))
    }
}

pub fn reduced_product(fam: &Family, fs: &FilterSpec) -> Result<ReducedProduct, ProductError> {
    fam.check_filter(fs)?;
    let sizes = fam.sizes();
    carrier_size(&sizes)?;
    let j = fs.generator().to_vec();
    let key_sizes: Vec<usize> = j.iter().map(|&i| sizes[i]).collect();
    let reps: Vec<Vec<ElemId>> = tuples_of(&key_sizes)
        .into_iter()
        .map(|key| {
            let mut rep = vec![0; sizes.len()];
            for (&i, x) in j.iter().zip(key) {
                rep[i] = x;
            }
            rep
        })
        .collect();
    let n = reps.len();
    let members = fam.members();
    let labels: Vec<String> = reps
        .iter()
        .map(|rep| {
            if let [i] = j[..] {
                members[i].label(rep[i]).to_string()
            } else {
                tuple_label(j.iter().map(|&i| members[i].label(rep[i])))
            }
        })
        .collect();
    let holds_on_filter = |holds: &dyn Fn(usize) -> bool| fs.contains_where(holds);
    let order = Poset::from_leq(labels, |a, b| {
        holds_on_filter(&|i| members[i].order().leq(reps[a][i], reps[b][i]))
    })?;
    let mut s = Structure::new("reduced", order);

    let class_of = |coords: &[ElemId]| {
        let key: Vec<ElemId> = j.iter().map(|&i| coords[i]).collect();
        tuple_index(&key_sizes, &key)
    };
    for (name, rel) in members[0].relations() {
        let k = rel.arity();
        check_table(n, k)?;
        let holding = tuples_of(&vec![n; k]).into_iter().filter(|classes| {
            holds_on_filter(&|i| {
                let coords: Vec<ElemId> = classes.iter().map(|&c| reps[c][i]).collect();
                members[i].relation(name).expect("shared signature").contains(&coords)
            })
        });
        s = s.with_relation(name, Relation::new(k, holding.collect::<Vec<_>>()))?;
    }
    for (name, op) in members[0].operations() {
        check_table(n, op.arity())?;
        let table = OperationTable::from_fn(op.arity(), n, |args| {
            let coords: Vec<ElemId> = (0..sizes.len())
                .map(|i| {
                    let member_args: Vec<ElemId> = args.iter().map(|&a| reps[a][i]).collect();
                    members[i].operation(name).expect("shared signature").apply(&member_args)
                })
                .collect();
            class_of(&coords)
        })?;
        s = s.with_operation(name, table)?;
    }

    let subproduct = direct_product(&fam.subfamily(&j)?)?;
    let to_subproduct = reps
        .iter()
        .map(|rep| {
            let key: Vec<ElemId> = j.iter().map(|&i| rep[i]).collect();
            subproduct.index_of(&key).expect("key within member sizes")
        })
        .collect();
    Ok(ReducedProduct {
        structure: s,
        filter: fs.clone(),
        sizes,
        reps,
        to_subproduct,
        subproduct,
    })
}
