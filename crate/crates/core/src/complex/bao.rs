use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::order::{
    preservation_verdict, set_label, table_len, tuples_of, ElemId, OperationTable, Poset,
    Preservation,
};
use crate::structure::{Relation, Structure};

use super::ComplexError;

/// Names of the Boolean operations in [`Bao::to_structure`].
pub const MEET: &str = "meet";
pub const JOIN: &str = "join";
pub const NEG: &str = "neg";

/// A finite powerset Boolean algebra with extra operations.
///
/// Element ids are bitmasks over the atoms: element `m` is the set of atoms
/// `i` with bit `i` set in `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bao {
    atoms: Vec<String>,
    lattice: Poset,
    meet: OperationTable,
    join: OperationTable,
    neg: OperationTable,
    operators: BTreeMap<String, OperationTable>,
}

impl Bao {
    /// The powerset algebra over the given atom labels, with no operators.
    pub fn powerset(atoms: Vec<String>) -> Result<Bao, ComplexError> {
        let cap = Caps::current().powerset;
        if atoms.len() > cap {
            return Err(ComplexError::CapExceeded {
                what: "powerset atoms",
                size: atoms.len(),
                cap,
            });
        }
        let n = 1usize << atoms.len();
        let labels = (0..n)
            .map(|m| set_label(members(m).map(|i| atoms[i].as_str())))
            .collect();
        let lattice = Poset::from_leq(labels, |a, b| a & !b == 0)?;
        let full = n - 1;
        Ok(Bao {
            atoms,
            lattice,
            meet: OperationTable::from_fn(2, n, |a| a[0] & a[1])?,
            join: OperationTable::from_fn(2, n, |a| a[0] | a[1])?,
            neg: OperationTable::from_fn(1, n, |a| full & !a[0])?,
            operators: BTreeMap::new(),
        })
    }

    pub fn with_operator(mut self, name: &str, table: OperationTable) -> Result<Bao, ComplexError> {
        if [MEET, JOIN, NEG, crate::structure::LEQ].contains(&name) {
            return Err(ComplexError::ReservedName(name.to_string()));
        }
        if self.operators.contains_key(name) {
            return Err(ComplexError::DuplicateOperator(name.to_string()));
        }
        if table.size() != self.len() {
            return Err(ComplexError::BadOperator {
                name: name.to_string(),
                reason: format!("table over {} elements, algebra has {}", table.size(), self.len()),
            });
        }
        self.operators.insert(name.to_string(), table);
        Ok(self)
    }

    /// Reads a finite Boolean lattice with operations back into mask form.
    /// Operations named `meet`, `join` or `neg` are dropped; the Boolean
    /// structure is recomputed from the order. Returns the algebra and the
    /// map from element ids of `lattice` to masks.
    pub fn from_boolean_lattice(
        lattice: &Poset,
        operations: &BTreeMap<String, OperationTable>,
    ) -> Result<(Bao, Vec<ElemId>), ComplexError> {
        if !lattice.is_lattice() {
            return Err(ComplexError::NotBoolean("not a lattice".into()));
        }
        let atoms = lattice.atoms();
        if atoms.len() > usize::BITS as usize - 1 || 1usize << atoms.len() != lattice.len() {
            return Err(ComplexError::NotBoolean(format!(
                "{} elements over {} atoms",
                lattice.len(),
                atoms.len()
            )));
        }
        let to_mask: Vec<ElemId> = lattice
            .elements()
            .map(|e| {
                atoms
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| lattice.leq(a, e))
                    .fold(0, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let mut hit = vec![false; lattice.len()];
        for &m in &to_mask {
            if std::mem::replace(&mut hit[m], true) {
                return Err(ComplexError::NotBoolean("elements not determined by atoms".into()));
            }
        }
        for a in lattice.elements() {
            for b in lattice.elements() {
                if lattice.leq(a, b) != (to_mask[a] & !to_mask[b] == 0) {
                    return Err(ComplexError::NotBoolean("order is not inclusion of atom sets".into()));
                }
            }
        }
        let labels = atoms
            .iter()
            .map(|&a| {
                let l = lattice.label(a);
                l.strip_prefix('{')
                    .and_then(|l| l.strip_suffix('}'))
                    .unwrap_or(l)
                    .to_string()
            })
            .collect();
        let mut bao = Bao::powerset(labels)?;
        for (name, op) in operations {
            if [MEET, JOIN, NEG].contains(&name.as_str()) {
                continue;
            }
            if op.size() != lattice.len() {
                return Err(ComplexError::BadOperator {
                    name: name.clone(),
                    reason: "table size differs from the lattice".into(),
                });
            }
            bao = bao.with_operator(name, op.transport(&to_mask))?;
        }
        Ok((bao, to_mask))
    }

    /// Reads a structure whose order is a finite Boolean lattice.
    pub fn from_structure(s: &Structure) -> Result<Bao, ComplexError> {
        if let Some(name) = s.relations().keys().next() {
            return Err(ComplexError::BadOperator {
                name: name.clone(),
                reason: "relations have no place in an algebra".into(),
            });
        }
        Ok(Bao::from_boolean_lattice(s.order(), s.operations())?.0)
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.lattice.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lattice(&self) -> &Poset {
        &self.lattice
    }

    pub fn meet(&self) -> &OperationTable {
        &self.meet
    }

    pub fn join(&self) -> &OperationTable {
        &self.join
    }

    pub fn neg(&self) -> &OperationTable {
        &self.neg
    }

    pub fn operators(&self) -> &BTreeMap<String, OperationTable> {
        &self.operators
    }

    pub fn operator(&self, name: &str) -> Option<&OperationTable> {
        self.operators.get(name)
    }

    /// The mask of the atoms with the given labels.
    pub fn mask_of(&self, labels: &[&str]) -> Option<ElemId> {
        labels.iter().try_fold(0, |m, l| {
            self.atoms.iter().position(|a| a == l).map(|i| m | 1 << i)
        })
    }

    /// The algebra as a structure: inclusion order, `meet`, `join`, `neg`
    /// and every operator.
    pub fn to_structure(&self, name: &str) -> Result<Structure, ComplexError> {
        let mut s = Structure::new(name, self.lattice.clone())
            .with_operation(MEET, self.meet.clone())?
            .with_operation(JOIN, self.join.clone())?
            .with_operation(NEG, self.neg.clone())?;
        for (op, table) in &self.operators {
            s = s.with_operation(op, table.clone())?;
        }
        Ok(s)
    }
}

pub(crate) fn members(mask: usize) -> impl Iterator<Item = usize> {
    (0..usize::BITS as usize).filter(move |&i| mask >> i & 1 == 1)
}

/// The complex algebra of a structure: all subsets of the carrier under
/// inclusion. A relation `R` of arity `n + 1` becomes the `n`-ary operator
/// `R(X_1..X_n) = { y : (x_1..x_n, y) ∈ R for some x_i ∈ X_i }`; an
/// operation is treated as its graph. The order of the structure is not used.
pub fn complex_algebra(s: &Structure) -> Result<Bao, ComplexError> {
    let bao = Bao::powerset(s.labels().to_vec())?;
    let n = bao.len();
    let mut graphs: Vec<(String, usize, Vec<Vec<ElemId>>)> = Vec::new();
    for (name, rel) in s.relations() {
        if rel.arity() < 2 {
            return Err(ComplexError::UnaryRelation(name.clone()));
        }
        graphs.push((name.clone(), rel.arity() - 1, rel.tuples().iter().cloned().collect()));
    }
    for (name, op) in s.operations() {
        let rows = op
            .rows()
            .map(|(mut args, v)| {
                args.push(v);
                args
            })
            .collect();
        graphs.push((name.clone(), op.arity(), rows));
    }
    let mut bao = bao;
    for (name, arity, tuples) in graphs {
        let cap = Caps::current().table;
        match table_len(n, arity) {
            Some(len) if len <= cap => {}
            other => {
                return Err(ComplexError::CapExceeded {
                    what: "operator table",
                    size: other.unwrap_or(usize::MAX),
                    cap,
                })
            }
        }
        let table = OperationTable::from_fn(arity, n, |xs| {
            tuples
                .iter()
                .filter(|t| t[..arity].iter().zip(xs).all(|(&x, &m)| m >> x & 1 == 1))
                .fold(0, |acc, t| acc | 1 << t[arity])
        })?;
        bao = bao.with_operator(&name, table)?;
    }
    Ok(bao)
}

/// The atom structure: carrier = atoms, and for each operator `f` the
/// relation `{ (a_1..a_n, c) : c <= f(a_1..a_n) }` on atoms.
pub fn atom_structure(b: &Bao) -> Result<Structure, ComplexError> {
    let labels = b.atoms().to_vec();
    let k = labels.len();
    let mut s = Structure::relational("atoms", labels)?;
    for (name, op) in b.operators() {
        let tuples = tuples_of(&vec![k; op.arity()]).into_iter().flat_map(|atoms| {
            let args: Vec<ElemId> = atoms.iter().map(|&a| 1 << a).collect();
            let value = op.apply(&args);
            members(value).map(move |c| {
                let mut t = atoms.clone();
                t.push(c);
                t
            })
        });
        s = s.with_relation(name, Relation::new(op.arity() + 1, tuples.collect::<Vec<_>>()))?;
    }
    Ok(s)
}

/// Every operator preserves suprema of nonempty sets.
pub fn check_quasi_complete_operators(b: &Bao) -> bool {
    check_operators(b, Preservation::Quasi)
}

/// Every operator preserves all suprema, the empty one included.
pub fn check_complete_operators(b: &Bao) -> bool {
    check_operators(b, Preservation::Complete)
}

fn check_operators(b: &Bao, mode: Preservation) -> bool {
    b.operators().values().all(|op| {
        preservation_verdict(&b.lattice, op, mode)
            .expect("a powerset algebra is a lattice")
            .holds()
    })
}
