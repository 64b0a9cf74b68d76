use crate::caps::Caps;
use crate::order::{tuples_of, ElemId};
use crate::structure::Structure;

use super::ProductError;

/// Whether `map` (indexed by elements of `a`) is a bijection onto `b` that
/// preserves and reflects the order, every relation and every operation.
pub fn is_isomorphism(a: &Structure, b: &Structure, map: &[ElemId]) -> bool {
    let n = a.len();
    if b.len() != n || map.len() != n || a.signature() != b.signature() {
        return false;
    }
    let mut hit = vec![false; n];
    for &m in map {
        if m >= n || std::mem::replace(&mut hit[m], true) {
            return false;
        }
    }
    let (pa, pb) = (a.order(), b.order());
    if !a
        .order()
        .elements()
        .all(|x| pa.elements().all(|y| pa.leq(x, y) == pb.leq(map[x], map[y])))
    {
        return false;
    }
    for (name, rel) in a.relations() {
        let other = b.relation(name).expect("same signature");
        if rel.len() != other.len() {
            return false;
        }
        if !rel
            .tuples()
            .iter()
            .all(|t| other.contains(&t.iter().map(|&x| map[x]).collect::<Vec<_>>()))
        {
            return false;
        }
    }
    for (name, op) in a.operations() {
        let other = b.operation(name).expect("same signature");
        for (args, v) in op.rows() {
            let mapped: Vec<ElemId> = args.iter().map(|&x| map[x]).collect();
            if other.apply(&mapped) != map[v] {
                return false;
            }
        }
    }
    true
}

/// Per-element data preserved by every isomorphism.
fn invariants(s: &Structure) -> Vec<Vec<usize>> {
    let p = s.order();
    let mut inv: Vec<Vec<usize>> = p
        .elements()
        .map(|x| vec![p.up_set(x).count_ones(..), p.down_set(x).count_ones(..)])
        .collect();
    for rel in s.relations().values() {
        let k = rel.arity();
        let mut counts = vec![vec![0; k]; s.len()];
        for t in rel.tuples() {
            for (pos, &x) in t.iter().enumerate() {
                counts[x][pos] += 1;
            }
        }
        for (x, c) in counts.into_iter().enumerate() {
            inv[x].extend(c);
        }
    }
    for op in s.operations().values() {
        let mut preimages = vec![0; s.len()];
        for &v in op.values() {
            preimages[v] += 1;
        }
        for (x, c) in preimages.into_iter().enumerate() {
            inv[x].push(c);
        }
    }
    inv
}

/// Finds an isomorphism from `a` to `b` by backtracking over
/// invariant-compatible candidates, or `None` when there is none.
pub fn iso_search(a: &Structure, b: &Structure) -> Result<Option<Vec<ElemId>>, ProductError> {
    let cap = Caps::current().iso;
    for s in [a, b] {
        if s.len() > cap {
            return Err(ProductError::CapExceeded {
                what: "isomorphism search carrier",
                size: s.len(),
                cap,
            });
        }
    }
    if a.signature() != b.signature() {
        return Err(ProductError::SignatureMismatch(format!(
            "`{}` and `{}` have different signatures",
            a.name(),
            b.name()
        )));
    }
    let n = a.len();
    if b.len() != n {
        return Ok(None);
    }
    let (inv_a, inv_b) = (invariants(a), invariants(b));
    let mut sorted_a = inv_a.clone();
    let mut sorted_b = inv_b.clone();
    sorted_a.sort();
    sorted_b.sort();
    if sorted_a != sorted_b {
        return Ok(None);
    }
    let candidates: Vec<Vec<ElemId>> = (0..n)
        .map(|x| (0..n).filter(|&y| inv_a[x] == inv_b[y]).collect())
        .collect();
    // Most constrained elements first.
    let mut order: Vec<ElemId> = (0..n).collect();
    order.sort_by_key(|&x| candidates[x].len());

    let mut search = Search {
        a,
        b,
        candidates: &candidates,
        order: &order,
        map: vec![None; n],
        used: vec![false; n],
    };
    Ok(search.extend(0).then(|| search.map.iter().map(|m| m.expect("complete")).collect()))
}

struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    candidates: &'a [Vec<ElemId>],
    order: &'a [ElemId],
    map: Vec<Option<ElemId>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            let map: Vec<ElemId> = self.map.iter().map(|m| m.expect("complete")).collect();
            return is_isomorphism(self.a, self.b, &map);
        }
        let x = self.order[depth];
        for &y in &self.candidates[x] {
            if self.used[y] {
                continue;
            }
            self.map[x] = Some(y);
            if self.consistent(x) {
                self.used[y] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.used[y] = false;
            }
            self.map[x] = None;
        }
        false
    }

    /// Checks every constraint whose elements are all assigned and involve `x`.
    fn consistent(&self, x: ElemId) -> bool {
        let (pa, pb) = (self.a.order(), self.b.order());
        let y = self.map[x].expect("just assigned");
        let assigned: Vec<ElemId> = (0..self.map.len()).filter(|&z| self.map[z].is_some()).collect();
        for &z in &assigned {
            let w = self.map[z].expect("assigned");
            if pa.leq(x, z) != pb.leq(y, w) || pa.leq(z, x) != pb.leq(w, y) {
                return false;
            }
        }
        let mapped = |t: &[ElemId]| -> Vec<ElemId> { t.iter().map(|&e| self.map[e].expect("assigned")).collect() };
        for (name, rel) in self.a.relations() {
            let other = self.b.relation(name).expect("same signature");
            for t in tuples_of(&vec![assigned.len(); rel.arity()]) {
                let t: Vec<ElemId> = t.iter().map(|&i| assigned[i]).collect();
                if t.contains(&x) && rel.contains(&t) != other.contains(&mapped(&t)) {
                    return false;
                }
            }
        }
        for (name, op) in self.a.operations() {
            let other = self.b.operation(name).expect("same signature");
            for t in tuples_of(&vec![assigned.len(); op.arity()]) {
                let t: Vec<ElemId> = t.iter().map(|&i| assigned[i]).collect();
                if !t.contains(&x) {
                    continue;
                }
                let image = other.apply(&mapped(&t));
                match self.map[op.apply(&t)] {
                    Some(v) if v != image => return false,
                    None if self.used[image] || image == y => return false,
                    _ => {}
                }
            }
        }
        true
    }
}
