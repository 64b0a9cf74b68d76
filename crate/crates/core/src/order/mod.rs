//! Finite posets, suprema and infima, and the order-theoretic checks built on
//! them: monotonicity, complete additivity, quasi-completeness, unary
//! instances and the Dedekind–MacNeille completion.

mod additive;
mod completion;
mod table;

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

pub use additive::{
    check_lemma_equivalence, check_lemma_equivalence_for, check_preservation,
    is_completely_additive, is_monotone, is_quasi_complete, lattice_sup_preservation,
    preservation_verdict,
    sup_preservation_at, unary_instance, unary_instance_specs, AdditivityWitness,
    InstanceVerdict, LemmaReport, MonotoneWitness, Preservation, SupTable, UnaryInstanceSpec,
    Verdict,
};
pub use completion::{dm_completion, CompletionResult};
pub use table::OperationTable;
pub(crate) use table::table_len;

/// Dense index of an element within one carrier.
pub type ElemId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("duplicate element label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown element `{0}`")]
    UnknownLabel(String),
    #[error("element id {id} is outside a carrier of size {size}")]
    UnknownElement { id: ElemId, size: usize },
    #[error("carrier must be nonempty")]
    EmptyCarrier,
    #[error("order is not antisymmetric: cycle {}", .0.join(" <= "))]
    AntisymmetryViolation(Vec<String>),
    #[error("relation is not {0}")]
    NotAnOrder(&'static str),
    #[error("operation table has carrier {table} but the poset has {poset} elements")]
    ArityCarrierMismatch { table: usize, poset: usize },
    #[error("operation table: {0}")]
    BadTable(String),
    #[error("position {position} out of range for arity {arity}")]
    PositionOutOfRange { position: usize, arity: usize },
    #[error("operation must have arity at least 2 (got {0})")]
    ArityTooSmall(usize),
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("poset is not a lattice")]
    NotALattice,
}

/// Direction of a bound: `Up` asks for the least upper bound, `Down` for the
/// greatest lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Up,
    Down,
}

/// Outcome of a supremum (or infimum) query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sup {
    Exists(ElemId),
    NoBound,
    NoLeastBound,
}

impl Sup {
    pub fn value(self) -> Option<ElemId> {
        match self {
            Sup::Exists(e) => Some(e),
            _ => None,
        }
    }

    pub fn exists(self) -> bool {
        matches!(self, Sup::Exists(_))
    }

    pub fn reason(self, direction: Direction) -> Option<&'static str> {
        match (self, direction) {
            (Sup::Exists(_), _) => None,
            (Sup::NoBound, Direction::Up) => Some("no upper bound"),
            (Sup::NoLeastBound, Direction::Up) => Some("no least upper bound"),
            (Sup::NoBound, Direction::Down) => Some("no lower bound"),
            (Sup::NoLeastBound, Direction::Down) => Some("no greatest lower bound"),
        }
    }
}

/// A finite partially ordered set.
///
/// `up[a]` holds every `b` with `a <= b`; `down[b]` is its transpose. Both are
/// kept so that upper and lower bound sets are single intersections.
#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<String> = self
            .covers()
            .into_iter()
            .map(|(a, b)| format!("{}<{}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &covers)
            .finish()
    }
}

fn check_labels(labels: &[String]) -> Result<(), OrderError> {
    if labels.is_empty() {
        return Err(OrderError::EmptyCarrier);
    }
    let mut seen = BTreeSet::new();
    for l in labels {
        if !seen.insert(l.as_str()) {
            return Err(OrderError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Builds a poset from element labels and generating pairs given by label.
///
/// The order is the reflexive-transitive closure of the pairs; a closure that
/// identifies two distinct elements is rejected with the offending cycle.
pub fn validate_poset<S: AsRef<str>>(
    elements: &[S],
    pairs: &[(S, S)],
) -> Result<Poset, OrderError> {
    let labels: Vec<String> = elements.iter().map(|s| s.as_ref().to_string()).collect();
    check_labels(&labels)?;
    let index: HashMap<&str, ElemId> = labels
        .iter()
        .enumerate()
        .map(|(i, l)| (l.as_str(), i))
        .collect();
    let lookup = |s: &S| {
        index
            .get(s.as_ref())
            .copied()
            .ok_or_else(|| OrderError::UnknownLabel(s.as_ref().to_string()))
    };
    let ids = pairs
        .iter()
        .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
        .collect::<Result<Vec<_>, OrderError>>()?;
    Poset::from_pairs(labels, &ids)
}

impl Poset {
    /// Reflexive-transitive closure of `pairs` over `labels`.
    pub fn from_pairs(labels: Vec<String>, pairs: &[(ElemId, ElemId)]) -> Result<Poset, OrderError> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (i, row) in up.iter_mut().enumerate() {
            row.insert(i);
        }
        for &(a, b) in pairs {
            for id in [a, b] {
                if id >= n {
                    return Err(OrderError::UnknownElement { id, size: n });
                }
            }
            up[a].insert(b);
        }
        // Warshall on rows.
        for k in 0..n {
            let row_k = up[k].clone();
            for row in up.iter_mut() {
                if row.contains(k) {
                    row.union_with(&row_k);
                }
            }
        }
        for a in 0..n {
            for b in up[a].ones() {
                if a != b && up[b].contains(a) {
                    let cycle = find_cycle(n, pairs, a, b)
                        .into_iter()
                        .map(|i| labels[i].clone())
                        .collect();
                    return Err(OrderError::AntisymmetryViolation(cycle));
                }
            }
        }
        Ok(Poset::from_up_rows(labels, up))
    }

    /// Builds a poset from a complete `leq` predicate, checking all three
    /// order axioms.
    pub fn from_leq(
        labels: Vec<String>,
        leq: impl Fn(ElemId, ElemId) -> bool,
    ) -> Result<Poset, OrderError> {
        check_labels(&labels)?;
        let n = labels.len();
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter_mut().enumerate() {
            for b in 0..n {
                if leq(a, b) {
                    row.insert(b);
                }
            }
        }
        for a in 0..n {
            if !up[a].contains(a) {
                return Err(OrderError::NotAnOrder("reflexive"));
            }
            for b in up[a].ones() {
                if a != b && up[b].contains(a) {
                    return Err(OrderError::NotAnOrder("antisymmetric"));
                }
                if !up[b].is_subset(&up[a]) {
                    return Err(OrderError::NotAnOrder("transitive"));
                }
            }
        }
        Ok(Poset::from_up_rows(labels, up))
    }

    fn from_up_rows(labels: Vec<String>, up: Vec<FixedBitSet>) -> Poset {
        let n = labels.len();
        let mut down = vec![FixedBitSet::with_capacity(n); n];
        for (a, row) in up.iter().enumerate() {
            for b in row.ones() {
                down[b].insert(a);
            }
        }
        Poset { labels, up, down }
    }

    /// The discrete order (an antichain) on `labels`.
    pub fn discrete(labels: Vec<String>) -> Result<Poset, OrderError> {
        Poset::from_pairs(labels, &[])
    }

    /// The chain `0 < 1 < ... < n-1`, labelled by position.
    pub fn chain(n: usize) -> Poset {
        let labels = (0..n).map(|i| i.to_string()).collect();
        let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Poset::from_pairs(labels, &pairs).expect("chain is a valid order")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, id: ElemId) -> &str {
        &self.labels[id]
    }

    pub fn index_of(&self, label: &str) -> Option<ElemId> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn elements(&self) -> std::ops::Range<ElemId> {
        0..self.len()
    }

    /// Same order with new labels.
    pub fn relabel(&self, labels: Vec<String>) -> Result<Poset, OrderError> {
        check_labels(&labels)?;
        if labels.len() != self.len() {
            return Err(OrderError::BadTable(format!(
                "relabel with {} labels for {} elements",
                labels.len(),
                self.len()
            )));
        }
        Ok(Poset {
            labels,
            up: self.up.clone(),
            down: self.down.clone(),
        })
    }

    pub fn leq(&self, a: ElemId, b: ElemId) -> bool {
        self.up[a].contains(b)
    }

    /// `{b : a <= b}`.
    pub fn up_set(&self, a: ElemId) -> &FixedBitSet {
        &self.up[a]
    }

    /// `{b : b <= a}`.
    pub fn down_set(&self, a: ElemId) -> &FixedBitSet {
        &self.down[a]
    }

    /// Number of pairs in the order relation, reflexive pairs included.
    pub fn relation_size(&self) -> usize {
        self.up.iter().map(|r| r.count_ones(..)).sum()
    }

    pub fn is_discrete(&self) -> bool {
        self.relation_size() == self.len()
    }

    /// All pairs `(a, b)` with `a <= b`.
    pub fn pairs(&self) -> Vec<(ElemId, ElemId)> {
        self.elements()
            .flat_map(|a| self.up[a].ones().map(move |b| (a, b)))
            .collect()
    }

    /// Hasse diagram edges: `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(ElemId, ElemId)> {
        let mut out = Vec::new();
        for a in self.elements() {
            for b in self.up[a].ones() {
                if a == b {
                    continue;
                }
                let mut between = self.up[a].clone();
                between.intersect_with(&self.down[b]);
                if between.count_ones(..) == 2 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn bounds_of<I: IntoIterator<Item = ElemId>>(&self, xs: I, direction: Direction) -> FixedBitSet {
        let rows = match direction {
            Direction::Up => &self.up,
            Direction::Down => &self.down,
        };
        let mut bounds = FixedBitSet::with_capacity(self.len());
        bounds.insert_range(..);
        for x in xs {
            bounds.intersect_with(&rows[x]);
        }
        bounds
    }

    /// Upper bounds (or lower bounds) of `xs`.
    pub fn bounds(&self, xs: &[ElemId], direction: Direction) -> Result<Vec<ElemId>, OrderError> {
        self.check_ids(xs)?;
        Ok(self.bounds_of(xs.iter().copied(), direction).ones().collect())
    }

    /// Least upper bound (`Up`) or greatest lower bound (`Down`) of `xs`.
    /// The empty set is allowed: its supremum is the least element.
    pub fn sup(&self, xs: &[ElemId], direction: Direction) -> Result<Sup, OrderError> {
        self.check_ids(xs)?;
        Ok(self.sup_unchecked(xs.iter().copied(), direction))
    }

    pub(crate) fn sup_unchecked<I: IntoIterator<Item = ElemId>>(
        &self,
        xs: I,
        direction: Direction,
    ) -> Sup {
        let bounds = self.bounds_of(xs, direction);
        self.least_of(&bounds, direction)
    }

    /// The least (Up) or greatest (Down) member of `set`, read as an
    /// upper-bound (lower-bound) set.
    fn least_of(&self, set: &FixedBitSet, direction: Direction) -> Sup {
        if set.is_clear() {
            return Sup::NoBound;
        }
        let rows = match direction {
            Direction::Up => &self.up,
            Direction::Down => &self.down,
        };
        for u in set.ones() {
            if set.is_subset(&rows[u]) {
                return Sup::Exists(u);
            }
        }
        Sup::NoLeastBound
    }

    pub fn join(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.sup_unchecked([a, b], Direction::Up).value()
    }

    pub fn meet(&self, a: ElemId, b: ElemId) -> Option<ElemId> {
        self.sup_unchecked([a, b], Direction::Down).value()
    }

    pub fn bottom(&self) -> Option<ElemId> {
        self.sup_unchecked([], Direction::Up).value()
    }

    pub fn top(&self) -> Option<ElemId> {
        self.sup_unchecked([], Direction::Down).value()
    }

    /// Every pair has a join and a meet.
    pub fn is_lattice(&self) -> bool {
        self.elements().all(|a| {
            (a..self.len()).all(|b| self.join(a, b).is_some() && self.meet(a, b).is_some())
        })
    }

    /// Every subset has a supremum and an infimum. For a finite poset this is
    /// a least element plus binary joins.
    pub fn is_complete_lattice(&self) -> bool {
        self.bottom().is_some()
            && self
                .elements()
                .all(|a| (a..self.len()).all(|b| self.join(a, b).is_some()))
    }

    /// Elements with exactly one lower cover.
    pub fn join_irreducibles(&self) -> Vec<ElemId> {
        let mut lower_covers = vec![0usize; self.len()];
        for (_, b) in self.covers() {
            lower_covers[b] += 1;
        }
        self.elements().filter(|&e| lower_covers[e] == 1).collect()
    }

    /// Atoms: the upper covers of the least element.
    pub fn atoms(&self) -> Vec<ElemId> {
        match self.bottom() {
            Some(bot) => self
                .covers()
                .into_iter()
                .filter(|&(a, _)| a == bot)
                .map(|(_, b)| b)
                .collect(),
            None => Vec::new(),
        }
    }

    /// Some linear extension: elements sorted by the size of their down-set.
    pub fn linear_extension(&self) -> Vec<ElemId> {
        let mut order: Vec<ElemId> = self.elements().collect();
        order.sort_by_key(|&e| (self.down[e].count_ones(..), e));
        order
    }

    /// The componentwise order on the direct product, with labels `(a;b;..)`.
    pub fn product(factors: &[&Poset]) -> Poset {
        let sizes: Vec<usize> = factors.iter().map(|p| p.len()).collect();
        let tuples = tuples_of(&sizes);
        let labels = tuples
            .iter()
            .map(|t| tuple_label(t.iter().zip(factors).map(|(&x, p)| p.label(x))))
            .collect();
        Poset::from_leq(labels, |a, b| {
            factors
                .iter()
                .enumerate()
                .all(|(i, p)| p.leq(tuples[a][i], tuples[b][i]))
        })
        .expect("product of orders is an order")
    }

    fn check_ids(&self, xs: &[ElemId]) -> Result<(), OrderError> {
        match xs.iter().find(|&&x| x >= self.len()) {
            Some(&id) => Err(OrderError::UnknownElement {
                id,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }

    pub(crate) fn up_mask(&self, a: ElemId) -> u64 {
        self.up[a].ones().fold(0u64, |m, b| m | (1 << b))
    }
}

/// All tuples over the given coordinate sizes in lexicographic order, first
/// coordinate most significant.
pub fn tuples_of(sizes: &[usize]) -> Vec<Vec<ElemId>> {
    let mut out = vec![Vec::new()];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

pub(crate) fn tuple_label<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    let parts: Vec<&str> = parts.collect();
    format!("({})", parts.join(";"))
}

/// Label for a set of elements, `{a,b}`.
pub fn set_label<'a>(parts: impl IntoIterator<Item = &'a str>) -> String {
    let parts: Vec<&str> = parts.into_iter().collect();
    format!("{{{}}}", parts.join(","))
}

fn find_cycle(n: usize, pairs: &[(ElemId, ElemId)], a: ElemId, b: ElemId) -> Vec<ElemId> {
    let mut adj = vec![Vec::new(); n];
    for &(x, y) in pairs {
        if x != y {
            adj[x].push(y);
        }
    }
    let path = |from: ElemId, to: ElemId| -> Vec<ElemId> {
        let mut prev = vec![usize::MAX; n];
        let mut queue = VecDeque::from([from]);
        prev[from] = from;
        while let Some(x) = queue.pop_front() {
            if x == to {
                break;
            }
            for &y in &adj[x] {
                if prev[y] == usize::MAX {
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[cur];
            path.push(cur);
        }
        path.reverse();
        path
    };
    let mut cycle = path(a, b);
    cycle.extend(path(b, a).into_iter().skip(1));
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    /// Brute-force reflexive-transitive closure by repeated relaxation.
    fn closure_oracle(n: usize, pairs: &[(usize, usize)]) -> BTreeSet<(usize, usize)> {
        let mut rel: BTreeSet<(usize, usize)> = pairs.iter().copied().collect();
        rel.extend((0..n).map(|i| (i, i)));
        loop {
            let mut added = false;
            let snapshot: Vec<_> = rel.iter().copied().collect();
            for &(a, b) in &snapshot {
                for &(c, d) in &snapshot {
                    if b == c && rel.insert((a, d)) {
                        added = true;
                    }
                }
            }
            if !added {
                return rel;
            }
        }
    }

    #[test]
    fn two_chain_from_one_edge() {
        let p = validate_poset(&["a", "b"], &[("a", "b")]).unwrap();
        assert_eq!(p.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn two_cycle_is_rejected() {
        let err = validate_poset(&["a", "b"], &[("a", "b"), ("b", "a")]).unwrap_err();
        assert_eq!(
            err,
            OrderError::AntisymmetryViolation(vec!["a".into(), "b".into(), "a".into()])
        );
    }

    #[test]
    fn longer_cycle_is_named() {
        let err = validate_poset(&["a", "b", "c"], &[("a", "b"), ("b", "c"), ("c", "a")])
            .unwrap_err();
        match err {
            OrderError::AntisymmetryViolation(cycle) => {
                assert_eq!(cycle.first(), cycle.last());
                assert_eq!(cycle.len(), 4);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn diamond_closure_matches_oracle() {
        let pairs = [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")];
        let p = validate_poset(&["a", "b", "c", "d"], &pairs).unwrap();
        let expected = closure_oracle(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        assert_eq!(expected.len(), 9);
        assert_eq!(p.pairs().into_iter().collect::<BTreeSet<_>>(), expected);
        assert_eq!(p.relation_size(), 9);
    }

    #[test]
    fn duplicate_and_unknown_labels() {
        assert_eq!(
            validate_poset(&["a", "a"], &[]).unwrap_err(),
            OrderError::DuplicateLabel("a".into())
        );
        assert_eq!(
            validate_poset(&["a"], &[("a", "z")]).unwrap_err(),
            OrderError::UnknownLabel("z".into())
        );
        assert_eq!(
            validate_poset::<&str>(&[], &[]).unwrap_err(),
            OrderError::EmptyCarrier
        );
    }

    #[test]
    fn sup_of_empty_is_bottom() {
        let p = Poset::chain(2);
        assert_eq!(p.sup(&[], Direction::Up).unwrap(), Sup::Exists(0));
        assert_eq!(p.sup(&[], Direction::Down).unwrap(), Sup::Exists(1));
    }

    #[test]
    fn sup_of_singleton_is_itself() {
        for p in fixtures::lattices() {
            for x in p.elements() {
                assert_eq!(p.sup(&[x], Direction::Up).unwrap(), Sup::Exists(x));
                assert_eq!(p.sup(&[x], Direction::Down).unwrap(), Sup::Exists(x));
            }
        }
    }

    #[test]
    fn antichain_pair_has_no_upper_bound() {
        let p = fixtures::antichain(2);
        let s = p.sup(&[0, 1], Direction::Up).unwrap();
        assert_eq!(s, Sup::NoBound);
        assert_eq!(s.reason(Direction::Up), Some("no upper bound"));
    }

    #[test]
    fn two_minimal_upper_bounds() {
        // a, b below both c and d.
        let p = validate_poset(
            &["a", "b", "c", "d"],
            &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
        )
        .unwrap();
        let s = p.sup(&[0, 1], Direction::Up).unwrap();
        assert_eq!(s.reason(Direction::Up), Some("no least upper bound"));
        assert_eq!(p.sup(&[], Direction::Up).unwrap(), Sup::NoLeastBound);
    }

    #[test]
    fn sup_rejects_foreign_ids() {
        let p = Poset::chain(2);
        assert_eq!(
            p.sup(&[5], Direction::Up),
            Err(OrderError::UnknownElement { id: 5, size: 2 })
        );
    }

    #[test]
    fn covers_of_boolean_square() {
        let p = fixtures::boolean4();
        assert_eq!(p.covers().len(), 4);
        assert_eq!(p.atoms().len(), 2);
        assert!(p.is_lattice());
        assert!(p.is_complete_lattice());
    }

    #[test]
    fn join_irreducibles_of_n5_and_m3() {
        assert_eq!(fixtures::n5().join_irreducibles().len(), 3);
        assert_eq!(fixtures::m3().join_irreducibles().len(), 3);
        assert_eq!(Poset::chain(4).join_irreducibles(), vec![1, 2, 3]);
    }

    #[test]
    fn from_leq_checks_axioms() {
        let labels = || vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            Poset::from_leq(labels(), |a, b| a < b).unwrap_err(),
            OrderError::NotAnOrder("reflexive")
        );
        assert_eq!(
            Poset::from_leq(labels(), |_, _| true).unwrap_err(),
            OrderError::NotAnOrder("antisymmetric")
        );
    }

    #[test]
    fn product_of_two_chains_is_square() {
        let c = Poset::chain(2);
        let p = Poset::product(&[&c, &c]);
        assert_eq!(p.len(), 4);
        assert_eq!(p.relation_size(), 9);
        assert!(p.is_lattice());
    }
}
