use std::collections::{BTreeSet, HashSet};

use fixedbitset::FixedBitSet;

use crate::caps::Caps;

use super::{set_label, ElemId, OrderError, Poset};

/// The Dedekind–MacNeille completion of a poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompletionResult {
    /// The lattice of cuts ordered by inclusion.
    pub lattice: Poset,
    /// `embedding[x]` is the completion element of the principal cut of `x`.
    pub embedding: Vec<ElemId>,
    /// The cut (a down-set of the source poset) behind each completion element.
    pub cuts: Vec<Vec<ElemId>>,
}

impl CompletionResult {
    /// True when every cut is principal, i.e. the source was already complete.
    pub fn is_identity(&self) -> bool {
        self.lattice.len() == self.embedding.len()
    }

    /// The source element whose principal cut is `c`, if any.
    pub fn preimage(&self, c: ElemId) -> Option<ElemId> {
        self.embedding.iter().position(|&e| e == c)
    }
}

/// Builds the lattice of cuts `A = lower(upper(A))`.
///
/// Cuts are exactly the sets `lower(B)`, which are intersections of principal
/// down-sets (the empty intersection being the whole carrier). They are
/// generated by closing the principal down-sets under intersection, ordered
/// by size and then by their sorted members.
pub fn dm_completion(p: &Poset) -> Result<CompletionResult, OrderError> {
    let n = p.len();
    let cap = Caps::current().completion;
    let principal: Vec<FixedBitSet> = p.elements().map(|x| p.down_set(x).clone()).collect();

    let mut full = FixedBitSet::with_capacity(n);
    full.insert_range(..);
    let mut seen: HashSet<FixedBitSet> = HashSet::new();
    let mut cuts: Vec<FixedBitSet> = Vec::new();
    let mut queue: Vec<FixedBitSet> = std::iter::once(full).chain(principal.iter().cloned()).collect();
    while let Some(cut) = queue.pop() {
        if !seen.insert(cut.clone()) {
            continue;
        }
        if seen.len() > cap {
            return Err(OrderError::CapExceeded {
                what: "Dedekind-MacNeille cuts",
                size: seen.len(),
                cap,
            });
        }
        for down in &principal {
            let mut next = cut.clone();
            next.intersect_with(down);
            if !seen.contains(&next) {
                queue.push(next);
            }
        }
        cuts.push(cut);
    }

    let mut cuts: Vec<(usize, Vec<ElemId>, FixedBitSet)> = cuts
        .into_iter()
        .map(|c| (c.count_ones(..), c.ones().collect(), c))
        .collect();
    cuts.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));

    let embedding: Vec<ElemId> = principal
        .iter()
        .map(|d| cuts.iter().position(|c| &c.2 == d).expect("principal cuts are cuts"))
        .collect();

    let mut used = BTreeSet::new();
    let labels: Vec<String> = cuts
        .iter()
        .enumerate()
        .map(|(i, (_, members, _))| {
            let base = match embedding.iter().position(|&e| e == i) {
                Some(x) => p.label(x).to_string(),
                None => {
                    let maximal = members
                        .iter()
                        .filter(|&&a| members.iter().all(|&b| a == b || !p.leq(a, b)))
                        .map(|&a| p.label(a));
                    set_label(maximal)
                }
            };
            let mut label = base;
            while !used.insert(label.clone()) {
                label.push('\'');
            }
            label
        })
        .collect();

    let lattice = Poset::from_leq(labels, |a, b| cuts[a].2.is_subset(&cuts[b].2))
        .expect("inclusion is an order");
    Ok(CompletionResult {
        lattice,
        embedding,
        cuts: cuts.into_iter().map(|c| c.1).collect(),
    })
}
