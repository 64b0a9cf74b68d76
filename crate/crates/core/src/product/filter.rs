use std::collections::BTreeSet;

use super::ProductError;

/// A finite index set with display labels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexSet {
    labels: Vec<String>,
}

impl IndexSet {
    /// Indices labelled `0..size`.
    pub fn new(size: usize) -> Result<IndexSet, ProductError> {
        IndexSet::with_labels((0..size).map(|i| i.to_string()).collect())
    }

    pub fn with_labels(labels: Vec<String>) -> Result<IndexSet, ProductError> {
        if labels.is_empty() {
            return Err(ProductError::EmptyIndexSet);
        }
        Ok(IndexSet { labels })
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }
}

/// The principal filter `{S ⊆ I : J ⊆ S}` for a nonempty generator `J`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilterSpec {
    index: IndexSet,
    generator: Vec<usize>,
}

pub fn make_filter(index: IndexSet, generator: &[usize]) -> Result<FilterSpec, ProductError> {
    let generator: BTreeSet<usize> = generator.iter().copied().collect();
    if generator.is_empty() {
        return Err(ProductError::EmptyGenerator);
    }
    if let Some(&index_) = generator.iter().find(|&&i| i >= index.size()) {
        return Err(ProductError::OutOfRangeIndex {
            index: index_,
            size: index.size(),
        });
    }
    Ok(FilterSpec {
        index,
        generator: generator.into_iter().collect(),
    })
}

impl FilterSpec {
    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    /// The generator `J`, sorted.
    pub fn generator(&self) -> &[usize] {
        &self.generator
    }

    pub fn is_ultra(&self) -> bool {
        self.generator.len() == 1
    }

    /// Membership `S ∈ F`, that is `J ⊆ S`.
    pub fn contains(&self, set: &[usize]) -> bool {
        self.generator.iter().all(|j| set.contains(j))
    }

    /// Membership for a set given as a predicate on indices.
    pub fn contains_where(&self, mut member: impl FnMut(usize) -> bool) -> bool {
        self.generator.iter().all(|&j| member(j))
    }
}
