use super::{ElemId, OrderError};

/// A total `arity`-ary operation on a carrier of `size` elements, stored as a
/// flat table indexed in mixed radix (first argument most significant).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OperationTable {
    arity: usize,
    size: usize,
    values: Vec<ElemId>,
}

impl OperationTable {
    pub fn new(arity: usize, size: usize, values: Vec<ElemId>) -> Result<Self, OrderError> {
        if arity == 0 {
            return Err(OrderError::BadTable("arity must be at least 1".into()));
        }
        let expected = table_len(size, arity)
            .ok_or_else(|| OrderError::BadTable(format!("{size}^{arity} entries overflow")))?;
        if values.len() != expected {
            return Err(OrderError::BadTable(format!(
                "expected {expected} entries, got {}",
                values.len()
            )));
        }
        if let Some(&bad) = values.iter().find(|&&v| v >= size) {
            return Err(OrderError::UnknownElement { id: bad, size });
        }
        Ok(OperationTable {
            arity,
            size,
            values,
        })
    }

    /// Tabulates `f` over every argument tuple.
    pub fn from_fn(
        arity: usize,
        size: usize,
        mut f: impl FnMut(&[ElemId]) -> ElemId,
    ) -> Result<Self, OrderError> {
        let len = table_len(size, arity)
            .ok_or_else(|| OrderError::BadTable(format!("{size}^{arity} entries overflow")))?;
        let mut args = vec![0; arity];
        let mut values = Vec::with_capacity(len);
        for idx in 0..len {
            decode(idx, size, &mut args);
            values.push(f(&args));
        }
        OperationTable::new(arity, size, values)
    }

    pub fn identity(size: usize) -> Self {
        OperationTable::from_fn(1, size, |a| a[0]).expect("identity table")
    }

    pub fn constant(arity: usize, size: usize, value: ElemId) -> Result<Self, OrderError> {
        OperationTable::from_fn(arity, size, |_| value)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn values(&self) -> &[ElemId] {
        &self.values
    }

    pub fn index_of(&self, args: &[ElemId]) -> usize {
        debug_assert_eq!(args.len(), self.arity);
        args.iter().fold(0, |acc, &a| acc * self.size + a)
    }

    pub fn apply(&self, args: &[ElemId]) -> ElemId {
        self.values[self.index_of(args)]
    }

    /// Checked application for arguments coming from outside.
    pub fn try_apply(&self, args: &[ElemId]) -> Result<ElemId, OrderError> {
        if args.len() != self.arity {
            return Err(OrderError::BadTable(format!(
                "{} arguments for arity {}",
                args.len(),
                self.arity
            )));
        }
        if let Some(&id) = args.iter().find(|&&a| a >= self.size) {
            return Err(OrderError::UnknownElement {
                id,
                size: self.size,
            });
        }
        Ok(self.apply(args))
    }

    /// Every `(arguments, value)` row in table order.
    pub fn rows(&self) -> impl Iterator<Item = (Vec<ElemId>, ElemId)> + '_ {
        self.values.iter().enumerate().map(move |(idx, &v)| {
            let mut args = vec![0; self.arity];
            decode(idx, self.size, &mut args);
            (args, v)
        })
    }

    /// Conjugates the table by a bijection `map` from this carrier to another
    /// carrier of the same size: `g(map(a)) = map(f(a))`.
    pub fn transport(&self, map: &[ElemId]) -> OperationTable {
        let mut values = vec![0; self.values.len()];
        let mut image = vec![0; self.arity];
        for (args, v) in self.rows() {
            for (slot, &a) in image.iter_mut().zip(&args) {
                *slot = map[a];
            }
            let idx = image.iter().fold(0, |acc, &a| acc * self.size + a);
            values[idx] = map[v];
        }
        OperationTable {
            arity: self.arity,
            size: self.size,
            values,
        }
    }
}

pub(crate) fn table_len(size: usize, arity: usize) -> Option<usize> {
    size.checked_pow(u32::try_from(arity).ok()?)
}

fn decode(mut idx: usize, size: usize, args: &mut [ElemId]) {
    for slot in args.iter_mut().rev() {
        *slot = idx % size;
        idx /= size;
    }
}
