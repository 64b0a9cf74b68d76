//! Monotonicity and sup preservation of operations on finite posets.
//!
//! An `n`-ary `f` is completely additive when, for all `X_1, ..., X_n` whose
//! suprema `s_1, ..., s_n` all exist, the image set
//! `{ f(x_1, ..., x_n) : x_j in X_j }` has a supremum and it equals
//! `f(s_1, ..., s_n)`. Tuples where some `sup X_j` is missing impose nothing.
//! Empty `X_j` are included; dropping them gives quasi-completeness, which
//! does not force `f` to send the least element to itself.
//!
//! The exhaustive check enumerates subset tuples in ascending bitmask order
//! (first coordinate most significant) and reports the first violation.

use crate::caps::{Caps, MAX_ENUMERATION_CARRIER};

use super::table::table_len;
use super::{Direction, ElemId, OperationTable, OrderError, Poset, Sup};

/// Which subsets count when checking sup preservation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preservation {
    /// All subsets, the empty one included.
    Complete,
    /// Nonempty subsets only.
    Quasi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Holds,
    Fails(W),
}

impl<W> Verdict<W> {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Holds => None,
            Verdict::Fails(w) => Some(w),
        }
    }
}

/// Two comparable argument tuples whose images are not comparable the same
/// way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotoneWitness {
    pub lower: Vec<ElemId>,
    pub upper: Vec<ElemId>,
    pub f_lower: ElemId,
    pub f_upper: ElemId,
}

/// A tuple of subsets on which `f` fails to carry suprema to the supremum of
/// the image.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdditivityWitness {
    pub subsets: Vec<Vec<ElemId>>,
    pub sups: Vec<ElemId>,
    pub image_sup: Sup,
    pub f_of_sups: ElemId,
}

impl AdditivityWitness {
    pub fn describe(&self, p: &Poset) -> String {
        let sets: Vec<String> = self
            .subsets
            .iter()
            .map(|s| super::set_label(s.iter().map(|&x| p.label(x))))
            .collect();
        let sups: Vec<&str> = self.sups.iter().map(|&s| p.label(s)).collect();
        let image = match self.image_sup {
            Sup::Exists(e) => p.label(e).to_string(),
            other => format!("none ({})", other.reason(Direction::Up).unwrap_or("")),
        };
        format!(
            "X=[{}] sups=[{}] f(sups)={} sup(image)={}",
            sets.join(", "),
            sups.join(", "),
            p.label(self.f_of_sups),
            image
        )
    }
}

/// Which unary instance of an `n`-ary operation: the free argument sits at
/// `position` (0-based) and the other `n - 1` arguments are `fixed`, in order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UnaryInstanceSpec {
    pub position: usize,
    pub fixed: Vec<ElemId>,
}

impl UnaryInstanceSpec {
    pub fn splice(&self, z: ElemId) -> Vec<ElemId> {
        let mut args = self.fixed.clone();
        args.insert(self.position, z);
        args
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InstanceVerdict {
    pub spec: UnaryInstanceSpec,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaReport {
    pub joint: Verdict<AdditivityWitness>,
    pub instances: Vec<InstanceVerdict>,
    pub agree: bool,
}

impl LemmaReport {
    pub fn all_instances_hold(&self) -> bool {
        self.instances.iter().all(|i| i.holds)
    }
}

/// Supremum of every subset of a small poset, indexed by bitmask.
#[derive(Clone, Debug)]
pub struct SupTable {
    size: usize,
    sups: Vec<Option<ElemId>>,
}

impl SupTable {
    pub fn new(p: &Poset) -> Result<SupTable, OrderError> {
        let n = p.len();
        if n > MAX_ENUMERATION_CARRIER {
            return Err(OrderError::CapExceeded {
                what: "subset enumeration carrier",
                size: n,
                cap: MAX_ENUMERATION_CARRIER,
            });
        }
        let up: Vec<u64> = p.elements().map(|a| p.up_mask(a)).collect();
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let count = 1usize << n;
        let mut upper = vec![full; count];
        let mut sups = vec![None; count];
        for mask in 0..count {
            if mask > 0 {
                let low = mask.trailing_zeros() as usize;
                upper[mask] = upper[mask & (mask - 1)] & up[low];
            }
            let ub = upper[mask];
            let mut rest = ub;
            while rest != 0 {
                let u = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if ub & !up[u] == 0 {
                    sups[mask] = Some(u);
                    break;
                }
            }
        }
        Ok(SupTable { size: n, sups })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, mask: u64) -> Option<ElemId> {
        self.sups[mask as usize]
    }
}

fn check_carrier(p: &Poset, f: &OperationTable) -> Result<(), OrderError> {
    if f.size() != p.len() {
        return Err(OrderError::ArityCarrierMismatch {
            table: f.size(),
            poset: p.len(),
        });
    }
    Ok(())
}

fn check_cap(p: &Poset, arity: usize) -> Result<(), OrderError> {
    let cap = Caps::current().additive_carrier(arity);
    if p.len() > cap {
        return Err(OrderError::CapExceeded {
            what: "carrier for exhaustive additivity check",
            size: p.len(),
            cap,
        });
    }
    Ok(())
}

fn bits(mask: u64) -> impl Iterator<Item = ElemId> {
    let mut rest = mask;
    std::iter::from_fn(move || {
        if rest == 0 {
            None
        } else {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(b)
        }
    })
}

/// Checks that `f` preserves the order in every argument.
pub fn is_monotone(p: &Poset, f: &OperationTable) -> Result<Verdict<MonotoneWitness>, OrderError> {
    check_carrier(p, f)?;
    // Coordinatewise monotone implies monotone for the product order, so it
    // suffices to move one argument at a time.
    for (args, value) in f.rows() {
        for j in 0..f.arity() {
            for b in p.up_set(args[j]).ones() {
                if b == args[j] {
                    continue;
                }
                let mut upper = args.clone();
                upper[j] = b;
                let raised = f.apply(&upper);
                if !p.leq(value, raised) {
                    return Ok(Verdict::Fails(MonotoneWitness {
                        lower: args,
                        upper,
                        f_lower: value,
                        f_upper: raised,
                    }));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Exhaustive check that `f` preserves all existing suprema.
pub fn is_completely_additive(
    p: &Poset,
    f: &OperationTable,
) -> Result<Verdict<AdditivityWitness>, OrderError> {
    check_preservation(p, f, &SupTable::new(p)?, Preservation::Complete)
}

/// Exhaustive check that `f` preserves all existing suprema of nonempty sets.
pub fn is_quasi_complete(
    p: &Poset,
    f: &OperationTable,
) -> Result<Verdict<AdditivityWitness>, OrderError> {
    check_preservation(p, f, &SupTable::new(p)?, Preservation::Quasi)
}

/// Sup-preservation verdict by whichever route fits: the exhaustive check
/// within the carrier caps, the lattice route beyond them.
pub fn preservation_verdict(
    p: &Poset,
    f: &OperationTable,
    mode: Preservation,
) -> Result<Verdict<AdditivityWitness>, OrderError> {
    if p.len() <= Caps::current().additive_carrier(f.arity()) {
        check_preservation(p, f, &SupTable::new(p)?, mode)
    } else if p.is_lattice() {
        lattice_sup_preservation(p, f, mode)
    } else {
        check_cap(p, f.arity()).map(|_| Verdict::Holds)
    }
}

/// Exhaustive sup-preservation check against a precomputed [`SupTable`].
pub fn check_preservation(
    p: &Poset,
    f: &OperationTable,
    table: &SupTable,
    mode: Preservation,
) -> Result<Verdict<AdditivityWitness>, OrderError> {
    check_carrier(p, f)?;
    check_cap(p, f.arity())?;
    debug_assert_eq!(table.size(), p.len());
    let n = p.len();
    let k = f.arity();
    let subsets = 1usize << n;

    let domain: Vec<u64> = (0..subsets as u64)
        .filter(|&m| table.get(m).is_some() && (mode == Preservation::Complete || m != 0))
        .collect();
    if domain.is_empty() {
        return Ok(Verdict::Holds);
    }

    // last[prefix][mask]: image bits of f(prefix.., x) for x in mask.
    let prefixes = table_len(n, k - 1).expect("within caps");
    let mut last = vec![0u64; prefixes * subsets];
    let mut args = vec![0; k];
    for prefix in 0..prefixes {
        let mut rest = prefix;
        for slot in args[..k - 1].iter_mut().rev() {
            *slot = rest % n;
            rest /= n;
        }
        let row = &mut last[prefix * subsets..(prefix + 1) * subsets];
        for mask in 1..subsets {
            let low = mask.trailing_zeros() as usize;
            args[k - 1] = low;
            row[mask] = row[mask & (mask - 1)] | (1u64 << f.apply(&args));
        }
    }

    let image_of = |masks: &[u64]| -> u64 {
        fn go(masks: &[u64], n: usize, subsets: usize, last: &[u64], prefix: usize) -> u64 {
            if masks.len() == 1 {
                return last[prefix * subsets + masks[0] as usize];
            }
            bits(masks[0]).fold(0, |acc, a| {
                acc | go(&masks[1..], n, subsets, last, prefix * n + a)
            })
        }
        go(masks, n, subsets, &last, 0)
    };

    let mut cursor = vec![0usize; k];
    let mut masks = vec![0u64; k];
    let mut sups = vec![0; k];
    loop {
        for j in 0..k {
            masks[j] = domain[cursor[j]];
            sups[j] = table.get(masks[j]).expect("domain has sups");
        }
        let image = image_of(&masks);
        let expected = f.apply(&sups);
        if table.get(image) != Some(expected) {
            return Ok(Verdict::Fails(AdditivityWitness {
                subsets: masks.iter().map(|&m| bits(m).collect()).collect(),
                sups: sups.clone(),
                image_sup: p.sup_unchecked(bits(image), Direction::Up),
                f_of_sups: expected,
            }));
        }
        // Odometer, last coordinate fastest.
        let mut j = k;
        loop {
            if j == 0 {
                return Ok(Verdict::Holds);
            }
            j -= 1;
            cursor[j] += 1;
            if cursor[j] < domain.len() {
                break;
            }
            cursor[j] = 0;
        }
    }
}

/// Checks sup preservation on one tuple of subsets by direct computation.
/// Returns the witness if the tuple violates it; `None` when it holds or
/// when some `sup X_j` does not exist.
pub fn sup_preservation_at(
    p: &Poset,
    f: &OperationTable,
    subsets: &[Vec<ElemId>],
) -> Result<Option<AdditivityWitness>, OrderError> {
    check_carrier(p, f)?;
    if subsets.len() != f.arity() {
        return Err(OrderError::BadTable(format!(
            "{} subsets for arity {}",
            subsets.len(),
            f.arity()
        )));
    }
    let mut sups = Vec::with_capacity(subsets.len());
    for xs in subsets {
        match p.sup(xs, Direction::Up)? {
            Sup::Exists(s) => sups.push(s),
            _ => return Ok(None),
        }
    }
    let sizes: Vec<usize> = subsets.iter().map(Vec::len).collect();
    let image: Vec<ElemId> = super::tuples_of(&sizes)
        .into_iter()
        .map(|pick| {
            let args: Vec<ElemId> = pick.iter().zip(subsets).map(|(&i, xs)| xs[i]).collect();
            f.apply(&args)
        })
        .collect();
    let image_sup = p.sup_unchecked(image, Direction::Up);
    let f_of_sups = f.apply(&sups);
    if image_sup == Sup::Exists(f_of_sups) {
        Ok(None)
    } else {
        Ok(Some(AdditivityWitness {
            subsets: subsets.to_vec(),
            sups,
            image_sup,
            f_of_sups,
        }))
    }
}

/// The unary function `z -> f(a_1, .., z, .., a_n)` with `z` at
/// `spec.position`.
pub fn unary_instance(
    f: &OperationTable,
    spec: &UnaryInstanceSpec,
) -> Result<OperationTable, OrderError> {
    if f.arity() < 2 {
        return Err(OrderError::ArityTooSmall(f.arity()));
    }
    if spec.position >= f.arity() {
        return Err(OrderError::PositionOutOfRange {
            position: spec.position,
            arity: f.arity(),
        });
    }
    if spec.fixed.len() != f.arity() - 1 {
        return Err(OrderError::BadTable(format!(
            "{} fixed arguments for arity {}",
            spec.fixed.len(),
            f.arity()
        )));
    }
    if let Some(&id) = spec.fixed.iter().find(|&&a| a >= f.size()) {
        return Err(OrderError::UnknownElement { id, size: f.size() });
    }
    OperationTable::from_fn(1, f.size(), |z| f.apply(&spec.splice(z[0])))
}

/// Every unary instance of an `arity`-ary operation over `size` elements.
pub fn unary_instance_specs(arity: usize, size: usize) -> Vec<UnaryInstanceSpec> {
    let fixed_tuples = super::tuples_of(&vec![size; arity - 1]);
    (0..arity)
        .flat_map(|position| {
            fixed_tuples.iter().map(move |fixed| UnaryInstanceSpec {
                position,
                fixed: fixed.clone(),
            })
        })
        .collect()
}

/// Decides complete additivity of `f` both jointly and through all of its
/// unary instances, and reports whether the two verdicts agree.
pub fn check_lemma_equivalence(p: &Poset, f: &OperationTable) -> Result<LemmaReport, OrderError> {
    check_lemma_equivalence_for(p, f, Preservation::Complete)
}

pub fn check_lemma_equivalence_for(
    p: &Poset,
    f: &OperationTable,
    mode: Preservation,
) -> Result<LemmaReport, OrderError> {
    if f.arity() < 2 {
        return Err(OrderError::ArityTooSmall(f.arity()));
    }
    check_carrier(p, f)?;
    let table = SupTable::new(p)?;
    let joint = check_preservation(p, f, &table, mode)?;
    let mut instances = Vec::new();
    for spec in unary_instance_specs(f.arity(), p.len()) {
        let g = unary_instance(f, &spec)?;
        let holds = check_preservation(p, &g, &table, mode)?.holds();
        instances.push(InstanceVerdict { spec, holds });
    }
    let agree = joint.holds() == instances.iter().all(|i| i.holds);
    Ok(LemmaReport {
        joint,
        instances,
        agree,
    })
}

/// Sup preservation on a finite lattice, decided without subset enumeration:
/// every unary instance must preserve binary joins, and for
/// [`Preservation::Complete`] also send the least element to the least
/// element. Scales to lattices far beyond the exhaustive caps.
pub fn lattice_sup_preservation(
    p: &Poset,
    f: &OperationTable,
    mode: Preservation,
) -> Result<Verdict<AdditivityWitness>, OrderError> {
    check_carrier(p, f)?;
    if !p.is_lattice() {
        return Err(OrderError::NotALattice);
    }
    let n = p.len();
    let bottom = p.bottom().ok_or(OrderError::NotALattice)?;
    let join: Vec<ElemId> = (0..n * n)
        .map(|i| p.join(i / n, i % n).expect("lattice"))
        .collect();
    let k = f.arity();
    for spec in unary_instance_specs(k, n) {
        let at = |z: ElemId| f.apply(&spec.splice(z));
        let witness = |set: Vec<ElemId>, s: ElemId, image_sup: ElemId| {
            let mut subsets: Vec<Vec<ElemId>> = spec.fixed.iter().map(|&a| vec![a]).collect();
            subsets.insert(spec.position, set);
            AdditivityWitness {
                subsets,
                sups: spec.splice(s),
                image_sup: Sup::Exists(image_sup),
                f_of_sups: at(s),
            }
        };
        if mode == Preservation::Complete && at(bottom) != bottom {
            // The image of an empty coordinate is empty.
            let mut w = witness(Vec::new(), bottom, bottom);
            w.image_sup = Sup::Exists(bottom);
            return Ok(Verdict::Fails(w));
        }
        for a in 0..n {
            for b in a + 1..n {
                let lhs = at(join[a * n + b]);
                let rhs = join[at(a) * n + at(b)];
                if lhs != rhs {
                    return Ok(Verdict::Fails(witness(vec![a, b], join[a * n + b], rhs)));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn all_subsets(n: usize) -> Vec<Vec<ElemId>> {
        (0..1u64 << n).map(|m| bits(m).collect()).collect()
    }

    /// Naive oracle: every tuple of subsets, sups via `Poset::sup`.
    fn additive_oracle(p: &Poset, f: &OperationTable, mode: Preservation) -> bool {
        let subsets = all_subsets(p.len());
        let choices: Vec<&Vec<ElemId>> = subsets
            .iter()
            .filter(|s| mode == Preservation::Complete || !s.is_empty())
            .collect();
        let picks = crate::order::tuples_of(&vec![choices.len(); f.arity()]);
        picks.into_iter().all(|pick| {
            let tuple: Vec<Vec<ElemId>> = pick.iter().map(|&i| choices[i].clone()).collect();
            sup_preservation_at(p, f, &tuple).unwrap().is_none()
        })
    }

    #[test]
    fn identity_is_additive_everywhere() {
        for p in fixtures::posets() {
            let id = OperationTable::identity(p.len());
            assert!(is_monotone(&p, &id).unwrap().holds());
            assert!(is_completely_additive(&p, &id).unwrap().holds());
            assert!(is_quasi_complete(&p, &id).unwrap().holds());
        }
    }

    #[test]
    fn complement_on_boolean_square_is_not_monotone() {
        let p = fixtures::boolean4();
        let neg = fixtures::boolean4_complement();
        let w = is_monotone(&p, &neg).unwrap();
        let w = w.witness().expect("complement is antitone");
        assert!(p.leq(w.lower[0], w.upper[0]));
        assert!(!p.leq(w.f_lower, w.f_upper));
        // The pair named by hand: bottom <= top, but top is not below bottom.
        let (bot, top) = (p.bottom().unwrap(), p.top().unwrap());
        assert_eq!((neg.apply(&[bot]), neg.apply(&[top])), (top, bot));
        assert!(!is_quasi_complete(&p, &neg).unwrap().holds());
    }

    #[test]
    fn join_on_boolean_square_is_quasi_but_not_normal() {
        let p = fixtures::boolean4();
        let join = fixtures::join_table(&p);
        assert!(is_monotone(&p, &join).unwrap().holds());
        assert!(is_quasi_complete(&p, &join).unwrap().holds());
        // Empty first argument: the image is empty but join(0, b) = b.
        let w = is_completely_additive(&p, &join).unwrap();
        let w = w.witness().expect("join is not normal");
        assert!(w.subsets.iter().any(Vec::is_empty));
    }

    #[test]
    fn constant_top_on_two_chain() {
        let p = Poset::chain(2);
        let f = OperationTable::constant(1, 2, 1).unwrap();
        let verdict = is_completely_additive(&p, &f).unwrap();
        let w = verdict.witness().expect("not normal");
        assert_eq!(w.subsets, vec![Vec::<ElemId>::new()]);
        assert_eq!(w.sups, vec![0]);
        assert_eq!(w.image_sup, Sup::Exists(0));
        assert_eq!(w.f_of_sups, 1);
        assert!(is_quasi_complete(&p, &f).unwrap().holds());
    }

    #[test]
    fn meet_on_m3_fails_at_named_witness() {
        let p = fixtures::m3();
        let meet = fixtures::meet_table(&p);
        let [pp, q, r] = ["p", "q", "r"].map(|l| p.index_of(l).unwrap());
        let w = sup_preservation_at(&p, &meet, &[vec![r], vec![pp, q]])
            .unwrap()
            .expect("distributivity fails in M3");
        assert_eq!(w.f_of_sups, r);
        assert_eq!(w.image_sup, Sup::Exists(p.bottom().unwrap()));
        assert!(!is_completely_additive(&p, &meet).unwrap().holds());
    }

    #[test]
    fn exhaustive_checker_matches_oracle_on_fixtures() {
        for p in fixtures::posets().into_iter().filter(|p| p.len() <= 5) {
            let n = p.len();
            // All unary maps on carriers up to 4, plus the lattice ops.
            if n <= 4 {
                for code in 0..n.pow(n as u32) {
                    let f = OperationTable::from_fn(1, n, |a| (code / n.pow(a[0] as u32)) % n)
                        .unwrap();
                    for mode in [Preservation::Complete, Preservation::Quasi] {
                        let table = SupTable::new(&p).unwrap();
                        assert_eq!(
                            check_preservation(&p, &f, &table, mode).unwrap().holds(),
                            additive_oracle(&p, &f, mode),
                            "{p:?} {f:?} {mode:?}"
                        );
                    }
                }
            }
            if p.is_lattice() {
                for f in [fixtures::join_table(&p), fixtures::meet_table(&p)] {
                    assert_eq!(
                        is_completely_additive(&p, &f).unwrap().holds(),
                        additive_oracle(&p, &f, Preservation::Complete)
                    );
                }
            }
        }
    }

    #[test]
    fn reported_witness_is_first_in_mask_order() {
        let p = fixtures::m3();
        let meet = fixtures::meet_table(&p);
        let w = is_completely_additive(&p, &meet).unwrap();
        let w = w.witness().unwrap().clone();
        assert!(sup_preservation_at(&p, &meet, &w.subsets).unwrap().is_some());
        let mask = |s: &[ElemId]| s.iter().fold(0u64, |m, &x| m | 1 << x);
        // No violation at a smaller first-coordinate mask.
        let first = mask(&w.subsets[0]);
        for m1 in 0..first {
            for m2 in 0..(1u64 << p.len()) {
                let tuple = vec![bits(m1).collect(), bits(m2).collect()];
                assert!(sup_preservation_at(&p, &meet, &tuple).unwrap().is_none());
            }
        }
    }

    #[test]
    fn unary_instances_of_join_and_meet() {
        let p = fixtures::boolean4();
        let join = fixtures::join_table(&p);
        let (bot, top) = (p.bottom().unwrap(), p.top().unwrap());
        let at_bot = UnaryInstanceSpec {
            position: 0,
            fixed: vec![bot],
        };
        assert_eq!(unary_instance(&join, &at_bot).unwrap(), OperationTable::identity(4));
        let at_top = UnaryInstanceSpec {
            position: 0,
            fixed: vec![top],
        };
        assert_eq!(
            unary_instance(&join, &at_top).unwrap(),
            OperationTable::constant(1, 4, top).unwrap()
        );

        let m3 = fixtures::m3();
        let meet = fixtures::meet_table(&m3);
        let id = |l: &str| m3.index_of(l).unwrap();
        let g = unary_instance(
            &meet,
            &UnaryInstanceSpec {
                position: 0,
                fixed: vec![id("r")],
            },
        )
        .unwrap();
        for (arg, want) in [("0", "0"), ("p", "0"), ("q", "0"), ("r", "r"), ("1", "r")] {
            assert_eq!(g.apply(&[id(arg)]), id(want));
        }
    }

    #[test]
    fn unary_instance_errors() {
        let join = fixtures::join_table(&fixtures::boolean4());
        assert_eq!(
            unary_instance(
                &join,
                &UnaryInstanceSpec {
                    position: 2,
                    fixed: vec![0]
                }
            ),
            Err(OrderError::PositionOutOfRange {
                position: 2,
                arity: 2
            })
        );
        assert_eq!(
            unary_instance(
                &OperationTable::identity(3),
                &UnaryInstanceSpec {
                    position: 0,
                    fixed: vec![]
                }
            ),
            Err(OrderError::ArityTooSmall(1))
        );
    }

    #[test]
    fn lemma_on_join_and_meet() {
        let b4 = fixtures::boolean4();
        let r = check_lemma_equivalence(&b4, &fixtures::join_table(&b4)).unwrap();
        assert!(!r.joint.holds() && !r.all_instances_hold() && r.agree);
        assert_eq!(r.instances.len(), 8);
        // Only the instances fixing the other argument at bottom are additive.
        let holding: Vec<_> = r.instances.iter().filter(|i| i.holds).map(|i| i.spec.fixed.clone()).collect();
        assert_eq!(holding, vec![vec![0], vec![0]]);
        let r = check_lemma_equivalence_for(&b4, &fixtures::join_table(&b4), Preservation::Quasi).unwrap();
        assert!(r.joint.holds() && r.all_instances_hold() && r.agree);

        let m3 = fixtures::m3();
        let r = check_lemma_equivalence(&m3, &fixtures::meet_table(&m3)).unwrap();
        assert!(!r.joint.holds());
        assert!(!r.all_instances_hold());
        assert!(r.agree);

        assert_eq!(
            check_lemma_equivalence(&b4, &OperationTable::identity(4)).unwrap_err(),
            OrderError::ArityTooSmall(1)
        );
    }

    #[test]
    fn caps_are_enforced() {
        let p = Poset::chain(9);
        let f = OperationTable::from_fn(2, 9, |a| a[0].max(a[1])).unwrap();
        assert!(matches!(
            is_completely_additive(&p, &f),
            Err(OrderError::CapExceeded { cap: 8, .. })
        ));
        let p = Poset::chain(13);
        assert!(matches!(
            is_completely_additive(&p, &OperationTable::identity(13)),
            Err(OrderError::CapExceeded { cap: 12, .. })
        ));
    }

    #[test]
    fn carrier_mismatch() {
        assert_eq!(
            is_monotone(&Poset::chain(2), &OperationTable::identity(3)).unwrap_err(),
            OrderError::ArityCarrierMismatch { table: 3, poset: 2 }
        );
    }

    #[test]
    fn lattice_route_agrees_with_exhaustive_route() {
        for p in fixtures::lattices() {
            let n = p.len();
            let mut candidates = vec![
                fixtures::join_table(&p),
                fixtures::meet_table(&p),
                OperationTable::identity(n),
            ];
            for c in 0..n {
                candidates.push(OperationTable::constant(1, n, c).unwrap());
                candidates.push(OperationTable::from_fn(1, n, |a| p.join(a[0], c).unwrap()).unwrap());
                candidates.push(OperationTable::from_fn(1, n, |a| p.meet(a[0], c).unwrap()).unwrap());
            }
            for f in &candidates {
                for mode in [Preservation::Complete, Preservation::Quasi] {
                    let table = SupTable::new(&p).unwrap();
                    assert_eq!(
                        lattice_sup_preservation(&p, f, mode).unwrap().holds(),
                        check_preservation(&p, f, &table, mode).unwrap().holds(),
                        "{p:?} {f:?} {mode:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn lattice_route_needs_a_lattice() {
        let p = fixtures::antichain(2);
        assert_eq!(
            lattice_sup_preservation(&p, &OperationTable::identity(2), Preservation::Quasi),
            Err(OrderError::NotALattice)
        );
    }
}
