use rand::seq::SliceRandom;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::caps::Caps;
use crate::order::table_len;
use crate::order::{set_label, tuples_of, ElemId, OperationTable, Poset};
use crate::structure::{Relation, Structure};

use super::GenError;

/// The generator behind every seeded construction: ChaCha8 seeded through
/// `seed_from_u64`, which is specified and portable.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn element_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{i}")).collect()
}

/// A random poset on `size` elements: random DAG edges over a shuffled
/// order, closed transitively.
pub fn gen_poset(seed: u64, size: usize) -> Result<Poset, GenError> {
    gen_poset_with(&mut rng(seed), size)
}

pub(crate) fn gen_poset_with(rng: &mut ChaCha8Rng, size: usize) -> Result<Poset, GenError> {
    if !(1..=12).contains(&size) {
        return Err(GenError::SizeOutOfRange {
            what: "poset",
            size,
            max: 12,
        });
    }
    let density: f64 = rng.random_range(0.15..0.65);
    let mut order: Vec<ElemId> = (0..size).collect();
    order.shuffle(rng);
    let mut pairs = Vec::new();
    for i in 0..size {
        for j in i + 1..size {
            if rng.random_bool(density) {
                pairs.push((order[i], order[j]));
            }
        }
    }
    Ok(Poset::from_pairs(element_labels(size), &pairs).expect("edges follow a linear order"))
}

/// The lattice of down-sets of `base`, ordered by inclusion, listed by size
/// and then by bitmask.
pub fn downset_lattice(base: &Poset) -> Result<Poset, GenError> {
    let n = base.len();
    if n > 6 {
        return Err(GenError::SizeOutOfRange {
            what: "downset base",
            size: n,
            max: 6,
        });
    }
    let below: Vec<u64> = base
        .elements()
        .map(|x| base.down_set(x).ones().fold(0, |m, b| m | 1 << b))
        .collect();
    let mut downsets: Vec<u64> = (0..1u64 << n)
        .filter(|&m| (0..n).all(|x| m >> x & 1 == 0 || below[x] & !m == 0))
        .collect();
    downsets.sort_by_key(|&m| (m.count_ones(), m));
    let labels = downsets
        .iter()
        .map(|&m| set_label((0..n).filter(|&x| m >> x & 1 == 1).map(|x| base.label(x))))
        .collect();
    Ok(Poset::from_leq(labels, |a, b| downsets[a] & !downsets[b] == 0).expect("inclusion"))
}

/// Down-set lattice of a random base poset with `base_size` elements.
pub fn gen_downset_lattice(seed: u64, base_size: usize) -> Result<Poset, GenError> {
    if !(1..=4).contains(&base_size) {
        return Err(GenError::SizeOutOfRange {
            what: "downset base",
            size: base_size,
            max: 4,
        });
    }
    downset_lattice(&gen_poset(seed, base_size)?)
}

/// A finite lattice satisfying `a & (b | c) = (a & b) | (a & c)`, which by
/// Birkhoff is exactly a down-set lattice up to isomorphism.
pub fn is_distributive_lattice(p: &Poset) -> bool {
    if !p.is_lattice() {
        return false;
    }
    let join = |a, b| p.join(a, b).expect("lattice");
    let meet = |a, b| p.meet(a, b).expect("lattice");
    p.elements().all(|a| {
        p.elements().all(|b| {
            p.elements()
                .all(|c| meet(a, join(b, c)) == join(meet(a, b), meet(a, c)))
        })
    })
}

/// Extends values on tuples of join-irreducibles to the whole lattice:
/// `f(a) = join { assign(j) : j_k <= a_k, j_k join-irreducible }`.
///
/// On a distributive lattice every join-irreducible is join-prime, so the
/// result preserves all joins in every argument, including the empty join.
pub fn extend_by_joins(
    lattice: &Poset,
    arity: usize,
    mut assign: impl FnMut(&[ElemId]) -> ElemId,
) -> Result<OperationTable, GenError> {
    if !is_distributive_lattice(lattice) {
        return Err(GenError::NotDownsetLattice);
    }
    let irreducibles = lattice.join_irreducibles();
    let bottom = lattice.bottom().expect("finite lattice");
    let picks = tuples_of(&vec![irreducibles.len(); arity]);
    let values: Vec<(Vec<ElemId>, ElemId)> = picks
        .into_iter()
        .map(|pick| {
            let js: Vec<ElemId> = pick.iter().map(|&i| irreducibles[i]).collect();
            let v = assign(&js);
            (js, v)
        })
        .collect();
    check_table_cap(lattice.len(), arity)?;
    Ok(OperationTable::from_fn(arity, lattice.len(), |args| {
        values
            .iter()
            .filter(|(js, _)| js.iter().zip(args).all(|(&j, &a)| lattice.leq(j, a)))
            .fold(bottom, |acc, &(_, v)| lattice.join(acc, v).expect("lattice"))
    })?)
}

fn check_table_cap(size: usize, arity: usize) -> Result<(), GenError> {
    let cap = Caps::current().table;
    match table_len(size, arity) {
        Some(len) if len <= cap => Ok(()),
        other => Err(GenError::CapExceeded {
            what: "operation table",
            size: other.unwrap_or(usize::MAX),
            cap,
        }),
    }
}

/// A random completely additive operation on a distributive lattice.
pub fn gen_additive_op(seed: u64, lattice: &Poset, arity: usize) -> Result<OperationTable, GenError> {
    let mut r = rng(seed);
    let n = lattice.len();
    extend_by_joins(lattice, arity, |_| r.random_range(0..n))
}

/// A random operation preserving joins of nonempty sets: an additive
/// operation joined with a random constant. It fails to be normal whenever
/// the constant is not the least element.
pub fn gen_quasi_op(seed: u64, lattice: &Poset, arity: usize) -> Result<OperationTable, GenError> {
    let mut r = rng(seed);
    let n = lattice.len();
    let base = extend_by_joins(lattice, arity, |_| r.random_range(0..n))?;
    let c = r.random_range(0..n);
    Ok(OperationTable::from_fn(arity, n, |args| {
        lattice.join(base.apply(args), c).expect("lattice")
    })?)
}

/// A random monotone operation: random values repaired upward along a linear
/// extension so that each value is above the values at all immediate
/// predecessors.
pub fn gen_monotone_op(seed: u64, poset: &Poset, arity: usize) -> Result<OperationTable, GenError> {
    let mut r = rng(seed);
    gen_monotone_op_with(&mut r, poset, arity)
}

pub(crate) fn gen_monotone_op_with(
    r: &mut ChaCha8Rng,
    poset: &Poset,
    arity: usize,
) -> Result<OperationTable, GenError> {
    check_table_cap(poset.len(), arity)?;
    for _ in 0..8 {
        if let Some(t) = monotone_attempt(r, poset, arity, None) {
            return Ok(t);
        }
    }
    let chain = random_maximal_chain(r, poset);
    Ok(monotone_attempt(r, poset, arity, Some(&chain)).expect("chain-valued repair cannot dead-end"))
}

fn random_maximal_chain(r: &mut ChaCha8Rng, p: &Poset) -> Vec<ElemId> {
    let covers = p.covers();
    let minimal: Vec<ElemId> = p
        .elements()
        .filter(|&e| p.down_set(e).count_ones(..) == 1)
        .collect();
    let mut chain = vec![minimal[r.random_range(0..minimal.len())]];
    loop {
        let top = *chain.last().expect("nonempty");
        let next: Vec<ElemId> = covers.iter().filter(|c| c.0 == top).map(|c| c.1).collect();
        if next.is_empty() {
            return chain;
        }
        chain.push(next[r.random_range(0..next.len())]);
    }
}

fn monotone_attempt(
    r: &mut ChaCha8Rng,
    p: &Poset,
    arity: usize,
    within: Option<&[ElemId]>,
) -> Option<OperationTable> {
    let n = p.len();
    let extension = p.linear_extension();
    let mut rank = vec![0; n];
    for (i, &e) in extension.iter().enumerate() {
        rank[e] = i;
    }
    let covers = p.covers();
    let lower_covers: Vec<Vec<ElemId>> = p
        .elements()
        .map(|b| covers.iter().filter(|c| c.1 == b).map(|c| c.0).collect())
        .collect();
    let palette: Vec<ElemId> = within.map_or_else(|| extension.clone(), |c| c.to_vec());

    let mut tuples = tuples_of(&vec![n; arity]);
    tuples.sort_by_key(|t| t.iter().map(|&x| rank[x]).sum::<usize>());
    let index = |t: &[ElemId]| t.iter().fold(0, |acc, &a| acc * n + a);
    let mut values: Vec<Option<ElemId>> = vec![None; n.pow(arity as u32)];
    for t in &tuples {
        let mut lower = Vec::new();
        for j in 0..arity {
            for &c in &lower_covers[t[j]] {
                let mut below = t.clone();
                below[j] = c;
                lower.push(values[index(&below)].expect("predecessors come first"));
            }
        }
        let allowed = |v: ElemId| lower.iter().all(|&l| p.leq(l, v));
        let draw = palette[r.random_range(0..palette.len())];
        let value = if allowed(draw) {
            draw
        } else {
            // Round up: the first allowed palette entry at or after the draw
            // in linear-extension order, else the first allowed one.
            let mut candidates: Vec<ElemId> = palette.iter().copied().filter(|&v| allowed(v)).collect();
            candidates.sort_by_key(|&v| rank[v]);
            match candidates.iter().find(|&&v| rank[v] >= rank[draw]) {
                Some(&v) => v,
                None => *candidates.first()?,
            }
        };
        values[index(t)] = Some(value);
    }
    OperationTable::new(arity, n, values.into_iter().map(|v| v.expect("filled")).collect()).ok()
}

/// A random relational structure on `size` elements with the given
/// relation names and arities; each tuple is present with a random density.
pub fn gen_relational_structure(
    seed: u64,
    size: usize,
    relations: &[(&str, usize)],
) -> Result<Structure, GenError> {
    if !(1..=6).contains(&size) {
        return Err(GenError::SizeOutOfRange {
            what: "relational structure",
            size,
            max: 6,
        });
    }
    let mut r = rng(seed);
    let labels: Vec<String> = (0..size).map(|i| format!("u{i}")).collect();
    let mut s = Structure::relational(format!("rs{seed}"), labels)?;
    for &(name, arity) in relations {
        let density: f64 = r.random_range(0.2..0.6);
        let tuples: Vec<Vec<ElemId>> = tuples_of(&vec![size; arity])
            .into_iter()
            .filter(|_| r.random_bool(density))
            .collect();
        s = s.with_relation(name, Relation::new(arity, tuples))?;
    }
    Ok(s)
}

/// Every partial order on `n` labelled elements (`n <= 4`).
pub fn all_labeled_posets(n: usize) -> Result<Vec<Poset>, GenError> {
    if !(1..=4).contains(&n) {
        return Err(GenError::SizeOutOfRange {
            what: "labelled poset enumeration",
            size: n,
            max: 4,
        });
    }
    let off_diagonal: Vec<(ElemId, ElemId)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    let mut out = Vec::new();
    for mask in 0u32..1 << off_diagonal.len() {
        let holds = |a: ElemId, b: ElemId| {
            a == b
                || off_diagonal
                    .iter()
                    .position(|&pr| pr == (a, b))
                    .is_some_and(|i| mask >> i & 1 == 1)
        };
        if let Ok(p) = Poset::from_leq(element_labels(n), holds) {
            out.push(p);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::order::{
        is_completely_additive, is_monotone, is_quasi_complete, lattice_sup_preservation, Preservation,
    };

    #[test]
    fn poset_generation() {
        assert_eq!(gen_poset(3, 1).unwrap().len(), 1);
        assert_eq!(gen_poset(9, 7).unwrap(), gen_poset(9, 7).unwrap());
        let p = gen_poset(5, 5).unwrap();
        // Round trip through the validator from its own pairs.
        let labels = p.labels().to_vec();
        assert_eq!(Poset::from_pairs(labels, &p.pairs()).unwrap(), p);
        assert!(gen_poset(1, 0).is_err());
        assert!(gen_poset(1, 13).is_err());
    }

    #[test]
    fn downset_lattices_of_small_bases() {
        let b = downset_lattice(&fixtures::antichain(2)).unwrap();
        assert_eq!(b.len(), 4);
        assert_eq!(b.labels(), &["{}", "{a}", "{b}", "{a,b}"]);
        assert_eq!(b.covers().len(), 4);

        let c = downset_lattice(&validate_two_chain()).unwrap();
        assert_eq!(c.labels(), &["{}", "{a}", "{a,b}"]);
        assert_eq!(c.covers(), vec![(0, 1), (1, 2)]);

        assert_eq!(gen_downset_lattice(0, 1).unwrap().len(), 2);
        assert!(gen_downset_lattice(0, 5).is_err());
    }

    fn validate_two_chain() -> Poset {
        crate::order::validate_poset(&["a", "b"], &[("a", "b")]).unwrap()
    }

    #[test]
    fn join_extension_examples() {
        let b4 = fixtures::boolean4();
        let bottom = extend_by_joins(&b4, 1, |_| 0).unwrap();
        assert_eq!(bottom, OperationTable::constant(1, 4, 0).unwrap());
        let id = extend_by_joins(&b4, 1, |js| js[0]).unwrap();
        assert_eq!(id, OperationTable::identity(4));
        assert_eq!(
            extend_by_joins(&fixtures::m3(), 1, |js| js[0]).unwrap_err(),
            GenError::NotDownsetLattice
        );
    }

    #[test]
    fn generated_additive_ops_pass_the_checker() {
        for seed in 0..60 {
            let l = gen_downset_lattice(seed, 1 + seed as usize % 4).unwrap();
            let arity = if l.len() <= 8 { 1 + seed as usize % 2 } else { 1 };
            let f = gen_additive_op(seed, &l, arity).unwrap();
            let q = gen_quasi_op(seed, &l, arity).unwrap();
            assert!(lattice_sup_preservation(&l, &f, Preservation::Complete).unwrap().holds());
            assert!(lattice_sup_preservation(&l, &q, Preservation::Quasi).unwrap().holds());
            if l.len() <= Caps::current().additive_carrier(arity) {
                assert!(is_completely_additive(&l, &f).unwrap().holds(), "{l:?} {f:?}");
                assert!(is_quasi_complete(&l, &q).unwrap().holds());
            }
        }
        let b4 = fixtures::boolean4();
        for seed in 0..20 {
            let f = gen_additive_op(seed, &b4, 2).unwrap();
            assert!(is_completely_additive(&b4, &f).unwrap().holds());
        }
    }

    #[test]
    fn generated_monotone_ops_pass_the_checker() {
        for seed in 0..80 {
            let p = gen_poset(seed, 1 + seed as usize % 7).unwrap();
            let f = gen_monotone_op(seed, &p, 1 + seed as usize % 2).unwrap();
            assert!(is_monotone(&p, &f).unwrap().holds(), "{p:?} {f:?}");
        }
        for p in fixtures::posets() {
            for seed in 0..10 {
                let f = gen_monotone_op(seed, &p, 2).unwrap();
                assert!(is_monotone(&p, &f).unwrap().holds());
            }
        }
    }

    #[test]
    fn monotone_maps_on_two_chain() {
        let p = fixtures::two_chain();
        let mut seen = std::collections::BTreeSet::new();
        for seed in 0..50 {
            let f = gen_monotone_op(seed, &p, 1).unwrap();
            seen.insert(f.values().to_vec());
            assert_eq!(f, gen_monotone_op(seed, &p, 1).unwrap());
        }
        let allowed: std::collections::BTreeSet<Vec<usize>> =
            [vec![0, 0], vec![0, 1], vec![1, 1]].into_iter().collect();
        assert!(seen.is_subset(&allowed));
        assert_eq!(seen, allowed);
    }

    #[test]
    fn labelled_poset_counts() {
        let counts: Vec<usize> = (1..=4).map(|n| all_labeled_posets(n).unwrap().len()).collect();
        assert_eq!(counts, vec![1, 3, 19, 219]);
    }

    #[test]
    fn relational_structures_are_deterministic() {
        let a = gen_relational_structure(4, 3, &[("R", 2), ("T", 3)]).unwrap();
        assert_eq!(a, gen_relational_structure(4, 3, &[("R", 2), ("T", 3)]).unwrap());
        assert!(a.order().is_discrete());
        assert_eq!(a.relation("T").unwrap().arity(), 3);
    }
}
