//! Small named posets and lattices used throughout the tests and the demo.

use crate::order::{validate_poset, ElemId, OperationTable, Poset};

fn poset(elements: &[&str], pairs: &[(&str, &str)]) -> Poset {
    validate_poset(elements, pairs).expect("fixture is a valid poset")
}

/// `0 < 1`.
pub fn two_chain() -> Poset {
    Poset::chain(2)
}

/// `0 < 1 < 2`.
pub fn three_chain() -> Poset {
    Poset::chain(3)
}

/// The four-element Boolean lattice `0 < a, b < 1`.
pub fn boolean4() -> Poset {
    poset(
        &["0", "a", "b", "1"],
        &[("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")],
    )
}

/// The same lattice with letter labels, as a diamond.
pub fn diamond() -> Poset {
    poset(
        &["bot", "a", "b", "top"],
        &[("bot", "a"), ("bot", "b"), ("a", "top"), ("b", "top")],
    )
}

/// The five-element modular, non-distributive lattice with atoms `p, q, r`.
pub fn m3() -> Poset {
    poset(
        &["0", "p", "q", "r", "1"],
        &[
            ("0", "p"),
            ("0", "q"),
            ("0", "r"),
            ("p", "1"),
            ("q", "1"),
            ("r", "1"),
        ],
    )
}

/// The pentagon: `0 < a < c < 1` and `0 < b < 1`.
pub fn n5() -> Poset {
    poset(
        &["0", "a", "b", "c", "1"],
        &[("0", "a"), ("a", "c"), ("c", "1"), ("0", "b"), ("b", "1")],
    )
}

/// `n` pairwise incomparable elements labelled `a, b, ...`.
pub fn antichain(n: usize) -> Poset {
    let labels = (0..n)
        .map(|i| match u8::try_from(i) {
            Ok(i) if i < 26 => char::from(b'a' + i).to_string(),
            _ => format!("e{i}"),
        })
        .collect();
    Poset::discrete(labels).expect("antichain")
}

/// Two minimal elements below two maximal ones: no joins, no meets.
pub fn bowtie() -> Poset {
    poset(
        &["a", "b", "c", "d"],
        &[("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")],
    )
}

/// A chain below an antichain pair: bottom exists, no top.
pub fn vee() -> Poset {
    poset(&["0", "a", "b"], &[("0", "a"), ("0", "b")])
}

pub fn lattices() -> Vec<Poset> {
    vec![
        Poset::chain(1),
        two_chain(),
        three_chain(),
        boolean4(),
        m3(),
        n5(),
    ]
}

pub fn posets() -> Vec<Poset> {
    let mut all = lattices();
    all.extend([antichain(2), antichain(3), bowtie(), vee()]);
    all
}

pub fn join_table(p: &Poset) -> OperationTable {
    OperationTable::from_fn(2, p.len(), |a| p.join(a[0], a[1]).expect("lattice join"))
        .expect("join table")
}

pub fn meet_table(p: &Poset) -> OperationTable {
    OperationTable::from_fn(2, p.len(), |a| p.meet(a[0], a[1]).expect("lattice meet"))
        .expect("meet table")
}

/// Complement on [`boolean4`].
pub fn boolean4_complement() -> OperationTable {
    let swap: [ElemId; 4] = [3, 2, 1, 0];
    OperationTable::new(1, 4, swap.to_vec()).expect("complement table")
}
