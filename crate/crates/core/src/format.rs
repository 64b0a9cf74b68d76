//! Line-oriented text format for posets and relational structures.
//!
//! ```text
//! # comment
//! structure diamond
//! elements bot a b top
//! order
//! bot <= a
//! bot <= b
//! a <= top
//! b <= top
//! rel R 2
//! a b
//! op f 1
//! bot -> bot
//! a -> a
//! b -> a
//! top -> a
//! ```
//!
//! The `order` block lists generating pairs (closed reflexively and
//! transitively); without it the order is discrete. Every operation block
//! must give exactly one row per argument tuple.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::order::{tuples_of, ElemId, OperationTable, Poset};
use crate::structure::{Relation, Structure};

const KEYWORDS: [&str; 5] = ["structure", "elements", "order", "rel", "op"];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid structure: {0}")]
    Validation(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

struct Line<'a> {
    number: usize,
    /// (column, token), columns 1-based.
    tokens: Vec<(usize, &'a str)>,
}

impl Line<'_> {
    fn error(&self, index: usize, message: impl Into<String>) -> FormatError {
        let column = self.tokens.get(index).map_or_else(
            || self.tokens.last().map_or(1, |(c, t)| c + t.len()),
            |&(c, _)| c,
        );
        FormatError::Parse {
            line: self.number,
            column,
            message: message.into(),
        }
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in content.char_indices().chain(std::iter::once((content.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push((content[..s].chars().count() + 1, &content[s..pos]));
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line {
                number: i + 1,
                tokens,
            })
        })
        .collect()
}

enum Block<'a> {
    Order,
    Rel {
        name: String,
        arity: usize,
        header: &'a Line<'a>,
        tuples: Vec<Vec<ElemId>>,
    },
    Op {
        name: String,
        arity: usize,
        header: &'a Line<'a>,
        rows: BTreeMap<Vec<ElemId>, ElemId>,
    },
}

/// Parses the text form.
pub fn parse_structure(text: &str) -> Result<Structure, FormatError> {
    let lines = tokenize(text);
    let mut it = lines.iter();
    let first = it.next().ok_or(FormatError::Parse {
        line: 1,
        column: 1,
        message: "expected `structure NAME`".into(),
    })?;
    if first.tokens[0].1 != "structure" || first.tokens.len() != 2 {
        return Err(first.error(0, "expected `structure NAME`"));
    }
    let name = first.tokens[1].1.to_string();
    let elements_line = it.next().ok_or(FormatError::Parse {
        line: first.number + 1,
        column: 1,
        message: "expected `elements LABEL ...`".into(),
    })?;
    if elements_line.tokens[0].1 != "elements" {
        return Err(elements_line.error(0, "expected `elements LABEL ...`"));
    }
    let labels: Vec<String> = elements_line.tokens[1..].iter().map(|t| t.1.to_string()).collect();
    if labels.is_empty() {
        return Err(elements_line.error(1, "at least one element is required"));
    }
    let mut index: BTreeMap<&str, ElemId> = BTreeMap::new();
    for (i, &(_, label)) in elements_line.tokens[1..].iter().enumerate() {
        if KEYWORDS.contains(&label) || label == "<=" || label == "->" {
            return Err(elements_line.error(i + 1, format!("`{label}` cannot be an element label")));
        }
        if index.insert(label, i).is_some() {
            return Err(elements_line.error(i + 1, format!("duplicate element `{label}`")));
        }
    }
    let lookup = |line: &Line, i: usize| -> Result<ElemId, FormatError> {
        let tok = line.tokens[i].1;
        index
            .get(tok)
            .copied()
            .ok_or_else(|| line.error(i, format!("unknown element `{tok}`")))
    };

    let mut pairs = Vec::new();
    let mut blocks: Vec<Block> = Vec::new();
    let mut seen_order = false;
    for line in it {
        let head = line.tokens[0].1;
        match head {
            "order" => {
                if line.tokens.len() != 1 {
                    return Err(line.error(1, "`order` takes no arguments"));
                }
                if seen_order {
                    return Err(line.error(0, "second `order` block"));
                }
                seen_order = true;
                blocks.push(Block::Order);
            }
            "rel" | "op" => {
                if line.tokens.len() != 3 {
                    return Err(line.error(line.tokens.len().min(3), format!("expected `{head} NAME ARITY`")));
                }
                let name = line.tokens[1].1.to_string();
                let arity: usize = line.tokens[2]
                    .1
                    .parse()
                    .ok()
                    .filter(|&a| a >= 1)
                    .ok_or_else(|| line.error(2, "arity must be a positive integer"))?;
                blocks.push(if head == "rel" {
                    Block::Rel {
                        name,
                        arity,
                        header: line,
                        tuples: Vec::new(),
                    }
                } else {
                    Block::Op {
                        name,
                        arity,
                        header: line,
                        rows: BTreeMap::new(),
                    }
                });
            }
            "structure" | "elements" => return Err(line.error(0, format!("unexpected `{head}`"))),
            _ => match blocks.last_mut() {
                None => return Err(line.error(0, "expected `order`, `rel` or `op`")),
                Some(Block::Order) => {
                    if line.tokens.len() != 3 || line.tokens[1].1 != "<=" {
                        return Err(line.error(1.min(line.tokens.len()), "expected `A <= B`"));
                    }
                    pairs.push((lookup(line, 0)?, lookup(line, 2)?));
                }
                Some(Block::Rel { arity, tuples, .. }) => {
                    if line.tokens.len() != *arity {
                        return Err(line.error(0, format!("expected {arity} elements")));
                    }
                    tuples.push((0..*arity).map(|i| lookup(line, i)).collect::<Result<_, _>>()?);
                }
                Some(Block::Op { arity, rows, .. }) => {
                    let k = *arity;
                    if line.tokens.len() != k + 2 || line.tokens[k].1 != "->" {
                        return Err(line.error(k.min(line.tokens.len()), format!("expected {k} arguments, `->` and a value")));
                    }
                    let args: Vec<ElemId> = (0..k).map(|i| lookup(line, i)).collect::<Result<_, _>>()?;
                    let value = lookup(line, k + 1)?;
                    if rows.insert(args, value).is_some() {
                        return Err(line.error(0, "duplicate row"));
                    }
                }
            },
        }
    }

    let order = Poset::from_pairs(labels.clone(), &pairs).map_err(|e| FormatError::Validation(e.to_string()))?;
    let mut s = Structure::new(name, order);
    for block in blocks {
        match block {
            Block::Order => {}
            Block::Rel { name, arity, tuples, header } => {
                s = s
                    .with_relation(&name, Relation::new(arity, tuples))
                    .map_err(|e| header.error(1, e.to_string()))?;
            }
            Block::Op { name, arity, header, rows } => {
                let mut values = Vec::with_capacity(rows.len());
                for args in tuples_of(&vec![labels.len(); arity]) {
                    match rows.get(&args) {
                        Some(&v) => values.push(v),
                        None => {
                            let shown: Vec<&str> = args.iter().map(|&a| labels[a].as_str()).collect();
                            return Err(header.error(
                                1,
                                format!("operation `{name}` has no row for `{}`", shown.join(" ")),
                            ));
                        }
                    }
                }
                let table = OperationTable::new(arity, labels.len(), values)
                    .map_err(|e| FormatError::Validation(e.to_string()))?;
                s = s
                    .with_operation(&name, table)
                    .map_err(|e| header.error(1, e.to_string()))?;
            }
        }
    }
    Ok(s)
}

fn check_token(what: &str, token: &str) -> Result<(), FormatError> {
    if token.is_empty()
        || token.chars().any(|c| c.is_whitespace() || c == '#')
        || KEYWORDS.contains(&token)
        || token == "<="
        || token == "->"
    {
        return Err(FormatError::Validation(format!("{what} `{token}` cannot be written")));
    }
    Ok(())
}

/// Canonical text: the order as its covering pairs, relation tuples sorted,
/// operation rows in table order.
pub fn print_structure(s: &Structure) -> Result<String, FormatError> {
    check_token("structure name", s.name())?;
    for l in s.labels() {
        check_token("element label", l)?;
    }
    let mut out = String::new();
    let l = |id: ElemId| s.label(id);
    writeln!(out, "structure {}", s.name()).expect("string write");
    writeln!(out, "elements {}", s.labels().join(" ")).expect("string write");
    let covers = s.order().covers();
    if !covers.is_empty() {
        out.push_str("order\n");
        for (a, b) in covers {
            writeln!(out, "{} <= {}", l(a), l(b)).expect("string write");
        }
    }
    for (name, rel) in s.relations() {
        check_token("relation name", name)?;
        writeln!(out, "rel {name} {}", rel.arity()).expect("string write");
        for t in rel.tuples() {
            let parts: Vec<&str> = t.iter().map(|&x| l(x)).collect();
            writeln!(out, "{}", parts.join(" ")).expect("string write");
        }
    }
    for (name, op) in s.operations() {
        check_token("operation name", name)?;
        writeln!(out, "op {name} {}", op.arity()).expect("string write");
        for (args, v) in op.rows() {
            let parts: Vec<&str> = args.iter().map(|&x| l(x)).collect();
            writeln!(out, "{} -> {}", parts.join(" "), l(v)).expect("string write");
        }
    }
    Ok(out)
}

pub fn load_structure(path: &Path) -> Result<Structure, FormatError> {
    let text = std::fs::read_to_string(path).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_structure(&text)
}

pub fn save_structure(s: &Structure, path: &Path) -> Result<(), FormatError> {
    let text = print_structure(s)?;
    std::fs::write(path, text).map_err(|e| FormatError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const DIAMOND: &str = "\
# the four-element Boolean lattice
structure diamond
elements bot a b top
order
bot <= a
bot <= b
a <= top   # trailing comment
b <= top
op f 1
bot -> bot
a -> a
b -> a
top -> a
";

    #[test]
    fn diamond_loads() {
        let s = parse_structure(DIAMOND).unwrap();
        assert_eq!(s.name(), "diamond");
        assert_eq!(s.order(), &fixtures::diamond());
        assert_eq!(s.operation("f").unwrap().values(), &[0, 1, 1, 1]);
        assert_eq!(s.order().relation_size(), 9);
    }

    #[test]
    fn round_trip_is_canonical() {
        let s = parse_structure(DIAMOND).unwrap();
        let text = print_structure(&s).unwrap();
        let back = parse_structure(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(print_structure(&back).unwrap(), text);
    }

    #[test]
    fn relations_round_trip() {
        let text = "structure r\nelements p q\nrel R 2\nq p\np q\n";
        let s = parse_structure(text).unwrap();
        assert!(s.order().is_discrete());
        assert_eq!(print_structure(&s).unwrap(), "structure r\nelements p q\nrel R 2\np q\nq p\n");
    }

    #[test]
    fn cycles_are_rejected() {
        let err = parse_structure("structure c\nelements a b\norder\na <= b\nb <= a\n").unwrap_err();
        assert!(matches!(err, FormatError::Validation(_)), "{err}");
    }

    #[test]
    fn missing_rows_are_named() {
        let err = parse_structure("structure c\nelements a b\nop f 1\na -> b\n").unwrap_err();
        assert_eq!(
            err,
            FormatError::Parse {
                line: 3,
                column: 4,
                message: "operation `f` has no row for `b`".into()
            }
        );
    }

    #[test]
    fn positions_of_errors() {
        let err = parse_structure("structure c\nelements a b\norder\na <= z\n").unwrap_err();
        assert_eq!(
            err,
            FormatError::Parse {
                line: 4,
                column: 6,
                message: "unknown element `z`".into()
            }
        );
        let err = parse_structure("elements a\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 1, column: 1, .. }));
        let err = parse_structure("structure c\nelements a a\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 2, column: 12, .. }));
        let err = parse_structure("structure c\nelements a\nop f 0\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 3, column: 6, .. }));
        let err = parse_structure("structure c\nelements a\nop f 1\na -> a\na -> a\n").unwrap_err();
        assert!(matches!(err, FormatError::Parse { line: 5, .. }));
    }

    #[test]
    fn unwritable_labels() {
        let s = Structure::relational("r", vec!["order".into()]).unwrap();
        assert!(matches!(print_structure(&s), Err(FormatError::Validation(_))));
    }

    #[test]
    fn save_and_load() {
        let dir = std::env::temp_dir().join(format!("ultraposet-format-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("m3.struct");
        let s = Structure::new("m3", fixtures::m3())
            .with_operation("g", fixtures::meet_table(&fixtures::m3()))
            .unwrap();
        save_structure(&s, &path).unwrap();
        assert_eq!(load_structure(&path).unwrap(), s);
        std::fs::remove_dir_all(&dir).unwrap();
        assert!(matches!(save_structure(&s, &dir.join("no/such/dir.struct")), Err(FormatError::Io { .. })));
    }
}
