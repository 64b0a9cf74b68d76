//! Browser bindings: paste a structure, see its Hasse diagram, classify its
//! operations, complete it, replay the transfer argument.
//!
//! Each binding is a thin wrapper over a plain function returning
//! `Result<String, String>`, so the logic is testable off-wasm.

use std::fmt::Write as _;

use ultraposet::fol::{Precondition, ReplayError, Replayer};
use ultraposet::format::{parse_structure, print_structure};
use ultraposet::order::{dm_completion, is_monotone, preservation_verdict, set_label, Preservation};
use ultraposet::{ElemId, Poset, Structure};
use wasm_bindgen::prelude::*;

const NODE_GAP: f64 = 90.0;
const LAYER_GAP: f64 = 70.0;
const MARGIN: f64 = 30.0;

fn parse(text: &str) -> Result<Structure, String> {
    parse_structure(text).map_err(|e| e.to_string())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Order facts and the verdict for every operation, with labelled witnesses.
pub fn check_text(text: &str) -> Result<String, String> {
    let s = parse(text)?;
    let p = s.order();
    let mut out = String::new();
    let _ = writeln!(out, "{}: {} elements", s.name(), s.len());
    let _ = writeln!(
        out,
        "lattice: {}, complete lattice: {}",
        yes(p.is_lattice()),
        yes(p.is_complete_lattice())
    );
    for (name, op) in s.operations() {
        let err = |e: ultraposet::order::OrderError| e.to_string();
        let monotone = is_monotone(p, op).map_err(err)?;
        let additive = preservation_verdict(p, op, Preservation::Complete).map_err(err)?;
        let quasi = preservation_verdict(p, op, Preservation::Quasi).map_err(err)?;
        let _ = writeln!(
            out,
            "{name}/{}: monotone {}, completely additive {}, quasi-complete {}",
            op.arity(),
            yes(monotone.holds()),
            yes(additive.holds()),
            yes(quasi.holds())
        );
        if let Some(w) = additive.witness() {
            let _ = writeln!(out, "  fails on {}", w.describe(p));
        } else if let Some(w) = quasi.witness() {
            let _ = writeln!(out, "  fails on {}", w.describe(p));
        }
    }
    Ok(out)
}

/// The completion of the order, in the structure file format.
pub fn complete_text(text: &str) -> Result<String, String> {
    let s = parse(text)?;
    let c = dm_completion(s.order()).map_err(|e| e.to_string())?;
    print_structure(&Structure::new(format!("{}_completion", s.name()), c.lattice)).map_err(|e| e.to_string())
}

/// Step-by-step replay for the unary operation `op`, set `set` (comma
/// separated labels) and bound `bound`.
pub fn replay_text(text: &str, op: &str, set: &str, bound: &str) -> Result<String, String> {
    let s = parse(text)?;
    let p = s.order();
    let find = |l: &str| s.index_of(l.trim()).ok_or_else(|| format!("no element `{}`", l.trim()));
    let xs: Vec<ElemId> = set
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(find)
        .collect::<Result<_, _>>()?;
    let y = find(bound)?;
    let replayer = match Replayer::new(&s, op) {
        Ok(r) => r,
        Err(ReplayError::Precondition(Precondition::NotAdditive(w))) => {
            return Ok(format!("`{op}` is not completely additive: {}\n", w.describe(p)));
        }
        Err(e) => return Err(e.to_string()),
    };
    let rep = replayer.replay(&xs, y).map_err(|e| e.to_string())?;
    let mut out = String::new();
    let _ = writeln!(out, "X = {}", set_label(xs.iter().map(|&x| p.label(x))));
    let _ = writeln!(out, "s = {}, f(s) = {}, y = {}", p.label(rep.s), p.label(rep.f_s), p.label(rep.y));
    let _ = writeln!(out, "A = {}", set_label(rep.a.iter().map(|&x| p.label(x))));
    for (step, holds) in rep.steps() {
        let _ = writeln!(out, "{} {step}", if holds { "✓" } else { "✗" });
    }
    Ok(out)
}

/// Height of each element: length of the longest chain below it.
fn heights(p: &Poset) -> Vec<usize> {
    let mut h = vec![0; p.len()];
    let covers = p.covers();
    for &e in &p.linear_extension() {
        for &(a, b) in &covers {
            if b == e {
                h[e] = h[e].max(h[a] + 1);
            }
        }
    }
    h
}

/// Hasse diagram as an SVG document, bottom layer at the bottom.
pub fn hasse_svg_text(text: &str) -> Result<String, String> {
    let s = parse(text)?;
    let p = s.order();
    let h = heights(p);
    let layers = h.iter().max().map_or(0, |m| m + 1);
    let mut rows: Vec<Vec<ElemId>> = vec![Vec::new(); layers];
    for e in p.elements() {
        rows[h[e]].push(e);
    }
    let widest = rows.iter().map(Vec::len).max().unwrap_or(1);
    let width = 2.0 * MARGIN + (widest.max(1) - 1) as f64 * NODE_GAP;
    let height = 2.0 * MARGIN + layers.saturating_sub(1) as f64 * LAYER_GAP;
    let mut pos = vec![(0.0, 0.0); p.len()];
    for (layer, row) in rows.iter().enumerate() {
        let offset = (widest - row.len()) as f64 * NODE_GAP / 2.0;
        for (k, &e) in row.iter().enumerate() {
            pos[e] = (
                MARGIN + offset + k as f64 * NODE_GAP,
                height - MARGIN - layer as f64 * LAYER_GAP,
            );
        }
    }
    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    for (a, b) in p.covers() {
        let ((x1, y1), (x2, y2)) = (pos[a], pos[b]);
        let _ = write!(svg, r##"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#555"/>"##);
    }
    for e in p.elements() {
        let (x, y) = pos[e];
        let _ = write!(
            svg,
            r##"<circle cx="{x}" cy="{y}" r="5" fill="#1f5fa8"/><text x="{}" y="{}" font-size="13">{}</text>"##,
            x + 8.0,
            y - 6.0,
            escape(p.label(e))
        );
    }
    svg.push_str("</svg>");
    Ok(svg)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[wasm_bindgen]
pub fn check_structure(text: &str) -> Result<String, JsError> {
    check_text(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn complete_structure(text: &str) -> Result<String, JsError> {
    complete_text(text).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn replay(text: &str, op: &str, set: &str, bound: &str) -> Result<String, JsError> {
    replay_text(text, op, set, bound).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn hasse_svg(text: &str) -> Result<String, JsError> {
    hasse_svg_text(text).map_err(|e| JsError::new(&e))
}
