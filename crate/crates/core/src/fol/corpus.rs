use super::{build_transfer_formulas, parse_formula, FolError, Formula, Signature};

/// Order sentences and formulas in `s`, `y` and a unary operation `f`.
const TEXTS: [&str; 28] = [
    "forall x. x <= x",
    "exists y. forall x. x <= y",
    "exists y. forall x. y <= x",
    "forall x. forall y. x <= y | y <= x",
    "forall x. forall y. exists z. x <= z & y <= z",
    "forall x. forall y. exists z. z <= x & z <= y",
    "forall x. forall y. forall z. x <= y & y <= z -> x <= z",
    "exists x. exists w. !(x <= w) & !(w <= x)",
    "s <= y",
    "s = y",
    "f(s) <= y",
    "s <= f(s)",
    "f(s) = s",
    "f(f(s)) = f(s)",
    "!(s <= y) | f(s) <= f(y)",
    "forall x. x <= s -> f(x) <= f(s)",
    "forall x. forall w. x <= w -> f(x) <= f(w)",
    "forall x. f(x) <= x",
    "exists x. f(x) = s",
    "exists x. forall z. f(z) <= x",
    "forall x. x <= s | s <= x",
    "exists x. !(x = s) & x <= s",
    "forall x. s <= x -> f(s) <= f(x)",
    "exists z. s <= z & y <= z & (forall w. s <= w & y <= w -> z <= w)",
    "exists z. z <= s & z <= y & (forall w. w <= s & w <= y -> w <= z)",
    "forall z. (forall x. x <= s -> x <= z) -> s <= z",
    "exists x. x <= s & f(x) <= y",
    "forall x. x <= s & f(x) <= y -> f(x) <= f(s)",
];

/// Thirty formulas over `leq` and the unary operation `op`: order
/// sentences, formulas with free `s` and `y`, and the two transfer formulas
/// `sigma` and `phi` as the last two entries.
pub fn formula_corpus(sig: &Signature, op: &str) -> Result<Vec<Formula>, FolError> {
    let rename = |text: &str| {
        if op == "f" {
            text.to_string()
        } else {
            text.replace("f(", &format!("{op}("))
        }
    };
    let mut out = TEXTS
        .iter()
        .map(|t| parse_formula(&rename(t), sig))
        .collect::<Result<Vec<_>, _>>()?;
    let transfer = build_transfer_formulas(sig, op)?;
    out.push(transfer.sigma);
    out.push(transfer.phi);
    Ok(out)
}
