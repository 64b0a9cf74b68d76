//! Formulas carrying "s is the supremum of X, and f preserves it" through
//! first-order logic, and a step-by-step replay of that argument on a finite
//! structure.
//!
//! With a unary `f`:
//!
//! * `alpha(x, s, y) = x <= s & f(x) <= y` cuts out `A = { x : alpha }`.
//! * `sigma(s, y) = forall z. (forall x. alpha -> x <= z) -> s <= z` says
//!   `s` is below every upper bound of `A`; with `alpha -> x <= s` this is
//!   `s = sup A`.
//! * `phi(s, y) = forall z. (forall x. alpha -> f(x) <= z) -> f(s) <= z` says
//!   `f(s)` is below every upper bound of `f(A)`.
//!
//! When `s = sup X` and `y` bounds `f(X)` from above, `X` is inside `A`, so
//! `s = sup A`; additivity gives `f(s) = sup f(A)`, and `y` bounds `f(A)`, so
//! `f(s) <= y`.

use std::fmt;

use thiserror::Error;

use crate::order::{
    is_completely_additive, AdditivityWitness, Direction, ElemId, OrderError, Sup,
};
use crate::structure::Structure;

use super::{evaluate, Assignment, FolError, Formula, Signature, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferFormulas {
    /// Free in `x`, `s`, `y`.
    pub alpha: Formula,
    /// Free in `s`, `y`.
    pub sigma: Formula,
    /// `sigma` plus the conjunct `forall x. alpha -> x <= s`, which `alpha`
    /// already implies.
    pub sigma_full: Formula,
    /// Free in `s`, `y`.
    pub phi: Formula,
}

/// Builds `alpha`, `sigma` and `phi` for the unary operation `op`.
pub fn build_transfer_formulas(sig: &Signature, op: &str) -> Result<TransferFormulas, FolError> {
    if sig.relation_arity(crate::structure::LEQ) != Some(2) {
        return Err(FolError::SignatureMismatch("signature lacks leq/2".into()));
    }
    if sig.operation_arity(op) != Some(1) {
        return Err(FolError::SignatureMismatch(format!(
            "signature lacks a unary operation `{op}`"
        )));
    }
    let v = Term::var;
    let f = |t: Term| Term::app(op, vec![t]);
    let alpha = Formula::and(
        Formula::leq(v("x"), v("s")),
        Formula::leq(f(v("x")), v("y")),
    );
    let sigma = Formula::forall(
        "z",
        Formula::implies(
            Formula::forall("x", Formula::implies(alpha.clone(), Formula::leq(v("x"), v("z")))),
            Formula::leq(v("s"), v("z")),
        ),
    );
    let sigma_full = Formula::and(
        Formula::forall("x", Formula::implies(alpha.clone(), Formula::leq(v("x"), v("s")))),
        sigma.clone(),
    );
    let phi = Formula::forall(
        "z",
        Formula::implies(
            Formula::forall(
                "x",
                Formula::implies(alpha.clone(), Formula::leq(f(v("x")), v("z"))),
            ),
            Formula::leq(f(v("s")), v("z")),
        ),
    );
    Ok(TransferFormulas {
        alpha,
        sigma,
        sigma_full,
        phi,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Precondition {
    UnknownOperation(String),
    NotUnary { op: String, arity: usize },
    NotAdditive(AdditivityWitness),
    NoSupremum(Sup),
    NotAnUpperBound { y: ElemId, x: ElemId },
}

impl fmt::Display for Precondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Precondition::UnknownOperation(op) => write!(f, "no operation named `{op}`"),
            Precondition::NotUnary { op, arity } => write!(f, "`{op}` has arity {arity}, not 1"),
            Precondition::NotAdditive(_) => f.write_str("operation is not completely additive"),
            Precondition::NoSupremum(sup) => write!(
                f,
                "the set has no supremum ({})",
                sup.reason(Direction::Up).unwrap_or("")
            ),
            Precondition::NotAnUpperBound { .. } => {
                f.write_str("bound is not an upper bound of the image set")
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReplayError {
    #[error("precondition failed: {0}")]
    Precondition(Precondition),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Fol(#[from] FolError),
}

/// Every intermediate fact of the replayed argument. Facts are computed twice
/// where possible (order computations and formula evaluation) and
/// `cross_checks` records whether the two routes agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProofReport {
    pub s: ElemId,
    pub y: ElemId,
    pub f_s: ElemId,
    /// `{ x : x <= s and f(x) <= y }`.
    pub a: Vec<ElemId>,
    pub x_subset_a: bool,
    pub sup_a: Sup,
    /// `s = sup A`.
    pub s_is_sup_a: bool,
    pub sigma_holds: bool,
    /// `sup f(A)`.
    pub image_sup_a: Sup,
    /// `f(s) = sup f(A)`.
    pub f_s_is_image_sup: bool,
    pub phi_holds: bool,
    /// `f(s) <= y`.
    pub conclusion: bool,
    /// `f(s) = sup f(X)`.
    pub overall: bool,
    pub cross_checks: bool,
}

impl ProofReport {
    pub fn all_steps(&self) -> bool {
        self.x_subset_a
            && self.s_is_sup_a
            && self.sigma_holds
            && self.f_s_is_image_sup
            && self.phi_holds
            && self.conclusion
            && self.overall
            && self.cross_checks
    }

    /// `(step, holds)` in argument order.
    pub fn steps(&self) -> [(&'static str, bool); 8] {
        [
            ("X subset of A", self.x_subset_a),
            ("s = sup A", self.s_is_sup_a),
            ("sigma(s, y)", self.sigma_holds),
            ("f(s) = sup f(A)", self.f_s_is_image_sup),
            ("phi(s, y)", self.phi_holds),
            ("f(s) <= y", self.conclusion),
            ("f(s) = sup f(X)", self.overall),
            ("routes agree", self.cross_checks),
        ]
    }
}

/// Replays the argument for one unary operation of a structure, checking
/// additivity once.
pub struct Replayer<'a> {
    m: &'a Structure,
    op: String,
    formulas: TransferFormulas,
}

impl<'a> Replayer<'a> {
    pub fn new(m: &'a Structure, op: &str) -> Result<Replayer<'a>, ReplayError> {
        let table = m
            .operation(op)
            .ok_or_else(|| ReplayError::Precondition(Precondition::UnknownOperation(op.into())))?;
        if table.arity() != 1 {
            return Err(ReplayError::Precondition(Precondition::NotUnary {
                op: op.into(),
                arity: table.arity(),
            }));
        }
        if let Some(w) = is_completely_additive(m.order(), table)?.witness() {
            return Err(ReplayError::Precondition(Precondition::NotAdditive(w.clone())));
        }
        Ok(Replayer {
            m,
            op: op.to_string(),
            formulas: build_transfer_formulas(&m.signature(), op)?,
        })
    }

    pub fn formulas(&self) -> &TransferFormulas {
        &self.formulas
    }

    pub fn replay(&self, xs: &[ElemId], y: ElemId) -> Result<ProofReport, ReplayError> {
        let p = self.m.order();
        let f = self.m.operation(&self.op).expect("checked in new");
        let at = |x: ElemId| f.apply(&[x]);
        if y >= p.len() {
            return Err(OrderError::UnknownElement { id: y, size: p.len() }.into());
        }
        let s = match p.sup(xs, Direction::Up)? {
            Sup::Exists(s) => s,
            other => return Err(ReplayError::Precondition(Precondition::NoSupremum(other))),
        };
        if let Some(&x) = xs.iter().find(|&&x| !p.leq(at(x), y)) {
            return Err(ReplayError::Precondition(Precondition::NotAnUpperBound { y, x }));
        }

        let a: Vec<ElemId> = p.elements().filter(|&x| p.leq(x, s) && p.leq(at(x), y)).collect();
        let params = Assignment::new().with("s", s).with("y", y);
        let mut a_by_alpha = Vec::new();
        for x in p.elements() {
            if evaluate(self.m, &self.formulas.alpha, &params.clone().with("x", x))? {
                a_by_alpha.push(x);
            }
        }
        let x_subset_a = xs.iter().all(|x| a.contains(x));
        let sup_a = p.sup_unchecked(a.iter().copied(), Direction::Up);
        let s_is_sup_a = sup_a == Sup::Exists(s);
        let sigma_holds = evaluate(self.m, &self.formulas.sigma, &params)?;

        let f_s = at(s);
        let image_a: Vec<ElemId> = a.iter().map(|&x| at(x)).collect();
        let image_sup_a = p.sup_unchecked(image_a.iter().copied(), Direction::Up);
        let f_s_is_image_sup = image_sup_a == Sup::Exists(f_s);
        let phi_holds = evaluate(self.m, &self.formulas.phi, &params)?;
        let below_all_bounds = p
            .bounds(&image_a, Direction::Up)?
            .into_iter()
            .all(|u| p.leq(f_s, u));

        let conclusion = p.leq(f_s, y);
        let image_x: Vec<ElemId> = xs.iter().map(|&x| at(x)).collect();
        let overall = p.sup_unchecked(image_x, Direction::Up) == Sup::Exists(f_s);

        let cross_checks =
            a == a_by_alpha && sigma_holds == s_is_sup_a && phi_holds == below_all_bounds;
        Ok(ProofReport {
            s,
            y,
            f_s,
            a,
            x_subset_a,
            sup_a,
            s_is_sup_a,
            sigma_holds,
            image_sup_a,
            f_s_is_image_sup,
            phi_holds,
            conclusion,
            overall,
            cross_checks,
        })
    }
}

/// Replays the supremum-transfer argument for `X = xs` and bound `y`.
pub fn replay_proof(
    m: &Structure,
    op: &str,
    xs: &[ElemId],
    y: ElemId,
) -> Result<ProofReport, ReplayError> {
    Replayer::new(m, op)?.replay(xs, y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::fol::parse_formula;
    use crate::order::{is_monotone, OperationTable, Poset};

    fn with_f(p: Poset, f: OperationTable) -> Structure {
        Structure::new("m", p).with_operation("f", f).unwrap()
    }

    fn sig() -> Signature {
        Signature::order().with_operation("f", 1).unwrap()
    }

    #[test]
    fn formulas_have_the_stated_shape() {
        let t = build_transfer_formulas(&sig(), "f").unwrap();
        let names = |f: &Formula| f.free_vars().into_iter().collect::<Vec<_>>();
        assert_eq!(names(&t.alpha), ["s", "x", "y"]);
        assert_eq!(names(&t.sigma), ["s", "y"]);
        assert_eq!(names(&t.phi), ["s", "y"]);
        assert_eq!(t.alpha, parse_formula("x <= s & f(x) <= y", &sig()).unwrap());
        assert_eq!(
            t.sigma.to_string(),
            "forall z. (forall x. x <= s & f(x) <= y -> x <= z) -> s <= z"
        );
        assert_eq!(
            t.phi.to_string(),
            "forall z. (forall x. x <= s & f(x) <= y -> f(x) <= z) -> f(s) <= z"
        );
        // sigma carries no "x <= s" upper-bound conjunct of its own.
        assert!(!matches!(t.sigma, Formula::And(..)));
        assert!(matches!(t.sigma_full, Formula::And(..)));
    }

    #[test]
    fn maximal_scope_reading_of_unparenthesized_text() {
        // Without parentheses around the inner quantifier its body swallows
        // the outer implication, giving a different formula.
        let text = "forall z. (forall x. ((x <= s & f(x) <= y) -> x <= z) -> s <= z)";
        let parsed = parse_formula(text, &sig()).unwrap();
        let t = build_transfer_formulas(&sig(), "f").unwrap();
        assert_ne!(parsed, t.sigma);
        assert_eq!(parse_formula(&t.sigma.to_string(), &sig()).unwrap(), t.sigma);
    }

    #[test]
    fn missing_operation() {
        assert!(matches!(
            build_transfer_formulas(&Signature::order(), "f"),
            Err(FolError::SignatureMismatch(_))
        ));
        let binary = Signature::order().with_operation("f", 2).unwrap();
        assert!(build_transfer_formulas(&binary, "f").is_err());
    }

    #[test]
    fn sigma_on_two_chain_identity() {
        let m = with_f(fixtures::two_chain(), OperationTable::identity(2));
        let t = build_transfer_formulas(&m.signature(), "f").unwrap();
        let a = Assignment::new().with("s", 1).with("y", 1);
        assert!(evaluate(&m, &t.sigma, &a).unwrap());
        assert_eq!(m.order().sup(&[0, 1], Direction::Up).unwrap(), Sup::Exists(1));
    }

    #[test]
    fn replay_two_chain_identity() {
        let m = with_f(fixtures::two_chain(), OperationTable::identity(2));
        let r = replay_proof(&m, "f", &[0, 1], 1).unwrap();
        assert!(r.all_steps(), "{r:?}");
        assert_eq!(r.f_s, 1);
    }

    #[test]
    fn replay_boolean_square_identity() {
        let p = fixtures::boolean4();
        let (a, top) = (p.index_of("a").unwrap(), p.top().unwrap());
        let m = with_f(p, OperationTable::identity(4));
        let r = replay_proof(&m, "f", &[a], top).unwrap();
        assert_eq!(r.a, vec![0, a]);
        assert_eq!(r.sup_a, Sup::Exists(a));
        assert!(r.all_steps());
    }

    #[test]
    fn replay_guards() {
        let p = fixtures::boolean4();
        let (a, b) = (p.index_of("a").unwrap(), p.index_of("b").unwrap());
        let m = with_f(p.clone(), OperationTable::identity(4));
        assert!(matches!(
            replay_proof(&m, "f", &[a, b], a),
            Err(ReplayError::Precondition(Precondition::NotAnUpperBound { .. }))
        ));
        let non_additive = with_f(p, OperationTable::constant(1, 4, 3).unwrap());
        assert!(matches!(
            replay_proof(&non_additive, "f", &[a], 3),
            Err(ReplayError::Precondition(Precondition::NotAdditive(_)))
        ));
        let antichain = with_f(fixtures::antichain(2), OperationTable::identity(2));
        assert!(matches!(
            replay_proof(&antichain, "f", &[0, 1], 0),
            Err(ReplayError::Precondition(Precondition::NoSupremum(Sup::NoBound)))
        ));
        assert!(matches!(
            replay_proof(&m, "g", &[a], a),
            Err(ReplayError::Precondition(Precondition::UnknownOperation(_)))
        ));
    }

    /// Every unary map on the fixture posets with at most 4 elements.
    fn all_unary_structures() -> Vec<Structure> {
        let mut out = Vec::new();
        for p in fixtures::posets().into_iter().filter(|p| p.len() <= 4) {
            let n = p.len();
            for code in 0..n.pow(n as u32) {
                let f = OperationTable::from_fn(1, n, |a| (code / n.pow(a[0] as u32)) % n).unwrap();
                out.push(with_f(p.clone(), f));
            }
        }
        out
    }

    #[test]
    fn semantic_bridge() {
        for m in all_unary_structures() {
            let p = m.order();
            let f = m.operation("f").unwrap();
            let monotone = is_monotone(p, f).unwrap().holds();
            let t = build_transfer_formulas(&m.signature(), "f").unwrap();
            for s in p.elements() {
                for y in p.elements() {
                    let params = Assignment::new().with("s", s).with("y", y);
                    let a: Vec<ElemId> = p
                        .elements()
                        .filter(|&x| p.leq(x, s) && p.leq(f.apply(&[x]), y))
                        .collect();
                    let sigma = evaluate(&m, &t.sigma, &params).unwrap();
                    assert_eq!(sigma, p.sup(&a, Direction::Up).unwrap() == Sup::Exists(s));
                    assert_eq!(sigma, evaluate(&m, &t.sigma_full, &params).unwrap());

                    let image: Vec<ElemId> = a.iter().map(|&x| f.apply(&[x])).collect();
                    let fs = f.apply(&[s]);
                    let phi = evaluate(&m, &t.phi, &params).unwrap();
                    let below = p
                        .bounds(&image, Direction::Up)
                        .unwrap()
                        .into_iter()
                        .all(|u| p.leq(fs, u));
                    assert_eq!(phi, below);
                    if monotone {
                        assert_eq!(phi, p.sup(&image, Direction::Up).unwrap() == Sup::Exists(fs));
                    }
                }
            }
        }
    }

    #[test]
    fn literal_lower_bound_variant_is_not_implied_by_alpha() {
        // forall x. alpha -> s <= x fails already on the 2-chain.
        let m = with_f(fixtures::two_chain(), OperationTable::identity(2));
        let sig = m.signature();
        let lower = parse_formula("forall x. x <= s & f(x) <= y -> s <= x", &sig).unwrap();
        let upper = parse_formula("forall x. x <= s & f(x) <= y -> x <= s", &sig).unwrap();
        let a = Assignment::new().with("s", 1).with("y", 1);
        assert!(!evaluate(&m, &lower, &a).unwrap());
        assert!(evaluate(&m, &upper, &a).unwrap());
    }

    #[test]
    fn replay_is_sound_on_all_small_additive_maps() {
        let mut replays = 0;
        for m in all_unary_structures() {
            let Ok(replayer) = Replayer::new(&m, "f") else {
                continue;
            };
            let p = m.order();
            let f = m.operation("f").unwrap();
            for mask in 0u32..1 << p.len() {
                let xs: Vec<ElemId> = p.elements().filter(|&i| mask >> i & 1 == 1).collect();
                if !p.sup(&xs, Direction::Up).unwrap().exists() {
                    continue;
                }
                for y in p.elements() {
                    if xs.iter().all(|&x| p.leq(f.apply(&[x]), y)) {
                        let r = replayer.replay(&xs, y).unwrap();
                        assert!(r.all_steps(), "{m:?} {xs:?} {y} {r:?}");
                        replays += 1;
                    }
                }
            }
        }
        assert!(replays > 100);
    }

    #[test]
    fn evaluation_is_deterministic() {
        let m = with_f(fixtures::n5(), OperationTable::identity(5));
        let t = build_transfer_formulas(&m.signature(), "f").unwrap();
        let a = Assignment::new().with("s", 3).with("y", 4);
        let first = evaluate(&m, &t.phi, &a).unwrap();
        for _ in 0..5 {
            assert_eq!(evaluate(&m, &t.phi, &a).unwrap(), first);
        }
    }
}
