use crate::fol::{build_transfer_formulas, evaluate, Assignment, TransferFormulas};
use crate::order::{preservation_verdict, ElemId, Preservation};
use crate::structure::Structure;

use super::{reduced_product, Family, FilterSpec, ProductError, ReducedProduct};

/// Carriers up to this size get a full `(s, y)` trace for unary operations.
const TRACE_CARRIER: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpVerdict {
    pub op: String,
    pub holds: bool,
    /// Human-readable witness when `holds` is false.
    pub witness: Option<String>,
}

/// One `(s, y)` pair of the ultraproduct for a unary operation `f`, with the
/// sets `A = { x : x <= s, f(x) <= y }` on both sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseOneTrace {
    pub op: String,
    pub s: ElemId,
    pub y: ElemId,
    /// `A` in the ultraproduct.
    pub a: Vec<ElemId>,
    /// `A_i` in member `i`, at the coordinates of the representatives.
    pub per_factor: Vec<Vec<ElemId>>,
    /// Members where `sigma` (resp. `phi`) holds at the coordinates.
    pub sigma_members: Vec<usize>,
    pub phi_members: Vec<usize>,
    pub sigma: bool,
    pub phi: bool,
    /// Łoś agreement for both formulas, and `sigma => phi` in each member
    /// where the preservation hypothesis applies.
    pub consistent: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Report {
    pub mode: Preservation,
    pub ultraproduct: ReducedProduct,
    pub verdicts: Vec<OpVerdict>,
    pub traces: Vec<CaseOneTrace>,
    pub pass: bool,
}

/// Complete additivity of every operation survives the ultraproduct.
pub fn theorem1_check(fam: &Family, fs: &FilterSpec) -> Result<Theorem1Report, ProductError> {
    preservation_check(fam, fs, Preservation::Complete)
}

/// The same with nonempty suprema only.
pub fn quasi_preservation_check(fam: &Family, fs: &FilterSpec) -> Result<Theorem1Report, ProductError> {
    preservation_check(fam, fs, Preservation::Quasi)
}

pub fn preservation_check(
    fam: &Family,
    fs: &FilterSpec,
    mode: Preservation,
) -> Result<Theorem1Report, ProductError> {
    if !fs.is_ultra() {
        return Err(ProductError::NotUltra(fs.generator().to_vec()));
    }
    for (i, member) in fam.members().iter().enumerate() {
        for (name, op) in member.operations() {
            if let Some(w) = preservation_verdict(member.order(), op, mode)?.witness() {
                return Err(ProductError::PreconditionFailed {
                    member: i,
                    op: name.clone(),
                    detail: w.describe(member.order()),
                });
            }
        }
    }
    let ultraproduct = reduced_product(fam, fs)?;
    let u = &ultraproduct.structure;
    let mut verdicts = Vec::new();
    for (name, op) in u.operations() {
        let v = preservation_verdict(u.order(), op, mode)?;
        verdicts.push(OpVerdict {
            op: name.clone(),
            holds: v.holds(),
            witness: v.witness().map(|w| w.describe(u.order())),
        });
    }
    let mut traces = Vec::new();
    if u.len() <= TRACE_CARRIER {
        let sig = fam.signature();
        for (name, op) in u.operations() {
            if op.arity() == 1 {
                let formulas = build_transfer_formulas(&sig, name)?;
                trace_unary(fam, &ultraproduct, name, &formulas, mode, &mut traces)?;
            }
        }
    }
    let pass = verdicts.iter().all(|v| v.holds) && traces.iter().all(|t| t.consistent);
    Ok(Theorem1Report {
        mode,
        ultraproduct,
        verdicts,
        traces,
        pass,
    })
}

fn lower_set(m: &Structure, op: &str, s: ElemId, y: ElemId) -> Vec<ElemId> {
    let f = m.operation(op).expect("shared signature");
    let p = m.order();
    p.elements()
        .filter(|&x| p.leq(x, s) && p.leq(f.apply(&[x]), y))
        .collect()
}

fn trace_unary(
    fam: &Family,
    red: &ReducedProduct,
    op: &str,
    formulas: &TransferFormulas,
    mode: Preservation,
    out: &mut Vec<CaseOneTrace>,
) -> Result<(), ProductError> {
    let u = &red.structure;
    let fs = red.filter();
    for s in u.order().elements() {
        for y in u.order().elements() {
            let at = |s, y| Assignment::new().with("s", s).with("y", y);
            let sigma = evaluate(u, &formulas.sigma, &at(s, y))?;
            let phi = evaluate(u, &formulas.phi, &at(s, y))?;
            let (rs, ry) = (red.representative(s), red.representative(y));
            let mut per_factor = Vec::new();
            let mut sigma_members = Vec::new();
            let mut phi_members = Vec::new();
            let mut implication = true;
            for (i, m) in fam.members().iter().enumerate() {
                let a_i = lower_set(m, op, rs[i], ry[i]);
                let si = evaluate(m, &formulas.sigma, &at(rs[i], ry[i]))?;
                let pi = evaluate(m, &formulas.phi, &at(rs[i], ry[i]))?;
                if si {
                    sigma_members.push(i);
                }
                if pi {
                    phi_members.push(i);
                }
                let applies = mode == Preservation::Complete || !a_i.is_empty();
                if si && applies && !pi {
                    implication = false;
                }
                per_factor.push(a_i);
            }
            let consistent = fs.contains(&sigma_members) == sigma
                && fs.contains(&phi_members) == phi
                && implication;
            out.push(CaseOneTrace {
                op: op.to_string(),
                s,
                y,
                a: lower_set(u, op, s, y),
                per_factor,
                sigma_members,
                phi_members,
                sigma,
                phi,
                consistent,
            });
        }
    }
    Ok(())
}
