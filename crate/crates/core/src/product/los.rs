use crate::fol::{evaluate, Assignment, FolError, Formula};
use crate::order::ElemId;

use super::{reduced_product, Family, FilterSpec, ProductError, ReducedProduct};

/// Outcome of comparing a formula across the members and the reduced product.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LosReport {
    /// Indices whose member satisfies the formula at its assignment.
    pub j_true: Vec<usize>,
    pub in_filter: bool,
    pub product_satisfies: bool,
    pub agree: bool,
    /// Agreement is only guaranteed for ultrafilters; otherwise it is
    /// informational.
    pub ultra: bool,
}

/// Builds the reduced product once and checks many formulas against it.
pub struct LosChecker<'a> {
    fam: &'a Family,
    reduced: ReducedProduct,
}

impl<'a> LosChecker<'a> {
    pub fn new(fam: &'a Family, fs: &FilterSpec) -> Result<LosChecker<'a>, ProductError> {
        Ok(LosChecker {
            fam,
            reduced: reduced_product(fam, fs)?,
        })
    }

    pub fn reduced(&self) -> &ReducedProduct {
        &self.reduced
    }

    /// `assignments[i]` interprets the free names in member `i`; the product
    /// is evaluated at the classes of the resulting tuples.
    pub fn check(&self, phi: &Formula, assignments: &[Assignment]) -> Result<LosReport, ProductError> {
        let n = self.fam.len();
        if assignments.len() != n {
            return Err(ProductError::AssignmentCount {
                expected: n,
                found: assignments.len(),
            });
        }
        let mut j_true = Vec::new();
        for (i, (member, a)) in self.fam.members().iter().zip(assignments).enumerate() {
            if evaluate(member, phi, a)? {
                j_true.push(i);
            }
        }
        let mut product_assignment = Assignment::new();
        for name in phi.free_vars() {
            let tuple: Vec<ElemId> = assignments
                .iter()
                .map(|a| a.get(&name).ok_or_else(|| FolError::UnboundName(name.clone())))
                .collect::<Result<_, _>>()?;
            product_assignment.insert(&name, self.reduced.class_of(&tuple));
        }
        let product_satisfies = evaluate(&self.reduced.structure, phi, &product_assignment)?;
        let fs = self.reduced.filter();
        let in_filter = fs.contains(&j_true);
        Ok(LosReport {
            j_true,
            in_filter,
            product_satisfies,
            agree: in_filter == product_satisfies,
            ultra: fs.is_ultra(),
        })
    }

    /// The same check at every assignment of the free names: each member
    /// ranges over its own carrier, so every product element is reached.
    pub fn check_all(&self, phi: &Formula) -> Result<Vec<LosReport>, ProductError> {
        let names: Vec<String> = phi.free_vars().into_iter().collect();
        let mut out = Vec::new();
        for class_tuple in crate::order::tuples_of(&vec![self.reduced.structure.len(); names.len()]) {
            let assignments: Vec<Assignment> = (0..self.fam.len())
                .map(|i| {
                    names
                        .iter()
                        .zip(&class_tuple)
                        .map(|(name, &c)| (name.as_str(), self.reduced.representative(c)[i]))
                        .collect()
                })
                .collect();
            out.push(self.check(phi, &assignments)?);
        }
        Ok(out)
    }
}

/// One-shot Łoś comparison; see [`LosChecker`].
pub fn los_check(
    fam: &Family,
    fs: &FilterSpec,
    phi: &Formula,
    assignments: &[Assignment],
) -> Result<LosReport, ProductError> {
    LosChecker::new(fam, fs)?.check(phi, assignments)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::fol::{parse_formula, Signature};
    use crate::product::{make_filter, IndexSet};
    use crate::structure::Structure;

    fn family(ps: &[crate::order::Poset]) -> Family {
        Family::new(ps.iter().map(|p| Structure::new("m", p.clone())).collect()).unwrap()
    }

    fn has_top() -> Formula {
        parse_formula("exists y. forall x. x <= y", &Signature::order()).unwrap()
    }

    fn filter(n: usize, j: &[usize]) -> FilterSpec {
        make_filter(IndexSet::new(n).unwrap(), j).unwrap()
    }

    #[test]
    fn both_factors_have_tops() {
        let fam = family(&[fixtures::two_chain(), fixtures::two_chain()]);
        let r = los_check(&fam, &filter(2, &[0]), &has_top(), &[Assignment::new(), Assignment::new()]).unwrap();
        assert_eq!(r.j_true, vec![0, 1]);
        assert!(r.in_filter && r.product_satisfies && r.agree && r.ultra);
    }

    #[test]
    fn antichain_factor_has_no_top() {
        let fam = family(&[fixtures::two_chain(), fixtures::antichain(2)]);
        let none = [Assignment::new(), Assignment::new()];
        let r = los_check(&fam, &filter(2, &[1]), &has_top(), &none).unwrap();
        assert_eq!(r.j_true, vec![0]);
        assert!(!r.in_filter && !r.product_satisfies && r.agree);

        let r = los_check(&fam, &filter(2, &[0, 1]), &has_top(), &none).unwrap();
        assert!(!r.ultra);
        assert_eq!(r.j_true, vec![0]);
        assert!(!r.in_filter && !r.product_satisfies);
    }

    #[test]
    fn non_ultra_filters_can_disagree() {
        // "every element is comparable with x" holds at the top of each
        // factor, but the product of chains is not a chain.
        let fam = family(&[fixtures::two_chain(), fixtures::two_chain()]);
        let phi = parse_formula("forall y. x <= y | y <= x", &Signature::order()).unwrap();
        let at = |v: usize| Assignment::new().with("x", v);
        let r = los_check(&fam, &filter(2, &[0, 1]), &phi, &[at(0), at(1)]).unwrap();
        assert_eq!(r.j_true, vec![0, 1]);
        assert!(r.in_filter);
        assert!(!r.product_satisfies);
        assert!(!r.agree && !r.ultra);
    }

    #[test]
    fn free_names_follow_the_classes() {
        let fam = family(&[fixtures::three_chain(), fixtures::vee(), fixtures::n5()]);
        let phi = parse_formula("x <= y", &Signature::order()).unwrap();
        let checker = LosChecker::new(&fam, &filter(3, &[2])).unwrap();
        let reports = checker.check_all(&phi).unwrap();
        assert_eq!(reports.len(), 25);
        assert!(reports.iter().all(|r| r.agree));
        assert_eq!(reports.iter().filter(|r| r.product_satisfies).count(), fixtures::n5().relation_size());
    }

    #[test]
    fn errors() {
        let fam = family(&[fixtures::two_chain(), fixtures::two_chain()]);
        let phi = parse_formula("x <= x", &Signature::order()).unwrap();
        assert_eq!(
            los_check(&fam, &filter(2, &[0]), &phi, &[Assignment::new()]),
            Err(ProductError::AssignmentCount { expected: 2, found: 1 })
        );
        assert!(matches!(
            los_check(&fam, &filter(2, &[0]), &phi, &[Assignment::new().with("x", 0), Assignment::new()]),
            Err(ProductError::Fol(FolError::UnboundName(_)))
        ));
        let sig = Signature::order().with_operation("f", 1).unwrap();
        let with_f = parse_formula("f(x) <= x", &sig).unwrap();
        let at = Assignment::new().with("x", 0);
        assert!(matches!(
            los_check(&fam, &filter(2, &[0]), &with_f, &[at.clone(), at]),
            Err(ProductError::Fol(FolError::SignatureMismatch(_)))
        ));
    }
}
