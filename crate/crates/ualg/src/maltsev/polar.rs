//! Polar and zero terms, and the polarization classification of a variety.
//!
//! A polar term is a constant unary term idempotent; a variety possessing
//! one is polarized, and the term's value in each member is that algebra's
//! pole. A zero term is additionally absorbed by every operation in every
//! argument position, making the pole a one-element sink. A variety that is
//! both polarized and term idempotent is purely polarized; equivalently,
//! every nontrivial identity it satisfies equates two constant term
//! idempotents. Purely polarized outer factors make the Mal'tsev product a
//! variety no matter what the inner factor is, which is what makes the
//! classification worth computing.

use std::fmt;

use serde::Serialize;

use crate::term::{enumerate_terms, Identity, Term};
use crate::variety::{Evidence, SearchBounds, VarietySpec, Verdict};

use super::MaltsevError;

/// Enumerates the unary terms `t(x)` of size at most `max_size` that are
/// provably constant and provably term idempotent — the polar terms the
/// bounded search can certify.
pub fn find_polar_terms(variety: &VarietySpec, max_size: usize) -> Result<Vec<Term>, MaltsevError> {
    let prover = variety.prover();
    let mut out = Vec::new();
    for t in enumerate_terms(variety.signature(), &["x"], max_size) {
        let constant = prover.decide(&t, &rename_variable(&t, "x", "y"))?;
        if !constant.is_proved() {
            continue;
        }
        if prover.is_term_idempotent(&t)?.is_proved() {
            out.push(t);
        }
    }
    Ok(out)
}

fn rename_variable(t: &Term, from: &str, to: &str) -> Term {
    let mut map = std::collections::BTreeMap::new();
    map.insert(from.to_string(), to.to_string());
    t.rename(&map)
}

/// Checks whether the unary term `p` is a zero term: constant, and absorbed
/// by every basic operation in every argument position.
pub fn is_zero_term(variety: &VarietySpec, p: &Term) -> Result<Verdict, MaltsevError> {
    let vars = p.variables();
    if vars.len() != 1 {
        return Err(MaltsevError::NotUnary(p.clone()));
    }
    let var = &vars[0];
    let fresh = |i: usize| {
        let mut name = format!("y{i}");
        while &name == var {
            name.push('_');
        }
        name
    };

    let mut proofs: Vec<(String, Evidence)> = Vec::new();
    let mut unknown: Option<SearchBounds> = None;

    let other = rename_variable(p, var, &fresh(0));
    match variety.decide(p, &other)? {
        Verdict::Proved(evidence) => proofs.push(("constant".into(), evidence)),
        Verdict::Refuted(cm) => return Ok(Verdict::Refuted(cm)),
        Verdict::Unknown(bounds) => unknown = Some(bounds),
    }

    for op in variety.signature().operations() {
        for position in 0..op.arity {
            let args: Vec<Term> = (0..op.arity)
                .map(|j| {
                    if j == position {
                        p.clone()
                    } else {
                        Term::var(fresh(j + 1))
                    }
                })
                .collect();
            let absorbed = Term::App(op.symbol.clone(), args);
            match variety.decide(&absorbed, p)? {
                Verdict::Proved(evidence) => {
                    proofs.push((format!("{}#{}", op.symbol, position + 1), evidence));
                }
                Verdict::Refuted(cm) => return Ok(Verdict::Refuted(cm)),
                Verdict::Unknown(bounds) => unknown = Some(bounds),
            }
        }
    }
    match unknown {
        Some(bounds) => Ok(Verdict::Unknown(bounds)),
        None => Ok(Verdict::Proved(Evidence::PerOperation(proofs))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PolarizationClass {
    NotPolarized,
    Polarized,
    PurelyPolarized,
    Unknown,
}

impl fmt::Display for PolarizationClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            PolarizationClass::NotPolarized => "not polarized",
            PolarizationClass::Polarized => "polarized (not purely)",
            PolarizationClass::PurelyPolarized => "purely polarized",
            PolarizationClass::Unknown => "unknown",
        };
        write!(f, "{text}")
    }
}

/// A candidate unary term with its constancy and idempotency verdicts;
/// kept for candidates the bounded search could not settle.
#[derive(Debug, Clone, Serialize)]
pub struct PolarCandidate {
    pub term: Term,
    pub constant: Verdict,
    pub idempotent: Option<Verdict>,
}

/// Polar decomposition of one base identity against the polar term.
#[derive(Debug, Clone, Serialize)]
pub struct BaseDecomposition {
    pub identity: Identity,
    pub lhs: Verdict,
    pub rhs: Verdict,
}

#[derive(Debug, Clone, Serialize)]
pub struct PolarizationReport {
    pub variety: String,
    pub classification: PolarizationClass,
    pub term_bound: usize,
    pub candidates_checked: usize,
    pub polar_terms: Vec<Term>,
    /// Zero-term verdicts for the polar terms found.
    pub zero_verdicts: Vec<(Term, Verdict)>,
    /// Polar decompositions of the nontrivial base identities against the
    /// first polar term.
    pub base_decompositions: Vec<BaseDecomposition>,
    /// Candidates the bounded machinery could neither certify nor refute;
    /// a nonempty list degrades a would-be `NotPolarized` to `Unknown`.
    pub undetermined: Vec<PolarCandidate>,
}

impl fmt::Display for PolarizationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: {} (unary terms up to size {}, {} candidates)",
            self.variety, self.classification, self.term_bound, self.candidates_checked
        )?;
        for t in &self.polar_terms {
            writeln!(f, "  polar term: {t}")?;
        }
        for (t, verdict) in &self.zero_verdicts {
            writeln!(f, "  zero term {t}: {verdict}")?;
        }
        for decomposition in &self.base_decompositions {
            writeln!(
                f,
                "  base identity {}: lhs {} / rhs {}",
                decomposition.identity,
                decomposition.lhs.label(),
                decomposition.rhs.label()
            )?;
        }
        for candidate in &self.undetermined {
            writeln!(f, "  undetermined candidate: {}", candidate.term)?;
        }
        Ok(())
    }
}

/// Classifies the polarization of a variety from a bounded polar-term
/// search.
///
/// `PurelyPolarized` requires a zero term among the polar terms and a polar
/// decomposition of every nontrivial base identity: both sides equivalent to
/// the polar term. With a zero term in hand, consequences of polar
/// identities stay polar, so a polar base certifies the whole variety.
/// `NotPolarized` requires a definite refutation for every candidate within
/// the bound; candidates left unknown degrade the answer to `Unknown`.
pub fn classify_polarization(
    variety: &VarietySpec,
    max_size: usize,
) -> Result<PolarizationReport, MaltsevError> {
    let prover = variety.prover();
    let candidates = enumerate_terms(variety.signature(), &["x"], max_size);
    let candidates_checked = candidates.len();
    let mut polar_terms = Vec::new();
    let mut undetermined = Vec::new();

    for t in candidates {
        let constant = prover.decide(&t, &rename_variable(&t, "x", "y"))?;
        if constant.is_refuted() {
            continue;
        }
        let idempotent = prover.is_term_idempotent(&t)?;
        match (&constant, &idempotent) {
            (Verdict::Proved(_), Verdict::Proved(_)) => polar_terms.push(t),
            (_, Verdict::Refuted(_)) => {}
            _ => undetermined.push(PolarCandidate {
                term: t,
                constant,
                idempotent: Some(idempotent),
            }),
        }
    }

    let mut zero_verdicts = Vec::new();
    let mut base_decompositions = Vec::new();
    let classification = if let Some(pole) = polar_terms.first() {
        for t in &polar_terms {
            zero_verdicts.push((t.clone(), is_zero_term(variety, t)?));
        }
        for id in variety.base() {
            if id.is_trivial() {
                continue;
            }
            base_decompositions.push(BaseDecomposition {
                identity: id.clone(),
                lhs: variety.decide(&id.lhs, pole)?,
                rhs: variety.decide(&id.rhs, pole)?,
            });
        }
        let has_zero = zero_verdicts.iter().any(|(_, v)| v.is_proved());
        let base_polar = base_decompositions
            .iter()
            .all(|d| d.lhs.is_proved() && d.rhs.is_proved());
        if has_zero && base_polar {
            PolarizationClass::PurelyPolarized
        } else {
            PolarizationClass::Polarized
        }
    } else if undetermined.is_empty() {
        PolarizationClass::NotPolarized
    } else {
        PolarizationClass::Unknown
    };

    Ok(PolarizationReport {
        variety: variety.name().to_string(),
        classification,
        term_bound: max_size,
        candidates_checked,
        polar_terms,
        zero_verdicts,
        base_decompositions,
        undetermined,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use crate::variety::CatalogTag;

    #[test]
    fn polar_terms_of_groups_constants_and_rectangular_semigroups() {
        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let gsig = grp.signature().clone();
        let polar = find_polar_terms(&grp, 2).unwrap();
        let e = parse_term("mul(x,inv(x))", &gsig).unwrap();
        assert!(polar.contains(&e));

        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let csig = cs.signature().clone();
        let polar = find_polar_terms(&cs, 2).unwrap();
        let xx = parse_term("mul(x,x)", &csig).unwrap();
        assert!(polar.contains(&xx));

        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        assert!(find_polar_terms(&rs, 4).unwrap().is_empty());
    }

    #[test]
    fn zero_term_verdicts() {
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let csig = cs.signature().clone();
        let xx = parse_term("mul(x,x)", &csig).unwrap();
        assert!(is_zero_term(&cs, &xx).unwrap().is_proved());

        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let gsig = grp.signature().clone();
        let e = parse_term("mul(x,inv(x))", &gsig).unwrap();
        match is_zero_term(&grp, &e).unwrap() {
            Verdict::Refuted(cm) => {
                // The two-element group already separates y·e from e.
                assert_eq!(cm.model.size(), 2);
            }
            other => panic!("expected refutation, got {other}"),
        }

        let c3 = VarietySpec::catalog(CatalogTag::ConstantProducts(3)).unwrap();
        let sig = c3.signature().clone();
        let xxx = parse_term("mul(x,mul(x,x))", &sig).unwrap();
        assert!(is_zero_term(&c3, &xxx).unwrap().is_proved());

        let two_vars = parse_term("mul(x,y)", &sig).unwrap();
        assert!(matches!(
            is_zero_term(&c3, &two_vars),
            Err(MaltsevError::NotUnary(_))
        ));
    }

    #[test]
    fn classification_of_the_stock_varieties() {
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let report = classify_polarization(&cs, 4).unwrap();
        assert_eq!(report.classification, PolarizationClass::PurelyPolarized);

        let c3 = VarietySpec::catalog(CatalogTag::ConstantProducts(3)).unwrap();
        let report = classify_polarization(&c3, 4).unwrap();
        assert_eq!(report.classification, PolarizationClass::PurelyPolarized);

        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let report = classify_polarization(&grp, 4).unwrap();
        assert_eq!(report.classification, PolarizationClass::Polarized);
        assert!(!report.polar_terms.is_empty());
        // Associativity does not decompose against the polar term.
        assert!(report
            .base_decompositions
            .iter()
            .any(|d| !d.lhs.is_proved() || !d.rhs.is_proved()));

        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let report = classify_polarization(&rs, 4).unwrap();
        assert_eq!(report.classification, PolarizationClass::NotPolarized);
        assert!(report.polar_terms.is_empty());
        assert!(report.undetermined.is_empty());
    }
}
