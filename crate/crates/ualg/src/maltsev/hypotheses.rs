//! The sufficient condition for `V ∘ W` to be a variety, checked on concrete
//! witness terms, and a bounded search for such witnesses.
//!
//! The condition asks for terms `f(x,y,z)` and `g(x,y,z)` with
//!
//! * (a1) `V ⊨ f(x,y,y) = x` and (a2) `V ⊨ g(x,x,y) = y`,
//! * (b)  `W ⊨ f(x,x,y) = g(x,x,y)`,
//! * (c)  `f(x,x,y)` a term idempotent of `W`,
//!
//! with `W` term idempotent. Witnesses that skip the middle variable are the
//! binary special case (`f(x,y) = x`, `g(x,y) = y`, `W ⊨ f = g`); a single
//! binary `f` with `V ⊨ f = x` and `W ⊨ f = y` makes the varieties
//! independent; and `f = g` ternary makes the (a) identities a Mal'tsev
//! term for `V`.

use std::fmt;

use serde::Serialize;

use crate::term::{enumerate_terms, Identity, Term};
use crate::variety::{Prover, VarietySpec, Verdict};

use super::{apply_witness, check_witness_roles, MaltsevError};

/// Special shapes of a witness pair, reported for context.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SpecialCase {
    /// Neither witness uses the middle variable: the binary corollary
    /// applies.
    BinaryWitnesses,
    /// A single binary term with `V ⊨ f(x,y) = x` and `W ⊨ f(x,y) = y`:
    /// the varieties are independent.
    Independence,
    /// `f = g` with the middle variable in play: the (a) identities say `f`
    /// is a Mal'tsev term, so `V` is congruence permutable.
    MaltsevTerm,
}

impl fmt::Display for SpecialCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            SpecialCase::BinaryWitnesses => "binary witnesses",
            SpecialCase::Independence => "independent varieties",
            SpecialCase::MaltsevTerm => "Mal'tsev term",
        };
        write!(f, "{text}")
    }
}

/// One of the four hypothesis conditions with its verdict.
#[derive(Debug, Clone, Serialize)]
pub struct Condition {
    pub label: String,
    pub identity: Option<Identity>,
    pub verdict: Verdict,
}

/// The outcome of checking the hypothesis conditions for a witness pair.
#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    pub inner: String,
    pub outer: String,
    pub f: Term,
    pub g: Term,
    /// `g` after the independence adjustment; equals `g` otherwise. When a
    /// single independent witness is passed for both roles, the second role
    /// collapses to the bare variable `y`.
    pub effective_g: Term,
    pub conditions: Vec<Condition>,
    pub special_cases: Vec<SpecialCase>,
    pub all_proved: bool,
}

impl HypothesisReport {
    pub fn any_refuted(&self) -> bool {
        self.conditions.iter().any(|c| c.verdict.is_refuted())
    }
}

impl fmt::Display for HypothesisReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "hypotheses for {} ∘ {} with f = {}, g = {}",
            self.inner, self.outer, self.f, self.g
        )?;
        if self.effective_g != self.g {
            writeln!(
                f,
                "  (independent witness: second role taken as {})",
                self.effective_g
            )?;
        }
        for condition in &self.conditions {
            match &condition.identity {
                Some(id) => writeln!(f, "  {}: {} — {}", condition.label, id, condition.verdict)?,
                None => writeln!(f, "  {}: {}", condition.label, condition.verdict)?,
            }
        }
        for case in &self.special_cases {
            writeln!(f, "  special case: {case}")?;
        }
        writeln!(
            f,
            "  conclusion: {}",
            if self.all_proved {
                "all conditions proved; the product is a variety by the witness theorem"
            } else {
                "conditions not established"
            }
        )
    }
}

/// Checks the four hypothesis conditions for the witness terms `f` and `g`,
/// which may use at most the variables `x`, `y`, `z`.
pub fn check_theorem_hypotheses(
    inner: &VarietySpec,
    outer: &VarietySpec,
    f: &Term,
    g: &Term,
) -> Result<HypothesisReport, MaltsevError> {
    if !inner.signature().compatible(outer.signature()) {
        return Err(MaltsevError::VarietyMismatch);
    }
    check_witness_roles(f)?;
    check_witness_roles(g)?;
    f.check(inner.signature())?;
    g.check(inner.signature())?;

    let x = Term::var("x");
    let y = Term::var("y");
    let uses_middle = |t: &Term| t.variables().iter().any(|v| v == "z");
    let ternary = uses_middle(f) || uses_middle(g);

    let mut special_cases = Vec::new();
    let mut effective_g = g.clone();

    if !ternary {
        special_cases.push(SpecialCase::BinaryWitnesses);
        // Independence: one binary term selecting x in V and y in W.
        if inner.decide(f, &x)?.is_proved() && outer.decide(f, &y)?.is_proved() {
            special_cases.push(SpecialCase::Independence);
            if f == g {
                // The pair (f, f) cannot meet condition (a2) literally; the
                // independent witness stands in for both roles with the
                // second one collapsing to the variable y.
                effective_g = y.clone();
            }
        }
    } else if f == g {
        special_cases.push(SpecialCase::MaltsevTerm);
    }

    // The four identities. Binary witnesses embed as f(x,y,z) := f(x,z), so
    // f(x,y,y) and f(x,x,y) are both f itself; apply_witness handles this.
    let a1_term = apply_witness(f, &x, &y, &y);
    let a2_term = apply_witness(&effective_g, &x, &x, &y);
    let b_lhs = apply_witness(f, &x, &x, &y);
    let b_rhs = apply_witness(&effective_g, &x, &x, &y);

    let conditions = vec![
        Condition {
            label: "(a1) V ⊨ f(x,y,y) = x".into(),
            identity: Some(Identity::new(a1_term.clone(), x.clone())),
            verdict: inner.decide(&a1_term, &x)?,
        },
        Condition {
            label: "(a2) V ⊨ g(x,x,y) = y".into(),
            identity: Some(Identity::new(a2_term.clone(), y.clone())),
            verdict: inner.decide(&a2_term, &y)?,
        },
        Condition {
            label: "(b) W ⊨ f(x,x,y) = g(x,x,y)".into(),
            identity: Some(Identity::new(b_lhs.clone(), b_rhs.clone())),
            verdict: outer.decide(&b_lhs, &b_rhs)?,
        },
        Condition {
            label: "(c) f(x,x,y) term idempotent of W".into(),
            identity: None,
            verdict: outer.is_term_idempotent(&b_lhs)?,
        },
    ];

    let all_proved = conditions.iter().all(|c| c.verdict.is_proved());
    Ok(HypothesisReport {
        inner: inner.name().to_string(),
        outer: outer.name().to_string(),
        f: f.clone(),
        g: g.clone(),
        effective_g,
        conditions,
        special_cases,
        all_proved,
    })
}

/// A witness pair surviving the full hypothesis check.
#[derive(Debug, Clone, Serialize)]
pub struct FgCandidate {
    pub f: Term,
    pub g: Term,
    pub report: HypothesisReport,
}

/// Enumerates candidate pairs `(f, g)` over the variables `x, y, z` with
/// each term of size at most `max_size`, ordered by total size and then by
/// enumeration order, and returns every pair whose four conditions are all
/// proved. Absence from the result means only that no proof was found within
/// the bounds, not that no witness exists.
pub fn search_fg(
    inner: &VarietySpec,
    outer: &VarietySpec,
    max_size: usize,
) -> Result<Vec<FgCandidate>, MaltsevError> {
    if !inner.signature().compatible(outer.signature()) {
        return Err(MaltsevError::VarietyMismatch);
    }
    let terms = enumerate_terms(inner.signature(), &["x", "y", "z"], max_size);
    let x = Term::var("x");
    let y = Term::var("y");

    // Positive prefilters, memoized per term. Provability agrees with the
    // public decision procedure; only refutation work is skipped here.
    let inner_prover = inner.prover();
    let outer_prover = outer.prover();
    let proves = |prover: &Prover, u: &Term, v: &Term| -> Result<bool, MaltsevError> {
        Ok(prover.decide(u, v)?.is_proved())
    };

    let mut f_ok = Vec::with_capacity(terms.len());
    let mut g_ok = Vec::with_capacity(terms.len());
    let mut independent = Vec::with_capacity(terms.len());
    for t in &terms {
        let a1 = apply_witness(t, &x, &y, &y);
        let f_passes = proves(&inner_prover, &a1, &x)?;
        f_ok.push(f_passes);
        let a2 = apply_witness(t, &x, &x, &y);
        g_ok.push(proves(&inner_prover, &a2, &y)?);
        independent.push(f_passes && proves(&outer_prover, t, &y)?);
    }

    let sizes: Vec<usize> = terms.iter().map(Term::size).collect();

    let mut found = Vec::new();
    for total in 0..=(2 * max_size) {
        for (fi, f) in terms.iter().enumerate() {
            if sizes[fi] > total || !f_ok[fi] {
                continue;
            }
            let g_size = total - sizes[fi];
            if g_size > max_size {
                continue;
            }
            for (gi, g) in terms.iter().enumerate() {
                if sizes[gi] != g_size {
                    continue;
                }
                if !(g_ok[gi] || (fi == gi && independent[fi])) {
                    continue;
                }
                let report = check_theorem_hypotheses(inner, outer, f, g)?;
                if report.all_proved {
                    found.push(FgCandidate {
                        f: f.clone(),
                        g: g.clone(),
                        report,
                    });
                }
            }
        }
    }
    Ok(found)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_identity, parse_term, Signature};
    use crate::variety::CatalogTag;

    fn squares_are_units() -> VarietySpec {
        let sig = Signature::groupoid();
        VarietySpec::generic(
            "SQU",
            sig.clone(),
            vec![
                parse_identity("mul(mul(x,x),y) = y", &sig).unwrap(),
                parse_identity("mul(y,mul(x,x)) = y", &sig).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn the_rectangular_semigroup_example_passes() {
        let v = squares_are_units();
        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let sig = v.signature().clone();
        let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
        let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();
        let report = check_theorem_hypotheses(&v, &rs, &f, &g).unwrap();
        assert!(report.all_proved, "{report}");
        assert!(report.special_cases.contains(&SpecialCase::BinaryWitnesses));
    }

    #[test]
    fn left_zero_right_zero_is_the_independent_case() {
        let lz = VarietySpec::catalog(CatalogTag::LeftZero).unwrap();
        let rz = VarietySpec::catalog(CatalogTag::RightZero).unwrap();
        let sig = lz.signature().clone();
        let f = parse_term("mul(x,y)", &sig).unwrap();
        let report = check_theorem_hypotheses(&lz, &rz, &f, &f).unwrap();
        assert!(report.all_proved, "{report}");
        assert!(report.special_cases.contains(&SpecialCase::Independence));
        assert_eq!(report.effective_g, Term::var("y"));
    }

    #[test]
    fn constant_semigroups_over_semilattices_fail_condition_a1() {
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let sig = cs.signature().clone();
        let f = parse_term("mul(x,y)", &sig).unwrap();
        let report = check_theorem_hypotheses(&cs, &s, &f, &f).unwrap();
        assert!(!report.all_proved);
        assert!(report.conditions[0].verdict.is_refuted());
    }

    #[test]
    fn search_rediscovers_the_example_pair() {
        let v = squares_are_units();
        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let sig = v.signature().clone();
        let found = search_fg(&v, &rs, 2).unwrap();
        let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
        let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();
        assert!(
            found.iter().any(|c| c.f == f && c.g == g),
            "expected pair not found among {} candidates",
            found.len()
        );
    }

    #[test]
    fn search_finds_the_independent_pair_at_size_one() {
        let lz = VarietySpec::catalog(CatalogTag::LeftZero).unwrap();
        let rz = VarietySpec::catalog(CatalogTag::RightZero).unwrap();
        let found = search_fg(&lz, &rz, 1).unwrap();
        let sig = lz.signature().clone();
        let xy = parse_term("mul(x,y)", &sig).unwrap();
        assert!(found.iter().any(|c| c.f == xy && c.g == xy));
    }

    #[test]
    fn search_is_empty_for_constant_semigroups_over_semilattices() {
        // Bounded emptiness, not impossibility — though here the product
        // really is not a variety, so no bound can ever succeed.
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let found = search_fg(&cs, &s, 3).unwrap();
        assert!(found.is_empty());
    }

    #[test]
    fn maltsev_term_for_groups() {
        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let sig = grp.signature().clone();
        // x · y⁻¹ · z, left associated.
        let p = parse_term("mul(mul(x,inv(y)),z)", &sig).unwrap();
        let report = check_theorem_hypotheses(&grp, &grp, &p, &p).unwrap();
        // (a) and (b) hold; (c) fails because f(x,x,y) reduces to the bare
        // variable y, which is not a term idempotent of groups.
        assert!(report.special_cases.contains(&SpecialCase::MaltsevTerm));
        assert!(report.conditions[0].verdict.is_proved());
        assert!(report.conditions[1].verdict.is_proved());
        assert!(report.conditions[2].verdict.is_proved());
        assert!(report.conditions[3].verdict.is_refuted());
    }
}
