//! Mal'tsev products of varieties, examined on finite algebras.
//!
//! The Mal'tsev product `V ∘ W` consists of the algebras whose `W`-replica
//! quotient lies in `W` and whose replica classes that are subalgebras lie
//! in `V`. Membership of a finite algebra is decidable outright for finitely
//! based factors: compute the replica congruence, then check the inner base
//! exhaustively on every subalgebra block. The product is always closed
//! under subalgebras and direct products but not, in general, under
//! homomorphic images; [`h_closure_probe`] hunts for quotients that fall
//! outside, which is exactly the failure mode that stops `V ∘ W` from being
//! a variety.

mod chain;
mod hypotheses;
mod polar;

pub use chain::{
    build_chain_terms, verify_chain, ChainData, ChainInstance, ChainLinkCheck, ChainReport,
    InstanceReport, InstanceValue,
};
pub use hypotheses::{
    check_theorem_hypotheses, search_fg, Condition, FgCandidate, HypothesisReport, SpecialCase,
};
pub use polar::{
    classify_polarization, find_polar_terms, is_zero_term, BaseDecomposition, PolarCandidate,
    PolarizationClass, PolarizationReport,
};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Assignment, FiniteAlgebra};
use crate::congruence::{all_congruences, CongruenceError, Partition};
use crate::replica::{replica_congruence, ReplicaError};
use crate::term::{enumerate_terms, Identity, Substitution, Term, TermError};
use crate::variety::{VarietyError, VarietySpec};

/// Default per-term size bound for the witness search of [`search_fg`].
pub const DEFAULT_FG_BOUND: usize = 3;
/// Default total-size bound for the tuples substituted by [`sigma_w`].
pub const DEFAULT_SIGMA_BOUND: usize = 4;

#[derive(Debug, Error)]
pub enum MaltsevError {
    #[error("the two varieties have incompatible signatures")]
    VarietyMismatch,
    #[error("algebra and varieties have incompatible signatures")]
    AlgebraMismatch,
    #[error("witness terms may use at most the variables x, y, z; found `{0}`")]
    BadWitnessVariable(String),
    #[error("`{0}` is not a unary term (exactly one variable required)")]
    NotUnary(Term),
    #[error("chain instance: {0}")]
    BadInstance(String),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Replica(#[from] ReplicaError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// Membership verdict for `A ∈ V ∘ W`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    Member,
    NotMember,
    /// Reserved for factors without a decision path; the exhaustive check
    /// used here never produces it.
    Unknown,
}

/// Outcome of checking one base identity on one replica block.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub identity: Identity,
    pub holds: bool,
    pub witness: Option<Assignment>,
}

/// One replica block of the membership check.
#[derive(Debug, Clone, Serialize)]
pub struct BlockCheck {
    pub elements: Vec<usize>,
    pub is_subalgebra: bool,
    /// Base identities of the inner variety checked on the block; empty for
    /// non-subalgebra blocks, which the product places no demand on.
    pub identity_results: Vec<IdentityCheck>,
}

/// The failing block and identity of a negative membership verdict.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipFailure {
    pub block_index: usize,
    pub identity: Identity,
    pub witness: Assignment,
}

/// The full record of a membership check.
#[derive(Debug, Clone, Serialize)]
pub struct MembershipReport {
    pub algebra: String,
    pub inner: String,
    pub outer: String,
    pub verdict: Membership,
    pub replica: Partition,
    pub element_names: Vec<String>,
    pub blocks: Vec<BlockCheck>,
    pub failure: Option<MembershipFailure>,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.verdict == Membership::Member
    }
}

impl fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} ∈ {} ∘ {}: {}",
            self.algebra,
            self.inner,
            self.outer,
            match self.verdict {
                Membership::Member => "member",
                Membership::NotMember => "not a member",
                Membership::Unknown => "unknown",
            }
        )?;
        writeln!(f, "ϱ = {}", self.replica.render(Some(&self.element_names)))?;
        for block in &self.blocks {
            let rendered: Vec<String> = block
                .elements
                .iter()
                .map(|&e| self.element_names[e].clone())
                .collect();
            if block.is_subalgebra {
                let failed = block.identity_results.iter().filter(|c| !c.holds).count();
                writeln!(
                    f,
                    "  block {{{}}}: subalgebra, {} base identities checked, {} failed",
                    rendered.join(","),
                    block.identity_results.len(),
                    failed
                )?;
            } else {
                writeln!(f, "  block {{{}}}: not a subalgebra", rendered.join(","))?;
            }
        }
        if let Some(failure) = &self.failure {
            writeln!(
                f,
                "  failure: identity {} on block #{} with {}",
                failure.identity,
                failure.block_index,
                render_plain_assignment(&failure.witness, &self.element_names)
            )?;
        }
        Ok(())
    }
}

fn render_plain_assignment(assignment: &Assignment, names: &[String]) -> String {
    let parts: Vec<String> = assignment
        .iter()
        .map(|(var, &value)| format!("{var}={}", names[value]))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Decides `A ∈ V ∘ W`: computes the `W`-replica congruence and checks every
/// inner base identity exhaustively on every block that is a subalgebra.
/// Exact for finitely based factors.
pub fn member(
    algebra: &FiniteAlgebra,
    inner: &VarietySpec,
    outer: &VarietySpec,
) -> Result<MembershipReport, MaltsevError> {
    if !inner.signature().compatible(outer.signature()) {
        return Err(MaltsevError::VarietyMismatch);
    }
    if !algebra.signature().compatible(outer.signature()) {
        return Err(MaltsevError::AlgebraMismatch);
    }
    let replica = replica_congruence(algebra, outer)?;
    let element_names: Vec<String> = (0..algebra.size())
        .map(|e| algebra.element_name(e))
        .collect();
    let mut blocks = Vec::new();
    let mut failure = None;
    for (index, elements) in replica.blocks().into_iter().enumerate() {
        let is_subalgebra = algebra.is_subuniverse(&elements);
        let mut identity_results = Vec::new();
        if is_subalgebra {
            for id in inner.base() {
                let witness = failing_assignment_over(algebra, id, &elements)?;
                let holds = witness.is_none();
                if !holds && failure.is_none() {
                    failure = Some(MembershipFailure {
                        block_index: index,
                        identity: id.clone(),
                        witness: witness.clone().unwrap(),
                    });
                }
                identity_results.push(IdentityCheck {
                    identity: id.clone(),
                    holds,
                    witness,
                });
            }
        }
        blocks.push(BlockCheck {
            elements,
            is_subalgebra,
            identity_results,
        });
    }
    let verdict = if failure.is_none() {
        Membership::Member
    } else {
        Membership::NotMember
    };
    Ok(MembershipReport {
        algebra: algebra.name().to_string(),
        inner: inner.name().to_string(),
        outer: outer.name().to_string(),
        verdict,
        replica,
        element_names,
        blocks,
        failure,
    })
}

/// Exhaustive identity check with assignments restricted to a subuniverse.
/// Values stay inside the block, so this is the identity check of the block
/// as an algebra in its own right, phrased over the original element names.
fn failing_assignment_over(
    algebra: &FiniteAlgebra,
    identity: &Identity,
    elements: &[usize],
) -> Result<Option<Assignment>, MaltsevError> {
    let vars = identity.variables();
    let mut indices = vec![0usize; vars.len()];
    loop {
        let assignment: Assignment = vars
            .iter()
            .cloned()
            .zip(indices.iter().map(|&i| elements[i]))
            .collect();
        if algebra.evaluate(&identity.lhs, &assignment)?
            != algebra.evaluate(&identity.rhs, &assignment)?
        {
            return Ok(Some(assignment));
        }
        let mut i = indices.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            indices[i] += 1;
            if indices[i] < elements.len() {
                break;
            }
            indices[i] = 0;
        }
    }
}

/// One congruence of the probed algebra with the membership report of the
/// corresponding quotient.
#[derive(Debug, Clone, Serialize)]
pub struct HClosureEntry {
    pub congruence: Partition,
    pub report: MembershipReport,
}

/// Result of probing all quotients of an algebra for membership.
#[derive(Debug, Clone, Serialize)]
pub struct HClosureReport {
    pub algebra: String,
    pub inner: String,
    pub outer: String,
    pub element_names: Vec<String>,
    pub violation_count: usize,
    /// Violating quotients first, then conforming ones, each group in
    /// canonical partition order.
    pub entries: Vec<HClosureEntry>,
}

impl HClosureReport {
    pub fn has_violations(&self) -> bool {
        self.violation_count > 0
    }
}

impl fmt::Display for HClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "H-closure probe of {} for {} ∘ {}: {} congruences, {} violation(s)",
            self.algebra,
            self.inner,
            self.outer,
            self.entries.len(),
            self.violation_count
        )?;
        for entry in &self.entries {
            writeln!(
                f,
                "  θ = {} → {}",
                entry.congruence.render(Some(&self.element_names)),
                match entry.report.verdict {
                    Membership::Member => "member",
                    Membership::NotMember => "VIOLATION: quotient not a member",
                    Membership::Unknown => "unknown",
                }
            )?;
        }
        Ok(())
    }
}

/// Tests every quotient of `algebra` for membership in `V ∘ W`. A violation
/// is a congruence whose quotient is not a member; any violation shows the
/// product is not closed under homomorphic images.
pub fn h_closure_probe(
    algebra: &FiniteAlgebra,
    inner: &VarietySpec,
    outer: &VarietySpec,
    congruence_limit: usize,
) -> Result<HClosureReport, MaltsevError> {
    let congruences = all_congruences(algebra, congruence_limit)?;
    let mut violations = Vec::new();
    let mut conforming = Vec::new();
    for theta in congruences {
        let quotient = algebra.quotient(&theta)?;
        let report = member(&quotient, inner, outer)?;
        let entry = HClosureEntry {
            congruence: theta,
            report,
        };
        if entry.report.verdict == Membership::NotMember {
            violations.push(entry);
        } else {
            conforming.push(entry);
        }
    }
    let violation_count = violations.len();
    let mut entries = violations;
    entries.extend(conforming);
    Ok(HClosureReport {
        algebra: algebra.name().to_string(),
        inner: inner.name().to_string(),
        outer: outer.name().to_string(),
        element_names: (0..algebra.size())
            .map(|e| algebra.element_name(e))
            .collect(),
        violation_count,
        entries,
    })
}

/// The identities Σ^W generated from a base Σ, truncated to a term bound.
#[derive(Debug, Clone, Serialize)]
pub struct SigmaWReport {
    pub outer: String,
    /// Total size budget for each substituted tuple (r_1, …, r_n).
    pub term_bound: usize,
    /// Variable pool the substituted terms range over.
    pub pool: Vec<String>,
    /// Number of tuples that met the side conditions before deduplication.
    pub tuples_emitted: usize,
    pub identities: Vec<Identity>,
}

impl fmt::Display for SigmaWReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Σ^{} (tuple size budget {}, pool {{{}}}): {} identities ({} tuples before deduplication)",
            self.outer,
            self.term_bound,
            self.pool.join(","),
            self.identities.len(),
            self.tuples_emitted
        )?;
        for id in &self.identities {
            writeln!(f, "  {id}")?;
        }
        Ok(())
    }
}

/// Variable pool size for the substituted terms of [`sigma_w`].
const SIGMA_POOL: usize = 2;

/// For each identity `u = v` of `sigma` with `n` variables, substitutes all
/// tuples `(r_1, …, r_n)` of pairwise `W`-equivalent term idempotents of `W`
/// drawn from a bounded term pool, and returns the resulting identities,
/// deduplicated under canonical renaming.
///
/// This is necessarily a truncation of the infinite identity set: the `r_i`
/// range over terms in two variables with the *total* tuple size capped by
/// `term_bound`. The report records the truncation so downstream users can
/// state their bound.
pub fn sigma_w(
    sigma: &[Identity],
    outer: &VarietySpec,
    term_bound: usize,
) -> Result<SigmaWReport, MaltsevError> {
    for id in sigma {
        id.check(outer.signature())?;
    }
    let pool: Vec<String> = (1..=SIGMA_POOL).map(|i| format!("x{i}")).collect();
    let pool_refs: Vec<&str> = pool.iter().map(|s| s.as_str()).collect();
    let terms = enumerate_terms(outer.signature(), &pool_refs, term_bound);

    // Equivalence classes by canonical form, and the idempotency side
    // condition checked on representatives-to-be (it only has to hold for
    // r_1; pairwise equivalence carries it to the rest, which the test
    // suite double-checks).
    let mut classes: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    let mut idempotent_ok = vec![false; terms.len()];
    for (i, t) in terms.iter().enumerate() {
        classes
            .entry(outer.canonical_form(t)?.to_string())
            .or_default()
            .push(i);
        let mut ok = true;
        for op in outer.signature().operations() {
            let applied = Term::App(op.symbol.clone(), vec![t.clone(); op.arity]);
            if outer.canonical_form(&applied)? != outer.canonical_form(t)? {
                ok = false;
                break;
            }
        }
        idempotent_ok[i] = ok;
    }

    let mut emitted = 0usize;
    let mut out: std::collections::BTreeSet<Identity> = Default::default();
    for id in sigma {
        let canonical = id.canonical();
        let vars = canonical.variables();
        for class in classes.values() {
            let mut tuple: Vec<usize> = Vec::with_capacity(vars.len());
            emit_tuples(
                class,
                &terms,
                vars.len(),
                term_bound,
                &mut tuple,
                &mut |tuple| {
                    if !idempotent_ok[tuple[0]] {
                        return;
                    }
                    emitted += 1;
                    let subst: Substitution = vars
                        .iter()
                        .cloned()
                        .zip(tuple.iter().map(|&i| terms[i].clone()))
                        .collect();
                    out.insert(
                        Identity::new(
                            canonical.lhs.substitute(&subst),
                            canonical.rhs.substitute(&subst),
                        )
                        .canonical(),
                    );
                },
            );
        }
    }
    Ok(SigmaWReport {
        outer: outer.name().to_string(),
        term_bound,
        pool,
        tuples_emitted: emitted,
        identities: out.into_iter().collect(),
    })
}

fn emit_tuples(
    class: &[usize],
    terms: &[Term],
    arity: usize,
    budget: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    if acc.len() == arity {
        emit(acc);
        return;
    }
    for &i in class {
        let size = terms[i].size();
        if size > budget {
            continue;
        }
        acc.push(i);
        emit_tuples(class, terms, arity, budget - size, acc, emit);
        acc.pop();
    }
}

/// Applies a witness term to three arguments. A term using the variable `z`
/// is ternary `f(x,y,z)` and receives all three. A term without `z` is a
/// binary witness `f(x,y)` embedded as the ternary term ignoring its middle
/// argument, so it receives the first and the third.
pub(crate) fn apply_witness(term: &Term, first: &Term, middle: &Term, last: &Term) -> Term {
    let mut subst = Substitution::new();
    subst.insert("x".into(), first.clone());
    if term.variables().iter().any(|v| v == "z") {
        subst.insert("y".into(), middle.clone());
        subst.insert("z".into(), last.clone());
    } else {
        subst.insert("y".into(), last.clone());
    }
    term.substitute(&subst)
}

pub(crate) fn check_witness_roles(term: &Term) -> Result<(), MaltsevError> {
    for v in term.variables() {
        if v != "x" && v != "y" && v != "z" {
            return Err(MaltsevError::BadWitnessVariable(v));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_identity;
    use crate::variety::CatalogTag;

    fn four_element_groupoid() -> FiniteAlgebra {
        FiniteAlgebra::from_alg_str(
            "algebra A\nsize 4\nnames a e b f\nop mul 2\n\
             1 1 2 3\n1 1 3 3\n2 3 3 3\n3 3 3 3\n",
        )
        .unwrap()
    }

    #[test]
    fn the_four_element_groupoid_is_a_member() {
        let a = four_element_groupoid();
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let report = member(&a, &cs, &s).unwrap();
        assert_eq!(report.verdict, Membership::Member);
        assert_eq!(
            report.replica,
            Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()
        );
        // Both replica blocks are subalgebras satisfying xy = zt.
        assert!(report.blocks.iter().all(|b| b.is_subalgebra));
    }

    #[test]
    fn its_three_element_quotient_is_not() {
        let a = four_element_groupoid();
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let theta = Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
        let quotient = a.quotient(&theta).unwrap();
        let report = member(&quotient, &cs, &s).unwrap();
        assert_eq!(report.verdict, Membership::NotMember);
        // The replica of the quotient is the all relation; the single block
        // is the whole algebra, which is not a constant semigroup.
        assert_eq!(report.replica, Partition::coarsest(3));
        let failure = report.failure.unwrap();
        let q2 = a.quotient(&theta).unwrap();
        assert_ne!(
            q2.evaluate(&failure.identity.lhs, &failure.witness)
                .unwrap(),
            q2.evaluate(&failure.identity.rhs, &failure.witness)
                .unwrap()
        );
    }

    #[test]
    fn h_closure_probe_finds_exactly_one_violation() {
        let a = four_element_groupoid();
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let report = h_closure_probe(&a, &cs, &s, 8).unwrap();
        assert_eq!(report.violation_count, 1);
        assert_eq!(
            report.entries[0].congruence,
            Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap()
        );
        // Quotients by Δ, ∇ and the replica itself all pass.
        for entry in &report.entries[1..] {
            assert_eq!(entry.report.verdict, Membership::Member);
        }
    }

    #[test]
    fn rectangular_band_probe_is_clean() {
        let lz = FiniteAlgebra::from_alg_str("algebra LZ2\nsize 2\nop mul 2\n0 0\n1 1\n").unwrap();
        let rz = FiniteAlgebra::from_alg_str("algebra RZ2\nsize 2\nop mul 2\n0 1\n0 1\n").unwrap();
        let rect = lz.direct_product(&rz).unwrap();
        let inner = VarietySpec::catalog(CatalogTag::LeftZero).unwrap();
        let outer = VarietySpec::catalog(CatalogTag::RightZero).unwrap();
        let membership = member(&rect, &inner, &outer).unwrap();
        assert_eq!(membership.verdict, Membership::Member);
        let report = h_closure_probe(&rect, &inner, &outer, 8).unwrap();
        assert_eq!(report.violation_count, 0);
    }

    #[test]
    fn sigma_w_contains_the_expected_identities() {
        let lz = VarietySpec::catalog(CatalogTag::LeftZero).unwrap();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let report = sigma_w(lz.base(), &s, 3).unwrap();
        let sig = s.signature().clone();
        // r1 = r2 = x gives x·x = x.
        let idem = parse_identity("mul(x,x) = x", &sig).unwrap();
        assert!(report.identities.contains(&idem));
        // r1 = xy, r2 = yx gives (xy)(yx) = xy.
        let swapped = parse_identity("mul(mul(x,y),mul(y,x)) = mul(x,y)", &sig).unwrap();
        assert!(report.identities.contains(&swapped));
        // Deduplication under canonical renaming really happened.
        let mut sorted = report.identities.clone();
        sorted.dedup();
        assert_eq!(sorted.len(), report.identities.len());
    }

    #[test]
    fn sigma_w_under_the_trivial_variety_is_all_instances() {
        let sig = crate::term::Signature::groupoid();
        let lz = VarietySpec::catalog(CatalogTag::LeftZero).unwrap();
        let triv = VarietySpec::catalog_over(CatalogTag::Trivial, sig.clone()).unwrap();
        let report = sigma_w(lz.base(), &triv, 2).unwrap();
        // Every pair (r1, r2) within budget is admitted: the side conditions
        // are vacuous when the variety proves everything.
        let terms = enumerate_terms(&sig, &["x1", "x2"], 2);
        let expected: usize = terms
            .iter()
            .flat_map(|r1| terms.iter().map(move |r2| r1.size() + r2.size()))
            .filter(|&total| total <= 2)
            .count();
        assert_eq!(report.tuples_emitted, expected);
    }
}
