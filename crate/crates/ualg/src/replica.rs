//! Replica congruences: the least congruence of a finite algebra whose
//! quotient lands in a given variety.
//!
//! For a finitely based variety it suffices to relate the two sides of every
//! base identity under every assignment and close up to a congruence: any
//! quotient evaluation lifts to representatives, so the quotient of the
//! generated congruence satisfies the base, and every congruence with a
//! conforming quotient contains the generating pairs. The relation ϱ⁰ —
//! pairs of values of the two sides of *arbitrary* identities of the variety
//! — is exposed separately at a term-size bound, as an instrument for
//! studying how its transitive closure climbs to the replica congruence.

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Assignment, FiniteAlgebra};
use crate::congruence::{congruence_generated, BinaryRelation, CongruenceError, Partition};
use crate::term::enumerate_terms;
use crate::variety::{VarietyError, VarietySpec};

#[derive(Debug, Error)]
pub enum ReplicaError {
    #[error("algebra and variety have incompatible signatures")]
    SignatureMismatch,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Congruence(#[from] CongruenceError),
    #[error(transparent)]
    Variety(#[from] VarietyError),
}

/// Largest variable pool used when enumerating identity candidates for ϱ⁰.
const RHO0_VAR_POOL: usize = 3;

/// The replica congruence of `algebra` with respect to `variety`: the least
/// congruence whose quotient satisfies the variety's base.
pub fn replica_congruence(
    algebra: &FiniteAlgebra,
    variety: &VarietySpec,
) -> Result<Partition, ReplicaError> {
    if !algebra.signature().compatible(variety.signature()) {
        return Err(ReplicaError::SignatureMismatch);
    }
    let mut pairs = Vec::new();
    for id in variety.base() {
        let vars = id.variables();
        for_each_assignment(algebra.size(), &vars, &mut |assignment| {
            let a = algebra.evaluate(&id.lhs, assignment)?;
            let b = algebra.evaluate(&id.rhs, assignment)?;
            if a != b {
                pairs.push((a, b));
            }
            Ok(())
        })?;
    }
    Ok(congruence_generated(algebra, &pairs)?)
}

/// The bounded fragment of ϱ⁰: all pairs `(p(d), q(d))` where `p` and `q`
/// are equivalent in the variety, range over enumerated terms of size at
/// most `term_bound`, and `d` ranges over assignments. Reflexive and
/// symmetric; under-approximates the full relation, whose identities are not
/// size-bounded. Requires a variety with an exact decision procedure.
pub fn rho0_bounded(
    algebra: &FiniteAlgebra,
    variety: &VarietySpec,
    term_bound: usize,
) -> Result<BinaryRelation, ReplicaError> {
    if !algebra.signature().compatible(variety.signature()) {
        return Err(ReplicaError::SignatureMismatch);
    }
    if !variety.has_decision_procedure() {
        return Err(ReplicaError::Variety(VarietyError::NotDecidable(
            variety.name().to_string(),
        )));
    }
    let pool: Vec<String> = (1..=(term_bound + 1).min(RHO0_VAR_POOL))
        .map(|i| format!("x{i}"))
        .collect();
    let pool_refs: Vec<&str> = pool.iter().map(|s| s.as_str()).collect();
    let terms = enumerate_terms(variety.signature(), &pool_refs, term_bound);

    // Group terms by canonical form: two terms are variety-equivalent
    // exactly when they share one.
    let mut classes: std::collections::BTreeMap<String, Vec<usize>> = Default::default();
    for (i, t) in terms.iter().enumerate() {
        classes
            .entry(variety.canonical_form(t)?.to_string())
            .or_default()
            .push(i);
    }

    let mut relation = BinaryRelation::diagonal(algebra.size());
    for class in classes.values() {
        for (pos, &i) in class.iter().enumerate() {
            for &j in &class[pos + 1..] {
                let p = &terms[i];
                let q = &terms[j];
                let mut vars = p.variables();
                for v in q.variables() {
                    if !vars.contains(&v) {
                        vars.push(v);
                    }
                }
                for_each_assignment(algebra.size(), &vars, &mut |assignment| {
                    let a = algebra.evaluate(p, assignment)?;
                    let b = algebra.evaluate(q, assignment)?;
                    relation.insert(a, b);
                    Ok(())
                })?;
            }
        }
    }
    Ok(relation)
}

/// The least term bound at which the transitive closure of the bounded ϱ⁰
/// already equals the replica congruence, if one at most `max_bound` exists.
/// The returned bound certifies stabilization on this algebra only.
pub fn rho0_stabilization_bound(
    algebra: &FiniteAlgebra,
    variety: &VarietySpec,
    max_bound: usize,
) -> Result<Option<usize>, ReplicaError> {
    let replica = replica_congruence(algebra, variety)?;
    for bound in 0..=max_bound {
        let closure = rho0_bounded(algebra, variety, bound)?.transitive_closure();
        if closure == replica {
            return Ok(Some(bound));
        }
    }
    Ok(None)
}

/// Per-block structure of a replica congruence.
#[derive(Debug, Clone, Serialize)]
pub struct BlockReport {
    pub elements: Vec<usize>,
    pub is_subalgebra: bool,
    pub is_singleton: bool,
    pub is_idempotent_in_quotient: bool,
}

/// The replica partition of an algebra together with per-block flags.
///
/// A block is a subalgebra exactly when it is an idempotent element of the
/// quotient; the report carries both flags so that the coincidence is
/// checkable rather than assumed.
#[derive(Debug, Clone, Serialize)]
pub struct ClassStructureReport {
    pub variety: String,
    pub partition: Partition,
    pub blocks: Vec<BlockReport>,
}

impl ClassStructureReport {
    pub fn render(&self, algebra: &FiniteAlgebra) -> String {
        let names: Option<Vec<String>> = algebra.element_names().map(|names| names.to_vec());
        let mut out = format!("ϱ = {}\n", self.partition.render(names.as_deref()));
        for block in &self.blocks {
            let rendered: Vec<String> = block
                .elements
                .iter()
                .map(|&e| algebra.element_name(e))
                .collect();
            out.push_str(&format!(
                "  {{{}}}: subalgebra={} singleton={} idempotent-in-quotient={}\n",
                rendered.join(","),
                block.is_subalgebra,
                block.is_singleton,
                block.is_idempotent_in_quotient
            ));
        }
        out
    }
}

/// Computes the replica partition and the per-block flags.
pub fn class_structure(
    algebra: &FiniteAlgebra,
    variety: &VarietySpec,
) -> Result<ClassStructureReport, ReplicaError> {
    let partition = replica_congruence(algebra, variety)?;
    let quotient = algebra.quotient(&partition)?;
    let idempotents = quotient.idempotent_elements();
    let blocks = partition
        .blocks()
        .into_iter()
        .enumerate()
        .map(|(i, elements)| BlockReport {
            is_subalgebra: algebra.is_subuniverse(&elements),
            is_singleton: elements.len() == 1,
            is_idempotent_in_quotient: idempotents.contains(&i),
            elements,
        })
        .collect();
    Ok(ClassStructureReport {
        variety: variety.name().to_string(),
        partition,
        blocks,
    })
}

fn for_each_assignment(
    size: usize,
    vars: &[String],
    body: &mut impl FnMut(&Assignment) -> Result<(), AlgebraError>,
) -> Result<(), AlgebraError> {
    let mut values = vec![0usize; vars.len()];
    loop {
        let assignment: Assignment = vars.iter().cloned().zip(values.iter().copied()).collect();
        body(&assignment)?;
        let mut i = values.len();
        loop {
            if i == 0 {
                return Ok(());
            }
            i -= 1;
            values[i] += 1;
            if values[i] < size {
                break;
            }
            values[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::variety::CatalogTag;

    fn four_element_groupoid() -> FiniteAlgebra {
        FiniteAlgebra::from_alg_str(
            "algebra A\nsize 4\nnames a e b f\nop mul 2\n\
             1 1 2 3\n1 1 3 3\n2 3 3 3\n3 3 3 3\n",
        )
        .unwrap()
    }

    #[test]
    fn semilattice_replica_of_the_four_element_groupoid() {
        let a = four_element_groupoid();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let rho = replica_congruence(&a, &s).unwrap();
        assert_eq!(
            rho,
            Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()
        );
        // The quotient satisfies the semilattice base.
        let q = a.quotient(&rho).unwrap();
        assert!(q.satisfies_all(s.base()).unwrap());

        // The quotient by {{a},{b},{e,f}} has replica ∇.
        let theta = Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
        let quotient = a.quotient(&theta).unwrap();
        let rho_q = replica_congruence(&quotient, &s).unwrap();
        assert_eq!(rho_q, Partition::coarsest(3));
    }

    #[test]
    fn trivial_and_empty_bases() {
        let a = four_element_groupoid();
        let sig = a.signature().clone();
        let triv = VarietySpec::catalog_over(CatalogTag::Trivial, sig.clone()).unwrap();
        assert_eq!(
            replica_congruence(&a, &triv).unwrap(),
            Partition::coarsest(4)
        );
        let empty = VarietySpec::generic("empty", sig, vec![]).unwrap();
        assert_eq!(
            replica_congruence(&a, &empty).unwrap(),
            Partition::finest(4)
        );
    }

    #[test]
    fn bounded_rho0_reaches_the_replica_on_the_four_element_groupoid() {
        let a = four_element_groupoid();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let rho = replica_congruence(&a, &s).unwrap();

        // x = x·x at x := a gives (a, a·a) = (a, e).
        let rel2 = rho0_bounded(&a, &s, 2).unwrap();
        assert!(rel2.contains(0, 1));
        // Reflexivity.
        for c in 0..4 {
            assert!(rel2.contains(c, c));
        }
        // At every bound the closure is contained in the replica.
        for bound in 0..=3 {
            let rel = rho0_bounded(&a, &s, bound).unwrap();
            assert!(rel.transitive_closure().refines(&rho));
        }
        // Equality is reached at bound 2 on this algebra.
        assert_eq!(rel2.transitive_closure(), rho);
        assert_eq!(rho0_stabilization_bound(&a, &s, 4).unwrap(), Some(1));
    }

    #[test]
    fn class_structure_of_the_four_element_groupoid() {
        let a = four_element_groupoid();
        let s = VarietySpec::catalog(CatalogTag::Semilattice).unwrap();
        let report = class_structure(&a, &s).unwrap();
        assert_eq!(report.blocks.len(), 2);
        for block in &report.blocks {
            assert!(block.is_subalgebra);
            assert!(block.is_idempotent_in_quotient);
            assert!(!block.is_singleton);
        }

        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let report = class_structure(&a, &cs).unwrap();
        // Blocks {a} (singleton, not a subalgebra: a·a = e) and {e,b,f}.
        assert_eq!(
            report.partition,
            Partition::from_blocks(4, &[vec![0], vec![1, 2, 3]]).unwrap()
        );
        assert!(report.blocks[0].is_singleton);
        assert!(!report.blocks[0].is_subalgebra);
        assert!(report.blocks[1].is_subalgebra);
        // The subalgebra flag always coincides with quotient idempotency.
        for block in &report.blocks {
            assert_eq!(block.is_subalgebra, block.is_idempotent_in_quotient);
        }
    }
}
