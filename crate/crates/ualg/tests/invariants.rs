//! Cross-module invariants: product closure, the Σ^W direction, the bounded
//! ϱ⁰ relation, and the evidence discipline of verdicts.

mod common;

use rand::Rng;

use common::*;
use ualg::algebra::FiniteAlgebra;
use ualg::maltsev::{h_closure_probe, member, sigma_w, Membership};
use ualg::replica::{replica_congruence, rho0_bounded, rho0_stabilization_bound};
use ualg::term::{enumerate_terms, parse_identity, Identity, Signature, Term};
use ualg::variety::{enumerate_models, CatalogTag, VarietySpec, Verdict};

fn catalog(tag: CatalogTag) -> VarietySpec {
    VarietySpec::catalog(tag).unwrap()
}

/// Membership is closed under direct products and generated subalgebras.
#[test]
fn membership_closed_under_products_and_subalgebras() {
    let mut rng = seeded_rng(0xC105);
    let inner = catalog(CatalogTag::ConstantSemigroup);
    let outer = catalog(CatalogTag::Semilattice);

    // Collect small members by filtering random groupoids,
    // plus the guaranteed four-element example.
    let mut members: Vec<FiniteAlgebra> = vec![four_element_groupoid()];
    while members.len() < 8 {
        let size = rng.random_range(1..=3);
        let algebra = random_groupoid(&mut rng, size);
        if member(&algebra, &inner, &outer).unwrap().is_member() {
            members.push(algebra);
        }
    }

    for a in &members {
        for b in &members {
            if a.size() * b.size() > 8 {
                continue;
            }
            let product = a.direct_product(b).unwrap();
            assert!(
                member(&product, &inner, &outer).unwrap().is_member(),
                "product of members escaped the product class"
            );
        }
        for seed in 0..a.size() {
            let sub = a.subuniverse_generated(&[seed]);
            let restricted = a.restrict(&sub).unwrap();
            assert!(
                member(&restricted, &inner, &outer).unwrap().is_member(),
                "generated subalgebra escaped the product class"
            );
        }
    }
}

/// Every member satisfies every identity produced by the Σ^W generator:
/// the identities of the product's variety closure hold on the product.
#[test]
fn sigma_w_identities_hold_on_members() {
    let inner = catalog(CatalogTag::ConstantSemigroup);
    let outer = catalog(CatalogTag::Semilattice);
    let report = sigma_w(inner.base(), &outer, 3).unwrap();
    assert!(!report.identities.is_empty());
    let a = four_element_groupoid();
    assert!(member(&a, &inner, &outer).unwrap().is_member());
    for id in &report.identities {
        assert!(a.satisfies(id).unwrap(), "member falsifies {id}");
    }
}

/// The sharper point of the generated-variety direction: the escaping
/// quotient of the four-element groupoid is NOT a member of the product but
/// still lies in the variety the product generates, so it too satisfies
/// every generated identity. Over-generation in sigma_w would break this.
#[test]
fn sigma_w_identities_hold_on_the_escaping_quotient() {
    let inner = catalog(CatalogTag::ConstantSemigroup);
    let outer = catalog(CatalogTag::Semilattice);
    let report = sigma_w(inner.base(), &outer, 3).unwrap();

    let a = four_element_groupoid();
    let theta =
        ualg::congruence::Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
    let quotient = a.quotient(&theta).unwrap();
    assert!(!member(&quotient, &inner, &outer).unwrap().is_member());
    for id in &report.identities {
        assert!(
            quotient.satisfies(id).unwrap(),
            "homomorphic image falsifies the generated identity {id}"
        );
    }
}

/// The spec's concurrency stance: core values are immutable after
/// construction and freely shareable across threads.
#[test]
fn core_types_are_send_and_sync() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<ualg::term::Signature>();
    assert_send_sync::<ualg::term::Term>();
    assert_send_sync::<ualg::term::Identity>();
    assert_send_sync::<FiniteAlgebra>();
    assert_send_sync::<ualg::congruence::Partition>();
    assert_send_sync::<ualg::congruence::BinaryRelation>();
    assert_send_sync::<VarietySpec>();
    assert_send_sync::<Verdict>();
}

/// Every substituted tuple member is a term idempotent, not only the first
/// one the generator checks; pairwise equivalence carries the property over.
#[test]
fn sigma_w_tuples_are_idempotent_throughout() {
    let outer = catalog(CatalogTag::Semilattice);
    let sig = outer.signature().clone();
    // A two-variable base identity, so emitted identities have the shape
    // u(r1, r2) = v(r1, r2) with v(r1, r2) = r1.
    let base = vec![parse_identity("mul(x,y) = x", &sig).unwrap()];
    let report = sigma_w(&base, &outer, 3).unwrap();
    for id in &report.identities {
        // rhs is the first substituted term r1; lhs is mul(r1, r2).
        let r1 = &id.rhs;
        assert!(outer.is_term_idempotent(r1).unwrap().is_proved());
        if let Term::App(_, children) = &id.lhs {
            let r2 = &children[1];
            assert!(
                outer.is_term_idempotent(r2).unwrap().is_proved(),
                "second tuple component {r2} is not a term idempotent"
            );
        }
    }
}

/// The bounded ϱ⁰ grows with the bound, its closure stays below the replica
/// congruence, and stabilization is reported where it happens.
#[test]
fn rho0_monotone_and_bounded_by_replica() {
    let mut rng = seeded_rng(0xC106);
    let outer = catalog(CatalogTag::RectangularSemigroup);
    for _ in 0..10 {
        let size = rng.random_range(1..=4);
        let algebra = random_groupoid(&mut rng, size);
        let replica = replica_congruence(&algebra, &outer).unwrap();
        let mut previous: Option<ualg::congruence::BinaryRelation> = None;
        for bound in 0..=2 {
            let relation = rho0_bounded(&algebra, &outer, bound).unwrap();
            if let Some(prev) = &previous {
                assert!(prev.subset_of(&relation), "relation shrank with the bound");
            }
            assert!(relation.transitive_closure().refines(&replica));
            previous = Some(relation);
        }
        if let Some(bound) = rho0_stabilization_bound(&algebra, &outer, 3).unwrap() {
            let closure = rho0_bounded(&algebra, &outer, bound)
                .unwrap()
                .transitive_closure();
            assert_eq!(closure, replica);
        }
    }
}

/// The disjoint-set fixpoint agrees with the raw partition-filter oracle on
/// five-element algebras too, where the partition count (52) is still small
/// enough to enumerate outright.
#[test]
fn congruence_generation_matches_oracle_at_size_five() {
    let mut rng = seeded_rng(0xC108);
    for _ in 0..25 {
        let algebra = random_groupoid(&mut rng, 5);
        let a = rng.random_range(0..5);
        let b = rng.random_range(0..5);
        let computed = ualg::congruence::congruence_generated(&algebra, &[(a, b)]).unwrap();
        let admissible: Vec<Vec<usize>> = all_partitions(5)
            .into_iter()
            .filter(|classes| classes[a] == classes[b] && compatible_oracle(&algebra, classes))
            .collect();
        let refs: Vec<&Vec<usize>> = admissible.iter().collect();
        let expected = partition_from_classes(&meet_of_class_vectors(5, &refs));
        assert_eq!(computed, expected);
    }
}

/// Negative membership reports carry a re-checkable failure.
#[test]
fn membership_failures_recheck() {
    let mut rng = seeded_rng(0xC107);
    let inner = catalog(CatalogTag::ConstantSemigroup);
    let outer = catalog(CatalogTag::Semilattice);
    let mut seen_failures = 0;
    for _ in 0..60 {
        let size = rng.random_range(2..=4);
        let algebra = random_groupoid(&mut rng, size);
        let report = member(&algebra, &inner, &outer).unwrap();
        if report.verdict == Membership::NotMember {
            seen_failures += 1;
            let failure = report.failure.expect("negative verdicts carry a failure");
            let lhs = algebra
                .evaluate(&failure.identity.lhs, &failure.witness)
                .unwrap();
            let rhs = algebra
                .evaluate(&failure.identity.rhs, &failure.witness)
                .unwrap();
            assert_ne!(lhs, rhs);
            // The witness ranges over the failing block.
            let block = &report.blocks[failure.block_index];
            for value in failure.witness.values() {
                assert!(block.elements.contains(value));
            }
        }
    }
    assert!(seen_failures > 0, "no negative cases sampled");
}

/// Proved and Refuted never arise for the same query, and refutations are
/// backed by models of the base.
#[test]
fn verdict_trichotomy_and_evidence() {
    let varieties = [
        catalog(CatalogTag::Semilattice),
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::ConstantSemigroup),
        catalog(CatalogTag::Unary(2)),
        catalog(CatalogTag::Group),
    ];
    for variety in &varieties {
        let sig = variety.signature().clone();
        let terms = enumerate_terms(&sig, &["x", "y"], 2);
        for u in &terms {
            for v in &terms {
                match variety.decide(u, v).unwrap() {
                    Verdict::Proved(_) => {
                        // Re-deciding the flipped identity agrees.
                        assert!(variety.decide(v, u).unwrap().is_proved());
                    }
                    Verdict::Refuted(cm) => {
                        assert!(cm.model.satisfies_all(variety.base()).unwrap());
                        assert_ne!(
                            cm.model.evaluate(u, &cm.witness).unwrap(),
                            cm.model.evaluate(v, &cm.witness).unwrap()
                        );
                    }
                    Verdict::Unknown(_) => panic!("catalog decisions are exact"),
                }
            }
        }
    }
}

/// For term idempotent catalog varieties, every proved nontrivial identity
/// has term-idempotent sides.
#[test]
fn term_idempotent_varieties_have_idempotent_identity_sides() {
    let varieties = [
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::ConstantSemigroup),
        catalog(CatalogTag::ConstantProducts(3)),
        catalog(CatalogTag::Unary(1)),
        catalog(CatalogTag::Unary(2)),
    ];
    for variety in &varieties {
        let sig = variety.signature().clone();
        let max = if sig.operations().iter().all(|op| op.arity == 1) {
            4
        } else {
            3
        };
        let terms = enumerate_terms(&sig, &["x", "y"], max);
        for u in &terms {
            for v in &terms {
                let id = Identity::new(u.clone(), v.clone());
                if id.is_trivial() {
                    continue;
                }
                if variety.decide(u, v).unwrap().is_proved() {
                    assert!(
                        variety.is_term_idempotent(u).unwrap().is_proved(),
                        "{}: {} proved but lhs not idempotent",
                        variety.name(),
                        id
                    );
                    assert!(
                        variety.is_term_idempotent(v).unwrap().is_proved(),
                        "{}: {} proved but rhs not idempotent",
                        variety.name(),
                        id
                    );
                }
            }
        }
    }
}

/// A purely polarized outer factor keeps every probed quotient inside the
/// product, for an inner factor the main sufficient condition cannot serve
/// (no witness terms exist for CS over itself at small sizes).
#[test]
fn purely_polarized_outer_factor_blocks_violations() {
    let outer = catalog(CatalogTag::ConstantSemigroup);
    let inner = catalog(CatalogTag::Semilattice);
    // Semilattice-structured block plus absorbed singletons.
    let sig = Signature::groupoid();
    let semilattices = enumerate_models(&sig, catalog(CatalogTag::Semilattice).base(), 3);
    for sl in semilattices.iter().take(6) {
        let m = sl.size();
        let n = m + 2;
        let mut table = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                if x < m && y < m {
                    table.push(sl.apply(0, &[x, y]));
                } else {
                    table.push(0);
                }
            }
        }
        let algebra = FiniteAlgebra::new("sum", sig.clone(), n, None, vec![table]).unwrap();
        if member(&algebra, &inner, &outer).unwrap().is_member() {
            let probe = h_closure_probe(&algebra, &inner, &outer, 8).unwrap();
            assert_eq!(probe.violation_count, 0);
        }
    }
}
