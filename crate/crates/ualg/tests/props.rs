//! Property tests for the syntactic layer, finite algebras and partitions.

mod common;

use proptest::prelude::*;

use ualg::algebra::{Assignment, FiniteAlgebra};
use ualg::congruence::{congruence_generated, is_congruence, Partition};
use ualg::term::{match_instance, parse_term, Identity, Signature, Substitution, Term};

fn groupoid() -> Signature {
    Signature::groupoid()
}

/// Terms over mul with variables x, y, z.
fn arb_term() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![
        Just(Term::var("x")),
        Just(Term::var("y")),
        Just(Term::var("z")),
    ];
    leaf.prop_recursive(4, 24, 2, |inner| {
        (inner.clone(), inner).prop_map(|(a, b)| Term::app("mul", vec![a, b]))
    })
}

fn arb_substitution() -> impl Strategy<Value = Substitution> {
    proptest::collection::btree_map(
        prop_oneof![
            Just("x".to_string()),
            Just("y".to_string()),
            Just("z".to_string())
        ],
        arb_term(),
        0..=3,
    )
}

/// A random groupoid of size 1..=4 with its table.
fn arb_algebra() -> impl Strategy<Value = FiniteAlgebra> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec(0..n, n * n).prop_map(move |table| {
            FiniteAlgebra::new("P", Signature::groupoid(), n, None, vec![table]).unwrap()
        })
    })
}

/// A partition of 0..n encoded by merge pairs.
fn arb_partition(n: usize) -> impl Strategy<Value = Partition> {
    proptest::collection::vec((0..n, 0..n), 0..=n)
        .prop_map(move |pairs| Partition::from_pairs(n, &pairs).unwrap())
}

proptest! {
    // Printer/parser round trip.
    #[test]
    fn print_parse_round_trip(t in arb_term()) {
        let sig = groupoid();
        let text = t.to_string();
        prop_assert_eq!(parse_term(&text, &sig).unwrap(), t);
    }

    // Matching is sound: a match reproduces the target, and every
    // constructed instance is matched.
    #[test]
    fn match_soundness(p in arb_term(), subst in arb_substitution()) {
        let q = p.substitute(&subst);
        let found = match_instance(&p, &q);
        prop_assert!(found.is_some());
        prop_assert_eq!(p.substitute(&found.unwrap()), q);
    }

    // Instance-of is transitive: composing two substitution steps is again
    // a single match.
    #[test]
    fn instance_relation_is_transitive(
        p in arb_term(),
        s1 in arb_substitution(),
        s2 in arb_substitution(),
    ) {
        let q = p.substitute(&s1);
        let r = q.substitute(&s2);
        let direct = match_instance(&p, &r);
        prop_assert!(direct.is_some());
        prop_assert_eq!(p.substitute(&direct.unwrap()), r);
    }

    // Canonicalizing an identity twice changes nothing.
    #[test]
    fn canonicalization_is_idempotent(u in arb_term(), v in arb_term()) {
        let id = Identity::new(u, v);
        let once = id.canonical();
        prop_assert_eq!(once.canonical(), once.clone());
        prop_assert_eq!(&once, &id);
    }

    // Partition lattice laws on a six-element universe.
    #[test]
    fn partition_lattice_laws(
        p in arb_partition(6),
        q in arb_partition(6),
        r in arb_partition(6),
    ) {
        let join = p.join(&q).unwrap();
        let meet = p.meet(&q).unwrap();
        prop_assert_eq!(&join, &q.join(&p).unwrap());
        prop_assert_eq!(&meet, &q.meet(&p).unwrap());
        prop_assert!(p.refines(&join) && q.refines(&join));
        prop_assert!(meet.refines(&p) && meet.refines(&q));
        // Absorption.
        prop_assert_eq!(&p.join(&meet).unwrap(), &p);
        prop_assert_eq!(&p.meet(&join).unwrap(), &p);
        // Associativity of join.
        prop_assert_eq!(
            p.join(&q).unwrap().join(&r).unwrap(),
            p.join(&q.join(&r).unwrap()).unwrap()
        );
    }

    // Generated congruences are congruences containing their pairs.
    #[test]
    fn generated_congruence_contains_pairs(
        algebra in arb_algebra(),
        seed in proptest::collection::vec((0usize..4, 0usize..4), 0..=3),
    ) {
        let n = algebra.size();
        let pairs: Vec<(usize, usize)> =
            seed.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let theta = congruence_generated(&algebra, &pairs).unwrap();
        prop_assert!(is_congruence(&algebra, &theta).unwrap());
        for (a, b) in pairs {
            prop_assert!(theta.same_block(a, b));
        }
    }

    // Join and meet of congruences are congruences.
    #[test]
    fn congruence_lattice_closed_under_join_meet(
        algebra in arb_algebra(),
        s1 in proptest::collection::vec((0usize..4, 0usize..4), 0..=2),
        s2 in proptest::collection::vec((0usize..4, 0usize..4), 0..=2),
    ) {
        let n = algebra.size();
        let normalize = |s: Vec<(usize, usize)>| -> Vec<(usize, usize)> {
            s.into_iter().map(|(a, b)| (a % n, b % n)).collect()
        };
        let theta = congruence_generated(&algebra, &normalize(s1)).unwrap();
        let phi = congruence_generated(&algebra, &normalize(s2)).unwrap();
        prop_assert!(is_congruence(&algebra, &theta.join(&phi).unwrap()).unwrap());
        prop_assert!(is_congruence(&algebra, &theta.meet(&phi).unwrap()).unwrap());
    }

    // Quotient compatibility: evaluation commutes with taking blocks.
    #[test]
    fn quotient_evaluation_commutes(
        algebra in arb_algebra(),
        seed in proptest::collection::vec((0usize..4, 0usize..4), 0..=2),
        t in arb_term(),
        asg_seed in (0usize..4, 0usize..4, 0usize..4),
    ) {
        let n = algebra.size();
        let pairs: Vec<(usize, usize)> =
            seed.into_iter().map(|(a, b)| (a % n, b % n)).collect();
        let theta = congruence_generated(&algebra, &pairs).unwrap();
        let quotient = algebra.quotient(&theta).unwrap();
        let mut asg = Assignment::new();
        asg.insert("x".into(), asg_seed.0 % n);
        asg.insert("y".into(), asg_seed.1 % n);
        asg.insert("z".into(), asg_seed.2 % n);
        let blocked: Assignment = asg
            .iter()
            .map(|(k, &v)| (k.clone(), theta.block_index(v)))
            .collect();
        let down = theta.block_index(algebra.evaluate(&t, &asg).unwrap());
        let through = quotient.evaluate(&t, &blocked).unwrap();
        prop_assert_eq!(down, through);
    }

    // Product preservation: an identity holds in A × B exactly when it
    // holds in both factors.
    #[test]
    fn product_preserves_identities(
        a in arb_algebra(),
        b in arb_algebra(),
        u in arb_term(),
        v in arb_term(),
    ) {
        let id = Identity::new(u, v);
        let product = a.direct_product(&b).unwrap();
        prop_assert_eq!(
            product.satisfies(&id).unwrap(),
            a.satisfies(&id).unwrap() && b.satisfies(&id).unwrap()
        );
    }

    // Subuniverse closure: evaluation over generated elements stays inside.
    #[test]
    fn subuniverse_closed_under_evaluation(
        algebra in arb_algebra(),
        seed in 0usize..4,
        t in arb_term(),
        asg_seed in (0usize..8, 0usize..8, 0usize..8),
    ) {
        let n = algebra.size();
        let sub = algebra.subuniverse_generated(&[seed % n]);
        let mut asg = Assignment::new();
        asg.insert("x".into(), sub[asg_seed.0 % sub.len()]);
        asg.insert("y".into(), sub[asg_seed.1 % sub.len()]);
        asg.insert("z".into(), sub[asg_seed.2 % sub.len()]);
        let value = algebra.evaluate(&t, &asg).unwrap();
        prop_assert!(sub.contains(&value));
    }

    // Witness validity: a failing assignment really separates the sides.
    #[test]
    fn witnesses_reevaluate_to_unequal_values(
        algebra in arb_algebra(),
        u in arb_term(),
        v in arb_term(),
    ) {
        let id = Identity::new(u, v);
        if let Some(witness) = algebra.find_failing_assignment(&id).unwrap() {
            let lhs = algebra.evaluate(&id.lhs, &witness).unwrap();
            let rhs = algebra.evaluate(&id.rhs, &witness).unwrap();
            prop_assert_ne!(lhs, rhs);
        }
    }

    // Exhaustive checking agrees with a direct scan over all assignments.
    #[test]
    fn satisfaction_agrees_with_direct_scan(
        algebra in arb_algebra(),
        u in arb_term(),
        v in arb_term(),
    ) {
        let id = Identity::new(u.clone(), v.clone());
        let lib = algebra.satisfies(&id).unwrap();
        let mut direct = true;
        let n = algebra.size();
        'outer: for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    let mut asg = Assignment::new();
                    asg.insert("x".into(), x);
                    asg.insert("y".into(), y);
                    asg.insert("z".into(), z);
                    if algebra.evaluate(&u, &asg).unwrap() != algebra.evaluate(&v, &asg).unwrap() {
                        direct = false;
                        break 'outer;
                    }
                }
            }
        }
        prop_assert_eq!(lib, direct);
    }
}
