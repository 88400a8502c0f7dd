//! Acceptance suite: one test per criterion, each printing a pass line.
//!
//! The oracles here are deliberately independent of the code paths they
//! check: partition enumeration is done by restricted-growth strings,
//! compatibility by the raw definition, and expected values are frozen from
//! the four-element example algebra.

mod common;

use std::time::Instant;

use rand::Rng;

use common::*;
use ualg::algebra::{assignment, FiniteAlgebra};
use ualg::congruence::{all_congruences, congruence_generated, Partition};
use ualg::maltsev::{
    build_chain_terms, check_theorem_hypotheses, classify_polarization, h_closure_probe, member,
    search_fg, sigma_w, verify_chain, ChainInstance, PolarizationClass,
};
use ualg::replica::{class_structure, replica_congruence};
use ualg::term::{
    enumerate_terms, parse_identity, parse_term, Identity, Signature, Substitution, Term,
};
use ualg::variety::{enumerate_models, CatalogTag, VarietySpec, Verdict};

fn catalog(tag: CatalogTag) -> VarietySpec {
    VarietySpec::catalog(tag).unwrap()
}

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
fn criterion_01_counterexample_end_to_end() {
    let started = Instant::now();
    let a = four_element_groupoid();
    let s = catalog(CatalogTag::Semilattice);
    let cs = catalog(CatalogTag::ConstantSemigroup);

    // Replica congruence {{a,e},{b,f}}.
    let rho = replica_congruence(&a, &s).unwrap();
    assert_eq!(
        rho,
        Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()
    );

    // Membership in CS ∘ S.
    let report = member(&a, &cs, &s).unwrap();
    assert!(report.is_member());

    // The quotient by {{a},{b},{e,f}} reproduced entry for entry: blocks in
    // least-member order are {a}, {e,f}, {b}, named a, e, b.
    let theta = Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
    let quotient = a.quotient(&theta).unwrap();
    assert_eq!(quotient.size(), 3);
    assert_eq!(
        quotient.element_names().unwrap(),
        &["a".to_string(), "e".to_string(), "b".to_string()]
    );
    assert_eq!(quotient.table(0), &[1, 1, 2, 1, 1, 1, 2, 1, 1]);

    // The quotient escapes the product.
    let report = member(&quotient, &cs, &s).unwrap();
    assert!(!report.is_member());

    // The closure probe finds exactly that violation.
    let probe = h_closure_probe(&a, &cs, &s, 8).unwrap();
    assert_eq!(probe.violation_count, 1);
    assert_eq!(probe.entries[0].congruence, theta);

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("PASS criterion 1: counterexample end-to-end in {elapsed:?}");
}

#[test]
fn criterion_02_congruence_generation_oracle() {
    let mut rng = seeded_rng(0x5EED_0002);
    for round in 0..200 {
        let size = rng.random_range(1..=4);
        let algebra = random_groupoid(&mut rng, size);
        let pair_count = rng.random_range(0..=3);
        let pairs: Vec<(usize, usize)> = (0..pair_count)
            .map(|_| (rng.random_range(0..size), rng.random_range(0..size)))
            .collect();

        let computed = congruence_generated(&algebra, &pairs).unwrap();

        // Oracle: meet of all compatible partitions containing the pairs.
        let admissible: Vec<Vec<usize>> = all_partitions(size)
            .into_iter()
            .filter(|classes| {
                pairs.iter().all(|&(a, b)| classes[a] == classes[b])
                    && compatible_oracle(&algebra, classes)
            })
            .collect();
        assert!(!admissible.is_empty(), "the all relation always qualifies");
        let refs: Vec<&Vec<usize>> = admissible.iter().collect();
        let expected = partition_from_classes(&meet_of_class_vectors(size, &refs));
        assert_eq!(computed, expected, "round {round}, pairs {pairs:?}");
    }
    println!(
        "PASS criterion 2: congruence generation matches the partition-meet oracle (200 rounds)"
    );
}

#[test]
fn criterion_03_replica_minimality_oracle() {
    let mut rng = seeded_rng(0x5EED_0003);
    let varieties = [
        catalog(CatalogTag::Semilattice),
        catalog(CatalogTag::ConstantSemigroup),
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::LeftZero),
        catalog(CatalogTag::RightZero),
    ];
    for round in 0..200 {
        let size = rng.random_range(1..=4);
        let algebra = random_groupoid(&mut rng, size);
        let lattice = all_congruences(&algebra, 8).unwrap();
        for variety in &varieties {
            let replica = replica_congruence(&algebra, variety).unwrap();
            let admissible: Vec<&Partition> = lattice
                .iter()
                .filter(|theta| {
                    algebra
                        .quotient(theta)
                        .unwrap()
                        .satisfies_all(variety.base())
                        .unwrap()
                })
                .collect();
            assert!(
                admissible.contains(&&replica),
                "round {round}, W = {}: replica not admissible",
                variety.name()
            );
            for theta in &admissible {
                assert!(
                    replica.refines(theta),
                    "round {round}, W = {}: replica not least",
                    variety.name()
                );
            }
        }
    }
    println!("PASS criterion 3: replica equals the least admissible congruence (200 × 5 rounds)");
}

/// First `count` nontrivial identities over the given variable pool, ordered
/// by total size and term enumeration order.
fn enumerated_identities(
    sig: &Signature,
    vars: &[&str],
    max_term_size: usize,
    total_size: usize,
    count: usize,
) -> Vec<Identity> {
    let terms = enumerate_terms(sig, vars, max_term_size);
    let mut out = Vec::new();
    for budget in 0..=total_size {
        for u in &terms {
            if u.size() > budget {
                continue;
            }
            for v in &terms {
                if u.size() + v.size() != budget || u == v {
                    continue;
                }
                out.push(Identity::new(u.clone(), v.clone()));
                if out.len() == count {
                    return out;
                }
            }
        }
    }
    out
}

#[test]
fn criterion_04_catalog_decision_soundness() {
    let two_op_sig = Signature::new("pair", [("p", 2), ("k", 1)]).unwrap();
    let varieties: Vec<VarietySpec> = vec![
        VarietySpec::catalog_over(CatalogTag::Trivial, Signature::groupoid()).unwrap(),
        catalog(CatalogTag::Semilattice),
        catalog(CatalogTag::LeftZero),
        catalog(CatalogTag::RightZero),
        catalog(CatalogTag::RectangularBand),
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::ConstantSemigroup),
        catalog(CatalogTag::ConstantProducts(2)),
        catalog(CatalogTag::ConstantProducts(3)),
        catalog(CatalogTag::Unary(0)),
        catalog(CatalogTag::Unary(1)),
        catalog(CatalogTag::Unary(2)),
        catalog(CatalogTag::Group),
        VarietySpec::catalog_over(CatalogTag::ConstantAlgebra, two_op_sig).unwrap(),
    ];

    for variety in &varieties {
        let sig = variety.signature().clone();
        let unary_sig = sig.operations().iter().all(|op| op.arity == 1);
        let identities = if unary_sig {
            enumerated_identities(&sig, &["x", "y"], 6, 6, 100)
        } else {
            enumerated_identities(&sig, &["x", "y", "z"], 3, 6, 100)
        };
        assert!(
            identities.len() == 100,
            "{}: {}",
            variety.name(),
            identities.len()
        );

        let models = enumerate_models(&sig, variety.base(), 3);
        assert!(!models.is_empty());

        for id in &identities {
            match variety.decide(&id.lhs, &id.rhs).unwrap() {
                Verdict::Proved(_) => {
                    for model in &models {
                        assert!(
                            model.satisfies(id).unwrap(),
                            "{}: proved {} fails in a model of the base",
                            variety.name(),
                            id
                        );
                    }
                }
                Verdict::Refuted(cm) => {
                    assert!(
                        cm.model.satisfies_all(variety.base()).unwrap(),
                        "{}: countermodel for {} violates the base",
                        variety.name(),
                        id
                    );
                    let lhs = cm.model.evaluate(&id.lhs, &cm.witness).unwrap();
                    let rhs = cm.model.evaluate(&id.rhs, &cm.witness).unwrap();
                    assert_ne!(lhs, rhs, "{}: witness fails for {}", variety.name(), id);
                }
                Verdict::Unknown(bounds) => {
                    panic!(
                        "{}: unexpected unknown for {} ({})",
                        variety.name(),
                        id,
                        bounds
                    )
                }
            }
        }
    }
    println!(
        "PASS criterion 4: catalog decisions sound on 100 identities × {} varieties",
        varieties.len()
    );
}

#[test]
fn criterion_05_upper_set_law() {
    let mut rng = seeded_rng(0x5EED_0005);
    let varieties = [
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::ConstantSemigroup),
        catalog(CatalogTag::Unary(1)),
        catalog(CatalogTag::Unary(2)),
        catalog(CatalogTag::Semilattice),
    ];
    for variety in &varieties {
        let sig = variety.signature().clone();
        let unary_sig = sig.operations().iter().all(|op| op.arity == 1);
        let pool_terms = if unary_sig {
            enumerate_terms(&sig, &["x"], 4)
        } else {
            enumerate_terms(&sig, &["x", "y"], 3)
        };
        let idempotents: Vec<&Term> = pool_terms
            .iter()
            .filter(|t| variety.is_term_idempotent(t).unwrap().is_proved())
            .collect();
        assert!(!idempotents.is_empty(), "{}", variety.name());

        let substitution_pool = enumerate_terms(&sig, &["x", "y"], 2);

        for round in 0..100 {
            let p = idempotents[rng.random_range(0..idempotents.len())];
            let subst: Substitution = p
                .variables()
                .into_iter()
                .map(|v| {
                    let t = &substitution_pool[rng.random_range(0..substitution_pool.len())];
                    (v, t.clone())
                })
                .collect();
            let q = p.substitute(&subst);
            assert!(
                variety.is_term_idempotent(&q).unwrap().is_proved(),
                "{} round {round}: instance {} of idempotent {} not idempotent",
                variety.name(),
                q,
                p
            );
        }
    }
    println!("PASS criterion 5: upper-set law holds on 100 instances × 5 varieties");
}

#[test]
fn criterion_06_singleton_class_law() {
    let mut rng = seeded_rng(0x5EED_0006);
    let groupoid_varieties = [
        catalog(CatalogTag::RectangularSemigroup),
        catalog(CatalogTag::ConstantSemigroup),
    ];
    for variety in &groupoid_varieties {
        for round in 0..100 {
            let size = rng.random_range(1..=5);
            let algebra = random_groupoid(&mut rng, size);
            let report = class_structure(&algebra, variety).unwrap();
            for block in &report.blocks {
                assert_eq!(block.is_subalgebra, block.is_idempotent_in_quotient);
                if !block.is_idempotent_in_quotient {
                    assert!(
                        block.is_singleton,
                        "W = {}, round {round}: non-idempotent block {:?} not a singleton",
                        variety.name(),
                        block.elements
                    );
                }
            }
        }
    }
    let u2 = catalog(CatalogTag::Unary(2));
    for round in 0..100 {
        let size = rng.random_range(1..=5);
        let algebra = random_monounary(&mut rng, size);
        let report = class_structure(&algebra, &u2).unwrap();
        for block in &report.blocks {
            if !block.is_idempotent_in_quotient {
                assert!(block.is_singleton, "U2 round {round}");
            }
        }
    }
    println!("PASS criterion 6: singleton-class law holds for RS, CS, U2 on 100 algebras each");
}

/// Members of the product used in criteria 7: models of the inner base,
/// models of the outer base, and their direct products, capped at `limit`
/// elements, deduplicated, in deterministic order.
fn product_members(
    inner: &VarietySpec,
    outer: &VarietySpec,
    model_size: usize,
    limit: usize,
    count: usize,
) -> Vec<FiniteAlgebra> {
    let inner_models = enumerate_models(inner.signature(), inner.base(), model_size);
    let outer_models = enumerate_models(outer.signature(), outer.base(), model_size);
    let mut singles: Vec<FiniteAlgebra> = inner_models;
    singles.extend(outer_models);
    let mut pool: Vec<FiniteAlgebra> = Vec::new();
    let mut seen: std::collections::BTreeSet<(usize, Vec<usize>)> = Default::default();
    let mut push = |alg: FiniteAlgebra, pool: &mut Vec<FiniteAlgebra>| {
        if alg.size() <= limit && seen.insert((alg.size(), alg.table(0).to_vec())) {
            pool.push(alg);
        }
    };
    for a in &singles {
        push(a.clone(), &mut pool);
    }
    // Products of members are members; both orders give distinct tables.
    for a in &singles {
        for b in &singles {
            if a.size() * b.size() <= limit {
                push(a.direct_product(b).unwrap(), &mut pool);
            }
        }
    }
    pool.truncate(count);
    pool
}

#[test]
fn criterion_07_example_pipeline() {
    let v = squares_are_units();
    let rs = catalog(CatalogTag::RectangularSemigroup);
    let sig = v.signature().clone();
    let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
    let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();

    // All four hypothesis conditions hold for the example witnesses.
    let report = check_theorem_hypotheses(&v, &rs, &f, &g).unwrap();
    assert!(report.all_proved, "{report}");

    // The bounded search rediscovers the pair.
    let found = search_fg(&v, &rs, 3).unwrap();
    assert!(
        found.iter().any(|c| c.f == f && c.g == g),
        "pair not rediscovered among {} candidates",
        found.len()
    );

    // Fifty members of the product have no quotient escaping it.
    let members = product_members(&v, &rs, 3, 6, 50);
    assert_eq!(members.len(), 50);
    for algebra in &members {
        let membership = member(algebra, &v, &rs).unwrap();
        assert!(membership.is_member(), "constructed algebra not a member");
        let probe = h_closure_probe(algebra, &v, &rs, 8).unwrap();
        assert_eq!(
            probe.violation_count,
            0,
            "violation found on a member of size {}",
            algebra.size()
        );
    }
    println!("PASS criterion 7: example pipeline (hypotheses, search, 50-member closure probe)");
}

#[test]
fn criterion_08_chain_construction() {
    let mut rng = seeded_rng(0x5EED_0008);

    // Group chains with the Mal'tsev witness x·y⁻¹·z. Links equate terms
    // whose words reduce to the empty word — the group term idempotents —
    // so the full chain (equivalence, idempotency, element values) passes.
    let grp = catalog(CatalogTag::Group);
    let gsig = grp.signature().clone();
    let maltsev = parse_term("mul(mul(x,inv(y)),z)", &gsig).unwrap();
    let z3 = FiniteAlgebra::from_alg_str(
        "algebra Z3\nsize 3\nop mul 2\n0 1 2\n1 2 0\n2 0 1\nop inv 1\n0 2 1\n",
    )
    .unwrap();
    let vanish = |w: &Term| {
        Term::App(
            "mul".into(),
            vec![w.clone(), Term::App("inv".into(), vec![w.clone()])],
        )
    };
    let small_terms = enumerate_terms(&gsig, &["x", "y"], 2);
    for round in 0..25 {
        let links: Vec<Identity> = (0..rng.random_range(1..=3))
            .map(|_| {
                let w1 = &small_terms[rng.random_range(0..small_terms.len())];
                let w2 = &small_terms[rng.random_range(0..small_terms.len())];
                let lhs = Term::App("mul".into(), vec![vanish(w1), vanish(w2)]);
                let rhs = vanish(w2);
                Identity::new(lhs, rhs)
            })
            .collect();
        let data = build_chain_terms(&maltsev, &maltsev, &links).unwrap();
        // One assignment covering all link variables; every link side
        // evaluates to the group identity, so the chain elements coincide.
        let mut asg = assignment(&[]);
        for link in &data.links {
            for v in link.variables() {
                asg.insert(v, rng.random_range(0..3));
            }
        }
        let elements: Vec<usize> = (0..data.terms.len())
            .map(|i| {
                if i == 0 {
                    z3.evaluate(&data.links[0].lhs, &asg).unwrap()
                } else {
                    z3.evaluate(&data.links[i - 1].rhs, &asg).unwrap()
                }
            })
            .collect();
        let instance = ChainInstance {
            algebra: z3.clone(),
            elements,
            assignment: asg,
        };
        let report = verify_chain(&grp, None, &data, Some(&instance)).unwrap();
        assert!(report.passed, "group chain round {round}: {report}");
    }

    // Rectangular-semigroup chains with the binary example witnesses,
    // checked element-level on models of the squares-are-units variety.
    let v = squares_are_units();
    let rs = catalog(CatalogTag::RectangularSemigroup);
    let sig = v.signature().clone();
    let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
    let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();
    let v_models: Vec<FiniteAlgebra> = enumerate_models(&sig, v.base(), 3)
        .into_iter()
        .filter(|m| m.size() >= 2)
        .collect();
    assert!(!v_models.is_empty());
    // Link templates p = q with RS ⊨ p = q and p solvable for any target
    // value on these models.
    let templates = [
        ("mul(mul(x,y),z)", "mul(x,z)"),
        ("mul(x,mul(y,z))", "mul(x,z)"),
        ("mul(mul(x,y),mul(z,w))", "mul(x,w)"),
    ];
    for round in 0..25 {
        let algebra = v_models[rng.random_range(0..v_models.len())].clone();
        let n_links = rng.random_range(1..=3);
        let links: Vec<Identity> = (0..n_links)
            .map(|_| {
                let (p, q) = templates[rng.random_range(0..templates.len())];
                Identity::new(parse_term(p, &sig).unwrap(), parse_term(q, &sig).unwrap())
            })
            .collect();
        let data = build_chain_terms(&f, &g, &links).unwrap();

        // Build a consistent witness assignment link by link: the value of
        // p_{i+1} must match the value q_i produced.
        let mut asg = assignment(&[]);
        let mut elements: Vec<usize> = Vec::new();
        for (i, link) in data.links.iter().enumerate() {
            let vars = link.variables();
            let chosen = if i == 0 {
                let values: Vec<usize> = vars
                    .iter()
                    .map(|_| rng.random_range(0..algebra.size()))
                    .collect();
                values
            } else {
                let target = *elements.last().unwrap();
                first_preimage(&algebra, &link.lhs, &vars, target)
                    .expect("link template is solvable on these models")
            };
            for (v, value) in vars.iter().zip(&chosen) {
                asg.insert(v.clone(), *value);
            }
            if i == 0 {
                elements.push(algebra.evaluate(&link.lhs, &asg).unwrap());
            }
            elements.push(algebra.evaluate(&link.rhs, &asg).unwrap());
        }
        let instance = ChainInstance {
            algebra,
            elements,
            assignment: asg,
        };
        let report = verify_chain(&rs, Some(&v), &data, Some(&instance)).unwrap();
        assert!(report.passed, "RS chain round {round}: {report}");
    }
    println!("PASS criterion 8: 50 chains verified (equivalences, idempotency, element values)");
}

/// First assignment (odometer order) making `term` evaluate to `target`.
fn first_preimage(
    algebra: &FiniteAlgebra,
    term: &Term,
    vars: &[String],
    target: usize,
) -> Option<Vec<usize>> {
    let n = algebra.size();
    let mut values = vec![0usize; vars.len()];
    loop {
        let asg = vars.iter().cloned().zip(values.iter().copied()).collect();
        if algebra.evaluate(term, &asg).unwrap() == target {
            return Some(values);
        }
        let mut i = values.len();
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            values[i] += 1;
            if values[i] < n {
                break;
            }
            values[i] = 0;
        }
    }
}

#[test]
fn criterion_09_sigma_w_consistency() {
    let lz = catalog(CatalogTag::LeftZero);
    let s = catalog(CatalogTag::Semilattice);
    let report = sigma_w(lz.base(), &s, 4).unwrap();
    assert!(!report.identities.is_empty());

    let members = product_members(&lz, &s, 3, 6, 50);
    assert_eq!(members.len(), 50);
    for algebra in &members {
        assert!(member(algebra, &lz, &s).unwrap().is_member());
        for id in &report.identities {
            assert!(
                algebra.satisfies(id).unwrap(),
                "member of size {} falsifies {}",
                algebra.size(),
                id
            );
        }
    }
    println!(
        "PASS criterion 9: {} Σ^W identities hold on 50 members of the product",
        report.identities.len()
    );
}

#[test]
fn criterion_10_polarization_suite() {
    let cs = catalog(CatalogTag::ConstantSemigroup);
    let report = classify_polarization(&cs, 6).unwrap();
    assert_eq!(report.classification, PolarizationClass::PurelyPolarized);

    let c3 = catalog(CatalogTag::ConstantProducts(3));
    let report = classify_polarization(&c3, 6).unwrap();
    assert_eq!(report.classification, PolarizationClass::PurelyPolarized);

    let grp = catalog(CatalogTag::Group);
    let report = classify_polarization(&grp, 6).unwrap();
    assert_eq!(report.classification, PolarizationClass::Polarized);

    let rs = catalog(CatalogTag::RectangularSemigroup);
    let report = classify_polarization(&rs, 6).unwrap();
    assert_eq!(report.classification, PolarizationClass::NotPolarized);

    // Members of V ∘ CS never lose membership under quotients: desk-scale
    // evidence that a purely polarized outer factor makes the product a
    // variety for any inner factor.
    let mut rng = seeded_rng(0x5EED_0010);
    for inner_tag in [CatalogTag::LeftZero, CatalogTag::RectangularSemigroup] {
        let inner = catalog(inner_tag);
        for round in 0..100 {
            let algebra = random_cs_member(&mut rng, inner_tag, round);
            let membership = member(&algebra, &inner, &cs).unwrap();
            assert!(
                membership.is_member(),
                "{} round {round}: constructed algebra not a member",
                inner.name()
            );
            let probe = h_closure_probe(&algebra, &inner, &cs, 8).unwrap();
            assert_eq!(
                probe.violation_count,
                0,
                "{} round {round}: quotient escaped the product",
                inner.name()
            );
        }
    }
    println!("PASS criterion 10: polarization classifications and 200 clean closure probes");
}

/// A random member of `V ∘ CS`: all products land in a designated block that
/// carries a `V`-structure, while the remaining elements are singleton
/// replica classes.
fn random_cs_member(
    rng: &mut rand_chacha::ChaCha8Rng,
    inner: CatalogTag,
    round: usize,
) -> FiniteAlgebra {
    let n = rng.random_range(2..=6);
    let m = rng.random_range(1..=n);
    // The product block 0..m gets an inner-variety structure.
    let block_table: Vec<usize> = match inner {
        CatalogTag::LeftZero => {
            let mut t = Vec::with_capacity(m * m);
            for x in 0..m {
                for _ in 0..m {
                    t.push(x);
                }
            }
            t
        }
        CatalogTag::RectangularSemigroup => {
            // Rectangular semigroup structures: a left-zero band, a
            // right-zero band, or a constant table, chosen at random.
            match rng.random_range(0..3) {
                0 => {
                    let mut t = Vec::with_capacity(m * m);
                    for x in 0..m {
                        for _ in 0..m {
                            t.push(x);
                        }
                    }
                    t
                }
                1 => {
                    let mut t = Vec::with_capacity(m * m);
                    for _ in 0..m {
                        for y in 0..m {
                            t.push(y);
                        }
                    }
                    t
                }
                _ => {
                    let c = rng.random_range(0..m);
                    vec![c; m * m]
                }
            }
        }
        _ => unreachable!("only LZ and RS inner factors are generated"),
    };
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            if x < m && y < m {
                table.push(block_table[x * m + y]);
            } else {
                table.push(rng.random_range(0..m));
            }
        }
    }
    FiniteAlgebra::new(
        format!("member{round}"),
        Signature::groupoid(),
        n,
        None,
        vec![table],
    )
    .unwrap()
}
