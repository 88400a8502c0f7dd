//! Shared fixtures and independent oracles for the integration suites.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ualg::algebra::FiniteAlgebra;
use ualg::congruence::Partition;
use ualg::term::Signature;

/// The four-element groupoid on {a, e, b, f} whose quotient by
/// {{a},{b},{e,f}} escapes CS ∘ S.
pub fn four_element_groupoid() -> FiniteAlgebra {
    FiniteAlgebra::from_alg_str(
        "algebra A\nsize 4\nnames a e b f\nop mul 2\n\
         1 1 2 3\n1 1 3 3\n2 3 3 3\n3 3 3 3\n",
    )
    .unwrap()
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_groupoid(rng: &mut ChaCha8Rng, size: usize) -> FiniteAlgebra {
    let table: Vec<usize> = (0..size * size)
        .map(|_| rng.random_range(0..size))
        .collect();
    FiniteAlgebra::new("rand", Signature::groupoid(), size, None, vec![table]).unwrap()
}

pub fn random_monounary(rng: &mut ChaCha8Rng, size: usize) -> FiniteAlgebra {
    let table: Vec<usize> = (0..size).map(|_| rng.random_range(0..size)).collect();
    FiniteAlgebra::new("rand", Signature::monounary(), size, None, vec![table]).unwrap()
}

/// The left-zero band on `n` elements.
pub fn left_zero(n: usize) -> FiniteAlgebra {
    let mut table = Vec::with_capacity(n * n);
    for x in 0..n {
        for _ in 0..n {
            table.push(x);
        }
    }
    FiniteAlgebra::new(
        format!("LZ{n}"),
        Signature::groupoid(),
        n,
        None,
        vec![table],
    )
    .unwrap()
}

/// The right-zero band on `n` elements.
pub fn right_zero(n: usize) -> FiniteAlgebra {
    let mut table = Vec::with_capacity(n * n);
    for _ in 0..n {
        for y in 0..n {
            table.push(y);
        }
    }
    FiniteAlgebra::new(
        format!("RZ{n}"),
        Signature::groupoid(),
        n,
        None,
        vec![table],
    )
    .unwrap()
}

/// All partitions of `0..n` as restricted-growth class vectors, an
/// enumeration independent of the library's partition machinery.
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut classes = vec![0usize; n];
    fn rec(i: usize, max_used: usize, classes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == classes.len() {
            out.push(classes.clone());
            return;
        }
        for c in 0..=max_used + 1 {
            classes[i] = c;
            rec(i + 1, max_used.max(c), classes, out);
        }
    }
    if n == 0 {
        return vec![vec![]];
    }
    classes[0] = 0;
    rec(1, 0, &mut classes, &mut out);
    out
}

/// Direct compatibility check against the raw definition: related argument
/// tuples give related results. Written from scratch so it can serve as an
/// oracle for the library's congruence operations.
pub fn compatible_oracle(algebra: &FiniteAlgebra, classes: &[usize]) -> bool {
    let n = algebra.size();
    for (op_index, op) in algebra.signature().operations().iter().enumerate() {
        let arity = op.arity;
        let mut left = vec![0usize; arity];
        let mut right = vec![0usize; arity];
        let mut exhausted = false;
        while !exhausted {
            // Check this pair of tuples when componentwise related.
            if left
                .iter()
                .zip(&right)
                .all(|(&a, &b)| classes[a] == classes[b])
            {
                let x = algebra.apply(op_index, &left);
                let y = algebra.apply(op_index, &right);
                if classes[x] != classes[y] {
                    return false;
                }
            }
            // Advance the double odometer.
            let mut i = 2 * arity;
            loop {
                if i == 0 {
                    exhausted = true;
                    break;
                }
                i -= 1;
                let slot = if i < arity {
                    &mut left[i]
                } else {
                    &mut right[i - arity]
                };
                *slot += 1;
                if *slot < n {
                    break;
                }
                *slot = 0;
            }
        }
    }
    true
}

/// Converts a class vector into the library's canonical partition type.
pub fn partition_from_classes(classes: &[usize]) -> Partition {
    let n = classes.len();
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            if classes[i] == classes[j] {
                pairs.push((i, j));
            }
        }
    }
    Partition::from_pairs(n, &pairs).unwrap()
}

/// Intersection of a family of class vectors, as a class vector keyed by the
/// tuple of member classes.
pub fn meet_of_class_vectors(n: usize, family: &[&Vec<usize>]) -> Vec<usize> {
    let mut keys: Vec<Vec<usize>> = Vec::with_capacity(n);
    for e in 0..n {
        keys.push(family.iter().map(|classes| classes[e]).collect());
    }
    let mut labels: std::collections::BTreeMap<&Vec<usize>, usize> = Default::default();
    let mut out = Vec::with_capacity(n);
    for key in &keys {
        let next = labels.len();
        out.push(*labels.entry(key).or_insert(next));
    }
    out
}
