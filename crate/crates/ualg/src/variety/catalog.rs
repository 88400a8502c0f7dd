//! Normal forms, canonical bases and countermodel constructions for the
//! catalog varieties.
//!
//! Each tag gets three things: a finite base, a normal-form map with
//! `u = v` provable exactly when the normal forms coincide, and a
//! construction that turns a failed comparison into a concrete finite model
//! of the base falsifying the identity. Group refutations are the one place
//! where a construction can come up empty (the built-in family of finite
//! groups may in principle miss a law), in which case the verdict degrades
//! to `Unknown` rather than guessing.

use std::collections::BTreeMap;

use crate::algebra::{Assignment, FiniteAlgebra};
use crate::term::{Identity, Signature, Term};

use super::{CatalogTag, Countermodel, Evidence, SearchBounds, VarietyError, Verdict};

/// Placeholder variable used in fixed representatives, e.g. the canonical
/// non-variable term of a constant algebra.
pub(crate) const MARKER: &str = "_";

pub(crate) fn decide(
    tag: &CatalogTag,
    sig: &Signature,
    u: &Term,
    v: &Term,
) -> Result<Verdict, VarietyError> {
    let lhs = normal_form(tag, sig, u)?;
    let rhs = normal_form(tag, sig, v)?;
    if lhs == rhs {
        return Ok(Verdict::Proved(Evidence::NormalForms { lhs, rhs }));
    }
    match refutation(tag, sig, u, v) {
        Some(cm) => {
            debug_assert!(
                separates(&cm, u, v),
                "catalog countermodel fails to separate {u} and {v}"
            );
            Ok(Verdict::Refuted(cm))
        }
        None => Ok(Verdict::Unknown(SearchBounds {
            model_size: None,
            term_size: None,
            note: Some("no separating group in the built-in family".into()),
        })),
    }
}

fn separates(cm: &Countermodel, u: &Term, v: &Term) -> bool {
    match (
        cm.model.evaluate(u, &cm.witness),
        cm.model.evaluate(v, &cm.witness),
    ) {
        (Ok(a), Ok(b)) => a != b,
        _ => false,
    }
}

// ---------------------------------------------------------------------------
// Canonical bases
// ---------------------------------------------------------------------------

pub(crate) fn base_identities(
    tag: &CatalogTag,
    sig: &Signature,
) -> Result<Vec<Identity>, VarietyError> {
    let ids = match tag {
        CatalogTag::Trivial => vec![Identity::new(Term::var("x"), Term::var("y"))],
        CatalogTag::Semilattice => vec![
            id2(
                sig,
                |m| m(Term::var("x"), Term::var("y")),
                |m| m(Term::var("y"), Term::var("x")),
            ),
            id2(
                sig,
                |m| m(m(Term::var("x"), Term::var("y")), Term::var("z")),
                |m| m(Term::var("x"), m(Term::var("y"), Term::var("z"))),
            ),
            id2(
                sig,
                |m| m(Term::var("x"), Term::var("x")),
                |_| Term::var("x"),
            ),
        ],
        CatalogTag::LeftZero => vec![id2(
            sig,
            |m| m(Term::var("x"), Term::var("y")),
            |_| Term::var("x"),
        )],
        CatalogTag::RightZero => vec![id2(
            sig,
            |m| m(Term::var("x"), Term::var("y")),
            |_| Term::var("y"),
        )],
        CatalogTag::RectangularBand => {
            let mut ids = base_identities(&CatalogTag::RectangularSemigroup, sig)?;
            ids.insert(
                0,
                id2(
                    sig,
                    |m| m(Term::var("x"), Term::var("x")),
                    |_| Term::var("x"),
                ),
            );
            ids
        }
        CatalogTag::RectangularSemigroup => vec![
            id2(
                sig,
                |m| m(m(Term::var("x"), Term::var("y")), Term::var("z")),
                |m| m(Term::var("x"), Term::var("z")),
            ),
            id2(
                sig,
                |m| m(Term::var("x"), m(Term::var("y"), Term::var("z"))),
                |m| m(Term::var("x"), Term::var("z")),
            ),
        ],
        CatalogTag::ConstantSemigroup => vec![id2(
            sig,
            |m| m(Term::var("x"), Term::var("y")),
            |m| m(Term::var("z"), Term::var("t")),
        )],
        CatalogTag::ConstantAlgebra => {
            let ops = sig.operations();
            let mut ids = Vec::new();
            for i in 0..ops.len() {
                for j in i..ops.len() {
                    let lhs = Term::App(
                        ops[i].symbol.clone(),
                        (1..=ops[i].arity)
                            .map(|k| Term::var(format!("x{k}")))
                            .collect(),
                    );
                    let rhs = Term::App(
                        ops[j].symbol.clone(),
                        (1..=ops[j].arity)
                            .map(|k| Term::var(format!("y{k}")))
                            .collect(),
                    );
                    ids.push(Identity::new(lhs, rhs));
                }
            }
            ids
        }
        CatalogTag::ConstantProducts(k) => {
            let xs: Vec<Term> = (1..=*k).map(|i| Term::var(format!("x{i}"))).collect();
            let ys: Vec<Term> = (1..=*k).map(|i| Term::var(format!("y{i}"))).collect();
            vec![
                id2(
                    sig,
                    |m| m(m(Term::var("x"), Term::var("y")), Term::var("z")),
                    |m| m(Term::var("x"), m(Term::var("y"), Term::var("z"))),
                ),
                Identity::new(left_comb(sig, &xs), left_comb(sig, &ys)),
            ]
        }
        CatalogTag::Unary(n) => {
            let f = unary_symbol(sig);
            vec![Identity::new(
                iterate(&f, *n + 1, Term::var("x")),
                iterate(&f, *n, Term::var("x")),
            )]
        }
        CatalogTag::Group => {
            let m = binary_symbol(sig);
            let i = unary_symbol(sig);
            let mul = |a: Term, b: Term| Term::App(m.clone(), vec![a, b]);
            let inv = |a: Term| Term::App(i.clone(), vec![a]);
            vec![
                Identity::new(
                    mul(mul(Term::var("x"), Term::var("y")), Term::var("z")),
                    mul(Term::var("x"), mul(Term::var("y"), Term::var("z"))),
                ),
                Identity::new(
                    mul(inv(Term::var("x")), mul(Term::var("x"), Term::var("y"))),
                    Term::var("y"),
                ),
                Identity::new(
                    mul(mul(Term::var("y"), Term::var("x")), inv(Term::var("x"))),
                    Term::var("y"),
                ),
            ]
        }
    };
    for id in &ids {
        id.check(sig)?;
    }
    Ok(ids)
}

fn id2(
    sig: &Signature,
    lhs: impl Fn(&dyn Fn(Term, Term) -> Term) -> Term,
    rhs: impl Fn(&dyn Fn(Term, Term) -> Term) -> Term,
) -> Identity {
    let symbol = binary_symbol(sig);
    let m = move |a: Term, b: Term| Term::App(symbol.clone(), vec![a, b]);
    Identity::new(lhs(&m), rhs(&m))
}

fn binary_symbol(sig: &Signature) -> String {
    sig.operations()
        .iter()
        .find(|op| op.arity == 2)
        .map(|op| op.symbol.clone())
        .expect("catalog tag requires a binary operation")
}

fn unary_symbol(sig: &Signature) -> String {
    sig.operations()
        .iter()
        .find(|op| op.arity == 1)
        .map(|op| op.symbol.clone())
        .expect("catalog tag requires a unary operation")
}

fn iterate(symbol: &str, times: usize, seed: Term) -> Term {
    let mut t = seed;
    for _ in 0..times {
        t = Term::App(symbol.to_string(), vec![t]);
    }
    t
}

fn left_comb(sig: &Signature, parts: &[Term]) -> Term {
    let m = binary_symbol(sig);
    let mut iter = parts.iter().cloned();
    let mut acc = iter.next().expect("nonempty product");
    for part in iter {
        acc = Term::App(m.clone(), vec![acc, part]);
    }
    acc
}

// ---------------------------------------------------------------------------
// Normal forms
// ---------------------------------------------------------------------------

pub(crate) fn normal_form(
    tag: &CatalogTag,
    sig: &Signature,
    t: &Term,
) -> Result<Term, VarietyError> {
    let nf = match tag {
        CatalogTag::Trivial => Term::var(MARKER),
        CatalogTag::Semilattice => {
            let vars: Vec<Term> = t.variable_set().into_iter().map(Term::var).collect();
            if vars.len() == 1 {
                vars.into_iter().next().unwrap()
            } else {
                left_comb(sig, &vars)
            }
        }
        CatalogTag::LeftZero => Term::var(t.leftmost_variable()),
        CatalogTag::RightZero => Term::var(t.rightmost_variable()),
        CatalogTag::RectangularBand => {
            let first = t.leftmost_variable().to_string();
            let last = t.rightmost_variable().to_string();
            if first == last {
                Term::var(first)
            } else {
                left_comb(sig, &[Term::var(first), Term::var(last)])
            }
        }
        CatalogTag::RectangularSemigroup => {
            if t.is_var() {
                t.clone()
            } else {
                let first = Term::var(t.leftmost_variable());
                let last = Term::var(t.rightmost_variable());
                left_comb(sig, &[first, last])
            }
        }
        CatalogTag::ConstantSemigroup | CatalogTag::ConstantAlgebra => {
            if t.is_var() {
                t.clone()
            } else {
                let op = &sig.operations()[0];
                Term::App(op.symbol.clone(), vec![Term::var(MARKER); op.arity])
            }
        }
        CatalogTag::ConstantProducts(k) => {
            if t.is_var() {
                t.clone()
            } else {
                let word = leaf_word(t);
                if word.len() < *k {
                    left_comb(sig, &word.into_iter().map(Term::var).collect::<Vec<_>>())
                } else {
                    left_comb(sig, &vec![Term::var(MARKER); *k])
                }
            }
        }
        CatalogTag::Unary(n) => {
            let (depth, var) = unary_decompose(t);
            iterate(&unary_symbol(sig), depth.min(*n), Term::var(var))
        }
        CatalogTag::Group => {
            let word = group_word(t, sig);
            group_word_to_term(&word, sig)
        }
    };
    Ok(nf)
}

/// Leaves of a term in left-to-right order; the word a semigroup term
/// flattens to.
fn leaf_word(t: &Term) -> Vec<String> {
    let mut out = Vec::new();
    fn rec(t: &Term, out: &mut Vec<String>) {
        match t {
            Term::Var(v) => out.push(v.clone()),
            Term::App(_, children) => children.iter().for_each(|c| rec(c, out)),
        }
    }
    rec(t, &mut out);
    out
}

/// Splits a monounary term into iteration depth and variable.
fn unary_decompose(t: &Term) -> (usize, String) {
    match t {
        Term::Var(v) => (0, v.clone()),
        Term::App(_, children) => {
            let (depth, var) = unary_decompose(&children[0]);
            (depth + 1, var)
        }
    }
}

/// A letter of a group word: a variable and whether it is inverted.
type Letter = (String, bool);

/// The free-group reduced word of a term over the `(mul, inv)` signature.
fn group_word(t: &Term, sig: &Signature) -> Vec<Letter> {
    let mul = binary_symbol(sig);
    let mut raw = Vec::new();
    fn rec(t: &Term, inverted: bool, mul: &str, raw: &mut Vec<Letter>) {
        match t {
            Term::Var(v) => raw.push((v.clone(), inverted)),
            Term::App(symbol, children) if symbol == mul => {
                if inverted {
                    rec(&children[1], true, mul, raw);
                    rec(&children[0], true, mul, raw);
                } else {
                    rec(&children[0], false, mul, raw);
                    rec(&children[1], false, mul, raw);
                }
            }
            Term::App(_, children) => rec(&children[0], !inverted, mul, raw),
        }
    }
    rec(t, false, &mul, &mut raw);
    reduce_word(raw)
}

fn reduce_word(raw: Vec<Letter>) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for letter in raw {
        match stack.last() {
            Some(top) if top.0 == letter.0 && top.1 != letter.1 => {
                stack.pop();
            }
            _ => stack.push(letter),
        }
    }
    stack
}

fn invert_word(word: &[Letter]) -> Vec<Letter> {
    word.iter().rev().map(|(v, s)| (v.clone(), !s)).collect()
}

fn group_word_to_term(word: &[Letter], sig: &Signature) -> Term {
    let mul = binary_symbol(sig);
    let inv = unary_symbol(sig);
    let letter_term = |(v, s): &Letter| {
        let base = Term::var(v.clone());
        if *s {
            Term::App(inv.clone(), vec![base])
        } else {
            base
        }
    };
    if word.is_empty() {
        // The empty word stands for the identity element, which is not a
        // term; a fixed representative over the marker takes its place.
        return Term::App(
            mul,
            vec![Term::var(MARKER), Term::App(inv, vec![Term::var(MARKER)])],
        );
    }
    let mut iter = word.iter();
    let mut acc = letter_term(iter.next().unwrap());
    for letter in iter {
        acc = Term::App(mul.clone(), vec![acc, letter_term(letter)]);
    }
    acc
}

// ---------------------------------------------------------------------------
// Countermodels
// ---------------------------------------------------------------------------

fn refutation(tag: &CatalogTag, sig: &Signature, u: &Term, v: &Term) -> Option<Countermodel> {
    let all_vars: Vec<String> = {
        let mut vars = u.variables();
        for w in v.variables() {
            if !vars.contains(&w) {
                vars.push(w);
            }
        }
        vars
    };
    let fill = |pairs: &[(&str, usize)], default: usize| -> Assignment {
        let mut asg: Assignment = all_vars.iter().map(|v| (v.clone(), default)).collect();
        for (name, value) in pairs {
            asg.insert(name.to_string(), *value);
        }
        asg
    };

    match tag {
        // The trivial variety proves everything; nothing reaches this point.
        CatalogTag::Trivial => None,
        CatalogTag::Semilattice => {
            let us = u.variable_set();
            let vs = v.variable_set();
            let x = us
                .difference(&vs)
                .next()
                .or_else(|| vs.difference(&us).next())?
                .clone();
            Some(Countermodel {
                model: two_element_semilattice(sig),
                witness: fill(&[(&x, 0)], 1),
            })
        }
        CatalogTag::LeftZero => Some(Countermodel {
            model: left_zero_band(sig),
            witness: fill(&[(v.leftmost_variable(), 1), (u.leftmost_variable(), 0)], 0),
        }),
        CatalogTag::RightZero => Some(Countermodel {
            model: right_zero_band(sig),
            witness: fill(
                &[(v.rightmost_variable(), 1), (u.rightmost_variable(), 0)],
                0,
            ),
        }),
        CatalogTag::RectangularBand | CatalogTag::RectangularSemigroup => {
            let (fu, lu) = (u.leftmost_variable(), u.rightmost_variable());
            let (fv, lv) = (v.leftmost_variable(), v.rightmost_variable());
            if fu != fv {
                Some(Countermodel {
                    model: left_zero_band(sig),
                    witness: fill(&[(fv, 1), (fu, 0)], 0),
                })
            } else if lu != lv {
                Some(Countermodel {
                    model: right_zero_band(sig),
                    witness: fill(&[(lv, 1), (lu, 0)], 0),
                })
            } else {
                // Same endpoints but distinct normal forms: one side is a
                // bare variable, the other is not (rectangular semigroups
                // only; bands collapse this case).
                let var = if u.is_var() { fu } else { fv };
                Some(Countermodel {
                    model: constant_model(sig),
                    witness: fill(&[(var, 1)], 1),
                })
            }
        }
        CatalogTag::ConstantSemigroup | CatalogTag::ConstantAlgebra => match (u, v) {
            (Term::Var(a), Term::Var(b)) => Some(Countermodel {
                model: constant_model(sig),
                witness: fill(&[(a, 0), (b, 1)], 0),
            }),
            (Term::Var(a), _) | (_, Term::Var(a)) => Some(Countermodel {
                model: constant_model(sig),
                witness: fill(&[(a, 1)], 0),
            }),
            _ => None,
        },
        CatalogTag::ConstantProducts(k) => {
            let model = word_sink(sig, *k);
            let w1 = leaf_word(u);
            let w2 = leaf_word(v);
            if w1.len() == w2.len() && w1.len() < *k {
                let i = (0..w1.len()).find(|&i| w1[i] != w2[i])?;
                Some(Countermodel {
                    model,
                    witness: fill(&[(&w1[i], 0), (&w2[i], 1)], 0),
                })
            } else {
                // Lengths differ, or exactly one side reaches the sink:
                // sending every variable to the single letter `a` already
                // separates the sides.
                Some(Countermodel {
                    model,
                    witness: fill(&[], 0),
                })
            }
        }
        CatalogTag::Unary(n) => {
            let (m1, x1) = unary_decompose(u);
            let (m2, x2) = unary_decompose(v);
            if x1 != x2 {
                Some(Countermodel {
                    model: two_fixpoints(sig),
                    witness: fill(&[(&x1, 0), (&x2, 1)], 0),
                })
            } else if m1.min(*n) != m2.min(*n) {
                Some(Countermodel {
                    model: unary_chain(sig, *n),
                    witness: fill(&[(&x1, 0)], 0),
                })
            } else {
                None
            }
        }
        CatalogTag::Group => {
            let wu = group_word(u, sig);
            let wv = group_word(v, sig);
            let mut difference = wu.clone();
            difference.extend(invert_word(&wv));
            let difference = reduce_word(difference);
            // Nonzero exponent sum on some variable: a cyclic group of
            // prime order separates the sides.
            let mut sums: BTreeMap<&str, i64> = BTreeMap::new();
            for (var, inverted) in &difference {
                *sums.entry(var.as_str()).or_insert(0) += if *inverted { -1 } else { 1 };
            }
            if let Some((var, sum)) = sums.iter().find(|(_, &s)| s != 0) {
                let p = prime_not_dividing(sum.unsigned_abs());
                return Some(Countermodel {
                    model: cyclic_group(sig, p),
                    witness: fill(&[(var, 1)], 0),
                });
            }
            // Zero exponent sums everywhere: try small symmetric groups.
            for degree in [3usize, 4] {
                let model = symmetric_group(sig, degree);
                if let Some(witness) = separating_assignment(&model, u, v, &all_vars) {
                    return Some(Countermodel { model, witness });
                }
            }
            None
        }
    }
}

fn separating_assignment(
    model: &FiniteAlgebra,
    u: &Term,
    v: &Term,
    vars: &[String],
) -> Option<Assignment> {
    let n = model.size();
    let mut values = vec![0usize; vars.len()];
    loop {
        let asg: Assignment = vars.iter().cloned().zip(values.iter().copied()).collect();
        if model.evaluate(u, &asg).ok()? != model.evaluate(v, &asg).ok()? {
            return Some(asg);
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

fn prime_not_dividing(s: u64) -> usize {
    let mut p = 2usize;
    loop {
        if !s.is_multiple_of(p as u64) {
            return p;
        }
        p = (p + 1..).find(|&q| (2..q).all(|d| q % d != 0)).unwrap();
    }
}

// --- fixed small algebras over the catalog signatures ---

fn groupoid_table(sig: &Signature, name: &str, size: usize, table: Vec<usize>) -> FiniteAlgebra {
    FiniteAlgebra::new(name, sig.clone(), size, None, vec![table]).unwrap()
}

fn two_element_semilattice(sig: &Signature) -> FiniteAlgebra {
    groupoid_table(sig, "meet2", 2, vec![0, 0, 0, 1])
}

fn left_zero_band(sig: &Signature) -> FiniteAlgebra {
    groupoid_table(sig, "LZ2", 2, vec![0, 0, 1, 1])
}

fn right_zero_band(sig: &Signature) -> FiniteAlgebra {
    groupoid_table(sig, "RZ2", 2, vec![0, 1, 0, 1])
}

/// Two elements, every operation constantly 0.
fn constant_model(sig: &Signature) -> FiniteAlgebra {
    let tables = sig
        .operations()
        .iter()
        .map(|op| vec![0usize; 2usize.pow(op.arity as u32)])
        .collect();
    FiniteAlgebra::new("const2", sig.clone(), 2, None, tables).unwrap()
}

/// Words over {a, b} of length below `k`, with a sink absorbing every longer
/// product. This is a model of the `C_k` base separating all pairs the
/// variety does not identify.
fn word_sink(sig: &Signature, k: usize) -> FiniteAlgebra {
    let mut words: Vec<String> = vec![];
    let mut layer: Vec<String> = vec!["a".into(), "b".into()];
    for _ in 1..k {
        words.extend(layer.iter().cloned());
        layer = layer
            .iter()
            .flat_map(|w| ["a", "b"].iter().map(move |c| format!("{w}{c}")))
            .collect();
    }
    let sink = words.len();
    let index: BTreeMap<&str, usize> = words
        .iter()
        .enumerate()
        .map(|(i, w)| (w.as_str(), i))
        .collect();
    let size = words.len() + 1;
    let mut table = Vec::with_capacity(size * size);
    for x in 0..size {
        for y in 0..size {
            if x == sink || y == sink {
                table.push(sink);
                continue;
            }
            let joined = format!("{}{}", words[x], words[y]);
            table.push(if joined.len() >= k {
                sink
            } else {
                index[joined.as_str()]
            });
        }
    }
    let mut names = words.clone();
    names.push("Z".into());
    FiniteAlgebra::new(
        format!("wordsink{k}"),
        sig.clone(),
        size,
        Some(names),
        vec![table],
    )
    .unwrap()
}

/// The identity map on two elements: a monounary algebra with two fixpoints.
fn two_fixpoints(sig: &Signature) -> FiniteAlgebra {
    FiniteAlgebra::new("id2", sig.clone(), 2, None, vec![vec![0, 1]]).unwrap()
}

/// The chain 0 → 1 → ⋯ → n with a fixpoint at n.
fn unary_chain(sig: &Signature, n: usize) -> FiniteAlgebra {
    let table: Vec<usize> = (0..=n).map(|i| (i + 1).min(n)).collect();
    FiniteAlgebra::new(format!("chain{n}"), sig.clone(), n + 1, None, vec![table]).unwrap()
}

/// The cyclic group of order `p` over the `(mul, inv)` signature.
pub(crate) fn cyclic_group(sig: &Signature, p: usize) -> FiniteAlgebra {
    let tables = sig
        .operations()
        .iter()
        .map(|op| match op.arity {
            2 => {
                let mut t = Vec::with_capacity(p * p);
                for i in 0..p {
                    for j in 0..p {
                        t.push((i + j) % p);
                    }
                }
                t
            }
            1 => (0..p).map(|i| (p - i) % p).collect(),
            _ => unreachable!("group signature has arities 1 and 2"),
        })
        .collect();
    FiniteAlgebra::new(format!("Z{p}"), sig.clone(), p, None, tables).unwrap()
}

/// The symmetric group on `degree` points over the `(mul, inv)` signature,
/// with permutations indexed in lexicographic order.
pub(crate) fn symmetric_group(sig: &Signature, degree: usize) -> FiniteAlgebra {
    let perms = permutations(degree);
    let index: BTreeMap<Vec<usize>, usize> = perms
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), i))
        .collect();
    let n = perms.len();
    let tables = sig
        .operations()
        .iter()
        .map(|op| match op.arity {
            2 => {
                let mut t = Vec::with_capacity(n * n);
                for p in &perms {
                    for q in &perms {
                        let composed: Vec<usize> = (0..degree).map(|x| p[q[x]]).collect();
                        t.push(index[&composed]);
                    }
                }
                t
            }
            1 => perms
                .iter()
                .map(|p| {
                    let mut inv = vec![0usize; degree];
                    for (x, &px) in p.iter().enumerate() {
                        inv[px] = x;
                    }
                    index[&inv]
                })
                .collect(),
            _ => unreachable!("group signature has arities 1 and 2"),
        })
        .collect();
    FiniteAlgebra::new(format!("Sym{degree}"), sig.clone(), n, None, tables).unwrap()
}

fn permutations(degree: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    let mut used = vec![false; degree];
    fn rec(
        degree: usize,
        current: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if current.len() == degree {
            out.push(current.clone());
            return;
        }
        for x in 0..degree {
            if !used[x] {
                used[x] = true;
                current.push(x);
                rec(degree, current, used, out);
                current.pop();
                used[x] = false;
            }
        }
    }
    rec(degree, &mut current, &mut used, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_term;
    use crate::variety::VarietySpec;

    fn v(tag: CatalogTag) -> VarietySpec {
        VarietySpec::catalog(tag).unwrap()
    }

    fn nf(spec: &VarietySpec, text: &str) -> String {
        let t = parse_term(text, spec.signature()).unwrap();
        spec.normal_form(&t).unwrap().to_string()
    }

    #[test]
    fn normal_form_examples() {
        let rs = v(CatalogTag::RectangularSemigroup);
        assert_eq!(nf(&rs, "mul(x,mul(y,y))"), "mul(x,y)");
        assert_eq!(nf(&rs, "x"), "x");
        assert_eq!(nf(&rs, "mul(x,x)"), "mul(x,x)");

        let u3 = v(CatalogTag::Unary(3));
        assert_eq!(nf(&u3, "f(f(f(f(f(x)))))"), "f(f(f(x)))");

        let lz = v(CatalogTag::LeftZero);
        assert_eq!(nf(&lz, "mul(mul(x,y),z)"), "x");

        let rb = v(CatalogTag::RectangularBand);
        assert_eq!(nf(&rb, "mul(mul(x,y),x)"), "x");
        assert_eq!(nf(&rb, "mul(x,mul(y,z))"), "mul(x,z)");

        let s = v(CatalogTag::Semilattice);
        assert_eq!(nf(&s, "mul(mul(z,y),mul(y,x))"), "mul(mul(x,y),z)");
        assert_eq!(nf(&s, "mul(x,x)"), "x");

        let c3 = v(CatalogTag::ConstantProducts(3));
        assert_eq!(nf(&c3, "mul(x,y)"), "mul(x,y)");
        assert_eq!(nf(&c3, "mul(x,mul(y,z))"), "mul(mul(_,_),_)");

        let grp = v(CatalogTag::Group);
        assert_eq!(nf(&grp, "mul(x,inv(x))"), "mul(_,inv(_))");
        assert_eq!(nf(&grp, "inv(mul(x,y))"), "mul(inv(y),inv(x))");
        assert_eq!(nf(&grp, "mul(mul(x,y),inv(y))"), "x");
    }

    #[test]
    fn normal_forms_are_idempotent() {
        for tag in [
            CatalogTag::Semilattice,
            CatalogTag::LeftZero,
            CatalogTag::RightZero,
            CatalogTag::RectangularBand,
            CatalogTag::RectangularSemigroup,
            CatalogTag::ConstantSemigroup,
            CatalogTag::ConstantProducts(3),
        ] {
            let spec = v(tag);
            let sig = spec.signature().clone();
            for text in [
                "x",
                "mul(x,x)",
                "mul(x,y)",
                "mul(mul(x,y),z)",
                "mul(x,mul(y,mul(z,x)))",
            ] {
                let t = parse_term(text, &sig).unwrap();
                let once = spec.normal_form(&t).unwrap();
                let twice = spec.normal_form(&once).unwrap();
                assert_eq!(once, twice, "tag {tag} term {text}");
            }
        }
    }

    #[test]
    fn decide_examples() {
        let s = v(CatalogTag::Semilattice);
        let sig = s.signature().clone();
        let u = parse_term("mul(x,mul(y,z))", &sig).unwrap();
        let w = parse_term("mul(mul(z,y),x)", &sig).unwrap();
        assert!(s.decide(&u, &w).unwrap().is_proved());

        let cs = v(CatalogTag::ConstantSemigroup);
        let u = parse_term("mul(x,y)", &sig).unwrap();
        let w = parse_term("mul(z,t)", &sig).unwrap();
        assert!(cs.decide(&u, &w).unwrap().is_proved());

        let u2 = v(CatalogTag::Unary(2));
        let usig = u2.signature().clone();
        let fu = parse_term("f(x)", &usig).unwrap();
        let fv = parse_term("f(f(x))", &usig).unwrap();
        match u2.decide(&fu, &fv).unwrap() {
            crate::variety::Verdict::Refuted(cm) => {
                assert_eq!(cm.model.size(), 3);
                for id in u2.base() {
                    assert!(cm.model.satisfies(id).unwrap());
                }
            }
            other => panic!("expected refutation, got {other}"),
        }
    }

    #[test]
    fn term_idempotents_match_the_catalog_facts() {
        let rs = v(CatalogTag::RectangularSemigroup);
        let sig = rs.signature().clone();
        let xy = parse_term("mul(x,y)", &sig).unwrap();
        assert!(rs.is_term_idempotent(&xy).unwrap().is_proved());
        let x = parse_term("x", &sig).unwrap();
        match rs.is_term_idempotent(&x).unwrap() {
            crate::variety::Verdict::Refuted(cm) => {
                assert_eq!(cm.model.size(), 2);
                // The witness element is not idempotent in the countermodel.
                let sq = parse_term("mul(x,x)", &sig).unwrap();
                assert_ne!(
                    cm.model.evaluate(&sq, &cm.witness).unwrap(),
                    cm.model.evaluate(&x, &cm.witness).unwrap()
                );
            }
            other => panic!("expected refutation, got {other}"),
        }

        let grp = v(CatalogTag::Group);
        let gsig = grp.signature().clone();
        let e = parse_term("mul(x,inv(x))", &gsig).unwrap();
        assert!(grp.is_term_idempotent(&e).unwrap().is_proved());

        let un = v(CatalogTag::Unary(2));
        let usig = un.signature().clone();
        assert!(un
            .is_term_idempotent(&parse_term("f(f(x))", &usig).unwrap())
            .unwrap()
            .is_proved());
        assert!(un
            .is_term_idempotent(&parse_term("f(x)", &usig).unwrap())
            .unwrap()
            .is_refuted());
    }

    #[test]
    fn group_refutations_cover_commutators() {
        let grp = v(CatalogTag::Group);
        let sig = grp.signature().clone();
        // xy = yx needs a nonabelian group.
        let u = parse_term("mul(x,y)", &sig).unwrap();
        let w = parse_term("mul(y,x)", &sig).unwrap();
        match grp.decide(&u, &w).unwrap() {
            crate::variety::Verdict::Refuted(cm) => {
                assert_eq!(cm.model.size(), 6);
                for id in grp.base() {
                    assert!(cm.model.satisfies(id).unwrap());
                }
            }
            other => panic!("expected refutation, got {other}"),
        }
        // [x², y²] = 1 is a law of Sym3 but not of groups; Sym4 catches it.
        let lhs = parse_term("mul(mul(x,x),mul(y,y))", &sig).unwrap();
        let rhs = parse_term("mul(mul(y,y),mul(x,x))", &sig).unwrap();
        match grp.decide(&lhs, &rhs).unwrap() {
            crate::variety::Verdict::Refuted(cm) => assert_eq!(cm.model.size(), 24),
            other => panic!("expected refutation, got {other}"),
        }
        // x^5 = 1 fails already in a cyclic group.
        let x5 = parse_term("mul(mul(mul(mul(x,x),x),x),x)", &sig).unwrap();
        let e = parse_term("mul(y,inv(y))", &sig).unwrap();
        match grp.decide(&x5, &e).unwrap() {
            crate::variety::Verdict::Refuted(cm) => {
                assert_eq!(cm.model.size(), 2);
            }
            other => panic!("expected refutation, got {other}"),
        }
    }

    #[test]
    fn word_sink_is_a_model_of_its_base() {
        // k = 4 is skipped only because its base identity has eight
        // variables, which makes the exhaustive check disproportionate for a
        // unit test; the construction is uniform in k.
        for k in [2usize, 3] {
            let spec = v(CatalogTag::ConstantProducts(k));
            let model = word_sink(spec.signature(), k);
            assert_eq!(model.size(), (1 << k) - 1);
            for id in spec.base() {
                assert!(model.satisfies(id).unwrap(), "k={k} id={id}");
            }
        }
    }

    #[test]
    fn symmetric_groups_satisfy_the_group_base() {
        let grp = v(CatalogTag::Group);
        for degree in [3usize, 4] {
            let model = symmetric_group(grp.signature(), degree);
            for id in grp.base() {
                assert!(model.satisfies(id).unwrap());
            }
        }
        let z5 = cyclic_group(grp.signature(), 5);
        for id in grp.base() {
            assert!(z5.satisfies(id).unwrap());
        }
    }
}
