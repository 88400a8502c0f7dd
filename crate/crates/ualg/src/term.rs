//! Signatures, terms, identities and substitutions.
//!
//! This is the syntactic substrate for the rest of the crate: every algebra,
//! variety and report is built over a [`Signature`], and every equational
//! statement is a pair of [`Term`]s. Operation symbols always have arity at
//! least one; nullary symbols are rejected when a signature is constructed.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

/// An operation symbol together with its arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Operation {
    pub symbol: String,
    pub arity: usize,
}

/// A similarity type: a named list of operation symbols with arities ≥ 1.
#[derive(Debug, Clone, Eq, Serialize)]
pub struct Signature {
    name: String,
    ops: Vec<Operation>,
}

/// Errors raised while building signatures or manipulating terms.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum TermError {
    #[error("operation `{0}` declared with arity 0; nullary symbols are not supported")]
    NullaryOperation(String),
    #[error("operation symbol `{0}` declared twice")]
    DuplicateOperation(String),
    #[error("unknown operation symbol `{0}`")]
    UnknownSymbol(String),
    #[error("operation `{symbol}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("`{0}` is an operation symbol and cannot be used as a variable")]
    VariableShadowsOperation(String),
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
}

impl Signature {
    pub fn new(
        name: impl Into<String>,
        ops: impl IntoIterator<Item = (impl Into<String>, usize)>,
    ) -> Result<Self, TermError> {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for (symbol, arity) in ops {
            let symbol = symbol.into();
            if arity == 0 {
                return Err(TermError::NullaryOperation(symbol));
            }
            if !seen.insert(symbol.clone()) {
                return Err(TermError::DuplicateOperation(symbol));
            }
            list.push(Operation { symbol, arity });
        }
        Ok(Signature {
            name: name.into(),
            ops: list,
        })
    }

    /// The signature of groupoids (magmas): one binary operation `mul`.
    pub fn groupoid() -> Self {
        Signature::new("groupoid", [("mul", 2)]).unwrap()
    }

    /// The monounary signature: one unary operation `f`.
    pub fn monounary() -> Self {
        Signature::new("monounary", [("f", 1)]).unwrap()
    }

    /// The signature of groups presented with multiplication and inverse.
    pub fn group() -> Self {
        Signature::new("group", [("mul", 2), ("inv", 1)]).unwrap()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn operations(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.symbol == symbol)
    }

    pub fn arity(&self, symbol: &str) -> Option<usize> {
        self.ops
            .iter()
            .find(|op| op.symbol == symbol)
            .map(|op| op.arity)
    }

    /// True when both signatures declare the same symbols with the same
    /// arities. Signature names and declaration order are irrelevant here;
    /// two compatible signatures interpret the same terms.
    pub fn compatible(&self, other: &Signature) -> bool {
        if self.ops.len() != other.ops.len() {
            return false;
        }
        self.ops
            .iter()
            .all(|op| other.arity(&op.symbol) == Some(op.arity))
    }

    /// True when the signature has no nullary symbols and at least one
    /// operation of arity ≥ 2.
    pub fn is_plural(&self) -> bool {
        self.ops.iter().any(|op| op.arity >= 2)
    }
}

impl PartialEq for Signature {
    fn eq(&self, other: &Self) -> bool {
        self.compatible(other)
    }
}

/// A term over some signature: a variable or an application.
///
/// The size of a term is its number of application nodes; a bare variable has
/// size 0, so "a term different from a variable" is exactly "size ≥ 1".
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn app(symbol: impl Into<String>, children: Vec<Term>) -> Term {
        Term::App(symbol.into(), children)
    }

    /// Number of application nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, children) => 1 + children.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    /// Variables in first-occurrence (preorder) order, without repeats.
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(name) => {
                if !out.iter().any(|v| v == name) {
                    out.push(name.clone());
                }
            }
            Term::App(_, children) => {
                for child in children {
                    child.collect_variables(out);
                }
            }
        }
    }

    /// The set of variable names occurring in the term.
    pub fn variable_set(&self) -> BTreeSet<String> {
        self.variables().into_iter().collect()
    }

    /// Checks that every application symbol exists in `sig` with the right
    /// number of children.
    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        match self {
            Term::Var(name) => {
                if sig.arity(name).is_some() {
                    return Err(TermError::VariableShadowsOperation(name.clone()));
                }
                Ok(())
            }
            Term::App(symbol, children) => {
                let arity = sig
                    .arity(symbol)
                    .ok_or_else(|| TermError::UnknownSymbol(symbol.clone()))?;
                if arity != children.len() {
                    return Err(TermError::ArityMismatch {
                        symbol: symbol.clone(),
                        expected: arity,
                        got: children.len(),
                    });
                }
                children.iter().try_for_each(|c| c.check(sig))
            }
        }
    }

    /// Simultaneous substitution; variables missing from the map are kept.
    pub fn substitute(&self, subst: &Substitution) -> Term {
        match self {
            Term::Var(name) => subst
                .get(name)
                .cloned()
                .unwrap_or_else(|| Term::Var(name.clone())),
            Term::App(symbol, children) => Term::App(
                symbol.clone(),
                children.iter().map(|c| c.substitute(subst)).collect(),
            ),
        }
    }

    /// Renames variables according to `map`, leaving unmapped ones alone.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Term {
        match self {
            Term::Var(name) => Term::Var(map.get(name).cloned().unwrap_or_else(|| name.clone())),
            Term::App(symbol, children) => Term::App(
                symbol.clone(),
                children.iter().map(|c| c.rename(map)).collect(),
            ),
        }
    }

    /// All positions of the term in preorder; the root is the empty path.
    pub fn positions(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new()];
        if let Term::App(_, children) = self {
            for (i, child) in children.iter().enumerate() {
                for mut pos in child.positions() {
                    pos.insert(0, i);
                    out.push(pos);
                }
            }
        }
        out
    }

    pub fn subterm_at(&self, position: &[usize]) -> Option<&Term> {
        let mut current = self;
        for &i in position {
            match current {
                Term::App(_, children) => current = children.get(i)?,
                Term::Var(_) => return None,
            }
        }
        Some(current)
    }

    /// Returns a copy with the subterm at `position` replaced.
    pub fn replace_at(&self, position: &[usize], replacement: Term) -> Option<Term> {
        if position.is_empty() {
            return Some(replacement);
        }
        match self {
            Term::Var(_) => None,
            Term::App(symbol, children) => {
                let i = position[0];
                let child = children.get(i)?.replace_at(&position[1..], replacement)?;
                let mut new_children = children.clone();
                new_children[i] = child;
                Some(Term::App(symbol.clone(), new_children))
            }
        }
    }

    /// Leftmost variable of the term (first leaf in preorder).
    pub fn leftmost_variable(&self) -> &str {
        match self {
            Term::Var(name) => name,
            Term::App(_, children) => children[0].leftmost_variable(),
        }
    }

    /// Rightmost variable of the term (last leaf in preorder).
    pub fn rightmost_variable(&self) -> &str {
        match self {
            Term::Var(name) => name,
            Term::App(_, children) => children.last().unwrap().rightmost_variable(),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(name) => write!(f, "{name}"),
            Term::App(symbol, children) => {
                write!(f, "{symbol}(")?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{child}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl Serialize for Term {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite map from variable names to terms.
pub type Substitution = BTreeMap<String, Term>;

/// Matches the pattern `p` against `q`: finds the unique substitution `s`
/// with `p.substitute(&s) == q`, if one exists. This is one-sided matching,
/// not unification; `q` is taken literally.
pub fn match_instance(pattern: &Term, target: &Term) -> Option<Substitution> {
    let mut subst = Substitution::new();
    if match_into(pattern, target, &mut subst) {
        Some(subst)
    } else {
        None
    }
}

fn match_into(pattern: &Term, target: &Term, subst: &mut Substitution) -> bool {
    match pattern {
        Term::Var(name) => match subst.get(name) {
            Some(bound) => bound == target,
            None => {
                subst.insert(name.clone(), target.clone());
                true
            }
        },
        Term::App(symbol, children) => match target {
            Term::App(target_symbol, target_children) if symbol == target_symbol => children
                .iter()
                .zip(target_children)
                .all(|(p, t)| match_into(p, t, subst)),
            _ => false,
        },
    }
}

/// An identity `lhs = rhs`. Equality and hashing go through the canonical
/// form, in which variables are renamed `x1, x2, …` in first-occurrence
/// order of the left side followed by the right side.
#[derive(Debug, Clone)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Identity {
        Identity { lhs, rhs }
    }

    /// The canonical renaming of this identity.
    pub fn canonical(&self) -> Identity {
        let mut order = self.lhs.variables();
        for v in self.rhs.variables() {
            if !order.iter().any(|o| o == &v) {
                order.push(v);
            }
        }
        let map: BTreeMap<String, String> = order
            .into_iter()
            .enumerate()
            .map(|(i, v)| (v, format!("x{}", i + 1)))
            .collect();
        Identity {
            lhs: self.lhs.rename(&map),
            rhs: self.rhs.rename(&map),
        }
    }

    /// True when both sides coincide after canonical renaming.
    pub fn is_trivial(&self) -> bool {
        let c = self.canonical();
        c.lhs == c.rhs
    }

    /// The identity read right-to-left.
    pub fn flipped(&self) -> Identity {
        Identity::new(self.rhs.clone(), self.lhs.clone())
    }

    pub fn check(&self, sig: &Signature) -> Result<(), TermError> {
        self.lhs.check(sig)?;
        self.rhs.check(sig)
    }

    /// Variables of both sides in canonical (lhs-then-rhs first-occurrence)
    /// order.
    pub fn variables(&self) -> Vec<String> {
        let mut order = self.lhs.variables();
        for v in self.rhs.variables() {
            if !order.iter().any(|o| o == &v) {
                order.push(v);
            }
        }
        order
    }
}

impl PartialEq for Identity {
    fn eq(&self, other: &Self) -> bool {
        let a = self.canonical();
        let b = other.canonical();
        a.lhs == b.lhs && a.rhs == b.rhs
    }
}

impl Eq for Identity {}

impl std::hash::Hash for Identity {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        let c = self.canonical();
        c.lhs.hash(state);
        c.rhs.hash(state);
    }
}

impl PartialOrd for Identity {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Identity {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a = self.canonical();
        let b = other.canonical();
        (a.lhs, a.rhs).cmp(&(b.lhs, b.rhs))
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

impl Serialize for Identity {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Identity", 2)?;
        s.serialize_field("lhs", &self.lhs)?;
        s.serialize_field("rhs", &self.rhs)?;
        s.end()
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
    sig: &'a Signature,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str, sig: &'a Signature) -> Self {
        Parser {
            input,
            bytes: input.as_bytes(),
            pos: 0,
            sig,
        }
    }

    fn error(&self, message: impl Into<String>) -> TermError {
        TermError::Parse {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, byte: u8) -> Result<(), TermError> {
        match self.peek() {
            Some(b) if b == byte => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(self.error(format!(
                "expected `{}`, found `{}`",
                byte as char, b as char
            ))),
            None => Err(self.error(format!("expected `{}`, found end of input", byte as char))),
        }
    }

    fn ident(&mut self) -> Result<&'a str, TermError> {
        self.skip_ws();
        let start = self.pos;
        match self.bytes.get(self.pos) {
            Some(b) if b.is_ascii_alphabetic() || *b == b'_' => self.pos += 1,
            _ => return Err(self.error("expected an identifier")),
        }
        while let Some(b) = self.bytes.get(self.pos) {
            if b.is_ascii_alphanumeric() || *b == b'_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(&self.input[start..self.pos])
    }

    fn term(&mut self) -> Result<Term, TermError> {
        let name = self.ident()?;
        if self.peek() == Some(b'(') {
            let arity = self
                .sig
                .arity(name)
                .ok_or_else(|| TermError::UnknownSymbol(name.to_string()))?;
            self.expect(b'(')?;
            let mut children = vec![self.term()?];
            while self.peek() == Some(b',') {
                self.expect(b',')?;
                children.push(self.term()?);
            }
            self.expect(b')')?;
            if children.len() != arity {
                return Err(TermError::ArityMismatch {
                    symbol: name.to_string(),
                    expected: arity,
                    got: children.len(),
                });
            }
            Ok(Term::App(name.to_string(), children))
        } else {
            // A bare identifier is a variable, but an operation symbol may
            // not double as one.
            if self.sig.arity(name).is_some() {
                return Err(self.error(format!("operation symbol `{name}` used without arguments")));
            }
            Ok(Term::Var(name.to_string()))
        }
    }

    fn end(&mut self) -> Result<(), TermError> {
        self.skip_ws();
        if self.pos != self.bytes.len() {
            Err(self.error("trailing input"))
        } else {
            Ok(())
        }
    }
}

/// Parses a term in the `ident | ident(term, …)` grammar over `sig`.
/// Whitespace is insignificant; identifiers are `[A-Za-z_][A-Za-z0-9_]*`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term, TermError> {
    let mut parser = Parser::new(text, sig);
    let term = parser.term()?;
    parser.end()?;
    Ok(term)
}

/// Parses `term = term` over `sig`.
pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity, TermError> {
    let mut parser = Parser::new(text, sig);
    let lhs = parser.term()?;
    parser.expect(b'=')?;
    let rhs = parser.term()?;
    parser.end()?;
    Ok(Identity::new(lhs, rhs))
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

/// All terms of size at most `max_size` over the given variables, ordered by
/// size and then lexicographically on the preorder traversal, with variables
/// ranked by their position in `vars` and operation symbols by declaration
/// order (variables before operations). The output is deterministic.
pub fn enumerate_terms(sig: &Signature, vars: &[&str], max_size: usize) -> Vec<Term> {
    let mut by_size: Vec<Vec<Term>> = Vec::with_capacity(max_size + 1);
    by_size.push(vars.iter().map(|v| Term::var(*v)).collect());
    for size in 1..=max_size {
        let mut layer = Vec::new();
        for op in sig.operations() {
            // Distribute size - 1 over the children.
            let mut tuple = Vec::new();
            compositions(size - 1, op.arity, &mut tuple, &mut |parts| {
                let mut children: Vec<Vec<Term>> = Vec::with_capacity(parts.len());
                for &p in parts {
                    children.push(by_size[p].clone());
                }
                cartesian(&children, &mut |combo| {
                    layer.push(Term::App(op.symbol.clone(), combo.to_vec()));
                });
            });
        }
        by_size.push(layer);
    }
    let mut all: Vec<Term> = by_size.into_iter().flatten().collect();
    all.sort_by_cached_key(|t| (t.size(), traversal_key(t, vars, sig)));
    all
}

fn compositions(total: usize, parts: usize, acc: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if parts == 0 {
        if total == 0 {
            emit(acc);
        }
        return;
    }
    if parts == 1 {
        acc.push(total);
        emit(acc);
        acc.pop();
        return;
    }
    for first in 0..=total {
        acc.push(first);
        compositions(total - first, parts - 1, acc, emit);
        acc.pop();
    }
}

fn cartesian(choices: &[Vec<Term>], emit: &mut impl FnMut(&[Term])) {
    fn rec(choices: &[Vec<Term>], acc: &mut Vec<Term>, emit: &mut impl FnMut(&[Term])) {
        if acc.len() == choices.len() {
            emit(acc);
            return;
        }
        for item in &choices[acc.len()] {
            acc.push(item.clone());
            rec(choices, acc, emit);
            acc.pop();
        }
    }
    rec(choices, &mut Vec::new(), emit);
}

fn traversal_key(term: &Term, vars: &[&str], sig: &Signature) -> Vec<usize> {
    let mut key = Vec::new();
    fn rec(term: &Term, vars: &[&str], sig: &Signature, key: &mut Vec<usize>) {
        match term {
            Term::Var(name) => {
                let rank = vars.iter().position(|v| v == name).unwrap_or(vars.len());
                key.push(rank);
            }
            Term::App(symbol, children) => {
                key.push(vars.len() + sig.op_index(symbol).unwrap_or(usize::MAX));
                for child in children {
                    rec(child, vars, sig, key);
                }
            }
        }
    }
    rec(term, vars, sig, &mut key);
    key
}

#[cfg(test)]
mod tests {
    use super::*;

    fn groupoid() -> Signature {
        Signature::groupoid()
    }

    fn t(text: &str, sig: &Signature) -> Term {
        parse_term(text, sig).unwrap()
    }

    #[test]
    fn rejects_nullary_and_duplicates() {
        assert_eq!(
            Signature::new("bad", [("c", 0)]).unwrap_err(),
            TermError::NullaryOperation("c".into())
        );
        assert_eq!(
            Signature::new("bad", [("f", 1), ("f", 2)]).unwrap_err(),
            TermError::DuplicateOperation("f".into())
        );
    }

    #[test]
    fn parses_and_prints() {
        let sig = groupoid();
        let term = t("mul(x, mul(y, y))", &sig);
        assert_eq!(term.to_string(), "mul(x,mul(y,y))");
        assert_eq!(term.size(), 2);
        assert_eq!(term.variables(), vec!["x", "y"]);

        let sig = Signature::monounary();
        assert_eq!(t("f(f(x))", &sig).to_string(), "f(f(x))");
    }

    #[test]
    fn parse_errors() {
        let sig = groupoid();
        assert!(matches!(
            parse_term("mul(x)", &sig),
            Err(TermError::ArityMismatch { .. })
        ));
        assert!(matches!(
            parse_term("g(x,y)", &sig),
            Err(TermError::UnknownSymbol(_))
        ));
        assert!(parse_term("mul(x,,y)", &sig).is_err());
        assert!(parse_term("mul", &sig).is_err());
        assert!(parse_term("mul(x,y) extra", &sig).is_err());
        // An operation symbol cannot double as a variable, even in terms
        // built programmatically.
        assert!(matches!(
            Term::var("mul").check(&sig),
            Err(TermError::VariableShadowsOperation(_))
        ));
    }

    #[test]
    fn substitution_examples() {
        let sig = groupoid();
        let term = t("mul(x,y)", &sig);
        let mut subst = Substitution::new();
        subst.insert("x".into(), t("mul(u,v)", &sig));
        subst.insert("y".into(), Term::var("w"));
        assert_eq!(term.substitute(&subst), t("mul(mul(u,v),w)", &sig));

        let un = Signature::monounary();
        let fx = t("f(x)", &un);
        let mut s2 = Substitution::new();
        s2.insert("x".into(), fx.clone());
        assert_eq!(fx.substitute(&s2), t("f(f(x))", &un));

        assert_eq!(term.substitute(&Substitution::new()), term);
    }

    #[test]
    fn matching_examples() {
        let sig = groupoid();
        let p = t("mul(x,y)", &sig);
        let q = t("mul(mul(u,v),w)", &sig);
        let s = match_instance(&p, &q).unwrap();
        assert_eq!(p.substitute(&s), q);
        assert_eq!(s["x"], t("mul(u,v)", &sig));
        assert_eq!(s["y"], Term::var("w"));

        // Nonlinear patterns require equal arguments.
        let p = t("mul(x,x)", &sig);
        assert!(match_instance(&p, &t("mul(u,v)", &sig)).is_none());
        assert!(match_instance(&p, &t("mul(u,u)", &sig)).is_some());

        // A variable matches anything.
        let s = match_instance(&Term::var("x"), &q).unwrap();
        assert_eq!(s["x"], q);
    }

    #[test]
    fn enumeration_order() {
        let sig = groupoid();
        let terms = enumerate_terms(&sig, &["x"], 1);
        let rendered: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(rendered, vec!["x", "mul(x,x)"]);

        let terms = enumerate_terms(&sig, &["x", "y"], 1);
        let rendered: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(
            rendered,
            vec!["x", "y", "mul(x,x)", "mul(x,y)", "mul(y,x)", "mul(y,y)"]
        );

        let un = Signature::monounary();
        let terms = enumerate_terms(&un, &["x"], 2);
        let rendered: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
        assert_eq!(rendered, vec!["x", "f(x)", "f(f(x))"]);
    }

    #[test]
    fn enumeration_counts_are_exhaustive() {
        // Independent count: groupoid terms with s application nodes over v
        // variables number Catalan(s) * v^(s+1).
        fn catalan(n: usize) -> usize {
            let mut c = vec![0usize; n + 1];
            c[0] = 1;
            for i in 1..=n {
                for j in 0..i {
                    c[i] += c[j] * c[i - 1 - j];
                }
            }
            c[n]
        }
        let sig = groupoid();
        for vars in [1usize, 2, 3] {
            let names: Vec<String> = (0..vars).map(|i| format!("v{i}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            for max in 0..=3usize {
                let expected: usize = (0..=max).map(|s| catalan(s) * vars.pow(s as u32 + 1)).sum();
                assert_eq!(enumerate_terms(&sig, &refs, max).len(), expected);
            }
        }
    }

    #[test]
    fn identity_canonicalization() {
        let sig = groupoid();
        let a = parse_identity("mul(u,v) = mul(v,u)", &sig).unwrap();
        let b = parse_identity("mul(x,y) = mul(y,x)", &sig).unwrap();
        assert_eq!(a, b);
        let c = a.canonical();
        assert_eq!(c.to_string(), "mul(x1,x2) = mul(x2,x1)");
        // Canonicalizing twice changes nothing.
        assert_eq!(c.canonical(), c);

        assert!(parse_identity("mul(x,y) = mul(x,y)", &sig)
            .unwrap()
            .is_trivial());
        assert!(!parse_identity("mul(x,y) = mul(y,x)", &sig)
            .unwrap()
            .is_trivial());
    }

    #[test]
    fn variable_sets_distinguish_terms() {
        let sig = groupoid();
        assert_ne!(
            t("mul(x,y)", &sig).variable_set(),
            t("mul(x,x)", &sig).variable_set()
        );
        let un = Signature::monounary();
        assert_eq!(t("f(f(f(x)))", &un).variables(), vec!["x"]);
    }

    #[test]
    fn positions_and_replacement() {
        let sig = groupoid();
        let term = t("mul(x,mul(y,z))", &sig);
        assert_eq!(term.positions().len(), 5);
        assert_eq!(term.subterm_at(&[1, 0]), Some(&Term::var("y")));
        let replaced = term.replace_at(&[1], Term::var("w")).unwrap();
        assert_eq!(replaced, t("mul(x,w)", &sig));
    }
}
