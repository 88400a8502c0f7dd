//! Finitely based varieties with a three-valued identity decision service.
//!
//! A [`VarietySpec`] couples a finite set of base identities with one of
//! three decision strategies:
//!
//! * **Catalog** — an exact normal-form procedure for a family of stock
//!   varieties (semilattices, left/right-zero bands, rectangular bands and
//!   semigroups, constant algebras, the `C_k` chain of semigroup varieties,
//!   monounary `U_n` varieties, and groups in the `(mul, inv)` signature).
//!   Catalog verdicts are exact: positive answers carry the matching normal
//!   forms, negative ones carry a finite countermodel and witness.
//! * **AssertedRewrite** — oriented rules asserted by the caller to be
//!   terminating and confluent for the variety. Equal normal forms prove an
//!   identity; the proof is sound only modulo that assertion, which the
//!   evidence records.
//! * **Generic** — no procedure. Identities are proved only when one side
//!   rewrites to the other by a single instance of a base identity, and
//!   refuted by bounded countermodel search; everything else is `Unknown`.

mod catalog;
mod search;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{AlgebraError, Assignment, FiniteAlgebra};
use crate::term::{match_instance, parse_identity, Identity, Signature, Term, TermError};

pub use search::enumerate_models;

/// Default size bound for countermodel search.
pub const DEFAULT_MODEL_BOUND: usize = 4;
/// Default size bound for term enumeration in bounded analyses.
pub const DEFAULT_TERM_BOUND: usize = 6;

/// Cap on rewrite steps under an asserted rule system; exceeding it means
/// the termination assertion was wrong.
const REWRITE_STEP_LIMIT: usize = 10_000;

#[derive(Debug, Error)]
pub enum VarietyError {
    #[error(transparent)]
    Term(#[from] TermError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("catalog tag `{tag}` requires an explicit signature")]
    TagNeedsSignature { tag: String },
    #[error("catalog tag `{tag}` is defined over the {expected} signature")]
    TagSignature { tag: String, expected: String },
    #[error("unknown catalog tag `{0}`")]
    UnknownTag(String),
    #[error("catalog tag `{0}` is malformed (C needs k ≥ 2, U needs n ≥ 0)")]
    MalformedTag(String),
    #[error("variety `{0}` has no catalog normal-form procedure")]
    NoCatalogProcedure(String),
    #[error("equivalence in `{0}` is not decidable here (no catalog or rewrite procedure)")]
    NotDecidable(String),
    #[error("rewriting exceeded {0} steps; the asserted rule system does not terminate")]
    RewriteLimit(usize),
    #[error("`.var` input line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Tags for the stock varieties with exact decision procedures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogTag {
    /// The trivial variety, defined by `x = y`.
    Trivial,
    /// Semilattices over the groupoid signature.
    Semilattice,
    /// Left-zero bands: `xy = x`.
    LeftZero,
    /// Right-zero bands: `xy = y`.
    RightZero,
    /// Rectangular bands: idempotent and `(xy)z = xz = x(yz)`.
    RectangularBand,
    /// Rectangular semigroups: `(xy)z = xz = x(yz)`.
    RectangularSemigroup,
    /// Constant semigroups: `xy = zt`.
    ConstantSemigroup,
    /// Constant algebras over an arbitrary signature: all basic operations
    /// agree and take a single value.
    ConstantAlgebra,
    /// Semigroups in which all products of at least `k` factors coincide.
    ConstantProducts(usize),
    /// Monounary algebras with `f(f^n(x)) = f^n(x)`.
    Unary(usize),
    /// Groups presented with multiplication and inverse.
    Group,
}

impl CatalogTag {
    /// The canonical short name, as used in `.var` files and on the command
    /// line.
    pub fn as_str(&self) -> String {
        match self {
            CatalogTag::Trivial => "TRIV".into(),
            CatalogTag::Semilattice => "S".into(),
            CatalogTag::LeftZero => "LZ".into(),
            CatalogTag::RightZero => "RZ".into(),
            CatalogTag::RectangularBand => "RB".into(),
            CatalogTag::RectangularSemigroup => "RS".into(),
            CatalogTag::ConstantSemigroup => "CS".into(),
            CatalogTag::ConstantAlgebra => "CONST".into(),
            CatalogTag::ConstantProducts(k) => format!("C{k}"),
            CatalogTag::Unary(n) => format!("U{n}"),
            CatalogTag::Group => "GRP".into(),
        }
    }

    pub fn parse(text: &str) -> Result<CatalogTag, VarietyError> {
        match text {
            "TRIV" => Ok(CatalogTag::Trivial),
            "S" => Ok(CatalogTag::Semilattice),
            "LZ" => Ok(CatalogTag::LeftZero),
            "RZ" => Ok(CatalogTag::RightZero),
            "RB" => Ok(CatalogTag::RectangularBand),
            "RS" => Ok(CatalogTag::RectangularSemigroup),
            "CS" => Ok(CatalogTag::ConstantSemigroup),
            "CONST" => Ok(CatalogTag::ConstantAlgebra),
            _ => {
                if let Some(rest) = text.strip_prefix('C') {
                    let k: usize = rest
                        .parse()
                        .map_err(|_| VarietyError::UnknownTag(text.into()))?;
                    if k < 2 {
                        return Err(VarietyError::MalformedTag(text.into()));
                    }
                    return Ok(CatalogTag::ConstantProducts(k));
                }
                if let Some(rest) = text.strip_prefix('U') {
                    let n: usize = rest
                        .parse()
                        .map_err(|_| VarietyError::UnknownTag(text.into()))?;
                    return Ok(CatalogTag::Unary(n));
                }
                if text == "GRP" {
                    return Ok(CatalogTag::Group);
                }
                Err(VarietyError::UnknownTag(text.into()))
            }
        }
    }

    /// The signature a tag is defined over, when it is fixed by the tag.
    /// `Trivial` and `ConstantAlgebra` work over any signature and return
    /// `None`.
    pub fn fixed_signature(&self) -> Option<Signature> {
        match self {
            CatalogTag::Trivial | CatalogTag::ConstantAlgebra => None,
            CatalogTag::Unary(_) => Some(Signature::monounary()),
            CatalogTag::Group => Some(Signature::group()),
            _ => Some(Signature::groupoid()),
        }
    }
}

impl fmt::Display for CatalogTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_str())
    }
}

impl Serialize for CatalogTag {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.as_str())
    }
}

/// An oriented rewrite rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteRule {
    pub lhs: Term,
    pub rhs: Term,
}

/// The decision strategy of a variety.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum Decision {
    Catalog(CatalogTag),
    /// Rules the caller asserts to be terminating and confluent for the
    /// variety; verdicts derived from them say so in their evidence.
    AssertedRewrite(Vec<RewriteRule>),
    Generic,
}

/// A finitely based variety.
#[derive(Debug, Clone, Serialize)]
pub struct VarietySpec {
    name: String,
    sig: Signature,
    base: Vec<Identity>,
    decision: Decision,
}

/// Why a proved verdict holds.
#[derive(Debug, Clone, Serialize)]
pub enum Evidence {
    /// The two sides are equal up to renaming of variables.
    SyntacticEqual,
    /// Equal catalog normal forms.
    NormalForms { lhs: Term, rhs: Term },
    /// Equal normal forms under caller-asserted convergent rules.
    AssertedNormalForms { lhs: Term, rhs: Term },
    /// One side rewrites to the other by one instance of a base identity.
    BaseInstance {
        identity: Identity,
        reversed: bool,
        position: Vec<usize>,
    },
    /// One sub-proof per basic operation.
    PerOperation(Vec<(String, Evidence)>),
}

/// A finite model of the variety's base falsifying some identity, together
/// with a falsifying assignment.
#[derive(Debug, Clone, Serialize)]
pub struct Countermodel {
    pub model: FiniteAlgebra,
    pub witness: Assignment,
}

/// The bounds a failed search ran under.
#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchBounds {
    pub model_size: Option<usize>,
    pub term_size: Option<usize>,
    pub note: Option<String>,
}

impl fmt::Display for SearchBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if let Some(m) = self.model_size {
            parts.push(format!("models up to size {m}"));
        }
        if let Some(t) = self.term_size {
            parts.push(format!("terms up to size {t}"));
        }
        if let Some(note) = &self.note {
            parts.push(note.clone());
        }
        if parts.is_empty() {
            parts.push("no search performed".into());
        }
        write!(f, "{}", parts.join("; "))
    }
}

/// A three-valued answer with evidence.
#[derive(Debug, Clone, Serialize)]
pub enum Verdict {
    Proved(Evidence),
    Refuted(Countermodel),
    Unknown(SearchBounds),
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }

    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Verdict::Unknown(_))
    }

    /// Short label: `Proved`, `Refuted` or `Unknown`.
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Proved(_) => "Proved",
            Verdict::Refuted(_) => "Refuted",
            Verdict::Unknown(_) => "Unknown",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Proved(Evidence::NormalForms { lhs, rhs: _ }) => {
                write!(f, "Proved (normal form {lhs})")
            }
            Verdict::Proved(Evidence::AssertedNormalForms { lhs, rhs: _ }) => {
                write!(f, "Proved (asserted-rewrite normal form {lhs})")
            }
            Verdict::Proved(Evidence::BaseInstance { identity, .. }) => {
                write!(f, "Proved (one application of {identity})")
            }
            Verdict::Proved(_) => write!(f, "Proved"),
            Verdict::Refuted(cm) => {
                write!(
                    f,
                    "Refuted (countermodel of size {}, witness {})",
                    cm.model.size(),
                    render_assignment(&cm.witness, &cm.model)
                )
            }
            Verdict::Unknown(bounds) => write!(f, "Unknown ({bounds})"),
        }
    }
}

pub(crate) fn render_assignment(assignment: &Assignment, model: &FiniteAlgebra) -> String {
    let parts: Vec<String> = assignment
        .iter()
        .map(|(var, &value)| format!("{var}={}", model.element_name(value)))
        .collect();
    format!("{{{}}}", parts.join(", "))
}

impl VarietySpec {
    /// A catalog variety over its canonical signature. Fails for tags that
    /// need an ambient signature (`TRIV`, `CONST`); use
    /// [`VarietySpec::catalog_over`] for those.
    pub fn catalog(tag: CatalogTag) -> Result<VarietySpec, VarietyError> {
        match tag.fixed_signature() {
            Some(sig) => Self::catalog_over(tag, sig),
            None => Err(VarietyError::TagNeedsSignature { tag: tag.as_str() }),
        }
    }

    /// A catalog variety over an explicit signature. For tags with a fixed
    /// signature the given one must be compatible with it.
    pub fn catalog_over(tag: CatalogTag, sig: Signature) -> Result<VarietySpec, VarietyError> {
        if let CatalogTag::ConstantProducts(k) = tag {
            if k < 2 {
                return Err(VarietyError::MalformedTag(tag.as_str()));
            }
        }
        if let Some(expected) = tag.fixed_signature() {
            if !expected.compatible(&sig) {
                return Err(VarietyError::TagSignature {
                    tag: tag.as_str(),
                    expected: expected.name().to_string(),
                });
            }
        }
        let base = catalog::base_identities(&tag, &sig)?;
        Ok(VarietySpec {
            name: tag.as_str(),
            sig,
            base,
            decision: Decision::Catalog(tag),
        })
    }

    /// A variety given only by a finite base; identities are proved only by
    /// single base-instance steps, refuted by bounded countermodel search.
    pub fn generic(
        name: impl Into<String>,
        sig: Signature,
        base: Vec<Identity>,
    ) -> Result<VarietySpec, VarietyError> {
        for id in &base {
            id.check(&sig)?;
        }
        Ok(VarietySpec {
            name: name.into(),
            sig,
            base,
            decision: Decision::Generic,
        })
    }

    /// A variety with caller-asserted convergent rewrite rules.
    pub fn asserted_rewrite(
        name: impl Into<String>,
        sig: Signature,
        base: Vec<Identity>,
        rules: Vec<RewriteRule>,
    ) -> Result<VarietySpec, VarietyError> {
        for id in &base {
            id.check(&sig)?;
        }
        for rule in &rules {
            rule.lhs.check(&sig)?;
            rule.rhs.check(&sig)?;
        }
        Ok(VarietySpec {
            name: name.into(),
            sig,
            base,
            decision: Decision::AssertedRewrite(rules),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn base(&self) -> &[Identity] {
        &self.base
    }

    pub fn decision(&self) -> &Decision {
        &self.decision
    }

    pub fn catalog_tag(&self) -> Option<CatalogTag> {
        match self.decision {
            Decision::Catalog(tag) => Some(tag),
            _ => None,
        }
    }

    /// True when identity of terms in this variety is decidable here
    /// (catalog or asserted-rewrite strategy).
    pub fn has_decision_procedure(&self) -> bool {
        !matches!(self.decision, Decision::Generic)
    }

    /// Decides `u = v` with the default countermodel bound.
    pub fn decide(&self, u: &Term, v: &Term) -> Result<Verdict, VarietyError> {
        self.decide_bounded(u, v, DEFAULT_MODEL_BOUND)
    }

    /// Decides `u = v`, searching for countermodels up to `model_bound`
    /// where the strategy calls for a search.
    pub fn decide_bounded(
        &self,
        u: &Term,
        v: &Term,
        model_bound: usize,
    ) -> Result<Verdict, VarietyError> {
        u.check(&self.sig)?;
        v.check(&self.sig)?;
        match &self.decision {
            Decision::Catalog(tag) => catalog::decide(tag, &self.sig, u, v),
            Decision::AssertedRewrite(rules) => {
                let lhs = rewrite_normal_form(rules, u)?;
                let rhs = rewrite_normal_form(rules, v)?;
                if lhs == rhs {
                    return Ok(Verdict::Proved(Evidence::AssertedNormalForms { lhs, rhs }));
                }
                match self.countermodel_search(&Identity::new(u.clone(), v.clone()), model_bound)? {
                    Some((model, witness)) => Ok(Verdict::Refuted(Countermodel { model, witness })),
                    None => Ok(Verdict::Unknown(SearchBounds {
                        model_size: Some(model_bound),
                        term_size: None,
                        note: Some(
                            "asserted-rewrite normal forms differ but no countermodel was found"
                                .into(),
                        ),
                    })),
                }
            }
            Decision::Generic => {
                let id = Identity::new(u.clone(), v.clone());
                if id.is_trivial() {
                    return Ok(Verdict::Proved(Evidence::SyntacticEqual));
                }
                if let Some(evidence) = single_base_step(&self.base, u, v) {
                    return Ok(Verdict::Proved(evidence));
                }
                match self.countermodel_search(&id, model_bound)? {
                    Some((model, witness)) => Ok(Verdict::Refuted(Countermodel { model, witness })),
                    None => Ok(Verdict::Unknown(SearchBounds {
                        model_size: Some(model_bound),
                        term_size: None,
                        note: None,
                    })),
                }
            }
        }
    }

    /// The canonical representative of a term in a catalog variety.
    pub fn normal_form(&self, t: &Term) -> Result<Term, VarietyError> {
        t.check(&self.sig)?;
        match &self.decision {
            Decision::Catalog(tag) => catalog::normal_form(tag, &self.sig, t),
            _ => Err(VarietyError::NoCatalogProcedure(self.name.clone())),
        }
    }

    /// A canonical form under whichever exact procedure the variety has:
    /// the catalog normal form, or the asserted-rewrite normal form. Two
    /// terms are equivalent in the variety exactly when their canonical
    /// forms coincide (modulo the rewrite assertion, where applicable).
    /// Errors for generic varieties.
    pub fn canonical_form(&self, t: &Term) -> Result<Term, VarietyError> {
        t.check(&self.sig)?;
        match &self.decision {
            Decision::Catalog(tag) => catalog::normal_form(tag, &self.sig, t),
            Decision::AssertedRewrite(rules) => rewrite_normal_form(rules, t),
            Decision::Generic => Err(VarietyError::NotDecidable(self.name.clone())),
        }
    }

    /// Checks whether `t` is a term idempotent: whether the variety
    /// satisfies `op(t,…,t) = t` for every basic operation.
    pub fn is_term_idempotent(&self, t: &Term) -> Result<Verdict, VarietyError> {
        self.is_term_idempotent_bounded(t, DEFAULT_MODEL_BOUND)
    }

    pub fn is_term_idempotent_bounded(
        &self,
        t: &Term,
        model_bound: usize,
    ) -> Result<Verdict, VarietyError> {
        t.check(&self.sig)?;
        let mut proofs = Vec::new();
        let mut unknown: Option<SearchBounds> = None;
        for op in self.sig.operations() {
            let applied = Term::App(op.symbol.clone(), vec![t.clone(); op.arity]);
            match self.decide_bounded(&applied, t, model_bound)? {
                Verdict::Proved(evidence) => proofs.push((op.symbol.clone(), evidence)),
                Verdict::Refuted(cm) => return Ok(Verdict::Refuted(cm)),
                Verdict::Unknown(bounds) => unknown = Some(bounds),
            }
        }
        match unknown {
            Some(bounds) => Ok(Verdict::Unknown(bounds)),
            None => Ok(Verdict::Proved(Evidence::PerOperation(proofs))),
        }
    }

    /// Searches operation tables of sizes `1..=max_size` for a model of the
    /// base falsifying `id`. Enumeration is deterministic: sizes ascending,
    /// entries filled row-major with smaller values first, and the witness
    /// is the first falsifying assignment in odometer order.
    pub fn countermodel_search(
        &self,
        id: &Identity,
        max_size: usize,
    ) -> Result<Option<(FiniteAlgebra, Assignment)>, VarietyError> {
        id.check(&self.sig)?;
        search::countermodel(&self.sig, &self.base, id, max_size)
    }

    /// A cached prover for batch workloads. Same positive verdicts as
    /// [`VarietySpec::decide`], but refutations for non-catalog varieties
    /// come from a precomputed pool of small models instead of a fresh
    /// search per query.
    pub fn prover(&self) -> Prover<'_> {
        Prover::new(self)
    }

    /// Renders the variety in the `.var` text format.
    pub fn to_var_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("variety {}\n", self.name));
        out.push_str("signature\n");
        for op in self.sig.operations() {
            out.push_str(&format!("op {} {}\n", op.symbol, op.arity));
        }
        for id in &self.base {
            out.push_str(&format!("identity {} = {}\n", id.lhs, id.rhs));
        }
        match &self.decision {
            Decision::Catalog(tag) => out.push_str(&format!("catalog {tag}\n")),
            Decision::AssertedRewrite(rules) => {
                for rule in rules {
                    out.push_str(&format!("rewrite {} -> {}\n", rule.lhs, rule.rhs));
                }
            }
            Decision::Generic => {}
        }
        out
    }

    /// Parses the `.var` text format:
    ///
    /// ```text
    /// variety <name>
    /// signature
    /// op <symbol> <arity>     (one per operation)
    /// identity <term> = <term>
    /// catalog <TAG>           (optional)
    /// rewrite <term> -> <term>
    /// ```
    ///
    /// With a `catalog` line, the tag's canonical base is used and any
    /// listed identities serve as documentation. Without one, the listed
    /// identities become the base; `rewrite` lines, when present, are taken
    /// as an asserted convergent presentation of that base.
    pub fn from_var_str(input: &str) -> Result<VarietySpec, VarietyError> {
        let err = |line: usize, message: &str| VarietyError::Format {
            line,
            message: message.to_string(),
        };
        let mut name = None;
        let mut ops: Vec<(String, usize)> = Vec::new();
        let mut identity_lines: Vec<(usize, String)> = Vec::new();
        let mut rewrite_lines: Vec<(usize, String)> = Vec::new();
        let mut tag: Option<CatalogTag> = None;

        for (lineno, raw) in input.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let lineno = lineno + 1;
            let (kw, rest) = match line.split_once(char::is_whitespace) {
                Some((kw, rest)) => (kw, rest.trim()),
                None => (line, ""),
            };
            match kw {
                "variety" => name = Some(rest.to_string()),
                "signature" => {}
                "op" => {
                    let mut parts = rest.split_whitespace();
                    let symbol = parts
                        .next()
                        .ok_or_else(|| err(lineno, "expected `op <symbol> <arity>`"))?;
                    let arity: usize = parts
                        .next()
                        .and_then(|a| a.parse().ok())
                        .ok_or_else(|| err(lineno, "expected an integer arity"))?;
                    ops.push((symbol.to_string(), arity));
                }
                "identity" => identity_lines.push((lineno, rest.to_string())),
                "catalog" => tag = Some(CatalogTag::parse(rest)?),
                "rewrite" => rewrite_lines.push((lineno, rest.to_string())),
                _ => return Err(err(lineno, &format!("unknown directive `{kw}`"))),
            }
        }

        let name = name.ok_or_else(|| err(0, "missing `variety <name>` line"))?;
        let sig = if ops.is_empty() {
            match tag.and_then(|t| t.fixed_signature()) {
                Some(sig) => sig,
                None => return Err(err(0, "missing `signature` block")),
            }
        } else {
            Signature::new(name.clone(), ops)?
        };

        if let Some(tag) = tag {
            let mut spec = VarietySpec::catalog_over(tag, sig)?;
            spec.name = name;
            return Ok(spec);
        }

        let mut base = Vec::new();
        for (lineno, text) in identity_lines {
            let id = parse_identity(&text, &sig)
                .map_err(|e| err(lineno, &format!("bad identity: {e}")))?;
            base.push(id);
        }
        if rewrite_lines.is_empty() {
            VarietySpec::generic(name, sig, base)
        } else {
            let mut rules = Vec::new();
            for (lineno, text) in rewrite_lines {
                let (lhs, rhs) = text
                    .split_once("->")
                    .ok_or_else(|| err(lineno, "expected `rewrite <term> -> <term>`"))?;
                let lhs = crate::term::parse_term(lhs.trim(), &sig)
                    .map_err(|e| err(lineno, &format!("bad rewrite side: {e}")))?;
                let rhs = crate::term::parse_term(rhs.trim(), &sig)
                    .map_err(|e| err(lineno, &format!("bad rewrite side: {e}")))?;
                rules.push(RewriteRule { lhs, rhs });
            }
            VarietySpec::asserted_rewrite(name, sig, base, rules)
        }
    }
}

/// Looks for a proof of `u = v` by one application of a base identity at a
/// single position, in either orientation.
fn single_base_step(base: &[Identity], u: &Term, v: &Term) -> Option<Evidence> {
    for id in base {
        for (pattern, result, reversed) in [(&id.lhs, &id.rhs, false), (&id.rhs, &id.lhs, true)] {
            for position in u.positions() {
                let sub = u.subterm_at(&position)?;
                if let Some(subst) = match_instance(pattern, sub) {
                    let rewritten = u.replace_at(&position, result.substitute(&subst));
                    if rewritten.as_ref() == Some(v) {
                        return Some(Evidence::BaseInstance {
                            identity: id.clone(),
                            reversed,
                            position,
                        });
                    }
                }
            }
        }
    }
    None
}

/// Normalizes a term under oriented rules, innermost-leftmost, with a step
/// cap guarding against a wrong termination assertion.
fn rewrite_normal_form(rules: &[RewriteRule], t: &Term) -> Result<Term, VarietyError> {
    let mut current = t.clone();
    for _ in 0..REWRITE_STEP_LIMIT {
        match rewrite_once(rules, &current) {
            Some(next) => current = next,
            None => return Ok(current),
        }
    }
    Err(VarietyError::RewriteLimit(REWRITE_STEP_LIMIT))
}

fn rewrite_once(rules: &[RewriteRule], t: &Term) -> Option<Term> {
    if let Term::App(symbol, children) = t {
        for (i, child) in children.iter().enumerate() {
            if let Some(next) = rewrite_once(rules, child) {
                let mut new_children = children.clone();
                new_children[i] = next;
                return Some(Term::App(symbol.clone(), new_children));
            }
        }
    }
    for rule in rules {
        if let Some(subst) = match_instance(&rule.lhs, t) {
            return Some(rule.rhs.substitute(&subst));
        }
    }
    None
}

/// A decision service with a precomputed model pool, for batch workloads
/// such as witness search. Positive verdicts agree exactly with
/// [`VarietySpec::decide`]; refutations for generic varieties are taken from
/// the pool, and queries neither proved nor refuted there come back
/// `Unknown` instead of triggering a fresh table search.
pub struct Prover<'a> {
    variety: &'a VarietySpec,
    pool: Vec<FiniteAlgebra>,
    pool_size: usize,
}

/// Sizes and count cap for prover model pools.
const POOL_MODEL_SIZE: usize = 3;
const POOL_MODEL_COUNT: usize = 64;

impl<'a> Prover<'a> {
    fn new(variety: &'a VarietySpec) -> Self {
        let pool = if variety.has_decision_procedure() {
            Vec::new()
        } else {
            let mut pool = Vec::new();
            for size in 1..=POOL_MODEL_SIZE {
                if pool.len() >= POOL_MODEL_COUNT {
                    break;
                }
                pool.extend(search::models_up_to(
                    &variety.sig,
                    &variety.base,
                    size,
                    POOL_MODEL_COUNT - pool.len(),
                ));
            }
            pool
        };
        Prover {
            variety,
            pool,
            pool_size: POOL_MODEL_SIZE,
        }
    }

    pub fn variety(&self) -> &VarietySpec {
        self.variety
    }

    pub fn decide(&self, u: &Term, v: &Term) -> Result<Verdict, VarietyError> {
        match &self.variety.decision {
            Decision::Catalog(_) | Decision::AssertedRewrite(_) => self.variety.decide(u, v),
            Decision::Generic => {
                let id = Identity::new(u.clone(), v.clone());
                if id.is_trivial() {
                    return Ok(Verdict::Proved(Evidence::SyntacticEqual));
                }
                if let Some(evidence) = single_base_step(&self.variety.base, u, v) {
                    return Ok(Verdict::Proved(evidence));
                }
                for model in &self.pool {
                    if let Some(witness) = model.find_failing_assignment(&id)? {
                        return Ok(Verdict::Refuted(Countermodel {
                            model: model.clone(),
                            witness,
                        }));
                    }
                }
                Ok(Verdict::Unknown(SearchBounds {
                    model_size: Some(self.pool_size),
                    term_size: None,
                    note: Some("pooled-model check only".into()),
                }))
            }
        }
    }

    pub fn is_term_idempotent(&self, t: &Term) -> Result<Verdict, VarietyError> {
        let mut proofs = Vec::new();
        let mut unknown: Option<SearchBounds> = None;
        for op in self.variety.sig.operations() {
            let applied = Term::App(op.symbol.clone(), vec![t.clone(); op.arity]);
            match self.decide(&applied, t)? {
                Verdict::Proved(evidence) => proofs.push((op.symbol.clone(), evidence)),
                Verdict::Refuted(cm) => return Ok(Verdict::Refuted(cm)),
                Verdict::Unknown(bounds) => unknown = Some(bounds),
            }
        }
        match unknown {
            Some(bounds) => Ok(Verdict::Unknown(bounds)),
            None => Ok(Verdict::Proved(Evidence::PerOperation(proofs))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_identity, parse_term};

    fn term(text: &str, sig: &Signature) -> Term {
        parse_term(text, sig).unwrap()
    }

    #[test]
    fn tag_parsing_round_trips() {
        for text in [
            "TRIV", "S", "LZ", "RZ", "RB", "RS", "CS", "CONST", "C2", "C5", "U0", "U3", "GRP",
        ] {
            let tag = CatalogTag::parse(text).unwrap();
            assert_eq!(tag.as_str(), text);
        }
        assert!(CatalogTag::parse("C1").is_err());
        assert!(CatalogTag::parse("XYZ").is_err());
    }

    #[test]
    fn tag_constructors_validate() {
        // Tags without a fixed signature need one.
        assert!(VarietySpec::catalog(CatalogTag::Trivial).is_err());
        assert!(VarietySpec::catalog(CatalogTag::ConstantAlgebra).is_err());
        // Degenerate product-length bound.
        assert!(
            VarietySpec::catalog_over(CatalogTag::ConstantProducts(1), Signature::groupoid())
                .is_err()
        );
        // Signature shape is enforced for fixed-signature tags.
        assert!(
            VarietySpec::catalog_over(CatalogTag::Semilattice, Signature::monounary()).is_err()
        );
    }

    #[test]
    fn generic_single_step_proof() {
        let sig = Signature::groupoid();
        let base = vec![
            parse_identity("mul(mul(x,x),y) = y", &sig).unwrap(),
            parse_identity("mul(y,mul(x,x)) = y", &sig).unwrap(),
        ];
        let v = VarietySpec::generic("SQU", sig.clone(), base).unwrap();
        // x(yy) = x by one application of y(xx) = y.
        let verdict = v
            .decide(&term("mul(x,mul(y,y))", &sig), &term("x", &sig))
            .unwrap();
        assert!(matches!(
            verdict,
            Verdict::Proved(Evidence::BaseInstance { .. })
        ));
        // (xx)y = y directly.
        let verdict = v
            .decide(&term("mul(mul(x,x),y)", &sig), &term("y", &sig))
            .unwrap();
        assert!(verdict.is_proved());
        // xy = x fails in some model of the base.
        let verdict = v
            .decide_bounded(&term("mul(x,y)", &sig), &term("x", &sig), 3)
            .unwrap();
        match verdict {
            Verdict::Refuted(cm) => {
                for id in v.base() {
                    assert!(cm.model.satisfies(id).unwrap());
                }
                let u = term("mul(x,y)", &sig);
                let w = term("x", &sig);
                assert_ne!(
                    cm.model.evaluate(&u, &cm.witness).unwrap(),
                    cm.model.evaluate(&w, &cm.witness).unwrap()
                );
            }
            other => panic!("expected refutation, got {other}"),
        }
    }

    #[test]
    fn asserted_rewrite_decides_by_normal_form() {
        let sig = Signature::groupoid();
        // Left-zero bands oriented as a rewrite system.
        let rules = vec![RewriteRule {
            lhs: term("mul(x,y)", &sig),
            rhs: term("x", &sig),
        }];
        let base = vec![parse_identity("mul(x,y) = x", &sig).unwrap()];
        let v = VarietySpec::asserted_rewrite("LZr", sig.clone(), base, rules).unwrap();
        let verdict = v
            .decide(&term("mul(mul(x,y),z)", &sig), &term("x", &sig))
            .unwrap();
        assert!(matches!(
            verdict,
            Verdict::Proved(Evidence::AssertedNormalForms { .. })
        ));
        let verdict = v
            .decide_bounded(&term("mul(x,y)", &sig), &term("y", &sig), 2)
            .unwrap();
        assert!(verdict.is_refuted());
    }

    #[test]
    fn var_format_round_trip() {
        let v = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let text = v.to_var_string();
        let parsed = VarietySpec::from_var_str(&text).unwrap();
        assert_eq!(parsed.name(), "RS");
        assert_eq!(parsed.catalog_tag(), Some(CatalogTag::RectangularSemigroup));
        assert_eq!(parsed.base(), v.base());

        let generic = "variety SQU\nsignature\nop mul 2\nidentity mul(mul(x,x),y) = y\nidentity mul(y,mul(x,x)) = y\n";
        let v = VarietySpec::from_var_str(generic).unwrap();
        assert_eq!(v.base().len(), 2);
        assert!(!v.has_decision_procedure());
    }

    #[test]
    fn prover_agrees_with_decide_on_positives() {
        let sig = Signature::groupoid();
        let base = vec![
            parse_identity("mul(mul(x,x),y) = y", &sig).unwrap(),
            parse_identity("mul(y,mul(x,x)) = y", &sig).unwrap(),
        ];
        let v = VarietySpec::generic("SQU", sig.clone(), base).unwrap();
        let prover = v.prover();
        let u = term("mul(x,mul(y,y))", &sig);
        let x = term("x", &sig);
        assert!(prover.decide(&u, &x).unwrap().is_proved());
        assert!(prover
            .decide(&term("mul(x,y)", &sig), &x)
            .unwrap()
            .is_refuted());
    }
}
