//! Chain terms: the recursive construction that links a sequence of
//! outer-variety identities through the witness terms.
//!
//! Given witnesses `f, g` and identities `p_i = q_i` (for `i = 1..n-1`)
//! holding in the outer variety, the grid of terms
//!
//! ```text
//! t_{i,0} = p_1
//! t_{i,j} = f(q_j, p_j, t_{i,j-1})   for 0 < j < i
//! t_{i,j} = g(q_j, q_j, t_{i,j-1})   for j ≥ i
//! ```
//!
//! yields `t_i = t_{i,n-1}`. When the hypothesis conditions hold, the `t_i`
//! are pairwise equivalent term idempotents of the outer variety, and on any
//! member of the product each `t_i` recovers the i-th element of a chain of
//! witnessed pairs. [`verify_chain`] checks all three facts.

use std::fmt;

use serde::Serialize;

use crate::algebra::{Assignment, FiniteAlgebra};
use crate::term::{Identity, Term};
use crate::variety::{VarietySpec, Verdict};

use super::{apply_witness, check_witness_roles, MaltsevError};

/// The witnesses, the renamed chain identities, and the constructed terms.
#[derive(Debug, Clone, Serialize)]
pub struct ChainData {
    pub f: Term,
    pub g: Term,
    /// Chain identities after canonical renaming to pairwise disjoint
    /// variable tuples `z<i>_<j>`; the recursion silently assumes
    /// disjointness, so it is enforced here.
    pub links: Vec<Identity>,
    /// `grid[i-1][j]` is the term `t_{i,j}`.
    pub grid: Vec<Vec<Term>>,
    /// The diagonal results `t_i = t_{i,n-1}`.
    pub terms: Vec<Term>,
}

/// Builds the chain terms for the given witnesses and chain identities.
/// An empty chain yields an empty grid; there is nothing to verify then.
pub fn build_chain_terms(
    f: &Term,
    g: &Term,
    chain: &[Identity],
) -> Result<ChainData, MaltsevError> {
    check_witness_roles(f)?;
    check_witness_roles(g)?;

    let links: Vec<Identity> = chain
        .iter()
        .enumerate()
        .map(|(i, id)| rename_disjoint(id, i + 1))
        .collect();

    let n = links.len() + 1;
    let mut grid: Vec<Vec<Term>> = Vec::new();
    if !links.is_empty() {
        for i in 1..=n {
            let mut row = Vec::with_capacity(n);
            row.push(links[0].lhs.clone()); // t_{i,0} = p_1
            for j in 1..n {
                let prev = row[j - 1].clone();
                let p = &links[j - 1].lhs;
                let q = &links[j - 1].rhs;
                let next = if j < i {
                    apply_witness(f, q, p, &prev)
                } else {
                    apply_witness(g, q, q, &prev)
                };
                row.push(next);
            }
            grid.push(row);
        }
    }
    let terms = grid.iter().map(|row| row[n - 1].clone()).collect();
    Ok(ChainData {
        f: f.clone(),
        g: g.clone(),
        links,
        grid,
        terms,
    })
}

fn rename_disjoint(id: &Identity, index: usize) -> Identity {
    let vars = id.variables();
    let map: std::collections::BTreeMap<String, String> = vars
        .into_iter()
        .enumerate()
        .map(|(j, v)| (v, format!("z{index}_{}", j + 1)))
        .collect();
    Identity::new(id.lhs.rename(&map), id.rhs.rename(&map))
}

/// A finite instance for the element-level check: an algebra, the elements
/// `a_1, …, a_n`, and one assignment covering the concatenated variable
/// tuples of all links.
#[derive(Debug, Clone)]
pub struct ChainInstance {
    pub algebra: FiniteAlgebra,
    pub elements: Vec<usize>,
    pub assignment: Assignment,
}

#[derive(Debug, Clone, Serialize)]
pub struct ChainLinkCheck {
    pub identity: Identity,
    pub verdict: Verdict,
}

/// Element-level comparison of one chain position.
#[derive(Debug, Clone, Serialize)]
pub struct InstanceValue {
    pub index: usize,
    pub expected: usize,
    pub computed: usize,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub algebra: String,
    /// For each link i: `p_i` evaluates to `a_i` and `q_i` to `a_{i+1}`.
    pub premises_hold: Vec<bool>,
    pub values: Vec<InstanceValue>,
    pub all_match: bool,
}

/// Outcome of verifying a chain: the link premises, the equivalences
/// `t_i = t_{i+1}`, idempotency of `t_1`, and optionally the element-level
/// values on a finite instance.
#[derive(Debug, Clone, Serialize)]
pub struct ChainReport {
    pub outer: String,
    pub inner: Option<String>,
    pub link_checks: Vec<ChainLinkCheck>,
    pub equivalences: Vec<ChainLinkCheck>,
    pub idempotency: Option<Verdict>,
    pub instance: Option<InstanceReport>,
    pub passed: bool,
}

impl fmt::Display for ChainReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner {
            Some(inner) => writeln!(f, "chain check for {} ∘ {}", inner, self.outer)?,
            None => writeln!(f, "chain check over {}", self.outer)?,
        }
        for check in &self.link_checks {
            writeln!(f, "  premise W ⊨ {}: {}", check.identity, check.verdict)?;
        }
        for check in &self.equivalences {
            writeln!(f, "  W ⊨ {}: {}", check.identity, check.verdict)?;
        }
        if let Some(verdict) = &self.idempotency {
            writeln!(f, "  t_1 term idempotent of W: {verdict}")?;
        }
        if let Some(instance) = &self.instance {
            writeln!(
                f,
                "  instance on {}: premises {}, values {}",
                instance.algebra,
                if instance.premises_hold.iter().all(|&b| b) {
                    "hold"
                } else {
                    "FAIL"
                },
                if instance.all_match {
                    "match"
                } else {
                    "MISMATCH"
                }
            )?;
            for value in &instance.values {
                writeln!(
                    f,
                    "    a_{} = {}, t_{}(c) = {}",
                    value.index + 1,
                    value.expected,
                    value.index + 1,
                    value.computed
                )?;
            }
        }
        writeln!(
            f,
            "  chain {}",
            if self.passed { "passes" } else { "FAILS" }
        )
    }
}

/// Verifies a chain against the outer variety: every link must be an outer
/// identity, consecutive `t_i` must be outer-equivalent, `t_1` must be a
/// term idempotent, and, when an instance is supplied, each `t_i` must
/// evaluate to the corresponding element under the shared assignment.
pub fn verify_chain(
    outer: &VarietySpec,
    inner: Option<&VarietySpec>,
    data: &ChainData,
    instance: Option<&ChainInstance>,
) -> Result<ChainReport, MaltsevError> {
    let mut link_checks = Vec::new();
    for link in &data.links {
        link_checks.push(ChainLinkCheck {
            identity: link.clone(),
            verdict: outer.decide(&link.lhs, &link.rhs)?,
        });
    }
    let mut equivalences = Vec::new();
    for pair in data.terms.windows(2) {
        equivalences.push(ChainLinkCheck {
            identity: Identity::new(pair[0].clone(), pair[1].clone()),
            verdict: outer.decide(&pair[0], &pair[1])?,
        });
    }
    let idempotency = match data.terms.first() {
        Some(t1) => Some(outer.is_term_idempotent(t1)?),
        None => None,
    };

    let instance_report = match instance {
        Some(inst) => Some(check_instance(data, inst)?),
        None => None,
    };

    let passed = link_checks.iter().all(|c| c.verdict.is_proved())
        && equivalences.iter().all(|c| c.verdict.is_proved())
        && idempotency.as_ref().is_none_or(Verdict::is_proved)
        && instance_report
            .as_ref()
            .is_none_or(|r| r.all_match && r.premises_hold.iter().all(|&b| b));

    Ok(ChainReport {
        outer: outer.name().to_string(),
        inner: inner.map(|v| v.name().to_string()),
        link_checks,
        equivalences,
        idempotency,
        instance: instance_report,
        passed,
    })
}

fn check_instance(data: &ChainData, inst: &ChainInstance) -> Result<InstanceReport, MaltsevError> {
    let n = data.terms.len();
    if n == 0 {
        return Ok(InstanceReport {
            algebra: inst.algebra.name().to_string(),
            premises_hold: Vec::new(),
            values: Vec::new(),
            all_match: true,
        });
    }
    if inst.elements.len() != n {
        return Err(MaltsevError::BadInstance(format!(
            "expected {} elements, got {}",
            n,
            inst.elements.len()
        )));
    }
    let mut premises_hold = Vec::new();
    for (i, link) in data.links.iter().enumerate() {
        let p = inst.algebra.evaluate(&link.lhs, &inst.assignment)?;
        let q = inst.algebra.evaluate(&link.rhs, &inst.assignment)?;
        premises_hold.push(p == inst.elements[i] && q == inst.elements[i + 1]);
    }
    let mut values = Vec::new();
    for (i, term) in data.terms.iter().enumerate() {
        let computed = inst.algebra.evaluate(term, &inst.assignment)?;
        values.push(InstanceValue {
            index: i,
            expected: inst.elements[i],
            computed,
            matches: computed == inst.elements[i],
        });
    }
    let all_match = values.iter().all(|v| v.matches);
    Ok(InstanceReport {
        algebra: inst.algebra.name().to_string(),
        premises_hold,
        values,
        all_match,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::assignment;
    use crate::term::{parse_identity, parse_term, Signature};
    use crate::variety::CatalogTag;

    #[test]
    fn two_step_unfolding() {
        let sig = Signature::group();
        let m = parse_term("mul(mul(x,inv(y)),z)", &sig).unwrap();
        let p1 = parse_term("mul(x,mul(y,inv(y)))", &sig).unwrap();
        let q1 = parse_term("x", &sig).unwrap();
        let data = build_chain_terms(&m, &m, &[Identity::new(p1, q1)]).unwrap();
        assert_eq!(data.terms.len(), 2);
        // t_1 = g(q1, q1, p1), t_2 = f(q1, p1, p1), with renamed variables.
        let q1r = parse_term("z1_1", &sig).unwrap();
        let p1r = parse_term("mul(z1_1,mul(z1_2,inv(z1_2)))", &sig).unwrap();
        assert_eq!(data.terms[0], apply_witness(&m, &q1r, &q1r, &p1r));
        assert_eq!(data.terms[1], apply_witness(&m, &q1r, &p1r, &p1r));
    }

    #[test]
    fn three_step_shape() {
        let sig = Signature::groupoid();
        let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
        let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();
        let links = [
            parse_identity("mul(mul(x,y),z) = mul(x,z)", &sig).unwrap(),
            parse_identity("mul(x,mul(y,z)) = mul(x,z)", &sig).unwrap(),
        ];
        let data = build_chain_terms(&f, &g, &links).unwrap();
        assert_eq!(data.terms.len(), 3);
        assert_eq!(data.grid.len(), 3);
        for row in &data.grid {
            assert_eq!(row.len(), 3);
        }
        // Variable tuples of distinct links are disjoint.
        let vars1 = data.links[0].variables();
        let vars2 = data.links[1].variables();
        assert!(vars1.iter().all(|v| !vars2.contains(v)));
    }

    #[test]
    fn group_chain_terms_reduce_to_the_link_value() {
        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let sig = grp.signature().clone();
        let m = parse_term("mul(mul(x,inv(y)),z)", &sig).unwrap();
        let p1 = parse_term("mul(x,mul(y,inv(y)))", &sig).unwrap();
        let q1 = parse_term("x", &sig).unwrap();
        let data = build_chain_terms(&m, &m, &[Identity::new(p1, q1)]).unwrap();
        // With a Mal'tsev witness, every chain term collapses to the common
        // value of the link, here the bare variable z1_1.
        for t in &data.terms {
            assert_eq!(grp.normal_form(t).unwrap().to_string(), "z1_1");
        }
        // A bare variable is not a term idempotent of groups, so this chain
        // cannot pass the idempotency part; only links whose sides reduce to
        // the empty word can.
        let report = verify_chain(&grp, None, &data, None).unwrap();
        assert!(report.equivalences.iter().all(|c| c.verdict.is_proved()));
        assert!(report.idempotency.as_ref().unwrap().is_refuted());
        assert!(!report.passed);
    }

    #[test]
    fn group_chain_with_identity_valued_links_verifies_on_a_cyclic_group() {
        let grp = VarietySpec::catalog(CatalogTag::Group).unwrap();
        let sig = grp.signature().clone();
        let m = parse_term("mul(mul(x,inv(y)),z)", &sig).unwrap();
        // Both sides reduce to the empty word, the one idempotent of groups.
        let p1 = parse_term("mul(mul(x,inv(x)),mul(y,inv(y)))", &sig).unwrap();
        let q1 = parse_term("mul(y,inv(y))", &sig).unwrap();
        let data = build_chain_terms(&m, &m, &[Identity::new(p1, q1)]).unwrap();

        // Element-level check on the three-element cyclic group.
        let z3 = FiniteAlgebra::from_alg_str(
            "algebra Z3\nsize 3\nop mul 2\n0 1 2\n1 2 0\n2 0 1\nop inv 1\n0 2 1\n",
        )
        .unwrap();
        let asg = assignment(&[("z1_1", 2), ("z1_2", 1)]);
        let a1 = z3.evaluate(&data.links[0].lhs, &asg).unwrap();
        let a2 = z3.evaluate(&data.links[0].rhs, &asg).unwrap();
        let instance = ChainInstance {
            algebra: z3,
            elements: vec![a1, a2],
            assignment: asg,
        };
        let report = verify_chain(&grp, None, &data, Some(&instance)).unwrap();
        assert!(report.passed, "{report}");
    }

    #[test]
    fn rectangular_semigroup_chain_passes_part_c() {
        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let sig = rs.signature().clone();
        let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
        let g = parse_term("mul(mul(x,x),y)", &sig).unwrap();
        let link = parse_identity("mul(mul(x,y),z) = mul(x,z)", &sig).unwrap();
        let data = build_chain_terms(&f, &g, &[link]).unwrap();
        let report = verify_chain(&rs, None, &data, None).unwrap();
        assert!(report.passed, "{report}");
        assert!(report.equivalences.iter().all(|c| c.verdict.is_proved()));
        assert!(report.idempotency.as_ref().unwrap().is_proved());
    }

    #[test]
    fn empty_chain_is_vacuously_valid() {
        let rs = VarietySpec::catalog(CatalogTag::RectangularSemigroup).unwrap();
        let sig = rs.signature().clone();
        let f = parse_term("mul(x,mul(y,y))", &sig).unwrap();
        let data = build_chain_terms(&f, &f, &[]).unwrap();
        assert!(data.terms.is_empty());
        let report = verify_chain(&rs, None, &data, None).unwrap();
        assert!(report.passed);
    }
}
