//! Backtracking enumeration of finite models of an equational base.
//!
//! Tables are filled operation by operation in declaration order, entries in
//! row-major order, candidate values ascending, so the enumeration order is
//! deterministic. After each placement every base identity is checked under
//! all assignments whose evaluation is already defined; a violated identity
//! prunes the branch.

use crate::algebra::{Assignment, FiniteAlgebra};
use crate::term::{Identity, Signature, Term};

use super::VarietyError;

struct Search<'a> {
    sig: &'a Signature,
    base: &'a [Identity],
    size: usize,
    tables: Vec<Vec<Option<usize>>>,
    slots: Vec<(usize, usize)>,
    base_vars: Vec<Vec<String>>,
}

impl<'a> Search<'a> {
    fn new(sig: &'a Signature, base: &'a [Identity], size: usize) -> Self {
        let mut tables = Vec::new();
        let mut slots = Vec::new();
        for (i, op) in sig.operations().iter().enumerate() {
            let len = size.pow(op.arity as u32);
            tables.push(vec![None; len]);
            for j in 0..len {
                slots.push((i, j));
            }
        }
        let base_vars = base.iter().map(|id| id.variables()).collect();
        Search {
            sig,
            base,
            size,
            tables,
            slots,
            base_vars,
        }
    }

    /// Visits complete models in order; stops early when `visit` says so.
    fn run(&mut self, visit: &mut impl FnMut(FiniteAlgebra) -> bool) -> bool {
        self.fill(0, visit)
    }

    fn fill(&mut self, slot: usize, visit: &mut impl FnMut(FiniteAlgebra) -> bool) -> bool {
        if slot == self.slots.len() {
            let tables = self
                .tables
                .iter()
                .map(|t| t.iter().map(|e| e.unwrap()).collect())
                .collect();
            let model = FiniteAlgebra::new(
                format!("model{}", self.size),
                self.sig.clone(),
                self.size,
                None,
                tables,
            )
            .expect("search tables are well formed");
            return visit(model);
        }
        let (op, index) = self.slots[slot];
        for value in 0..self.size {
            self.tables[op][index] = Some(value);
            if self.consistent() && self.fill(slot + 1, visit) {
                return true;
            }
        }
        self.tables[op][index] = None;
        false
    }

    /// No base identity is violated on any assignment where both sides are
    /// already defined.
    fn consistent(&self) -> bool {
        for (id, vars) in self.base.iter().zip(&self.base_vars) {
            let mut values = vec![0usize; vars.len()];
            loop {
                let lhs = self.eval_partial(&id.lhs, vars, &values);
                let rhs = self.eval_partial(&id.rhs, vars, &values);
                if let (Some(a), Some(b)) = (lhs, rhs) {
                    if a != b {
                        return false;
                    }
                }
                let mut i = values.len();
                let mut done = false;
                loop {
                    if i == 0 {
                        done = true;
                        break;
                    }
                    i -= 1;
                    values[i] += 1;
                    if values[i] < self.size {
                        break;
                    }
                    values[i] = 0;
                }
                if done {
                    break;
                }
            }
        }
        true
    }

    fn eval_partial(&self, t: &Term, vars: &[String], values: &[usize]) -> Option<usize> {
        match t {
            Term::Var(name) => {
                let i = vars.iter().position(|v| v == name)?;
                Some(values[i])
            }
            Term::App(symbol, children) => {
                let op = self.sig.op_index(symbol)?;
                let mut flat = 0usize;
                for child in children {
                    flat = flat * self.size + self.eval_partial(child, vars, values)?;
                }
                self.tables[op][flat]
            }
        }
    }
}

/// All models of `base` with exactly `size` elements, in enumeration order,
/// up to an optional count cap.
pub fn models_of_size(
    sig: &Signature,
    base: &[Identity],
    size: usize,
    cap: Option<usize>,
) -> Vec<FiniteAlgebra> {
    let mut out = Vec::new();
    let mut search = Search::new(sig, base, size);
    search.run(&mut |model| {
        out.push(model);
        cap.is_some_and(|c| out.len() >= c)
    });
    out
}

/// All models of `base` with sizes `1..=max_size`, smaller sizes first.
pub fn enumerate_models(sig: &Signature, base: &[Identity], max_size: usize) -> Vec<FiniteAlgebra> {
    let mut out = Vec::new();
    for size in 1..=max_size {
        out.extend(models_of_size(sig, base, size, None));
    }
    out
}

pub(crate) fn models_up_to(
    sig: &Signature,
    base: &[Identity],
    size: usize,
    cap: usize,
) -> Vec<FiniteAlgebra> {
    models_of_size(sig, base, size, Some(cap))
}

/// The first model of `base` (sizes ascending) falsifying `id`, with the
/// first falsifying assignment in odometer order.
pub(crate) fn countermodel(
    sig: &Signature,
    base: &[Identity],
    id: &Identity,
    max_size: usize,
) -> Result<Option<(FiniteAlgebra, Assignment)>, VarietyError> {
    for size in 1..=max_size {
        let mut found: Option<(FiniteAlgebra, Assignment)> = None;
        let mut error: Option<VarietyError> = None;
        let mut search = Search::new(sig, base, size);
        search.run(&mut |model| match model.find_failing_assignment(id) {
            Ok(Some(witness)) => {
                found = Some((model, witness));
                true
            }
            Ok(None) => false,
            Err(e) => {
                error = Some(e.into());
                true
            }
        });
        if let Some(e) = error {
            return Err(e);
        }
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::parse_identity;
    use crate::variety::{CatalogTag, VarietySpec};

    #[test]
    fn finds_the_left_zero_band_for_noncommutativity() {
        let sig = Signature::groupoid();
        let assoc = parse_identity("mul(mul(x,y),z) = mul(x,mul(y,z))", &sig).unwrap();
        let comm = parse_identity("mul(x,y) = mul(y,x)", &sig).unwrap();
        let (model, witness) = countermodel(&sig, std::slice::from_ref(&assoc), &comm, 2)
            .unwrap()
            .unwrap();
        assert_eq!(model.size(), 2);
        assert!(model.satisfies(&assoc).unwrap());
        // First semigroup table in lexicographic order falsifying xy = yx
        // is the left-zero band.
        assert_eq!(model.table(0), &[0, 0, 1, 1]);
        let lhs = model.evaluate(&comm.lhs, &witness).unwrap();
        let rhs = model.evaluate(&comm.rhs, &witness).unwrap();
        assert_ne!(lhs, rhs);
    }

    #[test]
    fn base_identities_admit_no_countermodel() {
        let cs = VarietySpec::catalog(CatalogTag::ConstantSemigroup).unwrap();
        let sig = cs.signature().clone();
        let id = parse_identity("mul(x,y) = mul(z,t)", &sig).unwrap();
        assert!(cs.countermodel_search(&id, 3).unwrap().is_none());
    }

    #[test]
    fn model_enumeration_is_exhaustive_for_small_bases() {
        // Idempotent commutative groupoids of size 2: the two semilattice
        // orders and nothing else, plus both constant-free diagonal tables.
        let sig = Signature::groupoid();
        let base = vec![
            parse_identity("mul(x,x) = x", &sig).unwrap(),
            parse_identity("mul(x,y) = mul(y,x)", &sig).unwrap(),
        ];
        let models = enumerate_models(&sig, &base, 2);
        // Size 1: one table. Size 2: diagonal fixed, symmetric off-diagonal
        // entries equal, two choices.
        assert_eq!(models.len(), 1 + 2);
        for m in &models {
            for id in &base {
                assert!(m.satisfies(id).unwrap());
            }
        }
    }

    #[test]
    fn monounary_models_with_collapsing_iteration() {
        let u2 = VarietySpec::catalog(CatalogTag::Unary(2)).unwrap();
        let sig = u2.signature().clone();
        let id = parse_identity("f(x) = f(f(x))", &sig).unwrap();
        let (model, _) = u2.countermodel_search(&id, 3).unwrap().unwrap();
        assert_eq!(model.size(), 3);
        assert!(model.satisfies(&u2.base()[0]).unwrap());
    }
}
