//! Finite algebras presented by total operation tables.
//!
//! Elements are the indices `0..n`, optionally carrying display names. Each
//! operation stores its table in row-major order: the last argument varies
//! fastest. The `.alg` text format mirrors this layout exactly.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::congruence::Partition;
use crate::term::{Identity, Signature, Term, TermError};

/// A map from variable names to element indices.
pub type Assignment = BTreeMap<String, usize>;

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("table entry {entry} out of range for algebra of size {size}")]
    EntryOutOfRange { entry: usize, size: usize },
    #[error("operation `{symbol}` needs {expected} table entries, got {got}")]
    TableSize {
        symbol: String,
        expected: usize,
        got: usize,
    },
    #[error("algebra must have at least one element")]
    EmptyUniverse,
    #[error("expected {expected} element names, got {got}")]
    NameCount { expected: usize, got: usize },
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),
    #[error("assigned value {value} out of range for algebra of size {size}")]
    AssignmentOutOfRange { value: usize, size: usize },
    #[error("term does not fit the algebra's signature: {0}")]
    Term(#[from] TermError),
    #[error("signatures are not compatible")]
    SignatureMismatch,
    #[error("partition of size {partition} does not fit algebra of size {algebra}")]
    PartitionSize { partition: usize, algebra: usize },
    #[error("partition is not a congruence of the algebra")]
    NotACongruence,
    #[error("`.alg` input line {line}: {message}")]
    Format { line: usize, message: String },
}

/// A finite algebra: a signature, a universe `0..size`, and one dense table
/// per operation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    name: String,
    sig: Signature,
    size: usize,
    names: Option<Vec<String>>,
    tables: Vec<Vec<usize>>,
}

impl FiniteAlgebra {
    /// Builds an algebra from tables listed in the signature's operation
    /// order, each in row-major form (last argument varies fastest).
    pub fn new(
        name: impl Into<String>,
        sig: Signature,
        size: usize,
        names: Option<Vec<String>>,
        tables: Vec<Vec<usize>>,
    ) -> Result<Self, AlgebraError> {
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }
        if let Some(ref names) = names {
            if names.len() != size {
                return Err(AlgebraError::NameCount {
                    expected: size,
                    got: names.len(),
                });
            }
        }
        if tables.len() != sig.operations().len() {
            return Err(AlgebraError::TableSize {
                symbol: "<missing>".into(),
                expected: sig.operations().len(),
                got: tables.len(),
            });
        }
        for (op, table) in sig.operations().iter().zip(&tables) {
            let expected = size.pow(op.arity as u32);
            if table.len() != expected {
                return Err(AlgebraError::TableSize {
                    symbol: op.symbol.clone(),
                    expected,
                    got: table.len(),
                });
            }
            for &entry in table {
                if entry >= size {
                    return Err(AlgebraError::EntryOutOfRange { entry, size });
                }
            }
        }
        Ok(FiniteAlgebra {
            name: name.into(),
            sig,
            size,
            names,
            tables,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn element_names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    /// Display name of an element: its label if present, else its index.
    pub fn element_name(&self, element: usize) -> String {
        match &self.names {
            Some(names) => names[element].clone(),
            None => element.to_string(),
        }
    }

    /// Looks an element up by label, falling back to a numeric index.
    pub fn element_index(&self, label: &str) -> Option<usize> {
        if let Some(names) = &self.names {
            if let Some(i) = names.iter().position(|n| n == label) {
                return Some(i);
            }
        }
        label.parse::<usize>().ok().filter(|&i| i < self.size)
    }

    pub fn table(&self, op_index: usize) -> &[usize] {
        &self.tables[op_index]
    }

    /// Applies the operation with the given index to a tuple of elements.
    pub fn apply(&self, op_index: usize, args: &[usize]) -> usize {
        let mut flat = 0;
        for &a in args {
            flat = flat * self.size + a;
        }
        self.tables[op_index][flat]
    }

    /// Evaluates a term bottom-up under an assignment covering its variables.
    pub fn evaluate(&self, term: &Term, assignment: &Assignment) -> Result<usize, AlgebraError> {
        match term {
            Term::Var(name) => {
                let value = *assignment
                    .get(name)
                    .ok_or_else(|| AlgebraError::UnassignedVariable(name.clone()))?;
                if value >= self.size {
                    return Err(AlgebraError::AssignmentOutOfRange {
                        value,
                        size: self.size,
                    });
                }
                Ok(value)
            }
            Term::App(symbol, children) => {
                let op = self
                    .sig
                    .op_index(symbol)
                    .ok_or_else(|| TermError::UnknownSymbol(symbol.clone()))?;
                let mut args = Vec::with_capacity(children.len());
                for child in children {
                    args.push(self.evaluate(child, assignment)?);
                }
                Ok(self.apply(op, &args))
            }
        }
    }

    /// Exhaustively checks an identity. Returns the first falsifying
    /// assignment in odometer order over the identity's variables (the last
    /// variable varies fastest), or `None` when the identity holds.
    pub fn find_failing_assignment(
        &self,
        identity: &Identity,
    ) -> Result<Option<Assignment>, AlgebraError> {
        identity.check(&self.sig)?;
        let vars = identity.variables();
        let mut values = vec![0usize; vars.len()];
        loop {
            let assignment: Assignment = vars.iter().cloned().zip(values.iter().copied()).collect();
            let lhs = self.evaluate(&identity.lhs, &assignment)?;
            let rhs = self.evaluate(&identity.rhs, &assignment)?;
            if lhs != rhs {
                return Ok(Some(assignment));
            }
            // Advance the odometer.
            let mut i = values.len();
            loop {
                if i == 0 {
                    return Ok(None);
                }
                i -= 1;
                values[i] += 1;
                if values[i] < self.size {
                    break;
                }
                values[i] = 0;
            }
        }
    }

    /// True when the identity holds under every assignment.
    pub fn satisfies(&self, identity: &Identity) -> Result<bool, AlgebraError> {
        Ok(self.find_failing_assignment(identity)?.is_none())
    }

    /// True when every identity in the slice holds.
    pub fn satisfies_all(&self, identities: &[Identity]) -> Result<bool, AlgebraError> {
        for id in identities {
            if !self.satisfies(id)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Elements `c` with `op(c,…,c) = c` for every basic operation.
    pub fn idempotent_elements(&self) -> Vec<usize> {
        (0..self.size)
            .filter(|&c| {
                self.sig.operations().iter().enumerate().all(|(i, op)| {
                    let args = vec![c; op.arity];
                    self.apply(i, &args) == c
                })
            })
            .collect()
    }

    /// Least subset containing `seed` and closed under all operations,
    /// returned in ascending order.
    pub fn subuniverse_generated(&self, seed: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.size];
        for &s in seed {
            inside[s] = true;
        }
        loop {
            let mut changed = false;
            for (i, op) in self.sig.operations().iter().enumerate() {
                let members: Vec<usize> = (0..self.size).filter(|&e| inside[e]).collect();
                let mut args = Vec::with_capacity(op.arity);
                let mut grow = Vec::new();
                tuples(&members, op.arity, &mut args, &mut |tuple| {
                    let out = self.apply(i, tuple);
                    if !inside[out] {
                        grow.push(out);
                    }
                });
                for e in grow {
                    if !inside[e] {
                        inside[e] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        (0..self.size).filter(|&e| inside[e]).collect()
    }

    /// True when `elements` is closed under all operations (and nonempty).
    pub fn is_subuniverse(&self, elements: &[usize]) -> bool {
        if elements.is_empty() {
            return false;
        }
        self.sig.operations().iter().enumerate().all(|(i, op)| {
            let mut args = Vec::with_capacity(op.arity);
            let mut closed = true;
            tuples(elements, op.arity, &mut args, &mut |tuple| {
                if !elements.contains(&self.apply(i, tuple)) {
                    closed = false;
                }
            });
            closed
        })
    }

    /// The restriction of the algebra to a subuniverse. Elements keep their
    /// names; indices are renumbered in ascending order of the original ones.
    pub fn restrict(&self, elements: &[usize]) -> Result<FiniteAlgebra, AlgebraError> {
        if !self.is_subuniverse(elements) {
            return Err(AlgebraError::NotACongruence); // unreachable from public callers
        }
        let mut sorted = elements.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let index_of: BTreeMap<usize, usize> =
            sorted.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let mut tables = Vec::new();
        for (i, op) in self.sig.operations().iter().enumerate() {
            let mut table = Vec::with_capacity(sorted.len().pow(op.arity as u32));
            let mut args = Vec::with_capacity(op.arity);
            ordered_tuples(&sorted, op.arity, &mut args, &mut |tuple| {
                table.push(index_of[&self.apply(i, tuple)]);
            });
            tables.push(table);
        }
        let names = Some(sorted.iter().map(|&e| self.element_name(e)).collect());
        FiniteAlgebra::new(
            format!("{}|sub", self.name),
            self.sig.clone(),
            sorted.len(),
            names,
            tables,
        )
    }

    /// The quotient by a congruence. Blocks are ordered by their least
    /// member, and each quotient element is named after that least member.
    pub fn quotient(&self, theta: &Partition) -> Result<FiniteAlgebra, AlgebraError> {
        if theta.universe_size() != self.size {
            return Err(AlgebraError::PartitionSize {
                partition: theta.universe_size(),
                algebra: self.size,
            });
        }
        if !crate::congruence::is_congruence(self, theta)? {
            return Err(AlgebraError::NotACongruence);
        }
        let blocks = theta.blocks();
        let block_of: Vec<usize> = (0..self.size).map(|e| theta.block_index(e)).collect();
        let mut tables = Vec::new();
        for (i, op) in self.sig.operations().iter().enumerate() {
            let q = blocks.len();
            let mut table = Vec::with_capacity(q.pow(op.arity as u32));
            let mut idx = vec![0usize; op.arity];
            loop {
                let reps: Vec<usize> = idx.iter().map(|&b| blocks[b][0]).collect();
                table.push(block_of[self.apply(i, &reps)]);
                let mut k = idx.len();
                let mut done = false;
                loop {
                    if k == 0 {
                        done = true;
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < q {
                        break;
                    }
                    idx[k] = 0;
                }
                if done {
                    break;
                }
            }
            tables.push(table);
        }
        let names = Some(
            blocks
                .iter()
                .map(|block| self.element_name(block[0]))
                .collect(),
        );
        FiniteAlgebra::new(
            format!("{}/θ", self.name),
            self.sig.clone(),
            blocks.len(),
            names,
            tables,
        )
    }

    /// Componentwise direct product. The pair `(i, j)` becomes the element
    /// `i * |B| + j`.
    pub fn direct_product(&self, other: &FiniteAlgebra) -> Result<FiniteAlgebra, AlgebraError> {
        if !self.sig.compatible(&other.sig) {
            return Err(AlgebraError::SignatureMismatch);
        }
        let size = self.size * other.size;
        let mut tables = Vec::new();
        for (i, op) in self.sig.operations().iter().enumerate() {
            let j = other.sig.op_index(&op.symbol).unwrap();
            let mut table = Vec::with_capacity(size.pow(op.arity as u32));
            let mut idx = vec![0usize; op.arity];
            loop {
                let left: Vec<usize> = idx.iter().map(|&p| p / other.size).collect();
                let right: Vec<usize> = idx.iter().map(|&p| p % other.size).collect();
                table.push(self.apply(i, &left) * other.size + other.apply(j, &right));
                let mut k = idx.len();
                let mut done = false;
                loop {
                    if k == 0 {
                        done = true;
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < size {
                        break;
                    }
                    idx[k] = 0;
                }
                if done {
                    break;
                }
            }
            tables.push(table);
        }
        let names = Some(
            (0..size)
                .map(|p| {
                    format!(
                        "{}.{}",
                        self.element_name(p / other.size),
                        other.element_name(p % other.size)
                    )
                })
                .collect(),
        );
        FiniteAlgebra::new(
            format!("{}x{}", self.name, other.name),
            self.sig.clone(),
            size,
            names,
            tables,
        )
    }

    /// Renders the algebra in the `.alg` text format.
    pub fn to_alg_string(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("algebra {}\n", self.name));
        out.push_str(&format!("size {}\n", self.size));
        if let Some(names) = &self.names {
            out.push_str(&format!("names {}\n", names.join(" ")));
        }
        for (i, op) in self.sig.operations().iter().enumerate() {
            out.push_str(&format!("op {} {}\n", op.symbol, op.arity));
            let table = &self.tables[i];
            let row = if op.arity >= 1 {
                self.size.pow(op.arity as u32 - 1)
            } else {
                1
            };
            for chunk in table.chunks(row.max(1)) {
                let line: Vec<String> = chunk.iter().map(|e| e.to_string()).collect();
                out.push_str(&line.join(" "));
                out.push('\n');
            }
        }
        out
    }

    /// Parses the `.alg` text format:
    ///
    /// ```text
    /// algebra <name>
    /// size <n>
    /// names <n labels>        (optional)
    /// op <symbol> <arity>
    /// <n^arity integers, whitespace separated, last index fastest>
    /// ```
    pub fn from_alg_str(input: &str) -> Result<FiniteAlgebra, AlgebraError> {
        let err = |line: usize, message: &str| AlgebraError::Format {
            line,
            message: message.to_string(),
        };
        let mut words: Vec<(usize, &str)> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("");
            for word in line.split_whitespace() {
                words.push((lineno + 1, word));
            }
        }
        let mut cursor = WordCursor {
            words: &words,
            pos: 0,
        };

        let (l, kw) = cursor.next("`algebra`")?;
        if kw != "algebra" {
            return Err(err(l, "expected `algebra <name>`"));
        }
        let (_, name) = cursor.next("algebra name")?;
        let (l, kw) = cursor.next("`size`")?;
        if kw != "size" {
            return Err(err(l, "expected `size <n>`"));
        }
        let (l, n) = cursor.next("size value")?;
        let size: usize = n.parse().map_err(|_| err(l, "size must be an integer"))?;
        if size == 0 {
            return Err(AlgebraError::EmptyUniverse);
        }

        let mut names: Option<Vec<String>> = None;
        let mut ops: Vec<(String, usize)> = Vec::new();
        let mut tables: Vec<Vec<usize>> = Vec::new();

        if cursor.peek() == Some("names") {
            cursor.next("`names`")?;
            let mut labels = Vec::with_capacity(size);
            for _ in 0..size {
                let (_, label) = cursor.next("element name")?;
                labels.push(label.to_string());
            }
            names = Some(labels);
        }

        while !cursor.done() {
            let (l, kw) = cursor.next("`op`")?;
            if kw != "op" {
                return Err(err(l, "expected `op <symbol> <arity>`"));
            }
            let (_, symbol) = cursor.next("operation symbol")?;
            let (l, a) = cursor.next("operation arity")?;
            let arity: usize = a.parse().map_err(|_| err(l, "arity must be an integer"))?;
            let entries = size.pow(arity as u32);
            let mut table = Vec::with_capacity(entries);
            for _ in 0..entries {
                let (l, e) = cursor.next("table entry")?;
                let entry: usize = e
                    .parse()
                    .map_err(|_| err(l, "table entry must be an integer"))?;
                table.push(entry);
            }
            ops.push((symbol.to_string(), arity));
            tables.push(table);
        }

        let sig = Signature::new(name, ops).map_err(AlgebraError::Term)?;
        FiniteAlgebra::new(name, sig, size, names, tables)
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_alg_string())
    }
}

impl Serialize for FiniteAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct OpTable<'a> {
            symbol: &'a str,
            arity: usize,
            table: &'a [usize],
        }
        let ops: Vec<OpTable> = self
            .sig
            .operations()
            .iter()
            .zip(&self.tables)
            .map(|(op, table)| OpTable {
                symbol: &op.symbol,
                arity: op.arity,
                table,
            })
            .collect();
        let mut s = serializer.serialize_struct("FiniteAlgebra", 4)?;
        s.serialize_field("name", &self.name)?;
        s.serialize_field("size", &self.size)?;
        s.serialize_field("names", &self.names)?;
        s.serialize_field("ops", &ops)?;
        s.end()
    }
}

struct WordCursor<'a> {
    words: &'a [(usize, &'a str)],
    pos: usize,
}

impl<'a> WordCursor<'a> {
    fn next(&mut self, expected: &str) -> Result<(usize, &'a str), AlgebraError> {
        if self.pos >= self.words.len() {
            return Err(AlgebraError::Format {
                line: self.words.last().map(|w| w.0).unwrap_or(0),
                message: format!("unexpected end of input, expected {expected}"),
            });
        }
        let w = self.words[self.pos];
        self.pos += 1;
        Ok(w)
    }

    fn peek(&self) -> Option<&'a str> {
        self.words.get(self.pos).map(|w| w.1)
    }

    fn done(&self) -> bool {
        self.pos >= self.words.len()
    }
}

/// Calls `emit` for every tuple (with repetition) drawn from `members`.
fn tuples(members: &[usize], arity: usize, acc: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if acc.len() == arity {
        emit(acc);
        return;
    }
    for &m in members {
        acc.push(m);
        tuples(members, arity, acc, emit);
        acc.pop();
    }
}

/// Like `tuples`, used where the row-major table order matters.
fn ordered_tuples(
    members: &[usize],
    arity: usize,
    acc: &mut Vec<usize>,
    emit: &mut impl FnMut(&[usize]),
) {
    tuples(members, arity, acc, emit)
}

/// Convenience constructor for assignments.
pub fn assignment(pairs: &[(&str, usize)]) -> Assignment {
    pairs
        .iter()
        .map(|(name, value)| (name.to_string(), *value))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::{parse_identity, parse_term};

    /// The four-element groupoid on {a, e, b, f} used across the test suite.
    pub fn four_element_groupoid() -> FiniteAlgebra {
        FiniteAlgebra::from_alg_str(
            "algebra A\nsize 4\nnames a e b f\nop mul 2\n\
             1 1 2 3\n1 1 3 3\n2 3 3 3\n3 3 3 3\n",
        )
        .unwrap()
    }

    #[test]
    fn evaluates_terms() {
        let a = four_element_groupoid();
        let sig = a.signature().clone();
        let term = parse_term("mul(x,y)", &sig).unwrap();
        // e * b = f
        assert_eq!(
            a.evaluate(&term, &assignment(&[("x", 1), ("y", 2)]))
                .unwrap(),
            3
        );
        // (a*a)*b = e*b = f
        let term = parse_term("mul(mul(x,x),y)", &sig).unwrap();
        assert_eq!(
            a.evaluate(&term, &assignment(&[("x", 0), ("y", 2)]))
                .unwrap(),
            3
        );
        // A bare variable.
        let term = parse_term("x", &sig).unwrap();
        assert_eq!(a.evaluate(&term, &assignment(&[("x", 2)])).unwrap(), 2);
        // Missing assignment.
        assert!(matches!(
            a.evaluate(&parse_term("y", &sig).unwrap(), &assignment(&[("x", 0)])),
            Err(AlgebraError::UnassignedVariable(_))
        ));
    }

    #[test]
    fn identity_checking_with_witness() {
        let a = four_element_groupoid();
        let sig = a.signature().clone();
        let id = parse_identity("mul(x,y) = mul(z,t)", &sig).unwrap();
        let witness = a.find_failing_assignment(&id).unwrap().unwrap();
        let lhs = a.evaluate(&id.lhs, &witness).unwrap();
        let rhs = a.evaluate(&id.rhs, &witness).unwrap();
        assert_ne!(lhs, rhs);

        // Two-element meet semilattice is commutative.
        let sl = FiniteAlgebra::from_alg_str("algebra S2\nsize 2\nop mul 2\n0 0\n0 1\n").unwrap();
        let comm = parse_identity("mul(x,y) = mul(y,x)", &sl.signature().clone()).unwrap();
        assert!(sl.satisfies(&comm).unwrap());
    }

    #[test]
    fn idempotents_of_the_four_element_groupoid() {
        let a = four_element_groupoid();
        assert_eq!(a.idempotent_elements(), vec![1, 3]); // e and f

        let lz = FiniteAlgebra::from_alg_str("algebra LZ2\nsize 2\nop mul 2\n0 0\n1 1\n").unwrap();
        assert_eq!(lz.idempotent_elements(), vec![0, 1]);

        // Z3 as an additive groupoid has only 0 idempotent.
        let z3 = FiniteAlgebra::from_alg_str("algebra Z3\nsize 3\nop mul 2\n0 1 2\n1 2 0\n2 0 1\n")
            .unwrap();
        assert_eq!(z3.idempotent_elements(), vec![0]);
    }

    #[test]
    fn subuniverse_generation() {
        let a = four_element_groupoid();
        assert_eq!(a.subuniverse_generated(&[0]), vec![0, 1]); // {a, e}
        assert_eq!(a.subuniverse_generated(&[2]), vec![2, 3]); // {b, f}
        assert_eq!(a.subuniverse_generated(&[0, 1, 2, 3]), vec![0, 1, 2, 3]);
    }

    #[test]
    fn quotient_by_congruence() {
        let a = four_element_groupoid();
        // {{a},{b},{e,f}} is a congruence; blocks by least member: {a}, {e,f}, {b}.
        let theta = Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
        let q = a.quotient(&theta).unwrap();
        assert_eq!(q.size(), 3);
        assert_eq!(
            q.element_names().unwrap(),
            &["a".to_string(), "e".to_string(), "b".to_string()]
        );
        assert_eq!(q.table(0), &[1, 1, 2, 1, 1, 1, 2, 1, 1]);

        // Quotient by the diagonal is a copy of the original table.
        let delta = Partition::finest(4);
        let copy = a.quotient(&delta).unwrap();
        assert_eq!(copy.table(0), a.table(0));

        // Quotient by the all relation is the one-element algebra.
        let nabla = Partition::coarsest(4);
        let one = a.quotient(&nabla).unwrap();
        assert_eq!(one.size(), 1);

        // A non-congruence is rejected.
        let bad = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(matches!(
            a.quotient(&bad),
            Err(AlgebraError::NotACongruence)
        ));
    }

    #[test]
    fn direct_products() {
        let lz = FiniteAlgebra::from_alg_str("algebra LZ2\nsize 2\nop mul 2\n0 0\n1 1\n").unwrap();
        let rz = FiniteAlgebra::from_alg_str("algebra RZ2\nsize 2\nop mul 2\n0 1\n0 1\n").unwrap();
        let rect = lz.direct_product(&rz).unwrap();
        assert_eq!(rect.size(), 4);
        // (a,b)*(c,d) = (a,d): with pairs encoded p = 2a + b.
        for p in 0..4 {
            for q in 0..4 {
                let expected = (p / 2) * 2 + (q % 2);
                assert_eq!(rect.apply(0, &[p, q]), expected);
            }
        }

        let one = FiniteAlgebra::from_alg_str("algebra One\nsize 1\nop mul 2\n0\n").unwrap();
        let same = lz.direct_product(&one).unwrap();
        assert_eq!(same.size(), lz.size());
        assert_eq!(same.table(0), lz.table(0));
    }

    #[test]
    fn alg_format_round_trip() {
        let a = four_element_groupoid();
        let text = a.to_alg_string();
        let b = FiniteAlgebra::from_alg_str(&text).unwrap();
        assert_eq!(a, b);

        // Whitespace layout is free and `#` starts a comment.
        let c = FiniteAlgebra::from_alg_str(
            "algebra A # the running example\nsize 4\nnames a e b f\n\
             op mul 2  # row-major\n1 1 2 3 1 1 3 3\n2 3 3 3\n3 3 3 3\n",
        )
        .unwrap();
        assert_eq!(a, c);

        // Truncated tables are reported, not padded.
        assert!(FiniteAlgebra::from_alg_str("algebra T\nsize 2\nop mul 2\n0 1 0\n").is_err());
    }
}
