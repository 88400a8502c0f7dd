//! Partitions of a finite universe and congruences of a finite algebra.
//!
//! A [`Partition`] is stored in canonical form: each element maps to the
//! least member of its block, so structural equality coincides with equality
//! of equivalence relations. Congruence generation follows the usual
//! fixpoint: seed a disjoint-set forest with the wanted pairs, then merge the
//! results of every operation applied to componentwise-related tuples until
//! nothing changes.

use std::collections::BTreeSet;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra};

/// Default cap on the universe size for [`all_congruences`].
pub const DEFAULT_CONGRUENCE_LIMIT: usize = 8;

#[derive(Debug, Error)]
pub enum CongruenceError {
    #[error("element {element} out of range for universe of size {size}")]
    ElementOutOfRange { element: usize, size: usize },
    #[error("blocks must be nonempty, disjoint and cover the universe")]
    InvalidBlocks,
    #[error("partitions have different universe sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("universe size {size} exceeds the configured limit {limit}")]
    LimitExceeded { size: usize, limit: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An equivalence relation on `0..n`, in canonical least-representative form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    reps: Vec<usize>,
}

impl Partition {
    /// The diagonal Δ: every element in its own block.
    pub fn finest(n: usize) -> Partition {
        Partition {
            reps: (0..n).collect(),
        }
    }

    /// The all relation ∇: a single block.
    pub fn coarsest(n: usize) -> Partition {
        Partition { reps: vec![0; n] }
    }

    /// The equivalence relation generated by the given pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Partition, CongruenceError> {
        let mut forest = Forest::new(n);
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(CongruenceError::ElementOutOfRange {
                    element: a.max(b),
                    size: n,
                });
            }
            forest.merge(a, b);
        }
        Ok(forest.into_partition())
    }

    /// Builds a partition from explicit blocks, which must be nonempty,
    /// disjoint and cover `0..n`.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Partition, CongruenceError> {
        let mut reps = vec![usize::MAX; n];
        for block in blocks {
            if block.is_empty() {
                return Err(CongruenceError::InvalidBlocks);
            }
            let least = *block.iter().min().unwrap();
            for &e in block {
                if e >= n {
                    return Err(CongruenceError::ElementOutOfRange {
                        element: e,
                        size: n,
                    });
                }
                if reps[e] != usize::MAX {
                    return Err(CongruenceError::InvalidBlocks);
                }
                reps[e] = least;
            }
        }
        if reps.contains(&usize::MAX) {
            return Err(CongruenceError::InvalidBlocks);
        }
        Ok(Partition { reps })
    }

    pub fn universe_size(&self) -> usize {
        self.reps.len()
    }

    /// The least member of the block containing `e`.
    pub fn rep(&self, e: usize) -> usize {
        self.reps[e]
    }

    pub fn same_block(&self, a: usize, b: usize) -> bool {
        self.reps[a] == self.reps[b]
    }

    /// Blocks sorted by their least member; each block is ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index_of_rep: Vec<Option<usize>> = vec![None; self.reps.len()];
        for e in 0..self.reps.len() {
            let r = self.reps[e];
            match index_of_rep[r] {
                Some(i) => blocks[i].push(e),
                None => {
                    index_of_rep[r] = Some(blocks.len());
                    blocks.push(vec![e]);
                }
            }
        }
        blocks
    }

    pub fn block_count(&self) -> usize {
        let mut seen = vec![false; self.reps.len()];
        let mut count = 0;
        for &r in &self.reps {
            if !seen[r] {
                seen[r] = true;
                count += 1;
            }
        }
        count
    }

    /// Index of `e`'s block in the canonical block order.
    pub fn block_index(&self, e: usize) -> usize {
        let target = self.reps[e];
        let mut seen = vec![false; self.reps.len()];
        let mut index = 0;
        for x in 0..self.reps.len() {
            let r = self.reps[x];
            if !seen[r] {
                if r == target {
                    return index;
                }
                seen[r] = true;
                index += 1;
            }
        }
        unreachable!("element not covered by its own partition")
    }

    /// Join in the partition lattice: the transitive closure of the union.
    pub fn join(&self, other: &Partition) -> Result<Partition, CongruenceError> {
        self.check_size(other)?;
        let n = self.reps.len();
        let mut forest = Forest::new(n);
        for e in 0..n {
            forest.merge(e, self.reps[e]);
            forest.merge(e, other.reps[e]);
        }
        Ok(forest.into_partition())
    }

    /// Meet in the partition lattice: blockwise intersection.
    pub fn meet(&self, other: &Partition) -> Result<Partition, CongruenceError> {
        self.check_size(other)?;
        let n = self.reps.len();
        let mut least: std::collections::BTreeMap<(usize, usize), usize> = Default::default();
        let mut reps = vec![0usize; n];
        for (e, slot) in reps.iter_mut().enumerate() {
            let key = (self.reps[e], other.reps[e]);
            let entry = least.entry(key).or_insert(e);
            *slot = *entry;
        }
        Ok(Partition { reps })
    }

    /// True when every block of `self` is contained in a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.reps.len() == other.reps.len()
            && (0..self.reps.len()).all(|e| other.same_block(e, self.reps[e]))
    }

    fn check_size(&self, other: &Partition) -> Result<(), CongruenceError> {
        if self.reps.len() != other.reps.len() {
            return Err(CongruenceError::SizeMismatch(
                self.reps.len(),
                other.reps.len(),
            ));
        }
        Ok(())
    }

    /// Renders blocks in canonical order, e.g. `{{a,e},{b,f}}`, using element
    /// names when provided.
    pub fn render(&self, names: Option<&[String]>) -> String {
        let mut out = String::from("{");
        for (i, block) in self.blocks().iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push('{');
            for (j, &e) in block.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                match names {
                    Some(names) => out.push_str(&names[e]),
                    None => out.push_str(&e.to_string()),
                }
            }
            out.push('}');
        }
        out.push('}');
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.render(None))
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Partition", 2)?;
        s.serialize_field("size", &self.reps.len())?;
        s.serialize_field("blocks", &self.blocks())?;
        s.end()
    }
}

/// A private disjoint-set forest; partitions canonicalize on the way out.
struct Forest {
    parent: Vec<usize>,
}

impl Forest {
    fn new(n: usize) -> Forest {
        Forest {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut e: usize) -> usize {
        while self.parent[e] != e {
            self.parent[e] = self.parent[self.parent[e]];
            e = self.parent[e];
        }
        e
    }

    /// Merges the classes of `a` and `b`; returns true when they were apart.
    fn merge(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }

    fn into_partition(mut self) -> Partition {
        let n = self.parent.len();
        let mut least = vec![usize::MAX; n];
        for e in 0..n {
            let r = self.find(e);
            if least[r] > e {
                least[r] = e;
            }
        }
        let reps = (0..n).map(|e| least[self.find(e)]).collect();
        Partition { reps }
    }
}

/// A reflexive symmetric binary relation on `0..n`, used to hold bounded
/// approximations of the pre-congruence relation ϱ⁰.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryRelation {
    n: usize,
    adjacency: Vec<bool>,
}

impl BinaryRelation {
    /// The diagonal relation on `0..n`.
    pub fn diagonal(n: usize) -> BinaryRelation {
        let mut rel = BinaryRelation {
            n,
            adjacency: vec![false; n * n],
        };
        for e in 0..n {
            rel.insert(e, e);
        }
        rel
    }

    pub fn universe_size(&self) -> usize {
        self.n
    }

    /// Inserts the pair and its mirror image.
    pub fn insert(&mut self, a: usize, b: usize) {
        self.adjacency[a * self.n + b] = true;
        self.adjacency[b * self.n + a] = true;
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.adjacency[a * self.n + b]
    }

    /// All related pairs with `a <= b`, in lexicographic order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a..self.n {
                if self.contains(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// The partition induced by the transitive closure.
    pub fn transitive_closure(&self) -> Partition {
        let mut forest = Forest::new(self.n);
        for (a, b) in self.pairs() {
            forest.merge(a, b);
        }
        forest.into_partition()
    }

    /// True when every pair of `self` is related by `other`.
    pub fn subset_of(&self, other: &BinaryRelation) -> bool {
        self.n == other.n
            && self
                .adjacency
                .iter()
                .zip(&other.adjacency)
                .all(|(a, b)| !*a || *b)
    }
}

impl Serialize for BinaryRelation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("BinaryRelation", 2)?;
        s.serialize_field("size", &self.n)?;
        s.serialize_field("pairs", &self.pairs())?;
        s.end()
    }
}

/// True when the partition is compatible with every operation of `algebra`:
/// componentwise-related argument tuples always yield related results.
pub fn is_congruence(algebra: &FiniteAlgebra, partition: &Partition) -> Result<bool, AlgebraError> {
    let n = algebra.size();
    if partition.universe_size() != n {
        return Err(AlgebraError::PartitionSize {
            partition: partition.universe_size(),
            algebra: n,
        });
    }
    for (i, op) in algebra.signature().operations().iter().enumerate() {
        // It suffices to vary one argument within a block at a time.
        for slot in 0..op.arity {
            let mut args = Vec::with_capacity(op.arity);
            let ok = for_each_tuple(n, op.arity, &mut args, &mut |tuple| {
                let base = algebra.apply(i, tuple);
                let mut alt = tuple.to_vec();
                for other in 0..n {
                    if partition.same_block(tuple[slot], other) {
                        alt[slot] = other;
                        if !partition.same_block(base, algebra.apply(i, &alt)) {
                            return false;
                        }
                    }
                }
                true
            });
            if !ok {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn for_each_tuple(
    n: usize,
    arity: usize,
    acc: &mut Vec<usize>,
    check: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    if acc.len() == arity {
        return check(acc);
    }
    for e in 0..n {
        acc.push(e);
        if !for_each_tuple(n, arity, acc, check) {
            acc.pop();
            return false;
        }
        acc.pop();
    }
    true
}

/// The least congruence of `algebra` containing all the given pairs.
///
/// Seeds a disjoint-set forest with the pairs, then repeatedly merges the
/// results of each operation on componentwise-related argument tuples until
/// a fixpoint is reached.
pub fn congruence_generated(
    algebra: &FiniteAlgebra,
    pairs: &[(usize, usize)],
) -> Result<Partition, CongruenceError> {
    let n = algebra.size();
    for &(a, b) in pairs {
        if a >= n || b >= n {
            return Err(CongruenceError::ElementOutOfRange {
                element: a.max(b),
                size: n,
            });
        }
    }
    let mut forest = Forest::new(n);
    let mut queue: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in pairs {
        if forest.merge(a, b) {
            queue.push((a, b));
        }
    }
    while let Some((a, b)) = queue.pop() {
        for (i, op) in algebra.signature().operations().iter().enumerate() {
            for slot in 0..op.arity {
                let mut args = Vec::with_capacity(op.arity.saturating_sub(1));
                let mut merges = Vec::new();
                tuples_into(n, op.arity - 1, &mut args, &mut |rest| {
                    let mut left = Vec::with_capacity(op.arity);
                    let mut right = Vec::with_capacity(op.arity);
                    left.extend_from_slice(&rest[..slot]);
                    left.push(a);
                    left.extend_from_slice(&rest[slot..]);
                    right.extend_from_slice(&rest[..slot]);
                    right.push(b);
                    right.extend_from_slice(&rest[slot..]);
                    merges.push((algebra.apply(i, &left), algebra.apply(i, &right)));
                });
                for (x, y) in merges {
                    if forest.merge(x, y) {
                        queue.push((x, y));
                    }
                }
            }
        }
    }
    Ok(forest.into_partition())
}

fn tuples_into(n: usize, arity: usize, acc: &mut Vec<usize>, emit: &mut impl FnMut(&[usize])) {
    if acc.len() == arity {
        emit(acc);
        return;
    }
    for e in 0..n {
        acc.push(e);
        tuples_into(n, arity, acc, emit);
        acc.pop();
    }
}

/// The principal congruence Cg(a, b).
pub fn principal_congruence(
    algebra: &FiniteAlgebra,
    a: usize,
    b: usize,
) -> Result<Partition, CongruenceError> {
    congruence_generated(algebra, &[(a, b)])
}

/// The full congruence lattice of `algebra`, computed as the principal
/// congruences together with Δ, closed under pairwise join. Sorted by the
/// canonical representative vector. Errors when the universe exceeds `limit`;
/// partition counts explode with size, so callers opt in to larger runs.
pub fn all_congruences(
    algebra: &FiniteAlgebra,
    limit: usize,
) -> Result<Vec<Partition>, CongruenceError> {
    let n = algebra.size();
    if n > limit {
        return Err(CongruenceError::LimitExceeded { size: n, limit });
    }
    let mut set: BTreeSet<Partition> = BTreeSet::new();
    set.insert(Partition::finest(n));
    for a in 0..n {
        for b in (a + 1)..n {
            set.insert(principal_congruence(algebra, a, b)?);
        }
    }
    loop {
        let current: Vec<Partition> = set.iter().cloned().collect();
        let mut grew = false;
        for i in 0..current.len() {
            for j in (i + 1)..current.len() {
                let joined = current[i].join(&current[j])?;
                if set.insert(joined) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Ok(set.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn four_element_groupoid() -> FiniteAlgebra {
        FiniteAlgebra::from_alg_str(
            "algebra A\nsize 4\nnames a e b f\nop mul 2\n\
             1 1 2 3\n1 1 3 3\n2 3 3 3\n3 3 3 3\n",
        )
        .unwrap()
    }

    #[test]
    fn canonical_forms_and_rendering() {
        let p = Partition::from_blocks(4, &[vec![1, 3], vec![0], vec![2]]).unwrap();
        let q = Partition::from_pairs(4, &[(3, 1)]).unwrap();
        assert_eq!(p, q);
        assert_eq!(p.blocks(), vec![vec![0], vec![1, 3], vec![2]]);
        let names: Vec<String> = ["a", "e", "b", "f"].iter().map(|s| s.to_string()).collect();
        assert_eq!(p.render(Some(&names)), "{{a},{e,f},{b}}");
        assert_eq!(p.to_string(), "{{0},{1,3},{2}}");
    }

    #[test]
    fn join_meet_laws() {
        let rho = Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        let theta = Partition::from_blocks(4, &[vec![0], vec![2], vec![1, 3]]).unwrap();
        assert_eq!(rho.join(&theta).unwrap(), Partition::coarsest(4));
        assert_eq!(rho.meet(&theta).unwrap(), Partition::finest(4));
        assert_eq!(rho.join(&Partition::finest(4)).unwrap(), rho);
        assert_eq!(rho.meet(&Partition::coarsest(4)).unwrap(), rho);
        assert!(Partition::finest(4).refines(&rho));
        assert!(rho.refines(&Partition::coarsest(4)));
    }

    #[test]
    fn congruence_recognition() {
        let a = four_element_groupoid();
        let rho = Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap();
        assert!(is_congruence(&a, &rho).unwrap());
        // {{a,b},{e,f}}: a*b = b but b*b = f, and b, f lie in different blocks.
        let bad = Partition::from_blocks(4, &[vec![0, 2], vec![1, 3]]).unwrap();
        assert!(!is_congruence(&a, &bad).unwrap());
        assert!(is_congruence(&a, &Partition::finest(4)).unwrap());
    }

    #[test]
    fn generated_congruences() {
        let a = four_element_groupoid();
        // (e, f) generates {{a},{b},{e,f}}.
        let theta = congruence_generated(&a, &[(1, 3)]).unwrap();
        assert_eq!(
            theta,
            Partition::from_blocks(4, &[vec![0], vec![1, 3], vec![2]]).unwrap()
        );
        // (a, e) forces b ~ f: b*a = b while b*e = f.
        let rho = congruence_generated(&a, &[(0, 1)]).unwrap();
        assert_eq!(
            rho,
            Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()
        );
        // No pairs give the diagonal.
        assert_eq!(congruence_generated(&a, &[]).unwrap(), Partition::finest(4));
    }

    #[test]
    fn congruence_lattice_of_the_four_element_groupoid() {
        let a = four_element_groupoid();
        let lattice = all_congruences(&a, DEFAULT_CONGRUENCE_LIMIT).unwrap();
        assert!(lattice.contains(&Partition::finest(4)));
        assert!(lattice.contains(&Partition::coarsest(4)));
        assert!(lattice.contains(&Partition::from_blocks(4, &[vec![0, 1], vec![2, 3]]).unwrap()));
        assert!(
            lattice.contains(&Partition::from_blocks(4, &[vec![0], vec![1, 3], vec![2]]).unwrap())
        );
        // Every member really is a congruence, and the set is join/meet closed.
        for p in &lattice {
            assert!(is_congruence(&a, p).unwrap());
            for q in &lattice {
                assert!(lattice.contains(&p.join(q).unwrap()));
                assert!(lattice.contains(&p.meet(q).unwrap()));
            }
        }
    }

    #[test]
    fn two_element_algebras_have_two_congruences() {
        let lz = FiniteAlgebra::from_alg_str("algebra LZ2\nsize 2\nop mul 2\n0 0\n1 1\n").unwrap();
        let lattice = all_congruences(&lz, 8).unwrap();
        assert_eq!(lattice.len(), 2);
        let one = FiniteAlgebra::from_alg_str("algebra One\nsize 1\nop mul 2\n0\n").unwrap();
        assert_eq!(all_congruences(&one, 8).unwrap().len(), 1);
    }

    #[test]
    fn size_limit_enforced() {
        let lz = FiniteAlgebra::from_alg_str("algebra LZ2\nsize 2\nop mul 2\n0 0\n1 1\n").unwrap();
        assert!(matches!(
            all_congruences(&lz, 1),
            Err(CongruenceError::LimitExceeded { .. })
        ));
    }

    #[test]
    fn relation_closure() {
        let mut rel = BinaryRelation::diagonal(4);
        rel.insert(0, 1);
        rel.insert(1, 3);
        assert!(rel.contains(3, 1));
        let closure = rel.transitive_closure();
        assert_eq!(
            closure,
            Partition::from_blocks(4, &[vec![0, 1, 3], vec![2]]).unwrap()
        );
    }
}
