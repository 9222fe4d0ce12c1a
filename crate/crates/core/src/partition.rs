//! Partitions of a finite state set.
//!
//! Over a finite state set a σ-algebra is determined by its atoms, so
//! sub-σ-algebras are represented by the partition into atoms: a smaller
//! σ-algebra is a coarser partition, and the intersection of two σ-algebras
//! is the finest common coarsening ([`Partition::join`]).

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

/// A partition of `{0, .., n-1}` in canonical form: each block sorted, blocks
/// ordered by their smallest member.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
    block_of: Vec<usize>,
}

impl Partition {
    /// Groups indices by equal key. Block order follows first occurrence,
    /// which is the canonical order.
    pub fn from_keys<K: Hash + Eq>(keys: &[K]) -> Self {
        let mut ids: HashMap<&K, usize> = HashMap::new();
        let mut block_of = Vec::with_capacity(keys.len());
        for k in keys {
            let next = ids.len();
            block_of.push(*ids.entry(k).or_insert(next));
        }
        Partition::from_block_ids(&block_of)
    }

    /// Builds from arbitrary block ids per element.
    pub fn from_block_ids(ids: &[usize]) -> Self {
        let mut remap: HashMap<usize, usize> = HashMap::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut block_of = Vec::with_capacity(ids.len());
        for (x, id) in ids.iter().enumerate() {
            let b = *remap.entry(*id).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[b].push(x);
            block_of.push(b);
        }
        Partition { blocks, block_of }
    }

    /// Builds from explicit blocks; `None` unless they cover `0..n` exactly once.
    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Option<Self> {
        let mut ids = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return None;
            }
            for &x in block {
                if x >= n || ids[x] != usize::MAX {
                    return None;
                }
                ids[x] = b;
            }
        }
        if ids.contains(&usize::MAX) {
            return None;
        }
        Some(Partition::from_block_ids(&ids))
    }

    pub fn single_block(n: usize) -> Self {
        Partition::from_block_ids(&vec![0; n])
    }

    pub fn discrete(n: usize) -> Self {
        Partition::from_block_ids(&(0..n).collect::<Vec<_>>())
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Number of elements partitioned.
    pub fn len(&self) -> usize {
        self.block_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.block_of.is_empty()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Block index per element; usable as a quotient state map.
    pub fn block_ids(&self) -> &[usize] {
        &self.block_of
    }

    pub fn is_discrete(&self) -> bool {
        self.blocks.len() == self.block_of.len()
    }

    /// True if every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.blocks.iter().all(|b| b.iter().all(|&x| other.block_of[x] == other.block_of[b[0]]))
    }

    /// Coarsest common refinement (σ-algebra generated by both).
    pub fn meet(&self, other: &Partition) -> Partition {
        let keys: Vec<(usize, usize)> = (0..self.len()).map(|x| (self.block_of[x], other.block_of[x])).collect();
        Partition::from_keys(&keys)
    }

    /// Finest common coarsening (intersection of σ-algebras).
    pub fn join(&self, other: &Partition) -> Partition {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for p in [self, other] {
            for block in &p.blocks {
                for &x in &block[1..] {
                    let (a, b) = (find(&mut parent, block[0]), find(&mut parent, x));
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let roots: Vec<usize> = (0..n).map(|x| find(&mut parent, x)).collect();
        Partition::from_keys(&roots)
    }

    /// Renders blocks with element names, e.g. `{{0,2},{1,3}}`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> NamedPartition<'a> {
        NamedPartition { partition: self, names }
    }
}

pub struct NamedPartition<'a> {
    partition: &'a Partition,
    names: &'a [String],
}

impl fmt::Display for NamedPartition<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, block) in self.partition.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (j, &x) in block.iter().enumerate() {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.names[x])?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}
