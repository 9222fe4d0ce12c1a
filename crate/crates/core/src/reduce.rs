//! Reductions that keep the set of generated processes unchanged.
//!
//! * [`event_reduction`] finds the coarsest partition of the states on which
//!   the kernel is self-measurable: for every block `A` and symbol `s`, the
//!   mass `Σ_{y∈A} T(x, (y, s))` is constant on each block. Its blocks are
//!   the atoms of the smallest sufficient σ-algebra of internal events.
//! * [`state_reduction`] merges states with identical kernel rows.
//! * [`minimal_reduction`] applies the first and then the second, giving a
//!   generator whose reduced rows are pairwise distinct.
//!
//! Unreachable states are kept: reductions act on the whole state set,
//! since equivalence is over all initial distributions.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::generator::{DeterministicGenerator, Generator};
use crate::partition::Partition;
use crate::rat::Rat;

/// A kernel row lumped onto blocks: `(block, symbol) -> mass`.
pub type LumpedRow = BTreeMap<(usize, usize), Rat>;

/// `Σ_{y∈A} T(x, (y, s))` for every block `A` and symbol `s`, zero entries omitted.
pub fn lumped_row(gen: &Generator, partition: &Partition, x: usize) -> LumpedRow {
    let mut out = LumpedRow::new();
    for (&(y, s), p) in gen.row(x) {
        *out.entry((partition.block_of(y), s)).or_insert_with(Rat::zero) += p;
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// True iff lumped rows are constant on every block of `partition`.
pub fn is_stable(gen: &Generator, partition: &Partition) -> bool {
    partition.blocks().iter().all(|block| {
        let first = lumped_row(gen, partition, block[0]);
        block[1..].iter().all(|&x| lumped_row(gen, partition, x) == first)
    })
}

/// A generator restricted to the events generated by its coarsest stable
/// partition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EventReducedGenerator {
    base: Generator,
    partition: Partition,
    reduced_kernel: Vec<LumpedRow>,
}

impl EventReducedGenerator {
    pub fn base(&self) -> &Generator {
        &self.base
    }

    /// Atoms of the reduced σ-algebra.
    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// `T̄(x, A × {s})` per state, keyed by `(block index, symbol)`.
    pub fn reduced_kernel(&self) -> &[LumpedRow] {
        &self.reduced_kernel
    }

    /// Checks that every reduced row is constant within its block.
    pub fn is_stable(&self) -> bool {
        self.partition
            .blocks()
            .iter()
            .all(|block| block[1..].iter().all(|&x| self.reduced_kernel[x] == self.reduced_kernel[block[0]]))
    }
}

/// Coarsest stable partition by naive refinement: starting from a single
/// block, each round splits every block by the members' lumped rows against
/// the current partition, until no block splits.
pub fn event_reduction(gen: &Generator) -> EventReducedGenerator {
    let n = gen.num_states();
    let mut partition = Partition::single_block(n);
    loop {
        let keys: Vec<(usize, LumpedRow)> =
            (0..n).map(|x| (partition.block_of(x), lumped_row(gen, &partition, x))).collect();
        let next = Partition::from_keys(&keys);
        if next.num_blocks() == partition.num_blocks() {
            break;
        }
        partition = next;
    }
    let reduced_kernel = (0..n).map(|x| lumped_row(gen, &partition, x)).collect();
    EventReducedGenerator { base: gen.clone(), partition, reduced_kernel }
}

/// For a deterministic generator, the partition generated by the label
/// sequences `x ↦ (g(f(x)), g(f²(x)), ..)`, extended one step at a time until
/// it stops refining.
pub fn sigma_observation_partition(dg: &DeterministicGenerator) -> Partition {
    let f = dg.next();
    let g = dg.label();
    let n = f.len();
    let mut partition = Partition::single_block(n);
    let mut pos: Vec<usize> = (0..n).collect();
    loop {
        for p in &mut pos {
            *p = f[*p];
        }
        let labels: Vec<usize> = pos.iter().map(|&y| g[y]).collect();
        let next = partition.meet(&Partition::from_keys(&labels));
        if next.num_blocks() == partition.num_blocks() {
            return partition;
        }
        partition = next;
    }
}

/// A reduced generator together with the projection onto its states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    pub reduced: Generator,
    /// Classes of original states; class `i` is reduced state `i`.
    pub classes: Partition,
}

impl ReductionResult {
    /// Original state index to reduced state index.
    pub fn quotient_map(&self) -> &[usize] {
        self.classes.block_ids()
    }

    /// `(original state name, class name)` pairs in original state order.
    pub fn quotient_names<'a>(&'a self, original: &'a Generator) -> impl Iterator<Item = (&'a str, &'a str)> {
        original.states().iter().zip(self.quotient_map()).map(|(x, &c)| (x.as_str(), self.reduced.states()[c].as_str()))
    }

    pub fn is_bijective(&self) -> bool {
        self.classes.is_discrete()
    }
}

/// Name of the class whose smallest member is `state`.
pub fn class_name(state: &str) -> String {
    format!("c_{state}")
}

/// Quotient of `gen` by `classes`, reading each class's row from its first
/// member: `[T]([x], ([y], s)) = Σ_{y'∈[y]} T(x, (y', s))`. Only meaningful
/// when lumped rows agree within classes.
pub fn quotient_generator(gen: &Generator, classes: &Partition) -> Generator {
    let states = classes.blocks().iter().map(|b| class_name(&gen.states()[b[0]])).collect();
    let entries = classes
        .blocks()
        .iter()
        .enumerate()
        .flat_map(|(c, block)| lumped_row(gen, classes, block[0]).into_iter().map(move |((d, s), p)| (c, d, s, p)));
    Generator::new(states, gen.alphabet().to_vec(), entries).expect("class indices are in range by construction")
}

/// Merges states with identical kernel rows.
pub fn state_reduction(gen: &Generator) -> ReductionResult {
    let classes = Partition::from_keys(gen.rows());
    ReductionResult { reduced: quotient_generator(gen, &classes), classes }
}

/// Merges states of an event-reduced generator whose reduced rows coincide,
/// producing `[T̄]([x], ([y], s))`.
pub fn state_reduction_reduced(erg: &EventReducedGenerator) -> ReductionResult {
    let classes = Partition::from_keys(&erg.reduced_kernel);
    // each block lies inside one class because reduced rows are constant on blocks
    let class_of_block: Vec<usize> = erg.partition.blocks().iter().map(|b| classes.block_of(b[0])).collect();
    let base = &erg.base;
    let states = classes.blocks().iter().map(|b| class_name(&base.states()[b[0]])).collect();
    let entries = classes.blocks().iter().enumerate().flat_map(|(c, members)| {
        let class_of_block = &class_of_block;
        erg.reduced_kernel[members[0]].iter().map(move |(&(block, s), p)| (c, class_of_block[block], s, p.clone()))
    });
    let reduced =
        Generator::new(states, base.alphabet().to_vec(), entries).expect("class indices are in range by construction");
    ReductionResult { reduced, classes }
}

/// Internal-event reduction followed by internal-state reduction.
pub fn minimal_reduction(gen: &Generator) -> (EventReducedGenerator, ReductionResult) {
    let erg = event_reduction(gen);
    let result = state_reduction_reduced(&erg);
    (erg, result)
}
