//! Transition-preserving maps between generators.
//!
//! A pair `(f, g)` of a state map and a symbol map is a morphism
//! `T1 -> T2` when `T2(f(x), A × B) = T1(x, f⁻¹(A) × g⁻¹(B))` for every state
//! `x` and all sets `A`, `B`. Both sides are finitely additive in `(A, B)`,
//! so checking singletons `A = {y}`, `B = {s}` is sufficient; the
//! `singleton_check_implies_all_rectangles` test exercises that lemma.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::generator::{pushforward, Distribution, Generator, Row};
use crate::process::{table_size, word_distribution, WordIter};
use crate::rat::{format_rat, Rat};
use crate::reduce::ReductionResult;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    source: Generator,
    target: Generator,
    f: Vec<usize>,
    g: Vec<usize>,
}

/// First `(x, y, s)` at which the commutativity rule fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub state: String,
    pub target_state: String,
    pub symbol: String,
    /// `T1(x, f⁻¹({y}) × g⁻¹({s}))`
    pub source_mass: Rat,
    /// `T2(f(x), {y} × {s})`
    pub target_mass: Rat,
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "at state {} with target ({}, {}): source mass {} but target mass {}",
            self.state,
            self.target_state,
            self.symbol,
            format_rat(&self.source_mass),
            format_rat(&self.target_mass)
        )
    }
}

impl Morphism {
    pub fn new(source: Generator, target: Generator, f: Vec<usize>, g: Vec<usize>) -> Result<Self> {
        if f.len() != source.num_states() {
            return Err(Error::InvalidArgument(format!(
                "state map covers {} of {} states",
                f.len(),
                source.num_states()
            )));
        }
        if g.len() != source.num_symbols() {
            return Err(Error::InvalidArgument(format!(
                "symbol map covers {} of {} symbols",
                g.len(),
                source.num_symbols()
            )));
        }
        if let Some(&y) = f.iter().find(|&&y| y >= target.num_states()) {
            return Err(Error::UnknownState(format!("#{y}")));
        }
        if let Some(&s) = g.iter().find(|&&s| s >= target.num_symbols()) {
            return Err(Error::UnknownSymbol(format!("#{s}")));
        }
        Ok(Morphism { source, target, f, g })
    }

    /// Builds from name maps; every source state and symbol must be mapped.
    pub fn from_names(
        source: Generator,
        target: Generator,
        f: &BTreeMap<String, String>,
        g: &BTreeMap<String, String>,
    ) -> Result<Self> {
        let fi = source
            .states()
            .iter()
            .map(|x| {
                let y = f.get(x).ok_or_else(|| Error::InvalidArgument(format!("state `{x}` is not mapped")))?;
                target.state_index(y)
            })
            .collect::<Result<Vec<_>>>()?;
        let gi = source
            .alphabet()
            .iter()
            .map(|s| {
                let t = g.get(s).ok_or_else(|| Error::InvalidArgument(format!("symbol `{s}` is not mapped")))?;
                target.symbol_index(t)
            })
            .collect::<Result<Vec<_>>>()?;
        for name in f.keys() {
            source.state_index(name)?;
        }
        for name in g.keys() {
            source.symbol_index(name)?;
        }
        Morphism::new(source, target, fi, gi)
    }

    pub fn identity(gen: &Generator) -> Self {
        Morphism {
            source: gen.clone(),
            target: gen.clone(),
            f: (0..gen.num_states()).collect(),
            g: (0..gen.num_symbols()).collect(),
        }
    }

    /// Projection of `source` onto a reduction of it, with identity on symbols.
    pub fn quotient(source: &Generator, reduction: &ReductionResult) -> Self {
        Morphism {
            source: source.clone(),
            target: reduction.reduced.clone(),
            f: reduction.quotient_map().to_vec(),
            g: (0..source.num_symbols()).collect(),
        }
    }

    pub fn source(&self) -> &Generator {
        &self.source
    }

    pub fn target(&self) -> &Generator {
        &self.target
    }

    pub fn state_map(&self) -> &[usize] {
        &self.f
    }

    pub fn symbol_map(&self) -> &[usize] {
        &self.g
    }

    /// `(f × g)_*` applied to the source row of `x`.
    fn pushed_row(&self, x: usize) -> Row {
        let mut out = Row::new();
        for (&(y, s), p) in self.source.row(x) {
            *out.entry((self.f[y], self.g[s])).or_insert_with(Rat::zero) += p;
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Checks the commutativity rule on singleton rectangles, returning the
    /// lexicographically first failing `(x, y, s)`.
    pub fn verify(&self) -> Result<(), Box<Counterexample>> {
        for x in 0..self.source.num_states() {
            let pushed = self.pushed_row(x);
            let target_row = self.target.row(self.f[x]);
            if pushed == *target_row {
                continue;
            }
            // first key (in (y, s) order) where the two sparse rows differ
            let keys = pushed.keys().chain(target_row.keys());
            let &(y, s) = keys.filter(|k| pushed.get(k) != target_row.get(k)).min().expect("rows differ on some key");
            let zero = Rat::zero();
            return Err(Box::new(Counterexample {
                state: self.source.states()[x].clone(),
                target_state: self.target.states()[y].clone(),
                symbol: self.target.alphabet()[s].clone(),
                source_mass: pushed.get(&(y, s)).unwrap_or(&zero).clone(),
                target_mass: target_row.get(&(y, s)).unwrap_or(&zero).clone(),
            }));
        }
        Ok(())
    }

    pub fn is_transition_preserving(&self) -> bool {
        self.verify().is_ok()
    }

    /// `(f2 ∘ f1, g2 ∘ g1)` for `self: T1 -> T2` and `next: T2 -> T3`.
    pub fn then(&self, next: &Morphism) -> Result<Morphism> {
        compose(self, next)
    }
}

/// Composition `m2 ∘ m1`; requires `m1.target == m2.source`.
pub fn compose(m1: &Morphism, m2: &Morphism) -> Result<Morphism> {
    if m1.target != m2.source {
        return Err(Error::ChainMismatch("target of the first morphism differs from the source of the second".into()));
    }
    Ok(Morphism {
        source: m1.source.clone(),
        target: m2.target.clone(),
        f: m1.f.iter().map(|&y| m2.f[y]).collect(),
        g: m1.g.iter().map(|&s| m2.g[s]).collect(),
    })
}

/// `T2(x, A × B) = T1(x, A × g⁻¹(B))`: the generator of the relabelled
/// output process `g ∘ Y`.
pub fn relabel_outputs(gen: &Generator, g: &[usize], alphabet: Vec<String>) -> Result<Generator> {
    if g.len() != gen.num_symbols() {
        return Err(Error::InvalidArgument(format!("symbol map covers {} of {} symbols", g.len(), gen.num_symbols())));
    }
    if let Some(&s) = g.iter().find(|&&s| s >= alphabet.len()) {
        return Err(Error::UnknownSymbol(format!("#{s}")));
    }
    let entries =
        gen.rows().iter().enumerate().flat_map(|(x, row)| row.iter().map(move |(&(y, s), p)| (x, y, g[s], p.clone())));
    Generator::new(gen.states().to_vec(), alphabet, entries)
}

/// The morphism `(id, g): gen -> relabel_outputs(gen, g)`.
pub fn relabel_morphism(gen: &Generator, g: &[usize], alphabet: Vec<String>) -> Result<Morphism> {
    let target = relabel_outputs(gen, g, alphabet)?;
    Morphism::new(gen.clone(), target, (0..gen.num_states()).collect(), g.to_vec())
}

/// Checks, for every target word `w` with `|w| <= max_len`, that the target
/// process started at `f_*(mu)` gives `w` the total source probability of
/// all words mapped onto `w` by `g`.
pub fn check_transport(m: &Morphism, mu: &Distribution, max_len: usize) -> Result<bool> {
    m.verify().map_err(Error::NotTransitionPreserving)?;
    let source_table = word_distribution(&m.source, mu, max_len)?;
    let pushed = pushforward(mu, &m.f, m.target.num_states())?;
    let target_table = word_distribution(&m.target, &pushed, max_len)?;

    let k2 = m.target.num_symbols();
    let mut aggregated = vec![Rat::zero(); table_size(k2, max_len) as usize];
    for (w1, p) in source_table.iter() {
        let image: Vec<usize> = w1.iter().map(|&s| m.g[s]).collect();
        aggregated[target_index(k2, &image)] += p;
    }
    debug_assert_eq!(WordIter::new(k2, max_len).count(), aggregated.len());
    Ok(aggregated.as_slice() == target_table.probs())
}

fn target_index(k: usize, w: &[usize]) -> usize {
    let offset: usize = (0..w.len()).map(|n| k.pow(n as u32)).sum();
    offset + w.iter().fold(0, |acc, &s| acc * k + s)
}
