//! Generators: finite Markov transition kernels from an internal state to a
//! pair (next internal state, emitted symbol).
//!
//! States and symbols are referenced by name at the edges of the API and by
//! dense index internally; the canonical order is input order. Kernel rows
//! are stored sparsely, keeping only nonzero entries.
//!
//! Over a finite state set with the power-set σ-algebra every function of the
//! state is measurable, so the kernel's measurability condition holds
//! automatically and only row normalization is checked.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rat::{format_rat, fraction, in_unit_interval, Rat};

/// One kernel row: `(target state, symbol) -> probability`, nonzero entries only.
pub type Row = BTreeMap<(usize, usize), Rat>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    states: Vec<String>,
    alphabet: Vec<String>,
    rows: Vec<Row>,
}

impl Generator {
    /// Builds a generator from `(from, to, symbol, prob)` index quadruples.
    /// Repeated entries are summed and zero entries dropped. The result is
    /// not validated; call [`Generator::validate`].
    pub fn new<I>(states: Vec<String>, alphabet: Vec<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, usize, Rat)>,
    {
        let mut rows = vec![Row::new(); states.len()];
        for (x, y, s, p) in entries {
            if x >= states.len() {
                return Err(Error::UnknownState(format!("#{x}")));
            }
            if y >= states.len() {
                return Err(Error::UnknownState(format!("#{y}")));
            }
            if s >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
            *rows[x].entry((y, s)).or_insert_with(Rat::zero) += p;
        }
        for row in &mut rows {
            row.retain(|_, p| !p.is_zero());
        }
        Ok(Generator { states, alphabet, rows })
    }

    /// Like [`Generator::new`] but with entries given by name.
    pub fn from_named<'a, I>(states: &[&str], alphabet: &[&str], entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, &'a str, &'a str, Rat)>,
    {
        let states: Vec<String> = states.iter().map(|s| s.to_string()).collect();
        let alphabet: Vec<String> = alphabet.iter().map(|s| s.to_string()).collect();
        let mut indexed = Vec::new();
        for (x, y, s, p) in entries {
            let xi = position(&states, x).ok_or_else(|| Error::UnknownState(x.into()))?;
            let yi = position(&states, y).ok_or_else(|| Error::UnknownState(y.into()))?;
            let si = position(&alphabet, s).ok_or_else(|| Error::UnknownSymbol(s.into()))?;
            indexed.push((xi, yi, si, p));
        }
        Generator::new(states, alphabet, indexed)
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_symbols(&self) -> usize {
        self.alphabet.len()
    }

    pub fn row(&self, x: usize) -> &Row {
        &self.rows[x]
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// `T(x, {y} x {s})`.
    pub fn prob(&self, x: usize, y: usize, s: usize) -> Rat {
        self.rows[x].get(&(y, s)).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn state_index(&self, name: &str) -> Result<usize> {
        position(&self.states, name).ok_or_else(|| Error::UnknownState(name.into()))
    }

    pub fn symbol_index(&self, name: &str) -> Result<usize> {
        position(&self.alphabet, name).ok_or_else(|| Error::UnknownSymbol(name.into()))
    }

    /// Sparse per-symbol transition matrices `M_s[x][y] = T(x, (y, s))`,
    /// as `(x, y, p)` triples indexed by symbol.
    pub fn symbol_matrices(&self) -> Vec<Vec<(usize, usize, Rat)>> {
        let mut mats = vec![Vec::new(); self.alphabet.len()];
        for (x, row) in self.rows.iter().enumerate() {
            for (&(y, s), p) in row {
                mats[s].push((x, y, p.clone()));
            }
        }
        mats
    }

    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        if self.states.is_empty() {
            violations.push(Violation::EmptyStateSet);
        }
        for name in duplicates(&self.states) {
            violations.push(Violation::DuplicateState(name));
        }
        for name in duplicates(&self.alphabet) {
            violations.push(Violation::DuplicateSymbol(name));
        }
        for (x, row) in self.rows.iter().enumerate() {
            let mut total = Rat::zero();
            for (&(y, s), p) in row {
                if !in_unit_interval(p) {
                    violations.push(Violation::OutOfRange {
                        from: self.states[x].clone(),
                        to: self.states[y].clone(),
                        symbol: self.alphabet[s].clone(),
                        value: p.clone(),
                    });
                }
                total += p;
            }
            if !total.is_one() {
                violations.push(Violation::RowSum { state: self.states[x].clone(), total });
            }
        }
        ValidationReport { violations }
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let report = self.validate();
        if report.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidGenerator(report))
        }
    }
}

fn position(names: &[String], name: &str) -> Option<usize> {
    names.iter().position(|n| n == name)
}

fn duplicates(names: &[String]) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut reported = HashSet::new();
    let mut out = Vec::new();
    for n in names {
        if !seen.insert(n) && reported.insert(n) {
            out.push(n.clone());
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    EmptyStateSet,
    DuplicateState(String),
    DuplicateSymbol(String),
    OutOfRange { from: String, to: String, symbol: String, value: Rat },
    RowSum { state: String, total: Rat },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyStateSet => write!(f, "state set is empty"),
            Violation::DuplicateState(n) => write!(f, "duplicate state name `{n}`"),
            Violation::DuplicateSymbol(n) => write!(f, "duplicate symbol name `{n}`"),
            Violation::OutOfRange { from, to, symbol, value } => {
                write!(f, "entry T({from}, ({to}, {symbol})) = {} is outside [0, 1]", format_rat(value))
            }
            Violation::RowSum { state, total } => {
                write!(f, "row {state} sums to {}", format_rat(total))
            }
        }
    }
}

/// Result of [`Generator::validate`]; valid iff there are no violations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Probability vector over the states of a generator, indexed densely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution {
    weights: Vec<Rat>,
}

impl Distribution {
    pub fn new(weights: Vec<Rat>) -> Result<Self> {
        if let Some(w) = weights.iter().find(|w| !in_unit_interval(w)) {
            return Err(Error::InvalidDistribution(format!("weight {} is outside [0, 1]", format_rat(w))));
        }
        let total: Rat = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidDistribution(format!("weights sum to {}", format_rat(&total))));
        }
        Ok(Distribution { weights })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidDistribution("no states".into()));
        }
        Ok(Distribution { weights: vec![fraction(1, n); n] })
    }

    pub fn point(n: usize, x: usize) -> Result<Self> {
        if x >= n {
            return Err(Error::UnknownState(format!("#{x}")));
        }
        let mut weights = vec![Rat::zero(); n];
        weights[x] = Rat::one();
        Ok(Distribution { weights })
    }

    /// Builds a distribution over `gen`'s states from named weights; states
    /// not mentioned get weight zero.
    pub fn from_named<'a, I>(gen: &Generator, weights: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a str, Rat)>,
    {
        let mut w = vec![Rat::zero(); gen.num_states()];
        for (name, p) in weights {
            w[gen.state_index(name)?] += p;
        }
        Distribution::new(w)
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `(1 - t) * self + t * other`.
    pub fn mix(&self, other: &Distribution, t: &Rat) -> Result<Distribution> {
        if self.len() != other.len() {
            return Err(Error::DistributionMismatch { expected: self.len(), found: other.len() });
        }
        if !in_unit_interval(t) {
            return Err(Error::InvalidArgument(format!("mixing weight {} is outside [0, 1]", format_rat(t))));
        }
        let s = Rat::one() - t;
        let weights = self.weights.iter().zip(&other.weights).map(|(a, b)| a * &s + b * t).collect();
        Ok(Distribution { weights })
    }

    pub(crate) fn check_len(&self, gen: &Generator) -> Result<()> {
        if self.len() == gen.num_states() {
            Ok(())
        } else {
            Err(Error::DistributionMismatch { expected: gen.num_states(), found: self.len() })
        }
    }
}

/// Point mass `δ_x` at the named state.
pub fn delta(gen: &Generator, x: &str) -> Result<Distribution> {
    Distribution::point(gen.num_states(), gen.state_index(x)?)
}

/// Image `f_*(d)` of a distribution under a state map into `target_states`
/// states: the weight of `y` is the total weight of its preimage.
pub fn pushforward(d: &Distribution, f: &[usize], target_states: usize) -> Result<Distribution> {
    if f.len() != d.len() {
        return Err(Error::DistributionMismatch { expected: f.len(), found: d.len() });
    }
    let mut weights = vec![Rat::zero(); target_states];
    for (x, w) in d.weights.iter().enumerate() {
        if w.is_zero() {
            continue;
        }
        let y = f[x];
        if y >= target_states {
            return Err(Error::UnknownState(format!("#{y}")));
        }
        weights[y] += w;
    }
    Ok(Distribution { weights })
}

/// A deterministic internal dynamics `f: Q -> Q` with a measurement
/// `g: Q -> Σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeterministicGenerator {
    states: Vec<String>,
    alphabet: Vec<String>,
    next: Vec<usize>,
    label: Vec<usize>,
}

impl DeterministicGenerator {
    pub fn new(states: Vec<String>, alphabet: Vec<String>, next: Vec<usize>, label: Vec<usize>) -> Result<Self> {
        let n = states.len();
        if next.len() != n || label.len() != n {
            return Err(Error::InvalidArgument(format!(
                "maps must be total on {n} states (got |f| = {}, |g| = {})",
                next.len(),
                label.len()
            )));
        }
        if let Some(&y) = next.iter().find(|&&y| y >= n) {
            return Err(Error::UnknownState(format!("#{y}")));
        }
        if let Some(&s) = label.iter().find(|&&s| s >= alphabet.len()) {
            return Err(Error::UnknownSymbol(format!("#{s}")));
        }
        Ok(DeterministicGenerator { states, alphabet, next, label })
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    /// The dynamics `f`.
    pub fn next(&self) -> &[usize] {
        &self.next
    }

    /// The measurement `g`.
    pub fn label(&self) -> &[usize] {
        &self.label
    }
}

/// `T(x, {y} x {s}) = 1` iff `y = f(x)` and `s = g(f(x))`.
pub fn from_deterministic(dg: &DeterministicGenerator) -> Generator {
    let rows = dg.next.iter().map(|&y| Row::from([((y, dg.label[y]), Rat::one())])).collect();
    Generator { states: dg.states.clone(), alphabet: dg.alphabet.clone(), rows }
}

/// A nondeterministic machine `x -> set of possible (next state, symbol)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NondetMachine {
    states: Vec<String>,
    alphabet: Vec<String>,
    relation: Vec<BTreeSet<(usize, usize)>>,
}

impl NondetMachine {
    pub fn new(states: Vec<String>, alphabet: Vec<String>, relation: Vec<BTreeSet<(usize, usize)>>) -> Result<Self> {
        if relation.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "relation has {} rows for {} states",
                relation.len(),
                states.len()
            )));
        }
        for &(y, s) in relation.iter().flatten() {
            if y >= states.len() {
                return Err(Error::UnknownState(format!("#{y}")));
            }
            if s >= alphabet.len() {
                return Err(Error::UnknownSymbol(format!("#{s}")));
            }
        }
        Ok(NondetMachine { states, alphabet, relation })
    }

    pub fn relation(&self) -> &[BTreeSet<(usize, usize)>] {
        &self.relation
    }
}

/// Uniform probabilistic lift: `T(x, C) = |C ∩ R(x)| / |R(x)|`.
pub fn from_nondeterministic(nm: &NondetMachine) -> Result<Generator> {
    let mut rows = Vec::with_capacity(nm.states.len());
    for (x, rel) in nm.relation.iter().enumerate() {
        if rel.is_empty() {
            return Err(Error::EmptyRelation(nm.states[x].clone()));
        }
        let p = fraction(1, rel.len());
        rows.push(rel.iter().map(|&pair| (pair, p.clone())).collect());
    }
    Ok(Generator { states: nm.states.clone(), alphabet: nm.alphabet.clone(), rows })
}

#[cfg(test)]
pub(crate) fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}
