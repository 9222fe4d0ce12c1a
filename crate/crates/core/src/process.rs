//! Observed-process semantics of a generator: finite-dimensional word
//! probabilities, sampling, exact process equivalence and causal states.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand_core::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{Error, Result};
use crate::generator::{Distribution, Generator};
use crate::partition::Partition;
use crate::rat::{format_rat, Rat};

/// A finite sequence of symbol indices.
pub type Word = Vec<usize>;

/// Default cap on the number of entries of a word table.
pub const DEFAULT_SIZE_LIMIT: u128 = 1_000_000;

type SparseMatrix = [(usize, usize, Rat)];

fn step(v: &[Rat], m: &SparseMatrix, dim: usize) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); dim];
    for (x, y, p) in m {
        if !v[*x].is_zero() {
            out[*y] += &v[*x] * p;
        }
    }
    out
}

fn check_word(gen: &Generator, w: &[usize]) -> Result<()> {
    match w.iter().find(|&&s| s >= gen.num_symbols()) {
        Some(s) => Err(Error::UnknownSymbol(format!("#{s}"))),
        None => Ok(()),
    }
}

/// `P(Y_1 = w_1, .., Y_n = w_n)` for initial distribution `mu`, computed as
/// `mu · M_{w_1} ⋯ M_{w_n} · 1`.
pub fn word_probability(gen: &Generator, mu: &Distribution, w: &[usize]) -> Result<Rat> {
    mu.check_len(gen)?;
    check_word(gen, w)?;
    let mats = gen.symbol_matrices();
    let mut v = mu.weights().to_vec();
    for &s in w {
        v = step(&v, &mats[s], gen.num_states());
    }
    Ok(v.into_iter().sum())
}

/// Number of words of length `0..=max_len` over `k` symbols, saturating.
pub fn table_size(k: usize, max_len: usize) -> u128 {
    let mut total: u128 = 0;
    let mut level: u128 = 1;
    for n in 0..=max_len {
        total = total.saturating_add(level);
        if n < max_len {
            level = level.saturating_mul(k as u128);
        }
    }
    total
}

/// All word probabilities up to a fixed length, in length-lexicographic order
/// by symbol index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WordTable {
    alphabet: Vec<String>,
    max_len: usize,
    probs: Vec<Rat>,
}

impl WordTable {
    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    fn index_of(&self, w: &[usize]) -> Option<usize> {
        let k = self.alphabet.len();
        if w.len() > self.max_len || w.iter().any(|&s| s >= k) {
            return None;
        }
        let offset: usize = (0..w.len()).map(|n| k.pow(n as u32)).sum();
        Some(offset + w.iter().fold(0, |acc, &s| acc * k + s))
    }

    pub fn get(&self, w: &[usize]) -> Option<&Rat> {
        self.index_of(w).map(|i| &self.probs[i])
    }

    /// Probabilities in canonical order.
    pub fn probs(&self) -> &[Rat] {
        &self.probs
    }

    /// Words and probabilities in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (Word, &Rat)> + '_ {
        WordIter::new(self.alphabet.len(), self.max_len).zip(self.probs.iter())
    }

    /// Checks that every word's extensions by one symbol sum to its probability.
    pub fn is_consistent(&self) -> bool {
        if !self.probs[0].is_one() {
            return false;
        }
        let k = self.alphabet.len();
        self.iter().filter(|(w, _)| w.len() < self.max_len).all(|(w, p)| {
            let total: Rat = (0..k)
                .map(|s| {
                    let mut ext = w.clone();
                    ext.push(s);
                    self.get(&ext).cloned().unwrap_or_default()
                })
                .sum();
            total == *p
        })
    }
}

/// One line per word: `<word> <p>/<q>`.
impl fmt::Display for WordTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (w, p) in self.iter() {
            writeln!(f, "{} {}", format_word(&self.alphabet, &w), format_rat(p))?;
        }
        Ok(())
    }
}

/// Enumerates words of length `0..=max_len` in length-lexicographic order.
pub struct WordIter {
    k: usize,
    max_len: usize,
    current: Option<Word>,
}

impl WordIter {
    pub fn new(k: usize, max_len: usize) -> Self {
        WordIter { k, max_len, current: Some(Vec::new()) }
    }
}

impl Iterator for WordIter {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let out = self.current.take()?;
        let mut next = out.clone();
        // increment as a base-k counter; overflow moves to the next length
        let mut i = next.len();
        loop {
            if i == 0 {
                if next.len() < self.max_len && self.k > 0 {
                    next = vec![0; next.len() + 1];
                    self.current = Some(next);
                }
                break;
            }
            i -= 1;
            if next[i] + 1 < self.k {
                next[i] += 1;
                self.current = Some(next);
                break;
            }
            next[i] = 0;
        }
        Some(out)
    }
}

/// Renders a word. Symbols are concatenated when every symbol of the
/// alphabet is a single character and joined by `,` otherwise; the empty
/// word is `ε`.
pub fn format_word(alphabet: &[String], w: &[usize]) -> String {
    if w.is_empty() {
        return "ε".to_string();
    }
    let sep = if single_char_alphabet(alphabet) { "" } else { "," };
    w.iter().map(|&s| alphabet[s].as_str()).collect::<Vec<_>>().join(sep)
}

/// Inverse of [`format_word`].
pub fn parse_word(alphabet: &[String], text: &str) -> Result<Word> {
    let text = text.trim();
    if text.is_empty() || text == "ε" {
        return Ok(Vec::new());
    }
    let lookup =
        |tok: &str| alphabet.iter().position(|a| a == tok).ok_or_else(|| Error::UnknownSymbol(tok.to_string()));
    if single_char_alphabet(alphabet) {
        text.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect()
    } else {
        text.split(',').map(|t| lookup(t.trim())).collect()
    }
}

fn single_char_alphabet(alphabet: &[String]) -> bool {
    alphabet.iter().all(|a| a.chars().count() == 1)
}

/// Table of [`word_probability`] for every word of length at most `max_len`,
/// refusing tables above [`DEFAULT_SIZE_LIMIT`] entries.
pub fn word_distribution(gen: &Generator, mu: &Distribution, max_len: usize) -> Result<WordTable> {
    word_distribution_with_limit(gen, mu, max_len, DEFAULT_SIZE_LIMIT)
}

pub fn word_distribution_with_limit(
    gen: &Generator,
    mu: &Distribution,
    max_len: usize,
    limit: u128,
) -> Result<WordTable> {
    mu.check_len(gen)?;
    let k = gen.num_symbols();
    let requested = table_size(k, max_len);
    if requested > limit {
        return Err(Error::SizeLimit { requested, limit });
    }
    let n = gen.num_states();
    let mats = gen.symbol_matrices();
    let mut probs = Vec::with_capacity(requested as usize);
    let mut level = vec![mu.weights().to_vec()];
    probs.push(Rat::one());
    for _ in 0..max_len {
        // children of each word in order give the next level in lexicographic order
        let mut next = Vec::with_capacity(level.len() * k);
        for v in &level {
            for m in &mats {
                let child = step(v, m, n);
                probs.push(child.iter().sum());
                next.push(child);
            }
        }
        level = next;
    }
    Ok(WordTable { alphabet: gen.alphabet().to_vec(), max_len, probs })
}

/// Outcome of [`sample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sample {
    pub initial_state: usize,
    pub word: Word,
    pub final_state: usize,
}

/// Draws `x_0 ~ mu`, then `n` transitions `(x_k, s_k) ~ T(x_{k-1}, ·)`.
///
/// The stream is reproducible across platforms. The random source is
/// SplitMix64 with its 64-bit state initialized to `seed`; each draw takes
/// one output `u` and selects the first outcome `i` (in canonical order) with
/// `u < 2^64 · (p_0 + .. + p_i)`, compared exactly. Initial states are ordered
/// by index; transitions by (target state, symbol) index.
pub fn sample(gen: &Generator, mu: &Distribution, n: usize, seed: u64) -> Result<Sample> {
    mu.check_len(gen)?;
    let mut rng = SplitMix64::from_seed(seed.to_le_bytes());
    let scale = BigInt::one() << 64;
    let mut draw = |outcomes: &mut dyn Iterator<Item = &Rat>| -> Option<usize> {
        let u = BigInt::from(rng.next_u64());
        let mut cum = Rat::zero();
        for (i, p) in outcomes.enumerate() {
            cum += p;
            if &u * cum.denom() < cum.numer() * &scale {
                return Some(i);
            }
        }
        None
    };
    let initial_state = draw(&mut mu.weights().iter())
        .ok_or_else(|| Error::InvalidDistribution("initial weights do not sum to 1".into()))?;
    let mut x = initial_state;
    let mut word = Vec::with_capacity(n);
    for _ in 0..n {
        let row = gen.row(x);
        let i = draw(&mut row.values()).ok_or_else(|| Error::InvalidGenerator(gen.validate()))?;
        let (&(y, s), _) = row.iter().nth(i).expect("drawn index is within the row");
        word.push(s);
        x = y;
    }
    Ok(Sample { initial_state, word, final_state: x })
}

/// Row-echelon basis of a subspace, built incrementally.
#[derive(Default)]
pub(crate) struct Basis {
    rows: Vec<(usize, Vec<Rat>)>,
}

impl Basis {
    /// Adds `v` if it is independent of the current rows; returns whether it was added.
    pub(crate) fn insert(&mut self, v: &[Rat]) -> bool {
        let mut r = v.to_vec();
        for (pivot, row) in &self.rows {
            if r[*pivot].is_zero() {
                continue;
            }
            let c = r[*pivot].clone();
            for (a, b) in r.iter_mut().zip(row) {
                if !b.is_zero() {
                    *a -= &c * b;
                }
            }
        }
        match r.iter().position(|a| !a.is_zero()) {
            Some(pivot) => {
                let inv = r[pivot].recip();
                for a in &mut r {
                    *a *= &inv;
                }
                self.rows.push((pivot, r));
                true
            }
            None => false,
        }
    }

    pub(crate) fn rows(&self) -> impl Iterator<Item = &Vec<Rat>> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub(crate) fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// Maps symbols of `b` onto symbol indices of `a` by name.
fn align_alphabets(a: &Generator, b: &Generator) -> Result<Vec<usize>> {
    if a.num_symbols() != b.num_symbols() {
        return Err(Error::AlphabetMismatch(format!("{} symbols vs {} symbols", a.num_symbols(), b.num_symbols())));
    }
    b.alphabet()
        .iter()
        .map(|s| {
            a.symbol_index(s).map_err(|_| Error::AlphabetMismatch(format!("symbol `{s}` missing from first alphabet")))
        })
        .collect()
}

/// Shortest word on which the processes `(gen1, mu1)` and `(gen2, mu2)`
/// disagree, or `None` if they agree on every finite word. Symbols are
/// matched by name; the word is returned in `gen1`'s symbol indices.
///
/// Explores words breadth-first over the joint state space, keeping only
/// words whose forward vector is linearly independent of those already
/// kept, so at most `|Q1| + |Q2|` words are ever extended.
pub fn distinguishing_word(
    gen1: &Generator,
    mu1: &Distribution,
    gen2: &Generator,
    mu2: &Distribution,
) -> Result<Option<Word>> {
    mu1.check_len(gen1)?;
    mu2.check_len(gen2)?;
    let to_first = align_alphabets(gen1, gen2)?;
    let (n1, n2) = (gen1.num_states(), gen2.num_states());
    let dim = n1 + n2;
    let mut mats: Vec<Vec<(usize, usize, Rat)>> = gen1.symbol_matrices();
    for (s2, m) in gen2.symbol_matrices().into_iter().enumerate() {
        mats[to_first[s2]].extend(m.into_iter().map(|(x, y, p)| (x + n1, y + n1, p)));
    }
    let difference = |v: &[Rat]| -> Rat {
        let first: Rat = v[..n1].iter().sum();
        let second: Rat = v[n1..].iter().sum();
        first - second
    };

    let start: Vec<Rat> = mu1.weights().iter().chain(mu2.weights()).cloned().collect();
    let mut basis = Basis::default();
    basis.insert(&start);
    let mut queue = VecDeque::from([(Vec::new(), start)]);
    while let Some((word, v)) = queue.pop_front() {
        for (s, m) in mats.iter().enumerate() {
            let next = step(&v, m, dim);
            let mut w = word.clone();
            w.push(s);
            if !difference(&next).is_zero() {
                return Ok(Some(w));
            }
            if basis.insert(&next) {
                queue.push_back((w, next));
            }
        }
    }
    Ok(None)
}

/// True iff the two processes agree on all finite words.
pub fn equivalent(gen1: &Generator, mu1: &Distribution, gen2: &Generator, mu2: &Distribution) -> Result<bool> {
    Ok(distinguishing_word(gen1, mu1, gen2, mu2)?.is_none())
}

/// Groups states generating the same process from a point mass.
///
/// Builds a basis of the span of the vectors `x ↦ P(w | δ_x)` over all words
/// `w`; two states generate the same process iff they agree on every basis
/// vector.
pub fn causal_state_partition(gen: &Generator) -> Partition {
    let n = gen.num_states();
    let mats = gen.symbol_matrices();
    let mut basis = Basis::default();
    let ones = vec![Rat::one(); n];
    basis.insert(&ones);
    let mut queue = VecDeque::from([ones]);
    while let Some(beta) = queue.pop_front() {
        for m in &mats {
            // (M_s β)[x] = Σ_y T(x, (y, s)) β[y]
            let mut next = vec![Rat::zero(); n];
            for (x, y, p) in m {
                if !beta[*y].is_zero() {
                    next[*x] += p * &beta[*y];
                }
            }
            if basis.insert(&next) {
                queue.push_back(next);
            }
        }
    }
    let signatures: Vec<Vec<Rat>> = (0..n).map(|x| basis.rows().map(|r| r[x].clone()).collect()).collect();
    debug_assert!(basis.dim() <= n);
    Partition::from_keys(&signatures)
}
