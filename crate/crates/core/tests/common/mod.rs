//! Random instance builders and brute-force oracles shared by the
//! integration tests. Nothing here calls the algorithms it is used to check.

#![allow(dead_code)]

use genred::rat::{fraction, Rat};
use genred::{DeterministicGenerator, Distribution, Generator, Partition};
use num_traits::{One, Zero};
use proptest::test_runner::Config;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Proptest settings for integration tests; seeds are logged on failure
/// rather than persisted.
pub fn config(cases: u32) -> Config {
    Config { cases, failure_persistence: None, ..Config::default() }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

pub fn symbols(k: usize) -> Vec<String> {
    (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
}

/// Splits 1 into `parts` positive rationals with small denominators.
pub fn random_simplex(rng: &mut ChaCha8Rng, parts: usize) -> Vec<Rat> {
    let weights: Vec<usize> = (0..parts).map(|_| rng.random_range(1..=4)).collect();
    let total: usize = weights.iter().sum();
    weights.into_iter().map(|w| fraction(w, total)).collect()
}

pub fn random_distribution(rng: &mut ChaCha8Rng, n: usize) -> Distribution {
    // allow zeros, but keep at least one positive weight
    let mut weights: Vec<usize> = (0..n).map(|_| rng.random_range(0..=3)).collect();
    if weights.iter().all(|&w| w == 0) {
        weights[rng.random_range(0..n)] = 1;
    }
    let total: usize = weights.iter().sum();
    Distribution::new(weights.into_iter().map(|w| fraction(w, total)).collect()).unwrap()
}

/// Generator with random sparse rows over `n` states and `k` symbols.
pub fn random_generator_sized(rng: &mut ChaCha8Rng, n: usize, k: usize) -> Generator {
    let cells = n * k;
    let mut entries = Vec::new();
    for x in 0..n {
        let support = rng.random_range(1..=cells.min(4));
        let mut chosen: Vec<usize> = Vec::new();
        while chosen.len() < support {
            let c = rng.random_range(0..cells);
            if !chosen.contains(&c) {
                chosen.push(c);
            }
        }
        for (c, p) in chosen.into_iter().zip(random_simplex(rng, support)) {
            entries.push((x, c / k, c % k, p));
        }
    }
    Generator::new(names("q", n), symbols(k), entries).unwrap()
}

/// Generator that is lumpable onto a random smaller generator: each base
/// state is expanded into copies whose rows split the base mass differently
/// among the copies of each target, so reductions are nontrivial while rows
/// are usually distinct. Some copies get exactly duplicated rows.
pub fn random_lumpable(rng: &mut ChaCha8Rng, max_states: usize, k: usize) -> Generator {
    let base_n = rng.random_range(1..=max_states.div_ceil(2).max(1));
    let base = random_generator_sized(rng, base_n, k);
    let mut copies = vec![1usize; base_n];
    let mut total = base_n;
    while total < max_states && rng.random_bool(0.7) {
        copies[rng.random_range(0..base_n)] += 1;
        total += 1;
    }
    let mut first = vec![0; base_n];
    for c in 1..base_n {
        first[c] = first[c - 1] + copies[c - 1];
    }
    let mut entries = Vec::new();
    let mut prev_row: Option<Vec<(usize, usize, Rat)>> = None;
    for c in 0..base_n {
        for i in 0..copies[c] {
            let x = first[c] + i;
            if i > 0 && rng.random_bool(0.3) {
                // exact duplicate of the previous copy's row
                for (y, s, p) in prev_row.clone().unwrap() {
                    entries.push((x, y, s, p));
                }
                continue;
            }
            let mut row = Vec::new();
            for (&(d, s), p) in base.row(c) {
                let split = random_simplex(rng, copies[d]);
                for (j, share) in split.into_iter().enumerate() {
                    row.push((first[d] + j, s, p * share));
                }
            }
            for (y, s, p) in &row {
                entries.push((x, *y, *s, p.clone()));
            }
            prev_row = Some(row);
        }
    }
    let gen = Generator::new(names("q", total), symbols(k), entries).unwrap();
    permute_states(rng, &gen)
}

/// Relabels states by a random permutation so block structure is not contiguous.
pub fn permute_states(rng: &mut ChaCha8Rng, gen: &Generator) -> Generator {
    let n = gen.num_states();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let entries = gen
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(x, row)| row.iter().map(move |(&(y, s), p)| (x, y, s, p.clone())))
        .map(|(x, y, s, p)| (perm[x], perm[y], s, p))
        .collect::<Vec<_>>();
    Generator::new(names("q", n), gen.alphabet().to_vec(), entries).unwrap()
}

/// Mix of plain random and lumpable generators.
pub fn random_generator(rng: &mut ChaCha8Rng, max_states: usize, max_symbols: usize) -> Generator {
    let k = rng.random_range(1..=max_symbols);
    if rng.random_bool(0.6) {
        random_lumpable(rng, max_states, k)
    } else {
        let n = rng.random_range(1..=max_states);
        random_generator_sized(rng, n, k)
    }
}

pub fn random_deterministic(rng: &mut ChaCha8Rng, max_states: usize, max_symbols: usize) -> DeterministicGenerator {
    let n = rng.random_range(1..=max_states);
    let k = rng.random_range(1..=max_symbols);
    let next = (0..n).map(|_| rng.random_range(0..n)).collect();
    let label = (0..n).map(|_| rng.random_range(0..k)).collect();
    DeterministicGenerator::new(names("d", n), symbols(k), next, label).unwrap()
}

/// Dense `T[x][y][s]`.
pub fn dense(gen: &Generator) -> Vec<Vec<Vec<Rat>>> {
    let (n, k) = (gen.num_states(), gen.num_symbols());
    let mut t = vec![vec![vec![Rat::zero(); k]; n]; n];
    for (x, row) in gen.rows().iter().enumerate() {
        for (&(y, s), p) in row {
            t[x][y][s] += p;
        }
    }
    t
}

/// Sum over every state path `x_0 .. x_n` of `mu(x_0) Π T(x_{i-1}, (x_i, w_i))`.
pub fn path_sum_probability(gen: &Generator, mu: &Distribution, w: &[usize]) -> Rat {
    let t = dense(gen);
    let n = gen.num_states();
    fn go(t: &[Vec<Vec<Rat>>], n: usize, x: usize, w: &[usize], acc: Rat) -> Rat {
        if acc.is_zero() {
            return acc;
        }
        match w.split_first() {
            None => acc,
            Some((&s, rest)) => (0..n).map(|y| go(t, n, y, rest, &acc * &t[x][y][s])).sum(),
        }
    }
    (0..n).map(|x| go(&t, n, x, w, mu.weights()[x].clone())).sum()
}

/// Forward recursion with dense matrices, one word at a time.
pub fn dense_word_probability(t: &[Vec<Vec<Rat>>], mu: &[Rat], w: &[usize]) -> Rat {
    let n = mu.len();
    let mut v = mu.to_vec();
    for &s in w {
        let mut next = vec![Rat::zero(); n];
        for x in 0..n {
            if v[x].is_zero() {
                continue;
            }
            for y in 0..n {
                next[y] += &v[x] * &t[x][y][s];
            }
        }
        v = next;
    }
    v.into_iter().sum()
}

/// All words of length exactly `len` over `k` symbols, lexicographic.
pub fn words_of_length(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

/// Words of length `0..=max_len` in length-lexicographic order.
pub fn all_words(k: usize, max_len: usize) -> Vec<Vec<usize>> {
    (0..=max_len).flat_map(|l| words_of_length(k, l)).collect()
}

/// Exhaustive comparison of two processes on every word up to `max_len`
/// (symbols matched by index), level by level with dense forward vectors.
/// Returns the first differing word in length-lexicographic order.
pub fn exhaustive_difference(
    g1: &Generator,
    mu1: &Distribution,
    g2: &Generator,
    mu2: &Distribution,
    max_len: usize,
) -> Option<Vec<usize>> {
    let (t1, t2) = (dense(g1), dense(g2));
    let k = g1.num_symbols();
    let step = |t: &[Vec<Vec<Rat>>], v: &[Rat], s: usize| -> Vec<Rat> {
        let n = v.len();
        let mut next = vec![Rat::zero(); n];
        for x in 0..n {
            if v[x].is_zero() {
                continue;
            }
            for y in 0..n {
                next[y] += &v[x] * &t[x][y][s];
            }
        }
        next
    };
    let total = |v: &[Rat]| -> Rat { v.iter().sum() };
    let mut level = vec![(Vec::new(), mu1.weights().to_vec(), mu2.weights().to_vec())];
    for len in 0..=max_len {
        for (w, a, b) in &level {
            if total(a) != total(b) {
                return Some(w.clone());
            }
        }
        if len == max_len {
            break;
        }
        level = level
            .iter()
            .flat_map(|(w, a, b)| {
                (0..k).map(|s| {
                    let mut ext = w.clone();
                    ext.push(s);
                    (ext, step(&t1, a, s), step(&t2, b, s))
                })
            })
            .collect();
    }
    None
}

/// Every set partition of `0..n`, as block-id vectors (restricted growth strings).
pub fn all_partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut ids = vec![0usize; n];
    fn rec(i: usize, max: usize, ids: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == ids.len() {
            out.push(ids.clone());
            return;
        }
        for b in 0..=max + 1 {
            ids[i] = b;
            rec(i + 1, max.max(b), ids, out);
        }
    }
    if n == 0 {
        return vec![Vec::new()];
    }
    rec(1, 0, &mut ids, &mut out);
    out
}

/// For every block `A` and symbol `s`, `x ↦ Σ_{y∈A} T(x,(y,s))` is constant
/// on each block.
pub fn oracle_is_stable(t: &[Vec<Vec<Rat>>], ids: &[usize]) -> bool {
    let n = ids.len();
    let k = if n == 0 { 0 } else { t[0][0].len() };
    let nb = ids.iter().max().map_or(0, |m| m + 1);
    let mass =
        |x: usize, b: usize, s: usize| -> Rat { (0..n).filter(|&y| ids[y] == b).map(|y| t[x][y][s].clone()).sum() };
    for x in 0..n {
        for z in x + 1..n {
            if ids[x] != ids[z] {
                continue;
            }
            for b in 0..nb {
                for s in 0..k {
                    if mass(x, b, s) != mass(z, b, s) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Coarsest stable partition by enumerating every partition of the states.
/// Asserts that the coarsest is unique and equals the finest common
/// coarsening of all stable partitions.
pub fn coarsest_partition_oracle(gen: &Generator) -> Partition {
    let n = gen.num_states();
    assert!(n <= 8, "oracle enumerates Bell(n) partitions");
    let t = dense(gen);
    let stable: Vec<Partition> = all_partitions(n)
        .into_iter()
        .filter(|ids| oracle_is_stable(&t, ids))
        .map(|ids| Partition::from_block_ids(&ids))
        .collect();
    let fewest = stable.iter().map(|p| p.num_blocks()).min().expect("discrete partition is stable");
    let coarsest: Vec<&Partition> = stable.iter().filter(|p| p.num_blocks() == fewest).collect();
    assert_eq!(coarsest.len(), 1, "coarsest stable partition is not unique");
    let joined = stable.iter().skip(1).fold(stable[0].clone(), |acc, p| acc.join(p));
    assert_eq!(&joined, coarsest[0]);
    for p in &stable {
        assert!(p.refines(coarsest[0]));
    }
    coarsest[0].clone()
}

/// Partition of a deterministic generator's states by their label sequences
/// `g(f(x)), .., g(f^len(x))`.
pub fn label_sequence_partition(dg: &DeterministicGenerator, len: usize) -> Partition {
    let keys: Vec<Vec<usize>> = (0..dg.next().len())
        .map(|x| {
            let mut seq = Vec::with_capacity(len);
            let mut y = x;
            for _ in 0..len {
                y = dg.next()[y];
                seq.push(dg.label()[y]);
            }
            seq
        })
        .collect();
    Partition::from_keys(&keys)
}

pub fn one() -> Rat {
    Rat::one()
}
