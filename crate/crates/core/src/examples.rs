//! Named generator fixtures.
//!
//! * [`complete_randomness`]: i.i.d. outputs where the next state is the
//!   emitted symbol, drawn from a fixed distribution.
//! * [`rational_rotation`]: the rotation of the circle by a rational
//!   fraction of a turn, observed through which half the point lies in,
//!   quotiented onto the finitely many arcs cut out by the rotated
//!   half-circle boundaries.
//! * [`markov_shift`]: the order-`k` Markov shift, a finite stand-in for the
//!   full shift generator on infinite sequences (which has no finite
//!   encoding and is not constructed).
//!
//! Irrational rotations are not representable: the reduced σ-algebra is then
//! the whole Borel algebra of the circle and there is no finite reduction.
//! [`parse_rotation`] rejects them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::generator::{from_deterministic, DeterministicGenerator, Distribution, Generator};
use crate::process::{format_word, WordIter};
use crate::rat::{frac_part, in_unit_interval, rat, Rat};

/// Fixture names accepted by [`catalog`]. Frozen.
pub const FIXTURE_NAMES: &[&str] =
    &["randomness-2", "rotation-p4", "rotation-p3", "golden-mean", "golden-mean-redundant", "parity-4"];

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// `T(x, (y, s)) = mu(y)` if `y = s`, else 0, independent of `x`. States and
/// symbols are both `outcomes`.
pub fn complete_randomness(outcomes: Vec<String>, mu: &Distribution) -> Result<Generator> {
    if mu.len() != outcomes.len() {
        return Err(Error::DistributionMismatch { expected: outcomes.len(), found: mu.len() });
    }
    let n = outcomes.len();
    let entries = (0..n).flat_map(|x| mu.weights().iter().enumerate().map(move |(y, p)| (x, y, y, p.clone())));
    Generator::new(outcomes.clone(), outcomes, entries)
}

/// A circle rotated by `q/p` of a turn and cut into arcs at the orbits of
/// the points `0` and `1/2`. Angles are exact fractions of a turn.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CircleModel {
    rotation: Rat,
    breakpoints: Vec<Rat>,
}

impl CircleModel {
    /// Rotation angle in `[0, 1)`.
    pub fn rotation(&self) -> &Rat {
        &self.rotation
    }

    /// Sorted distinct breakpoints in `[0, 1)`; the first is `0`.
    pub fn breakpoints(&self) -> &[Rat] {
        &self.breakpoints
    }

    pub fn num_arcs(&self) -> usize {
        self.breakpoints.len()
    }

    /// Half-open arc `[lo, hi)`; the last arc ends at `1`.
    pub fn arc(&self, i: usize) -> (Rat, Rat) {
        let hi = self.breakpoints.get(i + 1).cloned().unwrap_or_else(Rat::one);
        (self.breakpoints[i].clone(), hi)
    }

    pub fn arc_lengths(&self) -> Vec<Rat> {
        (0..self.num_arcs())
            .map(|i| {
                let (lo, hi) = self.arc(i);
                hi - lo
            })
            .collect()
    }

    /// Symbol index: 0 (`"1"`) on the upper half `[0, 1/2)`, 1 (`"2"`) on the lower.
    pub fn label(&self, i: usize) -> usize {
        usize::from(self.breakpoints[i] >= rat(1, 2))
    }

    /// Index of the arc that arc `i` is rotated onto.
    pub fn rotate_arc(&self, i: usize) -> Option<usize> {
        let lo = frac_part(&(&self.breakpoints[i] + &self.rotation));
        self.breakpoints.binary_search(&lo).ok()
    }

    /// Rotating every breakpoint permutes the breakpoint set.
    pub fn is_rotation_invariant(&self) -> bool {
        let mut rotated: Vec<Rat> = self.breakpoints.iter().map(|b| frac_part(&(b + &self.rotation))).collect();
        rotated.sort();
        rotated == self.breakpoints
    }

    /// Arc-length weights: the image of the uniform measure on the circle.
    pub fn arc_length_distribution(&self) -> Distribution {
        Distribution::new(self.arc_lengths()).expect("arc lengths sum to one full turn")
    }
}

/// Rotation by `q/p` of a turn (`p >= 1`, `gcd(q, p) = 1`) with its quotient
/// dynamics on arcs. Arcs are named `arc0, arc1, ..` by increasing left
/// endpoint; symbols are `"1"` and `"2"`.
pub fn rational_rotation(q: i64, p: i64) -> Result<(CircleModel, DeterministicGenerator)> {
    if p < 1 {
        return Err(Error::InvalidArgument(format!("rotation denominator must be positive, got {p}")));
    }
    if q.gcd(&p) != 1 {
        return Err(Error::InvalidArgument(format!("rotation {q}/{p} is not in lowest terms")));
    }
    let rotation = frac_part(&rat(q, p));
    let half = rat(1, 2);
    let mut breakpoints: Vec<Rat> = (0..p)
        .flat_map(|j| {
            let turn = &rotation * Rat::from_integer(BigInt::from(j));
            [frac_part(&turn), frac_part(&(turn + &half))]
        })
        .collect();
    breakpoints.sort();
    breakpoints.dedup();
    let model = CircleModel { rotation, breakpoints };

    let n = model.num_arcs();
    let next = (0..n).map(|i| model.rotate_arc(i).expect("breakpoint set is closed under the rotation")).collect();
    let label = (0..n).map(|i| model.label(i)).collect();
    let states = (0..n).map(|i| format!("arc{i}")).collect();
    let dg = DeterministicGenerator::new(states, strs(&["1", "2"]), next, label)?;
    Ok((model, dg))
}

/// Parses a rotation given as `q/p` or an integer, as a fraction of a turn,
/// normalized to lowest terms. Anything else, such as `sqrt2` or a decimal
/// approximation of an irrational angle, is rejected.
pub fn parse_rotation(text: &str) -> Result<(i64, i64)> {
    let reject = || {
        Error::IrrationalRotation(format!(
            "rotation `{text}` is not a rational fraction q/p of a turn. \
             Irrational rotations have no internal-event reduction: the smallest \
             sufficient σ-algebra is the Borel algebra of the circle, so no finite \
             reduced generator exists"
        ))
    };
    let (n, d) = match text.trim().split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let n: i64 = n.parse().map_err(|_| reject())?;
    let d: i64 = d.parse().map_err(|_| reject())?;
    if d == 0 {
        return Err(reject());
    }
    let r = rat(n, d);
    let q = r.numer().to_i64().ok_or_else(reject)?;
    let p = r.denom().to_i64().ok_or_else(reject)?;
    Ok((q, p))
}

/// Order-`k` Markov shift: states are the words of length `k` (in
/// lexicographic order), and from `w` the symbol `s` is emitted with
/// probability `cond(w, s)`, moving to `w` with its first symbol dropped and
/// `s` appended.
pub fn markov_shift<F>(k: usize, alphabet: Vec<String>, cond: F) -> Result<Generator>
where
    F: Fn(&[usize], usize) -> Rat,
{
    if k == 0 {
        return Err(Error::InvalidArgument("shift order must be at least 1".into()));
    }
    let m = alphabet.len();
    let words: Vec<Vec<usize>> = WordIter::new(m, k).filter(|w| w.len() == k).collect();
    let index = |w: &[usize]| w.iter().fold(0, |acc, &s| acc * m + s);
    let mut entries = Vec::new();
    for (x, w) in words.iter().enumerate() {
        let mut total = Rat::zero();
        for s in 0..m {
            let p = cond(w, s);
            if !in_unit_interval(&p) {
                return Err(Error::RowNotNormalized(format_word(&alphabet, w)));
            }
            total += &p;
            let mut next = w[1..].to_vec();
            next.push(s);
            entries.push((x, index(&next), s, p));
        }
        if !total.is_one() {
            return Err(Error::RowNotNormalized(format_word(&alphabet, w)));
        }
    }
    let states = words.iter().map(|w| format_word(&alphabet, w)).collect();
    Generator::new(states, alphabet, entries)
}

/// A named generator with the initial distribution recommended for it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub generator: Generator,
    pub initial: Distribution,
}

pub fn catalog(name: &str) -> Result<Fixture> {
    let fixture = match name {
        "randomness-2" => {
            let initial = Distribution::uniform(2)?;
            Fixture { generator: complete_randomness(strs(&["a", "b"]), &initial)?, initial }
        }
        "rotation-p4" => rotation_fixture(1, 4)?,
        "rotation-p3" => rotation_fixture(1, 3)?,
        "golden-mean" => {
            let generator = markov_shift(1, strs(&["0", "1"]), |w, s| match (w[0], s) {
                (0, _) => rat(1, 2),
                (_, 0) => Rat::one(),
                _ => Rat::zero(),
            })?;
            Fixture { generator, initial: Distribution::uniform(2)? }
        }
        "golden-mean-redundant" => {
            // golden mean with the "after a 1" state split into two identical copies
            let generator = Generator::from_named(
                &["0", "1", "1b"],
                &["0", "1"],
                [
                    ("0", "0", "0", rat(1, 2)),
                    ("0", "1", "1", rat(1, 4)),
                    ("0", "1b", "1", rat(1, 4)),
                    ("1", "0", "0", Rat::one()),
                    ("1b", "0", "0", Rat::one()),
                ],
            )?;
            Fixture { generator, initial: Distribution::uniform(3)? }
        }
        "parity-4" => {
            let dg = DeterministicGenerator::new(
                strs(&["0", "1", "2", "3"]),
                strs(&["0", "1"]),
                vec![1, 2, 3, 0],
                vec![0, 1, 0, 1],
            )?;
            Fixture { generator: from_deterministic(&dg), initial: Distribution::uniform(4)? }
        }
        other => return Err(Error::UnknownFixture(other.to_string())),
    };
    Ok(fixture)
}

/// Fixture for `rotation:q/p` specs as well as the named rotations.
pub fn rotation_fixture(q: i64, p: i64) -> Result<Fixture> {
    let (model, dg) = rational_rotation(q, p)?;
    Ok(Fixture { generator: from_deterministic(&dg), initial: model.arc_length_distribution() })
}

/// Resolves a fixture name or a `rotation:<q/p>` spec.
pub fn resolve(spec: &str) -> Result<Fixture> {
    match spec.strip_prefix("rotation:") {
        Some(angle) => {
            let (q, p) = parse_rotation(angle)?;
            rotation_fixture(q, p)
        }
        None => catalog(spec),
    }
}
