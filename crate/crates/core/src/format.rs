//! On-disk formats.
//!
//! Generators are stored as JSON (`schema/generator.schema.json`):
//!
//! ```json
//! {
//!   "format_version": 1,
//!   "states": ["a", "b"],
//!   "alphabet": ["a", "b"],
//!   "transitions": [ { "from": "a", "to": "a", "symbol": "a", "prob": "1/2" } ],
//!   "initial": { "a": "1/2", "b": "1/2" }
//! }
//! ```
//!
//! Probabilities are strings, `n/d` or decimal; decimals are converted
//! exactly unless a tolerance is given, in which case they snap to the
//! simplest fraction within it. Output always uses `n/d`. A reduction result
//! is a generator file with an extra `quotient` object mapping original
//! state names to class names. DOT output is write-only.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{Distribution, Generator};
use crate::morphism::Morphism;
use crate::rat::{format_rat, parse_rat, parse_rat_approx, Rat};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorFile {
    pub format_version: u32,
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub transitions: Vec<Transition>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<IndexMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<IndexMap<String, String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    pub from: String,
    pub to: String,
    pub symbol: String,
    pub prob: String,
}

/// How decimal probabilities are read.
#[derive(Clone, Debug, Default)]
pub struct ParseOptions {
    /// Snap decimals to the simplest fraction within this distance.
    pub decimal_tolerance: Option<Rat>,
}

impl ParseOptions {
    fn number(&self, text: &str) -> Result<Rat> {
        match &self.decimal_tolerance {
            Some(eps) => parse_rat_approx(text, eps),
            None => parse_rat(text),
        }
    }
}

/// A parsed generator file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Loaded {
    pub generator: Generator,
    pub initial: Option<Distribution>,
    pub quotient: Option<IndexMap<String, String>>,
}

impl Loaded {
    /// The file's initial distribution, or uniform if it has none.
    pub fn initial_or_uniform(&self) -> Result<Distribution> {
        match &self.initial {
            Some(d) => Ok(d.clone()),
            None => Distribution::uniform(self.generator.num_states()),
        }
    }
}

pub fn parse_generator(text: &str, opts: &ParseOptions) -> Result<Loaded> {
    let file: GeneratorFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    from_file(&file, opts)
}

pub fn from_file(file: &GeneratorFile, opts: &ParseOptions) -> Result<Loaded> {
    if file.format_version != FORMAT_VERSION {
        return Err(Error::Parse(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            file.format_version
        )));
    }
    let states: Vec<&str> = file.states.iter().map(String::as_str).collect();
    let alphabet: Vec<&str> = file.alphabet.iter().map(String::as_str).collect();
    let entries = file
        .transitions
        .iter()
        .map(|t| Ok((t.from.as_str(), t.to.as_str(), t.symbol.as_str(), opts.number(&t.prob)?)))
        .collect::<Result<Vec<_>>>()?;
    let generator = Generator::from_named(&states, &alphabet, entries)?;
    let initial = match &file.initial {
        Some(weights) => {
            let weights = weights.iter().map(|(k, v)| Ok((k.as_str(), opts.number(v)?))).collect::<Result<Vec<_>>>()?;
            Some(Distribution::from_named(&generator, weights)?)
        }
        None => None,
    };
    Ok(Loaded { generator, initial, quotient: file.quotient.clone() })
}

/// Canonical file: transitions ordered by source state, then target state,
/// then symbol, in input order; zero-weight initial states omitted.
pub fn to_file(gen: &Generator, initial: Option<&Distribution>) -> GeneratorFile {
    let transitions = gen
        .rows()
        .iter()
        .enumerate()
        .flat_map(|(x, row)| {
            row.iter().map(move |(&(y, s), p)| Transition {
                from: gen.states()[x].clone(),
                to: gen.states()[y].clone(),
                symbol: gen.alphabet()[s].clone(),
                prob: format_rat(p),
            })
        })
        .collect();
    let initial = initial.map(|d| {
        d.weights()
            .iter()
            .enumerate()
            .filter(|(_, w)| !num_traits::Zero::is_zero(*w))
            .map(|(x, w)| (gen.states()[x].clone(), format_rat(w)))
            .collect()
    });
    GeneratorFile {
        format_version: FORMAT_VERSION,
        states: gen.states().to_vec(),
        alphabet: gen.alphabet().to_vec(),
        transitions,
        initial,
        quotient: None,
    }
}

/// Pretty-printed JSON with a trailing newline.
pub fn to_json(file: &GeneratorFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("generator files always serialize");
    s.push('\n');
    s
}

pub fn generator_to_json(gen: &Generator, initial: Option<&Distribution>) -> String {
    to_json(&to_file(gen, initial))
}

/// Resolves a command-line initial distribution spec against `gen`:
///
/// * `uniform`
/// * `state:<name>` (point mass)
/// * `<name>=<p>,<name>=<p>,..` (unlisted states get zero)
pub fn parse_initial(gen: &Generator, spec: &str, opts: &ParseOptions) -> Result<Distribution> {
    let spec = spec.trim();
    if spec == "uniform" {
        return Distribution::uniform(gen.num_states());
    }
    if let Some(name) = spec.strip_prefix("state:") {
        return crate::generator::delta(gen, name.trim());
    }
    let mut weights = Vec::new();
    for part in spec.split(',') {
        let (name, p) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("initial weight `{part}` is not of the form state=p")))?;
        weights.push((name.trim(), opts.number(p)?));
    }
    Distribution::from_named(gen, weights)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismFile {
    pub f: BTreeMap<String, String>,
    pub g: BTreeMap<String, String>,
}

pub fn parse_morphism(text: &str, source: Generator, target: Generator) -> Result<Morphism> {
    let file: MorphismFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Morphism::from_names(source, target, &file.f, &file.g)
}

pub fn morphism_to_json(m: &Morphism) -> String {
    let (src, tgt) = (m.source(), m.target());
    let file = MorphismFile {
        f: src.states().iter().zip(m.state_map()).map(|(x, &y)| (x.clone(), tgt.states()[y].clone())).collect(),
        g: src.alphabet().iter().zip(m.symbol_map()).map(|(s, &t)| (s.clone(), tgt.alphabet()[t].clone())).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("morphism files always serialize");
    s.push('\n');
    s
}

fn dot_id(name: &str) -> String {
    format!("\"{}\"", name.replace('\\', "\\\\").replace('"', "\\\""))
}

/// State-transition graph with edges labelled `s : p/q`.
pub fn to_dot(gen: &Generator) -> String {
    let mut out = String::from("digraph generator {\n  rankdir=LR;\n");
    for x in gen.states() {
        let _ = writeln!(out, "  {};", dot_id(x));
    }
    for (x, row) in gen.rows().iter().enumerate() {
        for (&(y, s), p) in row {
            let label = format!("{} : {}", gen.alphabet()[s], format_rat(p));
            let _ = writeln!(
                out,
                "  {} -> {} [label={}];",
                dot_id(&gen.states()[x]),
                dot_id(&gen.states()[y]),
                dot_id(&label)
            );
        }
    }
    out.push_str("}\n");
    out
}
