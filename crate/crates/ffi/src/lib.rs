//! C ABI for `genred`.
//!
//! Generators and reductions cross the boundary as opaque handles that the
//! caller frees with the matching `*_free` function. Every fallible call
//! returns a [`GenredStatus`]; on failure a message for the calling thread is
//! available from [`genred_last_error_message`]. Strings returned through out
//! parameters are owned by the caller and released with
//! [`genred_string_free`]. Probabilities are exchanged as `"n/d"` strings.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use genred::cli::{reduce_with, Mode};
use genred::format::{self, ParseOptions};
use genred::process::{format_word, parse_word, word_distribution_with_limit, DEFAULT_SIZE_LIMIT};
use genred::rat::{default_tolerance, format_rat, parse_rat};
use genred::reduce::ReductionResult;
use genred::{examples, Distribution, Error, Generator, Partition};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenredStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Malformed JSON, number, word or initial-distribution spec.
    Parse = 3,
    /// The generator violates the kernel conditions.
    InvalidGenerator = 4,
    /// Unknown state, symbol or fixture, or mismatched sizes.
    InvalidArgument = 5,
    /// The requested word table exceeds the size limit.
    SizeLimit = 6,
    /// The caller's buffer is too short; the required length was written.
    BufferTooSmall = 7,
    /// Irrational or malformed rotation.
    Unsupported = 8,
    /// A Rust panic was caught at the boundary.
    Internal = 99,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenredMode {
    Event = 0,
    State = 1,
    Full = 2,
}

/// A generator together with the initial distribution it was loaded with.
pub struct GenredGenerator {
    generator: Generator,
    initial: Option<Distribution>,
}

pub struct GenredReduction {
    original: Generator,
    event: Option<Partition>,
    result: ReductionResult,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(GenredStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Parse(_) => GenredStatus::Parse,
            Error::InvalidGenerator(_) | Error::RowNotNormalized(_) | Error::InvalidDistribution(_) => {
                GenredStatus::InvalidGenerator
            }
            Error::SizeLimit { .. } => GenredStatus::SizeLimit,
            Error::IrrationalRotation(_) => GenredStatus::Unsupported,
            _ => GenredStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(GenredStatus::NullArgument, format!("`{what}` is null"))
}

/// Runs `body`, converting errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Failure>) -> GenredStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => GenredStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GenredStatus::Internal
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(GenredStatus::InvalidUtf8, format!("`{what}` is not UTF-8")))
}

unsafe fn opt_str_arg<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        str_arg(p, what).map(Some)
    }
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    let c = CString::new(s).map_err(|_| Failure(GenredStatus::Internal, "string contains a nul byte".into()))?;
    put(out, c.into_raw(), "out")
}

unsafe fn put_indices(buf: *mut usize, len: usize, out_len: *mut usize, ids: &[usize]) -> Result<(), Failure> {
    put(out_len, ids.len(), "out_len")?;
    if len < ids.len() {
        return Err(Failure(GenredStatus::BufferTooSmall, format!("buffer holds {len} entries, {} needed", ids.len())));
    }
    if buf.is_null() && !ids.is_empty() {
        return Err(null("buf"));
    }
    if !ids.is_empty() {
        ptr::copy_nonoverlapping(ids.as_ptr(), buf, ids.len());
    }
    Ok(())
}

fn initial(gen: &GenredGenerator, spec: Option<&str>) -> Result<Distribution, Failure> {
    let dist = match spec {
        Some(s) => format::parse_initial(&gen.generator, s, &ParseOptions::default())?,
        None => match &gen.initial {
            Some(d) => d.clone(),
            None => Distribution::uniform(gen.generator.num_states())?,
        },
    };
    Ok(dist)
}

fn require_valid(gen: &Generator) -> Result<(), Failure> {
    gen.ensure_valid().map_err(Failure::from)
}

/// Message for the last failed call on this thread, or null if none. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn genred_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn genred_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses a generator file. `decimal_tolerance` may be null (decimals are
/// taken exactly) or a number such as `"1/1000000000"`; an empty string
/// selects the default tolerance. The generator is not validated.
///
/// # Safety
/// String arguments must be null or nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_from_json(
    json: *const c_char,
    decimal_tolerance: *const c_char,
    out: *mut *mut GenredGenerator,
) -> GenredStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let opts = match opt_str_arg(decimal_tolerance, "decimal_tolerance")? {
            None => ParseOptions::default(),
            Some("") => ParseOptions { decimal_tolerance: Some(default_tolerance()) },
            Some(eps) => ParseOptions { decimal_tolerance: Some(parse_rat(eps)?) },
        };
        let loaded = format::parse_generator(text, &opts)?;
        let gen = GenredGenerator { generator: loaded.generator, initial: loaded.initial };
        put(out, Box::into_raw(Box::new(gen)), "out")
    })
}

/// A built-in fixture by name, or `rotation:q/p`.
///
/// # Safety
/// `name` must be nul-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_example(name: *const c_char, out: *mut *mut GenredGenerator) -> GenredStatus {
    guard(|| {
        let f = examples::resolve(str_arg(name, "name")?)?;
        let gen = GenredGenerator { generator: f.generator, initial: Some(f.initial) };
        put(out, Box::into_raw(Box::new(gen)), "out")
    })
}

/// # Safety
/// `gen` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_to_json(gen: *const GenredGenerator, out: *mut *mut c_char) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        put_string(out, format::generator_to_json(&g.generator, g.initial.as_ref()))
    })
}

/// # Safety
/// `gen` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_free(gen: *mut GenredGenerator) {
    if !gen.is_null() {
        drop(Box::from_raw(gen));
    }
}

/// Number of states, or 0 for a null handle.
///
/// # Safety
/// `gen` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_num_states(gen: *const GenredGenerator) -> usize {
    gen.as_ref().map_or(0, |g| g.generator.num_states())
}

/// Number of symbols, or 0 for a null handle.
///
/// # Safety
/// `gen` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_num_symbols(gen: *const GenredGenerator) -> usize {
    gen.as_ref().map_or(0, |g| g.generator.num_symbols())
}

/// Writes whether the generator is valid. If `report` is not null it
/// receives the violation list, one per line (empty when valid).
///
/// # Safety
/// `gen` must be a live handle; `valid` must be writable; `report` may be null.
#[no_mangle]
pub unsafe extern "C" fn genred_generator_validate(
    gen: *const GenredGenerator,
    valid: *mut bool,
    report: *mut *mut c_char,
) -> GenredStatus {
    guard(|| {
        let r = handle(gen, "gen")?.generator.validate();
        put(valid, r.is_valid(), "valid")?;
        if !report.is_null() {
            let lines: Vec<String> = r.violations.iter().map(|v| v.to_string()).collect();
            put_string(report, lines.join("\n"))?;
        }
        Ok(())
    })
}

/// Reduces a valid generator.
///
/// # Safety
/// `gen` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_reduce(
    gen: *const GenredGenerator,
    mode: GenredMode,
    out: *mut *mut GenredReduction,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        require_valid(&g.generator)?;
        let mode = match mode {
            GenredMode::Event => Mode::Event,
            GenredMode::State => Mode::State,
            GenredMode::Full => Mode::Full,
        };
        let (event, result) = reduce_with(&g.generator, mode);
        let red = GenredReduction { original: g.generator.clone(), event, result };
        put(out, Box::into_raw(Box::new(red)), "out")
    })
}

/// # Safety
/// `red` must be null or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn genred_reduction_free(red: *mut GenredReduction) {
    if !red.is_null() {
        drop(Box::from_raw(red));
    }
}

/// A new generator handle holding the reduced generator.
///
/// # Safety
/// `red` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_reduction_generator(
    red: *const GenredReduction,
    out: *mut *mut GenredGenerator,
) -> GenredStatus {
    guard(|| {
        let r = handle(red, "red")?;
        let gen = GenredGenerator { generator: r.result.reduced.clone(), initial: None };
        put(out, Box::into_raw(Box::new(gen)), "out")
    })
}

/// Reduced state index of every original state. `out_len` always receives
/// the number of original states.
///
/// # Safety
/// `red` must be a live handle; `buf` must hold `len` entries; `out_len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_reduction_quotient_map(
    red: *const GenredReduction,
    buf: *mut usize,
    len: usize,
    out_len: *mut usize,
) -> GenredStatus {
    guard(|| put_indices(buf, len, out_len, handle(red, "red")?.result.quotient_map()))
}

/// Plain-text reduction report: partitions and the quotient map by name.
///
/// # Safety
/// `red` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn genred_reduction_report(red: *const GenredReduction, out: *mut *mut c_char) -> GenredStatus {
    guard(|| {
        let r = handle(red, "red")?;
        let names = r.original.states();
        let mut text = String::new();
        if let Some(p) = &r.event {
            text += &format!("event partition: {}\n", p.display_with(names));
        }
        text += &format!("classes: {}\n", r.result.classes.display_with(names));
        for (x, c) in r.result.quotient_names(&r.original) {
            text += &format!("{x} -> {c}\n");
        }
        put_string(out, text)
    })
}

/// Probability of `word` as `"n/d"`. `initial` is null (the file's initial
/// distribution, else uniform), `"uniform"`, `"state:<name>"` or
/// `"<name>=<p>,.."`. Words are symbol names, concatenated or comma-separated.
///
/// # Safety
/// `gen` must be a live handle; strings nul-terminated or null where allowed; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn genred_word_probability(
    gen: *const GenredGenerator,
    initial_spec: *const c_char,
    word: *const c_char,
    out: *mut *mut c_char,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        let mu = initial(g, opt_str_arg(initial_spec, "initial_spec")?)?;
        let w = parse_word(g.generator.alphabet(), str_arg(word, "word")?)?;
        let p = genred::word_probability(&g.generator, &mu, &w)?;
        put_string(out, format_rat(&p))
    })
}

/// Word table up to `max_len`, one `<word> <n/d>` line per word in
/// length-lexicographic order. `size_limit` 0 selects the default cap.
///
/// # Safety
/// As for [`genred_word_probability`].
#[no_mangle]
pub unsafe extern "C" fn genred_word_table(
    gen: *const GenredGenerator,
    initial_spec: *const c_char,
    max_len: usize,
    size_limit: u64,
    out: *mut *mut c_char,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        require_valid(&g.generator)?;
        let mu = initial(g, opt_str_arg(initial_spec, "initial_spec")?)?;
        let limit = if size_limit == 0 { DEFAULT_SIZE_LIMIT } else { u128::from(size_limit) };
        let table = word_distribution_with_limit(&g.generator, &mu, max_len, limit)?;
        put_string(out, table.to_string())
    })
}

/// Decides whether two generators produce the same process. When they do
/// not and `witness` is not null, it receives a shortest distinguishing word.
///
/// # Safety
/// Handles must be live; `equivalent` writable; specs and `witness` may be null.
#[no_mangle]
pub unsafe extern "C" fn genred_equivalent(
    a: *const GenredGenerator,
    initial_a: *const c_char,
    b: *const GenredGenerator,
    initial_b: *const c_char,
    equivalent: *mut bool,
    witness: *mut *mut c_char,
) -> GenredStatus {
    guard(|| {
        let (ga, gb) = (handle(a, "a")?, handle(b, "b")?);
        require_valid(&ga.generator)?;
        require_valid(&gb.generator)?;
        let mu_a = initial(ga, opt_str_arg(initial_a, "initial_a")?)?;
        let mu_b = initial(gb, opt_str_arg(initial_b, "initial_b")?)?;
        let w = genred::distinguishing_word(&ga.generator, &mu_a, &gb.generator, &mu_b)?;
        put(equivalent, w.is_none(), "equivalent")?;
        if let (Some(w), false) = (w, witness.is_null()) {
            put_string(witness, format_word(ga.generator.alphabet(), &w))?;
        }
        Ok(())
    })
}

/// Causal-state block index of every state.
///
/// # Safety
/// `gen` must be a live handle; `buf` must hold `len` entries; `out_len` writable.
#[no_mangle]
pub unsafe extern "C" fn genred_causal_partition(
    gen: *const GenredGenerator,
    buf: *mut usize,
    len: usize,
    out_len: *mut usize,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        require_valid(&g.generator)?;
        put_indices(buf, len, out_len, genred::causal_state_partition(&g.generator).block_ids())
    })
}

/// Block index of every state in the coarsest stable partition.
///
/// # Safety
/// As for [`genred_causal_partition`].
#[no_mangle]
pub unsafe extern "C" fn genred_event_partition(
    gen: *const GenredGenerator,
    buf: *mut usize,
    len: usize,
    out_len: *mut usize,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        require_valid(&g.generator)?;
        put_indices(buf, len, out_len, genred::event_reduction(&g.generator).partition().block_ids())
    })
}

/// A reproducible sample word of length `n`.
///
/// # Safety
/// As for [`genred_word_probability`].
#[no_mangle]
pub unsafe extern "C" fn genred_sample(
    gen: *const GenredGenerator,
    initial_spec: *const c_char,
    n: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> GenredStatus {
    guard(|| {
        let g = handle(gen, "gen")?;
        require_valid(&g.generator)?;
        let mu = initial(g, opt_str_arg(initial_spec, "initial_spec")?)?;
        let s = genred::sample(&g.generator, &mu, n, seed)?;
        let text = if s.word.is_empty() { String::new() } else { format_word(g.generator.alphabet(), &s.word) };
        put_string(out, text)
    })
}
