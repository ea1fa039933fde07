//! C interface to the simulator.
//!
//! Every function returns a [`GcgStatus`]. On failure a message is kept per
//! thread and can be fetched with [`gcg_last_error_message`]. Strings handed
//! out by the library must be released with [`gcg_string_free`]; handles with
//! their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gcgsim::categorial::parse_category_string;
use gcgsim::experiments::{
    emergence, learn_effect, pref_evolution, resolve_genome, EmergenceConfig, EmergenceMode, Format, LearnEffectConfig, PrefConfig, Report,
    WmlMode,
};
use gcgsim::language::{dump_language, generate_language, mean_wml, NamedLanguage};
use gcgsim::learner::{LearnerKind, SessionConfig};
use gcgsim::parser::{parse, ParseOutcome};
use gcgsim::psetting::{decode, GrammarConfig, PSettings};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidArgument = 3,
    /// The grammar could not be built or a language could not be generated.
    Grammar = 4,
    /// An experiment failed.
    Simulation = 5,
    /// A panic was caught at the boundary.
    Internal = 6,
}

/// A decoded grammar and the genome it came from.
pub struct GcgGrammar {
    genome: PSettings,
    grammar: GrammarConfig,
}

/// The result of one deterministic parse.
pub struct GcgParse {
    outcome: ParseOutcome,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcgLearnerKind {
    Default = 0,
    Unset = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcgWmlMode {
    Both = 0,
    Learn = 1,
    Parse = 2,
    None = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Fail(GcgStatus, String);

impl Fail {
    fn new(status: GcgStatus, e: impl std::fmt::Display) -> Self {
        Fail(status, e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GcgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GcgStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GcgStatus::Internal
        }
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(GcgStatus::NullPointer, "null string argument".into()));
    }
    CStr::from_ptr(p).to_str().map_err(|e| Fail::new(GcgStatus::InvalidUtf8, e))
}

unsafe fn out<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| Fail(GcgStatus::NullPointer, "null output pointer".into()))
}

unsafe fn handle<'a, T>(p: *const T) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| Fail(GcgStatus::NullPointer, "null handle".into()))
}

fn c_string(s: String) -> Result<*mut c_char, Fail> {
    CString::new(s).map(CString::into_raw).map_err(|e| Fail::new(GcgStatus::Internal, e))
}

fn language(name: &str) -> Result<NamedLanguage, Fail> {
    NamedLanguage::lookup(name).map_err(|e| Fail::new(GcgStatus::InvalidArgument, e))
}

/// Copy of the last error message on this thread, or null if the last call
/// succeeded. Free with [`gcg_string_free`].
#[no_mangle]
pub extern "C" fn gcg_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |m| m.clone().into_raw()))
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a grammar from a language name (with optional `-N`, `-Rc`, `-PP`,
/// `-Sc`, `-GWP`, `-COMP` suffixes), `mixed`, or genome text.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out_grammar` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_grammar_new(spec: *const c_char, out_grammar: *mut *mut GcgGrammar) -> GcgStatus {
    guard(|| {
        let spec = text(spec)?;
        let slot = out(out_grammar)?;
        let genome = if spec.contains('\n') { PSettings::from_text(spec) } else { resolve_genome(spec) }
            .map_err(|e| Fail::new(GcgStatus::InvalidArgument, e))?;
        let grammar = decode(&genome).map_err(|e| Fail::new(GcgStatus::Grammar, e))?;
        *slot = Box::into_raw(Box::new(GcgGrammar { genome, grammar }));
        Ok(())
    })
}

/// # Safety
/// `g` must be null or a handle from [`gcg_grammar_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcg_grammar_free(g: *mut GcgGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Genome text of the grammar.
///
/// # Safety
/// `g` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_grammar_genome(g: *const GcgGrammar, out_text: *mut *mut c_char) -> GcgStatus {
    guard(|| {
        let g = handle(g)?;
        *out(out_text)? = c_string(g.genome.to_text())?;
        Ok(())
    })
}

/// Sentence types the grammar generates, one category string per template.
///
/// # Safety
/// `g` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_grammar_dump(g: *const GcgGrammar, out_text: *mut *mut c_char) -> GcgStatus {
    guard(|| {
        let g = handle(g)?;
        let lang = generate_language(&g.grammar).map_err(|e| Fail::new(GcgStatus::Grammar, e))?;
        *out(out_text)? = c_string(dump_language(&lang))?;
        Ok(())
    })
}

/// Mean total load over the grammar's own sentence types.
///
/// # Safety
/// `g` must be a live handle and `out_mean` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_grammar_mean_wml(g: *const GcgGrammar, out_mean: *mut f64) -> GcgStatus {
    guard(|| {
        let g = handle(g)?;
        let lang = generate_language(&g.grammar).map_err(|e| Fail::new(GcgStatus::Grammar, e))?;
        *out(out_mean)? = mean_wml(&lang, &g.grammar).map_err(|e| Fail::new(GcgStatus::Grammar, e))?;
        Ok(())
    })
}

/// Parses a category string such as `NP (S\NP)/NP NP` with the grammar's
/// rules. A failed parse still yields a handle; check
/// [`gcg_parse_success`].
///
/// # Safety
/// `g` must be a live handle, `categories` a NUL-terminated string and
/// `out_parse` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse(g: *const GcgGrammar, categories: *const c_char, out_parse: *mut *mut GcgParse) -> GcgStatus {
    guard(|| {
        let g = handle(g)?;
        let cats = parse_category_string(text(categories)?).map_err(|e| Fail::new(GcgStatus::InvalidArgument, e))?;
        let slot = out(out_parse)?;
        *slot = Box::into_raw(Box::new(GcgParse { outcome: parse(&cats, &g.grammar.rules) }));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from [`gcg_parse`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_free(p: *mut GcgParse) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_success(p: *const GcgParse) -> bool {
    p.as_ref().is_some_and(|p| p.outcome.success)
}

/// # Safety
/// `p` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_total_wml(p: *const GcgParse) -> u32 {
    p.as_ref().map_or(0, |p| p.outcome.total_wml)
}

/// Copies up to `cap` entries of the per-step load record into `buf` and
/// stores the full record length in `out_len`.
///
/// # Safety
/// `p` must be a live handle, `buf` valid for `cap` writes (or null when
/// `cap` is 0) and `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_wml_record(p: *const GcgParse, buf: *mut u32, cap: usize, out_len: *mut usize) -> GcgStatus {
    guard(|| {
        let p = handle(p)?;
        let rec = &p.outcome.wml_record;
        *out(out_len)? = rec.len();
        let n = rec.len().min(cap);
        if n > 0 {
            if buf.is_null() {
                return Err(Fail(GcgStatus::NullPointer, "null record buffer".into()));
            }
            ptr::copy_nonoverlapping(rec.as_ptr(), buf, n);
        }
        Ok(())
    })
}

/// Logical form of a successful parse, or null after a failed one.
///
/// # Safety
/// `p` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_lf(p: *const GcgParse, out_text: *mut *mut c_char) -> GcgStatus {
    guard(|| {
        let p = handle(p)?;
        *out(out_text)? = match &p.outcome.lf {
            Some(lf) => c_string(lf.to_string())?,
            None => ptr::null_mut(),
        };
        Ok(())
    })
}

/// Step-by-step stack and load table.
///
/// # Safety
/// `p` must be a live handle and `out_text` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_parse_table(p: *const GcgParse, out_text: *mut *mut c_char) -> GcgStatus {
    guard(|| {
        let p = handle(p)?;
        *out(out_text)? = c_string(p.outcome.render_table())?;
        Ok(())
    })
}

/// Learning-effect trials; writes the JSON-lines report.
///
/// # Safety
/// `language` must be a NUL-terminated string and `out_jsonl` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_learn_effect(
    language: *const c_char,
    kind: GcgLearnerKind,
    trials: usize,
    seed: u64,
    out_jsonl: *mut *mut c_char,
) -> GcgStatus {
    guard(|| {
        let language = self::language(text(language)?)?;
        let kind = match kind {
            GcgLearnerKind::Default => LearnerKind::Default,
            GcgLearnerKind::Unset => LearnerKind::Unset,
        };
        let slot = out(out_jsonl)?;
        let cfg = LearnEffectConfig { language, kind, trials, seed, session: SessionConfig::default() };
        let report = learn_effect(&cfg).map_err(|e| Fail::new(GcgStatus::Simulation, e))?;
        *slot = c_string(report.render(Format::Jsonl))?;
        Ok(())
    })
}

/// Default-against-unset preference runs; writes the JSON-lines report.
/// Zero `cycles` or `interactions` keep the desk-scale defaults.
///
/// # Safety
/// `language` must be a NUL-terminated string and `out_jsonl` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_pref_evolution(
    language: *const c_char,
    wml: GcgWmlMode,
    runs: usize,
    cycles: usize,
    interactions: usize,
    seed: u64,
    out_jsonl: *mut *mut c_char,
) -> GcgStatus {
    guard(|| {
        let language = self::language(text(language)?)?;
        let wml = match wml {
            GcgWmlMode::Both => WmlMode::Both,
            GcgWmlMode::Learn => WmlMode::Learn,
            GcgWmlMode::Parse => WmlMode::Parse,
            GcgWmlMode::None => WmlMode::None,
        };
        let slot = out(out_jsonl)?;
        let mut cfg = PrefConfig::new(language, wml, runs, seed);
        if cycles > 0 {
            cfg.sim.cycles = cycles;
        }
        if interactions > 0 {
            cfg.sim.interactions_per_cycle = interactions;
        }
        let report = pref_evolution(&cfg).map_err(|e| Fail::new(GcgStatus::Simulation, e))?;
        *slot = c_string(report.render(Format::Jsonl))?;
        Ok(())
    })
}

/// Emergence runs from random genomes, optionally seeded with two
/// verb-second SOV speakers; writes the JSON-lines report. Zero `cycles` or
/// `interactions` keep the defaults.
///
/// # Safety
/// `out_jsonl` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gcg_emergence(
    seeded: bool,
    runs: usize,
    cycles: usize,
    interactions: usize,
    seed: u64,
    out_jsonl: *mut *mut c_char,
) -> GcgStatus {
    guard(|| {
        let slot = out(out_jsonl)?;
        let mode = if seeded { EmergenceMode::SeededGerman } else { EmergenceMode::Random };
        let mut cfg = EmergenceConfig::new(mode, runs, seed);
        if cycles > 0 {
            cfg.sim.cycles = cycles;
        }
        if interactions > 0 {
            cfg.sim.interactions_per_cycle = interactions;
        }
        let report = emergence(&cfg).map_err(|e| Fail::new(GcgStatus::Simulation, e))?;
        *slot = c_string(report.render(Format::Jsonl))?;
        Ok(())
    })
}
