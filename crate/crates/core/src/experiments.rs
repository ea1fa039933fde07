//! Seeded experiment drivers behind the command-line tool.
//!
//! Every trial or run owns a ChaCha stream derived from the master seed and
//! its index, so results do not depend on thread scheduling.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{classify_preference, CycleRecord, LanguageCount, Population, Preference, SimConfig, StatusShares};
use crate::language::{language_of, mean_wml, NamedLanguage};
use crate::learner::{run_session, LearnerKind, LearnerState, SessionConfig, TraceRecord};
use crate::psetting::{decode, PSetting, PSettings, ParamId};

/// Generator for trial `index` under master seed `seed`.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Reads a genome from a file path, or builds one from a language name with
/// optional `-X` suffixes that switch off a category (`N`, `Rc`, `PP`,
/// `Sc`) or rule (`GWP`, `COMP`). `mixed` names a grammar with Japanese
/// clause order and English phrase order.
pub fn resolve_genome(spec: &str) -> Result<PSettings> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{spec}: {e}")))?;
        return PSettings::from_text(&text);
    }
    let mut parts = spec.split('-');
    let base = parts.next().unwrap_or_default();
    let mut ps = if base.eq_ignore_ascii_case("mixed") { mixed_genome() } else { NamedLanguage::lookup(base)?.genome() };
    for suffix in parts {
        let id = match suffix.to_ascii_uppercase().as_str() {
            "N" => ParamId::N,
            "RC" => ParamId::Rc,
            "PP" => ParamId::Pp,
            "SC" => ParamId::Sc,
            "GWP" | "PERM" => ParamId::Perm,
            "COMP" => ParamId::Comp,
            _ => return Err(Error::UnknownLanguage(spec.to_string())),
        };
        ps.set(id, PSetting::absolute(false));
    }
    Ok(ps)
}

/// Japanese clauses with English phrases.
pub fn mixed_genome() -> PSettings {
    let mut ps = NamedLanguage::Japanese.genome();
    for id in [ParamId::Nom, ParamId::Mod, ParamId::Spec, ParamId::Relcl, ParamId::Adpos, ParamId::Compl] {
        ps.set(id, NamedLanguage::English.genome().get(id));
    }
    ps
}

/// Order statistic at fraction `q` of the sorted values, with `None`
/// (a trial that never converged) ranked above every number.
pub fn quantile(values: &[Option<usize>], q: f64) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let mut v: Vec<Option<usize>> = values.to_vec();
    v.sort_by_key(|x| x.unwrap_or(usize::MAX));
    let idx = ((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1;
    v[idx]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEffectConfig {
    pub language: NamedLanguage,
    pub kind: LearnerKind,
    pub trials: usize,
    pub seed: u64,
    pub session: SessionConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnTrial {
    pub trial: usize,
    /// Inputs consumed before convergence, `None` if the session ran out.
    pub inputs: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnSummary {
    pub median: Option<usize>,
    /// Inputs by which 99% of trials had converged.
    pub p99: Option<usize>,
    pub converged: usize,
    /// At least 99% of trials converged.
    pub meets_one_percent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnEffectReport {
    pub experiment: String,
    pub config: LearnEffectConfig,
    pub trials: Vec<LearnTrial>,
    pub summary: LearnSummary,
}

pub fn learn_effect(cfg: &LearnEffectConfig) -> Result<LearnEffectReport> {
    Ok(learn_effect_traced(cfg, false)?.0)
}

/// Like [`learn_effect`], also returning the per-trigger trace when asked.
pub fn learn_effect_traced(cfg: &LearnEffectConfig, trace: bool) -> Result<(LearnEffectReport, Vec<TraceRecord>)> {
    if cfg.trials == 0 {
        return Err(Error::Config("trials must be positive".into()));
    }
    if cfg.session.check_every == 0 {
        return Err(Error::Config("convergence interval must be positive".into()));
    }
    let target = cfg.language.grammar();
    let lang = cfg.language.language();
    let results: Vec<(LearnTrial, Vec<TraceRecord>)> = (0..cfg.trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(cfg.seed, t as u64);
            let mut st = LearnerState::new(cfg.kind.genome(), cfg.session.memory_limited);
            let mut log = Vec::new();
            let inputs = run_session(&mut st, &target, &lang, &cfg.session, &mut rng, trace.then_some((&mut log, t)));
            (LearnTrial { trial: t, inputs }, log)
        })
        .collect();
    let mut trials = Vec::with_capacity(results.len());
    let mut log = Vec::new();
    for (t, l) in results {
        trials.push(t);
        log.extend(l);
    }
    let inputs: Vec<Option<usize>> = trials.iter().map(|t| t.inputs).collect();
    let converged = inputs.iter().filter(|x| x.is_some()).count();
    let summary = LearnSummary {
        median: quantile(&inputs, 0.5),
        p99: quantile(&inputs, 0.99),
        converged,
        meets_one_percent: converged * 100 >= trials.len() * 99,
    };
    Ok((LearnEffectReport { experiment: "learn-effect".into(), config: *cfg, trials, summary }, log))
}

/// Which memory limits are active in an evolutionary run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum WmlMode {
    /// Limits in learning and parsing.
    Both,
    /// Limits in learning only.
    Learn,
    /// Load term in fitness only.
    Parse,
    None,
}

impl WmlMode {
    pub fn apply(self, cfg: SimConfig) -> SimConfig {
        let (learn, parse) = match self {
            WmlMode::Both => (true, true),
            WmlMode::Learn => (true, false),
            WmlMode::Parse => (false, true),
            WmlMode::None => (false, false),
        };
        SimConfig { memory_limited_learning: learn, memory_limited_parsing: parse, ..cfg }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrefConfig {
    pub language: NamedLanguage,
    pub wml: WmlMode,
    pub runs: usize,
    pub sim: SimConfig,
    /// Default share of tracked entries below which a run prefers unset.
    pub low: f64,
    /// Default share above which a run prefers defaults.
    pub high: f64,
}

impl PrefConfig {
    /// Desk-scale defaults: 25 cycles of 500 interactions.
    pub fn new(language: NamedLanguage, wml: WmlMode, runs: usize, seed: u64) -> Self {
        let sim = SimConfig { interactions_per_cycle: 500, cycles: 25, seed, ..SimConfig::default() };
        PrefConfig { language, wml, runs, sim: wml.apply(sim), low: 1.0 / 3.0, high: 2.0 / 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefRun {
    pub run: usize,
    pub preference: Preference,
    pub cycles_run: usize,
    pub population: usize,
    pub extinct: bool,
    pub tracked: StatusShares,
    pub history: Vec<CycleRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrefReport {
    pub experiment: String,
    pub config: PrefConfig,
    pub runs: Vec<PrefRun>,
    pub counts: BTreeMap<Preference, usize>,
}

pub fn pref_evolution(cfg: &PrefConfig) -> Result<PrefReport> {
    cfg.sim.validate()?;
    if cfg.runs == 0 {
        return Err(Error::Config("runs must be positive".into()));
    }
    let sim = cfg.wml.apply(cfg.sim);
    let runs: Vec<PrefRun> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(sim.seed, r as u64);
            let mut pop = Population::learners_speaking(cfg.language, &sim, &mut rng);
            let history = pop.run(&sim, &mut rng);
            let last = history.last().expect("at least one cycle");
            PrefRun {
                run: r,
                preference: classify_preference(&last.tracked, last.extinct, cfg.low, cfg.high),
                cycles_run: history.len(),
                population: last.population,
                extinct: last.extinct,
                tracked: last.tracked,
                history,
            }
        })
        .collect();
    let mut counts: BTreeMap<Preference, usize> =
        [Preference::Unset, Preference::Default, Preference::None].into_iter().map(|p| (p, 0)).collect();
    for r in &runs {
        *counts.entry(r.preference).or_default() += 1;
    }
    Ok(PrefReport { experiment: "pref-evolution".into(), config: PrefConfig { sim, ..*cfg }, runs, counts })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum EmergenceMode {
    /// Random newborns only.
    Random,
    /// Random newborns and two unset-learner adults speaking "German".
    SeededGerman,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmergenceConfig {
    pub mode: EmergenceMode,
    pub runs: usize,
    pub sim: SimConfig,
}

impl EmergenceConfig {
    /// Desk-scale defaults: 100 cycles of 2000 interactions, mutation 0.01.
    pub fn new(mode: EmergenceMode, runs: usize, seed: u64) -> Self {
        let sim = SimConfig { cycles: 100, mutation_prob: 0.01, seed, ..SimConfig::default() };
        EmergenceConfig { mode, runs, sim }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergenceRun {
    pub run: usize,
    pub survived: bool,
    /// Most-spoken language at the end of the run.
    pub dominant: Option<LanguageCount>,
    /// Status shares over every genome entry at the start and end.
    pub start: StatusShares,
    pub end: StatusShares,
    pub history: Vec<CycleRecord>,
}

impl EmergenceRun {
    pub fn dominant_is(&self, order: &str) -> bool {
        self.dominant.as_ref().is_some_and(|d| d.label.split('-').next() == Some(order))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergenceSummary {
    pub survived: usize,
    /// Surviving runs whose dominant language is SOV with verb-second.
    pub sov_v2: usize,
    /// Mean end-minus-start percentage change per status.
    pub change: StatusShares,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmergenceReport {
    pub experiment: String,
    pub config: EmergenceConfig,
    pub runs: Vec<EmergenceRun>,
    pub summary: EmergenceSummary,
}

pub fn emergence(cfg: &EmergenceConfig) -> Result<EmergenceReport> {
    cfg.sim.validate()?;
    if cfg.runs == 0 {
        return Err(Error::Config("runs must be positive".into()));
    }
    let runs: Vec<EmergenceRun> = (0..cfg.runs)
        .into_par_iter()
        .map(|r| {
            let mut rng = trial_rng(cfg.sim.seed, r as u64);
            let mut pop = match cfg.mode {
                EmergenceMode::Random => Population::random(&cfg.sim, &mut rng),
                EmergenceMode::SeededGerman => Population::random_with_speakers(NamedLanguage::German, &cfg.sim, &mut rng),
            };
            let start = StatusShares::of(pop.genomes(), &ParamId::ALL);
            let history = pop.run(&cfg.sim, &mut rng);
            let last = history.last().expect("at least one cycle");
            EmergenceRun {
                run: r,
                survived: !last.extinct && !last.languages.is_empty(),
                dominant: last.languages.first().cloned(),
                start,
                end: last.all,
                history,
            }
        })
        .collect();
    let n = runs.len() as f64;
    let mean = |f: fn(&StatusShares) -> f64| runs.iter().map(|r| f(&r.end) - f(&r.start)).sum::<f64>() / n;
    let summary = EmergenceSummary {
        survived: runs.iter().filter(|r| r.survived).count(),
        sov_v2: runs.iter().filter(|r| r.survived && r.dominant_is("SOVv2")).count(),
        change: StatusShares { absolute: mean(|s| s.absolute), default: mean(|s| s.default), unset: mean(|s| s.unset) },
    };
    Ok(EmergenceReport { experiment: "emergence".into(), config: *cfg, runs, summary })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WmlRow {
    pub language: String,
    pub types: usize,
    pub mean_wml: f64,
}

/// Mean load of each language under its own grammar, in input order.
pub fn wml_rank(specs: &[String]) -> Result<Vec<WmlRow>> {
    specs
        .iter()
        .map(|s| {
            let ps = resolve_genome(s)?;
            let g = decode(&ps)?;
            let lang = language_of(&ps)?;
            Ok(WmlRow { language: s.clone(), types: lang.len(), mean_wml: mean_wml(&lang, &g)? })
        })
        .collect()
}

/// Table of mean loads with the ratio of every row to every other row.
pub fn render_wml_table(rows: &[WmlRow]) -> String {
    let w = rows.iter().map(|r| r.language.len()).max().unwrap_or(8).max(8);
    let mut out = String::new();
    let _ = writeln!(out, "{:<w$}  {:>5}  {:>9}", "language", "types", "mean WML");
    for r in rows {
        let _ = writeln!(out, "{:<w$}  {:>5}  {:>9.3}", r.language, r.types, r.mean_wml);
    }
    if rows.len() > 1 {
        let _ = writeln!(out, "\nratios (row / column)");
        let _ = write!(out, "{:<w$}", "");
        for c in rows {
            let _ = write!(out, "  {:>w$}", c.language);
        }
        out.push('\n');
        for r in rows {
            let _ = write!(out, "{:<w$}", r.language);
            for c in rows {
                let _ = write!(out, "  {:>w$.3}", r.mean_wml / c.mean_wml);
            }
            out.push('\n');
        }
    }
    out
}

/// Two-column `x y` series separated by blank lines, each introduced by a
/// `# label` comment; `plot 'file' index i` selects one.
pub fn gnuplot_blocks(series: &[(String, Vec<(usize, f64)>)]) -> String {
    let mut out = String::new();
    for (i, (label, points)) in series.iter().enumerate() {
        if i > 0 {
            out.push_str("\n\n");
        }
        let _ = writeln!(out, "# {label}");
        for (x, y) in points {
            let _ = writeln!(out, "{x} {y}");
        }
    }
    out
}

/// Default share of tracked entries per cycle, one series per run.
pub fn default_share_series(runs: &[PrefRun]) -> Vec<(String, Vec<(usize, f64)>)> {
    runs.iter().map(|r| (format!("run {}", r.run), r.history.iter().map(|c| (c.cycle, c.tracked.default)).collect())).collect()
}

/// Speakers per language per cycle for one run, one series per language
/// (keyed by label and stringset hash).
pub fn language_share_series(history: &[CycleRecord]) -> Vec<(String, Vec<(usize, f64)>)> {
    let mut by_lang: BTreeMap<(String, String), Vec<(usize, f64)>> = BTreeMap::new();
    for c in history {
        for l in &c.languages {
            by_lang.entry((l.label.clone(), l.key.clone())).or_default().push((c.cycle, l.speakers as f64));
        }
    }
    by_lang.into_iter().map(|((label, key), pts)| (format!("{label} {key}"), pts)).collect()
}


/// Output encodings of experiment reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Jsonl,
}

/// Reports render to JSON lines (a `config` record, one record per trial,
/// run or cycle, and a `summary` record) or to CSV with the config and
/// summary as `#` comment lines.
pub trait Report {
    fn experiment(&self) -> &str;
    fn config_json(&self) -> serde_json::Value;
    fn summary_json(&self) -> serde_json::Value;
    fn rows(&self) -> Vec<serde_json::Value>;
    fn columns(&self) -> &'static [&'static str];

    fn render(&self, format: Format) -> String {
        match format {
            Format::Jsonl => self.to_jsonl(),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut line = |v: serde_json::Value| {
            out.push_str(&v.to_string());
            out.push('\n');
        };
        line(serde_json::json!({ "record": "config", "experiment": self.experiment(), "config": self.config_json() }));
        for r in self.rows() {
            line(r);
        }
        line(serde_json::json!({ "record": "summary", "experiment": self.experiment(), "summary": self.summary_json() }));
        out
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# experiment: {}", self.experiment());
        let _ = writeln!(out, "# config: {}", self.config_json());
        let cols = self.columns();
        let _ = writeln!(out, "{}", cols.join(","));
        for r in self.rows() {
            let cells: Vec<String> = cols.iter().map(|c| csv_cell(r.get(*c))).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        let _ = writeln!(out, "# summary: {}", self.summary_json());
        out
    }
}

fn csv_cell(v: Option<&serde_json::Value>) -> String {
    match v {
        None | Some(serde_json::Value::Null) => String::new(),
        Some(serde_json::Value::String(s)) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
        Some(serde_json::Value::String(s)) => s.clone(),
        Some(other) => {
            let s = other.to_string();
            if s.contains(',') {
                format!("\"{}\"", s.replace('"', "\"\""))
            } else {
                s
            }
        }
    }
}

fn json<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("reports serialize")
}

impl Report for LearnEffectReport {
    fn experiment(&self) -> &str {
        &self.experiment
    }
    fn config_json(&self) -> serde_json::Value {
        json(&self.config)
    }
    fn summary_json(&self) -> serde_json::Value {
        json(&self.summary)
    }
    fn rows(&self) -> Vec<serde_json::Value> {
        self.trials.iter().map(|t| serde_json::json!({ "record": "trial", "trial": t.trial, "inputs": t.inputs })).collect()
    }
    fn columns(&self) -> &'static [&'static str] {
        &["record", "trial", "inputs"]
    }
}

fn cycle_row(run: usize, c: &CycleRecord) -> serde_json::Value {
    serde_json::json!({
        "record": "cycle",
        "run": run,
        "cycle": c.cycle,
        "population": c.population,
        "births": c.births,
        "deaths": c.deaths,
        "mean_fitness": c.mean_fitness,
        "tracked_absolute": c.tracked.absolute,
        "tracked_default": c.tracked.default,
        "tracked_unset": c.tracked.unset,
        "all_absolute": c.all.absolute,
        "all_default": c.all.default,
        "all_unset": c.all.unset,
        "languages": json(&c.languages),
        "extinct": c.extinct,
    })
}

const CYCLE_COLUMNS: [&str; 15] = [
    "record",
    "run",
    "cycle",
    "population",
    "births",
    "deaths",
    "mean_fitness",
    "tracked_absolute",
    "tracked_default",
    "tracked_unset",
    "all_absolute",
    "all_default",
    "all_unset",
    "languages",
    "extinct",
];

impl Report for PrefReport {
    fn experiment(&self) -> &str {
        &self.experiment
    }
    fn config_json(&self) -> serde_json::Value {
        json(&self.config)
    }
    fn summary_json(&self) -> serde_json::Value {
        let runs: Vec<serde_json::Value> = self
            .runs
            .iter()
            .map(|r| serde_json::json!({ "run": r.run, "preference": r.preference, "population": r.population, "extinct": r.extinct, "tracked": r.tracked }))
            .collect();
        serde_json::json!({ "counts": json(&self.counts), "runs": runs })
    }
    fn rows(&self) -> Vec<serde_json::Value> {
        self.runs.iter().flat_map(|r| r.history.iter().map(move |c| cycle_row(r.run, c))).collect()
    }
    fn columns(&self) -> &'static [&'static str] {
        &CYCLE_COLUMNS
    }
}

impl Report for EmergenceReport {
    fn experiment(&self) -> &str {
        &self.experiment
    }
    fn config_json(&self) -> serde_json::Value {
        json(&self.config)
    }
    fn summary_json(&self) -> serde_json::Value {
        let runs: Vec<serde_json::Value> = self
            .runs
            .iter()
            .map(|r| serde_json::json!({ "run": r.run, "survived": r.survived, "dominant": r.dominant, "start": r.start, "end": r.end }))
            .collect();
        serde_json::json!({ "totals": json(&self.summary), "runs": runs })
    }
    fn rows(&self) -> Vec<serde_json::Value> {
        self.runs.iter().flat_map(|r| r.history.iter().map(move |c| cycle_row(r.run, c))).collect()
    }
    fn columns(&self) -> &'static [&'static str] {
        &CYCLE_COLUMNS
    }
}
