//! Error-driven parameter setting with working-memory-gated triggers.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::language::{generate_language, lexicalize, parse_sentence, Language, SentenceType};
use crate::psetting::{decode, GrammarConfig, PSetting, PSettings, ParamId, Status};

/// Stack-load capacity at a given age in cycles.
pub fn capacity(age_cycles: u32) -> u32 {
    6 + 6 * age_cycles
}

/// Initial genome families for learners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LearnerKind {
    /// Defaults for a right-branching SVO grammar without composition or
    /// permutation.
    Default,
    /// Every parameter unset.
    Unset,
}

impl LearnerKind {
    pub fn genome(self) -> PSettings {
        let mut ps = PSettings::all_unset();
        for id in [ParamId::Applic, ParamId::S, ParamId::Np] {
            ps.set(id, PSetting::absolute(true));
        }
        if self == LearnerKind::Default {
            ps.set(ParamId::Gen, PSetting::default(false));
            ps.set(ParamId::Subj, PSetting::default(true));
            ps.set(ParamId::Obj, PSetting::default(false));
            ps.set(ParamId::Comp, PSetting::default(false));
            ps.set(ParamId::Perm, PSetting::default(false));
        }
        ps
    }

    pub fn as_str(self) -> &'static str {
        match self {
            LearnerKind::Default => "default",
            LearnerKind::Unset => "unset",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LearnerState {
    pub genome: PSettings,
    pub current: PSettings,
    pub touched: [bool; 20],
    pub age_cycles: u32,
    pub memory_limited: bool,
}

impl LearnerState {
    pub fn new(genome: PSettings, memory_limited: bool) -> Self {
        LearnerState { genome, current: genome, touched: [false; 20], age_cycles: 0, memory_limited }
    }

    pub fn grammar(&self) -> Result<GrammarConfig> {
        decode(&self.current)
    }

    pub fn touched_count(&self) -> usize {
        self.touched.iter().filter(|t| **t).count()
    }

    fn candidates(&self) -> impl Iterator<Item = ParamId> + '_ {
        ParamId::ALL
            .into_iter()
            .filter(|id| !self.touched[id.index()] && matches!(self.current.get(*id).status, Status::Default | Status::Unset))
    }
}

/// Rewrites one entry: a default flips its value, an unset entry takes a
/// uniformly random value. Either way the entry is then marked reset.
pub fn update_at<R: Rng + ?Sized>(ps: &PSettings, id: ParamId, rng: &mut R) -> PSettings {
    let old = ps.get(id);
    let value = match (old.status, old.value) {
        (Status::Default, Some(v)) => !v,
        _ => rng.gen_bool(0.5),
    };
    ps.with(id, PSetting { status: Status::Reset, value: Some(value) })
}

/// Resets the first untouched default or unset entry in canonical order.
pub fn update<R: Rng + ?Sized>(ps: &PSettings, touched: &[bool; 20], rng: &mut R) -> Result<(PSettings, ParamId)> {
    let id = ParamId::ALL
        .into_iter()
        .find(|id| !touched[id.index()] && matches!(ps.get(*id).status, Status::Default | Status::Unset))
        .ok_or(Error::NoUpdatableParameter)?;
    Ok((update_at(ps, id, rng), id))
}

/// Peak stack load of the learner's attempt to parse `st`. Input the
/// learner cannot assign categories to never reaches the stack.
pub fn trigger_peak(state: &LearnerState, st: &SentenceType) -> u32 {
    match state.grammar() {
        Ok(g) => {
            let out = parse_sentence(st, &g);
            out.peak_wml()
        }
        Err(_) => 0,
    }
}

pub fn admissible_trigger(state: &LearnerState, st: &SentenceType) -> bool {
    !state.memory_limited || trigger_peak(state, st) <= capacity(state.age_cycles)
}

fn parses(ps: &PSettings, st: &SentenceType) -> bool {
    decode(ps).map(|g| parse_sentence(st, &g).success).unwrap_or(false)
}

/// Number of trigger items the grammar can assign a category to.
fn lexical_coverage(ps: &PSettings, st: &SentenceType) -> usize {
    decode(ps).map(|g| st.slots.iter().filter(|s| lexicalize(**s, &g).is_some()).count()).unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepReport {
    pub admissible: bool,
    /// Whether the trigger parsed before any update.
    pub parsed: bool,
    /// The entry retained by this step.
    pub updated: Option<ParamId>,
    /// Updates tried and undone.
    pub reverted: usize,
}

/// Presents one trigger. A trigger the current grammar fails on causes the
/// untouched default and unset entries to be tried in canonical order; the
/// first update under which the trigger parses is kept and every other
/// attempt is undone. An atomic-category switch is also kept when it lets
/// more of the trigger be assigned categories.
pub fn learn_step<R: Rng + ?Sized>(state: &mut LearnerState, trigger: &SentenceType, rng: &mut R) -> StepReport {
    let mut report = StepReport { admissible: admissible_trigger(state, trigger), parsed: false, updated: None, reverted: 0 };
    if !report.admissible {
        return report;
    }
    if parses(&state.current, trigger) {
        report.parsed = true;
        return report;
    }
    let before = lexical_coverage(&state.current, trigger);
    let candidates: Vec<ParamId> = state.candidates().collect();
    for id in candidates {
        let next = update_at(&state.current, id, rng);
        let progress = id.is_category() && lexical_coverage(&next, trigger) > before;
        if progress || parses(&next, trigger) {
            state.current = next;
            state.touched[id.index()] = true;
            report.updated = Some(id);
            return report;
        }
        report.reverted += 1;
    }
    report
}

/// Mutual parse compatibility: the learner parses every sentence type of
/// the target language and the target parses every type of the learner's.
pub fn converged(state: &LearnerState, target: &GrammarConfig, target_lang: &[SentenceType]) -> bool {
    let Ok(g) = state.grammar() else { return false };
    if !target_lang.iter().all(|st| parse_sentence(st, &g).success) {
        return false;
    }
    match generate_language(&g) {
        Ok(own) => own.iter().all(|st| parse_sentence(st, target).success),
        Err(_) => false,
    }
}

/// One line of the learning-trace log.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub trial: usize,
    pub step: usize,
    pub template_id: u8,
    pub admissible: bool,
    pub parsed: bool,
    pub updated_index: Option<usize>,
    pub reverted: bool,
}

/// Settings for a single-adult, single-learner session.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionConfig {
    /// Convergence is checked, and the learner ages one cycle, after every
    /// this many inputs.
    pub check_every: usize,
    pub max_inputs: usize,
    pub memory_limited: bool,
}

impl Default for SessionConfig {
    fn default() -> Self {
        SessionConfig { check_every: 10, max_inputs: 1000, memory_limited: true }
    }
}

/// Presents uniformly drawn sentence types of `target_lang` until the
/// learner converges. Returns the number of inputs consumed, or `None` if
/// `max_inputs` ran out first.
pub fn run_session<R: Rng + ?Sized>(
    learner: &mut LearnerState,
    target: &GrammarConfig,
    target_lang: &Language,
    cfg: &SessionConfig,
    rng: &mut R,
    mut trace: Option<(&mut Vec<TraceRecord>, usize)>,
) -> Option<usize> {
    let mut inputs = 0;
    while inputs < cfg.max_inputs {
        let st = &target_lang[rng.gen_range(0..target_lang.len())];
        let r = learn_step(learner, st, rng);
        if let Some((log, trial)) = trace.as_mut() {
            log.push(TraceRecord {
                trial: *trial,
                step: inputs,
                template_id: st.template,
                admissible: r.admissible,
                parsed: r.parsed,
                updated_index: r.updated.map(|id| id.index()),
                reverted: r.updated.is_none() && r.reverted > 0,
            });
        }
        inputs += 1;
        if inputs % cfg.check_every == 0 {
            learner.age_cycles += 1;
            if converged(learner, target, target_lang) {
                return Some(inputs);
            }
        }
    }
    None
}
