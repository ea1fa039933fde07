//! Populations of language agents: interaction, fitness, mortality and
//! reproduction.
//!
//! An agent carries the genome it was born with and a learner state that
//! starts as a copy of it. Agents hear and learn during a critical period
//! (ages 1 to 3), may reproduce from age 4 and die after age 10. Fitness is
//! recomputed from per-cycle counters at the end of every cycle.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, HashMap};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::language::{generate_language, order_label, parse_sentence, Language, NamedLanguage, TEMPLATE_COUNT};
use crate::learner::{learn_step, LearnerKind, LearnerState};
use crate::psetting::{decode, GrammarConfig, PSetting, PSettings, ParamId, Status};

pub const CRITICAL_PERIOD: u32 = 3;
pub const FIRST_FERTILE_AGE: u32 = 4;
pub const MAX_AGE: u32 = 10;

/// Per-cycle costs and benefits of one agent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Sentences generated.
    pub gc: u64,
    /// Sentences parsed.
    pub pc: u64,
    /// Sentences generated from a subset language.
    pub gsc: u64,
    /// Parse failures.
    pub pf: u64,
    /// Successful interactions.
    pub si: u64,
    pub wml_sum: u64,
}

/// `SI/(GC+PC) * GC/(GC+GSC)`, times the inverse mean load per successful
/// parse when `use_wml` is set. Any zero denominator gives 0.
pub fn fitness(c: &Counters, use_wml: bool) -> f64 {
    let ratio = |num: u64, den: u64| if den == 0 { None } else { Some(num as f64 / den as f64) };
    let Some(success) = ratio(c.si, c.gc + c.pc) else { return 0.0 };
    let Some(expressive) = ratio(c.gc, c.gc + c.gsc) else { return 0.0 };
    let base = success * expressive;
    if !use_wml {
        return base;
    }
    let parsed = c.pc.saturating_sub(c.pf);
    if parsed == 0 || c.wml_sum == 0 {
        return 0.0;
    }
    base / (c.wml_sum as f64 / parsed as f64)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    pub id: u64,
    pub genome: PSettings,
    pub learner: LearnerState,
    pub age: u32,
    pub counters: Counters,
    pub partner_success: BTreeMap<u64, u32>,
    pub fitness: f64,
}

impl Agent {
    /// A newborn whose learner starts from its genome.
    pub fn newborn(id: u64, genome: PSettings, memory_limited: bool) -> Self {
        let mut learner = LearnerState::new(genome, memory_limited);
        learner.age_cycles = 1;
        Agent { id, genome, learner, age: 1, counters: Counters::default(), partner_success: BTreeMap::new(), fitness: 0.0 }
    }

    /// An agent past its critical period that has already acquired
    /// `language`. Parameters of the genome take the language's values and
    /// count as reset; absolute entries and entries the language leaves
    /// unset keep the genome's setting.
    pub fn adult(id: u64, genome: PSettings, language: &PSettings, age: u32, memory_limited: bool) -> Self {
        let mut agent = Agent::newborn(id, genome, memory_limited);
        for id in ParamId::ALL {
            let g = genome.get(id);
            let target = language.get(id).value;
            if g.status != Status::Absolute && target.is_some() {
                agent.learner.current.set(id, PSetting { status: Status::Reset, value: target });
                agent.learner.touched[id.index()] = true;
            }
        }
        agent.set_age(age);
        agent
    }

    fn set_age(&mut self, age: u32) {
        self.age = age;
        self.learner.age_cycles = age;
    }

    pub fn in_critical_period(&self) -> bool {
        self.age <= CRITICAL_PERIOD
    }

    pub fn is_fertile(&self) -> bool {
        (FIRST_FERTILE_AGE..=MAX_AGE).contains(&self.age)
    }

    pub fn grammar(&self) -> Option<GrammarConfig> {
        decode(&self.learner.current).ok()
    }

    fn credit_partner(&mut self, other: u64) {
        *self.partner_success.entry(other).or_default() += 1;
    }
}

/// A generated language with an identity for bookkeeping.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spoken {
    pub types: Language,
    /// Hash of the sorted sentence-type strings.
    pub key: u64,
    pub label: String,
}

impl Spoken {
    pub fn is_full(&self) -> bool {
        self.types.len() == TEMPLATE_COUNT as usize
    }
}

/// Name for a grammar's language: clause order followed by the missing
/// categories and rules, e.g. `VSO-N-GWP-COMP`.
pub fn language_label(g: &GrammarConfig) -> String {
    let mut s = order_label(g);
    for (present, tag) in
        [(g.n, "N"), (g.rc, "Rc"), (g.pp, "PP"), (g.sc, "Sc"), (g.rules.permutation, "GWP"), (g.rules.composition, "COMP")]
    {
        if !present {
            s.push('-');
            s.push_str(tag);
        }
    }
    s
}

pub fn language_key(types: &[crate::language::SentenceType]) -> u64 {
    let set = crate::language::stringset(types);
    let mut h = DefaultHasher::new();
    set.hash(&mut h);
    h.finish()
}

/// Memoized languages by grammar. `None` marks grammars too degenerate to
/// speak.
#[derive(Debug, Default)]
pub struct LanguageCache {
    map: HashMap<GrammarConfig, Option<Arc<Spoken>>>,
}

impl LanguageCache {
    pub fn get(&mut self, g: &GrammarConfig) -> Option<Arc<Spoken>> {
        self.map
            .entry(*g)
            .or_insert_with(|| {
                generate_language(g).ok().map(|types| {
                    let key = language_key(&types);
                    Arc::new(Spoken { types, key, label: language_label(g) })
                })
            })
            .clone()
    }

    /// Language spoken by `agent`, if any.
    pub fn spoken_by(&mut self, agent: &Agent) -> Option<Arc<Spoken>> {
        agent.grammar().and_then(|g| self.get(&g))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interaction {
    /// The speaker had a language to draw from.
    pub spoke: bool,
    pub success: bool,
    pub template: Option<u8>,
}

/// One speaker-to-hearer exchange. A speaker without a language leaves
/// both agents untouched.
pub fn interact<R: Rng + ?Sized>(speaker: &mut Agent, hearer: &mut Agent, cache: &mut LanguageCache, rng: &mut R) -> Interaction {
    let Some(lang) = cache.spoken_by(speaker) else {
        return Interaction { spoke: false, success: false, template: None };
    };
    let st = &lang.types[rng.gen_range(0..lang.types.len())];
    speaker.counters.gc += 1;
    if !lang.is_full() {
        speaker.counters.gsc += 1;
    }
    hearer.counters.pc += 1;
    let success = match hearer.grammar() {
        Some(g) => {
            let out = parse_sentence(st, &g);
            hearer.counters.wml_sum += out.total_wml as u64;
            out.success
        }
        None => false,
    };
    if success {
        speaker.counters.si += 1;
        hearer.counters.si += 1;
        speaker.credit_partner(hearer.id);
        hearer.credit_partner(speaker.id);
    } else {
        hearer.counters.pf += 1;
    }
    if hearer.in_critical_period() {
        learn_step(&mut hearer.learner, st, rng);
    }
    Interaction { spoke: true, success, template: Some(st.template) }
}

/// Entry-level mutation: an absolute entry flips its value, a default entry
/// either flips or becomes unset, an unset entry becomes a default with a
/// random value.
pub fn mutate_entry<R: Rng + ?Sized>(s: PSetting, rng: &mut R) -> PSetting {
    match (s.status, s.value) {
        (Status::Absolute, Some(v)) => PSetting::absolute(!v),
        (Status::Default | Status::Reset, Some(v)) => {
            if rng.gen_bool(0.5) {
                PSetting::default(!v)
            } else {
                PSetting::UNSET
            }
        }
        _ => PSetting::default(rng.gen_bool(0.5)),
    }
}

/// Child genome: one-point crossover of the parents' genomes (with
/// probability `crossover_prob`, otherwise a copy of `a`'s), then with
/// probability `mutation_prob` a single mutated entry.
pub fn reproduce_genome<R: Rng + ?Sized>(a: &PSettings, b: &PSettings, crossover_prob: f64, mutation_prob: f64, rng: &mut R) -> PSettings {
    let mut child = *a;
    if rng.gen_bool(crossover_prob) {
        let point = rng.gen_range(1..ParamId::ALL.len());
        child.0[point..].copy_from_slice(&b.0[point..]);
    }
    if rng.gen_bool(mutation_prob) {
        let i = rng.gen_range(0..child.0.len());
        child.0[i] = mutate_entry(child.0[i], rng);
    }
    child
}

/// A newborn from two fertile parents with a shared success history.
pub fn reproduce<R: Rng + ?Sized>(a: &Agent, b: &Agent, id: u64, cfg: &SimConfig, rng: &mut R) -> crate::Result<Agent> {
    if !a.is_fertile() || !b.is_fertile() {
        return Err(crate::Error::Config("parents must be aged 4 to 10".into()));
    }
    if a.partner_success.get(&b.id).copied().unwrap_or(0) == 0 {
        return Err(crate::Error::Config("parents have no successful interaction".into()));
    }
    let genome = reproduce_genome(&a.genome, &b.genome, cfg.crossover_prob, cfg.mutation_prob, rng);
    Ok(Agent::newborn(id, genome, cfg.memory_limited_learning))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub population_size: usize,
    pub interactions_per_cycle: usize,
    pub cycles: usize,
    pub crossover_prob: f64,
    pub mutation_prob: f64,
    pub memory_limited_learning: bool,
    /// Include the load term in fitness.
    pub memory_limited_parsing: bool,
    /// Largest net growth per cycle, as a fraction of the population.
    pub growth_rate: f64,
    /// Agents below this fraction of mean fitness are at risk of dying.
    pub cull_threshold: f64,
    pub cull_prob: f64,
    pub seed: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            population_size: 32,
            interactions_per_cycle: 2000,
            cycles: 50,
            crossover_prob: 0.9,
            mutation_prob: 0.0,
            memory_limited_learning: true,
            memory_limited_parsing: true,
            growth_rate: 0.1,
            cull_threshold: 0.5,
            cull_prob: 0.5,
            seed: 0,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let prob = |p: f64| (0.0..=1.0).contains(&p);
        if !prob(self.crossover_prob) || !prob(self.mutation_prob) || !prob(self.cull_prob) {
            return Err(crate::Error::Config("probabilities must lie in [0, 1]".into()));
        }
        if self.population_size == 0 || self.interactions_per_cycle == 0 || self.cycles == 0 {
            return Err(crate::Error::Config("population, interactions and cycles must be positive".into()));
        }
        if self.growth_rate < 0.0 || self.cull_threshold < 0.0 {
            return Err(crate::Error::Config("growth rate and cull threshold must be non-negative".into()));
        }
        Ok(())
    }
}

/// Share of entries in each status, as percentages.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct StatusShares {
    pub absolute: f64,
    pub default: f64,
    pub unset: f64,
}

impl StatusShares {
    /// Over the given entries of every genome.
    pub fn of<'a, I: IntoIterator<Item = &'a PSettings>>(genomes: I, ids: &[ParamId]) -> Self {
        let (mut a, mut d, mut u) = (0usize, 0usize, 0usize);
        for g in genomes {
            for id in ids {
                match g.get(*id).status {
                    Status::Absolute => a += 1,
                    Status::Default | Status::Reset => d += 1,
                    Status::Unset => u += 1,
                }
            }
        }
        let n = (a + d + u) as f64;
        if n == 0.0 {
            return StatusShares::default();
        }
        StatusShares { absolute: 100.0 * a as f64 / n, default: 100.0 * d as f64 / n, unset: 100.0 * u as f64 / n }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanguageCount {
    pub key: String,
    pub label: String,
    pub speakers: usize,
    pub full: bool,
}

/// State of the population at the end of one cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CycleRecord {
    pub cycle: usize,
    pub population: usize,
    pub births: usize,
    pub deaths: usize,
    pub mean_fitness: f64,
    /// Speakers per language among agents alive after the cycle, most
    /// speakers first.
    pub languages: Vec<LanguageCount>,
    /// Status shares over the tracked parameters of living genomes.
    pub tracked: StatusShares,
    /// Status shares over every entry of living genomes.
    pub all: StatusShares,
    pub extinct: bool,
}

#[derive(Debug)]
pub struct Population {
    pub agents: Vec<Agent>,
    pub cycle: usize,
    next_id: u64,
    pub cache: LanguageCache,
}

impl Population {
    pub fn new(agents: Vec<Agent>) -> Self {
        let next_id = agents.iter().map(|a| a.id + 1).max().unwrap_or(0);
        Population { agents, cycle: 0, next_id, cache: LanguageCache::default() }
    }

    /// Equal numbers of default and unset learners, already speaking
    /// `lang`, with ages spread over the fertile range.
    pub fn learners_speaking<R: Rng + ?Sized>(lang: NamedLanguage, cfg: &SimConfig, rng: &mut R) -> Self {
        let target = lang.genome();
        let agents = (0..cfg.population_size)
            .map(|i| {
                let kind = if i < cfg.population_size / 2 { LearnerKind::Default } else { LearnerKind::Unset };
                let age = rng.gen_range(FIRST_FERTILE_AGE..=MAX_AGE);
                Agent::adult(i as u64, kind.genome(), &target, age, cfg.memory_limited_learning)
            })
            .collect();
        Population::new(agents)
    }

    /// Newborns with random genomes.
    pub fn random<R: Rng + ?Sized>(cfg: &SimConfig, rng: &mut R) -> Self {
        let agents = (0..cfg.population_size).map(|i| Agent::newborn(i as u64, random_genome(rng), cfg.memory_limited_learning)).collect();
        Population::new(agents)
    }

    /// Random newborns plus two unset-learner adults speaking `lang`.
    pub fn random_with_speakers<R: Rng + ?Sized>(lang: NamedLanguage, cfg: &SimConfig, rng: &mut R) -> Self {
        let n = cfg.population_size.saturating_sub(2);
        let mut agents: Vec<Agent> = (0..n).map(|i| Agent::newborn(i as u64, random_genome(rng), cfg.memory_limited_learning)).collect();
        for i in 0..2 {
            agents.push(Agent::adult(
                (n + i) as u64,
                LearnerKind::Unset.genome(),
                &lang.genome(),
                FIRST_FERTILE_AGE,
                cfg.memory_limited_learning,
            ));
        }
        Population::new(agents)
    }

    pub fn genomes(&self) -> impl Iterator<Item = &PSettings> {
        self.agents.iter().map(|a| &a.genome)
    }

    pub fn is_extinct(&self) -> bool {
        self.agents.is_empty()
    }

    /// Speakers per language, most speakers first, ties by key.
    pub fn census(&mut self) -> Vec<LanguageCount> {
        let mut counts: BTreeMap<u64, LanguageCount> = BTreeMap::new();
        for a in &self.agents {
            if let Some(s) = self.cache.spoken_by(a) {
                counts
                    .entry(s.key)
                    .or_insert_with(|| LanguageCount {
                        key: format!("{:016x}", s.key),
                        label: s.label.clone(),
                        speakers: 0,
                        full: s.is_full(),
                    })
                    .speakers += 1;
            }
        }
        let mut out: Vec<LanguageCount> = counts.into_values().collect();
        out.sort_by(|a, b| b.speakers.cmp(&a.speakers).then_with(|| a.key.cmp(&b.key)));
        out
    }

    /// Interactions, fitness, mortality, reproduction and ageing.
    pub fn run_cycle<R: Rng + ?Sized>(&mut self, cfg: &SimConfig, rng: &mut R) -> CycleRecord {
        self.cycle += 1;
        let n = self.agents.len();
        if n >= 2 {
            for _ in 0..cfg.interactions_per_cycle {
                let s = rng.gen_range(0..n);
                let mut h = rng.gen_range(0..n - 1);
                if h >= s {
                    h += 1;
                }
                let (speaker, hearer) = pair_mut(&mut self.agents, s, h);
                interact(speaker, hearer, &mut self.cache, rng);
            }
        }
        for a in &mut self.agents {
            a.fitness = fitness(&a.counters, cfg.memory_limited_parsing);
        }
        let mean_fitness = if n == 0 { 0.0 } else { self.agents.iter().map(|a| a.fitness).sum::<f64>() / n as f64 };
        let mut sorted: Vec<f64> = self.agents.iter().map(|a| a.fitness).collect();
        sorted.sort_by(f64::total_cmp);
        let median = if n == 0 { 0.0 } else { sorted[n / 2] };

        let mut alive = Vec::with_capacity(n);
        let mut dead = Vec::new();
        for a in std::mem::take(&mut self.agents) {
            let old = a.age >= MAX_AGE;
            let weak = a.fitness < cfg.cull_threshold * mean_fitness && rng.gen_bool(cfg.cull_prob);
            if old || weak {
                dead.push(a);
            } else {
                alive.push(a);
            }
        }
        let deaths = dead.len();

        let wanted = deaths.max((n as f64 * cfg.growth_rate).floor() as usize);
        let parents: Vec<usize> = (0..alive.len()).filter(|i| alive[*i].is_fertile() && alive[*i].fitness >= median).collect();
        let mut pairs = Vec::new();
        for (x, &i) in parents.iter().enumerate() {
            for &j in &parents[x + 1..] {
                if alive[i].partner_success.get(&alive[j].id).copied().unwrap_or(0) > 0 {
                    pairs.push((i, j));
                }
            }
        }
        let mut children = Vec::new();
        if !pairs.is_empty() {
            for _ in 0..wanted {
                let &(i, j) = pairs.choose(rng).expect("nonempty");
                let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
                let child = reproduce(&alive[a], &alive[b], self.next_id, cfg, rng).expect("eligible parents");
                self.next_id += 1;
                children.push(child);
            }
        }
        let births = children.len();

        for a in &mut alive {
            a.set_age(a.age + 1);
            a.counters = Counters::default();
            a.partner_success.clear();
        }
        alive.extend(children);
        self.agents = alive;

        let languages = self.census();
        CycleRecord {
            cycle: self.cycle,
            population: self.agents.len(),
            births,
            deaths,
            mean_fitness,
            languages,
            tracked: StatusShares::of(self.genomes(), &ParamId::TRACKED),
            all: StatusShares::of(self.genomes(), &ParamId::ALL),
            extinct: self.agents.is_empty(),
        }
    }

    /// Runs `cfg.cycles` cycles or until extinction.
    pub fn run<R: Rng + ?Sized>(&mut self, cfg: &SimConfig, rng: &mut R) -> Vec<CycleRecord> {
        let mut history = Vec::with_capacity(cfg.cycles);
        for _ in 0..cfg.cycles {
            let rec = self.run_cycle(cfg, rng);
            let extinct = rec.extinct;
            history.push(rec);
            if extinct {
                break;
            }
        }
        history
    }
}

fn pair_mut(agents: &mut [Agent], i: usize, j: usize) -> (&mut Agent, &mut Agent) {
    assert_ne!(i, j);
    if i < j {
        let (lo, hi) = agents.split_at_mut(j);
        (&mut lo[i], &mut hi[0])
    } else {
        let (lo, hi) = agents.split_at_mut(i);
        (&mut hi[0], &mut lo[j])
    }
}

/// Each entry absolute with probability 1/4, otherwise default or unset
/// with equal odds; values are unbiased.
pub fn random_genome<R: Rng + ?Sized>(rng: &mut R) -> PSettings {
    let mut ps = PSettings::all_unset();
    for id in ParamId::ALL {
        let v = rng.gen_bool(0.5);
        let s = if rng.gen_bool(0.25) {
            PSetting::absolute(v)
        } else if rng.gen_bool(0.5) {
            PSetting::default(v)
        } else {
            PSetting::UNSET
        };
        ps.set(id, s);
    }
    ps
}

/// Outcome of a learner-type competition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Preference {
    Default,
    Unset,
    None,
}

/// Classifies by the share of tracked entries that are defaults:
/// above `high` is a default preference, below `low` an unset preference.
pub fn classify_preference(shares: &StatusShares, extinct: bool, low: f64, high: f64) -> Preference {
    if extinct {
        return Preference::None;
    }
    let d = shares.default / 100.0;
    if d > high {
        Preference::Default
    } else if d < low {
        Preference::Unset
    } else {
        Preference::None
    }
}
