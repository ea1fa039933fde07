//! Construction templates, their linearisation under a grammar, and the
//! named fixture languages.
//!
//! A sentence type is a sequence of lexical slots (word classes with their
//! grammatical role) together with the categories its speaker's grammar
//! assigns them. A hearer re-assigns categories to the same slots with its
//! own grammar before parsing.

use std::collections::hash_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::categorial::{format_category_string, Atom, Category, Dir, Role};
use crate::error::{Error, Result};
use crate::parser::{self, ParseOutcome};
use crate::psetting::{decode, dir_value, GrammarConfig, PSetting, PSettings, ParamId};

pub const TEMPLATE_COUNT: u8 = 12;

/// Argument frame of a verb.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Frame {
    Intrans,
    Trans,
    Ditrans,
    /// Intransitive with an adpositional-phrase complement.
    PpComp,
    /// Clausal complement introduced by a complementizer.
    ScComp,
}

/// The argument missing from a relative clause.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gap {
    Subj,
    Obj,
}

/// A lexical slot: what a word contributes independent of any grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Slot {
    /// A proper name.
    Name(Role),
    /// A determiner heading a noun phrase.
    Det(Role),
    Noun,
    Adj,
    /// `main_clause` marks the verb of construction 10, which verb-second
    /// grammars place after the subject.
    Verb {
        frame: Frame,
        main_clause: bool,
    },
    Adpos,
    Compl,
    RelPron(Gap),
    /// Noun phrase modified by a relative clause.
    RelHead(Role),
    /// Subject inside an object-gapped relative clause.
    RelSubj,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ArgRole {
    Subj,
    Obj,
    Obj1,
    Obj2,
    Pp,
    Sc,
}

impl ArgRole {
    fn category(self) -> Category {
        match self {
            ArgRole::Subj => Category::with_role(Atom::NP, Role::Subj),
            ArgRole::Obj => Category::with_role(Atom::NP, Role::Obj),
            ArgRole::Obj1 => Category::with_role(Atom::NP, Role::Obj1),
            ArgRole::Obj2 => Category::with_role(Atom::NP, Role::Obj2),
            ArgRole::Pp => Category::atom(Atom::PP),
            ArgRole::Sc => Category::atom(Atom::Sc),
        }
    }
}

/// Verb arguments in consumption order with their directions, if the
/// grammar resolves them.
fn verb_args(g: &GrammarConfig, frame: Frame, main_clause: bool) -> Option<Vec<(ArgRole, Dir)>> {
    let (subj, obj, subject_first) =
        if main_clause && g.v2 { (Some(Dir::Left), Some(Dir::Right), false) } else { (g.dirs.subj, g.dirs.obj, g.v1) };
    let mut args = match frame {
        Frame::Intrans => vec![],
        Frame::Trans => vec![(ArgRole::Obj, obj?)],
        Frame::Ditrans => vec![(ArgRole::Obj1, obj?), (ArgRole::Obj2, obj?)],
        Frame::PpComp => vec![(ArgRole::Pp, obj?)],
        Frame::ScComp => vec![(ArgRole::Sc, obj?)],
    };
    if subject_first {
        args.insert(0, (ArgRole::Subj, subj?));
    } else {
        args.push((ArgRole::Subj, subj?));
    }
    Some(args)
}

fn gap_category(g: &GrammarConfig, gap: Gap) -> Option<Category> {
    let s = Category::atom(Atom::S);
    Some(match gap {
        Gap::Subj => Category::functor(s, ArgRole::Subj.category(), g.dirs.subj?),
        Gap::Obj => Category::functor(s, ArgRole::Obj.category(), g.dirs.obj?),
    })
}

/// Whether a relative-clause subject is type-raised: only when it precedes
/// a verb whose object follows, so that composition can build the gapped
/// clause.
fn raises_rel_subject(g: &GrammarConfig) -> bool {
    g.dirs.subj == Some(Dir::Left) && g.dirs.obj == Some(Dir::Right) && !g.v1
}

/// The category a grammar assigns to a slot, if its inventory and ordering
/// allow it.
pub fn lexicalize(slot: Slot, g: &GrammarConfig) -> Option<Category> {
    let need = |a: Atom| g.has_atom(a).then_some(());
    let np = |r: Role| Category::with_role(Atom::NP, r);
    Some(match slot {
        Slot::Name(r) => np(r),
        Slot::Det(r) => {
            need(Atom::N)?;
            Category::functor(np(r), Category::atom(Atom::N), g.dirs.spec?)
        }
        Slot::Noun => {
            need(Atom::N)?;
            Category::atom(Atom::N)
        }
        Slot::Adj => {
            need(Atom::N)?;
            Category::functor(Category::atom(Atom::N), Category::atom(Atom::N), g.dirs.modifier?)
        }
        Slot::Verb { frame, main_clause } => {
            match frame {
                Frame::PpComp => need(Atom::PP)?,
                Frame::ScComp => need(Atom::Sc)?,
                _ => {}
            }
            verb_args(g, frame, main_clause)?
                .into_iter()
                .rev()
                .fold(Category::atom(Atom::S), |acc, (role, dir)| Category::functor(acc, role.category(), dir))
        }
        Slot::Adpos => {
            need(Atom::PP)?;
            Category::functor(Category::atom(Atom::PP), np(Role::Obl), g.dirs.adpos?)
        }
        Slot::Compl => {
            need(Atom::Sc)?;
            Category::functor(Category::atom(Atom::Sc), Category::atom(Atom::S), g.dirs.compl?)
        }
        Slot::RelPron(gap) => {
            need(Atom::Rc)?;
            Category::functor(Category::atom(Atom::Rc), gap_category(g, gap)?, g.dirs.compl?)
        }
        Slot::RelHead(r) => {
            need(Atom::Rc)?;
            Category::functor(np(r), Category::atom(Atom::Rc), g.dirs.relcl?)
        }
        Slot::RelSubj => {
            if raises_rel_subject(g) {
                let vp = Category::functor(Category::atom(Atom::S), np(Role::Subj), Dir::Left);
                Category::functor(Category::atom(Atom::S), vp, Dir::Right)
            } else {
                np(Role::Subj)
            }
        }
    })
}

/// Categories for a whole slot sequence, or `None` if any slot is unavailable.
pub fn lexicalize_all(slots: &[Slot], g: &GrammarConfig) -> Option<Vec<Category>> {
    slots.iter().map(|s| lexicalize(*s, g)).collect()
}

fn attach(head: Vec<Slot>, dep: Vec<Slot>, dir: Dir) -> Vec<Slot> {
    match dir {
        Dir::Right => head.into_iter().chain(dep).collect(),
        Dir::Left => dep.into_iter().chain(head).collect(),
    }
}

/// Linearises a clause; dependents missing from `deps` are gaps.
fn clause(g: &GrammarConfig, frame: Frame, main_clause: bool, deps: &[(ArgRole, Vec<Slot>)]) -> Option<Vec<Slot>> {
    Some(verb_args(g, frame, main_clause)?.into_iter().fold(vec![Slot::Verb { frame, main_clause }], |span, (role, dir)| {
        match deps.iter().find(|(r, _)| *r == role) {
            Some((_, dep)) => attach(span, dep.clone(), dir),
            None => span,
        }
    }))
}

fn noun_phrase(g: &GrammarConfig, role: Role, adjective: bool) -> Option<Vec<Slot>> {
    let nominal = if adjective { attach(vec![Slot::Noun], vec![Slot::Adj], g.dirs.modifier?.flip()) } else { vec![Slot::Noun] };
    Some(attach(vec![Slot::Det(role)], nominal, g.dirs.spec?))
}

fn adpositional_phrase(g: &GrammarConfig) -> Option<Vec<Slot>> {
    Some(attach(vec![Slot::Adpos], vec![Slot::Name(Role::Obl)], g.dirs.adpos?))
}

fn relative_np(g: &GrammarConfig, role: Role, gap: Gap) -> Option<Vec<Slot>> {
    let body = match gap {
        Gap::Subj => clause(g, Frame::Trans, false, &[(ArgRole::Obj, vec![Slot::Name(Role::Obj)])])?,
        Gap::Obj => clause(g, Frame::Trans, false, &[(ArgRole::Subj, vec![Slot::RelSubj])])?,
    };
    let rel = attach(vec![Slot::RelPron(gap)], body, g.dirs.compl?);
    Some(attach(vec![Slot::RelHead(role)], rel, g.dirs.relcl?))
}

fn name(r: Role) -> Vec<Slot> {
    vec![Slot::Name(r)]
}

/// Short label of each construction, indexed by template id.
pub fn template_label(id: u8) -> &'static str {
    match id {
        1 => "intr",
        2 => "tr",
        3 => "ditr",
        4 => "spec",
        5 => "mod",
        6 => "pp",
        7 => "relsubj",
        8 => "relobj",
        9 => "scomp",
        10 => "main",
        11 => "modintr",
        12 => "specmodtr",
        _ => "?",
    }
}

/// Slot sequence for construction `id` (1..=12) under `g`, if the grammar
/// resolves every direction it needs.
pub fn linearize(id: u8, g: &GrammarConfig) -> Option<Vec<Slot>> {
    use ArgRole as A;
    match id {
        1 => clause(g, Frame::Intrans, false, &[(A::Subj, name(Role::Subj))]),
        2 => clause(g, Frame::Trans, false, &[(A::Subj, name(Role::Subj)), (A::Obj, name(Role::Obj))]),
        3 => clause(g, Frame::Ditrans, false, &[(A::Subj, name(Role::Subj)), (A::Obj1, name(Role::Obj1)), (A::Obj2, name(Role::Obj2))]),
        4 => clause(g, Frame::Intrans, false, &[(A::Subj, noun_phrase(g, Role::Subj, false)?)]),
        5 => clause(g, Frame::Trans, false, &[(A::Subj, name(Role::Subj)), (A::Obj, noun_phrase(g, Role::Obj, true)?)]),
        6 => clause(g, Frame::PpComp, false, &[(A::Subj, name(Role::Subj)), (A::Pp, adpositional_phrase(g)?)]),
        7 => clause(g, Frame::Intrans, false, &[(A::Subj, relative_np(g, Role::Subj, Gap::Subj)?)]),
        8 => clause(
            g,
            Frame::Ditrans,
            false,
            &[(A::Subj, relative_np(g, Role::Subj, Gap::Obj)?), (A::Obj1, name(Role::Obj1)), (A::Obj2, name(Role::Obj2))],
        ),
        9 => {
            let inner = clause(g, Frame::Intrans, false, &[(A::Subj, name(Role::Subj))])?;
            let sc = attach(vec![Slot::Compl], inner, g.dirs.compl?);
            clause(g, Frame::ScComp, false, &[(A::Subj, name(Role::Subj)), (A::Sc, sc)])
        }
        10 => clause(g, Frame::Trans, true, &[(A::Subj, noun_phrase(g, Role::Subj, false)?), (A::Obj, name(Role::Obj))]),
        11 => clause(g, Frame::Intrans, false, &[(A::Subj, noun_phrase(g, Role::Subj, true)?)]),
        12 => clause(g, Frame::Trans, false, &[(A::Subj, noun_phrase(g, Role::Subj, false)?), (A::Obj, noun_phrase(g, Role::Obj, true)?)]),
        _ => panic!("construction ids run from 1 to {TEMPLATE_COUNT}"),
    }
}

/// Surface clause order of a grammar, e.g. `SOV`, with `v2` appended when
/// verb-second changes construction 10.
pub fn order_label(g: &GrammarConfig) -> String {
    let Some(slots) = linearize(2, g) else { return "?".to_string() };
    let mut s: String = slots
        .iter()
        .map(|sl| match sl {
            Slot::Name(Role::Subj) => 'S',
            Slot::Name(_) => 'O',
            _ => 'V',
        })
        .collect();
    if g.v2 && linearize(10, &GrammarConfig { v2: false, ..*g }) != linearize(10, g) {
        s.push_str("v2");
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SentenceType {
    pub template: u8,
    pub name: String,
    pub slots: Vec<Slot>,
    pub categories: Vec<Category>,
}

impl SentenceType {
    pub fn category_string(&self) -> String {
        format_category_string(&self.categories)
    }
}

pub type Language = Vec<SentenceType>;

/// Parses a sentence type with the hearer's own category assignment.
pub fn parse_sentence(st: &SentenceType, g: &GrammarConfig) -> ParseOutcome {
    match lexicalize_all(&st.slots, g) {
        Some(cats) => parser::parse(&cats, &g.rules),
        None => ParseOutcome::unlexicalizable(),
    }
}

/// Every construction whose categories exist in `g` and whose linearisation
/// the parser accepts.
pub fn generate_language(g: &GrammarConfig) -> Result<Language> {
    let label = order_label(g);
    let mut out = Vec::new();
    for id in 1..=TEMPLATE_COUNT {
        let Some(slots) = linearize(id, g) else { continue };
        let Some(categories) = lexicalize_all(&slots, g) else { continue };
        if !parser::parse(&categories, &g.rules).success {
            continue;
        }
        out.push(SentenceType { template: id, name: format!("{label}-{}", template_label(id)), slots, categories });
    }
    if out.len() < 3 {
        return Err(Error::DegenerateLanguage(out.len()));
    }
    Ok(out)
}

/// Decodes and generates in one step.
pub fn language_of(ps: &PSettings) -> Result<Language> {
    generate_language(&decode(ps)?)
}

/// Mean total load over the sentence types of a language, each parsed with
/// `g`. Every type must parse.
pub fn mean_wml(lang: &[SentenceType], g: &GrammarConfig) -> Result<f64> {
    if lang.is_empty() {
        return Err(Error::DegenerateLanguage(0));
    }
    let mut sum = 0u64;
    for st in lang {
        let out = parse_sentence(st, g);
        if !out.success {
            return Err(Error::Unparsable(st.category_string()));
        }
        sum += out.total_wml as u64;
    }
    Ok(sum as f64 / lang.len() as f64)
}

pub fn stringset(lang: &[SentenceType]) -> BTreeSet<String> {
    lang.iter().map(|s| s.category_string()).collect()
}

/// Multiset containment of category strings.
pub fn is_subset_language(a: &[SentenceType], b: &[SentenceType]) -> bool {
    let mut counts: HashMap<String, i64> = HashMap::new();
    for s in b {
        *counts.entry(s.category_string()).or_default() += 1;
    }
    for s in a {
        let c = counts.entry(s.category_string()).or_default();
        *c -= 1;
        if *c < 0 {
            return false;
        }
    }
    true
}

/// Language dump: `# template <n>` followed by the category string.
pub fn dump_language(lang: &[SentenceType]) -> String {
    let mut out = String::new();
    for st in lang {
        let _ = writeln!(out, "# template {}", st.template);
        let _ = writeln!(out, "{}", st.category_string());
    }
    out
}

/// The named fixture languages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NamedLanguage {
    English,
    Welsh,
    Malagasy,
    Tagalog,
    Japanese,
    German,
    Hixkaryana,
    Osv,
}

impl NamedLanguage {
    pub const ALL: [NamedLanguage; 8] = [
        NamedLanguage::English,
        NamedLanguage::Welsh,
        NamedLanguage::Malagasy,
        NamedLanguage::Tagalog,
        NamedLanguage::Japanese,
        NamedLanguage::German,
        NamedLanguage::Hixkaryana,
        NamedLanguage::Osv,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedLanguage::English => "English",
            NamedLanguage::Welsh => "Welsh",
            NamedLanguage::Malagasy => "Malagasy",
            NamedLanguage::Tagalog => "Tagalog",
            NamedLanguage::Japanese => "Japanese",
            NamedLanguage::German => "German",
            NamedLanguage::Hixkaryana => "Hixkaryana",
            NamedLanguage::Osv => "OSV",
        }
    }

    /// Typological family label.
    pub fn family(self) -> &'static str {
        match self {
            NamedLanguage::English => "SVO",
            NamedLanguage::Welsh => "SVOv1",
            NamedLanguage::Malagasy => "VOS",
            NamedLanguage::Tagalog => "VSO",
            NamedLanguage::Japanese => "SOV",
            NamedLanguage::German => "SOVv2",
            NamedLanguage::Hixkaryana => "OVS",
            NamedLanguage::Osv => "OSV",
        }
    }

    /// Accepts the language name or its family label, case-insensitively.
    pub fn lookup(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|l| l.name().eq_ignore_ascii_case(s) || l.family().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownLanguage(s.to_string()))
    }

    /// Ordering-parameter row: gen v1 n subj obj v2 mod spec relcl adpos compl.
    /// `None` leaves the entry unset.
    fn row(self) -> [Option<char>; 11] {
        let r = |s: &str| -> [Option<char>; 11] {
            let v: Vec<Option<char>> = s.split(' ').map(|t| if t == "?" { None } else { t.chars().next() }).collect();
            v.try_into().unwrap()
        };
        match self {
            NamedLanguage::English => r("R F R L R F R R R R R"),
            NamedLanguage::German => r("R F R L L T R R R R R"),
            NamedLanguage::Japanese => r("L F L L L F L L L L ?"),
            NamedLanguage::Malagasy => r("R F R R R F R R R R R"),
            NamedLanguage::Tagalog => r("R T R R R F R R R R R"),
            NamedLanguage::Welsh => r("R T R L R F R R R L R"),
            NamedLanguage::Hixkaryana => r("L F L R L F R L L L L"),
            NamedLanguage::Osv => r("L T L L L F L L L L L"),
        }
    }

    /// Fixture genome: every rule and category present, ordering per row,
    /// all principles except entries the row leaves unset.
    pub fn genome(self) -> PSettings {
        const ORDERING: [ParamId; 11] = [
            ParamId::Gen,
            ParamId::V1,
            ParamId::Nom,
            ParamId::Subj,
            ParamId::Obj,
            ParamId::V2,
            ParamId::Mod,
            ParamId::Spec,
            ParamId::Relcl,
            ParamId::Adpos,
            ParamId::Compl,
        ];
        let mut ps = PSettings::all_unset();
        for id in &ParamId::ALL[..9] {
            ps.set(*id, PSetting::absolute(true));
        }
        for (id, v) in ORDERING.iter().zip(self.row()) {
            if let Some(c) = v {
                ps.set(*id, PSetting::absolute(matches!(c, 'T' | 'L')));
            }
        }
        ps
    }

    pub fn grammar(self) -> GrammarConfig {
        decode(&self.genome()).expect("fixture genomes decode")
    }

    pub fn language(self) -> Language {
        generate_language(&self.grammar()).expect("fixture languages are non-degenerate")
    }
}

/// Fixture genome by name or family label.
pub fn canonical(name: &str) -> Result<PSettings> {
    Ok(NamedLanguage::lookup(name)?.genome())
}

/// Which genomes [`enumerate_grammars`] ranges over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrammarSpace {
    /// The eleven ordering parameters, over the full rule and category
    /// inventory.
    Ordering,
    /// Every binary value combination of the seventeen non-fixed entries.
    Full,
}

#[derive(Debug, Clone)]
pub struct Enumeration {
    /// Genomes examined.
    pub genomes: usize,
    /// Genomes that decode and generate a non-degenerate language.
    pub valid: usize,
    /// One representative genome per distinct stringset.
    pub distinct: Vec<(PSettings, Language)>,
}

impl Enumeration {
    pub fn count(&self) -> usize {
        self.distinct.len()
    }

    /// Distinct grammars per clause-order label.
    pub fn families(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for (ps, _) in &self.distinct {
            let g = decode(ps).unwrap();
            *out.entry(order_label(&g)).or_default() += 1;
        }
        out
    }
}

/// All absolute genomes in `space` that yield a language, deduplicated by
/// stringset.
pub fn enumerate_grammars(space: GrammarSpace) -> Enumeration {
    let free: Vec<ParamId> = match space {
        GrammarSpace::Ordering => vec![
            ParamId::Gen,
            ParamId::V1,
            ParamId::Nom,
            ParamId::Subj,
            ParamId::Obj,
            ParamId::V2,
            ParamId::Mod,
            ParamId::Spec,
            ParamId::Relcl,
            ParamId::Adpos,
            ParamId::Compl,
        ],
        GrammarSpace::Full => ParamId::ALL.iter().copied().filter(|p| !matches!(p, ParamId::Applic | ParamId::S | ParamId::Np)).collect(),
    };
    let mut base = PSettings::all_unset();
    for id in ParamId::ALL {
        base.set(id, PSetting::absolute(true));
    }
    let mut seen: HashMap<BTreeSet<String>, usize> = HashMap::new();
    let mut distinct = Vec::new();
    let mut valid = 0;
    let total = 1usize << free.len();
    for bits in 0..total {
        let mut ps = base;
        for (i, id) in free.iter().enumerate() {
            ps.set(*id, PSetting::absolute(bits >> i & 1 == 1));
        }
        let Ok(lang) = language_of(&ps) else { continue };
        valid += 1;
        let key = stringset(&lang);
        if let Entry::Vacant(e) = seen.entry(key) {
            e.insert(distinct.len());
            distinct.push((ps, lang));
        }
    }
    Enumeration { genomes: total, valid, distinct }
}

/// The genome with one direction parameter set from a [`Dir`].
pub fn with_direction(ps: PSettings, id: ParamId, d: Dir) -> PSettings {
    ps.with(id, PSetting::absolute(dir_value(d)))
}
