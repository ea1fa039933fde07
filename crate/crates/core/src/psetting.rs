//! The 20-entry p-setting genome and its decoding into a grammar.
//!
//! Each entry is a principle (absolute), a default parameter, or an unset
//! parameter. Direction parameters inherit from a more general type when
//! they carry no value of their own: `mod`, `spec` and `relcl` from `n`,
//! and `n`, `subj`, `adpos`, `compl` from `gen`. `obj` (argument order) has
//! no parent.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::categorial::{Atom, Dir};
use crate::error::{Error, Result};
use crate::parser::RuleSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParamId {
    Applic,
    Comp,
    Perm,
    S,
    Np,
    N,
    Rc,
    Pp,
    Sc,
    Gen,
    V1,
    Nom,
    Subj,
    Obj,
    V2,
    Mod,
    Spec,
    Relcl,
    Adpos,
    Compl,
}

/// Whether a parameter's values are T/F or L/R.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamKind {
    Binary,
    Direction,
}

impl ParamId {
    /// Canonical order: general before specific.
    pub const ALL: [ParamId; 20] = [
        ParamId::Applic,
        ParamId::Comp,
        ParamId::Perm,
        ParamId::S,
        ParamId::Np,
        ParamId::N,
        ParamId::Rc,
        ParamId::Pp,
        ParamId::Sc,
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

    /// Parameters tracked when comparing default and unset learners.
    pub const TRACKED: [ParamId; 5] = [ParamId::Gen, ParamId::Subj, ParamId::Obj, ParamId::Comp, ParamId::Perm];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamId::Applic => "applic",
            ParamId::Comp => "comp",
            ParamId::Perm => "perm",
            ParamId::S => "S",
            ParamId::Np => "NP",
            ParamId::N => "N",
            ParamId::Rc => "Rc",
            ParamId::Pp => "PP",
            ParamId::Sc => "Sc",
            ParamId::Gen => "gen",
            ParamId::V1 => "v1",
            ParamId::Nom => "n",
            ParamId::Subj => "subj",
            ParamId::Obj => "obj",
            ParamId::V2 => "v2",
            ParamId::Mod => "mod",
            ParamId::Spec => "spec",
            ParamId::Relcl => "relcl",
            ParamId::Adpos => "adpos",
            ParamId::Compl => "compl",
        }
    }

    pub fn kind(self) -> ParamKind {
        use ParamId::*;
        match self {
            Gen | Nom | Subj | Obj | Mod | Spec | Relcl | Adpos | Compl => ParamKind::Direction,
            _ => ParamKind::Binary,
        }
    }

    /// True for the atomic-category switches.
    pub fn is_category(self) -> bool {
        matches!(self, ParamId::S | ParamId::Np | ParamId::N | ParamId::Rc | ParamId::Pp | ParamId::Sc)
    }

    /// The more general direction type this one inherits from.
    pub fn parent(self) -> Option<ParamId> {
        use ParamId::*;
        match self {
            Mod | Spec | Relcl => Some(Nom),
            Nom | Subj | Adpos | Compl => Some(Gen),
            _ => None,
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParamId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s || (s == "argo" && *p == ParamId::Obj))
            .ok_or_else(|| Error::Config(format!("unknown p-setting {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Status {
    /// A principle: fixed for life.
    Absolute,
    /// A parameter with an initial value that may be reset once.
    Default,
    /// A parameter with no initial value.
    Unset,
    /// A parameter whose value was fixed during learning.
    Reset,
}

impl Status {
    pub fn symbol(self) -> char {
        match self {
            Status::Absolute => 'A',
            Status::Default => 'D',
            Status::Unset => '?',
            Status::Reset => 'R',
        }
    }
}

/// One entry. `value` uses the learning code `true` = T/L, `false` = F/R.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PSetting {
    pub status: Status,
    pub value: Option<bool>,
}

impl PSetting {
    pub const UNSET: PSetting = PSetting { status: Status::Unset, value: None };

    pub fn absolute(v: bool) -> Self {
        PSetting { status: Status::Absolute, value: Some(v) }
    }

    pub fn default(v: bool) -> Self {
        PSetting { status: Status::Default, value: Some(v) }
    }

    pub fn is_well_formed(&self) -> bool {
        (self.status == Status::Unset) == self.value.is_none()
    }

    pub fn is_parameter(&self) -> bool {
        self.status != Status::Absolute
    }
}

pub fn value_symbol(kind: ParamKind, v: Option<bool>) -> char {
    match (kind, v) {
        (_, None) => '-',
        (ParamKind::Binary, Some(true)) => 'T',
        (ParamKind::Binary, Some(false)) => 'F',
        (ParamKind::Direction, Some(true)) => 'L',
        (ParamKind::Direction, Some(false)) => 'R',
    }
}

pub fn dir_value(d: Dir) -> bool {
    d == Dir::Left
}

/// The full ordered genome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PSettings(pub [PSetting; 20]);

impl PSettings {
    pub fn all_unset() -> Self {
        PSettings([PSetting::UNSET; 20])
    }

    /// Builds a genome from entries in any order; every id must appear once.
    pub fn from_entries<I: IntoIterator<Item = (ParamId, PSetting)>>(entries: I) -> Result<Self> {
        let mut slots: [Option<PSetting>; 20] = [None; 20];
        for (id, s) in entries {
            if !s.is_well_formed() {
                return Err(Error::Config(format!("{id}: status and value disagree")));
            }
            if slots[id.index()].replace(s).is_some() {
                return Err(Error::Config(format!("{id} given twice")));
            }
        }
        let mut out = [PSetting::UNSET; 20];
        for (i, s) in slots.into_iter().enumerate() {
            out[i] = s.ok_or(Error::MissingSetting(ParamId::ALL[i]))?;
        }
        Ok(PSettings(out))
    }

    pub fn get(&self, id: ParamId) -> PSetting {
        self.0[id.index()]
    }

    pub fn set(&mut self, id: ParamId, s: PSetting) {
        self.0[id.index()] = s;
    }

    pub fn with(mut self, id: ParamId, s: PSetting) -> Self {
        self.set(id, s);
        self
    }

    pub fn iter(&self) -> impl Iterator<Item = (ParamId, PSetting)> + '_ {
        ParamId::ALL.iter().copied().zip(self.0.iter().copied())
    }

    /// Every entry turned into a principle with the same value.
    pub fn as_absolute(mut self) -> Self {
        for s in self.0.iter_mut() {
            if s.value.is_some() {
                s.status = Status::Absolute;
            }
        }
        self
    }

    /// Resolved direction of a direction parameter, following inheritance.
    pub fn direction(&self, id: ParamId) -> Option<Dir> {
        match self.get(id).value {
            Some(v) => Some(if v { Dir::Left } else { Dir::Right }),
            None => id.parent().and_then(|p| self.direction(p)),
        }
    }

    /// Genome text: one `<id> <status> <value>` line per entry.
    pub fn to_text(&self) -> String {
        self.iter().map(|(id, s)| format!("{} {} {}\n", id.name(), s.status.symbol(), value_symbol(id.kind(), s.value))).collect()
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| Error::Genome { line: lineno + 1, message: m.to_string() };
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(err("expected `<id> <status> <value>`"));
            }
            let id: ParamId = fields[0].parse().map_err(|_| err("unknown p-setting id"))?;
            let status = match fields[1] {
                "A" => Status::Absolute,
                "D" => Status::Default,
                "?" => Status::Unset,
                "R" => Status::Reset,
                _ => return Err(err("status must be A, D, ? or R")),
            };
            let value = match (id.kind(), fields[2]) {
                (_, "-") => None,
                (ParamKind::Binary, "T") | (ParamKind::Direction, "L") => Some(true),
                (ParamKind::Binary, "F") | (ParamKind::Direction, "R") => Some(false),
                _ => return Err(err("value does not fit the p-setting kind")),
            };
            entries.push((id, PSetting { status, value }));
        }
        Self::from_entries(entries)
    }
}

impl fmt::Display for PSettings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.iter().map(|(id, s)| format!("{}={}{}", id.name(), s.status.symbol(), value_symbol(id.kind(), s.value))).collect();
        f.write_str(&parts.join(" "))
    }
}

/// Resolved slash directions for every construction slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Directions {
    /// The general head direction, taken by verbal complements.
    pub head: Option<Dir>,
    pub subj: Option<Dir>,
    pub obj: Option<Dir>,
    pub modifier: Option<Dir>,
    pub spec: Option<Dir>,
    pub relcl: Option<Dir>,
    pub adpos: Option<Dir>,
    pub compl: Option<Dir>,
}

/// A decoded grammar: available rules, category inventory, and resolved
/// ordering.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GrammarConfig {
    pub rules: RuleSet,
    /// Presence of N, Rc, PP and Sc; S and NP are always present.
    pub n: bool,
    pub rc: bool,
    pub pp: bool,
    pub sc: bool,
    pub dirs: Directions,
    /// The verb consumes its subject before its other arguments.
    pub v1: bool,
    /// Main clauses of construction 10 surface as S V O.
    pub v2: bool,
}

impl GrammarConfig {
    pub fn has_atom(&self, a: Atom) -> bool {
        match a {
            Atom::S | Atom::NP => true,
            Atom::N => self.n,
            Atom::Rc => self.rc,
            Atom::PP => self.pp,
            Atom::Sc => self.sc,
        }
    }

    /// Copy with a different rule inventory.
    pub fn with_rules(mut self, rules: RuleSet) -> Self {
        self.rules = rules;
        self
    }
}

/// Decodes a genome (or learner state). Unset rule and category entries
/// leave the rule or category out, and unset direction entries inherit; a
/// direction that resolves to nothing makes only the constructions needing
/// it unavailable.
pub fn decode(ps: &PSettings) -> Result<GrammarConfig> {
    let on = |id: ParamId| ps.get(id).value.unwrap_or(false);
    for id in [ParamId::Applic, ParamId::S, ParamId::Np] {
        if !on(id) {
            return Err(Error::ImpossibleGrammar(format!("{id} is F")));
        }
    }
    let dir = |id: ParamId| ps.direction(id);
    let dirs = Directions {
        head: dir(ParamId::Gen),
        subj: dir(ParamId::Subj),
        obj: dir(ParamId::Obj),
        modifier: dir(ParamId::Mod),
        spec: dir(ParamId::Spec),
        relcl: dir(ParamId::Relcl),
        adpos: dir(ParamId::Adpos),
        compl: dir(ParamId::Compl),
    };
    let v1 = ps.get(ParamId::V1).value.unwrap_or(false);
    let v2 = ps.get(ParamId::V2).value.unwrap_or(false);
    if v1 && v2 {
        return Err(Error::ImpossibleGrammar("v1 and v2 are both T".into()));
    }
    Ok(GrammarConfig {
        rules: RuleSet { application: true, composition: on(ParamId::Comp), permutation: on(ParamId::Perm) },
        n: on(ParamId::N),
        rc: on(ParamId::Rc),
        pp: on(ParamId::Pp),
        sc: on(ParamId::Sc),
        dirs,
        v1,
        v2,
    })
}
