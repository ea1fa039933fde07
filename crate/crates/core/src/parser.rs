//! Deterministic shift-reduce parsing with working-memory-load accounting.
//!
//! Reduce is always tried before Shift, so the parser builds the most
//! left-branching analysis available. Each Shift or Reduce assigns the new
//! top cell a load of 0, increments every cell, and records the stack sum.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::categorial::{sign_permutations, try_apply, try_compose, Category, LogicalForm, RuleSchema, Sign};

/// Which rule schemata a grammar makes available.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RuleSet {
    pub application: bool,
    pub composition: bool,
    pub permutation: bool,
}

impl RuleSet {
    pub const ALL: RuleSet = RuleSet { application: true, composition: true, permutation: true };
    pub const APPLICATION: RuleSet = RuleSet { application: true, composition: false, permutation: false };
}

/// Rotation indices chosen for the two top cells when permutation fired.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermChoice {
    pub next: usize,
    pub top: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    Shift(usize),
    Reduce { rule: RuleSchema, perm: Option<PermChoice> },
    Halt,
    Fail,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Shift(_) => f.write_str("Shift"),
            Step::Reduce { rule, perm: None } => write!(f, "Reduce ({rule})"),
            Step::Reduce { rule, perm: Some(_) } => write!(f, "Reduce (P+{rule})"),
            Step::Halt => f.write_str("Halt"),
            Step::Fail => f.write_str("Fail"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StackCell {
    pub sign: Sign,
    pub wml: u32,
}

/// One executed Shift or Reduce with the stack it left behind (bottom first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub step: Step,
    pub stack: Vec<Category>,
    pub wml: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseOutcome {
    pub success: bool,
    pub derivation: Vec<Step>,
    pub lf: Option<LogicalForm>,
    pub wml_record: Vec<u32>,
    pub total_wml: u32,
    pub trace: Vec<TraceRow>,
}

impl ParseOutcome {
    /// Largest instantaneous stack load reached.
    pub fn peak_wml(&self) -> u32 {
        self.wml_record.iter().copied().max().unwrap_or(0)
    }

    /// A failure for input that could not even be assigned categories.
    pub fn unlexicalizable() -> Self {
        ParseOutcome { success: false, derivation: vec![Step::Fail], lf: None, wml_record: vec![], total_wml: 0, trace: vec![] }
    }

    /// True for the outcome of [`ParseOutcome::unlexicalizable`].
    pub fn is_unlexicalizable(&self) -> bool {
        self.trace.is_empty() && !self.success
    }

    /// Renders the derivation as a Stack / Operation / Step / WML table.
    pub fn render_table(&self) -> String {
        let rows: Vec<(String, String, String, String)> = std::iter::once((String::new(), String::new(), "0".to_string(), "0".to_string()))
            .chain(self.trace.iter().enumerate().map(|(i, r)| {
                let stack = r.stack.iter().rev().map(|c| c.to_string()).collect::<Vec<_>>().join(" | ");
                (stack, r.step.to_string(), (i + 1).to_string(), r.wml.to_string())
            }))
            .collect();
        let w0 = rows.iter().map(|r| r.0.len()).max().unwrap_or(0).max(5);
        let w1 = rows.iter().map(|r| r.1.len()).max().unwrap_or(0).max(9);
        let mut out = String::new();
        let _ = writeln!(out, "{:<w0$}  {:<w1$}  {:>4}  {:>4}", "Stack", "Operation", "Step", "WML");
        for r in &rows {
            let _ = writeln!(out, "{:<w0$}  {:<w1$}  {:>4}  {:>4}", r.0, r.1, r.2, r.3);
        }
        let end = if self.success { "Halt" } else { "Fail" };
        let _ = writeln!(out, "{end}: total WML {}", self.total_wml);
        out
    }
}

/// Tries one Reduce on the two top signs: application, then composition,
/// then permutation of either cell followed by application or composition.
pub fn reduce_pair(next: &Sign, top: &Sign, rules: &RuleSet) -> Option<(Step, Sign)> {
    let binary = |l: &Sign, r: &Sign| -> Option<(RuleSchema, Sign)> {
        if rules.application {
            if let Some(x) = try_apply(l, r) {
                return Some(x);
            }
        }
        if rules.composition {
            if let Some(x) = try_compose(l, r) {
                return Some(x);
            }
        }
        None
    };
    if let Some((rule, s)) = binary(next, top) {
        return Some((Step::Reduce { rule, perm: None }, s));
    }
    if rules.permutation {
        let next_rots = sign_permutations(next);
        let top_rots = sign_permutations(top);
        if next_rots.len() > 1 || top_rots.len() > 1 {
            for (ni, n) in next_rots.iter().enumerate() {
                for (ti, t) in top_rots.iter().enumerate() {
                    if ni == 0 && ti == 0 {
                        continue;
                    }
                    if let Some((rule, s)) = binary(n, t) {
                        return Some((Step::Reduce { rule, perm: Some(PermChoice { next: ni, top: ti }) }, s));
                    }
                }
            }
        }
    }
    None
}

/// Parses a category string.
pub fn parse(input: &[Category], rules: &RuleSet) -> ParseOutcome {
    let mut buffer = input.iter().enumerate();
    let mut stack: Vec<StackCell> = Vec::with_capacity(input.len());
    let mut derivation = Vec::new();
    let mut wml_record = Vec::new();
    let mut trace = Vec::new();

    let mut account = |stack: &mut Vec<StackCell>, step: Step, derivation: &mut Vec<Step>| {
        if let Some(top) = stack.last_mut() {
            top.wml = 0;
        }
        for c in stack.iter_mut() {
            c.wml += 1;
        }
        let sum = stack.iter().map(|c| c.wml).sum();
        wml_record.push(sum);
        derivation.push(step);
        trace.push(TraceRow { step, stack: stack.iter().map(|c| c.sign.cat.clone()).collect(), wml: sum });
    };

    loop {
        if stack.len() >= 2 {
            let n = stack.len();
            if let Some((step, sign)) = reduce_pair(&stack[n - 2].sign, &stack[n - 1].sign, rules) {
                stack.truncate(n - 2);
                stack.push(StackCell { sign, wml: 0 });
                account(&mut stack, step, &mut derivation);
                continue;
            }
        }
        if let Some((i, cat)) = buffer.next() {
            stack.push(StackCell { sign: Sign::lexical(i, cat.clone()), wml: 0 });
            account(&mut stack, Step::Shift(i), &mut derivation);
            continue;
        }
        break;
    }

    let success = stack.len() == 1 && stack[0].sign.cat.is_sentence();
    derivation.push(if success { Step::Halt } else { Step::Fail });
    let total_wml = wml_record.iter().sum();
    ParseOutcome { success, derivation, lf: if success { Some(stack.pop().unwrap().sign.lf) } else { None }, wml_record, total_wml, trace }
}

/// Total load of a successful parse.
pub fn wml_of(input: &[Category], rules: &RuleSet) -> crate::Result<u32> {
    let out = parse(input, rules);
    if out.success {
        Ok(out.total_wml)
    } else {
        Err(crate::Error::Unparsable(crate::categorial::format_category_string(input)))
    }
}

/// Load of holding a whole string unanalysed: every item shifted, nothing reduced.
pub fn shift_only_peak(len: usize) -> u32 {
    (len * (len + 1) / 2) as u32
}
