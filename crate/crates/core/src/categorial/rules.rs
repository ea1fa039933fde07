use std::fmt;

use serde::{Deserialize, Serialize};

use super::category::{Category, Dir};
use super::lf::LogicalForm;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleSchema {
    /// Forward application.
    FA,
    /// Backward application.
    BA,
    /// Forward composition.
    FC,
    /// Backward composition.
    BC,
    /// Generalized weak permutation.
    Permute,
}

impl RuleSchema {
    pub fn is_unary(self) -> bool {
        self == RuleSchema::Permute
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RuleSchema::FA => "FA",
            RuleSchema::BA => "BA",
            RuleSchema::FC => "FC",
            RuleSchema::BC => "BC",
            RuleSchema::Permute => "P",
        }
    }
}

impl fmt::Display for RuleSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A category paired with its meaning.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sign {
    pub cat: Category,
    pub lf: LogicalForm,
}

impl Sign {
    pub fn new(cat: Category, lf: LogicalForm) -> Self {
        Sign { cat, lf }
    }

    pub fn lexical(position: usize, cat: Category) -> Self {
        let lf = LogicalForm::lexical(position, &cat);
        Sign { cat, lf }
    }
}

/// Forward then backward application.
pub fn try_apply(left: &Sign, right: &Sign) -> Option<(RuleSchema, Sign)> {
    if let Category::Functor { result, arg, dir: Dir::Right } = &left.cat {
        if arg.matches(&right.cat) {
            return Some((RuleSchema::FA, Sign::new((**result).clone(), LogicalForm::apply(&left.lf, &right.lf))));
        }
    }
    if let Category::Functor { result, arg, dir: Dir::Left } = &right.cat {
        if arg.matches(&left.cat) {
            return Some((RuleSchema::BA, Sign::new((**result).clone(), LogicalForm::apply(&right.lf, &left.lf))));
        }
    }
    None
}

/// Forward then backward composition, one pending argument deep.
pub fn try_compose(left: &Sign, right: &Sign) -> Option<(RuleSchema, Sign)> {
    // X/Y Y/Z => X/Z
    if let (Category::Functor { result: x, arg: y, dir: Dir::Right }, Category::Functor { result: y2, arg: z, dir: Dir::Right }) =
        (&left.cat, &right.cat)
    {
        if y.matches(y2) {
            let cat = Category::fwd((**x).clone(), (**z).clone());
            return Some((RuleSchema::FC, Sign::new(cat, LogicalForm::compose(&left.lf, &right.lf))));
        }
    }
    // Y\Z X\Y => X\Z
    if let (Category::Functor { result: y2, arg: z, dir: Dir::Left }, Category::Functor { result: x, arg: y, dir: Dir::Left }) =
        (&left.cat, &right.cat)
    {
        if y.matches(y2) {
            let cat = Category::back((**x).clone(), (**z).clone());
            return Some((RuleSchema::BC, Sign::new(cat, LogicalForm::compose(&right.lf, &left.lf))));
        }
    }
    None
}

/// Moves the first-consumed argument to the innermost position. Absent for
/// categories with fewer than two arguments.
pub fn permute_once(c: &Category) -> Option<Category> {
    let mut args = c.args();
    if args.len() < 2 {
        return None;
    }
    args.rotate_left(1);
    Some(Category::from_spine(c.target().clone(), &args))
}

/// All distinct cyclic rotations, starting with `c` itself.
pub fn all_permutations(c: &Category) -> Vec<Category> {
    let mut out = vec![c.clone()];
    let mut cur = c.clone();
    while let Some(next) = permute_once(&cur) {
        if next == *c {
            break;
        }
        if !out.contains(&next) {
            out.push(next.clone());
        }
        cur = next;
    }
    out
}

/// Permutes a sign, keeping its meaning aligned with the new argument order.
pub fn permute_sign(s: &Sign) -> Option<Sign> {
    let cat = permute_once(&s.cat)?;
    let lf = s.lf.rotate(s.cat.arity());
    Some(Sign::new(cat, lf))
}

/// Rotations of a sign in the same order as [`all_permutations`].
pub fn sign_permutations(s: &Sign) -> Vec<Sign> {
    let mut out = vec![s.clone()];
    let mut cur = s.clone();
    while let Some(next) = permute_sign(&cur) {
        if next.cat == s.cat {
            break;
        }
        if !out.iter().any(|o| o.cat == next.cat) {
            out.push(next.clone());
        }
        cur = next;
    }
    out
}
