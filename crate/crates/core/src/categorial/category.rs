use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::CategoryParseError;

/// Atomic category names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Atom {
    S,
    NP,
    N,
    /// Relative clause.
    Rc,
    PP,
    /// Complementizer clause.
    Sc,
}

impl Atom {
    pub const ALL: [Atom; 6] = [Atom::S, Atom::NP, Atom::N, Atom::Rc, Atom::PP, Atom::Sc];

    pub fn as_str(self) -> &'static str {
        match self {
            Atom::S => "S",
            Atom::NP => "NP",
            Atom::N => "N",
            Atom::Rc => "Rc",
            Atom::PP => "PP",
            Atom::Sc => "Sc",
        }
    }
}

/// Semantic-role annotation carried by atomic categories.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Role {
    Subj,
    Obj,
    Obj1,
    Obj2,
    /// Object of an adposition.
    Obl,
}

impl Role {
    pub fn as_str(self) -> &'static str {
        match self {
            Role::Subj => "s",
            Role::Obj => "o",
            Role::Obj1 => "o1",
            Role::Obj2 => "o2",
            Role::Obl => "p",
        }
    }

    /// Position of the role in the canonical semantic argument order.
    pub fn rank(self) -> u8 {
        match self {
            Role::Subj => 0,
            Role::Obj | Role::Obj1 => 1,
            Role::Obj2 => 2,
            Role::Obl => 3,
        }
    }
}

/// Slash direction: `Left` is `\` (argument to the left), `Right` is `/`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Dir {
    Left,
    Right,
}

impl Dir {
    pub fn slash(self) -> char {
        match self {
            Dir::Left => '\\',
            Dir::Right => '/',
        }
    }

    pub fn flip(self) -> Dir {
        match self {
            Dir::Left => Dir::Right,
            Dir::Right => Dir::Left,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Category {
    Atomic { atom: Atom, role: Option<Role> },
    Functor { result: Box<Category>, arg: Box<Category>, dir: Dir },
}

/// One argument on the spine of a functor category.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arg {
    pub cat: Category,
    pub dir: Dir,
}

impl Category {
    pub fn atom(atom: Atom) -> Self {
        Category::Atomic { atom, role: None }
    }

    pub fn with_role(atom: Atom, role: Role) -> Self {
        Category::Atomic { atom, role: Some(role) }
    }

    pub fn functor(result: Category, arg: Category, dir: Dir) -> Self {
        Category::Functor { result: Box::new(result), arg: Box::new(arg), dir }
    }

    pub fn fwd(result: Category, arg: Category) -> Self {
        Self::functor(result, arg, Dir::Right)
    }

    pub fn back(result: Category, arg: Category) -> Self {
        Self::functor(result, arg, Dir::Left)
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Category::Atomic { .. })
    }

    /// True for the bare sentence category `S` (any role).
    pub fn is_sentence(&self) -> bool {
        matches!(self, Category::Atomic { atom: Atom::S, .. })
    }

    /// Number of arguments on the functor spine.
    pub fn arity(&self) -> usize {
        match self {
            Category::Atomic { .. } => 0,
            Category::Functor { result, .. } => 1 + result.arity(),
        }
    }

    /// Innermost result of the spine.
    pub fn target(&self) -> &Category {
        match self {
            Category::Atomic { .. } => self,
            Category::Functor { result, .. } => result.target(),
        }
    }

    /// Spine arguments in consumption order (outermost slash first).
    pub fn args(&self) -> Vec<Arg> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Category::Functor { result, arg, dir } = cur {
            out.push(Arg { cat: (**arg).clone(), dir: *dir });
            cur = result;
        }
        out
    }

    /// Rebuilds a category from a target and arguments in consumption order.
    pub fn from_spine(target: Category, args: &[Arg]) -> Category {
        args.iter().rev().fold(target, |acc, a| Category::functor(acc, a.cat.clone(), a.dir))
    }

    /// Structural match used by the combinatory rules. Roles only block a
    /// match when both sides carry one and they differ.
    pub fn matches(&self, other: &Category) -> bool {
        match (self, other) {
            (Category::Atomic { atom: a, role: ra }, Category::Atomic { atom: b, role: rb }) => {
                a == b
                    && match (ra, rb) {
                        (Some(x), Some(y)) => x == y,
                        _ => true,
                    }
            }
            (Category::Functor { result: r1, arg: a1, dir: d1 }, Category::Functor { result: r2, arg: a2, dir: d2 }) => {
                d1 == d2 && r1.matches(r2) && a1.matches(a2)
            }
            _ => false,
        }
    }

    /// Every atom mentioned anywhere in the category.
    pub fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Atom>) {
        match self {
            Category::Atomic { atom, .. } => out.push(*atom),
            Category::Functor { result, arg, .. } => {
                result.collect_atoms(out);
                arg.collect_atoms(out);
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, nested: bool) -> fmt::Result {
        match self {
            Category::Atomic { atom, role } => {
                f.write_str(atom.as_str())?;
                if let Some(r) = role {
                    write!(f, ":{}", r.as_str())?;
                }
                Ok(())
            }
            Category::Functor { result, arg, dir } => {
                if nested {
                    f.write_str("(")?;
                }
                result.write(f, true)?;
                write!(f, "{}", dir.slash())?;
                arg.write(f, true)?;
                if nested {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, false)
    }
}

impl FromStr for Category {
    type Err = CategoryParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut p = CatParser { src: s, pos: 0 };
        let cat = p.expr()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(cat)
    }
}

/// Parses a whitespace-separated category string such as `NP (S\NP)/NP NP`.
/// Parenthesised groups may contain spaces.
pub fn parse_category_string(s: &str) -> Result<Vec<Category>, CategoryParseError> {
    let mut p = CatParser { src: s, pos: 0 };
    let mut out = Vec::new();
    loop {
        p.skip_ws();
        if p.pos == s.len() {
            break;
        }
        out.push(p.expr()?);
    }
    Ok(out)
}

pub fn format_category_string(cats: &[Category]) -> String {
    cats.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
}

struct CatParser<'a> {
    src: &'a str,
    pos: usize,
}

impl CatParser<'_> {
    fn error(&self, msg: &str) -> CategoryParseError {
        CategoryParseError { input: self.src.to_string(), position: self.pos, message: msg.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    // Inside parentheses whitespace is insignificant; at top level a space
    // ends the current category.
    fn expr(&mut self) -> Result<Category, CategoryParseError> {
        self.expr_in(false)
    }

    fn expr_in(&mut self, grouped: bool) -> Result<Category, CategoryParseError> {
        let mut left = self.term()?;
        loop {
            if grouped {
                self.skip_ws();
            }
            let dir = match self.peek() {
                Some('/') => Dir::Right,
                Some('\\') => Dir::Left,
                _ => return Ok(left),
            };
            self.pos += 1;
            if grouped {
                self.skip_ws();
            }
            let right = self.term()?;
            left = Category::functor(left, right, dir);
        }
    }

    fn term(&mut self) -> Result<Category, CategoryParseError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                self.skip_ws();
                let inner = self.expr_in(true)?;
                self.skip_ws();
                if self.peek() != Some(')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_alphabetic() => self.atomic(),
            _ => Err(self.error("expected category")),
        }
    }

    fn atomic(&mut self) -> Result<Category, CategoryParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        let name = &self.src[start..self.pos];
        let atom = match name {
            "S" => Atom::S,
            "NP" => Atom::NP,
            "N" => Atom::N,
            "Rc" => Atom::Rc,
            "PP" => Atom::PP,
            "Sc" => Atom::Sc,
            _ => {
                self.pos = start;
                return Err(self.error("unknown atomic category"));
            }
        };
        let role = if self.peek() == Some(':') {
            self.pos += 1;
            let rs = self.pos;
            while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric()) {
                self.pos += 1;
            }
            Some(match &self.src[rs..self.pos] {
                "s" => Role::Subj,
                "o" => Role::Obj,
                "o1" => Role::Obj1,
                "o2" => Role::Obj2,
                "p" => Role::Obl,
                _ => {
                    self.pos = rs;
                    return Err(self.error("unknown role tag"));
                }
            })
        } else {
            None
        };
        Ok(Category::Atomic { atom, role })
    }
}
