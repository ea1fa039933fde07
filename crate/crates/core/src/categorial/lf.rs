//! Applicative logical forms.
//!
//! Lexical items are represented by their input position. Intermediate
//! meanings are lambda terms with de Bruijn indices, kept in beta-normal
//! form, so that two derivations of the same reading compare equal
//! structurally.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::category::Category;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogicalForm {
    /// The lexical item at this input position.
    Leaf(usize),
    /// Bound variable, de Bruijn index (0 = nearest binder).
    Var(usize),
    Lam(Box<LogicalForm>),
    /// Functor applied to arguments in semantic argument order.
    App(Box<LogicalForm>, Vec<LogicalForm>),
}

use LogicalForm::*;

impl LogicalForm {
    /// The lexical meaning of a category at `position`: a curried functor
    /// whose arguments are laid out in canonical semantic order (subject,
    /// objects, obliques, then anything unroled), regardless of the order
    /// in which the category consumes them.
    pub fn lexical(position: usize, cat: &Category) -> LogicalForm {
        let args = cat.args();
        let n = args.len();
        if n == 0 {
            return Leaf(position);
        }
        // consumption index k is bound by the k-th binder from outside
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&k| {
            let rank = match &args[k].cat {
                Category::Atomic { role: Some(r), .. } => r.rank(),
                _ => u8::MAX,
            };
            // ties: innermost argument first
            (rank, n - k)
        });
        let body = App(Box::new(Leaf(position)), order.into_iter().map(|k| Var(n - 1 - k)).collect());
        wrap_lams(body, n)
    }

    /// Applies a functor meaning to one argument and normalises.
    pub fn apply(functor: &LogicalForm, arg: &LogicalForm) -> LogicalForm {
        normalize(&App(Box::new(functor.clone()), vec![arg.clone()]))
    }

    /// `λz. outer (inner z)`, normalised.
    pub fn compose(outer: &LogicalForm, inner: &LogicalForm) -> LogicalForm {
        let body = App(Box::new(shift(outer, 1, 0)), vec![App(Box::new(shift(inner, 1, 0)), vec![Var(0)])]);
        normalize(&Lam(Box::new(body)))
    }

    /// Meaning change matching one generalized-weak-permutation step on a
    /// category of the given arity: the first-consumed binder becomes the
    /// last-consumed one. The term is eta-expanded first so that it has a
    /// full binder prefix.
    pub fn rotate(&self, arity: usize) -> LogicalForm {
        if arity < 2 {
            return self.clone();
        }
        let expanded = eta_expand(self, arity);
        let mut body = &expanded;
        for _ in 0..arity {
            match body {
                Lam(b) => body = b,
                _ => unreachable!("eta expansion yields a full binder prefix"),
            }
        }
        let remapped = remap(body, 0, &|i| if i == arity - 1 { 0 } else { i + 1 }, arity);
        wrap_lams(remapped, arity)
    }

    /// True when no binder or bound variable remains.
    pub fn is_closed_applicative(&self) -> bool {
        match self {
            Leaf(_) => true,
            Var(_) | Lam(_) => false,
            App(f, args) => f.is_closed_applicative() && args.iter().all(|a| a.is_closed_applicative()),
        }
    }

    /// Input positions mentioned by the term, in left-to-right term order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves(&self, out: &mut Vec<usize>) {
        match self {
            Leaf(i) => out.push(*i),
            Var(_) => {}
            Lam(b) => b.collect_leaves(out),
            App(f, args) => {
                f.collect_leaves(out);
                for a in args {
                    a.collect_leaves(out);
                }
            }
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        match self {
            Leaf(i) => write!(f, "w{i}"),
            Var(k) => write!(f, "x{}", depth.wrapping_sub(k + 1)),
            Lam(b) => {
                write!(f, "\\x{}.", depth)?;
                b.write(f, depth + 1)
            }
            App(func, args) => {
                func.write(f, depth)?;
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f, depth)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for LogicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

fn wrap_lams(mut body: LogicalForm, n: usize) -> LogicalForm {
    for _ in 0..n {
        body = Lam(Box::new(body));
    }
    body
}

fn eta_expand(t: &LogicalForm, n: usize) -> LogicalForm {
    let args = (0..n).rev().map(Var).collect();
    normalize(&wrap_lams(App(Box::new(shift(t, n as isize, 0)), args), n))
}

/// Renames the `n` binders directly enclosing `t` through `f`.
fn remap(t: &LogicalForm, depth: usize, f: &dyn Fn(usize) -> usize, n: usize) -> LogicalForm {
    match t {
        Leaf(i) => Leaf(*i),
        Var(k) => {
            if *k >= depth && *k - depth < n {
                Var(f(*k - depth) + depth)
            } else {
                Var(*k)
            }
        }
        Lam(b) => Lam(Box::new(remap(b, depth + 1, f, n))),
        App(func, args) => App(Box::new(remap(func, depth, f, n)), args.iter().map(|a| remap(a, depth, f, n)).collect()),
    }
}

fn shift(t: &LogicalForm, d: isize, cutoff: usize) -> LogicalForm {
    match t {
        Leaf(i) => Leaf(*i),
        Var(k) => {
            if *k >= cutoff {
                Var((*k as isize + d) as usize)
            } else {
                Var(*k)
            }
        }
        Lam(b) => Lam(Box::new(shift(b, d, cutoff + 1))),
        App(f, args) => App(Box::new(shift(f, d, cutoff)), args.iter().map(|a| shift(a, d, cutoff)).collect()),
    }
}

fn subst(t: &LogicalForm, j: usize, s: &LogicalForm) -> LogicalForm {
    match t {
        Leaf(i) => Leaf(*i),
        Var(k) => {
            if *k == j {
                s.clone()
            } else {
                Var(*k)
            }
        }
        Lam(b) => Lam(Box::new(subst(b, j + 1, &shift(s, 1, 0)))),
        App(f, args) => App(Box::new(subst(f, j, s)), args.iter().map(|a| subst(a, j, s)).collect()),
    }
}

fn beta(body: &LogicalForm, arg: &LogicalForm) -> LogicalForm {
    shift(&subst(body, 0, &shift(arg, 1, 0)), -1, 0)
}

/// Beta-normal form with flattened applications.
pub fn normalize(t: &LogicalForm) -> LogicalForm {
    match t {
        Leaf(_) | Var(_) => t.clone(),
        Lam(b) => Lam(Box::new(normalize(b))),
        App(f, args) => {
            let head = normalize(f);
            let args: Vec<LogicalForm> = args.iter().map(normalize).collect();
            apply_all(head, args)
        }
    }
}

fn apply_all(mut head: LogicalForm, args: Vec<LogicalForm>) -> LogicalForm {
    let mut rest = args.into_iter();
    loop {
        match head {
            Lam(body) => match rest.next() {
                Some(a) => head = normalize(&beta(&body, &a)),
                None => return Lam(body),
            },
            App(h, mut inner) => {
                inner.extend(rest);
                return App(h, inner);
            }
            other => {
                let rest: Vec<_> = rest.collect();
                return if rest.is_empty() { other } else { App(Box::new(other), rest) };
            }
        }
    }
}
