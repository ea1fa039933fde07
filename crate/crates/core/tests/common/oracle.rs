//! Reference implementations used to cross-check the parser. Categories are
//! read back from their printed form so nothing here shares code with the
//! library.

use std::collections::BTreeSet;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cat {
    Atom(String, Option<String>),
    /// result, slash (`true` = `/`), argument
    Fun(Box<Cat>, bool, Box<Cat>),
}

impl Cat {
    pub fn parse(s: &str) -> Cat {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let c = expr(&chars, &mut pos);
        assert_eq!(pos, chars.len(), "trailing input in {s}");
        c
    }

    fn args(&self) -> Vec<(Cat, bool)> {
        let mut out = Vec::new();
        let mut cur = self;
        while let Cat::Fun(r, d, a) = cur {
            out.push(((**a).clone(), *d));
            cur = r;
        }
        out
    }

    fn target(&self) -> &Cat {
        match self {
            Cat::Fun(r, _, _) => r.target(),
            a => a,
        }
    }

    pub fn is_s(&self) -> bool {
        matches!(self, Cat::Atom(a, _) if a == "S")
    }
}

fn expr(c: &[char], pos: &mut usize) -> Cat {
    let mut left = primary(c, pos);
    while *pos < c.len() && (c[*pos] == '/' || c[*pos] == '\\') {
        let fwd = c[*pos] == '/';
        *pos += 1;
        let right = primary(c, pos);
        left = Cat::Fun(Box::new(left), fwd, Box::new(right));
    }
    left
}

fn primary(c: &[char], pos: &mut usize) -> Cat {
    if c[*pos] == '(' {
        *pos += 1;
        let e = expr(c, pos);
        assert_eq!(c[*pos], ')');
        *pos += 1;
        return e;
    }
    let word = |pos: &mut usize| {
        let start = *pos;
        while *pos < c.len() && c[*pos].is_ascii_alphanumeric() {
            *pos += 1;
        }
        c[start..*pos].iter().collect::<String>()
    };
    let atom = word(pos);
    let role = if *pos < c.len() && c[*pos] == ':' {
        *pos += 1;
        Some(word(pos))
    } else {
        None
    };
    Cat::Atom(atom, role)
}

fn unify(a: &Cat, b: &Cat) -> bool {
    match (a, b) {
        (Cat::Atom(x, rx), Cat::Atom(y, ry)) => x == y && (rx.is_none() || ry.is_none() || rx == ry),
        (Cat::Fun(r1, d1, a1), Cat::Fun(r2, d2, a2)) => d1 == d2 && unify(r1, r2) && unify(a1, a2),
        _ => false,
    }
}

/// Every cyclic rotation of the argument spine, identity first, without
/// duplicates.
pub fn rotations(c: &Cat) -> Vec<Cat> {
    let mut args = c.args();
    let mut out = vec![c.clone()];
    if args.len() < 2 {
        return out;
    }
    for _ in 1..args.len() {
        args.rotate_left(1);
        let r = args.iter().rev().fold(c.target().clone(), |acc, (a, d)| Cat::Fun(Box::new(acc), *d, Box::new(a.clone())));
        if !out.contains(&r) {
            out.push(r);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rules {
    pub comp: bool,
    pub perm: bool,
}

/// Application, then composition, in the order the parser prefers them.
fn binary(l: &Cat, r: &Cat, rules: Rules) -> Option<(&'static str, Cat)> {
    if let Cat::Fun(x, true, y) = l {
        if unify(y, r) {
            return Some(("FA", (**x).clone()));
        }
    }
    if let Cat::Fun(x, false, y) = r {
        if unify(y, l) {
            return Some(("BA", (**x).clone()));
        }
    }
    if !rules.comp {
        return None;
    }
    if let (Cat::Fun(x, true, y), Cat::Fun(y2, true, z)) = (l, r) {
        if unify(y, y2) {
            return Some(("FC", Cat::Fun(x.clone(), true, z.clone())));
        }
    }
    if let (Cat::Fun(y2, false, z), Cat::Fun(x, false, y)) = (l, r) {
        if unify(y, y2) {
            return Some(("BC", Cat::Fun(x.clone(), false, z.clone())));
        }
    }
    None
}

/// Every rule that combines the pair, not just the preferred one.
fn binary_all(l: &Cat, r: &Cat, rules: Rules) -> Vec<(&'static str, Cat)> {
    let mut out = Vec::new();
    if let Cat::Fun(x, true, y) = l {
        if unify(y, r) {
            out.push(("FA", (**x).clone()));
        }
    }
    if let Cat::Fun(x, false, y) = r {
        if unify(y, l) {
            out.push(("BA", (**x).clone()));
        }
    }
    if rules.comp {
        if let (Cat::Fun(x, true, y), Cat::Fun(y2, true, z)) = (l, r) {
            if unify(y, y2) {
                out.push(("FC", Cat::Fun(x.clone(), true, z.clone())));
            }
        }
        if let (Cat::Fun(y2, false, z), Cat::Fun(x, false, y)) = (l, r) {
            if unify(y, y2) {
                out.push(("BC", Cat::Fun(x.clone(), false, z.clone())));
            }
        }
    }
    out
}

/// First reduction of two adjacent cells, with the rule label the parser
/// prints.
pub fn reduce(l: &Cat, r: &Cat, rules: Rules) -> Option<(String, Cat)> {
    if let Some((name, c)) = binary(l, r, rules) {
        return Some((name.to_string(), c));
    }
    if !rules.perm {
        return None;
    }
    let (lr, rr) = (rotations(l), rotations(r));
    for (i, a) in lr.iter().enumerate() {
        for (j, b) in rr.iter().enumerate() {
            if i == 0 && j == 0 {
                continue;
            }
            if let Some((name, c)) = binary(a, b, rules) {
                return Some((format!("P+{name}"), c));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Replay {
    pub success: bool,
    /// Operation labels: `Shift`, `Reduce (FA)`, `Reduce (P+BC)`, ...
    pub ops: Vec<String>,
    pub record: Vec<u32>,
    pub total: u32,
}

/// Greedy reduce-first shift-reduce run. A cell's load is one more than the
/// number of operations performed since it was created.
pub fn replay(input: &[Cat], rules: Rules) -> Replay {
    let mut stack: Vec<(Cat, usize)> = Vec::new();
    let mut ops = Vec::new();
    let mut record = Vec::new();
    let mut next = 0;
    loop {
        let n = stack.len();
        let reduced = if n >= 2 { reduce(&stack[n - 2].0, &stack[n - 1].0, rules) } else { None };
        let op = if let Some((name, c)) = reduced {
            stack.truncate(n - 2);
            stack.push((c, ops.len()));
            format!("Reduce ({name})")
        } else if next < input.len() {
            stack.push((input[next].clone(), ops.len()));
            next += 1;
            "Shift".to_string()
        } else {
            break;
        };
        ops.push(op);
        let now = ops.len() - 1;
        record.push(stack.iter().map(|(_, born)| (now - born + 1) as u32).sum());
    }
    let success = stack.len() == 1 && stack[0].0.is_s();
    Replay { success, ops, total: record.iter().sum(), record }
}

/// Categories derivable for the whole input under any bracketing.
pub fn chart(input: &[Cat], rules: Rules) -> BTreeSet<Cat> {
    let n = input.len();
    if n == 0 {
        return BTreeSet::new();
    }
    let mut cells: Vec<Vec<BTreeSet<Cat>>> = vec![vec![BTreeSet::new(); n + 1]; n];
    for (i, c) in input.iter().enumerate() {
        cells[i][i + 1].insert(c.clone());
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut out = BTreeSet::new();
            for k in i + 1..j {
                let (left, right) = (&cells[i][k], &cells[k][j]);
                for l in left {
                    for r in right {
                        let (lr, rr) = if rules.perm { (rotations(l), rotations(r)) } else { (vec![l.clone()], vec![r.clone()]) };
                        for a in &lr {
                            for b in &rr {
                                for (_, c) in binary_all(a, b, rules) {
                                    out.insert(c);
                                }
                            }
                        }
                    }
                }
            }
            cells[i][j] = out;
        }
    }
    std::mem::take(&mut cells[0][n])
}

pub fn derivable(input: &[Cat], rules: Rules) -> bool {
    chart(input, rules).iter().any(Cat::is_s)
}

/// Meanings with globally unique binder names.
#[derive(Debug, Clone)]
pub enum Tm {
    Leaf(usize),
    Var(u32),
    Lam(u32, Box<Tm>),
    App(Box<Tm>, Vec<Tm>),
}

struct Fresh(u32);

impl Fresh {
    fn next(&mut self) -> u32 {
        self.0 += 1;
        self.0
    }
}

fn role_rank(c: &Cat) -> u8 {
    match c {
        Cat::Atom(_, Some(r)) => match r.as_str() {
            "s" => 0,
            "o" | "o1" => 1,
            "o2" => 2,
            _ => 3,
        },
        _ => u8::MAX,
    }
}

/// Binders in consumption order; the word takes its arguments in semantic
/// role order, unroled ones last, ties innermost first.
fn lexical(i: usize, c: &Cat, fresh: &mut Fresh) -> Tm {
    let args = c.args();
    if args.is_empty() {
        return Tm::Leaf(i);
    }
    let vars: Vec<u32> = args.iter().map(|_| fresh.next()).collect();
    let mut order: Vec<usize> = (0..args.len()).collect();
    order.sort_by_key(|&k| (role_rank(&args[k].0), std::cmp::Reverse(k)));
    let body = Tm::App(Box::new(Tm::Leaf(i)), order.iter().map(|&k| Tm::Var(vars[k])).collect());
    vars.iter().rev().fold(body, |b, v| Tm::Lam(*v, Box::new(b)))
}

fn rename(t: &Tm, map: &mut Vec<(u32, u32)>, fresh: &mut Fresh) -> Tm {
    match t {
        Tm::Leaf(i) => Tm::Leaf(*i),
        Tm::Var(v) => Tm::Var(map.iter().rev().find(|(a, _)| a == v).map_or(*v, |(_, b)| *b)),
        Tm::Lam(v, b) => {
            let n = fresh.next();
            map.push((*v, n));
            let body = rename(b, map, fresh);
            map.pop();
            Tm::Lam(n, Box::new(body))
        }
        Tm::App(f, a) => Tm::App(Box::new(rename(f, map, fresh)), a.iter().map(|x| rename(x, map, fresh)).collect()),
    }
}

fn subst(t: &Tm, v: u32, s: &Tm, fresh: &mut Fresh) -> Tm {
    match t {
        Tm::Var(x) if *x == v => rename(s, &mut Vec::new(), fresh),
        Tm::Leaf(_) | Tm::Var(_) => t.clone(),
        Tm::Lam(x, b) => Tm::Lam(*x, Box::new(subst(b, v, s, fresh))),
        Tm::App(f, a) => Tm::App(Box::new(subst(f, v, s, fresh)), a.iter().map(|x| subst(x, v, s, fresh)).collect()),
    }
}

fn nf(t: &Tm, fresh: &mut Fresh) -> Tm {
    match t {
        Tm::Leaf(_) | Tm::Var(_) => t.clone(),
        Tm::Lam(v, b) => Tm::Lam(*v, Box::new(nf(b, fresh))),
        Tm::App(f, args) => {
            let mut head = nf(f, fresh);
            let mut rest: Vec<Tm> = args.iter().map(|a| nf(a, fresh)).collect();
            while !rest.is_empty() {
                match head {
                    Tm::Lam(v, b) => {
                        let a = rest.remove(0);
                        head = nf(&subst(&b, v, &a, fresh), fresh);
                    }
                    Tm::App(g, mut a) => {
                        a.append(&mut rest);
                        head = Tm::App(g, a);
                    }
                    other => {
                        head = Tm::App(Box::new(other), std::mem::take(&mut rest));
                    }
                }
            }
            head
        }
    }
}

/// Prints a term the way the parser prints logical forms: binders are named
/// by their depth.
pub fn show(t: &Tm) -> String {
    fn go(t: &Tm, env: &mut Vec<u32>, out: &mut String) {
        match t {
            Tm::Leaf(i) => out.push_str(&format!("w{i}")),
            Tm::Var(v) => {
                let d = env.iter().rposition(|x| x == v).expect("free variable");
                out.push_str(&format!("x{d}"));
            }
            Tm::Lam(v, b) => {
                out.push_str(&format!("\\x{}.", env.len()));
                env.push(*v);
                go(b, env, out);
                env.pop();
            }
            Tm::App(f, a) => {
                go(f, env, out);
                out.push('(');
                for (k, x) in a.iter().enumerate() {
                    if k > 0 {
                        out.push_str(", ");
                    }
                    go(x, env, out);
                }
                out.push(')');
            }
        }
    }
    let mut out = String::new();
    go(t, &mut Vec::new(), &mut out);
    out
}

/// One rotation step: the first-consumed argument becomes the last.
fn rotate_tm(m: &Tm, arity: usize, fresh: &mut Fresh) -> Tm {
    let ys: Vec<u32> = (0..arity).map(|_| fresh.next()).collect();
    let mut args = vec![Tm::Var(ys[arity - 1])];
    args.extend(ys[..arity - 1].iter().map(|y| Tm::Var(*y)));
    let body = Tm::App(Box::new(m.clone()), args);
    nf(&ys.iter().rev().fold(body, |b, y| Tm::Lam(*y, Box::new(b))), fresh)
}

fn sign_rotations(c: &Cat, m: &Tm, fresh: &mut Fresh) -> Vec<(Cat, Tm)> {
    let n = c.args().len();
    let mut out = vec![(c.clone(), m.clone())];
    let (mut cc, mut mm) = (c.clone(), m.clone());
    for _ in 1..n.max(1) {
        let mut args = cc.args();
        args.rotate_left(1);
        cc = args.iter().rev().fold(c.target().clone(), |acc, (a, d)| Cat::Fun(Box::new(acc), *d, Box::new(a.clone())));
        mm = rotate_tm(&mm, n, fresh);
        if !out.iter().any(|(x, _)| *x == cc) {
            out.push((cc.clone(), mm.clone()));
        }
    }
    out
}

fn combine(l: &(Cat, Tm), r: &(Cat, Tm), name: &str, cat: Cat, fresh: &mut Fresh) -> (Cat, Tm) {
    let app = |f: &Tm, a: &Tm| Tm::App(Box::new(f.clone()), vec![a.clone()]);
    let tm = match name {
        "FA" => app(&l.1, &r.1),
        "BA" => app(&r.1, &l.1),
        _ => {
            let (outer, inner) = if name == "FC" { (&l.1, &r.1) } else { (&r.1, &l.1) };
            let z = fresh.next();
            Tm::Lam(z, Box::new(app(outer, &app(inner, &Tm::Var(z)))))
        }
    };
    (cat, nf(&tm, fresh))
}

/// Printed meanings of every complete `S` derivation of the input.
pub fn readings(input: &[Cat], rules: Rules) -> BTreeSet<String> {
    let n = input.len();
    let mut fresh = Fresh(0);
    let mut cells: Vec<Vec<Vec<(Cat, Tm)>>> = vec![vec![Vec::new(); n + 1]; n];
    for (i, c) in input.iter().enumerate() {
        cells[i][i + 1].push((c.clone(), lexical(i, c, &mut fresh)));
    }
    for len in 2..=n {
        for i in 0..=n - len {
            let j = i + len;
            let mut out: Vec<(Cat, Tm)> = Vec::new();
            let mut seen = BTreeSet::new();
            for k in i + 1..j {
                let (left, right) = (cells[i][k].clone(), cells[k][j].clone());
                for l in left {
                    for r in right.iter().cloned() {
                        let (ls, rs) = if rules.perm {
                            (sign_rotations(&l.0, &l.1, &mut fresh), sign_rotations(&r.0, &r.1, &mut fresh))
                        } else {
                            (vec![l.clone()], vec![r.clone()])
                        };
                        for a in &ls {
                            for b in &rs {
                                for (name, cat) in binary_all(&a.0, &b.0, rules) {
                                    let s = combine(a, b, name, cat, &mut fresh);
                                    if seen.insert((s.0.clone(), show(&s.1))) {
                                        out.push(s);
                                    }
                                }
                            }
                        }
                    }
                }
            }
            cells[i][j] = out;
        }
    }
    if n == 0 {
        return BTreeSet::new();
    }
    cells[0][n].iter().filter(|(c, _)| c.is_s()).map(|(_, t)| show(t)).collect()
}
