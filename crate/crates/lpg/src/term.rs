//! Equation syntax, intensional normal form and the finite point set Δ_ε.
//!
//! Equations are parsed from text (see [`parse`]), normalized to a list of
//! inequalities `1 <= w1 | ... | wk` whose joinands are products of iterated
//! inverses of variables ([`to_intensional`]), and finally expanded into the
//! labelled points that compatible surjections range over ([`delta_epsilon`]).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    One,
    Prod(Box<Term>, Box<Term>),
    Join(Vec<Term>),
    Meet(Vec<Term>),
    LInv(Box<Term>),
    RInv(Box<Term>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Leq,
}

/// A parsed equation `lhs rel rhs`, with its symbol count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Term,
    pub rel: Rel,
    pub rhs: Term,
    /// Total symbol count |ε|: variable occurrences, constants, binary
    /// operation symbols, single inversions and the relation symbol.
    pub length: usize,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {msg}")]
    Syntax { offset: usize, msg: String },
    #[error("unknown token at byte {offset}: {found:?}")]
    UnknownToken { offset: usize, found: char },
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// `t^(m)`: m-fold `^l` for positive m, |m|-fold `^r` for negative m.
    pub fn iter_inv(self, m: i64) -> Term {
        let mut t = self;
        for _ in 0..m.unsigned_abs() {
            t = if m > 0 { Term::LInv(Box::new(t)) } else { Term::RInv(Box::new(t)) };
        }
        t
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::One => {}
            Term::Prod(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Join(ts) | Term::Meet(ts) => ts.iter().for_each(|t| t.collect_vars(out)),
            Term::LInv(t) | Term::RInv(t) => t.collect_vars(out),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::One => write!(f, "1"),
            Term::Prod(a, b) => write!(f, "({a} {b})"),
            Term::Join(ts) | Term::Meet(ts) => {
                let sep = if matches!(self, Term::Join(_)) { " | " } else { " & " };
                write!(f, "(")?;
                for (i, t) in ts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Term::LInv(t) => write!(f, "{t}^l"),
            Term::RInv(t) => write!(f, "{t}^r"),
        }
    }
}

impl fmt::Display for Equation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.rel {
            Rel::Eq => "=",
            Rel::Leq => "<=",
        };
        write!(f, "{} {} {}", self.lhs, r, self.rhs)
    }
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    One,
    LParen,
    RParen,
    Star,
    Bar,
    Amp,
    Eq,
    Leq,
    CaretL,
    CaretR,
    CaretNum(i64),
    End,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (off, c) = bytes[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        match c {
            '(' => out.push((off, Tok::LParen)),
            ')' => out.push((off, Tok::RParen)),
            '*' | '·' => out.push((off, Tok::Star)),
            '|' => out.push((off, Tok::Bar)),
            '&' => out.push((off, Tok::Amp)),
            '=' => out.push((off, Tok::Eq)),
            '≤' => out.push((off, Tok::Leq)),
            '<' => {
                if i + 1 < bytes.len() && bytes[i + 1].1 == '=' {
                    out.push((off, Tok::Leq));
                    i += 1;
                } else {
                    return Err(ParseError::Syntax { offset: off, msg: "expected '<='".into() });
                }
            }
            '^' => {
                let next = bytes.get(i + 1).map(|p| p.1);
                match next {
                    Some('l') | Some('ℓ') => {
                        out.push((off, Tok::CaretL));
                        i += 1;
                    }
                    Some('r') => {
                        out.push((off, Tok::CaretR));
                        i += 1;
                    }
                    Some('(') => {
                        let mut j = i + 2;
                        let mut s = String::new();
                        while j < bytes.len() && bytes[j].1 != ')' {
                            if !bytes[j].1.is_whitespace() {
                                s.push(bytes[j].1);
                            }
                            j += 1;
                        }
                        if j >= bytes.len() {
                            return Err(ParseError::Syntax { offset: off, msg: "unclosed '^('".into() });
                        }
                        let m: i64 = s.parse().map_err(|_| ParseError::Syntax {
                            offset: off,
                            msg: format!("bad exponent {s:?}"),
                        })?;
                        out.push((off, Tok::CaretNum(m)));
                        i = j;
                    }
                    _ => {
                        return Err(ParseError::Syntax {
                            offset: off,
                            msg: "expected 'l', 'r' or '(' after '^'".into(),
                        })
                    }
                }
            }
            '1' if !bytes.get(i + 1).is_some_and(|p| p.1.is_alphanumeric() || p.1 == '_') => {
                out.push((off, Tok::One))
            }
            c if c.is_alphabetic() || c == '_' => {
                let mut s = String::new();
                let mut j = i;
                while j < bytes.len() && (bytes[j].1.is_alphanumeric() || bytes[j].1 == '_') {
                    s.push(bytes[j].1);
                    j += 1;
                }
                out.push((off, Tok::Ident(s)));
                i = j;
                continue;
            }
            other => return Err(ParseError::UnknownToken { offset: off, found: other }),
        }
        i += 1;
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    count: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }
    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }
    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }
    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), msg: msg.to_string() })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.meet()?];
        while *self.peek() == Tok::Bar {
            self.bump();
            self.count += 1;
            parts.push(self.meet()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::Join(parts) })
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut parts = vec![self.prod()?];
        while *self.peek() == Tok::Amp {
            self.bump();
            self.count += 1;
            parts.push(self.prod()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Term::Meet(parts) })
    }

    fn starts_atom(t: &Tok) -> bool {
        matches!(t, Tok::Ident(_) | Tok::One | Tok::LParen)
    }

    fn prod(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.post()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
            } else if !Self::starts_atom(self.peek()) {
                break;
            }
            self.count += 1;
            let rhs = self.post()?;
            acc = Term::Prod(Box::new(acc), Box::new(rhs));
        }
        Ok(acc)
    }

    fn post(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        loop {
            match self.peek().clone() {
                Tok::CaretL => {
                    self.bump();
                    self.count += 1;
                    t = Term::LInv(Box::new(t));
                }
                Tok::CaretR => {
                    self.bump();
                    self.count += 1;
                    t = Term::RInv(Box::new(t));
                }
                Tok::CaretNum(m) => {
                    self.bump();
                    self.count += m.unsigned_abs() as usize;
                    t = t.iter_inv(m);
                }
                _ => break,
            }
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.bump() {
            Tok::Ident(s) => {
                self.count += 1;
                Ok(Term::Var(s))
            }
            Tok::One => {
                self.count += 1;
                Ok(Term::One)
            }
            Tok::LParen => {
                let t = self.term()?;
                if self.bump() != Tok::RParen {
                    self.pos -= 1;
                    return self.err("expected ')'");
                }
                Ok(t)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a variable, '1' or '('")
            }
        }
    }
}

/// Parse an equation `term (= | <=) term`.
pub fn parse(text: &str) -> Result<Equation, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, count: 0 };
    let lhs = p.term()?;
    let rel = match p.bump() {
        Tok::Eq => Rel::Eq,
        Tok::Leq => Rel::Leq,
        _ => {
            p.pos -= 1;
            return p.err("expected '=' or '<='");
        }
    };
    let rhs = p.term()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(Equation { lhs, rel, rhs, length: p.count + 1 })
}

/// Parse a single term (no relation symbol).
pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, count: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.err("trailing input");
    }
    Ok(t)
}

// ---------------------------------------------------------------------------
// Intensional form

/// One factor `x_var^(exp)` of an intensional term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub var: usize,
    pub exp: i64,
}

/// Product of factors, leftmost first; the empty word is `1`.
pub type Word = Vec<Factor>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntensionalEquation {
    pub joinands: Vec<Word>,
    pub vars: Vec<String>,
    pub length: usize,
}

pub fn word_to_string(w: &[Factor], vars: &[String]) -> String {
    if w.is_empty() {
        return "1".into();
    }
    w.iter()
        .map(|f| {
            if f.exp == 0 {
                vars[f.var].clone()
            } else {
                format!("{}^({})", vars[f.var], f.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

impl fmt::Display for IntensionalEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "1 <= ")?;
        for (i, w) in self.joinands.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{}", word_to_string(w, &self.vars))?;
        }
        Ok(())
    }
}

impl IntensionalEquation {
    /// Build directly from joinands over the given variable names.
    pub fn new(joinands: Vec<Word>, vars: Vec<String>, length: usize) -> Self {
        IntensionalEquation { joinands, vars, length }
    }

    /// Re-express as a term equation `1 <= w1 | ... | wk`.
    pub fn to_equation(&self) -> Equation {
        let word_term = |w: &Word| -> Term {
            let mut it = w.iter().map(|f| Term::Var(self.vars[f.var].clone()).iter_inv(f.exp));
            match it.next() {
                None => Term::One,
                Some(first) => it.fold(first, |a, b| Term::Prod(Box::new(a), Box::new(b))),
            }
        };
        let mut ts: Vec<Term> = self.joinands.iter().map(word_term).collect();
        let rhs = if ts.len() == 1 { ts.pop().unwrap() } else { Term::Join(ts) };
        Equation { lhs: Term::One, rel: Rel::Leq, rhs, length: self.length }
    }
}

// Negation normal form: inverses pushed onto variables.
enum Nnf {
    Atom(Factor),
    One,
    Prod(Box<Nnf>, Box<Nnf>),
    Join(Vec<Nnf>),
    Meet(Vec<Nnf>),
}

fn push_inv(t: &Term, k: i64, var_ix: &BTreeMap<String, usize>) -> Nnf {
    match t {
        Term::Var(v) => Nnf::Atom(Factor { var: var_ix[v], exp: k }),
        Term::One => Nnf::One,
        Term::LInv(s) => push_inv(s, k + 1, var_ix),
        Term::RInv(s) => push_inv(s, k - 1, var_ix),
        Term::Prod(a, b) => {
            let (a, b) = (push_inv(a, k, var_ix), push_inv(b, k, var_ix));
            if k.rem_euclid(2) == 1 {
                Nnf::Prod(Box::new(b), Box::new(a))
            } else {
                Nnf::Prod(Box::new(a), Box::new(b))
            }
        }
        Term::Join(ts) | Term::Meet(ts) => {
            let parts: Vec<Nnf> = ts.iter().map(|s| push_inv(s, k, var_ix)).collect();
            let is_join = matches!(t, Term::Join(_)) == (k.rem_euclid(2) == 0);
            if is_join {
                Nnf::Join(parts)
            } else {
                Nnf::Meet(parts)
            }
        }
    }
}

type Clause = BTreeSet<Word>;

fn cnf(t: &Nnf) -> Vec<Clause> {
    fn dedup(v: Vec<Clause>) -> Vec<Clause> {
        let mut seen = BTreeSet::new();
        v.into_iter().filter(|c| seen.insert(c.clone())).collect()
    }
    match t {
        Nnf::Atom(f) => vec![BTreeSet::from([vec![*f]])],
        Nnf::One => vec![BTreeSet::from([vec![]])],
        Nnf::Meet(ts) => dedup(ts.iter().flat_map(cnf).collect()),
        Nnf::Join(ts) => {
            let mut acc: Vec<Clause> = vec![BTreeSet::new()];
            for s in ts {
                let cs = cnf(s);
                acc = acc
                    .iter()
                    .flat_map(|a| cs.iter().map(move |b| a.union(b).cloned().collect()))
                    .collect();
            }
            dedup(acc)
        }
        Nnf::Prod(a, b) => {
            let (ca, cb) = (cnf(a), cnf(b));
            let mut out = Vec::new();
            for x in &ca {
                for y in &cb {
                    let mut c = BTreeSet::new();
                    for u in x {
                        for v in y {
                            let mut w = u.clone();
                            w.extend(v.iter().copied());
                            c.insert(w);
                        }
                    }
                    out.push(c);
                }
            }
            dedup(out)
        }
    }
}

/// Variables of an equation in order of first occurrence.
pub fn equation_vars(eq: &Equation) -> Vec<String> {
    let mut vars = Vec::new();
    eq.lhs.collect_vars(&mut vars);
    eq.rhs.collect_vars(&mut vars);
    vars
}

/// Normalize to a conjunction of intensional inequalities.
///
/// `s = t` is split into both inequalities, `s <= t` becomes `1 <= s^r t`,
/// inverses are pushed to the variables and the result is brought into
/// conjunctive form: each clause `w1 | ... | wk` of the meet becomes one
/// [`IntensionalEquation`].
pub fn to_intensional(eq: &Equation) -> Vec<IntensionalEquation> {
    let vars = equation_vars(eq);
    let var_ix: BTreeMap<String, usize> =
        vars.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
    let mut sides = vec![(&eq.lhs, &eq.rhs)];
    if eq.rel == Rel::Eq {
        sides.push((&eq.rhs, &eq.lhs));
    }
    let mut out: Vec<IntensionalEquation> = Vec::new();
    for (s, t) in sides {
        let combined = Nnf::Prod(Box::new(push_inv(s, -1, &var_ix)), Box::new(push_inv(t, 0, &var_ix)));
        for clause in cnf(&combined) {
            let joinands: Vec<Word> = clause.into_iter().collect();
            let used: BTreeSet<usize> = joinands.iter().flatten().map(|f| f.var).collect();
            // Re-index to the variables actually occurring in this clause.
            let remap: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, v)| (*v, i)).collect();
            let joinands = joinands
                .into_iter()
                .map(|w| w.into_iter().map(|f| Factor { var: remap[&f.var], exp: f.exp }).collect())
                .collect();
            let ie = IntensionalEquation {
                joinands,
                vars: used.iter().map(|v| vars[*v].clone()).collect(),
                length: eq.length,
            };
            if !out.contains(&ie) {
                out.push(ie);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Final subwords and Δ_ε

/// FS_ε: all suffixes of all joinands, including 1 and the joinands.
pub fn final_subwords(eps: &IntensionalEquation) -> BTreeSet<Word> {
    let mut fs = BTreeSet::new();
    for w in &eps.joinands {
        for k in 0..=w.len() {
            fs.insert(w[k..].to_vec());
        }
    }
    fs
}

/// One letter of a Δ_ε point. `Down`/`Up` name the lower/upper cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Var(usize, i64),
    Down,
    Up,
}

/// A point of Δ_ε: a word of letters, outermost first; empty is `1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DeltaPoint(pub Vec<Letter>);

impl DeltaPoint {
    pub fn from_word(w: &[Factor]) -> Self {
        DeltaPoint(w.iter().map(|f| Letter::Var(f.var, f.exp)).collect())
    }

    pub fn one() -> Self {
        DeltaPoint(Vec::new())
    }

    /// Prepend a letter.
    pub fn cons(&self, l: Letter) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(l);
        v.extend_from_slice(&self.0);
        DeltaPoint(v)
    }

    /// The point without its outermost letter.
    pub fn tail(&self) -> Option<(Letter, DeltaPoint)> {
        self.0.split_first().map(|(h, t)| (*h, DeltaPoint(t.to_vec())))
    }

    /// Canonical printing, e.g. `x - x^(1) y`.
    pub fn display(&self, vars: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        self.0
            .iter()
            .map(|l| match l {
                Letter::Var(v, 0) => vars[*v].clone(),
                Letter::Var(v, m) => format!("{}^({})", vars[*v], m),
                Letter::Down => "-".into(),
                Letter::Up => "+".into(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// S_ε: triples (variable, exponent, v) with v and x^(m)v both final subwords.
pub fn s_epsilon(eps: &IntensionalEquation) -> BTreeSet<(usize, i64, Word)> {
    final_subwords(eps)
        .into_iter()
        .filter(|u| !u.is_empty())
        .map(|u| (u[0].var, u[0].exp, u[1..].to_vec()))
        .collect()
}

/// Δ_{x,m}^v.
pub fn delta_xmv(x: usize, m: i64, v: &[Factor]) -> BTreeSet<DeltaPoint> {
    let base = DeltaPoint::from_word(v);
    let mut out = BTreeSet::from([base.clone()]);
    let top = m.unsigned_abs() as i64;
    let sign = if m < 0 { -1 } else { 1 };
    let deco = if m < 0 { Letter::Up } else { Letter::Down };
    for j in 0..=top {
        // σ_j x^(j) σ_{j+1} x^(j+1) … σ_top x^(top) v, built inside out.
        let mut layer = vec![base.clone()];
        for level in (j..=top).rev() {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for p in &layer {
                let q = p.cons(Letter::Var(x, sign * level));
                if level != 0 {
                    next.push(q.cons(deco));
                }
                next.push(q);
            }
            layer = next;
        }
        out.extend(layer);
    }
    out
}

/// Δ_ε = {1} ∪ ⋃ Δ_{x_i,m}^v over S_ε.
pub fn delta_epsilon(eps: &IntensionalEquation) -> BTreeSet<DeltaPoint> {
    let mut out = BTreeSet::from([DeltaPoint::one()]);
    for (x, m, v) in s_epsilon(eps) {
        out.extend(delta_xmv(x, m, &v));
    }
    out
}

/// The size bound 2^{|ε|}|ε|⁴ on Δ_ε.
pub fn delta_size_bound(length: usize) -> BigUint {
    let l = BigUint::from(length);
    (BigUint::from(1u8) << length) * l.pow(4)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ie(s: &str) -> Vec<String> {
        to_intensional(&parse(s).unwrap()).iter().map(|e| e.to_string()).collect()
    }

    #[test]
    fn parses_products_and_inverses() {
        let e = parse("x * y <= y * x").unwrap();
        assert_eq!(e.rel, Rel::Leq);
        assert_eq!(e.lhs, Term::Prod(Box::new(Term::var("x")), Box::new(Term::var("y"))));
        let e = parse("x^l * x <= 1").unwrap();
        assert_eq!(e.lhs, Term::Prod(Box::new(Term::LInv(Box::new(Term::var("x")))), Box::new(Term::var("x"))));
        assert_eq!(e.rhs, Term::One);
        let e = parse("x^(2) = x^(-2)").unwrap();
        assert_eq!(e.lhs, Term::var("x").iter_inv(2));
        assert_eq!(e.rhs, Term::var("x").iter_inv(-2));
    }

    #[test]
    fn juxtaposition_and_precedence() {
        let e = parse("x y | z & w = 1").unwrap();
        match e.lhs {
            Term::Join(ref ts) => {
                assert_eq!(ts.len(), 2);
                assert!(matches!(ts[1], Term::Meet(_)));
            }
            _ => panic!("{:?}", e.lhs),
        }
    }

    #[test]
    fn parse_errors_carry_offsets() {
        assert!(matches!(parse("x <= $"), Err(ParseError::UnknownToken { offset: 5, .. })));
        assert!(matches!(parse("x <= (y"), Err(ParseError::Syntax { .. })));
        assert!(matches!(parse("x y"), Err(ParseError::Syntax { .. })));
    }

    #[test]
    fn lengths() {
        assert_eq!(parse("1 <= x").unwrap().length, 3);
        assert_eq!(parse("x y = y x").unwrap().length, 7);
        assert_eq!(parse("x^(-2) <= x").unwrap().length, 5);
    }

    #[test]
    fn intensional_examples() {
        assert_eq!(ie("x y = y x"), vec!["1 <= y^(-1) x^(-1) y x", "1 <= x^(-1) y^(-1) x y"]);
        assert_eq!(ie("1 <= x"), vec!["1 <= x"]);
        assert_eq!(ie("x^l = x^r"), vec!["1 <= x x^(-1)", "1 <= x^(-2) x^(1)"]);
        assert_eq!(ie("x <= 1"), vec!["1 <= x^(-1)"]);
        assert_eq!(ie("x^l^r = x"), vec!["1 <= x^(-1) x"]);
    }

    #[test]
    fn meets_split_into_clauses() {
        let v = ie("1 <= x & y");
        assert_eq!(v, vec!["1 <= x", "1 <= y"]);
        let v = ie("1 <= (x | y) z");
        assert_eq!(v, vec!["1 <= x z | y z"]);
    }

    #[test]
    fn final_subword_examples() {
        let e = &to_intensional(&parse("1 <= x^(-1) x").unwrap())[0];
        let fs: BTreeSet<String> = final_subwords(e).iter().map(|w| word_to_string(w, &e.vars)).collect();
        assert_eq!(fs, ["1", "x", "x^(-1) x"].map(String::from).into_iter().collect());
        let e = &to_intensional(&parse("1 <= x y | y x").unwrap())[0];
        assert_eq!(final_subwords(e).len(), 5);
    }

    #[test]
    fn delta_examples() {
        let e = &to_intensional(&parse("1 <= x").unwrap())[0];
        let d: Vec<String> = delta_epsilon(e).iter().map(|p| p.display(&e.vars)).collect();
        assert_eq!(d, vec!["1", "x"]);
        let e = &to_intensional(&parse("1 <= x^(-1) x").unwrap())[0];
        let d: BTreeSet<String> = delta_epsilon(e).iter().map(|p| p.display(&e.vars)).collect();
        for s in ["1", "x", "x^(-1) x", "+ x^(-1) x", "x x^(-1) x", "x + x^(-1) x"] {
            assert!(d.contains(s), "{s} missing from {d:?}");
        }
        assert_eq!(d.len(), 6);
    }

    #[test]
    fn delta_is_suffix_closed_and_bounded() {
        for s in ["x y = y x", "x^l = x^r", "x^(4) = x", "(x | y^(2)) z <= z x"] {
            for e in to_intensional(&parse(s).unwrap()) {
                let d = delta_epsilon(&e);
                for p in &d {
                    if let Some((_, t)) = p.tail() {
                        assert!(d.contains(&t));
                    }
                }
                for w in final_subwords(&e) {
                    assert!(d.contains(&DeltaPoint::from_word(&w)));
                }
                assert!(BigUint::from(d.len()) <= delta_size_bound(e.length));
            }
        }
    }
}
