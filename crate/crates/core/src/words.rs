//! Free-group words and the textual expression grammar.
//!
//! Conventions, used by every other module:
//!
//! * commutator `[a,b] = a·b·a⁻¹·b⁻¹`
//! * conjugation `a^b = b⁻¹·a·b`
//! * left-normed brackets `[a1,…,an] = [[…[a1,a2],…],an]`
//!
//! Grammar (whitespace is ignored):
//!
//! ```text
//! expr    := term ("*" term)*
//! term    := primary ("^" ("-1" | primary))*
//! primary := "1" | name | "(" expr ")" | "[" expr ("," expr)+ "]"
//! name    := letter (letter | digit)*
//! ```
//!
//! `"1"` denotes the identity so that every word, including the empty one,
//! has a printed form that parses back.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator index, 1-based and scoped to a [`GeneratorContext`].
pub type GenId = u32;

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub gen: GenId,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: GenId, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: GenId) -> Self {
        Letter {
            gen,
            inverse: false,
        }
    }

    pub fn neg(gen: GenId) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }

    /// Enumeration order: x1 < x1⁻¹ < x2 < x2⁻¹ < …
    pub fn order_key(self) -> (GenId, bool) {
        (self.gen, self.inverse)
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    pub fn gen(g: GenId) -> Self {
        Word(vec![Letter::pos(g)])
    }

    pub fn gen_inv(g: GenId) -> Self {
        Word(vec![Letter::neg(g)])
    }

    /// Builds a word from arbitrary letters, freely reducing them.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// Signed-integer shorthand: `3` is x3, `-3` is x3⁻¹. Zero is rejected.
    pub fn from_signed(letters: &[i64]) -> Self {
        Word::from_letters(letters.iter().map(|&s| {
            assert!(s != 0, "zero is not a letter");
            Letter::new(s.unsigned_abs() as GenId, s < 0)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        out.reserve(other.len());
        for &l in &other.0 {
            push_reduced(&mut out, l);
        }
        Word(out)
    }

    /// `self^by = by⁻¹ · self · by`.
    pub fn conjugate(&self, by: &Word) -> Word {
        by.inverse().mul(self).mul(by)
    }

    /// `[a,b] = a·b·a⁻¹·b⁻¹`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.mul(b).mul(&a.inverse()).mul(&b.inverse())
    }

    /// `[a1,…,an]`, left-normed. A single entry is returned as is; the empty
    /// list gives the identity.
    pub fn left_normed(entries: &[Word]) -> Word {
        let mut iter = entries.iter();
        let Some(first) = iter.next() else {
            return Word::identity();
        };
        iter.fold(first.clone(), |acc, w| Word::commutator(&acc, w))
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Replaces each generator `g` with `f(g)` when that is `Some`.
    pub fn substitute<F>(&self, mut f: F) -> Word
    where
        F: FnMut(GenId) -> Option<Word>,
    {
        let mut cache: HashMap<GenId, Option<Word>> = HashMap::new();
        let mut out: Vec<Letter> = Vec::with_capacity(self.len());
        for &l in &self.0 {
            let image = cache.entry(l.gen).or_insert_with(|| f(l.gen));
            match image {
                None => push_reduced(&mut out, l),
                Some(w) if !l.inverse => {
                    for &m in &w.0 {
                        push_reduced(&mut out, m);
                    }
                }
                Some(w) => {
                    for &m in w.0.iter().rev() {
                        push_reduced(&mut out, m.inv());
                    }
                }
            }
        }
        Word(out)
    }

    /// Sets generator `g` to the identity.
    pub fn delete_generator(&self, g: GenId) -> Word {
        Word::from_letters(self.0.iter().copied().filter(|l| l.gen != g))
    }

    /// Renames generators through `map`; unmapped generators are kept.
    pub fn relabel(&self, map: &HashMap<GenId, GenId>) -> Word {
        Word::from_letters(
            self.0
                .iter()
                .map(|l| Letter::new(*map.get(&l.gen).unwrap_or(&l.gen), l.inverse)),
        )
    }

    pub fn exponent_sum(&self, g: GenId) -> i64 {
        self.0.iter().filter(|l| l.gen == g).map(|l| l.sign()).sum()
    }

    pub fn mentions(&self, g: GenId) -> bool {
        self.0.iter().any(|l| l.gen == g)
    }

    pub fn generators(&self) -> BTreeSet<GenId> {
        self.0.iter().map(|l| l.gen).collect()
    }

    pub fn max_generator(&self) -> GenId {
        self.0.iter().map(|l| l.gen).max().unwrap_or(0)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inv()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, rhs: &Word) -> Word {
        Word::mul(self, rhs)
    }
}

/// Prints with the default names `x1, x2, …`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_with(self, |g| format!("x{g}")))
    }
}

fn render_with<F: Fn(GenId) -> String>(w: &Word, name: F) -> String {
    if w.is_identity() {
        return "1".to_string();
    }
    let parts: Vec<String> = w
        .letters()
        .iter()
        .map(|l| {
            if l.inverse {
                format!("{}^-1", name(l.gen))
            } else {
                name(l.gen)
            }
        })
        .collect();
    parts.join("*")
}

/// Bijection between generator names and ids `1..=len`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorContext {
    names: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, GenId>,
}

impl GeneratorContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// `prefix1, …, prefixN` with ids `1..=n`.
    pub fn numbered(prefix: &str, n: usize) -> Self {
        let mut ctx = GeneratorContext::new();
        for i in 1..=n {
            ctx.declare(&format!("{prefix}{i}"))
                .expect("numbered names are valid");
        }
        ctx
    }

    pub fn from_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut ctx = GeneratorContext::new();
        for n in names {
            if ctx.lookup(n.as_ref()).is_some() {
                return Err(Error::InvalidArgument(format!(
                    "duplicate generator name `{}`",
                    n.as_ref()
                )));
            }
            ctx.declare(n.as_ref())?;
        }
        Ok(ctx)
    }

    /// Builds a context for the names occurring in `text`.
    ///
    /// When every name is `<prefix><k>` for one common prefix, generator
    /// `<prefix><k>` gets id `k` and the context spans `1..=max(k, min_len)`.
    /// Otherwise ids follow first appearance.
    pub fn infer(text: &str, min_len: usize) -> Result<Self> {
        let expr = parse_expr(text)?;
        let mut names = Vec::new();
        expr.collect_atoms(&mut names);
        let mut prefix: Option<String> = None;
        let mut max_index = 0usize;
        let mut numbered = true;
        for n in &names {
            let split = n.find(|c: char| c.is_ascii_digit());
            match split {
                Some(pos) if n[pos..].chars().all(|c| c.is_ascii_digit()) => {
                    let (p, digits) = n.split_at(pos);
                    let k: usize = digits.parse().unwrap_or(0);
                    if k == 0 || digits.starts_with('0') {
                        numbered = false;
                    }
                    match &prefix {
                        None => prefix = Some(p.to_string()),
                        Some(q) if q != p => numbered = false,
                        _ => {}
                    }
                    max_index = max_index.max(k);
                }
                _ => numbered = false,
            }
        }
        if numbered {
            let p = prefix.unwrap_or_else(|| "m".to_string());
            return Ok(GeneratorContext::numbered(&p, max_index.max(min_len)));
        }
        let mut ctx = GeneratorContext::new();
        for n in names {
            if ctx.lookup(&n).is_none() {
                ctx.declare(&n)?;
            }
        }
        Ok(ctx)
    }

    /// Declares `name` (or returns its existing id).
    pub fn declare(&mut self, name: &str) -> Result<GenId> {
        if let Some(id) = self.lookup(name) {
            return Ok(id);
        }
        if !is_valid_name(name) {
            return Err(Error::InvalidArgument(format!(
                "`{name}` is not a valid generator name"
            )));
        }
        self.names.push(name.to_string());
        let id = self.names.len() as GenId;
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn lookup(&self, name: &str) -> Option<GenId> {
        if self.index.len() != self.names.len() {
            // deserialized without the index
            return self
                .names
                .iter()
                .position(|n| n == name)
                .map(|p| p as GenId + 1);
        }
        self.index.get(name).copied()
    }

    pub fn name(&self, id: GenId) -> &str {
        &self.names[(id - 1) as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn render(&self, w: &Word) -> String {
        render_with(w, |g| {
            self.names
                .get((g as usize).wrapping_sub(1))
                .cloned()
                .unwrap_or_else(|| format!("#{g}"))
        })
    }

    pub fn parse(&self, text: &str) -> Result<Word> {
        parse_word(text, self)
    }
}

fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric())
}

/// Parsed but unevaluated expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WordExpr {
    Identity,
    Atom(String),
    Product(Vec<WordExpr>),
    Inverse(Box<WordExpr>),
    /// `base ^ by`
    Conjugate(Box<WordExpr>, Box<WordExpr>),
    /// Left-normed bracket with at least two entries.
    Commutator(Vec<WordExpr>),
}

impl WordExpr {
    pub fn eval(&self, ctx: &GeneratorContext) -> Result<Word> {
        self.eval_with(&mut |name| {
            ctx.lookup(name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
        })
    }

    /// Evaluates, declaring unseen names in `ctx`.
    pub fn eval_declaring(&self, ctx: &mut GeneratorContext) -> Result<Word> {
        self.eval_with(&mut |name| ctx.declare(name))
    }

    fn eval_with<F>(&self, resolve: &mut F) -> Result<Word>
    where
        F: FnMut(&str) -> Result<GenId>,
    {
        Ok(match self {
            WordExpr::Identity => Word::identity(),
            WordExpr::Atom(name) => Word::gen(resolve(name)?),
            WordExpr::Product(parts) => {
                let mut acc = Word::identity();
                for p in parts {
                    acc = acc.mul(&p.eval_with(resolve)?);
                }
                acc
            }
            WordExpr::Inverse(e) => e.eval_with(resolve)?.inverse(),
            WordExpr::Conjugate(a, b) => {
                let a = a.eval_with(resolve)?;
                let b = b.eval_with(resolve)?;
                a.conjugate(&b)
            }
            WordExpr::Commutator(entries) => {
                let words = entries
                    .iter()
                    .map(|e| e.eval_with(resolve))
                    .collect::<Result<Vec<_>>>()?;
                Word::left_normed(&words)
            }
        })
    }

    pub fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            WordExpr::Identity => {}
            WordExpr::Atom(n) => {
                if !out.contains(n) {
                    out.push(n.clone());
                }
            }
            WordExpr::Product(ps) | WordExpr::Commutator(ps) => {
                ps.iter().for_each(|p| p.collect_atoms(out))
            }
            WordExpr::Inverse(e) => e.collect_atoms(out),
            WordExpr::Conjugate(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }
}

impl fmt::Display for WordExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WordExpr::Identity => write!(f, "1"),
            WordExpr::Atom(n) => write!(f, "{n}"),
            WordExpr::Product(ps) => {
                let parts: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{}", parts.join("*"))
            }
            WordExpr::Inverse(e) => write!(f, "{}^-1", Paren(e)),
            WordExpr::Conjugate(a, b) => write!(f, "{}^{}", Paren(a), Paren(b)),
            WordExpr::Commutator(es) => {
                let parts: Vec<String> = es.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

struct Paren<'a>(&'a WordExpr);

impl fmt::Display for Paren<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            WordExpr::Product(_) | WordExpr::Conjugate(..) | WordExpr::Inverse(_) => {
                write!(f, "({})", self.0)
            }
            other => write!(f, "{other}"),
        }
    }
}

/// Parses `text` and evaluates it in `ctx`.
pub fn parse_word(text: &str, ctx: &GeneratorContext) -> Result<Word> {
    parse_expr(text)?.eval(ctx)
}

pub fn parse_expr(text: &str) -> Result<WordExpr> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, message: &str) -> Error {
        Error::Syntax {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<WordExpr> {
        let mut parts = vec![self.term()?];
        while self.eat(b'*') {
            parts.push(self.term()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            WordExpr::Product(parts)
        })
    }

    fn term(&mut self) -> Result<WordExpr> {
        let mut base = self.primary()?;
        while self.eat(b'^') {
            if self.eat(b'-') {
                if self.peek() == Some(b'1') {
                    self.pos += 1;
                    if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_digit()) {
                        return Err(self.err("only the exponent -1 is supported"));
                    }
                    base = WordExpr::Inverse(Box::new(base));
                } else {
                    return Err(self.err("expected `1` after `^-`"));
                }
            } else {
                let by = self.primary()?;
                base = WordExpr::Conjugate(Box::new(base), Box::new(by));
            }
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<WordExpr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let mut entries = vec![self.expr()?];
                while self.eat(b',') {
                    entries.push(self.expr()?);
                }
                if !self.eat(b']') {
                    return Err(self.err("expected `,` or `]`"));
                }
                if entries.len() < 2 {
                    return Err(self.err("a bracket needs at least two entries"));
                }
                Ok(WordExpr::Commutator(entries))
            }
            Some(b'1') => {
                self.pos += 1;
                if matches!(self.src.get(self.pos), Some(c) if c.is_ascii_alphanumeric()) {
                    return Err(self.err("names must start with a letter"));
                }
                Ok(WordExpr::Identity)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                Ok(WordExpr::Atom(name.to_string()))
            }
            Some(_) => Err(self.err("expected a generator name, `1`, `(` or `[`")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> GeneratorContext {
        GeneratorContext::from_names(&["x", "y", "z", "w"]).unwrap()
    }

    #[test]
    fn commutator_convention() {
        let c = GeneratorContext::numbered("x", 2);
        let w = parse_word("[x1,x2]", &c).unwrap();
        assert_eq!(w, Word::from_signed(&[1, 2, -1, -2]));
        assert_eq!(c.render(&w), "x1*x2*x1^-1*x2^-1");
    }

    #[test]
    fn free_reduction_and_identity() {
        let c = GeneratorContext::numbered("x", 1);
        assert!(parse_word("x1*x1^-1", &c).unwrap().is_identity());
        assert!(parse_word("1", &c).unwrap().is_identity());
        assert_eq!(c.render(&Word::identity()), "1");
    }

    #[test]
    fn conjugation_convention() {
        let c = GeneratorContext::numbered("x", 2);
        let w = parse_word("x2^x1", &c).unwrap();
        assert_eq!(w, Word::from_signed(&[-1, 2, 1]));
        assert_eq!(Word::gen(2).conjugate(&Word::gen(1)), w);
    }

    #[test]
    fn caret_binds_tighter_than_star() {
        let c = ctx();
        let a = parse_word("x*y^z", &c).unwrap();
        let b = parse_word("x*(y^z)", &c).unwrap();
        assert_eq!(a, b);
        let inv = parse_word("x*y^-1", &c).unwrap();
        assert_eq!(inv, Word::from_signed(&[1, -2]));
    }

    #[test]
    fn left_normed_length_ten() {
        let w = Word::left_normed(&[Word::gen(1), Word::gen(2), Word::gen(3)]);
        assert_eq!(w.len(), 10);
        let inner = Word::commutator(&Word::gen(1), &Word::gen(2));
        assert_eq!(w, Word::commutator(&inner, &Word::gen(3)));
    }

    #[test]
    fn engel_pattern_by_hand() {
        // [x,yz] = x yz x^-1 z^-1 y^-1
        // [[x,yz],yz] = x y z x^-1 z^-1 y^-1 . y z . y z x z^-1 y^-1 x^-1 ... reduced
        let c = ctx();
        let g = parse_word("[x,y*z,y*z,w]", &c).unwrap();
        let a = Word::from_signed(&[1, 2, 3, -1, -3, -2]); // [x,yz]
        let yz = Word::from_signed(&[2, 3]);
        let b = a.mul(&yz).mul(&a.inverse()).mul(&yz.inverse());
        let expected = b
            .mul(&Word::gen(4))
            .mul(&b.inverse())
            .mul(&Word::gen_inv(4));
        assert_eq!(g, expected);
        // x y z x⁻¹ z⁻¹ y⁻¹ y z  →  x y z x⁻¹ (then y z from the second slot)
        assert_eq!(
            &b.letters()[..6],
            Word::from_signed(&[1, 2, 3, -1, 2, 3]).letters()
        );
    }

    #[test]
    fn errors() {
        let c = ctx();
        assert!(matches!(parse_word("x*q", &c), Err(Error::UnknownGenerator(n)) if n == "q"));
        assert!(matches!(parse_word("[x]", &c), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse_word("x*", &c),
            Err(Error::Syntax { position: 2, .. })
        ));
        assert!(matches!(parse_word("x^-2", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("(x", &c), Err(Error::Syntax { .. })));
        assert!(matches!(parse_word("x y", &c), Err(Error::Syntax { .. })));
    }

    #[test]
    fn infer_numbered_contexts() {
        let c = GeneratorContext::infer("[m1,m3]", 0).unwrap();
        assert_eq!(c.len(), 3);
        assert_eq!(c.lookup("m3"), Some(3));
        let c = GeneratorContext::infer("[x,y*z]", 0).unwrap();
        assert_eq!(c.names(), &["x", "y", "z"]);
        let c = GeneratorContext::infer("m1", 4).unwrap();
        assert_eq!(c.len(), 4);
    }

    #[test]
    fn substitution_and_deletion() {
        let w = Word::from_signed(&[1, 2, -1, -2]);
        assert!(w.delete_generator(2).is_identity());
        let s = w.substitute(|g| (g == 2).then(|| Word::from_signed(&[2, 3])));
        assert_eq!(s, Word::from_signed(&[1, 2, 3, -1, -3, -2]));
        assert_eq!(s.exponent_sum(3), 0);
    }
}
