//! The plain-text literal format: documents of named points, cylinders,
//! shifts, tries and codes.
//!
//! ```text
//! # comment
//! p = [1|2,3]
//! q = [[1,2],[2,3]]
//! c = Z([1] ; {5})
//! s = shift { alphabet = naturals; forbidden = [[1,1]] }
//! t = trie {1..3:in, _:out}
//! k = code { domain = shift { alphabet = naturals; forbidden = [] }; out = naturals; rule = {empty:empty, _:halfup@0} }
//! g = gallery:h(k=2,d=3)
//! ```

use std::fmt;

use thiserror::Error;

use crate::fds::{Node, Trie};
use crate::gallery::{self, Params};
use crate::point::{Alphabet, Letter, Point, Sym};
use crate::rules::{named_rule, ClassTable};
use crate::sbc::{OutLabel, Prim, SlidingBlockCode};
use crate::shiftspace::ShiftPresentation;
use crate::symset::{LetterSet, SymSet, NEG_INF, POS_INF};
use crate::topology::Cylinder;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub expected: Vec<String>,
    pub found: String,
}

/// How a code was written down.
#[derive(Clone, Debug, PartialEq)]
pub enum CodeSpec {
    Gallery { id: String, params: Option<Params> },
    Trie { domain: ShiftPresentation, out: Alphabet, rule: Node<OutLabel> },
}

impl CodeSpec {
    pub fn build(&self, name: &str) -> crate::error::Result<SlidingBlockCode> {
        match self {
            CodeSpec::Gallery { id, params } => gallery::code_by_name(id, params.unwrap_or_default()),
            CodeSpec::Trie { domain, out, rule } => {
                Ok(SlidingBlockCode::from_trie(name, domain.clone(), *out, rule.clone()))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Point(Point),
    BlockPoint(Point<Vec<Sym>>),
    Cylinder(Cylinder),
    Shift(ShiftPresentation),
    SetTrie(Trie<bool>),
    RuleTrie(Trie<OutLabel>),
    Code(CodeSpec),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub items: Vec<(String, Value)>,
}

impl Document {
    pub fn get(&self, name: &str) -> Option<&Value> {
        self.items.iter().find(|(n, _)| n == name).map(|(_, v)| v)
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(Sym),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(a) => write!(f, "`{a}`"),
            Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

const PUNCT: [&str; 15] = ["->", "..", "[", "]", "{", "}", "(", ")", ",", ";", ":", "=", "|", ".", "@"];

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (ln, col) = (li + 1, i + 1);
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            if c.is_ascii_digit() || (c == '-' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
                let start = i;
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let v = s.parse::<Sym>().map_err(|_| ParseError {
                    line: ln,
                    col,
                    expected: vec!["an integer that fits in 64 bits".into()],
                    found: format!("`{s}`"),
                })?;
                out.push(Spanned { tok: Tok::Int(v), line: ln, col });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Spanned { tok: Tok::Ident(chars[start..i].iter().collect()), line: ln, col });
            } else if let Some(p) = PUNCT.iter().find(|p| rest.starts_with(**p)) {
                i += p.len();
                out.push(Spanned { tok: Tok::Sym(p), line: ln, col });
            } else {
                return Err(ParseError { line: ln, col, expected: vec!["a token".into()], found: format!("`{c}`") });
            }
        }
    }
    let line = text.lines().count().max(1);
    let col = text.lines().last().map_or(0, |l| l.chars().count()) + 1;
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

// ---------------------------------------------------------------- parsing

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &[&str]) -> PResult<T> {
        let s = &self.toks[self.pos];
        Err(ParseError {
            line: s.line,
            col: s.col,
            expected: expected.iter().map(|e| e.to_string()).collect(),
            found: s.tok.to_string(),
        })
    }

    fn at(&self, p: &str) -> bool {
        matches!(self.peek(), Tok::Sym(s) if *s == p)
    }

    fn at_ident(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat(&mut self, p: &str) -> bool {
        let ok = self.at(p);
        if ok {
            self.bump();
        }
        ok
    }

    fn expect(&mut self, p: &str) -> PResult<()> {
        if self.eat(p) {
            Ok(())
        } else {
            self.err(&[&format!("`{p}`")])
        }
    }

    fn keyword(&mut self, w: &str) -> PResult<()> {
        if self.at_ident(w) {
            self.bump();
            Ok(())
        } else {
            self.err(&[&format!("`{w}`")])
        }
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => self.err(&["a name"]),
        }
    }

    fn int(&mut self) -> PResult<Sym> {
        match *self.peek() {
            Tok::Int(a) => {
                self.bump();
                Ok(a)
            }
            _ => self.err(&["an integer"]),
        }
    }

    /// Turns a library error at the current token into a parse error.
    fn invalid<T>(&self, what: &str, e: crate::error::Error) -> PResult<T> {
        let s = &self.toks[self.pos.saturating_sub(1)];
        Err(ParseError { line: s.line, col: s.col, expected: vec![format!("a valid {what}")], found: e.to_string() })
    }

    fn document(&mut self) -> PResult<Document> {
        let mut doc = Document::default();
        while *self.peek() != Tok::Eof {
            let name = self.ident()?;
            self.expect("=")?;
            let v = self.value()?;
            doc.items.push((name, v));
        }
        Ok(doc)
    }

    fn value(&mut self) -> PResult<Value> {
        match self.peek().clone() {
            Tok::Sym("[") => self.any_point(),
            Tok::Ident(w) => match w.as_str() {
                "Z" => self.cylinder().map(Value::Cylinder),
                "shift" => self.shift().map(Value::Shift),
                "trie" => {
                    self.bump();
                    self.trie_value()
                }
                "code" => self.code().map(Value::Code),
                "gallery" => self.gallery_code().map(Value::Code),
                _ => self.err(&["a point", "`Z`", "`shift`", "`trie`", "`code`", "`gallery`"]),
            },
            _ => self.err(&["a point", "`Z`", "`shift`", "`trie`", "`code`", "`gallery`"]),
        }
    }

    fn ints_until(&mut self, close: &[&str]) -> PResult<Vec<Sym>> {
        let mut v = Vec::new();
        if close.iter().any(|c| self.at(c)) {
            return Ok(v);
        }
        loop {
            v.push(self.int()?);
            if !self.eat(",") {
                return Ok(v);
            }
        }
    }

    fn word(&mut self) -> PResult<Vec<Sym>> {
        self.expect("[")?;
        let w = self.ints_until(&["]"])?;
        self.expect("]")?;
        Ok(w)
    }

    fn blocks_until(&mut self, close: &[&str]) -> PResult<Vec<Vec<Sym>>> {
        let mut v = Vec::new();
        if close.iter().any(|c| self.at(c)) {
            return Ok(v);
        }
        loop {
            v.push(self.word()?);
            if !self.eat(",") {
                return Ok(v);
            }
        }
    }

    fn any_point(&mut self) -> PResult<Value> {
        let blocks = self.at("[") && (matches!(self.peek_at(1), Tok::Sym("[")) || self.block_after_bar());
        if blocks {
            self.block_point().map(Value::BlockPoint)
        } else {
            self.point().map(Value::Point)
        }
    }

    fn block_after_bar(&self) -> bool {
        matches!(self.peek_at(1), Tok::Sym("|")) && matches!(self.peek_at(2), Tok::Sym("["))
    }

    fn point(&mut self) -> PResult<Point> {
        self.expect("[")?;
        let pre = self.ints_until(&["|", "]"])?;
        if self.eat("|") {
            if self.at("]") {
                return self.err(&["a period letter"]);
            }
            let period = self.ints_until(&["]"])?;
            self.expect("]")?;
            Ok(Point::evp(pre, period))
        } else {
            self.expect("]")?;
            Ok(Point::finite(pre))
        }
    }

    fn block_point(&mut self) -> PResult<Point<Vec<Sym>>> {
        self.expect("[")?;
        let pre = self.blocks_until(&["|", "]"])?;
        if self.eat("|") {
            if self.at("]") {
                return self.err(&["a period block"]);
            }
            let period = self.blocks_until(&["]"])?;
            self.expect("]")?;
            Ok(Point::evp(pre, period))
        } else {
            self.expect("]")?;
            Ok(Point::finite(pre))
        }
    }

    fn cylinder(&mut self) -> PResult<Cylinder> {
        self.keyword("Z")?;
        self.expect("(")?;
        let base = if self.at("[") { self.word()? } else { Vec::new() };
        let excluded = if self.eat(";") {
            self.expect("{")?;
            let e = self.ints_until(&["}"])?;
            self.expect("}")?;
            e
        } else {
            Vec::new()
        };
        self.expect(")")?;
        Ok(Cylinder::new(base, excluded))
    }

    fn alphabet(&mut self) -> PResult<Alphabet> {
        match self.peek().clone() {
            Tok::Ident(w) if w == "naturals" => {
                self.bump();
                Ok(Alphabet::Naturals)
            }
            Tok::Ident(w) if w == "integers" => {
                self.bump();
                Ok(Alphabet::Integers)
            }
            Tok::Ident(w) if w == "finite" => {
                self.bump();
                self.expect("(")?;
                let n = self.int()?;
                if !(1..=u32::MAX as Sym).contains(&n) {
                    return self.err(&["a positive alphabet size"]);
                }
                self.expect(")")?;
                Ok(Alphabet::Finite(n as u32))
            }
            _ => self.err(&["`naturals`", "`integers`", "`finite`"]),
        }
    }

    /// `{1..3,5,7..}`; `..` alone is every integer.
    fn symset(&mut self) -> PResult<SymSet> {
        self.expect("{")?;
        let mut spans = Vec::new();
        if !self.at("}") {
            loop {
                spans.push(self.span(&[",", "}"])?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect("}")?;
        Ok(SymSet::from_spans(spans))
    }

    fn span(&mut self, enders: &[&str]) -> PResult<(Sym, Sym)> {
        let ends = |p: &Parser| enders.iter().any(|e| p.at(e));
        if self.eat("..") {
            if ends(self) {
                return Ok((NEG_INF, POS_INF));
            }
            return Ok((NEG_INF, self.int()?));
        }
        let lo = self.int()?;
        if self.eat("..") {
            if ends(self) {
                return Ok((lo, POS_INF));
            }
            let hi = self.int()?;
            if hi < lo {
                return self.err(&["an upper end at least the lower end"]);
            }
            return Ok((lo, hi));
        }
        Ok((lo, lo))
    }

    fn edge_rule(&mut self, alphabet: Alphabet) -> PResult<ShiftPresentation> {
        if self.at_ident("gallery") {
            self.bump();
            self.expect(":")?;
            let id = self.ident()?;
            let mut k = None;
            if self.eat("(") {
                self.keyword("k")?;
                self.expect("=")?;
                k = Some(self.int()?);
                self.expect(")")?;
            }
            let rule = match named_rule(&id, k) {
                Ok(r) => r,
                Err(e) => return self.invalid("rule", e),
            };
            return ShiftPresentation::edges(alphabet, rule).or_else(|e| self.invalid("shift", e));
        }
        self.keyword("table")?;
        self.expect("{")?;
        let mut classes: Vec<(String, SymSet)> = Vec::new();
        while self.at_ident("class") {
            self.bump();
            let name = self.ident()?;
            self.expect("=")?;
            let set = self.symset()?;
            self.expect(";")?;
            classes.push((name, set));
        }
        let mut allowed = Vec::new();
        while !self.at("}") {
            let a = self.class_index(&classes)?;
            self.expect("->")?;
            let b = self.class_index(&classes)?;
            self.expect(";")?;
            allowed.push((a, b));
        }
        self.expect("}")?;
        let table = match ClassTable::new(alphabet, classes, &allowed) {
            Ok(t) => t,
            Err(e) => return self.invalid("class table", e),
        };
        ShiftPresentation::edges(alphabet, std::sync::Arc::new(table)).or_else(|e| self.invalid("shift", e))
    }

    fn class_index(&mut self, classes: &[(String, SymSet)]) -> PResult<usize> {
        let name = self.ident()?;
        if name == "rest" {
            return Ok(classes.len());
        }
        match classes.iter().position(|(n, _)| *n == name) {
            Some(i) => Ok(i),
            None => {
                self.pos -= 1;
                self.err(&["a declared class name"])
            }
        }
    }

    fn shift(&mut self) -> PResult<ShiftPresentation> {
        self.keyword("shift")?;
        self.expect("{")?;
        self.keyword("alphabet")?;
        self.expect("=")?;
        let alphabet = self.alphabet()?;
        self.expect(";")?;
        let s = match self.peek().clone() {
            Tok::Ident(w) if w == "forbidden" => {
                self.bump();
                self.expect("=")?;
                self.expect("[")?;
                let words = self.blocks_until(&["]"])?;
                self.expect("]")?;
                ShiftPresentation::forbidden(alphabet, words).or_else(|e| self.invalid("shift", e))?
            }
            Tok::Ident(w) if w == "edges" => {
                self.bump();
                self.expect("=")?;
                self.edge_rule(alphabet)?
            }
            _ => return self.err(&["`forbidden`", "`edges`"]),
        };
        self.expect("}")?;
        Ok(s)
    }

    fn guard(&mut self) -> PResult<LetterSet> {
        let mut g = LetterSet::none();
        if self.at(":") {
            return Ok(g);
        }
        loop {
            if self.at_ident("empty") {
                self.bump();
                g.empty = true;
            } else {
                let (lo, hi) = self.span(&["|", ":"])?;
                g.syms = g.syms.union(&SymSet::from_spans([(lo, hi)]));
            }
            if !self.eat("|") {
                return Ok(g);
            }
        }
    }

    fn node<L>(&mut self, leaf: &mut impl FnMut(&mut Parser) -> PResult<L>) -> PResult<Node<L>> {
        if !self.eat("{") {
            return Ok(Node::Leaf(leaf(self)?));
        }
        let mut edges = Vec::new();
        loop {
            if self.at_ident("_") {
                self.bump();
                self.expect(":")?;
                let default = self.node(leaf)?;
                self.expect("}")?;
                return Ok(Node::Branch { edges, default: Box::new(default) });
            }
            let g = self.guard()?;
            self.expect(":")?;
            let child = self.node(leaf)?;
            self.expect(",")?;
            edges.push((g, child));
        }
    }

    fn bool_leaf(&mut self) -> PResult<bool> {
        match self.peek() {
            Tok::Ident(w) if w == "in" => {
                self.bump();
                Ok(true)
            }
            Tok::Ident(w) if w == "out" => {
                self.bump();
                Ok(false)
            }
            _ => self.err(&["`in`", "`out`"]),
        }
    }

    fn out_label(&mut self) -> PResult<OutLabel> {
        if let Tok::Int(a) = *self.peek() {
            self.bump();
            return Ok(OutLabel::Const(Letter::Sym(a)));
        }
        if self.at_ident("empty") {
            self.bump();
            return Ok(OutLabel::Const(Letter::Empty));
        }
        let mut chain = Vec::new();
        if self.at_ident("id") {
            self.bump();
        } else {
            loop {
                match self.peek().clone() {
                    Tok::Ident(w) if w == "halfup" => {
                        self.bump();
                        chain.push(Prim::HalfUp);
                    }
                    Tok::Ident(w) if w == "offset" => {
                        self.bump();
                        self.expect("(")?;
                        chain.push(Prim::Offset(self.int()?));
                        self.expect(")")?;
                    }
                    _ => return self.err(&["an integer", "`empty`", "`id`", "`halfup`", "`offset`"]),
                }
                if !self.eat(".") {
                    break;
                }
            }
        }
        self.expect("@")?;
        let pos = self.int()?;
        if pos < 0 {
            return self.err(&["a nonnegative position"]);
        }
        Ok(OutLabel::Map { chain, pos: pos as usize })
    }

    /// Set tries have `in`/`out` leaves; anything else is a rule trie.
    fn trie_value(&mut self) -> PResult<Value> {
        let start = self.pos;
        match self.node(&mut |p: &mut Parser| p.bool_leaf()) {
            Ok(n) => Ok(Value::SetTrie(Trie::new(n))),
            Err(e1) => {
                self.pos = start;
                match self.node(&mut |p: &mut Parser| p.out_label()) {
                    Ok(n) => Ok(Value::RuleTrie(Trie::new(n))),
                    Err(e2) => Err(if (e1.line, e1.col) >= (e2.line, e2.col) { e1 } else { e2 }),
                }
            }
        }
    }

    fn code(&mut self) -> PResult<CodeSpec> {
        self.keyword("code")?;
        self.expect("{")?;
        self.keyword("domain")?;
        self.expect("=")?;
        let domain = self.shift()?;
        self.expect(";")?;
        self.keyword("out")?;
        self.expect("=")?;
        let out = self.alphabet()?;
        self.expect(";")?;
        self.keyword("rule")?;
        self.expect("=")?;
        let rule = self.node(&mut |p: &mut Parser| p.out_label())?;
        self.expect("}")?;
        Ok(CodeSpec::Trie { domain, out, rule })
    }

    fn gallery_code(&mut self) -> PResult<CodeSpec> {
        self.keyword("gallery")?;
        self.expect(":")?;
        let id = self.ident()?;
        if !gallery::IDS.contains(&id.as_str()) {
            self.pos -= 1;
            return self.err(&["a gallery id a..i"]);
        }
        let mut params = None;
        if self.eat("(") {
            let mut p = Params::default();
            loop {
                let key = self.ident()?;
                self.expect("=")?;
                let v = self.int()?;
                match key.as_str() {
                    "k" => p.k = v,
                    "d" => p.d = v,
                    _ => {
                        self.pos -= 3;
                        return self.err(&["`k`", "`d`"]);
                    }
                }
                if !self.eat(",") {
                    break;
                }
            }
            self.expect(")")?;
            params = Some(p);
        }
        Ok(CodeSpec::Gallery { id, params })
    }
}

fn parser(text: &str) -> PResult<Parser> {
    Ok(Parser { toks: lex(text)?, pos: 0 })
}

fn finish<T>(mut p: Parser, v: T) -> PResult<T> {
    if *p.peek() != Tok::Eof {
        return p.err(&["end of input"]);
    }
    p.bump();
    Ok(v)
}

pub fn parse(text: &str) -> PResult<Document> {
    let mut p = parser(text)?;
    let d = p.document()?;
    finish(p, d)
}

/// A single value with no name, e.g. a `--point` argument.
pub fn parse_value(text: &str) -> PResult<Value> {
    let mut p = parser(text)?;
    let v = p.value()?;
    finish(p, v)
}

pub fn parse_point(text: &str) -> PResult<Point> {
    let mut p = parser(text)?;
    let v = p.point()?;
    finish(p, v)
}

pub fn parse_block_point(text: &str) -> PResult<Point<Vec<Sym>>> {
    let mut p = parser(text)?;
    let v = p.block_point()?;
    finish(p, v)
}

pub fn parse_shift(text: &str) -> PResult<ShiftPresentation> {
    let mut p = parser(text)?;
    let v = p.shift()?;
    finish(p, v)
}

pub fn parse_symset(text: &str) -> PResult<SymSet> {
    let mut p = parser(text)?;
    let v = p.symset()?;
    finish(p, v)
}

// ---------------------------------------------------------------- printing

fn print_params(p: &Params) -> String {
    format!("(k={},d={})", p.k, p.d)
}

impl fmt::Display for CodeSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CodeSpec::Gallery { id, params } => {
                write!(f, "gallery:{id}{}", params.as_ref().map(print_params).unwrap_or_default())
            }
            CodeSpec::Trie { domain, out, rule } => write!(f, "code {{ domain = {domain}; out = {out}; rule = {rule} }}"),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Point(p) => write!(f, "{p}"),
            Value::BlockPoint(p) => write!(f, "{p}"),
            Value::Cylinder(c) => write!(f, "{c}"),
            Value::Shift(s) => write!(f, "{s}"),
            Value::SetTrie(t) => write!(f, "trie {t}"),
            Value::RuleTrie(t) => write!(f, "trie {t}"),
            Value::Code(c) => write!(f, "{c}"),
        }
    }
}

pub fn print(doc: &Document) -> String {
    doc.items.iter().map(|(n, v)| format!("{n} = {v}\n")).collect()
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print(self))
    }
}

/// The shift a code literal acts on, for printing a code as a `code {..}`
/// document when its rule is a trie.
pub fn code_spec_of(code: &SlidingBlockCode) -> Option<CodeSpec> {
    Some(CodeSpec::Trie { domain: code.domain.clone(), out: code.codomain, rule: code.trie()?.root.clone() })
}
