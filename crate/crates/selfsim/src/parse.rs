//! Line-oriented parser for the script language.
//!
//! ```text
//! context m=2 K=8 D=8 L=8
//! gen a = (e, a) (1 2)
//! let w = a^{2 - x} a@1^-1
//! portrait w L=4
//! act a at 1 1 2
//! assert a^{2} = a@1
//! reduce "6" r="2 - x"
//! ```
//!
//! One statement per line; `#` starts a comment.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::ast::{BaseAst, Command, ContextAst, FactorAst, Located, Script, SeriesAst, Statement, WordAst};
use crate::error::ParseError;

pub fn parse(text: &str) -> Result<Script, ParseError> {
    let mut statements = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let mut c = Cursor::new(body, line);
        let statement = c.statement()?;
        c.skip_ws();
        if !c.at_end() {
            return Err(c.error("unexpected trailing input"));
        }
        statements.push(Located { line, statement });
    }
    Ok(Script { statements })
}

/// Parses a single series such as `2 - x + 3*x^2`.
pub fn parse_series(text: &str) -> Result<SeriesAst, ParseError> {
    let mut c = Cursor::new(text, 1);
    let s = c.series()?;
    c.skip_ws();
    if !c.at_end() {
        return Err(c.error("unexpected input after series"));
    }
    Ok(s)
}

/// Parses a single word.
pub fn parse_word(text: &str) -> Result<WordAst, ParseError> {
    let mut c = Cursor::new(text, 1);
    let w = c.word()?;
    c.skip_ws();
    if !c.at_end() {
        return Err(c.error("unexpected input after word"));
    }
    Ok(w)
}

const RESERVED: [&str; 3] = ["e", "perm", "at"];

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _text: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str, line: usize) -> Self {
        Cursor { chars: text.chars().collect(), pos: 0, line, _text: text }
    }

    fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { line: self.line, column: self.pos + 1, message: msg.into() }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn peek_at(&self, k: usize) -> Option<char> {
        self.chars.get(self.pos + k).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, ch: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(ch) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, ch: char) -> Result<(), ParseError> {
        if self.eat(ch) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{ch}'")))
        }
    }

    fn ident_here(&self) -> Option<String> {
        let first = self.peek()?;
        if !(first.is_ascii_alphabetic() || first == '_') {
            return None;
        }
        let mut end = self.pos;
        while self.chars.get(end).is_some_and(|c| c.is_ascii_alphanumeric() || *c == '_' || *c == '\'') {
            end += 1;
        }
        Some(self.chars[self.pos..end].iter().collect())
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let id = self.ident_here().ok_or_else(|| self.error("expected a name"))?;
        self.pos += id.chars().count();
        Ok(id)
    }

    fn name(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let save = self.pos;
        let id = self.ident()?;
        if RESERVED.contains(&id.as_str()) {
            self.pos = save;
            return Err(self.error(format!("'{id}' is reserved")));
        }
        Ok(id)
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.skip_ws();
        if self.ident_here().as_deref() == Some(kw) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }

    fn unsigned(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        Ok(s.parse().expect("digits"))
    }

    fn small<T: TryFrom<u64>>(&mut self) -> Result<T, ParseError> {
        let start = self.pos;
        let v = self.unsigned()?;
        u64::try_from(v).ok().and_then(|v| T::try_from(v).ok()).ok_or_else(|| {
            let mut e = self.error("number out of range");
            e.column = start + 1;
            e
        })
    }

    /// `key=value` if the next token is `key` followed by `=`.
    fn key_here(&mut self) -> Option<String> {
        self.skip_ws();
        let id = self.ident_here()?;
        let after = self.pos + id.chars().count();
        (self.chars.get(after) == Some(&'=')).then_some(id)
    }

    fn key(&mut self, key: &str) -> bool {
        if self.key_here().as_deref() == Some(key) {
            self.pos += key.len() + 1;
            true
        } else {
            false
        }
    }

    // ---- series ----

    fn series(&mut self) -> Result<SeriesAst, ParseError> {
        let mut coeffs: Vec<BigInt> = Vec::new();
        let mut first = true;
        loop {
            self.skip_ws();
            let neg = self.eat('-');
            if !neg && !self.eat('+') && !first {
                break;
            }
            first = false;
            let (c, deg) = self.term()?;
            if coeffs.len() <= deg {
                coeffs.resize(deg + 1, BigInt::zero());
            }
            if neg {
                coeffs[deg] -= c;
            } else {
                coeffs[deg] += c;
            }
        }
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Ok(SeriesAst { coeffs })
    }

    fn term(&mut self) -> Result<(BigInt, usize), ParseError> {
        self.skip_ws();
        let coeff = if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let c = self.unsigned()?;
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
                self.skip_ws();
                if self.peek() != Some('x') {
                    return Err(self.error("expected 'x' after '*'"));
                }
            }
            Some(c)
        } else {
            None
        };
        self.skip_ws();
        if self.peek() == Some('x') && !self.peek_at(1).is_some_and(|c| c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
            let deg = if self.eat('^') { self.small::<usize>()? } else { 1 };
            Ok((coeff.unwrap_or_else(BigInt::one), deg))
        } else {
            coeff.map(|c| (c, 0)).ok_or_else(|| self.error("expected a term"))
        }
    }

    // ---- words ----

    fn word(&mut self) -> Result<WordAst, ParseError> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(',') | Some(')') | Some('=') | Some('"') => break,
                Some(c) if c.is_ascii_digit() => break,
                _ => {}
            }
            if self.key_here().is_some() || self.ident_here().as_deref() == Some("at") {
                break;
            }
            if self.ident_here().as_deref() == Some("e") {
                self.pos += 1;
                continue;
            }
            factors.push(self.factor()?);
        }
        Ok(WordAst { factors })
    }

    fn factor(&mut self) -> Result<FactorAst, ParseError> {
        self.skip_ws();
        let base = if self.peek() == Some('(') {
            self.pos += 1;
            let mut items = vec![self.word()?];
            while self.eat(',') {
                items.push(self.word()?);
            }
            self.expect(')')?;
            if items.len() == 1 {
                BaseAst::Group(items.pop().expect("one item"))
            } else {
                BaseAst::Tuple(items)
            }
        } else if self.ident_here().as_deref() == Some("perm") {
            self.pos += 4;
            BaseAst::Rooted(self.cycles()?)
        } else if self.ident_here().is_some() {
            BaseAst::Name(self.name()?)
        } else {
            return Err(self.error("expected a factor"));
        };
        let mut f = FactorAst { base, exp: None, shift: 0, inverse: false };
        loop {
            if self.peek() == Some('^') {
                self.pos += 1;
                if self.peek() == Some('{') {
                    self.pos += 1;
                    let s = self.series()?;
                    self.expect('}')?;
                    self.set_exp(&mut f, s)?;
                } else if self.peek() == Some('-')
                    && self.peek_at(1) == Some('1')
                    && !self.peek_at(2).is_some_and(|c| c.is_ascii_digit())
                {
                    self.pos += 2;
                    if f.inverse {
                        return Err(self.error("repeated inverse"));
                    }
                    f.inverse = true;
                } else {
                    let neg = self.peek() == Some('-');
                    if neg {
                        self.pos += 1;
                    }
                    let v = self.unsigned()?;
                    let v = if neg { -v } else { v };
                    self.set_exp(&mut f, SeriesAst { coeffs: vec![v] })?;
                }
            } else if self.peek() == Some('@') {
                self.pos += 1;
                if f.shift > 0 || f.inverse {
                    return Err(self.error("shift must follow the exponent and come once"));
                }
                f.shift = self.small::<usize>()?;
            } else {
                break;
            }
        }
        Ok(f)
    }

    fn set_exp(&self, f: &mut FactorAst, s: SeriesAst) -> Result<(), ParseError> {
        if f.exp.is_some() || f.shift > 0 || f.inverse {
            return Err(self.error("exponent must come first and once"));
        }
        f.exp = Some(s);
        Ok(())
    }

    /// A `(` at the cursor opens a cycle rather than a word.
    fn cycle_follows(&self) -> bool {
        let mut k = 1;
        while self.peek_at(k).is_some_and(char::is_whitespace) {
            k += 1;
        }
        self.peek_at(k).is_some_and(|c| c.is_ascii_digit() || c == ')')
    }

    /// Cycle notation such as `(1 2)(3 4)` or `()`; 1-indexed.
    fn cycles(&mut self) -> Result<Vec<Vec<u32>>, ParseError> {
        let mut out = Vec::new();
        let mut any = false;
        loop {
            self.skip_ws();
            if self.peek() != Some('(') || !self.cycle_follows() {
                break;
            }
            any = true;
            self.pos += 1;
            let mut cyc = Vec::new();
            loop {
                self.skip_ws();
                if self.eat(')') {
                    break;
                }
                self.eat(',');
                self.skip_ws();
                if self.peek() == Some(')') {
                    continue;
                }
                cyc.push(self.small::<u32>()?);
            }
            if !cyc.is_empty() {
                out.push(cyc);
            }
        }
        if !any {
            return Err(self.error("expected cycle notation"));
        }
        Ok(out)
    }

    fn word_list(&mut self) -> Result<Vec<WordAst>, ParseError> {
        let mut words = vec![self.word()?];
        while self.eat(',') {
            words.push(self.word()?);
        }
        Ok(words)
    }

    fn quoted_or_bare(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        if self.peek() == Some('"') {
            self.pos += 1;
            let start = self.pos;
            while self.peek().is_some_and(|c| c != '"') {
                self.pos += 1;
            }
            if self.at_end() {
                return Err(self.error("unterminated string"));
            }
            let s: String = self.chars[start..self.pos].iter().collect();
            self.pos += 1;
            Ok(s)
        } else {
            let start = self.pos;
            while self.peek().is_some_and(|c| !c.is_whitespace()) {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.error("expected a value"));
            }
            Ok(self.chars[start..self.pos].iter().collect())
        }
    }

    fn series_arg(&mut self) -> Result<SeriesAst, ParseError> {
        self.skip_ws();
        let col = self.pos;
        let text = self.quoted_or_bare()?;
        parse_series(&text).map_err(|mut e| {
            e.line = self.line;
            e.column += col + usize::from(self.chars[col] == '"');
            e
        })
    }

    fn opt_depth(&mut self) -> Result<Option<usize>, ParseError> {
        if self.key("L") {
            Ok(Some(self.small()?))
        } else {
            Ok(None)
        }
    }

    // ---- statements ----

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let kw = self.ident()?;
        match kw.as_str() {
            "context" => {
                let mut ctx = ContextAst::default();
                while let Some(k) = self.key_here() {
                    self.pos += k.len() + 1;
                    match k.as_str() {
                        "m" => ctx.m = Some(self.small()?),
                        "K" => ctx.k = Some(self.small()?),
                        "D" => ctx.d = Some(self.small()?),
                        "L" => ctx.l = Some(self.small()?),
                        _ => return Err(self.error(format!("unknown context key '{k}'"))),
                    }
                }
                Ok(Statement::Context(ctx))
            }
            "gen" => {
                let name = self.name()?;
                self.expect('=')?;
                self.expect('(')?;
                let mut entries = vec![self.word()?];
                while self.eat(',') {
                    entries.push(self.word()?);
                }
                self.expect(')')?;
                self.skip_ws();
                let cycles = if self.at_end() { Vec::new() } else { self.cycles()? };
                Ok(Statement::Gen { name, entries, cycles })
            }
            "let" => {
                let name = self.name()?;
                self.expect('=')?;
                Ok(Statement::Let { name, word: self.word()? })
            }
            _ => Ok(Statement::Command(self.command(&kw)?)),
        }
    }

    fn command(&mut self, kw: &str) -> Result<Command, ParseError> {
        Ok(match kw {
            "portrait" => {
                let word = self.word()?;
                Command::Portrait { word, depth: self.opt_depth()? }
            }
            "act" => {
                let word = self.word()?;
                if !self.keyword("at") {
                    return Err(self.error("expected 'at' and a vertex"));
                }
                let mut path = Vec::new();
                loop {
                    self.skip_ws();
                    if self.at_end() {
                        break;
                    }
                    path.push(self.small::<u32>()?);
                }
                Command::Act { word, path }
            }
            "order" => {
                let word = self.word()?;
                let cap = if self.key("cap") { Some(self.small()?) } else { None };
                Command::Order { word, cap }
            }
            "zeta" => Command::Zeta { word: self.word()? },
            "closure" => Command::Closure { words: self.word_list()? },
            "present" => Command::Present { words: self.word_list()? },
            "reduce" => {
                let value = self.series_arg()?;
                if !self.key("r") {
                    return Err(self.error("expected r=<series>"));
                }
                Command::Reduce { value, r: self.series_arg()? }
            }
            "conjugate" => {
                let name = self.name()?;
                let j = if self.key("j") { self.small()? } else { 1 };
                Command::Conjugate { name, j }
            }
            "represent" => Command::Represent { file: self.quoted_or_bare()? },
            "verify" => {
                self.skip_ws();
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_') {
                    self.pos += 1;
                }
                if start == self.pos {
                    return Err(self.error("expected a suite name"));
                }
                Command::Verify { suite: self.chars[start..self.pos].iter().collect() }
            }
            "assert" => {
                let lhs = self.word()?;
                self.expect('=')?;
                let rhs = self.word()?;
                Command::Assert { lhs, rhs, depth: self.opt_depth()? }
            }
            other => {
                self.pos = 0;
                return Err(self.error(format!("unknown statement '{other}'")));
            }
        })
    }
}
