//! Canonical text for scripts; parsing the output gives back the same statements.

use std::fmt::{self, Write};

use num_traits::{One, Signed, Zero};

use crate::ast::{BaseAst, Command, FactorAst, Script, SeriesAst, Statement, WordAst};

impl fmt::Display for SeriesAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (deg, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            match deg {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    f.write_str("x")?;
                    if deg > 1 {
                        write!(f, "^{deg}")?;
                    }
                }
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

fn cycles(f: &mut fmt::Formatter<'_>, cs: &[Vec<u32>]) -> fmt::Result {
    if cs.is_empty() {
        return f.write_str("()");
    }
    for c in cs {
        let items: Vec<String> = c.iter().map(u32::to_string).collect();
        write!(f, "({})", items.join(" "))?;
    }
    Ok(())
}

struct Cycles<'a>(&'a [Vec<u32>]);

impl fmt::Display for Cycles<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        cycles(f, self.0)
    }
}

fn list(f: &mut fmt::Formatter<'_>, words: &[WordAst]) -> fmt::Result {
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{w}")?;
    }
    Ok(())
}

impl fmt::Display for FactorAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.base {
            BaseAst::Name(n) => f.write_str(n)?,
            BaseAst::Rooted(cs) => {
                f.write_str("perm")?;
                cycles(f, cs)?;
            }
            BaseAst::Tuple(ws) => {
                f.write_str("(")?;
                list(f, ws)?;
                f.write_str(")")?;
            }
            BaseAst::Group(w) => write!(f, "({w})")?,
        }
        if let Some(s) = &self.exp {
            write!(f, "^{{{s}}}")?;
        }
        if self.shift > 0 {
            write!(f, "@{}", self.shift)?;
        }
        if self.inverse {
            f.write_str("^-1")?;
        }
        Ok(())
    }
}

impl fmt::Display for WordAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("e");
        }
        for (i, x) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let depth = |d: &Option<usize>| d.map(|d| format!(" L={d}")).unwrap_or_default();
        match self {
            Command::Portrait { word, depth: d } => write!(f, "portrait {word}{}", depth(d)),
            Command::Act { word, path } => {
                write!(f, "act {word} at")?;
                path.iter().try_for_each(|y| write!(f, " {y}"))
            }
            Command::Order { word, cap } => {
                write!(f, "order {word}")?;
                cap.map_or(Ok(()), |c| write!(f, " cap={c}"))
            }
            Command::Zeta { word } => write!(f, "zeta {word}"),
            Command::Closure { words } => {
                f.write_str("closure ")?;
                list(f, words)
            }
            Command::Present { words } => {
                f.write_str("present ")?;
                list(f, words)
            }
            Command::Reduce { value, r } => write!(f, "reduce \"{value}\" r=\"{r}\""),
            Command::Conjugate { name, j } => write!(f, "conjugate {name} j={j}"),
            Command::Represent { file } => write!(f, "represent \"{file}\""),
            Command::Verify { suite } => write!(f, "verify {suite}"),
            Command::Assert { lhs, rhs, depth: d } => write!(f, "assert {lhs} = {rhs}{}", depth(d)),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Context(c) => {
                f.write_str("context")?;
                let keys = [("m", c.m.map(|v| v as usize)), ("K", c.k), ("D", c.d), ("L", c.l)];
                for (k, v) in keys {
                    if let Some(v) = v {
                        write!(f, " {k}={v}")?;
                    }
                }
                Ok(())
            }
            Statement::Gen { name, entries, cycles: cs } => {
                write!(f, "gen {name} = (")?;
                list(f, entries)?;
                f.write_str(")")?;
                if !cs.is_empty() {
                    write!(f, " {}", Cycles(cs))?;
                }
                Ok(())
            }
            Statement::Let { name, word } => write!(f, "let {name} = {word}"),
            Statement::Command(c) => write!(f, "{c}"),
        }
    }
}

/// One statement per line.
pub fn print(script: &Script) -> String {
    let mut out = String::new();
    for s in &script.statements {
        writeln!(out, "{}", s.statement).expect("writing to a string");
    }
    out
}
