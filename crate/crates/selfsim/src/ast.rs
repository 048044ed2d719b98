//! Syntax tree of scripts, with names left unresolved.

use num_bigint::BigInt;

/// Integer polynomial in `x`, coefficients by degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesAst {
    pub coeffs: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BaseAst {
    Name(String),
    /// Rooted automorphism given by 1-indexed cycles.
    Rooted(Vec<Vec<u32>>),
    Tuple(Vec<WordAst>),
    Group(WordAst),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorAst {
    pub base: BaseAst,
    pub exp: Option<SeriesAst>,
    pub shift: usize,
    pub inverse: bool,
}

/// Product of factors, left to right; empty is `e`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordAst {
    pub factors: Vec<FactorAst>,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ContextAst {
    pub m: Option<u32>,
    pub k: Option<usize>,
    pub d: Option<usize>,
    pub l: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Portrait { word: WordAst, depth: Option<usize> },
    Act { word: WordAst, path: Vec<u32> },
    Order { word: WordAst, cap: Option<u64> },
    Zeta { word: WordAst },
    Closure { words: Vec<WordAst> },
    Present { words: Vec<WordAst> },
    Reduce { value: SeriesAst, r: SeriesAst },
    Conjugate { name: String, j: usize },
    Represent { file: String },
    Verify { suite: String },
    Assert { lhs: WordAst, rhs: WordAst, depth: Option<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Statement {
    Context(ContextAst),
    Gen { name: String, entries: Vec<WordAst>, cycles: Vec<Vec<u32>> },
    Let { name: String, word: WordAst },
    Command(Command),
}

/// A statement with the line it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Located {
    pub line: usize,
    pub statement: Statement,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Script {
    pub statements: Vec<Located>,
}

impl Script {
    /// Statements without line numbers, for comparing scripts up to layout.
    pub fn statements(&self) -> Vec<&Statement> {
        self.statements.iter().map(|l| &l.statement).collect()
    }
}
