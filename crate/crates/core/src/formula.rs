//! Formula syntax: AST, parser, canonical printer and path negation.
//!
//! Grammar (whitespace-insensitive, `#` starts a line comment):
//!
//! ```text
//! formula := iff
//! iff     := impl ("<->" impl)*
//! impl    := or ("->" impl)?
//! or      := and ("|" and)*
//! and     := unary ("&" unary)*
//! unary   := "!" unary | "true" | "false" | IDENT | "(" formula ")"
//!          | ("EX"|"EF"|"EG"|"AX"|"AF"|"AG") unary
//!          | ("E"|"A") "[" formula ("U"|"W") formula "]"
//!          | "K" "<" IDENT ">" unary
//!          | ("GK"|"DK"|"CK") "<" identlist ">" unary
//!          | "<<" identlist? ">>" pathop | "[[" identlist? "]]" pathop
//! pathop  := ("X"|"G"|"F") unary | "[" formula ("U"|"W") formula "]"
//! ```
//!
//! `F φ` is sugar for `[true U φ]` and never appears in the AST.

use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Atom(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    /// `E ψ`: some fair path satisfies ψ.
    ExistsPath(Box<PathFormula>),
    /// `A ψ`: every fair path satisfies ψ.
    ForAllPath(Box<PathFormula>),
    Know(String, Box<Formula>),
    EveryoneKnows(Vec<String>, Box<Formula>),
    DistKnows(Vec<String>, Box<Formula>),
    CommonKnows(Vec<String>, Box<Formula>),
    /// `<<Γ>> ψ`
    Exists(Vec<String>, Box<PathFormula>),
    /// `[[Γ]] ψ`
    Forced(Vec<String>, Box<PathFormula>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PathFormula {
    Next(Formula),
    Globally(Formula),
    Until(Formula, Formula),
    WeakUntil(Formula, Formula),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathKind {
    Next,
    Globally,
    Until,
    WeakUntil,
}

impl PathFormula {
    pub fn kind(&self) -> PathKind {
        match self {
            PathFormula::Next(_) => PathKind::Next,
            PathFormula::Globally(_) => PathKind::Globally,
            PathFormula::Until(..) => PathKind::Until,
            PathFormula::WeakUntil(..) => PathKind::WeakUntil,
        }
    }

    /// State subformulas, left to right.
    pub fn operands(&self) -> Vec<&Formula> {
        match self {
            PathFormula::Next(f) | PathFormula::Globally(f) => vec![f],
            PathFormula::Until(a, b) | PathFormula::WeakUntil(a, b) => vec![a, b],
        }
    }
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(name.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    fn is_binary(&self) -> bool {
        matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Implies(..) | Formula::Iff(..)
        )
    }
}

/// Path formula whose truth value is the complement of `psi`'s on every
/// infinite path.
pub fn negate_path(psi: &PathFormula) -> PathFormula {
    use PathFormula::*;
    match psi {
        Next(f) => Next(Formula::not(f.clone())),
        Globally(f) => Until(Formula::True, Formula::not(f.clone())),
        Until(a, b) => WeakUntil(
            Formula::not(b.clone()),
            Formula::and(Formula::not(a.clone()), Formula::not(b.clone())),
        ),
        WeakUntil(a, b) => Until(
            Formula::not(b.clone()),
            Formula::and(Formula::not(a.clone()), Formula::not(b.clone())),
        ),
    }
}

// ---------------------------------------------------------------------------
// Printing

fn write_unary(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    if phi.is_binary() {
        write!(f, "({phi})")
    } else {
        write!(f, "{phi}")
    }
}

fn write_binary_operand(f: &mut fmt::Formatter<'_>, phi: &Formula) -> fmt::Result {
    write_unary(f, phi)
}

fn write_path(f: &mut fmt::Formatter<'_>, psi: &PathFormula) -> fmt::Result {
    match psi {
        PathFormula::Next(p) => {
            write!(f, "X ")?;
            write_unary(f, p)
        }
        PathFormula::Globally(p) => {
            write!(f, "G ")?;
            write_unary(f, p)
        }
        PathFormula::Until(a, b) => write!(f, "[{a} U {b}]"),
        PathFormula::WeakUntil(a, b) => write!(f, "[{a} W {b}]"),
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_path(f, self)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::True => write!(f, "true"),
            Formula::False => write!(f, "false"),
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::Not(p) => {
                write!(f, "!")?;
                write_unary(f, p)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) | Formula::Iff(a, b) => {
                let op = match self {
                    Formula::And(..) => "&",
                    Formula::Or(..) => "|",
                    Formula::Implies(..) => "->",
                    _ => "<->",
                };
                write_binary_operand(f, a)?;
                write!(f, " {op} ")?;
                write_binary_operand(f, b)
            }
            Formula::ExistsPath(psi) | Formula::ForAllPath(psi) => {
                let q = if matches!(self, Formula::ExistsPath(_)) {
                    "E"
                } else {
                    "A"
                };
                match &**psi {
                    PathFormula::Next(p) => {
                        write!(f, "{q}X ")?;
                        write_unary(f, p)
                    }
                    PathFormula::Globally(p) => {
                        write!(f, "{q}G ")?;
                        write_unary(f, p)
                    }
                    other => write!(f, "{q}{other}"),
                }
            }
            Formula::Know(agent, p) => {
                write!(f, "K<{agent}> ")?;
                write_unary(f, p)
            }
            Formula::EveryoneKnows(g, p) | Formula::DistKnows(g, p) | Formula::CommonKnows(g, p) => {
                let op = match self {
                    Formula::EveryoneKnows(..) => "GK",
                    Formula::DistKnows(..) => "DK",
                    _ => "CK",
                };
                write!(f, "{op}<{}> ", g.join(","))?;
                write_unary(f, p)
            }
            Formula::Exists(g, psi) => write!(f, "<<{}>> {psi}", g.join(",")),
            Formula::Forced(g, psi) => write!(f, "[[{}]] {psi}", g.join(",")),
        }
    }
}

// ---------------------------------------------------------------------------
// Lexing

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("syntax error at {line}:{column}: expected {}, found {found}", expected.join(" or "))]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub expected: Vec<String>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Lt,
    Gt,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Lt => write!(f, "`<`"),
            Tok::Gt => write!(f, "`>`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Bar => write!(f, "`|`"),
            Tok::Arrow => write!(f, "`->`"),
            Tok::DArrow => write!(f, "`<->`"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Spanned>, SyntaxError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let (start_line, start_col) = (line, col);
        let mut push = |tok: Tok, len: usize, i: &mut usize, col: &mut usize| {
            out.push(Spanned {
                tok,
                line: start_line,
                column: start_col,
            });
            *i += len;
            *col += len;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            '(' => push(Tok::LParen, 1, &mut i, &mut col),
            ')' => push(Tok::RParen, 1, &mut i, &mut col),
            '[' => push(Tok::LBracket, 1, &mut i, &mut col),
            ']' => push(Tok::RBracket, 1, &mut i, &mut col),
            ',' => push(Tok::Comma, 1, &mut i, &mut col),
            '!' => push(Tok::Bang, 1, &mut i, &mut col),
            '&' => push(Tok::Amp, 1, &mut i, &mut col),
            '|' => push(Tok::Bar, 1, &mut i, &mut col),
            '>' => push(Tok::Gt, 1, &mut i, &mut col),
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    push(Tok::DArrow, 3, &mut i, &mut col)
                } else {
                    push(Tok::Lt, 1, &mut i, &mut col)
                }
            }
            '-' if chars.get(i + 1) == Some(&'>') => push(Tok::Arrow, 2, &mut i, &mut col),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                col += i - start;
                out.push(Spanned {
                    tok: Tok::Ident(word),
                    line: start_line,
                    column: start_col,
                });
            }
            other => {
                return Err(SyntaxError {
                    line,
                    column: col,
                    expected: vec!["a formula token".into()],
                    found: format!("`{other}`"),
                })
            }
        }
    }
    out.push(Spanned {
        tok: Tok::Eof,
        line,
        column: col,
    });
    Ok(out)
}

const RESERVED: &[&str] = &[
    "true", "false", "EX", "EF", "EG", "AX", "AF", "AG", "E", "A", "K", "GK", "DK", "CK", "X", "G", "F", "U", "W",
];

// ---------------------------------------------------------------------------
// Parsing

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
}

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

    fn error(&self, expected: &[&str]) -> SyntaxError {
        let sp = &self.toks[self.pos];
        SyntaxError {
            line: sp.line,
            column: sp.column,
            expected: expected.iter().map(|s| s.to_string()).collect(),
            found: sp.tok.to_string(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), SyntaxError> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            Err(self.error(&[what]))
        }
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::DArrow {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::Iff(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> Result<Formula, SyntaxError> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::Implies(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula, SyntaxError> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn ident(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.error(&["identifier"])),
        }
    }

    fn ident_list(&mut self, close: &Tok, allow_empty: bool) -> Result<Vec<String>, SyntaxError> {
        let mut out = Vec::new();
        if allow_empty && self.peek() == close {
            return Ok(out);
        }
        out.push(self.ident()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    /// `[ φ (U|W) φ ]`, with the opening bracket already consumed.
    fn bracketed_until(&mut self) -> Result<PathFormula, SyntaxError> {
        let lhs = self.formula()?;
        let weak = if self.is_kw("U") {
            false
        } else if self.is_kw("W") {
            true
        } else {
            return Err(self.error(&["`U`", "`W`"]));
        };
        self.bump();
        let rhs = self.formula()?;
        self.expect(Tok::RBracket, "`]`")?;
        Ok(if weak {
            PathFormula::WeakUntil(lhs, rhs)
        } else {
            PathFormula::Until(lhs, rhs)
        })
    }

    fn path_op(&mut self) -> Result<PathFormula, SyntaxError> {
        match self.peek().clone() {
            Tok::LBracket => {
                self.bump();
                self.bracketed_until()
            }
            Tok::Ident(s) if s == "X" => {
                self.bump();
                Ok(PathFormula::Next(self.unary()?))
            }
            Tok::Ident(s) if s == "G" => {
                self.bump();
                Ok(PathFormula::Globally(self.unary()?))
            }
            Tok::Ident(s) if s == "F" => {
                self.bump();
                Ok(PathFormula::Until(Formula::True, self.unary()?))
            }
            _ => Err(self.error(&["`X`", "`G`", "`F`", "`[`"])),
        }
    }

    fn unary(&mut self) -> Result<Formula, SyntaxError> {
        let tok = self.peek().clone();
        match tok {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Lt if *self.peek_at(1) == Tok::Lt => {
                self.bump();
                self.bump();
                let g = self.ident_list(&Tok::Gt, true)?;
                self.expect(Tok::Gt, "`>>`")?;
                self.expect(Tok::Gt, "`>>`")?;
                Ok(Formula::Exists(g, Box::new(self.path_op()?)))
            }
            Tok::LBracket if *self.peek_at(1) == Tok::LBracket => {
                self.bump();
                self.bump();
                let g = self.ident_list(&Tok::RBracket, true)?;
                self.expect(Tok::RBracket, "`]]`")?;
                self.expect(Tok::RBracket, "`]]`")?;
                Ok(Formula::Forced(g, Box::new(self.path_op()?)))
            }
            Tok::Ident(word) => {
                self.bump();
                match word.as_str() {
                    "true" => Ok(Formula::True),
                    "false" => Ok(Formula::False),
                    "EX" | "EF" | "EG" | "AX" | "AF" | "AG" => {
                        let body = self.unary()?;
                        let psi = match &word[1..] {
                            "X" => PathFormula::Next(body),
                            "G" => PathFormula::Globally(body),
                            _ => PathFormula::Until(Formula::True, body),
                        };
                        Ok(if word.starts_with('E') {
                            Formula::ExistsPath(Box::new(psi))
                        } else {
                            Formula::ForAllPath(Box::new(psi))
                        })
                    }
                    "E" | "A" => {
                        self.expect(Tok::LBracket, "`[`")?;
                        let psi = Box::new(self.bracketed_until()?);
                        Ok(if word == "E" {
                            Formula::ExistsPath(psi)
                        } else {
                            Formula::ForAllPath(psi)
                        })
                    }
                    "K" => {
                        self.expect(Tok::Lt, "`<`")?;
                        let agent = self.ident()?;
                        self.expect(Tok::Gt, "`>`")?;
                        Ok(Formula::Know(agent, Box::new(self.unary()?)))
                    }
                    "GK" | "DK" | "CK" => {
                        self.expect(Tok::Lt, "`<`")?;
                        let g = self.ident_list(&Tok::Gt, false)?;
                        self.expect(Tok::Gt, "`>`")?;
                        let body = Box::new(self.unary()?);
                        Ok(match word.as_str() {
                            "GK" => Formula::EveryoneKnows(g, body),
                            "DK" => Formula::DistKnows(g, body),
                            _ => Formula::CommonKnows(g, body),
                        })
                    }
                    w if RESERVED.contains(&w) => {
                        self.pos -= 1;
                        Err(self.error(&["a state formula"]))
                    }
                    _ => Ok(Formula::Atom(word)),
                }
            }
            _ => Err(self.error(&["a state formula"])),
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, SyntaxError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::Eof {
        return Err(p.error(&["end of input", "binary operator"]));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            p("<<player>> F win"),
            Formula::Exists(
                vec!["player".into()],
                Box::new(PathFormula::Until(Formula::True, Formula::atom("win")))
            )
        );
        assert_eq!(
            p("K<g> !p -> EX p"),
            Formula::Implies(
                Box::new(Formula::Know("g".into(), Box::new(Formula::not(Formula::atom("p"))))),
                Box::new(Formula::ExistsPath(Box::new(PathFormula::Next(Formula::atom("p")))))
            )
        );
        assert_eq!(
            p("[[g,e]] [p U q]"),
            Formula::Forced(
                vec!["g".into(), "e".into()],
                Box::new(PathFormula::Until(Formula::atom("p"), Formula::atom("q")))
            )
        );
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("a | b & c"), p("a | (b & c)"));
        assert_eq!(p("a -> b -> c"), p("a -> (b -> c)"));
        assert_eq!(p("a <-> b <-> c"), p("(a <-> b) <-> c"));
        assert_eq!(p("!a & b"), p("(!a) & b"));
        assert_eq!(p("a -> b <-> c"), p("(a -> b) <-> c"));
        assert_eq!(p("EF p"), p("E[true U p]"));
        assert_eq!(p("AF p"), p("A[true U p]"));
        assert_eq!(p("# comment\n  p # trailing\n"), Formula::atom("p"));
        assert_eq!(
            p("<<>> X p"),
            Formula::Exists(vec![], Box::new(PathFormula::Next(p("p"))))
        );
        assert_eq!(p("E[[[g]] X p U q]"), p("E[([[g]] X p) U q]"));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse_formula("p &\n  ").unwrap_err();
        assert_eq!((e.line, e.column), (2, 3));
        let e = parse_formula("<<g>> p").unwrap_err();
        assert_eq!((e.line, e.column), (1, 7));
        assert!(e.expected.contains(&"`X`".to_string()));
        let e = parse_formula("E[p q]").unwrap_err();
        assert_eq!(e.expected, vec!["`U`", "`W`"]);
        assert!(parse_formula("p q").is_err());
        assert!(parse_formula("X").is_err());
        assert!(parse_formula("p $ q").is_err());
        assert!(parse_formula("GK<> p").is_err());
    }

    #[test]
    fn negation_rewrites() {
        let n = |s: &str| match p(s) {
            Formula::Exists(_, psi) => negate_path(&psi).to_string(),
            _ => unreachable!(),
        };
        assert_eq!(n("<<g>> X p"), "X !p");
        assert_eq!(n("<<g>> G p"), "[true U !p]");
        assert_eq!(n("<<g>> [p U q]"), "[!q W !p & !q]");
        assert_eq!(n("<<g>> [p W q]"), "[!q U !p & !q]");
    }

    #[test]
    fn printer_is_canonical() {
        assert_eq!(p("K<g> !p -> EX p").to_string(), "K<g> !p -> EX p");
        assert_eq!(p("(a -> b) -> c").to_string(), "(a -> b) -> c");
        assert_eq!(p("a & (b | c)").to_string(), "a & (b | c)");
        assert_eq!(p("<<player>> F win").to_string(), "<<player>> [true U win]");
        assert_eq!(p("!(a & b)").to_string(), "!(a & b)");
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            Just(Formula::True),
            Just(Formula::False),
            "[a-d][a-z0-9_]{0,3}".prop_map(Formula::Atom),
        ];
        let agents = proptest::collection::vec(prop_oneof![Just("g".to_string()), Just("e".to_string())], 0..3);
        leaf.prop_recursive(4, 24, 3, move |inner| {
            let path = prop_oneof![
                inner.clone().prop_map(PathFormula::Next),
                inner.clone().prop_map(PathFormula::Globally),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PathFormula::Until(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| PathFormula::WeakUntil(a, b)),
            ];
            let nonempty = agents.clone().prop_filter("nonempty", |g| !g.is_empty());
            prop_oneof![
                inner.clone().prop_map(Formula::not),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::and(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::or(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Implies(Box::new(a), Box::new(b))),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Iff(Box::new(a), Box::new(b))),
                path.clone().prop_map(|p| Formula::ExistsPath(Box::new(p))),
                path.clone().prop_map(|p| Formula::ForAllPath(Box::new(p))),
                inner.clone().prop_map(|f| Formula::Know("g".into(), Box::new(f))),
                (nonempty.clone(), inner.clone()).prop_map(|(g, f)| Formula::EveryoneKnows(g, Box::new(f))),
                (nonempty.clone(), inner.clone()).prop_map(|(g, f)| Formula::DistKnows(g, Box::new(f))),
                (nonempty, inner.clone()).prop_map(|(g, f)| Formula::CommonKnows(g, Box::new(f))),
                (agents.clone(), path.clone()).prop_map(|(g, p)| Formula::Exists(g, Box::new(p))),
                (agents.clone(), path).prop_map(|(g, p)| Formula::Forced(g, Box::new(p))),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text).unwrap(), f, "printed as {}", text);
        }
    }
}
