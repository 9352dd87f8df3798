//! Loader and printer for the textual model format (`.amf`).
//!
//! ```text
//! agent NAME { states: s1, s2; actions: a1, a2; protocol { s1: a1, a2; s2: a1; } }
//! transitions { (l1, l2) -[a1, a2]-> (m1, m2); ... }
//! labels { atom: (l1, l2), (m1, m2); ... }
//! init { (l1, l2); ... }
//! fairness { (l1, l2), (m1, m2); }      # one block per constraint
//! fairness { label: atom; }             # constraint = states labelled `atom`
//! ```
//!
//! `_` in a transition's source tuple stands for every local state of that
//! agent; in its action tuple it stands for every action the agent's protocol
//! enables at the (expanded) source. `_` is also accepted in the state tuples
//! of `labels`, `init` and `fairness`, where it ranges over local states.

use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{build_model, AgentDecl, Model, ModelError, ModelSpec, TransitionDecl};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmfError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: {source}")]
    Model {
        line: usize,
        column: usize,
        #[source]
        source: ModelError,
    },
}

impl AmfError {
    pub fn location(&self) -> (usize, usize) {
        match self {
            AmfError::Syntax { line, column, .. } | AmfError::Model { line, column, .. } => (*line, *column),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Colon,
    Semi,
    Comma,
    /// `-[`
    ActOpen,
    /// `]->`
    ActClose,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::ActOpen => "`-[`".into(),
            Tok::ActClose => "`]->`".into(),
            Tok::Eof => "end of file".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, AmfError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        let single = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ':' => Some(Tok::Colon),
            ';' => Some(Tok::Semi),
            ',' => Some(Tok::Comma),
            _ => None,
        };
        if let Some(t) = single {
            out.push((t, pos));
            i += 1;
            col += 1;
            continue;
        }
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
        } else if c.is_whitespace() {
            i += 1;
            col += 1;
        } else if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
        } else if c == '-' && chars.get(i + 1) == Some(&'[') {
            out.push((Tok::ActOpen, pos));
            i += 2;
            col += 2;
        } else if c == ']' && chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
            out.push((Tok::ActClose, pos));
            i += 3;
            col += 3;
        } else if c.is_alphanumeric() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
            col += i - start;
        } else {
            return Err(AmfError::Syntax {
                line,
                column: col,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::Eof, Pos { line, column: col }));
    Ok(out)
}

/// A name with its source position; `None` is the `_` wildcard.
type Slot = (Option<String>, Pos);

struct RawAgent {
    name: String,
    pos: Pos,
    states: Vec<(String, Pos)>,
    actions: Vec<(String, Pos)>,
    protocol: Vec<RawProtocolLine>,
}

/// Local state, its position, and the listed actions.
type RawProtocolLine = (String, Pos, Vec<(String, Pos)>);

struct RawTransition {
    source: Vec<Slot>,
    action: Vec<Slot>,
    target: Vec<Slot>,
    pos: Pos,
}

enum RawFairness {
    States(Vec<Vec<Slot>>),
    Label(String, Pos),
}

#[derive(Default)]
struct RawDoc {
    agents: Vec<RawAgent>,
    transitions: Option<(Pos, Vec<RawTransition>)>,
    labels: Vec<(String, Pos, Vec<Vec<Slot>>)>,
    init: Option<(Pos, Vec<Vec<Slot>>)>,
    fairness: Vec<(Pos, RawFairness)>,
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> Pos {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, expected: &str) -> Result<T, AmfError> {
        let p = self.here();
        Err(AmfError::Syntax {
            line: p.line,
            column: p.column,
            message: format!("expected {expected}, found {}", self.peek().describe()),
        })
    }

    fn expect(&mut self, tok: Tok) -> Result<Pos, AmfError> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            self.err(&tok.describe())
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<Pos, AmfError> {
        match self.peek() {
            Tok::Ident(s) if s == kw => Ok(self.bump().1),
            _ => self.err(&format!("`{kw}`")),
        }
    }

    fn ident(&mut self) -> Result<(String, Pos), AmfError> {
        match self.peek().clone() {
            Tok::Ident(s) if s != "_" => {
                let p = self.bump().1;
                Ok((s, p))
            }
            _ => self.err("identifier"),
        }
    }

    fn slot(&mut self) -> Result<Slot, AmfError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.bump().1;
                Ok(((s != "_").then_some(s), p))
            }
            _ => self.err("identifier or `_`"),
        }
    }

    fn ident_list(&mut self) -> Result<Vec<(String, Pos)>, AmfError> {
        let mut out = vec![self.ident()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.ident()?);
        }
        Ok(out)
    }

    fn tuple(&mut self) -> Result<Vec<Slot>, AmfError> {
        self.expect(Tok::LParen)?;
        let mut out = vec![self.slot()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.slot()?);
        }
        self.expect(Tok::RParen)?;
        Ok(out)
    }

    fn action_tuple(&mut self) -> Result<Vec<Slot>, AmfError> {
        self.expect(Tok::ActOpen)?;
        let mut out = vec![self.slot()?];
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.slot()?);
        }
        self.expect(Tok::ActClose)?;
        Ok(out)
    }

    fn tuple_list(&mut self) -> Result<Vec<Vec<Slot>>, AmfError> {
        let mut out = Vec::new();
        if *self.peek() != Tok::LParen {
            return Ok(out);
        }
        out.push(self.tuple()?);
        while *self.peek() == Tok::Comma {
            self.bump();
            out.push(self.tuple()?);
        }
        Ok(out)
    }

    fn agent(&mut self) -> Result<RawAgent, AmfError> {
        let (name, pos) = self.ident()?;
        self.expect(Tok::LBrace)?;
        self.keyword("states")?;
        self.expect(Tok::Colon)?;
        let states = self.ident_list()?;
        self.expect(Tok::Semi)?;
        self.keyword("actions")?;
        self.expect(Tok::Colon)?;
        let actions = self.ident_list()?;
        self.expect(Tok::Semi)?;
        self.keyword("protocol")?;
        self.expect(Tok::LBrace)?;
        let mut protocol = Vec::new();
        while *self.peek() != Tok::RBrace {
            let (state, p) = self.ident()?;
            self.expect(Tok::Colon)?;
            let acts = if *self.peek() == Tok::Semi {
                Vec::new()
            } else {
                self.ident_list()?
            };
            self.expect(Tok::Semi)?;
            protocol.push((state, p, acts));
        }
        self.expect(Tok::RBrace)?;
        self.expect(Tok::RBrace)?;
        Ok(RawAgent {
            name,
            pos,
            states,
            actions,
            protocol,
        })
    }

    fn document(&mut self) -> Result<RawDoc, AmfError> {
        let mut doc = RawDoc::default();
        loop {
            let (tok, pos) = self.toks[self.pos].clone();
            let word = match tok {
                Tok::Eof => break,
                Tok::Ident(w) => w,
                _ => return self.err("a block keyword"),
            };
            self.bump();
            match word.as_str() {
                "agent" => {
                    let a = self.agent()?;
                    if doc.agents.iter().any(|b| b.name == a.name) {
                        return Err(AmfError::Syntax {
                            line: a.pos.line,
                            column: a.pos.column,
                            message: format!("duplicate agent `{}`", a.name),
                        });
                    }
                    doc.agents.push(a);
                }
                "transitions" => {
                    if doc.transitions.is_some() {
                        return Err(AmfError::Syntax {
                            line: pos.line,
                            column: pos.column,
                            message: "duplicate transitions block".into(),
                        });
                    }
                    self.expect(Tok::LBrace)?;
                    let mut rows = Vec::new();
                    while *self.peek() != Tok::RBrace {
                        let p = self.here();
                        let source = self.tuple()?;
                        let action = self.action_tuple()?;
                        let target = self.tuple()?;
                        self.expect(Tok::Semi)?;
                        rows.push(RawTransition {
                            source,
                            action,
                            target,
                            pos: p,
                        });
                    }
                    self.expect(Tok::RBrace)?;
                    doc.transitions = Some((pos, rows));
                }
                "labels" => {
                    self.expect(Tok::LBrace)?;
                    while *self.peek() != Tok::RBrace {
                        let (atom, p) = self.ident()?;
                        self.expect(Tok::Colon)?;
                        let states = self.tuple_list()?;
                        self.expect(Tok::Semi)?;
                        doc.labels.push((atom, p, states));
                    }
                    self.expect(Tok::RBrace)?;
                }
                "init" => {
                    if doc.init.is_some() {
                        return Err(AmfError::Syntax {
                            line: pos.line,
                            column: pos.column,
                            message: "duplicate init block".into(),
                        });
                    }
                    self.expect(Tok::LBrace)?;
                    let mut states = Vec::new();
                    while *self.peek() != Tok::RBrace {
                        states.push(self.tuple()?);
                        self.expect(Tok::Semi)?;
                    }
                    self.expect(Tok::RBrace)?;
                    doc.init = Some((pos, states));
                }
                "fairness" => {
                    self.expect(Tok::LBrace)?;
                    let constraint = if matches!(self.peek(), Tok::Ident(s) if s == "label") {
                        self.bump();
                        self.expect(Tok::Colon)?;
                        let (atom, p) = self.ident()?;
                        self.expect(Tok::Semi)?;
                        RawFairness::Label(atom, p)
                    } else {
                        let states = self.tuple_list()?;
                        if !states.is_empty() {
                            self.expect(Tok::Semi)?;
                        }
                        RawFairness::States(states)
                    };
                    self.expect(Tok::RBrace)?;
                    doc.fairness.push((pos, constraint));
                }
                _ => {
                    return Err(AmfError::Syntax {
                        line: pos.line,
                        column: pos.column,
                        message: format!(
                            "expected `agent`, `transitions`, `labels`, `init` or `fairness`, found `{word}`"
                        ),
                    })
                }
            }
        }
        Ok(doc)
    }
}

fn model_err(pos: Pos, source: ModelError) -> AmfError {
    AmfError::Model {
        line: pos.line,
        column: pos.column,
        source,
    }
}

struct Resolver<'a> {
    agents: &'a [RawAgent],
}

impl Resolver<'_> {
    fn check_arity(&self, slots: &[Slot], pos: Pos, context: &str) -> Result<(), AmfError> {
        if slots.len() != self.agents.len() {
            return Err(model_err(
                pos,
                ModelError::ArityMismatch {
                    context: context.to_string(),
                    expected: self.agents.len(),
                    found: slots.len(),
                },
            ));
        }
        Ok(())
    }

    /// Expands a state tuple into concrete local-state names.
    fn states(&self, slots: &[Slot], pos: Pos, context: &str) -> Result<Vec<Vec<String>>, AmfError> {
        self.check_arity(slots, pos, context)?;
        let mut options: Vec<Vec<String>> = Vec::new();
        for ((slot, p), agent) in slots.iter().zip(self.agents) {
            match slot {
                None => options.push(agent.states.iter().map(|s| s.0.clone()).collect()),
                Some(name) => {
                    if !agent.states.iter().any(|s| &s.0 == name) {
                        return Err(model_err(
                            *p,
                            ModelError::UndeclaredSymbol {
                                kind: "local state",
                                name: name.clone(),
                            },
                        ));
                    }
                    options.push(vec![name.clone()]);
                }
            }
        }
        Ok(product(&options))
    }
}

fn product(options: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut out: Vec<Vec<String>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(out.len() * opts.len());
        for prefix in &out {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        out = next;
    }
    out
}

/// Parses AMF text into a name-level model declaration, expanding wildcards.
pub fn parse_amf(text: &str) -> Result<ModelSpec, AmfError> {
    parse_with_positions(text).map(|(spec, _)| spec)
}

/// Positions used to attach locations to validation errors.
struct Locations {
    transitions: Pos,
    agents: HashMap<String, Pos>,
}

fn parse_with_positions(text: &str) -> Result<(ModelSpec, Locations), AmfError> {
    let toks = lex(text)?;
    let mut parser = Parser { toks, pos: 0 };
    let doc = parser.document()?;
    let eof = parser.here();
    let Some((trans_pos, rows)) = doc.transitions else {
        return Err(AmfError::Syntax {
            line: eof.line,
            column: eof.column,
            message: "missing transitions block".into(),
        });
    };
    let Some((init_pos, init_rows)) = doc.init else {
        return Err(AmfError::Syntax {
            line: eof.line,
            column: eof.column,
            message: "missing init block".into(),
        });
    };
    if doc.agents.is_empty() {
        return Err(model_err(Pos { line: 1, column: 1 }, ModelError::NoAgents));
    }

    let resolver = Resolver { agents: &doc.agents };
    let mut spec = ModelSpec::default();
    for a in &doc.agents {
        let names = |v: &[(String, Pos)]| v.iter().map(|x| x.0.clone()).collect::<Vec<_>>();
        for (list, kind) in [(&a.states, "local state"), (&a.actions, "action")] {
            for (k, (n, p)) in list.iter().enumerate() {
                if list[..k].iter().any(|(m, _)| m == n) {
                    return Err(model_err(
                        *p,
                        ModelError::DuplicateName {
                            kind,
                            name: n.clone(),
                            scope: format!("agent `{}`", a.name),
                        },
                    ));
                }
            }
        }
        for (state, p, acts) in &a.protocol {
            if !a.states.iter().any(|s| &s.0 == state) {
                return Err(model_err(
                    *p,
                    ModelError::UndeclaredSymbol {
                        kind: "local state",
                        name: state.clone(),
                    },
                ));
            }
            for (act, ap) in acts {
                if !a.actions.iter().any(|x| &x.0 == act) {
                    return Err(model_err(
                        *ap,
                        ModelError::UndeclaredSymbol {
                            kind: "action",
                            name: act.clone(),
                        },
                    ));
                }
            }
        }
        spec.agents.push(AgentDecl {
            name: a.name.clone(),
            local_states: names(&a.states),
            actions: names(&a.actions),
            protocol: a.protocol.iter().map(|(s, _, acts)| (s.clone(), names(acts))).collect(),
        });
    }

    for row in &rows {
        let sources = resolver.states(&row.source, row.pos, "transition source")?;
        resolver.check_arity(&row.action, row.pos, "joint action")?;
        if let Some((_, p)) = row.target.iter().find(|(s, _)| s.is_none()) {
            return Err(AmfError::Syntax {
                line: p.line,
                column: p.column,
                message: "wildcard `_` is not allowed in a transition target".into(),
            });
        }
        let targets = resolver.states(&row.target, row.pos, "transition target")?;
        let target = targets.into_iter().next().expect("no wildcard in target");
        for ((slot, p), agent) in row.action.iter().zip(&doc.agents) {
            if let Some(name) = slot {
                if !agent.actions.iter().any(|x| &x.0 == name) {
                    return Err(model_err(
                        *p,
                        ModelError::UndeclaredSymbol {
                            kind: "action",
                            name: name.clone(),
                        },
                    ));
                }
            }
        }
        for source in sources {
            let mut options = Vec::new();
            for (k, (slot, _)) in row.action.iter().enumerate() {
                match slot {
                    Some(name) => options.push(vec![name.clone()]),
                    None => {
                        let decl = &spec.agents[k];
                        let enabled = decl
                            .protocol
                            .iter()
                            .find(|(s, _)| *s == source[k])
                            .map(|(_, acts)| acts.clone())
                            .unwrap_or_default();
                        options.push(enabled);
                    }
                }
            }
            for action in product(&options) {
                spec.transitions.push(TransitionDecl {
                    source: source.clone(),
                    action,
                    target: target.clone(),
                });
            }
        }
    }

    for row in &init_rows {
        spec.init
            .extend(resolver.states(row, row.first().map(|s| s.1).unwrap_or(init_pos), "initial state")?);
    }

    let mut label_map: Vec<(String, Vec<Vec<String>>)> = Vec::new();
    for (atom, p, tuples) in &doc.labels {
        let mut states = Vec::new();
        for t in tuples {
            states.extend(resolver.states(t, t.first().map(|s| s.1).unwrap_or(*p), "label")?);
        }
        match label_map.iter_mut().find(|(a, _)| a == atom) {
            Some((_, v)) => v.extend(states),
            None => label_map.push((atom.clone(), states)),
        }
    }

    for (pos, constraint) in &doc.fairness {
        let states = match constraint {
            RawFairness::States(tuples) => {
                let mut states = Vec::new();
                for t in tuples {
                    states.extend(resolver.states(t, t.first().map(|s| s.1).unwrap_or(*pos), "fairness constraint")?);
                }
                states
            }
            RawFairness::Label(atom, p) => label_map
                .iter()
                .find(|(a, _)| a == atom)
                .map(|(_, v)| v.clone())
                .ok_or_else(|| {
                    model_err(
                        *p,
                        ModelError::UndeclaredSymbol {
                            kind: "label",
                            name: atom.clone(),
                        },
                    )
                })?,
        };
        spec.fairness.push(states);
    }
    spec.labels = label_map;

    let locations = Locations {
        transitions: trans_pos,
        agents: doc.agents.iter().map(|a| (a.name.clone(), a.pos)).collect(),
    };
    Ok((spec, locations))
}

/// Parses, expands and validates an AMF model.
pub fn load_model(text: &str) -> Result<Model, AmfError> {
    let (spec, loc) = parse_with_positions(text)?;
    build_model(&spec).map_err(|e| {
        let pos = match &e {
            ModelError::EmptyProtocol { agent, .. }
            | ModelError::MissingProtocol { agent, .. }
            | ModelError::DuplicateName { scope: agent, .. } => loc
                .agents
                .get(agent.trim_start_matches("agent `").trim_end_matches('`'))
                .copied()
                .unwrap_or(loc.transitions),
            _ => loc.transitions,
        };
        model_err(pos, e)
    })
}

/// Prints a model in AMF with one explicit transition per line.
pub fn print_model(model: &Model) -> String {
    let spec = model.to_spec();
    let mut out = String::new();
    for a in &spec.agents {
        let _ = writeln!(out, "agent {} {{", a.name);
        let _ = writeln!(out, "  states: {};", a.local_states.join(", "));
        let _ = writeln!(out, "  actions: {};", a.actions.join(", "));
        let _ = writeln!(out, "  protocol {{");
        for (s, acts) in &a.protocol {
            let _ = writeln!(out, "    {s}: {};", acts.join(", "));
        }
        let _ = writeln!(out, "  }}\n}}\n");
    }
    let tuple = |v: &[String]| format!("({})", v.join(", "));
    let _ = writeln!(out, "transitions {{");
    for t in &spec.transitions {
        let _ = writeln!(
            out,
            "  {} -[{}]-> {};",
            tuple(&t.source),
            t.action.join(", "),
            tuple(&t.target)
        );
    }
    let _ = writeln!(out, "}}\n");
    if !spec.labels.is_empty() {
        let _ = writeln!(out, "labels {{");
        for (atom, states) in &spec.labels {
            let list: Vec<String> = states.iter().map(|s| tuple(s)).collect();
            let _ = writeln!(out, "  {atom}: {};", list.join(", "));
        }
        let _ = writeln!(out, "}}\n");
    }
    let _ = writeln!(out, "init {{");
    for s in &spec.init {
        let _ = writeln!(out, "  {};", tuple(s));
    }
    let _ = writeln!(out, "}}");
    for f in &spec.fairness {
        let list: Vec<String> = f.iter().map(|s| tuple(s)).collect();
        if list.is_empty() {
            let _ = writeln!(out, "\nfairness {{ }}");
        } else {
            let _ = writeln!(out, "\nfairness {{ {}; }}", list.join(", "));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn fixtures_load() {
        let m1 = fixtures::m1();
        assert_eq!(m1.n_states(), 2);
        assert_eq!(m1.n_joint_actions(), 2);
        let cgf = fixtures::cg_repeat_fair();
        assert_eq!(cgf.fairness().len(), 6);
        assert_eq!(cgf.n_states(), 24);
        assert!(cgf.fairness().iter().all(|f| f.count() == 1));
    }

    #[test]
    fn print_load_round_trip() {
        for m in fixtures::all() {
            let text = print_model(&m.1);
            assert_eq!(load_model(&text).unwrap(), m.1, "fixture {}", m.0);
        }
    }

    #[test]
    fn duplicate_agent_is_a_syntax_error() {
        let text = "agent g { states: x; actions: a; protocol { x: a; } }\n\
                    agent g { states: x; actions: a; protocol { x: a; } }\n\
                    transitions { (x, x) -[a, a]-> (x, x); } init { (x, x); }";
        match load_model(text) {
            Err(AmfError::Syntax { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("duplicate agent"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn wildcards_match_explicit_enumeration() {
        let explicit = "agent g { states: x, y; actions: a, b; protocol { x: a, b; y: a, b; } }\n\
            transitions { (x) -[a]-> (x); (x) -[b]-> (y); (y) -[a]-> (y); (y) -[b]-> (y); }\n\
            labels { p: (y); } init { (x); }";
        let wild = "agent g { states: x, y; actions: a, b; protocol { x: a, b; y: a, b; } }\n\
            transitions { (x) -[a]-> (x); (x) -[b]-> (y); (y) -[_]-> (y); }\n\
            labels { p: (y); } init { (x); }";
        assert_eq!(load_model(explicit).unwrap(), load_model(wild).unwrap());
        assert_eq!(load_model(wild).unwrap(), fixtures::m1());
    }

    #[test]
    fn wildcards_respect_protocols() {
        // `y` only enables `a`; the wildcard must not add a `b` move there.
        let text = "agent g { states: x, y; actions: a, b; protocol { x: a, b; y: a; } }\n\
            transitions { (_) -[_]-> (y); } init { (x); }";
        let m = load_model(text).unwrap();
        let y = m.state_by_names(&["y"]).unwrap();
        assert_eq!(m.enabled_agent(y, 0), vec![0]);
    }

    #[test]
    fn errors_carry_locations() {
        let text = "agent g { states: x; actions: a; protocol { x: a; } }\n\
                    transitions {\n  (x) -[c]-> (x);\n}\ninit { (x); }";
        let e = load_model(text).unwrap_err();
        assert_eq!(e.location(), (3, 9));
        assert!(matches!(
            e,
            AmfError::Model {
                source: ModelError::UndeclaredSymbol { kind: "action", .. },
                ..
            }
        ));

        let e = load_model("agent g { states x; }").unwrap_err();
        assert_eq!(e.location(), (1, 18));

        let text = "agent g { states: x, y; actions: a; protocol { x: a; y: a; } }\n\
                    transitions { (x) -[a]-> (x); } init { (x); }";
        assert!(matches!(
            load_model(text),
            Err(AmfError::Model {
                source: ModelError::NonSerialState { .. },
                ..
            })
        ));
        assert!(matches!(
            load_model("agent g { states: x; actions: a; protocol { x: a; } } init { (x); }"),
            Err(AmfError::Syntax { .. })
        ));
    }

    #[test]
    fn fairness_from_label_and_empty_blocks() {
        let text = "agent g { states: x, y; actions: a; protocol { x: a; y: a; } }\n\
            transitions { (x) -[a]-> (y); (y) -[a]-> (x); }\n\
            labels { p: (y); } init { (x); }\n\
            fairness { label: p; }\nfairness { }";
        let m = load_model(text).unwrap();
        assert_eq!(m.fairness().len(), 2);
        assert_eq!(m.fairness()[0], *m.label("p").unwrap());
        assert!(m.fairness()[1].is_empty());
        assert_eq!(m.warnings().len(), 1);
    }
}
