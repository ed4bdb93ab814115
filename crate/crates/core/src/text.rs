//! Line-oriented `.dfl` theory format and conclusion printing.
//!
//! ```text
//! # comment to end of line
//! p.                 # fact
//! fact ~q.           # fact, explicit form
//! r1: a, ~b => c.    # defeasible rule
//! r2: -> d.          # strict rule with empty body
//! r3: c ~> ~d.       # defeater
//! r1 > r3.           # superiority
//! ```
//!
//! Identifiers are runs of letters, digits and `_`. Names beginning with `$`
//! belong to transformation output and are only accepted with
//! [`ParseOptions::loose`].

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::engine::{ConclusionSet, Sign, SignedConclusion, Tag};
use crate::syntax::{validate_theory, ArrowKind, Label, Literal, Rule, Theory, Violation, RESERVED_CHAR};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SourceSpan {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for SourceSpan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    DuplicateLabel,
    ReservedAtom,
    DanglingSuperiority,
    SuperiorityCycle,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.span, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Copy, Debug, Default)]
pub struct ParseOptions {
    /// Accept `$`-prefixed atoms and labels.
    pub loose: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Tilde,
    Colon,
    Comma,
    Dot,
    Gt,
    Arrow(ArrowKind),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Tilde => "`~`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Gt => "`>`".into(),
            Tok::Arrow(k) => format!("`{}`", k.token()),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Self {
        Lexer {
            chars: text.chars().peekable(),
            line: 1,
            column: 1,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn span(&self) -> SourceSpan {
        SourceSpan {
            line: self.line,
            column: self.column,
        }
    }

    /// Lexes everything; unknown characters become syntax errors.
    fn run(mut self, errors: &mut Vec<ParseError>) -> (Vec<(Tok, SourceSpan)>, SourceSpan) {
        let mut out = Vec::new();
        while let Some(&c) = self.chars.peek() {
            let start = self.span();
            if c.is_whitespace() {
                self.bump();
                continue;
            }
            if c == '#' {
                while self.chars.peek().is_some_and(|&c| c != '\n') {
                    self.bump();
                }
                continue;
            }
            let tok = match c {
                ':' | ',' | '.' | '>' => {
                    self.bump();
                    match c {
                        ':' => Tok::Colon,
                        ',' => Tok::Comma,
                        '.' => Tok::Dot,
                        _ => Tok::Gt,
                    }
                }
                '~' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::Arrow(ArrowKind::Defeater)
                    } else {
                        Tok::Tilde
                    }
                }
                '-' | '=' => {
                    self.bump();
                    if self.chars.peek() == Some(&'>') {
                        self.bump();
                        Tok::Arrow(if c == '-' { ArrowKind::Strict } else { ArrowKind::Defeasible })
                    } else {
                        errors.push(syntax(start, format!("expected `{c}>`")));
                        continue;
                    }
                }
                c if c == RESERVED_CHAR || is_ident_char(c) => match self.ident() {
                    Ok(s) => Tok::Ident(s),
                    Err(msg) => {
                        errors.push(syntax(start, msg));
                        continue;
                    }
                },
                other => {
                    self.bump();
                    errors.push(syntax(start, format!("unexpected character `{other}`")));
                    continue;
                }
            };
            out.push((tok, start));
        }
        // End-of-input errors are reported at the last token so that every
        // span points inside the text.
        let end = out.last().map_or(self.span(), |(_, s)| *s);
        (out, end)
    }

    /// An identifier, optionally `$`-prefixed and followed by one balanced
    /// parenthesised group (the shape of generated names).
    fn ident(&mut self) -> Result<String, String> {
        let mut s = String::new();
        while self.chars.peek() == Some(&RESERVED_CHAR) {
            s.push(self.bump().unwrap());
        }
        let reserved = !s.is_empty();
        while self.chars.peek().is_some_and(|&c| is_ident_char(c)) {
            s.push(self.bump().unwrap());
        }
        if reserved && self.chars.peek() == Some(&'(') {
            let mut depth = 0usize;
            loop {
                match self.chars.peek().copied() {
                    Some('(') => depth += 1,
                    Some(')') => depth -= 1,
                    Some(c) if is_ident_char(c) || c == ',' || c == '~' || c == RESERVED_CHAR => {}
                    _ => return Err(format!("unterminated group in name `{s}`")),
                }
                s.push(self.bump().unwrap());
                if depth == 0 {
                    break;
                }
            }
        }
        if s.chars().all(|c| c == RESERVED_CHAR) {
            return Err("empty name".into());
        }
        Ok(s)
    }
}

fn syntax(span: SourceSpan, message: String) -> ParseError {
    ParseError {
        span,
        message,
        kind: ParseErrorKind::Syntax,
    }
}

struct Parser<'t> {
    toks: &'t [(Tok, SourceSpan)],
    pos: usize,
    end: SourceSpan,
    opts: ParseOptions,
    errors: Vec<ParseError>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(t, _)| t)
    }

    fn span(&self) -> SourceSpan {
        self.toks.get(self.pos).map_or(self.end, |(_, s)| *s)
    }

    fn fail<T>(&self, what: &str) -> Result<T, ParseError> {
        let found = self.peek().map_or("end of input".to_string(), Tok::describe);
        Err(syntax(self.span(), format!("expected {what}, found {found}")))
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&tok) {
            self.pos += 1;
            Ok(())
        } else {
            self.fail(what)
        }
    }

    fn name(&mut self, what: &str) -> Result<(String, SourceSpan), ParseError> {
        let span = self.span();
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                if !self.opts.loose && s.contains(RESERVED_CHAR) {
                    self.errors.push(ParseError {
                        span,
                        message: format!("`{s}` uses the reserved character `{RESERVED_CHAR}`"),
                        kind: ParseErrorKind::ReservedAtom,
                    });
                }
                Ok((s, span))
            }
            _ => self.fail(what),
        }
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        let negated = self.peek() == Some(&Tok::Tilde);
        if negated {
            self.pos += 1;
        }
        let (name, _) = self.name("a literal")?;
        Ok(if negated { Literal::neg(name) } else { Literal::pos(name) })
    }

    fn skip_statement(&mut self) {
        while let Some(t) = self.peek() {
            let done = *t == Tok::Dot;
            self.pos += 1;
            if done {
                break;
            }
        }
    }
}

enum Statement {
    Fact(Literal),
    Rule(Rule, SourceSpan),
    Superiority(Label, Label, SourceSpan),
}

fn statement(p: &mut Parser<'_>) -> Result<Statement, ParseError> {
    let start = p.span();
    let stmt = match (p.peek(), p.peek_at(1)) {
        (Some(Tok::Ident(kw)), Some(Tok::Ident(_) | Tok::Tilde)) if kw == "fact" => {
            p.pos += 1;
            Statement::Fact(p.literal()?)
        }
        (Some(Tok::Ident(_)), Some(Tok::Colon)) => {
            let (label, _) = p.name("a label")?;
            p.pos += 1;
            let mut body = Vec::new();
            if !matches!(p.peek(), Some(Tok::Arrow(_))) {
                body.push(p.literal()?);
                while p.peek() == Some(&Tok::Comma) {
                    p.pos += 1;
                    body.push(p.literal()?);
                }
            }
            let arrow = match p.peek() {
                Some(Tok::Arrow(k)) => *k,
                _ => return p.fail("`,` or an arrow (`->`, `=>`, `~>`)"),
            };
            p.pos += 1;
            let head = p.literal()?;
            Statement::Rule(Rule::new(Label::new(label), body, arrow, head), start)
        }
        (Some(Tok::Ident(_)), Some(Tok::Gt)) => {
            let (w, _) = p.name("a label")?;
            p.pos += 1;
            let (l, _) = p.name("a label")?;
            Statement::Superiority(Label::new(w), Label::new(l), start)
        }
        (Some(Tok::Ident(_) | Tok::Tilde), _) => Statement::Fact(p.literal()?),
        _ => return p.fail("a fact, rule or superiority statement"),
    };
    p.expect(Tok::Dot, "`.`")?;
    Ok(stmt)
}

/// Parses with default options (reserved names rejected).
pub fn parse_theory(text: &str) -> Result<Theory, Vec<ParseError>> {
    parse_theory_with(text, ParseOptions::default())
}

pub fn parse_theory_with(text: &str, opts: ParseOptions) -> Result<Theory, Vec<ParseError>> {
    let mut errors = Vec::new();
    let (toks, end) = Lexer::new(text).run(&mut errors);
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        end,
        opts,
        errors: Vec::new(),
    };
    let mut theory = Theory::new();
    let mut label_spans: HashMap<Label, SourceSpan> = HashMap::new();
    let mut sup_spans: HashMap<(Label, Label), SourceSpan> = HashMap::new();
    while p.peek().is_some() {
        match statement(&mut p) {
            Ok(Statement::Fact(q)) => {
                theory.facts.insert(q);
            }
            Ok(Statement::Rule(r, span)) => {
                if label_spans.contains_key(&r.label) {
                    p.errors.push(ParseError {
                        span,
                        message: format!("label `{}` is already used", r.label),
                        kind: ParseErrorKind::DuplicateLabel,
                    });
                } else {
                    label_spans.insert(r.label.clone(), span);
                }
                theory.rules.push(r);
            }
            Ok(Statement::Superiority(w, l, span)) => {
                sup_spans.entry((w.clone(), l.clone())).or_insert(span);
                theory.superiority.insert((w, l));
            }
            Err(e) => {
                p.errors.push(e);
                p.skip_statement();
            }
        }
    }
    errors.append(&mut p.errors);

    if errors.is_empty() {
        let origin = SourceSpan { line: 1, column: 1 };
        for v in validate_theory(&theory).violations {
            match v {
                // Reported above with the offending statement's position.
                Violation::DuplicateLabel(_) => {}
                Violation::DanglingSuperiority { winner, loser, missing } => errors.push(ParseError {
                    span: sup_spans.get(&(winner.clone(), loser.clone())).copied().unwrap_or(origin),
                    message: format!("superiority `{winner} > {loser}` names unknown rule `{missing}`"),
                    kind: ParseErrorKind::DanglingSuperiority,
                }),
                Violation::SuperiorityCycle(cycle) => {
                    let span = cycle
                        .iter()
                        .zip(cycle.iter().cycle().skip(1))
                        .filter_map(|(w, l)| sup_spans.get(&(w.clone(), l.clone())))
                        .min()
                        .copied()
                        .unwrap_or(origin);
                    let names: Vec<_> = cycle.iter().map(|l| l.name()).collect();
                    errors.push(ParseError {
                        span,
                        message: format!("superiority cycle: {}", names.join(" > ")),
                        kind: ParseErrorKind::SuperiorityCycle,
                    });
                }
            }
        }
    }
    errors.sort_by_key(|e| e.span);
    if errors.is_empty() {
        Ok(theory)
    } else {
        Err(errors)
    }
}

/// Canonical text: sorted facts, rules in order, sorted superiority pairs.
pub fn print_theory(theory: &Theory) -> String {
    let mut out = String::new();
    for q in &theory.facts {
        out.push_str(&format!("{q}.\n"));
    }
    for r in &theory.rules {
        out.push_str(&format!("{r}.\n"));
    }
    for (w, l) in &theory.superiority {
        out.push_str(&format!("{w} > {l}.\n"));
    }
    out
}

pub fn print_conclusion(c: &SignedConclusion) -> String {
    format!("{}{} {}", c.sign, c.tag, c.literal)
}

/// Inverse of [`print_conclusion`]. Generated names are accepted.
pub fn parse_conclusion(text: &str) -> Result<SignedConclusion, ParseError> {
    let at = |column: usize, message: String| syntax(SourceSpan { line: 1, column }, message);
    let text = text.trim_end();
    let sign = match text.chars().next() {
        Some('+') => Sign::Plus,
        Some('-') => Sign::Minus,
        _ => return Err(at(1, "expected `+` or `-`".into())),
    };
    let (tag, lit) = text[1..]
        .split_once(' ')
        .ok_or_else(|| at(2, "expected `<tag> <literal>`".into()))?;
    let tag: Tag = tag.parse().map_err(|e: crate::engine::UnknownTag| at(2, e.to_string()))?;
    let column = tag.spelling().len() + 3;
    let (name, negated) = match lit.strip_prefix('~') {
        Some(rest) => (rest, true),
        None => (lit, false),
    };
    let valid = !name.is_empty()
        && name.trim_start_matches(RESERVED_CHAR).chars().next().is_some_and(is_ident_char)
        && name
            .chars()
            .all(|c| is_ident_char(c) || matches!(c, '(' | ')' | ',' | '~') || c == RESERVED_CHAR);
    if !valid {
        return Err(at(column, format!("invalid literal `{lit}`")));
    }
    let literal = if negated { Literal::neg(name) } else { Literal::pos(name) };
    Ok(SignedConclusion::new(sign, tag, literal))
}

/// One conclusion per line, sorted lexicographically.
pub fn format_conclusions(set: &ConclusionSet) -> String {
    let mut lines: Vec<String> = set.iter().map(|c| print_conclusion(&c)).collect();
    lines.sort();
    let mut out = lines.join("\n");
    if !out.is_empty() {
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConclusionRecord {
    pub sign: String,
    pub tag: String,
    pub literal: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConclusionDocument {
    pub conclusions: Vec<ConclusionRecord>,
}

/// JSON form, in the same order as [`format_conclusions`].
pub fn conclusions_json(set: &ConclusionSet) -> String {
    let mut items: Vec<SignedConclusion> = set.iter().collect();
    items.sort_by_key(print_conclusion);
    let doc = ConclusionDocument {
        conclusions: items
            .into_iter()
            .map(|c| ConclusionRecord {
                sign: c.sign.symbol().to_string(),
                tag: c.tag.spelling().to_string(),
                literal: c.literal.to_string(),
            })
            .collect(),
    };
    serde_json::to_string(&doc).expect("plain records always serialise")
}
