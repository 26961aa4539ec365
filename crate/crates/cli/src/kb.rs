//! Knowledge-base files.
//!
//! A file is a sequence of sections, each opened by a header line:
//!
//! ```text
//! # comments run to the end of the line
//! atoms: L S G N
//! constraints:
//!   A & B
//! conditionals:
//!   gl: G | L = 1
//!   sl: S | L = 0.9
//! queries:
//!   ~N | L
//! ```
//!
//! Atoms are separated by spaces or commas. Constraints are events declared
//! impossible. Conditionals carry an optional name (`c1`, `c2`, ... by
//! position otherwise) and an optional probability written `a/b`, as an
//! integer or as a decimal; either every conditional has a probability or
//! none does. Items may also follow a header on the same line.

use std::fmt;
use std::path::Path;

use cohere_core::coherence::Assessment;
use cohere_core::conditionals::parse_conditional;
use cohere_core::inference::KnowledgeBase;
use cohere_core::rational::{format_rational, is_unit, parse_rational, Rational};
use cohere_core::{parse_event, ConditionalEvent, Context, Error, Event};

/// Environment variable overriding the constituent limit of loaded contexts.
pub const MAX_CONSTITUENTS_VAR: &str = "COHERE_MAX_CONSTITUENTS";

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct KbError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub name: String,
    pub conditional: ConditionalEvent,
    pub prob: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct KbFile {
    pub atoms: Vec<String>,
    pub constraints: Vec<Event>,
    pub conditionals: Vec<Entry>,
    pub queries: Vec<ConditionalEvent>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Atoms,
    Constraints,
    Conditionals,
    Queries,
}

const SECTIONS: [(&str, Section); 4] = [
    ("atoms:", Section::Atoms),
    ("constraints:", Section::Constraints),
    ("conditionals:", Section::Conditionals),
    ("queries:", Section::Queries),
];

/// Where an item came from, for error reporting after the whole file is read.
#[derive(Debug, Clone, Copy)]
struct Span {
    line: usize,
    column: usize,
}

impl Span {
    fn error(self, message: impl Into<String>) -> KbError {
        KbError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    /// Maps a core error on the text starting at this span.
    fn core(self, e: Error) -> KbError {
        match e {
            Error::Syntax { column, message } => KbError {
                line: self.line,
                column: self.column + column - 1,
                message,
            },
            other => self.error(other.to_string()),
        }
    }
}

/// Text with its starting column (1-based, in characters).
fn trimmed(text: &str, column: usize) -> (&str, usize) {
    let lead = text.chars().take_while(|c| c.is_whitespace()).count();
    let skipped: usize = text.chars().take(lead).map(char::len_utf8).sum();
    (text[skipped..].trim_end(), column + lead)
}

fn char_column(text: &str, byte: usize, start: usize) -> usize {
    start + text[..byte].chars().count()
}

impl KbFile {
    pub fn parse(text: &str) -> Result<KbFile, KbError> {
        let mut kb = KbFile::default();
        let mut spans = Spans::default();
        let mut section = None;
        for (index, raw) in text.lines().enumerate() {
            let line = index + 1;
            let content = raw.split('#').next().unwrap_or("");
            let (mut body, mut column) = trimmed(content, 1);
            if body.is_empty() {
                continue;
            }
            if let Some(&(header, s)) = SECTIONS.iter().find(|(h, _)| body.starts_with(h)) {
                section = Some(s);
                (body, column) = trimmed(&body[header.len()..], column + header.len());
                if body.is_empty() {
                    continue;
                }
            }
            let span = Span { line, column };
            match section {
                None => return Err(span.error("expected a section header such as `atoms:`")),
                Some(Section::Atoms) => kb.parse_atoms(body, span, &mut spans),
                Some(Section::Constraints) => {
                    kb.constraints.push(parse_event(body).map_err(|e| span.core(e))?);
                    spans.constraints.push(span);
                    Ok(())
                }
                Some(Section::Conditionals) => kb.parse_conditional(body, span, &mut spans),
                Some(Section::Queries) => {
                    kb.queries.push(parse_conditional(body).map_err(|e| span.core(e))?);
                    spans.queries.push(span);
                    Ok(())
                }
            }?;
        }
        kb.validate(&spans)?;
        Ok(kb)
    }

    /// Reads and parses a file; errors name the path.
    pub fn load(path: &Path) -> anyhow::Result<KbFile> {
        use anyhow::Context as _;
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        KbFile::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    fn parse_atoms(&mut self, body: &str, span: Span, spans: &mut Spans) -> Result<(), KbError> {
        let mut start = 0;
        for piece in body.split(|c: char| c == ',' || c.is_whitespace()) {
            if !piece.is_empty() {
                let column = char_column(body, start, span.column);
                self.atoms.push(piece.to_string());
                spans.atoms.push(Span { line: span.line, column });
            }
            start += piece.len() + 1;
        }
        Ok(())
    }

    fn parse_conditional(&mut self, body: &str, span: Span, spans: &mut Spans) -> Result<(), KbError> {
        let (name, rest, rest_column) = match body.find(':') {
            Some(colon) => {
                let name = body[..colon].trim_end();
                if !is_identifier(name) {
                    return Err(span.error(format!("invalid conditional name `{name}`")));
                }
                let (rest, column) = trimmed(&body[colon + 1..], char_column(body, colon + 1, span.column));
                (name.to_string(), rest, column)
            }
            None => (format!("c{}", self.conditionals.len() + 1), body, span.column),
        };
        let (expr, prob) = match rest.rsplit_once('=') {
            Some((expr, prob)) => {
                let prob_start = char_column(rest, expr.len() + 1, rest_column);
                let (text, column) = trimmed(prob, prob_start);
                let value = parse_rational(text)
                    .map_err(|e| Span { line: span.line, column }.error(e.to_string()))?;
                if !is_unit(&value) {
                    return Err(Span { line: span.line, column }.core(Error::OutOfRange(value)));
                }
                (expr.trim_end(), Some(value))
            }
            None => (rest, None),
        };
        let expr_span = Span { line: span.line, column: rest_column };
        let conditional = parse_conditional(expr).map_err(|e| expr_span.core(e))?;
        self.conditionals.push(Entry { name, conditional, prob });
        spans.conditionals.push(expr_span);
        Ok(())
    }

    fn validate(&self, spans: &Spans) -> Result<(), KbError> {
        let ctx = Context::new(&self.atoms, vec![]).map_err(|e| {
            let at = match &e {
                Error::DuplicateAtom(name) => self.atoms.iter().rposition(|a| a == name),
                Error::InvalidAtomName(name) => self.atoms.iter().position(|a| a == name),
                _ => None,
            };
            let span = at.map_or(Span { line: 1, column: 1 }, |k| spans.atoms[k]);
            span.core(e)
        })?;
        for (event, span) in self.constraints.iter().zip(&spans.constraints) {
            ctx.check_atoms(event).map_err(|e| span.core(e))?;
        }
        let ctx = self.context().map_err(|e| Span { line: 1, column: 1 }.core(e))?;
        let given = self.conditionals.iter().filter(|e| e.prob.is_some()).count();
        for (k, (entry, span)) in self.conditionals.iter().zip(&spans.conditionals).enumerate() {
            if self.conditionals[..k].iter().any(|e| e.name == entry.name) {
                return Err(span.error(format!("duplicate conditional name `{}`", entry.name)));
            }
            entry.conditional.validate(&ctx).map_err(|e| span.core(e))?;
            if given != 0 && given != self.conditionals.len() && entry.prob.is_none() {
                return Err(span.error("either every conditional has a probability or none does"));
            }
        }
        for (query, span) in self.queries.iter().zip(&spans.queries) {
            query.validate(&ctx).map_err(|e| span.core(e))?;
        }
        Ok(())
    }

    /// Context over the declared atoms and constraints, with the
    /// constituent limit taken from the environment when set.
    pub fn context(&self) -> cohere_core::Result<Context> {
        let ctx = Context::new(&self.atoms, self.constraints.clone())?;
        Ok(match max_constituents_override()? {
            Some(limit) => ctx.with_max_constituents(limit),
            None => ctx,
        })
    }

    pub fn knowledge_base(&self) -> cohere_core::Result<KnowledgeBase> {
        let entries = self
            .conditionals
            .iter()
            .map(|e| (e.name.clone(), e.conditional.clone()))
            .collect();
        KnowledgeBase::new(self.context()?, entries)
    }

    /// The assessment given by the probabilities, if the file has them.
    pub fn assessment(&self) -> cohere_core::Result<Option<Assessment>> {
        let probs: Option<Vec<Rational>> = self.conditionals.iter().map(|e| e.prob.clone()).collect();
        match probs {
            Some(p) if !p.is_empty() => {
                let family = self.conditionals.iter().map(|e| e.conditional.clone()).collect();
                Assessment::from_rationals(family, p).map(Some)
            }
            _ => Ok(None),
        }
    }

    pub fn names(&self) -> Vec<String> {
        self.conditionals.iter().map(|e| e.name.clone()).collect()
    }
}

fn max_constituents_override() -> cohere_core::Result<Option<usize>> {
    match std::env::var(MAX_CONSTITUENTS_VAR) {
        Ok(v) => v.trim().parse().map(Some).map_err(|_| {
            Error::Invalid(format!("{MAX_CONSTITUENTS_VAR} must be a positive integer, got `{v}`"))
        }),
        Err(_) => Ok(None),
    }
}

fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Default)]
struct Spans {
    atoms: Vec<Span>,
    constraints: Vec<Span>,
    conditionals: Vec<Span>,
    queries: Vec<Span>,
}

/// Canonical text form; parsing it gives back an identical structure.
impl fmt::Display for KbFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "atoms: {}", self.atoms.join(" "))?;
        if !self.constraints.is_empty() {
            writeln!(f, "constraints:")?;
            for c in &self.constraints {
                writeln!(f, "  {c}")?;
            }
        }
        writeln!(f, "conditionals:")?;
        for e in &self.conditionals {
            write!(f, "  {}: {}", e.name, e.conditional)?;
            if let Some(p) = &e.prob {
                write!(f, " = {}", format_rational(p))?;
            }
            writeln!(f)?;
        }
        if !self.queries.is_empty() {
            writeln!(f, "queries:")?;
            for q in &self.queries {
                writeln!(f, "  {q}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINDA: &str = include_str!("../../../kb/linda.kb");

    #[test]
    fn linda_loads() {
        let kb = KbFile::parse(LINDA).unwrap();
        assert_eq!(kb.atoms, ["L", "S", "G", "N"]);
        assert_eq!(kb.conditionals.len(), 5);
        assert_eq!(kb.names(), ["gl", "sl", "nls", "ls", "gn"]);
        assert_eq!(kb.queries.len(), 5);
        assert!(kb.assessment().unwrap().is_none());
    }

    #[test]
    fn round_trip() {
        let kb = KbFile::parse(LINDA).unwrap();
        assert_eq!(KbFile::parse(&kb.to_string()).unwrap(), kb);
        let text = "atoms: A, B\nconstraints:\n  A & B\nconditionals:\n  (A | B) | ~A = 0.2\n  x: A | B | T = 3/4\n";
        let kb = KbFile::parse(text).unwrap();
        assert_eq!(kb.conditionals[0].name, "c1");
        assert_eq!(kb.conditionals[0].prob, Some(Rational::new(1.into(), 5.into())));
        assert_eq!(KbFile::parse(&kb.to_string()).unwrap(), kb);
    }

    #[test]
    fn errors_carry_positions() {
        let err = KbFile::parse("atoms: A\nconditionals:\n  a: A | T = 3/2\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 14));
        assert!(err.message.contains("outside [0, 1]"), "{}", err.message);

        let err = KbFile::parse("atoms: A\nconditionals:\n  A | F\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 3));
        assert!(err.message.contains("impossible"), "{}", err.message);

        let err = KbFile::parse("atoms: A\nconditionals:\n  A & | T\n").unwrap_err();
        assert_eq!(err.line, 3);

        let err = KbFile::parse("atoms: A B A\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 12));

        let err = KbFile::parse("atoms: A\nconditionals:\n  x: A\n  x: ~A\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = KbFile::parse("atoms: A\nconditionals:\n  A = 1\n  ~A\n").unwrap_err();
        assert_eq!(err.line, 4);

        let err = KbFile::parse("atoms: A\nqueries:\n  B | A\n").unwrap_err();
        assert!(err.message.contains("unknown atom"));

        let err = KbFile::parse("A | B\n").unwrap_err();
        assert_eq!((err.line, err.column), (1, 1));
    }
}
