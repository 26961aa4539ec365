//! Propositional event algebra over a finite set of named atoms.
//!
//! Events are plain formula trees. All semantic questions (impossibility,
//! implication, constituents) are answered by enumerating the admissible
//! worlds of a [`Context`], i.e. the total assignments that falsify every
//! declared constraint.

use std::collections::HashMap;
use std::fmt;

use crate::conditionals::{ConditionalEvent, TruthValue3};
use crate::error::{Error, Result};

/// Largest atom count a [`Context`] accepts (2^20 worlds).
pub const MAX_ATOMS: usize = 20;

/// Default bound on the number of constituents in a family (3^7).
pub const DEFAULT_MAX_CONSTITUENTS: usize = 2187;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Event {
    True,
    False,
    Atom(String),
    Not(Box<Event>),
    And(Box<Event>, Box<Event>),
    Or(Box<Event>, Box<Event>),
}

impl Event {
    pub fn atom(name: impl Into<String>) -> Event {
        Event::Atom(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Event {
        Event::Not(Box::new(self))
    }

    pub fn and(self, other: Event) -> Event {
        Event::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Event) -> Event {
        Event::Or(Box::new(self), Box::new(other))
    }

    /// Conjunction of all events; `T` for an empty list.
    pub fn all<I: IntoIterator<Item = Event>>(events: I) -> Event {
        events
            .into_iter()
            .reduce(Event::and)
            .unwrap_or(Event::True)
    }

    /// Disjunction of all events; `F` for an empty list.
    pub fn any<I: IntoIterator<Item = Event>>(events: I) -> Event {
        events
            .into_iter()
            .reduce(Event::or)
            .unwrap_or(Event::False)
    }

    /// Atom names in order of first appearance.
    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    pub(crate) fn collect_atoms(&self, out: &mut Vec<String>) {
        match self {
            Event::True | Event::False => {}
            Event::Atom(name) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Event::Not(e) => e.collect_atoms(out),
            Event::And(a, b) | Event::Or(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Event::Or(..) => 1,
            Event::And(..) => 2,
            _ => 3,
        }
    }

    /// Parenthesizes when binding looser than `min`. Right operands pass a
    /// higher `min` so printing matches the left-associative parse.
    fn fmt_child(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::True => f.write_str("T"),
            Event::False => f.write_str("F"),
            Event::Atom(name) => f.write_str(name),
            Event::Not(e) => {
                f.write_str("~")?;
                e.fmt_child(f, 3)
            }
            Event::And(a, b) => {
                a.fmt_child(f, 2)?;
                f.write_str(" & ")?;
                b.fmt_child(f, 3)
            }
            Event::Or(a, b) => {
                a.fmt_child(f, 1)?;
                f.write_str(" | ")?;
                b.fmt_child(f, 2)
            }
        }
    }
}

impl std::str::FromStr for Event {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_event(s)
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_') && name != "T" && name != "F"
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Token {
    Ident(String),
    True,
    False,
    Not,
    And,
    Or,
    Open,
    Close,
}

/// Tokens paired with their 1-based column.
pub(crate) fn tokenize(text: &str) -> Result<Vec<(Token, usize)>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            ' ' | '\t' | '\r' | '\n' => {
                i += 1;
                continue;
            }
            '~' => out.push((Token::Not, column)),
            '&' => out.push((Token::And, column)),
            '|' => out.push((Token::Or, column)),
            '(' => out.push((Token::Open, column)),
            ')' => out.push((Token::Close, column)),
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let token = match word.as_str() {
                    "T" => Token::True,
                    "F" => Token::False,
                    _ => Token::Ident(word),
                };
                out.push((token, column));
                continue;
            }
            other => {
                return Err(Error::Syntax {
                    column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        }
        i += 1;
    }
    Ok(out)
}

pub(crate) struct Parser<'a> {
    tokens: &'a [(Token, usize)],
    pos: usize,
    end_column: usize,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(tokens: &'a [(Token, usize)], end_column: usize) -> Self {
        Parser {
            tokens,
            pos: 0,
            end_column,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(t, _)| t)
    }

    fn column(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_column)
    }

    fn syntax<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            column: self.column(),
            message: message.into(),
        })
    }

    pub(crate) fn parse_complete(mut self) -> Result<Event> {
        let event = self.disjunction()?;
        if self.pos != self.tokens.len() {
            return self.syntax("unexpected trailing input");
        }
        Ok(event)
    }

    fn disjunction(&mut self) -> Result<Event> {
        let mut left = self.conjunction()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            let right = self.conjunction()?;
            left = left.or(right);
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Event> {
        let mut left = self.unary()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            let right = self.unary()?;
            left = left.and(right);
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Event> {
        match self.peek().cloned() {
            Some(Token::Not) => {
                self.pos += 1;
                Ok(self.unary()?.not())
            }
            Some(Token::Open) => {
                self.pos += 1;
                let inner = self.disjunction()?;
                if self.peek() != Some(&Token::Close) {
                    return self.syntax("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(Token::Ident(name)) => {
                self.pos += 1;
                Ok(Event::Atom(name))
            }
            Some(Token::True) => {
                self.pos += 1;
                Ok(Event::True)
            }
            Some(Token::False) => {
                self.pos += 1;
                Ok(Event::False)
            }
            Some(_) => self.syntax("expected an atom, constant, `~` or `(`"),
            None => self.syntax("unexpected end of input"),
        }
    }
}

/// Parses an event: identifiers, `~`, `&`, `|`, parentheses, constants
/// `T` and `F`, with precedence `~` > `&` > `|`.
pub fn parse_event(text: &str) -> Result<Event> {
    let tokens = tokenize(text)?;
    Parser::new(&tokens, text.chars().count() + 1).parse_complete()
}

/// A total assignment over the atoms of a context.
///
/// Atom `i` of an `n`-atom context is stored at bit `n - 1 - i`, so the
/// numeric order of `code` is the lexicographic order over atom order
/// with false < true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct World {
    code: u64,
    len: u8,
}

impl World {
    pub fn from_code(code: u64, len: usize) -> World {
        World {
            code,
            len: len as u8,
        }
    }

    pub fn code(&self) -> u64 {
        self.code
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Truth value of atom `index`.
    pub fn get(&self, index: usize) -> bool {
        debug_assert!(index < self.len());
        (self.code >> (self.len() - 1 - index)) & 1 == 1
    }
}

/// Resolved event with atom indices instead of names.
#[derive(Debug, Clone)]
enum Compiled {
    Const(bool),
    Atom(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    fn eval(&self, world: World) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Atom(i) => world.get(*i),
            Compiled::Not(e) => !e.eval(world),
            Compiled::And(a, b) => a.eval(world) && b.eval(world),
            Compiled::Or(a, b) => a.eval(world) || b.eval(world),
        }
    }
}

/// Subset of the admissible worlds of a context, indexed like
/// [`Context::worlds`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WorldSet(Vec<bool>);

impl WorldSet {
    pub fn contains(&self, index: usize) -> bool {
        self.0[index]
    }

    pub fn is_empty(&self) -> bool {
        !self.0.iter().any(|&b| b)
    }

    pub fn len(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| !a || b)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter_map(|(i, &b)| b.then_some(i))
    }
}

/// Atoms plus logical constraints ("this event is impossible").
#[derive(Debug, Clone)]
pub struct Context {
    atoms: Vec<String>,
    index: HashMap<String, usize>,
    constraints: Vec<Event>,
    worlds: Vec<World>,
    max_constituents: usize,
}

impl Context {
    pub fn new<S: AsRef<str>>(atoms: &[S], constraints: Vec<Event>) -> Result<Context> {
        if atoms.is_empty() {
            return Err(Error::NoAtoms);
        }
        if atoms.len() > MAX_ATOMS {
            return Err(Error::TooManyAtoms {
                count: atoms.len(),
                max: MAX_ATOMS,
            });
        }
        let mut index = HashMap::new();
        let mut names = Vec::with_capacity(atoms.len());
        for (i, a) in atoms.iter().enumerate() {
            let name = a.as_ref().to_string();
            if !is_identifier(&name) {
                return Err(Error::InvalidAtomName(name));
            }
            if index.insert(name.clone(), i).is_some() {
                return Err(Error::DuplicateAtom(name));
            }
            names.push(name);
        }
        let mut ctx = Context {
            atoms: names,
            index,
            constraints: Vec::new(),
            worlds: Vec::new(),
            max_constituents: DEFAULT_MAX_CONSTITUENTS,
        };
        let compiled: Vec<Compiled> = constraints
            .iter()
            .map(|c| ctx.compile(c))
            .collect::<Result<_>>()?;
        let n = ctx.atoms.len();
        ctx.worlds = (0..1u64 << n)
            .map(|code| World::from_code(code, n))
            .filter(|w| compiled.iter().all(|c| !c.eval(*w)))
            .collect();
        ctx.constraints = constraints;
        Ok(ctx)
    }

    /// Context over the atoms of the given events, in order of appearance,
    /// with no constraints.
    pub fn independent_over(events: &[&Event]) -> Result<Context> {
        let mut atoms = Vec::new();
        for e in events {
            e.collect_atoms(&mut atoms);
        }
        Context::new(&atoms, Vec::new())
    }

    pub fn with_max_constituents(mut self, limit: usize) -> Context {
        self.max_constituents = limit;
        self
    }

    pub fn max_constituents(&self) -> usize {
        self.max_constituents
    }

    pub fn atoms(&self) -> &[String] {
        &self.atoms
    }

    pub fn constraints(&self) -> &[Event] {
        &self.constraints
    }

    pub fn has_constraints(&self) -> bool {
        !self.constraints.is_empty()
    }

    /// Admissible worlds in lexicographic order.
    pub fn worlds(&self) -> &[World] {
        &self.worlds
    }

    /// Parses an event and checks that it only mentions known atoms.
    pub fn parse_event(&self, text: &str) -> Result<Event> {
        let event = parse_event(text)?;
        self.check_atoms(&event)?;
        Ok(event)
    }

    pub fn check_atoms(&self, event: &Event) -> Result<()> {
        self.compile(event).map(|_| ())
    }

    fn compile(&self, event: &Event) -> Result<Compiled> {
        Ok(match event {
            Event::True => Compiled::Const(true),
            Event::False => Compiled::Const(false),
            Event::Atom(name) => Compiled::Atom(
                *self
                    .index
                    .get(name)
                    .ok_or_else(|| Error::UnknownAtom(name.clone()))?,
            ),
            Event::Not(e) => Compiled::Not(Box::new(self.compile(e)?)),
            Event::And(a, b) => Compiled::And(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
            Event::Or(a, b) => Compiled::Or(Box::new(self.compile(a)?), Box::new(self.compile(b)?)),
        })
    }

    pub fn eval(&self, event: &Event, world: World) -> Result<bool> {
        Ok(self.compile(event)?.eval(world))
    }

    /// The admissible worlds in which `event` holds.
    pub fn truth_set(&self, event: &Event) -> Result<WorldSet> {
        let compiled = self.compile(event)?;
        Ok(WorldSet(self.worlds.iter().map(|w| compiled.eval(*w)).collect()))
    }

    pub fn is_impossible(&self, event: &Event) -> Result<bool> {
        Ok(self.truth_set(event)?.is_empty())
    }

    /// `a` logically implies `b`: `a & ~b` is impossible.
    pub fn implies(&self, a: &Event, b: &Event) -> Result<bool> {
        Ok(self.truth_set(a)?.is_subset(&self.truth_set(b)?))
    }

    pub fn events_equivalent(&self, a: &Event, b: &Event) -> Result<bool> {
        Ok(self.truth_set(a)? == self.truth_set(b)?)
    }

    /// Renders a world as a conjunction of literals, e.g. `A & ~B`.
    pub fn describe_world(&self, world: World) -> String {
        self.atoms
            .iter()
            .enumerate()
            .map(|(i, a)| if world.get(i) { a.clone() } else { format!("~{a}") })
            .collect::<Vec<_>>()
            .join(" & ")
    }
}

/// All assignments over `atoms` in which every constraint is false, in
/// lexicographic order (atom order, false < true).
pub fn enumerate_worlds<S: AsRef<str>>(atoms: &[S], constraints: Vec<Event>) -> Result<Vec<World>> {
    Ok(Context::new(atoms, constraints)?.worlds)
}

/// A class of admissible worlds sharing one True/Void/False profile.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constituent {
    /// Truth value of each conditional of the family on this class.
    pub profile: Vec<TruthValue3>,
    /// Indices into [`Context::worlds`], ascending.
    pub worlds: Vec<usize>,
}

impl Constituent {
    pub fn representative(&self) -> usize {
        self.worlds[0]
    }
}

/// Constituents generated by a family of conditional events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstituentSet {
    /// The class where every antecedent is false, when nonempty.
    pub c0: Option<Constituent>,
    /// Classes contained in the disjunction of the antecedents, ordered by
    /// their first world.
    pub inside: Vec<Constituent>,
}

impl ConstituentSet {
    pub fn len(&self) -> usize {
        self.inside.len() + usize::from(self.c0.is_some())
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Partitions the admissible worlds of `ctx` by the truth profile they
/// induce over `family`.
pub fn constituents(ctx: &Context, family: &[ConditionalEvent]) -> Result<ConstituentSet> {
    if family.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let mut columns = Vec::with_capacity(family.len());
    for ce in family {
        let profile = ce.truth_profile(ctx)?;
        if profile.iter().all(|t| *t == TruthValue3::Void) {
            return Err(Error::ImpossibleAntecedent(ce.antecedent.to_string()));
        }
        columns.push(profile);
    }
    let mut c0: Option<Constituent> = None;
    let mut inside: Vec<Constituent> = Vec::new();
    let mut by_profile: HashMap<Vec<TruthValue3>, usize> = HashMap::new();
    for w in 0..ctx.worlds.len() {
        let profile: Vec<TruthValue3> = columns.iter().map(|col| col[w]).collect();
        if profile.iter().all(|t| *t == TruthValue3::Void) {
            c0.get_or_insert_with(|| Constituent {
                profile: profile.clone(),
                worlds: Vec::new(),
            })
            .worlds
            .push(w);
            continue;
        }
        match by_profile.get(&profile) {
            Some(&k) => inside[k].worlds.push(w),
            None => {
                if inside.len() == ctx.max_constituents {
                    return Err(Error::TooManyConstituents {
                        count: inside.len() + 1,
                        limit: ctx.max_constituents,
                    });
                }
                by_profile.insert(profile.clone(), inside.len());
                inside.push(Constituent {
                    profile,
                    worlds: vec![w],
                });
            }
        }
    }
    Ok(ConstituentSet { c0, inside })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(s: &str) -> Event {
        parse_event(s).unwrap()
    }

    #[test]
    fn parses_grammar_cases() {
        assert_eq!(ev("A & ~B"), Event::atom("A").and(Event::atom("B").not()));
        assert_eq!(ev("T"), Event::True);
        assert_eq!(ev("F"), Event::False);
        assert_eq!(
            ev("A | (B & C)"),
            Event::atom("A").or(Event::atom("B").and(Event::atom("C")))
        );
        assert_eq!(
            ev("A | B & C"),
            Event::atom("A").or(Event::atom("B").and(Event::atom("C")))
        );
        assert_eq!(ev("~~A"), Event::atom("A").not().not());
        assert_eq!(ev("x_1 & T1"), Event::atom("x_1").and(Event::atom("T1")));
    }

    #[test]
    fn syntax_errors_carry_column() {
        match parse_event("A & ") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
        match parse_event("A $ B") {
            Err(Error::Syntax { column, .. }) => assert_eq!(column, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_event("(A"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_event("A B"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_event(""), Err(Error::Syntax { .. })));
    }

    #[test]
    fn unknown_atom_is_reported() {
        let ctx = Context::new(&["A"], vec![]).unwrap();
        assert_eq!(ctx.parse_event("A & B"), Err(Error::UnknownAtom("B".into())));
    }

    #[test]
    fn printer_round_trips() {
        for s in ["A & ~B", "A | B & C", "(A | B) & C", "~(A & B) | F", "~~A", "A & (B & C)"] {
            let e = ev(s);
            assert_eq!(ev(&e.to_string()), e, "{s} printed as {e}");
        }
    }

    #[test]
    fn world_counts() {
        assert_eq!(enumerate_worlds(&["A", "B"], vec![]).unwrap().len(), 4);
        assert_eq!(enumerate_worlds(&["A", "B", "C"], vec![]).unwrap().len(), 8);
        let ctx = Context::new(&["A", "B"], vec![ev("A & B")]).unwrap();
        let described: Vec<_> = ctx.worlds().iter().map(|w| ctx.describe_world(*w)).collect();
        assert_eq!(described, vec!["~A & ~B", "~A & B", "A & ~B"]);
    }

    #[test]
    fn lexicographic_order() {
        let worlds = enumerate_worlds(&["A", "B"], vec![]).unwrap();
        let bits: Vec<(bool, bool)> = worlds.iter().map(|w| (w.get(0), w.get(1))).collect();
        assert_eq!(bits, vec![(false, false), (false, true), (true, false), (true, true)]);
    }

    #[test]
    fn impossibility_and_implication() {
        let ctx = Context::new(&["A", "B"], vec![]).unwrap();
        assert!(ctx.is_impossible(&ev("A & ~A")).unwrap());
        assert!(!ctx.is_impossible(&ev("A")).unwrap());
        let constrained = Context::new(&["A", "B"], vec![ev("A & B")]).unwrap();
        assert!(constrained.is_impossible(&ev("A & B")).unwrap());
        assert!(ctx.implies(&ev("A & B"), &ev("A")).unwrap());
        assert!(ctx.implies(&ev("A"), &ev("A | B")).unwrap());
        assert!(!ctx.implies(&ev("A"), &ev("B")).unwrap());
        assert_eq!(ctx.is_impossible(&ev("C")), Err(Error::UnknownAtom("C".into())));
    }

    #[test]
    fn context_validation() {
        assert_eq!(Context::new::<&str>(&[], vec![]).err(), Some(Error::NoAtoms));
        assert_eq!(
            Context::new(&["A", "A"], vec![]).err(),
            Some(Error::DuplicateAtom("A".into()))
        );
        assert!(matches!(Context::new(&["T"], vec![]), Err(Error::InvalidAtomName(_))));
        assert!(matches!(
            Context::new(&["A"], vec![ev("B")]),
            Err(Error::UnknownAtom(_))
        ));
    }
}
