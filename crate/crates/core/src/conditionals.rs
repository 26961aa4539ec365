//! Conditional events `E|H` with three-valued semantics, and the
//! quasi conjunction / quasi disjunction operations on families of them.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::events::{tokenize, Context, Event, Parser, Token, World};

/// Truth value of a conditional event, ordered `False < Void < True`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TruthValue3 {
    False,
    Void,
    True,
}

impl fmt::Display for TruthValue3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue3::False => "False",
            TruthValue3::Void => "Void",
            TruthValue3::True => "True",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConditionalEvent {
    pub consequent: Event,
    pub antecedent: Event,
}

impl ConditionalEvent {
    pub fn new(consequent: Event, antecedent: Event) -> ConditionalEvent {
        ConditionalEvent {
            consequent,
            antecedent,
        }
    }

    /// Builds `consequent | antecedent`, rejecting an impossible antecedent.
    pub fn new_in(ctx: &Context, consequent: Event, antecedent: Event) -> Result<ConditionalEvent> {
        let ce = ConditionalEvent::new(consequent, antecedent);
        ce.validate(ctx)?;
        Ok(ce)
    }

    /// Unconditional event `e|T`.
    pub fn unconditional(e: Event) -> ConditionalEvent {
        ConditionalEvent::new(e, Event::True)
    }

    pub fn validate(&self, ctx: &Context) -> Result<()> {
        ctx.check_atoms(&self.consequent)?;
        if ctx.is_impossible(&self.antecedent)? {
            return Err(Error::ImpossibleAntecedent(self.antecedent.to_string()));
        }
        Ok(())
    }

    pub fn truth_value(&self, ctx: &Context, world: World) -> Result<TruthValue3> {
        Ok(if !ctx.eval(&self.antecedent, world)? {
            TruthValue3::Void
        } else if ctx.eval(&self.consequent, world)? {
            TruthValue3::True
        } else {
            TruthValue3::False
        })
    }

    /// Truth value on every admissible world of `ctx`.
    pub fn truth_profile(&self, ctx: &Context) -> Result<Vec<TruthValue3>> {
        let h = ctx.truth_set(&self.antecedent)?;
        let e = ctx.truth_set(&self.consequent)?;
        Ok((0..ctx.worlds().len())
            .map(|w| match (h.contains(w), e.contains(w)) {
                (false, _) => TruthValue3::Void,
                (true, true) => TruthValue3::True,
                (true, false) => TruthValue3::False,
            })
            .collect())
    }

    /// `(E|H)^c = E^c|H`.
    pub fn negate(&self) -> ConditionalEvent {
        ConditionalEvent::new(self.consequent.clone().not(), self.antecedent.clone())
    }

    /// `E & H`, the event on which the conditional is true.
    pub fn verifier(&self) -> Event {
        self.consequent.clone().and(self.antecedent.clone())
    }

    /// `~E & H`, the event on which the conditional is false.
    pub fn falsifier(&self) -> Event {
        self.consequent.clone().not().and(self.antecedent.clone())
    }

    pub fn atoms(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.consequent.collect_atoms(&mut out);
        self.antecedent.collect_atoms(&mut out);
        out
    }
}

impl fmt::Display for ConditionalEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.consequent {
            Event::Or(..) => write!(f, "({}) | {}", self.consequent, self.antecedent),
            _ => write!(f, "{} | {}", self.consequent, self.antecedent),
        }
    }
}

impl std::str::FromStr for ConditionalEvent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_conditional(s)
    }
}

/// Parses `consequent | antecedent`.
///
/// The first `|` outside parentheses that splits the text into two valid
/// events is the conditioning bar, so `(A | B) | H` is the disjunction
/// `A | B` given `H`. Text without a top-level `|` is conditioned on `T`.
pub fn parse_conditional(text: &str) -> Result<ConditionalEvent> {
    let tokens = tokenize(text)?;
    let end = text.chars().count() + 1;
    let mut depth = 0usize;
    let mut first_error = None;
    for (i, (tok, column)) in tokens.iter().enumerate() {
        match tok {
            Token::Open => depth += 1,
            Token::Close => depth = depth.saturating_sub(1),
            Token::Or if depth == 0 => {
                let left = Parser::new(&tokens[..i], *column).parse_complete();
                let right = Parser::new(&tokens[i + 1..], end).parse_complete();
                match (left, right) {
                    (Ok(e), Ok(h)) => return Ok(ConditionalEvent::new(e, h)),
                    (Err(err), _) | (_, Err(err)) => {
                        first_error.get_or_insert(err);
                    }
                }
            }
            _ => {}
        }
    }
    if let Some(err) = first_error {
        return Err(err);
    }
    Ok(ConditionalEvent::unconditional(
        Parser::new(&tokens, end).parse_complete()?,
    ))
}

/// `C(F) = AND_i (E_i H_i | ~H_i) | OR_i H_i`; a singleton family is
/// returned unchanged.
pub fn quasi_conjunction(family: &[ConditionalEvent]) -> Result<ConditionalEvent> {
    match family {
        [] => Err(Error::EmptyFamily),
        [single] => Ok(single.clone()),
        _ => Ok(ConditionalEvent::new(
            Event::all(
                family
                    .iter()
                    .map(|ce| ce.verifier().or(ce.antecedent.clone().not())),
            ),
            Event::any(family.iter().map(|ce| ce.antecedent.clone())),
        )),
    }
}

/// `D(F) = OR_i E_i H_i | OR_i H_i`; a singleton family is returned
/// unchanged.
pub fn quasi_disjunction(family: &[ConditionalEvent]) -> Result<ConditionalEvent> {
    match family {
        [] => Err(Error::EmptyFamily),
        [single] => Ok(single.clone()),
        _ => Ok(ConditionalEvent::new(
            Event::any(family.iter().map(ConditionalEvent::verifier)),
            Event::any(family.iter().map(|ce| ce.antecedent.clone())),
        )),
    }
}

/// Goodman-Nguyen inclusion `a ⊆ b`: the truth value of `a` never exceeds
/// that of `b`.
pub fn gn_includes(ctx: &Context, a: &ConditionalEvent, b: &ConditionalEvent) -> Result<bool> {
    let ta = a.truth_profile(ctx)?;
    let tb = b.truth_profile(ctx)?;
    Ok(ta.iter().zip(&tb).all(|(x, y)| x <= y))
}

/// Semantic equality: equivalent antecedents and equal truth values on every
/// admissible world.
pub fn equivalent(ctx: &Context, a: &ConditionalEvent, b: &ConditionalEvent) -> Result<bool> {
    Ok(ctx.events_equivalent(&a.antecedent, &b.antecedent)?
        && a.truth_profile(ctx)? == b.truth_profile(ctx)?)
}

/// `A_1 ... A_k | (A_1 | ... | A_k)`; for two events this is the
/// biconditional event.
pub fn n_conditional(ctx: &Context, events: &[Event]) -> Result<ConditionalEvent> {
    if events.len() < 2 {
        return Err(Error::Invalid(
            "an n-conditional needs at least two events".into(),
        ));
    }
    for e in events {
        if ctx.is_impossible(e)? {
            return Err(Error::ImpossibleAntecedent(e.to_string()));
        }
    }
    ConditionalEvent::new_in(
        ctx,
        Event::all(events.iter().cloned()),
        Event::any(events.iter().cloned()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::events::parse_event;

    fn ev(s: &str) -> Event {
        parse_event(s).unwrap()
    }

    fn ce(s: &str) -> ConditionalEvent {
        parse_conditional(s).unwrap()
    }

    fn ctx(atoms: &[&str]) -> Context {
        Context::new(atoms, vec![]).unwrap()
    }

    #[test]
    fn three_valued_semantics() {
        let c = ctx(&["A", "B"]);
        let b_given_a = ce("B | A");
        let at = |a: bool, b: bool| World::from_code(((a as u64) << 1) | b as u64, 2);
        assert_eq!(b_given_a.truth_value(&c, at(true, true)).unwrap(), TruthValue3::True);
        assert_eq!(b_given_a.truth_value(&c, at(true, false)).unwrap(), TruthValue3::False);
        assert_eq!(b_given_a.truth_value(&c, at(false, true)).unwrap(), TruthValue3::Void);
        assert!(TruthValue3::False < TruthValue3::Void && TruthValue3::Void < TruthValue3::True);
    }

    #[test]
    fn conditioning_bar() {
        assert_eq!(ce("A & B | H"), ConditionalEvent::new(ev("A & B"), ev("H")));
        assert_eq!(ce("(A | B) | H"), ConditionalEvent::new(ev("A | B"), ev("H")));
        assert_eq!(ce("A | B | H"), ConditionalEvent::new(ev("A"), ev("B | H")));
        assert_eq!(ce("~L"), ConditionalEvent::new(ev("~L"), Event::True));
        assert!(parse_conditional("A |").is_err());
        assert!(parse_conditional("| A").is_err());
        for s in ["(A | B) | H", "A & B | H | K", "~L | T", "G & ~N | L & S"] {
            let c = ce(s);
            assert_eq!(ce(&c.to_string()), c);
        }
    }

    #[test]
    fn negation() {
        let c = ctx(&["A", "B"]);
        let x = ce("B | A");
        assert_eq!(x.negate(), ConditionalEvent::new(ev("~B"), ev("A")));
        assert!(equivalent(&c, &x.negate().negate(), &x).unwrap());
        assert_eq!(ce("T | A").negate(), ConditionalEvent::new(ev("~T"), ev("A")));
        assert!(equivalent(&c, &ce("T | A").negate(), &ce("F | A")).unwrap());
    }

    #[test]
    fn quasi_conjunction_identities() {
        let c = ctx(&["A", "B", "H"]);
        let qc = quasi_conjunction(&[ce("A | H"), ce("B | A & H")]).unwrap();
        assert!(equivalent(&c, &qc, &ce("A & B | H")).unwrap());
        let qc = quasi_conjunction(&[ce("A | H"), ce("B | H")]).unwrap();
        assert!(equivalent(&c, &qc, &ce("A & B | H")).unwrap());
        let c2 = ctx(&["A", "B"]);
        let qc = quasi_conjunction(&[ce("A | B"), ce("B | A")]).unwrap();
        assert!(equivalent(&c2, &qc, &ce("A & B | A | B")).unwrap());
        assert_eq!(quasi_conjunction(&[ce("A | H")]).unwrap(), ce("A | H"));
        assert_eq!(quasi_conjunction(&[]), Err(Error::EmptyFamily));
    }

    #[test]
    fn quasi_disjunction_identities() {
        let c = ctx(&["A", "B", "H"]);
        let qd = quasi_disjunction(&[ce("A | H"), ce("B | ~A & H")]).unwrap();
        assert!(equivalent(&c, &qd, &ce("(A | B) | H")).unwrap());
        let c2 = ctx(&["A", "H", "K"]);
        let fam = [ce("A | H"), ce("A | K")];
        let qd = quasi_disjunction(&fam).unwrap();
        let qc = quasi_conjunction(&fam).unwrap();
        assert!(equivalent(&c2, &qd, &ce("A | H | K")).unwrap());
        assert!(equivalent(&c2, &qc, &qd).unwrap());
        assert_eq!(quasi_disjunction(&[ce("A | H")]).unwrap(), ce("A | H"));
    }

    #[test]
    fn goodman_nguyen_inclusion() {
        let c = ctx(&["A", "B"]);
        assert!(gn_includes(&c, &ce("B | ~A"), &ce("(A | B) | T")).unwrap());
        let x = ce("B | A");
        assert!(gn_includes(&c, &x, &x).unwrap());
        let c4 = ctx(&["A", "H", "B", "K"]);
        assert!(!gn_includes(&c4, &ce("A | H"), &ce("B | K")).unwrap());
        let witness = ev("A & H & ~B & K");
        assert!(!c4.is_impossible(&witness).unwrap());
    }

    #[test]
    fn gn_inclusion_matches_impossibility_form() {
        let c4 = ctx(&["A", "H", "B", "K"]);
        let constrained = Context::new(
            &["A", "H", "B", "K"],
            vec![ev("A & H & ~B & K"), ev("~H & ~B & K"), ev("A & H & ~K")],
        )
        .unwrap();
        for c in [&c4, &constrained] {
            let a = ce("A | H");
            let b = ce("B | K");
            let by_events = c.is_impossible(&ev("A & H & ~B & K")).unwrap()
                && c.is_impossible(&ev("~H & ~B & K")).unwrap()
                && c.is_impossible(&ev("A & H & ~K")).unwrap();
            assert_eq!(gn_includes(c, &a, &b).unwrap(), by_events);
        }
        assert!(gn_includes(&constrained, &ce("A | H"), &ce("B | K")).unwrap());
    }

    #[test]
    fn n_conditionals() {
        let c = ctx(&["A", "B"]);
        let bic = n_conditional(&c, &[ev("A"), ev("B")]).unwrap();
        let qc = quasi_conjunction(&[ce("A | B"), ce("B | A")]).unwrap();
        assert!(equivalent(&c, &bic, &qc).unwrap());
        let aa = n_conditional(&c, &[ev("A"), ev("A")]).unwrap();
        assert!(equivalent(&c, &aa, &ce("T | A")).unwrap());
        let c3 = ctx(&["A1", "A2", "A3"]);
        let loop3 = quasi_conjunction(&[ce("A2 | A1"), ce("A3 | A2"), ce("A1 | A3")]).unwrap();
        let n3 = n_conditional(&c3, &[ev("A1"), ev("A2"), ev("A3")]).unwrap();
        assert!(equivalent(&c3, &loop3, &n3).unwrap());
        assert!(n_conditional(&c, &[ev("A")]).is_err());
        assert!(n_conditional(&c, &[ev("A & ~A"), ev("B & ~B")]).is_err());
    }

    #[test]
    fn equivalence_is_semantic() {
        let c = ctx(&["A", "H", "B"]);
        assert!(!equivalent(&c, &ce("A | H"), &ce("B | H")).unwrap());
        assert!(equivalent(&c, &ce("A | H"), &ce("A & H | H")).unwrap());
        assert!(!equivalent(&c, &ce("A | H"), &ce("A | T")).unwrap());
    }

    #[test]
    fn impossible_antecedent_rejected() {
        let c = ctx(&["A"]);
        assert!(matches!(
            ConditionalEvent::new_in(&c, ev("A"), ev("F")),
            Err(Error::ImpossibleAntecedent(_))
        ));
    }
}
