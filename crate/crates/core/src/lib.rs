//! Exact coherence-based reasoning with conditional events.
//!
//! All arithmetic uses arbitrary-precision rationals.

pub mod coherence;
pub mod conditionals;
pub mod error;
pub mod events;
pub mod inference;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod tnorms;

pub use coherence::{
    build_sigma, check_coherence, extension_interval, Assessment, Certificate, CoherenceVerdict,
    Extension, ProbabilityInterval, SigmaSystem, Witness,
};
pub use conditionals::{
    equivalent, gn_includes, n_conditional, parse_conditional, quasi_conjunction,
    quasi_disjunction, ConditionalEvent, TruthValue3,
};
pub use error::{Error, Result};
pub use events::{constituents, enumerate_worlds, parse_event, Context, Event, World};
pub use inference::{KnowledgeBase, RuleBounds, RuleKind};
pub use rational::Rational;
pub use tnorms::{Lambda, OperatorFamily, UnitValue};
