//! Fixtures shared by the engine benchmarks.

use cohere_core::coherence::Assessment;
use cohere_core::inference::{rule_instance, KnowledgeBase, RuleInstance, RuleKind};
use cohere_core::rational::ratio;
use cohere_core::{parse_conditional, ConditionalEvent, Context, UnitValue};

/// The five-conditional Linda knowledge base over `L S G N`.
pub fn linda() -> KnowledgeBase {
    let ctx = Context::new(&["L", "S", "G", "N"], vec![]).expect("valid atoms");
    let entries = [
        ("gl", "G | L"),
        ("sl", "S | L"),
        ("nls", "~N | L & S"),
        ("ls", "L | S"),
        ("gn", "~G | ~N"),
    ]
    .iter()
    .map(|(n, t)| (n.to_string(), conditional(t)))
    .collect();
    KnowledgeBase::new(ctx, entries).expect("valid knowledge base")
}

pub fn conditional(text: &str) -> ConditionalEvent {
    parse_conditional(text).expect("valid conditional")
}

/// A rule instance with premises assessed at `9/10, 8/10, ...`.
pub fn rule_assessment(kind: RuleKind, k: usize) -> (RuleInstance, Assessment) {
    let inst = rule_instance(kind, k).expect("valid arity");
    let probs = (0..k).map(|i| ratio(9 - i as i64, 10)).collect();
    let a = Assessment::from_rationals(inst.premises.clone(), probs).expect("valid assessment");
    (inst, a)
}

/// `k` values spread over the open unit interval.
pub fn unit_values(k: usize) -> Vec<UnitValue> {
    (1..=k).map(|i| UnitValue::ratio(i as i64, k as i64 + 1)).collect()
}
