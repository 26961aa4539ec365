#![allow(dead_code)]

use cohere_core::coherence::{extension_interval, Assessment, ProbabilityInterval};
use cohere_core::conditionals::parse_conditional;
use cohere_core::inference::{rule_instance, KnowledgeBase, RuleKind};
use cohere_core::oracle::{extension_interval_bruteforce, DEFAULT_VERTEX_LIMIT};
use cohere_core::rational::{int, ratio, Rational};
use cohere_core::{ConditionalEvent, Context, UnitValue};
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform rational `k/d` with `d` in `1..=max_den`.
pub fn random_unit(rng: &mut ChaCha8Rng, max_den: i64) -> Rational {
    let d = rng.gen_range(1..=max_den);
    ratio(rng.gen_range(0..=d), d)
}

pub fn unit(r: &Rational) -> UnitValue {
    UnitValue::new(r.clone()).unwrap()
}

pub fn units(rs: &[Rational]) -> Vec<UnitValue> {
    rs.iter().map(unit).collect()
}

pub fn ce(text: &str) -> ConditionalEvent {
    parse_conditional(text).unwrap()
}

pub fn interval(lo: Rational, hi: Rational) -> ProbabilityInterval {
    ProbabilityInterval::new(lo, hi).unwrap()
}

pub fn r(n: i64, d: i64) -> Rational {
    ratio(n, d)
}

// Reference formulas written out term by term, independent of the tnorms
// module.

pub fn lukasiewicz_and(p: &[Rational]) -> Rational {
    let s: Rational = p.iter().cloned().sum::<Rational>() - int(p.len() as i64 - 1);
    s.max(Rational::zero())
}

pub fn lukasiewicz_or(p: &[Rational]) -> Rational {
    p.iter().cloned().sum::<Rational>().min(Rational::one())
}

/// `1 / (1 + Σ (1 - p)/p)`, zero if some `p` is zero.
pub fn hamacher_and(p: &[Rational]) -> Rational {
    if p.iter().any(Zero::is_zero) {
        return Rational::zero();
    }
    let s: Rational = p.iter().map(|x| (Rational::one() - x) / x).sum();
    Rational::one() / (Rational::one() + s)
}

/// `s / (1 + s)` with `s = Σ p/(1 - p)`, one if some `p` is one.
pub fn hamacher_or(p: &[Rational]) -> Rational {
    if p.iter().any(One::is_one) {
        return Rational::one();
    }
    let s: Rational = p.iter().map(|x| x / (Rational::one() - x)).sum();
    &s / (Rational::one() + &s)
}

pub fn product(p: &[Rational]) -> Rational {
    p.iter().fold(Rational::one(), |acc, x| acc * x)
}

/// Extension interval of a rule's conclusion through the simplex path.
pub fn lp_rule_interval(kind: RuleKind, p: &[Rational]) -> ProbabilityInterval {
    let inst = rule_instance(kind, p.len()).unwrap();
    let a = Assessment::from_rationals(inst.premises.clone(), p.to_vec()).unwrap();
    let ext = extension_interval(&inst.context, &a, &inst.conclusion).unwrap();
    assert!(ext.warnings.is_empty(), "{:?}", ext.warnings);
    ext.interval
}

/// Extension interval of a rule's conclusion by vertex enumeration.
pub fn oracle_rule_interval(kind: RuleKind, p: &[Rational]) -> ProbabilityInterval {
    let inst = rule_instance(kind, p.len()).unwrap();
    let a = Assessment::from_rationals(inst.premises.clone(), p.to_vec()).unwrap();
    extension_interval_bruteforce(&inst.context, &a, &inst.conclusion, DEFAULT_VERTEX_LIMIT)
        .unwrap()
}

pub fn linda() -> KnowledgeBase {
    let ctx = Context::new(&["L", "S", "G", "N"], vec![]).unwrap();
    let entries = [
        ("gl", "G | L"),
        ("sl", "S | L"),
        ("nls", "~N | L & S"),
        ("ls", "L | S"),
        ("gn", "~G | ~N"),
    ]
    .iter()
    .map(|(n, t)| (n.to_string(), ce(t)))
    .collect();
    KnowledgeBase::new(ctx, entries).unwrap()
}

pub fn linda_conclusions() -> Vec<ConditionalEvent> {
    ["~N | L", "~L | T", "G & ~N | L & S", "~N | S", "~N | L | S"]
        .iter()
        .map(|t| ce(t))
        .collect()
}
