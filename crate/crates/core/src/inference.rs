//! p-consistency, p-entailment, closed-form probability propagation for
//! quasi conjunction, quasi disjunction and related rules, and the premise
//! regions that guarantee a lower or upper bound on the conclusion.
//!
//! The closed forms assume logically independent premises. For a knowledge
//! base with constraints use [`extension_interval`] instead.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_traits::One;
use serde::Serialize;

use crate::coherence::{check_coherence, extension_interval, Assessment, ProbabilityInterval};
use crate::conditionals::{quasi_conjunction, quasi_disjunction, ConditionalEvent, TruthValue3};
use crate::error::{Error, Result};
use crate::events::{Context, Event};
use crate::rational::Rational;
use crate::tnorms::{
    hamacher0_conary, hamacher0_nary, s_lukasiewicz, t_lukasiewicz, OperatorFamily, UnitValue,
};

/// Largest premise set searched exhaustively by [`p_entails_qc`].
pub const MAX_QC_PREMISES: usize = 12;

/// Named conditionals over a shared context.
#[derive(Debug, Clone)]
pub struct KnowledgeBase {
    context: Context,
    names: Vec<String>,
    conditionals: Vec<ConditionalEvent>,
}

impl KnowledgeBase {
    pub fn new(context: Context, entries: Vec<(String, ConditionalEvent)>) -> Result<KnowledgeBase> {
        let mut seen = HashSet::new();
        let mut names = Vec::with_capacity(entries.len());
        let mut conditionals = Vec::with_capacity(entries.len());
        for (name, ce) in entries {
            if !seen.insert(name.clone()) {
                return Err(Error::Invalid(format!("duplicate conditional name `{name}`")));
            }
            ce.validate(&context)?;
            names.push(name);
            conditionals.push(ce);
        }
        Ok(KnowledgeBase {
            context,
            names,
            conditionals,
        })
    }

    /// Names conditionals `c1`, `c2`, ... in order.
    pub fn unnamed(context: Context, conditionals: Vec<ConditionalEvent>) -> Result<KnowledgeBase> {
        let entries = conditionals
            .into_iter()
            .enumerate()
            .map(|(i, ce)| (format!("c{}", i + 1), ce))
            .collect();
        KnowledgeBase::new(context, entries)
    }

    pub fn context(&self) -> &Context {
        &self.context
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn conditionals(&self) -> &[ConditionalEvent] {
        &self.conditionals
    }

    pub fn len(&self) -> usize {
        self.conditionals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditionals.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&ConditionalEvent> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| &self.conditionals[i])
    }

    fn all_ones(&self) -> Result<Assessment> {
        Assessment::all_ones(self.conditionals.clone())
    }
}

/// Whether `(1, ..., 1)` on the knowledge base is coherent.
pub fn p_consistent(kb: &KnowledgeBase) -> Result<bool> {
    if kb.is_empty() {
        return Ok(true);
    }
    Ok(check_coherence(kb.context(), &kb.all_ones()?)?.coherent)
}

/// Whether every coherent extension of `(1, ..., 1)` gives `target`
/// probability 1.
pub fn p_entails(kb: &KnowledgeBase, target: &ConditionalEvent) -> Result<bool> {
    target.validate(kb.context())?;
    if kb.is_empty() {
        return kb.context().implies(&target.antecedent, &target.consequent);
    }
    if !p_consistent(kb)? {
        return Err(Error::NotPConsistent);
    }
    let ext = extension_interval(kb.context(), &kb.all_ones()?, target)?;
    Ok(ext.interval.lo().is_one())
}

/// Why [`p_entails_qc`] accepted a target.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum QcReason {
    /// The target antecedent implies its consequent.
    Tautological,
    /// The quasi conjunction of these premises is included in the target.
    Subset(Vec<usize>),
}

/// Searches premise subsets `S` in order of size for one whose quasi
/// conjunction is Goodman-Nguyen included in `target`.
pub fn qc_entailment(kb: &KnowledgeBase, target: &ConditionalEvent) -> Result<Option<QcReason>> {
    let ctx = kb.context();
    target.validate(ctx)?;
    if ctx.is_impossible(&target.verifier())? {
        return Err(Error::Invalid(format!(
            "target `{target}` has an impossible verifying event"
        )));
    }
    if ctx.implies(&target.antecedent, &target.consequent)? {
        return Ok(Some(QcReason::Tautological));
    }
    let n = kb.len();
    if n > MAX_QC_PREMISES {
        return Err(Error::Invalid(format!(
            "{n} premises exceed the subset search limit of {MAX_QC_PREMISES}"
        )));
    }
    let premises: Vec<Vec<TruthValue3>> = kb
        .conditionals()
        .iter()
        .map(|ce| ce.truth_profile(ctx))
        .collect::<Result<_>>()?;
    let goal = target.truth_profile(ctx)?;
    let mut masks: Vec<u32> = (1..1u32 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let included = (0..goal.len()).all(|w| {
            quasi_conjunction_value(subset.iter().map(|&i| premises[i][w])) <= goal[w]
        });
        if included {
            return Ok(Some(QcReason::Subset(subset)));
        }
    }
    Ok(None)
}

/// p-entailment decided through quasi conjunctions of premise subsets.
pub fn p_entails_qc(kb: &KnowledgeBase, target: &ConditionalEvent) -> Result<bool> {
    Ok(qc_entailment(kb, target)?.is_some())
}

/// Truth value of a quasi conjunction from the values of its members:
/// false if any is false, else true if any is true, else void.
pub fn quasi_conjunction_value(values: impl IntoIterator<Item = TruthValue3>) -> TruthValue3 {
    let mut out = TruthValue3::Void;
    for v in values {
        match v {
            TruthValue3::False => return TruthValue3::False,
            TruthValue3::True => out = TruthValue3::True,
            TruthValue3::Void => {}
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RuleKind {
    QuasiAnd,
    QuasiOr,
    OrRule,
    GnChain,
    Compound,
    DualCompound,
    Biconditional,
}

impl RuleKind {
    pub const ALL: [RuleKind; 7] = [
        RuleKind::QuasiAnd,
        RuleKind::QuasiOr,
        RuleKind::OrRule,
        RuleKind::GnChain,
        RuleKind::Compound,
        RuleKind::DualCompound,
        RuleKind::Biconditional,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            RuleKind::QuasiAnd => "qc",
            RuleKind::QuasiOr => "qd",
            RuleKind::OrRule => "or",
            RuleKind::GnChain => "gn",
            RuleKind::Compound => "compound",
            RuleKind::DualCompound => "dual",
            RuleKind::Biconditional => "bic",
        }
    }

    /// Allowed premise counts (`min`, `max`).
    pub fn arity(self) -> (usize, Option<usize>) {
        match self {
            RuleKind::DualCompound | RuleKind::Biconditional => (2, Some(2)),
            _ => (1, None),
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

impl FromStr for RuleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        RuleKind::ALL
            .into_iter()
            .find(|k| k.keyword() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown rule `{s}`")))
    }
}

/// A rule applied to premise probabilities, with the resulting interval.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleBounds {
    pub kind: RuleKind,
    pub premises: Vec<UnitValue>,
    pub interval: ProbabilityInterval,
}

fn nonempty(p: &[UnitValue]) -> Result<()> {
    if p.is_empty() {
        Err(Error::EmptyArguments)
    } else {
        Ok(())
    }
}

fn interval(lo: UnitValue, hi: UnitValue) -> Result<ProbabilityInterval> {
    ProbabilityInterval::from_units(lo, hi)
}

/// Quasi conjunction: `[T_L(p), S_0^H(p)]`.
pub fn qc_bounds(p: &[UnitValue]) -> Result<ProbabilityInterval> {
    nonempty(p)?;
    interval(t_lukasiewicz(p)?, hamacher0_conary(p)?)
}

/// Quasi disjunction: `[T_0^H(p), S_L(p)]`.
pub fn qd_bounds(p: &[UnitValue]) -> Result<ProbabilityInterval> {
    nonempty(p)?;
    interval(hamacher0_nary(p)?, s_lukasiewicz(p)?)
}

/// Or rule `A|H_1, ..., A|H_k => A|(H_1 | ... | H_k)`:
/// `[T_0^H(p), S_0^H(p)]`.
pub fn or_rule_bounds(p: &[UnitValue]) -> Result<ProbabilityInterval> {
    nonempty(p)?;
    interval(hamacher0_nary(p)?, hamacher0_conary(p)?)
}

/// Quasi conjunction of a Goodman-Nguyen chain: `[p_1, p_k]`. The
/// probabilities must be nondecreasing.
pub fn gn_chain_bounds(p: &[UnitValue]) -> Result<ProbabilityInterval> {
    nonempty(p)?;
    if p.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::NotMonotoneChain);
    }
    interval(p[0].clone(), p[p.len() - 1].clone())
}

/// Compound probability `A_1|H, A_2|A_1 H, ... => A_1 ... A_k | H`:
/// the product.
pub fn compound_bounds(p: &[UnitValue]) -> Result<ProbabilityInterval> {
    nonempty(p)?;
    let product = crate::tnorms::tnorm(&OperatorFamily::Product, p)?;
    interval(product.clone(), product)
}

/// `A|H, B|~A H => (A | B)|H`: the probabilistic sum `x + y - xy`.
pub fn dual_compound_value(x: &UnitValue, y: &UnitValue) -> UnitValue {
    crate::tnorms::tconorm(&OperatorFamily::Product, &[x.clone(), y.clone()])
        .expect("two arguments")
}

/// `A|B, B|A => AB|(A | B)`: the Hamacher product `T_0^H(x, y)`.
pub fn biconditional_value(x: &UnitValue, y: &UnitValue) -> UnitValue {
    hamacher0_nary(&[x.clone(), y.clone()]).expect("two arguments")
}

/// Applies `kind` to premise probabilities `p`.
pub fn rule_bounds(kind: RuleKind, p: &[UnitValue]) -> Result<RuleBounds> {
    let (min, max) = kind.arity();
    if p.len() < min || max.is_some_and(|m| p.len() > m) {
        return Err(Error::Invalid(format!(
            "rule `{kind}` takes {} premise probabilities, got {}",
            match max {
                Some(m) if m == min => m.to_string(),
                _ => format!("at least {min}"),
            },
            p.len()
        )));
    }
    let interval = match kind {
        RuleKind::QuasiAnd => qc_bounds(p)?,
        RuleKind::QuasiOr => qd_bounds(p)?,
        RuleKind::OrRule => or_rule_bounds(p)?,
        RuleKind::GnChain => gn_chain_bounds(p)?,
        RuleKind::Compound => compound_bounds(p)?,
        RuleKind::DualCompound => {
            let z = dual_compound_value(&p[0], &p[1]);
            interval(z.clone(), z)?
        }
        RuleKind::Biconditional => {
            let z = biconditional_value(&p[0], &p[1]);
            interval(z.clone(), z)?
        }
    };
    Ok(RuleBounds {
        kind,
        premises: p.to_vec(),
        interval,
    })
}

/// A concrete family realizing a rule, for checking closed forms against
/// [`extension_interval`].
#[derive(Debug, Clone)]
pub struct RuleInstance {
    pub context: Context,
    pub premises: Vec<ConditionalEvent>,
    pub conclusion: ConditionalEvent,
}

fn atom(name: &str) -> Event {
    Event::atom(name)
}

fn names(prefix: &str, k: usize) -> Vec<String> {
    (1..=k).map(|i| format!("{prefix}{i}")).collect()
}

/// Builds the standard family for `kind` with `k` premises over logically
/// independent atoms. A chain `E_1|H_1 ⊆ ... ⊆ E_k|H_k` is realized by
/// declaring the events that would break each inclusion impossible.
pub fn rule_instance(kind: RuleKind, k: usize) -> Result<RuleInstance> {
    let (min, max) = kind.arity();
    if k < min || max.is_some_and(|m| k > m) {
        return Err(Error::Invalid(format!("rule `{kind}` cannot take {k} premises")));
    }
    let pairwise = |k: usize| -> (Vec<String>, Vec<ConditionalEvent>) {
        let es = names("E", k);
        let hs = names("H", k);
        let family = es
            .iter()
            .zip(&hs)
            .map(|(e, h)| ConditionalEvent::new(atom(e), atom(h)))
            .collect();
        (es.into_iter().chain(hs).collect(), family)
    };
    let (atoms, constraints, premises, conclusion) = match kind {
        RuleKind::QuasiAnd | RuleKind::QuasiOr => {
            let (atoms, family) = pairwise(k);
            let conclusion = if kind == RuleKind::QuasiAnd {
                quasi_conjunction(&family)?
            } else {
                quasi_disjunction(&family)?
            };
            (atoms, vec![], family, conclusion)
        }
        RuleKind::GnChain => {
            let (atoms, family) = pairwise(k);
            let mut constraints = Vec::new();
            for w in family.windows(2) {
                let (a, b) = (&w[0], &w[1]);
                constraints.push(a.verifier().and(b.falsifier()));
                constraints.push(b.falsifier().and(a.antecedent.clone().not()));
                constraints.push(a.verifier().and(b.antecedent.clone().not()));
            }
            let conclusion = quasi_conjunction(&family)?;
            (atoms, constraints, family, conclusion)
        }
        RuleKind::OrRule => {
            let hs = names("H", k);
            let family = hs
                .iter()
                .map(|h| ConditionalEvent::new(atom("A"), atom(h)))
                .collect();
            let conclusion =
                ConditionalEvent::new(atom("A"), Event::any(hs.iter().map(|h| atom(h))));
            let mut atoms = vec!["A".to_string()];
            atoms.extend(hs);
            (atoms, vec![], family, conclusion)
        }
        RuleKind::Compound => {
            let xs = names("A", k);
            let family = (0..k)
                .map(|i| {
                    ConditionalEvent::new(
                        atom(&xs[i]),
                        Event::all(xs[..i].iter().map(|x| atom(x)).chain([atom("H")])),
                    )
                })
                .collect();
            let conclusion =
                ConditionalEvent::new(Event::all(xs.iter().map(|x| atom(x))), atom("H"));
            let mut atoms = vec!["H".to_string()];
            atoms.extend(xs);
            (atoms, vec![], family, conclusion)
        }
        RuleKind::DualCompound => {
            let family = vec![
                ConditionalEvent::new(atom("A"), atom("H")),
                ConditionalEvent::new(atom("B"), atom("A").not().and(atom("H"))),
            ];
            let conclusion = ConditionalEvent::new(atom("A").or(atom("B")), atom("H"));
            (vec!["A".into(), "B".into(), "H".into()], vec![], family, conclusion)
        }
        RuleKind::Biconditional => {
            let family = vec![
                ConditionalEvent::new(atom("A"), atom("B")),
                ConditionalEvent::new(atom("B"), atom("A")),
            ];
            let conclusion = ConditionalEvent::new(atom("A").and(atom("B")), atom("A").or(atom("B")));
            (vec!["A".into(), "B".into()], vec![], family, conclusion)
        }
    };
    Ok(RuleInstance {
        context: Context::new(&atoms, constraints)?,
        premises,
        conclusion,
    })
}

/// Which bound a region constrains, and for which operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegionKind {
    /// Conclusion lower bound `>= γ` for the quasi conjunction.
    LowerQc,
    /// Conclusion upper bound `<= γ` for the quasi conjunction.
    UpperQc,
    LowerQd,
    UpperQd,
}

impl FromStr for RegionKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "Lqc" => RegionKind::LowerQc,
            "Uqc" => RegionKind::UpperQc,
            "Lqd" => RegionKind::LowerQd,
            "Uqd" => RegionKind::UpperQd,
            other => return Err(Error::Invalid(format!("unknown region `{other}`"))),
        })
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::LowerQc => "Lqc",
            RegionKind::UpperQc => "Uqc",
            RegionKind::LowerQd => "Lqd",
            RegionKind::UpperQd => "Uqd",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GammaRegion {
    pub kind: RegionKind,
    pub gamma: UnitValue,
}

impl GammaRegion {
    pub fn new(kind: RegionKind, gamma: UnitValue) -> GammaRegion {
        GammaRegion { kind, gamma }
    }

    pub fn contains(&self, p: &[UnitValue]) -> Result<bool> {
        match self.kind {
            RegionKind::LowerQc => in_l_gamma_qc(p, &self.gamma),
            RegionKind::UpperQc => in_u_gamma_qc(p, &self.gamma),
            RegionKind::LowerQd => in_l_gamma_qd(p, &self.gamma),
            RegionKind::UpperQd => in_u_gamma_qd(p, &self.gamma),
        }
    }
}

fn sum(p: &[UnitValue]) -> Rational {
    p.iter().map(|v| v.value().clone()).sum()
}

/// `p_1 + ... + p_n >= γ + n - 1`, and everything when `γ = 0`.
pub fn in_l_gamma_qc(p: &[UnitValue], gamma: &UnitValue) -> Result<bool> {
    nonempty(p)?;
    if gamma.is_zero() {
        return Ok(true);
    }
    let n = Rational::from_integer((p.len() as i64 - 1).into());
    Ok(sum(p) >= gamma.value() + n)
}

/// `p_1 <= γ` and `p_{k+1} <= r_k = (γ - u_k) / (1 - (2 - γ) u_k)` with
/// `u_k = S_0^H(p_1, ..., p_k)`; everything when `γ = 1`.
pub fn in_u_gamma_qc(p: &[UnitValue], gamma: &UnitValue) -> Result<bool> {
    nonempty(p)?;
    if gamma.is_one() {
        return Ok(true);
    }
    let g = gamma.value();
    let one = Rational::one();
    if p[0].value() > g {
        return Ok(false);
    }
    for k in 1..p.len() {
        let u = hamacher0_conary(&p[..k])?.into_inner();
        if &u > g {
            return Ok(false);
        }
        let r = (g - &u) / (&one - (Rational::from_integer(2.into()) - g) * &u);
        if p[k].value() > &r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p_1 >= γ` and `p_{k+1} >= γ l_k / (l_k (1 + γ) - γ)` with
/// `l_k = T_0^H(p_1, ..., p_k)`; everything when `γ = 0`.
pub fn in_l_gamma_qd(p: &[UnitValue], gamma: &UnitValue) -> Result<bool> {
    nonempty(p)?;
    if gamma.is_zero() {
        return Ok(true);
    }
    let g = gamma.value();
    let one = Rational::one();
    if p[0].value() < g {
        return Ok(false);
    }
    for k in 1..p.len() {
        let l = hamacher0_nary(&p[..k])?.into_inner();
        if &l < g {
            return Ok(false);
        }
        let r = g * &l / (&l * (&one + g) - g);
        if p[k].value() < &r {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `p_1 + ... + p_n <= γ`, and everything when `γ = 1`.
pub fn in_u_gamma_qd(p: &[UnitValue], gamma: &UnitValue) -> Result<bool> {
    nonempty(p)?;
    if gamma.is_one() {
        return Ok(true);
    }
    Ok(&sum(p) <= gamma.value())
}

/// Context over independent atoms `A1..An`.
pub fn loop_context(n: usize) -> Result<Context> {
    Context::new(&names("A", n), vec![])
}

/// `{A_{σ(1)}|A_1, ..., A_{σ(n)}|A_n}` for a one-based derangement `σ`.
pub fn deranged_family(sigma: &[usize]) -> Result<Vec<ConditionalEvent>> {
    let n = sigma.len();
    let mut seen = vec![false; n + 1];
    for (j, &s) in sigma.iter().enumerate() {
        if s == 0 || s > n || seen[s] {
            return Err(Error::InvalidDerangement(format!(
                "{sigma:?} is not a permutation of 1..{n}"
            )));
        }
        if s == j + 1 {
            return Err(Error::InvalidDerangement(format!("{s} is a fixed point")));
        }
        seen[s] = true;
    }
    Ok(sigma
        .iter()
        .enumerate()
        .map(|(j, &s)| ConditionalEvent::new(atom(&format!("A{s}")), atom(&format!("A{}", j + 1))))
        .collect())
}

/// The loop `{A_2|A_1, ..., A_n|A_{n-1}, A_1|A_n}`.
pub fn loop_family(n: usize) -> Result<Vec<ConditionalEvent>> {
    let sigma: Vec<usize> = (1..=n).map(|j| j % n + 1).collect();
    deranged_family(&sigma)
}

/// Whether the loop family and the deranged family p-entail each other
/// member by member.
pub fn loop_entails(n: usize, sigma: &[usize]) -> Result<bool> {
    if !(2..=5).contains(&n) {
        return Err(Error::Invalid(format!("loop size {n} outside 2..=5")));
    }
    if sigma.len() != n {
        return Err(Error::InvalidDerangement(format!(
            "expected {n} entries, got {}",
            sigma.len()
        )));
    }
    let ctx = loop_context(n)?;
    let looped = KnowledgeBase::unnamed(ctx.clone(), loop_family(n)?)?;
    let deranged = KnowledgeBase::unnamed(ctx, deranged_family(sigma)?)?;
    for (from, to) in [(&looped, &deranged), (&deranged, &looped)] {
        for target in to.conditionals() {
            if !p_entails(from, target)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Cyclic derangement `σ(j) = j + shift (mod n)`, one-based.
pub fn cyclic_derangement(n: usize, shift: usize) -> Vec<usize> {
    (0..n).map(|j| (j + shift) % n + 1).collect()
}

/// Whether a one-based permutation is a single cycle through all of
/// `1..n`. Only such derangements turn the loop into an equivalent family.
pub fn is_full_cycle(sigma: &[usize]) -> bool {
    let n = sigma.len();
    let mut j = 0;
    for step in 1..=n {
        match sigma.get(j) {
            Some(&s) if (1..=n).contains(&s) => j = s - 1,
            _ => return false,
        }
        if j == 0 {
            return step == n;
        }
    }
    false
}

/// All derangements of `1..n` in lexicographic order.
pub fn derangements(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let j = cur.len();
        if j == n {
            out.push(cur.clone());
            return;
        }
        for s in 1..=n {
            if !used[s] && s != j + 1 {
                used[s] = true;
                cur.push(s);
                go(n, cur, used, out);
                cur.pop();
                used[s] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), &mut vec![false; n + 1], &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditionals::parse_conditional;

    fn u(n: i64, d: i64) -> UnitValue {
        UnitValue::ratio(n, d)
    }

    fn iv(lo: (i64, i64), hi: (i64, i64)) -> ProbabilityInterval {
        ProbabilityInterval::from_units(u(lo.0, lo.1), u(hi.0, hi.1)).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(qc_bounds(&[u(1, 2), u(1, 2)]).unwrap(), iv((0, 1), (2, 3)));
        assert_eq!(qc_bounds(&vec![u(1, 1); 3]).unwrap(), iv((1, 1), (1, 1)));
        assert_eq!(qc_bounds(&vec![u(1, 2); 3]).unwrap(), iv((0, 1), (3, 4)));
        assert_eq!(qd_bounds(&[u(1, 2), u(1, 2)]).unwrap(), iv((1, 3), (1, 1)));
        assert_eq!(qd_bounds(&[u(0, 1), u(0, 1)]).unwrap(), iv((0, 1), (0, 1)));
        assert_eq!(qd_bounds(&vec![u(1, 2); 3]).unwrap(), iv((1, 4), (1, 1)));
        assert_eq!(or_rule_bounds(&[u(9, 10), u(9, 10)]).unwrap(), iv((9, 11), (18, 19)));
        assert_eq!(or_rule_bounds(&[u(1, 2), u(1, 2)]).unwrap(), iv((1, 3), (2, 3)));
        assert_eq!(gn_chain_bounds(&[u(1, 4), u(3, 4)]).unwrap(), iv((1, 4), (3, 4)));
        assert_eq!(gn_chain_bounds(&[u(3, 4), u(1, 4)]), Err(Error::NotMonotoneChain));
        assert_eq!(compound_bounds(&[u(1, 2), u(1, 3)]).unwrap(), iv((1, 6), (1, 6)));
        assert_eq!(compound_bounds(&vec![u(1, 2); 3]).unwrap(), iv((1, 8), (1, 8)));
        assert_eq!(dual_compound_value(&u(1, 2), &u(1, 2)), u(3, 4));
        assert_eq!(dual_compound_value(&u(0, 1), &u(2, 7)), u(2, 7));
        assert_eq!(dual_compound_value(&u(1, 1), &u(2, 7)), u(1, 1));
        assert_eq!(biconditional_value(&u(1, 2), &u(1, 2)), u(1, 3));
        assert_eq!(biconditional_value(&u(0, 1), &u(0, 1)), u(0, 1));
    }

    #[test]
    fn region_examples() {
        assert!(in_l_gamma_qc(&[u(8, 10), u(9, 10)], &u(6, 10)).unwrap());
        for g in [u(1, 4), u(1, 2), u(9, 10)] {
            assert!(!in_u_gamma_qc(&[g.clone(), g.clone()], &g).unwrap());
            assert!(!in_l_gamma_qd(&[g.clone(), g.clone()], &g).unwrap());
        }
        assert!(in_l_gamma_qc(&vec![u(1, 1); 4], &u(1, 1)).unwrap());
        assert!(in_u_gamma_qd(&[u(1, 10), u(2, 10)], &u(4, 10)).unwrap());
        assert!(in_u_gamma_qd(&vec![u(0, 1); 3], &u(0, 1)).unwrap());
    }

    #[test]
    fn derangement_validation() {
        assert!(deranged_family(&[2, 3, 1]).is_ok());
        assert!(matches!(deranged_family(&[1, 3, 2]), Err(Error::InvalidDerangement(_))));
        assert!(matches!(deranged_family(&[2, 2, 1]), Err(Error::InvalidDerangement(_))));
        assert_eq!(derangements(3), vec![vec![2, 3, 1], vec![3, 1, 2]]);
        assert_eq!(derangements(4).len(), 9);
        assert_eq!(derangements(4).iter().filter(|s| is_full_cycle(s)).count(), 6);
        assert!(is_full_cycle(&[2, 3, 1]));
        assert!(!is_full_cycle(&[2, 1, 4, 3]));
        assert!(!is_full_cycle(&[1, 2]));
    }

    #[test]
    fn qc_value_matches_quasi_conjunction() {
        let ctx = Context::new(&["A", "B", "H", "K"], vec![]).unwrap();
        let family: Vec<ConditionalEvent> = ["A | H", "B | K", "A & B | H | K"]
            .iter()
            .map(|s| parse_conditional(s).unwrap())
            .collect();
        let c = quasi_conjunction(&family).unwrap().truth_profile(&ctx).unwrap();
        let cols: Vec<Vec<TruthValue3>> =
            family.iter().map(|ce| ce.truth_profile(&ctx).unwrap()).collect();
        for w in 0..c.len() {
            assert_eq!(c[w], quasi_conjunction_value(cols.iter().map(|col| col[w])));
        }
    }

    #[test]
    fn inconsistent_base() {
        let ctx = Context::new(&["A"], vec![]).unwrap();
        let kb = KnowledgeBase::unnamed(
            ctx,
            vec![parse_conditional("A").unwrap(), parse_conditional("~A").unwrap()],
        )
        .unwrap();
        assert!(!p_consistent(&kb).unwrap());
        assert_eq!(
            p_entails(&kb, &parse_conditional("A").unwrap()),
            Err(Error::NotPConsistent)
        );
    }
}
