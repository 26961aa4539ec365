//! Coherence of conditional probability assessments and coherent extension
//! intervals.
//!
//! An assessment `p` on a family `F` is coherent when `p` lies in the convex
//! hull of the constituent points `Q_h` and, recursively, the sub-assessment
//! on the indices whose antecedents get zero upper probability is coherent.
//! Incoherence is certified by a stake vector with strictly positive gain on
//! every constituent.

use std::collections::HashSet;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::conditionals::{ConditionalEvent, TruthValue3};
use crate::error::{Error, Result};
use crate::events::{constituents, Context};
use crate::lp::{LinearProgram, LpOutcome};
use crate::rational::{self, Rational};
use crate::tnorms::UnitValue;

/// A family of conditional events with one probability each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assessment {
    pub family: Vec<ConditionalEvent>,
    pub probs: Vec<UnitValue>,
}

impl Assessment {
    pub fn new(family: Vec<ConditionalEvent>, probs: Vec<UnitValue>) -> Result<Assessment> {
        if family.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if family.len() != probs.len() {
            return Err(Error::LengthMismatch {
                expected: family.len(),
                got: probs.len(),
            });
        }
        Ok(Assessment { family, probs })
    }

    pub fn from_rationals(family: Vec<ConditionalEvent>, probs: Vec<Rational>) -> Result<Assessment> {
        let probs = probs
            .into_iter()
            .map(UnitValue::new)
            .collect::<Result<Vec<_>>>()?;
        Assessment::new(family, probs)
    }

    /// `(1, ..., 1)` on `family`.
    pub fn all_ones(family: Vec<ConditionalEvent>) -> Result<Assessment> {
        let probs = vec![UnitValue::one(); family.len()];
        Assessment::new(family, probs)
    }

    pub fn len(&self) -> usize {
        self.family.len()
    }

    pub fn is_empty(&self) -> bool {
        self.family.is_empty()
    }

    pub fn rationals(&self) -> Vec<Rational> {
        self.probs.iter().map(|p| p.value().clone()).collect()
    }

    /// This assessment extended by `target` with probability `value`.
    pub fn extended(&self, target: ConditionalEvent, value: UnitValue) -> Assessment {
        let mut out = self.clone();
        out.family.push(target);
        out.probs.push(value);
        out
    }

    pub fn validate(&self, ctx: &Context) -> Result<()> {
        for ce in &self.family {
            ce.validate(ctx)?;
        }
        Ok(())
    }
}

/// Projects constituent profiles onto `columns`, merging equal projections
/// (first occurrence keeps its place) and dropping all-void rows.
pub(crate) fn project(profiles: &[Vec<TruthValue3>], columns: &[usize]) -> Vec<Vec<TruthValue3>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for profile in profiles {
        let row: Vec<TruthValue3> = columns.iter().map(|&j| profile[j]).collect();
        if row.iter().all(|t| *t == TruthValue3::Void) {
            continue;
        }
        if seen.insert(row.clone()) {
            out.push(row);
        }
    }
    out
}

fn profiles_of(ctx: &Context, family: &[ConditionalEvent]) -> Result<Vec<Vec<TruthValue3>>> {
    Ok(constituents(ctx, family)?
        .inside
        .into_iter()
        .map(|c| c.profile)
        .collect())
}

/// The system `Σ`: find `λ >= 0` with `Σ λ_h = 1` and `Σ_h q_hj λ_h = p_j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaSystem {
    /// Positions of the rows' columns in the original family.
    pub indices: Vec<usize>,
    /// Truth profile of each constituent inside the union of antecedents.
    pub profiles: Vec<Vec<TruthValue3>>,
    #[serde(with = "rational::wire_vec")]
    pub probs: Vec<Rational>,
    /// The points `Q_h`.
    #[serde(with = "rational::wire_matrix")]
    pub rows: Vec<Vec<Rational>>,
}

impl SigmaSystem {
    /// Builds the system from already projected profiles.
    pub fn from_profiles(
        indices: Vec<usize>,
        profiles: Vec<Vec<TruthValue3>>,
        probs: Vec<Rational>,
    ) -> SigmaSystem {
        let rows = profiles
            .iter()
            .map(|profile| {
                profile
                    .iter()
                    .zip(&probs)
                    .map(|(t, p)| match t {
                        TruthValue3::True => Rational::one(),
                        TruthValue3::False => Rational::zero(),
                        TruthValue3::Void => p.clone(),
                    })
                    .collect()
            })
            .collect();
        SigmaSystem {
            indices,
            profiles,
            probs,
            rows,
        }
    }

    /// Number of conditional events.
    pub fn dim(&self) -> usize {
        self.indices.len()
    }

    /// Number of constituents (unknowns).
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// The system of the sub-family at `positions` (positions into
    /// `self.indices`).
    pub fn subsystem(&self, positions: &[usize]) -> SigmaSystem {
        SigmaSystem::from_profiles(
            positions.iter().map(|&k| self.indices[k]).collect(),
            project(&self.profiles, positions),
            positions.iter().map(|&k| self.probs[k].clone()).collect(),
        )
    }

    /// Gains `g_h = Σ_j s_j (q_hj - p_j)` of the stakes `s` on each
    /// constituent.
    pub fn gains(&self, stakes: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&self.probs)
                    .zip(stakes)
                    .map(|((q, p), s)| s * (q - p))
                    .sum()
            })
            .collect()
    }

    pub fn is_solution(&self, lambda: &[Rational]) -> bool {
        if lambda.len() != self.len() || lambda.iter().any(Signed::is_negative) {
            return false;
        }
        if lambda.iter().sum::<Rational>() != Rational::one() {
            return false;
        }
        (0..self.dim()).all(|j| {
            self.rows
                .iter()
                .zip(lambda)
                .map(|(row, l)| &row[j] * l)
                .sum::<Rational>()
                == self.probs[j]
        })
    }

    /// Constituents on which conditional `j` is not void.
    pub fn antecedent_support(&self, j: usize) -> Vec<usize> {
        (0..self.len())
            .filter(|&h| self.profiles[h][j] != TruthValue3::Void)
            .collect()
    }

    fn program(&self, objective: Vec<Rational>) -> LinearProgram {
        let m = self.len();
        let mut a = Vec::with_capacity(self.dim() + 1);
        let mut b = Vec::with_capacity(self.dim() + 1);
        for j in 0..self.dim() {
            a.push(self.rows.iter().map(|row| row[j].clone()).collect());
            b.push(self.probs[j].clone());
        }
        a.push(vec![Rational::one(); m]);
        b.push(Rational::one());
        LinearProgram::new(a, b, objective)
    }
}

/// Builds `Σ` for an assessment.
pub fn build_sigma(ctx: &Context, a: &Assessment) -> Result<SigmaSystem> {
    a.validate(ctx)?;
    let profiles = profiles_of(ctx, &a.family)?;
    Ok(SigmaSystem::from_profiles(
        (0..a.len()).collect(),
        profiles,
        a.rationals(),
    ))
}

/// Outcome of solving `Σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    /// A solution `λ`.
    Witness(Vec<Rational>),
    /// Stakes whose gain is strictly positive on every constituent.
    Certificate(Vec<Rational>),
}

/// Solves `Σ`, or finds stakes with strictly positive gains when it has no
/// solution. Among such stakes the one with least `L1` norm subject to
/// every gain `>= 1` is returned.
pub fn sigma_feasible(s: &SigmaSystem) -> Feasibility {
    let zero = vec![Rational::zero(); s.len()];
    if let Some(lambda) = s.program(zero).feasible_point() {
        return Feasibility::Witness(lambda);
    }
    Feasibility::Certificate(certificate_stakes(s))
}

fn certificate_stakes(s: &SigmaSystem) -> Vec<Rational> {
    // Variables: s+ (n), s- (n), surplus t (m).
    let n = s.dim();
    let m = s.len();
    let width = 2 * n + m;
    let mut a = Vec::with_capacity(m);
    for (h, row) in s.rows.iter().enumerate() {
        let mut line = vec![Rational::zero(); width];
        for j in 0..n {
            let d = &row[j] - &s.probs[j];
            line[n + j] = -d.clone();
            line[j] = d;
        }
        line[2 * n + h] = -Rational::one();
        a.push(line);
    }
    let mut c = vec![Rational::one(); 2 * n];
    c.resize(width, Rational::zero());
    match LinearProgram::new(a, vec![Rational::one(); m], c).minimize() {
        LpOutcome::Optimal { x, .. } => (0..n).map(|j| &x[j] - &x[n + j]).collect(),
        other => unreachable!("no separating stakes although Σ is infeasible: {other:?}"),
    }
}

/// The functionals `Φ_j(λ) = Σ_{C_h ⊆ H_j} λ_h`, their maxima `M_j` over
/// the solutions of `Σ`, and `I_0 = { j : M_j = 0 }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolutionFunctionals {
    /// Constituents summed by each `Φ_j`.
    pub phi: Vec<Vec<usize>>,
    #[serde(with = "rational::wire_vec")]
    pub max: Vec<Rational>,
    /// Positions (into the system's columns) with `M_j = 0`.
    pub i0: Vec<usize>,
}

/// Computes `M_j` by one maximization per conditional; `None` when `Σ` has
/// no solution.
pub fn solution_functionals(s: &SigmaSystem) -> Option<SolutionFunctionals> {
    let mut phi = Vec::with_capacity(s.dim());
    let mut max = Vec::with_capacity(s.dim());
    for j in 0..s.dim() {
        let support = s.antecedent_support(j);
        let mut objective = vec![Rational::zero(); s.len()];
        for &h in &support {
            objective[h] = Rational::one();
        }
        match s.program(objective).maximize() {
            LpOutcome::Optimal { value, .. } => max.push(value),
            LpOutcome::Infeasible => return None,
            LpOutcome::Unbounded => unreachable!("Σ lies in the simplex"),
        }
        phi.push(support);
    }
    let i0 = (0..s.dim()).filter(|&j| max[j].is_zero()).collect();
    Some(SolutionFunctionals { phi, max, i0 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Family indices of the system that `lambda` solves.
    pub indices: Vec<usize>,
    #[serde(with = "rational::wire_vec")]
    pub lambda: Vec<Rational>,
}

impl Witness {
    pub fn verify(&self, system: &SigmaSystem) -> bool {
        system.indices == self.indices && system.is_solution(&self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Certificate {
    /// Family indices of the refuted sub-assessment.
    pub indices: Vec<usize>,
    #[serde(with = "rational::wire_vec")]
    pub stakes: Vec<Rational>,
    /// Gain on each constituent of the refuted sub-assessment.
    #[serde(with = "rational::wire_vec")]
    pub gains: Vec<Rational>,
}

impl Certificate {
    /// Recomputes the gains on `system` and checks they are all positive.
    pub fn verify(&self, system: &SigmaSystem) -> bool {
        if system.indices != self.indices || self.stakes.len() != system.dim() {
            return false;
        }
        let gains = system.gains(&self.stakes);
        gains == self.gains && gains.iter().all(Signed::is_positive)
    }
}

/// One step of the `I_0` recursion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceLevel {
    pub indices: Vec<usize>,
    pub feasible: bool,
    /// `M_j` for each index, when feasible.
    #[serde(with = "rational::wire_vec")]
    pub upper: Vec<Rational>,
    /// Family indices with `M_j = 0`.
    #[serde(rename = "I0")]
    pub i0: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoherenceVerdict {
    pub coherent: bool,
    /// A solution of the full system, for coherent assessments.
    pub witness: Option<Witness>,
    /// Positive-gain stakes on the level that failed, for incoherent ones.
    pub certificate: Option<Certificate>,
    pub trace: Vec<TraceLevel>,
}

/// Decides coherence by the `I_0` recursion.
pub fn check_coherence(ctx: &Context, a: &Assessment) -> Result<CoherenceVerdict> {
    Ok(check_sigma(&build_sigma(ctx, a)?))
}

/// Decides coherence of the assessment described by `system`.
pub fn check_sigma(system: &SigmaSystem) -> CoherenceVerdict {
    let mut trace = Vec::new();
    let mut witness = None;
    let mut current = system.clone();
    loop {
        match sigma_feasible(&current) {
            Feasibility::Certificate(stakes) => {
                let gains = current.gains(&stakes);
                trace.push(TraceLevel {
                    indices: current.indices.clone(),
                    feasible: false,
                    upper: Vec::new(),
                    i0: Vec::new(),
                });
                return CoherenceVerdict {
                    coherent: false,
                    witness: None,
                    certificate: Some(Certificate {
                        indices: current.indices.clone(),
                        stakes,
                        gains,
                    }),
                    trace,
                };
            }
            Feasibility::Witness(lambda) => {
                if witness.is_none() {
                    witness = Some(Witness {
                        indices: current.indices.clone(),
                        lambda,
                    });
                }
                let functionals = solution_functionals(&current)
                    .expect("Σ has a solution, so each maximization is feasible");
                trace.push(TraceLevel {
                    indices: current.indices.clone(),
                    feasible: true,
                    upper: functionals.max.clone(),
                    i0: functionals.i0.iter().map(|&k| current.indices[k]).collect(),
                });
                if functionals.i0.is_empty() {
                    return CoherenceVerdict {
                        coherent: true,
                        witness,
                        certificate: None,
                        trace,
                    };
                }
                current = current.subsystem(&functionals.i0);
            }
        }
    }
}

/// Closed interval `[lo, hi]` inside `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProbabilityInterval {
    #[serde(with = "rational::wire")]
    lo: Rational,
    #[serde(with = "rational::wire")]
    hi: Rational,
}

impl ProbabilityInterval {
    pub fn new(lo: Rational, hi: Rational) -> Result<ProbabilityInterval> {
        if !rational::is_unit(&lo) {
            return Err(Error::OutOfRange(lo));
        }
        if !rational::is_unit(&hi) {
            return Err(Error::OutOfRange(hi));
        }
        if lo > hi {
            return Err(Error::Invalid(format!(
                "empty interval [{}, {}]",
                rational::format_rational(&lo),
                rational::format_rational(&hi)
            )));
        }
        Ok(ProbabilityInterval { lo, hi })
    }

    pub fn point(value: Rational) -> Result<ProbabilityInterval> {
        ProbabilityInterval::new(value.clone(), value)
    }

    pub fn unit() -> ProbabilityInterval {
        ProbabilityInterval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn from_units(lo: UnitValue, hi: UnitValue) -> Result<ProbabilityInterval> {
        ProbabilityInterval::new(lo.into_inner(), hi.into_inner())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn contains(&self, z: &Rational) -> bool {
        &self.lo <= z && z <= &self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }
}

impl std::fmt::Display for ProbabilityInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rational::format_rational(&self.lo),
            rational::format_rational(&self.hi)
        )
    }
}

/// One level of the extension computation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtensionLevel {
    /// Base family indices whose constraints were imposed.
    pub indices: Vec<usize>,
    /// Whether the target antecedent had positive upper probability here.
    pub antecedent_positive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EndpointCheck {
    #[serde(with = "rational::wire")]
    pub value: Rational,
    pub coherent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Extension {
    pub interval: ProbabilityInterval,
    pub levels: Vec<ExtensionLevel>,
    pub validation: Vec<EndpointCheck>,
    pub warnings: Vec<String>,
}

const BISECTION_STEPS: u32 = 32;

/// Interval of values `z` such that extending the coherent assessment `a`
/// by `target` with probability `z` stays coherent.
///
/// On each level the fraction `P(E H) / P(H)` is optimized over the
/// solutions of the current system with `P(H) > 0`, after homogenization.
/// When some solutions give the target antecedent zero probability, the
/// target is free on them up to the indices whose antecedents also vanish
/// there; those indices become the next level and the ranges are joined.
/// With no constraints left every `z` compatible with the target's own logic
/// is coherent.
pub fn extension_interval(
    ctx: &Context,
    a: &Assessment,
    target: &ConditionalEvent,
) -> Result<Extension> {
    a.validate(ctx)?;
    target.validate(ctx)?;
    let n = a.len();
    let mut family = a.family.clone();
    family.push(target.clone());
    let profiles = profiles_of(ctx, &family)?;
    let probs = a.rationals();

    let base_columns: Vec<usize> = (0..n).collect();
    let base = SigmaSystem::from_profiles(
        base_columns.clone(),
        project(&profiles, &base_columns),
        probs.clone(),
    );
    if !check_sigma(&base).coherent {
        return Err(Error::IncoherentAssessment);
    }

    let mut levels = Vec::new();
    let mut active = base_columns;
    let mut hull: Option<(Rational, Rational)> = None;
    loop {
        let range = homogenized_range(&profiles, &active, n, &probs);
        levels.push(ExtensionLevel {
            indices: active.clone(),
            antecedent_positive: range.is_some(),
        });
        if let Some((lo, hi)) = range {
            hull = Some(match hull {
                None => (lo, hi),
                Some((l, h)) => (l.min(lo), h.max(hi)),
            });
        }
        match null_antecedent_indices(&profiles, &active, n, &probs) {
            Some(next) => active = next,
            None => break,
        }
    }
    let (lo, hi) = hull.expect("the last level has no constraints on the target");

    let all: Vec<usize> = (0..=n).collect();
    let enlarged_profiles = project(&profiles, &all);
    let coherent_at = |z: &Rational| {
        let mut p = probs.clone();
        p.push(z.clone());
        check_sigma(&SigmaSystem::from_profiles(
            all.clone(),
            enlarged_profiles.clone(),
            p,
        ))
        .coherent
    };

    let mut validation = Vec::new();
    let mut warnings = Vec::new();
    let lo_ok = coherent_at(&lo);
    validation.push(EndpointCheck {
        value: lo.clone(),
        coherent: lo_ok,
    });
    let hi_ok = if hi == lo { lo_ok } else { coherent_at(&hi) };
    if hi != lo {
        validation.push(EndpointCheck {
            value: hi.clone(),
            coherent: hi_ok,
        });
    }
    let (mut lo, mut hi) = (lo, hi);
    if !(lo_ok && hi_ok) {
        let mid = (&lo + &hi) / rational::int(2);
        let inner = if lo_ok {
            lo.clone()
        } else if hi_ok {
            hi.clone()
        } else {
            mid
        };
        if coherent_at(&inner) {
            if !lo_ok {
                lo = bisect(&lo, &inner, &coherent_at);
                warnings.push(format!(
                    "lower endpoint failed validation; shrunk to {}",
                    rational::format_rational(&lo)
                ));
            }
            if !hi_ok {
                hi = bisect(&hi, &inner, &coherent_at);
                warnings.push(format!(
                    "upper endpoint failed validation; shrunk to {}",
                    rational::format_rational(&hi)
                ));
            }
        } else {
            warnings.push("no coherent point found while validating endpoints".into());
        }
    }
    Ok(Extension {
        interval: ProbabilityInterval::new(lo, hi)?,
        levels,
        validation,
        warnings,
    })
}

/// Moves from `bad` towards `good`, returning the coherent point closest to
/// `bad` found by bisection.
fn bisect(bad: &Rational, good: &Rational, coherent: &dyn Fn(&Rational) -> bool) -> Rational {
    let two = rational::int(2);
    let (mut bad, mut good) = (bad.clone(), good.clone());
    for _ in 0..BISECTION_STEPS {
        let mid = (&bad + &good) / &two;
        if coherent(&mid) {
            good = mid;
        } else {
            bad = mid;
        }
    }
    good
}

/// Indices in `active` whose antecedents have zero upper probability over
/// the solutions giving the target antecedent zero probability; `None` when
/// there are no such solutions.
fn null_antecedent_indices(
    profiles: &[Vec<TruthValue3>],
    active: &[usize],
    target: usize,
    probs: &[Rational],
) -> Option<Vec<usize>> {
    let mut columns = active.to_vec();
    columns.push(target);
    let rows: Vec<Vec<TruthValue3>> = project(profiles, &columns)
        .into_iter()
        .filter(|row| row[active.len()] == TruthValue3::Void)
        .map(|mut row| {
            row.pop();
            row
        })
        .collect();
    if rows.is_empty() {
        return None;
    }
    let system = SigmaSystem::from_profiles(
        active.to_vec(),
        rows,
        active.iter().map(|&j| probs[j].clone()).collect(),
    );
    let functionals = solution_functionals(&system)?;
    Some(functionals.i0.iter().map(|&k| active[k]).collect())
}

/// Range of `P(EH) / P(H)` over `y >= 0` with
/// `Σ_{E_j H_j} y = p_j Σ_{H_j} y` for `j` in `active` and `Σ_H y = 1`.
/// `None` when the target antecedent has zero upper probability.
fn homogenized_range(
    profiles: &[Vec<TruthValue3>],
    active: &[usize],
    target: usize,
    probs: &[Rational],
) -> Option<(Rational, Rational)> {
    let mut columns = active.to_vec();
    columns.push(target);
    let rows = project(profiles, &columns);
    let t = active.len();
    let mut a = Vec::with_capacity(t + 1);
    let mut b = Vec::with_capacity(t + 1);
    for (k, &j) in active.iter().enumerate() {
        let p = &probs[j];
        a.push(
            rows.iter()
                .map(|row| match row[k] {
                    TruthValue3::True => Rational::one() - p,
                    TruthValue3::False => -p.clone(),
                    TruthValue3::Void => Rational::zero(),
                })
                .collect(),
        );
        b.push(Rational::zero());
    }
    a.push(
        rows.iter()
            .map(|row| indicator(row[t] != TruthValue3::Void))
            .collect(),
    );
    b.push(Rational::one());
    let objective: Vec<Rational> = rows
        .iter()
        .map(|row| indicator(row[t] == TruthValue3::True))
        .collect();
    let lp = LinearProgram::new(a, b, objective);
    let lo = match lp.minimize() {
        LpOutcome::Optimal { value, .. } => value,
        LpOutcome::Infeasible => return None,
        LpOutcome::Unbounded => unreachable!("objective is bounded by the normalization"),
    };
    let hi = match lp.maximize() {
        LpOutcome::Optimal { value, .. } => value,
        other => unreachable!("feasible bounded program gave {other:?}"),
    };
    Some((lo, hi))
}

fn indicator(b: bool) -> Rational {
    if b {
        Rational::one()
    } else {
        Rational::zero()
    }
}
