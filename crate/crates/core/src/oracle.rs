//! Brute-force reference computations by vertex enumeration.
//!
//! Every basic feasible solution of `{λ >= 0 : A λ = b}` is found by
//! solving each square subsystem on a choice of `rank(A)` columns. Linear
//! and linear-fractional extrema are then read off the vertex list. The
//! module shares no solver code with the simplex path.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::coherence::{Assessment, ProbabilityInterval};
use crate::conditionals::{ConditionalEvent, TruthValue3};
use crate::error::{Error, Result};
use crate::events::{constituents, Context};
use crate::rational::Rational;

pub const DEFAULT_VERTEX_LIMIT: usize = 14;

/// `{λ >= 0 : A λ = b}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

impl Polytope {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Polytope {
        Polytope { a, b }
    }

    pub fn columns(&self) -> usize {
        self.a.first().map_or(0, Vec::len)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.columns()
            && x.iter().all(|v| !v.is_negative())
            && self.a.iter().zip(&self.b).all(|(row, rhs)| {
                row.iter().zip(x).map(|(a, v)| a * v).sum::<Rational>() == *rhs
            })
    }
}

/// Reduced row echelon form of `[A | b]`. Returns the independent rows
/// and pivot columns, or `None` when the system is inconsistent.
fn reduce(p: &Polytope) -> Option<(Vec<Vec<Rational>>, Vec<usize>)> {
    let n = p.columns();
    let mut rows: Vec<Vec<Rational>> = p
        .a
        .iter()
        .zip(&p.b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(k) = (r..rows.len()).find(|&k| !rows[k][c].is_zero()) else {
            continue;
        };
        rows.swap(r, k);
        let pivot = rows[r][c].clone();
        for v in rows[r].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    rows.truncate(r);
    Some((rows, pivots))
}

/// Solves the square system formed by `cols` of the reduced rows.
fn solve_square(rows: &[Vec<Rational>], cols: &[usize]) -> Option<Vec<Rational>> {
    let k = cols.len();
    let rhs = rows.first().map_or(0, |r| r.len() - 1);
    let mut m: Vec<Vec<Rational>> = rows
        .iter()
        .map(|row| {
            let mut r: Vec<Rational> = cols.iter().map(|&c| row[c].clone()).collect();
            r.push(row[rhs].clone());
            r
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, p);
        let pivot = m[c][c].clone();
        for v in m[c].iter_mut() {
            *v /= &pivot;
        }
        let pivot_row = m[c].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != c && !row[c].is_zero() {
                let f = row[c].clone();
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * pv;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[k].clone()).collect())
}

fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            f(cur);
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, f);
            cur.pop();
        }
    }
    go(0, n, k, &mut Vec::with_capacity(k), f);
}

/// All distinct vertices of a bounded polytope with at most `limit`
/// columns, in lexicographic order.
pub fn vertices(p: &Polytope, limit: usize) -> Result<Vec<Vec<Rational>>> {
    let n = p.columns();
    if n > limit {
        return Err(Error::TooManyConstituents { count: n, limit });
    }
    let Some((rows, _)) = reduce(p) else {
        return Ok(Vec::new());
    };
    let rank = rows.len();
    let mut found = BTreeSet::new();
    if rank == 0 {
        found.insert(vec![Rational::zero(); n]);
        return Ok(found.into_iter().collect());
    }
    for_each_subset(n, rank, &mut |cols| {
        if let Some(values) = solve_square(&rows, cols) {
            if values.iter().all(|v| !v.is_negative()) {
                let mut x = vec![Rational::zero(); n];
                for (&c, v) in cols.iter().zip(values) {
                    x[c] = v;
                }
                found.insert(x);
            }
        }
    });
    Ok(found.into_iter().collect())
}

/// Constituent profiles of `family` inside the union of its antecedents.
fn inside_profiles(ctx: &Context, family: &[ConditionalEvent]) -> Result<Vec<Vec<TruthValue3>>> {
    Ok(constituents(ctx, family)?
        .inside
        .into_iter()
        .map(|c| c.profile)
        .collect())
}

/// Restriction of profiles to `columns`, without all-void rows and
/// duplicates.
fn restrict(profiles: &[Vec<TruthValue3>], columns: &[usize]) -> Vec<Vec<TruthValue3>> {
    let mut out: Vec<Vec<TruthValue3>> = Vec::new();
    for profile in profiles {
        let row: Vec<TruthValue3> = columns.iter().map(|&j| profile[j]).collect();
        if row.iter().any(|t| *t != TruthValue3::Void) && !out.contains(&row) {
            out.push(row);
        }
    }
    out
}

/// Polytope of the coherence system on the given rows: `λ` in the simplex
/// with `Σ_{true} λ = p_j Σ_{not void} λ` for every column.
fn conditional_polytope(rows: &[Vec<TruthValue3>], probs: &[Rational]) -> Polytope {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for (j, p) in probs.iter().enumerate() {
        a.push(
            rows.iter()
                .map(|row| match row[j] {
                    TruthValue3::True => Rational::one() - p,
                    TruthValue3::False => -p.clone(),
                    TruthValue3::Void => Rational::zero(),
                })
                .collect(),
        );
        b.push(Rational::zero());
    }
    a.push(vec![Rational::one(); rows.len()]);
    b.push(Rational::one());
    Polytope::new(a, b)
}

fn mass(row_set: impl Iterator<Item = bool>, x: &[Rational]) -> Rational {
    row_set
        .zip(x)
        .filter(|(inside, _)| *inside)
        .map(|(_, v)| v.clone())
        .sum()
}

/// Positions `j` whose antecedent has zero mass on every vertex; `None`
/// when the polytope is empty.
fn zero_upper(rows: &[Vec<TruthValue3>], probs: &[Rational], limit: usize) -> Result<Option<Vec<usize>>> {
    let verts = vertices(&conditional_polytope(rows, probs), limit)?;
    if verts.is_empty() {
        return Ok(None);
    }
    Ok(Some(
        (0..probs.len())
            .filter(|&j| {
                verts.iter().all(|x| {
                    mass(rows.iter().map(|r| r[j] != TruthValue3::Void), x).is_zero()
                })
            })
            .collect(),
    ))
}

/// Coherence decided from vertices, following the same recursion on
/// zero-probability antecedents as the simplex path.
pub fn is_coherent_bruteforce(ctx: &Context, a: &Assessment, limit: usize) -> Result<bool> {
    let profiles = inside_profiles(ctx, &a.family)?;
    let probs = a.rationals();
    let mut active: Vec<usize> = (0..a.len()).collect();
    loop {
        let rows = restrict(&profiles, &active);
        let p: Vec<Rational> = active.iter().map(|&j| probs[j].clone()).collect();
        match zero_upper(&rows, &p, limit)? {
            None => return Ok(false),
            Some(zero) if zero.is_empty() => return Ok(true),
            Some(zero) => active = zero.into_iter().map(|k| active[k]).collect(),
        }
    }
}

/// Coherent extension interval from vertex enumeration.
pub fn extension_interval_bruteforce(
    ctx: &Context,
    a: &Assessment,
    target: &ConditionalEvent,
    limit: usize,
) -> Result<ProbabilityInterval> {
    if !is_coherent_bruteforce(ctx, a, limit)? {
        return Err(Error::IncoherentAssessment);
    }
    let n = a.len();
    let mut family = a.family.clone();
    family.push(target.clone());
    let profiles = inside_profiles(ctx, &family)?;
    let probs = a.rationals();
    let mut active: Vec<usize> = (0..n).collect();
    let mut hull: Option<(Rational, Rational)> = None;
    loop {
        let mut columns = active.clone();
        columns.push(n);
        let rows = restrict(&profiles, &columns);
        let p: Vec<Rational> = active.iter().map(|&j| probs[j].clone()).collect();
        let verts = vertices(&conditional_polytope(&rows, &p), limit)?;
        let t = active.len();
        let positive = |r: &Vec<TruthValue3>| r[t] != TruthValue3::Void;
        let mut null_vertices = Vec::new();
        for x in &verts {
            let den = mass(rows.iter().map(positive), x);
            if den.is_zero() {
                null_vertices.push(x);
                continue;
            }
            let z = mass(rows.iter().map(|r| r[t] == TruthValue3::True), x) / den;
            hull = Some(match hull {
                None => (z.clone(), z),
                Some((lo, hi)) => (lo.min(z.clone()), hi.max(z)),
            });
        }
        if null_vertices.is_empty() {
            break;
        }
        // The solutions with a null target antecedent form the face spanned
        // by these vertices.
        active = (0..t)
            .filter(|&k| {
                null_vertices
                    .iter()
                    .all(|x| mass(rows.iter().map(|r| r[k] != TruthValue3::Void), x).is_zero())
            })
            .map(|k| active[k])
            .collect();
    }
    let (lo, hi) = hull.expect("the last level has no constraints on the target");
    ProbabilityInterval::new(lo, hi)
}
