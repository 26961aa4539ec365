//! t-norms and t-conorms on exact rationals.
//!
//! Binary operators follow the usual definitions; `k`-ary evaluation folds
//! the binary operator from the left. The Hamacher product (`λ = 0`) also
//! has closed `k`-ary forms derived from its additive generator
//! `t(x) = (1 - x) / x`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// A rational in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UnitValue(Rational);

impl UnitValue {
    pub fn new(value: Rational) -> Result<UnitValue> {
        if rational::is_unit(&value) {
            Ok(UnitValue(value))
        } else {
            Err(Error::OutOfRange(value))
        }
    }

    pub fn zero() -> UnitValue {
        UnitValue(Rational::zero())
    }

    pub fn one() -> UnitValue {
        UnitValue(Rational::one())
    }

    /// Panics unless `0 <= num/den <= 1`; meant for literals.
    pub fn ratio(num: i64, den: i64) -> UnitValue {
        UnitValue::new(rational::ratio(num, den)).expect("literal outside [0, 1]")
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn into_inner(self) -> Rational {
        self.0
    }

    /// `1 - x`.
    pub fn complement(&self) -> UnitValue {
        UnitValue(Rational::one() - &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    fn clamp(value: Rational) -> UnitValue {
        debug_assert!(rational::is_unit(&value), "{value} escaped [0, 1]");
        UnitValue(value)
    }
}

impl fmt::Display for UnitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&rational::format_rational(&self.0))
    }
}

impl FromStr for UnitValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = rational::parse_rational(s).map_err(|e| Error::Invalid(e.to_string()))?;
        UnitValue::new(value)
    }
}

impl TryFrom<Rational> for UnitValue {
    type Error = Error;

    fn try_from(value: Rational) -> Result<Self> {
        UnitValue::new(value)
    }
}

impl From<UnitValue> for Rational {
    fn from(value: UnitValue) -> Rational {
        value.0
    }
}

impl Serialize for UnitValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational::format_wire(&self.0))
    }
}

/// Hamacher parameter, a nonnegative rational or `∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lambda {
    Finite(Rational),
    Infinity,
}

impl Lambda {
    pub fn finite(value: Rational) -> Result<Lambda> {
        if value < Rational::zero() {
            Err(Error::NegativeLambda)
        } else {
            Ok(Lambda::Finite(value))
        }
    }
}

impl fmt::Display for Lambda {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lambda::Finite(v) => f.write_str(&rational::format_rational(v)),
            Lambda::Infinity => f.write_str("inf"),
        }
    }
}

impl FromStr for Lambda {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "infinity" | "∞" => Ok(Lambda::Infinity),
            other => Lambda::finite(
                rational::parse_rational(other).map_err(|e| Error::Invalid(e.to_string()))?,
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum OperatorFamily {
    Minimum,
    Product,
    Lukasiewicz,
    Drastic,
    Hamacher(Lambda),
}

impl OperatorFamily {
    pub fn hamacher0() -> OperatorFamily {
        OperatorFamily::Hamacher(Lambda::Finite(Rational::zero()))
    }

    pub fn name(&self) -> String {
        match self {
            OperatorFamily::Minimum => "minimum".into(),
            OperatorFamily::Product => "product".into(),
            OperatorFamily::Lukasiewicz => "lukasiewicz".into(),
            OperatorFamily::Drastic => "drastic".into(),
            OperatorFamily::Hamacher(l) => format!("hamacher({l})"),
        }
    }

    /// Parses a family name; `lambda` is only used by `hamacher`.
    pub fn parse(name: &str, lambda: Option<Lambda>) -> Result<OperatorFamily> {
        Ok(match name.to_ascii_lowercase().as_str() {
            "min" | "minimum" | "m" => OperatorFamily::Minimum,
            "prod" | "product" | "p" => OperatorFamily::Product,
            "luk" | "lukasiewicz" | "l" => OperatorFamily::Lukasiewicz,
            "drastic" | "d" => OperatorFamily::Drastic,
            "hamacher" | "h" => OperatorFamily::Hamacher(
                lambda.unwrap_or_else(|| Lambda::Finite(Rational::zero())),
            ),
            other => return Err(Error::Invalid(format!("unknown operator family `{other}`"))),
        })
    }
}

fn binary_tnorm(family: &OperatorFamily, x: &Rational, y: &Rational) -> Rational {
    let one = Rational::one();
    match family {
        OperatorFamily::Minimum => x.min(y).clone(),
        OperatorFamily::Product => x * y,
        OperatorFamily::Lukasiewicz => (x + y - &one).max(Rational::zero()),
        OperatorFamily::Drastic | OperatorFamily::Hamacher(Lambda::Infinity) => {
            if x < &one && y < &one {
                Rational::zero()
            } else {
                x.min(y).clone()
            }
        }
        OperatorFamily::Hamacher(Lambda::Finite(lambda)) => {
            if lambda.is_zero() && x.is_zero() && y.is_zero() {
                return Rational::zero();
            }
            let xy = x * y;
            let denom = lambda + (&one - lambda) * (x + y - &xy);
            xy / denom
        }
    }
}

fn binary_tconorm(family: &OperatorFamily, x: &Rational, y: &Rational) -> Rational {
    let one = Rational::one();
    match family {
        OperatorFamily::Minimum => x.max(y).clone(),
        OperatorFamily::Product => x + y - x * y,
        OperatorFamily::Lukasiewicz => (x + y).min(one),
        OperatorFamily::Drastic | OperatorFamily::Hamacher(Lambda::Infinity) => {
            if x.is_zero() || y.is_zero() {
                x.max(y).clone()
            } else {
                one
            }
        }
        OperatorFamily::Hamacher(Lambda::Finite(lambda)) => {
            if lambda.is_zero() && x.is_one() && y.is_one() {
                return one;
            }
            let xy = x * y;
            let shrink = &one - lambda;
            (x + y - &xy - &shrink * &xy) / (&one - shrink * xy)
        }
    }
}

fn fold(
    args: &[UnitValue],
    op: impl Fn(&Rational, &Rational) -> Rational,
) -> Result<UnitValue> {
    let (first, rest) = args.split_first().ok_or(Error::EmptyArguments)?;
    let value = rest
        .iter()
        .fold(first.0.clone(), |acc, next| op(&acc, &next.0));
    Ok(UnitValue::clamp(value))
}

/// `T(p_1, ..., p_k)`, folding left; a single argument is returned as is.
pub fn tnorm(family: &OperatorFamily, args: &[UnitValue]) -> Result<UnitValue> {
    fold(args, |x, y| binary_tnorm(family, x, y))
}

/// `S(p_1, ..., p_k)`, folding left; a single argument is returned as is.
pub fn tconorm(family: &OperatorFamily, args: &[UnitValue]) -> Result<UnitValue> {
    fold(args, |x, y| binary_tconorm(family, x, y))
}

/// Dual t-conorm through complementation: `1 - T(1 - p_1, ..., 1 - p_k)`.
pub fn dual_eval(family: &OperatorFamily, args: &[UnitValue]) -> Result<UnitValue> {
    let complemented: Vec<UnitValue> = args.iter().map(UnitValue::complement).collect();
    Ok(tnorm(family, &complemented)?.complement())
}

/// Closed form of the `k`-ary Hamacher product:
/// `0` if some `p_i = 0`, else `1 / (1 + Σ (1 - p_i) / p_i)`.
pub fn hamacher0_nary(args: &[UnitValue]) -> Result<UnitValue> {
    if args.is_empty() {
        return Err(Error::EmptyArguments);
    }
    if args.iter().any(UnitValue::is_zero) {
        return Ok(UnitValue::zero());
    }
    let one = Rational::one();
    let sum: Rational = args.iter().map(|p| (&one - &p.0) / &p.0).sum();
    Ok(UnitValue::clamp(&one / (&one + sum)))
}

/// Closed form of the `k`-ary Hamacher sum:
/// `1` if some `p_i = 1`, else `s / (s + 1)` with `s = Σ p_i / (1 - p_i)`.
pub fn hamacher0_conary(args: &[UnitValue]) -> Result<UnitValue> {
    if args.is_empty() {
        return Err(Error::EmptyArguments);
    }
    if args.iter().any(UnitValue::is_one) {
        return Ok(UnitValue::one());
    }
    let one = Rational::one();
    let sum: Rational = args.iter().map(|p| &p.0 / (&one - &p.0)).sum();
    Ok(UnitValue::clamp(&sum / (&sum + &one)))
}

/// Convenience: `T_0^H` by closed form.
pub fn t_hamacher0(args: &[UnitValue]) -> Result<UnitValue> {
    hamacher0_nary(args)
}

/// Convenience: `S_0^H` by closed form.
pub fn s_hamacher0(args: &[UnitValue]) -> Result<UnitValue> {
    hamacher0_conary(args)
}

/// `T_L(p) = max(Σ p_i - (k - 1), 0)`.
pub fn t_lukasiewicz(args: &[UnitValue]) -> Result<UnitValue> {
    tnorm(&OperatorFamily::Lukasiewicz, args)
}

/// `S_L(p) = min(Σ p_i, 1)`.
pub fn s_lukasiewicz(args: &[UnitValue]) -> Result<UnitValue> {
    tconorm(&OperatorFamily::Lukasiewicz, args)
}
