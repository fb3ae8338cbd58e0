//! Exact exponent arithmetic on rationals.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Square,
    Hexagonal,
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "square" => Ok(Variant::Square),
            "hexagonal" | "hex" => Ok(Variant::Hexagonal),
            _ => Err(Error::InvalidArgument(format!("unknown lattice variant `{s}`"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Square => "square",
            Variant::Hexagonal => "hexagonal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KappaMode {
    /// Uses the supplied `η₂`.
    #[default]
    Standard,
    /// Replaces `η₂` by its lower bound `1/4` in `η₁η₂/2`.
    Eta2LowerBound,
}

impl FromStr for KappaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standard" => Ok(KappaMode::Standard),
            "eta2-lower-bound" | "eta2_lower_bound" => Ok(KappaMode::Eta2LowerBound),
            _ => Err(Error::InvalidArgument(format!("unknown kappa mode `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KappaInputs {
    pub eta1: BigRational,
    pub eta2: BigRational,
    pub variant: Variant,
    pub mode: KappaMode,
}

/// Parses `a/b`, an integer, or a finite decimal such as `0.354` exactly.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let a: BigInt = a.trim().parse().map_err(|_| bad())?;
        let b: BigInt = b.trim().parse().map_err(|_| bad())?;
        if b.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(a, b));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    let digits = format!("{int}{frac}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let num: BigInt = digits.parse().map_err(|_| bad())?;
    let den = num_traits::pow(BigInt::from(10), frac.len());
    let r = BigRational::new(num, den);
    Ok(if neg { -r } else { r })
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

fn check_unit(name: &str, x: &BigRational) -> Result<()> {
    if x.is_negative() || x > &BigRational::one() {
        return Err(Error::InvalidArgument(format!("{name} = {x} outside [0, 1]")));
    }
    Ok(())
}

impl KappaInputs {
    pub fn new(eta1: BigRational, eta2: BigRational, variant: Variant) -> Self {
        KappaInputs { eta1, eta2, variant, mode: KappaMode::Standard }
    }

    pub fn parse(eta1: &str, eta2: &str, variant: Variant) -> Result<Self> {
        Ok(Self::new(parse_rational(eta1)?, parse_rational(eta2)?, variant))
    }

    pub fn with_mode(mut self, mode: KappaMode) -> Self {
        self.mode = mode;
        self
    }

    fn validate(&self) -> Result<()> {
        check_unit("eta1", &self.eta1)?;
        check_unit("eta2", &self.eta2)?;
        if self.variant == Variant::Hexagonal && self.eta1 > self.eta2 {
            return Err(Error::InvalidArgument(format!(
                "hexagonal variant needs eta1 <= eta2, got {} > {}",
                self.eta1, self.eta2
            )));
        }
        Ok(())
    }

    /// The exponent multiplying the bracket in the exit bound: `η₁` on the
    /// square lattice, `η₂ − η₁` on the hexagonal one.
    fn arm_gap(&self) -> BigRational {
        match self.variant {
            Variant::Square => self.eta1.clone(),
            Variant::Hexagonal => &self.eta2 - &self.eta1,
        }
    }
}

/// Lower bound on the subdiffusivity gain `κ`: `η₁η₂/2` (square),
/// `η₂(η₂ − η₁)/2` (hexagonal), or `η₁/8` in the `η₂ >= 1/4` mode.
pub fn kappa_bound(input: &KappaInputs) -> Result<BigRational> {
    input.validate()?;
    Ok(match (input.mode, input.variant) {
        (KappaMode::Eta2LowerBound, _) => &input.eta1 * BigRational::new(1.into(), 4.into()) * half(),
        (KappaMode::Standard, Variant::Square) => &input.eta1 * &input.eta2 * half(),
        (KappaMode::Standard, Variant::Hexagonal) => &input.eta2 * input.arm_gap() * half(),
    })
}

/// Supremum of admissible exit exponents
/// `2 s₁ + η (2 s₁/s₂ − (2 − η₂)/s₂)` given chemical-distance exponents
/// `s₁ <= s₂`, with `η` the arm gap of the variant.
pub fn exit_exponent_bound(s1: &BigRational, s2: &BigRational, input: &KappaInputs) -> Result<BigRational> {
    input.validate()?;
    if !s2.is_positive() {
        return Err(Error::InvalidArgument(format!("s2 must be positive, got {s2}")));
    }
    if s1 > s2 {
        return Err(Error::InvalidArgument(format!("need s1 <= s2, got {s1} > {s2}")));
    }
    if s1 < &BigRational::one() {
        return Err(Error::InvalidArgument(format!("need s1 >= 1, got {s1}")));
    }
    let two = BigRational::from_integer(2.into());
    let bracket = (&two * s1) / s2 - (&two - &input.eta2) / s2;
    Ok(&two * s1 + input.arm_gap() * bracket)
}

/// `κ` obtained from the exit bound with `s₁ = 1` and `s₂ = 2 − η₂`, i.e.
/// `η (η₂) / (2 − η₂)`.
pub fn kappa_from_exit_bound(input: &KappaInputs) -> Result<BigRational> {
    let one = BigRational::one();
    let two = BigRational::from_integer(2.into());
    let s2 = &two - &input.eta2;
    Ok(exit_exponent_bound(&one, &s2, input)? - two)
}

/// Decimal rendering for reports.
pub fn to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn parses_forms() {
        assert_eq!(q("5/48"), BigRational::new(5.into(), 48.into()));
        assert_eq!(q("0.25"), BigRational::new(1.into(), 4.into()));
        assert_eq!(q("-3"), BigRational::from_integer((-3).into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn square_zero_eta1() {
        let k = kappa_bound(&KappaInputs::new(q("0"), q("1/3"), Variant::Square)).unwrap();
        assert!(k.is_zero());
    }

    #[test]
    fn hexagonal_order_enforced() {
        assert!(kappa_bound(&KappaInputs::new(q("1/2"), q("1/3"), Variant::Hexagonal)).is_err());
    }

    #[test]
    fn exit_bound_zero_eta1_is_twice_s1() {
        let input = KappaInputs::new(q("0"), q("1/3"), Variant::Square);
        assert_eq!(exit_exponent_bound(&q("5/4"), &q("3/2"), &input).unwrap(), q("5/2"));
        assert!(exit_exponent_bound(&q("2"), &q("3/2"), &input).is_err());
        assert!(exit_exponent_bound(&q("1"), &q("0"), &input).is_err());
    }
}
