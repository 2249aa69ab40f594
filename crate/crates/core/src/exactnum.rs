//! Exact rationals and rational interval enclosures of the exponential.
//!
//! Every probability in this crate is an [`ExactRational`]. Comparisons
//! against transcendental thresholds such as `e^{-1/3}` go through
//! [`compare_to_exp`], which refines a rigorous enclosure of `e^{-a}` until it
//! separates from the rational being tested.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
pub type ExactRational = BigRational;

/// Maximum number of Taylor terms [`compare_to_exp`] will try.
pub const REFINEMENT_CAP: u32 = 1 << 12;

const INITIAL_TERMS: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("interval endpoints out of order: {lo} > {hi}")]
    Inverted { lo: String, hi: String },
    #[error("reciprocal of an interval containing zero")]
    ZeroDivisor,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
}

/// Shorthand for a small rational literal.
pub fn ratio(numer: i64, denom: i64) -> ExactRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn from_natural(n: &BigUint) -> ExactRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Parses `a/b`, an integer, or a plain decimal such as `0.48`.
pub fn parse_rational(s: &str) -> Result<ExactRational, ExactError> {
    let bad = || ExactError::Parse(s.to_string());
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int: BigInt = match int.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            digits => digits.parse().map_err(|_| bad())?,
        };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac: BigInt = frac.parse().map_err(|_| bad())?;
        let magnitude = BigRational::new(int * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

pub fn natural_ratio(numer: &BigUint, denom: &BigUint) -> ExactRational {
    BigRational::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
}

/// Closed interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatInterval {
    lo: ExactRational,
    hi: ExactRational,
}

impl RatInterval {
    pub fn new(lo: ExactRational, hi: ExactRational) -> Result<Self, ExactError> {
        if lo > hi {
            return Err(ExactError::Inverted {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn point(x: ExactRational) -> Self {
        Self {
            lo: x.clone(),
            hi: x,
        }
    }

    pub fn lo(&self) -> &ExactRational {
        &self.lo
    }

    pub fn hi(&self) -> &ExactRational {
        &self.hi
    }

    pub fn width(&self) -> ExactRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> ExactRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn strictly_below(&self, other: &RatInterval) -> bool {
        self.hi < other.lo
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if a <= b {
            Self { lo: a, hi: b }
        } else {
            Self { lo: b, hi: a }
        }
    }

    pub fn shift(&self, c: &ExactRational) -> Self {
        Self {
            lo: &self.lo + c,
            hi: &self.hi + c,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.contains(&ExactRational::zero()) {
            return Err(ExactError::ZeroDivisor);
        }
        Ok(Self {
            lo: self.hi.recip(),
            hi: self.lo.recip(),
        })
    }

    /// Integer power of an interval with nonnegative lower endpoint.
    pub fn pow_nonneg(&self, exp: u32) -> Self {
        debug_assert!(!self.lo.is_negative());
        Self {
            lo: num_traits::pow(self.lo.clone(), exp as usize),
            hi: num_traits::pow(self.hi.clone(), exp as usize),
        }
    }

    /// Decimal rendering of both endpoints, truncated toward zero.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "[{}, {}]",
            to_decimal(&self.lo, digits),
            to_decimal(&self.hi, digits)
        )
    }
}

impl fmt::Display for RatInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}

impl Add for &RatInterval {
    type Output = RatInterval;
    fn add(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo + &rhs.lo,
            hi: &self.hi + &rhs.hi,
        }
    }
}

impl Sub for &RatInterval {
    type Output = RatInterval;
    fn sub(self, rhs: &RatInterval) -> RatInterval {
        RatInterval {
            lo: &self.lo - &rhs.hi,
            hi: &self.hi - &rhs.lo,
        }
    }
}

impl Mul for &RatInterval {
    type Output = RatInterval;
    fn mul(self, rhs: &RatInterval) -> RatInterval {
        let products = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = products.iter().min().cloned().unwrap();
        let hi = products.iter().max().cloned().unwrap();
        RatInterval { lo, hi }
    }
}

fn factorial(k: u32) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Taylor partial sum `sum_{k < terms} x^k / k!`.
fn taylor_partial_sum(x: &ExactRational, terms: u32) -> ExactRational {
    let mut sum = ExactRational::zero();
    let mut term = ExactRational::one();
    for k in 0..terms {
        if k > 0 {
            term = term * x / BigInt::from(k);
        }
        sum += &term;
    }
    sum
}

/// Enclosure of `e` from the first `terms` Taylor terms at 1.
/// Lagrange remainder: `e^xi / terms! < 3 / terms!`.
fn e_enclosure(terms: u32) -> RatInterval {
    let lo = taylor_partial_sum(&ExactRational::one(), terms);
    let hi = &lo + BigRational::new(BigInt::from(3), factorial(terms));
    RatInterval { lo, hi }
}

/// Enclosure of `e^f` for `|f| <= 1/2`.
/// Lagrange remainder: `e^{|f|} |f|^terms / terms! <= 2 |f|^terms / terms!`.
fn reduced_exp_enclosure(f: &ExactRational, terms: u32) -> RatInterval {
    let sum = taylor_partial_sum(f, terms);
    let remainder = num_traits::pow(f.abs(), terms as usize) * BigInt::from(2) / factorial(terms);
    let lo = &sum - &remainder;
    let hi = &sum + &remainder;
    debug_assert!(!lo.is_negative());
    RatInterval { lo, hi }
}

/// Nearest integer to `x`, ties rounded up, so `x - m` lies in `[-1/2, 1/2]`.
fn nearest_integer(x: &ExactRational) -> BigInt {
    let shifted = x + ratio(1, 2);
    shifted.numer().div_floor(shifted.denom())
}

/// Rigorous enclosure of `e^x` using `terms` Taylor terms.
///
/// The argument is split as `x = m + f` with integer `m` and `|f| <= 1/2`;
/// `e^f` comes from a Taylor sum with an explicit Lagrange remainder and
/// `e^m` from the `|m|`-th power of an enclosure of `e`.
pub fn exp_enclosure(x: &ExactRational, terms: u32) -> RatInterval {
    assert!(terms >= 1, "exp_enclosure needs at least one term");
    let m = nearest_integer(x);
    let f = x - BigRational::from_integer(m.clone());
    let frac = reduced_exp_enclosure(&f, terms);
    if m.is_zero() {
        return frac;
    }
    let power = u32::try_from(m.abs()).expect("exponent too large for exp_enclosure");
    let e_pow = e_enclosure(terms).pow_nonneg(power);
    let int_part = if m.is_negative() {
        e_pow.recip().expect("e-enclosure is positive")
    } else {
        e_pow
    };
    &frac * &int_part
}

/// Outcome of comparing a rational with `e^{-a}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize)]
pub enum ExpOrdering {
    Less,
    Greater,
    /// The enclosure still contained `p` after the refinement cap.
    Undecidable,
}

/// Decides `p` against `e^{-a}` with the default cap of [`REFINEMENT_CAP`] terms.
pub fn compare_to_exp(p: &ExactRational, a: &ExactRational) -> ExpOrdering {
    compare_to_exp_with_cap(p, a, REFINEMENT_CAP)
}

pub fn compare_to_exp_with_cap(p: &ExactRational, a: &ExactRational, cap: u32) -> ExpOrdering {
    let x = -a;
    let mut terms = INITIAL_TERMS.min(cap.max(1));
    loop {
        let enc = exp_enclosure(&x, terms);
        if p < enc.lo() {
            return ExpOrdering::Less;
        }
        if p > enc.hi() {
            return ExpOrdering::Greater;
        }
        if terms >= cap {
            return ExpOrdering::Undecidable;
        }
        terms = (terms * 2).min(cap);
    }
}

/// Decimal string of `x` with `digits` fractional digits, truncated toward zero.
pub fn to_decimal(x: &ExactRational, digits: usize) -> String {
    let negative = x.is_negative();
    let numer = x.numer().abs();
    let denom = x.denom();
    let (int_part, rem) = numer.div_rem(denom);
    let mut out = String::new();
    let frac = if digits > 0 {
        let scaled = rem * num_traits::pow(BigInt::from(10), digits) / denom;
        format!("{:0>width$}", scaled.to_string(), width = digits)
    } else {
        String::new()
    };
    let all_zero = int_part.is_zero() && frac.bytes().all(|b| b == b'0');
    if negative && !all_zero {
        out.push('-');
    }
    out.push_str(&int_part.to_string());
    if digits > 0 {
        out.push('.');
        out.push_str(&frac);
    }
    out
}

/// Nearest `f64`, for diagnostics only.
pub fn to_f64(x: &ExactRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
