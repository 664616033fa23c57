//! Floating-point scalar abstraction.
//!
//! Evaluation-level formulas (main terms, envelopes, sawtooth sums, fits) are
//! generic over [`Real`] so they run at `f32` or `f64`; exact decisions never
//! go through this trait. Exponent arithmetic stays in [`Rat`] and is only
//! converted to a `Real` at evaluation time.

use num_rational::Ratio;
use num_traits::float::{Float, FloatConst};
use std::fmt::{Debug, Display};

/// Exact rational used for exponents (c = p/q, exponent pairs, error
/// exponents).
pub type Rat = Ratio<i64>;

/// Floating-point scalar for formula evaluation.
pub trait Real: Float + FloatConst + Debug + Display + Send + Sync + 'static {
    fn from_f64(x: f64) -> Self;
    fn from_u64(n: u64) -> Self;
    fn from_i64(n: i64) -> Self;
    fn to_f64(self) -> f64;

    fn from_rat(r: &Rat) -> Self {
        Self::from_i64(*r.numer()) / Self::from_i64(*r.denom())
    }

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::one() / Self::two()
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x
    }
    #[inline]
    fn from_u64(n: u64) -> Self {
        n as f64
    }
    #[inline]
    fn from_i64(n: i64) -> Self {
        n as f64
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self
    }
}

impl Real for f32 {
    #[inline]
    fn from_f64(x: f64) -> Self {
        x as f32
    }
    #[inline]
    fn from_u64(n: u64) -> Self {
        n as f32
    }
    #[inline]
    fn from_i64(n: i64) -> Self {
        n as f32
    }
    #[inline]
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// Parse a rational written as `p/q` or as a bare integer.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let text = text.trim();
    if let Some((num, den)) = text.split_once('/') {
        let p: i64 = num.trim().parse().ok()?;
        let q: i64 = den.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        Some(Rat::new(p, q))
    } else {
        text.parse::<i64>().ok().map(Rat::from_integer)
    }
}

/// Render a rational as `p/q` (or `p` when the denominator is 1).
pub fn rat_string(r: &Rat) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
