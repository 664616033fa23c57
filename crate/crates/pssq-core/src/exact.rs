//! Exact evaluation of `floor(n^c)` and the inverse interval test.
//!
//! For rational `c = p/q` every floor decision reduces to comparing
//! arbitrary-precision integers: `k = floor(n^{p/q})` is the unique `k` with
//! `k^q <= n^p < (k+1)^q`. Floating point never decides a boundary in exact
//! mode. Approximate mode (irrational `c`) evaluates in `f64` with a
//! certified error bound and refuses to answer when a boundary is ambiguous.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::real::{rat_string, Rat};

/// The exponent `c` of the sequence `floor(n^c)`, with `gamma = 1/c` derived.
///
/// Exact mode stores `c = p/q` in lowest terms with `p > q >= 2`, which
/// enforces `c > 1` and `c` not an integer. Approximate mode carries a real
/// value and is only honest up to the certified rounding bound.
#[derive(Debug, Clone, PartialEq)]
pub enum CExponent {
    Exact { p: u32, q: u32 },
    Approximate { value: f64 },
}

/// How far an approximate-mode value must sit from an integer.
const APPROX_INTEGER_GAP: f64 = 1e-12;

impl CExponent {
    /// Exact `c = p/q`; the fraction is reduced, then `p > q >= 2` is
    /// required.
    pub fn exact(p: u64, q: u64) -> Result<Self> {
        if p == 0 || q == 0 {
            return Err(Error::InvalidExponent("p and q must be positive".into()));
        }
        let g = gcd(p, q);
        let (p, q) = (p / g, q / g);
        if q < 2 {
            return Err(Error::InvalidExponent(format!(
                "c = {p}/{q} is an integer; c must not be a natural number"
            )));
        }
        if p <= q {
            return Err(Error::InvalidExponent(format!("c = {p}/{q} <= 1; c > 1 required")));
        }
        let (p, q) = (
            u32::try_from(p).map_err(|_| Error::InvalidExponent("p too large".into()))?,
            u32::try_from(q).map_err(|_| Error::InvalidExponent("q too large".into()))?,
        );
        Ok(CExponent::Exact { p, q })
    }

    /// Approximate real exponent, for irrational `c`.
    pub fn approximate(value: f64) -> Result<Self> {
        if !value.is_finite() || value <= 1.0 {
            return Err(Error::InvalidExponent(format!("c = {value} must be > 1")));
        }
        if (value - value.round()).abs() <= APPROX_INTEGER_GAP {
            return Err(Error::InvalidExponent(format!(
                "c = {value} is within {APPROX_INTEGER_GAP} of an integer"
            )));
        }
        Ok(CExponent::Approximate { value })
    }

    /// Parse `"p/q"` into an exact exponent.
    pub fn parse(text: &str) -> Result<Self> {
        let r = crate::real::parse_rat(text)
            .ok_or_else(|| Error::InvalidExponent(format!("cannot parse c from {text:?}")))?;
        if *r.numer() <= 0 {
            return Err(Error::InvalidExponent(format!("c = {text} must be positive")));
        }
        Self::exact(*r.numer() as u64, *r.denom() as u64)
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CExponent::Exact { .. })
    }

    /// `(p, q)` in exact mode.
    pub fn pq(&self) -> Option<(u32, u32)> {
        match self {
            CExponent::Exact { p, q } => Some((*p, *q)),
            CExponent::Approximate { .. } => None,
        }
    }

    /// `c` as an exact rational, when available.
    pub fn rational(&self) -> Option<Rat> {
        self.pq().map(|(p, q)| Rat::new(p as i64, q as i64))
    }

    /// `c` as a float.
    pub fn value(&self) -> f64 {
        match self {
            CExponent::Exact { p, q } => *p as f64 / *q as f64,
            CExponent::Approximate { value } => *value,
        }
    }

    /// `gamma = 1/c` as a float.
    pub fn gamma(&self) -> f64 {
        1.0 / self.value()
    }

    /// `gamma = 1/c` as an exact rational, when available.
    pub fn gamma_rational(&self) -> Option<Rat> {
        self.pq().map(|(p, q)| Rat::new(q as i64, p as i64))
    }
}

impl std::fmt::Display for CExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CExponent::Exact { p, q } => write!(f, "{p}/{q}"),
            CExponent::Approximate { value } => write!(f, "~{value}"),
        }
    }
}

impl std::str::FromStr for CExponent {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Integer k-th root: the unique `r` with `r^k <= x < (r+1)^k`.
///
/// Newton iteration from a floating-point guess, then a two-sided exact
/// verification. The verification is the correctness contract; the guess only
/// speeds things up.
pub fn integer_kth_root(x: &BigUint, k: u32) -> BigUint {
    assert!(k >= 1, "k must be positive");
    if k == 1 || x.is_zero() || x.is_one() {
        return x.clone();
    }
    let bits = x.bits();
    if u64::from(k) >= bits {
        // 2^k > x, so the root is 1.
        return BigUint::one();
    }

    // Initial guess, slightly inflated so Newton descends onto the root.
    let mut r = initial_guess(x, k);

    // Integer Newton: r' = ((k-1) r + x / r^(k-1)) / k, decreasing while
    // r > root.
    let kk = BigUint::from(k);
    let km1 = BigUint::from(k - 1);
    loop {
        let rk1 = r.pow(k - 1);
        if rk1.is_zero() {
            r = BigUint::one();
            break;
        }
        let next = (&km1 * &r + x / rk1) / &kk;
        if next >= r {
            break;
        }
        r = next;
    }

    // Two-sided exact verification.
    while r.pow(k) > *x {
        r -= 1u32;
    }
    let one = BigUint::one();
    while (&r + &one).pow(k) <= *x {
        r += 1u32;
    }
    debug_assert!(r.pow(k) <= *x && (&r + &one).pow(k) > *x);
    r
}

fn initial_guess(x: &BigUint, k: u32) -> BigUint {
    if let Some(v) = big_to_f64(x) {
        let g = v.powf(1.0 / k as f64);
        if g.is_finite() && g < 2f64.powi(63) {
            // Inflate past the true root to start Newton from above.
            return BigUint::from((g * (1.0 + 1e-9)) as u64 + 2);
        }
    }
    // Bit-length fallback: root < 2^(ceil(bits/k)).
    let shift = x.bits().div_ceil(u64::from(k));
    BigUint::one() << shift
}

fn big_to_f64(x: &BigUint) -> Option<f64> {
    let v = x.to_f64()?;
    v.is_finite().then_some(v)
}

/// `u128` fast path of [`integer_kth_root`].
pub fn kth_root_u128(x: u128, k: u32) -> u128 {
    assert!(k >= 1, "k must be positive");
    if k == 1 || x <= 1 {
        return x;
    }
    if k >= 128 {
        return 1;
    }
    let mut r = (x as f64).powf(1.0 / k as f64) as u128;
    if r < 1 {
        r = 1;
    }
    // The float guess is within a few units; fix up exactly.
    while pow_exceeds_u128(r, k, x) {
        r -= 1;
    }
    while !pow_exceeds_u128(r + 1, k, x) {
        r += 1;
    }
    r
}

/// `true` iff `base^exp > x` (overflow counts as exceeding).
#[inline]
fn pow_exceeds_u128(base: u128, exp: u32, x: u128) -> bool {
    match base.checked_pow(exp) {
        Some(v) => v > x,
        None => true,
    }
}

/// `n^p` as `u128` when it fits.
#[inline]
pub(crate) fn checked_pow_u128(n: u64, p: u32) -> Option<u128> {
    u128::from(n).checked_pow(p)
}

/// `floor(n^{p/q})` on the `u128` fast path; `None` when `n^p` overflows.
#[inline]
pub(crate) fn power_floor_fast(n: u64, p: u32, q: u32) -> Option<u128> {
    checked_pow_u128(n, p).map(|np| kth_root_u128(np, q))
}

/// `k = floor(n^c)`.
///
/// Exact mode guarantees `k^q <= n^p < (k+1)^q`. Approximate mode fails with
/// [`Error::AmbiguousFloor`] whenever the certified rounding interval around
/// `n^c` straddles an integer.
pub fn power_floor(n: u64, c: &CExponent) -> Result<BigUint> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be >= 1".into()));
    }
    match c {
        CExponent::Exact { p, q } => {
            if let Some(k) = power_floor_fast(n, *p, *q) {
                Ok(BigUint::from(k))
            } else {
                let np = BigUint::from(n).pow(*p);
                Ok(integer_kth_root(&np, *q))
            }
        }
        CExponent::Approximate { value } => {
            let (val, err) = approx_pow_with_error(n, *value);
            let lo = (val - err).floor();
            let hi = (val + err).floor();
            if lo != hi {
                return Err(Error::AmbiguousFloor(format!(
                    "n = {n}, c = {value}: n^c = {val} +- {err} straddles an integer"
                )));
            }
            BigUint::from_f64_checked(lo)
        }
    }
}

trait FromF64Checked: Sized {
    fn from_f64_checked(v: f64) -> Result<Self>;
}

impl FromF64Checked for BigUint {
    fn from_f64_checked(v: f64) -> Result<Self> {
        num_traits::FromPrimitive::from_f64(v)
            .ok_or_else(|| Error::InvalidParameter(format!("cannot convert {v} to an integer")))
    }
}

/// `n^c` in `f64` together with a certified absolute error bound.
///
/// Computed as `exp(c ln n)`; with `y = c ln n` the relative error of the
/// chain is at most `(2|y| + 2) eps` for faithfully rounded `ln`/`exp`.
pub(crate) fn approx_pow_with_error(n: u64, c: f64) -> (f64, f64) {
    if n == 1 {
        return (1.0, 0.0);
    }
    let y = c * (n as f64).ln();
    let val = y.exp();
    let err = val * (2.0 * y.abs() + 2.0) * f64::EPSILON;
    (val, err)
}

/// The unique `n` with `floor(n^c) = K`, if it exists.
///
/// Exact mode: `n` is the least integer with `n^p >= K^q`, accepted iff
/// `n^p < (K+1)^q`. In approximate mode an ambiguous boundary surfaces as
/// [`Error::AmbiguousFloor`].
pub fn interval_contains_integer(k: &BigUint, c: &CExponent) -> Result<Option<BigUint>> {
    if k.is_zero() {
        return Err(Error::InvalidParameter("K must be >= 1".into()));
    }
    match c {
        CExponent::Exact { p, q } => {
            if let Some(k128) = k.to_u128() {
                if let Some(n) = interval_contains_fast(k128, *p, *q) {
                    return Ok(n.map(BigUint::from));
                }
            }
            let kq = k.pow(*q);
            let r = integer_kth_root(&kq, *p);
            let n = if r.pow(*p) == kq { r } else { r + 1u32 };
            let next = (k + 1u32).pow(*q);
            Ok((n.pow(*p) < next).then_some(n))
        }
        CExponent::Approximate { value } => {
            let gamma = 1.0 / *value;
            let kf = big_to_f64(k)
                .ok_or_else(|| Error::ResourceLimit("K too large for approximate mode".into()))?;
            // lo = K^gamma, hi = (K+1)^gamma with certified error bounds.
            let (lo, lo_err) = approx_pow_f64(kf, gamma);
            let (hi, hi_err) = approx_pow_f64(kf + 1.0, gamma);
            let n_lo = (lo - lo_err).ceil();
            let n_hi = (lo + lo_err).ceil();
            if n_lo != n_hi {
                return Err(Error::AmbiguousFloor(format!(
                    "K = {k}: K^gamma = {lo} +- {lo_err} straddles an integer"
                )));
            }
            // gamma < 1, so the interval is shorter than 1 and the candidate
            // is unique.
            let n = n_hi;
            if n < hi - hi_err {
                Ok(Some(BigUint::from_f64_checked(n)?))
            } else if n >= hi + hi_err {
                Ok(None)
            } else {
                Err(Error::AmbiguousFloor(format!(
                    "K = {k}: candidate n = {n} vs (K+1)^gamma = {hi} +- {hi_err}"
                )))
            }
        }
    }
}

/// `u128` fast path of the interval test. Outer `None` means "did not fit";
/// the inner option is the answer.
pub(crate) fn interval_contains_fast(k: u128, p: u32, q: u32) -> Option<Option<u128>> {
    let kq = k.checked_pow(q)?;
    let next = (k + 1).checked_pow(q)?;
    let r = kth_root_u128(kq, p);
    let n = if r.checked_pow(p) == Some(kq) { r } else { r + 1 };
    match n.checked_pow(p) {
        Some(np) => Some((np < next).then_some(n)),
        None => Some(None),
    }
}

fn approx_pow_f64(base: f64, e: f64) -> (f64, f64) {
    let y = e * base.ln();
    let val = y.exp();
    let err = val * (2.0 * y.abs() + 2.0) * f64::EPSILON;
    (val, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: u64, q: u64) -> CExponent {
        CExponent::exact(p, q).unwrap()
    }

    #[test]
    fn exponent_invariants() {
        assert_eq!(c(3, 2).pq(), Some((3, 2)));
        // Reduction to lowest terms.
        assert_eq!(c(6, 4).pq(), Some((3, 2)));
        assert!(CExponent::exact(3, 1).is_err()); // integer c
        assert!(CExponent::exact(4, 2).is_err()); // reduces to 2/1
        assert!(CExponent::exact(2, 3).is_err()); // c < 1
        assert!(CExponent::exact(5, 5).is_err()); // c = 1
        assert!(CExponent::approximate(std::f64::consts::SQRT_2 + 1.0).is_ok());
        assert!(CExponent::approximate(3.0 + 1e-14).is_err());
        assert!(CExponent::approximate(0.5).is_err());
        assert_eq!(c(3, 2).gamma_rational(), Some(Rat::new(2, 3)));
    }

    #[test]
    fn parse_rejects_integer_c() {
        assert!(CExponent::parse("3/1").is_err());
        assert!(CExponent::parse("21/20").is_ok());
        assert_eq!(CExponent::parse("21/20").unwrap().to_string(), "21/20");
    }

    #[test]
    fn kth_root_examples() {
        assert_eq!(integer_kth_root(&BigUint::from(0u32), 5), BigUint::from(0u32));
        assert_eq!(integer_kth_root(&BigUint::from(1000u32), 2), BigUint::from(31u32));
        let x = BigUint::from(2u32).pow(64);
        let r = integer_kth_root(&x, 3);
        assert_eq!(r, BigUint::from(2_642_245u64));
        // Bracketing is the contract.
        assert!(r.pow(3) <= x && (&r + 1u32).pow(3) > x);
    }

    #[test]
    fn kth_root_u128_matches_big() {
        let cases: [(u128, u32); 6] = [
            (0, 3),
            (1, 7),
            (u128::MAX, 2),
            (u128::MAX, 127),
            (12_345_678_901_234_567_890, 5),
            (1 << 126, 42),
        ];
        for (x, k) in cases {
            let small = kth_root_u128(x, k);
            let big = integer_kth_root(&BigUint::from(x), k);
            assert_eq!(BigUint::from(small), big, "x={x} k={k}");
        }
    }

    #[test]
    fn power_floor_examples() {
        assert_eq!(power_floor(1, &c(3, 2)).unwrap(), BigUint::from(1u32));
        assert_eq!(power_floor(1, &c(17, 5)).unwrap(), BigUint::from(1u32));
        assert_eq!(power_floor(10, &c(3, 2)).unwrap(), BigUint::from(31u32));
        assert_eq!(power_floor(6, &c(3, 2)).unwrap(), BigUint::from(14u32));
    }

    #[test]
    fn power_floor_exactness_bracket() {
        for (p, q) in [(3u64, 2u64), (5, 4), (7, 2), (22, 7), (11, 6)] {
            let ce = c(p, q);
            for n in 1..300u64 {
                let k = power_floor(n, &ce).unwrap();
                let np = BigUint::from(n).pow(p as u32);
                assert!(k.pow(q as u32) <= np);
                assert!((&k + 1u32).pow(q as u32) > np);
            }
        }
    }

    #[test]
    fn power_floor_monotone() {
        let ce = c(7, 4);
        let mut prev = BigUint::from(0u32);
        for n in 1..2000u64 {
            let k = power_floor(n, &ce).unwrap();
            assert!(k >= prev);
            prev = k;
        }
    }

    #[test]
    fn interval_examples() {
        assert_eq!(
            interval_contains_integer(&BigUint::from(1u32), &c(3, 2)).unwrap(),
            Some(BigUint::from(1u32))
        );
        assert_eq!(
            interval_contains_integer(&BigUint::from(36u32), &c(3, 2)).unwrap(),
            Some(BigUint::from(11u32))
        );
        assert_eq!(interval_contains_integer(&BigUint::from(3u32), &c(3, 2)).unwrap(), None);
    }

    #[test]
    fn interval_round_trip() {
        // floor(n^c) = K  <=>  interval test returns n.
        let ce = c(5, 3);
        for k in 1u64..=10_000 {
            let kb = BigUint::from(k);
            match interval_contains_integer(&kb, &ce).unwrap() {
                Some(n) => {
                    let n = n.to_u64().unwrap();
                    assert_eq!(power_floor(n, &ce).unwrap(), kb, "K={k}");
                    // Least witness: n-1 maps below K.
                    if n > 1 {
                        assert!(power_floor(n - 1, &ce).unwrap() < kb);
                    }
                }
                None => {
                    // No n up to a safe bound hits K.
                    let bound = (k as f64).powf(3.0 / 5.0).ceil() as u64 + 2;
                    for n in 1..=bound {
                        assert_ne!(power_floor(n, &ce).unwrap(), kb, "K={k} n={n}");
                    }
                }
            }
        }
    }

    #[test]
    fn approximate_mode_agrees_when_unambiguous() {
        // pi > 1 is irrational; compare against the exact floor for a close
        // rational only where approximate mode commits to an answer.
        let ca = CExponent::approximate(1.5000000001).unwrap();
        let ce = c(3, 2);
        for n in 1..2000u64 {
            match power_floor(n, &ca) {
                Ok(k) => {
                    // The tiny perturbation of c moves n^c by ~1e-10 ln n; the
                    // floors agree unless the exact value is right at a jump.
                    let exact = power_floor(n, &ce).unwrap();
                    let diff = if k >= exact { &k - &exact } else { &exact - &k };
                    assert!(diff <= BigUint::from(1u32), "n={n}");
                }
                Err(Error::AmbiguousFloor(_)) => {}
                Err(e) => panic!("unexpected error {e}"),
            }
        }
    }

    #[test]
    fn approximate_mode_refuses_boundary() {
        // 4^1.5 = 8 exactly, so the certified interval around the float value
        // straddles the integer 8 and the call must refuse.
        let ca = CExponent::approximate(1.5).unwrap();
        match power_floor(4, &ca) {
            Err(Error::AmbiguousFloor(_)) => {}
            other => panic!("expected AmbiguousFloor, got {other:?}"),
        }
    }
}
