//! Factorization support: smallest-prime-factor sieve, deterministic
//! Miller-Rabin, Brent's variant of Pollard rho, square-free decompositions
//! and the Moebius function.
//!
//! The shared sieve is built once behind a `LazyLock` and is immutable
//! afterwards, so every operation here is safe to call concurrently.

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Default smallest-prime-factor sieve limit.
pub const DEFAULT_SIEVE_LIMIT: u32 = 10_000_000;

/// Hard cap on Pollard-rho iterations per split attempt.
const RHO_ITERATION_CAP: u64 = 1 << 22;

/// Ceiling (on `2P`) for dyadic prime enumeration.
pub const DYADIC_PRIME_CEILING: u64 = 100_000_000;

static DEFAULT_SIEVE: LazyLock<FactorSieve> =
    LazyLock::new(|| FactorSieve::new(DEFAULT_SIEVE_LIMIT));

/// The process-wide sieve at [`DEFAULT_SIEVE_LIMIT`].
pub fn default_sieve() -> &'static FactorSieve {
    &DEFAULT_SIEVE
}

/// `k = s * m^2` with `s` square-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub k: u64,
    /// Square-free part.
    pub s: u64,
    pub m: u64,
}

/// Linear sieve holding smallest prime factors up to a limit, plus the prime
/// list it produces.
pub struct FactorSieve {
    limit: u32,
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl FactorSieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes = Vec::new();
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let si = spf[i];
            for &p in &primes {
                let ip = i * p as usize;
                if p > si || ip > n {
                    break;
                }
                spf[ip] = p;
            }
        }
        Self { limit, spf, primes }
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Prime factorization `k = prod p_i^{e_i}` with ascending `p_i`.
    pub fn factorize(&self, k: u64) -> Result<Vec<(u64, u32)>> {
        if k == 0 {
            return Err(Error::InvalidParameter("cannot factor 0".into()));
        }
        let mut out: Vec<(u64, u32)> = Vec::new();
        let mut rest = k;
        if rest <= self.limit as u64 {
            self.factor_by_spf(rest as u32, &mut out);
            return Ok(out);
        }
        // Trial division by sieved primes up to cbrt(k); with the default
        // sieve the cofactor then has at most two prime factors, and the
        // recursive rho fallback covers smaller custom sieves as well.
        let cbrt = crate::exact::kth_root_u128(rest as u128, 3) as u64 + 1;
        for &p in &self.primes {
            let p = p as u64;
            if p > cbrt || p * p > rest {
                break;
            }
            if rest % p == 0 {
                let mut e = 0;
                while rest % p == 0 {
                    rest /= p;
                    e += 1;
                }
                out.push((p, e));
                if rest <= self.limit as u64 {
                    break;
                }
            }
        }
        if rest > 1 {
            if rest <= self.limit as u64 {
                self.factor_by_spf(rest as u32, &mut out);
            } else {
                factor_no_small_divisors(rest, &mut out)?;
            }
        }
        out.sort_unstable_by_key(|&(p, _)| p);
        let mut merged: Vec<(u64, u32)> = Vec::with_capacity(out.len());
        for (p, e) in out {
            match merged.last_mut() {
                Some(last) if last.0 == p => last.1 += e,
                _ => merged.push((p, e)),
            }
        }
        Ok(merged)
    }

    fn factor_by_spf(&self, mut k: u32, out: &mut Vec<(u64, u32)>) {
        while k > 1 {
            let p = self.spf[k as usize];
            let mut e = 0;
            while k % p == 0 {
                k /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
    }

    /// Square-free decomposition `k = s * m^2`.
    pub fn squarefree_part(&self, k: u64) -> Result<SquarefreeDecomposition> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be >= 1".into()));
        }
        let mut s = 1u64;
        let mut m = 1u64;
        for (p, e) in self.factorize(k)? {
            if e % 2 == 1 {
                s *= p;
            }
            m *= p.pow(e / 2);
        }
        Ok(SquarefreeDecomposition { k, s, m })
    }

    /// Moebius function.
    pub fn mobius(&self, n: u64) -> Result<i32> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be >= 1".into()));
        }
        let mut sign = 1;
        for (_, e) in self.factorize(n)? {
            if e >= 2 {
                return Ok(0);
            }
            sign = -sign;
        }
        Ok(sign)
    }

    /// `Some(true/false)` when `n` is within deterministic reach (always, for
    /// `u64`).
    pub fn is_prime(&self, n: u64) -> bool {
        if n <= self.limit as u64 {
            return n >= 2 && self.spf[n as usize] == n as u32;
        }
        miller_rabin_u64(n)
    }
}

/// Factor a cofactor with no small prime divisors (primality test, perfect
/// squares, then recursive rho splits).
fn factor_no_small_divisors(n: u64, out: &mut Vec<(u64, u32)>) -> Result<()> {
    if n == 1 {
        return Ok(());
    }
    if miller_rabin_u64(n) {
        out.push((n, 1));
        return Ok(());
    }
    let r = isqrt_u64(n);
    if r * r == n {
        let before = out.len();
        factor_no_small_divisors(r, out)?;
        for entry in &mut out[before..] {
            entry.1 *= 2;
        }
        return Ok(());
    }
    let d = pollard_rho(n)?;
    factor_no_small_divisors(d, out)?;
    factor_no_small_divisors(n / d, out)?;
    Ok(())
}

/// Square-free decomposition via the default sieve.
pub fn squarefree_part(k: u64) -> Result<SquarefreeDecomposition> {
    default_sieve().squarefree_part(k)
}

/// Moebius function via the default sieve.
pub fn mobius(n: u64) -> Result<i32> {
    default_sieve().mobius(n)
}

/// Square-free indicator table for `0..=limit` (index 0 unused, set false).
pub fn squarefree_flags(limit: u64) -> Vec<bool> {
    let n = limit as usize;
    let mut flags = vec![true; n + 1];
    if n >= 1 {
        flags[0] = false;
    }
    let mut d = 2u64;
    while d * d <= limit {
        let dd = (d * d) as usize;
        let mut j = dd;
        while j <= n {
            flags[j] = false;
            j += dd;
        }
        d += 1;
    }
    flags
}

/// Primes in `(p_low, 2 * p_low]` by a segmented sieve.
pub fn primes_in_dyadic(p_low: u64) -> Result<Vec<u64>> {
    if p_low < 2 {
        return Err(Error::InvalidParameter("P must be >= 2".into()));
    }
    let hi = 2 * p_low;
    if hi > DYADIC_PRIME_CEILING {
        return Err(Error::ResourceLimit(format!(
            "2P = {hi} exceeds the dyadic prime ceiling {DYADIC_PRIME_CEILING}"
        )));
    }
    segmented_primes(p_low + 1, hi)
}

/// Primes in `[lo, hi]` by a segmented sieve over the default prime table.
pub fn segmented_primes(lo: u64, hi: u64) -> Result<Vec<u64>> {
    if hi < lo {
        return Ok(Vec::new());
    }
    let root = isqrt_u64(hi);
    let sieve = default_sieve();
    if root > sieve.limit() as u64 {
        return Err(Error::ResourceLimit(format!(
            "sqrt({hi}) exceeds the base sieve limit {}",
            sieve.limit()
        )));
    }
    let lo = lo.max(2);
    let len = (hi - lo + 1) as usize;
    let mut composite = vec![false; len];
    for &p in sieve.primes() {
        let p = p as u64;
        if p > root {
            break;
        }
        let mut start = lo.div_ceil(p) * p;
        if start == p {
            start += p; // keep p itself prime
        }
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
    }
    Ok((0..len)
        .filter(|&i| !composite[i])
        .map(|i| lo + i as u64)
        .collect())
}

pub(crate) fn isqrt_u64(x: u64) -> u64 {
    let mut r = (x as f64).sqrt() as u64;
    while r > 0 && r.checked_mul(r).map_or(true, |rr| rr > x) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|rr| rr <= x) {
        r += 1;
    }
    r
}

pub(crate) fn isqrt_u128(x: u128) -> u128 {
    crate::exact::kth_root_u128(x, 2)
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for `u64` (fixed witness set).
pub fn miller_rabin_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..s - 1 {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Pollard rho (Floyd cycle detection) with a deterministic parameter
/// schedule and a hard iteration cap.
fn pollard_rho(n: u64) -> Result<u64> {
    debug_assert!(n > 1 && n % 2 != 0 && !miller_rabin_u64(n));
    for c in 1..64u64 {
        if let Some(d) = rho_attempt(n, c) {
            return Ok(d);
        }
    }
    Err(Error::FactorizationLimit(format!(
        "Pollard rho exhausted its iteration budget on {n}"
    )))
}

fn rho_attempt(n: u64, c: u64) -> Option<u64> {
    let f = |x: u64| (mulmod(x, x, n) + c) % n;
    let mut x = 2u64;
    let mut y = 2u64;
    let mut d = 1u64;
    let mut count = 0u64;
    while d == 1 {
        x = f(x);
        y = f(f(y));
        d = gcd_u64(x.abs_diff(y), n);
        count += 1;
        if count > RHO_ITERATION_CAP {
            return None;
        }
    }
    (d != n).then_some(d)
}

fn gcd_u64(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
