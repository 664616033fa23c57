//! Exact counting oracles for squares (and s-multiples of squares) in the
//! sequence `floor(n^c)`.
//!
//! `count_direct` scans `n` and costs O(N) power floors; `count_inverse`
//! walks `m` with `s m^2 <= N^c` and costs O(s^{-1/2} N^{c/2}) interval
//! tests. Both return identical values; the direct scan refuses ranges above
//! its ceiling and points the caller at the inverse oracle.

use std::collections::HashSet;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{
    integer_kth_root, interval_contains_fast, interval_contains_integer, power_floor,
    power_floor_fast, CExponent,
};
use crate::factor::{default_sieve, isqrt_u128, SquarefreeDecomposition};
use crate::summation::chunk_ranges;

/// Default ceiling on direct-scan power-floor evaluations.
pub const DIRECT_SCAN_CEILING: u64 = 100_000_000;

/// Which oracle produced a count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oracle {
    Direct,
    Inverse,
    Dyadic,
    Averaged,
}

impl Oracle {
    pub fn as_str(&self) -> &'static str {
        match self {
            Oracle::Direct => "direct",
            Oracle::Inverse => "inverse",
            Oracle::Dyadic => "dyadic",
            Oracle::Averaged => "averaged",
        }
    }
}

impl std::fmt::Display for Oracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An exact count together with its parameters and provenance.
///
/// `s` holds the fixed multiplier for per-s counts and the square-free bound
/// `S` for averaged counts.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub c: CExponent,
    pub s: u64,
    pub n: u64,
    pub value: u64,
    pub oracle: Oracle,
    pub elapsed_ms: f64,
}

/// `floor(n^c) = s * (square)` test for one `n`, on the `u128` fast path when
/// `n^p` fits.
fn hits_fixed_s(n: u64, c: &CExponent, s: u64) -> Result<bool> {
    if let Some((p, q)) = c.pq() {
        if let Some(k) = power_floor_fast(n, p, q) {
            return Ok(is_s_square(k, s));
        }
    }
    let k = power_floor(n, c)?;
    Ok(is_s_square_big(&k, s))
}

#[inline]
fn is_s_square(k: u128, s: u64) -> bool {
    let s = s as u128;
    if k == 0 || k % s != 0 {
        return false;
    }
    let t = k / s;
    let r = isqrt_u128(t);
    r >= 1 && r * r == t
}

fn is_s_square_big(k: &BigUint, s: u64) -> bool {
    use num_integer::Integer;
    use num_traits::Zero;
    let sb = BigUint::from(s);
    let (t, rem) = k.div_rem(&sb);
    if !rem.is_zero() || t.is_zero() {
        return false;
    }
    let r = crate::exact::integer_kth_root(&t, 2);
    &r * &r == t
}

/// `Q_c(s; N)`: the number of `1 <= n <= N` with `floor(n^c) = s m^2`.
pub fn count_direct(c: &CExponent, s: u64, n: u64) -> Result<CountResult> {
    count_direct_capped(c, s, n, DIRECT_SCAN_CEILING)
}

/// [`count_direct`] with an explicit scan ceiling.
pub fn count_direct_capped(c: &CExponent, s: u64, n: u64, ceiling: u64) -> Result<CountResult> {
    validate_sn(s, n)?;
    if n > ceiling {
        return Err(Error::ResourceLimit(format!(
            "direct scan of N = {n} exceeds the ceiling {ceiling}; use count_inverse"
        )));
    }
    let start = Instant::now();
    let value = count_range(c, s, 1, n)?;
    Ok(CountResult {
        c: c.clone(),
        s,
        n,
        value,
        oracle: Oracle::Direct,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Parallel exact count of hits over `lo..=hi` (inclusive).
fn count_range(c: &CExponent, s: u64, lo: u64, hi: u64) -> Result<u64> {
    if lo > hi {
        return Ok(0);
    }
    let partials: Vec<Result<u64>> = chunk_ranges(lo, hi)
        .into_par_iter()
        .map(|(a, b)| {
            let mut acc = 0u64;
            for n in a..=b {
                if hits_fixed_s(n, c, s)? {
                    acc += 1;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut total = 0u64;
    for p in partials {
        total += p?;
    }
    Ok(total)
}

/// `Q_c(s; N)` by iterating `m` while `s m^2 <= N^c` and testing whether the
/// interval `[(s m^2)^gamma, (s m^2 + 1)^gamma)` contains an integer `<= N`.
///
/// On the `u128` fast path the per-m interval tests collapse into a monotone
/// two-pointer walk: the least `n` with `n^p >= (s m^2)^q` only moves
/// forward, so each `m` costs an integer comparison and the root extraction
/// happens once per chunk.
pub fn count_inverse(c: &CExponent, s: u64, n: u64) -> Result<CountResult> {
    validate_sn(s, n)?;
    let start = Instant::now();
    let top = power_floor(n, c)?;
    let m_max = integer_kth_root(&(&top / s), 2)
        .to_u64()
        .ok_or_else(|| Error::ResourceLimit(format!("m range {} too large", &top / s)))?;

    // All powers appearing in the walk fit u128 iff these two do.
    let fast = c.pq().filter(|&(p, q)| {
        BigUint::from(n + 1).pow(p).to_u128().is_some()
            && (&top + 1u32).pow(q).to_u128().is_some()
    });

    let partials: Vec<Result<u64>> = chunk_ranges(1, m_max)
        .into_par_iter()
        .map(|(m_lo, m_hi)| match fast {
            Some((p, q)) => Ok(inverse_chunk_fast(p, q, s, n, m_lo, m_hi)),
            None => inverse_chunk_general(c, s, n, m_lo, m_hi),
        })
        .collect();
    let mut value = 0u64;
    for part in partials {
        value += part?;
    }
    Ok(CountResult {
        c: c.clone(),
        s,
        n,
        value,
        oracle: Oracle::Inverse,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Exact two-pointer walk over `m` in `m_lo..=m_hi`, counting `m` for which
/// some `n <= n_cap` has `floor(n^{p/q}) = s m^2`. All inputs are prechecked
/// to keep every power within `u128`.
fn inverse_chunk_fast(p: u32, q: u32, s: u64, n_cap: u64, m_lo: u64, m_hi: u64) -> u64 {
    let s = s as u128;
    let k_lo = s * (m_lo as u128) * (m_lo as u128);
    let kq_lo = k_lo.pow(q);
    let root = crate::exact::kth_root_u128(kq_lo, p);
    let mut n = if root.pow(p) == kq_lo { root } else { root + 1 };
    if n > n_cap as u128 {
        return 0; // the least candidate already exceeds N for all larger m
    }
    let mut np = n.pow(p);
    let mut count = 0u64;
    for m in m_lo..=m_hi {
        let k = s * (m as u128) * (m as u128);
        let kq = k.pow(q);
        while np < kq {
            n += 1;
            if n > n_cap as u128 {
                return count;
            }
            np = n.pow(p);
        }
        if np < (k + 1).pow(q) {
            count += 1;
        }
    }
    count
}

fn inverse_chunk_general(c: &CExponent, s: u64, n_cap: u64, m_lo: u64, m_hi: u64) -> Result<u64> {
    let nb = BigUint::from(n_cap);
    let mut count = 0u64;
    for m in m_lo..=m_hi {
        let k = BigUint::from(s) * BigUint::from(m) * BigUint::from(m);
        let hit = match (c.pq(), k.to_u128()) {
            (Some((p, q)), Some(k128)) => match interval_contains_fast(k128, p, q) {
                Some(found) => found.map(BigUint::from),
                None => interval_contains_integer(&k, c)?,
            },
            _ => interval_contains_integer(&k, c)?,
        };
        match hit {
            Some(w) if w <= nb => count += 1,
            // The least integer at or above (s m^2)^gamma grows with m; once
            // any witness clears N the rest of the chunk cannot hit.
            Some(w) if w > nb => break,
            _ => {}
        }
    }
    Ok(count)
}

/// `Q*_c(s; N)`: hits over the dyadic interval `N/2 < n <= N`.
pub fn count_dyadic(c: &CExponent, s: u64, n: u64) -> Result<CountResult> {
    validate_sn(s, n)?;
    if n < 2 {
        return Err(Error::InvalidParameter("dyadic count needs N >= 2".into()));
    }
    let start = Instant::now();
    let value = count_range(c, s, n / 2 + 1, n)?;
    Ok(CountResult {
        c: c.clone(),
        s,
        n,
        value,
        oracle: Oracle::Dyadic,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// Averaged count over square-free `s <= S`: one pass over `n <= N`
/// decomposing `floor(n^c) = s m^2` and testing `s <= S`.
pub fn count_averaged(c: &CExponent, s_cap: u64, n: u64) -> Result<CountResult> {
    if s_cap == 0 || n == 0 {
        return Err(Error::InvalidParameter("S and N must be >= 1".into()));
    }
    check_meaningful(c, s_cap, n)?;
    let start = Instant::now();
    let partials: Vec<Result<u64>> = chunk_ranges(1, n)
        .into_par_iter()
        .map(|(a, b)| {
            let mut acc = 0u64;
            for i in a..=b {
                if squarefree_part_of_floor(i, c)?.s <= s_cap {
                    acc += 1;
                }
            }
            Ok(acc)
        })
        .collect();
    let mut value = 0u64;
    for p in partials {
        value += p?;
    }
    Ok(CountResult {
        c: c.clone(),
        s: s_cap,
        n,
        value,
        oracle: Oracle::Averaged,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

/// `S <= N^c`, exactly in exact mode.
fn check_meaningful(c: &CExponent, s_cap: u64, n: u64) -> Result<()> {
    let ok = match c.pq() {
        Some((p, q)) => BigUint::from(s_cap).pow(q) <= BigUint::from(n).pow(p),
        None => (s_cap as f64).ln() <= c.value() * (n as f64).ln() + 1e-12,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::MeaninglessRange(format!(
            "S = {s_cap} > N^c for N = {n}, c = {c}; only S <= N^c is meaningful"
        )))
    }
}

fn squarefree_part_of_floor(n: u64, c: &CExponent) -> Result<SquarefreeDecomposition> {
    let k64 = match c.pq().and_then(|(p, q)| power_floor_fast(n, p, q)) {
        Some(k) => u64::try_from(k).map_err(|_| floor_too_large(n, c))?,
        None => power_floor(n, c)?.to_u64().ok_or_else(|| floor_too_large(n, c))?,
    };
    default_sieve().squarefree_part(k64)
}

fn floor_too_large(n: u64, c: &CExponent) -> Error {
    Error::FactorizationLimit(format!("floor({n}^{c}) exceeds the 64-bit factorization range"))
}

/// Number of distinct square-free parts among `floor(n^c)`, `n <= N`; a lower
/// bound witness for the count of distinct quadratic fields.
pub fn distinct_squarefree_parts(c: &CExponent, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    let partials: Vec<Result<HashSet<u64>>> = chunk_ranges(1, n)
        .into_par_iter()
        .map(|(a, b)| {
            let mut set = HashSet::new();
            for i in a..=b {
                set.insert(squarefree_part_of_floor(i, c)?.s);
            }
            Ok(set)
        })
        .collect();
    let mut all = HashSet::new();
    for p in partials {
        all.extend(p?);
    }
    Ok(all.len() as u64)
}

/// The unconditional envelope `min(N, s^{-1/2} N^{c/2})`.
pub fn trivial_bound(c: &CExponent, s: u64, n: u64) -> f64 {
    let nf = n as f64;
    nf.min((s as f64).powf(-0.5) * nf.powf(c.value() / 2.0))
}

/// Exact form of the trivial-bound check: `value <= N` and
/// `(value^2 s)^q <= N^p`.
pub fn satisfies_trivial_bound(result: &CountResult) -> bool {
    if result.value > result.n {
        return false;
    }
    if result.value == 0 {
        return true;
    }
    match result.c.pq() {
        Some((p, q)) => {
            let lhs = (BigUint::from(result.value).pow(2) * BigUint::from(result.s)).pow(q);
            lhs <= BigUint::from(result.n).pow(p)
        }
        None => (result.value as f64) <= trivial_bound(&result.c, result.s, result.n) + 1e-9,
    }
}

fn validate_sn(s: u64, n: u64) -> Result<()> {
    if s == 0 || n == 0 {
        return Err(Error::InvalidParameter("s and N must be >= 1".into()));
    }
    Ok(())
}
