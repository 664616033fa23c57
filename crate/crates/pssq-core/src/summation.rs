//! Compensated summation and deterministic parallel reduction.
//!
//! All floating sums in this crate go through [`KahanSum`] or
//! [`par_sum_chunked`]. The parallel form splits the index range into
//! fixed-size chunks, Kahan-sums each chunk, and folds the chunk totals in
//! index order, so the result is bit-identical for any worker count.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::real::Real;

/// Fixed chunk length used by the deterministic parallel reductions.
pub const CHUNK: u64 = 1 << 14;

/// Kahan compensated accumulator.
#[derive(Debug, Clone, Copy)]
pub struct KahanSum<T: Real> {
    sum: T,
    compensation: T,
}

impl<T: Real> Default for KahanSum<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> KahanSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let y = value - self.compensation;
        let t = self.sum + y;
        self.compensation = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> T {
        self.sum
    }

    pub fn sum_iter<I: IntoIterator<Item = T>>(iter: I) -> T {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

/// Kahan accumulator for complex values (independent real/imaginary tracks).
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanComplex {
    re: KahanSum<f64>,
    im: KahanSum<f64>,
}

impl KahanComplex {
    pub fn new() -> Self {
        Self {
            re: KahanSum::new(),
            im: KahanSum::new(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: Complex64) {
        self.re.add(value.re);
        self.im.add(value.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }
}

/// Deterministic parallel sum of `f(i)` for `i` in `lo..=hi`.
///
/// Chunk boundaries depend only on the range, and the per-chunk partial sums
/// are folded in ascending chunk order.
pub fn par_sum_chunked<T, F>(lo: u64, hi: u64, f: F) -> T
where
    T: Real,
    F: Fn(u64) -> T + Sync,
{
    if lo > hi {
        return T::zero();
    }
    let partials: Vec<T> = chunk_ranges(lo, hi)
        .into_par_iter()
        .map(|(a, b)| {
            let mut acc = KahanSum::new();
            for i in a..=b {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    let mut total = KahanSum::new();
    for p in partials {
        total.add(p);
    }
    total.value()
}

/// Deterministic parallel complex sum of `f(i)` for `i` in `lo..=hi`.
pub fn par_sum_complex<F>(lo: u64, hi: u64, f: F) -> Complex64
where
    F: Fn(u64) -> Complex64 + Sync,
{
    if lo > hi {
        return Complex64::new(0.0, 0.0);
    }
    let partials: Vec<Complex64> = chunk_ranges(lo, hi)
        .into_par_iter()
        .map(|(a, b)| {
            let mut acc = KahanComplex::new();
            for i in a..=b {
                acc.add(f(i));
            }
            acc.value()
        })
        .collect();
    let mut re = KahanSum::new();
    let mut im = KahanSum::new();
    for p in partials {
        re.add(p.re);
        im.add(p.im);
    }
    Complex64::new(re.value(), im.value())
}

/// Deterministic parallel integer count: sum of `f(i)` over `lo..=hi`.
pub fn par_count<F>(lo: u64, hi: u64, f: F) -> u64
where
    F: Fn(u64) -> u64 + Sync,
{
    if lo > hi {
        return 0;
    }
    chunk_ranges(lo, hi)
        .into_par_iter()
        .map(|(a, b)| (a..=b).map(&f).sum::<u64>())
        .sum()
}

/// Fixed-size disjoint chunks covering `lo..=hi` (inclusive bounds).
pub fn chunk_ranges(lo: u64, hi: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut a = lo;
    while a <= hi {
        let b = hi.min(a + (CHUNK - 1));
        out.push((a, b));
        if b == u64::MAX {
            break;
        }
        a = b + 1;
    }
    out
}
