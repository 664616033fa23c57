//! Exact-rational exponent-pair algebra: the van der Corput A and B
//! processes, closure enumeration, and objective-driven search over the
//! resulting error exponents.

use std::collections::BTreeMap;

use crate::asymptotics::{error_profile, ErrorProfile};
use crate::error::{Error, Result};
use crate::exact::CExponent;
use crate::real::{rat_string, Rat, Real};

/// Cap on closure-enumeration depth.
pub const MAX_DEPTH: u32 = 24;

/// An exponent pair `(kappa, lambda)` with `0 <= kappa <= 1/2 <= lambda <= 1`,
/// carrying the word in `{A, B}` that produced it from a named seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExponentPair {
    kappa: Rat,
    lambda: Rat,
    derivation: String,
}

impl ExponentPair {
    pub fn new(kappa: Rat, lambda: Rat, derivation: impl Into<String>) -> Result<Self> {
        let half = Rat::new(1, 2);
        if kappa < Rat::from_integer(0) || kappa > half || lambda < half || lambda > Rat::from_integer(1)
        {
            return Err(Error::InvariantViolation(format!(
                "({}, {}) violates 0 <= kappa <= 1/2 <= lambda <= 1",
                rat_string(&kappa),
                rat_string(&lambda)
            )));
        }
        Ok(Self {
            kappa,
            lambda,
            derivation: derivation.into(),
        })
    }

    /// The trivial pair (0, 1).
    pub fn trivial() -> Self {
        Self {
            kappa: Rat::from_integer(0),
            lambda: Rat::from_integer(1),
            derivation: "(0,1)".into(),
        }
    }

    /// The classical pair (1/2, 1/2) = B(0, 1).
    pub fn half_half() -> Self {
        Self {
            kappa: Rat::new(1, 2),
            lambda: Rat::new(1, 2),
            derivation: "B(0,1)".into(),
        }
    }

    /// The Bombieri-Iwaniec pair (9/56, 37/56), installed as an extra seed;
    /// it is not reachable from (0, 1) by the A/B processes.
    pub fn bombieri_iwaniec() -> Self {
        Self {
            kappa: Rat::new(9, 56),
            lambda: Rat::new(37, 56),
            derivation: "(9/56,37/56)".into(),
        }
    }

    pub fn kappa(&self) -> Rat {
        self.kappa
    }

    pub fn lambda(&self) -> Rat {
        self.lambda
    }

    pub fn derivation(&self) -> &str {
        &self.derivation
    }

    /// A process: `(k, l) -> (k/(2k+2), 1/2 + l/(2k+2))`.
    pub fn a_process(&self) -> ExponentPair {
        let denom = self.kappa * Rat::from_integer(2) + Rat::from_integer(2);
        ExponentPair {
            kappa: self.kappa / denom,
            lambda: Rat::new(1, 2) + self.lambda / denom,
            derivation: format!("A{}", self.derivation),
        }
    }

    /// B process: `(k, l) -> (l - 1/2, k + 1/2)`; an involution on the valid
    /// region.
    pub fn b_process(&self) -> Result<ExponentPair> {
        ExponentPair::new(
            self.lambda - Rat::new(1, 2),
            self.kappa + Rat::new(1, 2),
            format!("B{}", self.derivation),
        )
    }

    pub fn key(&self) -> (Rat, Rat) {
        (self.kappa, self.lambda)
    }
}

impl std::fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", rat_string(&self.kappa), rat_string(&self.lambda))
    }
}

/// Deduplicated closure of `seeds` under words of length at most `depth` in
/// `{A, B}`, each pair keeping its lexicographically least derivation.
/// Output is sorted by `(kappa, lambda)`.
pub fn enumerate_pairs(seeds: &[ExponentPair], depth: u32) -> Result<Vec<ExponentPair>> {
    if depth > MAX_DEPTH {
        return Err(Error::InvalidParameter(format!(
            "depth {depth} exceeds the cap {MAX_DEPTH}"
        )));
    }
    let mut best: BTreeMap<(Rat, Rat), String> = BTreeMap::new();
    for seed in seeds {
        insert_min(&mut best, seed.key(), seed.derivation().to_string());
    }
    let mut frontier: Vec<ExponentPair> = seeds.to_vec();
    for _ in 0..depth {
        let mut next = Vec::new();
        for pair in &frontier {
            let a = pair.a_process();
            if insert_min(&mut best, a.key(), a.derivation.clone()) {
                next.push(a);
            }
            if let Ok(b) = pair.b_process() {
                if insert_min(&mut best, b.key(), b.derivation.clone()) {
                    next.push(b);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    Ok(best
        .into_iter()
        .map(|((kappa, lambda), derivation)| ExponentPair {
            kappa,
            lambda,
            derivation,
        })
        .collect())
}

/// Insert or improve the stored derivation; returns true when the pair is
/// new.
fn insert_min(map: &mut BTreeMap<(Rat, Rat), String>, key: (Rat, Rat), word: String) -> bool {
    match map.get_mut(&key) {
        None => {
            map.insert(key, word);
            true
        }
        Some(existing) => {
            if word.len() < existing.len() || (word.len() == existing.len() && word < *existing) {
                *existing = word;
            }
            false
        }
    }
}

/// Minimization objective for [`search_min_theta`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Objective {
    Theta1,
    Theta2,
    MaxTheta,
}

/// The pair in the closure of `seeds` minimizing the chosen Theorem-style
/// error exponent at `c`; ties break toward smaller kappa, then lambda.
pub fn search_min_theta(
    c: &CExponent,
    seeds: &[ExponentPair],
    depth: u32,
    objective: Objective,
) -> Result<(ExponentPair, ErrorProfile)> {
    let pairs = enumerate_pairs(seeds, depth)?;
    let mut best: Option<(Rat, ExponentPair, ErrorProfile)> = None;
    for pair in pairs {
        let profile = error_profile(c, &pair)?;
        let score = match objective {
            Objective::Theta1 => profile.theta1,
            Objective::Theta2 => profile.theta2,
            Objective::MaxTheta => profile.theta1.max(profile.theta2),
        };
        let better = match &best {
            None => true,
            Some((s, p, _)) => {
                score < *s
                    || (score == *s
                        && (pair.kappa < p.kappa || (pair.kappa == p.kappa && pair.lambda < p.lambda)))
            }
        };
        if better {
            best = Some((score, pair, profile));
        }
    }
    best.map(|(_, p, prof)| (p, prof))
        .ok_or_else(|| Error::InvalidParameter("no seeds supplied".into()))
}

/// Single exponential-sum bound `(h s^gamma L^{2 gamma - 1})^kappa L^lambda`
/// for the dyadic block `(L, 2L]`.
pub fn single_sum_bound(h: u64, s: u64, c: &CExponent, l: u64, pair: &ExponentPair) -> f64 {
    let gamma = c.gamma();
    let lf = l as f64;
    let inner = h as f64 * (s as f64).powf(gamma) * lf.powf(2.0 * gamma - 1.0);
    inner.powf(f64::from_rat(&pair.kappa)) * lf.powf(f64::from_rat(&pair.lambda))
}
