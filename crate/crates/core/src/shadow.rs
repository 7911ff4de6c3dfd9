//! Cascade (k-binomial) representations and the shadow functions built on
//! them, plus the inequalities they give for odd squarefree counts.
//!
//! Every n ≥ 1 has a unique expansion
//! n = C(a_k, k) + C(a_{k−1}, k−1) + ⋯ + C(a_i, i) with a_k > ⋯ > a_i ≥ i ≥ 1.
//! The lower shadow ∂_{k−1}(n) lowers every bottom index by one; the upper
//! shadow ∂^{k−1}(n) lowers both indices by one. Both vanish at n = 0.

use num_bigint::BigUint;
use serde::Serialize;

use crate::betti::{betti_delta, f_vector_delta};
use crate::error::{Error, Result};
use crate::number::WeightCounters;

/// C(a, b) in `u128`, or `None` if it does not fit. C(a, b) = 0 for b > a.
pub fn binomial(a: u64, b: u64) -> Option<u128> {
    if b > a {
        return Some(0);
    }
    let b = b.min(a - b);
    let mut c: u128 = 1;
    for i in 0..b {
        // c = C(a, i) here, and C(a, i)·(a − i) is divisible by i + 1
        c = c.checked_mul((a - i) as u128)? / (i + 1) as u128;
    }
    Some(c)
}

/// C(a, b) without any size limit.
pub fn binomial_big(a: u64, b: u64) -> BigUint {
    if b > a {
        return BigUint::ZERO;
    }
    let b = b.min(a - b);
    let mut c = BigUint::from(1u32);
    for i in 0..b {
        c *= a - i;
        c /= i + 1;
    }
    c
}

/// Digits `(a_j, j)` of the k-cascade of n, j descending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CascadeRep {
    pub n: u64,
    pub k: u32,
    pub digits: Vec<(u64, u32)>,
}

impl CascadeRep {
    /// Σ C(a_j, j), exactly.
    pub fn value(&self) -> BigUint {
        self.digits
            .iter()
            .map(|&(a, j)| binomial_big(a, j as u64))
            .sum()
    }

    /// a_k > a_{k−1} > ⋯ > a_i ≥ i ≥ 1 with consecutive j starting at k.
    pub fn is_well_formed(&self) -> bool {
        let indices_ok = self
            .digits
            .iter()
            .enumerate()
            .all(|(t, &(_, j))| j as u64 + t as u64 == self.k as u64 && j >= 1);
        let decreasing = self.digits.windows(2).all(|w| w[0].0 > w[1].0);
        let floor = self.digits.last().is_none_or(|&(a, j)| a >= j as u64);
        indices_ok && decreasing && floor
    }
}

fn check_k(k: u32) -> Result<()> {
    if k == 0 {
        Err(Error::Domain("cascade index k must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// Largest a with C(a, j) ≤ bound, for bound ≥ 1.
fn largest_top(bound: u64, j: u32) -> u64 {
    let j64 = j as u64;
    // C(a, j) ≥ a − j + 1 for a ≥ j, so a ≤ bound + j − 1
    let (mut lo, mut hi) = (j64, bound.saturating_add(j64 - 1));
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        match binomial(mid, j64) {
            Some(c) if c <= bound as u128 => lo = mid,
            _ => hi = mid - 1,
        }
    }
    lo
}

/// The k-cascade of n, built greedily from the largest binomial down.
pub fn cascade(n: u64, k: u32) -> Result<CascadeRep> {
    check_k(k)?;
    let mut digits = Vec::new();
    let mut rest = n;
    let mut j = k;
    while rest > 0 && j >= 1 {
        let a = largest_top(rest, j);
        rest -= binomial(a, j as u64).expect("bounded by rest") as u64;
        digits.push((a, j));
        j -= 1;
    }
    debug_assert_eq!(rest, 0);
    Ok(CascadeRep { n, k, digits })
}

/// ∂_{k−1}(n) = Σ C(a_j, j − 1) over the k-cascade of n.
pub fn lower_shadow(n: u64, k: u32) -> Result<u128> {
    let rep = cascade(n, k)?;
    Ok(rep
        .digits
        .iter()
        .map(|&(a, j)| binomial(a, j as u64 - 1).expect("at most k·n"))
        .sum())
}

/// ∂^{k−1}(n) = Σ C(a_j − 1, j − 1) over the k-cascade of n.
pub fn upper_shadow(n: u64, k: u32) -> Result<u128> {
    let rep = cascade(n, k)?;
    Ok(rep
        .digits
        .iter()
        .map(|&(a, j)| binomial(a - 1, j as u64 - 1).expect("at most n"))
        .sum())
}

/// One k of the two shadow inequalities on odd squarefree counts:
/// `∂_k(σ_{k+1}^odd(n)) ≤ σ_k^odd(n/2)` and
/// `∂^k(σ_{2k+2}^odd(n) + σ_{2k+1}^odd(n)) ≤ σ_{2k}^odd(n/2) + σ_{2k−1}^odd(n/2)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShadowRow {
    pub k: u32,
    pub lower_lhs: u128,
    pub lower_rhs: u128,
    pub upper_lhs: u128,
    pub upper_rhs: u128,
}

impl ShadowRow {
    pub fn lower_slack(&self) -> i128 {
        self.lower_rhs as i128 - self.lower_lhs as i128
    }

    pub fn upper_slack(&self) -> i128 {
        self.upper_rhs as i128 - self.upper_lhs as i128
    }

    pub fn holds(&self) -> bool {
        self.lower_slack() >= 0 && self.upper_slack() >= 0
    }
}

/// Largest k worth checking at n: beyond it every count in both
/// inequalities is zero.
fn admissible_k(n: u64, counters: &WeightCounters) -> u32 {
    counters
        .top_odd_weight(n)
        .map_or(1, |w| w as u32 + 1)
        .max(1)
}

/// Both shadow inequalities for every admissible k ≥ 1.
pub fn verify_shadow_inequalities(n: u64, counters: &WeightCounters) -> Result<Vec<ShadowRow>> {
    counters.check(n)?;
    let odd = |w: i64, x: u64| counters.sigma_k_odd(w, x);
    let half = n / 2;
    (1..=admissible_k(n, counters))
        .map(|k| {
            let ki = k as i64;
            Ok(ShadowRow {
                k,
                lower_lhs: lower_shadow(odd(ki + 1, n), k + 1)?,
                lower_rhs: odd(ki, half) as u128,
                upper_lhs: upper_shadow(odd(2 * ki + 2, n) + odd(2 * ki + 1, n), k + 1)?,
                upper_rhs: (odd(2 * ki, half) + odd(2 * ki - 1, half)) as u128,
            })
        })
        .collect()
}

/// χ_{k−1} two ways: the alternating tail Σ_{j≥k} (−1)^{j−k}(f_j − β_j) of
/// Δ_n, and the closed form σ_k^odd(⌊n/2⌋).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ChiEvaluation {
    pub n: u64,
    pub k: u32,
    pub alternating: i64,
    pub closed_form: u64,
}

impl ChiEvaluation {
    pub fn agrees(&self) -> bool {
        self.alternating == self.closed_form as i64
    }
}

pub fn chi_truncated(n: u64, k: u32, counters: &WeightCounters) -> Result<ChiEvaluation> {
    let f = f_vector_delta(n, counters)?;
    let b = betti_delta(n, counters)?;
    let top = f.values().len().max(b.values().len()) as i64;
    let alternating = (k as i64..top)
        .map(|j| {
            let term = f.get(j) as i64 - b.get(j) as i64;
            if (j - k as i64) % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum();
    Ok(ChiEvaluation {
        n,
        k,
        alternating,
        closed_form: counters.sigma_k_odd(k as i64, n / 2),
    })
}

/// One k of the f/β relations on Δ_n:
/// `∂_k(χ_k + β_k) ≤ χ_{k−1}` and `∂^k(f_{2k+1} + β_{2k}) ≤ f_{2k−1} − β_{2k−1}`,
/// with the identities that turn them into the odd-count inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FBetaRow {
    pub k: u32,
    pub first_lhs: Option<u128>,
    pub first_rhs: i64,
    pub second_lhs: Option<u128>,
    pub second_rhs: i64,
    /// χ_k + β_k = σ_{k+1}^odd(n)
    pub first_identity: bool,
    /// f_{2k+1} + β_{2k} = σ_{2k+2}^odd(n) + σ_{2k+1}^odd(n) and
    /// f_{2k−1} − β_{2k−1} = σ_{2k−1}^odd(n/2) + σ_{2k}^odd(n/2)
    pub second_identity: bool,
}

impl FBetaRow {
    pub fn holds(&self) -> bool {
        let le = |lhs: Option<u128>, rhs: i64| lhs.is_some_and(|l| rhs >= 0 && l <= rhs as u128);
        le(self.first_lhs, self.first_rhs)
            && le(self.second_lhs, self.second_rhs)
            && self.first_identity
            && self.second_identity
    }
}

pub fn verify_fbeta_relations(n: u64, counters: &WeightCounters) -> Result<Vec<FBetaRow>> {
    let f = f_vector_delta(n, counters)?;
    let b = betti_delta(n, counters)?;
    let odd = |w: i64, x: u64| counters.sigma_k_odd(w, x) as i64;
    let half = n / 2;
    let shadow_arg = |v: i64| u64::try_from(v).ok();
    (1..=admissible_k(n, counters))
        .map(|k| {
            let ki = k as i64;
            let chi_k = chi_truncated(n, k + 1, counters)?.alternating;
            let chi_km1 = chi_truncated(n, k, counters)?.alternating;
            let beta = |j: i64| b.get(j) as i64;
            let face = |j: i64| f.get(j) as i64;
            let first_arg = chi_k + beta(ki);
            let second_arg = face(2 * ki + 1) + beta(2 * ki);
            let second_rhs = face(2 * ki - 1) - beta(2 * ki - 1);
            Ok(FBetaRow {
                k,
                first_lhs: shadow_arg(first_arg)
                    .map(|v| lower_shadow(v, k + 1))
                    .transpose()?,
                first_rhs: chi_km1,
                second_lhs: shadow_arg(second_arg)
                    .map(|v| upper_shadow(v, k + 1))
                    .transpose()?,
                second_rhs,
                first_identity: first_arg == odd(ki + 1, n),
                second_identity: second_arg == odd(2 * ki + 2, n) + odd(2 * ki + 1, n)
                    && second_rhs == odd(2 * ki - 1, half) + odd(2 * ki, half),
            })
        })
        .collect()
}
