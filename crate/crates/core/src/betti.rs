//! Closed-form Betti numbers, f-vectors and Euler-characteristic identities
//! for Δ_n and Δ̃_n.
//!
//! Sign convention: with reduced Betti numbers indexed from k = −1,
//! `Σ_{k ≥ −1} (−1)^{k−1} β_k(Δ_n) = M(n)` and the same sum over Δ̃_n is
//! L(n). For n ≥ 2 the k = −1 term vanishes. In terms of the parity sums
//! a(n) = Σ_{k even} β_k and b(n) = Σ_{k odd} β_k this reads b − a = M(n).

use serde::Serialize;

use crate::complex::cell_census;
use crate::error::{ensure_in_range, Result};
use crate::number::{SieveTable, WeightCounters};
use crate::tables::Tables;

/// How a Betti vector was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// β_k = σ_{k+1}^odd(n) − σ_{k+1}^odd(⌊n/2⌋)
    Formula,
    /// Faces F with F ∪ {2} ∉ Δ_n, counted one by one.
    ShiftedCount,
    /// Integer Smith normal form of the boundary matrices.
    HomologyOracle,
    /// Sum over full squares r² ≤ n of shifted Betti vectors of smaller Δ.
    WedgeSplit,
}

/// Reduced Betti numbers β_k for k ≥ −1.
///
/// Stored densely from k = −1 with trailing zeros trimmed, so two vectors
/// with the same nonzero entries compare equal through [`values`].
///
/// [`values`]: BettiVector::values
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiVector {
    pub n: u64,
    pub method: Method,
    values: Vec<u64>,
}

impl BettiVector {
    /// `values[0]` is β_{−1}, `values[1]` is β_0, and so on.
    pub fn from_values(n: u64, method: Method, mut values: Vec<u64>) -> Self {
        while values.last() == Some(&0) {
            values.pop();
        }
        Self { n, method, values }
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, k: i64) -> u64 {
        if k < -1 {
            return 0;
        }
        self.values.get((k + 1) as usize).copied().unwrap_or(0)
    }

    /// Highest k with β_k ≠ 0.
    pub fn top(&self) -> Option<i64> {
        (!self.values.is_empty()).then(|| self.values.len() as i64 - 2)
    }

    /// `(k, β_k)` for k from −1 up to the top nonzero entry.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &b)| (i as i64 - 1, b))
    }

    /// Σ_{k ≥ 0} β_k.
    pub fn total(&self) -> u64 {
        self.values.iter().skip(1).sum()
    }

    /// Σ_{k ≥ −1} (−1)^{k−1} β_k, which is M(n) for Δ_n and L(n) for Δ̃_n.
    pub fn signed_sum(&self) -> i64 {
        self.iter()
            .map(|(k, b)| {
                if (k - 1).rem_euclid(2) == 0 {
                    b as i64
                } else {
                    -(b as i64)
                }
            })
            .sum()
    }

    /// Reduced Euler characteristic Σ_{k ≥ −1} (−1)^k β_k.
    pub fn reduced_euler(&self) -> i64 {
        -self.signed_sum()
    }

    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }
}

/// f_j for j ≥ −1; `f[0]` is the empty face.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FVector {
    pub n: u64,
    f: Vec<u64>,
}

impl FVector {
    pub fn from_values(n: u64, mut f: Vec<u64>) -> Self {
        while f.last() == Some(&0) {
            f.pop();
        }
        Self { n, f }
    }

    pub fn values(&self) -> &[u64] {
        &self.f
    }

    pub fn get(&self, j: i64) -> u64 {
        if j < -1 {
            return 0;
        }
        self.f.get((j + 1) as usize).copied().unwrap_or(0)
    }

    /// Total number of faces, the empty face included.
    pub fn total(&self) -> u64 {
        self.f.iter().sum()
    }

    /// Σ_{j ≥ −1} (−1)^j f_j.
    pub fn reduced_euler(&self) -> i64 {
        self.f
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 1 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

/// Betti numbers of Δ_n from the odd squarefree counters.
pub fn betti_delta(n: u64, counters: &WeightCounters) -> Result<BettiVector> {
    counters.check(n)?;
    let values = match counters.top_odd_weight(n) {
        None => Vec::new(),
        Some(top) => (0..=top as i64)
            .map(|w| counters.sigma_k_odd(w, n) - counters.sigma_k_odd(w, n / 2))
            .collect(),
    };
    Ok(BettiVector::from_values(n, Method::Formula, values))
}

/// Betti numbers of Δ_n by counting odd squarefree b ≤ n with 2b > n,
/// straight from the sieve.
pub fn betti_delta_shifted_count(n: u64, table: &SieveTable) -> Result<BettiVector> {
    ensure_in_range(n, table.limit())?;
    let mut values = Vec::new();
    for b in (n / 2 + 1..=n).filter(|b| b % 2 == 1) {
        if table.is_squarefree(b) {
            let idx = table.omega(b) as usize;
            if values.len() <= idx {
                values.resize(idx + 1, 0);
            }
            values[idx] += 1;
        }
    }
    Ok(BettiVector::from_values(n, Method::ShiftedCount, values))
}

/// f_j(Δ_n) = σ_{j+1}(n).
pub fn f_vector_delta(n: u64, counters: &WeightCounters) -> Result<FVector> {
    counters.check(n)?;
    let f = match counters.top_weight(n) {
        None => Vec::new(),
        Some(top) => (0..=top as i64).map(|w| counters.sigma_k(w, n)).collect(),
    };
    Ok(FVector::from_values(n, f))
}

/// Both sides of M(n) = Σ (−1)^{k−1} β_k(Δ_n) = −χ̃(Δ_n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaEulerReport {
    pub n: u64,
    pub mertens: i64,
    pub betti_side: i64,
    pub face_side: i64,
}

impl DeltaEulerReport {
    pub fn holds(&self) -> bool {
        self.mertens == self.betti_side && self.mertens == self.face_side
    }
}

pub fn euler_check_delta(n: u64, tables: &Tables) -> Result<DeltaEulerReport> {
    let betti = betti_delta(n, &tables.counters)?;
    let f = f_vector_delta(n, &tables.counters)?;
    Ok(DeltaEulerReport {
        n,
        mertens: tables.summatory.mertens(n)?,
        betti_side: betti.signed_sum(),
        face_side: -f.reduced_euler(),
    })
}

/// Betti numbers of Δ̃_n: Σ_{r ≤ √n} of β(Δ_{⌊n/r²⌋}) shifted up by 2Ω(r).
pub fn betti_delta_tilde(n: u64, tables: &Tables) -> Result<BettiVector> {
    let counters = &tables.counters;
    counters.check(n)?;
    ensure_in_range(n.isqrt(), tables.sieve.limit())?;
    let mut values: Vec<u64> = Vec::new();
    for r in 1..=n.isqrt() {
        let q = n / (r * r);
        let shift = 2 * tables.sieve.omega(r) as usize;
        let Some(top) = counters.top_odd_weight(q) else {
            continue;
        };
        if values.len() < top + shift + 1 {
            values.resize(top + shift + 1, 0);
        }
        for w in 0..=top {
            // β_{w−1}(Δ_q) lands at index (w − 1) + shift + 1
            values[w + shift] +=
                counters.sigma_k_odd(w as i64, q) - counters.sigma_k_odd(w as i64, q / 2);
        }
    }
    Ok(BettiVector::from_values(n, Method::WedgeSplit, values))
}

/// χ(Δ̃_n) from cells and from Betti numbers, against −L(n).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TildeEulerReport {
    pub n: u64,
    pub liouville: i64,
    pub chi_from_cells: i64,
    pub chi_from_betti: i64,
}

impl TildeEulerReport {
    pub fn holds(&self) -> bool {
        self.chi_from_cells == -self.liouville && self.chi_from_betti == -self.liouville
    }
}

pub fn euler_check_delta_tilde(n: u64, tables: &Tables) -> Result<TildeEulerReport> {
    let census = cell_census(n, &tables.sieve)?;
    let betti = betti_delta_tilde(n, tables)?;
    Ok(TildeEulerReport {
        n,
        liouville: tables.summatory.liouville(n)?,
        chi_from_cells: census.euler_characteristic(),
        chi_from_betti: betti.reduced_euler(),
    })
}

/// (a, b) = (Σ_{k even} β_k, Σ_{k odd} β_k) over k ≥ 0.
pub fn parity_sums(v: &BettiVector) -> (u64, u64) {
    v.iter()
        .filter(|&(k, _)| k >= 0)
        .fold((0, 0), |(a, b), (k, beta)| {
            if k % 2 == 0 {
                (a + beta, b)
            } else {
                (a, b + beta)
            }
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tables(n: u64) -> Tables {
        Tables::build(n).unwrap()
    }

    #[test]
    fn delta_ten() {
        let t = tables(10);
        let b = betti_delta(10, &t.counters).unwrap();
        assert_eq!(b.values(), &[0, 1]);
        assert_eq!(b.get(0), 1);
        assert_eq!(b.get(1), 0);
        assert_eq!(b.get(-2), 0);
        assert_eq!(parity_sums(&b), (1, 0));
    }

    #[test]
    fn delta_one_and_two() {
        let t = tables(2);
        let b1 = betti_delta(1, &t.counters).unwrap();
        assert_eq!(b1.values(), &[1]);
        assert_eq!(b1.top(), Some(-1));
        let b2 = betti_delta(2, &t.counters).unwrap();
        assert!(b2.values().is_empty());
        assert_eq!(parity_sums(&b2), (0, 0));
        assert_eq!(b2.top(), None);
    }

    #[test]
    fn shifted_count_examples() {
        let t = tables(30);
        let c10 = betti_delta_shifted_count(10, &t.sieve).unwrap();
        assert_eq!(c10.get(0), 1);
        let c30 = betti_delta_shifted_count(30, &t.sieve).unwrap();
        assert_eq!(c30.get(1), 1);
        let c1 = betti_delta_shifted_count(1, &t.sieve).unwrap();
        assert_eq!(c1.values(), &[1]);
        assert!(betti_delta_shifted_count(31, &t.sieve).is_err());
    }

    #[test]
    fn formula_equals_count() {
        let t = tables(20_000);
        for n in 0..=20_000 {
            assert_eq!(
                betti_delta(n, &t.counters).unwrap().values(),
                betti_delta_shifted_count(n, &t.sieve).unwrap().values(),
                "n = {n}"
            );
        }
    }

    #[test]
    fn f_vectors() {
        let t = tables(30);
        assert_eq!(
            f_vector_delta(10, &t.counters).unwrap().values(),
            &[1, 4, 2]
        );
        assert_eq!(f_vector_delta(1, &t.counters).unwrap().values(), &[1]);
        let f30 = f_vector_delta(30, &t.counters).unwrap();
        assert_eq!(f30.get(2), 1);
        assert_eq!(f30.total(), t.counters.sigma(30));
    }

    #[test]
    fn euler_small() {
        let t = tables(100_000);
        let r3 = euler_check_delta(3, &t).unwrap();
        assert_eq!((r3.mertens, r3.betti_side, r3.face_side), (-1, -1, -1));
        let r2 = euler_check_delta(2, &t).unwrap();
        assert_eq!((r2.mertens, r2.betti_side), (0, 0));
        assert!(euler_check_delta(1, &t).unwrap().holds());
        assert!(euler_check_delta(100_000, &t).unwrap().holds());
    }

    #[test]
    fn tilde_small() {
        let t = tables(100);
        assert_eq!(
            betti_delta_tilde(3, &t).unwrap().values(),
            betti_delta(3, &t.counters).unwrap().values()
        );
        // Δ_4 has two points; r = 2 adds β_{−1}(Δ_1) two degrees up
        let b4 = betti_delta_tilde(4, &t).unwrap();
        assert_eq!(b4.values(), &[0, 1, 1]);
        assert_eq!(b4.signed_sum(), 0);
        assert_eq!(betti_delta_tilde(1, &t).unwrap().values(), &[1]);
    }

    #[test]
    fn tilde_total_is_double_sum() {
        let t = tables(100);
        let direct = betti_delta_tilde(100, &t).unwrap().total();
        let by_pieces: u64 = (1..=10u64)
            .map(|r| {
                betti_delta(100 / (r * r), &t.counters)
                    .unwrap()
                    .iter()
                    .map(|(_, b)| b)
                    .sum::<u64>()
            })
            .sum();
        // pieces with q = 1 contribute β_{−1} = 1, which lands at k ≥ 1
        assert_eq!(direct, by_pieces);
    }

    #[test]
    fn tilde_euler() {
        let t = tables(1_000_000);
        for n in [1, 2, 4, 9, 100, 12_345, 1_000_000] {
            let r = euler_check_delta_tilde(n, &t).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        let r2 = euler_check_delta_tilde(2, &t).unwrap();
        assert_eq!((r2.chi_from_cells, r2.liouville), (0, 0));
    }

    #[test]
    fn parity_sign() {
        let t = tables(100_000);
        for n in [3u64, 10, 1000, 100_000] {
            let b = betti_delta(n, &t.counters).unwrap();
            let (a, odd) = parity_sums(&b);
            let m = t.summatory.mertens(n).unwrap();
            assert_eq!(odd as i64 - a as i64, m);
            assert_eq!((a as i64 - odd as i64).abs(), m.abs());
        }
    }

    #[test]
    fn beta_zero_is_prime_count_difference() {
        let t = tables(50_000);
        for n in 4..=50_000 {
            let b0 = betti_delta(n, &t.counters).unwrap().get(0);
            assert_eq!(b0, t.sieve.prime_count(n) - t.sieve.prime_count(n / 2));
        }
    }
}
