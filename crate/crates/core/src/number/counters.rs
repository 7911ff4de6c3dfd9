use crate::error::{ensure_in_range, Result};
use crate::number::sieve::SieveTable;

/// Prefix counts of squarefree integers, split by weight and parity.
///
/// All counting functions are step functions of a real argument; the real
/// entry points floor their argument and the integer ones take `⌊x⌋`
/// directly. Every query is a table lookup.
#[derive(Clone, Debug)]
pub struct WeightCounters {
    limit: u64,
    max_weight: u8,
    /// `odd[w][x]` = number of odd squarefree k ≤ x with Ω(k) = w.
    odd: Vec<Vec<u32>>,
    /// `even[w][x]` = number of even squarefree k ≤ x with Ω(k) = w.
    even: Vec<Vec<u32>>,
    odd_total: Vec<u32>,
    even_total: Vec<u32>,
}

/// Floors a nonnegative real counting argument; negatives map to 0.
pub fn floor_arg(x: f64) -> u64 {
    if x < 1.0 {
        0
    } else {
        x.floor() as u64
    }
}

impl WeightCounters {
    /// Builds counters on `[1, counter_limit]` from a sieve covering at least
    /// that range.
    pub fn build(table: &SieveTable, counter_limit: u64) -> Result<Self> {
        ensure_in_range(counter_limit, table.limit())?;
        let len = counter_limit as usize + 1;
        let max_weight = (1..=counter_limit)
            .filter(|&k| table.is_squarefree(k))
            .map(|k| table.omega(k))
            .max()
            .unwrap_or(0);
        let weights = max_weight as usize + 1;
        let mut odd = vec![vec![0u32; len]; weights];
        let mut even = vec![vec![0u32; len]; weights];
        let mut odd_total = vec![0u32; len];
        let mut even_total = vec![0u32; len];
        for x in 1..len {
            for w in 0..weights {
                odd[w][x] = odd[w][x - 1];
                even[w][x] = even[w][x - 1];
            }
            odd_total[x] = odd_total[x - 1];
            even_total[x] = even_total[x - 1];
            let k = x as u64;
            if table.is_squarefree(k) {
                let w = table.omega(k) as usize;
                if k % 2 == 1 {
                    odd[w][x] += 1;
                    odd_total[x] += 1;
                } else {
                    even[w][x] += 1;
                    even_total[x] += 1;
                }
            }
        }
        Ok(Self {
            limit: counter_limit,
            max_weight,
            odd,
            even,
            odd_total,
            even_total,
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    /// Largest weight of a squarefree integer ≤ limit.
    pub fn max_weight(&self) -> u8 {
        self.max_weight
    }

    pub fn check(&self, x: u64) -> Result<()> {
        ensure_in_range(x, self.limit)
    }

    fn at(table: &[Vec<u32>], w: i64, x: u64) -> u64 {
        if w < 0 {
            return 0;
        }
        table.get(w as usize).map_or(0, |v| v[x as usize] as u64)
    }

    /// σ(x): squarefree integers in (0, x].
    pub fn sigma(&self, x: u64) -> u64 {
        self.sigma_odd(x) + self.sigma_even(x)
    }

    /// σ^odd(x).
    pub fn sigma_odd(&self, x: u64) -> u64 {
        self.odd_total[x as usize] as u64
    }

    /// σ^even(x).
    pub fn sigma_even(&self, x: u64) -> u64 {
        self.even_total[x as usize] as u64
    }

    /// σ_k(x). Weights beyond the table (or negative) count 0.
    pub fn sigma_k(&self, k: i64, x: u64) -> u64 {
        self.sigma_k_odd(k, x) + self.sigma_k_even(k, x)
    }

    /// σ_k^odd(x).
    pub fn sigma_k_odd(&self, k: i64, x: u64) -> u64 {
        Self::at(&self.odd, k, x)
    }

    /// σ_k^even(x).
    pub fn sigma_k_even(&self, k: i64, x: u64) -> u64 {
        Self::at(&self.even, k, x)
    }

    /// σ(x) at a real argument.
    pub fn sigma_real(&self, x: f64) -> u64 {
        self.sigma(floor_arg(x))
    }

    /// σ_k^odd(x) at a real argument.
    pub fn sigma_k_odd_real(&self, k: i64, x: f64) -> u64 {
        self.sigma_k_odd(k, floor_arg(x))
    }

    /// Largest weight w with σ_w^odd(x) > 0, or `None` when x < 1.
    pub fn top_odd_weight(&self, x: u64) -> Option<usize> {
        (0..self.odd.len())
            .rev()
            .find(|&w| self.odd[w][x as usize] > 0)
    }

    /// Largest weight w with σ_w(x) > 0, or `None` when x < 1.
    pub fn top_weight(&self, x: u64) -> Option<usize> {
        (0..self.odd.len())
            .rev()
            .find(|&w| self.odd[w][x as usize] + self.even[w][x as usize] > 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn counters(n: u64) -> (SieveTable, WeightCounters) {
        let t = SieveTable::build(n).unwrap();
        let c = WeightCounters::build(&t, n).unwrap();
        (t, c)
    }

    /// Enumeration oracle: (odd?, weight) filter over squarefree k ≤ x.
    fn enumerate(x: u64, parity: Option<u64>, weight: Option<u32>) -> u64 {
        (1..=x)
            .filter(|&k| {
                let mut m = k;
                let mut w = 0;
                let mut d = 2;
                let mut sqfree = true;
                while d * d <= m {
                    if m % d == 0 {
                        m /= d;
                        w += 1;
                        if m % d == 0 {
                            sqfree = false;
                        }
                    } else {
                        d += 1;
                    }
                }
                if m > 1 {
                    w += 1;
                }
                sqfree && parity.is_none_or(|p| k % 2 == p) && weight.is_none_or(|ww| w == ww)
            })
            .count() as u64
    }

    #[test]
    fn small_odd_values() {
        let (_, c) = counters(10);
        assert_eq!(c.sigma_k_odd(1, 10), 3);
        assert_eq!(c.sigma_k_odd(2, 10), 0);
        assert_eq!(c.sigma_real(0.5), 0);
        assert_eq!(c.sigma(10), 7);
        assert_eq!(c.sigma_k_odd(0, 10), 1);
        assert_eq!(c.sigma_k_odd(-1, 10), 0);
        assert_eq!(c.sigma_k_odd(99, 10), 0);
    }

    #[test]
    fn match_enumeration() {
        let (_, c) = counters(400);
        for x in [0u64, 1, 2, 7, 30, 64, 210, 399, 400] {
            assert_eq!(c.sigma(x), enumerate(x, None, None));
            assert_eq!(c.sigma_odd(x), enumerate(x, Some(1), None));
            assert_eq!(c.sigma_even(x), enumerate(x, Some(0), None));
            for k in 0..5 {
                assert_eq!(c.sigma_k(k, x), enumerate(x, None, Some(k as u32)));
                assert_eq!(c.sigma_k_odd(k, x), enumerate(x, Some(1), Some(k as u32)));
                assert_eq!(c.sigma_k_even(k, x), enumerate(x, Some(0), Some(k as u32)));
            }
        }
    }

    #[test]
    fn counter_limit_below_sieve_limit() {
        let t = SieveTable::build(1000).unwrap();
        let c = WeightCounters::build(&t, 100).unwrap();
        assert_eq!(c.limit(), 100);
        assert!(c.check(101).is_err());
        assert!(WeightCounters::build(&t, 1001).is_err());
    }

    #[test]
    fn sums_and_monotonicity() {
        let (_, c) = counters(3000);
        let w = c.max_weight() as i64;
        let mut prev = 0;
        for x in 0..=3000 {
            let by_weight: u64 = (0..=w).map(|k| c.sigma_k(k, x)).sum();
            assert_eq!(by_weight, c.sigma(x));
            for k in 0..=w {
                assert_eq!(c.sigma_k(k, x), c.sigma_k_odd(k, x) + c.sigma_k_even(k, x));
            }
            assert!(c.sigma(x) >= prev);
            prev = c.sigma(x);
        }
    }

    #[test]
    fn top_weights() {
        let (_, c) = counters(300);
        assert_eq!(c.top_weight(0), None);
        assert_eq!(c.top_weight(1), Some(0));
        assert_eq!(c.top_weight(29), Some(2));
        assert_eq!(c.top_weight(30), Some(3));
        assert_eq!(c.top_odd_weight(104), Some(2));
        assert_eq!(c.top_odd_weight(105), Some(3));
    }
}
