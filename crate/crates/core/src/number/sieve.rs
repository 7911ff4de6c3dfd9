use bitvec::prelude::*;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Largest limit accepted by [`SieveTable::build`] unless a config raises it.
pub const DEFAULT_BUDGET_CAP: u64 = 100_000_000;

/// Default segment length for the segmented sieve.
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 22;

/// Limits above this are sieved segment by segment.
pub const SEGMENTED_THRESHOLD: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct SieveConfig {
    pub cap: u64,
    pub segment_len: usize,
    pub segmented_above: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_BUDGET_CAP,
            segment_len: DEFAULT_SEGMENT_LEN,
            segmented_above: SEGMENTED_THRESHOLD,
        }
    }
}

impl SieveConfig {
    fn check(&self, limit: u64) -> Result<()> {
        if limit == 0 {
            return Err(Error::ZeroLimit);
        }
        if limit > self.cap || limit >= u32::MAX as u64 {
            return Err(Error::Budget {
                limit,
                cap: self.cap.min(u32::MAX as u64 - 1),
            });
        }
        if self.segment_len == 0 {
            return Err(Error::Domain("segment length must be positive".into()));
        }
        Ok(())
    }
}

/// Per-integer arithmetic data on `[1, limit]`: least prime factor, weight
/// Ω, Möbius μ and the squarefree flag.
///
/// Index 0 is present in every array but carries no meaning.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveTable {
    limit: usize,
    lpf: Vec<u32>,
    omega: Vec<u8>,
    mu: Vec<i8>,
    sqfree: BitVec,
    primes: Vec<u32>,
}

impl SieveTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, &SieveConfig::default())
    }

    pub fn build_with(limit: u64, config: &SieveConfig) -> Result<Self> {
        config.check(limit)?;
        if limit > config.segmented_above {
            Ok(Self::build_segmented(limit as usize, config.segment_len))
        } else {
            Ok(Self::build_linear(limit as usize))
        }
    }

    /// Linear sieve. Every composite is crossed out once, by its least prime.
    pub(crate) fn build_linear(limit: usize) -> Self {
        let mut lpf = vec![0u32; limit + 1];
        let mut omega = vec![0u8; limit + 1];
        let mut mu = vec![0i8; limit + 1];
        let mut primes = Vec::new();
        mu[1] = 1;
        for k in 2..=limit {
            if lpf[k] == 0 {
                lpf[k] = k as u32;
                primes.push(k as u32);
            }
            let p = lpf[k];
            for &q in &primes {
                if q > p || (q as usize) * k > limit {
                    break;
                }
                lpf[q as usize * k] = q;
            }
            let rest = k / p as usize;
            omega[k] = omega[rest] + 1;
            mu[k] = if rest.is_multiple_of(p as usize) {
                0
            } else {
                -mu[rest]
            };
        }
        let sqfree = mu.iter().map(|&m| m != 0).collect();
        Self {
            limit,
            lpf,
            omega,
            mu,
            sqfree,
            primes,
        }
    }

    /// Segmented sieve; segments are filled in parallel and do not share state,
    /// so the table equals the linear build bit for bit.
    pub(crate) fn build_segmented(limit: usize, segment_len: usize) -> Self {
        let base = base_primes(isqrt(limit as u64) as usize);
        let mut lpf = vec![0u32; limit + 1];
        let mut omega = vec![0u8; limit + 1];
        let mut mu = vec![0i8; limit + 1];
        lpf.par_chunks_mut(segment_len)
            .zip(omega.par_chunks_mut(segment_len))
            .zip(mu.par_chunks_mut(segment_len))
            .enumerate()
            .for_each(|(i, ((l, o), m))| {
                fill_segment(i * segment_len, &base, l, o, m);
            });
        let primes = (2..=limit)
            .filter(|&k| lpf[k] == k as u32)
            .map(|k| k as u32)
            .collect();
        let sqfree = mu.iter().map(|&m| m != 0).collect();
        Self {
            limit,
            lpf,
            omega,
            mu,
            sqfree,
            primes,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit as u64
    }

    /// Least prime factor; `None` for 0 and 1.
    pub fn lpf(&self, k: u64) -> Option<u32> {
        match self.lpf[k as usize] {
            0 => None,
            p => Some(p),
        }
    }

    /// Ω(k), prime factors counted with multiplicity.
    pub fn omega(&self, k: u64) -> u8 {
        self.omega[k as usize]
    }

    pub fn mu(&self, k: u64) -> i8 {
        self.mu[k as usize]
    }

    /// Liouville λ(k) = (−1)^Ω(k).
    pub fn liouville(&self, k: u64) -> i8 {
        if self.omega[k as usize].is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    pub fn is_squarefree(&self, k: u64) -> bool {
        self.sqfree[k as usize]
    }

    pub fn omega_slice(&self) -> &[u8] {
        &self.omega
    }

    pub fn mu_slice(&self) -> &[i8] {
        &self.mu
    }

    /// All primes up to the limit, ascending.
    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// π(x), the number of primes ≤ x (x clamped to the limit).
    pub fn prime_count(&self, x: u64) -> u64 {
        self.primes.partition_point(|&p| p as u64 <= x) as u64
    }

    /// 1-based index of a prime (p_1 = 2), or `None` if `p` is not a prime.
    pub fn prime_index(&self, p: u64) -> Option<u32> {
        self.primes
            .binary_search(&(p as u32))
            .ok()
            .map(|i| i as u32 + 1)
    }

    /// Prime factorization as ascending `(prime, exponent)` pairs.
    pub fn factorize(&self, mut k: u64) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while k > 1 {
            let p = self.lpf[k as usize];
            k /= p as u64;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// Largest Ω(k) over 1 ≤ k ≤ limit.
    pub fn max_omega(&self) -> u8 {
        self.omega.iter().copied().max().unwrap_or(0)
    }
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// Primes ≤ `bound` by the plain sieve of Eratosthenes.
pub(crate) fn base_primes(bound: usize) -> Vec<u32> {
    let mut composite = bitvec![0; bound + 1];
    let mut primes = Vec::new();
    for i in 2..=bound {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= bound {
                composite.set(j, true);
                j += i;
            }
        }
    }
    primes
}

/// Fills lpf/Ω/μ for the integers `lo .. lo + lpf.len()` by trial division
/// with the base primes (all primes ≤ √limit).
pub(crate) fn fill_segment(
    lo: usize,
    base: &[u32],
    lpf: &mut [u32],
    omega: &mut [u8],
    mu: &mut [i8],
) {
    let len = lpf.len();
    let hi = lo + len;
    let mut rem: Vec<u64> = (lo..hi).map(|k| k as u64).collect();
    lpf.fill(0);
    omega.fill(0);
    mu.fill(1);
    for &p in base {
        let p = p as usize;
        let first = lo.div_ceil(p).max(1) * p;
        let mut m = first;
        while m < hi {
            let i = m - lo;
            if lpf[i] == 0 {
                lpf[i] = p as u32;
            }
            let mut e = 0u8;
            while rem[i].is_multiple_of(p as u64) {
                rem[i] /= p as u64;
                e += 1;
            }
            omega[i] += e;
            mu[i] = if e >= 2 { 0 } else { -mu[i] };
            m += p;
        }
    }
    for i in 0..len {
        let k = lo + i;
        if k < 2 {
            mu[i] = if k == 1 { 1 } else { 0 };
            continue;
        }
        if rem[i] > 1 {
            // one prime factor above √limit
            if lpf[i] == 0 {
                lpf[i] = rem[i] as u32;
            }
            omega[i] += 1;
            mu[i] = -mu[i];
        }
    }
}

/// Streams Ω and μ segment by segment over `[1, limit]` without keeping the
/// whole range in memory. The callback receives the first integer of the
/// segment and the segment's Ω and μ values.
pub fn for_each_segment<F>(limit: u64, segment_len: usize, mut f: F)
where
    F: FnMut(u64, &[u8], &[i8]),
{
    let base = base_primes(isqrt(limit) as usize);
    let seg = segment_len.max(1);
    let mut lpf = vec![0u32; seg];
    let mut omega = vec![0u8; seg];
    let mut mu = vec![0i8; seg];
    let mut lo = 1usize;
    while lo as u64 <= limit {
        let len = seg.min(limit as usize + 1 - lo);
        fill_segment(
            lo,
            &base,
            &mut lpf[..len],
            &mut omega[..len],
            &mut mu[..len],
        );
        f(lo as u64, &omega[..len], &mu[..len]);
        lo += len;
    }
}
