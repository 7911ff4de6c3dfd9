use std::io::{Read, Write};

use crate::error::{ensure_in_range, Error, Result};
use crate::number::sieve::{self, isqrt, SieveTable};

const CACHE_MAGIC: &[u8; 4] = b"DVT1";

/// Prefix sums M(n) = Σ μ(k) and L(n) = Σ λ(k) on `[0, limit]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummatoryTables {
    mertens: Vec<i64>,
    liouville: Vec<i64>,
}

impl SummatoryTables {
    pub fn build(table: &SieveTable) -> Self {
        let len = table.limit() as usize + 1;
        let mut mertens = vec![0i64; len];
        let mut liouville = vec![0i64; len];
        for k in 1..len {
            mertens[k] = mertens[k - 1] + table.mu(k as u64) as i64;
            liouville[k] = liouville[k - 1] + table.liouville(k as u64) as i64;
        }
        Self { mertens, liouville }
    }

    pub fn limit(&self) -> u64 {
        self.mertens.len() as u64 - 1
    }

    /// M(n); M(0) = 0.
    pub fn mertens(&self, n: u64) -> Result<i64> {
        ensure_in_range(n, self.limit())?;
        Ok(self.mertens[n as usize])
    }

    /// L(n); L(0) = 0.
    pub fn liouville(&self, n: u64) -> Result<i64> {
        ensure_in_range(n, self.limit())?;
        Ok(self.liouville[n as usize])
    }

    /// Unchecked M(n) for callers that already validated the range.
    pub(crate) fn m(&self, n: u64) -> i64 {
        self.mertens[n as usize]
    }

    pub(crate) fn l(&self, n: u64) -> i64 {
        self.liouville[n as usize]
    }

    /// Writes the cache file: magic `DVT1`, the limit as a little-endian u64,
    /// then one 16-byte record `(M(k), L(k))` of little-endian i64 per
    /// k = 1..=limit.
    pub fn write_cache<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(CACHE_MAGIC)?;
        w.write_all(&self.limit().to_le_bytes())?;
        for k in 1..self.mertens.len() {
            w.write_all(&self.mertens[k].to_le_bytes())?;
            w.write_all(&self.liouville[k].to_le_bytes())?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_cache<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        r.read_exact(&mut magic)?;
        if &magic != CACHE_MAGIC {
            return Err(Error::Cache(format!("bad magic {magic:?}")));
        }
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let limit = u64::from_le_bytes(word);
        if limit == 0 || limit > sieve::DEFAULT_BUDGET_CAP {
            return Err(Error::Cache(format!("implausible limit {limit}")));
        }
        let len = limit as usize + 1;
        let mut mertens = vec![0i64; len];
        let mut liouville = vec![0i64; len];
        for k in 1..len {
            r.read_exact(&mut word)?;
            mertens[k] = i64::from_le_bytes(word);
            r.read_exact(&mut word)?;
            liouville[k] = i64::from_le_bytes(word);
        }
        if r.read(&mut word)? != 0 {
            return Err(Error::Cache("trailing bytes after last record".into()));
        }
        Ok(Self { mertens, liouville })
    }
}

/// Both directions of the square-divisor inversion between M and L.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InversionPair {
    /// Σ_{r ≤ √n} M(⌊n/r²⌋)
    pub l_from_m: i64,
    /// Σ_{r ≤ √n} μ(r) L(⌊n/r²⌋)
    pub m_from_l: i64,
}

pub fn mobius_inversion_pair(
    n: u64,
    table: &SieveTable,
    tables: &SummatoryTables,
) -> Result<InversionPair> {
    ensure_in_range(n, tables.limit())?;
    ensure_in_range(n, table.limit())?;
    let mut pair = InversionPair {
        l_from_m: 0,
        m_from_l: 0,
    };
    for r in 1..=isqrt(n) {
        let q = n / (r * r);
        pair.l_from_m += tables.m(q);
        pair.m_from_l += table.mu(r) as i64 * tables.l(q);
    }
    Ok(pair)
}

/// M(n) and L(n) at the requested sample points, computed by streaming the
/// segmented sieve up to the largest sample; no full-range table is kept.
pub fn summatory_samples(samples: &[u64], segment_len: usize) -> Vec<(u64, i64, i64)> {
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by_key(|&i| samples[i]);
    let mut out = vec![(0u64, 0i64, 0i64); samples.len()];
    for &i in &order {
        out[i].0 = samples[i];
    }
    let top = samples.iter().copied().max().unwrap_or(0);
    if top == 0 {
        return out;
    }
    let (mut m, mut l) = (0i64, 0i64);
    let mut next = order
        .iter()
        .copied()
        .skip_while(|&i| samples[i] == 0)
        .peekable();
    sieve::for_each_segment(top, segment_len, |lo, omega, mu| {
        for (j, (&o, &u)) in omega.iter().zip(mu).enumerate() {
            let k = lo + j as u64;
            m += u as i64;
            l += if o % 2 == 0 { 1 } else { -1 };
            while let Some(&i) = next.peek() {
                if samples[i] != k {
                    break;
                }
                out[i].1 = m;
                out[i].2 = l;
                next.next();
            }
        }
    });
    out
}
