use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// dim Δ_n = max{k : p_1 p_2 ⋯ p_k ≤ n} − 1, with exact primorials.
///
/// Δ_1 = {∅} has dimension −1; n = 0 is outside the domain.
pub fn primorial_dim(n: &BigUint) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::Domain(
            "Δ_0 is undefined; n must be at least 1".into(),
        ));
    }
    let mut product = BigUint::one();
    let mut k = 0i64;
    let mut candidate = 2u64;
    loop {
        if is_prime(candidate) {
            product *= candidate;
            if &product > n {
                return Ok(k - 1);
            }
            k += 1;
        }
        candidate += 1;
    }
}

pub fn primorial_dim_u64(n: u64) -> Result<i64> {
    primorial_dim(&BigUint::from(n))
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Parses a nonnegative integer written in decimal or as `b^e`
/// (for example `10^80`).
pub fn parse_big(s: &str) -> Result<BigUint> {
    let s = s.trim();
    let bad = || Error::Domain(format!("not a nonnegative integer: {s:?}"));
    match s.split_once('^') {
        Some((base, exp)) => {
            let base: BigUint = base.trim().parse().map_err(|_| bad())?;
            let exp: u32 = exp.trim().parse().map_err(|_| bad())?;
            Ok(base.pow(exp))
        }
        None => s.parse().map_err(|_| bad()),
    }
}
