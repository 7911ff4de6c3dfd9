//! Exhaustive identity sweeps over 1..=max_n with a deterministic text
//! report. Each sweep records every failing case with both sides.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::betti::{
    betti_delta, betti_delta_shifted_count, betti_delta_tilde, euler_check_delta, BettiVector,
};
use crate::complex::{
    build_delta_complex, build_divisor_multicomplex, homology_betti, multicomplex_betti,
    verify_shifted, DEFAULT_FACE_CAP,
};
use crate::error::{Error, Result};
use crate::number::mobius_inversion_pair;
use crate::shadow::{chi_truncated, verify_fbeta_relations, verify_shadow_inequalities};
use crate::tables::Tables;

/// Failures printed per check; the rest are only counted.
const SHOWN_FAILURES: usize = 20;

/// Every n up to this bound gets the direct wedge-formula comparison in the
/// Δ̃ Euler sweep; beyond it only every `TILDE_SAMPLE_STRIDE`-th n does.
const TILDE_DIRECT_UP_TO: u64 = 5_000;
const TILDE_SAMPLE_STRIDE: u64 = 997;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Homology,
    Shifted,
    Euler,
    Inversion,
    Shadow,
    All,
}

impl Suite {
    pub const SINGLE: [Suite; 5] = [
        Suite::Homology,
        Suite::Shifted,
        Suite::Euler,
        Suite::Inversion,
        Suite::Shadow,
    ];

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Self::SINGLE.to_vec(),
            s => vec![s],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Homology => "homology",
            Suite::Shifted => "shifted",
            Suite::Euler => "euler",
            Suite::Inversion => "inversion",
            Suite::Shadow => "shadow",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::SINGLE
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub n: u64,
    pub k: Option<i64>,
    pub lhs: String,
    pub rhs: String,
}

impl Failure {
    fn new(n: u64, k: Option<i64>, lhs: impl fmt::Display, rhs: impl fmt::Display) -> Self {
        Self {
            n,
            k,
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
        }
    }

    fn error(n: u64, e: Error) -> Self {
        Self::new(n, None, "error", e)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub name: &'static str,
    pub cases: u64,
    pub failures: Vec<Failure>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub suite: Suite,
    pub max_n: u64,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.checks.iter().map(|c| c.failures.len()).sum()
    }

    /// Plain-text report; identical for identical inputs.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "verify suite={} max_n={}", self.suite, self.max_n);
        for c in &self.checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                s,
                "{status} [{}] {}: {} cases, {} failures",
                c.suite,
                c.name,
                c.cases,
                c.failures.len()
            );
            for f in c.failures.iter().take(SHOWN_FAILURES) {
                let k = f.k.map_or(String::new(), |k| format!(" k={k}"));
                let _ = writeln!(s, "    n={}{k}: {} vs {}", f.n, f.lhs, f.rhs);
            }
            if c.failures.len() > SHOWN_FAILURES {
                let _ = writeln!(s, "    ... {} more", c.failures.len() - SHOWN_FAILURES);
            }
        }
        let _ = writeln!(
            s,
            "result: {} ({} checks, {} failures)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.checks.len(),
            self.failure_count()
        );
        s
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    pub max_n: u64,
    pub face_cap: u64,
}

impl VerifyConfig {
    pub fn new(max_n: u64) -> Self {
        Self {
            max_n,
            face_cap: DEFAULT_FACE_CAP,
        }
    }
}

/// Builds tables on `[1, max_n]` and runs the requested suite.
pub fn run(suite: Suite, config: &VerifyConfig) -> Result<VerifyReport> {
    let tables = Tables::build(config.max_n.max(1))?;
    run_with(suite, config, &tables)
}

pub fn run_with(suite: Suite, config: &VerifyConfig, tables: &Tables) -> Result<VerifyReport> {
    crate::error::ensure_in_range(config.max_n, tables.counters.limit())?;
    let mut checks = Vec::new();
    for s in suite.expand() {
        match s {
            Suite::Homology => {
                checks.push(homology_oracle(config, tables));
                checks.push(multicomplex_cross_check(config, tables));
            }
            Suite::Shifted => checks.push(shifted(config, tables)),
            Suite::Euler => {
                checks.push(euler_delta(config, tables));
                checks.push(euler_delta_tilde(config, tables));
            }
            Suite::Inversion => {
                checks.push(inversion_pair(config, tables));
                checks.extend(lemma_identities(config, tables));
            }
            Suite::Shadow => {
                checks.push(shadow_inequalities(config, tables));
                checks.push(fbeta_relations(config, tables));
                checks.push(chi_dual(config, tables));
            }
            Suite::All => unreachable!(),
        }
    }
    Ok(VerifyReport {
        suite,
        max_n: config.max_n,
        checks,
    })
}

/// Runs `f` on every n in 1..=max_n in parallel, keeping failures in n order.
fn sweep<F>(suite: Suite, name: &'static str, max_n: u64, f: F) -> CheckResult
where
    F: Fn(u64) -> Vec<Failure> + Sync + Send,
{
    let failures = (1..=max_n).into_par_iter().flat_map_iter(f).collect();
    CheckResult {
        suite,
        name,
        cases: max_n,
        failures,
    }
}

fn betti_diffs(
    n: u64,
    lhs: &BettiVector,
    rhs: &BettiVector,
    lname: &str,
    rname: &str,
) -> Vec<Failure> {
    let top = lhs.values().len().max(rhs.values().len()) as i64;
    (-1..top - 1)
        .filter(|&k| lhs.get(k) != rhs.get(k))
        .map(|k| {
            Failure::new(
                n,
                Some(k),
                format!("{lname}={}", lhs.get(k)),
                format!("{rname}={}", rhs.get(k)),
            )
        })
        .collect()
}

fn homology_oracle(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Homology,
        "formula = shifted count = SNF homology, torsion-free",
        config.max_n,
        |n| {
            let run = || -> Result<Vec<Failure>> {
                let formula = betti_delta(n, &t.counters)?;
                let count = betti_delta_shifted_count(n, &t.sieve)?;
                let oracle = homology_betti(&build_delta_complex(n, &t.sieve, config.face_cap)?);
                let mut out = betti_diffs(n, &formula, &count, "formula", "count");
                out.extend(betti_diffs(n, &formula, &oracle.betti, "formula", "oracle"));
                for (k, factors) in &oracle.torsion {
                    out.push(Failure::new(
                        n,
                        Some(*k),
                        format!("torsion={}", factors.join(",")),
                        "torsion=none",
                    ));
                }
                Ok(out)
            };
            run().unwrap_or_else(|e| vec![Failure::error(n, e)])
        },
    )
}

fn multicomplex_cross_check(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Homology,
        "divisor multicomplex SNF = wedge formula",
        config.max_n,
        |n| {
            let run = || -> Result<Vec<Failure>> {
                let m = build_divisor_multicomplex(n, &t.sieve)?;
                let oracle = multicomplex_betti(&m, config.face_cap)?;
                let wedge = betti_delta_tilde(n, t)?;
                Ok(betti_diffs(n, &oracle, &wedge, "multicomplex", "wedge"))
            };
            run().unwrap_or_else(|e| vec![Failure::error(n, e)])
        },
    )
}

fn shifted(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Shifted,
        "Δ_n is shifted in prime order",
        config.max_n,
        |n| match build_delta_complex(n, &t.sieve, config.face_cap) {
            Ok(c) if verify_shifted(&c) => Vec::new(),
            Ok(c) => {
                let (face, j, i) = c.shifted_violation().expect("not shifted");
                vec![Failure::new(
                    n,
                    None,
                    format!("face={face:?} drop={j}"),
                    format!("missing add={i}"),
                )]
            }
            Err(e) => vec![Failure::error(n, e)],
        },
    )
}

fn euler_delta(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Euler,
        "M(n) = Σ(−1)^(k−1) β_k(Δ_n) = −χ̃ from faces",
        config.max_n,
        |n| match euler_check_delta(n, t) {
            Ok(r) if r.holds() => Vec::new(),
            Ok(r) => vec![Failure::new(
                n,
                None,
                format!("M={}", r.mertens),
                format!("betti={} faces={}", r.betti_side, r.face_side),
            )],
            Err(e) => vec![Failure::error(n, e)],
        },
    )
}

/// Sequential sweep: β(Δ̃_n) and the cell counts are updated from n − 1.
/// Δ̃_n gains the cell of n, and Δ_q moves to Δ_q for each square r² | n with
/// q = n/r²; Δ_q differs from Δ_{q−1} by at most one added and one removed
/// generator. The running vector is compared with the direct wedge formula
/// at every small n and at sampled large n.
fn euler_delta_tilde(config: &VerifyConfig, t: &Tables) -> CheckResult {
    let sieve = &t.sieve;
    let mut betti: Vec<i64> = vec![0; sieve.max_omega() as usize * 3 + 2];
    let mut cells: Vec<i64> = vec![0; sieve.max_omega() as usize + 1];
    let mut failures = Vec::new();
    let odd_sqfree = |b: u64| b % 2 == 1 && sieve.is_squarefree(b);
    for n in 1..=config.max_n {
        cells[sieve.omega(n) as usize] += 1;
        for (r, omega_r) in square_divisors(n, t) {
            let q = n / (r * r);
            let shift = 2 * omega_r as usize;
            if odd_sqfree(q) {
                betti[sieve.omega(q) as usize + shift] += 1;
            }
            if q % 2 == 0 && odd_sqfree(q / 2) {
                betti[sieve.omega(q / 2) as usize + shift] -= 1;
            }
        }
        let l = t.summatory.l(n);
        // index i holds β_{i−1}; (−1)^{k−1} = (−1)^i
        let signed: i64 = betti
            .iter()
            .enumerate()
            .map(|(i, &b)| if i % 2 == 0 { b } else { -b })
            .sum();
        let chi: i64 = cells
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { c } else { -c })
            .sum();
        if signed != l || chi != -l {
            failures.push(Failure::new(
                n,
                None,
                format!("L={l}"),
                format!("betti={signed} cells_chi={chi}"),
            ));
        }
        if n <= TILDE_DIRECT_UP_TO || n % TILDE_SAMPLE_STRIDE == 0 || n == config.max_n {
            match betti_delta_tilde(n, t) {
                Ok(direct) => {
                    for (i, &b) in betti.iter().enumerate() {
                        let k = i as i64 - 1;
                        if b != direct.get(k) as i64 {
                            failures.push(Failure::new(
                                n,
                                Some(k),
                                format!("running={b}"),
                                format!("wedge={}", direct.get(k)),
                            ));
                        }
                    }
                }
                Err(e) => failures.push(Failure::error(n, e)),
            }
        }
    }
    CheckResult {
        suite: Suite::Euler,
        name: "L(n) = Σ(−1)^(k−1) β_k(Δ̃_n) = −χ̃ from cells",
        cases: config.max_n,
        failures,
    }
}

/// `(r, Ω(r))` for every r with r² | n.
fn square_divisors(n: u64, t: &Tables) -> Vec<(u64, u32)> {
    let mut out = vec![(1u64, 0u32)];
    for (p, e) in t.sieve.factorize(n) {
        let len = out.len();
        for i in 0..len {
            let (mut r, mut w) = out[i];
            for _ in 0..e / 2 {
                r *= p as u64;
                w += 1;
                out.push((r, w));
            }
        }
    }
    out
}

fn inversion_pair(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Inversion,
        "L(n) = Σ M(n/r²) and M(n) = Σ μ(r) L(n/r²)",
        config.max_n,
        |n| match mobius_inversion_pair(n, &t.sieve, &t.summatory) {
            Ok(p) => {
                let (m, l) = (t.summatory.m(n), t.summatory.l(n));
                let mut out = Vec::new();
                if p.l_from_m != l {
                    out.push(Failure::new(
                        n,
                        None,
                        format!("L={l}"),
                        format!("ΣM={}", p.l_from_m),
                    ));
                }
                if p.m_from_l != m {
                    out.push(Failure::new(
                        n,
                        None,
                        format!("M={m}"),
                        format!("ΣμL={}", p.m_from_l),
                    ));
                }
                out
            }
            Err(e) => vec![Failure::error(n, e)],
        },
    )
}

fn lemma_identities(config: &VerifyConfig, t: &Tables) -> Vec<CheckResult> {
    let c = &t.counters;
    let weights = c.max_weight() as i64 + 1;
    let halvings =
        |x: u64| std::iter::successors(Some(x), |&y| (y > 1).then_some(y / 2)).enumerate();
    let sign = |i: usize| if i.is_multiple_of(2) { 1i64 } else { -1 };
    vec![
        sweep(
            Suite::Inversion,
            "σ_k^even(x) = σ_{k−1}^odd(x/2)",
            config.max_n,
            |x| {
                (0..=weights)
                    .filter_map(|k| {
                        let (even, odd) = (c.sigma_k_even(k, x), c.sigma_k_odd(k - 1, x / 2));
                        (even != odd).then(|| {
                            Failure::new(x, Some(k), format!("even={even}"), format!("odd={odd}"))
                        })
                    })
                    .collect()
            },
        ),
        sweep(
            Suite::Inversion,
            "σ_k^odd(x) = Σ_i (−1)^i σ_{k−i}(x/2^i)",
            config.max_n,
            |x| {
                (0..=weights)
                    .filter_map(|k| {
                        let odd = c.sigma_k_odd(k, x) as i64;
                        let alt: i64 = halvings(x)
                            .map(|(i, y)| sign(i) * c.sigma_k(k - i as i64, y) as i64)
                            .sum();
                        (odd != alt).then(|| {
                            Failure::new(
                                x,
                                Some(k),
                                format!("odd={odd}"),
                                format!("alternating={alt}"),
                            )
                        })
                    })
                    .collect()
            },
        ),
        sweep(
            Suite::Inversion,
            "σ^odd(x) = Σ_i (−1)^i σ(x/2^i)",
            config.max_n,
            |x| {
                let odd = c.sigma_odd(x) as i64;
                let alt: i64 = halvings(x).map(|(i, y)| sign(i) * c.sigma(y) as i64).sum();
                if odd == alt {
                    Vec::new()
                } else {
                    vec![Failure::new(
                        x,
                        None,
                        format!("odd={odd}"),
                        format!("alternating={alt}"),
                    )]
                }
            },
        ),
    ]
}

fn shadow_inequalities(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Shadow,
        "shadow inequalities on odd squarefree counts",
        config.max_n,
        |n| match verify_shadow_inequalities(n, &t.counters) {
            Ok(rows) => rows
                .iter()
                .flat_map(|r| {
                    let k = Some(r.k as i64);
                    let mut out = Vec::new();
                    if r.lower_slack() < 0 {
                        out.push(Failure::new(
                            n,
                            k,
                            format!("lower={}", r.lower_lhs),
                            format!("bound={}", r.lower_rhs),
                        ));
                    }
                    if r.upper_slack() < 0 {
                        out.push(Failure::new(
                            n,
                            k,
                            format!("upper={}", r.upper_lhs),
                            format!("bound={}", r.upper_rhs),
                        ));
                    }
                    out
                })
                .collect(),
            Err(e) => vec![Failure::error(n, e)],
        },
    )
}

fn fbeta_relations(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Shadow,
        "f/β shadow relations on Δ_n",
        config.max_n,
        |n| match verify_fbeta_relations(n, &t.counters) {
            Ok(rows) => rows
                .iter()
                .filter(|r| !r.holds())
                .map(|r| {
                    Failure::new(
                        n,
                        Some(r.k as i64),
                        format!("lower={:?} upper={:?}", r.first_lhs, r.second_lhs),
                        format!(
                            "bounds={} {} identities={} {}",
                            r.first_rhs, r.second_rhs, r.first_identity, r.second_identity
                        ),
                    )
                })
                .collect(),
            Err(e) => vec![Failure::error(n, e)],
        },
    )
}

fn chi_dual(config: &VerifyConfig, t: &Tables) -> CheckResult {
    sweep(
        Suite::Shadow,
        "χ_{k−1} alternating tail = σ_k^odd(n/2)",
        config.max_n,
        |n| {
            let top = t.counters.max_weight() as u32 + 1;
            (0..=top)
                .filter_map(|k| match chi_truncated(n, k, &t.counters) {
                    Ok(e) if e.agrees() => None,
                    Ok(e) => Some(Failure::new(
                        n,
                        Some(k as i64),
                        format!("alternating={}", e.alternating),
                        format!("closed={}", e.closed_form),
                    )),
                    Err(e) => Some(Failure::error(n, e)),
                })
                .collect()
        },
    )
}
