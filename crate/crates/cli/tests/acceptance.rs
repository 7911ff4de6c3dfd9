//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use divtop::asymptotics::{
    modal_face_dimension, report_total_betti_delta, report_total_betti_delta_tilde,
};
use divtop::betti::{betti_delta, betti_delta_shifted_count, betti_delta_tilde, euler_check_delta};
use divtop::complex::{
    build_delta_complex, build_divisor_multicomplex, homology_betti, multicomplex_betti,
};
use divtop::number::{mobius_inversion_pair, primorial_dim_u64, SieveConfig};
use divtop::shadow::{chi_truncated, verify_fbeta_relations, verify_shadow_inequalities};
use divtop::verify::{self, Suite, VerifyConfig};
use divtop::Tables;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let mut failed = 0;
    let big = Tables::build(1_000_000).expect("tables to 10^6");
    let criteria: Vec<Criterion> = vec![
        (
            "1 formula = shifted count = SNF, torsion-free, n ≤ 2000",
            Box::new(oracle_equivalence),
        ),
        (
            "2 Euler identities for Δ_n and Δ̃_n, n ≤ 10^6",
            Box::new(|| euler_identities(&big)),
        ),
        (
            "3 M/L inversion pair, n ≤ 10^6",
            Box::new(|| inversion_pair(&big)),
        ),
        (
            "4 weight-counter identities, x ≤ 10^6",
            Box::new(|| counter_identities(&big)),
        ),
        (
            "5 shadow inequalities n ≤ 10^5; f/β relations and χ n ≤ 5000",
            Box::new(|| shadows(&big)),
        ),
        (
            "6 multicomplex homology = wedge formula, n ≤ 500",
            Box::new(|| multicomplex(&big)),
        ),
        (
            "7 dim Δ_{10^7} = 7 and modal face dimension 2",
            Box::new(desk_scale),
        ),
        (
            "8 total Betti convergence at 10^6",
            Box::new(|| convergence(&big)),
        ),
        (
            "9 verify --suite all --max-n 2000 is deterministic",
            Box::new(determinism),
        ),
    ];
    for (name, check) in &criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{detail}] ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name} [{detail}] ({secs:.1}s)");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn oracle_equivalence() -> Outcome {
    let t = Tables::build(2000).map_err(|e| e.to_string())?;
    for n in 1..=2000 {
        let formula = betti_delta(n, &t.counters).map_err(|e| e.to_string())?;
        let count = betti_delta_shifted_count(n, &t.sieve).map_err(|e| e.to_string())?;
        let complex = build_delta_complex(n, &t.sieve, 100_000).map_err(|e| e.to_string())?;
        let snf = homology_betti(&complex);
        ensure(formula.values() == count.values(), || {
            format!(
                "n={n}: formula {:?} vs count {:?}",
                formula.values(),
                count.values()
            )
        })?;
        ensure(formula.values() == snf.betti.values(), || {
            format!(
                "n={n}: formula {:?} vs SNF {:?}",
                formula.values(),
                snf.betti.values()
            )
        })?;
        ensure(snf.torsion_free(), || {
            format!("n={n}: torsion {:?}", snf.torsion)
        })?;
    }
    Ok("2000 values of n".into())
}

fn euler_identities(t: &Tables) -> Outcome {
    for n in 1..=1_000_000 {
        let r = euler_check_delta(n, t).map_err(|e| e.to_string())?;
        ensure(r.holds(), || format!("{r:?}"))?;
    }
    // Δ̃_n: running Betti vector and cell counts against L(n), checked
    // against the wedge formula at sampled n
    let report = verify::run_with(Suite::Euler, &VerifyConfig::new(1_000_000), t)
        .map_err(|e| e.to_string())?;
    ensure(report.passed(), || report.render())?;
    for n in (1..=1_000_000).step_by(7919) {
        let b = betti_delta_tilde(n, t).map_err(|e| e.to_string())?;
        let l = t.summatory.liouville(n).unwrap();
        ensure(b.signed_sum() == l, || {
            format!("n={n}: Δ̃ signed sum {} vs L {l}", b.signed_sum())
        })?;
    }
    Ok("exact".into())
}

fn inversion_pair(t: &Tables) -> Outcome {
    for n in 1..=1_000_000 {
        let p = mobius_inversion_pair(n, &t.sieve, &t.summatory).map_err(|e| e.to_string())?;
        let (m, l) = (
            t.summatory.mertens(n).unwrap(),
            t.summatory.liouville(n).unwrap(),
        );
        ensure(p.l_from_m == l && p.m_from_l == m, || {
            format!("n={n}: {p:?} vs M={m} L={l}")
        })?;
    }
    Ok("both directions exact".into())
}

fn counter_identities(t: &Tables) -> Outcome {
    let c = &t.counters;
    let weights = c.max_weight() as i64 + 2;
    for x in 0..=1_000_000u64 {
        let halvings: Vec<u64> =
            std::iter::successors(Some(x), |&y| (y > 1).then_some(y / 2)).collect();
        let alt = |f: &dyn Fn(usize, u64) -> u64| -> i64 {
            halvings
                .iter()
                .enumerate()
                .map(|(i, &y)| {
                    if i % 2 == 0 {
                        f(i, y) as i64
                    } else {
                        -(f(i, y) as i64)
                    }
                })
                .sum()
        };
        ensure(c.sigma_odd(x) as i64 == alt(&|_, y| c.sigma(y)), || {
            format!("x={x}: σ^odd")
        })?;
        for k in 0..=weights {
            ensure(c.sigma_k_even(k, x) == c.sigma_k_odd(k - 1, x / 2), || {
                format!("x={x} k={k}: even/odd")
            })?;
            let rhs = alt(&|i, y| c.sigma_k(k - i as i64, y));
            ensure(c.sigma_k_odd(k, x) as i64 == rhs, || {
                format!("x={x} k={k}: alternating sum {rhs}")
            })?;
        }
    }
    Ok("all x, all k".into())
}

fn shadows(t: &Tables) -> Outcome {
    let mut rows = 0;
    for n in 1..=100_000 {
        for r in verify_shadow_inequalities(n, &t.counters).map_err(|e| e.to_string())? {
            rows += 1;
            ensure(r.holds(), || format!("n={n}: {r:?}"))?;
        }
    }
    for n in 1..=5000 {
        for r in verify_fbeta_relations(n, &t.counters).map_err(|e| e.to_string())? {
            ensure(r.holds(), || format!("n={n}: {r:?}"))?;
        }
        for k in 0..=t.counters.max_weight() as u32 + 1 {
            let e = chi_truncated(n, k, &t.counters).map_err(|e| e.to_string())?;
            ensure(e.agrees(), || format!("{e:?}"))?;
        }
    }
    Ok(format!("{rows} (n, k) inequality pairs, 0 violations"))
}

fn multicomplex(t: &Tables) -> Outcome {
    for n in 1..=500 {
        let m = build_divisor_multicomplex(n, &t.sieve).map_err(|e| e.to_string())?;
        let oracle = multicomplex_betti(&m, 100_000).map_err(|e| e.to_string())?;
        let wedge = betti_delta_tilde(n, t).map_err(|e| e.to_string())?;
        ensure(oracle.values() == wedge.values(), || {
            format!("n={n}: {:?} vs {:?}", oracle.values(), wedge.values())
        })?;
    }
    Ok("exact".into())
}

fn desk_scale() -> Outcome {
    let n = 10_000_000;
    let dim = primorial_dim_u64(n).map_err(|e| e.to_string())?;
    let t = Tables::build_with(n, 1, &SieveConfig::default()).map_err(|e| e.to_string())?;
    let modal = modal_face_dimension(n, &t).map_err(|e| e.to_string())?;
    ensure(dim == 7 && modal == Some(2), || {
        format!("dim={dim} modal={modal:?}")
    })?;
    Ok(format!("dim={dim} modal={modal:?}"))
}

fn convergence(t: &Tables) -> Outcome {
    let delta = report_total_betti_delta(&[1_000, 1_000_000], t).map_err(|e| e.to_string())?;
    let tilde =
        report_total_betti_delta_tilde(&[1_000, 1_000_000], t).map_err(|e| e.to_string())?;
    let (d3, d6) = (delta[0].deviation(), delta[1].deviation());
    let (t3, t6) = (tilde[0].deviation(), tilde[1].deviation());
    let detail = format!("Δ: {d3:.5} → {d6:.5}; Δ̃: {t3:.5} → {t6:.5}");
    ensure(d6 < 0.01 && t6 < 0.02 && d6 < d3 && t6 < t3, || {
        detail.clone()
    })?;
    Ok(detail)
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_divtop"))
            .args(["verify", "--suite", "all", "--max-n", "2000"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.success(), || {
        String::from_utf8_lossy(&a.stdout).into_owned()
    })?;
    ensure(a.stdout == b.stdout && b.status.success(), || {
        "reports differ".into()
    })?;
    Ok(format!("{} identical bytes", a.stdout.len()))
}
