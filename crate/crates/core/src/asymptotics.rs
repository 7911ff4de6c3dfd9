//! Measured quantities next to their leading asymptotic terms.
//!
//! Measured values are exact integers; the predicted term is evaluated in
//! `f64` and the ratio is formed last.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::betti::{betti_delta, betti_delta_tilde, parity_sums};
use crate::error::{ensure_in_range, Result};
use crate::number::summatory_samples;
use crate::tables::Tables;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub quantity: String,
    pub n: u64,
    pub measured: i64,
    pub predicted: f64,
    /// `None` when the predicted term is zero or undefined.
    pub ratio: Option<f64>,
    pub residual: f64,
}

impl ConvergenceRow {
    pub fn new(quantity: impl Into<String>, n: u64, measured: i64, predicted: f64) -> Self {
        let ratio = (predicted.is_finite() && predicted > 0.0).then(|| measured as f64 / predicted);
        Self {
            quantity: quantity.into(),
            n,
            measured,
            predicted,
            ratio,
            residual: measured as f64 - predicted,
        }
    }

    /// Below the first nonzero point, or with no usable prediction.
    pub fn is_degenerate(&self) -> bool {
        self.measured == 0 || self.ratio.is_none()
    }

    /// |ratio − 1|, infinite for degenerate rows.
    pub fn deviation(&self) -> f64 {
        match self.ratio {
            Some(r) if self.measured != 0 => (r - 1.0).abs(),
            _ => f64::INFINITY,
        }
    }
}

/// Which complex a parity report is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Which {
    Delta,
    DeltaTilde,
}

fn per_n<F>(ns: &[u64], tables: &Tables, f: F) -> Result<Vec<ConvergenceRow>>
where
    F: Fn(u64) -> Result<Vec<ConvergenceRow>> + Sync,
{
    for &n in ns {
        ensure_in_range(n, tables.counters.limit())?;
    }
    let chunks: Vec<Vec<ConvergenceRow>> = ns.par_iter().map(|&n| f(n)).collect::<Result<_>>()?;
    Ok(chunks.into_iter().flatten().collect())
}

/// Σ_{k≥0} β_k(Δ_n) against 2n/π².
pub fn report_total_betti_delta(ns: &[u64], tables: &Tables) -> Result<Vec<ConvergenceRow>> {
    per_n(ns, tables, |n| {
        let b = betti_delta(n, &tables.counters)?;
        Ok(vec![ConvergenceRow::new(
            "total_betti_delta",
            n,
            b.total() as i64,
            2.0 * n as f64 / (PI * PI),
        )])
    })
}

/// Even- and odd-degree Betti sums against n/π² (Δ_n) or n/6 (Δ̃_n).
pub fn report_parity_betti(
    ns: &[u64],
    which: Which,
    tables: &Tables,
) -> Result<Vec<ConvergenceRow>> {
    per_n(ns, tables, |n| {
        let (b, lead, tag) = match which {
            Which::Delta => (
                betti_delta(n, &tables.counters)?,
                n as f64 / (PI * PI),
                "delta",
            ),
            Which::DeltaTilde => (betti_delta_tilde(n, tables)?, n as f64 / 6.0, "delta_tilde"),
        };
        let (even, odd) = parity_sums(&b);
        Ok(vec![
            ConvergenceRow::new(format!("even_betti_{tag}"), n, even as i64, lead),
            ConvergenceRow::new(format!("odd_betti_{tag}"), n, odd as i64, lead),
        ])
    })
}

/// β_k(Δ_n) against n/(2 ln n)·(ln ln n)^k/k!. Convergence is in ln ln n,
/// so these rows are for inspection only.
pub fn report_fixed_k_betti(k: u32, ns: &[u64], tables: &Tables) -> Result<Vec<ConvergenceRow>> {
    per_n(ns, tables, |n| {
        let b = betti_delta(n, &tables.counters)?;
        Ok(vec![ConvergenceRow::new(
            format!("betti_{k}_delta"),
            n,
            b.get(k as i64) as i64,
            landau_term(n, k),
        )])
    })
}

fn landau_term(n: u64, k: u32) -> f64 {
    let x = n as f64;
    let lnln = x.ln().ln();
    if x <= 1.0 || (k > 0 && lnln.is_nan()) {
        return 0.0;
    }
    let factorial: f64 = (1..=k).map(f64::from).product();
    x / (2.0 * x.ln()) * lnln.powi(k as i32) / factorial
}

/// Σ_{k≥0} β_k(Δ̃_n) against n/3.
pub fn report_total_betti_delta_tilde(ns: &[u64], tables: &Tables) -> Result<Vec<ConvergenceRow>> {
    per_n(ns, tables, |n| {
        let b = betti_delta_tilde(n, tables)?;
        Ok(vec![ConvergenceRow::new(
            "total_betti_delta_tilde",
            n,
            b.total() as i64,
            n as f64 / 3.0,
        )])
    })
}

/// M(n) and L(n) scaled by √n and by n. Samples beyond the tables are
/// streamed through the segmented sieve.
pub fn report_growth_traces(
    ns: &[u64],
    tables: &Tables,
    segment_len: usize,
) -> Result<Vec<ConvergenceRow>> {
    let limit = tables.summatory.limit();
    let beyond: Vec<u64> = ns.iter().copied().filter(|&n| n > limit).collect();
    let streamed = summatory_samples(&beyond, segment_len);
    let mut rest = streamed.iter();
    let mut rows = Vec::with_capacity(4 * ns.len());
    for &n in ns {
        let (m, l) = if n > limit {
            let &(_, m, l) = rest.next().expect("one streamed sample per large n");
            (m, l)
        } else if n == 0 {
            (0, 0)
        } else {
            (tables.summatory.mertens(n)?, tables.summatory.liouville(n)?)
        };
        let x = n as f64;
        rows.push(ConvergenceRow::new("mertens_over_sqrt_n", n, m, x.sqrt()));
        rows.push(ConvergenceRow::new("liouville_over_sqrt_n", n, l, x.sqrt()));
        rows.push(ConvergenceRow::new("mertens_over_n", n, m, x));
        rows.push(ConvergenceRow::new("liouville_over_n", n, l, x));
    }
    Ok(rows)
}

/// σ(n) against 6n/π², followed by one row per n giving the most common
/// face dimension of Δ_n against ⌊ln ln n⌋.
pub fn report_sqfree_density(ns: &[u64], tables: &Tables) -> Result<Vec<ConvergenceRow>> {
    for &n in ns {
        ensure_in_range(n, tables.limit())?;
    }
    let rows: Vec<Vec<ConvergenceRow>> = ns
        .par_iter()
        .map(|&n| {
            let histogram = weight_histogram(n, tables);
            let sigma: u64 = histogram.iter().sum();
            let x = n as f64;
            let mut out = vec![ConvergenceRow::new(
                "sqfree_count",
                n,
                sigma as i64,
                6.0 * x / (PI * PI),
            )];
            if let Some(d) = modal_dimension(&histogram) {
                let predicted = if n >= 3 { x.ln().ln().floor() } else { 0.0 };
                out.push(ConvergenceRow::new("modal_face_dim", n, d, predicted));
            }
            out
        })
        .collect();
    Ok(rows.into_iter().flatten().collect())
}

/// `h[w]` = number of squarefree k ≤ n with Ω(k) = w.
pub fn weight_histogram(n: u64, tables: &Tables) -> Vec<u64> {
    let table = &tables.sieve;
    let mut h = vec![0u64; table.max_omega() as usize + 1];
    for k in 1..=n.min(table.limit()) {
        if table.is_squarefree(k) {
            h[table.omega(k) as usize] += 1;
        }
    }
    h
}

/// Dimension (weight − 1) of the most common face; the smaller one on a tie.
pub fn modal_dimension(histogram: &[u64]) -> Option<i64> {
    let (w, &count) = histogram.iter().enumerate().rev().max_by_key(|&(_, c)| c)?;
    (count > 0).then_some(w as i64 - 1)
}

pub fn modal_face_dimension(n: u64, tables: &Tables) -> Result<Option<i64>> {
    ensure_in_range(n, tables.limit())?;
    Ok(modal_dimension(&weight_histogram(n, tables)))
}

pub fn write_csv<W: Write>(rows: &[ConvergenceRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "quantity",
        "n",
        "measured",
        "predicted",
        "ratio",
        "residual",
    ])?;
    for r in rows {
        out.write_record([
            r.quantity.clone(),
            r.n.to_string(),
            r.measured.to_string(),
            r.predicted.to_string(),
            r.ratio.map_or(String::new(), |x| x.to_string()),
            r.residual.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn write_json<W: Write>(rows: &[ConvergenceRow], mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, rows)?;
    writeln!(w)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::OnceLock;

    fn tables() -> &'static Tables {
        static T: OnceLock<Tables> = OnceLock::new();
        T.get_or_init(|| Tables::build(1_000_000).unwrap())
    }

    #[test]
    fn total_betti_small() {
        let rows = report_total_betti_delta(&[1, 10], tables()).unwrap();
        assert!(rows[0].is_degenerate());
        assert_eq!(rows[1].measured, 1);
        assert!((rows[1].predicted - 2.026_423_672_846_756).abs() < 1e-12);
        assert!((rows[1].ratio.unwrap() - 0.4935).abs() < 1e-3);
    }

    #[test]
    fn total_betti_deviation_shrinks() {
        let ns = [1_000, 10_000, 100_000, 1_000_000];
        let rows = report_total_betti_delta(&ns, tables()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].deviation() < w[0].deviation(), "{w:?}");
        }
        assert!(rows[3].deviation() < 0.01);
    }

    #[test]
    fn tilde_totals() {
        let rows = report_total_betti_delta_tilde(&[1, 4, 1_000, 1_000_000], tables()).unwrap();
        assert!(rows[0].is_degenerate());
        assert_eq!(rows[1].measured, 2);
        assert!(rows[3].deviation() < rows[2].deviation());
        assert!(rows[3].deviation() < 0.02);
    }

    #[test]
    fn parity_rows() {
        let rows = report_parity_betti(&[10, 1_000_000], Which::Delta, tables()).unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!((rows[0].measured, rows[1].measured), (1, 0));
        // b − a = M(n)
        let m = tables().summatory.mertens(1_000_000).unwrap();
        assert_eq!(rows[3].measured - rows[2].measured, m);
        let tilde = report_parity_betti(&[1_000_000], Which::DeltaTilde, tables()).unwrap();
        let l = tables().summatory.liouville(1_000_000).unwrap();
        assert_eq!(tilde[1].measured - tilde[0].measured, l);
        assert!((tilde[0].ratio.unwrap() - 1.0).abs() < 0.05);
    }

    #[test]
    fn fixed_k() {
        let t = tables();
        let rows = report_fixed_k_betti(0, &[10, 1_000_000], t).unwrap();
        assert_eq!(rows[0].measured, 1);
        let primes = (t.sieve.prime_count(1_000_000) - t.sieve.prime_count(500_000)) as i64;
        assert_eq!(rows[1].measured, primes);
        assert!((rows[1].predicted - 1e6 / (2.0 * 1e6f64.ln())).abs() < 1e-6);
        let high = report_fixed_k_betti(9, &[1_000], t).unwrap();
        assert!(high[0].is_degenerate());
    }

    #[test]
    fn growth_traces() {
        let rows = report_growth_traces(&[1, 1_000_000, 1_500_000], tables(), 1 << 16).unwrap();
        assert_eq!(rows[0].ratio, Some(1.0));
        assert_eq!(
            rows[4].measured,
            tables().summatory.mertens(1_000_000).unwrap()
        );
        assert!(rows[7].ratio.unwrap().abs() < 0.01);
        // streamed sample agrees with a direct table
        let big = Tables::build(1_500_000).unwrap();
        assert_eq!(rows[8].measured, big.summatory.mertens(1_500_000).unwrap());
        assert_eq!(
            rows[9].measured,
            big.summatory.liouville(1_500_000).unwrap()
        );
    }

    #[test]
    fn density_and_mode() {
        let rows = report_sqfree_density(&[10, 1_000_000], tables()).unwrap();
        assert_eq!(rows[0].measured, 7);
        assert_eq!(rows[1].quantity, "modal_face_dim");
        assert_eq!(rows[2].measured, 607_926);
        assert!(rows[2].deviation() < 1e-4);
        assert_eq!(modal_dimension(&[0, 0]), None);
        assert_eq!(modal_dimension(&[1, 3, 3]), Some(0));
    }

    #[test]
    fn csv_and_json_agree() {
        let rows = report_total_betti_delta(&[1, 10, 100], tables()).unwrap();
        let mut csv_out = Vec::new();
        write_csv(&rows, &mut csv_out).unwrap();
        let text = String::from_utf8(csv_out).unwrap();
        assert!(text.starts_with("quantity,n,measured,predicted,ratio,residual\n"));
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let back: Vec<ConvergenceRow> = reader
            .records()
            .map(|r| {
                let r = r.unwrap();
                ConvergenceRow {
                    quantity: r[0].to_string(),
                    n: r[1].parse().unwrap(),
                    measured: r[2].parse().unwrap(),
                    predicted: r[3].parse().unwrap(),
                    ratio: (!r[4].is_empty()).then(|| r[4].parse().unwrap()),
                    residual: r[5].parse().unwrap(),
                }
            })
            .collect();
        let mut json = Vec::new();
        write_json(&rows, &mut json).unwrap();
        let from_json: Vec<ConvergenceRow> = serde_json::from_slice(&json).unwrap();
        assert_eq!(back, rows);
        assert_eq!(from_json, rows);
    }
}
