use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use serde::Serialize;

use crate::betti::{BettiVector, Method};
use crate::complex::homology::homology_betti;
use crate::complex::model::{Face, SimplicialComplexModel};
use crate::error::{ensure_in_range, Error, Result};
use crate::number::SieveTable;

/// `(variable, exponent)` pairs with strictly increasing variables and
/// positive exponents; the unit monomial is the empty list.
pub type Monomial = Vec<(u32, u32)>;

pub fn degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

/// Unique factorization m = r² · s with s squarefree.
pub fn split_square(m: &Monomial) -> (Monomial, Monomial) {
    let r = m
        .iter()
        .filter(|&&(_, e)| e >= 2)
        .map(|&(v, e)| (v, e / 2))
        .collect();
    let s = m
        .iter()
        .filter(|&&(_, e)| e % 2 == 1)
        .map(|&(v, _)| (v, 1))
        .collect();
    (r, s)
}

pub fn is_full_square(m: &Monomial) -> bool {
    m.iter().all(|&(_, e)| e % 2 == 0)
}

/// A finite set of monomials closed under divisibility.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MulticomplexModel {
    monomials: Vec<Monomial>,
}

impl MulticomplexModel {
    /// Validates the input: well-formed monomials, the unit present and
    /// closure under divisibility. Missing divisors are reported, not added.
    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(monomials: I) -> Result<Self> {
        let mut set: HashSet<Monomial> = HashSet::new();
        for mut m in monomials {
            m.sort_unstable();
            if m.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Domain(format!(
                    "variable repeated in monomial {}",
                    fmt_monomial(&m)
                )));
            }
            if m.iter().any(|&(v, e)| e == 0 || v == 0) {
                return Err(Error::Domain(format!(
                    "variables are 1-based and exponents positive: {}",
                    fmt_monomial(&m)
                )));
            }
            set.insert(m);
        }
        if !set.contains(&Vec::new()) {
            return Err(Error::NotClosed {
                kind: "divisibility",
                detail: "the unit monomial 1 is missing".into(),
            });
        }
        for m in &set {
            for i in 0..m.len() {
                let mut d = m.clone();
                d[i].1 -= 1;
                if d[i].1 == 0 {
                    d.remove(i);
                }
                if !set.contains(&d) {
                    return Err(Error::NotClosed {
                        kind: "divisibility",
                        detail: format!(
                            "{} is present but {} is not",
                            fmt_monomial(m),
                            fmt_monomial(&d)
                        ),
                    });
                }
            }
        }
        let mut monomials: Vec<Monomial> = set.into_iter().collect();
        monomials.sort_unstable_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| a.cmp(b)));
        Ok(Self { monomials })
    }

    /// Parses the text format: one monomial per line, factors `i^e`
    /// separated by spaces, a bare `1` for the unit.
    /// Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut out = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse {
                line: lineno + 1,
                msg,
            };
            if line == "1" {
                out.push(Vec::new());
                continue;
            }
            let mut m = Monomial::new();
            for tok in line.split_whitespace() {
                let (v, e) = tok
                    .split_once('^')
                    .ok_or_else(|| err(format!("factor {tok:?} is not of the form i^e")))?;
                let v: u32 = v
                    .parse()
                    .map_err(|_| err(format!("bad variable in {tok:?}")))?;
                let e: u32 = e
                    .parse()
                    .map_err(|_| err(format!("bad exponent in {tok:?}")))?;
                if v == 0 || e == 0 {
                    return Err(err(format!(
                        "variable and exponent must be positive in {tok:?}"
                    )));
                }
                m.push((v, e));
            }
            m.sort_unstable();
            if m.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(err("variable repeated".into()));
            }
            out.push(m);
        }
        Self::from_monomials(out)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for m in &self.monomials {
            writeln!(s, "{}", fmt_monomial(m)).unwrap();
        }
        s
    }

    /// Monomials ordered by degree, then lexicographically.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials
            .binary_search_by(|x| degree(x).cmp(&degree(m)).then_with(|| x.cmp(m)))
            .is_ok()
    }

    /// For each full square r² ∈ M, the simplicial complex
    /// M_{r²} = {s squarefree : r²s ∈ M}, with faces as variable sets.
    pub fn square_pieces(&self) -> Result<Vec<(Monomial, SimplicialComplexModel)>> {
        let mut groups: BTreeMap<Monomial, Vec<Face>> = BTreeMap::new();
        for m in &self.monomials {
            let (r, s) = split_square(m);
            groups
                .entry(r)
                .or_default()
                .push(s.iter().map(|&(v, _)| v).collect());
        }
        groups
            .into_iter()
            .map(|(r, faces)| Ok((r, SimplicialComplexModel::from_faces(faces)?)))
            .collect()
    }
}

pub fn fmt_monomial(m: &Monomial) -> String {
    if m.is_empty() {
        return "1".into();
    }
    m.iter()
        .map(|(v, e)| format!("{v}^{e}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Exponent vectors of 1..=n under p_i ↦ x_i.
pub fn build_divisor_multicomplex(n: u64, table: &SieveTable) -> Result<MulticomplexModel> {
    ensure_in_range(n, table.limit())?;
    if n == 0 {
        return Err(Error::Domain("the divisor multicomplex needs n ≥ 1".into()));
    }
    let monomials = (1..=n).map(|k| {
        table
            .factorize(k)
            .into_iter()
            .map(|(p, e)| (table.prime_index(p as u64).expect("sieve prime"), e))
            .collect()
    });
    MulticomplexModel::from_monomials(monomials)
}

/// β_k(Γ(M)) = Σ_{r² ∈ M} β_{k − 2|r|}(M_{r²}), each piece's homology taken
/// from the integer Smith normal form.
pub fn multicomplex_betti(m: &MulticomplexModel, face_cap: u64) -> Result<BettiVector> {
    let pieces = m.square_pieces()?;
    let mut values: Vec<u64> = Vec::new();
    for (r, piece) in &pieces {
        let needed = piece.num_faces() as u64;
        if needed > face_cap {
            return Err(Error::FaceCap {
                needed,
                cap: face_cap,
            });
        }
        let shift = 2 * degree(r) as usize;
        for (k, b) in homology_betti(piece).betti.iter() {
            let idx = (k + 1) as usize + shift;
            if values.len() <= idx {
                values.resize(idx + 1, 0);
            }
            values[idx] += b;
        }
    }
    Ok(BettiVector::from_values(0, Method::HomologyOracle, values))
}

/// Cells of Δ̃_n by dimension: k ≤ n gives a cell of dimension Ω(k) − 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellCensus {
    pub n: u64,
    /// `counts[d + 1]` cells of dimension d; `counts[0]` is the cell of k = 1.
    pub counts: Vec<u64>,
}

impl CellCensus {
    pub fn count(&self, d: i64) -> u64 {
        if d < -1 {
            return 0;
        }
        self.counts.get((d + 1) as usize).copied().unwrap_or(0)
    }

    /// Σ_{d ≥ −1} (−1)^d · #cells of dimension d, equal to −L(n).
    pub fn euler_characteristic(&self) -> i64 {
        self.counts
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 1 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The same sum without the (−1)-dimensional cell of k = 1.
    pub fn euler_without_empty_cell(&self) -> i64 {
        self.euler_characteristic() + self.count(-1) as i64
    }
}

pub fn cell_census(n: u64, table: &SieveTable) -> Result<CellCensus> {
    ensure_in_range(n, table.limit())?;
    let mut counts: Vec<u64> = Vec::new();
    for &w in &table.omega_slice()[1..=n as usize] {
        let i = w as usize;
        if counts.len() <= i {
            counts.resize(i + 1, 0);
        }
        counts[i] += 1;
    }
    Ok(CellCensus { n, counts })
}
