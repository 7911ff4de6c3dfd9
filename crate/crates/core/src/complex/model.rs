use std::collections::HashSet;

use crate::error::{ensure_in_range, Error, Result};
use crate::number::SieveTable;

/// Default bound on the number of faces an explicit complex may have.
pub const DEFAULT_FACE_CAP: u64 = 100_000;

/// A face as a strictly increasing list of vertex labels.
pub type Face = Vec<u32>;

/// An explicit finite simplicial complex, faces grouped by dimension.
///
/// For Δ_n the vertex labels are prime indices (2 ↦ 1, 3 ↦ 2, 5 ↦ 3, …) so
/// that label order is prime order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplexModel {
    pub n: Option<u64>,
    /// `by_dim[d + 1]` holds the d-dimensional faces, sorted.
    by_dim: Vec<Vec<Face>>,
}

impl SimplicialComplexModel {
    /// Builds a complex from an explicit face list, checking that it is
    /// closed under taking subsets. An empty list gives the void complex.
    pub fn from_faces<I: IntoIterator<Item = Face>>(faces: I) -> Result<Self> {
        let mut all: HashSet<Face> = HashSet::new();
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            all.insert(f);
        }
        for f in &all {
            for i in 0..f.len() {
                let mut sub = f.clone();
                sub.remove(i);
                if !all.contains(&sub) {
                    return Err(Error::NotClosed {
                        kind: "subsets",
                        detail: format!("{f:?} is present but {sub:?} is not"),
                    });
                }
            }
        }
        Ok(Self::from_closed(None, all))
    }

    fn from_closed(n: Option<u64>, faces: impl IntoIterator<Item = Face>) -> Self {
        let mut by_dim: Vec<Vec<Face>> = Vec::new();
        for f in faces {
            if by_dim.len() <= f.len() {
                by_dim.resize(f.len() + 1, Vec::new());
            }
            by_dim[f.len()].push(f);
        }
        for level in &mut by_dim {
            level.sort_unstable();
        }
        Self { n, by_dim }
    }

    /// Dimension, −1 for {∅}; `None` for the void complex.
    pub fn dim(&self) -> Option<i64> {
        (!self.by_dim.is_empty()).then(|| self.by_dim.len() as i64 - 2)
    }

    pub fn faces_of_dim(&self, d: i64) -> &[Face] {
        if d < -1 {
            return &[];
        }
        self.by_dim.get((d + 1) as usize).map_or(&[], Vec::as_slice)
    }

    pub fn faces(&self) -> impl Iterator<Item = &Face> {
        self.by_dim.iter().flatten()
    }

    pub fn num_faces(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    /// f_j for j ≥ −1, `f[0]` the empty face.
    pub fn f_vector(&self) -> Vec<u64> {
        self.by_dim.iter().map(|l| l.len() as u64).collect()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.faces_of_dim(0).iter().map(|f| f[0]).collect()
    }

    pub fn contains(&self, face: &[u32]) -> bool {
        self.by_dim
            .get(face.len())
            .is_some_and(|l| l.binary_search_by(|f| f.as_slice().cmp(face)).is_ok())
    }

    /// First violation of shiftedness: a face F, a vertex j ∈ F and a
    /// smaller vertex i ∉ F with (F ∖ {j}) ∪ {i} missing.
    pub fn shifted_violation(&self) -> Option<(Face, u32, u32)> {
        let vertices = self.vertices();
        for f in self.faces() {
            for &j in f {
                for &i in vertices.iter().take_while(|&&i| i < j) {
                    if f.binary_search(&i).is_ok() {
                        continue;
                    }
                    let mut g: Face = f.iter().copied().filter(|&v| v != j).collect();
                    let pos = g.partition_point(|&v| v < i);
                    g.insert(pos, i);
                    if !self.contains(&g) {
                        return Some((f.clone(), j, i));
                    }
                }
            }
        }
        None
    }
}

/// True iff swapping any vertex of any face for a smaller absent vertex
/// stays inside the complex.
pub fn verify_shifted(c: &SimplicialComplexModel) -> bool {
    c.shifted_violation().is_none()
}

/// Δ_n with prime-index vertex labels, the empty face included.
pub fn build_delta_complex(
    n: u64,
    table: &SieveTable,
    face_cap: u64,
) -> Result<SimplicialComplexModel> {
    ensure_in_range(n, table.limit())?;
    let needed = (1..=n).filter(|&k| table.is_squarefree(k)).count() as u64;
    if needed > face_cap {
        return Err(Error::FaceCap {
            needed,
            cap: face_cap,
        });
    }
    let faces = (1..=n).filter(|&k| table.is_squarefree(k)).map(|k| {
        table
            .factorize(k)
            .into_iter()
            .map(|(p, _)| table.prime_index(p as u64).expect("sieve prime"))
            .collect::<Face>()
    });
    Ok(SimplicialComplexModel::from_closed(Some(n), faces))
}
