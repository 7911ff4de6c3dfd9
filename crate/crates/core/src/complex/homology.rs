use std::collections::HashMap;

use num_bigint::BigUint;
use serde::Serialize;

use crate::betti::{BettiVector, Method};
use crate::complex::model::SimplicialComplexModel;
use crate::complex::snf::{smith_form, SparseIntMatrix};

/// Augmented simplicial boundary maps. `maps[j]` is ∂_j from j-faces to
/// (j−1)-faces for j = 0..=dim, so ∂_0 sends each vertex to the empty face.
#[derive(Clone, Debug)]
pub struct BoundaryMatrixSet {
    maps: Vec<SparseIntMatrix>,
}

impl BoundaryMatrixSet {
    pub fn build(c: &SimplicialComplexModel) -> Self {
        let Some(dim) = c.dim() else {
            return Self { maps: Vec::new() };
        };
        let mut maps = Vec::new();
        for j in 0..=dim {
            let lower = c.faces_of_dim(j - 1);
            let index: HashMap<&[u32], usize> = lower
                .iter()
                .enumerate()
                .map(|(i, f)| (f.as_slice(), i))
                .collect();
            let columns = c
                .faces_of_dim(j)
                .iter()
                .map(|f| {
                    (0..f.len())
                        .map(|i| {
                            let mut sub = f.clone();
                            sub.remove(i);
                            let sign = if i % 2 == 0 { 1 } else { -1 };
                            (index[sub.as_slice()], sign)
                        })
                        .collect()
                })
                .collect();
            maps.push(SparseIntMatrix::from_columns(lower.len(), columns));
        }
        Self { maps }
    }

    /// ∂_j, for 0 ≤ j ≤ dim.
    pub fn map(&self, j: usize) -> Option<&SparseIntMatrix> {
        self.maps.get(j)
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// ∂_{j−1} ∘ ∂_j = 0 for every j.
    pub fn is_chain_complex(&self) -> bool {
        self.maps
            .windows(2)
            .all(|w| w[0].checked_mul(&w[1]).is_some_and(|p| p.is_zero()))
    }
}

/// Reduced integral homology of an explicit complex.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub betti: BettiVector,
    /// `(k, invariant factors > 1 of H̃_k)`, only for k with torsion.
    pub torsion: Vec<(i64, Vec<String>)>,
    pub bigint_fallback: bool,
}

impl HomologyReport {
    pub fn torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }
}

/// Reduced Betti numbers and torsion from the Smith normal forms of the
/// augmented boundary maps.
pub fn homology_betti(c: &SimplicialComplexModel) -> HomologyReport {
    let boundaries = BoundaryMatrixSet::build(c);
    let forms: Vec<_> = boundaries.maps.iter().map(smith_form).collect();
    let rank = |j: usize| forms.get(j).map_or(0, |f| f.rank());
    let f = c.f_vector();
    // chain group C_k sits at f[k + 1]; ∂_{k} is forms[k] for k ≥ 0
    let values: Vec<u64> = (0..f.len())
        .map(|i| {
            let boundary_rank = if i == 0 { 0 } else { rank(i - 1) };
            let incoming_rank = rank(i);
            f[i] - boundary_rank as u64 - incoming_rank as u64
        })
        .collect();
    let mut torsion = Vec::new();
    for (j, form) in forms.iter().enumerate() {
        // torsion of H̃_{j−1} comes from the image of ∂_j
        let t: Vec<BigUint> = form.torsion();
        if !t.is_empty() {
            torsion.push((j as i64 - 1, t.iter().map(ToString::to_string).collect()));
        }
    }
    HomologyReport {
        betti: BettiVector::from_values(c.n.unwrap_or(0), Method::HomologyOracle, values),
        torsion,
        bigint_fallback: forms.iter().any(|f| f.bigint_fallback),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::model::{build_delta_complex, Face, DEFAULT_FACE_CAP};
    use crate::number::SieveTable;

    fn closure(maximal: &[&[u32]]) -> SimplicialComplexModel {
        let mut faces: Vec<Face> = Vec::new();
        for m in maximal {
            for mask in 0u32..(1 << m.len()) {
                faces.push(
                    (0..m.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| m[i])
                        .collect(),
                );
            }
        }
        SimplicialComplexModel::from_faces(faces).unwrap()
    }

    #[test]
    fn delta_ten_two_components() {
        let t = SieveTable::build(10).unwrap();
        let c = build_delta_complex(10, &t, DEFAULT_FACE_CAP).unwrap();
        let h = homology_betti(&c);
        assert_eq!(h.betti.values(), &[0, 1]);
        assert!(h.torsion_free());
        assert!(BoundaryMatrixSet::build(&c).is_chain_complex());
    }

    #[test]
    fn delta_one() {
        let t = SieveTable::build(1).unwrap();
        let c = build_delta_complex(1, &t, DEFAULT_FACE_CAP).unwrap();
        assert_eq!(homology_betti(&c).betti.values(), &[1]);
    }

    #[test]
    fn void_complex_has_no_homology() {
        let c = SimplicialComplexModel::from_faces(Vec::<Face>::new()).unwrap();
        let h = homology_betti(&c);
        assert!(h.betti.values().is_empty());
    }

    #[test]
    fn circle_and_sphere() {
        let circle = closure(&[&[1, 2], &[2, 3], &[1, 3]]);
        assert_eq!(homology_betti(&circle).betti.values(), &[0, 0, 1]);
        let sphere = closure(&[&[1, 2, 3], &[1, 2, 4], &[1, 3, 4], &[2, 3, 4]]);
        assert_eq!(homology_betti(&sphere).betti.values(), &[0, 0, 0, 1]);
        let disk = closure(&[&[1, 2, 3]]);
        assert!(homology_betti(&disk).betti.values().is_empty());
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // six-vertex RP²
        let rp2 = closure(&[
            &[1, 2, 3],
            &[1, 3, 4],
            &[1, 4, 5],
            &[1, 5, 6],
            &[1, 2, 6],
            &[2, 3, 5],
            &[3, 4, 6],
            &[2, 4, 5],
            &[3, 5, 6],
            &[2, 4, 6],
        ]);
        let h = homology_betti(&rp2);
        assert!(h.betti.values().is_empty());
        assert_eq!(h.torsion, vec![(1, vec!["2".to_string()])]);
        assert!(BoundaryMatrixSet::build(&rp2).is_chain_complex());
    }
}
