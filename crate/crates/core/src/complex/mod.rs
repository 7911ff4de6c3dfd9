//! Explicit complexes and an independent homology oracle: Δ_n as a face
//! list, generic multicomplexes, boundary matrices and their integer Smith
//! normal forms.

pub mod homology;
pub mod model;
pub mod multicomplex;
pub mod snf;

pub use homology::{homology_betti, BoundaryMatrixSet, HomologyReport};
pub use model::{
    build_delta_complex, verify_shifted, Face, SimplicialComplexModel, DEFAULT_FACE_CAP,
};
pub use multicomplex::{
    build_divisor_multicomplex, cell_census, multicomplex_betti, split_square, CellCensus,
    Monomial, MulticomplexModel,
};
pub use snf::{smith_form, SmithForm, SparseIntMatrix};
