//! Dense complex linear algebra used by the rest of the crate.

mod decomp;
mod matrix;
mod products;
mod structure;
pub mod text;

pub use decomp::{least_squares, numerical_rank, singular_values, DEFAULT_RANK_TOL};
pub use matrix::{CMatrix, CVector};
pub use products::{khatri_rao, kron};
pub use structure::{
    coherence, kruskal_rank, kruskal_rank_with, normalize_columns, KruskalOptions,
    DEFAULT_SUBSET_BUDGET,
};
