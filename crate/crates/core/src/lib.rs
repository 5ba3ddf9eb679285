//! Exact computations with q-polymatroids.
//!
//! The crate covers finite fields and the subspace lattice of `F_q^n`,
//! q-polymatroids with their duals, restrictions and contractions,
//! characteristic polynomials and weight enumerators, rank-metric codes and
//! their induced q-polymatroids, MacWilliams-type identities, and weighted
//! subspace designs certified by direct verification.
//!
//! All arithmetic is exact: integers and polynomial coefficients are
//! arbitrary precision.

pub mod charpoly;
pub mod codes;
pub mod designs;
pub mod duality;
pub mod field;
pub mod gaussian;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod poly;
pub mod qpm;
pub mod search;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/lattice.md")]
    pub mod lattice {}
    #[doc = include_str!("../../../book/src/qpolymatroids.md")]
    pub mod qpolymatroids {}
    #[doc = include_str!("../../../book/src/charpoly.md")]
    pub mod charpoly {}
    #[doc = include_str!("../../../book/src/codes.md")]
    pub mod codes {}
    #[doc = include_str!("../../../book/src/duality.md")]
    pub mod duality {}
    #[doc = include_str!("../../../book/src/designs.md")]
    pub mod designs {}
    #[doc = include_str!("../../../book/src/search.md")]
    pub mod search {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
