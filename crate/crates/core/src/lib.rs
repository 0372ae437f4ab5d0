//! Right-angled Coxeter groups, their finite quotients and thickened Davis complexes.
//!
//! The crate builds, from a finite 5-large flag complex `X`, the right-angled
//! Coxeter group `W` with nerve `X`, a finite congruence quotient `G` of `W`
//! whose kernel moves every vertex of the thickened Davis complex far enough,
//! the quotient cube complex `Y`, and its thickening `X'`. Every step is
//! checked with exact combinatorics or exact linear algebra.

pub mod antisym;
pub mod coxeter;
pub mod cubical;
pub mod error;
pub mod fixtures;
pub mod homology;
pub mod io;
pub mod pipeline;
pub mod quotient;
pub mod simplicial;

pub use error::{Error, Result};
pub use simplicial::SimplicialComplex;
