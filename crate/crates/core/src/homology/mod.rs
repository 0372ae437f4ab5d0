//! Exact simplicial (co)homology over the integers, the rationals and prime fields.

pub mod chain;
pub mod ring;
pub mod snf;
pub mod sparse;
pub mod vcd;

pub use chain::{
    betti_compare, betti_numbers, cohomology, homology, ChainComplex, HomologyGroup, HomologyResult,
};
pub use ring::{Coefficients, Integers, PrimeField, Rationals, Ring};
pub use snf::{smith_normal_form, SmithForm};
pub use sparse::SparseIntMatrix;
pub use vcd::{relative_cohomology, vcd_lower_bound, vcd_lower_bound_with, VcdEvidence, VcdReport};
