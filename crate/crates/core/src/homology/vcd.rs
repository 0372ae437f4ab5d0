//! Cohomological dimension of right-angled Coxeter groups from the chamber.
//!
//! For each spherical `T` two degrees are computed: the top `n` with
//! `H̄^{n-1}(L_{S∖T}) ≠ 0` (full subcomplex of the nerve on the complement) and
//! the top `n` with `H^n(K, K^{S∖T}) ≠ 0`. They must agree.

use serde::{Deserialize, Serialize};

use super::chain::{ChainComplex, HomologyResult};
use super::ring::Coefficients;
use crate::coxeter::{Chamber, RacgSystem};
use crate::error::{Error, Result};
use crate::simplicial::Vertex;

/// Spherical-subset count above which only `T = ∅` is evaluated by default.
pub const FULL_TABLE_LIMIT: usize = 200;

/// `H^*(K, K^{S∖T})`, unreduced. `t` need not be spherical.
pub fn relative_cohomology(
    chamber: &Chamber,
    t: &[Vertex],
    coeff: Coefficients,
) -> Result<HomologyResult> {
    let n = chamber.num_generators() as Vertex;
    if let Some(&bad) = t.iter().find(|&&s| s >= n) {
        return Err(Error::domain(format!("generator index {bad} out of range")));
    }
    let rest: Vec<Vertex> = (0..n).filter(|s| !t.contains(s)).collect();
    let sub = chamber.k_t(&rest);
    ChainComplex::new(&chamber.complex, Some(&sub), false)?.cohomology(coeff)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcdEvidence {
    /// The spherical subset, by generator names.
    pub t: Vec<String>,
    /// Top `n` with `H̄^{n-1}` of the complement nonzero.
    pub nerve_degree: Option<i64>,
    /// Top `n` with `H^n(K, K^{S∖T})` nonzero; `None` when not computed.
    pub pair_degree: Option<i64>,
    pub pair_checked: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VcdReport {
    pub bound: i64,
    /// True when the table covers every spherical subset.
    pub complete: bool,
    pub table: Vec<VcdEvidence>,
}

/// vcd lower bound with the full table when `|𝒮| ≤ FULL_TABLE_LIMIT`, else `T = ∅` only.
pub fn vcd_lower_bound(w: &RacgSystem) -> Result<VcdReport> {
    let full = w.spherical_subsets().len() <= FULL_TABLE_LIMIT;
    vcd_lower_bound_with(w, Coefficients::Integers, full, full)
}

/// `all_subsets` selects the full table; `cross_check` runs the pair formula.
pub fn vcd_lower_bound_with(
    w: &RacgSystem,
    coeff: Coefficients,
    all_subsets: bool,
    cross_check: bool,
) -> Result<VcdReport> {
    let chamber = cross_check.then(|| w.chamber());
    let subsets: &[Vec<Vertex>] = if all_subsets {
        w.spherical_subsets()
    } else {
        &w.spherical_subsets()[..1]
    };
    let n = w.num_generators() as Vertex;
    let mut table = Vec::with_capacity(subsets.len());
    for t in subsets {
        let rest: Vec<Vertex> = (0..n).filter(|s| t.binary_search(s).is_err()).collect();
        let piece = w.nerve().induced_subcomplex(&rest)?;
        let nerve_degree = ChainComplex::new(&piece, None, true)?
            .cohomology(coeff)?
            .top_nonzero_degree()
            .map(|d| d + 1);
        let pair_degree = match &chamber {
            Some(k) => relative_cohomology(k, t, coeff)?.top_nonzero_degree(),
            None => None,
        };
        if cross_check && pair_degree != nerve_degree {
            return Err(Error::InternalConsistency(format!(
                "vcd formulas disagree at T = {}: complement gives {nerve_degree:?}, pair gives {pair_degree:?}",
                w.spherical_name(t)
            )));
        }
        table.push(VcdEvidence {
            t: w.nerve().names_of(t),
            nerve_degree,
            pair_degree,
            pair_checked: cross_check,
        });
    }
    let bound = table
        .iter()
        .filter_map(|e| e.nerve_degree)
        .max()
        .unwrap_or(0);
    Ok(VcdReport {
        bound,
        complete: all_subsets,
        table,
    })
}
