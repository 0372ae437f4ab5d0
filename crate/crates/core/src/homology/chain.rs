//! Simplicial chain complexes and their (co)homology.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ring::{Coefficients, PrimeField, Rationals};
use super::snf::smith_normal_form;
use super::sparse::{rank, SparseIntMatrix};
use crate::error::{Error, Result};
use crate::simplicial::{SimplicialComplex, Vertex};

/// Oriented simplicial chain complex. Simplices are oriented by increasing
/// vertex index. Degree `-1` exists only for augmented (reduced) complexes and
/// holds the empty simplex.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    min_degree: i64,
    /// Basis of `C_d` at position `d - min_degree`.
    bases: Vec<Vec<Vec<Vertex>>>,
    /// `boundaries[i]` is `∂ : C_{d} → C_{d-1}` with `d = min_degree + i`; the first is `0 × |C_min|`.
    boundaries: Vec<SparseIntMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub degree: i64,
    pub rank: usize,
    /// Torsion invariant factors (integer coefficients only).
    #[serde(skip_serializing_if = "Vec::is_empty", default, with = "decimal")]
    pub torsion: Vec<BigInt>,
}

/// Big integers as decimal strings.
mod decimal {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<String>::deserialize(d)?
            .iter()
            .map(|x| x.parse().map_err(D::Error::custom))
            .collect()
    }
}

impl HomologyGroup {
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyResult {
    pub coefficients: Coefficients,
    pub reduced: bool,
    pub cohomology: bool,
    pub groups: Vec<HomologyGroup>,
}

impl HomologyResult {
    pub fn group(&self, degree: i64) -> HomologyGroup {
        self.groups
            .iter()
            .find(|g| g.degree == degree)
            .cloned()
            .unwrap_or(HomologyGroup {
                degree,
                rank: 0,
                torsion: Vec::new(),
            })
    }

    pub fn betti(&self) -> Vec<usize> {
        let top = self.groups.iter().map(|g| g.degree).max().unwrap_or(-1);
        (0..=top.max(-1)).map(|d| self.group(d).rank).collect()
    }

    /// Highest degree with a nonzero group.
    pub fn top_nonzero_degree(&self) -> Option<i64> {
        self.groups
            .iter()
            .filter(|g| !g.is_zero())
            .map(|g| g.degree)
            .max()
    }
}

impl ChainComplex {
    /// Chain complex of `x`, optionally relative to the subcomplex `sub` (given on
    /// vertex names of `x`) and optionally augmented. Relative to a nonempty
    /// subcomplex the augmentation is absorbed, as the empty simplex lies in it.
    pub fn new(
        x: &SimplicialComplex,
        sub: Option<&SimplicialComplex>,
        reduced: bool,
    ) -> Result<Self> {
        let mut simplices: Vec<Vec<Vec<Vertex>>> = x.simplices();
        let mut drop_empty = false;
        if let Some(a) = sub {
            let ids = x.vertices_by_name(a.names())?;
            for f in a.facets() {
                let mapped: Vec<Vertex> = f.iter().map(|&v| ids[v as usize]).collect();
                if !x.is_simplex(&mapped) {
                    return Err(Error::domain(format!(
                        "{:?} is not a simplex of the ambient complex",
                        a.names_of(f)
                    )));
                }
            }
            if a.num_vertices() > 0 {
                drop_empty = true;
                let mut to_sub: Vec<Option<Vertex>> = vec![None; x.num_vertices()];
                for (local, &v) in ids.iter().enumerate() {
                    to_sub[v as usize] = Some(local as Vertex);
                }
                for dim in simplices.iter_mut() {
                    dim.retain(|s| {
                        let local: Option<Vec<Vertex>> =
                            s.iter().map(|&v| to_sub[v as usize]).collect();
                        local.map_or(true, |l| !a.is_simplex(&l))
                    });
                }
            }
        }
        let augmented = reduced && !drop_empty;
        let min_degree = if augmented { -1 } else { 0 };
        let mut bases: Vec<Vec<Vec<Vertex>>> = Vec::new();
        if augmented {
            bases.push(vec![Vec::new()]);
        }
        bases.extend(simplices);
        while bases.len() > 1 && bases.last().is_some_and(|b| b.is_empty()) {
            bases.pop();
        }
        Ok(Self::from_bases(min_degree, bases))
    }

    fn from_bases(min_degree: i64, bases: Vec<Vec<Vec<Vertex>>>) -> Self {
        let mut boundaries = Vec::with_capacity(bases.len());
        for (i, basis) in bases.iter().enumerate() {
            if i == 0 {
                boundaries.push(SparseIntMatrix::zeros(0, basis.len()));
                continue;
            }
            let lower = &bases[i - 1];
            let index: HashMap<&[Vertex], usize> = lower
                .iter()
                .enumerate()
                .map(|(k, s)| (s.as_slice(), k))
                .collect();
            let mut t = Vec::with_capacity(basis.len() * (basis.first().map_or(0, Vec::len)));
            for (col, s) in basis.iter().enumerate() {
                for skip in 0..s.len() {
                    let face: Vec<Vertex> = s
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| *k != skip)
                        .map(|(_, v)| *v)
                        .collect();
                    if let Some(&row) = index.get(face.as_slice()) {
                        t.push((row, col, if skip % 2 == 0 { 1 } else { -1 }));
                    }
                }
            }
            boundaries.push(SparseIntMatrix::from_i64_triplets(
                lower.len(),
                basis.len(),
                t,
            ));
        }
        ChainComplex {
            min_degree,
            bases,
            boundaries,
        }
    }

    pub fn min_degree(&self) -> i64 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i64 {
        self.min_degree + self.bases.len() as i64 - 1
    }

    /// Basis of `C_d`; empty outside the complex.
    pub fn basis(&self, d: i64) -> &[Vec<Vertex>] {
        let i = d - self.min_degree;
        if i < 0 || i as usize >= self.bases.len() {
            return &[];
        }
        &self.bases[i as usize]
    }

    pub fn rank_of_chains(&self, d: i64) -> usize {
        self.basis(d).len()
    }

    /// `∂_d : C_d → C_{d-1}`.
    pub fn boundary(&self, d: i64) -> SparseIntMatrix {
        let i = d - self.min_degree;
        if i < 0 || i as usize >= self.bases.len() {
            return SparseIntMatrix::zeros(self.rank_of_chains(d - 1), self.rank_of_chains(d));
        }
        self.boundaries[i as usize].clone()
    }

    /// Index of a simplex in the basis of its degree.
    pub fn index_of(&self, simplex: &[Vertex]) -> Option<usize> {
        let d = simplex.len() as i64 - 1;
        self.basis(d)
            .binary_search_by(|s| s.as_slice().cmp(simplex))
            .ok()
    }

    /// Checks `∂∂ = 0` in every degree.
    pub fn verify(&self) -> Result<()> {
        for d in self.min_degree + 1..=self.max_degree() {
            let dd = self.boundary(d - 1).mul(&self.boundary(d));
            if !dd.is_zero() {
                return Err(Error::InternalConsistency(format!(
                    "boundary squares to nonzero in degree {d}"
                )));
            }
        }
        Ok(())
    }

    fn field_rank(&self, coeff: Coefficients, d: i64) -> Result<usize> {
        let m = self.boundary(d);
        if m.is_zero() {
            return Ok(0);
        }
        Ok(match coeff {
            Coefficients::Rationals => rank(&Rationals, &m),
            Coefficients::Prime(p) => rank(&PrimeField::new(p)?, &m),
            Coefficients::Integers => smith_normal_form(&m, false).rank(),
        })
    }

    pub fn homology(&self, coeff: Coefficients) -> Result<HomologyResult> {
        self.compute(coeff, false)
    }

    pub fn cohomology(&self, coeff: Coefficients) -> Result<HomologyResult> {
        self.compute(coeff, true)
    }

    fn compute(&self, coeff: Coefficients, cohomology: bool) -> Result<HomologyResult> {
        let lo = self.min_degree;
        let hi = self.max_degree();
        let mut ranks = HashMap::new();
        let mut torsion: HashMap<i64, Vec<BigInt>> = HashMap::new();
        for d in lo..=hi + 1 {
            if coeff == Coefficients::Integers {
                let m = self.boundary(d);
                let s = smith_normal_form(&m, false);
                ranks.insert(d, s.rank());
                torsion.insert(d, s.torsion());
            } else {
                ranks.insert(d, self.field_rank(coeff, d)?);
            }
        }
        let groups = (lo..=hi)
            .map(|d| {
                let rank = self.rank_of_chains(d) - ranks[&d] - ranks[&(d + 1)];
                // Homology torsion in degree d comes from ∂_{d+1}, cohomology torsion from ∂_d.
                let tors = if cohomology {
                    torsion.get(&d)
                } else {
                    torsion.get(&(d + 1))
                };
                HomologyGroup {
                    degree: d,
                    rank,
                    torsion: tors.cloned().unwrap_or_default(),
                }
            })
            .collect();
        Ok(HomologyResult {
            coefficients: coeff,
            reduced: lo == -1,
            cohomology,
            groups,
        })
    }
}

/// Homology of a complex in all degrees.
pub fn homology(
    x: &SimplicialComplex,
    coeff: Coefficients,
    reduced: bool,
) -> Result<HomologyResult> {
    ChainComplex::new(x, None, reduced)?.homology(coeff)
}

pub fn cohomology(
    x: &SimplicialComplex,
    coeff: Coefficients,
    reduced: bool,
) -> Result<HomologyResult> {
    ChainComplex::new(x, None, reduced)?.cohomology(coeff)
}

/// Unreduced Betti numbers.
pub fn betti_numbers(x: &SimplicialComplex, coeff: Coefficients) -> Result<Vec<usize>> {
    Ok(homology(x, coeff, false)?.betti())
}

/// Whether two complexes have the same Betti numbers in every degree.
pub fn betti_compare(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    coeff: Coefficients,
) -> Result<bool> {
    let mut x = betti_numbers(a, coeff)?;
    let mut y = betti_numbers(b, coeff)?;
    while x.last() == Some(&0) {
        x.pop();
    }
    while y.last() == Some(&0) {
        y.pop();
    }
    Ok(x == y)
}

/// Universal coefficients: `dim H_n(F_p) = b_n + #{p | t} over torsion of H_n and H_{n-1}`.
pub fn check_universal_coefficients(x: &SimplicialComplex, p: u64, reduced: bool) -> Result<()> {
    let z = homology(x, Coefficients::Integers, reduced)?;
    let f = homology(x, Coefficients::Prime(p), reduced)?;
    let q = homology(x, Coefficients::Rationals, reduced)?;
    let pb = BigInt::from(p);
    let divisible = |g: &HomologyGroup| g.torsion.iter().filter(|t| t.is_multiple_of(&pb)).count();
    for g in &z.groups {
        let want = g.rank + divisible(g) + divisible(&z.group(g.degree - 1));
        if f.group(g.degree).rank != want || q.group(g.degree).rank != g.rank {
            return Err(Error::InternalConsistency(format!(
                "universal coefficients fail in degree {} for p = {p}",
                g.degree
            )));
        }
    }
    Ok(())
}
