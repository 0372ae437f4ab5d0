//! Orientations of `Y = H\Σ`, antisymmetrization of cochains, and the
//! certificate that the lifted relative class is nontrivial in `H^*(Y)`.
//!
//! A simplex of the standard triangulation of `Y` is a chain of cubes. Cube
//! `cube_at(g, T)` is the coset `g·φ(W_T)`, so a chain is `g·σ` for a simplex
//! `σ` of the chamber `K` (a chain of spherical subsets). The chamber of a chain
//! is the smallest corner of its bottom cube.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::coxeter::Chamber;
use crate::error::{Error, Result};
use crate::homology::sparse::{nullspace, solve};
use crate::homology::{ChainComplex, Rationals};
use crate::quotient::QuotientDavis;
use crate::simplicial::{SimplicialComplex, Vertex};

/// Simplex count of the triangulation of `Y` up to which the direct linear solve runs.
pub const DIRECT_SOLVE_LIMIT: usize = 250_000;

/// `ε : G → {±1}`, one sign per chamber.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orientation {
    pub values: Vec<i8>,
}

impl Orientation {
    pub fn sign(&self, g: u32) -> i8 {
        self.values[g as usize]
    }
}

/// `ε(g) = (-1)^{l(g)}`, checked across every mirror on both sides.
pub fn orientation(y: &QuotientDavis) -> Result<Orientation> {
    let q = &y.quotient;
    if !q.is_orientable() {
        return Err(Error::domain(
            "quotient has an odd-length kernel element; apply orientable_refinement first",
        ));
    }
    let values: Vec<i8> = (0..q.order() as u32)
        .map(|g| if q.word_length(g) % 2 == 0 { 1 } else { -1 })
        .collect();
    for g in 0..q.order() as u32 {
        for s in 0..q.num_generators() as Vertex {
            let r = q.right_mul(g, s);
            let l = q.left_mul(s, g);
            if values[r as usize] != -values[g as usize]
                || values[l as usize] != -values[g as usize]
            {
                return Err(Error::Verification(format!(
                    "orientation does not flip across the {s}-mirror of g{g}"
                )));
            }
        }
    }
    Ok(Orientation { values })
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// A cochain on a fixed basis (a degree of some chain complex).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cochain {
    pub degree: i64,
    pub values: Vec<BigRational>,
}

impl Cochain {
    pub fn zero(degree: i64, len: usize) -> Self {
        Cochain {
            degree,
            values: vec![BigRational::zero(); len],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Zero::is_zero)
    }
}

fn coboundary_on(chain: &ChainComplex, h: &Cochain) -> Cochain {
    let d = chain.boundary(h.degree + 1);
    let mut out = Cochain::zero(h.degree + 1, d.cols());
    for (r, c, v) in d.entries() {
        if !h.values[*r].is_zero() {
            out.values[*c] += BigRational::from_integer(v.clone()) * &h.values[*r];
        }
    }
    out
}

/// The standard triangulation of `Y`, materialized.
pub struct TriangulatedQuotient<'a> {
    pub y: &'a QuotientDavis,
    pub complex: SimplicialComplex,
    pub chain: ChainComplex,
}

impl<'a> TriangulatedQuotient<'a> {
    pub fn new(y: &'a QuotientDavis) -> Result<Self> {
        let complex = y.complex.chambered_triangulation().complex;
        let chain = ChainComplex::new(&complex, None, false)?;
        Ok(TriangulatedQuotient { y, complex, chain })
    }

    pub fn num_chambers(&self) -> usize {
        self.y.quotient.order()
    }

    /// `g·σ` as a chain of cube ids.
    pub fn simplex(&self, g: u32, sigma: &[Vertex]) -> Vec<Vertex> {
        sigma
            .iter()
            .map(|&t| self.y.cube_at(g, t as usize))
            .collect()
    }

    /// Chamber and model simplex of a chain of cubes.
    pub fn decompose(&self, tau: &[Vertex]) -> (u32, Vec<Vertex>) {
        let g = self.y.anchor(tau[0]);
        (
            g,
            tau.iter().map(|&c| self.y.cube_type(c) as Vertex).collect(),
        )
    }

    pub fn basis(&self, degree: i64) -> &[Vec<Vertex>] {
        self.chain.basis(degree)
    }

    fn value(&self, h: &Cochain, g: u32, sigma: &[Vertex]) -> BigRational {
        let tau = self.simplex(g, sigma);
        let i = self.chain.index_of(&tau).expect("g·σ is a simplex of Y");
        h.values[i].clone()
    }

    /// `a(ε, h, σ) = Σ_g ε(g) h(g·σ)`.
    pub fn a(&self, eps: &Orientation, h: &Cochain, sigma: &[Vertex]) -> BigRational {
        (0..self.num_chambers() as u32)
            .map(|g| {
                let v = self.value(h, g, sigma);
                if eps.sign(g) > 0 {
                    v
                } else {
                    -v
                }
            })
            .fold(BigRational::zero(), |a, b| a + b)
    }

    /// `a_ε(h)(g·σ) = ε(g)/|G| · a(ε, h, σ)`.
    pub fn antisymmetrize(&self, eps: &Orientation, h: &Cochain) -> Cochain {
        let n = q(self.num_chambers() as i64);
        let mut cache: HashMap<Vec<Vertex>, BigRational> = HashMap::new();
        let values = self
            .basis(h.degree)
            .iter()
            .map(|tau| {
                let (g, sigma) = self.decompose(tau);
                let a = cache
                    .entry(sigma.clone())
                    .or_insert_with(|| self.a(eps, h, &sigma) / &n)
                    .clone();
                if eps.sign(g) > 0 {
                    a
                } else {
                    -a
                }
            })
            .collect();
        Cochain {
            degree: h.degree,
            values,
        }
    }

    pub fn coboundary(&self, h: &Cochain) -> Cochain {
        coboundary_on(&self.chain, h)
    }

    /// `δ a_ε(h) = a_ε(δh)` and `a_ε(a_ε(h)) = a_ε(h)`, exactly.
    pub fn check_prop_a(&self, eps: &Orientation, h: &Cochain) -> Result<()> {
        let ah = self.antisymmetrize(eps, h);
        if self.coboundary(&ah) != self.antisymmetrize(eps, &self.coboundary(h)) {
            return Err(Error::InternalConsistency(format!(
                "antisymmetrization does not commute with δ in degree {}",
                h.degree
            )));
        }
        if self.antisymmetrize(eps, &ah) != ah {
            return Err(Error::InternalConsistency(format!(
                "antisymmetrization is not idempotent in degree {}",
                h.degree
            )));
        }
        Ok(())
    }

    /// A cochain of `(K, K^S)` placed in the chamber of the identity.
    pub fn place_in_base_chamber(&self, pair: &ChamberPair, f: &Cochain) -> Cochain {
        let mut out = Cochain::zero(f.degree, self.basis(f.degree).len());
        for (sigma, v) in pair.basis(f.degree).iter().zip(&f.values) {
            if !v.is_zero() {
                let i = self
                    .chain
                    .index_of(&self.simplex(0, sigma))
                    .expect("base chamber simplex");
                out.values[i] = v.clone();
            }
        }
        out
    }

    /// `g(σ) = a(ε, a_ε(g'), σ) / |G|` on the relative basis of `K`.
    pub fn pull_back(&self, pair: &ChamberPair, eps: &Orientation, g_prime: &Cochain) -> Cochain {
        let ag = self.antisymmetrize(eps, g_prime);
        let n = q(self.num_chambers() as i64);
        Cochain {
            degree: g_prime.degree,
            values: pair
                .basis(g_prime.degree)
                .iter()
                .map(|s| self.a(eps, &ag, s) / &n)
                .collect(),
        }
    }
}

/// The pair `(K, K^S)` with its relative chain complex. Relative simplices are
/// the chains through the cone point `∅` (chamber vertex 0).
pub struct ChamberPair {
    pub chamber: Chamber,
    pub chain: ChainComplex,
}

/// A relative cocycle together with a relative cycle it does not annihilate.
#[derive(Clone, Debug)]
pub struct RelativeClass {
    pub f: Cochain,
    /// Integral relative cycle with `f(z0) = 1`.
    pub z0: Vec<BigInt>,
}

impl ChamberPair {
    pub fn new(chamber: Chamber) -> Result<Self> {
        let boundary = chamber.boundary();
        let chain = ChainComplex::new(&chamber.complex, Some(&boundary), false)?;
        Ok(ChamberPair { chamber, chain })
    }

    pub fn basis(&self, degree: i64) -> &[Vec<Vertex>] {
        self.chain.basis(degree)
    }

    pub fn coboundary(&self, f: &Cochain) -> Cochain {
        coboundary_on(&self.chain, f)
    }

    pub fn is_cocycle(&self, f: &Cochain) -> bool {
        self.coboundary(f).is_zero()
    }

    /// A generator-like class in `H^degree(K, K^S; ℚ)`, if that group is nonzero.
    pub fn nontrivial_class(&self, degree: i64) -> Option<RelativeClass> {
        let d = self.chain.boundary(degree);
        let up = self.chain.boundary(degree + 1);
        for z in nullspace(&Rationals, &d) {
            if solve(&Rationals, &up, &z).is_some() {
                continue;
            }
            let z0 = integral(&z);
            return Some(RelativeClass {
                f: self.dual_cocycle(degree, &z0)?,
                z0,
            });
        }
        None
    }

    /// A cocycle `f` with `f(z) = 1`, if one exists.
    fn dual_cocycle(&self, degree: i64, z: &[BigInt]) -> Option<Cochain> {
        let up = self.chain.boundary(degree + 1);
        let rows = up.cols();
        let mut t: Vec<(usize, usize, BigInt)> = up
            .entries()
            .iter()
            .map(|(r, c, v)| (*c, *r, v.clone()))
            .collect();
        for (i, v) in z.iter().enumerate() {
            if !v.is_zero() {
                t.push((rows, i, v.clone()));
            }
        }
        let a = crate::homology::SparseIntMatrix::from_triplets(rows + 1, z.len(), t);
        let mut b = vec![BigRational::zero(); rows + 1];
        b[rows] = BigRational::one();
        solve(&Rationals, &a, &b).map(|values| Cochain { degree, values })
    }

    /// Evaluates a relative cochain on an integral chain.
    pub fn pair(&self, f: &Cochain, z: &[BigInt]) -> BigRational {
        f.values
            .iter()
            .zip(z)
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| v * BigRational::from_integer(c.clone()))
            .fold(BigRational::zero(), |a, b| a + b)
    }
}

/// Clears denominators and divides by the content.
fn integral(v: &[BigRational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v
        .iter()
        .map(|x| (x * BigRational::from_integer(l.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        ints
    } else {
        ints.into_iter().map(|x| x / &g).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    /// Degree of `f` and `f'`.
    pub degree: i64,
    pub group_order: usize,
    pub delta_f_prime_zero: bool,
    pub nontrivial: bool,
    /// `"linear-solve"` when the direct solve ran, `"transfer"` otherwise.
    pub method: String,
    /// `⟨f', z⟩` for the transferred cycle `z = Σ ε(g) g·z0`, when one exists.
    pub pairing: Option<String>,
    pub transfer_is_cycle: Option<bool>,
    /// Outcome of the direct solve of `δg' = f'` (`true` if solvable).
    pub coboundary_solvable: Option<bool>,
    /// The pulled-back `g` satisfied `δg = f` (only when `g'` exists).
    pub pull_back_checked: Option<bool>,
}

/// Lifts a relative cocycle `f` of `(K, K^S)` to `f' = |G|·a_ε(f)` on `Y` and
/// decides whether `[f'] ≠ 0`.
pub fn lift_and_certify(
    y: &QuotientDavis,
    eps: &Orientation,
    pair: &ChamberPair,
    f: &Cochain,
    direct_limit: usize,
) -> Result<Certificate> {
    let degree = f.degree;
    if f.values.len() != pair.basis(degree).len() {
        return Err(Error::domain("cochain does not match the relative basis"));
    }
    if !pair.is_cocycle(f) {
        return Err(Error::domain(format!(
            "f is not a relative cocycle of degree {degree}"
        )));
    }
    let order = y.quotient.order();
    let k_all = pair.chamber.complex.simplices();
    let rel_index: HashMap<&[Vertex], usize> = pair
        .basis(degree)
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_slice(), i))
        .collect();
    // f'(g·σ): nonzero only on chains through ∅, which lie in chamber g alone.
    let f_prime = |g: u32, sigma: &[Vertex]| -> BigRational {
        match rel_index.get(sigma) {
            Some(&i) if !f.values[i].is_zero() => {
                if eps.sign(g) > 0 {
                    f.values[i].clone()
                } else {
                    -f.values[i].clone()
                }
            }
            _ => BigRational::zero(),
        }
    };
    let canon = |g: u32, sigma: &[Vertex]| -> u32 { y.anchor(y.cube_at(g, sigma[0] as usize)) };

    // δf' = 0 over every (degree+1)-simplex g·σ of Y with g its chamber.
    let mut delta_zero = true;
    if let Some(up) = k_all.get(degree as usize + 1) {
        'outer: for g in 0..order as u32 {
            for sigma in up {
                if canon(g, sigma) != g {
                    continue;
                }
                let mut acc = BigRational::zero();
                for i in 0..sigma.len() {
                    let face: Vec<Vertex> = sigma
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, v)| *v)
                        .collect();
                    let c = canon(g, &face);
                    let v = f_prime(c, &face);
                    if !v.is_zero() && c != g {
                        return Err(Error::InternalConsistency(
                            "interior simplex in two chambers".into(),
                        ));
                    }
                    if i % 2 == 0 {
                        acc += v;
                    } else {
                        acc -= v;
                    }
                }
                if !acc.is_zero() {
                    delta_zero = false;
                    break 'outer;
                }
            }
        }
    }

    let class = pair.nontrivial_class_against(f);
    let mut cert = Certificate {
        degree,
        group_order: order,
        delta_f_prime_zero: delta_zero,
        nontrivial: false,
        method: "transfer".into(),
        pairing: None,
        transfer_is_cycle: None,
        coboundary_solvable: None,
        pull_back_checked: None,
    };
    if let Some(z0) = &class {
        // z = Σ ε(g) g·z0. Faces through ∅ cancel inside each chamber; the rest
        // are collected under their canonical chamber.
        let k_faces: HashMap<&[Vertex], u64> = (degree as usize)
            .checked_sub(1)
            .and_then(|d| k_all.get(d))
            .map(|l| {
                l.iter()
                    .enumerate()
                    .map(|(i, s)| (s.as_slice(), i as u64))
                    .collect()
            })
            .unwrap_or_default();
        let width = k_faces.len().max(1) as u64;
        let support: Vec<(&Vec<Vertex>, i64)> = pair
            .basis(degree)
            .iter()
            .zip(z0)
            .filter(|(_, c)| !c.is_zero())
            .map(|(s, c)| (s, i64::try_from(c).expect("small cycle coefficients")))
            .collect();
        let mut shared: Vec<(u64, i64)> = Vec::new();
        let mut local: HashMap<u64, i64> = HashMap::new();
        let mut pairing = BigRational::zero();
        let mut cycle = true;
        for g in 0..order as u32 {
            let e = eps.sign(g) as i64;
            local.clear();
            for (sigma, c) in &support {
                pairing += f_prime(g, sigma) * q(e * c);
                for i in 0..sigma.len() {
                    let face: Vec<Vertex> = sigma
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != i)
                        .map(|(_, v)| *v)
                        .collect();
                    let sign = if i % 2 == 0 { 1 } else { -1 };
                    let key = k_faces[face.as_slice()];
                    if face[0] == 0 {
                        *local.entry(key).or_insert(0) += sign * e * c;
                    } else {
                        shared.push((canon(g, &face) as u64 * width + key, sign * e * c));
                    }
                }
            }
            if local.values().any(|&v| v != 0) {
                cycle = false;
            }
        }
        shared.sort_unstable_by_key(|x| x.0);
        for run in shared.chunk_by(|a, b| a.0 == b.0) {
            if run.iter().map(|x| x.1).sum::<i64>() != 0 {
                cycle = false;
                break;
            }
        }
        cert.transfer_is_cycle = Some(cycle);
        cert.nontrivial = cycle && !pairing.is_zero();
        cert.pairing = Some(pairing.to_string());
        let expected = pair.pair(f, z0) * q(order as i64);
        if pairing != expected {
            return Err(Error::InternalConsistency(format!(
                "⟨f', z⟩ = {pairing}, expected {expected}"
            )));
        }
    }

    // Each cube carries at most 3^dim chains starting at it.
    let simplices: usize =
        y.complex.cubes().len() * 3usize.pow(y.complex.dimension().max(0) as u32);
    if simplices <= direct_limit {
        cert.method = "linear-solve".into();
        let tri = TriangulatedQuotient::new(y)?;
        let lifted = {
            let base = tri.place_in_base_chamber(pair, f);
            let mut a = tri.antisymmetrize(eps, &base);
            for v in a.values.iter_mut() {
                *v *= q(order as i64);
            }
            a
        };
        for (tau, v) in tri.basis(degree).iter().zip(&lifted.values) {
            let (g, sigma) = tri.decompose(tau);
            if *v != f_prime(g, &sigma) {
                return Err(Error::InternalConsistency(
                    "streamed f' differs from |G|·a_ε(f)".into(),
                ));
            }
        }
        if !tri.coboundary(&lifted).is_zero() {
            cert.delta_f_prime_zero = false;
        }
        let delta = tri.chain.boundary(degree).transpose();
        let solution = solve(&Rationals, &delta, &lifted.values);
        cert.coboundary_solvable = Some(solution.is_some());
        if let Some(g_prime) = solution {
            let g_prime = Cochain {
                degree: degree - 1,
                values: g_prime,
            };
            let g = tri.pull_back(pair, eps, &g_prime);
            cert.pull_back_checked = Some(pair.coboundary(&g) == *f);
            if cert.nontrivial {
                return Err(Error::InternalConsistency(
                    "f' is a coboundary although it pairs nontrivially with a cycle".into(),
                ));
            }
        } else {
            cert.nontrivial = true;
            if class.is_none() {
                return Err(Error::InternalConsistency(
                    "f' is not a coboundary but [f] vanishes in H(K, K^S)".into(),
                ));
            }
        }
    }
    if !cert.delta_f_prime_zero {
        return Err(Error::InternalConsistency(
            "δf' ≠ 0 for a relative cocycle f".into(),
        ));
    }
    Ok(cert)
}

impl ChamberPair {
    /// A relative cycle on which `f` is nonzero, if `[f] ≠ 0` over ℚ.
    fn nontrivial_class_against(&self, f: &Cochain) -> Option<Vec<BigInt>> {
        let d = self.chain.boundary(f.degree);
        nullspace(&Rationals, &d)
            .into_iter()
            .map(|z| integral(&z))
            .find(|z| !self.pair(f, z).is_zero())
    }
}
