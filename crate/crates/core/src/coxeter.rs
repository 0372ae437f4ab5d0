//! Right-angled Coxeter systems, the chamber `K`, and integral Tits matrices.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplicial::{LargenessWitness, SimplicialComplex, Vertex};

/// A right-angled Coxeter system: generators are the vertices of a flag
/// complex (the nerve), and two generators commute iff they span an edge.
#[derive(Clone, Debug)]
pub struct RacgSystem {
    nerve: SimplicialComplex,
    /// Spherical subsets (cliques, including the empty set), sorted by size then lexicographically.
    spherical: Vec<Vec<Vertex>>,
    spherical_index: HashMap<Vec<Vertex>, usize>,
}

impl RacgSystem {
    /// The system whose nerve is `x`. Fails with the offending clique when `x` is not flag.
    pub fn from_nerve(x: &SimplicialComplex) -> Result<Self> {
        if let Some(c) = x.non_face_clique() {
            return Err(Error::domain(format!(
                "nerve must be flag: {:?} are pairwise adjacent but span no simplex",
                x.names_of(&c)
            )));
        }
        let mut spherical: Vec<Vec<Vertex>> = vec![Vec::new()];
        spherical.extend(x.simplices().into_iter().flatten());
        spherical.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        let spherical_index = spherical
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        Ok(RacgSystem {
            nerve: x.clone(),
            spherical,
            spherical_index,
        })
    }

    /// The system given by generators and commuting pairs.
    pub fn from_presentation<S: AsRef<str>>(
        generators: &[S],
        commuting: &[(S, S)],
    ) -> Result<Self> {
        let gens: Vec<&str> = generators.iter().map(|s| s.as_ref()).collect();
        let edges: Vec<Vec<&str>> = commuting
            .iter()
            .map(|(a, b)| vec![a.as_ref(), b.as_ref()])
            .collect();
        let graph = SimplicialComplex::with_vertices(&gens, &edges)?;
        let faces: Vec<Vec<String>> = graph
            .maximal_cliques()
            .iter()
            .map(|c| graph.names_of(c))
            .collect();
        let flag = SimplicialComplex::with_vertices(&gens, &faces)?;
        Self::from_nerve(&flag)
    }

    pub fn nerve(&self) -> &SimplicialComplex {
        &self.nerve
    }

    pub fn num_generators(&self) -> usize {
        self.nerve.num_vertices()
    }

    pub fn generator_names(&self) -> &[String] {
        self.nerve.names()
    }

    pub fn generator(&self, name: &str) -> Result<Vertex> {
        self.nerve
            .vertex(name)
            .ok_or_else(|| Error::domain(format!("unknown generator {name:?}")))
    }

    pub fn commute(&self, s: Vertex, t: Vertex) -> bool {
        self.nerve.has_edge(s, t)
    }

    /// Unordered commuting pairs `(s, t)` with `s < t`.
    pub fn commuting_pairs(&self) -> Vec<(Vertex, Vertex)> {
        let n = self.num_generators() as Vertex;
        (0..n)
            .flat_map(|s| {
                self.nerve
                    .neighbors(s)
                    .iter()
                    .filter(move |&&t| t > s)
                    .map(move |&t| (s, t))
            })
            .collect()
    }

    /// Coxeter matrix entry: 1 on the diagonal, 2 for commuting pairs, `None` for ∞.
    pub fn m(&self, s: Vertex, t: Vertex) -> Option<u64> {
        if s == t {
            Some(1)
        } else if self.commute(s, t) {
            Some(2)
        } else {
            None
        }
    }

    pub fn spherical_subsets(&self) -> &[Vec<Vertex>] {
        &self.spherical
    }

    pub fn spherical_index(&self, t: &[Vertex]) -> Option<usize> {
        self.spherical_index.get(t).copied()
    }

    pub fn spherical_name(&self, t: &[Vertex]) -> String {
        format!("{{{}}}", self.nerve.names_of(t).join(","))
    }

    pub fn is_finite(&self) -> bool {
        self.nerve.facets().len() == 1 && self.nerve.num_vertices() > 0
            || self.nerve.num_vertices() == 0
    }

    /// Hyperbolicity via the nerve: `None` when the nerve is 5-large, else the witness.
    pub fn hyperbolicity_witness(&self) -> Option<LargenessWitness> {
        self.nerve.largeness_witness(5).expect("k = 5 is valid")
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.hyperbolicity_witness().is_none()
    }

    pub fn chamber(&self) -> Chamber {
        Chamber::new(self)
    }

    /// The geometric representation matrix of generator `s`.
    pub fn tits_matrix(&self, s: Vertex) -> Result<IntMatrix<i64>> {
        let n = self.num_generators();
        if s as usize >= n {
            return Err(Error::domain(format!("generator index {s} out of range")));
        }
        let mut m = IntMatrix::identity(n);
        for j in 0..n {
            let b = if j == s as usize {
                1
            } else if self.commute(s, j as Vertex) {
                0
            } else {
                -1
            };
            m.set(
                s as usize,
                j,
                if j == s as usize { 1 - 2 * b } else { -2 * b },
            );
        }
        Ok(m)
    }

    pub fn tits_matrix_by_name(&self, s: &str) -> Result<IntMatrix<i64>> {
        self.tits_matrix(self.generator(s)?)
    }

    /// Coxeter matrix with some `∞` entries replaced; see [`CoxeterMatrix`].
    pub fn relax_right_angles(
        &self,
        assignment: &BTreeMap<(String, String), Option<u64>>,
    ) -> Result<CoxeterMatrix> {
        let n = self.num_generators();
        let mut m: Vec<Vec<Option<u64>>> = (0..n)
            .map(|s| (0..n).map(|t| self.m(s as Vertex, t as Vertex)).collect())
            .collect();
        for ((a, b), v) in assignment {
            let s = self.generator(a)?;
            let t = self.generator(b)?;
            if s == t || self.commute(s, t) {
                return Err(Error::domain(format!(
                    "{a:?} and {b:?} already have a finite Coxeter entry"
                )));
            }
            if let Some(k) = v {
                if *k <= 4 {
                    return Err(Error::domain(format!(
                        "relaxed entry for ({a}, {b}) must exceed 4, got {k}"
                    )));
                }
            }
            m[s as usize][t as usize] = *v;
            m[t as usize][s as usize] = *v;
        }
        Ok(CoxeterMatrix {
            generators: self.generator_names().to_vec(),
            entries: m,
        })
    }
}

/// A general Coxeter matrix (`None` means ∞). Only emitted, never analysed further.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoxeterMatrix {
    pub generators: Vec<String>,
    pub entries: Vec<Vec<Option<u64>>>,
}

/// The Davis chamber `K`: the order complex of the spherical subsets. Vertex
/// `i` of `complex` is spherical subset `i` of the system (vertex 0 is `∅`).
#[derive(Clone, Debug)]
pub struct Chamber {
    pub complex: SimplicialComplex,
    /// Spherical subsets, copied from the system.
    pub subsets: Vec<Vec<Vertex>>,
    num_generators: usize,
}

impl Chamber {
    fn new(w: &RacgSystem) -> Self {
        let names: Vec<String> = w.spherical.iter().map(|t| w.spherical_name(t)).collect();
        let mut facets = Vec::new();
        for f in w.nerve.facets() {
            permute_chains(
                f,
                &mut Vec::new(),
                &mut vec![false; f.len()],
                w,
                &mut facets,
            );
        }
        if w.num_generators() == 0 {
            facets.push(vec![0]);
        }
        Chamber {
            complex: SimplicialComplex::from_maximal(names, facets),
            subsets: w.spherical.clone(),
            num_generators: w.num_generators(),
        }
    }

    pub fn num_generators(&self) -> usize {
        self.num_generators
    }

    /// Ids of chamber vertices (spherical subsets) meeting `t`.
    fn meeting(&self, t: &[Vertex]) -> Vec<Vertex> {
        (0..self.subsets.len() as Vertex)
            .filter(|&i| {
                self.subsets[i as usize]
                    .iter()
                    .any(|s| t.binary_search(s).is_ok())
            })
            .collect()
    }

    /// `K_s`: chains of spherical subsets all containing `s`.
    pub fn k_s(&self, s: Vertex) -> SimplicialComplex {
        self.k_t(&[s])
    }

    /// `K^T = ⋃_{s ∈ T} K_s`, the full subcomplex on subsets meeting `T`.
    pub fn k_t(&self, t: &[Vertex]) -> SimplicialComplex {
        let mut t = t.to_vec();
        t.sort_unstable();
        self.complex
            .induced_subcomplex(&self.meeting(&t))
            .expect("valid ids")
    }

    /// `K^S`, the union of all mirrors.
    pub fn boundary(&self) -> SimplicialComplex {
        let all: Vec<Vertex> = (0..self.num_generators as Vertex).collect();
        self.k_t(&all)
    }

    /// Whether a chain (sorted chamber vertex ids) lies in `K^S`, i.e. starts above `∅`.
    pub fn on_boundary(simplex: &[Vertex]) -> bool {
        simplex.first().is_some_and(|&v| v != 0)
    }
}

fn permute_chains(
    f: &[Vertex],
    prefix: &mut Vec<Vertex>,
    used: &mut [bool],
    w: &RacgSystem,
    out: &mut Vec<Vec<Vertex>>,
) {
    if prefix.len() == f.len() {
        let mut chain = vec![0u32];
        let mut set = Vec::new();
        for &v in prefix.iter() {
            set.push(v);
            set.sort_unstable();
            chain.push(w.spherical_index[&set] as Vertex);
        }
        chain.sort_unstable();
        out.push(chain);
        return;
    }
    for i in 0..f.len() {
        if !used[i] {
            used[i] = true;
            prefix.push(f[i]);
            permute_chains(f, prefix, used, w, out);
            prefix.pop();
            used[i] = false;
        }
    }
}

// ------------------------------------------------------------------ matrices

/// Matrix entries: machine integers with overflow detection, or big integers.
pub trait Entry: Clone + Eq + Hash + Ord + Debug + Send + Sync {
    fn from_i64(v: i64) -> Self;
    /// `acc + a * b`, or [`Error::Overflow`] on the fixed-width path.
    fn mul_add(acc: &Self, a: &Self, b: &Self) -> Result<Self>;
    fn is_zero(&self) -> bool;
    /// Residue in `0..m`.
    fn residue(&self, m: u64) -> u64;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn mul_add(acc: &i64, a: &i64, b: &i64) -> Result<i64> {
        a.checked_mul(*b)
            .and_then(|p| acc.checked_add(p))
            .ok_or(Error::Overflow)
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn residue(&self, m: u64) -> u64 {
        self.rem_euclid(m as i64) as u64
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn mul_add(acc: &BigInt, a: &BigInt, b: &BigInt) -> Result<BigInt> {
        Ok(acc + a * b)
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn residue(&self, m: u64) -> u64 {
        let r = self % BigInt::from(m);
        let r = if r.is_negative() {
            r + BigInt::from(m)
        } else {
            r
        };
        r.to_u64().unwrap()
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Square integer matrix, row major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix<T> {
    n: usize,
    data: Vec<T>,
}

impl<T: Entry> IntMatrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![T::from_i64(0); n * n];
        for i in 0..n {
            data[i * n + i] = T::from_i64(1);
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let n = rows.len();
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), n, "matrix must be square");
                r.iter().map(|&v| T::from_i64(v))
            })
            .collect();
        IntMatrix { n, data }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = T::from_i64(v);
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.n)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let n = self.n;
        let mut data = vec![T::from_i64(0); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        data[i * n + j] = T::mul_add(&data[i * n + j], a, b)?;
                    }
                }
            }
        }
        Ok(IntMatrix { n, data })
    }

    /// Entries reduced into `0..m`, row major.
    pub fn residues(&self, m: u64) -> Vec<u32> {
        self.data.iter().map(|x| x.residue(m) as u32).collect()
    }

    pub fn to_big(&self) -> IntMatrix<BigInt> {
        IntMatrix {
            n: self.n,
            data: self.data.iter().map(Entry::to_big).collect(),
        }
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.data
            .chunks(self.n.max(1))
            .map(|c| c.to_vec())
            .collect()
    }

    /// Exact determinant by fraction-free elimination.
    pub fn determinant(&self) -> BigInt {
        let n = self.n;
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).to_big()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !Zero::is_zero(&a[i][k])) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::homology::{homology, Coefficients};

    fn d_inf() -> RacgSystem {
        RacgSystem::from_nerve(&fixtures::s0()).unwrap()
    }

    #[test]
    fn from_nerve_examples() {
        let p = RacgSystem::from_nerve(&fixtures::pentagon()).unwrap();
        assert_eq!(p.num_generators(), 5);
        assert_eq!(p.commuting_pairs().len(), 5);
        assert!(d_inf().commuting_pairs().is_empty());
        let e = RacgSystem::from_nerve(&fixtures::edge()).unwrap();
        assert_eq!(e.commuting_pairs().len(), 1);
        assert!(e.is_finite());
        assert!(RacgSystem::from_nerve(&fixtures::cycle(3)).is_err());
    }

    #[test]
    fn presentation_round_trip() {
        let x = fixtures::octahedron();
        let w = RacgSystem::from_nerve(&x).unwrap();
        let names = w.generator_names().to_vec();
        let pairs: Vec<(String, String)> = w
            .commuting_pairs()
            .iter()
            .map(|&(s, t)| (names[s as usize].clone(), names[t as usize].clone()))
            .collect();
        let again = RacgSystem::from_presentation(&names, &pairs).unwrap();
        assert!(again.nerve().same_complex(&x));
    }

    #[test]
    fn hyperbolicity_examples() {
        assert!(RacgSystem::from_nerve(&fixtures::pentagon())
            .unwrap()
            .is_hyperbolic());
        let sq = RacgSystem::from_nerve(&fixtures::cycle(4)).unwrap();
        assert!(
            matches!(sq.hyperbolicity_witness(), Some(LargenessWitness::FullCycle(c)) if c.len() == 4)
        );
        assert!(RacgSystem::from_nerve(&fixtures::hexagon())
            .unwrap()
            .is_hyperbolic());
    }

    #[test]
    fn chamber_examples() {
        let k = d_inf().chamber();
        assert_eq!(k.complex.num_vertices(), 3);
        assert_eq!(k.complex.num_edges(), 2);
        let p = RacgSystem::from_nerve(&fixtures::pentagon())
            .unwrap()
            .chamber();
        assert_eq!(p.complex.num_vertices(), 11);
        let ks = p.boundary();
        assert_eq!(ks.num_vertices(), 10);
        assert_eq!(ks.num_edges(), 10);
        assert_eq!(ks.dimension(), 1);
        for w in [
            fixtures::pentagon(),
            fixtures::octahedron(),
            fixtures::petersen(),
        ] {
            let k = RacgSystem::from_nerve(&w).unwrap().chamber();
            let h = homology(&k.complex, Coefficients::Integers, true).unwrap();
            assert!(h.top_nonzero_degree().is_none(), "chamber is acyclic");
        }
    }

    #[test]
    fn tits_matrix_examples() {
        let w = d_inf();
        assert_eq!(
            w.tits_matrix(0).unwrap(),
            IntMatrix::from_rows(&[vec![-1, 2], vec![0, 1]])
        );
        assert_eq!(
            w.tits_matrix(1).unwrap(),
            IntMatrix::from_rows(&[vec![1, 0], vec![2, -1]])
        );
        let e = RacgSystem::from_nerve(&fixtures::edge()).unwrap();
        assert_eq!(
            e.tits_matrix(0).unwrap(),
            IntMatrix::from_rows(&[vec![-1, 0], vec![0, 1]])
        );
        assert_eq!(
            e.tits_matrix(1).unwrap(),
            IntMatrix::from_rows(&[vec![1, 0], vec![0, -1]])
        );
        assert!(w.tits_matrix(2).is_err());
    }

    #[test]
    fn relaxation_examples() {
        let w = d_inf();
        let mut a = BTreeMap::new();
        a.insert(("s".to_string(), "t".to_string()), Some(7));
        assert_eq!(w.relax_right_angles(&a).unwrap().entries[0][1], Some(7));
        a.insert(("s".to_string(), "t".to_string()), Some(4));
        assert!(w.relax_right_angles(&a).is_err());
        let p = RacgSystem::from_nerve(&fixtures::pentagon()).unwrap();
        let unchanged = p.relax_right_angles(&BTreeMap::new()).unwrap();
        assert_eq!(unchanged.entries[0][2], None);
        let mut one = BTreeMap::new();
        one.insert(("v0".to_string(), "v2".to_string()), Some(5));
        let m = p.relax_right_angles(&one).unwrap();
        assert_eq!(
            m.entries
                .iter()
                .flatten()
                .filter(|e| **e == Some(5))
                .count(),
            2
        );
    }

    #[test]
    fn determinant_of_generators() {
        let p = RacgSystem::from_nerve(&fixtures::pentagon()).unwrap();
        for s in 0..5 {
            assert_eq!(p.tits_matrix(s).unwrap().determinant(), BigInt::from(-1));
        }
    }
}
