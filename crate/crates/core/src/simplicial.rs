//! Finite abstract simplicial complexes stored by their maximal faces.
//!
//! Vertices are opaque string identifiers; internally every vertex is a dense
//! `u32` index into [`SimplicialComplex::names`]. A vertex set is a simplex iff
//! it is contained in some maximal face, so the face lattice is never
//! materialized unless a caller asks for it (see [`SimplicialComplex::simplices`]).

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Largest facet size for which all faces are ever enumerated.
const MAX_ENUMERABLE_FACET: usize = 24;

#[derive(Clone, Debug)]
pub struct SimplicialComplex {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    facets: Vec<Vec<Vertex>>,
    vertex_facets: Vec<Vec<u32>>,
    adjacency: Vec<Vec<Vertex>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.facets == other.facets
    }
}

impl Eq for SimplicialComplex {}

/// Why a complex fails to be `k`-large.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "vertices", rename_all = "snake_case")]
pub enum LargenessWitness {
    /// Pairwise adjacent vertices that do not span a simplex (a minimal non-face).
    NonFlagClique(Vec<String>),
    /// A full cycle of length at least 4, in cyclic order.
    FullCycle(Vec<String>),
}

/// A hub joined to every vertex of a full cycle (the rim), optionally with a
/// pendant triangle `{rim[0], rim[1], pendant}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wheel {
    pub hub: String,
    pub rim: Vec<String>,
    pub pendant: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sd2Witness {
    NotFlag {
        clique: Vec<String>,
    },
    /// Condition (a): a full 4-wheel.
    FourWheel {
        wheel: Wheel,
    },
    /// Condition (b): a pendant-triangle wheel not contained in any closed 1-ball.
    UncoveredPendantWheel {
        wheel: Wheel,
    },
}

/// Failure of the SD2* condition somewhere in a complex or one of its links.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinkSd2Witness {
    /// The simplex whose link fails; empty when the complex itself fails.
    pub simplex: Vec<String>,
    pub witness: Sd2Witness,
}

impl SimplicialComplex {
    /// The empty complex: no vertices, only the empty simplex.
    pub fn empty() -> Self {
        SimplicialComplex {
            names: Vec::new(),
            index: HashMap::new(),
            facets: Vec::new(),
            vertex_facets: Vec::new(),
            adjacency: Vec::new(),
        }
    }

    /// Builds a complex from a list of faces. Vertices are numbered in order of
    /// first appearance; redundant faces are absorbed.
    pub fn from_faces<S: AsRef<str>>(faces: &[Vec<S>]) -> Result<Self> {
        if faces.is_empty() {
            return Err(Error::malformed("a complex needs at least one face"));
        }
        let mut names: Vec<String> = Vec::new();
        let mut index: HashMap<String, Vertex> = HashMap::new();
        for face in faces {
            for v in face {
                let v = v.as_ref();
                if !index.contains_key(v) {
                    index.insert(v.to_string(), names.len() as Vertex);
                    names.push(v.to_string());
                }
            }
        }
        let facets = Self::index_faces(&index, faces)?;
        Ok(Self::from_indexed(names, facets))
    }

    /// Builds a complex with an explicit vertex order. Every vertex is at least a
    /// 0-simplex even if no face mentions it.
    pub fn with_vertices<S: AsRef<str>, T: AsRef<str>>(
        vertices: &[S],
        faces: &[Vec<T>],
    ) -> Result<Self> {
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = HashMap::with_capacity(vertices.len());
        for v in vertices {
            let v = v.as_ref();
            if index.insert(v.to_string(), names.len() as Vertex).is_some() {
                return Err(Error::malformed(format!("vertex {v:?} listed twice")));
            }
            names.push(v.to_string());
        }
        let facets = Self::index_faces(&index, faces)?;
        Ok(Self::from_indexed(names, facets))
    }

    fn index_faces<T: AsRef<str>>(
        index: &HashMap<String, Vertex>,
        faces: &[Vec<T>],
    ) -> Result<Vec<Vec<Vertex>>> {
        let mut out = Vec::with_capacity(faces.len());
        for face in faces {
            if face.is_empty() {
                return Err(Error::malformed("empty face"));
            }
            let mut ids = Vec::with_capacity(face.len());
            for v in face {
                let v = v.as_ref();
                let id = *index.get(v).ok_or_else(|| {
                    Error::malformed(format!("face mentions unknown vertex {v:?}"))
                })?;
                ids.push(id);
            }
            ids.sort_unstable();
            if ids.windows(2).any(|w| w[0] == w[1]) {
                let names: Vec<&str> = face.iter().map(|v| v.as_ref()).collect();
                return Err(Error::malformed(format!(
                    "duplicate vertex inside face {names:?}"
                )));
            }
            out.push(ids);
        }
        Ok(out)
    }

    /// Normalizing constructor on dense indices. Faces need not be sorted or maximal.
    pub(crate) fn from_indexed(names: Vec<String>, faces: Vec<Vec<Vertex>>) -> Self {
        let n = names.len();
        let mut faces: Vec<Vec<Vertex>> = faces
            .into_iter()
            .map(|mut f| {
                f.sort_unstable();
                f.dedup();
                f
            })
            .filter(|f| !f.is_empty())
            .collect();
        faces.sort_unstable_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        faces.dedup();

        let mut kept: Vec<Vec<Vertex>> = Vec::with_capacity(faces.len());
        let mut kept_at: Vec<Vec<u32>> = vec![Vec::new(); n];
        for face in faces {
            let pivot = *face
                .iter()
                .min_by_key(|&&v| kept_at[v as usize].len())
                .unwrap();
            let absorbed = kept_at[pivot as usize]
                .iter()
                .any(|&k| is_sorted_subset(&face, &kept[k as usize]));
            if !absorbed {
                let id = kept.len() as u32;
                for &v in &face {
                    kept_at[v as usize].push(id);
                }
                kept.push(face);
            }
        }
        for v in 0..n {
            if kept_at[v].is_empty() {
                kept.push(vec![v as Vertex]);
            }
        }
        Self::from_maximal(names, kept)
    }

    /// Constructor for faces already known to be sorted, distinct and maximal.
    pub(crate) fn from_maximal(names: Vec<String>, mut facets: Vec<Vec<Vertex>>) -> Self {
        let n = names.len();
        facets.par_sort_unstable();
        let index = names
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as Vertex))
            .collect();
        let mut vertex_facets = vec![Vec::new(); n];
        let mut adjacency: Vec<Vec<Vertex>> = vec![Vec::new(); n];
        for (fi, f) in facets.iter().enumerate() {
            for (i, &u) in f.iter().enumerate() {
                vertex_facets[u as usize].push(fi as u32);
                for &w in &f[i + 1..] {
                    adjacency[u as usize].push(w);
                    adjacency[w as usize].push(u);
                }
            }
        }
        adjacency.par_iter_mut().for_each(|a| {
            a.sort_unstable();
            a.dedup();
        });
        SimplicialComplex {
            names,
            index,
            facets,
            vertex_facets,
            adjacency,
        }
    }

    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, v: Vertex) -> &str {
        &self.names[v as usize]
    }

    pub fn vertex(&self, name: &str) -> Option<Vertex> {
        self.index.get(name).copied()
    }

    pub fn vertices_by_name<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<Vertex>> {
        names
            .iter()
            .map(|s| {
                self.vertex(s.as_ref())
                    .ok_or_else(|| Error::domain(format!("unknown vertex {:?}", s.as_ref())))
            })
            .collect()
    }

    pub fn names_of(&self, vs: &[Vertex]) -> Vec<String> {
        vs.iter().map(|&v| self.names[v as usize].clone()).collect()
    }

    /// Maximal faces, each sorted, in lexicographic order.
    pub fn facets(&self) -> &[Vec<Vertex>] {
        &self.facets
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adjacency[v as usize]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adjacency[u as usize].binary_search(&v).is_ok()
    }

    /// Dimension of the complex; `-1` for the empty complex.
    pub fn dimension(&self) -> i32 {
        self.facets
            .iter()
            .map(|f| f.len() as i32 - 1)
            .max()
            .unwrap_or(-1)
    }

    pub fn num_edges(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Whether the vertex set spans a simplex. The empty set always does.
    pub fn is_simplex(&self, vs: &[Vertex]) -> bool {
        let mut s = vs.to_vec();
        s.sort_unstable();
        s.dedup();
        self.is_sorted_simplex(&s)
    }

    pub(crate) fn is_sorted_simplex(&self, s: &[Vertex]) -> bool {
        let Some(&pivot) = s
            .iter()
            .min_by_key(|&&v| self.vertex_facets[v as usize].len())
        else {
            return true;
        };
        self.vertex_facets[pivot as usize]
            .iter()
            .any(|&f| is_sorted_subset(s, &self.facets[f as usize]))
    }

    /// Closed combinatorial 1-ball `{v} ∪ N(v)`, sorted.
    pub fn closed_neighborhood(&self, v: Vertex) -> Vec<Vertex> {
        let mut out = self.adjacency[v as usize].clone();
        let pos = out.binary_search(&v).unwrap_err();
        out.insert(pos, v);
        out
    }

    /// All nonempty simplices grouped by dimension, each group sorted.
    pub fn simplices(&self) -> Vec<Vec<Vec<Vertex>>> {
        let top = self.dimension();
        if top < 0 {
            return Vec::new();
        }
        assert!(
            top as usize + 1 <= MAX_ENUMERABLE_FACET,
            "facet of size {} too large to enumerate faces",
            top + 1
        );
        let mut by_dim: Vec<HashSet<Vec<Vertex>>> = vec![HashSet::new(); top as usize + 1];
        for f in &self.facets {
            let k = f.len();
            for mask in 1u32..(1u32 << k) {
                let face: Vec<Vertex> = (0..k)
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| f[i])
                    .collect();
                by_dim[face.len() - 1].insert(face);
            }
        }
        by_dim
            .into_iter()
            .map(|set| {
                let mut v: Vec<_> = set.into_iter().collect();
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// Number of simplices in each dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices().iter().map(Vec::len).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// The full subcomplex spanned by `a` (its span).
    pub fn induced_subcomplex(&self, a: &[Vertex]) -> Result<Self> {
        let n = self.num_vertices();
        let mut keep = vec![u32::MAX; n];
        let mut sorted = a.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v as usize >= n {
                return Err(Error::domain(format!(
                    "vertex index {v} is not in the complex"
                )));
            }
        }
        for (new, &v) in sorted.iter().enumerate() {
            keep[v as usize] = new as u32;
        }
        let names = sorted
            .iter()
            .map(|&v| self.names[v as usize].clone())
            .collect();
        let faces = self
            .facets
            .iter()
            .map(|f| {
                f.iter()
                    .filter(|&&v| keep[v as usize] != u32::MAX)
                    .map(|&v| keep[v as usize])
                    .collect::<Vec<_>>()
            })
            .filter(|f| !f.is_empty())
            .collect();
        Ok(Self::from_indexed(names, faces))
    }

    pub fn induced_by_names<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let ids = self.vertices_by_name(names)?;
        self.induced_subcomplex(&ids)
    }

    /// Link of a simplex: all `τ` disjoint from `σ` with `τ ∪ σ` a simplex.
    pub fn link(&self, sigma: &[Vertex]) -> Result<Self> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        s.dedup();
        if s.iter().any(|&v| v as usize >= self.num_vertices()) || !self.is_sorted_simplex(&s) {
            return Err(Error::domain(format!(
                "{:?} is not a simplex",
                s.iter()
                    .map(|&v| self.names.get(v as usize).cloned().unwrap_or_default())
                    .collect::<Vec<_>>()
            )));
        }
        if s.is_empty() {
            return Ok(self.clone());
        }
        let pivot = *s
            .iter()
            .min_by_key(|&&v| self.vertex_facets[v as usize].len())
            .unwrap();
        let mut faces = Vec::new();
        let mut used: Vec<Vertex> = Vec::new();
        for &fi in &self.vertex_facets[pivot as usize] {
            let f = &self.facets[fi as usize];
            if is_sorted_subset(&s, f) {
                let rest: Vec<Vertex> = f
                    .iter()
                    .copied()
                    .filter(|v| s.binary_search(v).is_err())
                    .collect();
                used.extend_from_slice(&rest);
                if !rest.is_empty() {
                    faces.push(rest);
                }
            }
        }
        used.sort_unstable();
        used.dedup();
        let mut remap = HashMap::with_capacity(used.len());
        for (i, &v) in used.iter().enumerate() {
            remap.insert(v, i as Vertex);
        }
        let names = used
            .iter()
            .map(|&v| self.names[v as usize].clone())
            .collect();
        let faces = faces
            .into_iter()
            .map(|f| f.into_iter().map(|v| remap[&v]).collect())
            .collect();
        Ok(Self::from_indexed(names, faces))
    }

    pub fn link_by_names<S: AsRef<str>>(&self, sigma: &[S]) -> Result<Self> {
        let ids = self.vertices_by_name(sigma)?;
        self.link(&ids)
    }

    /// Renames vertices; the map must be injective.
    pub fn relabel(&self, f: impl Fn(&str) -> String) -> Result<Self> {
        let names: Vec<String> = self.names.iter().map(|s| f(s)).collect();
        let distinct: HashSet<&String> = names.iter().collect();
        if distinct.len() != names.len() {
            return Err(Error::domain("relabelling is not injective"));
        }
        Ok(Self::from_maximal(names, self.facets.clone()))
    }

    /// Maximal faces as sets of names, for comparisons across vertex numberings.
    pub fn named_facets(&self) -> Vec<Vec<String>> {
        let mut out: Vec<Vec<String>> = self
            .facets
            .iter()
            .map(|f| {
                let mut v = self.names_of(f);
                v.sort();
                v
            })
            .collect();
        out.sort();
        out
    }

    /// Whether two complexes have the same vertices and simplices, regardless of numbering.
    pub fn same_complex(&self, other: &Self) -> bool {
        let mut a = self.names.clone();
        let mut b = other.names.clone();
        a.sort();
        b.sort();
        a == b && self.named_facets() == other.named_facets()
    }

    // ---------------------------------------------------------------- cliques

    /// All maximal cliques of the 1-skeleton, each sorted, in lexicographic order.
    pub fn maximal_cliques(&self) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = (0..self.num_vertices() as Vertex)
            .into_par_iter()
            .flat_map_iter(|v| self.cliques_led_by(v))
            .collect();
        out.sort_unstable();
        out
    }

    /// Maximal cliques whose smallest vertex is `v` (Bron–Kerbosch with pivoting).
    fn cliques_led_by(&self, v: Vertex) -> Vec<Vec<Vertex>> {
        let nb = self.neighbors(v);
        let p: Vec<Vertex> = nb.iter().copied().filter(|&w| w > v).collect();
        let x: Vec<Vertex> = nb.iter().copied().filter(|&w| w < v).collect();
        let mut out = Vec::new();
        let mut r = vec![v];
        self.bron_kerbosch(&mut r, p, x, &mut out);
        out
    }

    fn bron_kerbosch(
        &self,
        r: &mut Vec<Vertex>,
        p: Vec<Vertex>,
        mut x: Vec<Vertex>,
        out: &mut Vec<Vec<Vertex>>,
    ) {
        if p.is_empty() {
            if x.is_empty() {
                let mut c = r.clone();
                c.sort_unstable();
                out.push(c);
            }
            return;
        }
        let pivot = p
            .iter()
            .chain(x.iter())
            .copied()
            .max_by_key(|&u| p.iter().filter(|&&w| self.has_edge(u, w)).count())
            .unwrap();
        let candidates: Vec<Vertex> = p
            .iter()
            .copied()
            .filter(|&w| !self.has_edge(pivot, w))
            .collect();
        let mut p = p;
        for w in candidates {
            let np: Vec<Vertex> = p.iter().copied().filter(|&u| self.has_edge(w, u)).collect();
            let nx: Vec<Vertex> = x.iter().copied().filter(|&u| self.has_edge(w, u)).collect();
            r.push(w);
            self.bron_kerbosch(r, np, nx, out);
            r.pop();
            p.retain(|&u| u != w);
            x.push(w);
        }
    }

    /// A minimal non-face all of whose vertices are pairwise adjacent, if any.
    pub fn non_face_clique(&self) -> Option<Vec<Vertex>> {
        (0..self.num_vertices() as Vertex)
            .into_par_iter()
            .find_map_first(|v| {
                self.cliques_led_by(v).into_iter().find_map(|c| {
                    if self.is_sorted_simplex(&c) {
                        return None;
                    }
                    // Shrink to a minimal non-face; every proper subset is then a simplex.
                    let mut c = c;
                    let mut i = 0;
                    while i < c.len() {
                        let mut smaller = c.clone();
                        smaller.remove(i);
                        if !self.is_sorted_simplex(&smaller) {
                            c = smaller;
                        } else {
                            i += 1;
                        }
                    }
                    Some(c)
                })
            })
    }

    pub fn is_flag(&self) -> bool {
        self.non_face_clique().is_none()
    }

    // ------------------------------------------------------------- largeness

    /// `None` when the complex is `k`-large, otherwise a witness. Shortest full
    /// cycles are reported first.
    pub fn largeness_witness(&self, k: usize) -> Result<Option<LargenessWitness>> {
        if k < 4 {
            return Err(Error::domain(format!("k-largeness needs k >= 4, got {k}")));
        }
        if let Some(c) = self.non_face_clique() {
            return Ok(Some(LargenessWitness::NonFlagClique(self.names_of(&c))));
        }
        for len in 4..k {
            let found = (0..self.num_vertices() as Vertex)
                .into_par_iter()
                .find_map_first(|v| first_induced_cycle(&self.adjacency, None, v, len));
            if let Some(c) = found {
                return Ok(Some(LargenessWitness::FullCycle(
                    self.names_of(&canonical_cycle(&c)),
                )));
            }
        }
        Ok(None)
    }

    /// Largeness check restricted to non-faces and full cycles through `vertices`.
    ///
    /// This decides `k`-largeness of the whole complex when `vertices` meets every
    /// orbit of a group of automorphisms, which is how vertex-transitive
    /// thickenings of quotient complexes are checked without a global search.
    pub fn largeness_witness_through(
        &self,
        k: usize,
        vertices: &[Vertex],
    ) -> Result<Option<LargenessWitness>> {
        if k < 4 {
            return Err(Error::domain(format!("k-largeness needs k >= 4, got {k}")));
        }
        for &v in vertices {
            if v as usize >= self.num_vertices() {
                return Err(Error::domain(format!(
                    "vertex index {v} is not in the complex"
                )));
            }
            let mut cliques = Vec::new();
            let mut r = vec![v];
            self.bron_kerbosch(&mut r, self.neighbors(v).to_vec(), Vec::new(), &mut cliques);
            cliques.sort_unstable();
            if let Some(c) = cliques.into_iter().find(|c| !self.is_sorted_simplex(c)) {
                let sub = self.induced_subcomplex(&c)?;
                let local = sub.non_face_clique().expect("clique spans no simplex");
                let global: Vec<Vertex> = local.iter().map(|&i| c[i as usize]).collect();
                return Ok(Some(LargenessWitness::NonFlagClique(
                    self.names_of(&global),
                )));
            }
        }
        for len in 4..k {
            for &v in vertices {
                if let Some(c) = first_induced_cycle_through(&self.adjacency, v, len) {
                    return Ok(Some(LargenessWitness::FullCycle(
                        self.names_of(&canonical_cycle(&c)),
                    )));
                }
            }
        }
        Ok(None)
    }

    pub fn is_k_large(&self, k: usize) -> Result<bool> {
        Ok(self.largeness_witness(k)?.is_none())
    }

    /// Every link of a nonempty simplex is `k`-large. Returns the first failing
    /// simplex and its witness.
    pub fn local_largeness_witness(
        &self,
        k: usize,
    ) -> Result<Option<(Vec<String>, LargenessWitness)>> {
        if k < 4 {
            return Err(Error::domain(format!("k-largeness needs k >= 4, got {k}")));
        }
        let simplices: Vec<Vec<Vertex>> = self.simplices().into_iter().flatten().collect();
        let found = simplices.par_iter().find_map_first(|s| {
            let link = self.link(s).expect("enumerated simplex");
            link.largeness_witness(k)
                .expect("k checked")
                .map(|w| (self.names_of(s), w))
        });
        Ok(found)
    }

    /// Brute-force list of all full cycles of length `4..=max_len`, each once up
    /// to rotation and reflection. Exponential in the vertex count; this is the
    /// reference enumeration that the largeness checker is validated against.
    pub fn enumerate_full_cycles(&self, max_len: usize) -> Vec<Vec<String>> {
        let mut found: Vec<Vec<Vertex>> = Vec::new();
        let n = self.num_vertices();
        for len in 4..=max_len.min(n) {
            let mut chosen = Vec::with_capacity(len);
            let mut degree = vec![0u8; n];
            self.cycle_subsets(0, len, &mut chosen, &mut degree, &mut found);
        }
        found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        found.into_iter().map(|c| self.names_of(&c)).collect()
    }

    fn cycle_subsets(
        &self,
        from: usize,
        len: usize,
        chosen: &mut Vec<Vertex>,
        degree: &mut [u8],
        found: &mut Vec<Vec<Vertex>>,
    ) {
        if chosen.len() == len {
            if chosen.iter().all(|&v| degree[v as usize] == 2) {
                if let Some(order) = cycle_order(&self.adjacency, chosen) {
                    found.push(canonical_cycle(&order));
                }
            }
            return;
        }
        let n = self.num_vertices();
        for v in from..n {
            if n - v < len - chosen.len() {
                break;
            }
            let v = v as Vertex;
            let adj: Vec<Vertex> = chosen
                .iter()
                .copied()
                .filter(|&u| self.has_edge(u, v))
                .collect();
            if adj.len() > 2 || adj.iter().any(|&u| degree[u as usize] >= 2) {
                continue;
            }
            for &u in &adj {
                degree[u as usize] += 1;
            }
            degree[v as usize] = adj.len() as u8;
            chosen.push(v);
            self.cycle_subsets(v as usize + 1, len, chosen, degree, found);
            chosen.pop();
            degree[v as usize] = 0;
            for &u in &adj {
                degree[u as usize] -= 1;
            }
        }
    }

    // -------------------------------------------------------------------- SD2*

    /// `None` when the complex satisfies SD2*(k), otherwise a witness.
    ///
    /// Condition (a) looks for full 4-cycles inside vertex neighbourhoods.
    /// Condition (b) walks every full `l`-cycle (5 ≤ l < k) in every
    /// neighbourhood, every rim edge and every pendant apex, and asks for a
    /// vertex whose closed 1-ball contains the whole configuration.
    pub fn sd2_star_witness(&self, k: usize) -> Result<Option<Sd2Witness>> {
        if k < 6 {
            return Err(Error::domain(format!("SD2*(k) needs k >= 6, got {k}")));
        }
        if let Some(c) = self.non_face_clique() {
            return Ok(Some(Sd2Witness::NotFlag {
                clique: self.names_of(&c),
            }));
        }
        let n = self.num_vertices() as Vertex;
        let four = (0..n).into_par_iter().find_map_first(|hub| {
            let allowed = self.neighbors(hub);
            allowed
                .iter()
                .find_map(|&s| first_induced_cycle(&self.adjacency, Some(allowed), s, 4))
                .map(|rim| (hub, canonical_cycle(&rim)))
        });
        if let Some((hub, rim)) = four {
            return Ok(Some(Sd2Witness::FourWheel {
                wheel: Wheel {
                    hub: self.name(hub).to_string(),
                    rim: self.names_of(&rim),
                    pendant: None,
                },
            }));
        }
        for len in 5..k {
            let bad = (0..n)
                .into_par_iter()
                .find_map_first(|hub| self.uncovered_pendant_wheel(hub, len));
            if let Some((hub, rim, t)) = bad {
                return Ok(Some(Sd2Witness::UncoveredPendantWheel {
                    wheel: Wheel {
                        hub: self.name(hub).to_string(),
                        rim: self.names_of(&rim),
                        pendant: Some(self.name(t).to_string()),
                    },
                }));
            }
        }
        Ok(None)
    }

    fn uncovered_pendant_wheel(
        &self,
        hub: Vertex,
        len: usize,
    ) -> Option<(Vertex, Vec<Vertex>, Vertex)> {
        let allowed = self.neighbors(hub);
        let mut rims = Vec::new();
        for &s in allowed {
            all_induced_cycles(&self.adjacency, Some(allowed), s, len, &mut rims);
        }
        rims.sort_unstable();
        for rim in rims {
            let mut wheel: Vec<Vertex> = rim.clone();
            wheel.push(hub);
            wheel.sort_unstable();
            let mut cover = self.closed_neighborhood(hub);
            for &u in &rim {
                cover = intersect_sorted(&cover, &self.closed_neighborhood(u));
            }
            let mut bad: Option<(Vec<Vertex>, Vertex)> = None;
            for i in 0..len {
                let a = rim[i];
                let b = rim[(i + 1) % len];
                let apexes = intersect_sorted(self.neighbors(a), self.neighbors(b));
                for t in apexes {
                    if wheel.binary_search(&t).is_ok() {
                        continue;
                    }
                    let covered =
                        !intersect_sorted(&cover, &self.closed_neighborhood(t)).is_empty();
                    if !covered {
                        let oriented = pendant_orientation(&rim, i);
                        let cand = (oriented, t);
                        if bad.as_ref().map_or(true, |cur| cand < *cur) {
                            bad = Some(cand);
                        }
                    }
                }
            }
            if let Some((rim, t)) = bad {
                return Some((hub, rim, t));
            }
        }
        None
    }

    pub fn satisfies_sd2_star(&self, k: usize) -> Result<bool> {
        Ok(self.sd2_star_witness(k)?.is_none())
    }

    /// SD2*(k) for the complex and for the link of every simplex.
    pub fn sd2_star_links_witness(&self, k: usize) -> Result<Option<LinkSd2Witness>> {
        if let Some(w) = self.sd2_star_witness(k)? {
            return Ok(Some(LinkSd2Witness {
                simplex: Vec::new(),
                witness: w,
            }));
        }
        let simplices: Vec<Vec<Vertex>> = self.simplices().into_iter().flatten().collect();
        let found = simplices.par_iter().find_map_first(|s| {
            let link = self.link(s).expect("enumerated simplex");
            link.sd2_star_witness(k)
                .expect("k checked")
                .map(|w| LinkSd2Witness {
                    simplex: self.names_of(s),
                    witness: w,
                })
        });
        Ok(found)
    }

    pub fn has_sd2_star_links(&self, k: usize) -> Result<bool> {
        Ok(self.sd2_star_links_witness(k)?.is_none())
    }

    /// Whether `z` (a complex on a subset of the vertex names of `self`) is a full
    /// subcomplex. Fails when `z` is not a subcomplex at all.
    pub fn is_full_subcomplex(&self, z: &SimplicialComplex) -> Result<bool> {
        let ids = self.vertices_by_name(z.names())?;
        for f in z.facets() {
            let mapped: Vec<Vertex> = f.iter().map(|&v| ids[v as usize]).collect();
            if !self.is_simplex(&mapped) {
                return Err(Error::domain(format!(
                    "{:?} is a simplex of the candidate but not of the ambient complex",
                    z.names_of(f)
                )));
            }
        }
        let span = self.induced_subcomplex(&ids)?;
        Ok(span.same_complex(z))
    }
}

pub(crate) fn is_sorted_subset(small: &[Vertex], big: &[Vertex]) -> bool {
    if small.len() > big.len() {
        return false;
    }
    let mut it = big.iter();
    'outer: for x in small {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

pub(crate) fn intersect_sorted(a: &[Vertex], b: &[Vertex]) -> Vec<Vertex> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn adjacent(adj: &[Vec<Vertex>], u: Vertex, v: Vertex) -> bool {
    adj[u as usize].binary_search(&v).is_ok()
}

/// Rotation/reflection representative: smallest vertex first, then the smaller
/// of its two neighbours on the cycle.
pub(crate) fn canonical_cycle(c: &[Vertex]) -> Vec<Vertex> {
    let n = c.len();
    let start = (0..n).min_by_key(|&i| c[i]).unwrap();
    let forward: Vec<Vertex> = (0..n).map(|i| c[(start + i) % n]).collect();
    let backward: Vec<Vertex> = (0..n).map(|i| c[(start + n - i) % n]).collect();
    forward.min(backward)
}

/// Rim rotated and possibly reversed so that edge `i → i+1` becomes `rim[0] → rim[1]`,
/// choosing the lexicographically smaller of the two directions.
fn pendant_orientation(rim: &[Vertex], i: usize) -> Vec<Vertex> {
    let n = rim.len();
    let forward: Vec<Vertex> = (0..n).map(|j| rim[(i + j) % n]).collect();
    let backward: Vec<Vertex> = (0..n).map(|j| rim[(i + 1 + n - j) % n]).collect();
    forward.min(backward)
}

/// Orders a vertex set whose induced graph is 2-regular into a single cycle.
fn cycle_order(adj: &[Vec<Vertex>], set: &[Vertex]) -> Option<Vec<Vertex>> {
    let inside = |v: Vertex| set.binary_search(&v).is_ok();
    let mut order = vec![set[0]];
    let mut prev = u32::MAX;
    let mut cur = set[0];
    loop {
        let next = adj[cur as usize]
            .iter()
            .copied()
            .find(|&w| inside(w) && w != prev)?;
        if next == set[0] {
            break;
        }
        order.push(next);
        if order.len() > set.len() {
            return None;
        }
        prev = cur;
        cur = next;
    }
    (order.len() == set.len()).then_some(order)
}

/// Depth-first search for a full cycle of exactly `len` vertices whose smallest
/// vertex is `start`. With `allowed`, the cycle must lie in that sorted set.
fn first_induced_cycle(
    adj: &[Vec<Vertex>],
    allowed: Option<&[Vertex]>,
    start: Vertex,
    len: usize,
) -> Option<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut path = vec![start];
    induced_cycle_dfs(adj, allowed, &mut path, len, true, false, &mut out);
    out.pop()
}

/// Like [`first_induced_cycle`] but `start` only has to lie on the cycle.
fn first_induced_cycle_through(
    adj: &[Vec<Vertex>],
    start: Vertex,
    len: usize,
) -> Option<Vec<Vertex>> {
    let mut out = Vec::new();
    let mut path = vec![start];
    induced_cycle_dfs(adj, None, &mut path, len, true, true, &mut out);
    out.pop()
}

fn all_induced_cycles(
    adj: &[Vec<Vertex>],
    allowed: Option<&[Vertex]>,
    start: Vertex,
    len: usize,
    out: &mut Vec<Vec<Vertex>>,
) {
    let mut path = vec![start];
    induced_cycle_dfs(adj, allowed, &mut path, len, false, false, out);
}

/// Returns true when the search should stop.
fn induced_cycle_dfs(
    adj: &[Vec<Vertex>],
    allowed: Option<&[Vertex]>,
    path: &mut Vec<Vertex>,
    len: usize,
    first_only: bool,
    anchored: bool,
    out: &mut Vec<Vec<Vertex>>,
) -> bool {
    let m = path.len();
    if m == len {
        // One orientation per cycle.
        if path[1] < path[len - 1] {
            out.push(path.clone());
            return first_only;
        }
        return false;
    }
    let start = path[0];
    let last = path[m - 1];
    for &w in &adj[last as usize] {
        if (!anchored && w <= start) || path.contains(&w) {
            continue;
        }
        if let Some(a) = allowed {
            if a.binary_search(&w).is_err() {
                continue;
            }
        }
        if m >= 2 && adjacent(adj, w, start) != (m == len - 1) {
            continue;
        }
        if m >= 3 && path[1..m - 1].iter().any(|&p| adjacent(adj, w, p)) {
            continue;
        }
        path.push(w);
        let stop = induced_cycle_dfs(adj, allowed, path, len, first_only, anchored, out);
        path.pop();
        if stop {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cx(faces: &[&[&str]]) -> SimplicialComplex {
        let faces: Vec<Vec<&str>> = faces.iter().map(|f| f.to_vec()).collect();
        SimplicialComplex::from_faces(&faces).unwrap()
    }

    #[test]
    fn build_examples() {
        let t = cx(&[&["a", "b"], &["b", "c"], &["c", "a"]]);
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(t.facets().len(), 3);
        let p = cx(&[&["a"]]);
        assert_eq!(p.num_vertices(), 1);
        assert_eq!(p.dimension(), 0);
        let s = cx(&[&["a", "b", "c"], &["a", "b"]]);
        assert_eq!(s.named_facets(), vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn duplicate_vertex_in_face_is_rejected() {
        let faces = vec![vec!["a", "a", "b"]];
        assert!(matches!(
            SimplicialComplex::from_faces(&faces),
            Err(Error::MalformedInput(_))
        ));
    }

    #[test]
    fn induced_examples() {
        let c5 = fixtures::cycle(5);
        let path = c5.induced_by_names(&["v0", "v1", "v2"]).unwrap();
        assert_eq!(
            path.named_facets(),
            vec![vec!["v0", "v1"], vec!["v1", "v2"]]
        );
        let all: Vec<Vertex> = (0..5).collect();
        assert!(c5.induced_subcomplex(&all).unwrap().same_complex(&c5));
        let tri = cx(&[&["a", "b", "c"]]);
        assert_eq!(
            tri.induced_by_names(&["a", "b"]).unwrap().named_facets(),
            vec![vec!["a", "b"]]
        );
        assert!(matches!(c5.induced_subcomplex(&[7]), Err(Error::Domain(_))));
    }

    #[test]
    fn link_examples() {
        let oct = fixtures::octahedron();
        let l = oct.link_by_names(&["a0"]).unwrap();
        assert!(l.same_complex(&cx(&[
            &["b0", "c0"],
            &["c0", "b1"],
            &["b1", "c1"],
            &["c1", "b0"]
        ])));
        let c5 = fixtures::cycle(5);
        let l = c5.link_by_names(&["v0"]).unwrap();
        assert_eq!(l.named_facets(), vec![vec!["v1"], vec!["v4"]]);
        let tet = cx(&[&["a", "b", "c", "d"]]);
        assert_eq!(
            tet.link_by_names(&["a", "b"]).unwrap().named_facets(),
            vec![vec!["c", "d"]]
        );
        assert!(matches!(
            c5.link_by_names(&["v0", "v2"]),
            Err(Error::Domain(_))
        ));
        // The link of a maximal simplex is the empty complex.
        assert_eq!(
            tet.link_by_names(&["a", "b", "c", "d"])
                .unwrap()
                .num_vertices(),
            0
        );
    }

    #[test]
    fn flag_examples() {
        assert!(!cx(&[&["a", "b"], &["b", "c"], &["c", "a"]]).is_flag());
        assert!(fixtures::cycle(5).is_flag());
        assert!(fixtures::octahedron().is_flag());
        let hollow_tet = cx(&[
            &["a", "b", "c"],
            &["a", "b", "d"],
            &["a", "c", "d"],
            &["b", "c", "d"],
        ]);
        assert_eq!(hollow_tet.non_face_clique().unwrap().len(), 4);
    }

    #[test]
    fn largeness_examples() {
        let c5 = fixtures::cycle(5);
        assert!(c5.is_k_large(5).unwrap());
        match c5.largeness_witness(6).unwrap() {
            Some(LargenessWitness::FullCycle(c)) => {
                assert_eq!(c, vec!["v0", "v1", "v2", "v3", "v4"])
            }
            other => panic!("unexpected {other:?}"),
        }
        let c4 = fixtures::cycle(4);
        assert!(
            matches!(c4.largeness_witness(5).unwrap(), Some(LargenessWitness::FullCycle(c)) if c.len() == 4)
        );
        let oct = fixtures::octahedron();
        assert!(oct.is_k_large(4).unwrap());
        assert!(!oct.is_k_large(5).unwrap());
        assert!(matches!(c5.is_k_large(3), Err(Error::Domain(_))));
    }

    #[test]
    fn full_cycle_enumeration_examples() {
        assert_eq!(fixtures::cycle(5).enumerate_full_cycles(6).len(), 1);
        let equators = fixtures::octahedron().enumerate_full_cycles(4);
        assert_eq!(equators.len(), 3);
        assert!(equators.iter().all(|c| c.len() == 4));
        let tet = cx(&[&["a", "b", "c", "d"]]);
        assert!(tet.enumerate_full_cycles(6).is_empty());
    }

    #[test]
    fn sd2_examples() {
        assert!(fixtures::cycle(5).satisfies_sd2_star(6).unwrap());
        let cone = fixtures::cone_over_cycle(4);
        assert!(matches!(
            cone.sd2_star_witness(6).unwrap(),
            Some(Sd2Witness::FourWheel { .. })
        ));
        match fixtures::icosahedron().sd2_star_witness(6).unwrap() {
            Some(Sd2Witness::UncoveredPendantWheel { wheel }) => {
                assert_eq!(wheel.rim.len(), 5);
                assert!(wheel.pendant.is_some());
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            fixtures::cycle(5).sd2_star_witness(5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sd2_links_examples() {
        assert!(fixtures::cycle(6).has_sd2_star_links(6).unwrap());
        assert!(!fixtures::cone_over_cycle(4).has_sd2_star_links(6).unwrap());
        let oct = fixtures::octahedron()
            .sd2_star_links_witness(6)
            .unwrap()
            .unwrap();
        assert!(oct.simplex.is_empty());
        assert!(matches!(oct.witness, Sd2Witness::FourWheel { .. }));
    }

    #[test]
    fn full_subcomplex_examples() {
        let c5 = fixtures::cycle(5);
        let path = cx(&[&["v0", "v1"], &["v1", "v2"]]);
        assert!(c5.is_full_subcomplex(&path).unwrap());
        let c4 = fixtures::cycle(4);
        let opposite = cx(&[&["v0"], &["v2"]]);
        assert!(c4.is_full_subcomplex(&opposite).unwrap());
        let solid = cx(&[&["a", "b", "c"]]);
        let hollow = cx(&[&["a", "b"], &["b", "c"], &["c", "a"]]);
        assert!(!solid.is_full_subcomplex(&hollow).unwrap());
        assert!(matches!(
            hollow.is_full_subcomplex(&solid),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn span_is_idempotent_and_links_compose() {
        let ico = fixtures::icosahedron();
        let a = ico.vertices_by_name(&["0", "1", "2", "5", "7"]).unwrap();
        let once = ico.induced_subcomplex(&a).unwrap();
        let all: Vec<Vertex> = (0..once.num_vertices() as Vertex).collect();
        assert!(once.induced_subcomplex(&all).unwrap().same_complex(&once));
        let l = ico.link_by_names(&["0"]).unwrap();
        let ll = l.link_by_names(&["1"]).unwrap();
        assert!(ll.same_complex(&ico.link_by_names(&["0", "1"]).unwrap()));
    }
}
