//! Finite abstract cube complexes.
//!
//! A `d`-cube is an array of `2^d` distinct vertices indexed by `d`-bit masks;
//! flipping bit `i` of a mask moves along the `i`-th axis. A face is picked by a
//! set of free bits `F` and a base mask `b` disjoint from `F`, and its corners
//! are `b | sub` for `sub ⊆ F` listed in increasing order.
//!
//! Cubes are identified by their vertex sets. Every stored corner array is in a
//! canonical layout: the smallest vertex sits at mask 0 and the axes are ordered
//! by the vertex one step along them.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::simplicial::{LargenessWitness, SimplicialComplex, Vertex};

/// Cubes above this dimension are rejected; their face lattice would not fit anyway.
pub const MAX_CUBE_DIM: usize = 16;

#[derive(Clone, Debug)]
pub struct CubicalComplex {
    names: Vec<String>,
    index: HashMap<String, Vertex>,
    /// Canonical corner arrays, sorted by dimension and then vertex set.
    cubes: Vec<Box<[Vertex]>>,
    lookup: HashMap<Box<[Vertex]>, u32>,
    maximal: Vec<u32>,
    /// Maximal cubes at each vertex.
    vertex_cubes: Vec<Vec<u32>>,
}

/// Iterates the submasks of `f` in increasing numeric order.
pub fn submasks(f: usize) -> impl Iterator<Item = usize> {
    let mut next = Some(0usize);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == f {
            None
        } else {
            Some(((cur | !f).wrapping_add(1)) & f)
        };
        Some(cur)
    })
}

/// Corners of the face of `corners` with free bits `free` and fixed bits `base`.
pub fn face_corners(corners: &[Vertex], free: usize, base: usize) -> Vec<Vertex> {
    submasks(free).map(|sub| corners[base | sub]).collect()
}

fn cube_dim(len: usize) -> Option<usize> {
    (len.is_power_of_two() && len.trailing_zeros() as usize <= MAX_CUBE_DIM)
        .then(|| len.trailing_zeros() as usize)
}

/// Canonical layout of a cube: smallest corner at mask 0, axes sorted by the
/// neighbouring corner.
pub fn canonical_corners(corners: &[Vertex]) -> Vec<Vertex> {
    let d = corners.len().trailing_zeros() as usize;
    let b0 = (0..corners.len()).min_by_key(|&m| corners[m]).unwrap();
    let mut axes: Vec<usize> = (0..d).collect();
    axes.sort_by_key(|&i| corners[b0 ^ (1 << i)]);
    (0..corners.len())
        .map(|m| {
            let mut src = b0;
            for (j, &axis) in axes.iter().enumerate() {
                if m >> j & 1 == 1 {
                    src ^= 1 << axis;
                }
            }
            corners[src]
        })
        .collect()
}

fn sorted_key(corners: &[Vertex]) -> Box<[Vertex]> {
    let mut k = corners.to_vec();
    k.sort_unstable();
    k.into_boxed_slice()
}

impl CubicalComplex {
    /// Builds a cube complex from cubes given by corner arrays. Faces are added,
    /// cube structures on shared faces must agree, and any two maximal cubes must
    /// meet in a common face of both.
    pub fn from_cubes<S: AsRef<str>, T: AsRef<str>>(
        vertices: &[S],
        cubes: &[Vec<T>],
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
        let mut ids = Vec::with_capacity(cubes.len());
        for c in cubes {
            let mut row = Vec::with_capacity(c.len());
            for v in c {
                let v = v.as_ref();
                row.push(*index.get(v).ok_or_else(|| {
                    Error::malformed(format!("cube mentions unknown vertex {v:?}"))
                })?);
            }
            ids.push(row);
        }
        Self::from_indexed(names, ids)
    }

    /// Like [`from_cubes`](Self::from_cubes) with vertices listed in first-appearance order.
    pub fn from_corner_lists<S: AsRef<str>>(cubes: &[Vec<S>]) -> Result<Self> {
        let mut seen = HashMap::new();
        let mut order: Vec<String> = Vec::new();
        for c in cubes {
            for v in c {
                let v = v.as_ref();
                if !seen.contains_key(v) {
                    seen.insert(v.to_string(), ());
                    order.push(v.to_string());
                }
            }
        }
        Self::from_cubes(&order, &cubes)
    }

    pub(crate) fn from_indexed(names: Vec<String>, cubes: Vec<Vec<Vertex>>) -> Result<Self> {
        let n = names.len();
        let mut lookup: HashMap<Box<[Vertex]>, Box<[Vertex]>> = HashMap::new();
        let name_list = |vs: &[Vertex]| {
            vs.iter()
                .map(|&v| names[v as usize].clone())
                .collect::<Vec<_>>()
        };
        for v in 0..n as Vertex {
            lookup.insert(vec![v].into_boxed_slice(), vec![v].into_boxed_slice());
        }
        for c in &cubes {
            let d = cube_dim(c.len()).ok_or_else(|| {
                Error::malformed(format!(
                    "cube with {} corners is not a cube of dimension <= {MAX_CUBE_DIM}",
                    c.len()
                ))
            })?;
            let key = sorted_key(c);
            if key.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::malformed(format!(
                    "cube {:?} repeats a corner",
                    name_list(c)
                )));
            }
            for free in 1..(1usize << d) {
                let mut base = 0usize;
                loop {
                    let face = face_corners(c, free, base);
                    let fkey = sorted_key(&face);
                    let canon = canonical_corners(&face);
                    match lookup.get(&fkey) {
                        Some(existing) if **existing != *canon => {
                            return Err(Error::MalformedComplex {
                                first: name_list(c),
                                second: name_list(existing),
                                reason: "carry different cube structures on the same vertex set"
                                    .into(),
                            });
                        }
                        Some(_) => {}
                        None => {
                            lookup.insert(fkey, canon.into_boxed_slice());
                        }
                    }
                    // Next base disjoint from `free`.
                    let rest = !free & ((1 << d) - 1);
                    if base == rest {
                        break;
                    }
                    base = ((base | free).wrapping_add(1)) & rest;
                }
            }
        }
        let mut all: Vec<(Box<[Vertex]>, Box<[Vertex]>)> = lookup.into_iter().collect();
        all.par_sort_unstable_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
        let mut lookup = HashMap::with_capacity(all.len());
        let mut cubes = Vec::with_capacity(all.len());
        for (i, (k, c)) in all.into_iter().enumerate() {
            lookup.insert(k, i as u32);
            cubes.push(c);
        }
        let mut complex = CubicalComplex {
            index: names
                .iter()
                .enumerate()
                .map(|(i, s)| (s.clone(), i as Vertex))
                .collect(),
            names,
            cubes,
            lookup,
            maximal: Vec::new(),
            vertex_cubes: vec![Vec::new(); n],
        };
        complex.find_maximal();
        complex.check_intersections()?;
        Ok(complex)
    }

    fn find_maximal(&mut self) {
        let mut covered = vec![false; self.cubes.len()];
        for c in self.cubes.iter().rev() {
            let d = c.len().trailing_zeros() as usize;
            if d == 0 {
                continue;
            }
            // Codimension-one faces are enough: a covered face covers its own faces
            // only through them, and those are visited as well.
            for axis in 0..d {
                for side in [0, 1usize << axis] {
                    let free = ((1usize << d) - 1) & !(1 << axis);
                    let f = face_corners(c, free, side);
                    covered[self.lookup[&sorted_key(&f)] as usize] = true;
                }
            }
        }
        self.maximal = (0..self.cubes.len() as u32)
            .filter(|&i| !covered[i as usize])
            .collect();
        for &m in &self.maximal {
            for &v in self.cubes[m as usize].iter() {
                self.vertex_cubes[v as usize].push(m);
            }
        }
    }

    fn check_intersections(&self) -> Result<()> {
        let bad = (0..self.num_vertices() as Vertex)
            .into_par_iter()
            .find_map_first(|v| {
                let at = &self.vertex_cubes[v as usize];
                for (i, &a) in at.iter().enumerate() {
                    for &b in &at[i + 1..] {
                        let sa = sorted_key(&self.cubes[a as usize]);
                        let sb = sorted_key(&self.cubes[b as usize]);
                        let common = crate::simplicial::intersect_sorted(&sa, &sb);
                        if common[0] != v {
                            continue;
                        }
                        if !is_face_set(&self.cubes[a as usize], &common)
                            || !is_face_set(&self.cubes[b as usize], &common)
                        {
                            return Some((a, b));
                        }
                    }
                }
                None
            });
        match bad {
            None => Ok(()),
            Some((a, b)) => Err(Error::MalformedComplex {
                first: self.names_of(&self.cubes[a as usize]),
                second: self.names_of(&self.cubes[b as usize]),
                reason: "do not intersect in a common face".into(),
            }),
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

    pub fn names_of(&self, vs: &[Vertex]) -> Vec<String> {
        vs.iter().map(|&v| self.names[v as usize].clone()).collect()
    }

    /// All cubes (including vertices) in canonical corner layout.
    pub fn cubes(&self) -> &[Box<[Vertex]>] {
        &self.cubes
    }

    pub fn cube(&self, id: u32) -> &[Vertex] {
        &self.cubes[id as usize]
    }

    pub fn cube_dimension(&self, id: u32) -> usize {
        self.cubes[id as usize].len().trailing_zeros() as usize
    }

    /// Id of the cube with the given vertex set, if there is one.
    pub fn cube_id(&self, vertices: &[Vertex]) -> Option<u32> {
        self.lookup.get(&sorted_key(vertices)).copied()
    }

    pub fn maximal_cubes(&self) -> &[u32] {
        &self.maximal
    }

    /// Maximal cubes containing `v`.
    pub fn maximal_cubes_at(&self, v: Vertex) -> &[u32] {
        &self.vertex_cubes[v as usize]
    }

    pub fn dimension(&self) -> i32 {
        self.cubes
            .last()
            .map_or(-1, |c| c.len().trailing_zeros() as i32)
    }

    /// Number of cubes of each dimension.
    pub fn cube_counts(&self) -> Vec<usize> {
        let mut out = vec![0; (self.dimension() + 1).max(0) as usize];
        for c in &self.cubes {
            out[c.len().trailing_zeros() as usize] += 1;
        }
        out
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cube_counts()
            .iter()
            .enumerate()
            .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Link of a vertex. Its vertices are the edges at `v`, named by their other
    /// endpoint; edges span a simplex iff some cube at `v` contains all of them.
    pub fn vertex_link(&self, v: Vertex) -> Result<SimplicialComplex> {
        if v as usize >= self.num_vertices() {
            return Err(Error::domain(format!(
                "vertex index {v} is not in the complex"
            )));
        }
        let mut faces: Vec<Vec<Vertex>> = Vec::new();
        for &m in &self.vertex_cubes[v as usize] {
            let c = &self.cubes[m as usize];
            let at = c.iter().position(|&u| u == v).unwrap();
            let d = c.len().trailing_zeros() as usize;
            faces.push((0..d).map(|i| c[at ^ (1 << i)]).collect());
        }
        let mut others: Vec<Vertex> = faces.iter().flatten().copied().collect();
        others.sort_unstable();
        others.dedup();
        let local = |u: Vertex| others.binary_search(&u).unwrap() as Vertex;
        let names = others
            .iter()
            .map(|&u| self.names[u as usize].clone())
            .collect();
        let faces = faces
            .into_iter()
            .filter(|f| !f.is_empty())
            .map(|f| f.into_iter().map(local).collect())
            .collect();
        Ok(SimplicialComplex::from_indexed(names, faces))
    }

    pub fn vertex_link_by_name(&self, v: &str) -> Result<SimplicialComplex> {
        let id = self
            .vertex(v)
            .ok_or_else(|| Error::domain(format!("unknown vertex {v:?}")))?;
        self.vertex_link(id)
    }

    /// First vertex whose link is not `k`-large, with the link's witness.
    pub fn local_largeness_witness(&self, k: usize) -> Result<Option<(String, LargenessWitness)>> {
        if k < 4 {
            return Err(Error::domain(format!("k-largeness needs k >= 4, got {k}")));
        }
        Ok((0..self.num_vertices() as Vertex)
            .into_par_iter()
            .find_map_first(|v| {
                let link = self.vertex_link(v).expect("valid vertex");
                link.largeness_witness(k)
                    .expect("k checked")
                    .map(|w| (self.name(v).to_string(), w))
            }))
    }

    pub fn is_locally_k_large(&self, k: usize) -> Result<bool> {
        Ok(self.local_largeness_witness(k)?.is_none())
    }

    /// The thickening: same vertices, simplices are vertex sets of cubes.
    pub fn thicken(&self) -> Thickening {
        let mut facets: Vec<(Box<[Vertex]>, u32)> = self
            .maximal
            .iter()
            .map(|&m| (sorted_key(&self.cubes[m as usize]), m))
            .collect();
        facets.par_sort_unstable();
        let cube_of_facet = facets.iter().map(|f| f.1).collect();
        let complex = SimplicialComplex::from_maximal(
            self.names.clone(),
            facets.into_iter().map(|f| f.0.into_vec()).collect(),
        );
        Thickening {
            complex,
            cube_of_facet,
        }
    }

    /// Display name of a cube: its sorted vertex names in braces.
    pub fn cube_name(&self, id: u32) -> String {
        let mut vs = self.names_of(&self.cubes[id as usize]);
        vs.sort();
        format!("{{{}}}", vs.join(","))
    }

    /// Order complex of the face poset. Node `i` of the result is cube `i`.
    pub fn chambered_triangulation(&self) -> ChamberedTriangulation {
        let names: Vec<String> = (0..self.cubes.len() as u32)
            .map(|i| self.cube_name(i))
            .collect();
        let mut facets: Vec<Vec<Vertex>> = Vec::new();
        for &m in &self.maximal {
            let c = &self.cubes[m as usize];
            let d = c.len().trailing_zeros() as usize;
            for start in 0..c.len() {
                for perm in permutations(d) {
                    let mut free = 0usize;
                    let mut chain = Vec::with_capacity(d + 1);
                    for i in 0..=d {
                        if i > 0 {
                            free |= 1 << perm[i - 1];
                        }
                        let face = face_corners(c, free, start & !free);
                        chain.push(self.lookup[&sorted_key(&face)]);
                    }
                    chain.sort_unstable();
                    facets.push(chain);
                }
            }
        }
        let node_dims = self
            .cubes
            .iter()
            .map(|c| c.len().trailing_zeros() as u8)
            .collect();
        let min_corner = self.cubes.iter().map(|c| c[0]).collect();
        ChamberedTriangulation {
            complex: SimplicialComplex::from_maximal(names, facets),
            node_dims,
            min_corner,
        }
    }
}

/// Whether `set` (sorted) is the vertex set of a face of the cube `corners`.
fn is_face_set(corners: &[Vertex], set: &[Vertex]) -> bool {
    let d = corners.len().trailing_zeros() as usize;
    let full = (1usize << d) - 1;
    let (mut and, mut or) = (full, 0usize);
    for (m, c) in corners.iter().enumerate() {
        if set.binary_search(c).is_ok() {
            and &= m;
            or |= m;
        }
    }
    let agree = !(and ^ or) & full;
    set.len() == 1 << (d - agree.count_ones() as usize)
}

fn permutations(d: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..d).permutations(d).collect()
}

/// A thickening together with the maximal cube behind each maximal simplex.
#[derive(Clone, Debug)]
pub struct Thickening {
    pub complex: SimplicialComplex,
    /// `cube_of_facet[i]` is the cube whose vertex set is `complex.facets()[i]`.
    pub cube_of_facet: Vec<u32>,
}

/// Order complex of the face poset of a cube complex, with each simplex hung on
/// a chamber: the vertex at the bottom of its chain, or the smallest corner of
/// the bottom cube when the chain does not start at a vertex.
#[derive(Clone, Debug)]
pub struct ChamberedTriangulation {
    pub complex: SimplicialComplex,
    node_dims: Vec<u8>,
    min_corner: Vec<Vertex>,
}

impl ChamberedTriangulation {
    /// Dimension of the cube behind a node.
    pub fn node_dimension(&self, node: Vertex) -> usize {
        self.node_dims[node as usize] as usize
    }

    /// Chamber (a vertex of the cube complex) of a nonempty chain of nodes.
    pub fn chamber(&self, simplex: &[Vertex]) -> Vertex {
        let bottom = *simplex.iter().min().expect("nonempty simplex");
        self.min_corner[bottom as usize]
    }

    /// Number of simplices hung on each chamber, indexed by vertex of the cube complex.
    pub fn chamber_sizes(&self, num_chambers: usize) -> Vec<usize> {
        let mut out = vec![0; num_chambers];
        for s in self.complex.simplices().into_iter().flatten() {
            out[self.chamber(&s) as usize] += 1;
        }
        out
    }
}
