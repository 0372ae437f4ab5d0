//! Finite quotients of right-angled Coxeter groups, displacement certificates,
//! and the quotient Davis complex `Y = H\Σ` with `H` the kernel.

use std::collections::{BTreeMap, HashMap, HashSet};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coxeter::{Entry, IntMatrix, RacgSystem};
use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::simplicial::Vertex;

/// Default bound on enumerated group elements.
pub const DEFAULT_ELEMENT_CAP: usize = 10_000_000;

type Key = Box<[u16]>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "type")]
pub enum QuotientKind {
    /// Tits representation reduced mod `modulus`.
    Congruence { modulus: u64 },
    /// Generator images supplied by the user, as matrices over `ℤ/modulus`.
    User { modulus: u64 },
}

/// User quotient file: generator images as square matrices over `ℤ/modulus`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientSpec {
    pub modulus: u64,
    pub generators: BTreeMap<String, Vec<Vec<i64>>>,
}

/// A finite quotient `φ : W → G` with `G` a group of matrices over `ℤ/m`,
/// optionally times `ℤ/2` (the sign refinement). Element 0 is the identity;
/// elements are ordered by word length, then lexicographically.
#[derive(Clone, Debug)]
pub struct FiniteQuotient {
    source: RacgSystem,
    kind: QuotientKind,
    modulus: u64,
    dim: usize,
    signed: bool,
    width: usize,
    gens: Vec<Key>,
    elements: Vec<u16>,
    index: HashMap<Key, u32>,
    /// `right[g * |S| + s]` is the index of `g·φ(s)`.
    right: Vec<u32>,
    length: Vec<u16>,
    orientable: bool,
}

impl FiniteQuotient {
    /// The image of the Tits representation mod `m`.
    pub fn congruence(w: &RacgSystem, m: u64, cap: usize) -> Result<Self> {
        if m < 3 {
            return Err(Error::domain(format!(
                "modulus {m} < 3: the congruence kernel need not be torsion-free"
            )));
        }
        check_modulus(m)?;
        let n = w.num_generators();
        let gens = (0..n)
            .map(|s| {
                let rho = w.tits_matrix(s as Vertex)?;
                Ok(rho.residues(m).into_iter().map(|x| x as u16).collect())
            })
            .collect::<Result<Vec<Key>>>()?;
        Self::close(
            w.clone(),
            QuotientKind::Congruence { modulus: m },
            m,
            n,
            false,
            gens,
            cap,
        )
    }

    /// A quotient given by explicit generator images. Relations are checked.
    pub fn user(w: &RacgSystem, spec: &QuotientSpec, cap: usize) -> Result<Self> {
        let m = spec.modulus;
        if m < 2 {
            return Err(Error::domain(format!(
                "modulus must be at least 2, got {m}"
            )));
        }
        check_modulus(m)?;
        for name in spec.generators.keys() {
            w.generator(name)?;
        }
        let mut dim = None;
        let mut gens = Vec::with_capacity(w.num_generators());
        for name in w.generator_names() {
            let rows = spec.generators.get(name).ok_or_else(|| {
                Error::malformed(format!("no image given for generator {name:?}"))
            })?;
            let d = rows.len();
            if d == 0 || rows.iter().any(|r| r.len() != d) || dim.is_some_and(|e| e != d) {
                return Err(Error::malformed(format!(
                    "image of {name:?} is not a square matrix of the common size"
                )));
            }
            dim = Some(d);
            gens.push(
                rows.iter()
                    .flatten()
                    .map(|&x| x.rem_euclid(m as i64) as u16)
                    .collect::<Key>(),
            );
        }
        let dim = dim.unwrap_or(1);
        if gens.is_empty() {
            return Self::close(
                w.clone(),
                QuotientKind::User { modulus: m },
                m,
                dim,
                false,
                gens,
                cap,
            );
        }
        let q = Self::close(
            w.clone(),
            QuotientKind::User { modulus: m },
            m,
            dim,
            false,
            gens,
            cap,
        )?;
        q.check_relations()?;
        Ok(q)
    }

    fn close(
        source: RacgSystem,
        kind: QuotientKind,
        m: u64,
        dim: usize,
        signed: bool,
        gens: Vec<Key>,
        cap: usize,
    ) -> Result<Self> {
        let width = dim * dim + usize::from(signed);
        let mut q = FiniteQuotient {
            source,
            kind,
            modulus: m,
            dim,
            signed,
            width,
            gens,
            elements: Vec::new(),
            index: HashMap::new(),
            right: Vec::new(),
            length: Vec::new(),
            orientable: true,
        };
        let id = q.identity_key();
        q.elements.extend_from_slice(&id);
        q.index.insert(id, 0);
        q.length.push(0);
        let (mut start, mut end) = (0usize, 1usize);
        let mut buf = vec![0u16; width];
        let mut depth = 0u16;
        while start < end {
            depth += 1;
            let mut fresh: Vec<Key> = Vec::new();
            for g in start..end {
                for s in 0..q.gens.len() {
                    q.mul_into(q.element(g as u32), &q.gens[s], &mut buf);
                    if !q.index.contains_key(buf.as_slice()) {
                        let k: Key = buf.clone().into_boxed_slice();
                        q.index.insert(k.clone(), u32::MAX);
                        fresh.push(k);
                    }
                }
            }
            if end + fresh.len() > cap {
                return Err(Error::Resource {
                    what: "quotient group elements".into(),
                    limit: cap,
                    reached: end + fresh.len(),
                });
            }
            fresh.par_sort_unstable();
            for (i, k) in fresh.into_iter().enumerate() {
                q.elements.extend_from_slice(&k);
                q.length.push(depth);
                *q.index.get_mut(&k).unwrap() = (end + i) as u32;
            }
            start = end;
            end = q.length.len();
        }
        let n = q.gens.len();
        let right: Vec<u32> = (0..q.order())
            .into_par_iter()
            .flat_map_iter(|g| {
                let mut buf = vec![0u16; width];
                (0..n)
                    .map(|s| {
                        q.mul_into(q.element(g as u32), &q.gens[s], &mut buf);
                        q.index[buf.as_slice()]
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        q.right = right;
        q.orientable = (0..q.order())
            .all(|g| (0..n).all(|s| q.length[q.right[g * n + s] as usize] % 2 != q.length[g] % 2));
        Ok(q)
    }

    fn identity_key(&self) -> Key {
        let mut k = vec![0u16; self.width];
        for i in 0..self.dim {
            k[i * self.dim + i] = 1 % self.modulus as u16;
        }
        k.into_boxed_slice()
    }

    fn mul_into(&self, a: &[u16], b: &[u16], out: &mut [u16]) {
        let d = self.dim;
        let m = self.modulus as u32;
        for i in 0..d {
            for j in 0..d {
                let mut acc = 0u32;
                for k in 0..d {
                    acc = (acc + a[i * d + k] as u32 * b[k * d + j] as u32) % m;
                }
                out[i * d + j] = acc as u16;
            }
        }
        if self.signed {
            out[d * d] = a[d * d] ^ b[d * d];
        }
    }

    fn check_relations(&self) -> Result<()> {
        let id = self.identity_key();
        let mut buf = vec![0u16; self.width];
        let mut other = vec![0u16; self.width];
        let names = self.source.generator_names();
        for (s, g) in self.gens.iter().enumerate() {
            self.mul_into(g, g, &mut buf);
            if *buf != *id {
                return Err(Error::domain(format!(
                    "image of {:?} does not square to the identity",
                    names[s]
                )));
            }
        }
        for (s, t) in self.source.commuting_pairs() {
            self.mul_into(&self.gens[s as usize], &self.gens[t as usize], &mut buf);
            self.mul_into(&self.gens[t as usize], &self.gens[s as usize], &mut other);
            if buf != other {
                return Err(Error::domain(format!(
                    "images of {:?} and {:?} do not commute",
                    names[s as usize], names[t as usize]
                )));
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &RacgSystem {
        &self.source
    }

    pub fn kind(&self) -> &QuotientKind {
        &self.kind
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Whether elements carry the extra sign coordinate.
    pub fn is_sign_refined(&self) -> bool {
        self.signed
    }

    pub fn order(&self) -> usize {
        self.length.len()
    }

    pub fn num_generators(&self) -> usize {
        self.gens.len()
    }

    /// Flattened matrix entries of element `g` (plus the sign bit when refined).
    pub fn element(&self, g: u32) -> &[u16] {
        &self.elements[g as usize * self.width..(g as usize + 1) * self.width]
    }

    pub fn index_of(&self, key: &[u16]) -> Option<u32> {
        self.index.get(key).copied()
    }

    /// `g·φ(s)`.
    pub fn right_mul(&self, g: u32, s: Vertex) -> u32 {
        self.right[g as usize * self.gens.len() + s as usize]
    }

    /// `φ(s)·g`.
    pub fn left_mul(&self, s: Vertex, g: u32) -> u32 {
        let mut buf = vec![0u16; self.width];
        self.mul_into(&self.gens[s as usize], self.element(g), &mut buf);
        self.index[buf.as_slice()]
    }

    /// `g·φ(t₁)⋯φ(t_k)`.
    pub fn right_mul_word(&self, g: u32, word: &[Vertex]) -> u32 {
        word.iter().fold(g, |h, &s| self.right_mul(h, s))
    }

    /// Word length of `g` in `G` with respect to the generator images.
    pub fn word_length(&self, g: u32) -> usize {
        self.length[g as usize] as usize
    }

    /// Whether the sign character `s ↦ -1` factors through `G`.
    pub fn is_orientable(&self) -> bool {
        self.orientable
    }

    /// Generator images as matrices with entries in `0..m`.
    pub fn generator_images(&self) -> BTreeMap<String, Vec<Vec<u64>>> {
        let d = self.dim;
        self.source
            .generator_names()
            .iter()
            .zip(&self.gens)
            .map(|(name, k)| {
                (
                    name.clone(),
                    (0..d)
                        .map(|i| (0..d).map(|j| k[i * d + j] as u64).collect())
                        .collect(),
                )
            })
            .collect()
    }

    pub fn torsion_free_certificate(&self) -> TorsionFree {
        match self.kind {
            QuotientKind::Congruence { .. } => TorsionFree::Proven,
            QuotientKind::User { .. } => TorsionFree::Unknown,
        }
    }
}

fn check_modulus(m: u64) -> Result<()> {
    if m > u16::MAX as u64 {
        return Err(Error::domain(format!("modulus {m} exceeds {}", u16::MAX)));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsionFree {
    /// Congruence kernel with `m ≥ 3`.
    Proven,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientability {
    /// The quotient itself is orientable.
    Direct,
    /// The sign refinement (a double cover) was taken.
    DoubleCover,
}

/// `Q` itself when the sign character factors through it, else `(φ, sign)`.
pub fn orientable_refinement(
    q: &FiniteQuotient,
    cap: usize,
) -> Result<(FiniteQuotient, Orientability)> {
    if q.is_orientable() {
        return Ok((q.clone(), Orientability::Direct));
    }
    let gens = q
        .gens
        .iter()
        .map(|k| {
            let mut v = k.to_vec();
            v.push(1);
            v.into_boxed_slice()
        })
        .collect();
    let r = FiniteQuotient::close(
        q.source.clone(),
        q.kind.clone(),
        q.modulus,
        q.dim,
        true,
        gens,
        cap,
    )?;
    if !r.is_orientable() {
        return Err(Error::InternalConsistency(
            "sign refinement is not orientable".into(),
        ));
    }
    Ok((r, Orientability::DoubleCover))
}

// ------------------------------------------------------------------ balls

/// An element of `W` in a ball of `Th(Σ)^(1)` around the base vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BallElement {
    pub matrix: IntMatrix<BigInt>,
    pub distance: usize,
    /// A word for the element, one spherical block per step.
    pub word: Vec<String>,
}

/// A nontrivial kernel element found in a ball.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitness {
    pub word: Vec<String>,
    pub distance: usize,
}

struct Ball<T> {
    matrices: Vec<IntMatrix<T>>,
    distance: Vec<u32>,
    parent: Vec<(u32, u32)>,
    layer_sizes: Vec<usize>,
    kernel: Option<u32>,
}

/// Nonempty cliques of the nerve, each with the product of its reflections.
fn spherical_steps<T: Entry>(w: &RacgSystem) -> Result<Vec<(Vec<Vertex>, IntMatrix<T>)>> {
    let n = w.num_generators();
    let rho = (0..n)
        .map(|s| Ok(convert::<T>(&w.tits_matrix(s as Vertex)?)))
        .collect::<Result<Vec<_>>>()?;
    w.spherical_subsets()
        .iter()
        .filter(|t| !t.is_empty())
        .map(|t| {
            let mut m = IntMatrix::identity(n);
            for &s in t {
                m = m.mul(&rho[s as usize])?;
            }
            Ok((t.clone(), m))
        })
        .collect()
}

fn convert<T: Entry>(m: &IntMatrix<i64>) -> IntMatrix<T> {
    IntMatrix::from_rows(&m.rows())
}

/// BFS in `Th(Σ)^(1)` from the base vertex up to `radius`. With a quotient,
/// stops after the first layer containing a nontrivial kernel element.
fn ball_search<T: Entry>(
    w: &RacgSystem,
    radius: usize,
    q: Option<&FiniteQuotient>,
    cap: usize,
) -> Result<Ball<T>> {
    let steps = spherical_steps::<T>(w)?;
    let n = w.num_generators();
    let id = IntMatrix::<T>::identity(n);
    let mut seen: HashSet<IntMatrix<T>> = HashSet::new();
    seen.insert(id.clone());
    let mut ball = Ball {
        matrices: vec![id],
        distance: vec![0],
        parent: vec![(u32::MAX, u32::MAX)],
        layer_sizes: vec![1],
        kernel: None,
    };
    let mut image = vec![0u32];
    let (mut start, mut end) = (0usize, 1usize);
    for d in 1..=radius {
        for u in start..end {
            for (si, (t, x)) in steps.iter().enumerate() {
                let v = ball.matrices[u].mul(x)?;
                if seen.contains(&v) {
                    continue;
                }
                seen.insert(v.clone());
                let img = q.map_or(0, |q| q.right_mul_word(image[u], t));
                if q.is_some() && img == 0 && ball.kernel.is_none() {
                    ball.kernel = Some(ball.matrices.len() as u32);
                }
                ball.matrices.push(v);
                ball.distance.push(d as u32);
                ball.parent.push((u as u32, si as u32));
                image.push(img);
                if ball.matrices.len() > cap {
                    return Err(Error::Resource {
                        what: "thickening ball elements".into(),
                        limit: cap,
                        reached: ball.matrices.len(),
                    });
                }
            }
        }
        ball.layer_sizes.push(ball.matrices.len() - end);
        start = end;
        end = ball.matrices.len();
        if ball.kernel.is_some() || start == end {
            break;
        }
    }
    Ok(ball)
}

fn with_fallback<R>(f: impl Fn(bool) -> Result<R>) -> Result<R> {
    match f(false) {
        Err(Error::Overflow) => f(true),
        other => other,
    }
}

fn word_of<T>(w: &RacgSystem, ball: &Ball<T>, mut e: u32) -> Vec<String> {
    let steps: Vec<&Vec<Vertex>> = w
        .spherical_subsets()
        .iter()
        .filter(|t| !t.is_empty())
        .collect();
    let mut blocks = Vec::new();
    while ball.parent[e as usize].0 != u32::MAX {
        let (p, si) = ball.parent[e as usize];
        blocks.push(w.nerve().names_of(steps[si as usize]).join(""));
        e = p;
    }
    blocks.reverse();
    blocks
}

/// All elements of `W` within distance `r` of the base vertex of `Th(Σ)^(1)`.
pub fn thickening_ball(w: &RacgSystem, r: usize, cap: usize) -> Result<Vec<BallElement>> {
    fn run<T: Entry>(w: &RacgSystem, r: usize, cap: usize) -> Result<Vec<BallElement>> {
        let ball = ball_search::<T>(w, r, None, cap)?;
        Ok((0..ball.matrices.len())
            .map(|e| BallElement {
                matrix: ball.matrices[e].to_big(),
                distance: ball.distance[e] as usize,
                word: word_of(w, &ball, e as u32),
            })
            .collect())
    }
    with_fallback(|big| {
        if big {
            run::<BigInt>(w, r, cap)
        } else {
            run::<i64>(w, r, cap)
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisplacementCheck {
    pub radius: usize,
    pub holds: bool,
    pub witness: Option<KernelWitness>,
    pub ball_size: usize,
}

fn kernel_search(
    w: &RacgSystem,
    q: &FiniteQuotient,
    radius: usize,
    cap: usize,
) -> Result<(Option<KernelWitness>, usize)> {
    fn run<T: Entry>(
        w: &RacgSystem,
        q: &FiniteQuotient,
        radius: usize,
        cap: usize,
    ) -> Result<(Option<KernelWitness>, usize)> {
        let ball = ball_search::<T>(w, radius, Some(q), cap)?;
        let witness = ball.kernel.map(|e| KernelWitness {
            word: word_of(w, &ball, e),
            distance: ball.distance[e as usize] as usize,
        });
        Ok((witness, ball.matrices.len()))
    }
    if q.num_generators() != w.num_generators() {
        return Err(Error::domain(
            "quotient and system have different generators",
        ));
    }
    with_fallback(|big| {
        if big {
            run::<BigInt>(w, q, radius, cap)
        } else {
            run::<i64>(w, q, radius, cap)
        }
    })
}

/// Whether every nontrivial kernel element moves the base vertex at least `r`.
/// Vertex-transitivity of `W` on `Σ^(0)` makes the base vertex sufficient.
pub fn displacement_at_least(
    w: &RacgSystem,
    q: &FiniteQuotient,
    r: usize,
    cap: usize,
) -> Result<DisplacementCheck> {
    if r == 0 {
        return Err(Error::domain("displacement radius must be at least 1"));
    }
    let (witness, ball_size) = kernel_search(w, q, r - 1, cap)?;
    Ok(DisplacementCheck {
        radius: r,
        holds: witness.is_none(),
        witness,
        ball_size,
    })
}

/// Smallest distance of a nontrivial kernel element, searching up to `max_r`.
pub fn min_displacement(
    w: &RacgSystem,
    q: &FiniteQuotient,
    max_r: usize,
    cap: usize,
) -> Result<Option<KernelWitness>> {
    Ok(kernel_search(w, q, max_r, cap)?.0)
}

// ------------------------------------------------------------------ Y = H\Σ

/// The quotient Davis complex: vertices are the elements of `G`, and each
/// coset `g·φ(W_T)` of a spherical subgroup spans a `|T|`-cube.
#[derive(Clone, Debug)]
pub struct QuotientDavis {
    pub quotient: FiniteQuotient,
    pub complex: CubicalComplex,
    /// Cube id → (smallest corner, spherical subset index).
    pub cube_labels: Vec<(u32, u32)>,
    cube_at: Vec<u32>,
}

/// Builds `Y`. Requires displacement at least 2 so that spherical cosets embed.
pub fn quotient_davis(q: FiniteQuotient, cap: usize) -> Result<QuotientDavis> {
    let w = q.source().clone();
    let check = displacement_at_least(&w, &q, 2, cap)?;
    if let Some(wit) = check.witness {
        return Err(Error::Verification(format!(
            "displacement below 2: kernel element {} at distance {}",
            wit.word.join(" "),
            wit.distance
        )));
    }
    let sph = w.spherical_subsets();
    let ns = sph.len();
    let order = q.order();
    let corners_of = |g: u32, t: &[Vertex]| -> Vec<u32> {
        (0..1usize << t.len())
            .map(|mask| {
                let word: Vec<Vertex> = (0..t.len())
                    .filter(|i| mask >> i & 1 == 1)
                    .map(|i| t[i])
                    .collect();
                q.right_mul_word(g, &word)
            })
            .collect()
    };
    let mut anchors = vec![0u32; order * ns];
    anchors
        .par_chunks_mut(ns)
        .enumerate()
        .try_for_each(|(g, row)| -> Result<()> {
            for (ti, t) in sph.iter().enumerate() {
                let c = corners_of(g as u32, t);
                let mut sorted = c.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != c.len() {
                    return Err(Error::Verification(format!(
                        "coset of {} at g{g} has {} corners, expected {}",
                        w.spherical_name(t),
                        sorted.len(),
                        c.len()
                    )));
                }
                row[ti] = sorted[0];
            }
            Ok(())
        })?;
    // Maximal spherical subsets give the maximal cubes.
    let maximal_t: Vec<usize> = (0..ns)
        .filter(|&ti| {
            !sph.iter().any(|u| {
                u.len() > sph[ti].len() && crate::simplicial::is_sorted_subset(&sph[ti], u)
            })
        })
        .collect();
    let mut cubes = Vec::new();
    for g in 0..order as u32 {
        for &ti in &maximal_t {
            if anchors[g as usize * ns + ti] == g {
                cubes.push(corners_of(g, &sph[ti]));
            }
        }
    }
    let names = (0..order).map(|g| format!("g{g}")).collect();
    let complex = CubicalComplex::from_indexed(names, cubes)?;
    let mut cube_at = vec![0u32; order * ns];
    let mut cube_labels = vec![(u32::MAX, u32::MAX); complex.cubes().len()];
    for g in 0..order as u32 {
        for (ti, t) in sph.iter().enumerate() {
            if anchors[g as usize * ns + ti] == g {
                let id = complex.cube_id(&corners_of(g, t)).ok_or_else(|| {
                    Error::InternalConsistency(format!("missing cube for coset of g{g}"))
                })?;
                if cube_labels[id as usize].0 != u32::MAX {
                    return Err(Error::Verification(format!(
                        "two spherical cosets span cube {id}"
                    )));
                }
                cube_labels[id as usize] = (g, ti as u32);
            }
        }
    }
    if let Some(id) = cube_labels.iter().position(|l| l.0 == u32::MAX) {
        return Err(Error::Verification(format!(
            "cube {} is not a spherical coset",
            complex.cube_name(id as u32)
        )));
    }
    let mut at_anchor: HashMap<(u32, u32), u32> = HashMap::with_capacity(cube_labels.len());
    for (id, &(g, ti)) in cube_labels.iter().enumerate() {
        at_anchor.insert((g, ti), id as u32);
    }
    for g in 0..order {
        for ti in 0..ns {
            cube_at[g * ns + ti] = at_anchor[&(anchors[g * ns + ti], ti as u32)];
        }
    }
    let y = QuotientDavis {
        quotient: q,
        complex,
        cube_labels,
        cube_at,
    };
    y.check_counts()?;
    y.check_links()?;
    Ok(y)
}

impl QuotientDavis {
    pub fn system(&self) -> &RacgSystem {
        self.quotient.source()
    }

    /// The cube of type `T` (by spherical index) containing `g`.
    pub fn cube_at(&self, g: u32, t: usize) -> u32 {
        self.cube_at[g as usize * self.system().spherical_subsets().len() + t]
    }

    /// Spherical subset index of a cube.
    pub fn cube_type(&self, id: u32) -> usize {
        self.cube_labels[id as usize].1 as usize
    }

    /// Smallest corner of a cube.
    pub fn anchor(&self, id: u32) -> u32 {
        self.cube_labels[id as usize].0
    }

    /// `#d-cubes · 2^d = |G| · #{T ∈ 𝒮 : |T| = d}` for every `d`.
    fn check_counts(&self) -> Result<()> {
        let counts = self.complex.cube_counts();
        let mut want: Vec<usize> = Vec::new();
        for t in self.system().spherical_subsets() {
            if want.len() <= t.len() {
                want.resize(t.len() + 1, 0);
            }
            want[t.len()] += 1;
        }
        let order = self.quotient.order();
        for (d, &c) in counts.iter().enumerate() {
            let expect = want.get(d).copied().unwrap_or(0) * order;
            if c << d != expect {
                return Err(Error::Verification(format!(
                    "{c} cubes of dimension {d}, expected {}",
                    expect >> d
                )));
            }
        }
        Ok(())
    }

    /// Every vertex link equals the nerve under `g·φ(s) ↦ s`.
    fn check_links(&self) -> Result<()> {
        let w = self.system();
        let n = w.num_generators();
        let bad = (0..self.quotient.order() as u32)
            .into_par_iter()
            .find_map_first(|g| {
                let link = match self.complex.vertex_link(g) {
                    Ok(l) => l,
                    Err(e) => return Some(e.to_string()),
                };
                let mut back = HashMap::new();
                for s in 0..n {
                    back.insert(
                        format!("g{}", self.quotient.right_mul(g, s as Vertex)),
                        w.generator_names()[s].clone(),
                    );
                }
                match link.relabel(|name| {
                    back.get(name)
                        .cloned()
                        .unwrap_or_else(|| format!("?{name}"))
                }) {
                    Ok(l) if l.same_complex(w.nerve()) => None,
                    _ => Some(format!("link of g{g} is not the nerve")),
                }
            });
        match bad {
            None => Ok(()),
            Some(msg) => Err(Error::Verification(msg)),
        }
    }

    /// Euler characteristic from the cube counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.complex.euler_characteristic()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const CAP: usize = 1_000_000;

    fn sys(x: &crate::SimplicialComplex) -> RacgSystem {
        RacgSystem::from_nerve(x).unwrap()
    }

    fn flip_quotient(w: &RacgSystem) -> FiniteQuotient {
        let mut g = BTreeMap::new();
        g.insert("s".to_string(), vec![vec![-1]]);
        g.insert("t".to_string(), vec![vec![1]]);
        FiniteQuotient::user(
            w,
            &QuotientSpec {
                modulus: 3,
                generators: g,
            },
            CAP,
        )
        .unwrap()
    }

    #[test]
    fn congruence_examples() {
        let d = sys(&fixtures::s0());
        assert_eq!(FiniteQuotient::congruence(&d, 3, CAP).unwrap().order(), 6);
        assert_eq!(FiniteQuotient::congruence(&d, 5, CAP).unwrap().order(), 10);
        let e = sys(&fixtures::edge());
        for m in [3, 4, 5, 7] {
            assert_eq!(FiniteQuotient::congruence(&e, m, CAP).unwrap().order(), 4);
        }
        assert!(FiniteQuotient::congruence(&d, 2, CAP).is_err());
        assert!(matches!(
            FiniteQuotient::congruence(&d, 3, 4),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn ball_examples() {
        let d = sys(&fixtures::s0());
        assert_eq!(thickening_ball(&d, 1, CAP).unwrap().len(), 3);
        assert_eq!(thickening_ball(&d, 2, CAP).unwrap().len(), 5);
        assert_eq!(
            thickening_ball(&sys(&fixtures::pentagon()), 1, CAP)
                .unwrap()
                .len(),
            11
        );
    }

    #[test]
    fn displacement_examples() {
        let d = sys(&fixtures::s0());
        let q3 = FiniteQuotient::congruence(&d, 3, CAP).unwrap();
        assert!(displacement_at_least(&d, &q3, 5, CAP).unwrap().holds);
        assert!(!displacement_at_least(&d, &q3, 7, CAP).unwrap().holds);
        assert_eq!(
            min_displacement(&d, &q3, 20, CAP)
                .unwrap()
                .unwrap()
                .distance,
            6
        );
        let q5 = FiniteQuotient::congruence(&d, 5, CAP).unwrap();
        assert_eq!(
            min_displacement(&d, &q5, 20, CAP)
                .unwrap()
                .unwrap()
                .distance,
            10
        );
        let flip = flip_quotient(&d);
        let c = displacement_at_least(&d, &flip, 5, CAP).unwrap();
        assert_eq!(
            c.witness,
            Some(KernelWitness {
                word: vec!["t".into()],
                distance: 1
            })
        );
        let p = sys(&fixtures::pentagon());
        let trivial = FiniteQuotient::user(
            &p,
            &QuotientSpec {
                modulus: 2,
                generators: p
                    .generator_names()
                    .iter()
                    .map(|s| (s.clone(), vec![vec![1]]))
                    .collect(),
            },
            CAP,
        )
        .unwrap();
        assert_eq!(trivial.order(), 1);
        let c = displacement_at_least(&p, &trivial, 2, CAP).unwrap();
        assert_eq!(c.witness.unwrap().distance, 1);
    }

    #[test]
    fn refinement_examples() {
        let d = sys(&fixtures::s0());
        let q3 = FiniteQuotient::congruence(&d, 3, CAP).unwrap();
        assert_eq!(
            orientable_refinement(&q3, CAP).unwrap().1,
            Orientability::Direct
        );
        let flip = flip_quotient(&d);
        assert_eq!(flip.order(), 2);
        let (r, how) = orientable_refinement(&flip, CAP).unwrap();
        assert_eq!((r.order(), how), (4, Orientability::DoubleCover));
        let e = FiniteQuotient::congruence(&sys(&fixtures::edge()), 3, CAP).unwrap();
        assert_eq!(
            orientable_refinement(&e, CAP).unwrap().1,
            Orientability::Direct
        );
    }

    #[test]
    fn user_quotient_relations_are_checked() {
        let e = sys(&fixtures::edge());
        let mut g = BTreeMap::new();
        g.insert("s".to_string(), vec![vec![0, 1], vec![1, 0]]);
        g.insert("t".to_string(), vec![vec![-1, 0], vec![0, 1]]);
        assert!(FiniteQuotient::user(
            &e,
            &QuotientSpec {
                modulus: 3,
                generators: g
            },
            CAP
        )
        .is_err());
    }

    #[test]
    fn quotient_davis_examples() {
        let d = sys(&fixtures::s0());
        let y = quotient_davis(FiniteQuotient::congruence(&d, 3, CAP).unwrap(), CAP).unwrap();
        assert_eq!(y.complex.cube_counts(), vec![6, 6]);
        let y5 = quotient_davis(FiniteQuotient::congruence(&d, 5, CAP).unwrap(), CAP).unwrap();
        assert_eq!(y5.complex.cube_counts(), vec![10, 10]);
        let e = sys(&fixtures::edge());
        let sq = quotient_davis(FiniteQuotient::congruence(&e, 3, CAP).unwrap(), CAP).unwrap();
        assert_eq!(sq.complex.cube_counts(), vec![4, 4, 1]);
        assert!(quotient_davis(flip_quotient(&d), CAP).is_err());
    }
}
