//! Generators and brute-force oracles shared by the integration tests.
//!
//! The oracles only use the public membership queries (`has_edge`,
//! `is_simplex`, `facets`) and enumerate vertex subsets directly.

#![allow(dead_code)]

use std::collections::VecDeque;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use racg_core::antisym::{Cochain, TriangulatedQuotient};
use racg_core::cubical::CubicalComplex;
use racg_core::quotient::QuotientDavis;
use racg_core::simplicial::Vertex;
use racg_core::SimplicialComplex;

pub fn names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

/// The clique complex of a graph on `n ≤ 16` vertices given by an adjacency predicate.
pub fn clique_complex(n: usize, adj: impl Fn(usize, usize) -> bool) -> SimplicialComplex {
    let cliques: Vec<u32> = (1u32..1 << n)
        .filter(|&m| {
            bits(m)
                .iter()
                .all(|&a| bits(m).iter().all(|&b| a == b || adj(a, b)))
        })
        .collect();
    let maximal: Vec<Vec<String>> = cliques
        .iter()
        .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|&m| bits(m).iter().map(|&i| format!("v{i}")).collect())
        .collect();
    SimplicialComplex::with_vertices(&names(n), &maximal).unwrap()
}

pub fn bits(m: u32) -> Vec<usize> {
    (0..32).filter(|i| m >> i & 1 == 1).collect()
}

/// A random complex on at most `max_n` vertices: either a clique complex of a
/// random graph, or random faces (often not flag).
pub fn random_complex(rng: &mut ChaCha8Rng, max_n: usize) -> SimplicialComplex {
    let n = rng.gen_range(1..=max_n);
    let p: f64 = rng.gen_range(0.1..0.7);
    if rng.gen_bool(0.6) {
        let mut adj = vec![vec![false; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let e = rng.gen_bool(p);
                adj[i][j] = e;
                adj[j][i] = e;
            }
        }
        clique_complex(n, |a, b| adj[a][b])
    } else {
        let all = names(n);
        let mut faces: Vec<Vec<String>> = all.iter().map(|v| vec![v.clone()]).collect();
        for _ in 0..rng.gen_range(0..3 * n) {
            let size = rng.gen_range(2..=3.min(n).max(2));
            if size > n {
                continue;
            }
            let mut f: Vec<String> = all.choose_multiple(rng, size).cloned().collect();
            f.sort();
            faces.push(f);
        }
        SimplicialComplex::with_vertices(&all, &faces).unwrap()
    }
}

fn induced_degrees(x: &SimplicialComplex, set: &[usize]) -> Vec<usize> {
    set.iter()
        .map(|&a| {
            set.iter()
                .filter(|&&b| b != a && x.has_edge(a as Vertex, b as Vertex))
                .count()
        })
        .collect()
}

fn connected(x: &SimplicialComplex, set: &[usize]) -> bool {
    let mut seen = vec![set[0]];
    let mut stack = vec![set[0]];
    while let Some(a) = stack.pop() {
        for &b in set {
            if !seen.contains(&b) && x.has_edge(a as Vertex, b as Vertex) {
                seen.push(b);
                stack.push(b);
            }
        }
    }
    seen.len() == set.len()
}

/// Every set of pairwise adjacent vertices is a simplex.
pub fn flag_oracle(x: &SimplicialComplex) -> bool {
    let n = x.num_vertices();
    (1u32..1 << n).all(|m| {
        let s = bits(m);
        let clique = s.iter().all(|&a| {
            s.iter()
                .all(|&b| a == b || x.has_edge(a as Vertex, b as Vertex))
        });
        let vs: Vec<Vertex> = s.iter().map(|&i| i as Vertex).collect();
        !clique || x.is_simplex(&vs)
    })
}

/// Vertex sets of size `len` spanning a full cycle.
pub fn full_cycle_sets(x: &SimplicialComplex, len: usize) -> Vec<Vec<usize>> {
    let n = x.num_vertices();
    (1u32..1 << n)
        .filter(|m| m.count_ones() as usize == len)
        .map(bits)
        .filter(|s| induced_degrees(x, s).iter().all(|&d| d == 2) && connected(x, s))
        .collect()
}

pub fn k_large_oracle(x: &SimplicialComplex, k: usize) -> bool {
    flag_oracle(x) && (4..k).all(|l| full_cycle_sets(x, l).is_empty())
}

fn closed_nbhd(x: &SimplicialComplex, v: usize) -> Vec<usize> {
    (0..x.num_vertices())
        .filter(|&u| u == v || x.has_edge(u as Vertex, v as Vertex))
        .collect()
}

/// SD2*(k) by exhaustive wheel search.
pub fn sd2_oracle(x: &SimplicialComplex, k: usize) -> bool {
    if !flag_oracle(x) {
        return false;
    }
    let n = x.num_vertices();
    let adj = |a: usize, b: usize| x.has_edge(a as Vertex, b as Vertex);
    for hub in 0..n {
        let nb: Vec<usize> = (0..n).filter(|&u| adj(hub, u)).collect();
        for len in 4..k {
            for m in 1u32..1 << nb.len() {
                if m.count_ones() as usize != len {
                    continue;
                }
                let rim: Vec<usize> = bits(m).iter().map(|&i| nb[i]).collect();
                if !(induced_degrees(x, &rim).iter().all(|&d| d == 2) && connected(x, &rim)) {
                    continue;
                }
                if len == 4 {
                    return false;
                }
                // pendant triangles on rim edges
                for &a in &rim {
                    for &b in &rim {
                        if a >= b || !adj(a, b) {
                            continue;
                        }
                        for t in 0..n {
                            if t == hub || rim.contains(&t) || !adj(a, t) || !adj(b, t) {
                                continue;
                            }
                            let mut wheel = rim.clone();
                            wheel.push(hub);
                            wheel.push(t);
                            let covered = (0..n).any(|c| {
                                let ball = closed_nbhd(x, c);
                                wheel.iter().all(|w| ball.contains(w))
                            });
                            if !covered {
                                return false;
                            }
                        }
                    }
                }
            }
        }
    }
    true
}

/// Rank of an integer matrix modulo a large prime.
pub fn rank_mod_p(mut rows: Vec<Vec<i64>>) -> usize {
    const P: i64 = 1_000_003;
    let inv = |a: i64| {
        let (mut r, mut b, mut e) = (1i64, a.rem_euclid(P), P - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % P;
            }
            b = b * b % P;
            e >>= 1;
        }
        r
    };
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i][c].rem_euclid(P) != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let iv = inv(rows[rank][c]);
        for i in 0..rows.len() {
            if i != rank {
                let f = rows[i][c].rem_euclid(P) * iv % P;
                if f != 0 {
                    for j in 0..cols {
                        rows[i][j] = (rows[i][j] - f * rows[rank][j]).rem_euclid(P);
                    }
                }
            }
        }
        rank += 1;
    }
    rank
}

/// All simplices (nonempty) of the full subcomplex on `keep`, by dimension.
fn simplices_on(x: &SimplicialComplex, keep: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let mut out: Vec<Vec<Vec<usize>>> = Vec::new();
    for m in 1u32..1 << keep.len() {
        let s: Vec<usize> = bits(m).iter().map(|&i| keep[i]).collect();
        let vs: Vec<Vertex> = s.iter().map(|&v| v as Vertex).collect();
        if x.is_simplex(&vs) {
            let d = s.len() - 1;
            if out.len() <= d {
                out.resize(d + 1, Vec::new());
            }
            out[d].push(s);
        }
    }
    out
}

/// Reduced Betti numbers mod a large prime of the full subcomplex on `keep`,
/// indexed from degree -1.
pub fn reduced_betti_on(x: &SimplicialComplex, keep: &[usize]) -> Vec<usize> {
    let simp = simplices_on(x, keep);
    // chain groups C_{-1} = Z (empty simplex), C_0, C_1, ...
    let mut dims = vec![1usize];
    dims.extend(simp.iter().map(|l| l.len()));
    let boundary_rank = |d: usize| -> usize {
        // ∂_d : C_d → C_{d-1}, with C_{-1} at index 0
        if d == 0 {
            return usize::from(!simp.is_empty() && !simp[0].is_empty());
        }
        let (hi, lo) = (&simp[d], &simp[d - 1]);
        let rows: Vec<Vec<i64>> = lo
            .iter()
            .map(|f| {
                hi.iter()
                    .map(|s| match s.iter().position(|v| !f.contains(v)) {
                        Some(i) if f.len() + 1 == s.len() && f.iter().all(|v| s.contains(v)) => {
                            if i % 2 == 0 {
                                1
                            } else {
                                -1
                            }
                        }
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        rank_mod_p(rows)
    };
    let ranks: Vec<usize> = (0..simp.len()).map(boundary_rank).collect();
    (0..dims.len())
        .map(|i| {
            // degree i-1
            let out_rank = if i == 0 { 0 } else { ranks[i - 1] };
            let in_rank = if i < simp.len() { ranks[i] } else { 0 };
            dims[i] - out_rank - in_rank
        })
        .collect()
}

/// vcd lower bound `max{n : H̄^{n-1}(L_{S∖T}) ≠ 0, T a simplex or ∅}`, with
/// ranks taken mod a large prime.
pub fn vcd_oracle(x: &SimplicialComplex) -> i64 {
    let n = x.num_vertices();
    let mut best = 0i64;
    for m in 0u32..1 << n {
        let t = bits(m);
        let tv: Vec<Vertex> = t.iter().map(|&v| v as Vertex).collect();
        if !t.is_empty() && !x.is_simplex(&tv) {
            continue;
        }
        let keep: Vec<usize> = (0..n).filter(|v| !t.contains(v)).collect();
        let b = reduced_betti_on(x, &keep);
        if let Some(top) = b.iter().rposition(|&r| r != 0) {
            // index `top` is degree top-1, so n = top
            best = best.max(top as i64);
        }
    }
    best
}

/// Random square complexes (plus occasional solid cubes and edges) with at most
/// `max_cells` cells. Inputs violating the intersection axiom are discarded.
pub fn random_cube_complex(rng: &mut ChaCha8Rng, max_cells: usize) -> CubicalComplex {
    loop {
        let n = rng.gen_range(4..=24);
        let vs = names(n);
        let mut cubes: Vec<Vec<String>> = Vec::new();
        let pieces = rng.gen_range(1..=10);
        for _ in 0..pieces {
            match rng.gen_range(0..10) {
                0 => cubes.push(vs.choose_multiple(rng, 2).cloned().collect()),
                1 if n >= 8 => cubes.push(vs.choose_multiple(rng, 8).cloned().collect()),
                _ => cubes.push(vs.choose_multiple(rng, 4).cloned().collect()),
            }
        }
        let Ok(y) = CubicalComplex::from_corner_lists(&cubes) else {
            continue;
        };
        if y.cubes().len() <= max_cells {
            return y;
        }
    }
}

/// A cube complex that is locally `k`-large, drawn from random complexes, cube
/// grids and cycles.
pub fn locally_large_cube_complex(
    rng: &mut ChaCha8Rng,
    k: usize,
    max_cells: usize,
) -> CubicalComplex {
    loop {
        let y = match rng.gen_range(0..4) {
            0 => racg_core::fixtures::cubical_cycle(rng.gen_range(3..12)),
            1 if k == 4 => racg_core::fixtures::square_grid(rng.gen_range(2..6)),
            _ => random_cube_complex(rng, max_cells),
        };
        if y.cubes().len() <= max_cells && y.is_locally_k_large(k).unwrap() {
            return y;
        }
    }
}

/// `k`-large complexes built as clique complexes of random graphs of girth ≥ k
/// with some triangles filled in only where no short cycle appears.
pub fn random_k_large(rng: &mut ChaCha8Rng, k: usize, max_n: usize) -> SimplicialComplex {
    loop {
        let x = random_complex(rng, max_n);
        if k_large_oracle(&x, k) {
            return x;
        }
    }
}

/// Clique complex of a random graph on at most `max_n` vertices.
pub fn random_flag(rng: &mut ChaCha8Rng, max_n: usize) -> SimplicialComplex {
    loop {
        let x = random_complex(rng, max_n);
        if flag_oracle(&x) {
            return x;
        }
    }
}

/// A word (generator indices) for each element, by breadth-first search from
/// the identity along right multiplication.
pub fn words(y: &QuotientDavis) -> Vec<Vec<Vertex>> {
    let q = &y.quotient;
    let mut out: Vec<Option<Vec<Vertex>>> = vec![None; q.order()];
    out[0] = Some(Vec::new());
    let mut queue = VecDeque::from([0u32]);
    while let Some(g) = queue.pop_front() {
        for s in 0..q.num_generators() as Vertex {
            let h = q.right_mul(g, s);
            if out[h as usize].is_none() {
                let mut w = out[g as usize].clone().unwrap();
                w.push(s);
                out[h as usize] = Some(w);
                queue.push_back(h);
            }
        }
    }
    out.into_iter().map(Option::unwrap).collect()
}

/// `y·τ` for a chain of cube ids, with the left action spelled out through a word for `y`.
pub fn act(y: &QuotientDavis, word: &[Vertex], tau: &[Vertex]) -> Vec<Vertex> {
    let q = &y.quotient;
    let left = |g: u32| word.iter().rev().fold(g, |g, &s| q.left_mul(s, g));
    let mut out: Vec<Vertex> = tau
        .iter()
        .map(|&c| {
            let image: Vec<Vertex> = y.complex.cube(c).iter().map(|&g| left(g)).collect();
            y.complex
                .cube_id(&image)
                .expect("the action permutes cubes")
        })
        .collect();
    out.sort_unstable();
    out
}

/// `(1/|G|) Σ_y (-1)^{|y|} h(y·τ)` evaluated directly on every basis simplex.
pub fn antisym_oracle(
    t: &TriangulatedQuotient,
    y: &QuotientDavis,
    words: &[Vec<Vertex>],
    h: &Cochain,
) -> Cochain {
    let basis = t.basis(h.degree);
    let n = BigRational::from_integer(BigInt::from(words.len()));
    let values = basis
        .iter()
        .map(|tau| {
            let mut sum = BigRational::zero();
            for w in words {
                let image = act(y, w, tau);
                let i = basis.binary_search(&image).unwrap();
                if w.len() % 2 == 0 {
                    sum += &h.values[i];
                } else {
                    sum -= &h.values[i];
                }
            }
            sum / &n
        })
        .collect();
    Cochain {
        degree: h.degree,
        values,
    }
}

/// Sparse random rational cochain with small numerators and denominators.
pub fn random_cochain(r: &mut ChaCha8Rng, degree: i64, len: usize) -> Cochain {
    let values = (0..len)
        .map(|_| {
            if r.gen_bool(0.5) {
                BigRational::zero()
            } else {
                BigRational::new(
                    BigInt::from(r.gen_range(-9..=9)),
                    BigInt::from(r.gen_range(1..=5)),
                )
            }
        })
        .collect();
    Cochain { degree, values }
}
