//! Small named complexes used as base cases and in tests.

use crate::cubical::{face_corners, CubicalComplex};
use crate::simplicial::SimplicialComplex;

fn build(faces: Vec<Vec<String>>) -> SimplicialComplex {
    SimplicialComplex::from_faces(&faces).expect("fixture faces are well formed")
}

fn named(faces: &[&[usize]]) -> SimplicialComplex {
    build(
        faces
            .iter()
            .map(|f| f.iter().map(|v| v.to_string()).collect())
            .collect(),
    )
}

/// The 0-sphere: two points `s` and `t`.
pub fn s0() -> SimplicialComplex {
    build(vec![vec!["s".into()], vec!["t".into()]])
}

/// A single edge `{s, t}`.
pub fn edge() -> SimplicialComplex {
    build(vec![vec!["s".into(), "t".into()]])
}

/// The `n`-cycle on `v0, …, v{n-1}`.
pub fn cycle(n: usize) -> SimplicialComplex {
    assert!(n >= 3);
    build(
        (0..n)
            .map(|i| vec![format!("v{i}"), format!("v{}", (i + 1) % n)])
            .collect(),
    )
}

pub fn pentagon() -> SimplicialComplex {
    cycle(5)
}

pub fn hexagon() -> SimplicialComplex {
    cycle(6)
}

/// Boundary of the cross-polytope on antipodal pairs `a0/a1`, `b0/b1`, `c0/c1`.
pub fn octahedron() -> SimplicialComplex {
    let mut faces = Vec::new();
    for a in ["a0", "a1"] {
        for b in ["b0", "b1"] {
            for c in ["c0", "c1"] {
                faces.push(vec![a.to_string(), b.to_string(), c.to_string()]);
            }
        }
    }
    build(faces)
}

/// Cone with apex `o` over the `n`-cycle.
pub fn cone_over_cycle(n: usize) -> SimplicialComplex {
    build(
        (0..n)
            .map(|i| {
                vec![
                    "o".to_string(),
                    format!("v{i}"),
                    format!("v{}", (i + 1) % n),
                ]
            })
            .collect(),
    )
}

/// The Petersen graph: outer 5-cycle `0..5`, inner pentagram `5..10`.
pub fn petersen() -> SimplicialComplex {
    let mut faces: Vec<&[usize]> = Vec::new();
    let edges: Vec<[usize; 2]> = (0..5)
        .flat_map(|i| [[i, (i + 1) % 5], [i, i + 5], [i + 5, (i + 2) % 5 + 5]])
        .collect();
    for e in &edges {
        faces.push(e);
    }
    named(&faces)
}

/// Icosahedron: apex `0`, upper ring `1..=5`, lower ring `6..=10`, apex `11`.
pub fn icosahedron() -> SimplicialComplex {
    let mut faces = Vec::new();
    for i in 0..5 {
        let (u, u1) = (1 + i, 1 + (i + 1) % 5);
        let (l, l1) = (6 + i, 6 + (i + 1) % 5);
        faces.push(vec![0, u, u1]);
        faces.push(vec![11, l, l1]);
        faces.push(vec![u, u1, l]);
        faces.push(vec![l, l1, u1]);
    }
    let faces: Vec<&[usize]> = faces.iter().map(|f| f.as_slice()).collect();
    named(&faces)
}

/// Minimal 6-vertex triangulation of the real projective plane.
pub fn rp2() -> SimplicialComplex {
    named(&[
        &[1, 2, 3],
        &[1, 3, 4],
        &[1, 4, 5],
        &[1, 5, 6],
        &[1, 6, 2],
        &[2, 3, 5],
        &[3, 4, 6],
        &[4, 5, 2],
        &[5, 6, 3],
        &[6, 2, 4],
    ])
}

/// Boundary of the tetrahedron, a 2-sphere.
pub fn tetrahedron_boundary() -> SimplicialComplex {
    named(&[&[0, 1, 2], &[0, 1, 3], &[0, 2, 3], &[1, 2, 3]])
}

/// Solid tetrahedron.
pub fn tetrahedron() -> SimplicialComplex {
    named(&[&[0, 1, 2, 3]])
}

/// Names accepted by [`by_name`], besides `cycle<n>` for `n ≥ 3`.
pub const NAMES: &[&str] = &[
    "s0",
    "edge",
    "pentagon",
    "hexagon",
    "octahedron",
    "petersen",
    "icosahedron",
    "rp2",
    "tetrahedron",
    "tetrahedron_boundary",
];

/// Names accepted by [`cubical_by_name`], besides `cubical_cycle<n>` and `square_grid<n>`.
pub const CUBICAL_NAMES: &[&str] = &["solid_cube", "cube_boundary"];

/// Look up a cubical fixture by name.
pub fn cubical_by_name(name: &str) -> Option<CubicalComplex> {
    match name {
        "solid_cube" => Some(solid_cube()),
        "cube_boundary" => Some(cube_boundary()),
        _ => {
            if let Some(n) = name.strip_prefix("cubical_cycle") {
                let n: usize = n.parse().ok()?;
                return (n >= 3).then(|| cubical_cycle(n));
            }
            let n: usize = name.strip_prefix("square_grid")?.parse().ok()?;
            (n >= 1).then(|| square_grid(n))
        }
    }
}

/// Look up a simplicial fixture by name.
pub fn by_name(name: &str) -> Option<SimplicialComplex> {
    Some(match name {
        "s0" => s0(),
        "edge" => edge(),
        "pentagon" => pentagon(),
        "hexagon" => hexagon(),
        "octahedron" => octahedron(),
        "petersen" => petersen(),
        "icosahedron" => icosahedron(),
        "rp2" => rp2(),
        "tetrahedron" => tetrahedron(),
        "tetrahedron_boundary" => tetrahedron_boundary(),
        _ => {
            let n = name.strip_prefix("cycle")?.parse().ok()?;
            if n < 3 {
                return None;
            }
            cycle(n)
        }
    })
}

/// Solid 3-cube on vertices `0..8`, corner `m` at mask `m`.
pub fn solid_cube() -> CubicalComplex {
    let corners: Vec<String> = (0..8).map(|i: usize| i.to_string()).collect();
    CubicalComplex::from_corner_lists(&[corners]).expect("valid cube")
}

/// Boundary surface of the 3-cube: six squares on vertices `0..8`.
pub fn cube_boundary() -> CubicalComplex {
    let corners: Vec<u32> = (0..8).collect();
    let mut squares = Vec::new();
    for axis in 0..3 {
        for side in [0, 1usize << axis] {
            let free = 0b111 & !(1 << axis);
            squares.push(
                face_corners(&corners, free, side)
                    .iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>(),
            );
        }
    }
    let names: Vec<String> = (0..8).map(|i: u32| i.to_string()).collect();
    CubicalComplex::from_cubes(&names, &squares).expect("valid surface")
}

/// The `n`-cycle as a 1-dimensional cube complex on `v0, …, v{n-1}`.
pub fn cubical_cycle(n: usize) -> CubicalComplex {
    let edges: Vec<Vec<String>> = (0..n)
        .map(|i| vec![format!("v{i}"), format!("v{}", (i + 1) % n)])
        .collect();
    CubicalComplex::from_corner_lists(&edges).expect("valid cycle")
}

/// An `n × n` grid of vertices `"i,j"` filled with squares.
pub fn square_grid(n: usize) -> CubicalComplex {
    let name = |i: usize, j: usize| format!("{i},{j}");
    let mut squares = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            squares.push(vec![
                name(i, j),
                name(i + 1, j),
                name(i, j + 1),
                name(i + 1, j + 1),
            ]);
        }
    }
    CubicalComplex::from_corner_lists(&squares).expect("valid grid")
}
