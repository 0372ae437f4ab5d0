//! JSON formats for complexes, quotients and reports.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cubical::CubicalComplex;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::simplicial::SimplicialComplex;

/// A simplicial complex by vertex names and maximal faces (any generating
/// faces are accepted on input).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SimplicialTag {
    #[default]
    Simplicial,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CubicalTag {
    #[default]
    Cubical,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimplicialJson {
    #[serde(rename = "type")]
    pub kind: SimplicialTag,
    pub vertices: Vec<String>,
    pub maximal_faces: Vec<Vec<String>>,
}

impl SimplicialJson {
    pub fn from_complex(x: &SimplicialComplex) -> Self {
        SimplicialJson {
            kind: SimplicialTag::Simplicial,
            vertices: x.names().to_vec(),
            maximal_faces: x.named_facets(),
        }
    }

    pub fn to_complex(&self) -> Result<SimplicialComplex> {
        SimplicialComplex::with_vertices(&self.vertices, &self.maximal_faces)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubeJson {
    pub dim: usize,
    /// `2^dim` corners; corner `m` differs from corner 0 along the axes set in `m`.
    pub corners: Vec<String>,
}

/// A cube complex by vertex names and maximal cubes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CubicalJson {
    #[serde(rename = "type")]
    pub kind: CubicalTag,
    pub vertices: Vec<String>,
    pub cubes: Vec<CubeJson>,
}

impl CubicalJson {
    pub fn from_complex(y: &CubicalComplex) -> Self {
        CubicalJson {
            kind: CubicalTag::Cubical,
            vertices: y.names().to_vec(),
            cubes: y
                .maximal_cubes()
                .iter()
                .map(|&c| CubeJson {
                    dim: y.cube_dimension(c),
                    corners: y.names_of(y.cube(c)),
                })
                .collect(),
        }
    }

    pub fn to_complex(&self) -> Result<CubicalComplex> {
        for c in &self.cubes {
            if c.dim >= usize::BITS as usize || c.corners.len() != 1 << c.dim {
                return Err(Error::malformed(format!(
                    "cube of dimension {} has {} corners",
                    c.dim,
                    c.corners.len()
                )));
            }
        }
        let corners: Vec<Vec<String>> = self.cubes.iter().map(|c| c.corners.clone()).collect();
        CubicalComplex::from_cubes(&self.vertices, &corners)
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::malformed(format!("{}: {e}", path.display())))
}

/// Pretty JSON with a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, to_json_string(value)?)?;
    Ok(())
}

pub fn read_simplicial(path: &Path) -> Result<SimplicialComplex> {
    read_json::<SimplicialJson>(path)?.to_complex()
}

pub fn read_cubical(path: &Path) -> Result<CubicalComplex> {
    read_json::<CubicalJson>(path)?.to_complex()
}

/// `fixture:<name>` or a path to a simplicial complex file.
pub fn load_nerve(source: &str) -> Result<SimplicialComplex> {
    match source.strip_prefix("fixture:") {
        Some(name) => fixtures::by_name(name)
            .ok_or_else(|| Error::malformed(format!("unknown fixture {name:?}"))),
        None => read_simplicial(Path::new(source)),
    }
}

/// `fixture:<name>` or a path to a cube complex file.
pub fn load_cubical(source: &str) -> Result<CubicalComplex> {
    match source.strip_prefix("fixture:") {
        Some(name) => fixtures::cubical_by_name(name)
            .ok_or_else(|| Error::malformed(format!("unknown cubical fixture {name:?}"))),
        None => read_cubical(Path::new(source)),
    }
}
