//! JSON file formats.
//!
//! Space: `{"elements": [...], "relation": [[lo, hi], ...]}` (any generating
//! relation, usually the Hasse diagram) or
//! `{"elements": [...], "opens": [[...], ...]}` (a full topology).
//!
//! Complex: `{"vertices": [...], "facets": [[...], ...]}`, closed under faces
//! on load.
//!
//! Cover: `{"space": <space object or path>, "members": [[...], ...]}`; a
//! relative path is resolved against the cover file's directory.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::covers::Cover;
use crate::poset::FiniteSpace;
use crate::simplicial::SimplicialComplex;
use crate::Result;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum SpaceFile {
    Relation { elements: Vec<String>, relation: Vec<(String, String)> },
    Topology { elements: Vec<String>, opens: Vec<Vec<String>> },
}

impl SpaceFile {
    pub fn build(&self) -> Result<FiniteSpace> {
        match self {
            SpaceFile::Relation { elements, relation } => FiniteSpace::from_hasse(elements.clone(), relation),
            SpaceFile::Topology { elements, opens } => FiniteSpace::from_topology(elements.clone(), opens),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexFile {
    pub vertices: Vec<String>,
    pub facets: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceRef {
    Path(PathBuf),
    Inline(SpaceFile),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoverFile {
    pub space: SpaceRef,
    pub members: Vec<Vec<String>>,
}

pub fn parse_space(text: &str) -> Result<FiniteSpace> {
    serde_json::from_str::<SpaceFile>(text)?.build()
}

pub fn read_space(path: &Path) -> Result<FiniteSpace> {
    parse_space(&std::fs::read_to_string(path)?)
}

/// The space in relation form, listing its covering pairs.
pub fn space_to_json(space: &FiniteSpace) -> Value {
    let relation: Vec<(&str, &str)> =
        space.covering_pairs().into_iter().map(|(a, b)| (space.label(a), space.label(b))).collect();
    json!({ "elements": space.labels(), "relation": relation })
}

pub fn parse_complex(text: &str, face_guard: usize) -> Result<SimplicialComplex> {
    let file: ComplexFile = serde_json::from_str(text)?;
    SimplicialComplex::from_facet_labels(file.vertices, &file.facets, face_guard)
}

pub fn read_complex(path: &Path, face_guard: usize) -> Result<SimplicialComplex> {
    parse_complex(&std::fs::read_to_string(path)?, face_guard)
}

pub fn complex_to_json(complex: &SimplicialComplex) -> Value {
    let facets: Vec<Vec<&str>> =
        complex.facets().iter().map(|f| f.iter().map(|&v| complex.vertices()[v].as_str()).collect()).collect();
    json!({ "vertices": complex.vertices(), "facets": facets })
}

/// Parses a cover; `base` is the directory relative space paths refer to.
pub fn parse_cover(text: &str, base: Option<&Path>) -> Result<Cover> {
    let file: CoverFile = serde_json::from_str(text)?;
    let space = match &file.space {
        SpaceRef::Inline(s) => s.build()?,
        SpaceRef::Path(p) => {
            let path = match base {
                Some(b) if p.is_relative() => b.join(p),
                _ => p.clone(),
            };
            read_space(&path)?
        }
    };
    Cover::from_labels(Arc::new(space), &file.members)
}

pub fn read_cover(path: &Path) -> Result<Cover> {
    parse_cover(&std::fs::read_to_string(path)?, path.parent())
}

/// Reads a cover of a space that is already loaded; the cover file's own
/// space must be the same space.
pub fn read_cover_of(path: &Path, space: &Arc<FiniteSpace>) -> Result<Cover> {
    let cover = read_cover(path)?;
    if **cover.space() != **space {
        return Err(crate::Error::SpaceMismatch);
    }
    Cover::new(space.clone(), cover.members().to_vec())
}

pub fn cover_to_json(cover: &Cover) -> Value {
    let space = cover.space();
    let members: Vec<Vec<&str>> = cover.members().iter().map(|m| m.iter().map(|x| space.label(x)).collect()).collect();
    json!({ "space": space_to_json(space), "members": members })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CIRCLE_TOPOLOGY: &str = r#"{"elements": ["a", "b", "c", "d"],
        "opens": [[], ["a"], ["b"], ["a", "b"], ["a", "b", "c"], ["a", "b", "d"], ["a", "b", "c", "d"]]}"#;

    #[test]
    fn space_round_trip() {
        let x = parse_space(CIRCLE_TOPOLOGY).unwrap();
        assert_eq!(x.covering_pairs().len(), 4);
        let again = parse_space(&space_to_json(&x).to_string()).unwrap();
        assert_eq!(x, again);
    }

    #[test]
    fn bad_input() {
        assert!(parse_space(r#"{"elements": ["a"]}"#).is_err());
        assert!(parse_space(r#"{"elements": ["a", "b"], "relation": [["a", "b"], ["b", "a"]]}"#).is_err());
        assert!(parse_space("not json").is_err());
    }

    #[test]
    fn cover_inline_and_round_trip() {
        let text = format!(r#"{{"space": {CIRCLE_TOPOLOGY}, "members": [["a", "b", "c"], ["a", "b", "d"]]}}"#);
        let c = parse_cover(&text, None).unwrap();
        assert_eq!(c.len(), 2);
        let again = parse_cover(&cover_to_json(&c).to_string(), None).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn complex_round_trip() {
        let k = parse_complex(r#"{"vertices": ["x", "y", "z"], "facets": [["x", "y"], ["y", "z"]]}"#, 100).unwrap();
        assert_eq!(k.face_count(), 5);
        let again = parse_complex(&complex_to_json(&k).to_string(), 100).unwrap();
        assert_eq!(k.faces(), again.faces());
    }
}
