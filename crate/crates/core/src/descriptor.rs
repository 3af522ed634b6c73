//! JSON space descriptors: either a named generator with numeric parameters
//! or a CSV file.
//!
//! ```json
//! {"generator": "cantor", "params": {"depth": 10, "length": 1}}
//! {"file": "space.csv", "format": "points"}
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators;
use crate::io::{read_distance_matrix, read_point_cloud, write_distance_matrix, write_point_cloud};
use crate::metric::{DistanceMatrix, MetricSpace, PointCloud};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FileFormat {
    Matrix,
    Points,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub generator: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileSpec {
    pub file: PathBuf,
    pub format: FileFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SpaceDescriptor {
    Generator(GeneratorSpec),
    File(FileSpec),
}

/// A materialized space from a descriptor.
#[derive(Debug, Clone, PartialEq)]
pub enum Space {
    Matrix(DistanceMatrix),
    Points(PointCloud),
}

impl MetricSpace for Space {
    fn len(&self) -> usize {
        match self {
            Space::Matrix(m) => m.len(),
            Space::Points(p) => p.len(),
        }
    }

    #[inline]
    fn distance(&self, i: usize, j: usize) -> f64 {
        match self {
            Space::Matrix(m) => m.distance(i, j),
            Space::Points(p) => p.distance(i, j),
        }
    }
}

impl Space {
    /// Matrix CSV for matrices, points CSV for point clouds.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        match self {
            Space::Matrix(m) => write_distance_matrix(out, m),
            Space::Points(p) => write_point_cloud(out, p),
        }
    }

    pub fn format(&self) -> FileFormat {
        match self {
            Space::Matrix(_) => FileFormat::Matrix,
            Space::Points(_) => FileFormat::Points,
        }
    }
}

/// Names accepted in the `generator` field.
pub const GENERATORS: &[&str] = &[
    "point",
    "two_point",
    "three_point_r",
    "k32",
    "linear_tree",
    "corona",
    "cycle",
    "grid",
    "cantor",
    "koch",
    "sierpinski",
    "interval",
    "random_tree",
];

struct Params<'a> {
    name: &'a str,
    values: &'a BTreeMap<String, f64>,
}

impl Params<'_> {
    fn only(&self, allowed: &[&str]) -> Result<()> {
        match self.values.keys().find(|k| !allowed.contains(&k.as_str())) {
            Some(k) => Err(Error::param(format!(
                "generator {:?} does not take parameter {k:?} (accepted: {})",
                self.name,
                allowed.join(", ")
            ))),
            None => Ok(()),
        }
    }

    fn real(&self, key: &str, default: Option<f64>) -> Result<f64> {
        match (self.values.get(key), default) {
            (Some(&v), _) => Ok(v),
            (None, Some(d)) => Ok(d),
            (None, None) => Err(Error::param(format!(
                "generator {:?} requires parameter {key:?}",
                self.name
            ))),
        }
    }

    fn count(&self, key: &str, default: Option<usize>) -> Result<usize> {
        let v = self.real(key, default.map(|d| d as f64))?;
        if v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64 {
            Ok(v as usize)
        } else {
            Err(Error::param(format!(
                "parameter {key:?} of {:?} must be a non-negative integer, got {v}",
                self.name
            )))
        }
    }
}

impl SpaceDescriptor {
    pub fn generator(name: &str, params: &[(&str, f64)]) -> Self {
        SpaceDescriptor::Generator(GeneratorSpec {
            generator: name.to_string(),
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            Error::Parse(format!(
                "space descriptor must be {{\"generator\", \"params\"}} or {{\"file\", \"format\"}}: {e}"
            ))
        })
    }

    /// Builds the space. Relative file paths are resolved against `base`.
    pub fn build(&self, base: Option<&Path>) -> Result<Space> {
        match self {
            SpaceDescriptor::File(FileSpec { file, format }) => {
                let path = match base {
                    Some(b) if file.is_relative() => b.join(file),
                    _ => file.clone(),
                };
                let reader = BufReader::new(File::open(&path).map_err(|e| {
                    Error::Io(std::io::Error::new(
                        e.kind(),
                        format!("{}: {e}", path.display()),
                    ))
                })?);
                Ok(match format {
                    FileFormat::Matrix => Space::Matrix(read_distance_matrix(reader)?),
                    FileFormat::Points => Space::Points(read_point_cloud(reader)?),
                })
            }
            SpaceDescriptor::Generator(g) => build_generator(&g.generator, &g.params),
        }
    }
}

fn build_generator(name: &str, values: &BTreeMap<String, f64>) -> Result<Space> {
    let p = Params { name, values };
    let matrix = |m: Result<DistanceMatrix>| m.map(Space::Matrix);
    let points = |c: Result<PointCloud>| c.map(Space::Points);
    match name {
        "point" => {
            p.only(&[])?;
            Ok(Space::Matrix(DistanceMatrix::single_point()))
        }
        "two_point" => {
            p.only(&["distance"])?;
            matrix(generators::two_point(p.real("distance", Some(1.0))?))
        }
        "three_point_r" => {
            p.only(&[])?;
            Ok(Space::Matrix(generators::three_point_r()))
        }
        "k32" => {
            p.only(&[])?;
            Ok(Space::Matrix(generators::k32()))
        }
        "linear_tree" => {
            p.only(&["n"])?;
            matrix(generators::linear_tree_metric(p.count("n", None)?))
        }
        "corona" => {
            p.only(&["n"])?;
            matrix(generators::corona_metric(p.count("n", None)?))
        }
        "cycle" => {
            p.only(&["n"])?;
            matrix(generators::cycle_metric(p.count("n", None)?))
        }
        "random_tree" => {
            p.only(&["n", "seed"])?;
            let n = p.count("n", None)?;
            let edges = generators::random_tree(n, p.count("seed", Some(0))? as u64)?;
            matrix(generators::tree_metric(n, &edges))
        }
        "grid" => {
            p.only(&["rows", "cols", "spacing"])?;
            points(generators::grid(
                p.count("rows", None)?,
                p.count("cols", None)?,
                p.real("spacing", Some(1.0))?,
            ))
        }
        "cantor" => {
            p.only(&["depth", "length"])?;
            points(generators::cantor(
                p.count("depth", None)?,
                p.real("length", Some(1.0))?,
            ))
        }
        "koch" => {
            p.only(&["depth", "width"])?;
            points(generators::koch(
                p.count("depth", None)?,
                p.real("width", Some(1.0))?,
            ))
        }
        "sierpinski" => {
            p.only(&["depth", "width"])?;
            points(generators::sierpinski(
                p.count("depth", None)?,
                p.real("width", Some(1.0))?,
            ))
        }
        "interval" => {
            // Equal masses cancel in E_0, so the midpoint sample carries
            // the uniform measure.
            p.only(&["length", "n"])?;
            let sample =
                crate::continuum::riemann_sum_space(p.real("length", None)?, p.count("n", None)?)?;
            Ok(Space::Points(sample.space().clone()))
        }
        other => Err(Error::param(format!(
            "unknown generator {other:?} (known: {})",
            GENERATORS.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(json: &str) -> Result<Space> {
        SpaceDescriptor::from_json(json)?.build(None)
    }

    #[test]
    fn generators_build() {
        assert_eq!(
            build(r#"{"generator":"cantor","params":{"depth":10,"length":1}}"#)
                .unwrap()
                .len(),
            2048
        );
        assert_eq!(
            build(r#"{"generator":"k32"}"#).unwrap(),
            Space::Matrix(generators::k32())
        );
        assert_eq!(
            build(r#"{"generator":"grid","params":{"rows":1,"cols":2,"spacing":1}}"#)
                .unwrap()
                .len(),
            2
        );
        for name in GENERATORS {
            let params = match *name {
                "linear_tree" | "corona" | "cycle" | "random_tree" => r#"{"n":5}"#,
                "grid" => r#"{"rows":2,"cols":3}"#,
                "cantor" | "koch" | "sierpinski" => r#"{"depth":2}"#,
                "interval" => r#"{"length":2,"n":10}"#,
                _ => "{}",
            };
            let json = format!(r#"{{"generator":"{name}","params":{params}}}"#);
            assert!(build(&json).is_ok(), "{name}");
        }
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(build(r#"{"generator":"nope"}"#).is_err());
        assert!(build(r#"{"generator":"k32","params":{"n":3}}"#).is_err());
        assert!(build(r#"{"generator":"cycle","params":{"n":3.5}}"#).is_err());
        assert!(build(r#"{"generator":"cycle"}"#).is_err());
        assert!(build(r#"{"generator":"k32","file":"x.csv","format":"matrix"}"#).is_err());
        assert!(build(r#"{"file":"x.csv"}"#).is_err());
        assert!(build(r#"{"file":"/definitely/missing.csv","format":"matrix"}"#).is_err());
        assert!(build("not json").is_err());
    }

    #[test]
    fn files_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let space = build(r#"{"generator":"koch","params":{"depth":2,"width":3}}"#).unwrap();
        let mut f = File::create(dir.path().join("k.csv")).unwrap();
        space.write_csv(&mut f).unwrap();
        drop(f);
        let back = build(r#"{"file":"k.csv","format":"points"}"#);
        assert!(
            back.is_err(),
            "relative path must not resolve against the cwd here"
        );
        let back = SpaceDescriptor::from_json(r#"{"file":"k.csv","format":"points"}"#)
            .unwrap()
            .build(Some(dir.path()))
            .unwrap();
        assert_eq!(back, space);
    }
}
