//! Input files: reading, hashing and schema parsing.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use qcompact_core::stochastic::PathEnsemble;
use qcompact_core::{DiscreteMeasure, FiniteMetricSpace, PLPath};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    coords: Option<Vec<Vec<f64>>>,
    dist: Option<Vec<Vec<f64>>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MeasureFile {
    space: Value,
    mass: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyFile {
    space: Value,
    masses: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointsFile {
    points: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PathsFile {
    paths: Vec<PLPath>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EnsemblesFile {
    ensembles: Vec<PathEnsemble>,
}

/// Loads inputs and records the content hash of every file touched.
#[derive(Default)]
pub struct Inputs {
    records: Vec<InputRecord>,
    spaces: BTreeMap<PathBuf, Arc<FiniteMetricSpace>>,
}

fn parse<T: DeserializeOwned>(path: &Path, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn build_space(path: &Path, file: SpaceFile) -> Result<FiniteMetricSpace, CliError> {
    let space = match (file.coords, file.dist) {
        (Some(c), None) => FiniteMetricSpace::from_coords(c),
        (None, Some(d)) => FiniteMetricSpace::from_matrix(d),
        _ => {
            return Err(CliError::Input(format!(
                "{}: a space needs exactly one of `coords` or `dist`",
                path.display()
            )))
        }
    };
    space.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

impl Inputs {
    pub fn records(&self) -> &[InputRecord] {
        &self.records
    }

    fn read(&mut self, path: &Path) -> Result<String, CliError> {
        let bytes = std::fs::read(path)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let shown = path.display().to_string();
        if !self.records.iter().any(|r| r.path == shown) {
            self.records.push(InputRecord {
                path: shown,
                sha256: hex::encode(Sha256::digest(&bytes)),
            });
        }
        String::from_utf8(bytes).map_err(|_| CliError::Input(format!("{}: not UTF-8", path.display())))
    }

    pub fn space(&mut self, path: &Path) -> Result<Arc<FiniteMetricSpace>, CliError> {
        if let Some(s) = self.spaces.get(path) {
            return Ok(s.clone());
        }
        let text = self.read(path)?;
        let space = Arc::new(build_space(path, parse(path, &text)?)?);
        self.spaces.insert(path.to_path_buf(), space.clone());
        Ok(space)
    }

    /// A `space` field: inline object or a file path relative to `owner`.
    fn space_ref(&mut self, owner: &Path, value: Value) -> Result<Arc<FiniteMetricSpace>, CliError> {
        match value {
            Value::String(rel) => {
                let base = owner.parent().unwrap_or(Path::new(""));
                self.space(&base.join(rel))
            }
            obj @ Value::Object(_) => {
                let file: SpaceFile = serde_json::from_value(obj)
                    .map_err(|e| CliError::Input(format!("{}: space: {e}", owner.display())))?;
                Ok(Arc::new(build_space(owner, file)?))
            }
            _ => Err(CliError::Input(format!(
                "{}: `space` must be an object or a file path",
                owner.display()
            ))),
        }
    }

    pub fn measure(&mut self, path: &Path) -> Result<DiscreteMeasure, CliError> {
        let text = self.read(path)?;
        let file: MeasureFile = parse(path, &text)?;
        let space = self.space_ref(path, file.space)?;
        DiscreteMeasure::new(space, file.mass).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
    }

    pub fn family(&mut self, path: &Path) -> Result<Vec<DiscreteMeasure>, CliError> {
        let text = self.read(path)?;
        let file: FamilyFile = parse(path, &text)?;
        let space = self.space_ref(path, file.space)?;
        file.masses
            .into_iter()
            .enumerate()
            .map(|(i, m)| {
                DiscreteMeasure::new(space.clone(), m)
                    .map_err(|e| CliError::Input(format!("{}: measure {i}: {e}", path.display())))
            })
            .collect()
    }

    pub fn points(&mut self, path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
        let text = self.read(path)?;
        match shape(path, &text)? {
            Value::Array(_) => parse(path, &text),
            _ => Ok(parse::<PointsFile>(path, &text)?.points),
        }
    }

    /// A single path, an array of paths, `{"paths": [...]}`, or an ensemble.
    pub fn paths(&mut self, path: &Path) -> Result<Vec<PLPath>, CliError> {
        let text = self.read(path)?;
        match shape(path, &text)? {
            Value::Array(_) => parse(path, &text),
            Value::Object(o) if o.contains_key("knots") => Ok(vec![parse(path, &text)?]),
            Value::Object(o) if o.contains_key("weights") => {
                Ok(parse::<PathEnsemble>(path, &text)?.paths().to_vec())
            }
            Value::Object(o) if o.contains_key("paths") => Ok(parse::<PathsFile>(path, &text)?.paths),
            _ => Err(CliError::Input(format!(
                "{}: expected a path, an array of paths or an ensemble",
                path.display()
            ))),
        }
    }

    /// An ensemble, an array of ensembles, or `{"ensembles": [...]}`.
    pub fn ensembles(&mut self, path: &Path) -> Result<Vec<PathEnsemble>, CliError> {
        let text = self.read(path)?;
        match shape(path, &text)? {
            Value::Array(_) => parse(path, &text),
            Value::Object(o) if o.contains_key("ensembles") => {
                Ok(parse::<EnsemblesFile>(path, &text)?.ensembles)
            }
            _ => Ok(vec![parse(path, &text)?]),
        }
    }
}

fn shape(path: &Path, text: &str) -> Result<Value, CliError> {
    parse::<Value>(path, text)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        std::fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn measures_share_a_space_file() {
        let dir = tempfile::tempdir().unwrap();
        write(dir.path(), "s.json", r#"{"coords": [[0], [1]]}"#);
        let p = write(dir.path(), "p.json", r#"{"space": "s.json", "mass": [1, 0]}"#);
        let q = write(dir.path(), "q.json", r#"{"space": "s.json", "mass": [0, 1]}"#);
        let mut inputs = Inputs::default();
        let a = inputs.measure(&p).unwrap();
        let b = inputs.measure(&q).unwrap();
        assert!(Arc::ptr_eq(a.space(), b.space()));
        assert_eq!(inputs.records().len(), 3);
        assert_eq!(inputs.records()[1].sha256.len(), 64);
    }

    #[test]
    fn diagnostics_name_line_and_field() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.json", "{\n  \"space\": {\"coords\": [[0]]},\n  \"mas\": [1]\n}");
        let err = Inputs::default().measure(&p).unwrap_err().to_string();
        assert!(err.contains("mas") && err.contains("line 3"), "{err}");
        let bad = write(dir.path(), "x.json", r#"{"space": {"coords": [[0]], "dist": [[0]]}, "mass": [1]}"#);
        assert!(Inputs::default().measure(&bad).is_err());
    }

    #[test]
    fn path_shapes() {
        let dir = tempfile::tempdir().unwrap();
        let one = r#"{"knots": [0, 1], "values": [[0], [1]]}"#;
        let a = write(dir.path(), "a.json", one);
        let b = write(dir.path(), "b.json", &format!("[{one}, {one}]"));
        let c = write(dir.path(), "c.json", &format!(r#"{{"weights": [1], "paths": [{one}]}}"#));
        let mut inputs = Inputs::default();
        assert_eq!(inputs.paths(&a).unwrap().len(), 1);
        assert_eq!(inputs.paths(&b).unwrap().len(), 2);
        assert_eq!(inputs.paths(&c).unwrap().len(), 1);
        assert_eq!(inputs.ensembles(&c).unwrap().len(), 1);
    }
}
