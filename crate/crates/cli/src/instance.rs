//! The instance file: a metric space plus an ordered list of named measures.

use std::path::Path;
use std::sync::Arc;

use ndarray::Array2;
use otlab_core::{euclidean_space, DiscreteMeasure, FiniteMetricSpace};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const INSTANCE_FORMAT: &str = "otlab-instance";
pub const INSTANCE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub format: String,
    pub version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dist: Option<Vec<Vec<f64>>>,
    pub measure: Vec<MeasureEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasureEntry {
    pub name: String,
    pub weights: Vec<f64>,
}

/// A validated instance: the space and its measures in file order.
#[derive(Debug, Clone)]
pub struct Instance {
    pub space: Arc<FiniteMetricSpace>,
    pub measures: Vec<(String, DiscreteMeasure)>,
}

impl Instance {
    pub fn measure(&self, name: &str) -> Result<&DiscreteMeasure, CliError> {
        self.measures
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| CliError::Input(format!("no measure named {name:?} in the instance")))
    }

    /// The named measures, or the first `count` when no names are given.
    pub fn select(&self, names: &[String], count: usize) -> Result<Vec<(String, DiscreteMeasure)>, CliError> {
        if names.is_empty() {
            if self.measures.len() < count {
                return Err(CliError::Input(format!(
                    "instance has {} measures, {count} needed",
                    self.measures.len()
                )));
            }
            return Ok(self.measures[..count].to_vec());
        }
        if names.len() != count {
            return Err(CliError::Input(format!("expected {count} measure names, got {}", names.len())));
        }
        names.iter().map(|n| Ok((n.clone(), self.measure(n)?.clone()))).collect()
    }
}

impl InstanceFile {
    pub fn from_space(space: &FiniteMetricSpace, kind: &str, seed: Option<u64>) -> Self {
        let rows = |m: &Array2<f64>| m.rows().into_iter().map(|r| r.to_vec()).collect::<Vec<_>>();
        let (coords, dist) = match space.coords() {
            Some(c) => (Some(rows(c)), None),
            None => (None, Some(rows(space.dist()))),
        };
        Self {
            format: INSTANCE_FORMAT.into(),
            version: INSTANCE_VERSION,
            kind: Some(kind.into()),
            seed,
            labels: space.labels().map(<[String]>::to_vec),
            coords,
            dist,
            measure: Vec::new(),
        }
    }

    pub fn push_measure(&mut self, name: &str, m: &DiscreteMeasure) {
        self.measure.push(MeasureEntry { name: name.into(), weights: m.weights().to_vec() });
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let file: Self = toml::from_str(text).map_err(|e| CliError::Input(format!("instance file: {e}")))?;
        if file.format != INSTANCE_FORMAT {
            return Err(CliError::Input(format!("format tag {:?}, expected {INSTANCE_FORMAT:?}", file.format)));
        }
        if file.version != INSTANCE_VERSION {
            return Err(CliError::Input(format!("unsupported instance version {}", file.version)));
        }
        Ok(file)
    }

    pub fn to_toml(&self) -> Result<String, CliError> {
        toml::to_string(self).map_err(|e| CliError::Input(format!("cannot encode instance: {e}")))
    }

    pub fn build(&self) -> Result<Instance, CliError> {
        let space = match (&self.coords, &self.dist) {
            (Some(c), None) => euclidean_space(matrix(c, "coords")?)?,
            (None, Some(d)) => FiniteMetricSpace::from_distances(matrix(d, "dist")?)?,
            _ => return Err(CliError::Input("exactly one of `coords` and `dist` must be present".into())),
        };
        let space = match &self.labels {
            Some(l) => space.with_labels(l.clone())?,
            None => space,
        };
        if self.measure.is_empty() {
            return Err(CliError::Input("instance has no measures".into()));
        }
        let space = Arc::new(space);
        let mut measures: Vec<(String, DiscreteMeasure)> = Vec::with_capacity(self.measure.len());
        for entry in &self.measure {
            if measures.iter().any(|(n, _)| *n == entry.name) {
                return Err(CliError::Input(format!("measure {:?} appears twice", entry.name)));
            }
            let m = DiscreteMeasure::new(space.clone(), entry.weights.clone())
                .map_err(|e| CliError::Input(format!("measure {:?}: {e}", entry.name)))?;
            measures.push((entry.name.clone(), m));
        }
        Ok(Instance { space, measures })
    }
}

fn matrix(rows: &[Vec<f64>], what: &str) -> Result<Array2<f64>, CliError> {
    let n = rows.len();
    let k = rows.first().map_or(0, Vec::len);
    if n == 0 || k == 0 || rows.iter().any(|r| r.len() != k) {
        return Err(CliError::Input(format!("`{what}` must be a non-empty rectangular matrix")));
    }
    Array2::from_shape_vec((n, k), rows.concat()).map_err(|e| CliError::Input(format!("`{what}`: {e}")))
}

/// Reads an instance and returns it with the raw bytes, which the reports
/// digest.
pub fn load(path: &Path) -> Result<(Instance, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let text = std::str::from_utf8(&bytes).map_err(|_| CliError::Input(format!("{} is not UTF-8", path.display())))?;
    let instance = InstanceFile::parse(text)?.build()?;
    Ok((instance, bytes))
}
