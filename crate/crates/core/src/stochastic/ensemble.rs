use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function_space::{check_dims, PLPath};

pub const WEIGHT_TOL: f64 = 1e-12;

/// Weighted finite family of paths: an empirical path distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct PathEnsemble {
    weights: Vec<f64>,
    paths: Vec<PLPath>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEnsemble {
    weights: Vec<f64>,
    paths: Vec<PLPath>,
}

impl TryFrom<RawEnsemble> for PathEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        PathEnsemble::new(raw.weights, raw.paths)
    }
}

impl PathEnsemble {
    pub fn new(weights: Vec<f64>, paths: Vec<PLPath>) -> Result<Self> {
        if paths.is_empty() {
            return Err(Error::Empty("ensemble"));
        }
        if weights.len() != paths.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} weights for {} paths",
                weights.len(),
                paths.len()
            )));
        }
        if let Some(i) = weights.iter().position(|w| !(w.is_finite() && *w >= 0.0)) {
            return Err(Error::InvalidMeasure(format!("weight {i} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}, expected 1")));
        }
        for p in &paths[1..] {
            check_dims(&paths[0], p)?;
        }
        Ok(Self { weights, paths })
    }

    pub fn uniform(paths: Vec<PLPath>) -> Result<Self> {
        let w = 1.0 / paths.len().max(1) as f64;
        Self::new(vec![w; paths.len()], paths)
    }

    pub fn dirac(path: PLPath) -> Self {
        Self {
            weights: vec![1.0],
            paths: vec![path],
        }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn paths(&self) -> &[PLPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.paths[0].dim()
    }

    /// Total weight of the paths satisfying `pred`, capped at 1.
    pub fn weight_where(&self, mut pred: impl FnMut(usize, &PLPath) -> bool) -> f64 {
        self.paths
            .iter()
            .enumerate()
            .zip(&self.weights)
            .filter(|((i, p), _)| pred(*i, p))
            .fold(0.0, |acc, (_, w)| acc + w)
            .min(1.0)
    }

    pub(crate) fn support(&self) -> Vec<(usize, f64)> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, &w)| w > 0.0)
            .map(|(i, &w)| (i, w))
            .collect()
    }
}

pub(crate) fn check_family(xi: &[PathEnsemble]) -> Result<()> {
    let first = xi.first().ok_or(Error::Empty("ensemble family"))?;
    for e in &xi[1..] {
        check_dims(&first.paths()[0], &e.paths()[0])?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(v: f64) -> PLPath {
        PLPath::constant(vec![v]).unwrap()
    }

    #[test]
    fn validation() {
        assert!(PathEnsemble::new(vec![0.5, 0.5], vec![c(0.0), c(1.0)]).is_ok());
        assert!(PathEnsemble::new(vec![0.5, 0.4], vec![c(0.0), c(1.0)]).is_err());
        assert!(PathEnsemble::new(vec![1.5, -0.5], vec![c(0.0), c(1.0)]).is_err());
        assert!(PathEnsemble::new(vec![1.0], vec![c(0.0), c(1.0)]).is_err());
        assert!(PathEnsemble::new(vec![], vec![]).is_err());
        let two = PLPath::constant(vec![0.0, 0.0]).unwrap();
        assert!(PathEnsemble::new(vec![0.5, 0.5], vec![c(0.0), two]).is_err());
        let json = r#"{"weights":[1],"paths":[{"knots":[0,1],"values":[[0],[1]]}]}"#;
        let e: PathEnsemble = serde_json::from_str(json).unwrap();
        assert_eq!(e.len(), 1);
        let bad = r#"{"weights":[0.5],"paths":[{"knots":[0,1],"values":[[0],[1]]}]}"#;
        assert!(serde_json::from_str::<PathEnsemble>(bad).is_err());
    }

    #[test]
    fn weight_sums() {
        let e = PathEnsemble::new(vec![0.9, 0.1], vec![c(0.5), c(5.0)]).unwrap();
        assert_eq!(e.weight_where(|_, p| p.norm() > 1.0), 0.1);
        assert_eq!(e.support(), vec![(0, 0.9), (1, 0.1)]);
    }
}
