use std::sync::Arc;

use rayon::prelude::*;

use super::ensemble::PathEnsemble;
use crate::error::{param, Result};
use crate::function_space::{check_dims, sup_distance};
use crate::metric::FiniteMetricSpace;
use crate::prokhorov::{Bipartite, DiscreteMeasure, ProkhorovDistance};

/// `rho_lambda` between two path ensembles under the uniform norm.
///
/// Only cross distances are needed, so the union space is never built. In
/// the coupling certificate `from` indexes `xi` and `to` indexes `eta`.
pub fn path_prokhorov(xi: &PathEnsemble, eta: &PathEnsemble, lambda: f64) -> Result<ProkhorovDistance> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(param("lambda", "must be finite and > 0"));
    }
    check_dims(&xi.paths()[0], &eta.paths()[0])?;
    let cross = cross_distances(xi, eta);
    let m = eta.len();
    Ok(Bipartite::new(xi.support(), eta.support(), lambda, |i, j| cross[i * m + j]).distance())
}

pub(crate) fn cross_distances(xi: &PathEnsemble, eta: &PathEnsemble) -> Vec<f64> {
    xi.paths()
        .par_iter()
        .flat_map_iter(|x| eta.paths().iter().map(move |y| sup_distance(x, y)))
        .collect()
}

/// The union of both path lists as a finite metric space, with both
/// ensembles pushed onto it (`xi` first).
pub fn path_space(
    xi: &PathEnsemble,
    eta: &PathEnsemble,
) -> Result<(Arc<FiniteMetricSpace>, DiscreteMeasure, DiscreteMeasure)> {
    check_dims(&xi.paths()[0], &eta.paths()[0])?;
    let paths: Vec<_> = xi.paths().iter().chain(eta.paths()).collect();
    let n = paths.len();
    let space = Arc::new(FiniteMetricSpace::from_fn(n, false, |i, j| {
        sup_distance(paths[i], paths[j])
    })?);
    let mut p = xi.weights().to_vec();
    p.resize(n, 0.0);
    let mut q = vec![0.0; xi.len()];
    q.extend_from_slice(eta.weights());
    let p = DiscreteMeasure::new(space.clone(), p)?;
    let q = DiscreteMeasure::new(space.clone(), q)?;
    Ok((space, p, q))
}
