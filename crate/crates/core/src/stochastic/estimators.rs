use serde::Serialize;

use super::ensemble::{check_family, PathEnsemble};
use crate::error::{param, Result};
use crate::function_space::modulus;

#[derive(Debug, Clone, Serialize)]
pub struct SubEstimate {
    /// Sorted grid, including the largest path norm.
    pub grid: Vec<f64>,
    /// `sup_xi P(|xi| > M)` per grid value.
    pub tail: Vec<f64>,
    pub value: f64,
    /// Smallest grid value attaining `value`.
    pub argmin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuecRow {
    pub eps: f64,
    pub value: f64,
    /// Largest `delta` attaining the row minimum.
    pub argmin_delta: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuecEstimate {
    pub eps_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    /// `table[e][d] = sup_xi P(modulus(xi, delta_d) >= eps_e)`.
    pub table: Vec<Vec<f64>>,
    pub rows: Vec<SuecRow>,
    pub value: f64,
}

pub(crate) fn sorted_grid(name: &'static str, grid: &[f64]) -> Result<Vec<f64>> {
    if grid.is_empty() || grid.iter().any(|g| !(*g > 0.0) || !g.is_finite()) {
        return Err(param(name, "must be nonempty with finite entries > 0"));
    }
    let mut g = grid.to_vec();
    g.sort_by(f64::total_cmp);
    g.dedup();
    Ok(g)
}

/// Grid estimate of `inf_M sup_xi P(|xi| > M)`; the largest path norm is
/// added to the grid, which makes the value exact for finite ensembles.
pub fn mu_sub_hat(xi: &[PathEnsemble], m_grid: &[f64]) -> Result<SubEstimate> {
    check_family(xi)?;
    let mut grid = sorted_grid("m_grid", m_grid)?;
    let norms: Vec<Vec<f64>> = xi
        .iter()
        .map(|e| e.paths().iter().map(|p| p.norm()).collect())
        .collect();
    let max_norm = norms.iter().flatten().copied().fold(0.0, f64::max);
    grid.push(max_norm);
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let tail: Vec<f64> = grid
        .iter()
        .map(|&m| {
            xi.iter()
                .zip(&norms)
                .map(|(e, n)| e.weight_where(|i, _| n[i] > m))
                .fold(0.0, f64::max)
        })
        .collect();
    let (mut value, mut argmin) = (f64::INFINITY, grid[0]);
    for (&m, &t) in grid.iter().zip(&tail) {
        if t < value {
            value = t;
            argmin = m;
        }
    }
    Ok(SubEstimate {
        grid,
        tail,
        value,
        argmin,
    })
}

/// Per-path moduli on a delta grid, shared by the estimator and the trims.
pub(crate) struct ModulusTable {
    pub delta_grid: Vec<f64>,
    /// `moduli[ensemble][path][delta]`.
    pub moduli: Vec<Vec<Vec<f64>>>,
}

impl ModulusTable {
    pub fn new(xi: &[PathEnsemble], delta_grid: Vec<f64>) -> Result<Self> {
        let moduli = xi
            .iter()
            .map(|e| {
                e.paths()
                    .iter()
                    .map(|p| delta_grid.iter().map(|&d| modulus(p, d)).collect())
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(Self { delta_grid, moduli })
    }

    /// `sup_xi P(modulus(xi, delta_d) >= eps)`.
    pub fn entry(&self, xi: &[PathEnsemble], eps: f64, d: usize) -> f64 {
        xi.iter()
            .zip(&self.moduli)
            .map(|(e, m)| e.weight_where(|i, _| m[i][d] >= eps))
            .fold(0.0, f64::max)
    }

    /// Minimum of `entry(eps, .)` over the grid, at the largest minimizing delta.
    pub fn best_delta(&self, xi: &[PathEnsemble], eps: f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for d in 0..self.delta_grid.len() {
            let v = self.entry(xi, eps, d);
            if v <= best.0 {
                best = (v, d);
            }
        }
        best
    }
}

/// Grid estimate of `sup_eps inf_delta sup_xi P(modulus(xi, delta) >= eps)`.
pub fn mu_suec_hat(xi: &[PathEnsemble], eps_grid: &[f64], delta_grid: &[f64]) -> Result<SuecEstimate> {
    check_family(xi)?;
    let eps_grid = sorted_grid("eps_grid", eps_grid)?;
    let table = ModulusTable::new(xi, sorted_grid("delta_grid", delta_grid)?)?;
    suec_from_table(xi, &table, eps_grid)
}

pub(crate) fn suec_from_table(
    xi: &[PathEnsemble],
    table: &ModulusTable,
    eps_grid: Vec<f64>,
) -> Result<SuecEstimate> {
    let rows_table: Vec<Vec<f64>> = eps_grid
        .iter()
        .map(|&e| (0..table.delta_grid.len()).map(|d| table.entry(xi, e, d)).collect())
        .collect();
    let rows: Vec<SuecRow> = eps_grid
        .iter()
        .map(|&e| {
            let (value, d) = table.best_delta(xi, e);
            SuecRow {
                eps: e,
                value,
                argmin_delta: table.delta_grid[d],
            }
        })
        .collect();
    let value = rows.iter().map(|r| r.value).fold(0.0, f64::max);
    Ok(SuecEstimate {
        eps_grid,
        delta_grid: table.delta_grid.clone(),
        table: rows_table,
        rows,
        value,
    })
}
