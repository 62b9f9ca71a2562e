use serde::Serialize;

use super::aa_net::{aa_net, AANet, NET_TOL};
use super::path::{mu_uec_family, PLPath};
use crate::error::{param, Result};
use crate::Verdict;

#[derive(Debug, Clone, Serialize)]
pub struct QaaLowerCheck {
    pub delta_prime: f64,
    pub family_modulus: f64,
    pub member_modulus: f64,
    /// `family_modulus <= 2 * covering_radius + member_modulus`.
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QaaRow {
    pub delta: f64,
    /// Family modulus at `delta`.
    pub alpha: f64,
    pub covering_radius: f64,
    pub bound: f64,
    pub upper_ok: bool,
    pub lower: Vec<QaaLowerCheck>,
    pub net: AANet,
}

#[derive(Debug, Clone, Serialize)]
pub struct QaaReport {
    pub dim: usize,
    pub m_bound: f64,
    pub eps: f64,
    pub kappa: f64,
    pub rows: Vec<QaaRow>,
    pub verdict: Verdict,
}

/// Builds the interpolation net at every `delta` and checks both directions
/// of the covering-radius sandwich on the constructed net.
pub fn verify_qaa(family: &[PLPath], delta_grid: &[f64], m_bound: f64, eps: f64) -> Result<QaaReport> {
    if delta_grid.is_empty() || delta_grid.iter().any(|d| !(*d > 0.0)) {
        return Err(param("delta_grid", "must be nonempty with entries > 0"));
    }
    let family_moduli: Vec<f64> = delta_grid
        .iter()
        .map(|&d| mu_uec_family(family, d))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(delta_grid.len());
    for (&delta, &alpha) in delta_grid.iter().zip(&family_moduli) {
        let net = aa_net(family, delta, alpha, m_bound, eps)?;
        let rho = net.covering_radius;
        let lower = delta_grid
            .iter()
            .zip(&family_moduli)
            .map(|(&dp, &fm)| {
                let mm = mu_uec_family(&net.members, dp)?;
                Ok(QaaLowerCheck {
                    delta_prime: dp,
                    family_modulus: fm,
                    member_modulus: mm,
                    holds: fm <= 2.0 * rho + mm + NET_TOL,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(QaaRow {
            delta,
            alpha,
            covering_radius: rho,
            bound: net.bound,
            upper_ok: rho <= net.bound + NET_TOL,
            lower,
            net,
        });
    }
    let ok = rows.iter().all(|r| r.upper_ok && r.lower.iter().all(|l| l.holds));
    Ok(QaaReport {
        dim: family[0].dim(),
        m_bound,
        eps,
        kappa: rows[0].net.kappa,
        rows,
        verdict: if ok { Verdict::Pass } else { Verdict::Fail },
    })
}
