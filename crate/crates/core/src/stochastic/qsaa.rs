//! Net-based check of `max(mu_sub, mu_suec) <= sup_lambda mu_H(rho_lambda)
//! <= mu_sub + mu_suec` on a finite family of ensembles.

use std::collections::BTreeMap;

use serde::Serialize;

use super::distance::path_prokhorov;
use super::ensemble::{check_family, PathEnsemble};
use super::estimators::{
    mu_sub_hat, sorted_grid, suec_from_table, ModulusTable, SubEstimate, SuecEstimate,
};
use crate::error::{param, Result};
use crate::function_space::{aa_net, jung_constant, PLPath};
use crate::mnc::candidate_cover_radius;
use crate::Verdict;

const CHECK_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct QsaaOptions {
    pub lambda_grid: Vec<f64>,
    pub eps_grid: Vec<f64>,
    pub delta_grid: Vec<f64>,
    pub m_grid: Vec<f64>,
    pub eps: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QsaaRow {
    pub lambda: f64,
    /// Path-space radius the net aims for: `lambda * eps / 2`.
    pub target_radius: f64,
    pub net_eps: f64,
    /// Trim: keep paths with norm <= `trim_bound` and modulus at
    /// `trim_delta` below `trim_eps`.
    pub trim_bound: f64,
    pub trim_eps: f64,
    pub trim_delta: f64,
    /// Weight outside the trim, per ensemble.
    pub trimmed_mass: Vec<f64>,
    pub net_members: usize,
    pub net_covering_radius: f64,
    /// Candidate centers: each ensemble pushed onto the net, the rest of its
    /// mass sent to the zero path.
    pub candidates: Vec<PathEnsemble>,
    pub assignment: Vec<usize>,
    pub distances: Vec<f64>,
    pub covering: f64,
    /// `max(max trimmed mass, net radius / lambda)`.
    pub hard_bound: f64,
    pub hard_ok: bool,
    /// Extra equicontinuity mass when `trim_eps` falls outside the eps grid.
    pub suec_extension_slack: f64,
    pub upper_bound: f64,
    pub upper_ok: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct QsaaSlacks {
    pub eps: f64,
    /// Largest per-lambda equicontinuity extension slack.
    pub suec_extension: f64,
    /// The norm grid always holds the largest path norm, so no slack.
    pub sub_grid: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct QsaaReport {
    pub sub: SubEstimate,
    pub suec: SuecEstimate,
    pub a: f64,
    pub b: f64,
    pub rows: Vec<QsaaRow>,
    pub covering_sup: f64,
    pub slacks: QsaaSlacks,
    pub hard_ok: bool,
    pub upper_ok: bool,
    pub lower_ok: bool,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub fn verify_qsaa(xi: &[PathEnsemble], opts: &QsaaOptions) -> Result<QsaaReport> {
    check_family(xi)?;
    if !(opts.eps > 0.0) {
        return Err(param("eps", "must be > 0"));
    }
    let lambda_grid = sorted_grid("lambda_grid", &opts.lambda_grid)?;
    let sub = mu_sub_hat(xi, &opts.m_grid)?;
    let table = ModulusTable::new(xi, sorted_grid("delta_grid", &opts.delta_grid)?)?;
    let suec = suec_from_table(xi, &table, sorted_grid("eps_grid", &opts.eps_grid)?)?;
    let (a, b) = (sub.value, suec.value);
    let dim = xi[0].dim();
    let kappa = jung_constant(dim);
    let zero = PLPath::constant(vec![0.0; dim])?;

    let mut rows = Vec::with_capacity(lambda_grid.len());
    for &lambda in &lambda_grid {
        let target_radius = lambda * opts.eps / 2.0;
        let net_eps = target_radius / 2.0;
        let trim_eps = target_radius / (2.0 * kappa);
        let (ext_entry, d) = table.best_delta(xi, trim_eps);
        let trim_delta = table.delta_grid[d];
        let trim_bound = sub.argmin;

        let keep: Vec<Vec<bool>> = xi
            .iter()
            .zip(&table.moduli)
            .map(|(e, m)| {
                e.paths()
                    .iter()
                    .zip(m)
                    .map(|(p, md)| p.norm() <= trim_bound && md[d] < trim_eps)
                    .collect()
            })
            .collect();
        let trimmed_mass: Vec<f64> = xi
            .iter()
            .zip(&keep)
            .map(|(e, k)| e.weight_where(|i, _| !k[i]))
            .collect();

        let kept: Vec<PLPath> = xi
            .iter()
            .zip(&keep)
            .flat_map(|(e, k)| e.paths().iter().zip(k).filter(|(_, &k)| k).map(|(p, _)| p.clone()))
            .collect();
        let (members, fits, net_covering_radius) = if kept.is_empty() {
            (Vec::new(), Vec::new(), 0.0)
        } else {
            let alpha = xi
                .iter()
                .zip(&keep)
                .zip(&table.moduli)
                .flat_map(|((_, k), m)| k.iter().zip(m).filter(|(&k, _)| k).map(|(_, md)| md[d]))
                .fold(0.0, f64::max);
            let net = aa_net(&kept, trim_delta, alpha, trim_bound, net_eps)?;
            let fits: Vec<usize> = net.per_sample.iter().map(|s| s.member).collect();
            (net.members, fits, net.covering_radius)
        };

        let mut next = fits.iter();
        let candidates: Vec<PathEnsemble> = xi
            .iter()
            .zip(&keep)
            .map(|(e, k)| {
                let mut mass: BTreeMap<usize, f64> = BTreeMap::new();
                let mut dump = 0.0;
                for (w, &kept) in e.weights().iter().zip(k) {
                    if kept {
                        *mass.entry(*next.next().expect("one fit per kept path")).or_insert(0.0) += w;
                    } else {
                        dump += w;
                    }
                }
                let mut weights: Vec<f64> = mass.values().copied().collect();
                let mut paths: Vec<PLPath> = mass.keys().map(|&m| members[m].clone()).collect();
                if dump > 0.0 {
                    weights.push(dump);
                    paths.push(zero.clone());
                }
                PathEnsemble::new(weights, paths)
            })
            .collect::<Result<_>>()?;

        let dist: Vec<Vec<f64>> = xi
            .iter()
            .map(|e| {
                candidates
                    .iter()
                    .map(|c| Ok(path_prokhorov(e, c, lambda)?.alpha))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let (covering, assignment) = candidate_cover_radius(xi.len(), candidates.len(), |i, c| dist[i][c]);
        let distances = assignment.iter().enumerate().map(|(i, &c)| dist[i][c]).collect();

        let hard_bound = trimmed_mass
            .iter()
            .copied()
            .fold(net_covering_radius / lambda, f64::max);
        let suec_extension_slack = (ext_entry - b).max(0.0);
        let upper_bound = a + b + opts.eps + suec_extension_slack;
        rows.push(QsaaRow {
            lambda,
            target_radius,
            net_eps,
            trim_bound,
            trim_eps,
            trim_delta,
            trimmed_mass,
            net_members: members.len(),
            net_covering_radius,
            candidates,
            assignment,
            distances,
            covering,
            hard_bound,
            hard_ok: covering <= hard_bound + CHECK_TOL,
            suec_extension_slack,
            upper_bound,
            upper_ok: covering <= upper_bound + CHECK_TOL,
        });
    }

    let covering_sup = rows.iter().map(|r| r.covering).fold(0.0, f64::max);
    let hard_ok = rows.iter().all(|r| r.hard_ok);
    let upper_ok = rows.iter().all(|r| r.upper_ok);
    let lower_ok = a.max(b) <= covering_sup + opts.eps + CHECK_TOL;
    let mut notes = Vec::new();
    let verdict = if !hard_ok || !upper_ok {
        notes.push("net covering exceeds its certified bound".to_string());
        Verdict::Fail
    } else if !lower_ok {
        notes.push(format!(
            "lower side open: max(a, b) = {} exceeds the covering {} by more than eps; \
             refine the delta grid or add smaller lambda values",
            a.max(b),
            covering_sup
        ));
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    let slacks = QsaaSlacks {
        eps: opts.eps,
        suec_extension: rows.iter().map(|r| r.suec_extension_slack).fold(0.0, f64::max),
        sub_grid: 0.0,
    };
    Ok(QsaaReport {
        sub,
        suec,
        a,
        b,
        rows,
        covering_sup,
        slacks,
        hard_ok,
        upper_ok,
        lower_ok,
        verdict,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stochastic::spike_mixture;

    fn opts() -> QsaaOptions {
        QsaaOptions {
            lambda_grid: vec![0.5, 1.0, 2.0],
            eps_grid: vec![0.25, 0.5],
            delta_grid: vec![0.02, 0.05, 0.1],
            m_grid: vec![1.0],
            eps: 0.02,
        }
    }

    #[test]
    fn single_ensemble_is_compact() {
        let paths = vec![
            PLPath::constant(vec![0.2]).unwrap(),
            PLPath::segment(vec![0.0], vec![0.1]).unwrap(),
        ];
        let xi = vec![PathEnsemble::uniform(paths).unwrap()];
        let r = verify_qsaa(&xi, &opts()).unwrap();
        assert_eq!((r.a, r.b), (0.0, 0.0));
        assert!(r.covering_sup <= 0.02);
        assert_eq!(r.verdict, Verdict::Pass);
    }

    #[test]
    fn spike_mixture_sandwich() {
        let xi = spike_mixture(0.2, 5, 0.01).unwrap();
        let r = verify_qsaa(&xi, &opts()).unwrap();
        assert_eq!(r.a, 0.0);
        assert!((r.b - 0.2).abs() < 1e-12);
        assert!((r.covering_sup - 0.2).abs() <= 0.02);
        assert_eq!(r.verdict, Verdict::Pass);
    }
}
