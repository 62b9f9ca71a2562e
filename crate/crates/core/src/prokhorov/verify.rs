//! Constructive check of `sup_λ μ_H,ρ_λ(Γ) = μ_ut(Γ)` on a finite family.

use serde::Serialize;

use super::measure::DiscreteMeasure;
use super::net::{certify_net_cover, diameter_partition, prokhorov_net, NetCover, ProkhorovNet};
use super::tightness::{check_family, mu_ut, BallCover, TightnessEstimate};
use crate::error::{param, Result};
use crate::metric::IndexSet;
use crate::Verdict;

const CHECK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct QProkhOptions {
    pub lambda_grid: Vec<f64>,
    pub eps: f64,
    /// Extra radii for the tightness estimate; the per-λ cell radii are always added.
    pub eps_grid: Vec<f64>,
    pub k_max: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct QProkhRow {
    pub lambda: f64,
    /// Ball radius `λ·eps/2`, so cells have diameter below `λ·eps`.
    pub cell_radius: f64,
    pub centers: Vec<usize>,
    pub cells: Vec<IndexSet>,
    pub net: ProkhorovNet,
    pub cover: NetCover,
}

#[derive(Debug, Clone, Serialize)]
pub struct QProkhReport {
    pub eps: f64,
    pub k_max: usize,
    pub rows: Vec<QProkhRow>,
    pub tightness: TightnessEstimate,
    /// Largest net covering radius over the λ grid.
    pub covering_sup: f64,
    /// Every per-λ net meets `ρ_λ(P, Q(P)) <= t + eps`.
    pub net_claim_ok: bool,
    /// Covering radius <= tightness upper estimate + eps at every λ.
    pub upper_ok: bool,
    /// Tightness lower estimate <= sup covering radius + eps; `None` when no
    /// exact lower estimate is available.
    pub lower_ok: Option<bool>,
    pub verdict: Verdict,
    pub notes: Vec<String>,
}

pub fn verify_qprokh(family: &[DiscreteMeasure], opts: &QProkhOptions) -> Result<QProkhReport> {
    check_family(family)?;
    if opts.lambda_grid.is_empty() || opts.lambda_grid.iter().any(|l| !(*l > 0.0)) {
        return Err(param("lambda_grid", "must be nonempty with entries > 0"));
    }
    if !(opts.eps > 0.0) {
        return Err(param("eps", "must be > 0"));
    }
    let space = family[0].space().clone();
    let all: Vec<usize> = (0..space.len()).collect();

    let mut rows = Vec::with_capacity(opts.lambda_grid.len());
    for &lambda in &opts.lambda_grid {
        let cell_radius = lambda * opts.eps / 2.0;
        let (_, centers) = BallCover::new(&space, cell_radius).greedy(family, opts.k_max);
        // Disjoint cells: each point goes to the first center whose open ball
        // holds it; cells are re-split if rounding ever widens one.
        let mut groups: Vec<Vec<usize>> = vec![Vec::new(); centers.len()];
        for &i in &all {
            if let Some(g) = centers.iter().position(|&c| space.d(c, i) < cell_radius) {
                groups[g].push(i);
            }
        }
        let cells: Vec<IndexSet> = groups
            .iter()
            .filter(|g| !g.is_empty())
            .flat_map(|g| diameter_partition(&space, g, lambda * opts.eps))
            .collect();
        // The cells cover exactly the union of the open balls.
        let defect = BallCover::new(&space, cell_radius).missed(family, &centers);
        let t_bound = (defect - opts.eps / 2.0).max(0.0);
        let net = prokhorov_net(family, lambda, opts.eps, &cells, t_bound)?;
        let cover = certify_net_cover(family, &net)?;
        rows.push(QProkhRow {
            lambda,
            cell_radius,
            centers,
            cells,
            net,
            cover,
        });
    }

    let mut grid: Vec<f64> = opts.eps_grid.clone();
    grid.extend(rows.iter().map(|r| r.cell_radius));
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let tightness = mu_ut(family, &grid, opts.k_max)?;

    let covering_sup = rows.iter().map(|r| r.cover.radius).fold(0.0, f64::max);
    let net_claim_ok = rows.iter().all(|r| r.cover.holds);
    let upper_ok = rows
        .iter()
        .all(|r| r.cover.radius <= tightness.upper + opts.eps + CHECK_TOL);
    let lower_ok = tightness
        .lower
        .map(|lower| lower <= covering_sup + opts.eps + CHECK_TOL);

    let mut notes = Vec::new();
    let verdict = if !net_claim_ok || !upper_ok {
        notes.push("net covering claim violated".to_string());
        Verdict::Fail
    } else {
        match lower_ok {
            Some(true) => Verdict::Pass,
            Some(false) => {
                let reps = rows.iter().map(|r| r.net.representatives().len()).max().unwrap_or(0);
                if opts.k_max < reps {
                    notes.push(format!(
                        "lower side open: k_max = {} is below the {reps} net representatives; \
                         k_max must be >= {reps} for the sandwich to close",
                        opts.k_max
                    ));
                } else {
                    notes.push("lower side open: refine the λ grid toward 0".to_string());
                }
                Verdict::Inconclusive
            }
            None => {
                notes.push(format!(
                    "space has more than {} points; no exact lower tightness estimate",
                    super::tightness::EXACT_LIMIT
                ));
                Verdict::Inconclusive
            }
        }
    };

    Ok(QProkhReport {
        eps: opts.eps,
        k_max: opts.k_max,
        rows,
        tightness,
        covering_sup,
        net_claim_ok,
        upper_ok,
        lower_ok,
        verdict,
        notes,
    })
}
