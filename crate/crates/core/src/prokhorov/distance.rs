//! Exact parametrized Prokhorov distance via bipartite max-flow.
//!
//! `P(A) <= Q(A^(λα)) + α` for every `A` holds iff the bipartite network with
//! an edge `i -> j` whenever `d(i, j) <= λα` carries a flow of at least
//! `1 - α`. The min cut of an infeasible network yields the violating set.
//! Edge membership is always decided on the scaled distance `d / λ <= α`, so
//! breakpoints `d / λ` include their own edge exactly.

use serde::Serialize;

use super::measure::DiscreteMeasure;
use crate::error::{param, Error, Result};
use crate::flow::Dinic;
use crate::metric::IndexSet;

/// Slack on the flow deficiency when deciding feasibility.
pub const FEASIBILITY_TOL: f64 = 1e-12;
/// Largest accepted disagreement between max-flow value and cut value.
pub const FLOW_RESIDUAL_TOL: f64 = 1e-9;

/// One transported mass `from -> to` (point indices of the ground space).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingEntry {
    pub from: usize,
    pub to: usize,
    pub mass: f64,
}

/// Witness for `ρ_λ(P, Q) <= α`: a partial coupling moving mass only across
/// pairs with `d <= λα`, leaving `slack_mass <= α` uncoupled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CouplingCertificate {
    pub lambda: f64,
    pub alpha: f64,
    pub flow: Vec<CouplingEntry>,
    pub slack_mass: f64,
}

/// Witness for `ρ_λ(P, Q) > α`: a set with `P(A) > Q(A^(λα)) + α`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ViolationCertificate {
    pub lambda: f64,
    pub alpha: f64,
    pub set: IndexSet,
    pub p_mass: f64,
    pub q_inflated_mass: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Feasibility {
    Feasible(CouplingCertificate),
    Infeasible(ViolationCertificate),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Feasible(_))
    }
}

/// Exact distance together with the coupling that certifies it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProkhorovDistance {
    pub lambda: f64,
    pub alpha: f64,
    pub certificate: CouplingCertificate,
}

/// Supports of two measures and their scaled cross distances `d / λ`.
pub(crate) struct Bipartite {
    lambda: f64,
    p: Vec<(usize, f64)>,
    q: Vec<(usize, f64)>,
    scaled: Vec<f64>,
}

struct FlowRun {
    value: f64,
    net: Dinic,
    edges: Vec<((usize, usize), usize, usize)>,
}

impl Bipartite {
    /// `cross(i, j)` is the ground distance between support point `i` of P
    /// and support point `j` of Q (both given as point indices).
    pub(crate) fn new(
        p: Vec<(usize, f64)>,
        q: Vec<(usize, f64)>,
        lambda: f64,
        cross: impl Fn(usize, usize) -> f64,
    ) -> Self {
        let mut scaled = Vec::with_capacity(p.len() * q.len());
        for &(i, _) in &p {
            for &(j, _) in &q {
                scaled.push(cross(i, j) / lambda);
            }
        }
        Self {
            lambda,
            p,
            q,
            scaled,
        }
    }

    fn from_measures(p: &DiscreteMeasure, q: &DiscreteMeasure, lambda: f64) -> Self {
        let space = p.space();
        Self::new(p.support(), q.support(), lambda, |i, j| space.d(i, j))
    }

    fn run(&self, alpha: f64) -> FlowRun {
        let (np, nq) = (self.p.len(), self.q.len());
        let source = np + nq;
        let sink = source + 1;
        let mut net = Dinic::new(np + nq + 2);
        for (a, &(_, m)) in self.p.iter().enumerate() {
            net.add_edge(source, a, m);
        }
        for (b, &(_, m)) in self.q.iter().enumerate() {
            net.add_edge(np + b, sink, m);
        }
        let mut edges = Vec::new();
        for a in 0..np {
            for b in 0..nq {
                if self.scaled[a * nq + b] <= alpha {
                    edges.push((net.add_edge(a, np + b, f64::INFINITY), a, b));
                }
            }
        }
        let value = net.max_flow(source, sink);
        FlowRun { value, net, edges }
    }

    fn deficiency(&self, alpha: f64) -> f64 {
        let d = 1.0 - self.run(alpha).value;
        if d < FEASIBILITY_TOL {
            0.0
        } else {
            d
        }
    }

    fn coupling(&self, alpha: f64, run: &FlowRun) -> CouplingCertificate {
        let mut flow: Vec<CouplingEntry> = run
            .edges
            .iter()
            .filter_map(|&(pos, a, b)| {
                let mass = run.net.flow_on(pos);
                (mass > 0.0).then(|| CouplingEntry {
                    from: self.p[a].0,
                    to: self.q[b].0,
                    mass,
                })
            })
            .collect();
        flow.sort_by(|x, y| (x.from, x.to).cmp(&(y.from, y.to)));
        let moved: f64 = flow.iter().map(|e| e.mass).sum();
        CouplingCertificate {
            lambda: self.lambda,
            alpha,
            flow,
            slack_mass: (1.0 - moved).max(0.0),
        }
    }

    pub(crate) fn check(&self, alpha: f64) -> Result<Feasibility> {
        let run = self.run(alpha);
        let np = self.p.len();
        let nq = self.q.len();
        if 1.0 - run.value <= alpha + FEASIBILITY_TOL {
            return Ok(Feasibility::Feasible(self.coupling(alpha, &run)));
        }
        let seen = run.net.reachable(np + nq);
        let mut set = Vec::new();
        let mut p_mass = 0.0;
        let mut unreached_p = 0.0;
        for (a, &(i, m)) in self.p.iter().enumerate() {
            if seen[a] {
                set.push(i);
                p_mass += m;
            } else {
                unreached_p += m;
            }
        }
        // Q-mass of the closed inflation, restricted to Q's support.
        let mut q_inflated_mass = 0.0;
        let mut q_reached = 0.0;
        for (b, &(_, m)) in self.q.iter().enumerate() {
            let hit = self
                .p
                .iter()
                .enumerate()
                .any(|(a, _)| seen[a] && self.scaled[a * nq + b] <= alpha);
            if hit {
                q_inflated_mass += m;
            }
            if seen[np + b] {
                q_reached += m;
            }
        }
        let residual = (unreached_p + q_reached - run.value).abs();
        if residual > FLOW_RESIDUAL_TOL {
            return Err(Error::FlowInconsistency { residual });
        }
        let gap = p_mass - q_inflated_mass - alpha;
        if !(gap > 0.0) {
            return Err(Error::Certificate(format!(
                "min-cut set does not violate the inequality (gap {gap:e})"
            )));
        }
        set.sort_unstable();
        Ok(Feasibility::Infeasible(ViolationCertificate {
            lambda: self.lambda,
            alpha,
            set: IndexSet::from_sorted(set),
            p_mass,
            q_inflated_mass,
            gap,
        }))
    }

    /// Breakpoint sweep: on `[b_k, b_{k+1})` the edge set is fixed, so the
    /// smallest feasible α there is `max(b_k, g_k)` with `g_k` the flow
    /// deficiency. `g_k < b_{k+1}` is monotone in `k`, so the first interval
    /// that admits a feasible α is found by binary search.
    pub(crate) fn distance(&self) -> ProkhorovDistance {
        let mut breaks: Vec<f64> = self.scaled.clone();
        breaks.push(0.0);
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let last = breaks.len() - 1;
        let admits = |k: usize| k == last || self.deficiency(breaks[k]) < breaks[k + 1];
        let (mut lo, mut hi) = (0usize, last);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if admits(mid) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        let run = self.run(breaks[lo]);
        let mut g = 1.0 - run.value;
        if g < FEASIBILITY_TOL {
            g = 0.0;
        }
        let alpha = breaks[lo].max(g);
        ProkhorovDistance {
            lambda: self.lambda,
            alpha,
            certificate: self.coupling(alpha, &run),
        }
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if lambda > 0.0 && lambda.is_finite() {
        Ok(())
    } else {
        Err(param("lambda", "must be a finite number > 0"))
    }
}

/// Decides `ρ_λ(P, Q) <= α` and returns a certificate for the outcome.
pub fn check_alpha(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    lambda: f64,
    alpha: f64,
) -> Result<Feasibility> {
    p.same_space(q)?;
    check_lambda(lambda)?;
    if !(alpha >= 0.0) {
        return Err(param("alpha", "must be >= 0"));
    }
    Bipartite::from_measures(p, q, lambda).check(alpha)
}

/// Exact `ρ_λ(P, Q)` by breakpoint sweep.
pub fn prokhorov_distance(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    lambda: f64,
) -> Result<ProkhorovDistance> {
    p.same_space(q)?;
    check_lambda(lambda)?;
    Ok(Bipartite::from_measures(p, q, lambda).distance())
}

/// Bisection on [`check_alpha`]; a cross-check for the breakpoint sweep.
pub fn prokhorov_distance_bisect(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    lambda: f64,
    tol: f64,
) -> Result<f64> {
    p.same_space(q)?;
    check_lambda(lambda)?;
    let net = Bipartite::from_measures(p, q, lambda);
    if net.check(0.0)?.is_feasible() {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if net.check(mid)?.is_feasible() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Checks a coupling certificate against its measures: marginal bounds,
/// mass balance and the distance constraint on every transported pair.
pub fn verify_coupling(
    p: &DiscreteMeasure,
    q: &DiscreteMeasure,
    cert: &CouplingCertificate,
) -> Result<()> {
    let space = p.space();
    let n = space.len();
    let mut rows = vec![0.0; n];
    let mut cols = vec![0.0; n];
    for e in &cert.flow {
        if e.from >= n || e.to >= n {
            return Err(Error::Certificate("flow entry out of range".into()));
        }
        if space.d(e.from, e.to) / cert.lambda > cert.alpha {
            return Err(Error::Certificate(format!(
                "pair ({}, {}) is farther than λα",
                e.from, e.to
            )));
        }
        rows[e.from] += e.mass;
        cols[e.to] += e.mass;
    }
    for i in 0..n {
        if rows[i] > p.mass()[i] + FLOW_RESIDUAL_TOL || cols[i] > q.mass()[i] + FLOW_RESIDUAL_TOL {
            return Err(Error::Certificate(format!("marginal exceeded at point {i}")));
        }
    }
    let moved: f64 = rows.iter().sum();
    if (moved + cert.slack_mass - 1.0).abs() > FLOW_RESIDUAL_TOL {
        return Err(Error::Certificate("flow plus slack does not total 1".into()));
    }
    if cert.slack_mass > cert.alpha + FLOW_RESIDUAL_TOL {
        return Err(Error::Certificate("slack exceeds α".into()));
    }
    Ok(())
}
