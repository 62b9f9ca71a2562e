//! Dinic max-flow on real capacities, with residual reachability for cuts.

use std::collections::VecDeque;

/// Residual capacities at or below this are treated as saturated.
const CAP_EPS: f64 = 1e-15;

#[derive(Clone, Copy, Debug)]
struct Edge {
    to: usize,
    cap: f64,
    rev: usize,
}

pub(crate) struct Dinic {
    graph: Vec<Vec<Edge>>,
    level: Vec<i32>,
    iter: Vec<usize>,
}

impl Dinic {
    pub fn new(size: usize) -> Self {
        Self {
            graph: vec![Vec::new(); size],
            level: vec![-1; size],
            iter: vec![0; size],
        }
    }

    /// Adds a directed edge and returns its position `(from, slot)`.
    pub fn add_edge(&mut self, from: usize, to: usize, cap: f64) -> (usize, usize) {
        let slot = self.graph[from].len();
        let rev_slot = self.graph[to].len() + usize::from(from == to);
        self.graph[from].push(Edge {
            to,
            cap,
            rev: rev_slot,
        });
        self.graph[to].push(Edge {
            to: from,
            cap: 0.0,
            rev: slot,
        });
        (from, slot)
    }

    /// Flow pushed through an edge added with capacity `original`.
    pub fn flow_on(&self, (from, slot): (usize, usize)) -> f64 {
        let e = self.graph[from][slot];
        self.graph[e.to][e.rev].cap
    }

    fn bfs(&mut self, s: usize) {
        self.level.iter_mut().for_each(|l| *l = -1);
        let mut queue = VecDeque::new();
        self.level[s] = 0;
        queue.push_back(s);
        while let Some(v) = queue.pop_front() {
            for e in &self.graph[v] {
                if e.cap > CAP_EPS && self.level[e.to] < 0 {
                    self.level[e.to] = self.level[v] + 1;
                    queue.push_back(e.to);
                }
            }
        }
    }

    fn dfs(&mut self, v: usize, t: usize, f: f64) -> f64 {
        if v == t {
            return f;
        }
        while self.iter[v] < self.graph[v].len() {
            let e = self.graph[v][self.iter[v]];
            if e.cap > CAP_EPS && self.level[v] < self.level[e.to] {
                let d = self.dfs(e.to, t, f.min(e.cap));
                if d > CAP_EPS {
                    let i = self.iter[v];
                    self.graph[v][i].cap -= d;
                    self.graph[e.to][e.rev].cap += d;
                    return d;
                }
            }
            self.iter[v] += 1;
        }
        0.0
    }

    pub fn max_flow(&mut self, s: usize, t: usize) -> f64 {
        let mut total = 0.0;
        loop {
            self.bfs(s);
            if self.level[t] < 0 {
                return total;
            }
            self.iter.iter_mut().for_each(|i| *i = 0);
            loop {
                let f = self.dfs(s, t, f64::INFINITY);
                if f <= CAP_EPS {
                    break;
                }
                total += f;
            }
        }
    }

    /// Vertices reachable from `s` in the residual graph (after `max_flow`).
    pub fn reachable(&self, s: usize) -> Vec<bool> {
        let mut seen = vec![false; self.graph.len()];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(v) = stack.pop() {
            for e in &self.graph[v] {
                if e.cap > CAP_EPS && !seen[e.to] {
                    seen[e.to] = true;
                    stack.push(e.to);
                }
            }
        }
        seen
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_network() {
        // s=0, t=3
        let mut g = Dinic::new(4);
        g.add_edge(0, 1, 3.0);
        g.add_edge(0, 2, 2.0);
        g.add_edge(1, 2, 1.0);
        g.add_edge(1, 3, 2.0);
        g.add_edge(2, 3, 3.0);
        assert!((g.max_flow(0, 3) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cut_side_matches_bottleneck() {
        let mut g = Dinic::new(3);
        let a = g.add_edge(0, 1, 0.25);
        g.add_edge(1, 2, f64::INFINITY);
        assert!((g.max_flow(0, 2) - 0.25).abs() < 1e-15);
        assert_eq!(g.flow_on(a), 0.25);
        let r = g.reachable(0);
        assert!(r[0] && !r[1] && !r[2]);
    }
}
