use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::euclidean;

/// Continuous piecewise-linear map `[0, 1] -> R^N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPath")]
pub struct PLPath {
    knots: Vec<f64>,
    values: Vec<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    knots: Vec<f64>,
    values: Vec<Vec<f64>>,
}

impl TryFrom<RawPath> for PLPath {
    type Error = Error;

    fn try_from(raw: RawPath) -> Result<Self> {
        PLPath::new(raw.knots, raw.values)
    }
}

impl PLPath {
    pub fn new(knots: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::InvalidPath("need at least two knots".into()));
        }
        if knots[0] != 0.0 || knots[knots.len() - 1] != 1.0 {
            return Err(Error::InvalidPath("knots must start at 0 and end at 1".into()));
        }
        if let Some(w) = knots.windows(2).position(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidPath(format!(
                "knots must be strictly increasing (knot {} -> {})",
                w,
                w + 1
            )));
        }
        if values.len() != knots.len() {
            return Err(Error::InvalidPath(format!(
                "{} knots but {} values",
                knots.len(),
                values.len()
            )));
        }
        let dim = values[0].len();
        if dim == 0 {
            return Err(Error::InvalidPath("values must have dimension >= 1".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::InvalidPath(format!(
                    "value {i} has dimension {}, expected {dim}",
                    v.len()
                )));
            }
            if v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidPath(format!("value {i} is not finite")));
            }
        }
        Ok(Self { knots, values })
    }

    pub fn constant(value: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![value.clone(), value])
    }

    /// The segment from `a` at time 0 to `b` at time 1.
    pub fn segment(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        Self::new(vec![0.0, 1.0], vec![a, b])
    }

    pub fn dim(&self) -> usize {
        self.values[0].len()
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }

    /// Index `i` of the segment `[knots[i], knots[i+1]]` holding `t`.
    fn segment_of(&self, t: f64) -> usize {
        let k = self.knots.partition_point(|&u| u <= t);
        k.clamp(1, self.knots.len() - 1) - 1
    }

    fn eval_on(&self, seg: usize, t: f64, out: &mut [f64]) {
        let (t0, t1) = (self.knots[seg], self.knots[seg + 1]);
        let w = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        let (a, b) = (&self.values[seg], &self.values[seg + 1]);
        for ((o, &x), &y) in out.iter_mut().zip(a).zip(b) {
            *o = x + w * (y - x);
        }
    }

    /// Value at `t`, clamped to `[0, 1]`.
    pub fn eval(&self, t: f64) -> Vec<f64> {
        let t = t.clamp(0.0, 1.0);
        let mut out = vec![0.0; self.dim()];
        self.eval_on(self.segment_of(t), t, &mut out);
        out
    }

    /// `sup_t |x(t)|`, attained at a knot.
    pub fn norm(&self) -> f64 {
        self.values
            .iter()
            .map(|v| v.iter().map(|c| c * c).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Image samples on `[a, b]`: both endpoints and every knot strictly inside.
    pub fn window_vertices(&self, a: f64, b: f64) -> Vec<Vec<f64>> {
        let mut out = vec![self.eval(a)];
        let lo = self.knots.partition_point(|&u| u <= a);
        let hi = self.knots.partition_point(|&u| u < b);
        out.extend(self.values[lo..hi.max(lo)].iter().cloned());
        out.push(self.eval(b));
        out
    }
}

pub(crate) fn check_dims(a: &PLPath, b: &PLPath) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::InvalidPath(format!(
            "dimension mismatch: {} vs {}",
            a.dim(),
            b.dim()
        )));
    }
    Ok(())
}

/// `sup_t |x(t) - y(t)|`. The difference is affine between merged knots, so
/// the maximum sits on a merged knot.
pub fn uniform_distance(x: &PLPath, y: &PLPath) -> Result<f64> {
    check_dims(x, y)?;
    Ok(sup_distance(x, y))
}

pub(crate) fn sup_distance(x: &PLPath, y: &PLPath) -> f64 {
    let (kx, ky) = (&x.knots, &y.knots);
    let mut vx = vec![0.0; x.dim()];
    let mut vy = vec![0.0; y.dim()];
    let (mut a, mut b, mut sx, mut sy) = (0, 0, 0, 0);
    let mut best: f64 = 0.0;
    while a < kx.len() || b < ky.len() {
        let t = if b == ky.len() || (a < kx.len() && kx[a] <= ky[b]) {
            kx[a]
        } else {
            ky[b]
        };
        if a < kx.len() && kx[a] == t {
            a += 1;
        }
        if b < ky.len() && ky[b] == t {
            b += 1;
        }
        while kx[sx + 1] < t {
            sx += 1;
        }
        while ky[sy + 1] < t {
            sy += 1;
        }
        x.eval_on(sx, t, &mut vx);
        y.eval_on(sy, t, &mut vy);
        let sq: f64 = vx.iter().zip(&vy).map(|(p, q)| (p - q) * (p - q)).sum();
        best = best.max(sq);
    }
    best.sqrt()
}

/// Closed-window modulus `max { |x(s) - x(t)| : 0 <= t - s <= delta }`.
///
/// The objective is convex on each pair of segments, so only polygon vertices
/// matter: knot pairs, and knots paired with the point `delta` away.
pub fn modulus(x: &PLPath, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(crate::error::param("delta", "must be > 0"));
    }
    let k = &x.knots;
    let v = &x.values;
    let mut best: f64 = 0.0;
    let mut hi = 0;
    for i in 0..k.len() {
        hi = hi.max(i);
        while hi + 1 < k.len() && k[hi + 1] - k[i] <= delta {
            hi += 1;
        }
        for j in i + 1..=hi {
            best = best.max(euclidean(&v[i], &v[j]));
        }
    }
    for i in 0..k.len() {
        if k[i] + delta <= 1.0 {
            best = best.max(euclidean(&v[i], &x.eval(k[i] + delta)));
        }
        if k[i] - delta >= 0.0 {
            best = best.max(euclidean(&v[i], &x.eval(k[i] - delta)));
        }
    }
    Ok(best)
}

/// `max_x modulus(x, delta)` over a nonempty family.
pub fn mu_uec_family(family: &[PLPath], delta: f64) -> Result<f64> {
    if family.is_empty() {
        return Err(Error::Empty("path family"));
    }
    family
        .iter()
        .try_fold(0.0f64, |acc, x| Ok(acc.max(modulus(x, delta)?)))
}

/// `max_t |L(t) - y|` for the bridge `L(t) = (1 - t) c1 + t c2`; convex in
/// `t`, so an endpoint attains it.
pub fn bridge_max_distance(c1: &[f64], c2: &[f64], y: &[f64]) -> f64 {
    euclidean(c1, y).max(euclidean(c2, y))
}

/// `max_t |L(t) - M(t)|` for the bridges `c1 -> c2` and `y1 -> y2`.
pub fn bridge_gap(c1: &[f64], c2: &[f64], y1: &[f64], y2: &[f64]) -> f64 {
    euclidean(c1, y1).max(euclidean(c2, y2))
}

/// Ramps `t -> clamp((t - s) / h, 0, 1)` along the first axis of `R^dim`,
/// for `s = 0, step, 2 step, ...` below 1.
pub fn ramp_family(h: f64, step: f64, dim: usize) -> Result<Vec<PLPath>> {
    if !(h > 0.0) || !(step > 0.0) || dim == 0 {
        return Err(crate::error::param("ramp", "h, step and dim must be positive"));
    }
    let count = (1.0 / step - 1e-9).ceil() as usize;
    (0..count)
        .map(|i| {
            let s = i as f64 * step;
            let mut knots = vec![0.0];
            let mut vals = vec![0.0];
            if s > 0.0 {
                knots.push(s);
                vals.push(0.0);
            }
            if s + h < 1.0 {
                knots.push(s + h);
                vals.push(1.0);
                knots.push(1.0);
                vals.push(1.0);
            } else {
                knots.push(1.0);
                vals.push((1.0 - s) / h);
            }
            let values = vals
                .into_iter()
                .map(|a| {
                    let mut p = vec![0.0; dim];
                    p[0] = a;
                    p
                })
                .collect();
            PLPath::new(knots, values)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar(knots: &[f64], vals: &[f64]) -> PLPath {
        PLPath::new(knots.to_vec(), vals.iter().map(|&v| vec![v]).collect()).unwrap()
    }

    #[test]
    fn rejects_malformed_paths() {
        assert!(PLPath::new(vec![0.0], vec![vec![0.0]]).is_err());
        assert!(PLPath::new(vec![0.0, 0.5], vec![vec![0.0]; 2]).is_err());
        assert!(PLPath::new(vec![0.0, 0.5, 0.5, 1.0], vec![vec![0.0]; 4]).is_err());
        assert!(PLPath::new(vec![0.0, 1.0], vec![vec![0.0], vec![0.0, 1.0]]).is_err());
        assert!(PLPath::new(vec![0.0, 1.0], vec![vec![f64::NAN], vec![0.0]]).is_err());
        let json = r#"{"knots":[0,1],"values":[[0],[1]],"extra":1}"#;
        assert!(serde_json::from_str::<PLPath>(json).is_err());
        let json = r#"{"knots":[0,0.2],"values":[[0],[1]]}"#;
        assert!(serde_json::from_str::<PLPath>(json).is_err());
    }

    #[test]
    fn eval_interpolates() {
        let x = scalar(&[0.0, 0.5, 1.0], &[0.0, 1.0, 0.0]);
        assert_eq!(x.eval(0.25), vec![0.5]);
        assert_eq!(x.eval(0.5), vec![1.0]);
        assert_eq!(x.eval(1.0), vec![0.0]);
        assert_eq!(x.norm(), 1.0);
    }

    #[test]
    fn distance_examples() {
        let x = scalar(&[0.0, 1.0], &[0.0, 1.0]);
        let y = scalar(&[0.0, 1.0], &[1.0, 0.0]);
        assert_eq!(uniform_distance(&x, &y).unwrap(), 1.0);
        assert_eq!(uniform_distance(&x, &x).unwrap(), 0.0);
        let z = PLPath::constant(vec![0.0, 0.0]).unwrap();
        let c = PLPath::constant(vec![3.0, 4.0]).unwrap();
        assert_eq!(uniform_distance(&z, &c).unwrap(), 5.0);
        assert!(uniform_distance(&x, &z).is_err());
    }

    #[test]
    fn distance_over_merged_knots() {
        let x = scalar(&[0.0, 0.3, 1.0], &[0.0, 2.0, 0.0]);
        let y = scalar(&[0.0, 0.7, 1.0], &[0.0, 1.0, 0.0]);
        let d = uniform_distance(&x, &y).unwrap();
        let grid = (0..=10_000)
            .map(|i| {
                let t = i as f64 / 10_000.0;
                (x.eval(t)[0] - y.eval(t)[0]).abs()
            })
            .fold(0.0, f64::max);
        assert!((d - grid).abs() < 1e-9);
    }

    #[test]
    fn modulus_examples() {
        let x = scalar(&[0.0, 1.0], &[0.0, 1.0]);
        assert!((modulus(&x, 0.25).unwrap() - 0.25).abs() < 1e-15);
        let saw = scalar(&[0.0, 0.5, 1.0], &[0.0, 1.0, 0.0]);
        assert!((modulus(&saw, 0.2).unwrap() - 0.4).abs() < 1e-15);
        let c = PLPath::constant(vec![2.0]).unwrap();
        assert_eq!(modulus(&c, 0.3).unwrap(), 0.0);
        assert!(modulus(&x, 0.0).is_err());
        assert_eq!(modulus(&x, 5.0).unwrap(), 1.0);
    }

    #[test]
    fn family_modulus() {
        let a = scalar(&[0.0, 1.0], &[0.0, 1.0]);
        let b = scalar(&[0.0, 1.0], &[0.0, 2.0]);
        assert!((mu_uec_family(&[a, b], 0.1).unwrap() - 0.2).abs() < 1e-15);
        assert!(mu_uec_family(&[], 0.1).is_err());
    }

    #[test]
    fn window_vertices_include_inner_knots() {
        let x = scalar(&[0.0, 0.3, 0.6, 1.0], &[0.0, 1.0, -1.0, 0.0]);
        let v = x.window_vertices(0.3, 0.7);
        assert_eq!(v.len(), 3);
        assert_eq!(v[0], vec![1.0]);
        assert_eq!(v[1], vec![-1.0]);
        assert!((v[2][0] + 0.75).abs() < 1e-15);
    }

    #[test]
    fn ramps() {
        let fam = ramp_family(0.01, 0.005, 1).unwrap();
        assert_eq!(fam.len(), 200);
        assert_eq!(fam[0].eval(0.005), vec![0.5]);
        assert!((fam[199].eval(1.0)[0] - 0.5).abs() < 1e-9);
        assert!((modulus(&fam[10], 0.02).unwrap() - 1.0).abs() < 1e-12);
    }
}
