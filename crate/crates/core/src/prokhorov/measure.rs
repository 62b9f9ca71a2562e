use std::sync::Arc;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::metric::{FiniteMetricSpace, IndexSet};

/// Largest total-mass deviation accepted (and renormalized away) on construction.
pub const MASS_TOL: f64 = 1e-9;

/// A finitely supported Borel probability measure on a [`FiniteMetricSpace`].
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    space: Arc<FiniteMetricSpace>,
    mass: Vec<f64>,
}

impl DiscreteMeasure {
    pub fn new(space: Arc<FiniteMetricSpace>, mass: Vec<f64>) -> Result<Self> {
        if mass.len() != space.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} masses for a space of {} points",
                mass.len(),
                space.len()
            )));
        }
        if let Some(i) = mass.iter().position(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "mass[{i}] = {} is not a finite nonnegative number",
                mass[i]
            )));
        }
        let total: f64 = mass.iter().sum();
        if (total - 1.0).abs() > MASS_TOL {
            return Err(Error::InvalidMeasure(format!(
                "masses sum to {total}, expected 1"
            )));
        }
        let mass = mass.into_iter().map(|m| m / total).collect();
        Ok(Self { space, mass })
    }

    /// Unit mass at point `i`.
    pub fn dirac(space: Arc<FiniteMetricSpace>, i: usize) -> Result<Self> {
        let n = space.len();
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
        let mut mass = vec![0.0; n];
        mass[i] = 1.0;
        Ok(Self { space, mass })
    }

    /// Uniform measure on the given points.
    pub fn uniform_on(space: Arc<FiniteMetricSpace>, points: &[usize]) -> Result<Self> {
        let set = IndexSet::within(points.to_vec(), space.len())?;
        if set.is_empty() {
            return Err(Error::Empty("uniform measure on no points"));
        }
        let mut mass = vec![0.0; space.len()];
        let w = 1.0 / set.len() as f64;
        for &i in set.members() {
            mass[i] = w;
        }
        Ok(Self { space, mass })
    }

    pub fn space(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    /// `P(A)` for an index set `A`.
    pub fn measure_of(&self, set: &IndexSet) -> f64 {
        set.members().iter().fold(0.0, |acc, &i| acc + self.mass[i])
    }

    /// Points carrying positive mass, with their masses.
    pub fn support(&self) -> Vec<(usize, f64)> {
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0.0)
            .map(|(i, &m)| (i, m))
            .collect()
    }

    pub(crate) fn same_space(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.space, &other.space) || *self.space == *other.space {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl Serialize for DiscreteMeasure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("DiscreteMeasure", 1)?;
        s.serialize_field("mass", &self.mass)?;
        s.end()
    }
}

/// Total-variation distance `sup_A |P(A) - Q(A)| = sum_i max(P_i - Q_i, 0)`.
pub fn tv_distance(p: &DiscreteMeasure, q: &DiscreteMeasure) -> Result<f64> {
    p.same_space(q)?;
    Ok(p.mass
        .iter()
        .zip(&q.mass)
        .map(|(a, b)| (a - b).max(0.0))
        .sum::<f64>()
        .min(1.0))
}
