use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::roots::Constants;

/// Half-width of the neighbourhood of `x = 1` dropped from strict
/// inequalities that turn into equalities there.
pub const EQUALITY_EXCLUSION: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Values of q to sweep, kept sorted ascending.
    pub q_set: Vec<f64>,
    pub x_min: f64,
    pub x_max: f64,
    /// Number of log-spaced x samples.
    pub x_count: usize,
    /// Radius of the window removed around pole and root abscissae.
    pub exclusion_radius: f64,
}

impl GridSpec {
    /// Standard sweep: a q-set straddling every threshold, 400 log-spaced
    /// points on `[1e-3, 1e3]`.
    pub fn standard(constants: &Constants) -> Self {
        let q_set = vec![0.1, 0.25, 0.5, 0.9, 0.99, 1.5, constants.q0, 2.0, 3.0, constants.p0, 4.0, 4.5, 5.0, 9.0, 10.0];
        Self::new(q_set, 1e-3, 1e3, 400, 1e-4).expect("standard grid is valid")
    }

    pub fn new(mut q_set: Vec<f64>, x_min: f64, x_max: f64, x_count: usize, exclusion_radius: f64) -> Result<Self> {
        if q_set.is_empty() {
            return Err(Error::InvalidParameter("q-set is empty".into()));
        }
        if let Some(&q) = q_set.iter().find(|q| !(q.is_finite() && **q > 0.0)) {
            return Err(Error::InvalidParameter(format!("q must be a positive finite real, got {q}")));
        }
        if !(x_min.is_finite() && x_min > 0.0 && x_max.is_finite() && x_max > x_min) {
            return Err(Error::InvalidParameter(format!("x range must satisfy 0 < x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if x_count < 2 {
            return Err(Error::InvalidParameter(format!("need at least two x samples, got {x_count}")));
        }
        if !(exclusion_radius.is_finite() && exclusion_radius > 0.0) {
            return Err(Error::InvalidParameter(format!("exclusion radius must be positive, got {exclusion_radius}")));
        }
        q_set.sort_by(f64::total_cmp);
        q_set.dedup();
        Ok(Self { q_set, x_min, x_max, x_count, exclusion_radius })
    }

    /// The log-spaced x samples, endpoints exact.
    pub fn x_grid(&self) -> Vec<f64> {
        let (a, b) = (self.x_min.ln(), self.x_max.ln());
        let n = self.x_count - 1;
        (0..=n)
            .map(|i| match i {
                0 => self.x_min,
                i if i == n => self.x_max,
                i => (a + (b - a) * i as f64 / n as f64).exp(),
            })
            .collect()
    }

    /// Samples in `[1, inf)`, with 1 itself always present.
    pub fn x_from_one(&self) -> Vec<f64> {
        let mut xs = vec![1.0];
        xs.extend(self.x_grid().into_iter().filter(|&x| x > 1.0));
        xs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constants() -> Constants {
        Constants { q0: 1.75, p0: 3.24, j_boundary: 9.05, x1_classical: 1.46 }
    }

    #[test]
    fn standard_grid_shape() {
        let g = GridSpec::standard(&constants());
        assert_eq!(g.q_set.len(), 15);
        assert!(g.q_set.windows(2).all(|w| w[0] < w[1]));
        let xs = g.x_grid();
        assert_eq!(xs.len(), 400);
        assert_eq!(xs[0], 1e-3);
        assert_eq!(xs[399], 1e3);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let ones = g.x_from_one();
        assert_eq!(ones[0], 1.0);
        assert!(ones[1] > 1.0);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridSpec::new(vec![], 1e-3, 1e3, 10, 1e-4).is_err());
        assert!(GridSpec::new(vec![-1.0], 1e-3, 1e3, 10, 1e-4).is_err());
        assert!(GridSpec::new(vec![2.0], 1.0, 0.5, 10, 1e-4).is_err());
        assert!(GridSpec::new(vec![2.0], 0.5, 1.0, 1, 1e-4).is_err());
        assert!(GridSpec::new(vec![2.0], 0.5, 1.0, 5, 0.0).is_err());
    }
}
