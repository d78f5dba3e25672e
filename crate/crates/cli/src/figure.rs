//! Data for the four figures.

use qgamma_core::verify::{eval_statistic, StatId};
use qgamma_core::{find_x_q, EvalConfig, Error, Result};

use crate::format::g17;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Axis {
    /// Sweep x at fixed q.
    X { q: f64 },
    /// Sweep q; the statistic ignores x.
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FigureSpec {
    pub id: u8,
    pub stat: StatId,
    pub axis: Axis,
    pub lo: f64,
    pub hi: f64,
    pub log_spaced: bool,
    pub samples: usize,
}

pub const DEFAULT_SAMPLES: usize = 1000;

impl FigureSpec {
    pub fn get(id: u8) -> Option<Self> {
        let f = |stat, axis, lo, hi, log_spaced| FigureSpec { id, stat, axis, lo, hi, log_spaced, samples: DEFAULT_SAMPLES };
        match id {
            1 => Some(f(StatId::Phi, Axis::X { q: 1.6 }, 1.01, 20.0, false)),
            2 => Some(f(StatId::FQ, Axis::X { q: 9.1 }, 0.05, 20.0, true)),
            3 => Some(f(StatId::FQ, Axis::X { q: 9.0 }, 0.05, 20.0, true)),
            4 => Some(f(StatId::UOfQ, Axis::Q, 1.1, 10.0, false)),
            _ => None,
        }
    }

    pub fn with_samples(self, samples: usize) -> Self {
        Self { samples, ..self }
    }

    pub fn header(&self) -> &'static str {
        match self.axis {
            Axis::X { .. } => "x,value",
            Axis::Q => "q,value",
        }
    }

    /// Abscissae, endpoints exact.
    pub fn abscissae(&self) -> Vec<f64> {
        let n = self.samples - 1;
        let (a, b) = if self.log_spaced { (self.lo.ln(), self.hi.ln()) } else { (self.lo, self.hi) };
        (0..=n)
            .map(|i| match i {
                0 => self.lo,
                i if i == n => self.hi,
                i => {
                    let t = a + (b - a) * i as f64 / n as f64;
                    if self.log_spaced {
                        t.exp()
                    } else {
                        t
                    }
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FigureData {
    pub rows: Vec<(f64, f64)>,
    pub excluded: usize,
}

/// Evaluate the figure. Samples within `exclusion` of a pole of the
/// statistic, or that the evaluator rejects as too close to one, are dropped
/// and counted.
pub fn compute(spec: &FigureSpec, cfg: &EvalConfig, exclusion: f64) -> Result<FigureData> {
    if spec.samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least two samples, got {}", spec.samples)));
    }
    let pole = match (spec.stat, spec.axis) {
        (StatId::Phi | StatId::GRatio, Axis::X { q }) => Some(find_x_q(cfg.point(q)?, cfg)?.root),
        _ => None,
    };
    let mut rows = Vec::with_capacity(spec.samples);
    let mut excluded = 0;
    for t in spec.abscissae() {
        if pole.is_some_and(|p| (t - p).abs() <= exclusion) {
            excluded += 1;
            continue;
        }
        let (x, q) = match spec.axis {
            Axis::X { q } => (t, q),
            Axis::Q => (1.0, t),
        };
        match eval_statistic(spec.stat, x, cfg.point(q)?, None, cfg) {
            Ok(e) => rows.push((t, e.value)),
            Err(Error::PoleProximity { .. }) => excluded += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(FigureData { rows, excluded })
}

/// CSV text: header, one `%.17g,%.17g` row per sample, LF line ends, and a
/// trailing `# excluded=<k>` line when samples were dropped.
pub fn to_csv(spec: &FigureSpec, data: &FigureData) -> String {
    let mut s = String::with_capacity(40 * data.rows.len() + 16);
    s.push_str(spec.header());
    s.push('\n');
    for &(t, v) in &data.rows {
        s.push_str(&g17(t));
        s.push(',');
        s.push_str(&g17(v));
        s.push('\n');
    }
    if data.excluded > 0 {
        s.push_str(&format!("# excluded={}\n", data.excluded));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn abscissae_hit_endpoints() {
        for id in 1..=4 {
            let spec = FigureSpec::get(id).unwrap().with_samples(7);
            let xs = spec.abscissae();
            assert_eq!(xs.len(), 7);
            assert_eq!(xs[0], spec.lo);
            assert_eq!(xs[6], spec.hi);
            assert!(xs.windows(2).all(|w| w[0] < w[1]));
        }
        assert!(FigureSpec::get(5).is_none());
    }

    #[test]
    fn csv_layout() {
        let spec = FigureSpec::get(4).unwrap();
        let data = FigureData { rows: vec![(1.5, -0.25), (2.0, 0.1)], excluded: 2 };
        assert_eq!(to_csv(&spec, &data), "q,value\n1.5,-0.25\n2,0.10000000000000001\n# excluded=2\n");
    }

    #[test]
    fn figure_one_drops_the_pole_window() {
        let cfg = EvalConfig::default();
        let xq = find_x_q(cfg.point(1.6).unwrap(), &cfg).unwrap().root;
        let spec = FigureSpec { lo: xq - 1e-5, hi: xq + 1e-5, samples: 3, ..FigureSpec::get(1).unwrap() };
        let d = compute(&spec, &cfg, 1e-4).unwrap();
        assert_eq!(d.excluded, 3);
        assert!(d.rows.is_empty());
    }
}
