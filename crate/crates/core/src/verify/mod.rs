//! Grid sweeps of the inequality catalog.

pub mod catalog;
pub mod grid;
pub mod report;
pub mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::EvalConfig;
use crate::roots::Constants;

pub use catalog::{shifted_log_bounds, step_differences, PropertyId, PropertyMeta};
pub use grid::{GridSpec, EQUALITY_EXCLUSION};
pub use report::{relative_margin, ControlReport, ControlStatus, PropertyReport, Verdict, Witness, MARGIN_TOLERANCE};
pub use stats::{eval_statistic, membership_i, membership_j, Bounded, Membership, StatId, StatParam, POLE_THRESHOLD};

use catalog::Ctx;
use report::Tally;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyOutcome {
    pub properties: Vec<PropertyReport>,
    pub controls: Vec<ControlReport>,
}

impl VerifyOutcome {
    pub fn all_passed(&self) -> bool {
        self.properties.iter().all(|r| r.verdict == Verdict::Pass) && self.controls.iter().all(ControlReport::ok)
    }
}

/// A configured sweep over one grid.
pub struct Verifier<'a> {
    ctx: Ctx<'a>,
}

impl<'a> Verifier<'a> {
    pub fn new(grid: &'a GridSpec, cfg: &EvalConfig) -> Result<Self> {
        cfg.validate()?;
        let constants = Constants::compute(cfg)?;
        Ok(Self::with_constants(grid, cfg, constants))
    }

    pub fn with_constants(grid: &'a GridSpec, cfg: &EvalConfig, constants: Constants) -> Self {
        Self { ctx: Ctx::new(grid, *cfg, constants) }
    }

    pub fn constants(&self) -> &Constants {
        &self.ctx.constants
    }

    pub fn property(&self, id: PropertyId) -> PropertyReport {
        let mut t = Tally::default();
        let mut skipped = Vec::new();
        let res = self.ctx.run(id, &mut t, &mut skipped);
        let error = res.err().map(|e| e.to_string());
        let verdict = if error.is_none() && !t.violated() { Verdict::Pass } else { Verdict::Fail };
        PropertyReport {
            property: id,
            verdict,
            worst_margin: t.worst_margin(),
            witness: t.worst,
            evaluations: t.evaluations,
            excluded: t.excluded,
            skipped_q: skipped,
            error,
        }
    }

    /// Negative controls attached to `id`.
    pub fn controls(&self, id: PropertyId) -> Vec<ControlReport> {
        self.ctx.controls(id)
    }

    /// Run `ids` and their controls on `jobs` threads. Reports come back in
    /// the order of `ids` whatever the thread count.
    pub fn run(&self, ids: &[PropertyId], jobs: usize) -> Result<VerifyOutcome> {
        if jobs == 0 {
            return Err(Error::InvalidParameter("jobs must be at least 1".into()));
        }
        let work = |id: &PropertyId| (self.property(*id), self.controls(*id));
        let pairs: Vec<(PropertyReport, Vec<ControlReport>)> = if jobs == 1 {
            ids.iter().map(work).collect()
        } else {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(jobs)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            pool.install(|| ids.par_iter().map(work).collect())
        };
        let (properties, controls): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        Ok(VerifyOutcome { properties, controls: controls.into_iter().flatten().collect() })
    }
}

/// Sweep one property over `grid`.
pub fn verify_property(id: PropertyId, grid: &GridSpec, cfg: &EvalConfig) -> Result<PropertyReport> {
    Ok(Verifier::new(grid, cfg)?.property(id))
}

/// Sweep the whole catalog, with negative controls.
pub fn verify_all(grid: &GridSpec, cfg: &EvalConfig, jobs: usize) -> Result<VerifyOutcome> {
    let ids: Vec<PropertyId> = PropertyId::all().collect();
    Verifier::new(grid, cfg)?.run(&ids, jobs)
}
