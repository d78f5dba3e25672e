use std::io::Write;
use std::time::Instant;

use qgamma_core::roots::q0_closed_form;
use qgamma_core::verify::{
    eval_statistic, ControlStatus, GridSpec, PropertyReport, StatId, StatParam, Verdict, Verifier,
};
use qgamma_core::{
    find_x_q, find_y_q, find_z_q, gamma_q, log_gamma_q, psi_q_order, Constants, DerivOrder, Error, Evaluation,
    PropertyId, RootResult,
};

use crate::args::{
    ConstantsArgs, EvalArgs, FigureArgs, FnSpec, ReportFormat, RootKind, RootsArgs, VerifyArgs,
};
use crate::figure::{self, FigureSpec};
use crate::format::short;
use crate::report::{ConfigEcho, ReportDocument};
use crate::exit;

/// A failure with the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self { code: exit::USAGE, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotApplicable(_) => exit::NOT_APPLICABLE,
            Error::NonPositiveArgument(_)
            | Error::InvalidParameter(_)
            | Error::MissingParameter(_)
            | Error::UnsupportedOrder(_) => exit::USAGE,
            _ => exit::NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self::usage(format!("i/o error: {e}"))
    }
}

pub type Outcome = Result<i32, Failure>;

fn eval_line(e: &Evaluation) -> String {
    format!("value={} err<={} terms={}", short(e.value), short(e.tail_bound), e.terms_used)
}

pub fn eval(a: &EvalArgs, out: &mut dyn Write) -> Outcome {
    let cfg = a.opts.config();
    cfg.validate()?;
    let q = cfg.point(a.q)?;
    let e = match a.function {
        FnSpec::Gamma => gamma_q(a.x, q, &cfg)?,
        FnSpec::LogGamma => log_gamma_q(a.x, q, &cfg)?,
        FnSpec::Psi(m) => psi_q_order(a.x, q, DerivOrder::new(m as u32)?, &cfg)?,
        FnSpec::Stat(id) => eval_statistic(id, a.x, q, stat_param(id, a)?, &cfg)?,
    };
    writeln!(out, "{}", eval_line(&e))?;
    Ok(exit::SUCCESS)
}

fn stat_param(id: StatId, a: &EvalArgs) -> Result<Option<StatParam>, Failure> {
    let given: Vec<(&str, StatParam)> = [
        a.m.map(|v| ("m", StatParam::M(v))),
        a.a.map(|v| ("a", StatParam::A(v))),
        a.k.map(|v| ("k", StatParam::K(v))),
        a.alpha.map(|v| ("alpha", StatParam::Alpha(v))),
    ]
    .into_iter()
    .flatten()
    .collect();
    match (id.parameter(), given.as_slice()) {
        (_, []) => Ok(None),
        (Some(want), [(name, p)]) if *name == want => Ok(Some(*p)),
        (want, _) => Err(Failure::usage(format!(
            "{id} takes {}, got --{}",
            want.map_or("no parameter".to_string(), |w| format!("--{w}")),
            given.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(" --")
        ))),
    }
}

pub fn constants(a: &ConstantsArgs, out: &mut dyn Write) -> Outcome {
    let cfg = a.opts.config();
    cfg.validate()?;
    let c = Constants::compute(&cfg)?;
    let q0 = q0_closed_form();
    let t = q0.sqrt();
    writeln!(out, "q0={} residual={}", q0, short(t * t * t - t - 1.0))?;
    writeln!(out, "p0={}", c.p0)?;
    writeln!(out, "j_boundary={}", c.j_boundary)?;
    for &q in &a.q {
        let r = find_x_q(cfg.point(q)?, &cfg)?;
        writeln!(out, "x_q={} q={}", r.root, q)?;
    }
    Ok(exit::SUCCESS)
}

fn root_line(r: &RootResult) -> String {
    format!(
        "root={} residual={} bracket_width={} iterations={}",
        r.root,
        short(r.residual),
        short(r.bracket_width),
        r.iterations
    )
}

pub fn roots(a: &RootsArgs, out: &mut dyn Write) -> Outcome {
    let cfg = a.opts.config();
    cfg.validate()?;
    let q = cfg.point(a.q)?;
    let r = match a.kind {
        RootKind::Xq => find_x_q(q, &cfg)?,
        RootKind::Yq => find_y_q(q, &cfg)?,
        RootKind::Zq => find_z_q(q, &cfg)?,
    };
    writeln!(out, "{}", root_line(&r))?;
    Ok(exit::SUCCESS)
}

pub fn verify(a: &VerifyArgs, out: &mut dyn Write) -> Outcome {
    let cfg = a.opts.config();
    cfg.validate()?;
    let constants = Constants::compute(&cfg)?;
    let grid = match &a.q_set {
        None if (a.x_min, a.x_max, a.x_count, a.exclusion) == (1e-3, 1e3, 400, 1e-4) => GridSpec::standard(&constants),
        None => GridSpec::new(GridSpec::standard(&constants).q_set, a.x_min, a.x_max, a.x_count, a.exclusion)?,
        Some(qs) => GridSpec::new(qs.clone(), a.x_min, a.x_max, a.x_count, a.exclusion)?,
    };
    let ids: Vec<PropertyId> = a.props.clone().unwrap_or_else(|| PropertyId::all().collect());
    let start = Instant::now();
    let outcome = Verifier::with_constants(&grid, &cfg, constants).run(&ids, a.jobs)?;
    let wall = (!a.no_timing).then(|| start.elapsed().as_secs_f64());
    let doc = ReportDocument::new(ConfigEcho { eval: cfg, grid, properties: ids, jobs: a.jobs }, constants, outcome, wall);
    let body = match a.format {
        ReportFormat::Json => serde_json::to_string_pretty(&doc).map_err(|e| Failure::usage(e.to_string()))? + "\n",
        ReportFormat::Text => text_report(&doc),
    };
    match &a.out {
        Some(path) => std::fs::write(path, body)?,
        None => out.write_all(body.as_bytes())?,
    }
    Ok(verify_exit_code(&doc))
}

pub fn verify_exit_code(doc: &ReportDocument) -> i32 {
    if doc.summary.errored > 0 || doc.controls.iter().any(|c| c.error.is_some()) {
        exit::NUMERICAL
    } else if doc.summary.failed > 0 || doc.summary.controls_not_violated > 0 {
        exit::VIOLATION
    } else {
        exit::SUCCESS
    }
}

fn property_line(r: &PropertyReport) -> String {
    let verdict = match r.verdict {
        Verdict::Pass => "pass",
        Verdict::Fail => "FAIL",
    };
    let mut s = format!(
        "{} {verdict} worst_margin={} evaluations={} excluded={}",
        r.property,
        r.worst_margin.map_or("-".to_string(), short),
        r.evaluations,
        r.excluded
    );
    if !r.skipped_q.is_empty() {
        let qs: Vec<String> = r.skipped_q.iter().map(|q| q.to_string()).collect();
        s.push_str(&format!(" skipped_q={}", qs.join(",")));
    }
    if let Some(e) = &r.error {
        s.push_str(&format!("\n    error: {e}"));
    }
    if r.verdict == Verdict::Fail {
        if let Some(w) = &r.witness {
            s.push_str(&format!("\n    witness q={} x={}: {}", w.q, w.x, w.detail));
        }
    }
    s
}

pub fn text_report(doc: &ReportDocument) -> String {
    let mut s = String::new();
    for r in &doc.properties {
        s.push_str(&property_line(r));
        s.push('\n');
    }
    for c in &doc.controls {
        let status = match c.status {
            ControlStatus::Violated => "expected-fail: violated",
            ControlStatus::NotViolated => "REGRESSION: not violated",
            ControlStatus::NotApplicable => "not applicable to this q-set",
        };
        s.push_str(&format!("control {} [{}] {status}", c.property, c.name));
        if let Some(w) = c.witness.as_ref().filter(|_| c.status == ControlStatus::Violated) {
            s.push_str(&format!(" witness q={} x={} margin={}", w.q, w.x, short(w.margin)));
        }
        if let Some(e) = &c.error {
            s.push_str(&format!(" error: {e}"));
        }
        s.push('\n');
    }
    let m = &doc.summary;
    s.push_str(&format!(
        "summary: {} properties, {} passed, {} failed; {} controls, {} violated as expected, {} not violated\n",
        m.properties, m.passed, m.failed, m.controls, m.controls_violated, m.controls_not_violated
    ));
    if let Some(t) = doc.wall_time_s {
        s.push_str(&format!("wall_time_s={t:.3}\n"));
    }
    s
}

pub fn figure(a: &FigureArgs) -> Outcome {
    let cfg = a.opts.config();
    cfg.validate()?;
    let spec = FigureSpec::get(a.fig.0).expect("figure id validated by parser").with_samples(a.samples);
    let data = figure::compute(&spec, &cfg, FIGURE_POLE_EXCLUSION)?;
    std::fs::write(&a.out, figure::to_csv(&spec, &data))?;
    Ok(exit::SUCCESS)
}

/// Same radius as the default verify grid.
pub const FIGURE_POLE_EXCLUSION: f64 = 1e-4;
