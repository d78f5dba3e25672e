//! The inequality catalog and its grid predicates.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::grid::{GridSpec, EQUALITY_EXCLUSION};
use super::report::{ControlReport, ControlStatus, Tally};
use super::stats::{ln_harmonic_quotient, ln_power_mean, membership_j, POLE_THRESHOLD};
use crate::classical::classical_psi;
use crate::error::{Error, Result};
use crate::eval::{log_gamma_q, psi_all};
use crate::point::{Branch, DerivOrder, EvalConfig, QPoint};
use crate::roots::{find_x_q, find_y_q, find_z_q, u_of_q, Constants};

/// One of the 24 catalogued properties, `P1` to `P24`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct PropertyId(u8);

impl PropertyId {
    pub const COUNT: u8 = 24;

    pub fn new(n: u8) -> Result<Self> {
        if (1..=Self::COUNT).contains(&n) {
            Ok(Self(n))
        } else {
            Err(Error::InvalidParameter(format!("property index must be in 1..=24, got {n}")))
        }
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn all() -> impl Iterator<Item = PropertyId> {
        (1..=Self::COUNT).map(PropertyId)
    }

    pub fn meta(self) -> PropertyMeta {
        META[self.0 as usize - 1]
    }
}

impl fmt::Display for PropertyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", self.0)
    }
}

impl FromStr for PropertyId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let digits = s.strip_prefix(['P', 'p']).unwrap_or(s);
        let n = digits.parse::<u8>().map_err(|_| Error::InvalidParameter(format!("unknown property `{s}`")))?;
        Self::new(n)
    }
}

impl TryFrom<String> for PropertyId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<PropertyId> for String {
    fn from(p: PropertyId) -> String {
        p.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PropertyMeta {
    pub statement: &'static str,
    pub q_range: &'static str,
    pub x_range: &'static str,
}

const fn meta(statement: &'static str, q_range: &'static str, x_range: &'static str) -> PropertyMeta {
    PropertyMeta { statement, q_range, x_range }
}

const META: [PropertyMeta; 24] = [
    meta("psi(1) <= 0 < psi(3/2), so the zero x_q lies in (1, 3/2)", "q > 0", "x in {1, 3/2}"),
    meta("x psi'(x) + 2 psi(x) >= 0", "q > 0", "x >= 1"),
    meta("x psi(x) and x Gamma'(x) are nondecreasing", "q > 0", "x >= 1"),
    meta("x psi'(x) decreases for q < 1; x^2 psi'(x) increases for q > 1", "q != 1", "x > 0"),
    meta("psi'/psi and x psi'/psi decrease on each side of x_q", "0 < q <= 1", "x >= 1"),
    meta("psi''' psi' - psi''^2 > 0", "q > 0", "x > 0"),
    meta("q -> psi'_q(x) increases on (0,1); q -> psi_q(x) - psi_q(1) decreases for x <= 1, increases for x >= 1", "q > 0", "x > 0"),
    meta("q -> psi''_q(x) decreases on (0,1), increases on [1,inf); q -> psi'_q(x) increases; q -> psi_q(x) decreases for x <= 1, increases for x >= 2", "q > 0", "x > 0"),
    meta("q -> x psi' + 2 psi increases, and exceeds its classical value for q >= 1", "q > 0", "x >= 2"),
    meta("psi'/psi decreases on each side of x_q for q >= 1; x psi'/psi decreases on (1, x_q) for q > 1 and past x_q iff q <= 1 or q >= q0", "q > 0", "x >= 1"),
    meta("log|psi| is concave on each side of x_q", "q > 0", "x >= 1"),
    meta("x psi' + a psi >= 0 for 0 <= a <= -psi'(1)/psi(1), and that bound is at least 2", "q > 0", "x >= 1"),
    meta("f_q = Gamma(x)Gamma(1/x)/(Gamma(x)+Gamma(1/x)) has minimum 1/2 at x = 1 for q in J, else minimum at y_q with four monotone pieces; same pattern for alpha -> f_q(x^alpha)", "q > 0", "x > 0"),
    meta("the power mean of Gamma(x), Gamma(1/x) decreases on (0,1) and increases on (1,inf) for m >= 1/psi(1), and for m >= -(psi(1)+psi'(1))/psi(1)^2 when q >= 1", "q > 0", "x > 0"),
    meta("psi(x) + psi(1/x) < 2 psi(1) for q < 1, and < (x-1)^2/x log q + 2 psi(1) for q > 1", "q != 1", "x > 0, x != 1"),
    meta("the one-step differences of psi' and psi'' are bracketed by psi'' and psi''' at x and x+1", "q > 0", "x > 0"),
    meta("u(q) = psi'(1) + psi''(1) is negative below p0, nonnegative above, and increasing on (1,inf)", "q > 0", "-"),
    meta("2 psi'' + x psi''' >= 0; bounds on psi' + x psi''; x psi' increases on [1,inf) for q >= p0 and decreases on (0,1) for q < p0", "q > 0", "x > 0"),
    meta("psi(x) + psi(1/x) >= 2 psi(1) for q >= p0, <= for q < p0", "q > 0", "x > 0"),
    meta("psi(x) psi(1/x) <= psi(1)^2", "q > 0", "x > 0"),
    meta("2 psi(x)psi(1/x)/(psi(x)+psi(1/x)) > psi(1) for q < p0; for q >= p0 on [1/z_q, z_q], reversed outside", "q > 0", "x > 0, x != 1"),
    meta("the distance from psi_q^(m) to the classical psi^(m) shrinks as q -> 1 from either side", "q near 1", "x in {0.5, 1, 1.5, 2}"),
    meta("psi'' + psi'^2 - log(q) psi' > 0", "q > 0", "x > 0"),
    meta("log((q^(x+1/2)-1)/(q-1)) < psi(x+1) and psi'(x+1) <= -log(q) q^(x+1/2)/(1-q^(x+1/2))", "q > 0", "x > 0"),
];

/// Shared state for one sweep.
pub(crate) struct Ctx<'a> {
    pub grid: &'a GridSpec,
    pub cfg: EvalConfig,
    pub constants: Constants,
    pub xs: Vec<f64>,
    pub xs1: Vec<f64>,
}

const ALPHA_COUNT: usize = 41;
const ALPHA_RANGE: (f64, f64) = (1e-2, 1e2);
const G_ALPHA_X_STRIDE: usize = 40;
const CONVERGENCE_XS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
const SUB_LADDER: [f64; 3] = [0.9, 0.99, 0.999];
const SUPER_LADDER: [f64; 3] = [1.1, 1.01, 1.001];

type Psi = [f64; 4];

impl<'a> Ctx<'a> {
    pub fn new(grid: &'a GridSpec, cfg: EvalConfig, constants: Constants) -> Self {
        Self { grid, cfg, constants, xs: grid.x_grid(), xs1: grid.x_from_one() }
    }

    fn pt(&self, q: f64) -> Result<QPoint> {
        self.cfg.point(q)
    }

    fn psi(&self, x: f64, q: QPoint) -> Result<Psi> {
        let s = psi_all(x, q, &self.cfg)?;
        Ok([s[0].value, s[1].value, s[2].value, s[3].value])
    }

    fn lg(&self, x: f64, q: QPoint) -> Result<f64> {
        Ok(log_gamma_q(x, q, &self.cfg)?.value)
    }

    fn ln_f(&self, x: f64, q: QPoint) -> Result<f64> {
        Ok(ln_harmonic_quotient(self.lg(x, q)?, self.lg(1.0 / x, q)?))
    }

    fn x_q(&self, q: QPoint) -> Result<f64> {
        Ok(find_x_q(q, &self.cfg)?.root)
    }

    /// Samples of `[1, inf)` left and right of `x_q`, minus the exclusion
    /// window.
    fn sides(&self, xq: f64, t: &mut Tally) -> (Vec<f64>, Vec<f64>) {
        let r = self.grid.exclusion_radius;
        let left: Vec<f64> = self.xs1.iter().copied().filter(|&x| x < xq - r).collect();
        let right: Vec<f64> = self.xs1.iter().copied().filter(|&x| x > xq + r).collect();
        t.excluded += self.xs1.len() - left.len() - right.len();
        (left, right)
    }

    fn away_from_one(&self, t: &mut Tally) -> Vec<f64> {
        let xs: Vec<f64> = self.xs.iter().copied().filter(|x| (x - 1.0).abs() > EQUALITY_EXCLUSION).collect();
        t.excluded += self.xs.len() - xs.len();
        xs
    }

    fn up_to_one(&self) -> Vec<f64> {
        let mut xs: Vec<f64> = self.xs.iter().copied().filter(|&x| x < 1.0).collect();
        xs.push(1.0);
        xs
    }

    fn below_p0(&self, q: f64) -> bool {
        q < self.constants.p0
    }

    pub fn run(&self, id: PropertyId, t: &mut Tally, skipped: &mut Vec<f64>) -> Result<()> {
        match id.0 {
            1 => self.p1(t),
            2 => self.p2(t),
            3 => self.p3(t),
            4 => self.p4(t, skipped),
            5 => self.p5(t, skipped),
            6 => self.p6(t),
            7 => self.p7(t),
            8 => self.p8(t),
            9 => self.p9(t),
            10 => self.p10(t),
            11 => self.p11(t),
            12 => self.p12(t),
            13 => self.p13(t),
            14 => self.p14(t),
            15 => self.p15(t, skipped),
            16 => self.p16(t),
            17 => self.p17(t),
            18 => self.p18(t),
            19 => self.p19(t),
            20 => self.p20(t),
            21 => self.p21(t),
            22 => self.p22(t),
            23 => self.p23(t),
            24 => self.p24(t),
            _ => unreachable!("PropertyId is validated on construction"),
        }
    }

    fn p1(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let a = self.psi(1.0, pt)?[0];
            let b = self.psi(1.5, pt)?[0];
            t.le(q, 1.0, a, 0.0, "psi(1) <= 0");
            t.ge(q, 1.5, b, 0.0, "psi(3/2) > 0");
            if a <= 0.0 && b > 0.0 {
                let xq = self.x_q(pt)?;
                t.ge(q, xq, xq, 1.0, "x_q > 1");
                t.le(q, xq, xq, 1.5, "x_q < 3/2");
            }
        }
        Ok(())
    }

    fn p2(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            for &x in &self.xs1 {
                let p = self.psi(x, pt)?;
                t.ge(q, x, x * p[1], -2.0 * p[0], "x psi' + 2 psi >= 0");
            }
        }
        Ok(())
    }

    fn p3(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let mut lin = Vec::with_capacity(self.xs1.len());
            let mut gam = Vec::with_capacity(self.xs1.len());
            for &x in &self.xs1 {
                let p = self.psi(x, pt)?[0];
                lin.push((x, x * p));
                let ln_abs = x.ln() + self.lg(x, pt)? + p.abs().ln();
                gam.push((x, SignedLog { sign: p.signum() * (p != 0.0) as u8 as f64, ln_abs }));
            }
            t.nondecreasing(q, &lin, "x psi(x)");
            for w in gam.windows(2) {
                let ((x0, a), (x1, b)) = (w[0], w[1]);
                let m = a.margin_le(b);
                t.record(q, x0, m, || format!("x Gamma'(x) nondecreasing between {x0:e} and {x1:e}: {a:?} {b:?}"));
            }
        }
        Ok(())
    }

    fn p4(&self, t: &mut Tally, skipped: &mut Vec<f64>) -> Result<()> {
        for &q in &self.grid.q_set {
            if q == 1.0 {
                skipped.push(q);
                continue;
            }
            let pt = self.pt(q)?;
            let mut pts = Vec::with_capacity(self.xs.len());
            for &x in &self.xs {
                let d = self.psi(x, pt)?[1];
                pts.push((x, if q < 1.0 { x * d } else { x * x * d }));
            }
            if q < 1.0 {
                t.nonincreasing(q, &pts, "x psi'(x)");
            } else {
                t.nondecreasing(q, &pts, "x^2 psi'(x)");
            }
        }
        Ok(())
    }

    fn ratio_sides(&self, q: f64, pt: QPoint, t: &mut Tally, g: bool, phi_left: bool, phi_right: bool) -> Result<()> {
        let xq = self.x_q(pt)?;
        let (left, right) = self.sides(xq, t);
        for (side, phi) in [(left, phi_left), (right, phi_right)] {
            let mut gs = Vec::with_capacity(side.len());
            let mut phis = Vec::with_capacity(side.len());
            for &x in &side {
                let p = self.psi(x, pt)?;
                gs.push((x, p[1] / p[0]));
                phis.push((x, x * p[1] / p[0]));
            }
            if g {
                t.nonincreasing(q, &gs, "psi'/psi");
            }
            if phi {
                t.nonincreasing(q, &phis, "x psi'/psi");
            }
        }
        Ok(())
    }

    fn p5(&self, t: &mut Tally, skipped: &mut Vec<f64>) -> Result<()> {
        for &q in &self.grid.q_set {
            if q > 1.0 {
                skipped.push(q);
                continue;
            }
            self.ratio_sides(q, self.pt(q)?, t, true, true, true)?;
        }
        Ok(())
    }

    fn p6(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            for &x in &self.xs {
                let p = self.psi(x, pt)?;
                t.ge(q, x, p[3] * p[1], p[2] * p[2], "psi''' psi' > psi''^2");
            }
        }
        Ok(())
    }

    /// `psi_q(x)` for every grid q, ascending in q.
    fn q_column(&self, x: f64, qs: &[f64]) -> Result<Vec<(f64, Psi)>> {
        qs.iter().map(|&q| Ok((q, self.psi(x, self.pt(q)?)?))).collect()
    }

    fn p7(&self, t: &mut Tally) -> Result<()> {
        let qs = &self.grid.q_set;
        let sub: Vec<f64> = qs.iter().copied().filter(|&q| q < 1.0).collect();
        for &x in &self.xs {
            let col = self.q_column(x, qs)?;
            let one = self.q_column(1.0, qs)?;
            let d1: Vec<(f64, f64)> = col.iter().filter(|(q, _)| sub.contains(q)).map(|(q, p)| (*q, p[1])).collect();
            t.nondecreasing_in_q(x, &d1, "q -> psi'_q(x) on (0,1)");
            let diff: Vec<(f64, f64)> = col.iter().zip(&one).map(|((q, p), (_, o))| (*q, p[0] - o[0])).collect();
            if x <= 1.0 {
                t.nonincreasing_in_q(x, &diff, "q -> psi_q(x) - psi_q(1)");
            }
            if x >= 1.0 {
                t.nondecreasing_in_q(x, &diff, "q -> psi_q(x) - psi_q(1)");
            }
        }
        Ok(())
    }

    fn p8(&self, t: &mut Tally) -> Result<()> {
        let qs = &self.grid.q_set;
        for &x in &self.xs {
            let col = self.q_column(x, qs)?;
            let pick = |k: usize, keep: &dyn Fn(f64) -> bool| -> Vec<(f64, f64)> {
                col.iter().filter(|(q, _)| keep(*q)).map(|(q, p)| (*q, p[k])).collect()
            };
            t.nonincreasing_in_q(x, &pick(2, &|q| q < 1.0), "q -> psi''_q(x) on (0,1)");
            t.nondecreasing_in_q(x, &pick(2, &|q| q >= 1.0), "q -> psi''_q(x) on [1,inf)");
            t.nondecreasing_in_q(x, &pick(1, &|_| true), "q -> psi'_q(x)");
            if x <= 1.0 {
                t.nonincreasing_in_q(x, &pick(0, &|_| true), "q -> psi_q(x), x <= 1");
            }
            if x >= 2.0 {
                t.nondecreasing_in_q(x, &pick(0, &|_| true), "q -> psi_q(x), x >= 2");
            }
        }
        Ok(())
    }

    fn p9(&self, t: &mut Tally) -> Result<()> {
        let qs = &self.grid.q_set;
        for &x in self.xs.iter().filter(|&&x| x >= 2.0) {
            let col = self.q_column(x, qs)?;
            let s: Vec<(f64, f64)> = col.iter().map(|(q, p)| (*q, x * p[1] + 2.0 * p[0])).collect();
            t.nondecreasing_in_q(x, &s, "q -> x psi' + 2 psi");
            let c = x * classical_psi(x, DerivOrder::TRIGAMMA)? + 2.0 * classical_psi(x, DerivOrder::PSI)?;
            for &(q, v) in s.iter().filter(|(q, _)| *q >= 1.0) {
                t.ge(q, x, v, c, "x psi_q' + 2 psi_q >= classical");
            }
        }
        Ok(())
    }

    fn p10(&self, t: &mut Tally) -> Result<()> {
        let q0 = self.constants.q0;
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let phi_right = q <= 1.0 || q >= q0;
            self.ratio_sides(q, pt, t, q >= 1.0, true, phi_right)?;
        }
        Ok(())
    }

    fn p11(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let xq = self.x_q(pt)?;
            let (left, right) = self.sides(xq, t);
            for side in [left, right] {
                let mut h = Vec::with_capacity(side.len());
                for &x in &side {
                    h.push((x, self.psi(x, pt)?[0].abs().ln()));
                }
                for w in h.windows(3) {
                    let ((a, ha), (b, hb), (c, hc)) = (w[0], w[1], w[2]);
                    let chord = ((c - b) * ha + (b - a) * hc) / (c - a);
                    t.ge(q, b, hb, chord, "log|psi| above its chord");
                }
            }
        }
        Ok(())
    }

    fn h_lin_check(&self, q: f64, pt: QPoint, a: f64, t: &mut Tally, what: &str) -> Result<()> {
        for &x in &self.xs1 {
            let p = self.psi(x, pt)?;
            t.ge(q, x, x * p[1], -a * p[0], what);
        }
        Ok(())
    }

    fn a_max(&self, pt: QPoint) -> Result<f64> {
        let p = self.psi(1.0, pt)?;
        Ok(-p[1] / p[0])
    }

    fn p12(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let a_max = self.a_max(pt)?;
            t.ge(q, 1.0, a_max, 2.0, "-psi'(1)/psi(1) >= 2");
            for a in [0.0, 1.0, 2.0, a_max] {
                self.h_lin_check(q, pt, a, t, &format!("x psi' + a psi >= 0 at a={a}"))?;
            }
        }
        Ok(())
    }

    fn alphas(&self, x: f64) -> Vec<f64> {
        let (lo, hi) = (ALPHA_RANGE.0.ln(), ALPHA_RANGE.1.ln());
        (0..ALPHA_COUNT)
            .map(|i| (lo + (hi - lo) * i as f64 / (ALPHA_COUNT - 1) as f64).exp())
            .filter(|&a| {
                let y = x.powf(a);
                y >= self.grid.x_min && y <= self.grid.x_max
            })
            .collect()
    }

    fn alpha_xs(&self) -> Vec<f64> {
        self.xs.iter().copied().step_by(G_ALPHA_X_STRIDE).filter(|x| (x - 1.0).abs() > EQUALITY_EXCLUSION).collect()
    }

    fn ln_f_samples(&self, xs: &[f64], pt: QPoint) -> Result<Vec<(f64, f64)>> {
        xs.iter().map(|&x| Ok((x, self.ln_f(x, pt)?))).collect()
    }

    fn p13(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            if membership_j(pt, &self.cfg)?.member {
                for &x in &self.away_from_one(t) {
                    t.ge(q, x, std::f64::consts::LN_2 + self.ln_f(x, pt)?, 0.0, "2 f_q(x) > 1");
                }
                t.nonincreasing(q, &self.ln_f_samples(&self.up_to_one(), pt)?, "f_q on (0,1]");
                t.nondecreasing(q, &self.ln_f_samples(&self.xs1, pt)?, "f_q on [1,inf)");
                for x in self.alpha_xs() {
                    let g: Vec<(f64, f64)> = self.ln_g(x, pt)?;
                    t.nondecreasing(q, &g, &format!("alpha -> f_q(x^alpha) at x={x:e}"));
                }
            } else {
                let y = find_y_q(pt, &self.cfg)?.root;
                let fy = self.ln_f(y, pt)?;
                for &x in &self.xs {
                    t.ge(q, x, self.ln_f(x, pt)?, fy, "f_q(x) >= f_q(y_q)");
                }
                let piece = |lo: f64, hi: f64| -> Vec<f64> {
                    let mut v = vec![lo];
                    v.extend(self.xs.iter().copied().filter(|&x| x > lo && x < hi));
                    v.push(hi);
                    v
                };
                let (lo, hi) = (self.xs[0].min(1.0 / y), self.xs[self.xs.len() - 1].max(y));
                t.nonincreasing(q, &self.ln_f_samples(&piece(lo, 1.0 / y), pt)?, "f_q on (0,1/y_q]");
                t.nondecreasing(q, &self.ln_f_samples(&piece(1.0 / y, 1.0), pt)?, "f_q on [1/y_q,1]");
                t.nonincreasing(q, &self.ln_f_samples(&piece(1.0, y), pt)?, "f_q on [1,y_q]");
                t.nondecreasing(q, &self.ln_f_samples(&piece(y, hi), pt)?, "f_q on [y_q,inf)");
                for x in self.alpha_xs() {
                    let turn = y.ln() / x.ln().abs();
                    let g = self.ln_g(x, pt)?;
                    let at_turn = (turn, self.ln_f(x.powf(turn), pt)?);
                    let mut before: Vec<(f64, f64)> = g.iter().copied().filter(|(a, _)| *a < turn).collect();
                    let mut after = vec![at_turn];
                    after.extend(g.iter().copied().filter(|(a, _)| *a > turn));
                    before.push(at_turn);
                    t.nonincreasing(q, &before, &format!("alpha -> f_q(x^alpha) before turn at x={x:e}"));
                    t.nondecreasing(q, &after, &format!("alpha -> f_q(x^alpha) after turn at x={x:e}"));
                }
            }
        }
        Ok(())
    }

    fn ln_g(&self, x: f64, pt: QPoint) -> Result<Vec<(f64, f64)>> {
        self.alphas(x).into_iter().map(|a| Ok((a, self.ln_f(x.powf(a), pt)?))).collect()
    }

    fn p14(&self, t: &mut Tally) -> Result<()> {
        let below = self.up_to_one();
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let p = self.psi(1.0, pt)?;
            let mut ms = vec![1.0 / p[0], 0.0, 1.0, 2.0];
            if q >= 1.0 {
                ms.push(-(p[0] + p[1]) / (p[0] * p[0]));
            }
            let lgs: Vec<(f64, f64, f64)> = self
                .xs
                .iter()
                .chain(std::iter::once(&1.0))
                .map(|&x| Ok((x, self.lg(x, pt)?, self.lg(1.0 / x, pt)?)))
                .collect::<Result<_>>()?;
            for m in ms {
                let at = |xs: &[f64]| -> Vec<(f64, f64)> {
                    xs.iter()
                        .map(|&x| {
                            let &(_, a, b) = lgs.iter().find(|(y, _, _)| *y == x).expect("sampled");
                            (x, ln_power_mean(m, a, b))
                        })
                        .collect()
                };
                t.nonincreasing(q, &at(&below), &format!("power mean m={m} on (0,1]"));
                t.nondecreasing(q, &at(&self.xs1), &format!("power mean m={m} on [1,inf)"));
            }
        }
        Ok(())
    }

    fn u_sum(&self, x: f64, pt: QPoint) -> Result<(f64, f64, f64)> {
        let a = self.psi(x, pt)?[0];
        let b = self.psi(1.0 / x, pt)?[0];
        Ok((a + b, a, b))
    }

    fn p15(&self, t: &mut Tally, skipped: &mut Vec<f64>) -> Result<()> {
        for &q in &self.grid.q_set {
            if q == 1.0 {
                skipped.push(q);
                continue;
            }
            let pt = self.pt(q)?;
            let two_psi1 = 2.0 * self.psi(1.0, pt)?[0];
            let l = pt.ln_q();
            for &x in &self.away_from_one(t) {
                let (u, _, _) = self.u_sum(x, pt)?;
                let bound = if q < 1.0 { two_psi1 } else { (x - 1.0) * (x - 1.0) / x * l + two_psi1 };
                t.le(q, x, u, bound, "psi(x) + psi(1/x) below bound");
            }
        }
        Ok(())
    }

    fn p16(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            for &x in &self.xs {
                let (d1, d2) = step_differences(x, pt);
                let a = self.psi(x, pt)?;
                let b = self.psi(x + 1.0, pt)?;
                t.le(q, x, b[3], d2, "psi'''(x+1) < step of psi''");
                t.le(q, x, d2, a[3], "step of psi'' < psi'''(x)");
                t.le(q, x, a[2], d1, "psi''(x) < step of psi'");
                t.le(q, x, d1, b[2], "step of psi' < psi''(x+1)");
            }
        }
        Ok(())
    }

    fn p17(&self, t: &mut Tally) -> Result<()> {
        let mut above_one = Vec::new();
        for &q in &self.grid.q_set {
            let u = u_of_q(self.pt(q)?, &self.cfg)?;
            if self.below_p0(q) {
                t.le(q, 1.0, u, 0.0, "u(q) < 0 below p0");
            } else {
                t.ge(q, 1.0, u, 0.0, "u(q) >= 0 from p0 on");
            }
            if q > 1.0 {
                above_one.push((q, u));
            }
        }
        t.nondecreasing_in_q(1.0, &above_one, "q -> u(q) on (1,inf)");
        Ok(())
    }

    fn p18(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let l = pt.ln_q();
            for &x in &self.xs {
                let p = self.psi(x, pt)?;
                t.ge(q, x, x * p[3], -2.0 * p[2], "2 psi'' + x psi''' >= 0");
                let s = p[1] + x * p[2];
                if q >= 1.0 {
                    let c = classical_psi(x, DerivOrder::TRIGAMMA)? + x * classical_psi(x, DerivOrder::TETRAGAMMA)?;
                    t.le(q, x, s, l, "psi' + x psi'' <= log q");
                    t.ge(q, x, s, c, "psi' + x psi'' >= classical");
                } else {
                    t.le(q, x, s, 0.0, "psi' + x psi'' <= 0");
                }
            }
            let (xs, increasing) = if self.below_p0(q) { (self.up_to_one(), false) } else { (self.xs1.clone(), true) };
            let mut pts = Vec::with_capacity(xs.len());
            for &x in &xs {
                pts.push((x, x * self.psi(x, pt)?[1]));
            }
            if increasing {
                t.nondecreasing(q, &pts, "x psi'(x) on [1,inf)");
            } else {
                t.nonincreasing(q, &pts, "x psi'(x) on (0,1]");
            }
        }
        Ok(())
    }

    fn p19(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let two_psi1 = 2.0 * self.psi(1.0, pt)?[0];
            for &x in &self.xs {
                let (u, _, _) = self.u_sum(x, pt)?;
                if self.below_p0(q) {
                    t.le(q, x, u, two_psi1, "psi(x) + psi(1/x) <= 2 psi(1)");
                } else {
                    t.ge(q, x, u, two_psi1, "psi(x) + psi(1/x) >= 2 psi(1)");
                }
            }
        }
        Ok(())
    }

    fn p20(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let p1 = self.psi(1.0, pt)?[0];
            for &x in &self.xs {
                let (_, a, b) = self.u_sum(x, pt)?;
                t.le(q, x, a * b, p1 * p1, "psi(x) psi(1/x) <= psi(1)^2");
            }
        }
        Ok(())
    }

    fn p21(&self, t: &mut Tally) -> Result<()> {
        let r = self.grid.exclusion_radius;
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let p1 = self.psi(1.0, pt)?[0];
            let window = if self.below_p0(q) {
                None
            } else {
                let xq = self.x_q(pt)?;
                let z = find_z_q(pt, &self.cfg)?.root;
                Some((xq, z))
            };
            for &x in &self.away_from_one(t) {
                if let Some((xq, z)) = window {
                    if [xq, 1.0 / xq, z, 1.0 / z].iter().any(|c| (x - c).abs() <= r) {
                        t.excluded += 1;
                        continue;
                    }
                }
                let (u, a, b) = self.u_sum(x, pt)?;
                if u.abs() < POLE_THRESHOLD {
                    t.excluded += 1;
                    continue;
                }
                let two_h = 2.0 * a * b / u;
                match window {
                    Some((_, z)) if x < 1.0 / z || x > z => t.le(q, x, two_h, p1, "2H <= psi(1) outside [1/z_q, z_q]"),
                    _ => t.ge(q, x, two_h, p1, "2H > psi(1)"),
                }
            }
        }
        Ok(())
    }

    fn p22(&self, t: &mut Tally) -> Result<()> {
        let near = |q: f64| (q - 1.0).abs() > self.cfg.near_one_delta;
        let mut sub: Vec<f64> =
            self.grid.q_set.iter().copied().filter(|&q| (0.5..1.0).contains(&q) && near(q)).collect();
        sub.extend(SUB_LADDER);
        sub.sort_by(f64::total_cmp);
        sub.dedup();
        let mut sup: Vec<f64> =
            self.grid.q_set.iter().copied().filter(|&q| q > 1.0 && q <= 1.5 && near(q)).collect();
        sup.extend(SUPER_LADDER);
        sup.sort_by(|a, b| b.total_cmp(a));
        sup.dedup();
        let mut classical = [[0.0; 4]; CONVERGENCE_XS.len()];
        for (row, &x) in classical.iter_mut().zip(&CONVERGENCE_XS) {
            for m in DerivOrder::all() {
                row[m.index()] = classical_psi(x, m)?;
            }
        }
        for ladder in [sub, sup] {
            let mut errs: Vec<(f64, Psi)> = Vec::with_capacity(ladder.len());
            for &q in &ladder {
                let pt = self.pt(q)?;
                let mut worst = [0.0f64; 4];
                for (row, &x) in classical.iter().zip(&CONVERGENCE_XS) {
                    let p = self.psi(x, pt)?;
                    for m in 0..4 {
                        worst[m] = worst[m].max((p[m] - row[m]).abs());
                    }
                }
                errs.push((q, worst));
            }
            for w in errs.windows(2) {
                let ((qa, ea), (qb, eb)) = (w[0], w[1]);
                for m in 0..4 {
                    t.le(qa, m as f64, eb[m], ea[m], &format!("order {m} distance shrinks from q={qa} to q={qb}"));
                }
            }
        }
        Ok(())
    }

    fn p23(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            let l = pt.ln_q();
            for &x in &self.xs {
                let p = self.psi(x, pt)?;
                t.ge(q, x, p[1] * p[1] - l * p[1], -p[2], "psi'' + psi'^2 - log(q) psi' > 0");
            }
        }
        Ok(())
    }

    fn p24(&self, t: &mut Tally) -> Result<()> {
        for &q in &self.grid.q_set {
            let pt = self.pt(q)?;
            for &x in &self.xs {
                let (lo, hi) = shifted_log_bounds(x, pt);
                let p = self.psi(x + 1.0, pt)?;
                t.le(q, x, lo, p[0], "log((q^(x+1/2)-1)/(q-1)) < psi(x+1)");
                t.le(q, x, p[1], hi, "psi'(x+1) <= -log(q) q^(x+1/2)/(1-q^(x+1/2))");
            }
        }
        Ok(())
    }

    /// Expected violations for `id`, empty for properties without controls.
    pub fn controls(&self, id: PropertyId) -> Vec<ControlReport> {
        match id.0 {
            10 => vec![self.control_phi()],
            12 => vec![self.control_a(true), self.control_a(false)],
            _ => Vec::new(),
        }
    }

    fn control_phi(&self) -> ControlReport {
        let mut qs = vec![1.6];
        qs.extend(self.grid.q_set.iter().copied().filter(|&q| q > 1.0 && q < self.constants.q0));
        qs.sort_by(f64::total_cmp);
        qs.dedup();
        let mut t = Tally::default();
        let res = qs.iter().try_for_each(|&q| -> Result<()> {
            let pt = self.pt(q)?;
            let xq = self.x_q(pt)?;
            let (_, right) = self.sides(xq, &mut t);
            let mut phis = Vec::with_capacity(right.len());
            for &x in &right {
                let p = self.psi(x, pt)?;
                phis.push((x, x * p[1] / p[0]));
            }
            t.nonincreasing(q, &phis, "x psi'/psi past x_q");
            Ok(())
        });
        control_report("x psi'/psi past x_q for 1 < q < q0", PropertyId(10), qs, t, res)
    }

    fn control_a(&self, above: bool) -> ControlReport {
        let qs: Vec<f64> =
            self.grid.q_set.iter().copied().filter(|&q| above || (q < 1.0 && self.pt(q).is_ok_and(|p| p.branch() == Branch::SubOne))).collect();
        let mut t = Tally::default();
        let res = qs.iter().try_for_each(|&q| -> Result<()> {
            let pt = self.pt(q)?;
            let a = if above { self.a_max(pt)? + 0.1 } else { -0.1 };
            self.h_lin_check(q, pt, a, &mut t, &format!("x psi' + a psi >= 0 at a={a}"))
        });
        let name = if above { "x psi' + a psi at a = a_max + 0.1" } else { "x psi' + a psi at a = -0.1" };
        control_report(name, PropertyId(12), qs, t, res)
    }
}

fn control_report(name: &str, property: PropertyId, q_values: Vec<f64>, t: Tally, res: Result<()>) -> ControlReport {
    let status = if q_values.is_empty() {
        ControlStatus::NotApplicable
    } else if t.violated() {
        ControlStatus::Violated
    } else {
        ControlStatus::NotViolated
    };
    ControlReport {
        name: name.to_string(),
        property,
        status,
        q_values,
        worst_margin: t.worst_margin(),
        witness: t.worst,
        evaluations: t.evaluations,
        error: res.err().map(|e| e.to_string()),
    }
}

/// `psi'(x+1) - psi'(x)` and `psi''(x+1) - psi''(x)` in closed form.
pub fn step_differences(x: f64, q: QPoint) -> (f64, f64) {
    let l = q.ln_q();
    if l == 0.0 {
        return (-1.0 / (x * x), 2.0 / (x * x * x));
    }
    let y = x * l;
    // u/(1-u)^2 is invariant under u -> 1/u and u(1+u)/(1-u)^3 flips sign,
    // so work with whichever of q^x, q^-x is below one.
    let (v, s) = if y < 0.0 { (y.exp(), 1.0) } else { ((-y).exp(), -1.0) };
    let d = -(-y.abs()).exp_m1();
    let l2 = l * l;
    (-l2 * v / (d * d), -s * l2 * l * v * (1.0 + v) / (d * d * d))
}

/// `log((q^s - 1)/(q - 1))` and `-log(q) q^s / (1 - q^s)` at `s = x + 1/2`.
pub fn shifted_log_bounds(x: f64, q: QPoint) -> (f64, f64) {
    let s = x + 0.5;
    let l = q.ln_q();
    if l == 0.0 {
        return (s.ln(), 1.0 / s);
    }
    if l < 0.0 {
        let num = -(s * l).exp_m1();
        ((num).ln() - (-l.exp_m1()).ln(), -l * (s * l).exp() / num)
    } else {
        let num = -(-s * l).exp_m1();
        (s * l + num.ln() - l.exp_m1().ln(), l / num)
    }
}

/// A real number stored as sign and log-magnitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SignedLog {
    pub sign: f64,
    pub ln_abs: f64,
}

impl SignedLog {
    /// Relative margin of `self <= other`, floored at scale 1 like
    /// [`super::report::relative_margin`].
    pub fn margin_le(self, other: SignedLog) -> f64 {
        let top = self.ln_abs.max(other.ln_abs).max(0.0);
        let v = |s: SignedLog| if s.sign == 0.0 { 0.0 } else { s.sign * (s.ln_abs - top).exp() };
        let m = v(other) - v(self);
        if m.is_nan() {
            super::report::NON_FINITE_MARGIN
        } else {
            m
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::psi_all;
    use approx::assert_relative_eq;

    #[test]
    fn property_ids_parse_and_print() {
        assert_eq!("P7".parse::<PropertyId>().unwrap().number(), 7);
        assert_eq!("p24".parse::<PropertyId>().unwrap().to_string(), "P24");
        assert!("P25".parse::<PropertyId>().is_err());
        assert!("P0".parse::<PropertyId>().is_err());
        assert!("X1".parse::<PropertyId>().is_err());
        assert_eq!(PropertyId::all().count(), 24);
    }

    #[test]
    fn step_differences_match_evaluator() {
        let cfg = EvalConfig::default();
        for &q in &[0.3, 0.9, 1.0, 2.0, 7.0] {
            let pt = cfg.point(q).unwrap();
            for &x in &[0.05, 0.7, 3.0] {
                let a = psi_all(x, pt, &cfg).unwrap();
                let b = psi_all(x + 1.0, pt, &cfg).unwrap();
                let (d1, d2) = step_differences(x, pt);
                assert_relative_eq!(d1, b[1].value - a[1].value, max_relative = 1e-9);
                assert_relative_eq!(d2, b[2].value - a[2].value, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn shifted_log_bounds_branches_agree_with_direct_formula() {
        let cfg = EvalConfig::default();
        for &q in &[0.4f64, 2.5] {
            let pt = cfg.point(q).unwrap();
            let x = 1.3;
            let s = x + 0.5;
            let (lo, hi) = shifted_log_bounds(x, pt);
            assert_relative_eq!(lo, ((q.powf(s) - 1.0) / (q - 1.0)).ln(), max_relative = 1e-13);
            assert_relative_eq!(hi, -q.ln() * q.powf(s) / (1.0 - q.powf(s)), max_relative = 1e-13);
        }
    }

    #[test]
    fn signed_log_margin_matches_plain_margin() {
        let enc = |v: f64| SignedLog { sign: v.signum() * (v != 0.0) as u8 as f64, ln_abs: v.abs().ln() };
        for &(a, b) in &[(0.5, 0.7), (3.0, 2.0), (-4.0, 1.0), (-4.0, -5.0), (0.0, 2.0), (1e10, 2e10)] {
            let want = super::super::report::relative_margin(a, b);
            assert_relative_eq!(enc(a).margin_le(enc(b)), want, max_relative = 1e-12);
        }
    }
}
