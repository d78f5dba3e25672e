use qgamma_core::verify::{ControlStatus, Verifier};
use qgamma_core::{find_y_q, membership_j, verify_property, Constants, EvalConfig, GridSpec, PropertyId, Verdict};

fn cfg() -> EvalConfig {
    EvalConfig::default()
}

fn prop(n: u8) -> PropertyId {
    PropertyId::new(n).unwrap()
}

/// The standard grid without the two q values that carry known
/// counterexamples.
fn clean_grid(c: &Constants) -> GridSpec {
    let std = GridSpec::standard(c);
    let qs = std.q_set.iter().copied().filter(|&q| q != 3.0 && q != 10.0).collect();
    GridSpec::new(qs, std.x_min, std.x_max, std.x_count, std.exclusion_radius).unwrap()
}

#[test]
fn clean_grid_passes_every_property_and_controls_fire() {
    let c = Constants::compute(&cfg()).unwrap();
    let grid = clean_grid(&c);
    let ids: Vec<PropertyId> = PropertyId::all().collect();
    let out = Verifier::with_constants(&grid, &cfg(), c).run(&ids, 1).unwrap();
    for r in &out.properties {
        assert_eq!(r.verdict, Verdict::Pass, "{}: {:?} {:?}", r.property, r.witness, r.error);
        assert!(r.evaluations > 0, "{} evaluated nothing", r.property);
    }
    assert_eq!(out.controls.len(), 3);
    for ctl in &out.controls {
        assert_eq!(ctl.status, ControlStatus::Violated, "{}", ctl.name);
    }
    assert!(out.all_passed());
}

#[test]
fn standard_grid_fails_exactly_at_the_known_points() {
    let c = Constants::compute(&cfg()).unwrap();
    let grid = GridSpec::standard(&c);
    let ids: Vec<PropertyId> = PropertyId::all().collect();
    let out = Verifier::with_constants(&grid, &cfg(), c).run(&ids, 1).unwrap();
    let failed: Vec<(u8, f64)> = out
        .properties
        .iter()
        .filter(|r| r.verdict == Verdict::Fail)
        .map(|r| (r.property.number(), r.witness.as_ref().unwrap().q))
        .collect();
    assert_eq!(failed, vec![(13, 10.0), (19, 3.0), (21, 3.0)]);
    assert!(out.properties.iter().all(|r| r.error.is_none()));
}

// For e < q < p0 the sum psi(x) + psi(1/x) climbs above 2 psi(1) away from
// x = 1, so the upper bound claimed below p0 does not hold there.
#[test]
fn pinned_counterexample_at_q_three() {
    let grid = GridSpec::new(vec![3.0], 1e-3, 1e3, 400, 1e-4).unwrap();
    let r = verify_property(prop(19), &grid, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    let w = r.witness.unwrap();
    assert_eq!(w.q, 3.0);
    assert!(w.margin < -1e-6, "margin {}", w.margin);
}

// f_10 turns where theta1(x) = theta1(1/x), not at the turning point of
// theta1, so the minimum over x falls below f_10(y_10).
#[test]
fn pinned_counterexample_at_q_ten() {
    let p = cfg().point(10.0).unwrap();
    assert!(!membership_j(p, &cfg()).unwrap().member);
    let y = find_y_q(p, &cfg()).unwrap().root;
    assert!((y - 1.0071009612).abs() < 1e-8, "y_10 = {y}");
    let f = |x: f64| qgamma_core::eval_statistic(qgamma_core::StatId::FQ, x, p, None, &cfg()).unwrap().value;
    let x_star = 1.0973668699;
    assert!((f(x_star) - 0.4999214065).abs() < 1e-9);
    assert!((f(y) - 0.4999990894).abs() < 1e-9);
    assert!(f(x_star) < f(y));

    let grid = GridSpec::new(vec![10.0], 1e-3, 1e3, 400, 1e-4).unwrap();
    let r = verify_property(prop(13), &grid, &cfg()).unwrap();
    assert_eq!(r.verdict, Verdict::Fail);
    assert_eq!(r.witness.unwrap().q, 10.0);
}

#[test]
fn parallel_run_is_identical() {
    let c = Constants::compute(&cfg()).unwrap();
    let grid = GridSpec::standard(&c);
    let ids: Vec<PropertyId> = PropertyId::all().collect();
    let v = Verifier::with_constants(&grid, &cfg(), c);
    let one = v.run(&ids, 1).unwrap();
    let four = v.run(&ids, 4).unwrap();
    assert_eq!(one, four);
    assert!(v.run(&ids, 0).is_err());
}

#[test]
fn unit_q_skips_what_is_undefined() {
    let grid = GridSpec::new(vec![1.0], 1e-3, 1e3, 100, 1e-4).unwrap();
    let out = qgamma_core::verify_all(&grid, &cfg(), 1).unwrap();
    assert!(out.properties.iter().all(|r| r.verdict == Verdict::Pass));
    let below = out.controls.iter().find(|c| c.name.contains("-0.1")).unwrap();
    assert_eq!(below.status, ControlStatus::NotApplicable);
}
