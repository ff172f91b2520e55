use kplane_core::harness::{
    explore_conjecture, registry, run_check, CheckSpec, ConjectureTarget, ExploreSpec, Family, Params, RelationKind, Verdict,
};
use kplane_core::special::Exponent;
use kplane_core::{Error, Sequential};

fn sweep(n: usize, j: usize, k: usize) {
    let mut bad = Vec::new();
    for info in registry() {
        let spec = CheckSpec::new(info.id, (info.native)(n, j, k), 1);
        let r = match run_check(&spec, &Sequential) {
            Ok(r) => r,
            Err(e) => {
                bad.push(format!("{}: error {e}", info.id));
                continue;
            }
        };
        let ok = match info.kind {
            RelationKind::Equality => r.verdict == Verdict::PassEquality,
            RelationKind::Inequality => r.verdict.is_pass(),
        };
        if !ok {
            bad.push(format!("{}: {:?} gap {:+.4} margin {:.2}", info.id, r.verdict, r.relative_gap, r.margin_sigma));
        }
    }
    assert!(bad.is_empty(), "({n},{j},{k}): {bad:#?}");
}

#[test]
fn registry_passes_at_2_0_1() {
    sweep(2, 0, 1);
}

#[test]
fn registry_passes_at_3_0_1() {
    sweep(3, 0, 1);
}

#[test]
fn registry_passes_at_3_0_2() {
    sweep(3, 0, 2);
}

#[test]
fn registry_passes_at_3_1_2() {
    sweep(3, 1, 2);
}

#[test]
fn ids_are_unique_and_relations_named() {
    let ids: Vec<&str> = registry().iter().map(|c| c.id).collect();
    let mut sorted = ids.clone();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), ids.len());
    assert!(registry().iter().all(|c| !c.relation.is_empty() && c.params.contains(&"n")));
}

#[test]
fn user_errors_are_reported() {
    let e = run_check(&CheckSpec::new("no_such_check", Params::default(), 1), &Sequential).unwrap_err();
    assert!(matches!(e, Error::UnknownCheck(_)));

    let p = Params { star: Some(kplane_core::fields::StarKind::Ball { radius: 1.0 }), ..Params::default() };
    let e = run_check(&CheckSpec::new("rk_p1_equality", p, 1), &Sequential).unwrap_err();
    assert!(matches!(e, Error::Invalid(_)), "{e}");

    let p = Params { p: Some(Exponent::Infinite), ..Params::default() };
    let e = run_check(&CheckSpec::new("rk_weighted_bound", p, 1), &Sequential).unwrap_err();
    assert!(matches!(e, Error::Unsupported(_)), "{e}");

    let mut spec = CheckSpec::new("fubini_identity", Params::default(), 1);
    spec.budget.samples = 0;
    assert!(run_check(&spec, &Sequential).is_err());

    let p = Params { n: Some(3), k: Some(3), ..Params::default() };
    let e = run_check(&CheckSpec::new("rk_p1_equality", p, 1), &Sequential).unwrap_err();
    assert!(matches!(e, Error::Domain(_)), "{e}");
}

#[test]
fn weighted_bound_rejects_mu_below_the_threshold() {
    // μ > k − n/p is required.
    let p = Params { n: Some(3), k: Some(1), p: Some(Exponent::Finite(2.0)), mu: Some(-0.6), ..Params::default() };
    assert!(run_check(&CheckSpec::new("rk_weighted_bound", p, 1), &Sequential).is_err());
}

#[test]
fn verdicts_are_deterministic() {
    let mut spec = CheckSpec::new("rk_p1_equality", Params::default(), 11);
    spec.budget.samples = 2_000;
    let a = run_check(&spec, &Sequential).unwrap();
    let b = run_check(&spec, &Sequential).unwrap();
    assert_eq!(a, b);
    spec.seed = 12;
    let c = run_check(&spec, &Sequential).unwrap();
    assert_ne!(a.lhs.value, c.lhs.value);
}

#[test]
fn doubling_budget_shrinks_stderr() {
    let mut spec = CheckSpec::new("fubini_identity", Params::default(), 5);
    spec.budget.samples = 50_000;
    let a = run_check(&spec, &Sequential).unwrap();
    spec.budget.samples = 100_000;
    let b = run_check(&spec, &Sequential).unwrap();
    let ratio = a.lhs.stderr / b.lhs.stderr;
    assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.2, "{ratio}");
}

#[test]
fn weighted_bound_skips_non_integrable_members() {
    // With p = 1 the indicator member stays integrable while the weight is mild.
    let p = Params { n: Some(2), k: Some(1), p: Some(Exponent::Finite(1.5)), ..Params::default() };
    let mut spec = CheckSpec::new("rk_weighted_bound", p, 3);
    spec.budget.samples = 4_000;
    let r = run_check(&spec, &Sequential).unwrap();
    assert_eq!(r.members.len() + r.skipped, 5);
    assert!(r.verdict.is_pass(), "{:?}", r.verdict);
}

#[test]
fn star_explorer_ball_family_is_an_identity() {
    let mut spec = ExploreSpec::new(ConjectureTarget::StarSections, Family::Ball, 3, 2, 2, 9);
    spec.members = 4;
    spec.budget.samples = 2_000;
    let r = explore_conjecture(&spec, &Sequential).unwrap();
    assert_eq!(r.best_ratio, r.bound);
    assert!(!r.violation_found);
    assert_eq!(r.evaluated, 4);
}

#[test]
fn explorer_rejects_bad_specs() {
    let mut spec = ExploreSpec::new(ConjectureTarget::StarSections, Family::Extremizer, 3, 1, 2, 1);
    assert!(explore_conjecture(&spec, &Sequential).is_err());
    spec.family = Family::RandomSmooth;
    spec.members = 0;
    assert!(explore_conjecture(&spec, &Sequential).is_err());
    let spec = ExploreSpec::new(ConjectureTarget::JkLpLq, Family::Extremizer, 3, 2, 2, 1);
    assert!(explore_conjecture(&spec, &Sequential).is_err());
}

#[test]
fn small_star_search_reports_no_violation() {
    let mut spec = ExploreSpec::new(ConjectureTarget::StarSections, Family::RandomSmooth, 3, 1, 2, 4);
    spec.members = 5;
    spec.refine = 2;
    let r = explore_conjecture(&spec, &Sequential).unwrap();
    assert!(!r.violation_found, "{r:?}");
    assert!(r.best_ratio <= r.bound * 1.02, "{r:?}");
    assert!(r.best_params.is_some());
}
