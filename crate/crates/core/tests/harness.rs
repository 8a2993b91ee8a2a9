use std::fs;

use mkmesh::harness::{
    execute_plan, run_convergence, run_pde_suite, run_respower_report, run_stability_report, ExperimentKind,
    ExperimentPlan, PdeConfig, PdeOutcome, PdeSystem, Quantity,
};
use mkmesh::respower::{improvement_metric, KmRule};
use mkmesh::solver::{AdCase, OperatorSource};
use mkmesh::weights::{OperatorKind, Scheme};

const PLAN: &str = r#"
kind = "pde"
spacings = [0.1]
seeds = [3]
k_m = { rule = "nyquist", value = 0.3 }

[[schemes]]
method = "labfm"
m = 4

[[schemes]]
method = "rbf-fd"
m = 2
neighbours = 20

[[pde]]
system = "advection-diffusion"
case = "diagonal"
re = 50.0
end_time = 0.05
advection = [1.0, 1.0]

[[pde]]
system = "poisson-periodic"
"#;

#[test]
fn plan_parses_with_defaults() {
    let plan = ExperimentPlan::parse(PLAN).unwrap();
    assert_eq!(plan.kind, ExperimentKind::Pde);
    assert_eq!(plan.schemes, vec![Scheme::labfm(4), Scheme::rbffd(2, 20)]);
    assert_eq!(plan.k_m, Some(KmRule::Nyquist(0.3)));
    assert_eq!(plan.pde.len(), 2);
    assert_eq!(plan.pde[0].case, AdCase::Diagonal);
    assert_eq!(plan.pde[0].modes, 3);
    assert_eq!(plan.pde[1].re, 1.0);
}

#[test]
fn plan_round_trips_and_hash_tracks_content() {
    let plan = ExperimentPlan::parse(PLAN).unwrap();
    let text = toml::to_string(&plan).unwrap();
    let back = ExperimentPlan::parse(&text).unwrap();
    assert_eq!(back, plan);
    assert_eq!(back.hash(), plan.hash());
    assert_eq!(plan.hash().len(), 64);
    let mut other = plan.clone();
    other.seeds = vec![4];
    assert_ne!(other.hash(), plan.hash());
}

#[test]
fn invalid_plans_rejected() {
    for bad in [
        PLAN.replace("spacings = [0.1]", "spacings = []"),
        PLAN.replace("spacings = [0.1]", "spacings = [-0.1]"),
        PLAN.replace("seeds = [3]", "seeds = []"),
        PLAN.replace("end_time = 0.05", ""),
        PLAN.replace("m = 4", "m = 11"),
        PLAN.replace("kind = \"pde\"", "kind = \"sideways\""),
    ] {
        assert!(ExperimentPlan::parse(&bad).is_err(), "accepted:\n{bad}");
    }
}

#[test]
fn convergence_sweep_records_ratios_and_slopes() {
    let plan = ExperimentPlan::new(
        ExperimentKind::Convergence,
        vec![Scheme::labfm(2)],
        vec![0.05, 0.025, 0.0125],
    );
    let r = run_convergence(&plan).unwrap();
    assert_eq!(r.cells.len(), 6);
    for c in &r.cells {
        assert!(c.failure.is_none());
        let ratio = c.r().unwrap();
        assert!((ratio - c.l2_mk / c.l2_sk1).abs() < 1e-15);
    }
    let fit = r
        .slope(Scheme::labfm(2), Quantity::Gradient, OperatorSource::SkPrimary)
        .unwrap();
    assert_eq!(fit.points, 3);
    assert!(fit.slope > 1.0, "{}", fit.slope);
    let mut csv = Vec::new();
    r.write_cells(&mut csv).unwrap();
    let text = String::from_utf8(csv).unwrap();
    assert!(text.starts_with("scheme,quantity,s,seed,n,l2_sk1,l2_sk2,l2_mk,R,failure\n"));
    assert_eq!(text.lines().count(), 7);
}

#[test]
fn failed_cells_are_recorded() {
    let plan = ExperimentPlan::new(ExperimentKind::Convergence, vec![Scheme::labfm(2)], vec![0.1, 0.9]);
    let r = run_convergence(&plan).unwrap();
    let failed: Vec<_> = r.cells.iter().filter(|c| c.failure.is_some()).collect();
    assert!(!failed.is_empty());
    assert!(failed.iter().all(|c| c.spacing == 0.9 && c.r().is_none()));
    assert!(r.slopes.is_empty());
}

#[test]
fn identical_curves_have_zero_improvement() {
    let plan = ExperimentPlan::new(ExperimentKind::Respower, vec![Scheme::labfm(4)], vec![0.1]);
    let r = run_respower_report(&plan).unwrap();
    assert_eq!(r.curves.len(), 12);
    assert_eq!(r.improvements.len(), 6);
    let c = &r.curves[0].curve;
    let eps = improvement_metric(c, c).unwrap();
    assert!(eps.iter().flatten().all(|e| *e == 0.0));
    let g = r.improvement(Scheme::labfm(4), OperatorKind::Ddx, 1.0).unwrap();
    assert!(g.peak_below(0.5).unwrap() > 0.0);
}

#[test]
fn stability_report_on_small_set() {
    let mut plan = ExperimentPlan::new(ExperimentKind::Stability, vec![Scheme::labfm(4)], vec![0.1]);
    plan.seeds = vec![2];
    let r = run_stability_report(&plan).unwrap();
    assert_eq!(r.records.len(), 4);
    for rec in &r.records {
        assert_eq!(rec.eigenvalues.len(), 100);
        if rec.operator == OperatorKind::Laplacian {
            assert!(rec.max_real <= 1e-8 * rec.radius);
        }
    }
    assert!(r
        .find(Scheme::labfm(4), OperatorKind::Ddx, OperatorSource::Mk)
        .is_some());
}

#[test]
fn pde_suite_runs_every_cell() {
    let plan = ExperimentPlan::parse(PLAN).unwrap();
    let report = run_pde_suite(&plan).unwrap();
    assert_eq!(report.records.len(), 4);
    for rec in &report.records {
        match (&rec.sk, rec.config.system) {
            (PdeOutcome::Transient(ts), PdeSystem::AdvectionDiffusion) => {
                assert!(ts.diverged_at.is_none());
                assert_eq!(ts.times.len(), ts.l2.len());
                assert!((ts.times.last().unwrap() - 0.05).abs() < 1e-12);
            }
            (PdeOutcome::Steady { residual, .. }, PdeSystem::PoissonPeriodic) => assert!(*residual <= 1e-10),
            (o, s) => panic!("unexpected outcome {o:?} for {s:?}"),
        }
    }
    let mut csv = Vec::new();
    report.records[0].write_series(&mut csv).unwrap();
    assert!(String::from_utf8(csv).unwrap().starts_with("time,l2_sk,l2_mk,R\n"));
}

#[test]
fn failures_are_recorded_not_fatal() {
    let mut plan = ExperimentPlan::new(ExperimentKind::Pde, vec![Scheme::labfm(4)], vec![0.9, 0.1]);
    let mut c = PdeConfig::new(PdeSystem::Burgers);
    c.re = 10.0;
    c.end_time = 0.01;
    plan.pde = vec![c];
    let report = run_pde_suite(&plan).unwrap();
    assert_eq!(report.records.len(), 2);
    assert!(matches!(report.records[0].sk, PdeOutcome::Failed(_)));
    assert!(report.records[0].sk.final_l2().is_none());
    assert!(report.records[1].sk.final_l2().unwrap() < 1e-2);
    let mut csv = Vec::new();
    report.write_summary(&mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 3);
}

#[test]
fn execution_is_reproducible_with_manifest() {
    let plan = ExperimentPlan::parse(PLAN).unwrap();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ma = execute_plan(&plan, a.path()).unwrap();
    let mb = execute_plan(&plan, b.path()).unwrap();
    assert_eq!(ma, mb);
    assert_eq!(ma.config_hash, plan.hash());
    // series and summary for every record, two field snapshots each
    assert_eq!(ma.artifacts.len(), 4 * 3 + 1);
    for f in &ma.artifacts {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{}", f.display());
    }
    let manifest = fs::read_to_string(a.path().join("manifest.csv")).unwrap();
    assert_eq!(manifest.lines().count(), ma.artifacts.len() + 1);
    assert!(manifest.lines().skip(1).all(|l| l.ends_with(&plan.hash())));
    let field = ma
        .artifacts
        .iter()
        .find(|p| p.to_string_lossy().starts_with("field_"))
        .unwrap();
    assert!(fs::read_to_string(a.path().join(field))
        .unwrap()
        .starts_with("x,y,value\n"));
}
