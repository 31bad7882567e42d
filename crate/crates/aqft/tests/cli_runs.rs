use aqft::cli::config::{FixtureTheory, Preset};
use aqft::cli::{execute, run, Command, RunConfig, RunError, Status};
use proptest::prelude::*;

fn quick() -> RunConfig {
    let mut c = RunConfig::default();
    c.tolerances.grid_n = 50;
    c.experiments.bumps = 3;
    c
}

#[test]
fn identical_configs_give_identical_bytes() {
    let cfg = quick();
    for cmd in [Command::KgGreen, Command::Characterize, Command::CatalogBuild] {
        let a = execute(cmd, &cfg).unwrap();
        let b = execute(cmd, &cfg).unwrap();
        assert_eq!(a.report.to_json(), b.report.to_json(), "{cmd}");
        assert_eq!(a.artifacts, b.artifacts, "{cmd}");
    }
}

#[test]
fn seed_changes_the_green_report() {
    let a = execute(Command::KgGreen, &quick()).unwrap();
    let mut other = quick();
    other.experiments.seed = 8;
    let b = execute(Command::KgGreen, &other).unwrap();
    assert_ne!(a.report.config_hash, b.report.config_hash);
    assert_ne!(a.artifacts, b.artifacts);
}

#[test]
fn empty_seed_list_is_a_structured_error() {
    let cfg = RunConfig::from_json(r#"{"catalog": {"seeds": []}}"#).unwrap();
    let err = execute(Command::CatalogBuild, &cfg).unwrap_err();
    assert_eq!(err.kind(), "EmptyCatalog");
    assert!(err.to_json().contains(r#""error":"EmptyCatalog""#));
    assert!(matches!("nope".parse::<Command>(), Err(RunError::UnknownCommand(_))));
}

#[test]
fn boundary_generator_shows_the_matched_negative_pair() {
    let mut cfg = quick();
    cfg.experiments.theories = vec![FixtureTheory::BoundaryGenerator];
    let out = execute(Command::Characterize, &cfg).unwrap();
    assert!(out.report.passed());
    let w = out.report.checks[0].witness.as_deref().unwrap();
    assert!(w.contains("B0 additive=false λ-iso=false"), "{w}");
}

#[test]
fn too_tight_tolerance_fails_a_check() {
    let mut cfg = quick();
    cfg.tolerances.tol_quad = Some(1e-9);
    let out = execute(Command::KgGreen, &cfg).unwrap();
    assert!(!out.report.passed());
    let first = out.report.failures().next().unwrap();
    assert_eq!(first.status, Status::Fail);
    assert_eq!(first.tolerance, Some(1e-9));
    assert!(out.report.first_failure_json().unwrap().contains("CheckFailed"));
}

#[test]
fn run_writes_report_and_artifacts() {
    let mut cfg = quick();
    cfg.out = std::env::temp_dir().join(format!("aqft-cli-runs-{}", std::process::id()));
    let out = run(Command::KgSupport, &cfg).unwrap();
    let text = std::fs::read_to_string(cfg.out.join("kg-support.json")).unwrap();
    assert_eq!(text, out.report.to_json());
    for name in &out.report.artifacts {
        assert!(cfg.out.join(name).exists(), "{name}");
    }
    std::fs::remove_dir_all(&cfg.out).unwrap();
}

fn config() -> impl Strategy<Value = RunConfig> {
    (1e-12f64..1e-3, prop::option::of(1e-6f64..1.0), 10usize..400, 1usize..5, 1usize..4, any::<u64>(), 0.1f64..0.95, any::<bool>())
        .prop_map(|(lin, quad, n, len, mat, seed, fill, fp)| {
            let mut c = RunConfig::default();
            c.tolerances.tol_lin = lin;
            c.tolerances.tol_quad = quad;
            c.tolerances.grid_n = n;
            c.truncation.max_len = len;
            c.truncation.materialize_len = mat;
            c.experiments.seed = seed;
            c.experiments.fill = fill;
            c.experiments.kg_catalog = if fp { Preset::FreeProduct } else { Preset::F1 };
            c
        })
}

proptest! {
    #[test]
    fn configs_round_trip_losslessly(c in config()) {
        let back = RunConfig::from_json(&c.to_json()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.hash(), c.hash());
    }
}
