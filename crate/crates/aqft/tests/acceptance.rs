//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are always printed; exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use aqft::cli::config::{CatalogConfig, Preset};
use aqft::cli::{execute, run, Command, Outcome, RunConfig};

/// `h = a / GRID_N` for every quadrature number.
const GRID_N: usize = 200;
const ORACLE_GRIDS: [i64; 3] = [50, 100, 200];
const MAX_LEN: usize = 3;
const GREEN_BUMPS: usize = 10;
const GEOMETRY_BUDGET: Duration = Duration::from_secs(30);
const LOCALIZATION_BUDGET: Duration = Duration::from_secs(60);
const SUPPORT_BUDGET: Duration = Duration::from_secs(60);

struct Verdict {
    ok: bool,
    detail: String,
}

fn config() -> RunConfig {
    let mut c = RunConfig::default();
    c.catalog = CatalogConfig::Preset(Preset::Strip12);
    c.tolerances.tol_quad = None;
    c.tolerances.grid_n = GRID_N;
    c.tolerances.oracle_grids = ORACLE_GRIDS.to_vec();
    c.truncation.max_len = MAX_LEN;
    c.experiments.bumps = GREEN_BUMPS;
    c
}

fn timed(cmd: Command, cfg: &RunConfig) -> (Outcome, Duration) {
    let t = Instant::now();
    let out = execute(cmd, cfg).unwrap_or_else(|e| panic!("{cmd}: {}", e.to_json()));
    (out, t.elapsed())
}

/// All checks whose name satisfies `keep` pass, and at least `min` matched.
fn checks(out: &Outcome, min: usize, keep: impl Fn(&str) -> bool) -> Verdict {
    let picked: Vec<_> = out.report.checks.iter().filter(|c| keep(&c.name)).collect();
    let failed: Vec<_> = picked.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
    let detail = if picked.len() < min {
        format!("only {} of {min} checks present", picked.len())
    } else if failed.is_empty() {
        format!("{} checks", picked.len())
    } else {
        format!("failed: {}", failed.join("; "))
    };
    Verdict { ok: picked.len() >= min && failed.is_empty(), detail }
}

fn within(v: Verdict, took: Duration, budget: Duration) -> Verdict {
    let fast = took < budget;
    Verdict { ok: v.ok && fast, detail: format!("{}, {:.1}s of {}s", v.detail, took.as_secs_f64(), budget.as_secs()) }
}

fn both(a: Verdict, b: Verdict) -> Verdict {
    Verdict { ok: a.ok && b.ok, detail: format!("{}; {}", a.detail, b.detail) }
}

fn main() {
    let cfg = config();
    let mut verdicts: Vec<(u32, &str, Verdict)> = vec![];

    let (cat, _) = timed(Command::CatalogBuild, &cfg);
    let twelve = cat.report.checks.iter().any(|c| c.witness.as_deref() == Some("12 regions"));
    let (geo, took) = timed(Command::GeometryCheck, &cfg);
    let grids = ORACLE_GRIDS.iter().all(|n| geo.report.checks.iter().any(|c| c.name.ends_with(&format!("(n = {n})"))));
    let v = checks(&geo, 7 * ORACLE_GRIDS.len() + 2, |_| true);
    let v = Verdict { ok: v.ok && twelve && grids, detail: v.detail };
    verdicts.push((1, "geometry oracle equivalence", within(v, took, GEOMETRY_BUDGET)));

    let (ax, took) = timed(Command::Axioms, &cfg);
    let exhaustive = checks(&ax, 16, |n| n.contains("bijection on natural transformations"));
    let v = both(checks(&ax, 22, |n| !n.contains('⇒')), exhaustive);
    verdicts.push((2, "localization model", within(v, took, LOCALIZATION_BUDGET)));

    let (ext, _) = timed(Command::Extend, &cfg);
    verdicts.push((3, "F-locality", checks(&ext, 3, |n| n.contains("unit components are bijective"))));
    verdicts.push((4, "extension model soundness", checks(&ext, 7, |n| n.contains(&format!("brute-force quotient up to length {MAX_LEN}")))));

    let (ch, _) = timed(Command::Characterize, &cfg);
    let rows: String = ch.report.checks.iter().filter_map(|c| c.witness.clone()).collect::<Vec<_>>().join(", ");
    let controls = rows.contains("additive=true λ-iso=true") && rows.contains("additive=false λ-iso=false");
    let v = checks(&ch, 2 * cfg.experiments.theories.len(), |_| true);
    verdicts.push((5, "characterization", Verdict { ok: v.ok && controls, detail: v.detail }));

    let (iq, _) = timed(Command::IqftRoundtrip, &cfg);
    let v = both(
        checks(&iq, 10, |n| n.contains("QS") || n.contains("SQ")),
        checks(&iq, 4, |n| n.starts_with("Klein-Gordon pair")),
    );
    verdicts.push((6, "IQFT equivalence", v));

    let (green, _) = timed(Command::KgGreen, &cfg);
    let axioms = |n: &str| n.starts_with("Dirichlet:") || n.starts_with("free:");
    verdicts.push((7, "Green's operator axioms", checks(&green, 9, axioms)));
    verdicts.push((8, "interior uniqueness", checks(&green, 2, |n| n.starts_with("Dirichlet and free pairs"))));

    let (ideal, _) = timed(Command::KgIdeal, &cfg);
    let v = both(checks(&green, 2, |n| n.starts_with("τ") || n.starts_with("timelike τ")), checks(&ideal, 3, |n| n.starts_with("catalog: τ")));
    verdicts.push((9, "τ properties", v));

    let mut out_cfg = cfg.clone();
    out_cfg.out = std::env::temp_dir().join(format!("aqft-acceptance-{}", std::process::id()));
    let t = Instant::now();
    let sup = run(Command::KgSupport, &out_cfg).unwrap_or_else(|e| panic!("kg-support: {}", e.to_json()));
    let took = t.elapsed();
    let written = sup.report.artifacts.iter().all(|a| out_cfg.out.join(a).exists()) && out_cfg.out.join("kg-support.json").exists();
    let _ = std::fs::remove_dir_all(&out_cfg.out);
    let v = checks(&sup, 6, |_| true);
    let v = Verdict { ok: v.ok && written, detail: v.detail };
    verdicts.push((10, "non-surjectivity demonstration", within(v, took, SUPPORT_BUDGET)));

    let mut all = true;
    for (n, name, v) in &verdicts {
        all &= v.ok;
        println!("criterion {n:>2}: {}  {name} ({})", if v.ok { "pass" } else { "FAIL" }, v.detail);
    }
    if !all {
        std::process::exit(1);
    }
}
