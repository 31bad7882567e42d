//! One function per subcommand.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::config::{preset_seeds, FixtureTheory, RunConfig};
use super::report::{CheckRecord, Report};
use super::{Command, Outcome, RunError};
use crate::algebra::StarAlgebra;
use crate::catalog::{Catalog, CheckLine, DEFAULT_BOUND};
use crate::extension::{
    characterize, ext_theory, functor_s, interior_objects, iqft_pair, materialize, roundtrip_qs, roundtrip_sq,
    unit_component, ExtError, ExtTheory, Normalizer,
};
use crate::fixtures;
use crate::geometry::oracle;
use crate::klein_gordon::checks::{
    green_residuals, image_doubling_defect, random_bumps, tau, timelike_tau_sequence, tol_quad, uniqueness_gaps,
    GreenResiduals,
};
use crate::klein_gordon::model::KgModel;
use crate::klein_gordon::support::demonstrate_nonsurjectivity;
use crate::klein_gordon::{GreenPair, KgError, TestFunction};
use crate::linalg::Matrix;
use crate::theory::{check_localization_requirement_c, IdealFunctor, PresentedTheory, Theory};

struct Run<'a> {
    cfg: &'a RunConfig,
    checks: Vec<CheckRecord>,
    artifacts: Vec<(String, Vec<u8>)>,
}

impl Run<'_> {
    fn line(&mut self, c: CheckLine) {
        self.checks.push(c.into());
    }

    fn lines(&mut self, cs: impl IntoIterator<Item = CheckLine>) {
        self.checks.extend(cs.into_iter().map(CheckRecord::from));
    }

    fn prefixed(&mut self, prefix: &str, cs: impl IntoIterator<Item = CheckLine>) {
        for c in cs {
            self.checks.push(CheckRecord::new(format!("{prefix}: {}", c.name), c.passed, c.witness, None));
        }
    }

    fn push(&mut self, c: CheckRecord) {
        self.checks.push(c);
    }

    fn artifact(&mut self, name: &str, bytes: Vec<u8>) {
        self.artifacts.push((name.to_string(), bytes));
    }

    fn tol_quad(&self, h: f64) -> f64 {
        self.cfg.tolerances.tol_quad.unwrap_or_else(|| tol_quad(h))
    }

    fn catalog(&self) -> Result<Arc<Catalog>, RunError> {
        Ok(Arc::new(Catalog::build(self.cfg.spacetime, &self.cfg.seeds()?, DEFAULT_BOUND)?))
    }
}

/// Runs `cmd` without touching the file system.
pub fn execute(cmd: Command, cfg: &RunConfig) -> Result<Outcome, RunError> {
    let mut run = Run { cfg, checks: vec![], artifacts: vec![] };
    match cmd {
        Command::GeometryCheck => geometry_check(&mut run)?,
        Command::CatalogBuild => catalog_build(&mut run)?,
        Command::Axioms => axioms(&mut run)?,
        Command::Extend => extend(&mut run)?,
        Command::Characterize => characterize_cmd(&mut run)?,
        Command::IqftRoundtrip => iqft_roundtrip(&mut run)?,
        Command::KgGreen => kg_green(&mut run)?,
        Command::KgIdeal => kg_ideal(&mut run)?,
        Command::KgSupport => kg_support(&mut run)?,
    }
    let report = Report {
        command: cmd.name().to_string(),
        config_hash: cfg.hash(),
        checks: run.checks,
        artifacts: run.artifacts.iter().map(|(n, _)| n.clone()).collect(),
    };
    Ok(Outcome { report, artifacts: run.artifacts })
}

fn geometry_check(run: &mut Run) -> Result<(), RunError> {
    let cat = run.catalog()?;
    let regions: Vec<_> = (0..cat.len()).map(|i| (cat.name(i).to_string(), cat.region(i).clone())).collect();
    for &n in &run.cfg.tolerances.oracle_grids {
        for c in oracle::compare(&regions, n) {
            let w = if c.passed() { format!("{} cells", c.cells) } else { c.failures.join("; ") };
            run.push(CheckRecord::new(c.name, c.failures.is_empty(), Some(w), None));
        }
    }
    for c in oracle::identities(&regions) {
        let w = (!c.passed()).then(|| c.failures.join("; "));
        run.push(CheckRecord::new(c.name, c.failures.is_empty(), w, None));
    }
    Ok(())
}

fn catalog_build(run: &mut Run) -> Result<(), RunError> {
    let cat = run.catalog()?;
    let doc = cat.to_doc();
    let back = Catalog::from_doc(&doc)?.to_doc();
    run.line(CheckLine::new("catalog document round-trips", back == doc, Some(format!("{} regions", cat.len()))));
    let json = serde_json::to_vec_pretty(&doc).expect("catalog serializes");
    run.artifact("catalog.json", json);
    Ok(())
}

/// `C^k` on the objects containing `anchor`, `C` elsewhere, unit maps in between.
fn step_theory(cat: &Arc<Catalog>, objects: &[usize], anchor: usize, k: usize) -> Result<Theory, RunError> {
    let big = |v: usize| cat.leq(anchor, v);
    let unit = |n: usize| Matrix::from_columns(n, &[StarAlgebra::diagonal(n).unit()]);
    Ok(Theory::from_fn(
        cat.clone(),
        objects.to_vec(),
        |v| if big(v) { StarAlgebra::diagonal(k) } else { StarAlgebra::complex() },
        |a, b| match (big(a), big(b)) {
            (false, true) => unit(k),
            (true, true) => Matrix::identity(k),
            _ => Matrix::identity(1),
        },
    )?)
}

fn axioms(run: &mut Run) -> Result<(), RunError> {
    let cat = run.catalog()?;
    run.lines(cat.check_adjunction_di());
    run.lines(cat.check_embedding_j());
    run.line(cat.check_localized_orthogonality());
    let objs = cat.localize().objects;
    let mut functors = vec![];
    for k in 1..=3 {
        functors.push((format!("C^{k}"), Theory::constant(cat.clone(), objs.clone(), StarAlgebra::diagonal(k))?));
    }
    if let Some(&anchor) = interior_objects(&cat).first() {
        functors.push((format!("C^2 over {}", cat.name(anchor)), step_theory(&cat, &objs, anchor, 2)?));
    }
    for (name, t) in &functors {
        let d = t.pullback_d()?;
        run.prefixed(&format!("{name} ∘ D"), [d.check_functoriality(), d.check_causality(), d.check_time_slice()]);
    }
    for (gn, g) in &functors {
        for (hn, h) in &functors {
            let c = check_localization_requirement_c(g, h)?;
            run.prefixed(&format!("{gn} ⇒ {hn}"), [c]);
        }
    }
    Ok(())
}

fn fixture_theory(k: usize) -> Result<Theory, RunError> {
    Ok(fixtures::f1_interior_theory(k)?)
}

/// `(label, interior theory, finite ext)` for the normal-form comparison.
/// Free products of noncommuting or higher leaves have no finite truncation.
fn extension_fixtures() -> Result<Vec<(String, Theory, bool)>, RunError> {
    let mut out = vec![];
    for k in 1..=4 {
        out.push((format!("A{k}"), fixture_theory(k)?, true));
    }
    let fp = fixtures::catalog(fixtures::free_product_seeds);
    let objs = interior_objects(&fp);
    for (name, alg) in [("C^2", StarAlgebra::diagonal(2)), ("C^3", StarAlgebra::diagonal(3)), ("T_2", StarAlgebra::upper_triangular())] {
        out.push((format!("free product of {name}"), Theory::constant(fp.clone(), objs.clone(), alg)?, false));
    }
    Ok(out)
}

fn extend(run: &mut Run) -> Result<(), RunError> {
    let max_len = run.cfg.truncation.max_len;
    let mat_len = run.cfg.truncation.materialize_len;
    for (label, a, finite) in extension_fixtures()? {
        let ext = ext_theory(&PresentedTheory::from_theory(&a))?;
        let mut bad = vec![];
        let mut dims = vec![];
        for l in 1..=max_len {
            for &v in &ext.theory.objects {
                let nf = Normalizer::new(&ext, &a, v).span_dim(l);
                let bf = ext.brute_force_quotient(v, l).dim();
                if nf != bf {
                    bad.push(format!("{} at length {l}: {nf} vs {bf}", a.name(v)));
                }
                if l == max_len {
                    dims.push(format!("{} {bf}", a.name(v)));
                }
            }
        }
        let w = if bad.is_empty() { dims.join(", ") } else { bad.join("; ") };
        run.push(CheckRecord::new(format!("{label}: normal-form span equals brute-force quotient up to length {max_len}"), bad.is_empty(), Some(w), None));
        if !finite {
            continue;
        }
        let (mat, truncs) = materialize(&ext, mat_len)?;
        let mut not_iso = vec![];
        for &u in &a.objects {
            if !unit_component(&ext, &a, &mat, &truncs, u)?.is_iso() {
                not_iso.push(a.name(u).to_string());
            }
        }
        let w = if not_iso.is_empty() { None } else { Some(not_iso.join(", ")) };
        run.push(CheckRecord::new(format!("{label}: unit components are bijective on interior objects"), not_iso.is_empty(), w, None));
    }
    Ok(())
}

/// Theories on the `f1` catalog named by the config.
fn selected_theories(run: &Run) -> Result<Vec<(String, Theory)>, RunError> {
    let mat_len = run.cfg.truncation.materialize_len;
    let mut out = vec![];
    for &t in &run.cfg.experiments.theories {
        let (label, theory) = match t {
            FixtureTheory::ExtA1 | FixtureTheory::ExtA2 | FixtureTheory::ExtA3 | FixtureTheory::ExtA4 => {
                let k = match t {
                    FixtureTheory::ExtA1 => 1,
                    FixtureTheory::ExtA2 => 2,
                    FixtureTheory::ExtA3 => 3,
                    _ => 4,
                };
                let ext = ext_theory(&PresentedTheory::from_theory(&fixture_theory(k)?))?;
                (format!("ext A{k}"), materialize(&ext, mat_len)?.0)
            }
            FixtureTheory::BoundaryGenerator => ("boundary generator".to_string(), fixtures::f1_boundary_generator()?),
            FixtureTheory::Evaluation => ("evaluation".to_string(), fixtures::f1_evaluation()?),
        };
        out.push((label, theory));
    }
    Ok(out)
}

fn characterize_cmd(run: &mut Run) -> Result<(), RunError> {
    let mat_len = run.cfg.truncation.materialize_len;
    let mut reports = BTreeMap::new();
    for (label, b) in selected_theories(run)? {
        let r = characterize(&b, mat_len)?;
        let rows: Vec<String> = r
            .rows
            .iter()
            .map(|row| format!("{} additive={} λ-iso={}", row.region, row.additive, row.lambda_iso))
            .collect();
        run.push(CheckRecord::new(format!("{label}: additivity agrees with bijectivity of λ"), r.agree, Some(rows.join(", ")), None));
        run.push(CheckRecord::new(format!("{label}: ker ε vanishes on the interior"), r.kernel_trivial_on_interior, None, None));
        reports.insert(label, r);
    }
    run.artifact("characterize_rows.json", serde_json::to_vec_pretty(&reports).expect("report serializes"));
    Ok(())
}

fn iqft_roundtrip(run: &mut Run) -> Result<(), RunError> {
    let l = run.cfg.truncation.materialize_len;
    for (label, b) in selected_theories(run)? {
        match functor_s(&b, l) {
            Ok(pair) => {
                run.prefixed(&format!("{label}: QS"), roundtrip_qs(&b, l)?);
                run.prefixed(&format!("{label}: SQ on S(B)"), roundtrip_sq(&pair, l)?);
            }
            Err(ExtError::NotAdditive(v)) => {
                let additive = b.is_additive();
                run.push(CheckRecord::new(
                    format!("{label}: S rejects a non-additive theory"),
                    !additive,
                    Some(format!("not additive at {v}")),
                    None,
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }
    for k in 1..=4 {
        let a = fixture_theory(k)?;
        let pair = iqft_pair(&a, l, |e| Ok(IdealFunctor::zero(e)))?;
        run.prefixed(&format!("(A{k}, 0): SQ"), roundtrip_sq(&pair, l)?);
    }
    let (_, gi) = kg_pair(run, run.cfg.experiments.kg_catalog)?;
    run.prefixed("Klein-Gordon pair (K, I_G±)", gi.pair.roundtrip(run.cfg.truncation.max_len));
    Ok(())
}

fn grid_n(run: &Run) -> usize {
    run.cfg.tolerances.grid_n
}

fn kg_green(run: &mut Run) -> Result<(), RunError> {
    let a = run.cfg.width();
    let n = grid_n(run);
    let h = a / n as f64;
    let tol = run.tol_quad(h);
    let e = &run.cfg.experiments;
    let gd = GreenPair::dirichlet(a, n, 0.0)?;
    let gm = GreenPair::minkowski(h, 0.0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(e.seed);
    let bumps = random_bumps(&mut rng, a, e.bumps);
    let fs: Vec<TestFunction> = bumps.iter().map(|&b| TestFunction::single(b)).collect();
    for (label, g) in [("Dirichlet", &gd), ("free", &gm)] {
        let mut all = GreenResiduals::default();
        for k in 0..fs.len() {
            let partner = TestFunction::single(bumps[(k + 1) % bumps.len()].translated(1.5, 0.0));
            all.merge(&green_residuals(g, &fs[k], &partner, a)?);
        }
        run.push(CheckRecord::at_most(format!("{label}: max |P G± f − f|"), all.p_after_g, tol));
        run.push(CheckRecord::at_most(format!("{label}: max |G± P f − f|"), all.g_after_p, tol));
        run.push(CheckRecord::new(
            format!("{label}: supp G± f ⊆ J± of supp f (one-cell tolerance)"),
            all.support_violations == 0,
            Some(format!("{} of {} nodes outside", all.support_violations, all.nodes)),
            None,
        ));
        run.push(CheckRecord::at_most(format!("{label}: adjoint-relatedness defect"), all.adjoint_defect, tol));
        if g.width().is_some() {
            run.push(CheckRecord::at_most(format!("{label}: boundary trace"), all.boundary_trace, tol));
        }
    }
    let mut anti: f64 = 0.0;
    for i in 0..fs.len() {
        for j in (i + 1)..fs.len() {
            let x = tau(&gd, &fs[i], &fs[j], |_, _| true)?;
            let y = tau(&gd, &fs[j], &fs[i], |_, _| true)?;
            anti = anti.max((x + y).abs());
        }
    }
    run.push(CheckRecord::at_most("τ antisymmetry on the random bumps", anti, tol));

    let phi = TestFunction::single(e.support_bump);
    let (t0, x0) = (e.support_bump.t0, e.support_bump.x0);
    let inner = (t0, x0, x0.min(a - x0));
    let outer = (t0 + a, x0, a);
    let (gin, gout) = uniqueness_gaps(&gd, &gm, &phi, inner, outer)?;
    run.push(CheckRecord::at_most("Dirichlet and free pairs agree on an interior diamond", gin, tol));
    run.push(CheckRecord::new(
        "Dirichlet and free pairs differ once the hull meets the boundary",
        gout >= 10.0 * tol,
        Some(format!("{gout:.3e}")),
        Some(10.0 * tol),
    ));
    let (lo, hi) = phi.time_range();
    let doubling = image_doubling_defect(&gd, &phi, (lo - 2.0 * a, hi + 2.0 * a))?;
    run.push(CheckRecord::at_most("doubling the image count changes no sample", doubling, 1e-12));

    let seq = timelike_tau_sequence(&gm, x0, e.tau_time, &e.tau_radii)?;
    let dist: Vec<f64> = seq.iter().map(|t| (t - 0.5).abs()).collect();
    let monotone = dist.windows(2).all(|w| w[1] < w[0]);
    let last = dist.last().copied().unwrap_or(f64::INFINITY);
    let w = seq.iter().map(|t| format!("{t:.8}")).collect::<Vec<_>>().join(", ");
    run.push(CheckRecord::new("timelike τ approaches 1/2 monotonically as the radius shrinks", monotone && last <= tol, Some(w), Some(tol)));

    let field = gd.apply(&fs[0], (-a, a))?;
    let mut wtr = csv::Writer::from_writer(vec![]);
    wtr.write_record(["t", "x", "retarded", "advanced"])?;
    for (i, j) in gd.lattice.nodes_in((-a, a), (0.0, a)) {
        let (t, x) = gd.lattice.node(i, j);
        wtr.write_record([t, x, field.retarded(i, j), field.advanced(i, j)].map(|v| format!("{v:.9e}")))?;
    }
    let bytes = wtr.into_inner().map_err(|e| RunError::Io(e.into_error()))?;
    run.artifact("green_field.csv", bytes);
    Ok(())
}

/// The model on a preset catalog at the configured width, with its ideal.
fn kg_pair(run: &Run, preset: super::config::Preset) -> Result<(KgModel, crate::klein_gordon::model::GreenIdeal), RunError> {
    let m = run.cfg.spacetime;
    let cat = Arc::new(Catalog::build(m, &preset_seeds(preset, m)?, DEFAULT_BOUND)?);
    let model = KgModel::inscribed(cat, grid_n(run), run.cfg.experiments.fill)?;
    let k = model.interior_theory()?;
    let ext = ext_theory(&k)?;
    let gi = model.green_ideal(&ext, &model.dirichlet()?)?;
    Ok((model, gi))
}

fn model_checks(run: &mut Run, prefix: &str, model: &KgModel) -> Result<ExtTheory, RunError> {
    let max_len = run.cfg.truncation.max_len;
    let cat = model.catalog.clone();
    let coarse = KgModel::with_basis(cat.clone(), (grid_n(run) / 2).max(1), model.basis.clone())?;
    let mut ranks = vec![];
    let mut rank_ok = true;
    for u in interior_objects(&cat) {
        let fine = model.check_p_image(u);
        let half = coarse.check_p_image(u);
        match (fine, half) {
            (Ok(a), Ok(b)) => {
                rank_ok &= a == b && a == model.gens(u).len();
                ranks.push(format!("{} {a}/{b}", cat.name(u)));
            }
            (Err(KgError::BasisDegenerate(v)), _) | (_, Err(KgError::BasisDegenerate(v))) => {
                rank_ok = false;
                ranks.push(format!("{v} degenerate"));
            }
            (Err(e), _) | (_, Err(e)) => return Err(e.into()),
        }
    }
    run.push(CheckRecord::new(format!("{prefix}: basis survives the P-image quotient at h and 2h"), rank_ok, Some(ranks.join(", ")), None));
    let k = model.interior_theory()?;
    run.prefixed(&format!("{prefix}: K"), [k.check_causality(max_len)]);
    let ext = ext_theory(&k)?;
    let kext = model.kext()?;
    run.prefixed(prefix, model.check_zeta(&kext, &ext, max_len));
    Ok(ext)
}

fn kg_ideal(run: &mut Run) -> Result<(), RunError> {
    let max_len = run.cfg.truncation.max_len;
    let cat = run.catalog()?;
    let model = KgModel::inscribed(cat.clone(), grid_n(run), run.cfg.experiments.fill)?;
    let ext = model_checks(run, "catalog", &model)?;
    let gd = model.dirichlet()?;
    let tol = run.cfg.tolerances.tol_quad.unwrap_or_else(|| model.tol());
    let gi = model.green_ideal(&ext, &gd)?;
    run.push(CheckRecord::at_most("catalog: Dirichlet τ equals free τ inside interior regions", gi.interior_gap, tol));
    run.prefixed("catalog: τ", [model.check_tau_naturality(&gd)?, model.check_disjoint_vanishing(&gd)?]);
    let mut tables = vec![];
    for &v in &ext.theory.objects {
        tables.push(model.tau_matrix(&gd, v)?);
    }
    let worst = tables.iter().map(|t| t.antisymmetry_defect).fold(0.0, f64::max);
    run.push(CheckRecord::at_most("catalog: τ antisymmetry on every region", worst, tol));

    let (kg, gi) = kg_pair(run, run.cfg.experiments.kg_catalog)?;
    let ext = model_checks(run, "pair", &kg)?;
    run.push(CheckRecord::at_most("pair: Dirichlet τ equals free τ inside interior regions", gi.interior_gap, tol));
    let gens: Vec<_> = gi.rows.iter().filter(|r| r.generator).collect();
    let gap = gens.iter().map(|r| (r.tau_boundary - r.tau_interior).abs()).fold(0.0, f64::max);
    run.push(CheckRecord::new(
        "pair: some ideal generator differs from the free continuation",
        gap >= 10.0 * tol,
        Some(format!("{} generators, max |τ_D − τ_free| = {gap:.3e}", gens.len())),
        Some(10.0 * tol),
    ));
    let quotient = PresentedTheory {
        catalog: ext.theory.catalog.clone(),
        objects: ext.theory.objects.clone(),
        algebras: ext.theory.objects.iter().map(|&v| (v, gi.pair.quotient(v))).collect(),
        maps: ext.theory.maps.clone(),
    };
    run.prefixed("pair: K^ext / I", [quotient.check_causality(max_len)]);
    run.prefixed("pair", gi.pair.roundtrip(max_len));
    run.artifact("tau_matrices.json", serde_json::to_vec_pretty(&tables).expect("tables serialize"));
    run.artifact("ideal_rows.json", serde_json::to_vec_pretty(&gi.rows).expect("rows serialize"));
    Ok(())
}

fn kg_support(run: &mut Run) -> Result<(), RunError> {
    let a = run.cfg.width();
    let g = GreenPair::dirichlet(a, grid_n(run), 0.0)?;
    let phi = TestFunction::single(run.cfg.experiments.support_bump);
    let rep = demonstrate_nonsurjectivity(&g, &phi, a)?;
    run.lines(rep.checks.clone());
    let mut green = vec![];
    rep.green.write_csv(&mut green)?;
    let mut mode = vec![];
    rep.mode.write_csv(&mut mode)?;
    run.artifact("support_green.csv", green);
    run.artifact("support_mode.csv", mode);
    Ok(())
}
