//! Run configuration: spacetime, catalog, tolerances, truncations and
//! experiment selections. Round-trips losslessly through JSON.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::RunError;
use crate::geometry::{Kind, RectLit, Region, Spacetime};
use crate::klein_gordon::Bump;
use crate::linalg::TOL_LIN;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub spacetime: Spacetime,
    pub catalog: CatalogConfig,
    pub tolerances: Tolerances,
    pub truncation: Truncation,
    pub experiments: Experiments,
    pub out: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    /// Seven strip seeds closed to twelve regions.
    Strip12,
    /// A boundary triangle over two spacelike interior diamonds.
    F1,
    /// A boundary triangle over two timelike interior diamonds.
    FreeProduct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CatalogConfig {
    Preset(Preset),
    Seeds(Vec<SeedConfig>),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SeedConfig {
    pub name: String,
    pub rects: Vec<RectLit>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    pub tol_lin: f64,
    /// Overrides `10 h² QUAD_SCALE` when set.
    pub tol_quad: Option<f64>,
    /// Quadrature grid `h = a / grid_n`.
    pub grid_n: usize,
    /// Oracle grids, cells per strip width.
    pub oracle_grids: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Truncation {
    /// Word length for normal forms and brute-force quotients.
    pub max_len: usize,
    /// Word length at which extensions are materialized as finite algebras.
    pub materialize_len: usize,
    /// Image pairs for the Dirichlet pair; derived from the window when unset.
    pub n_img: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixtureTheory {
    ExtA1,
    ExtA2,
    ExtA3,
    ExtA4,
    BoundaryGenerator,
    Evaluation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Experiments {
    pub seed: u64,
    /// Random bumps for the Green's operator checks.
    pub bumps: usize,
    pub theories: Vec<FixtureTheory>,
    /// Catalog of the desk-scale Klein-Gordon pair.
    pub kg_catalog: Preset,
    /// Radius of the inscribed basis bumps relative to the largest possible.
    pub fill: f64,
    /// Radii of the timelike `τ` sequence.
    pub tau_radii: Vec<f64>,
    /// Time separation of the timelike `τ` pair.
    pub tau_time: f64,
    /// Source of the support demonstration (physical units).
    pub support_bump: Bump,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { tol_lin: TOL_LIN, tol_quad: None, grid_n: 200, oracle_grids: vec![50, 100, 200] }
    }
}

impl Default for Truncation {
    fn default() -> Self {
        Truncation { max_len: 3, materialize_len: 2, n_img: None }
    }
}

impl Default for Experiments {
    fn default() -> Self {
        use FixtureTheory::*;
        let pi = std::f64::consts::PI;
        Experiments {
            seed: 7,
            bumps: 10,
            theories: vec![ExtA1, ExtA2, ExtA3, ExtA4, BoundaryGenerator, Evaluation],
            kg_catalog: Preset::FreeProduct,
            fill: 0.8,
            tau_radii: vec![0.9, 0.6, 0.3],
            tau_time: 1.0,
            support_bump: Bump::unit(0.0, pi / 2.0, 0.4),
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            spacetime: Spacetime::strip_pi(),
            catalog: CatalogConfig::Preset(Preset::Strip12),
            tolerances: Tolerances::default(),
            truncation: Truncation::default(),
            experiments: Experiments::default(),
            out: PathBuf::from("out"),
        }
    }
}

fn bad(msg: impl Into<String>) -> RunError {
    RunError::InvalidConfig(msg.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig, RunError> {
        let c: RunConfig = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn validate(&self) -> Result<(), RunError> {
        let t = &self.tolerances;
        if !(t.tol_lin > 0.0) {
            return Err(bad("tol_lin must be positive"));
        }
        if t.tol_quad.is_some_and(|x| !(x > 0.0)) {
            return Err(bad("tol_quad must be positive"));
        }
        if t.grid_n == 0 || t.oracle_grids.iter().any(|&n| n < 1) {
            return Err(bad("grids need at least one cell"));
        }
        let tr = &self.truncation;
        if tr.max_len == 0 || tr.materialize_len == 0 || tr.n_img == Some(0) {
            return Err(bad("truncations must be at least 1"));
        }
        let e = &self.experiments;
        if e.bumps == 0 || !(e.fill > 0.0 && e.fill < 1.0) || e.tau_radii.iter().any(|&r| !(r > 0.0)) {
            return Err(bad("experiments need bumps >= 1, 0 < fill < 1 and positive radii"));
        }
        Ok(())
    }

    /// Physical strip width `a`.
    pub fn width(&self) -> f64 {
        self.spacetime.unit_length()
    }

    pub fn seeds(&self) -> Result<Vec<(String, Region)>, RunError> {
        let m = self.spacetime;
        match &self.catalog {
            CatalogConfig::Preset(p) => preset_seeds(*p, m),
            CatalogConfig::Seeds(s) => Ok(s.iter().map(|s| (s.name.clone(), Region::from_lits(m, &s.rects))).collect()),
        }
    }
}

pub fn preset_seeds(p: Preset, m: Spacetime) -> Result<Vec<(String, Region)>, RunError> {
    if m.kind != Kind::Strip {
        return Err(bad("catalog presets live on the strip"));
    }
    Ok(match p {
        Preset::Strip12 => crate::fixtures::strip_seeds(m),
        Preset::F1 => crate::fixtures::f1_seeds(m),
        Preset::FreeProduct => crate::fixtures::free_product_seeds(m),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_round_trips() {
        let c = RunConfig::default();
        let back = RunConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.hash().len(), 64);
    }

    #[test]
    fn rejects_nonpositive_tolerances() {
        let mut c = RunConfig::default();
        c.tolerances.tol_quad = Some(0.0);
        assert!(matches!(c.validate(), Err(RunError::InvalidConfig(_))));
        let mut c = RunConfig::default();
        c.truncation.max_len = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn partial_config_takes_defaults() {
        let c = RunConfig::from_json(r#"{"truncation": {"max_len": 2}}"#).unwrap();
        assert_eq!(c.truncation.max_len, 2);
        assert_eq!(c.tolerances.grid_n, 200);
        assert!(RunConfig::from_json(r#"{"nonsense": 1}"#).is_err());
    }
}
