//! Run configuration: flat JSON with defaults, overridden key by key.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::wavelet::{self, RhoGrid, WAVELET_DEGREE};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub half_extent_x: f64,
    pub n_x: usize,
    pub half_extent_t: f64,
    pub n_t: usize,
    /// Fock truncation for group Fourier checks and spectrum dumps.
    pub fock_degree: usize,
    /// Fock truncation for wavelet pipelines.
    pub wavelet_degree: usize,
    /// |a| of the spectrum nodes, placed along (1, 1, 0)/√2.
    pub a_radii: Vec<f64>,
    pub rho_nodes: usize,
    pub rho_min: f64,
    pub rho_max: f64,
    pub profile: String,
    pub profile_params: Vec<f64>,
    /// Random cases per algebra identity.
    pub cases: usize,
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub tol_algebra: f64,
    pub tol_fourier: f64,
    pub tol_gft: f64,
    pub tol_radon: f64,
    pub tol_wavelet: f64,
    /// Demos use a Lizorkin input; `false` switches to a plain Gaussian.
    pub lizorkin: bool,
    /// radon-demo also runs on the refined grid.
    pub refine: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let g = GridSpec::default_grid();
        RunConfig {
            half_extent_x: g.half_extent_x,
            n_x: g.n_x,
            half_extent_t: g.half_extent_t,
            n_t: g.n_t,
            fock_degree: 8,
            wavelet_degree: WAVELET_DEGREE,
            a_radii: vec![0.5, 1.0, 1.5],
            rho_nodes: wavelet::RHO_NODES,
            rho_min: wavelet::RHO_RANGE[0],
            rho_max: wavelet::RHO_RANGE[1],
            profile: "power-exp".into(),
            profile_params: vec![1.0, 1.0],
            cases: 1000,
            seed: 1,
            tol_scale: 1.0,
            tol_algebra: 1.0,
            tol_fourier: 1.0,
            tol_gft: 1.0,
            tol_radon: 1.0,
            tol_wavelet: 1.0,
            lizorkin: true,
            refine: false,
            out: PathBuf::from("qheis-out"),
        }
    }
}

/// Parses a flag value as JSON, falling back to a bare string.
pub fn flag_value(raw: &str) -> Value {
    serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()))
}

fn merge(base: &mut Map<String, Value>, layer: Map<String, Value>, source: &str) -> Result<()> {
    for (k, v) in layer {
        if !base.contains_key(&k) {
            return Err(Error::Config(format!("unknown key `{k}` in {source}")));
        }
        base.insert(k, v);
    }
    Ok(())
}

impl RunConfig {
    /// Defaults, then the JSON file at `path`, then `overrides` in order.
    pub fn load(path: Option<&Path>, overrides: &[(String, Value)]) -> Result<Self> {
        let Value::Object(mut base) = serde_json::to_value(RunConfig::default())? else {
            unreachable!("config serialises to an object")
        };
        if let Some(p) = path {
            let text = std::fs::read_to_string(p)?;
            match serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))? {
                Value::Object(m) => merge(&mut base, m, &p.display().to_string())?,
                _ => return Err(Error::Config(format!("{}: expected a JSON object", p.display()))),
            }
        }
        let flags: Map<String, Value> = overrides.iter().map(|(k, v)| (k.replace('-', "_"), v.clone())).collect();
        merge(&mut base, flags, "flags")?;
        let cfg: RunConfig = serde_json::from_value(Value::Object(base)).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        self.grid()?;
        let tols = [self.tol_algebra, self.tol_fourier, self.tol_gft, self.tol_radon, self.tol_wavelet];
        if tols.iter().any(|t| !(*t > 0.0) || !t.is_finite()) {
            return bad("per-suite tolerance factors must be positive");
        }
        // zero is allowed and makes every inexact check fail
        if !(self.tol_scale >= 0.0) || !self.tol_scale.is_finite() {
            return bad("tol_scale must be finite and non-negative");
        }
        if self.a_radii.is_empty() || self.a_radii.iter().any(|r| !(*r > 0.0)) {
            return bad("a_radii must be non-empty and positive");
        }
        if self.wavelet_degree > self.fock_degree.max(WAVELET_DEGREE) || self.fock_degree > 24 {
            return bad("Fock degrees out of range");
        }
        if self.cases == 0 {
            return bad("cases must be positive");
        }
        self.rho_grid()?;
        self.profile()?;
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.half_extent_x, self.n_x, self.half_extent_t, self.n_t)
            .map_err(|e| Error::Config(format!("grid: {e}")))
    }

    pub fn rho_grid(&self) -> Result<RhoGrid> {
        RhoGrid::log(self.rho_nodes, self.rho_min, self.rho_max).map_err(|e| Error::Config(format!("scales: {e}")))
    }

    pub fn profile(&self) -> Result<qheis_core::radial::RadialProfile> {
        wavelet::make_profile(&self.profile, &self.profile_params).map_err(|e| Error::Config(format!("profile: {e}")))
    }

    /// Spectrum nodes a = r (1, 1, 0)/√2.
    pub fn a_nodes(&self) -> Vec<qheis_core::ImQuaternion> {
        let s = 0.5 * 2f64.sqrt();
        self.a_radii.iter().map(|r| qheis_core::ImQuaternion::new(r * s, r * s, 0.0)).collect()
    }

    /// Tolerance factor for a suite.
    pub fn tol(&self, suite: &str) -> f64 {
        let per = match suite {
            "algebra" => self.tol_algebra,
            "fourier" => self.tol_fourier,
            "gft" => self.tol_gft,
            "radon" => self.tol_radon,
            "wavelet" => self.tol_wavelet,
            _ => 1.0,
        };
        per * self.tol_scale
    }

    pub fn is_default_profile(&self) -> bool {
        self.profile == "power-exp" && self.profile_params == [1.0, 1.0]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layers_apply_in_order() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"seed": 9, "n_x": 16}"#).unwrap();
        let cfg = RunConfig::load(Some(&p), &[("seed".into(), flag_value("3"))]).unwrap();
        assert_eq!((cfg.seed, cfg.n_x), (3, 16));
        assert_eq!(cfg.grid().unwrap(), GridSpec::refined());
    }

    #[test]
    fn bad_input_is_a_config_error() {
        let e = RunConfig::load(None, &[("colour".into(), flag_value("red"))]);
        assert!(matches!(e, Err(Error::Config(_))));
        let e = RunConfig::load(None, &[("profile_params".into(), flag_value("[1.0]"))]);
        assert!(matches!(e, Err(Error::Config(_))));
        let e = RunConfig::load(None, &[("tol_scale".into(), flag_value("-1"))]);
        assert!(matches!(e, Err(Error::Config(_))));
        assert!(RunConfig::load(None, &[("tol_scale".into(), flag_value("0"))]).is_ok());
    }
}
