use std::path::Path;

use serde::{Deserialize, Serialize};

use qgraph_core::spectral::{CorpusSpec, GridSpec};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub refine_starts: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        Self { x_min: g.x_min, x_max: g.x_max, y_min: g.y_min, y_max: g.y_max, nx: g.nx, ny: g.ny, refine_starts: g.refine_starts }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CorpusConfig {
    /// Valuations run over `[-(T + v_margin), T + v_margin]`.
    pub v_margin: u32,
    /// Unit parts are enumerated modulo `p^unit_digits`.
    pub unit_digits: u32,
}

impl Default for CorpusConfig {
    fn default() -> Self {
        Self { v_margin: 2, unit_digits: 2 }
    }
}

/// Everything a run depends on besides its command-line arguments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Significant p-adic digits for parsed inputs.
    pub precision: u32,
    /// Absolute tolerance of the real quadrature.
    pub tol: f64,
    pub grid: GridConfig,
    pub corpus: CorpusConfig,
    /// Default sample count for sampling checks.
    pub samples: usize,
    /// Validation samples for the sphere annulus.
    pub annulus_samples: usize,
    /// Largest residue ring the brute-force oracle may enumerate.
    pub oracle_budget: u64,
    pub format: Format,
    /// Worker threads; `None` lets rayon decide.
    pub threads: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            precision: 64,
            tol: qgraph_core::oscint::DEFAULT_TOL,
            grid: GridConfig::default(),
            corpus: CorpusConfig::default(),
            samples: 100_000,
            annulus_samples: qgraph_core::coloring::ANNULUS_SAMPLES,
            oracle_budget: qgraph_core::oscint::DEFAULT_ORACLE_BUDGET,
            format: Format::Json,
            threads: None,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: Self = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(m.to_string()));
        if self.precision == 0 {
            return bad("precision must be positive");
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return bad("tol must be positive");
        }
        let g = &self.grid;
        if g.nx == 0 || g.ny == 0 {
            return bad("grid resolution must be positive");
        }
        if !(g.x_min <= g.x_max && g.y_min <= g.y_max) {
            return bad("grid extents are inverted");
        }
        if self.corpus.unit_digits == 0 {
            return bad("corpus.unit_digits must be positive");
        }
        if self.samples == 0 || self.annulus_samples == 0 || self.oracle_budget == 0 {
            return bad("sample counts and budgets must be positive");
        }
        if self.threads == Some(0) {
            return bad("threads must be positive");
        }
        Ok(())
    }

    pub fn grid_spec(&self) -> GridSpec {
        let g = &self.grid;
        GridSpec {
            x_min: g.x_min,
            x_max: g.x_max,
            y_min: g.y_min,
            y_max: g.y_max,
            nx: g.nx,
            ny: g.ny,
            tol: self.tol,
            refine_starts: g.refine_starts,
        }
    }

    pub fn corpus_spec(&self, t: u32) -> CorpusSpec {
        CorpusSpec { v_range: (t + self.corpus.v_margin) as i64, unit_digits: self.corpus.unit_digits, axes: true }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut c = RunConfig::default();
        c.threads = Some(3);
        c.grid.nx = 17;
        c.format = Format::Csv;
        assert_eq!(RunConfig::from_toml(&c.to_toml()).unwrap(), c);
        assert_eq!(RunConfig::from_toml("").unwrap(), RunConfig::default());
    }

    #[test]
    fn rejects_bad_budgets() {
        assert!(RunConfig::from_toml("samples = 0").is_err());
        assert!(RunConfig::from_toml("tol = -1.0").is_err());
        assert!(RunConfig::from_toml("[grid]\nnx = 0").is_err());
        assert!(RunConfig::from_toml("unknown = 1").is_err());
    }
}
