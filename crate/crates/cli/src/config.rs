use std::path::{Path, PathBuf};

use geoloop::boundary::BoxParameters;
use geoloop::census::{DEFAULT_BUDGET, DEFAULT_SLACK};
use geoloop::group::CosetScheme;
use geoloop::lemmas::default_t_list;
use geoloop::stats::{SectorSpec, BOOTSTRAP_RESAMPLES};
use serde::{Deserialize, Serialize};

/// Environment variable that overrides the configured output directory.
pub const OUT_DIR_VAR: &str = "GEOLOOP_OUT_DIR";

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub census: CensusConfig,
    pub grid: GridConfig,
    pub sector: SectorConfig,
    pub cosets: CosetScheme,
    pub fit: FitConfig,
    pub boxes: BoxConfig,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct CensusConfig {
    pub genus: usize,
    pub radius: f64,
    pub slack: f64,
    pub budget: usize,
}

/// Uniform grid; `end` defaults to the census radius.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub start: f64,
    pub end: Option<f64>,
    pub step: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SectorConfig {
    pub base: f64,
    pub theta: f64,
    pub base_prime: f64,
    pub theta_prime: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct FitConfig {
    /// Defaults to `[radius − 4, radius]`.
    pub window: Option<[f64; 2]>,
    pub resamples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct BoxConfig {
    pub epsilon: f64,
    pub alpha: f64,
    pub theta: f64,
    pub theta_prime: f64,
    pub base: f64,
    pub base_prime: f64,
    /// Inner arcs for the inclusion checks; default `θ/2`, `θ′/2`.
    pub rho: Option<f64>,
    pub rho_prime: Option<f64>,
    pub t_list: Vec<f64>,
    pub samples: usize,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub seed: u64,
    pub gnuplot: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            census: CensusConfig::default(),
            grid: GridConfig::default(),
            sector: SectorConfig::default(),
            cosets: CosetScheme::mod_m(2),
            fit: FitConfig::default(),
            boxes: BoxConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for CensusConfig {
    fn default() -> Self {
        Self {
            genus: 2,
            radius: 10.0,
            slack: DEFAULT_SLACK,
            budget: DEFAULT_BUDGET,
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            start: 1.0,
            end: None,
            step: 0.05,
        }
    }
}

impl Default for SectorConfig {
    fn default() -> Self {
        Self {
            base: 0.0,
            theta: std::f64::consts::PI,
            base_prime: 0.0,
            theta_prime: std::f64::consts::PI,
        }
    }
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            window: None,
            resamples: BOOTSTRAP_RESAMPLES,
        }
    }
}

impl Default for BoxConfig {
    fn default() -> Self {
        let p = BoxParameters::defaults();
        Self {
            epsilon: p.epsilon,
            alpha: p.alpha,
            theta: p.theta,
            theta_prime: p.theta_prime,
            base: p.base,
            base_prime: p.base_prime,
            rho: None,
            rho_prime: None,
            t_list: default_t_list(),
            samples: 1000,
        }
    }
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("."),
            seed: 1,
            gnuplot: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| anyhow::anyhow!("cannot read {}: {e}", path.display()))?;
        let cfg: RunConfig =
            toml::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", path.display()))?;
        Ok(cfg)
    }

    /// Checks every value that later stages would reject.
    pub fn validate(&self) -> anyhow::Result<()> {
        let c = &self.census;
        anyhow::ensure!(c.genus >= 2, "genus must be at least 2");
        anyhow::ensure!(
            c.radius > 0.0 && c.radius.is_finite(),
            "census radius must be positive"
        );
        anyhow::ensure!(
            c.slack >= 0.0 && c.slack.is_finite(),
            "slack must be nonnegative"
        );
        anyhow::ensure!(c.budget > 0, "budget must be positive");
        let g = &self.grid;
        anyhow::ensure!(g.step > 0.0, "grid step must be positive");
        if let Some(end) = g.end {
            anyhow::ensure!(end >= g.start, "grid end {end} is below start {}", g.start);
        }
        self.sectors()?;
        self.cosets.validate(c.genus)?;
        if let Some([lo, hi]) = self.fit.window {
            anyhow::ensure!(lo < hi, "fit window [{lo}, {hi}] is empty");
        }
        self.box_parameters()?;
        anyhow::ensure!(self.boxes.samples > 0, "samples must be positive");
        Ok(())
    }

    pub fn sectors(&self) -> anyhow::Result<(SectorSpec, SectorSpec)> {
        let s = &self.sector;
        Ok((
            SectorSpec::new(s.base, s.theta)?,
            SectorSpec::new(s.base_prime, s.theta_prime)?,
        ))
    }

    pub fn box_parameters(&self) -> anyhow::Result<BoxParameters> {
        let b = &self.boxes;
        Ok(BoxParameters::new(
            b.epsilon,
            b.alpha,
            b.theta,
            b.theta_prime,
            b.base,
            b.base_prime,
        )?)
    }

    pub fn rho(&self) -> (f64, f64) {
        let b = &self.boxes;
        (
            b.rho.unwrap_or(b.theta / 2.0),
            b.rho_prime.unwrap_or(b.theta_prime / 2.0),
        )
    }

    /// Grid points from `start` to `end` (or `radius`), endpoints included.
    pub fn grid(&self, radius: f64) -> Vec<f64> {
        let g = &self.grid;
        let end = g.end.unwrap_or(radius);
        let n = ((end - g.start) / g.step + 1e-9).floor() as usize;
        let mut grid: Vec<f64> = (0..=n).map(|k| g.start + g.step * k as f64).collect();
        if end - grid[n] > 1e-9 {
            grid.push(end);
        }
        grid
    }

    pub fn fit_window(&self, radius: f64) -> (f64, f64) {
        match self.fit.window {
            Some([lo, hi]) => (lo, hi),
            None => ((radius - 4.0).max(0.0), radius),
        }
    }

    /// Output directory: the environment overrides the file.
    pub fn resolve_out_dir(&mut self) {
        if let Ok(dir) = std::env::var(OUT_DIR_VAR) {
            if !dir.is_empty() {
                self.output.dir = PathBuf::from(dir);
            }
        }
    }
}
