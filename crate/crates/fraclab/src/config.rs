//! Run configuration: plain-text `key = value` files with `[section]`
//! headers. Unset keys keep their frozen defaults, which carry every
//! tolerance the acceptance checks pin.

use crate::error::{FraclabError, Result};
use crate::quadrature::QuadratureConfig;
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BackendChoice {
    Spectral,
    Quadrature,
}

#[derive(Debug, Clone, Copy)]
pub struct GridSettings {
    pub half_width: f64,
    pub points: usize,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Dimensions the suites exercise.
    pub dims: Vec<usize>,
    pub grid1: GridSettings,
    pub grid2: GridSettings,
    pub pad: usize,
    pub backend: BackendChoice,
    pub quadrature: QuadratureConfig,
    /// Descending list for the order -> 0 sweeps.
    pub alphas_limit_zero: Vec<f64>,
    /// Ascending list for the order -> 1 sweeps.
    pub alphas_limit_one: Vec<f64>,
    /// Descending list for the energy sweeps.
    pub alphas_energy: Vec<f64>,
    /// Descending list for the Laplacian identity sweep.
    pub alphas_laplacian: Vec<f64>,
    /// Cross-backend orders.
    pub alphas_backend: Vec<f64>,
    /// Interpolation beta grid builder: count of points in (0, alpha).
    pub betas_interpolation: Vec<f64>,
    /// Hardy-variation audit beta grid.
    pub betas_h1bv: Vec<f64>,
    /// Tail-scaling radii.
    pub tail_radii: Vec<f64>,
    /// Counterexample settings.
    pub counterexample_half_width: f64,
    pub counterexample_points: usize,
    pub counterexample_alphas: Vec<f64>,
    /// Per-check tolerance overrides.
    pub tolerances: BTreeMap<String, f64>,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dims: vec![1, 2],
            grid1: GridSettings {
                half_width: 12.0,
                points: 1024,
            },
            grid2: GridSettings {
                half_width: 6.0,
                points: 96,
            },
            pad: 4,
            backend: BackendChoice::Spectral,
            quadrature: QuadratureConfig::default(),
            alphas_limit_zero: vec![0.4, 0.2, 0.1, 0.05, 0.02],
            alphas_limit_one: vec![0.8, 0.9, 0.95, 0.99],
            alphas_energy: vec![0.4, 0.2, 0.1, 0.05, 0.02],
            alphas_laplacian: vec![0.2, 0.1, 0.05, 0.02, 0.01],
            alphas_backend: vec![0.25, 0.5, 0.75],
            betas_interpolation: vec![0.05, 0.1, 0.2, 0.4, 0.6, 0.75],
            betas_h1bv: vec![0.02, 0.05, 0.1, 0.2, 0.4, 0.6],
            tail_radii: vec![1.0, 2.0, 4.0, 8.0],
            counterexample_half_width: 6.0,
            counterexample_points: 128,
            counterexample_alphas: vec![0.25, 0.5],
            tolerances: BTreeMap::new(),
            output_dir: PathBuf::from("fraclab-out"),
        }
    }
}

impl RunConfig {
    /// Tolerance for a check, falling back to the given frozen default.
    pub fn tolerance(&self, check_id: &str, default: f64) -> f64 {
        self.tolerances.get(check_id).copied().unwrap_or(default)
    }

    pub fn backend(&self) -> crate::backend::Backend {
        match self.backend {
            BackendChoice::Spectral => crate::backend::Backend::Spectral { pad: self.pad },
            BackendChoice::Quadrature => crate::backend::Backend::Quadrature(self.quadrature),
        }
    }

    pub fn grid(&self, n: usize) -> Result<crate::fields::Grid> {
        let s = match n {
            1 => self.grid1,
            2 => self.grid2,
            _ => return Err(FraclabError::Config(format!("no grid for n = {n}"))),
        };
        crate::fields::Grid::new(n, s.half_width, s.points)
    }

    pub fn has_dim(&self, n: usize) -> bool {
        self.dims.contains(&n)
    }

    fn validate(&self) -> Result<()> {
        for d in &self.dims {
            if *d != 1 && *d != 2 {
                return Err(FraclabError::Config(format!("unsupported dim {d}")));
            }
        }
        if self.dims.is_empty() {
            return Err(FraclabError::Config("dims must not be empty".into()));
        }
        if !matches!(self.pad, 2 | 4 | 8) {
            return Err(FraclabError::Config(format!("pad must be 2|4|8, got {}", self.pad)));
        }
        for (k, v) in &self.tolerances {
            if !(*v > 0.0) {
                return Err(FraclabError::Config(format!(
                    "tolerance {k} must be positive, got {v}"
                )));
            }
        }
        for list in [
            &self.alphas_limit_zero,
            &self.alphas_limit_one,
            &self.alphas_energy,
            &self.alphas_laplacian,
            &self.alphas_backend,
        ] {
            for a in list {
                if !(*a > 0.0 && *a < 1.0) {
                    return Err(FraclabError::Config(format!(
                        "sweep orders must lie in (0,1), got {a}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Parse a config file over the defaults.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| FraclabError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_str_over_defaults(&text)
    }

    pub fn from_str_over_defaults(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        let mut section = String::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| bad_line(lineno, raw, "unterminated section"))?;
                section = name.trim().to_ascii_lowercase();
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| bad_line(lineno, raw, "expected key = value"))?;
            let key = key.trim().to_ascii_lowercase();
            let value = value.trim();
            apply(&mut cfg, &section, &key, value)
                .map_err(|e| bad_line(lineno, raw, &e.to_string()))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn bad_line(lineno: usize, raw: &str, msg: &str) -> FraclabError {
    FraclabError::Config(format!("line {}: {msg}: `{raw}`", lineno + 1))
}

fn parse_f64(v: &str) -> Result<f64> {
    v.parse::<f64>()
        .map_err(|e| FraclabError::Config(format!("bad number `{v}`: {e}")))
}

fn parse_usize(v: &str) -> Result<usize> {
    v.parse::<usize>()
        .map_err(|e| FraclabError::Config(format!("bad integer `{v}`: {e}")))
}

fn parse_list(v: &str) -> Result<Vec<f64>> {
    v.split(',')
        .map(|s| parse_f64(s.trim()))
        .collect::<Result<Vec<_>>>()
}

fn apply(cfg: &mut RunConfig, section: &str, key: &str, value: &str) -> Result<()> {
    match (section, key) {
        ("grid", "dims") => {
            cfg.dims = value
                .split(',')
                .map(|s| parse_usize(s.trim()))
                .collect::<Result<Vec<_>>>()?;
        }
        ("grid", "half_width_1") => cfg.grid1.half_width = parse_f64(value)?,
        ("grid", "points_1") => cfg.grid1.points = parse_usize(value)?,
        ("grid", "half_width_2") => cfg.grid2.half_width = parse_f64(value)?,
        ("grid", "points_2") => cfg.grid2.points = parse_usize(value)?,
        ("spectral", "pad") => cfg.pad = parse_usize(value)?,
        ("quadrature", "tail_box_factor") => cfg.quadrature.tail_box_factor = parse_f64(value)?,
        ("quadrature", "pv_epsilon") => cfg.quadrature.pv_epsilon = parse_f64(value)?,
        ("run", "backend") => {
            cfg.backend = match value.to_ascii_lowercase().as_str() {
                "spectral" => BackendChoice::Spectral,
                "quadrature" => BackendChoice::Quadrature,
                other => {
                    return Err(FraclabError::Config(format!("unknown backend `{other}`")))
                }
            };
        }
        ("run", "output_dir") => cfg.output_dir = PathBuf::from(value),
        ("alphas", "limit_zero") => cfg.alphas_limit_zero = parse_list(value)?,
        ("alphas", "limit_one") => cfg.alphas_limit_one = parse_list(value)?,
        ("alphas", "energy") => cfg.alphas_energy = parse_list(value)?,
        ("alphas", "laplacian") => cfg.alphas_laplacian = parse_list(value)?,
        ("alphas", "backend") => cfg.alphas_backend = parse_list(value)?,
        ("alphas", "betas_interpolation") => cfg.betas_interpolation = parse_list(value)?,
        ("alphas", "betas_h1bv") => cfg.betas_h1bv = parse_list(value)?,
        ("alphas", "tail_radii") => cfg.tail_radii = parse_list(value)?,
        ("counterexample", "half_width") => cfg.counterexample_half_width = parse_f64(value)?,
        ("counterexample", "points") => cfg.counterexample_points = parse_usize(value)?,
        ("counterexample", "alphas") => cfg.counterexample_alphas = parse_list(value)?,
        ("tolerances", check_id) => {
            cfg.tolerances
                .insert(check_id.to_string(), parse_f64(value)?);
        }
        _ => {
            return Err(FraclabError::Config(format!(
                "unknown key `{key}` in section `[{section}]`"
            )))
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn parse_round_trip() {
        let text = "
# comment
[grid]
dims = 1
half_width_1 = 10.0
points_1 = 512

[spectral]
pad = 8

[run]
backend = quadrature
output_dir = /tmp/x

[alphas]
limit_zero = 0.3, 0.1, 0.05

[tolerances]
duality = 5e-4
";
        let cfg = RunConfig::from_str_over_defaults(text).unwrap();
        assert_eq!(cfg.dims, vec![1]);
        assert_eq!(cfg.grid1.points, 512);
        assert_eq!(cfg.pad, 8);
        assert_eq!(cfg.backend, BackendChoice::Quadrature);
        assert_eq!(cfg.alphas_limit_zero, vec![0.3, 0.1, 0.05]);
        assert_eq!(cfg.tolerance("duality", 1e-3), 5e-4);
        assert_eq!(cfg.tolerance("other", 1e-3), 1e-3);
    }

    #[test]
    fn rejects_garbage() {
        assert!(RunConfig::from_str_over_defaults("[grid\n").is_err());
        assert!(RunConfig::from_str_over_defaults("x = 1\n").is_err());
        assert!(RunConfig::from_str_over_defaults("[grid]\ndims = 3\n").is_err());
        assert!(RunConfig::from_str_over_defaults("[spectral]\npad = 5\n").is_err());
        assert!(RunConfig::from_str_over_defaults("[tolerances]\nq = -1\n").is_err());
        assert!(RunConfig::from_str_over_defaults("[alphas]\nenergy = 1.5\n").is_err());
    }
}
