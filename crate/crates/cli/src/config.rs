//! Flat key-value config files whose keys mirror the command-line flags.
//! Flags given on the command line win over the file.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;

use r3k_core::params::{derive_params, explicit_params, Params};

pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_BETA: f64 = 0.5;
pub const DEFAULT_BUDGET: u64 = r3k_core::analysis::DEFAULT_NODE_BUDGET;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Edgelist,
    Json,
}

#[derive(Args, Clone, Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamArgs {
    /// Config file (TOML, flat `key = value`; keys as the long flags)
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Number of vertices
    #[arg(long)]
    pub n: Option<usize>,
    /// Epsilon [default: 0.1]
    #[arg(long)]
    pub eps: Option<f64>,
    /// Edge-probability constant, p = beta sqrt(ln n / n) [default: 0.5]
    #[arg(long)]
    pub beta: Option<f64>,
    /// Set-size constant, k = ceil(kappa sqrt(n ln n)) [default: 1 + eps]
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Master seed [default: 0]
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of consecutive seeds starting at --seed [default: 1]
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Take N, p, k verbatim instead of deriving them from n
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub explicit: Option<bool>,
    /// Grid side (explicit mode)
    #[arg(long = "N")]
    #[serde(rename = "N")]
    pub side: Option<usize>,
    /// Edge probability (explicit mode)
    #[arg(long)]
    pub p: Option<f64>,
    /// Independent-set size (explicit mode)
    #[arg(long)]
    pub k: Option<usize>,
    /// Output directory
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($flags:expr, $file:expr, $($field:ident),*) => {
        ParamArgs { config: $flags.config.clone(), $($field: $flags.$field.clone().or($file.$field.clone())),* }
    };
}

pub fn read_config<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}

impl ParamArgs {
    /// Fills unset flags from the config file, if any.
    pub fn resolve(&self) -> Result<ParamArgs> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let file: ParamArgs = read_config(path)?;
        Ok(overlay!(
            self, file, n, eps, beta, kappa, seed, seeds, explicit, side, p, k, out, format
        ))
    }

    pub fn params(&self) -> Result<Params> {
        let eps = self.eps.unwrap_or(DEFAULT_EPS);
        let Some(n) = self.n else {
            bail!("--n is required")
        };
        let params = if self.explicit.unwrap_or(false) {
            if self.beta.is_some() || self.kappa.is_some() {
                bail!("--beta/--kappa only apply to derived parameters");
            }
            let (Some(side), Some(p), Some(k)) = (self.side, self.p, self.k) else {
                bail!("--explicit needs --N, --p and --k");
            };
            explicit_params(n, side, p, k, eps, eps.powi(3), eps.powi(6))?
        } else {
            if self.side.is_some() || self.p.is_some() || self.k.is_some() {
                bail!("--N/--p/--k need --explicit");
            }
            derive_params(
                n,
                eps,
                self.beta.unwrap_or(DEFAULT_BETA),
                self.kappa.unwrap_or(1.0 + eps),
            )?
        };
        Ok(params)
    }

    pub fn seed_range(&self) -> std::ops::Range<u64> {
        let start = self.seed.unwrap_or(0);
        start..start + self.seeds.unwrap_or(1) as u64
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Edgelist)
    }

    /// The output directory, which must already exist.
    pub fn out_dir(&self) -> Result<Option<PathBuf>> {
        match &self.out {
            Some(dir) if !dir.is_dir() => {
                bail!("output directory {} does not exist", dir.display())
            }
            other => Ok(other.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "n = 500\neps = 0.2\nseed = 9\nexplicit = false\n").unwrap();
        let flags = ParamArgs {
            config: Some(path),
            seed: Some(3),
            ..Default::default()
        };
        let r = flags.resolve().unwrap();
        assert_eq!(r.n, Some(500));
        assert_eq!(r.eps, Some(0.2));
        assert_eq!(r.seed, Some(3));
        assert_eq!(r.params().unwrap().n, 500);
    }

    #[test]
    fn unknown_key_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.toml");
        std::fs::write(&path, "n = 500\nbogus = 1\n").unwrap();
        let flags = ParamArgs {
            config: Some(path),
            ..Default::default()
        };
        assert!(flags.resolve().is_err());
    }

    #[test]
    fn explicit_needs_all_three() {
        let a = ParamArgs {
            n: Some(9),
            explicit: Some(true),
            side: Some(3),
            p: Some(1.0),
            ..Default::default()
        };
        assert!(a.params().is_err());
        let a = ParamArgs { k: Some(3), ..a };
        assert_eq!(a.params().unwrap().side, 3);
        let d = ParamArgs {
            n: Some(1000),
            p: Some(0.1),
            ..Default::default()
        };
        assert!(d.params().is_err());
    }
}
