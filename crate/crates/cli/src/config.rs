//! Run configuration: defaults, then an optional `key = value` file, then
//! `COLLAR_TOL`, then command-line flags.

use std::path::{Path, PathBuf};

use collar_core::Tolerance;

use crate::error::CliError;

pub const TOL_ENV: &str = "COLLAR_TOL";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::Usage(format!("unknown format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub tolerance: Tolerance,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tolerance: Tolerance::default(),
            format: Format::Json,
            out: None,
            seed: 0,
        }
    }
}

/// Values given on the command line; `None` leaves the lower layers alone.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub abs_tol: Option<f64>,
    pub rel_tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl RunConfig {
    pub fn resolve(
        file: Option<&Path>,
        env_tol: Option<&str>,
        flags: &Overrides,
    ) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            cfg.apply_text(&text)?;
        }
        if let Some(v) = env_tol {
            cfg.tolerance.abs_tol = parse_num(TOL_ENV, v)?;
        }
        cfg.apply(flags);
        cfg.tolerance.validate().map_err(CliError::Core)?;
        Ok(cfg)
    }

    fn apply(&mut self, o: &Overrides) {
        if let Some(v) = o.abs_tol {
            self.tolerance.abs_tol = v;
        }
        if let Some(v) = o.rel_tol {
            self.tolerance.rel_tol = v;
        }
        if let Some(v) = o.max_iter {
            self.tolerance.max_iter = v;
        }
        if let Some(v) = o.format {
            self.format = v;
        }
        if let Some(v) = &o.out {
            self.out = Some(v.clone());
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
    }

    fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (n, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", n + 1))
            })?;
            let value = value.trim().trim_matches('"');
            match key.trim() {
                "abs_tol" => self.tolerance.abs_tol = parse_num(key, value)?,
                "rel_tol" => self.tolerance.rel_tol = parse_num(key, value)?,
                "max_iter" => self.tolerance.max_iter = parse_num(key, value)?,
                "format" => self.format = value.parse()?,
                "out" => self.out = Some(PathBuf::from(value)),
                "seed" => self.seed = parse_num(key, value)?,
                other => return Err(CliError::Usage(format!("unknown config key `{other}`"))),
            }
        }
        Ok(())
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, CliError> {
    v.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad value `{v}` for {}", key.trim())))
}
