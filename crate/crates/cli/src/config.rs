//! Flat key-value config with repeated `[level]` stanzas.
//!
//! ```text
//! mode = degenerate
//! g = 1.0
//! seed = 42
//!
//! [level]
//! omega = 1
//! epsilon = 0.0
//! c = 0.4472135954999579
//! ```
//!
//! Top-level keys come before the first `[level]`. Syntax errors carry line
//! numbers; semantic violations name the level and invariant.

use std::fmt;
use std::path::PathBuf;
use std::sync::Arc;

use gaudin_pair::bethe::SolverParams;
use gaudin_pair::hilbert::{Level, LevelScheme, PairingMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Verify,
    Solve,
    Spectrum,
    Oracle,
    Compare,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Verify => write!(f, "verify"),
            Command::Solve => write!(f, "solve"),
            Command::Spectrum => write!(f, "spectrum"),
            Command::Oracle => write!(f, "oracle"),
            Command::Compare => write!(f, "compare"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum OutputFormat {
    Csv,
    #[default]
    Table,
}

/// Fully validated run configuration.
#[derive(Debug)]
pub struct RunConfig {
    pub scheme: Arc<LevelScheme>,
    pub command: Option<Command>,
    /// Inclusive pair-sector range; `None` means every sector.
    pub pairs: Option<(u32, u32)>,
    pub params: SolverParams,
    pub out: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    /// Diagnostics fixture: shift every solved root by this amount before
    /// record assembly, to exercise the residual gates.
    pub perturb: f64,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

struct LevelDraft {
    line: usize,
    omega: Option<u32>,
    epsilon: Option<f64>,
    c: Option<f64>,
}

/// Parse config text into a validated [`RunConfig`].
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let mut mode: Option<(PairingMode, usize)> = None;
    let mut g: Option<f64> = None;
    let mut command: Option<Command> = None;
    let mut pairs: Option<(u32, u32)> = None;
    let mut out: Option<PathBuf> = None;
    let mut format: Option<OutputFormat> = None;
    let mut params = SolverParams::default();
    let mut levels: Vec<LevelDraft> = Vec::new();
    let mut in_level = false;

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if line == "[level]" {
            levels.push(LevelDraft { line: lineno, omega: None, epsilon: None, c: None });
            in_level = true;
            continue;
        }
        if line.starts_with('[') {
            return err(format!("line {lineno}: unknown section {line}"));
        }
        let Some((key, value)) = line.split_once('=') else {
            return err(format!("line {lineno}: expected `key = value`, got {line:?}"));
        };
        let key = key.trim();
        let value = value.trim();
        let parse_f64 = |what: &str| {
            value
                .parse::<f64>()
                .map_err(|_| ConfigError(format!("line {lineno}: invalid {what} value {value:?}")))
        };
        if in_level {
            let level = levels.last_mut().expect("inside a level stanza");
            match key {
                "omega" => {
                    level.omega = Some(value.parse::<u32>().map_err(|_| {
                        ConfigError(format!("line {lineno}: invalid omega value {value:?}"))
                    })?)
                }
                "epsilon" => level.epsilon = Some(parse_f64("epsilon")?),
                "c" => level.c = Some(parse_f64("c")?),
                _ => return err(format!("line {lineno}: unknown key {key:?} in level stanza")),
            }
            continue;
        }
        match key {
            "mode" => {
                let m = match value {
                    "general" => PairingMode::General,
                    "reduced" => PairingMode::Reduced,
                    "degenerate" => PairingMode::Degenerate,
                    _ => {
                        return err(format!(
                            "line {lineno}: mode must be general, reduced, or degenerate, got {value:?}"
                        ))
                    }
                };
                mode = Some((m, lineno));
            }
            "g" => g = Some(parse_f64("g")?),
            "command" => {
                command = Some(match value {
                    "verify" => Command::Verify,
                    "solve" => Command::Solve,
                    "spectrum" => Command::Spectrum,
                    "oracle" => Command::Oracle,
                    "compare" => Command::Compare,
                    _ => return err(format!("line {lineno}: unknown command {value:?}")),
                })
            }
            "pairs" => pairs = Some(parse_pairs(value).map_err(|e| {
                ConfigError(format!("line {lineno}: {e}"))
            })?),
            "out" => out = Some(PathBuf::from(value)),
            "format" => {
                format = Some(match value {
                    "csv" => OutputFormat::Csv,
                    "table" => OutputFormat::Table,
                    _ => return err(format!("line {lineno}: format must be csv or table")),
                })
            }
            "seed" => {
                params.seed = value.parse::<u64>().map_err(|_| {
                    ConfigError(format!("line {lineno}: invalid seed value {value:?}"))
                })?
            }
            "tol_newton" => params.newton_tol = parse_f64("tol_newton")?,
            "tol_sep" => params.separation_tol = parse_f64("tol_sep")?,
            "max_iter" => {
                params.max_iter = value.parse::<usize>().map_err(|_| {
                    ConfigError(format!("line {lineno}: invalid max_iter value {value:?}"))
                })?
            }
            "seeds_per_root" => {
                params.seeds_per_root = value.parse::<usize>().map_err(|_| {
                    ConfigError(format!("line {lineno}: invalid seeds_per_root value {value:?}"))
                })?
            }
            _ => return err(format!("line {lineno}: unknown key {key:?}")),
        }
    }

    let Some((mode, _)) = mode else {
        return err("missing required key `mode`");
    };
    let Some(g) = g else {
        return err("missing required key `g`");
    };
    if levels.is_empty() {
        return err("at least one [level] stanza is required");
    }
    let mut built = Vec::with_capacity(levels.len());
    for (i, draft) in levels.iter().enumerate() {
        let missing = |what: &str| {
            ConfigError(format!("level {} (line {}): missing key `{what}`", i + 1, draft.line))
        };
        built.push(Level {
            omega: draft.omega.ok_or_else(|| missing("omega"))?,
            epsilon: draft.epsilon.ok_or_else(|| missing("epsilon"))?,
            c: draft.c.ok_or_else(|| missing("c"))?,
        });
    }
    let scheme = LevelScheme::new(built, g, mode).map_err(|e| ConfigError(e.to_string()))?;
    if (scheme.norm_scale() - 1.0).abs() > 1e-12 {
        log::info!(
            "input amplitudes rescaled by 1/{:.17e} to satisfy the normalization",
            scheme.norm_scale()
        );
    }
    Ok(RunConfig {
        scheme: Arc::new(scheme),
        command,
        pairs,
        params,
        out,
        format,
        perturb: 0.0,
    })
}

/// `N` or `N..M` (inclusive).
pub fn parse_pairs(text: &str) -> Result<(u32, u32), String> {
    if let Some((lo, hi)) = text.split_once("..") {
        let lo = lo.trim().parse::<u32>().map_err(|_| format!("invalid pair count {lo:?}"))?;
        let hi = hi.trim().parse::<u32>().map_err(|_| format!("invalid pair count {hi:?}"))?;
        if lo > hi {
            return Err(format!("empty pair range {text:?}"));
        }
        Ok((lo, hi))
    } else {
        let n = text.trim().parse::<u32>().map_err(|_| format!("invalid pair count {text:?}"))?;
        Ok((n, n))
    }
}
