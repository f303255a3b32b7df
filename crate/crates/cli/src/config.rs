use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig2a,
    Fig2b,
    Fig4a,
    Purity,
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Preset::Fig2a => "fig2a",
            Preset::Fig2b => "fig2b",
            Preset::Fig4a => "fig4a",
            Preset::Purity => "purity",
        };
        f.write_str(name)
    }
}

/// A scalar, a `start:stop:step` range, or a comma-separated list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    Num(f64),
    List(Vec<f64>),
    Text(String),
}

impl FromStr for Values {
    type Err = std::convert::Infallible;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(Values::Text(s.to_string()))
    }
}

impl fmt::Display for Values {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Values::Num(x) => write!(f, "{x}"),
            Values::List(xs) => {
                let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
                f.write_str(&parts.join(","))
            }
            Values::Text(s) => f.write_str(s),
        }
    }
}

fn parse_number(s: &str) -> Result<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .with_context(|| format!("not a number: {s:?}"))?;
    ensure!(x.is_finite(), "not a finite number: {s:?}");
    Ok(x)
}

/// Inclusive range; the last point snaps to `stop` when it lands within
/// rounding of it.
pub fn expand_range(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    ensure!(step > 0.0, "range step must be positive, got {step}");
    ensure!(start <= stop, "range start {start} exceeds stop {stop}");
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    ensure!(count <= 1_000_000, "range has too many points ({count})");
    Ok((0..count)
        .map(|i| {
            let x = start + i as f64 * step;
            if (x - stop).abs() < 1e-9 * step {
                stop
            } else {
                x
            }
        })
        .collect())
}

impl Values {
    pub fn expand(&self) -> Result<Vec<f64>> {
        let out = match self {
            Values::Num(x) => vec![*x],
            Values::List(xs) => xs.clone(),
            Values::Text(s) if s.contains(':') => {
                let parts: Vec<&str> = s.split(':').collect();
                let [start, stop, step] = parts[..] else {
                    bail!("range must look like start:stop:step, got {s:?}");
                };
                expand_range(parse_number(start)?, parse_number(stop)?, parse_number(step)?)?
            }
            Values::Text(s) => s.split(',').map(parse_number).collect::<Result<_>>()?,
        };
        ensure!(!out.is_empty(), "empty value list");
        Ok(out)
    }

    pub fn expand_counts(&self) -> Result<Vec<usize>> {
        self.expand()?
            .into_iter()
            .map(|x| {
                ensure!(x >= 0.0 && x.fract() == 0.0, "expected a non-negative integer, got {x}");
                Ok(x as usize)
            })
            .collect()
    }

    pub fn scalar(&self, name: &str) -> Result<f64> {
        let xs = self.expand()?;
        ensure!(xs.len() == 1, "--{name} takes a single value here, got {}", xs.len());
        Ok(xs[0])
    }
}

/// Every setting, from flags or a TOML config file. Unset fields fall back to
/// the config file, then to per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Settings {
    /// Master seed for Monte Carlo trials
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Trials per estimate
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for Monte Carlo trials
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[arg(long, global = true, value_enum)]
    pub preset: Option<Preset>,
    /// Formula for `scp`: pair, recycling, subspace, cep_1d, hybrid_1d,
    /// direct_1d, square, cep_square
    #[arg(long, global = true)]
    pub protocol: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<Values>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<Values>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<Values>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub delta: Option<Values>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lam: Option<Values>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nu: Option<Values>,
    /// Edge count(s)
    #[arg(long, global = true)]
    pub n: Option<Values>,
    /// Bond occupation probability
    #[arg(long, global = true)]
    pub p: Option<Values>,
    /// triangular, square, honeycomb or fcc (comma list for `threshold`)
    #[arg(long, global = true)]
    pub lattice: Option<String>,
    #[arg(long, global = true)]
    pub size: Option<usize>,
    /// open or wrap
    #[arg(long, global = true)]
    pub boundary: Option<String>,
    /// Bisection tolerance for `threshold`
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Bond strategy for `network`, e.g. cep_pairwise or cep_recycling:4
    #[arg(long, global = true)]
    pub strategy: Option<String>,
    /// Graph distances from the origin at which to report connection probabilities
    #[arg(long, global = true)]
    pub distances: Option<Values>,
    /// Network description file for `feasibility`
    #[arg(long, global = true)]
    pub network: Option<PathBuf>,
    #[arg(long, global = true)]
    pub from: Option<String>,
    #[arg(long, global = true)]
    pub to: Option<String>,
    /// Perturb one closed form in `verify` (pair, step, direct, hybrid)
    #[arg(long, global = true, hide = true)]
    pub inject_fault: Option<String>,
}

macro_rules! overlay_fields {
    ($base:expr, $top:expr; $($field:ident),*) => {
        Settings { $($field: $top.$field.or($base.$field)),* }
    };
}

impl Settings {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Fields set in `top` win.
    pub fn overlay(self, top: Settings) -> Settings {
        overlay_fields!(self, top; seed, trials, out, format, workers, preset, protocol,
            alpha, beta, gamma, delta, lam, nu, n, p, lattice, size, boundary, tol,
            strategy, distances, network, from, to, inject_fault)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).unwrap_or_else(|e| format!("# unprintable config: {e}\n"))
    }

    /// `key=value` pairs for output metadata. Output path and worker count
    /// are left out so they never change the file contents.
    pub fn echo(&self) -> Vec<(String, String)> {
        let value = serde_json::to_value(self).expect("settings serialize");
        let mut out = Vec::new();
        if let serde_json::Value::Object(map) = value {
            for (k, v) in map {
                if matches!(k.as_str(), "out" | "workers") || v.is_null() {
                    continue;
                }
                let text = match v {
                    serde_json::Value::String(s) => s,
                    serde_json::Value::Array(xs) => xs
                        .iter()
                        .map(|x| x.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                    other => other.to_string(),
                };
                out.push((format!("config.{k}"), text));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_lists() {
        let r = Values::Text("0:1:0.25".into()).expand().unwrap();
        assert_eq!(r, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let r = Values::Text("0:1:0.01".into()).expand().unwrap();
        assert_eq!(r.len(), 101);
        assert_eq!(*r.last().unwrap(), 1.0);
        assert_eq!(Values::Text("0.1, 0.2".into()).expand().unwrap(), vec![0.1, 0.2]);
        assert_eq!(Values::Num(0.3).expand().unwrap(), vec![0.3]);
        assert!(Values::Text("0:1:0".into()).expand().is_err());
        assert!(Values::Text("1:0:0.1".into()).expand().is_err());
        assert!(Values::Text("a".into()).expand().is_err());
        assert!(Values::Text("2.5".into()).expand_counts().is_err());
        assert_eq!(Values::List(vec![2.0, 4.0]).expand_counts().unwrap(), vec![2, 4]);
    }

    #[test]
    fn flags_override_config() {
        let file: Settings = toml::from_str("seed = 3\ntrials = 10\nalpha = \"0:1:0.5\"\nlam = [0.5, 1.0]").unwrap();
        let flags = Settings {
            seed: Some(9),
            ..Settings::default()
        };
        let merged = file.overlay(flags);
        assert_eq!(merged.seed, Some(9));
        assert_eq!(merged.trials, Some(10));
        assert_eq!(merged.lam.unwrap().expand().unwrap(), vec![0.5, 1.0]);
        assert!(toml::from_str::<Settings>("colour = 1").is_err());
    }

    #[test]
    fn echo_skips_output_and_workers() {
        let s = Settings {
            seed: Some(1),
            out: Some("x.csv".into()),
            workers: Some(4),
            lam: Some(Values::List(vec![0.5, 1.0])),
            ..Settings::default()
        };
        let echo = s.echo();
        assert!(echo.contains(&("config.seed".into(), "1".into())));
        assert!(echo.contains(&("config.lam".into(), "0.5,1.0".into())));
        assert!(echo.iter().all(|(k, _)| k != "config.out" && k != "config.workers"));
    }
}
