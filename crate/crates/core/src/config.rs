//! Flat `key = value` run configuration.
//!
//! ```text
//! # default grid, contour only
//! alphas   = 1.25, 1.5, 1.75, 2
//! x_tildes = 0, 0.5, -0.5
//! ns       = 1, 2
//! methods  = contour
//! format   = csv
//! output   = scan.csv
//! ```
//!
//! Lists are comma separated and may be wrapped in `[...]`. Unknown keys,
//! repeated keys and malformed values are errors carrying the line number.
//! Missing keys take the default grid and the nondimensional well.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::consistency::{Method, ScanSpec};
use crate::quadrature::ToleranceSpec;
use crate::well::{StateIndex, WellConfig};
use crate::{Error, Result};

pub const KEYS: [&str; 15] = [
    "alphas",
    "x_tildes",
    "ns",
    "methods",
    "a",
    "hbar",
    "d_alpha",
    "amplitude",
    "normalized_amplitude",
    "abs_tol",
    "rel_tol",
    "max_evaluations",
    "format",
    "output",
    "workers",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::InvalidSpec(format!(
                "unknown format `{other}` (expected csv or json)"
            ))),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Csv => "csv",
            Self::Json => "json",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub spec: ScanSpec,
    pub format: OutputFormat,
    /// `None` writes to stdout.
    pub output: Option<PathBuf>,
    /// `None` lets the pool pick.
    pub workers: Option<usize>,
}

fn parse_list<T>(
    raw: &str,
    item: impl Fn(&str) -> std::result::Result<T, String>,
) -> std::result::Result<Vec<T>, String> {
    let inner = raw.trim();
    let inner = inner
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(inner);
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|s| item(s.trim())).collect()
}

fn parse_f64(s: &str) -> std::result::Result<f64, String> {
    s.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| format!("`{s}` is not a finite number"))
}

fn parse_bool(s: &str) -> std::result::Result<bool, String> {
    match s {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(format!("`{s}` is not true or false")),
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        let (mut a, mut hbar, mut d_alpha, mut amplitude) = (1.0, 1.0, 1.0, 1.0);
        let mut normalized = false;
        let mut tol = ToleranceSpec::default();
        let mut seen = HashSet::new();

        for (index, raw_line) in text.lines().enumerate() {
            let line_no = index + 1;
            let err = |message: String| Error::Config { line: line_no, message };
            let line = raw_line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("expected `key = value`, got `{line}`")))?;
            let (key, value) = (key.trim(), value.trim());
            if !KEYS.contains(&key) {
                return Err(err(format!("unknown key `{key}`")));
            }
            if !seen.insert(key.to_string()) {
                return Err(err(format!("key `{key}` given twice")));
            }
            match key {
                "alphas" => cfg.spec.alphas = parse_list(value, parse_f64).map_err(err)?,
                "x_tildes" => cfg.spec.x_tildes = parse_list(value, parse_f64).map_err(err)?,
                "ns" => {
                    cfg.spec.ns = parse_list(value, |s| {
                        s.parse::<i64>()
                            .map_err(|_| format!("`{s}` is not an integer"))
                            .and_then(|k| StateIndex::new(k).map_err(|e| e.to_string()))
                    })
                    .map_err(err)?
                }
                "methods" => {
                    cfg.spec.methods =
                        parse_list(value, |s| s.parse::<Method>().map_err(|e| e.to_string())).map_err(err)?
                }
                "a" => a = parse_f64(value).map_err(err)?,
                "hbar" => hbar = parse_f64(value).map_err(err)?,
                "d_alpha" => d_alpha = parse_f64(value).map_err(err)?,
                "amplitude" => amplitude = parse_f64(value).map_err(err)?,
                "normalized_amplitude" => normalized = parse_bool(value).map_err(err)?,
                "abs_tol" => tol.abs_tol = parse_f64(value).map_err(err)?,
                "rel_tol" => tol.rel_tol = parse_f64(value).map_err(err)?,
                "max_evaluations" => {
                    tol.max_evaluations = value.parse().map_err(|_| err(format!("`{value}` is not a count")))?
                }
                "format" => cfg.format = value.parse().map_err(|e: Error| err(e.to_string()))?,
                "output" => {
                    if value.is_empty() {
                        return Err(err("output path is empty".into()));
                    }
                    cfg.output = Some(PathBuf::from(value));
                }
                "workers" => {
                    cfg.workers = Some(
                        value
                            .parse()
                            .map_err(|_| err(format!("`{value}` is not a worker count")))?,
                    )
                }
                _ => unreachable!("key list and match arms agree"),
            }
        }

        if normalized && seen.contains("amplitude") {
            return Err(Error::Config {
                line: 0,
                message: "`amplitude` and `normalized_amplitude = true` are mutually exclusive".into(),
            });
        }
        let mut well = WellConfig::new(a, hbar, d_alpha, 2.0, amplitude)?;
        if normalized {
            well = well.with_normalized_amplitude();
        }
        cfg.spec.well = well;
        cfg.spec.tol = tol;
        cfg.spec.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> std::io::Result<std::result::Result<Self, Error>> {
        Ok(Self::parse(&std::fs::read_to_string(path)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_is_default() {
        let cfg = RunConfig::parse("# nothing\n\n").unwrap();
        assert_eq!(cfg, RunConfig::default());
    }

    #[test]
    fn full_config() {
        let text = "alphas = [1.5, 2]\nx_tildes = 0, -0.5 # inline\nns = 1,3\nmethods = contour, direct-tail\n\
                    a = 2\nnormalized_amplitude = true\nabs_tol = 1e-9\nrel_tol=1e-10\nmax_evaluations = 5000\n\
                    format = json\noutput = out.json\nworkers = 2\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.spec.alphas, vec![1.5, 2.0]);
        assert_eq!(cfg.spec.x_tildes, vec![0.0, -0.5]);
        assert_eq!(cfg.spec.ns.iter().map(|n| n.get()).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(cfg.spec.methods, vec![Method::Contour, Method::DirectTail]);
        assert_eq!(cfg.spec.well.a(), 2.0);
        assert_eq!(cfg.spec.well.amplitude(), 1.0 / 2f64.sqrt());
        assert_eq!(cfg.spec.tol, ToleranceSpec::new(1e-9, 1e-10, 5000).unwrap());
        assert_eq!(cfg.format, OutputFormat::Json);
        assert_eq!(cfg.output, Some(PathBuf::from("out.json")));
        assert_eq!(cfg.workers, Some(2));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("\nspeed = 3\n", 2),
            ("alphas = 1.5\nalphas = 2\n", 2),
            ("ns = 0\n", 1),
            ("methods = simpson\n", 1),
            ("a = abc\n", 1),
            ("just words\n", 1),
            ("format = xml\n", 1),
        ];
        for (text, line) in cases {
            match RunConfig::parse(text) {
                Err(Error::Config { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn semantic_errors() {
        assert!(matches!(
            RunConfig::parse("alphas = 0.5\n"),
            Err(Error::InvalidAlpha(_))
        ));
        assert!(RunConfig::parse("alphas = []\n").is_err());
        assert!(RunConfig::parse("a = -1\n").is_err());
        assert!(RunConfig::parse("amplitude = 2\nnormalized_amplitude = true\n").is_err());
    }
}
