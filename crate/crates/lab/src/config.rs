//! Run settings: a config file (TOML or JSON) merged under command-line flags.
//!
//! ```toml
//! seed = 7
//! budget = 200000
//! grid = "0.5:4:6:log"
//! alpha = [1, 2]
//! out = "reports"
//!
//! [constants]
//! C0 = 1.0
//! R0 = 100.0
//! ```

use std::path::{Path, PathBuf};
use std::str::FromStr;

use entropy_core::functionals::PaperConstants;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::formats;

/// `start:stop:points`, optionally suffixed `:log` for geometric spacing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn log(start: f64, stop: f64, points: usize) -> Self {
        Self {
            start,
            stop,
            points,
            log: true,
        }
    }

    /// The resolutions, positive and strictly ascending.
    pub fn expand(&self) -> Result<Vec<f64>> {
        let bad = |why: &str| Err(LabError::Input(format!("grid {self}: {why}")));
        if !(self.start.is_finite() && self.stop.is_finite() && self.start > 0.0) {
            return bad("bounds must be finite and positive");
        }
        match self.points {
            0 => return bad("needs at least one point"),
            1 if self.start != self.stop => return bad("a single point needs start = stop"),
            1 => return Ok(vec![self.start]),
            _ if self.stop <= self.start => return bad("stop must exceed start"),
            _ => {}
        }
        let steps = (self.points - 1) as f64;
        let grid: Vec<f64> = (0..self.points)
            .map(|i| {
                let s = i as f64 / steps;
                if i + 1 == self.points {
                    self.stop
                } else if self.log {
                    round_sig(self.start * (self.stop / self.start).powf(s))
                } else {
                    self.start + (self.stop - self.start) * s
                }
            })
            .collect();
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return bad("points too close to be distinct");
        }
        Ok(grid)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.points)?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

impl FromStr for GridSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.as_slice() {
            [_, _, _] => false,
            [_, _, _, "log"] => true,
            [_, _, _, "lin"] => false,
            _ => return Err(format!("`{s}`: expected start:stop:points[:log]")),
        };
        let num = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|e| format!("`{s}`: {x}: {e}"))
        };
        let points = parts[2]
            .trim()
            .parse::<usize>()
            .map_err(|e| format!("`{s}`: {}: {e}", parts[2]))?;
        Ok(Self {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            points,
            log,
        })
    }
}

impl TryFrom<String> for GridSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<GridSpec> for String {
    fn from(g: GridSpec) -> String {
        g.to_string()
    }
}

/// Rounds to 12 significant digits so that `1:8:4:log` gives exactly
/// `1, 2, 4, 8`.
fn round_sig(x: f64) -> f64 {
    format!("{x:.11e}").parse().unwrap_or(x)
}

/// Settings read from `--config`. Every field is optional; flags given on the
/// command line take precedence.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub budget: Option<usize>,
    pub workers: Option<usize>,
    pub grid: Option<GridSpec>,
    pub alpha: Option<Vec<f64>>,
    pub body: Vec<PathBuf>,
    pub out: Option<PathBuf>,
    pub constants: PaperConstants,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let cfg: Self = formats::load(path)?;
        cfg.constants.validate()?;
        Ok(cfg)
    }
}

/// Candidate budget when none is given: `2·10⁵` up to dimension 3,
/// `10⁶` above.
pub fn default_budget(dim: usize) -> usize {
    if dim <= 3 { 200_000 } else { 1_000_000 }
}

/// Six geometric resolutions from `R/8` to `R`, the range where `N(K, tD)`
/// moves for a body of circumradius `R`.
pub fn default_grid(circumradius: f64) -> GridSpec {
    GridSpec::log(circumradius / 8.0, circumradius, 6)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_grid() {
        let g: GridSpec = "1:8:4:log".parse().unwrap();
        let v = g.expand().unwrap();
        assert_eq!(v, vec![1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn linear_grid_and_errors() {
        assert_eq!(
            "1:2:3".parse::<GridSpec>().unwrap().expand().unwrap(),
            vec![1.0, 1.5, 2.0]
        );
        assert!("1:2".parse::<GridSpec>().is_err());
        assert!("1:2:3:cubic".parse::<GridSpec>().is_err());
        assert!("0:2:3".parse::<GridSpec>().unwrap().expand().is_err());
        assert!("2:1:3".parse::<GridSpec>().unwrap().expand().is_err());
        assert_eq!(
            "3:3:1".parse::<GridSpec>().unwrap().expand().unwrap(),
            vec![3.0]
        );
    }

    #[test]
    fn toml_and_json_configs_agree() {
        let toml = "seed = 7\ngrid = \"1:8:4:log\"\nalpha = [1.0, 2.0]\n[constants]\nC0 = 2.0\n";
        let json = r#"{"seed": 7, "grid": "1:8:4:log", "alpha": [1, 2], "constants": {"C0": 2}}"#;
        let a: RunConfig = formats::parse_toml(Path::new("c.toml"), toml).unwrap();
        let b: RunConfig = formats::parse_json(Path::new("c.json"), json).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.constants.c0, 2.0);
        assert_eq!(a.constants.c2, 1.0);
    }

    #[test]
    fn bad_grid_in_config_reports_field() {
        let err =
            formats::parse_toml::<RunConfig>(Path::new("c.toml"), "seed = 1\ngrid = \"1:x:4\"\n")
                .unwrap_err();
        match err {
            LabError::Parse { path, line, .. } => {
                assert_eq!(path, "grid");
                assert_eq!(line, 2);
            }
            other => panic!("{other}"),
        }
    }
}
