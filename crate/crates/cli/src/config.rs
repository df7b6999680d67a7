use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown experiment `{0}` (expected one of {names})", names = Experiment::NAMES.join(", "))]
    UnknownExperiment(String),

    #[error("malformed grid `{0}`: expected <param>=<start>:<stop>:<step>")]
    MalformedGrid(String),

    #[error("grid `{param}`: {reason}")]
    InvalidRange { param: String, reason: String },

    #[error("experiment `{experiment}` has no parameter `{param}` (expected one of {expected})")]
    UnknownParameter { experiment: Experiment, param: String, expected: String },

    #[error("parameter `{0}` given more than once")]
    DuplicateParameter(String),

    #[error("trials must be at least 1")]
    NoTrials,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Experiment {
    Fig2Region,
    Fig3Measures,
    Fig4Conc,
    Fig5Neg,
    Fig6Compare,
    SwapPure,
    SwapGhz,
    Teleport,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Self::Fig2Region,
        Self::Fig3Measures,
        Self::Fig4Conc,
        Self::Fig5Neg,
        Self::Fig6Compare,
        Self::SwapPure,
        Self::SwapGhz,
        Self::Teleport,
    ];

    pub const NAMES: [&'static str; 8] =
        ["fig2-region", "fig3-measures", "fig4-conc", "fig5-neg", "fig6-compare", "swap-pure", "swap-ghz", "teleport"];

    pub fn name(self) -> &'static str {
        Self::NAMES[self as usize]
    }

    /// Grid parameters in row-major order (first varies slowest) with their
    /// default ranges.
    pub fn parameters(self) -> &'static [(&'static str, Range)] {
        const UNIT: Range = Range { start: 0.0, stop: 1.0, step: 0.01 };
        const HALF: Range = Range { start: 0.5, stop: 0.5, step: 1.0 };
        const COARSE: Range = Range { start: 0.0, stop: 1.0, step: 0.1 };
        const QUARTER: Range = Range { start: 0.0, stop: 1.0, step: 0.25 };
        match self {
            Self::Fig2Region | Self::Fig4Conc | Self::Fig5Neg | Self::Fig6Compare => &[("alpha", UNIT), ("p0", UNIT)],
            Self::Fig3Measures => &[("p0", HALF), ("alpha", UNIT)],
            Self::SwapPure => &[("p0", COARSE), ("q0", COARSE), ("a0", BELL_AMPLITUDE), ("a1", BELL_AMPLITUDE)],
            Self::SwapGhz => &[("p0", QUARTER), ("q0", QUARTER), ("r0", QUARTER)],
            Self::Teleport => &[("p0", HALF), ("alpha", Range { start: 0.0, stop: 1.0, step: 0.05 })],
        }
    }
}

const BELL_AMPLITUDE: Range =
    Range { start: std::f64::consts::FRAC_1_SQRT_2, stop: std::f64::consts::FRAC_1_SQRT_2, step: 1.0 };

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Self::NAMES
            .iter()
            .position(|n| *n == s)
            .map(|k| Self::ALL[k])
            .ok_or_else(|| ConfigError::UnknownExperiment(s.to_string()))
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive range `start, start + step, …` up to `stop`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self, String> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("bounds and step must be finite".into());
        }
        if step <= 0.0 {
            return Err(format!("step {step} must be positive"));
        }
        if start > stop {
            return Err(format!("start {start} exceeds stop {stop}"));
        }
        Ok(Self { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| (self.start + k as f64 * self.step).min(self.stop)).collect()
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [start, stop, step] = parts[..] else {
            return Err("expected <start>:<stop>:<step>".into());
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("`{x}` is not a number"));
        Range::new(num(start)?, num(stop)?, num(step)?)
    }
}

/// One `--grid` argument.
#[derive(Clone, Debug, PartialEq)]
pub struct GridArg {
    pub param: String,
    pub range: Range,
}

impl FromStr for GridArg {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        let (param, range) = s.split_once('=').ok_or_else(|| ConfigError::MalformedGrid(s.to_string()))?;
        let param = param.trim().to_string();
        if param.is_empty() {
            return Err(ConfigError::MalformedGrid(s.to_string()));
        }
        let range = range.parse().map_err(|reason| ConfigError::InvalidRange { param: param.clone(), reason })?;
        Ok(Self { param, range })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub experiment: Experiment,
    /// Every parameter of the experiment, in row-major order.
    pub grid: Vec<(String, Range)>,
    pub output_path: PathBuf,
    pub seed: u64,
}

impl SweepConfig {
    /// Fills unspecified parameters with their defaults and checks that every
    /// value lies in `[0, 1]`.
    pub fn new(experiment: Experiment, grid: &[GridArg], output_path: PathBuf, seed: u64) -> Result<Self, ConfigError> {
        let params = experiment.parameters();
        for (k, g) in grid.iter().enumerate() {
            if !params.iter().any(|(name, _)| *name == g.param) {
                return Err(ConfigError::UnknownParameter {
                    experiment,
                    param: g.param.clone(),
                    expected: params.iter().map(|(n, _)| *n).collect::<Vec<_>>().join(", "),
                });
            }
            if grid[..k].iter().any(|h| h.param == g.param) {
                return Err(ConfigError::DuplicateParameter(g.param.clone()));
            }
            if g.range.start < 0.0 || g.range.stop > 1.0 {
                return Err(ConfigError::InvalidRange {
                    param: g.param.clone(),
                    reason: "values must lie in [0, 1]".into(),
                });
            }
        }
        let grid = params
            .iter()
            .map(|(name, default)| {
                let range = grid.iter().find(|g| g.param == *name).map_or(*default, |g| g.range);
                (name.to_string(), range)
            })
            .collect();
        Ok(Self { experiment, grid, output_path, seed })
    }

    /// Cartesian product of the parameter values, first parameter slowest.
    pub fn points(&self) -> Vec<Vec<f64>> {
        let mut points = vec![Vec::new()];
        for (_, range) in &self.grid {
            let values = range.values();
            points = points
                .into_iter()
                .flat_map(|p| {
                    values.iter().map(move |&v| {
                        let mut q = p.clone();
                        q.push(v);
                        q
                    })
                })
                .collect();
        }
        points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_grid_arguments() {
        let g: GridArg = "alpha=0:1:0.25".parse().unwrap();
        assert_eq!(g.param, "alpha");
        assert_eq!(g.range.values(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert!(matches!("alpha".parse::<GridArg>(), Err(ConfigError::MalformedGrid(_))));
        assert!(matches!("alpha=0:1".parse::<GridArg>(), Err(ConfigError::InvalidRange { .. })));
        assert!(matches!("alpha=1:0:0.1".parse::<GridArg>(), Err(ConfigError::InvalidRange { .. })));
        assert!(matches!("alpha=0:1:0".parse::<GridArg>(), Err(ConfigError::InvalidRange { .. })));
        assert!(matches!("alpha=0:x:0.1".parse::<GridArg>(), Err(ConfigError::InvalidRange { .. })));
    }

    #[test]
    fn range_endpoints_survive_rounding() {
        let v = Range::new(0.0, 1.0, 0.01).unwrap().values();
        assert_eq!(v.len(), 101);
        assert_eq!(*v.last().unwrap(), 1.0);
        assert_eq!(Range::new(0.2, 0.2, 0.1).unwrap().values(), vec![0.2]);
        assert_eq!(Range::new(0.0, 1.0, 0.3).unwrap().values().len(), 4);
    }

    #[test]
    fn experiment_names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("fig7".parse::<Experiment>().is_err());
    }

    #[test]
    fn config_fills_defaults_in_order() {
        let grid = ["p0=0.5:0.5:1".parse().unwrap()];
        let cfg = SweepConfig::new(Experiment::Fig6Compare, &grid, "x.csv".into(), 0).unwrap();
        assert_eq!(cfg.grid[0].0, "alpha");
        assert_eq!(cfg.grid[1].1.values(), vec![0.5]);
        let points = cfg.points();
        assert_eq!(points.len(), 101);
        assert_eq!(points[1], vec![0.01, 0.5]);
    }

    #[test]
    fn config_rejects_bad_parameters() {
        let unknown = ["q0=0:1:0.5".parse().unwrap()];
        assert!(matches!(
            SweepConfig::new(Experiment::Fig4Conc, &unknown, "x".into(), 0),
            Err(ConfigError::UnknownParameter { .. })
        ));
        let twice: Vec<GridArg> = vec!["p0=0:1:0.5".parse().unwrap(), "p0=0:1:0.25".parse().unwrap()];
        assert!(matches!(
            SweepConfig::new(Experiment::Fig4Conc, &twice, "x".into(), 0),
            Err(ConfigError::DuplicateParameter(_))
        ));
        let wide = ["alpha=0:1.5:0.5".parse().unwrap()];
        assert!(SweepConfig::new(Experiment::Fig4Conc, &wide, "x".into(), 0).is_err());
    }
}
