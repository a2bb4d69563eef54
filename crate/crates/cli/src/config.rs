//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments and blank lines are ignored
//! experiment = gauss
//! alpha = 0.5, 1.0
//! grid = 12, 24
//! field = x=poly:0,1; 0; 0
//! ```
//!
//! Everything after the first `=` is the value, so registry keys may contain
//! `=`, `,` and `;`. Command-line overrides go through [`ExperimentConfig::set`]
//! with the same keys.

use crate::error::CliError;
use fracvec::{Format, Interval};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Ftfc,
    Semigroup,
    Identities,
    Green,
    Stokes,
    Gauss,
    Region,
    Maxwell,
    Wave1d,
    Convolution,
    Convergence,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::Ftfc,
        Experiment::Semigroup,
        Experiment::Identities,
        Experiment::Green,
        Experiment::Stokes,
        Experiment::Gauss,
        Experiment::Region,
        Experiment::Maxwell,
        Experiment::Wave1d,
        Experiment::Convolution,
        Experiment::Convergence,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Ftfc => "ftfc",
            Experiment::Semigroup => "semigroup",
            Experiment::Identities => "identities",
            Experiment::Green => "green",
            Experiment::Stokes => "stokes",
            Experiment::Gauss => "gauss",
            Experiment::Region => "region",
            Experiment::Maxwell => "maxwell",
            Experiment::Wave1d => "wave1d",
            Experiment::Convolution => "convolution",
            Experiment::Convergence => "convergence",
        }
    }

    /// Library verifiers each experiment calls.
    pub fn verifiers(self) -> &'static [&'static str] {
        match self {
            Experiment::Ftfc => &[
                "ftfc_left_inverse_residual",
                "newton_leibniz_residual",
                "ftfc_higher_residual",
                "rl_newton_leibniz_correction",
                "rl_newton_leibniz_lower_limit_rhs",
            ],
            Experiment::Semigroup => &[
                "integral_semigroup_residual",
                "caputo_square_vs_double_order",
                "caputo_semigroup_counterexample",
                "leibniz_series",
            ],
            Experiment::Identities => &[
                "curl_grad_semidiscrete",
                "div_curl_semidiscrete",
                "double_curl_semidiscrete",
                "curl_grad_residual",
                "div_curl_residual",
                "double_curl_residual",
                "classical::curl_grad_semidiscrete",
                "classical::div_curl_semidiscrete",
                "classical::double_curl_semidiscrete",
                "leibniz_violation_gap",
            ],
            Experiment::Green => &["green_residual", "green_residual_classical"],
            Experiment::Stokes => &["stokes_residual", "stokes_residual_classical"],
            Experiment::Gauss => &["gauss_residual", "gauss_residual_classical"],
            Experiment::Region => &["elementary_region_integral", "indicator_embedding"],
            Experiment::Maxwell => &[
                "calibrate_dt",
                "gauss_constraint_residuals",
                "wave_residual",
                "charge_conservation_residual",
                "integral_charge_balance",
            ],
            Experiment::Wave1d => &["wave_1d_wright_solution", "wave_1d_marching", "dalembert_mode"],
            Experiment::Convolution => &["caputo_from_convolution", "convolution_gap"],
            Experiment::Convergence => &["convergence_order"],
        }
    }

    fn default_tolerance(self) -> f64 {
        match self {
            Experiment::Ftfc | Experiment::Convolution => 1e-2,
            Experiment::Convergence => 0.8,
            _ => 5e-2,
        }
    }

    fn default_grid(self) -> Vec<usize> {
        match self {
            Experiment::Ftfc | Experiment::Semigroup | Experiment::Convolution | Experiment::Convergence => {
                vec![128, 256, 512]
            }
            Experiment::Green | Experiment::Region => vec![16, 32, 64],
            Experiment::Identities => vec![24, 48],
            Experiment::Stokes | Experiment::Gauss => vec![12, 24],
            Experiment::Maxwell => vec![12],
            Experiment::Wave1d => vec![801, 1601],
        }
    }

    fn default_bounds(self) -> Interval {
        match self {
            Experiment::Wave1d => Interval { a: -3.0, b: 5.0 },
            _ => Interval::unit(),
        }
    }

    fn default_function(self) -> &'static str {
        match self {
            Experiment::Ftfc => "sin",
            Experiment::Semigroup => "poly:0,1",
            Experiment::Identities => "x=sin*y=exp*z=poly:1,1",
            Experiment::Green => "x=poly:0,1*y=poly:0,0,1",
            Experiment::Stokes | Experiment::Gauss => "x=poly:0,0,1*y=poly:0,1; y=sin*z=poly:1,0,1; x=exp*z=poly:0,1",
            Experiment::Region => "x=poly:0,1*y=poly:0,1",
            Experiment::Maxwell => "0; x=sin; 0",
            Experiment::Convolution => "poly:0,0,1",
            Experiment::Wave1d | Experiment::Convergence => "",
        }
    }

    fn default_field(self) -> &'static str {
        match self {
            Experiment::Semigroup => "poly:0,1",
            Experiment::Identities => "x=poly:0,0,1*y=sin*z=exp; x=poly:1,1*y=exp*z=poly:0,1; x=sin*y=poly:0,0,1*z=exp",
            Experiment::Green => "x=sin*y=exp",
            Experiment::Maxwell => "0; 0; x=sin",
            _ => "",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let s = s.trim();
        Experiment::ALL.into_iter().find(|e| e.name() == s).ok_or_else(|| CliError::UnknownExperiment(s.to_string()))
    }
}

/// One experiment over the cross product `alpha × grid`.
///
/// Registry keys are kept as text and parsed when rows run, so a bad key
/// is reported against the row that used it.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub alpha: Vec<f64>,
    pub grid: Vec<usize>,
    /// Interval used for every axis; the experiment default when `None`.
    pub bounds: Option<Interval>,
    /// 1-D function, scalar field or vector field, depending on the experiment.
    pub function: Option<String>,
    /// Second registry key: `g` for Leibniz, `F_y` for Green, the vector field
    /// for identities, `B` for Maxwell.
    pub field: Option<String>,
    pub lower: String,
    pub upper: String,
    /// Manufactured current for the Maxwell charge checks.
    pub current: String,
    pub g: [f64; 3],
    pub steps: usize,
    /// Wave probe `(x, t)`.
    pub probe: [f64; 2],
    /// Gaussian boundary pulse `(centre, width)` for wave1d.
    pub pulse: [f64; 2],
    /// Experiment swept by `convergence`.
    pub study: Experiment,
    /// Row pass threshold: residual ceiling, or the minimum order for `convergence`.
    pub tolerance: f64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>, CliError> {
    let v: Result<Vec<T>, _> = value.split(',').map(|t| t.trim().parse::<T>()).collect();
    match v {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Value { key: key.to_string(), value: value.to_string() }),
    }
}

fn fixed<const N: usize>(key: &str, value: &str) -> Result<[f64; N], CliError> {
    list::<f64>(key, value)?.try_into().map_err(|_| CliError::Value { key: key.to_string(), value: value.to_string() })
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value.trim().parse().map_err(|_| CliError::Value { key: key.to_string(), value: value.to_string() })
}

impl ExperimentConfig {
    /// Defaults for `experiment`.
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            alpha: vec![0.5],
            grid: experiment.default_grid(),
            bounds: None,
            function: None,
            field: None,
            lower: "poly:0".into(),
            upper: "poly:0,1".into(),
            current: "x=sin*y=poly:1,1; y=exp*z=poly:0,0,1; x=poly:0,1*z=sin".into(),
            g: [1.0; 3],
            steps: 10,
            probe: [0.5, 1.0],
            pulse: [0.8, 0.02],
            study: Experiment::Ftfc,
            tolerance: experiment.default_tolerance(),
            out: None,
            format: Format::Csv,
        }
    }

    /// Parses a config file. `experiment` may appear anywhere; the other
    /// keys are applied on top of that experiment's defaults in file order.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config { line: i + 1, msg: format!("expected key = value, got `{line}`") })?;
            pairs.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let name = pairs
            .iter()
            .rev()
            .find(|(_, k, _)| k == "experiment")
            .map(|(_, _, v)| v.as_str())
            .ok_or(CliError::Config { line: 0, msg: "missing `experiment`".into() })?;
        let mut cfg = ExperimentConfig::new(name.parse()?);
        for (line, k, v) in &pairs {
            if k != "experiment" {
                cfg.set(k, v).map_err(|e| CliError::Config { line: *line, msg: e.to_string() })?;
            }
        }
        Ok(cfg)
    }

    /// Sets one key. Setting `experiment` resets nothing else.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        match key {
            "experiment" => self.experiment = value.parse()?,
            "alpha" => self.alpha = list(key, value)?,
            "grid" => self.grid = list(key, value)?,
            "bounds" => {
                let [a, b] = fixed(key, value)?;
                self.bounds = Some(Interval::new(a, b)?);
            }
            "function" => self.function = Some(value.trim().to_string()),
            "field" => self.field = Some(value.trim().to_string()),
            "lower" => self.lower = value.trim().to_string(),
            "upper" => self.upper = value.trim().to_string(),
            "current" => self.current = value.trim().to_string(),
            "g" => self.g = fixed(key, value)?,
            "steps" => self.steps = scalar(key, value)?,
            "probe" => self.probe = fixed(key, value)?,
            "pulse" => self.pulse = fixed(key, value)?,
            "study" => self.study = value.parse()?,
            "tolerance" => self.tolerance = scalar(key, value)?,
            "out" => self.out = Some(PathBuf::from(value.trim())),
            "format" => self.format = value.parse()?,
            _ => return Err(CliError::Value { key: key.to_string(), value: "unknown key".into() }),
        }
        Ok(())
    }

    pub fn bounds(&self) -> Interval {
        self.bounds.unwrap_or(self.experiment.default_bounds())
    }

    pub fn function(&self) -> &str {
        self.function.as_deref().unwrap_or(self.experiment.default_function())
    }

    pub fn field(&self) -> &str {
        self.field.as_deref().unwrap_or(self.experiment.default_field())
    }

    /// Checks the list invariants and the study target.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.alpha.is_empty() || self.grid.is_empty() {
            return Err(CliError::Config { line: 0, msg: "alpha and grid lists must be nonempty".into() });
        }
        if self.experiment == Experiment::Convergence && self.study == Experiment::Convergence {
            return Err(CliError::Config { line: 0, msg: "convergence cannot study itself".into() });
        }
        if self.steps == 0 {
            return Err(CliError::Value { key: "steps".into(), value: "0".into() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_file_with_registry_values() {
        let cfg = ExperimentConfig::parse(
            "# gauss benchmark\nalpha = 0.5, 1\ngrid=24\nexperiment = gauss\nfunction = x=poly:0,1; 0; 0\nformat = json\n",
        )
        .unwrap();
        assert_eq!(cfg.experiment, Experiment::Gauss);
        assert_eq!(cfg.alpha, vec![0.5, 1.0]);
        assert_eq!(cfg.grid, vec![24]);
        assert_eq!(cfg.function(), "x=poly:0,1; 0; 0");
        assert_eq!(cfg.field(), "");
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.tolerance, 5e-2);
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(ExperimentConfig::parse("experiment = nope"), Err(CliError::UnknownExperiment(_))));
        assert!(matches!(ExperimentConfig::parse("alpha = 0.5"), Err(CliError::Config { .. })));
        assert!(matches!(ExperimentConfig::parse("experiment = ftfc\njunk"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(
            ExperimentConfig::parse("experiment = ftfc\ngrid = 12, x"),
            Err(CliError::Config { line: 2, .. })
        ));
        assert!(matches!(ExperimentConfig::parse("experiment = ftfc\ncolour = red"), Err(CliError::Config { .. })));
    }

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
    }

    #[test]
    fn empty_lists_are_invalid() {
        let mut cfg = ExperimentConfig::new(Experiment::Ftfc);
        cfg.grid.clear();
        assert!(cfg.validate().is_err());
    }
}
