//! Sweep settings from flags and flat `key=value` files.
//!
//! Values from a config file override the corresponding flags.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use hermite_scaling::experiment::{format_n_values, parse_n_values, FunctionSpec, Measure, Schedule, SweepConfig};

use crate::error::{CliError, CliResult};

pub const KEYS: [&str; 7] = ["function", "h", "n", "gamma", "schedule", "measure", "out"];

/// Unresolved settings; every field is optional until [`Settings::resolve`].
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub function: Option<String>,
    pub h: Option<f64>,
    pub n: Option<String>,
    pub gamma: Option<f64>,
    pub schedule: Option<String>,
    pub measure: Option<String>,
    pub out: Option<PathBuf>,
}

/// A validated sweep plus its output path.
#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub sweep: SweepConfig,
    pub out: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn number(key: &str, v: &str) -> CliResult<f64> {
    v.trim()
        .parse()
        .map_err(|_| usage(format!("{key}: `{v}` is not a number")))
}

impl Settings {
    /// Parses a config file body. Blank lines and `#` comments are ignored.
    pub fn parse(text: &str) -> CliResult<Self> {
        let mut s = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key=value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "function" => s.function = Some(value.to_string()),
                "h" => s.h = Some(number(key, value)?),
                "n" => s.n = Some(value.to_string()),
                "gamma" => s.gamma = Some(number(key, value)?),
                "schedule" => s.schedule = Some(value.to_string()),
                "measure" => s.measure = Some(value.to_string()),
                "out" => s.out = Some(PathBuf::from(value)),
                _ => return Err(usage(format!("config line {}: unknown key `{key}`", i + 1))),
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text)
    }

    /// `self` with every field set in `other` replaced.
    pub fn overlay(mut self, other: Settings) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {$( if other.$f.is_some() { self.$f = other.$f; } )*};
        }
        take!(function, h, n, gamma, schedule, measure, out);
        self
    }

    /// The catalog function, with `h` filling in or overriding the
    /// algebraic exponent.
    pub fn function_spec(&self) -> CliResult<FunctionSpec> {
        let spec = match (self.function.as_deref(), self.h) {
            (None, None) => return Err(usage("--function is required")),
            (None, Some(h)) | (Some("algebraic"), Some(h)) => FunctionSpec::Algebraic { h },
            (Some(f), h) => {
                let spec: FunctionSpec = f.parse()?;
                match (spec, h) {
                    (FunctionSpec::Algebraic { .. }, Some(h)) => FunctionSpec::Algebraic { h },
                    (_, Some(_)) => return Err(usage("--h applies only to the algebraic family")),
                    (spec, None) => spec,
                }
            }
        };
        Ok(spec)
    }

    pub fn resolve(&self) -> CliResult<Plan> {
        let function = self.function_spec()?;
        let n_values = parse_n_values(self.n.as_deref().ok_or_else(|| usage("--n is required"))?)?;
        let schedule: Schedule = self.schedule.as_deref().unwrap_or("constant(1)").parse()?;
        let measure: Measure = self.measure.as_deref().unwrap_or("l2_solution").parse()?;
        let sweep = SweepConfig {
            function,
            gamma: self.gamma.unwrap_or(1.0),
            n_values,
            schedule,
            measure,
        };
        sweep.validate()?;
        Ok(Plan {
            sweep,
            out: self.out.clone(),
        })
    }
}

impl Plan {
    /// Serializes to the config-file format; [`Settings::parse`] followed by
    /// [`Settings::resolve`] gives back an identical plan.
    pub fn to_config(&self) -> String {
        let s = &self.sweep;
        let mut text = String::new();
        let _ = writeln!(text, "function = {}", s.function);
        let _ = writeln!(text, "n = {}", format_n_values(&s.n_values));
        let _ = writeln!(text, "gamma = {:e}", s.gamma);
        let _ = writeln!(text, "schedule = {}", s.schedule);
        let _ = writeln!(text, "measure = {}", s.measure);
        if let Some(out) = &self.out {
            let _ = writeln!(text, "out = {}", out.display());
        }
        text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Settings {
        Settings {
            function: Some("algebraic".into()),
            h: Some(1.5),
            n: Some("10:30:10".into()),
            ..Settings::default()
        }
    }

    #[test]
    fn defaults_fill_in() {
        let p = flags().resolve().unwrap();
        assert_eq!(p.sweep.function, FunctionSpec::Algebraic { h: 1.5 });
        assert_eq!(p.sweep.n_values, vec![10, 20, 30]);
        assert_eq!(p.sweep.gamma, 1.0);
        assert_eq!(p.sweep.schedule, Schedule::Constant(1.0));
        assert_eq!(p.sweep.measure, Measure::L2Solution);
    }

    #[test]
    fn file_overrides_flags() {
        let file =
            Settings::parse("# comment\nh = 2.5\nschedule = logsqrt(30)\n\nmeasure=l2_nodal # trailing\n").unwrap();
        let p = flags().overlay(file).resolve().unwrap();
        assert_eq!(p.sweep.function, FunctionSpec::Algebraic { h: 2.5 });
        assert_eq!(p.sweep.schedule, Schedule::LogSqrt(30.0));
        assert_eq!(p.sweep.measure, Measure::L2Nodal);
    }

    #[test]
    fn h_only_means_algebraic() {
        let s = Settings {
            h: Some(2.0),
            n: Some("4,8".into()),
            ..Settings::default()
        };
        assert_eq!(s.function_spec().unwrap(), FunctionSpec::Algebraic { h: 2.0 });
    }

    #[test]
    fn bad_input_is_usage() {
        for text in ["nonsense", "color = red", "gamma = fast"] {
            assert!(matches!(Settings::parse(text), Err(CliError::Usage(_))), "{text}");
        }
        let s = Settings {
            function: Some("gaussian_power:n=4".into()),
            h: Some(1.0),
            n: Some("4".into()),
            ..Settings::default()
        };
        assert!(matches!(s.resolve(), Err(CliError::Usage(_))));
        let s = Settings {
            n: Some("30,20".into()),
            ..flags()
        };
        assert!(matches!(s.resolve(), Err(CliError::Usage(_))));
    }

    #[test]
    fn serialization_round_trips() {
        let mut s = flags();
        s.schedule = Some("power(1,3/8)".into());
        s.gamma = Some(0.1);
        s.out = Some("runs/a.csv".into());
        let p = s.resolve().unwrap();
        let back = Settings::parse(&p.to_config()).unwrap().resolve().unwrap();
        assert_eq!(back, p);
    }
}
