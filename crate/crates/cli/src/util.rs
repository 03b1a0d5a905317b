use crate::args::{EnsembleArg, McArgs};
use dipe_core::moments::{CoefficientOptions, Value as Coef};
use dipe_core::Ensemble;
use serde_json::Value;
use std::fmt;

#[derive(Debug)]
pub enum CliError {
    /// Bad input; exit code 2.
    Usage(String),
    /// Failure while computing; exit code 1.
    Runtime(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<dipe_core::Error> for CliError {
    fn from(e: dipe_core::Error) -> Self {
        use dipe_core::Error as E;
        match e {
            E::Parse(_) | E::InvalidArgument(_) | E::DimensionMismatch(_) | E::SizeLimit { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Runtime(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Inclusive `a..b` (or a single integer).
pub fn parse_range(s: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad range {s:?}; expected N or A..B"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?),
        None => {
            let v: usize = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo..=hi).collect())
}

pub fn ensembles(e: EnsembleArg) -> Vec<Ensemble> {
    match e {
        EnsembleArg::Clifford => vec![Ensemble::Clifford],
        EnsembleArg::Haar => vec![Ensemble::Haar],
        EnsembleArg::Both => Ensemble::ALL.to_vec(),
    }
}

pub fn coefficient_options(mc: &McArgs) -> CoefficientOptions {
    CoefficientOptions {
        extended_generic: mc.extended_generic,
        mc_samples: if mc.no_mc { None } else { Some(mc.mc_samples) },
        mc_seed: mc.mc_seed,
    }
}

/// JSON number, or a string for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn method(v: &Coef) -> Value {
    Value::String(v.method.to_string())
}

pub fn config_json<T: serde::Serialize>(args: &T) -> Value {
    serde_json::to_value(args).expect("plain argument struct")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
        assert_eq!(parse_range("2..=3").unwrap(), vec![2, 3]);
        assert_eq!(parse_range("5").unwrap(), vec![5]);
        assert!(parse_range("4..2").is_err());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn non_finite_numbers_become_strings() {
        assert_eq!(num(1.5), serde_json::json!(1.5));
        assert_eq!(num(f64::NEG_INFINITY), serde_json::json!("-inf"));
    }
}
