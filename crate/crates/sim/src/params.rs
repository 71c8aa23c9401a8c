//! `key=value` model parameters.

use std::collections::BTreeMap;
use std::str::FromStr;

use thiserror::Error;

/// A parameter a model accepts, with its default as written on the
/// command line. An empty default means "unset".
#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: &'static str,
    pub doc: &'static str,
}

#[derive(Debug, Error, PartialEq)]
pub enum ParamError {
    #[error("unknown parameter `{name}` (accepted: {accepted})")]
    Unknown { name: String, accepted: String },
    #[error("parameter `{0}` given more than once")]
    Duplicate(String),
    #[error("malformed parameter `{0}`, expected key=value")]
    Malformed(String),
    #[error("invalid value `{value}` for `{name}`: {reason}")]
    Invalid {
        name: String,
        value: String,
        reason: String,
    },
}

/// Validated parameter values, defaults filled in.
#[derive(Clone, Debug)]
pub struct Params {
    values: BTreeMap<&'static str, String>,
}

/// Splits `key=value`.
pub fn split_pair(raw: &str) -> Result<(String, String), ParamError> {
    match raw.split_once('=') {
        Some((k, v)) if !k.is_empty() => Ok((k.to_string(), v.to_string())),
        _ => Err(ParamError::Malformed(raw.to_string())),
    }
}

impl Params {
    pub fn parse(
        specs: &'static [ParamSpec],
        given: &[(String, String)],
    ) -> Result<Self, ParamError> {
        let mut values: BTreeMap<&'static str, String> = specs
            .iter()
            .map(|s| (s.name, s.default.to_string()))
            .collect();
        let mut seen = Vec::new();
        for (key, value) in given {
            let Some(spec) = specs.iter().find(|s| s.name == key) else {
                return Err(ParamError::Unknown {
                    name: key.clone(),
                    accepted: specs.iter().map(|s| s.name).collect::<Vec<_>>().join(", "),
                });
            };
            if seen.contains(&spec.name) {
                return Err(ParamError::Duplicate(key.clone()));
            }
            seen.push(spec.name);
            values.insert(spec.name, value.clone());
        }
        Ok(Params { values })
    }

    fn raw(&self, name: &str) -> &str {
        self.values
            .get(name)
            .unwrap_or_else(|| panic!("parameter `{name}` is not declared"))
    }

    fn invalid(&self, name: &str, reason: impl Into<String>) -> ParamError {
        ParamError::Invalid {
            name: name.into(),
            value: self.raw(name).into(),
            reason: reason.into(),
        }
    }

    pub fn is_set(&self, name: &str) -> bool {
        !self.raw(name).is_empty()
    }

    pub fn text(&self, name: &str) -> &str {
        self.raw(name)
    }

    pub fn get<T: FromStr>(&self, name: &str) -> Result<T, ParamError>
    where
        T::Err: std::fmt::Display,
    {
        self.raw(name)
            .trim()
            .parse()
            .map_err(|e: T::Err| self.invalid(name, e.to_string()))
    }

    pub fn opt<T: FromStr>(&self, name: &str) -> Result<Option<T>, ParamError>
    where
        T::Err: std::fmt::Display,
    {
        if self.is_set(name) {
            self.get(name).map(Some)
        } else {
            Ok(None)
        }
    }

    /// A finite real strictly greater than zero.
    pub fn positive(&self, name: &str) -> Result<f64, ParamError> {
        let v: f64 = self.get(name)?;
        if v.is_finite() && v > 0.0 {
            Ok(v)
        } else {
            Err(self.invalid(name, "must be a finite number > 0"))
        }
    }

    /// Comma-separated finite reals; empty when unset.
    pub fn reals(&self, name: &str) -> Result<Vec<f64>, ParamError> {
        if !self.is_set(name) {
            return Ok(Vec::new());
        }
        self.raw(name)
            .split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                Ok(_) => Err(self.invalid(name, "values must be finite")),
                Err(e) => Err(self.invalid(name, e.to_string())),
            })
            .collect()
    }

    /// One of `choices`.
    pub fn choice(&self, name: &str, choices: &[&str]) -> Result<&str, ParamError> {
        let v = self.raw(name);
        if choices.contains(&v) {
            Ok(v)
        } else {
            Err(self.invalid(name, format!("expected one of {}", choices.join("|"))))
        }
    }
}
