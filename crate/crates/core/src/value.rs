//! Flow values exchanged between components.

use alloc::string::String;
use alloc::vec::Vec;

/// Dynamically typed payload carried by flows and trace records.
///
/// Models declare their own value sets informally; the kernel only moves
/// values around.
#[derive(Clone, Debug, PartialEq, Default)]
pub enum Value {
    #[default]
    Unit,
    Bool(bool),
    Int(i64),
    Real(f64),
    Text(String),
    List(Vec<Value>),
    Record(Vec<(String, Value)>),
}

impl Value {
    /// Builds a record from `(key, value)` pairs, keeping their order.
    pub fn record<K, I>(fields: I) -> Value
    where
        K: Into<String>,
        I: IntoIterator<Item = (K, Value)>,
    {
        Value::Record(fields.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }

    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(r) => Some(*r),
            Value::Int(i) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            Value::Int(i) => Some(*i),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_str(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_list(&self) -> Option<&[Value]> {
        match self {
            Value::List(l) => Some(l),
            _ => None,
        }
    }

    /// Field lookup on records; `None` for other variants.
    pub fn get(&self, key: &str) -> Option<&Value> {
        match self {
            Value::Record(fields) => fields.iter().find(|(k, _)| k == key).map(|(_, v)| v),
            _ => None,
        }
    }
}

impl From<f64> for Value {
    fn from(v: f64) -> Self {
        Value::Real(v)
    }
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.into())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

/// A hybrid flow value: a continuous part that is always present and a
/// discrete part that is `None` (the null mark) outside event instants.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FlowValue {
    pub continuous: Value,
    pub discrete: Option<Value>,
}

impl FlowValue {
    pub fn new(continuous: Value, discrete: Option<Value>) -> Self {
        FlowValue {
            continuous,
            discrete,
        }
    }

    /// `(unit, ∅)`: the input the root coordinator feeds a closed model.
    pub fn null() -> Self {
        FlowValue::default()
    }

    /// Continuous-only value with a null discrete part.
    pub fn continuous(continuous: impl Into<Value>) -> Self {
        FlowValue {
            continuous: continuous.into(),
            discrete: None,
        }
    }

    pub fn event(continuous: impl Into<Value>, discrete: impl Into<Value>) -> Self {
        FlowValue {
            continuous: continuous.into(),
            discrete: Some(discrete.into()),
        }
    }

    pub fn has_event(&self) -> bool {
        self.discrete.is_some()
    }

    /// `{c, d}` record; a null discrete part becomes `Unit`.
    pub fn to_value(&self) -> Value {
        Value::record([
            ("c", self.continuous.clone()),
            ("d", self.discrete.clone().unwrap_or(Value::Unit)),
        ])
    }
}
