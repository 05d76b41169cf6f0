//! Scenario files: a chart dimension, named objects and a task list.
//!
//! ```json
//! {
//!   "name": "c2-linear",
//!   "n": 2,
//!   "seed": 7,
//!   "order": 2,
//!   "samples": 10,
//!   "objects": { "beta": "z1*@1^^@2" },
//!   "tasks": [ { "command": "deform", "beta": "beta", "expect": { "residual_zero_through": 2 } } ]
//! }
//! ```
//!
//! A string parameter that names an object is replaced by that object;
//! otherwise it is parsed as an expression. Points are arrays of `2n` real
//! coordinates `(x1..xn, y1..yn)` written as integers or `"p/q"` strings.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;
use serde_json::Value as Json;

use crate::error::CliError;

pub const DEFAULT_ORDER: usize = 2;
pub const DEFAULT_SAMPLES: usize = 20;

pub const COMMANDS: &[&str] = &[
    "check-poisson",
    "poisson-sub",
    "conormal-invariant",
    "j-sub",
    "gcs-type",
    "kahler-pair",
    "spinor-pullback",
    "deform",
    "bihermitian",
    "obstruction-rank",
    "extends-projective",
    "brackets",
];

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub n: usize,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub order: Option<usize>,
    #[serde(default)]
    pub samples: Option<usize>,
    #[serde(default)]
    pub degree_bound: Option<u32>,
    #[serde(default)]
    pub objects: BTreeMap<String, Json>,
    pub tasks: Vec<Task>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Task {
    pub command: String,
    /// Detail values the task must reproduce; replaces the command's own
    /// verdict when present. `"error": code` expects that error.
    #[serde(default)]
    pub expect: Option<BTreeMap<String, Json>>,
    #[serde(flatten)]
    pub params: BTreeMap<String, Json>,
}

/// Run-wide settings after command-line overrides.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Settings {
    pub seed: u64,
    pub order: usize,
    pub samples: usize,
    pub degree_bound: Option<u32>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub order: Option<usize>,
    pub samples: Option<usize>,
    pub degree_bound: Option<u32>,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Parse(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n == 0 || self.n > 8 {
            return Err(CliError::Usage(format!("chart dimension {} is outside 1..=8", self.n)));
        }
        for (i, t) in self.tasks.iter().enumerate() {
            if !COMMANDS.contains(&t.command.as_str()) {
                return Err(CliError::Usage(format!("task {i}: unknown command `{}`", t.command)));
            }
        }
        for (name, obj) in &self.objects {
            if COMMANDS.contains(&name.as_str()) || name.is_empty() {
                return Err(CliError::Usage(format!("bad object name `{name}`")));
            }
            if let Json::String(s) = obj {
                if self.objects.contains_key(s) {
                    return Err(CliError::Usage(format!("object `{name}` refers to another object")));
                }
            }
        }
        Ok(())
    }

    pub fn settings(&self, o: &Overrides) -> Settings {
        Settings {
            seed: o.seed.or(self.seed).unwrap_or(0),
            order: o.order.or(self.order).unwrap_or(DEFAULT_ORDER),
            samples: o.samples.or(self.samples).unwrap_or(DEFAULT_SAMPLES),
            degree_bound: o.degree_bound.or(self.degree_bound),
        }
    }

    /// Replace a string naming an object by the object.
    pub fn resolve<'a>(&'a self, v: &'a Json) -> &'a Json {
        match v {
            Json::String(s) => self.objects.get(s).unwrap_or(v),
            _ => v,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_resolve() {
        let s = Scenario::from_json(
            r#"{"name": "x", "n": 2, "objects": {"b": "z1*@1^^@2"},
                "tasks": [{"command": "check-poisson", "beta": "b", "expect": {"poisson": true}}]}"#,
        )
        .unwrap();
        let t = &s.tasks[0];
        assert_eq!(s.resolve(&t.params["beta"]), &Json::String("z1*@1^^@2".into()));
        assert!(t.expect.is_some() && !t.params.contains_key("expect"));
        let st = s.settings(&Overrides { order: Some(3), ..Default::default() });
        assert_eq!((st.seed, st.order, st.samples), (0, 3, DEFAULT_SAMPLES));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Scenario::from_json(r#"{"name": "x", "n": 2, "tasks": [{"command": "nope"}]}"#).is_err());
        assert!(Scenario::from_json(r#"{"name": "x", "n": 2, "tasks": [], "bogus": 1}"#).is_err());
        assert!(Scenario::from_json(r#"{"name": "x", "n": 0, "tasks": []}"#).is_err());
    }
}
