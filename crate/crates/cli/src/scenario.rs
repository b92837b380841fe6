//! Scenario files: a space, named step functions, config overrides and a
//! task list, as one JSON document.

use std::collections::BTreeMap;
use std::path::Path;

use ckrenorm::orlicz::OrliczConfig;
use ckrenorm::stepfn::StepFunction;
use ckrenorm::topology::OrdinalSpace;
use ckrenorm::Ordinal;
use serde::Deserialize;
use serde_json::Value;

use crate::error::CliError;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub from: Ordinal,
    pub value: f64,
}

/// Either a bare piece list or the `{space, pieces}` form that failing
/// suite cases print.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Pieces(Vec<PieceSpec>),
    Full {
        space: Option<Ordinal>,
        pieces: Vec<PieceSpec>,
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Task {
    Rank { point: Ordinal },
    Derive { point: Ordinal, alpha: Ordinal },
    Vt { point: Ordinal },
    Hull { set: String },
    Norm { function: String },
    Grad { function: String },
    TalSupport { function: String, eps: f64 },
    TalWitness { function: String },
    Reconstruct { function: String, eps: f64 },
}

impl Task {
    pub fn function(&self) -> Option<&str> {
        match self {
            Task::Norm { function }
            | Task::Grad { function }
            | Task::TalSupport { function, .. }
            | Task::TalWitness { function }
            | Task::Reconstruct { function, .. } => Some(function),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    space: Ordinal,
    #[serde(default)]
    functions: BTreeMap<String, FunctionSpec>,
    #[serde(default)]
    config: Option<Value>,
    #[serde(default)]
    tasks: Vec<Task>,
}

#[derive(Debug, Clone)]
pub struct Scenario {
    pub space: OrdinalSpace,
    pub functions: BTreeMap<String, StepFunction>,
    pub config: OrliczConfig,
    pub tasks: Vec<Task>,
}

impl Scenario {
    pub fn load(path: &Path, base: OrliczConfig) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, base).map_err(|e| e.in_file(path))
    }

    pub fn parse(text: &str, base: OrliczConfig) -> Result<Self, CliError> {
        let raw: RawScenario = serde_json::from_str(text).map_err(CliError::json)?;
        let space = OrdinalSpace::new(raw.space);
        let config = match raw.config {
            Some(overrides) => merge_config(base, overrides)?,
            None => base,
        };
        let mut functions = BTreeMap::new();
        for (name, spec) in raw.functions {
            let f = build_function(&space, spec)
                .map_err(|e| CliError::Input(format!("function {name:?}: {e}")))?;
            functions.insert(name, f);
        }
        for (i, task) in raw.tasks.iter().enumerate() {
            if let Some(name) = task.function() {
                if !functions.contains_key(name) {
                    return Err(CliError::Input(format!("task {i}: unknown function {name:?}")));
                }
            }
            let point = match task {
                Task::Rank { point } | Task::Vt { point } | Task::Derive { point, .. } => Some(point),
                _ => None,
            };
            if let Some(p) = point {
                space.check(p).map_err(|e| CliError::Input(format!("task {i}: {e}")))?;
            }
        }
        Ok(Scenario {
            space,
            functions,
            config,
            tasks: raw.tasks,
        })
    }

    pub fn function(&self, name: &str) -> Result<&StepFunction, CliError> {
        self.functions.get(name).ok_or_else(|| {
            let known: Vec<&str> = self.functions.keys().map(String::as_str).collect();
            CliError::Input(format!("unknown function {name:?}; scenario defines: {}", known.join(", ")))
        })
    }
}

fn build_function(space: &OrdinalSpace, spec: FunctionSpec) -> ckrenorm::Result<StepFunction> {
    let pieces = match spec {
        FunctionSpec::Pieces(p) => p,
        FunctionSpec::Full { space: own, pieces } => {
            if let Some(g) = own {
                if g != *space.gamma() {
                    return Err(ckrenorm::Error::SpaceMismatch(
                        space.gamma().to_string(),
                        g.to_string(),
                    ));
                }
            }
            pieces
        }
    };
    StepFunction::from_starts(space.clone(), pieces.into_iter().map(|p| (p.from, p.value)).collect())
}

/// Applies the keys of `overrides` on top of `base`.
pub fn merge_config(base: OrliczConfig, overrides: Value) -> Result<OrliczConfig, CliError> {
    let Value::Object(over) = overrides else {
        return Err(CliError::Input("config must be an object".into()));
    };
    let Value::Object(mut merged) = serde_json::to_value(base).expect("config serializes") else {
        unreachable!("config is a struct");
    };
    merged.extend(over);
    let config: OrliczConfig = serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Input(format!("config: {e}")))?;
    config.validate()?;
    Ok(config)
}

/// The default config, overridden by the file named in `CKRENORM_CONFIG`.
pub fn load_config(path: Option<&Path>) -> Result<OrliczConfig, CliError> {
    let Some(path) = path else {
        return Ok(OrliczConfig::default());
    };
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let value: Value = serde_json::from_str(&text).map_err(|e| CliError::json(e).in_file(path))?;
    merge_config(OrliczConfig::default(), value).map_err(|e| e.in_file(path))
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = r#"{
        "space": "w^2",
        "config": {"a": 0.99},
        "functions": {
            "f": [{"from": "0", "value": 1.0}, {"from": "w+1", "value": -0.5}],
            "g": {"space": "w^2", "pieces": [{"from": "0", "value": 2.0}]}
        },
        "tasks": [
            {"kind": "norm", "function": "f"},
            {"kind": "hull", "set": "[0, 5] u {w^2}"},
            {"kind": "tal-support", "function": "g", "eps": 0.01}
        ]
    }"#;

    #[test]
    fn parses_a_full_scenario() {
        let s = Scenario::parse(GOOD, OrliczConfig::default()).unwrap();
        assert_eq!(s.space.gamma().to_string(), "w^2");
        assert_eq!(s.config.a, 0.99);
        assert_eq!(s.config.margin, OrliczConfig::default().margin);
        assert_eq!(s.functions.len(), 2);
        assert_eq!(s.tasks.len(), 3);
        assert_eq!(s.function("f").unwrap().pieces().len(), 2);
        assert!(s.function("h").is_err());
    }

    #[test]
    fn names_the_bad_boundary() {
        let text = r#"{"space": "w^2", "functions": {"f": [
            {"from": "0", "value": 1.0}, {"from": "w*2", "value": 0.5}]}}"#;
        let msg = Scenario::parse(text, OrliczConfig::default()).unwrap_err().to_string();
        assert!(msg.contains("\"f\"") && msg.contains("piece 1") && msg.contains("w*2"), "{msg}");
    }

    #[test]
    fn rejects_bad_references_and_fields() {
        let cases = [
            r#"{"space": "w", "tasks": [{"kind": "norm", "function": "nope"}]}"#,
            r#"{"space": "w", "tasks": [{"kind": "rank", "point": "w^2"}]}"#,
            r#"{"space": "w", "config": {"b": 1}}"#,
            r#"{"space": "w", "config": {"a": 1.5}}"#,
            r#"{"space": "w", "extra": 1}"#,
            r#"{"space": "w", "functions": {"f": {"space": "w^2", "pieces": [{"from": "0", "value": 1}]}}}"#,
            r#"{"space": "w+"}"#,
        ];
        for text in cases {
            let e = Scenario::parse(text, OrliczConfig::default()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{text}: {e}");
        }
    }
}
