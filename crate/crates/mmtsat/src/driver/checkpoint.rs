//! Campaign checkpoint file.

use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};

use super::DriverError;
use crate::symmetry::{Combo, GroupId, OrbitKind};

#[derive(Debug, Clone, PartialEq)]
pub enum ComboState {
    Pending,
    /// Path of the saved, verified decomposition.
    Sat(PathBuf),
    Unsat,
    Timeout,
    Error(String),
}

impl ComboState {
    pub fn name(&self) -> &'static str {
        match self {
            ComboState::Pending => "pending",
            ComboState::Sat(_) => "sat",
            ComboState::Unsat => "unsat",
            ComboState::Timeout => "timeout",
            ComboState::Error(_) => "error",
        }
    }

    pub fn is_pending(&self) -> bool {
        matches!(self, ComboState::Pending)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComboStatus {
    pub combo: Combo,
    pub state: ComboState,
    pub seconds: f64,
    pub solver: String,
}

impl ComboStatus {
    pub fn pending(combo: Combo) -> Self {
        Self {
            combo,
            state: ComboState::Pending,
            seconds: 0.0,
            solver: String::new(),
        }
    }

    fn to_value(&self) -> Value {
        let counts: Map<String, Value> = self
            .combo
            .iter()
            .map(|(k, c)| (k.name().to_string(), json!(c)))
            .collect();
        let mut v = Map::new();
        v.insert("counts".into(), Value::Object(counts));
        v.insert("state".into(), json!(self.state.name()));
        v.insert("seconds".into(), json!(self.seconds));
        if !self.solver.is_empty() {
            v.insert("solver".into(), json!(self.solver));
        }
        match &self.state {
            ComboState::Sat(p) => {
                v.insert("decomposition".into(), json!(p.to_string_lossy()));
            }
            ComboState::Error(m) => {
                v.insert("message".into(), json!(m));
            }
            _ => {}
        }
        Value::Object(v)
    }

    fn from_value(group: GroupId, v: &Value) -> Result<Self, DriverError> {
        let bad = |what: &str| DriverError::Checkpoint(format!("combo record: {what}"));
        let obj = v.as_object().ok_or_else(|| bad("not an object"))?;
        let counts = obj
            .get("counts")
            .and_then(Value::as_object)
            .ok_or_else(|| bad("missing counts"))?;
        let mut combo = Combo::zero(group);
        for (name, c) in counts {
            let kind: OrbitKind = name.parse().map_err(|_| bad(&format!("unknown kind {name:?}")))?;
            let pos = combo
                .position(kind)
                .ok_or_else(|| bad(&format!("kind {name} not in {group}")))?;
            combo.counts[pos] = c
                .as_u64()
                .and_then(|c| u32::try_from(c).ok())
                .ok_or_else(|| bad("count is not a small integer"))?;
        }
        let text = |key: &str| obj.get(key).and_then(Value::as_str);
        let state = match text("state").ok_or_else(|| bad("missing state"))? {
            "pending" => ComboState::Pending,
            "unsat" => ComboState::Unsat,
            "timeout" => ComboState::Timeout,
            "sat" => ComboState::Sat(PathBuf::from(
                text("decomposition").ok_or_else(|| bad("sat without decomposition"))?,
            )),
            "error" => ComboState::Error(text("message").unwrap_or_default().to_string()),
            other => return Err(bad(&format!("unknown state {other:?}"))),
        };
        Ok(Self {
            combo,
            state,
            seconds: obj.get("seconds").and_then(Value::as_f64).unwrap_or(0.0),
            solver: text("solver").unwrap_or_default().to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub group: GroupId,
    pub dims: usize,
    pub max_rank: u32,
    pub combos: Vec<ComboStatus>,
}

impl Checkpoint {
    pub fn to_json(&self) -> String {
        let v = json!({
            "group": self.group.name(),
            "dims": self.dims,
            "max_rank": self.max_rank,
            "combos": self.combos.iter().map(ComboStatus::to_value).collect::<Vec<_>>(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, DriverError> {
        let bad = |what: &str| DriverError::Checkpoint(what.to_string());
        let v: Value = serde_json::from_str(text).map_err(|e| bad(&e.to_string()))?;
        let group: GroupId = v
            .get("group")
            .and_then(Value::as_str)
            .ok_or_else(|| bad("missing group"))?
            .parse()
            .map_err(|e: crate::symmetry::SymmetryError| bad(&e.to_string()))?;
        let num = |key: &str| {
            v.get(key)
                .and_then(Value::as_u64)
                .ok_or_else(|| bad(&format!("missing {key}")))
        };
        let combos = v
            .get("combos")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing combos"))?
            .iter()
            .map(|c| ComboStatus::from_value(group, c))
            .collect::<Result<_, _>>()?;
        Ok(Self {
            group,
            dims: num("dims")? as usize,
            max_rank: num("max_rank")? as u32,
            combos,
        })
    }

    pub fn load(path: &Path) -> Result<Self, DriverError> {
        let text = std::fs::read_to_string(path).map_err(|e| DriverError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| DriverError::Checkpoint(format!("{}: {e}", path.display())))
    }

    /// Writes to a sibling temporary file and renames it over `path`.
    pub fn save(&self, path: &Path) -> Result<(), DriverError> {
        let io = |e: std::io::Error| DriverError::Io(format!("{}: {e}", path.display()));
        let mut tmp = path.as_os_str().to_owned();
        tmp.push(".tmp");
        let tmp = PathBuf::from(tmp);
        std::fs::write(&tmp, self.to_json()).map_err(io)?;
        std::fs::rename(&tmp, path).map_err(io)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let g = GroupId::Cyclic;
        let cp = Checkpoint {
            group: g,
            dims: 3,
            max_rank: 21,
            combos: vec![ComboStatus {
                combo: Combo::parse(g, "id=5,delta=6").unwrap(),
                state: ComboState::Unsat,
                seconds: 123.4,
                solver: String::new(),
            }],
        };
        let compact: Value = serde_json::from_str(&cp.to_json()).unwrap();
        assert_eq!(
            compact.to_string(),
            r#"{"group":"cyc","dims":3,"max_rank":21,"combos":[{"counts":{"id":5,"delta":6},"state":"unsat","seconds":123.4}]}"#
        );
        assert_eq!(Checkpoint::from_json(&cp.to_json()).unwrap(), cp);
    }

    #[test]
    fn rejects_unknown_state() {
        let text =
            r#"{"group":"cyc","dims":2,"max_rank":1,"combos":[{"counts":{"delta":1},"state":"maybe","seconds":0}]}"#;
        assert!(Checkpoint::from_json(text).is_err());
    }
}
