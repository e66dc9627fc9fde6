use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::StrategySimplex;

/// Weight the synchronous coalition puts on the pure pair `(j, k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairWeight {
    pub j: usize,
    pub k: usize,
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Strategies {
    /// Player 1's maximin strategy.
    pub x: Option<StrategySimplex>,
    /// Coalition members' minimax strategies.
    pub y: Option<StrategySimplex>,
    pub z: Option<StrategySimplex>,
    /// Correlated coalition strategy over pure pairs.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sync_coalition: Vec<PairWeight>,
}

/// Free-form solver metadata keyed by name.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Diagnostics(pub BTreeMap<String, serde_json::Value>);

impl Diagnostics {
    pub fn insert(&mut self, key: impl Into<String>, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.0.insert(key.into(), v);
    }

    pub fn get(&self, key: &str) -> Option<&serde_json::Value> {
        self.0.get(key)
    }
}

/// Values and optimal strategies of one game.
///
/// A value is `None` when it was not requested or is unavailable (the Nash
/// value is only known for symmetric zero-sum games).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValueReport {
    pub v_nash: Option<f64>,
    pub v_sync: Option<f64>,
    pub v_async: Option<f64>,
    pub strategies: Strategies,
    pub diagnostics: Diagnostics,
}

impl ValueReport {
    /// `v_sync <= v_async + tol <= v_nash + tol` over whichever values are present.
    pub fn ordering_holds(&self, tol: f64) -> bool {
        let le = |a: Option<f64>, b: Option<f64>| match (a, b) {
            (Some(a), Some(b)) => a <= b + tol,
            _ => true,
        };
        le(self.v_sync, self.v_async) && le(self.v_async, self.v_nash) && le(self.v_sync, self.v_nash)
    }
}
