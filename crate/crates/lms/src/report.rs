//! Check records and verification reports.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const SCHEMA: u32 = 1;

#[derive(Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Sampled,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(name: &str, anchor: &str, result: Result<(), String>) -> Check {
        let (status, witness) = match result {
            Ok(()) => (Status::Pass, None),
            Err(w) => (Status::Fail, Some(w)),
        };
        Check { name: name.into(), anchor: anchor.into(), status, witness, detail: None }
    }

    pub fn pass(name: &str, anchor: &str) -> Check {
        Check::new(name, anchor, Ok(()))
    }

    pub fn fail(name: &str, anchor: &str, witness: impl Into<String>) -> Check {
        Check::new(name, anchor, Err(witness.into()))
    }

    pub fn sampled(name: &str, anchor: &str, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: Status::Sampled,
            witness: None,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub structure: String,
    pub seed: u64,
    pub orders: BTreeMap<String, usize>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(structure: &str, seed: u64) -> Report {
        Report {
            schema: SCHEMA,
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            structure: structure.into(),
            seed,
            orders: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Check>) {
        self.checks.extend(cs);
    }

    pub fn order(&mut self, key: &str, value: usize) {
        self.orders.insert(key.into(), value);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed()).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn from_json(s: &str) -> Result<Report, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn summary(&self) -> String {
        let mut out = format!("{}\n", self.structure);
        for (k, v) in &self.orders {
            out += &format!("  {k} = {v}\n");
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Sampled => "sampled",
            };
            out += &format!("  [{tag:>7}] {}", c.name);
            if let Some(w) = &c.witness {
                out += &format!("  witness: {w}");
            }
            if let Some(d) = &c.detail {
                out += &format!("  ({d})");
            }
            out += "\n";
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let mut r = Report::new("test", 0);
        r.order("|X|", 12);
        r.push(Check::pass("a", "x = x"));
        r.push(Check::fail("b", "y = y", "y=3"));
        r.push(Check::sampled("c", "z", "100 samples"));
        let back = Report::from_json(&r.to_json()).unwrap();
        assert_eq!(back, r);
        assert!(!r.all_passed());
        assert_eq!(r.failures().len(), 1);
    }
}
