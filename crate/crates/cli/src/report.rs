//! Run reports and their JSON and plain-text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

/// One dimension, indexed by degree (or bidegree), with its certification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub index: Vec<i64>,
    pub dim: usize,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    /// Names of the index components, e.g. `["n"]` or `["p", "q"]`.
    pub index: Vec<String>,
    pub rows: Vec<Row>,
}

/// Pass/fail counts of one property check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub name: String,
    pub passed: usize,
    pub failed: usize,
}

/// A named scalar or structured result.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    pub value: Value,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: BTreeMap<String, Value>,
    pub seed: u64,
    pub tables: Vec<Table>,
    pub tallies: Vec<Tally>,
    pub facts: BTreeMap<String, Fact>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn new(config: BTreeMap<String, Value>, seed: u64) -> Self {
        Report {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config,
            seed,
            tables: Vec::new(),
            tallies: Vec::new(),
            facts: BTreeMap::new(),
        }
    }

    pub fn table(&mut self, name: &str, index: &[&str], rows: Vec<Row>) {
        self.tables.push(Table {
            name: name.into(),
            index: index.iter().map(|s| s.to_string()).collect(),
            rows,
        });
    }

    pub fn tally(&mut self, name: &str, passed: usize, failed: usize) {
        self.tallies.push(Tally {
            name: name.into(),
            passed,
            failed,
        });
    }

    /// Adds one outcome to the named tally, creating it on first use.
    pub fn record(&mut self, name: &str, ok: bool) {
        if let Some(t) = self.tallies.iter_mut().find(|t| t.name == name) {
            if ok {
                t.passed += 1;
            } else {
                t.failed += 1;
            }
        } else {
            self.tally(name, ok as usize, !ok as usize);
        }
    }

    pub fn fact(&mut self, name: &str, value: impl Into<Value>, certified: bool) {
        self.facts.insert(
            name.into(),
            Fact {
                value: value.into(),
                certified,
            },
        );
    }

    pub fn failures(&self) -> usize {
        self.tallies.iter().map(|t| t.failed).sum()
    }

    pub fn find_table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    /// Pretty JSON with object keys in sorted order.
    pub fn to_json(&self) -> Result<String, CliError> {
        let v = serde_json::to_value(self).map_err(|e| CliError::Usage(e.to_string()))?;
        let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Usage(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self, CliError> {
        serde_json::from_str(s).map_err(|e| CliError::Schema {
            path: "report".into(),
            msg: e.to_string(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} {}", self.tool, self.version);
        for (k, v) in &self.config {
            let _ = writeln!(s, "  {k}: {}", plain(v));
        }
        let _ = writeln!(s, "  seed: {}", self.seed);
        for t in &self.tables {
            let _ = writeln!(s, "\n{}", t.name);
            let head = format!("{:>8}  {:>6}  certified", t.index.join(","), "dim");
            let _ = writeln!(s, "{head}");
            for r in &t.rows {
                let idx: Vec<String> = r.index.iter().map(i64::to_string).collect();
                let flag = if r.certified { "yes" } else { "no" };
                let _ = writeln!(s, "{:>8}  {:>6}  {flag}", idx.join(","), r.dim);
            }
        }
        if !self.tallies.is_empty() {
            let _ = writeln!(s, "\nchecks");
            let width = self.tallies.iter().map(|t| t.name.len()).max().unwrap_or(0);
            for t in &self.tallies {
                let _ = writeln!(
                    s,
                    "  {:<width$}  passed {:>4}  failed {:>4}",
                    t.name, t.passed, t.failed
                );
            }
        }
        if !self.facts.is_empty() {
            let _ = writeln!(s, "\nresults");
            for (k, f) in &self.facts {
                let tag = if f.certified {
                    "certified"
                } else {
                    "uncertified"
                };
                let _ = writeln!(s, "  {k} = {} ({tag})", plain(&f.value));
            }
        }
        s
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Text => Ok(self.to_text()),
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_minimal_json() {
        let r = Report::new(BTreeMap::new(), 7);
        let s = r.to_json().unwrap();
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["tallies"], Value::Array(vec![]));
        assert_eq!(v["seed"], 7);
        assert_eq!(Report::from_json(&s).unwrap(), r);
    }

    #[test]
    fn keys_are_sorted() {
        let mut r = Report::new(
            BTreeMap::from([("zeta".into(), 1.into()), ("alpha".into(), 2.into())]),
            0,
        );
        r.fact("b", 1, true);
        r.fact("a", 2, false);
        let s = r.to_json().unwrap();
        let keys = [
            "\"config\"",
            "\"facts\"",
            "\"seed\"",
            "\"tables\"",
            "\"tallies\"",
            "\"tool\"",
            "\"version\"",
        ];
        let pos: Vec<usize> = keys.iter().map(|k| s.find(k).unwrap()).collect();
        assert!(pos.windows(2).all(|w| w[0] < w[1]));
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
    }

    #[test]
    fn text_table_for_the_ground_field() {
        let mut r = Report::new(BTreeMap::new(), 0);
        let rows = (0..2)
            .map(|n| Row {
                index: vec![n],
                dim: (n == 0) as usize,
                certified: true,
            })
            .collect();
        r.table("HH", &["n"], rows);
        let text = r.to_text();
        let lines: Vec<&str> = text.lines().skip_while(|l| *l != "HH").collect();
        assert_eq!(lines.len(), 4);
        assert!(lines[2].trim_start().starts_with("0"));
        assert!(lines[3].ends_with("yes"));
    }

    proptest::proptest! {
        #[test]
        fn json_round_trip_is_exact(
            seed in proptest::prelude::any::<u64>(),
            rows in proptest::collection::vec((-9i64..9, 0usize..5, proptest::prelude::any::<bool>()), 0..6),
            checks in proptest::collection::vec(("[a-z_]{1,8}", proptest::prelude::any::<bool>()), 0..6),
        ) {
            let mut r = Report::new(BTreeMap::from([("max_degree".into(), 4.into())]), seed);
            let rows = rows
                .into_iter()
                .map(|(i, dim, certified)| Row { index: vec![i, -i], dim, certified })
                .collect();
            r.table("H", &["n", "j"], rows);
            for (name, ok) in &checks {
                r.record(name, *ok);
                r.fact(name, seed, *ok);
            }
            let s = r.to_json().unwrap();
            let back = Report::from_json(&s).unwrap();
            proptest::prop_assert_eq!(back.to_json().unwrap(), s);
            proptest::prop_assert_eq!(back, r);
        }
    }
}
