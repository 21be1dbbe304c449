use std::collections::BTreeMap;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::cremona::delpezzo::TABLES;

pub const FIXTURE_FILES: &[(&str, &str)] = &[
    ("main_cases.json", include_str!("../../data/fixtures/main_cases.json")),
    ("pencil_list0.json", include_str!("../../data/fixtures/pencil_list0.json")),
    ("pencil_list1.json", include_str!("../../data/fixtures/pencil_list1.json")),
    ("pencil_list2.json", include_str!("../../data/fixtures/pencil_list2.json")),
    ("pencil_list3.json", include_str!("../../data/fixtures/pencil_list3.json")),
    ("multiplicity_system.json", include_str!("../../data/fixtures/multiplicity_system.json")),
    ("case_iii_delta.json", include_str!("../../data/fixtures/case_iii_delta.json")),
    ("case_iii_left.json", include_str!("../../data/fixtures/case_iii_left.json")),
];

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture {0} is missing: {1}")]
    Missing(String, String),
    #[error("fixture {0} is not valid JSON: {1}")]
    Malformed(String, String),
    #[error("no fixture named {0}")]
    Unknown(String),
}

/// Expected outputs of the enumeration nodes, plus the multiplicity tables
/// when read from a directory.
#[derive(Debug, Clone)]
pub struct Fixtures {
    pub origin: String,
    files: BTreeMap<String, Value>,
    tables: BTreeMap<String, Value>,
}

fn parse(name: &str, src: &str) -> Result<Value, FixtureError> {
    serde_json::from_str(src).map_err(|e| FixtureError::Malformed(name.into(), e.to_string()))
}

impl Fixtures {
    pub fn embedded() -> Result<Self, FixtureError> {
        let mut files = BTreeMap::new();
        for (name, src) in FIXTURE_FILES {
            files.insert(name.to_string(), parse(name, src)?);
        }
        let mut tables = BTreeMap::new();
        for (name, src) in TABLES {
            tables.insert(format!("{name}.json"), parse(name, src)?);
        }
        Ok(Fixtures { origin: "embedded".into(), files, tables })
    }

    /// Reads `dir/fixtures/*.json` and `dir/tables/*.json`; every file known
    /// to the build must be present.
    pub fn from_dir(dir: &Path) -> Result<Self, FixtureError> {
        let read = |sub: &str, name: &str| {
            let p = dir.join(sub).join(name);
            let s = std::fs::read_to_string(&p).map_err(|e| FixtureError::Missing(p.display().to_string(), e.to_string()))?;
            parse(&p.display().to_string(), &s)
        };
        let mut files = BTreeMap::new();
        for (name, _) in FIXTURE_FILES {
            files.insert(name.to_string(), read("fixtures", name)?);
        }
        let mut tables = BTreeMap::new();
        for (name, _) in TABLES {
            let f = format!("{name}.json");
            tables.insert(f.clone(), read("tables", &f)?);
        }
        Ok(Fixtures { origin: dir.display().to_string(), files, tables })
    }

    pub fn get(&self, name: &str) -> Result<&Value, FixtureError> {
        self.files.get(name).ok_or_else(|| FixtureError::Unknown(name.into()))
    }

    /// Compares `computed` with fixture `name`; on mismatch the message
    /// names the first differing entry.
    pub fn compare<T: Serialize>(&self, name: &str, computed: &T) -> Result<Result<(), String>, FixtureError> {
        let want = self.get(name)?;
        let got = serde_json::to_value(computed).map_err(|e| FixtureError::Malformed(name.into(), e.to_string()))?;
        Ok(diff(want, &got).map_or(Ok(()), |d| Err(format!("{name}: {d}"))))
    }

    /// Every fixture against a fresh computation; tables against the copies
    /// compiled into the binary.
    pub fn check(&self) -> Vec<FixtureCheck> {
        let mut out = Vec::new();
        for (name, computed) in fixture_values() {
            let detail = match self.compare(name, &computed) {
                Ok(Ok(())) => None,
                Ok(Err(d)) => Some(d),
                Err(e) => Some(e.to_string()),
            };
            out.push(FixtureCheck { name: format!("fixtures/{name}"), ok: detail.is_none(), detail });
        }
        for (name, src) in TABLES {
            let f = format!("{name}.json");
            let want = serde_json::from_str::<Value>(src).expect("compiled table parses");
            let detail = match self.tables.get(&f) {
                None => Some("missing".to_string()),
                Some(v) => diff(&want, v),
            };
            out.push(FixtureCheck { name: format!("tables/{f}"), ok: detail.is_none(), detail });
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixtureCheck {
    pub name: String,
    pub ok: bool,
    pub detail: Option<String>,
}

fn fixture_values() -> Vec<(&'static str, Value)> {
    use crate::cremona::multiplicity::solve_multiplicity_system;
    let mut out = vec![("main_cases.json", v(&crate::cover::enumerate_main_cases()))];
    for (k, name) in ["pencil_list0.json", "pencil_list1.json", "pencil_list2.json", "pencil_list3.json"].iter().enumerate() {
        let cases: Vec<_> = crate::pencil::enumerate_pencil_cases(k as i64).iter().map(|c| c.to_json()).collect();
        out.push((name, v(&cases)));
    }
    out.push((
        "multiplicity_system.json",
        serde_json::json!({"c1": 2, "c2": 2, "max_points": 8, "d0_range": [0, 12], "solutions": solve_multiplicity_system(2, 2, 8, 0..=12)}),
    ));
    match crate::fibration::run_case_iii() {
        Ok((ranges, _, left)) => {
            let d: Vec<Value> = ranges
                .iter()
                .filter(|r| !r.ells.is_empty())
                .map(|r| serde_json::json!({"label": r.label, "ells": r.ells}))
                .collect();
            out.push(("case_iii_delta.json", Value::Array(d)));
            let l: Vec<Value> = left.iter().map(|(a, b)| serde_json::json!({"label": a, "ell": b})).collect();
            out.push(("case_iii_left.json", Value::Array(l)));
        }
        Err(e) => {
            out.push(("case_iii_delta.json", Value::String(e.to_string())));
            out.push(("case_iii_left.json", Value::String(e.to_string())));
        }
    }
    out
}

fn v<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).unwrap_or(Value::Null)
}

/// First difference between two JSON values, as a path.
pub(crate) fn diff(want: &Value, got: &Value) -> Option<String> {
    fn go(path: String, a: &Value, b: &Value) -> Option<String> {
        match (a, b) {
            (Value::Array(x), Value::Array(y)) => {
                for (i, (p, q)) in x.iter().zip(y).enumerate() {
                    if let Some(d) = go(format!("{path}[{i}]"), p, q) {
                        return Some(d);
                    }
                }
                (x.len() != y.len()).then(|| format!("{path}: expected {} entries, got {}", x.len(), y.len()))
            }
            (Value::Object(x), Value::Object(y)) => {
                for k in x.keys().chain(y.keys()) {
                    match (x.get(k), y.get(k)) {
                        (Some(p), Some(q)) => {
                            if let Some(d) = go(format!("{path}.{k}"), p, q) {
                                return Some(d);
                            }
                        }
                        (Some(_), None) => return Some(format!("{path}.{k}: missing in computed output")),
                        (None, _) => return Some(format!("{path}.{k}: not in fixture")),
                    }
                }
                None
            }
            _ => (a != b).then(|| format!("{path}: expected {a}, got {b}")),
        }
    }
    go("$".into(), want, got)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn embedded_fixtures_match() {
        let f = Fixtures::embedded().unwrap();
        for c in f.check() {
            assert!(c.ok, "{c:?}");
        }
    }

    #[test]
    fn diff_points_at_entry() {
        let a = serde_json::json!([{"x": 1}, {"x": 2}]);
        let b = serde_json::json!([{"x": 1}, {"x": 3}]);
        assert_eq!(diff(&a, &b).unwrap(), "$[1].x: expected 2, got 3");
        assert!(diff(&a, &a).is_none());
        assert!(diff(&a, &serde_json::json!([{"x": 1}])).unwrap().contains("expected 2 entries"));
    }
}
