//! Report envelope and its JSON, CSV and plain renderings.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::Value;

fn as_map<S: Serializer>(labels: &[(String, Value)], s: S) -> Result<S::Ok, S::Error> {
    s.collect_map(labels.iter().map(|(k, v)| (k, v)))
}

/// One numerical claim with the oracle it was checked against.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    /// Serialized as an object, keys in insertion order.
    #[serde(serialize_with = "as_map")]
    pub labels: Vec<(String, Value)>,
    pub value: f64,
    pub oracle: f64,
    pub abs_diff: f64,
    /// Relative to `|oracle|`; equal to `abs_diff` when the oracle is zero.
    pub rel_diff: f64,
    pub tolerance: f64,
    pub oracle_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degeneracy: Option<u32>,
}

impl Row {
    pub fn label(&self, key: &str) -> Option<&Value> {
        self.labels.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn new(labels: Vec<(&str, Value)>, value: f64, oracle: f64, tolerance: f64, oracle_id: &str) -> Self {
        let abs_diff = (value - oracle).abs();
        let rel_diff = if oracle == 0.0 { abs_diff } else { abs_diff / oracle.abs() };
        Row {
            labels: labels.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            value,
            oracle,
            abs_diff,
            rel_diff,
            tolerance,
            oracle_id: oracle_id.to_string(),
            degeneracy: None,
        }
    }

    pub fn with_degeneracy(mut self, d: u32) -> Self {
        self.degeneracy = Some(d);
        self
    }

    pub fn passed(&self) -> bool {
        self.rel_diff <= self.tolerance
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes when `measured <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            passed: measured <= tolerance,
            measured,
            tolerance,
        }
    }

    /// Worst `rel_diff` over `rows` against their own tolerances.
    pub fn rows(name: impl Into<String>, rows: &[Row]) -> Self {
        let worst = rows.iter().map(|r| r.rel_diff).fold(0.0, f64::max);
        let tolerance = rows.iter().map(|r| r.tolerance).fold(f64::INFINITY, f64::min);
        Check {
            name: name.into(),
            passed: rows.iter().all(Row::passed),
            measured: worst,
            tolerance: if rows.is_empty() { 0.0 } else { tolerance },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: String,
    pub argv: Vec<String>,
    pub timestamp: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub version: String,
    pub command: CommandEcho,
    pub params: BTreeMap<String, Value>,
    pub results: Vec<Row>,
    pub checks: Vec<Check>,
}

impl Envelope {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Label keys over all rows, in order of first appearance.
    fn label_keys(&self) -> Vec<String> {
        let mut keys: Vec<String> = Vec::new();
        for (k, _) in self.results.iter().flat_map(|r| &r.labels) {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
        keys
    }

    /// One line per row; cells hold the JSON text of the corresponding value.
    pub fn to_csv(&self) -> String {
        let keys = self.label_keys();
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header: Vec<String> = keys.iter().map(|k| format!("labels.{k}")).collect();
        header.extend(
            ["value", "oracle", "abs_diff", "rel_diff", "tolerance", "oracle_id", "degeneracy"].map(String::from),
        );
        w.write_record(&header).expect("in-memory write");
        for r in &self.results {
            let mut rec: Vec<String> = keys
                .iter()
                .map(|k| match r.label(k) {
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                    None => String::new(),
                })
                .collect();
            rec.extend([r.value, r.oracle, r.abs_diff, r.rel_diff, r.tolerance].map(json_number));
            rec.push(r.oracle_id.clone());
            rec.push(r.degeneracy.map(|d| d.to_string()).unwrap_or_default());
            w.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }

    pub fn to_plain(&self) -> String {
        let keys = self.label_keys();
        let with_deg = self.results.iter().any(|r| r.degeneracy.is_some());
        let mut header: Vec<String> = keys.clone();
        header.extend(["value", "oracle", "rel_diff", "tol"].map(String::from));
        if with_deg {
            header.push("degeneracy".into());
        }
        let mut table = vec![header];
        for r in &self.results {
            let mut line: Vec<String> = keys
                .iter()
                .map(|k| match r.label(k) {
                    Some(Value::Number(n)) => n.as_f64().map(g6).unwrap_or_else(|| n.to_string()),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                    None => "-".into(),
                })
                .collect();
            line.extend([r.value, r.oracle, r.rel_diff, r.tolerance].map(g6));
            if with_deg {
                line.push(r.degeneracy.map(|d| d.to_string()).unwrap_or_else(|| "-".into()));
            }
            table.push(line);
        }
        let widths: Vec<usize> = (0..table[0].len())
            .map(|c| table.iter().map(|l| l[c].len()).max().unwrap_or(0))
            .collect();

        let mut out = format!("# {} (monopole-spectra {})\n", self.command.name, self.version);
        if self.results.is_empty() {
            out.push_str("(no rows)\n");
        } else {
            for line in &table {
                let cells: Vec<String> = line.iter().zip(&widths).map(|(s, w)| format!("{s:>w$}")).collect();
                out.push_str(cells.join("  ").trim_end());
                out.push('\n');
            }
        }
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: {} (tol {})\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                g6(c.measured),
                g6(c.tolerance)
            ));
        }
        out
    }
}

fn json_number(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

/// `%g`-style text with six significant digits.
pub fn g6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let exp = x.abs().log10().floor() as i32;
    if !(-5..6).contains(&exp) {
        let s = format!("{x:.5e}");
        let (mantissa, e) = s.split_once('e').expect("exponent form");
        let mantissa = mantissa.trim_end_matches('0').trim_end_matches('.');
        return format!("{mantissa}e{e}");
    }
    let decimals = (5 - exp).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_significant_digits() {
        assert_eq!(g6(-0.125), "-0.125");
        assert_eq!(g6(-1.0 / 18.0), "-0.0555556");
        assert_eq!(g6(4.0), "4");
        assert_eq!(g6(123456789.0), "1.23457e8");
        assert_eq!(g6(2.5e-13), "2.5e-13");
        assert_eq!(g6(0.0), "0");
    }

    #[test]
    fn zero_oracle_uses_absolute_difference() {
        let r = Row::new(vec![], 1e-10, 0.0, 1e-9, "zero");
        assert_eq!(r.rel_diff, 1e-10);
        assert!(r.passed());
    }

    #[test]
    fn csv_cells_round_trip() {
        let x = 0.1 + 0.2;
        let env = Envelope {
            version: "0".into(),
            command: CommandEcho {
                name: "t".into(),
                argv: vec![],
                timestamp: String::new(),
            },
            params: BTreeMap::new(),
            results: vec![Row::new(vec![("p", Value::from(1))], x, x, 0.0, "id")],
            checks: vec![],
        };
        let csv = env.to_csv();
        let line = csv.lines().nth(1).unwrap();
        let cell: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(cell, x);
    }
}
