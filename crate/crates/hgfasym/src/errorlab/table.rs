use rug::Float;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Significant decimal digits that reproduce a `bits`-bit float exactly.
pub(crate) fn digits_for(bits: u32) -> usize {
    1 + (bits as f64 * std::f64::consts::LOG10_2).ceil() as usize
}

/// Decimal form of `x` that parses back to the same `bits`-bit value.
pub fn format_float(x: &Float, bits: u32) -> String {
    if x.is_zero() {
        return "0".into();
    }
    x.to_string_radix(10, Some(digits_for(bits)))
}

/// Column-oriented output with a key-value header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table { header: Vec::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn header(&mut self, key: &str, value: &str) {
        self.header.push((key.to_string(), value.to_string()));
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    /// Appends the rows of `other`, which must have the same columns.
    pub fn extend(&mut self, other: Table) {
        debug_assert_eq!(self.columns, other.columns);
        self.header.extend(other.header);
        self.rows.extend(other.rows);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// `# key = value` lines followed by the CSV body.
    pub fn to_csv(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.header {
            out.push_str(&format!("# {k} = {v}\n"));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Config(e.to_string());
        w.write_record(&self.columns).map_err(io)?;
        for r in &self.rows {
            w.write_record(r).map_err(io)?;
        }
        let body = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        out.push_str(&String::from_utf8(body).map_err(|e| Error::Config(e.to_string()))?);
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        let header: Map<String, Value> = self.header.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(|c| json!(c))).collect()))
            .collect();
        let doc = json!({ "header": header, "columns": self.columns, "rows": rows });
        serde_json::to_string_pretty(&doc).expect("JSON of strings") + "\n"
    }
}
