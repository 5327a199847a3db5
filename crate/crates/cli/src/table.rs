//! Report tables, written as CSV with `#` header comments or as JSON with
//! the same content.

use jensenlab::numeric::Ball;
use serde_json::{json, Map, Value};

use crate::settings::Format;

#[derive(Clone, Debug)]
pub struct Table {
    /// Versioned column layout, e.g. `verify-suite/1`.
    pub schema: String,
    pub comments: Vec<String>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &str, columns: &[&'static str]) -> Table {
        Table { schema: schema.into(), comments: Vec::new(), columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn comment(&mut self, c: impl Into<String>) {
        self.comments.push(c.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = format!("# schema={}\n", self.schema);
        for c in &self.comments {
            for line in c.lines() {
                out.push_str("# ");
                out.push_str(line);
                out.push('\n');
            }
        }
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        out.push_str(&String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input"));
        out
    }

    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> =
                    self.columns.iter().zip(r).map(|(k, v)| (k.to_string(), Value::String(v.clone()))).collect();
                Value::Object(m)
            })
            .collect();
        let v = json!({
            "schema": self.schema,
            "comments": self.comments,
            "columns": self.columns,
            "rows": rows,
        });
        let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, f: Format) -> String {
        match f {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// `(mid, rad, prec)` with a midpoint that round-trips at `prec`.
pub fn ball_triple(b: &Ball) -> [String; 3] {
    let (m, r) = b.to_decimal_pair();
    [m, r, b.prec().to_string()]
}

pub fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new("demo/1", &["k", "note"]);
        t.comment("first\nsecond");
        t.push(vec!["0".into(), "plain".into()]);
        t.push(vec!["1".into(), "has, comma \"q\"".into()]);
        t
    }

    #[test]
    fn csv_layout_is_stable() {
        let expect = "# schema=demo/1\n# first\n# second\nk,note\n0,plain\n1,\"has, comma \"\"q\"\"\"\n";
        assert_eq!(sample().to_csv(), expect);
    }

    #[test]
    fn json_mirrors_csv() {
        let v: Value = serde_json::from_str(&sample().to_json()).unwrap();
        assert_eq!(v["schema"], "demo/1");
        assert_eq!(v["comments"][0], "first\nsecond");
        assert_eq!(v["rows"][1]["note"], "has, comma \"q\"");
        assert_eq!(v["columns"].as_array().unwrap().len(), 2);
    }
}
