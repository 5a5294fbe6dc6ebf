use serde_json::{json, Map, Value};

use super::args::Format;

/// A command's result: named columns of preformatted values plus key/value metadata.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Report { command: command.into(), meta: Vec::new(), columns: columns.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn meta(&mut self, k: &str, v: impl ToString) {
        self.meta.push((k.into(), v.to_string()));
    }

    pub fn row(&mut self, r: Vec<String>) {
        debug_assert_eq!(r.len(), self.columns.len());
        self.rows.push(r);
    }

    pub fn render(&self, fmt: Format) -> String {
        match fmt {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }

    fn csv(&self) -> String {
        let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    fn json(&self) -> String {
        let mut meta = Map::new();
        for (k, v) in &self.meta {
            meta.insert(k.clone(), Value::String(v.clone()));
        }
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let mut o = Map::new();
                for (c, v) in self.columns.iter().zip(r) {
                    o.insert(c.clone(), Value::String(v.clone()));
                }
                Value::Object(o)
            })
            .collect();
        let doc = json!({ "command": self.command, "meta": meta, "columns": self.columns, "rows": rows });
        let mut s = serde_json::to_string_pretty(&doc).expect("json");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_shapes() {
        let mut r = Report::new("t", &["N", "m=1", "direct"]);
        r.meta("bits", 256);
        r.row(vec!["800".into(), "2.9e2".into(), "3.0e2".into()]);
        assert_eq!(r.render(Format::Csv), "N,m=1,direct\n800,2.9e2,3.0e2\n");
        let v: Value = serde_json::from_str(&r.render(Format::Json)).unwrap();
        assert_eq!(v["rows"][0]["m=1"], "2.9e2");
        assert_eq!(v["meta"]["bits"], "256");
    }
}
