use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Header plus rows, for commands with a natural tabular form.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Table { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// What a subcommand produces.
pub struct Artifact {
    pub json: Value,
    pub table: Option<Table>,
    /// Failure that should still emit the artifact (e.g. catalog validation).
    pub exit: i32,
}

impl Artifact {
    pub fn new(json: Value) -> Self {
        Artifact { json, table: None, exit: 0 }
    }

    pub fn with_table(mut self, t: Table) -> Self {
        self.table = Some(t);
        self
    }

    pub fn render(&self, fmt: Format) -> anyhow::Result<String> {
        Ok(match fmt {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)?;
                s.push('\n');
                s
            }
            Format::Csv => {
                let table = match &self.table {
                    Some(t) => t.clone(),
                    None => {
                        let mut t = Table::new(&["key", "value"]);
                        flatten("", &self.json, &mut |k, v| t.push(vec![k, v]));
                        t
                    }
                };
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header)?;
                for r in &table.rows {
                    w.write_record(r)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
            Format::Text => {
                let mut s = String::new();
                flatten("", &self.json, &mut |k, v| {
                    s.push_str(&k);
                    s.push_str(": ");
                    s.push_str(&v);
                    s.push('\n');
                });
                s
            }
        })
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut dyn FnMut(String, String)) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::Array(a) => out(prefix.to_string(), a.iter().map(scalar).collect::<Vec<_>>().join(" ")),
        _ => out(prefix.to_string(), scalar(v)),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "none".into(),
        other => other.to_string(),
    }
}
