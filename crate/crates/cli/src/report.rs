use anyhow::Result;
use serde_json::{Map, Value};

use crate::{ExperimentConfig, Format};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub config: ExperimentConfig,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
    /// `None` when no criterion applies to the command.
    pub pass: Option<bool>,
    pub wall_time_seconds: f64,
}

impl Report {
    pub fn new(config: &ExperimentConfig, columns: Vec<&'static str>) -> Self {
        Self {
            config: config.clone(),
            columns,
            rows: Vec::new(),
            pass: None,
            wall_time_seconds: 0.0,
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// 0 on pass or when no criterion applies, 1 on failure.
    pub fn exit_code(&self) -> u8 {
        match self.pass {
            Some(false) => 1,
            _ => 0,
        }
    }

    pub fn render(&self, format: Format) -> Result<String> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(cell_text))?;
        }
        Ok(String::from_utf8(w.into_inner()?)?)
    }

    fn to_json(&self) -> Result<String> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.to_string(), v.clone()))
                    .collect();
                Value::Object(obj)
            })
            .collect();
        let mut out = Map::new();
        out.insert("config".into(), serde_json::to_value(&self.config)?);
        out.insert("rows".into(), Value::Array(rows));
        out.insert("pass".into(), self.pass.map_or(Value::Null, Value::Bool));
        out.insert("wall_time_seconds".into(), Value::from(self.wall_time_seconds));
        let mut text = serde_json::to_string_pretty(&Value::Object(out))?;
        text.push('\n');
        Ok(text)
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}
