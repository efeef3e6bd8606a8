use anyhow::Result;
use serde_json::Value;

use crate::config::Format;

/// One result in all three renderings.
pub struct Report {
    pub json: Value,
    pub text: String,
    /// Header first.
    pub table: Vec<Vec<String>>,
}

impl Report {
    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Text => {
                let mut s = self.text.clone();
                if !s.ends_with('\n') {
                    s.push('\n');
                }
                s
            }
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                for row in &self.table {
                    w.write_record(row)?;
                }
                String::from_utf8(w.into_inner()?)?
            }
        })
    }
}

pub fn row<I, T>(cells: I) -> Vec<String>
where
    I: IntoIterator<Item = T>,
    T: ToString,
{
    cells.into_iter().map(|c| c.to_string()).collect()
}
