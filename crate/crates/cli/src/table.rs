//! Result tables: CSV body (plot-ready, byte-stable) plus a JSON mirror
//! carrying the metadata needed to reproduce the table bit for bit.

use serde::Serialize;
use std::io::Write;
use std::path::{Path, PathBuf};

#[derive(Debug, Serialize)]
pub struct Metadata {
    pub command: String,
    pub code_version: String,
    pub config_sha256: String,
    /// Full echo of the parsed configuration.
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_runs: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel: Option<String>,
    /// Named tolerances pinned by the command (empty when none apply).
    pub tolerances: serde_json::Value,
}

#[derive(Debug, Serialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

/// Deterministic cell formatting: shortest round-trip for floats, empty for
/// missing values.
pub fn cell(v: f64) -> String {
    format!("{v}")
}

pub fn opt_cell(v: Option<f64>) -> String {
    v.map(cell).unwrap_or_default()
}

impl ResultTable {
    pub fn csv_body(&self) -> String {
        let mut wtr = csv::Writer::from_writer(Vec::new());
        wtr.write_record(&self.columns).expect("csv header");
        for row in &self.rows {
            wtr.write_record(row).expect("csv row");
        }
        String::from_utf8(wtr.into_inner().expect("csv flush")).expect("csv utf8")
    }

    pub fn json_mirror(&self) -> String {
        serde_json::to_string_pretty(self).expect("json mirror")
    }

    /// Write `<out>` (CSV) and `<out with .json extension>` (mirror); with no
    /// path, stream the CSV body to stdout.
    pub fn emit(&self, out: Option<&Path>) -> std::io::Result<()> {
        match out {
            Some(path) => {
                std::fs::write(path, self.csv_body())?;
                let mut json_path = PathBuf::from(path);
                json_path.set_extension("json");
                std::fs::write(json_path, self.json_mirror())?;
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(self.csv_body().as_bytes())?;
            }
        }
        Ok(())
    }
}
