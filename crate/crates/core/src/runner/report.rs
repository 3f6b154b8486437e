//! Report emission: CSV with `#` header lines, or a single JSON document.

use serde::Serialize;

use crate::error::Result;

/// Provenance written ahead of every report body.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Header {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    #[serde(skip)]
    pub config_json: String,
}

impl Header {
    pub fn new(command: &str, config_sha256: String, seed: u64, config_json: String) -> Self {
        Self {
            tool: "stripneg",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            config_sha256,
            seed,
            config_json,
        }
    }
}

/// 17 significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn int_list(ks: &[i64]) -> String {
    ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(" ")
}

pub fn float_list(xs: &[f64]) -> String {
    xs.iter().map(|&x| float(x)).collect::<Vec<_>>().join(" ")
}

pub fn csv_document(header: &Header, columns: &[&str], rows: &[Vec<String>]) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    out.extend_from_slice(
        format!(
            "# {} {} {}\n# config_sha256 {}\n# seed {}\n# config {}\n",
            header.tool, header.version, header.command, header.config_sha256, header.seed, header.config_json
        )
        .as_bytes(),
    );
    let mut w = csv::Writer::from_writer(out);
    w.write_record(columns)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(w.into_inner().map_err(|e| e.into_error())?)
}

pub fn json_document<T: Serialize>(header: &Header, body: &T) -> Result<Vec<u8>> {
    #[derive(Serialize)]
    struct Doc<'a, T> {
        #[serde(flatten)]
        header: &'a Header,
        config: serde_json::Value,
        body: &'a T,
    }
    let config = serde_json::from_str(&header.config_json)?;
    let mut out = serde_json::to_vec_pretty(&Doc { header, config, body })?;
    out.push(b'\n');
    Ok(out)
}

/// The report without its `#` header lines.
pub fn csv_body(doc: &str) -> String {
    doc.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}

/// The config embedded in a CSV report header.
pub fn embedded_config(doc: &str) -> Option<&str> {
    doc.lines().find_map(|l| l.strip_prefix("# config "))
}
