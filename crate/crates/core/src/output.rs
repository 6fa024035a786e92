// SPDX-License-Identifier: Apache-2.0

//! CSV files with JSON sidecars, written atomically.
//!
//! Every `name.csv` gets a `name.csv.json` carrying the full run config,
//! the tool version and the precision actually used. No timestamps, so
//! reruns are byte-identical.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::moments::{moments_from_rows, MomentSequence, MOMENTS_CSV_HEADER};
use crate::scalar::ComplexBig;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

/// Write `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp{}", std::process::id()));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn csv_bytes<R: AsRef<[String]>>(header: &[&str], rows: &[R]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        let r = r.as_ref();
        if r.len() != header.len() {
            return Err(Error::InvalidParameter(format!("row has {} fields, header {}", r.len(), header.len())));
        }
        w.write_record(r)?;
    }
    w.into_inner().map_err(|e| Error::Io(e.into_error()))
}

/// Sidecar path of `csv`.
pub fn sidecar_path(csv: &Path) -> PathBuf {
    let mut s = csv.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Metadata shared by the outputs of one run.
#[derive(Clone, Debug)]
pub struct RunMeta {
    pub config: Value,
    /// Bits actually used; `None` for exact arithmetic.
    pub precision_bits: Option<u32>,
}

impl RunMeta {
    fn sidecar(&self, extra: Value) -> Value {
        json!({
            "config": self.config,
            "tool_version": TOOL_VERSION,
            "precision_bits": self.precision_bits.map_or(Value::String("exact".into()), |b| json!(b)),
            "result": extra,
        })
    }
}

/// Collects written files, in write order.
#[derive(Debug, Default)]
pub struct Outputs {
    pub files: Vec<PathBuf>,
}

impl Outputs {
    /// Write a CSV and its sidecar; `extra` lands under `"result"`.
    pub fn csv<R: AsRef<[String]>>(
        &mut self,
        path: &Path,
        header: &[&str],
        rows: &[R],
        meta: &RunMeta,
        extra: Value,
    ) -> Result<()> {
        write_atomic(path, &csv_bytes(header, rows)?)?;
        let side = sidecar_path(path);
        let mut text = serde_json::to_string_pretty(&meta.sidecar(extra))?;
        text.push('\n');
        write_atomic(&side, text.as_bytes())?;
        self.files.push(path.to_path_buf());
        self.files.push(side);
        Ok(())
    }

    pub fn json(&mut self, path: &Path, value: &Value) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        write_atomic(path, text.as_bytes())?;
        self.files.push(path.to_path_buf());
        Ok(())
    }
}

/// Read a CSV whose header must start with `expected`.
pub fn read_csv(path: &Path, expected: &[&str]) -> Result<Vec<Vec<String>>> {
    let schema = |message: String| Error::Schema { path: path.to_path_buf(), message };
    let mut r = csv::Reader::from_path(path)?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header.len() < expected.len() || header.iter().zip(expected).any(|(h, e)| h != e) {
        return Err(schema(format!("header {header:?}, expected {expected:?}")));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec?.iter().map(str::to_string).collect());
    }
    if rows.is_empty() {
        return Err(schema("no data rows".into()));
    }
    Ok(rows)
}

/// `moments.csv` at `prec` bits.
pub fn read_moments_csv(path: &Path, prec: u32) -> Result<MomentSequence<ComplexBig>> {
    let rows = read_csv(path, &MOMENTS_CSV_HEADER)?;
    let parsed = rows
        .into_iter()
        .map(|r| {
            let n = r[0].parse().map_err(|_| Error::Schema { path: path.to_path_buf(), message: format!("bad n {:?}", r[0]) })?;
            Ok((n, r[1].clone(), r[2].clone()))
        })
        .collect::<Result<Vec<_>>>()?;
    moments_from_rows(&parsed, prec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::ModelTag;
    use crate::scalar::Scalar;

    #[test]
    fn csv_and_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("sub/moments.csv");
        let meta = RunMeta { config: json!({"a": "1"}), precision_bits: Some(256) };
        let seq = MomentSequence::new(
            vec![ComplexBig::one(256), ComplexBig::from_f64(0.0, 0.25, 256), ComplexBig::from_f64(-3.5, 0.0, 256)],
            ModelTag::External,
        );
        let mut out = Outputs::default();
        out.csv(&path, &MOMENTS_CSV_HEADER, &seq.csv_rows(30), &meta, json!({"n": 3})).unwrap();
        assert_eq!(out.files.len(), 2);
        let side: Value = serde_json::from_str(&fs::read_to_string(sidecar_path(&path)).unwrap()).unwrap();
        assert_eq!(side["precision_bits"], 256);
        assert_eq!(side["result"]["n"], 3);
        let back = read_moments_csv(&path, 256).unwrap();
        assert_eq!(back.mu, seq.mu);
        let leftovers: Vec<_> = fs::read_dir(path.parent().unwrap()).unwrap().filter_map(|e| e.ok()).collect();
        assert_eq!(leftovers.len(), 2);
    }

    #[test]
    fn schema_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        fs::write(&path, "n,foo\n0,1\n").unwrap();
        assert!(matches!(read_csv(&path, &MOMENTS_CSV_HEADER), Err(Error::Schema { .. })));
        fs::write(&path, "n,mu_re,mu_im\n").unwrap();
        assert!(matches!(read_csv(&path, &MOMENTS_CSV_HEADER), Err(Error::Schema { .. })));
        assert!(csv_bytes(&["a"], &[vec!["1".to_string(), "2".to_string()]]).is_err());
    }
}
