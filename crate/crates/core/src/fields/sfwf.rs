//! SFWF state files: a JSON manifest plus a raw little-endian binary of
//! `(re, im)` f64 pairs at offset `((c·nz + iz)·ny + iy)·nx + ix`.
//!
//! The binary companion sits next to the manifest with extension `.bin`.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::{MomentumGrid, StateRep, WaveFunctionK};
use crate::linalg::C64;

pub const SFWF_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum SfwfError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("manifest is not valid JSON: {0}")]
    Json(String),
    #[error("manifest field `{field}`: {problem}")]
    Field { field: &'static str, problem: String },
    #[error("binary {path} holds {got} bytes, manifest implies {expected}")]
    Size { path: PathBuf, got: u64, expected: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SfwfManifest {
    pub version: u32,
    pub nx: usize,
    pub ny: usize,
    pub nz: usize,
    #[serde(rename = "Lx")]
    pub lx: f64,
    #[serde(rename = "Ly")]
    pub ly: f64,
    #[serde(rename = "Lz")]
    pub lz: f64,
    pub mass: f64,
    pub ncomp: usize,
    pub representation: StateRep,
    pub time: f64,
}

impl SfwfManifest {
    pub fn for_state(state: &WaveFunctionK) -> Self {
        let g = &state.grid;
        Self {
            version: SFWF_VERSION,
            nx: g.n[0],
            ny: g.n[1],
            nz: g.n[2],
            lx: g.l[0],
            ly: g.l[1],
            lz: g.l[2],
            mass: g.mass,
            ncomp: state.ncomp,
            representation: state.representation,
            time: state.time,
        }
    }

    pub fn values(&self) -> usize {
        self.nx * self.ny * self.nz * self.ncomp
    }

    /// Validates a manifest document field by field.
    pub fn from_json(text: &str) -> Result<Self, SfwfError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| SfwfError::Json(e.to_string()))?;
        let obj = doc.as_object().ok_or_else(|| SfwfError::Json("top level must be an object".into()))?;
        let get = |field: &'static str| obj.get(field).ok_or(SfwfError::Field { field, problem: "missing".into() });
        let count = |field: &'static str| -> Result<usize, SfwfError> {
            let v = get(field)?;
            v.as_u64()
                .filter(|&n| n > 0)
                .map(|n| n as usize)
                .ok_or(SfwfError::Field { field, problem: format!("expected a positive integer, got {v}") })
        };
        let even = |field: &'static str| -> Result<usize, SfwfError> {
            let n = count(field)?;
            if n % 2 != 0 {
                return Err(SfwfError::Field { field, problem: format!("grid size {n} must be even") });
            }
            Ok(n)
        };
        let real = |field: &'static str, positive: bool| -> Result<f64, SfwfError> {
            let v = get(field)?;
            let x = v.as_f64().ok_or(SfwfError::Field { field, problem: format!("expected a number, got {v}") })?;
            if !x.is_finite() || (positive && x <= 0.0) || x < 0.0 && field != "time" {
                return Err(SfwfError::Field { field, problem: format!("value {x} out of range") });
            }
            Ok(x)
        };
        let version = count("version")? as u32;
        if version != SFWF_VERSION {
            return Err(SfwfError::Field { field: "version", problem: format!("unsupported version {version}") });
        }
        let rep_v = get("representation")?;
        let representation = rep_v
            .as_str()
            .ok_or(SfwfError::Field { field: "representation", problem: format!("expected a string, got {rep_v}") })?
            .parse::<StateRep>()
            .map_err(|p| SfwfError::Field { field: "representation", problem: p })?;
        Ok(Self {
            version,
            nx: even("nx")?,
            ny: even("ny")?,
            nz: even("nz")?,
            lx: real("Lx", true)?,
            ly: real("Ly", true)?,
            lz: real("Lz", true)?,
            mass: real("mass", false)?,
            ncomp: count("ncomp")?,
            representation,
            time: real("time", false)?,
        })
    }
}

/// Path of the binary companion for a manifest path.
pub fn companion_path(manifest: &Path) -> PathBuf {
    manifest.with_extension("bin")
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> SfwfError + '_ {
    move |source| SfwfError::Io { path: path.to_path_buf(), source }
}

pub fn write_sfwf(state: &WaveFunctionK, manifest_path: &Path) -> Result<(), SfwfError> {
    let manifest = SfwfManifest::for_state(state);
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| SfwfError::Json(e.to_string()))?;
    fs::write(manifest_path, text).map_err(io_err(manifest_path))?;
    let bin = companion_path(manifest_path);
    let mut bytes = Vec::with_capacity(state.data.len() * 16);
    for z in &state.data {
        bytes.extend_from_slice(&z.re.to_le_bytes());
        bytes.extend_from_slice(&z.im.to_le_bytes());
    }
    let mut f = fs::File::create(&bin).map_err(io_err(&bin))?;
    f.write_all(&bytes).map_err(io_err(&bin))?;
    Ok(())
}

pub fn read_sfwf(manifest_path: &Path) -> Result<WaveFunctionK, SfwfError> {
    let text = fs::read_to_string(manifest_path).map_err(io_err(manifest_path))?;
    let m = SfwfManifest::from_json(&text)?;
    let grid = MomentumGrid::new([m.nx, m.ny, m.nz], [m.lx, m.ly, m.lz], m.mass)
        .map_err(|e| SfwfError::Field { field: "grid", problem: e.to_string() })?;
    let bin = companion_path(manifest_path);
    let mut bytes = Vec::new();
    fs::File::open(&bin).and_then(|mut f| f.read_to_end(&mut bytes)).map_err(io_err(&bin))?;
    let expected = (m.values() * 16) as u64;
    if bytes.len() as u64 != expected {
        return Err(SfwfError::Size { path: bin, got: bytes.len() as u64, expected });
    }
    let rd = |c: &[u8]| f64::from_le_bytes(c.try_into().expect("8-byte chunk"));
    let data: Vec<C64> = bytes.chunks_exact(16).map(|c| C64::new(rd(&c[..8]), rd(&c[8..]))).collect();
    if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(SfwfError::Field { field: "data", problem: "binary contains non-finite values".into() });
    }
    Ok(WaveFunctionK { grid, ncomp: m.ncomp, data, representation: m.representation, time: m.time })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_field_errors_name_the_field() {
        let ok = r#"{"version":1,"nx":4,"ny":4,"nz":4,"Lx":1,"Ly":1,"Lz":1,"mass":1,"ncomp":2,"representation":"rcqm","time":0}"#;
        assert!(SfwfManifest::from_json(ok).is_ok());
        let cases = [
            (ok.replace("\"nx\":4", "\"nx\":3"), "nx"),
            (ok.replace("\"Lx\":1", "\"Lx\":-1"), "Lx"),
            (ok.replace("\"representation\":\"rcqm\"", "\"representation\":\"qed\""), "representation"),
            (ok.replace(",\"mass\":1", ""), "mass"),
            (ok.replace("\"version\":1", "\"version\":7"), "version"),
        ];
        for (text, field) in cases {
            match SfwfManifest::from_json(&text) {
                Err(SfwfError::Field { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{field}: {other:?}"),
            }
        }
        assert!(matches!(SfwfManifest::from_json("{not json"), Err(SfwfError::Json(_))));
    }
}
