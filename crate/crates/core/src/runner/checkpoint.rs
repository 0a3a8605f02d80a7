//! Binary checkpoint snapshots for long runs.
//!
//! Layout (version 1, all integers little-endian, all floats IEEE-754
//! binary64 little-endian; this layout is stable across releases):
//!
//! ```text
//! offset  size       field
//! 0       8          magic "HFCKPT01"
//! 8       16         config hash, ASCII hex
//! 24      8          step index (u64)
//! 32      8          seed (u64)
//! 40      8          first negative step (i64, -1 = none)
//! 48      8          cell count nx (u64)
//! 56      8          sample count ns (u64)
//! 64      8·nx       u⁺ cell values
//! …       8·nx       u⁻ cell values
//! …       16·ns      E(t) samples, (t: u64, E: f64) pairs
//! ```
//!
//! Writes go to a sibling temporary file first and are renamed into place,
//! so an interrupted write never corrupts an existing checkpoint.

use std::fs;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::RunError;

const MAGIC: &[u8; 8] = b"HFCKPT01";

/// Everything needed to resume a run exactly where it left off.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub config_hash: String,
    pub step: u64,
    pub seed: u64,
    pub first_negative_step: Option<u64>,
    pub u_plus: Vec<f64>,
    pub u_minus: Vec<f64>,
    pub samples: Vec<(u64, f64)>,
}

fn io_err(path: &Path, source: std::io::Error) -> RunError {
    RunError::Checkpoint {
        path: path.display().to_string(),
        source,
    }
}

fn format_err(path: &Path, reason: impl Into<String>) -> RunError {
    RunError::CheckpointFormat {
        path: path.display().to_string(),
        reason: reason.into(),
    }
}

pub fn save(path: &Path, ckpt: &Checkpoint) -> Result<(), RunError> {
    assert_eq!(ckpt.config_hash.len(), 16, "config hash must be 16 hex chars");
    let mut buf = Vec::with_capacity(64 + 16 * (ckpt.u_plus.len() + ckpt.samples.len()));
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(ckpt.config_hash.as_bytes());
    buf.extend_from_slice(&ckpt.step.to_le_bytes());
    buf.extend_from_slice(&ckpt.seed.to_le_bytes());
    let neg = ckpt.first_negative_step.map_or(-1i64, |s| s as i64);
    buf.extend_from_slice(&neg.to_le_bytes());
    buf.extend_from_slice(&(ckpt.u_plus.len() as u64).to_le_bytes());
    buf.extend_from_slice(&(ckpt.samples.len() as u64).to_le_bytes());
    for v in ckpt.u_plus.iter().chain(&ckpt.u_minus) {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    for (t, e) in &ckpt.samples {
        buf.extend_from_slice(&t.to_le_bytes());
        buf.extend_from_slice(&e.to_le_bytes());
    }

    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| io_err(path, e))?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut file = fs::File::create(&tmp).map_err(|e| io_err(&tmp, e))?;
        file.write_all(&buf).map_err(|e| io_err(&tmp, e))?;
        file.sync_all().map_err(|e| io_err(&tmp, e))?;
    }
    fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

pub fn load(path: &Path) -> Result<Checkpoint, RunError> {
    let mut buf = Vec::new();
    fs::File::open(path)
        .and_then(|mut f| f.read_to_end(&mut buf))
        .map_err(|e| io_err(path, e))?;
    if buf.len() < 64 {
        return Err(format_err(path, "file shorter than the fixed header"));
    }
    if &buf[0..8] != MAGIC {
        return Err(format_err(path, "bad magic; not a checkpoint file"));
    }
    let config_hash = std::str::from_utf8(&buf[8..24])
        .map_err(|_| format_err(path, "config hash is not ASCII"))?
        .to_string();
    let u64_at = |off: usize| u64::from_le_bytes(buf[off..off + 8].try_into().unwrap());
    let step = u64_at(24);
    let seed = u64_at(32);
    let neg = i64::from_le_bytes(buf[40..48].try_into().unwrap());
    let nx = u64_at(48) as usize;
    let ns = u64_at(56) as usize;
    let expected = 64 + 16 * nx + 16 * ns;
    if buf.len() != expected {
        return Err(format_err(
            path,
            format!("expected {expected} bytes for nx={nx}, ns={ns}, found {}", buf.len()),
        ));
    }
    let f64_at = |off: usize| f64::from_le_bytes(buf[off..off + 8].try_into().unwrap());
    let mut off = 64;
    let mut read_vec = |n: usize| -> Vec<f64> {
        let v: Vec<f64> = (0..n).map(|k| f64_at(off + 8 * k)).collect();
        off += 8 * n;
        v
    };
    let u_plus = read_vec(nx);
    let u_minus = read_vec(nx);
    let mut samples = Vec::with_capacity(ns);
    for k in 0..ns {
        let base = off + 16 * k;
        samples.push((u64_at(base), f64_at(base + 8)));
    }
    Ok(Checkpoint {
        config_hash,
        step,
        seed,
        first_negative_step: if neg < 0 { None } else { Some(neg as u64) },
        u_plus,
        u_minus,
        samples,
    })
}
