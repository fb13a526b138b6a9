//! Report files. Names carry the command, the seed and the constants
//! fingerprint, e.g. `duality-seed7-c5f0e1a2b3c4d5e6f.json`.

use std::fs;
use std::path::{Path, PathBuf};

use entropy_core::covering::Staircase;
use entropy_core::functionals::PaperConstants;
use entropy_core::lab::RatioEntry;
use serde::Serialize;

use crate::error::{LabError, Result};

pub fn report_name(cmd: &str, seed: u64, consts: &PaperConstants, ext: &str) -> String {
    format!("{cmd}-seed{seed}-c{:016x}.{ext}", consts.fingerprint())
}

fn target(dir: &Path, cmd: &str, seed: u64, consts: &PaperConstants, ext: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    Ok(dir.join(report_name(cmd, seed, consts, ext)))
}

pub fn write_json<T: Serialize>(
    dir: &Path,
    cmd: &str,
    seed: u64,
    consts: &PaperConstants,
    value: &T,
) -> Result<PathBuf> {
    let path = target(dir, cmd, seed, consts, "json")?;
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| LabError::Input(format!("serializing report: {e}")))?;
    fs::write(&path, text + "\n").map_err(|e| LabError::io(&path, e))?;
    Ok(path)
}

pub fn write_csv(
    dir: &Path,
    cmd: &str,
    seed: u64,
    consts: &PaperConstants,
    text: &str,
) -> Result<PathBuf> {
    let path = target(dir, cmd, seed, consts, "csv")?;
    fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
    Ok(path)
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| LabError::Input(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv of numbers and ascii names"))
}

/// Columns `t, lower_bits, upper_bits, certification, pitch`; the pitch is
/// empty for exact and discrete entries.
pub fn staircase_csv(st: &Staircase) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["t", "lower_bits", "upper_bits", "certification", "pitch"])?;
    for e in &st.entries {
        let (cert, pitch) = match e.certification {
            entropy_core::covering::Certification::Exact => ("exact", String::new()),
            entropy_core::covering::Certification::SampleCertified { grid_pitch, .. } => {
                ("sample_certified", grid_pitch.to_string())
            }
            entropy_core::covering::Certification::Discrete { optimal: true } => {
                ("discrete_optimal", String::new())
            }
            entropy_core::covering::Certification::Discrete { optimal: false } => {
                ("discrete", String::new())
            }
        };
        w.write_record([
            e.t.to_string(),
            e.lower_bits.to_string(),
            e.upper_bits.to_string(),
            cert.into(),
            pitch,
        ])?;
    }
    finish(w)
}

/// One row per body, `t` and `α`: `body, t, alpha, forward, backward`.
pub fn ratio_csv<'a>(
    tables: impl IntoIterator<Item = (usize, &'a [RatioEntry])>,
) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["body", "t", "alpha", "forward", "backward"])?;
    for (i, rows) in tables {
        for r in rows {
            w.write_record([
                i.to_string(),
                r.t.to_string(),
                r.alpha.to_string(),
                r.forward.to_string(),
                r.backward.to_string(),
            ])?;
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_embed_seed_and_constants() {
        let c = PaperConstants::default();
        let a = report_name("cover", 7, &c, "json");
        assert!(a.starts_with("cover-seed7-c") && a.ends_with(".json"));
        assert_ne!(a, report_name("cover", 7, &c.with_r0(200.0), "json"));
        assert_ne!(a, report_name("cover", 8, &c, "json"));
    }
}
