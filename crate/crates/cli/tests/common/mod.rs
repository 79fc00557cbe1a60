//! Golden-file cases shared by the golden and acceptance targets.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::Command;

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    /// Compare the written file (`--out`) rather than stdout.
    pub writes_file: bool,
}

pub const CASES: &[GoldenCase] = &[
    GoldenCase {
        name: "simulate_fast.json",
        args: &["simulate", "--q", "1/3,1/3,1/3", "--n", "8", "--state", "0,0,1", "--backend", "fast", "--format", "json"],
        writes_file: true,
    },
    GoldenCase {
        name: "simulate_dense.csv",
        args: &["simulate", "--q", "0.5,0.3,0.2", "--n", "3", "--state", "x+", "--backend", "dense", "--format", "csv"],
        writes_file: true,
    },
    GoldenCase {
        name: "trajectory.csv",
        args: &["trajectory", "--q", "1/3,1/3,1/3", "--n", "5", "--samples", "21", "--states", "z+;z-"],
        writes_file: true,
    },
    GoldenCase {
        name: "distance.csv",
        args: &["distance", "--n", "4", "--q", "1/3,1/3,1/3", "--trials", "8", "--seed", "0"],
        writes_file: true,
    },
    GoldenCase { name: "generator.csv", args: &["generator", "--q", "1/3,1/3,1/3", "--n", "5", "--samples", "21"], writes_file: true },
    GoldenCase {
        name: "generator_segment.csv",
        args: &["generator", "--q", "1/3,1/3,1/3", "--n", "5", "--samples", "31", "--segment"],
        writes_file: true,
    },
    GoldenCase { name: "divisible.txt", args: &["divisible", "--q", "0.5,0.3,0.2"], writes_file: false },
    GoldenCase {
        name: "randomunitary.json",
        args: &["randomunitary", "--spec", "@inputs/ru_spec_d3.json", "--k", "2", "--state-file", "@inputs/ru_state_d3.json"],
        writes_file: true,
    },
];

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qcollide"))
}

/// Run a case through the binary; returns the bytes to compare.
pub fn produce(case: &GoldenCase, scratch: &Path) -> Result<Vec<u8>, String> {
    let dir = golden_dir();
    let mut args: Vec<String> =
        case.args.iter().map(|a| match a.strip_prefix('@') {
            Some(rel) => dir.join(rel).display().to_string(),
            None => a.to_string(),
        })
        .collect();
    let out = scratch.join(case.name);
    if case.writes_file {
        args.push("--out".into());
        args.push(out.display().to_string());
    }
    let res = bin().args(&args).output().map_err(|e| e.to_string())?;
    if !res.status.success() {
        return Err(format!("{} exited with {:?}: {}", case.name, res.status.code(), String::from_utf8_lossy(&res.stderr)));
    }
    if case.writes_file {
        std::fs::read(&out).map_err(|e| e.to_string())
    } else {
        Ok(res.stdout)
    }
}

/// Compare a case against its committed file. With `QCOLLIDE_BLESS=1` the
/// committed file is rewritten instead.
pub fn check(case: &GoldenCase, scratch: &Path) -> Result<(), String> {
    let got = produce(case, scratch)?;
    let path = golden_dir().join(case.name);
    if std::env::var_os("QCOLLIDE_BLESS").is_some() {
        std::fs::write(&path, &got).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let want = std::fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if got == want {
        Ok(())
    } else {
        Err(format!("{} differs from the committed output", case.name))
    }
}
