#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

/// Documented invocations: (golden file, arguments, exit code, stderr fragment).
pub const GOLDEN: &[(&str, &[&str], i32, &str)] = &[
    ("eval_phi", &["eval", "--gammas", "", "--fns", "phi", "--ns", "10"], 0, ""),
    ("eval_ramanujan", &["eval", "--gammas", "1", "--fns", "mu,pow:1", "--ns", "4,2"], 0, ""),
    ("eval_unit_slot", &["eval", "--gammas", "1", "--fns", "one,one", "--ns", "1,5"], 0, ""),
    ("verify_smith", &["verify", "smith", "--fns", "mu,pow:1", "--set", "1,2,3"], 0, ""),
    (
        "verify_multivariable",
        &["verify", "multivariable-L", "--fns", "mu,pow:1", "--gammas", "1", "--N", "30"],
        0,
        "",
    ),
    ("verify_not_closed", &["verify", "smith", "--set", "2,3"], 2, "set not factor-closed"),
    ("table_c", &["table", "c", "--kmax", "5", "--nmax", "5"], 0, ""),
    ("table_fourier", &["table", "fourier", "--fns", "mu,pow:1", "--n1", "6"], 0, ""),
    ("table_closure", &["table", "closure", "--set", "12"], 0, ""),
];

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_multiram"))
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.out"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// Whether one documented invocation reproduces its golden output exactly.
pub fn golden_matches(name: &str, args: &[&str], code: i32, stderr: &str) -> Result<(), String> {
    let r = run(args);
    if r.code != code {
        return Err(format!("{name}: exit {} (expected {code}); stderr: {}", r.code, r.stderr));
    }
    if r.stdout != golden(name) {
        return Err(format!("{name}: stdout differs: {:?}", r.stdout));
    }
    if !r.stderr.contains(stderr) {
        return Err(format!("{name}: stderr lacks {stderr:?}: {}", r.stderr));
    }
    Ok(())
}
