#![allow(dead_code)]

use std::path::PathBuf;

use spectral_gap::cli;

pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the command line in process.
pub fn run(args: &[&str]) -> Outcome {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let full: Vec<&str> = std::iter::once("spectral-gap")
        .chain(args.iter().copied())
        .collect();
    let code = cli::run(full, &mut out, &mut err);
    Outcome {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

/// Command lines whose output is pinned byte for byte.
pub fn golden_cases() -> Vec<(String, Vec<String>)> {
    let mut cases = Vec::new();
    for (tag, d) in [
        ("0.5", 0.5),
        ("1", 1.0),
        ("pi", std::f64::consts::PI),
        ("5", 5.0),
    ] {
        cases.push((
            format!("solve_flat_D{tag}.json"),
            [
                "solve",
                "--m",
                "1",
                "--kappa1",
                "0",
                "--kappa2",
                "0",
                "--diameter",
                &d.to_string(),
            ]
            .map(String::from)
            .to_vec(),
        ));
    }
    let d = std::f64::consts::PI * (1.0 - 1e-6);
    for n in 2..=5 {
        cases.push((
            format!("solve_kroger_n{n}.json"),
            [
                "solve",
                "--riemannian",
                "--n",
                &n.to_string(),
                "--K",
                "1",
                "--diameter",
                &d.to_string(),
            ]
            .map(String::from)
            .to_vec(),
        ));
    }
    cases.push((
        "bound_m2_k1_k1_half_pi.json".into(),
        [
            "bound",
            "--m",
            "2",
            "--kappa1",
            "1",
            "--kappa2",
            "1",
            "--diameter",
            &std::f64::consts::FRAC_PI_2.to_string(),
        ]
        .map(String::from)
        .to_vec(),
    ));
    cases
}

/// Compares `output` against the stored file, or rewrites it when
/// `UPDATE_GOLDEN` is set.
pub fn check_golden(name: &str, output: &str) -> Result<(), String> {
    let path = golden_dir().join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, output).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected =
        std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == output {
        Ok(())
    } else {
        Err(format!("{name} differs from its golden file"))
    }
}
