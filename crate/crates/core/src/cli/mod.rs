//! The `spectral-gap` command line.
//!
//! Every subcommand prints one JSON document on standard output (the sweep
//! writes CSV instead) and reports problems on standard error. Exit codes:
//! 0 success, 2 usage or validation, 3 solver failure, 4 certificate failure.

pub mod args;
pub mod sweep;

use std::ffi::OsString;
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::{bound_report, BoundInputs, BoundReport};
use crate::error::Error;
use crate::model::{kroger_problem, li_wang_problem, KahlerParams, RiemannParams};
use crate::verify::{replay_proof, QuadratureRule, ReplayConfig};

pub use args::Cli;
use args::{BoundArgs, Command, SolveArgs, SweepArgs, VerifyArgs};
pub use sweep::{run_sweep, sweep_csv, SweepConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;
pub const EXIT_CERTIFICATE: i32 = 4;

/// Exit code for a library error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::NoConvergence { .. } | Error::BracketFailure { .. } => EXIT_SOLVER,
        Error::CertificateFailure { .. } => EXIT_CERTIFICATE,
        _ => EXIT_USAGE,
    }
}

/// A failure carrying its exit code. Certificates that fail still print.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn meta() -> Value {
    let secs = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "unix_time": secs,
    })
}

fn render(mut doc: Value, with_meta: bool) -> String {
    if with_meta {
        if let Value::Object(map) = &mut doc {
            map.insert("meta".into(), meta());
        }
    }
    let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
    s.push('\n');
    s
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types always serialize")
}

/// The bound report in its published layout.
pub fn bound_document(
    params: &KahlerParams,
    d: f64,
    ricci_k: Option<f64>,
    r: &BoundReport,
) -> Value {
    let mut p = json!({
        "m": params.m,
        "kappa1": params.kappa1,
        "kappa2": params.kappa2,
        "D": d,
    });
    if let Some(k) = ricci_k {
        p["ricci_k"] = json!(k);
    }
    let mut bounds = json!({ "zhong_yang": r.zhong_yang });
    if let Some(v) = r.lichnerowicz {
        bounds["lichnerowicz"] = json!(v);
    }
    if let Some(v) = r.kahler_lichnerowicz {
        bounds["kahler_lichnerowicz"] = json!(v);
    }
    if let Some(v) = r.shi_zhang_sup {
        bounds["shi_zhang_sup"] = json!(v);
    }
    bounds["main"] = to_value(&r.main);
    let mut doc = json!({ "params": p, "bounds": bounds });
    if let Some(m) = &r.model {
        doc["model"] = json!({
            "mu": m.mu,
            "est_error": m.est_error,
            "backend_delta": m.backend_delta,
        });
    }
    doc["warnings"] = to_value(&r.warnings);
    doc
}

fn cmd_bound(a: &BoundArgs) -> Result<Value, Failure> {
    let params = KahlerParams::new(a.kahler.m, a.kahler.kappa1, a.kahler.kappa2)?;
    let cfg = a.solver.config(crate::eigensolver::Backend::Both);
    let inputs = BoundInputs {
        params,
        diameter: a.diameter,
        ricci_k: a.ricci_k,
    };
    let report = bound_report(&inputs, a.with_model, &cfg)?;
    Ok(bound_document(&params, a.diameter, a.ricci_k, &report))
}

fn cmd_solve(a: &SolveArgs) -> Result<Value, Failure> {
    let cfg = a.solver.config(a.backend.into());
    let (params, problem) = if a.riemannian {
        let (n, k) = (a.n.unwrap_or(0), a.k.unwrap_or(f64::NAN));
        let rp = RiemannParams::new(n, k)?;
        (
            json!({ "n": rp.n, "K": rp.k, "D": a.diameter }),
            kroger_problem(&rp, a.diameter)?,
        )
    } else {
        let kp = KahlerParams::new(
            a.m.unwrap_or(0),
            a.kappa1.unwrap_or(f64::NAN),
            a.kappa2.unwrap_or(f64::NAN),
        )?;
        (
            json!({ "m": kp.m, "kappa1": kp.kappa1, "kappa2": kp.kappa2, "D": a.diameter }),
            li_wang_problem(&kp, a.diameter)?,
        )
    };
    let sol = crate::eigensolver::solve_neumann_first(&problem, &cfg)?;
    Ok(json!({
        "params": params,
        "mu": sol.mu,
        "est_error": sol.est_error,
        "backend": sol.backend_used,
        "backend_delta": sol.backend_delta(),
        "mesh_points": sol.mesh_points,
        "residual": sol.residual,
    }))
}

fn cmd_verify(a: &VerifyArgs) -> Result<(Value, Option<String>), Failure> {
    let params = KahlerParams::new(a.kahler.m, a.kahler.kappa1, a.kahler.kappa2)?;
    if let Some(bad) = a.a.iter().find(|&&x| !(x > 1.0 && x.is_finite())) {
        return Err(Failure {
            code: EXIT_USAGE,
            message: format!("a must exceed 1, got {bad}"),
        });
    }
    let mut cfg = ReplayConfig {
        solver: a.solver.config(crate::eigensolver::Backend::Both),
        ..ReplayConfig::default()
    };
    if let Some(panels) = a.panels {
        cfg.rule = QuadratureRule::simpson(panels)?;
    }
    let mut certificates = Vec::new();
    let mut failure = None;
    for &exp in &a.a {
        let cert = replay_proof(&params, a.diameter, exp, &cfg)?;
        if failure.is_none() {
            if let Some(step) = cert.first_failure() {
                failure = Some(format!(
                    "certificate failure at step {} (a = {exp}): slack {:e}, tolerance {:e}",
                    step.name, step.slack, step.tolerance
                ));
            }
        }
        certificates.push(cert);
    }
    let doc = json!({
        "params": { "m": params.m, "kappa1": params.kappa1, "kappa2": params.kappa2, "D": a.diameter },
        "pass": failure.is_none(),
        "certificates": to_value(&certificates),
    });
    Ok((doc, failure))
}

fn cmd_sweep(a: &SweepArgs, with_meta: bool, stdout: &mut dyn Write) -> Result<(), Failure> {
    let usage = |m: String| Failure {
        code: EXIT_USAGE,
        message: m,
    };
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| usage(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg: SweepConfig = serde_json::from_str(&text)
        .map_err(|e| usage(format!("invalid sweep config {}: {e}", a.config.display())))?;
    let csv = sweep_csv(&cfg)?;
    match &a.output {
        Some(path) => {
            std::fs::write(path, &csv)
                .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
            if with_meta {
                let mut side = path.clone().into_os_string();
                side.push(".meta.json");
                std::fs::write(&side, render(json!({ "config": to_value(&cfg) }), true))
                    .map_err(|e| usage(format!("cannot write metadata: {e}")))?;
            }
        }
        None => {
            stdout
                .write_all(csv.as_bytes())
                .map_err(|e| usage(format!("cannot write output: {e}")))?;
        }
    }
    Ok(())
}

/// Runs the command line with `args` (including the program name) and
/// returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let emit = |out: &mut dyn Write, doc: Value| {
        let _ = out.write_all(render(doc, cli.meta).as_bytes());
    };
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(a).map(|doc| emit(stdout, doc)),
        Command::Solve(a) => cmd_solve(a).map(|doc| emit(stdout, doc)),
        Command::Verify(a) => cmd_verify(a).and_then(|(doc, failure)| {
            emit(stdout, doc);
            match failure {
                None => Ok(()),
                Some(message) => Err(Failure {
                    code: EXIT_CERTIFICATE,
                    message,
                }),
            }
        }),
        Command::Sweep(a) => cmd_sweep(a, cli.meta, stdout),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
