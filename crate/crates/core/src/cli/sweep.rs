//! Parameter sweeps: a JSON grid description in, one CSV row per grid point out.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{main_bound_sup, zhong_yang_bound};
use crate::eigensolver::{solve_neumann_first, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{li_wang_problem, max_admissible_diameter, KahlerParams};
use crate::verify::{replay_proof, ReplayConfig};

/// Environment variable capping the number of worker threads.
pub const THREADS_ENV: &str = "SPECTRAL_GAP_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Param {
    #[serde(rename = "m")]
    M,
    #[serde(rename = "kappa1")]
    Kappa1,
    #[serde(rename = "kappa2")]
    Kappa2,
    #[serde(rename = "D")]
    Diameter,
}

impl Param {
    pub const ALL: [Param; 4] = [Param::M, Param::Kappa1, Param::Kappa2, Param::Diameter];

    pub fn name(self) -> &'static str {
        match self {
            Param::M => "m",
            Param::Kappa1 => "kappa1",
            Param::Kappa2 => "kappa2",
            Param::Diameter => "D",
        }
    }
}

/// One grid axis: either explicit `values` or a linear `start/stop/count` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub param: Param,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stop: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
}

impl Axis {
    pub fn points(&self) -> Result<Vec<f64>> {
        let name = self.param.name();
        match (&self.values, self.start, self.stop, self.count) {
            (Some(v), None, None, None) => {
                if v.is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "axis {name}: empty value list"
                    )));
                }
                Ok(v.clone())
            }
            (None, Some(start), Some(stop), Some(count)) => {
                if count < 1 {
                    return Err(Error::InvalidParameter(format!(
                        "axis {name}: count must be ≥ 1"
                    )));
                }
                if start.is_nan() || stop.is_nan() || start > stop {
                    return Err(Error::InvalidParameter(format!(
                        "axis {name}: start must not exceed stop"
                    )));
                }
                if count == 1 {
                    return Ok(vec![start]);
                }
                let step = (stop - start) / (count - 1) as f64;
                Ok((0..count)
                    .map(|i| {
                        if i == count - 1 {
                            stop
                        } else {
                            start + i as f64 * step
                        }
                    })
                    .collect())
            }
            _ => Err(Error::InvalidParameter(format!(
                "axis {name}: give either `values` or all of `start`, `stop`, `count`"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Output {
    Bounds,
    ModelMu,
    CertificatePass,
}

fn default_a() -> f64 {
    2.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axes: Vec<Axis>,
    #[serde(default)]
    pub fixed: BTreeMap<Param, f64>,
    pub outputs: Vec<Output>,
    #[serde(default)]
    pub solver: SolverConfig,
    /// Exponent used for `certificate_pass`.
    #[serde(default = "default_a")]
    pub a: f64,
}

/// A fully assigned grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridPoint {
    pub m: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub diameter: f64,
}

impl GridPoint {
    fn set(&mut self, p: Param, v: f64) {
        match p {
            Param::M => self.m = v,
            Param::Kappa1 => self.kappa1 = v,
            Param::Kappa2 => self.kappa2 = v,
            Param::Diameter => self.diameter = v,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeMap::new();
        for axis in &self.axes {
            *seen.entry(axis.param).or_insert(0) += 1;
            let points = axis.points()?;
            if axis.param == Param::M {
                points.iter().try_for_each(|&v| check_m(v))?;
            }
        }
        for (&p, &v) in &self.fixed {
            *seen.entry(p).or_insert(0) += 1;
            if p == Param::M {
                check_m(v)?;
            }
        }
        for p in Param::ALL {
            match seen.get(&p).copied().unwrap_or(0) {
                1 => {}
                0 => {
                    return Err(Error::InvalidParameter(format!(
                        "parameter {} is neither an axis nor fixed",
                        p.name()
                    )))
                }
                _ => {
                    return Err(Error::InvalidParameter(format!(
                        "parameter {} is assigned more than once",
                        p.name()
                    )))
                }
            }
        }
        if self.outputs.is_empty() {
            return Err(Error::InvalidParameter("outputs must not be empty".into()));
        }
        if self.outputs.contains(&Output::CertificatePass) && (self.a.is_nan() || self.a <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "a must exceed 1, got {}",
                self.a
            )));
        }
        self.solver.validate()
    }

    /// Grid points in lexicographic order over the axes as declared (the first
    /// axis varies slowest).
    pub fn grid(&self) -> Result<Vec<GridPoint>> {
        self.validate()?;
        let mut base = GridPoint {
            m: 0.0,
            kappa1: 0.0,
            kappa2: 0.0,
            diameter: 0.0,
        };
        for (&p, &v) in &self.fixed {
            base.set(p, v);
        }
        let mut points = vec![base];
        for axis in &self.axes {
            let values = axis.points()?;
            points = points
                .into_iter()
                .flat_map(|pt| {
                    values.iter().map(move |&v| {
                        let mut q = pt;
                        q.set(axis.param, v);
                        q
                    })
                })
                .collect();
        }
        Ok(points)
    }

    fn wants(&self, o: Output) -> bool {
        self.outputs.contains(&o)
    }

    pub fn header(&self) -> Vec<&'static str> {
        let mut cols = vec!["m", "kappa1", "kappa2", "D"];
        if self.wants(Output::Bounds) {
            cols.extend(["zhong_yang", "main_sup", "main_s_star", "main_attained"]);
        }
        if self.wants(Output::ModelMu) {
            cols.extend(["model_mu", "model_est_error", "backend_delta"]);
        }
        if self.wants(Output::CertificatePass) {
            cols.push("certificate_pass");
        }
        cols.extend(["admissible", "error"]);
        cols
    }
}

fn check_m(v: f64) -> Result<()> {
    if v.fract() != 0.0 || v < 1.0 || v > u32::MAX as f64 {
        return Err(Error::InvalidParameter(format!(
            "m must be an integer ≥ 1, got {v}"
        )));
    }
    Ok(())
}

/// Seventeen significant digits: enough to round-trip any double.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// Keeps the first error of a row.
fn note(e: Error, error: &mut Option<Error>) {
    if error.is_none() {
        *error = Some(e);
    }
}

/// Evaluates one grid point. Failures land in the `error` column.
fn evaluate(cfg: &SweepConfig, pt: &GridPoint) -> Vec<String> {
    let mut row = vec![
        format!("{}", pt.m as u32),
        format_number(pt.kappa1),
        format_number(pt.kappa2),
        format_number(pt.diameter),
    ];
    let mut error: Option<Error> = None;
    let params = KahlerParams::new(pt.m as u32, pt.kappa1, pt.kappa2);
    let admissible = match &params {
        Ok(p) => pt.diameter > 0.0 && pt.diameter < max_admissible_diameter(&p.drift_spec()),
        Err(_) => false,
    };
    let problem = params
        .clone()
        .and_then(|p| li_wang_problem(&p, pt.diameter));
    if let Err(e) = &problem {
        note(e.clone(), &mut error);
    }

    if cfg.wants(Output::Bounds) {
        let bounds = params.clone().and_then(|p| {
            Ok((
                zhong_yang_bound(pt.diameter)?,
                main_bound_sup(&p, pt.diameter)?,
            ))
        });
        match bounds {
            Ok((zy, sup)) => row.extend([
                format_number(zy),
                format_number(sup.sup),
                format_number(sup.s_star),
                sup.attained.to_string(),
            ]),
            Err(e) => {
                note(e, &mut error);
                row.extend(std::iter::repeat_n(String::new(), 4));
            }
        }
    }
    if cfg.wants(Output::ModelMu) {
        match problem
            .as_ref()
            .map(|p| solve_neumann_first(p, &cfg.solver))
        {
            Ok(Ok(sol)) => row.extend([
                format_number(sol.mu),
                format_number(sol.est_error),
                cell(sol.backend_delta()),
            ]),
            Ok(Err(e)) => {
                note(e, &mut error);
                row.extend(std::iter::repeat_n(String::new(), 3));
            }
            Err(_) => row.extend(std::iter::repeat_n(String::new(), 3)),
        }
    }
    if cfg.wants(Output::CertificatePass) {
        let replay = ReplayConfig {
            solver: cfg.solver,
            ..ReplayConfig::default()
        };
        match params
            .as_ref()
            .map(|p| replay_proof(p, pt.diameter, cfg.a, &replay))
        {
            Ok(Ok(cert)) => row.push(cert.passed().to_string()),
            Ok(Err(e)) => {
                note(e, &mut error);
                row.push(String::new());
            }
            Err(_) => row.push(String::new()),
        }
    }
    row.push(admissible.to_string());
    row.push(error.map(|e| e.kind().to_string()).unwrap_or_default());
    row
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

/// Evaluates every grid point (in parallel) and returns rows in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<Vec<String>>> {
    let grid = cfg.grid()?;
    let work = || {
        grid.par_iter()
            .map(|pt| evaluate(cfg, pt))
            .collect::<Vec<_>>()
    };
    match thread_cap() {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::InvalidParameter(format!("thread pool: {e}")))?;
            Ok(pool.install(work))
        }
        None => Ok(work()),
    }
}

/// Renders the sweep as CSV with a header row.
pub fn sweep_csv(cfg: &SweepConfig) -> Result<String> {
    let rows = run_sweep(cfg)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidParameter(format!("csv: {e}"));
    w.write_record(cfg.header()).map_err(io)?;
    for row in &rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidParameter(format!("csv: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> SweepConfig {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn range_axis_hits_endpoints() {
        let a = Axis {
            param: Param::Diameter,
            values: None,
            start: Some(0.5),
            stop: Some(3.0),
            count: Some(6),
        };
        assert_eq!(a.points().unwrap(), vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);
    }

    #[test]
    fn grid_order_is_lexicographic() {
        let cfg = parse(
            r#"{"axes": [{"param": "m", "values": [1, 2]}, {"param": "D", "values": [0.5, 1.0, 2.0]}],
                "fixed": {"kappa1": 0, "kappa2": 0}, "outputs": ["bounds"]}"#,
        );
        let g = cfg.grid().unwrap();
        let pairs: Vec<(f64, f64)> = g.iter().map(|p| (p.m, p.diameter)).collect();
        assert_eq!(
            pairs,
            vec![
                (1.0, 0.5),
                (1.0, 1.0),
                (1.0, 2.0),
                (2.0, 0.5),
                (2.0, 1.0),
                (2.0, 2.0)
            ]
        );
    }

    #[test]
    fn validation_errors() {
        let missing = parse(
            r#"{"axes": [], "fixed": {"m": 1, "kappa1": 0, "kappa2": 0}, "outputs": ["bounds"]}"#,
        );
        assert!(missing.validate().unwrap_err().to_string().contains("D"));
        let twice = parse(
            r#"{"axes": [{"param": "D", "values": [1]}], "fixed": {"m": 1, "kappa1": 0, "kappa2": 0, "D": 2}, "outputs": ["bounds"]}"#,
        );
        assert!(twice
            .validate()
            .unwrap_err()
            .to_string()
            .contains("more than once"));
        let backwards = parse(
            r#"{"axes": [{"param": "D", "start": 2, "stop": 1, "count": 3}], "fixed": {"m": 1, "kappa1": 0, "kappa2": 0}, "outputs": ["bounds"]}"#,
        );
        assert!(backwards.validate().is_err());
        let fractional = parse(
            r#"{"axes": [{"param": "m", "values": [1.5]}], "fixed": {"D": 1, "kappa1": 0, "kappa2": 0}, "outputs": ["bounds"]}"#,
        );
        assert!(fractional.validate().is_err());
        assert!(
            serde_json::from_str::<SweepConfig>(r#"{"axes": [], "outputs": [], "extra": 1}"#)
                .is_err()
        );
    }

    #[test]
    fn seventeen_digits() {
        assert_eq!(format_number(0.1), "1.0000000000000001e-1");
        let back: f64 = format_number(std::f64::consts::PI).parse().unwrap();
        assert_eq!(back, std::f64::consts::PI);
    }
}
