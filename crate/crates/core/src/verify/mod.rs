//! Numerical replay of the lower-bound argument on computed data.
//!
//! Starting from the first Neumann eigenfunction `φ` of the model problem,
//! `v = φ'` solves the differentiated Dirichlet problem
//!
//! ```text
//! v'' − w v' − (Σ mᵢ S_{Kᵢ}) v = −μ v,      v(±D/2) = 0.
//! ```
//!
//! Multiplying by `v^{a−1}`, integrating by parts, substituting `w = v^{a/2}`
//! and bounding `S_K ≥ K` leads to
//!
//! ```text
//! ∫(w')² / ∫w² ≤ (μ − (a−1)/a Σ mᵢKᵢ) · a²/(4(a−1)),
//! ```
//!
//! and Wirtinger's inequality on `w` closes the chain. [`replay_proof`]
//! evaluates every link by quadrature and records a [`ProofCertificate`].
//! The certificate is floating-point evidence, not a rigorous proof.

pub mod quadrature;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bounds::SBound;
use crate::coeffs::{s_k, t_k, Curvature, DriftSpec};
use crate::eigensolver::{solve_dirichlet_first, solve_neumann_first, Backend, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{differentiated_problem, li_wang_problem, KahlerParams, ModelProblem};

pub use quadrature::{Profile, QuadratureKind, QuadratureRule};

/// Relative tolerance applied to every certificate step.
pub const STEP_TOLERANCE: f64 = 1e-6;

/// Endpoint values below this fraction of the peak count as zero.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

/// Negative samples smaller than this fraction of the peak are clamped to zero
/// before fractional powers; larger ones are an error.
const CLAMP_TOLERANCE: f64 = 1e-8;

/// Two sides of an identity or inequality.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: f64,
    pub rhs: f64,
}

impl Comparison {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    Identity,
    /// `lhs ≤ rhs`, with `slack = rhs − lhs`.
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub name: String,
    pub kind: StepKind,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Step {
    fn identity(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Step {
        let slack = rhs - lhs;
        Step {
            name: name.into(),
            kind: StepKind::Identity,
            lhs,
            rhs,
            slack,
            tolerance,
            pass: slack.abs() <= tolerance,
        }
    }

    fn inequality(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Step {
        let slack = rhs - lhs;
        Step {
            name: name.into(),
            kind: StepKind::Inequality,
            lhs,
            rhs,
            slack,
            tolerance,
            pass: slack >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofCertificate {
    pub params: KahlerParams,
    #[serde(rename = "D")]
    pub diameter: f64,
    pub a: f64,
    /// `1 − 1/a`.
    pub s: f64,
    /// Eigenvalue of the differentiated problem the chain was run on.
    pub mu: f64,
    pub steps: Vec<Step>,
}

impl ProofCertificate {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.pass)
    }

    pub fn first_failure(&self) -> Option<&Step> {
        self.steps.iter().find(|s| !s.pass)
    }

    pub fn step(&self, name: &str) -> Option<&Step> {
        self.steps.iter().find(|s| s.name == name)
    }

    /// The closing bound and the `s` it was evaluated at.
    pub fn s_bound(&self) -> Option<SBound> {
        self.step("final_bound").map(|st| SBound {
            s: self.s,
            value: st.lhs,
        })
    }

    /// `Ok(self)` when every step passed, otherwise a [`Error::CertificateFailure`]
    /// naming the first failing step.
    pub fn into_result(self) -> Result<Self> {
        match self.first_failure() {
            None => Ok(self),
            Some(step) => Err(Error::CertificateFailure {
                step: step.name.clone(),
            }),
        }
    }
}

/// Settings for [`replay_proof`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReplayConfig {
    pub solver: SolverConfig,
    pub rule: QuadratureRule,
    pub tolerance: f64,
}

impl Default for ReplayConfig {
    fn default() -> Self {
        ReplayConfig {
            solver: SolverConfig::default(),
            rule: QuadratureRule::default(),
            tolerance: STEP_TOLERANCE,
        }
    }
}

fn check_exponent(a: f64) -> Result<()> {
    if a.is_finite() && a > 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("a must exceed 1, got {a}")))
    }
}

fn check_vanishing_ends(profile: &Profile) -> Result<f64> {
    let peak = profile.peak();
    let ends = [profile.value[0], profile.value[profile.len() - 1]];
    if peak == 0.0 || ends.iter().any(|e| e.abs() > BOUNDARY_TOLERANCE * peak) {
        return Err(Error::Precondition(format!(
            "samples must vanish at both ends (got {:e}, {:e}, peak {:e})",
            ends[0], ends[1], peak
        )));
    }
    Ok(peak)
}

/// Sample values with round-off negatives clamped to zero.
fn nonnegative(profile: &Profile, peak: f64) -> Result<Vec<f64>> {
    profile
        .value
        .iter()
        .map(|&v| {
            if v >= 0.0 {
                Ok(v)
            } else if -v <= CLAMP_TOLERANCE * peak {
                Ok(0.0)
            } else {
                Err(Error::Precondition(format!(
                    "samples must be nonnegative, found {v:e}"
                )))
            }
        })
        .collect()
}

fn curvature_of(spec: &DriftSpec, index: usize) -> Result<Curvature> {
    spec.terms()
        .get(index)
        .map(|t| t.curvature())
        .ok_or_else(|| {
            Error::InvalidParameter(format!(
                "term index {index} out of range ({} terms)",
                spec.terms().len()
            ))
        })
}

/// Both sides of `∫ T_K v^{a−1} v' = −(1/a) ∫ S_K v^a` for term `k_index`
/// of `spec`.
pub fn check_int_part(v: &Profile, spec: &DriftSpec, k_index: usize, a: f64) -> Result<Comparison> {
    check_exponent(a)?;
    let k = curvature_of(spec, k_index)?;
    let peak = check_vanishing_ends(v)?;
    let vals = nonnegative(v, peak)?;
    let t = v.x.iter().map(|&x| t_k(k, x)).collect::<Result<Vec<_>>>()?;
    let s = v.x.iter().map(|&x| s_k(k, x)).collect::<Result<Vec<_>>>()?;
    let lhs = v.integrate(|i| t[i] * vals[i].powf(a - 1.0) * v.slope[i]);
    let rhs = -v.integrate(|i| s[i] * vals[i].powf(a)) / a;
    Ok(Comparison { lhs, rhs })
}

/// Minimum of `S_K − K` over the rule's uniform grid on `[−D/2, D/2]`.
pub fn check_sk_lower(k: Curvature, rule: &QuadratureRule, d: f64) -> Result<f64> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "diameter must be positive and finite, got {d}"
        )));
    }
    let half = 0.5 * d;
    let n = rule.panels;
    let mut min = f64::INFINITY;
    for i in 0..=n {
        let x = if i == n {
            half
        } else {
            -half + i as f64 * d / n as f64
        };
        min = min.min(s_k(k, x)? - k.value());
    }
    Ok(min)
}

/// `lhs = ∫f²`, `rhs = L²/π² ∫(f')²` over the profile's interval.
pub fn check_wirtinger(f: &Profile) -> Result<Comparison> {
    check_vanishing_ends(f)?;
    let l = f.length();
    Ok(Comparison {
        lhs: f.integrate(|i| f.value[i] * f.value[i]),
        rhs: l * l / (PI * PI) * f.integrate(|i| f.slope[i] * f.slope[i]),
    })
}

/// Tolerance for integral steps: `tol · (1 + max integrand) · D`.
fn integral_tolerance(tol: f64, max_integrand: f64, d: f64) -> f64 {
    tol * (1.0 + max_integrand) * d
}

/// Tolerance for scalar steps.
fn scalar_tolerance(tol: f64, lhs: f64, rhs: f64) -> f64 {
    tol * (1.0 + lhs.abs().max(rhs.abs()))
}

/// Replays the chain on an arbitrary Neumann model problem.
pub fn replay_model(p: &ModelProblem, a: f64, cfg: &ReplayConfig) -> Result<(f64, Vec<Step>)> {
    check_exponent(a)?;
    let tol = cfg.tolerance;
    let d = p.diameter();
    let spec = p.spec().clone();
    let terms = spec.terms();

    let neumann = solve_neumann_first(p, &cfg.solver)?;
    let dp = differentiated_problem(p)?;
    // The Dirichlet eigenvalue can come out of a cancellation between a large
    // potential and the drift, where second-order differences need millions of
    // cells; the fourth-order shooting backend is also what builds v below.
    let dirichlet = solve_dirichlet_first(&dp, &cfg.solver.with_backend(Backend::Shooting))?;
    let mu = dirichlet.mu;

    let mut steps = Vec::new();
    steps.push(Step::identity(
        "differentiated_eigenvalue",
        neumann.mu,
        mu,
        scalar_tolerance(tol, neumann.mu, mu),
    ));

    let v = Profile::dirichlet_mode(&dp, mu, &cfg.rule)?;
    let peak = check_vanishing_ends(&v)?;
    let vals = nonnegative(&v, peak)?;
    let n = v.len();
    let live = |i: usize| v.weight[i] * v.jacobian[i] != 0.0;

    let mut t = vec![vec![0.0; n]; terms.len()];
    let mut s = vec![vec![0.0; n]; terms.len()];
    for (j, term) in terms.iter().enumerate() {
        for i in 0..n {
            if live(i) {
                t[j][i] = t_k(term.curvature(), v.x[i])?;
                s[j][i] = s_k(term.curvature(), v.x[i])?;
            }
        }
    }
    let pow = |e: f64| -> Vec<f64> {
        (0..n)
            .map(|i| if live(i) { vals[i].powf(e) } else { 0.0 })
            .collect()
    };
    let v_a = pow(a);
    let v_a1 = pow(a - 1.0);
    let v_a2 = pow(a - 2.0);
    let w = pow(0.5 * a);
    let w_slope: Vec<f64> = (0..n)
        .map(|i| {
            if live(i) {
                0.5 * a * vals[i].powf(0.5 * a - 1.0) * v.slope[i]
            } else {
                0.0
            }
        })
        .collect();

    let curv_term = |i: usize| v_a1[i] * v.slope_dxi[i] / v.jacobian[i];
    let int_curv = v.integrate_against_curvature(|i| v_a1[i]);
    let int_t: Vec<f64> = (0..terms.len())
        .map(|j| v.integrate(|i| t[j][i] * v_a1[i] * v.slope[i]))
        .collect();
    let int_s_va: Vec<f64> = (0..terms.len())
        .map(|j| v.integrate(|i| s[j][i] * v_a[i]))
        .collect();
    let int_va = v.integrate(|i| v_a[i]);
    let mult: Vec<f64> = terms.iter().map(|t| t.multiplicity()).collect();
    let kval: Vec<f64> = terms.iter().map(|t| t.curvature().value()).collect();
    let dot = |xs: &[f64]| xs.iter().zip(&mult).map(|(x, m)| x * m).sum::<f64>();

    // Multiplied ODE.
    {
        let lhs = int_curv - dot(&int_t);
        let rhs = dot(&int_s_va) - mu * int_va;
        let max = v.max_abs(|i| {
            let drift: f64 = (0..terms.len())
                .map(|j| mult[j] * t[j][i] * v_a1[i] * v.slope[i])
                .sum();
            let pot: f64 = (0..terms.len()).map(|j| mult[j] * s[j][i] * v_a[i]).sum();
            curv_term(i).abs() + drift.abs() + pot.abs() + (mu * v_a[i]).abs()
        });
        steps.push(Step::identity(
            "multiplied_ode",
            lhs,
            rhs,
            integral_tolerance(tol, max, d),
        ));
    }

    // Integration by parts on the second-order term.
    let int_grad = v.integrate(|i| v_a2[i] * v.slope[i] * v.slope[i]);
    {
        let rhs = -(a - 1.0) * int_grad;
        let max = v.max_abs(|i| curv_term(i).abs() + (a - 1.0) * v_a2[i] * v.slope[i] * v.slope[i]);
        steps.push(Step::identity(
            "integration_by_parts",
            int_curv,
            rhs,
            integral_tolerance(tol, max, d),
        ));
    }

    // The lemma for each drift term.
    for j in 0..terms.len() {
        let rhs = -int_s_va[j] / a;
        let max =
            v.max_abs(|i| (t[j][i] * v_a1[i] * v.slope[i]).abs() + (s[j][i] * v_a[i] / a).abs());
        steps.push(Step::identity(
            format!("int_part[{j}]"),
            int_t[j],
            rhs,
            integral_tolerance(tol, max, d),
        ));
    }

    // Combined identity in terms of w.
    let int_w2 = v.integrate(|i| w[i] * w[i]);
    let int_dw2 = v.integrate(|i| w_slope[i] * w_slope[i]);
    let int_s_w2: Vec<f64> = (0..terms.len())
        .map(|j| v.integrate(|i| s[j][i] * w[i] * w[i]))
        .collect();
    let gradient_factor = 4.0 * (a - 1.0) / (a * a);
    let potential_factor = (a - 1.0) / a;
    {
        let lhs = -gradient_factor * int_dw2;
        let rhs = potential_factor * dot(&int_s_w2) - mu * int_w2;
        let max = v.max_abs(|i| {
            let pot: f64 = (0..terms.len()).map(|j| mult[j] * s[j][i]).sum::<f64>() * w[i] * w[i];
            gradient_factor * w_slope[i] * w_slope[i]
                + potential_factor * pot.abs()
                + (mu * w[i] * w[i]).abs()
        });
        steps.push(Step::identity(
            "combined_identity",
            lhs,
            rhs,
            integral_tolerance(tol, max, d),
        ));
    }

    // S_K ≥ K against w².
    for j in 0..terms.len() {
        let lhs = kval[j] * int_w2;
        let max = v.max_abs(|i| (s[j][i] * w[i] * w[i]).abs() + (kval[j] * w[i] * w[i]).abs());
        steps.push(Step::inequality(
            format!("s_k_lower[{j}]"),
            lhs,
            int_s_w2[j],
            integral_tolerance(tol, max, d),
        ));
    }

    // Rayleigh quotient of w.
    let curvature_sum = dot(&kval);
    let quotient = int_dw2 / int_w2;
    {
        let rhs = (mu - potential_factor * curvature_sum) / gradient_factor;
        steps.push(Step::inequality(
            "rayleigh_quotient",
            quotient,
            rhs,
            scalar_tolerance(tol, quotient, rhs),
        ));
    }

    // Wirtinger on w, translated to [0, D].
    {
        let shifted = Profile {
            value: w.clone(),
            slope: w_slope.clone(),
            ..v.clone()
        }
        .translated(0.5 * d);
        let c = check_wirtinger(&shifted)?;
        let max = shifted.max_abs(|i| w[i] * w[i] + d * d / (PI * PI) * w_slope[i] * w_slope[i]);
        steps.push(Step::inequality(
            "wirtinger",
            c.lhs,
            c.rhs,
            integral_tolerance(tol, max, d),
        ));
    }

    // Conclusion, from its own closed form.
    {
        let sv = 1.0 - 1.0 / a;
        let bound = 4.0 * sv * (1.0 - sv) * PI * PI / (d * d) + sv * curvature_sum;
        steps.push(Step::inequality(
            "final_bound",
            bound,
            neumann.mu,
            scalar_tolerance(tol, bound, neumann.mu),
        ));
    }

    Ok((mu, steps))
}

/// Replays the argument for the Kähler model problem with exponent `a > 1`.
pub fn replay_proof(
    p: &KahlerParams,
    d: f64,
    a: f64,
    cfg: &ReplayConfig,
) -> Result<ProofCertificate> {
    check_exponent(a)?;
    let problem = li_wang_problem(p, d)?;
    let (mu, steps) = replay_model(&problem, a, cfg)?;
    Ok(ProofCertificate {
        params: *p,
        diameter: d,
        a,
        s: 1.0 - 1.0 / a,
        mu,
        steps,
    })
}
