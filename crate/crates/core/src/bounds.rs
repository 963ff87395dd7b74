//! Closed-form lower bounds for the first nonzero eigenvalue.
//!
//! The Kähler bound is, for every `s ∈ (0, 1)`,
//!
//! ```text
//! λ₁ ≥ 4s(1−s) π²/D² + 2s (κ₂(m−1) + 2κ₁)
//! ```
//!
//! With `c = κ₂(m−1) + 2κ₁` and `q = 4π²/D²` the right-hand side is the
//! downward parabola `−q s² + (q + 2c) s`, maximized at
//! `s* = 1/2 + c D²/(4π²)` with value `(q + 2c)²/(4q)`. When `s*` leaves
//! `(0, 1)` the supremum over the open interval is the limit at the nearer
//! endpoint and is not attained.
//!
//! The Riemannian analogue (Shi–Zhang) replaces `2c` by `(n−1)K`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigensolver::{solve_neumann_first, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{li_wang_problem, max_admissible_diameter, KahlerParams};

/// Diameters within this relative distance of the model admissibility limit
/// draw an edge warning.
pub const EDGE_WARNING: f64 = 1e-3;

/// The bound value at one parameter `s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SBound {
    pub s: f64,
    pub value: f64,
}

/// Supremum of a one-parameter bound over `s ∈ (0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Supremum {
    pub s_star: f64,
    pub sup: f64,
    /// `false` when the supremum is an endpoint limit.
    pub attained: bool,
}

fn check_diameter(d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "diameter must be positive and finite, got {d}"
        )))
    }
}

fn check_s(s: f64) -> Result<()> {
    if s > 0.0 && s < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("s must lie in (0, 1), got {s}")))
    }
}

/// `4s(1−s)π²/D² + linear·s`.
fn parabola(d: f64, linear: f64, s: f64) -> f64 {
    4.0 * s * (1.0 - s) * PI * PI / (d * d) + linear * s
}

/// Supremum of `4s(1−s)π²/D² + linear·s` over the open unit interval.
fn parabola_sup(d: f64, linear: f64) -> Supremum {
    let q = 4.0 * PI * PI / (d * d);
    let vertex = 0.5 + linear / (2.0 * q);
    if vertex <= 0.0 {
        Supremum {
            s_star: 0.0,
            sup: 0.0,
            attained: false,
        }
    } else if vertex >= 1.0 {
        Supremum {
            s_star: 1.0,
            sup: linear,
            attained: false,
        }
    } else {
        Supremum {
            s_star: vertex,
            sup: (q + linear) * (q + linear) / (4.0 * q),
            attained: true,
        }
    }
}

/// The Kähler bound at a fixed `s ∈ (0, 1)`.
pub fn main_bound_at(p: &KahlerParams, d: f64, s: f64) -> Result<f64> {
    check_diameter(d)?;
    check_s(s)?;
    Ok(parabola(d, 2.0 * p.curvature_combination(), s))
}

/// Supremum of the Kähler bound over `s ∈ (0, 1)`.
pub fn main_bound_sup(p: &KahlerParams, d: f64) -> Result<Supremum> {
    check_diameter(d)?;
    Ok(parabola_sup(d, 2.0 * p.curvature_combination()))
}

fn check_riemann(n: u32, k: f64) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter("n must be ≥ 2".into()));
    }
    if !k.is_finite() {
        return Err(Error::InvalidParameter("K must be finite".into()));
    }
    Ok(())
}

/// Shi–Zhang: `4(s−s²)π²/D² + s(n−1)K`.
pub fn shi_zhang_bound(n: u32, k: f64, d: f64, s: f64) -> Result<f64> {
    check_riemann(n, k)?;
    check_diameter(d)?;
    check_s(s)?;
    Ok(parabola(d, f64::from(n - 1) * k, s))
}

pub fn shi_zhang_sup(n: u32, k: f64, d: f64) -> Result<Supremum> {
    check_riemann(n, k)?;
    check_diameter(d)?;
    Ok(parabola_sup(d, f64::from(n - 1) * k))
}

fn require_positive_ricci(k: f64) -> Result<()> {
    if k > 0.0 {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!(
            "Lichnerowicz estimates need Ric ≥ (n−1)K with K > 0, got K = {k}"
        )))
    }
}

/// `λ₁ ≥ nK` for `Ric ≥ (n−1)K > 0`.
pub fn lichnerowicz_bound(n: u32, k: f64) -> Result<f64> {
    check_riemann(n, k)?;
    require_positive_ricci(k)?;
    Ok(f64::from(n) * k)
}

/// `λ₁ ≥ 2(n−1)K` on a Kähler manifold of real dimension `n` with
/// `Ric ≥ (n−1)K > 0`.
pub fn kahler_lichnerowicz_bound(n: u32, k: f64) -> Result<f64> {
    check_riemann(n, k)?;
    require_positive_ricci(k)?;
    Ok(2.0 * f64::from(n - 1) * k)
}

/// `λ₁ ≥ π²/D²` for `Ric ≥ 0`.
pub fn zhong_yang_bound(d: f64) -> Result<f64> {
    check_diameter(d)?;
    Ok(PI * PI / (d * d))
}

/// What to feed [`bound_report`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundInputs {
    pub params: KahlerParams,
    pub diameter: f64,
    /// A separately known Ricci lower bound `Ric ≥ (2m−1)K`, enabling the
    /// Riemannian estimates. The Kähler hypotheses alone do not supply one.
    pub ricci_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelEigenvalue {
    pub mu: f64,
    pub est_error: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend_delta: Option<f64>,
}

/// Every bound whose hypotheses the inputs satisfy, plus optionally the
/// numeric model eigenvalue they all underestimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub zhong_yang: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lichnerowicz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kahler_lichnerowicz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shi_zhang_sup: Option<f64>,
    pub main: Supremum,
    pub model: Option<ModelEigenvalue>,
    pub warnings: Vec<String>,
}

impl BoundReport {
    pub fn main_sup(&self) -> f64 {
        self.main.sup
    }

    pub fn main_s_star(&self) -> f64 {
        self.main.s_star
    }

    pub fn model_mu(&self) -> Option<f64> {
        self.model.as_ref().map(|m| m.mu)
    }
}

/// Warnings about the model problem that go along with the closed-form bound.
pub fn diameter_warnings(p: &KahlerParams, d: f64) -> Vec<String> {
    let limit = max_admissible_diameter(&p.drift_spec());
    if !limit.is_finite() {
        return Vec::new();
    }
    if d > limit {
        vec![format!(
            "diameter {d} exceeds the model admissibility threshold {limit}; the comparison problem is singular"
        )]
    } else if d > (1.0 - EDGE_WARNING) * limit {
        vec![format!(
            "diameter {d} is at the model admissibility edge (threshold {limit})"
        )]
    } else {
        Vec::new()
    }
}

pub fn bound_report(
    inputs: &BoundInputs,
    with_model: bool,
    cfg: &SolverConfig,
) -> Result<BoundReport> {
    let BoundInputs {
        params,
        diameter: d,
        ricci_k,
    } = *inputs;
    let main = main_bound_sup(&params, d)?;
    let mut warnings = diameter_warnings(&params, d);
    if !main.attained {
        warnings.push(format!(
            "supremum over s is the limit s → {} and is not attained",
            main.s_star
        ));
    }

    let n = params.real_dimension();
    let (lichnerowicz, kahler_lichnerowicz, shi_zhang) = match ricci_k {
        Some(k) => {
            let positive = k > 0.0;
            (
                positive.then(|| lichnerowicz_bound(n, k)).transpose()?,
                positive
                    .then(|| kahler_lichnerowicz_bound(n, k))
                    .transpose()?,
                Some(shi_zhang_sup(n, k, d)?.sup),
            )
        }
        None => (None, None, None),
    };

    let model = if with_model {
        let problem = li_wang_problem(&params, d)?;
        let solution = solve_neumann_first(&problem, cfg)?;
        Some(ModelEigenvalue {
            mu: solution.mu,
            est_error: solution.est_error,
            backend_delta: solution.backend_delta(),
        })
    } else {
        None
    };

    Ok(BoundReport {
        zhong_yang: zhong_yang_bound(d)?,
        lichnerowicz,
        kahler_lichnerowicz,
        shi_zhang_sup: shi_zhang,
        main,
        model,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn kp(m: u32, k1: f64, k2: f64) -> KahlerParams {
        KahlerParams::new(m, k1, k2).unwrap()
    }

    /// Grid search over s with step 1e−5, the independent oracle for the
    /// analytic supremum.
    fn grid_sup(f: impl Fn(f64) -> f64) -> (f64, f64) {
        let steps = 100_000;
        (1..steps)
            .map(|i| {
                let s = i as f64 / steps as f64;
                (s, f(s))
            })
            .fold((0.0, f64::NEG_INFINITY), |best, cur| {
                if cur.1 > best.1 {
                    cur
                } else {
                    best
                }
            })
    }

    #[test]
    fn main_bound_at_examples() {
        let d = 1.7;
        let flat = kp(3, 0.0, 0.0);
        assert_relative_eq!(
            main_bound_at(&flat, d, 0.5).unwrap(),
            PI * PI / (d * d),
            max_relative = 1e-15
        );
        assert_relative_eq!(
            main_bound_at(&kp(2, 1.0, 1.0), d, 0.5).unwrap(),
            PI * PI / (d * d) + 3.0,
            max_relative = 1e-15
        );
        assert!(main_bound_at(&kp(2, 1.0, 1.0), d, 1e-12).unwrap().abs() < 1e-10);
        assert!(main_bound_at(&flat, d, 0.0).is_err());
        assert!(main_bound_at(&flat, d, 1.0).is_err());
    }

    #[test]
    fn main_bound_sup_examples() {
        let flat = main_bound_sup(&kp(2, 0.0, 0.0), 2.0).unwrap();
        assert_eq!(flat.s_star, 0.5);
        assert_relative_eq!(flat.sup, PI * PI / 4.0, max_relative = 1e-15);
        assert!(flat.attained);

        let worked = main_bound_sup(&kp(2, 1.0, 1.0), PI / 2.0).unwrap();
        assert_relative_eq!(worked.s_star, 0.6875, max_relative = 1e-15);
        assert_relative_eq!(worked.sup, 7.5625, max_relative = 1e-15);
        let p = kp(2, 1.0, 1.0);
        let (s_grid, v_grid) = grid_sup(|s| main_bound_at(&p, PI / 2.0, s).unwrap());
        assert!((s_grid - 0.6875).abs() < 1e-5);
        assert!((v_grid - 7.5625).abs() < 1e-9);

        let degenerate = main_bound_sup(&kp(1, -10.0, 0.0), 1.0).unwrap();
        assert_eq!((degenerate.s_star, degenerate.sup), (0.0, 0.0));
        assert!(!degenerate.attained);
        let p = kp(1, -10.0, 0.0);
        let (s_grid, v_grid) = grid_sup(|s| main_bound_at(&p, 1.0, s).unwrap());
        // every s gives a negative value; the supremum 0 is the limit s → 0⁺
        assert_eq!(s_grid, 1e-5);
        assert!(v_grid < 0.0 && v_grid > -1e-3);

        let upper = main_bound_sup(&kp(2, 5.0, 5.0), 3.0).unwrap();
        assert_eq!(upper.s_star, 1.0);
        assert_eq!(upper.sup, 2.0 * 15.0);
        assert!(!upper.attained);
        assert!(main_bound_sup(&kp(2, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn shi_zhang_examples() {
        let (n, k, d) = (4, 0.7, 1.3);
        assert_relative_eq!(
            shi_zhang_bound(n, k, d, 0.5).unwrap(),
            PI * PI / (d * d) + 3.0 * k / 2.0,
            max_relative = 1e-15
        );
        let flat = shi_zhang_sup(5, 0.0, 2.0).unwrap();
        assert_eq!(flat.s_star, 0.5);
        assert_relative_eq!(flat.sup, PI * PI / 4.0, max_relative = 1e-15);

        let analytic = shi_zhang_sup(3, 1.0, PI).unwrap();
        let (_, grid) = grid_sup(|s| shi_zhang_bound(3, 1.0, PI, s).unwrap());
        assert!((analytic.sup - grid).abs() < 1e-9);
        assert!(shi_zhang_bound(1, 1.0, 1.0, 0.5).is_err());
    }

    #[test]
    fn classical_examples() {
        assert_eq!(lichnerowicz_bound(3, 2.0).unwrap(), 6.0);
        assert_eq!(kahler_lichnerowicz_bound(4, 1.0).unwrap(), 6.0);
        assert_relative_eq!(zhong_yang_bound(PI).unwrap(), 1.0, max_relative = 1e-15);
        assert!(matches!(
            lichnerowicz_bound(3, 0.0),
            Err(Error::Hypothesis(_))
        ));
        assert!(matches!(
            kahler_lichnerowicz_bound(4, -1.0),
            Err(Error::Hypothesis(_))
        ));
        for m in 2..8u32 {
            let n = 2 * m;
            for &k in &[0.1, 1.0, 3.5] {
                assert!(
                    kahler_lichnerowicz_bound(n, k).unwrap() >= lichnerowicz_bound(n, k).unwrap()
                );
            }
        }
    }

    #[test]
    fn report_examples() {
        let cfg = SolverConfig::default();
        let flat = bound_report(
            &BoundInputs {
                params: kp(2, 0.0, 0.0),
                diameter: 1.0,
                ricci_k: None,
            },
            true,
            &cfg,
        )
        .unwrap();
        assert_eq!(flat.zhong_yang, flat.main_sup());
        assert_relative_eq!(flat.model_mu().unwrap(), PI * PI, max_relative = 1e-6);
        assert!(flat.warnings.is_empty());

        let curved = bound_report(
            &BoundInputs {
                params: kp(2, 1.0, 1.0),
                diameter: 1.2,
                ricci_k: Some(1.0),
            },
            true,
            &cfg,
        )
        .unwrap();
        assert!(curved.model_mu().unwrap() >= curved.main_sup());
        assert_eq!(curved.lichnerowicz, Some(4.0));
        assert_eq!(curved.kahler_lichnerowicz, Some(6.0));
        assert!(curved.shi_zhang_sup.is_some());

        let negative = bound_report(
            &BoundInputs {
                params: kp(3, -1.0, -1.0),
                diameter: 2.0,
                ricci_k: Some(-1.0),
            },
            false,
            &cfg,
        )
        .unwrap();
        assert_eq!(negative.lichnerowicz, None);
        assert_eq!(negative.kahler_lichnerowicz, None);
        assert!(negative.model.is_none());
        assert!(negative.shi_zhang_sup.is_some());
        assert!(negative.warnings.is_empty());

        let edge = bound_report(
            &BoundInputs {
                params: kp(2, 1.0, 1.0),
                diameter: std::f64::consts::FRAC_PI_2 * (1.0 - 2e-8),
                ricci_k: None,
            },
            false,
            &cfg,
        )
        .unwrap();
        assert!(edge.warnings[0].contains("edge"));
    }

    proptest! {
        #[test]
        fn two_parameterizations_agree(
            m in 1u32..6, k1 in -3.0f64..3.0, k2 in -3.0f64..3.0,
            d in 0.1f64..6.0, s in 0.001f64..0.999,
        ) {
            let p = kp(m, k1, k2);
            let a = 1.0 / (1.0 - s);
            let c = p.curvature_combination();
            let via_a = 4.0 * (a - 1.0) / (a * a) * PI * PI / (d * d) + 2.0 * (a - 1.0) / a * c;
            let via_s = main_bound_at(&p, d, s).unwrap();
            prop_assert!((via_a - via_s).abs() <= 1e-12 * via_s.abs().max(1e-300) + 1e-13);
        }

        #[test]
        fn sup_dominates_every_s(
            m in 1u32..6, k1 in -3.0f64..3.0, k2 in -3.0f64..3.0,
            d in 0.1f64..6.0, s in 0.001f64..0.999,
        ) {
            let p = kp(m, k1, k2);
            let sup = main_bound_sup(&p, d).unwrap();
            prop_assert!(sup.sup >= main_bound_at(&p, d, s).unwrap() - 1e-12 * sup.sup.abs());
            prop_assert!(sup.sup >= 0.0);
            if sup.attained {
                let c = p.curvature_combination();
                prop_assert!(sup.sup >= PI * PI / (d * d) + c - 1e-12 * sup.sup.abs());
            }
        }

        #[test]
        fn sup_is_monotone_in_curvature(
            m in 1u32..6, k1 in -3.0f64..3.0, k2 in -3.0f64..3.0,
            d in 0.1f64..6.0, dk in 0.0f64..1.0,
        ) {
            let base = main_bound_sup(&kp(m, k1, k2), d).unwrap().sup;
            prop_assert!(main_bound_sup(&kp(m, k1 + dk, k2), d).unwrap().sup >= base);
            prop_assert!(main_bound_sup(&kp(m, k1, k2 + dk), d).unwrap().sup >= base);
        }
    }
}
