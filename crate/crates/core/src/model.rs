//! One-dimensional comparison problems.
//!
//! The Kähler model (Li–Wang) has drift `2(m−1) T_{κ₂} + T_{4κ₁}`; the
//! Riemannian model (Kröger) has drift `(n−1) T_K`. Both are posed on
//! `[−D/2, D/2]` with Neumann ends. Differentiating the Neumann problem gives
//! a Dirichlet problem for `v = φ'` with the extra zeroth-order coefficient
//! `Σ multᵢ S_{Kᵢ}`.

use serde::{Deserialize, Serialize};

use crate::coeffs::{DriftSpec, DriftTerm, POLE_GUARD};
use crate::error::{Error, Result};

/// Relative shortfall used to approach a singular diameter from below.
pub const LIMIT_EPS: f64 = 1e-6;

/// Curvature hypotheses of a compact Kähler manifold: complex dimension `m`,
/// `H ≥ 4κ₁` and `Ric^⊥ ≥ 2(m−1)κ₂`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KahlerParams {
    pub m: u32,
    pub kappa1: f64,
    pub kappa2: f64,
}

impl KahlerParams {
    pub fn new(m: u32, kappa1: f64, kappa2: f64) -> Result<Self> {
        if m < 1 {
            return Err(Error::InvalidParameter("m must be ≥ 1".into()));
        }
        if !(kappa1.is_finite() && kappa2.is_finite()) {
            return Err(Error::InvalidParameter(
                "kappa1 and kappa2 must be finite".into(),
            ));
        }
        Ok(KahlerParams { m, kappa1, kappa2 })
    }

    /// `κ₂(m−1) + 2κ₁`, the curvature combination in the closed-form bound.
    pub fn curvature_combination(&self) -> f64 {
        self.kappa2 * f64::from(self.m - 1) + 2.0 * self.kappa1
    }

    /// Real dimension `2m`.
    pub fn real_dimension(&self) -> u32 {
        2 * self.m
    }

    pub fn drift_spec(&self) -> DriftSpec {
        let mut terms = Vec::with_capacity(2);
        let orth = 2.0 * f64::from(self.m - 1);
        if orth > 0.0 {
            terms.push(DriftTerm::new(orth, self.kappa2).expect("validated"));
        }
        terms.push(DriftTerm::new(1.0, 4.0 * self.kappa1).expect("validated"));
        DriftSpec::new(terms)
    }
}

/// Ricci hypothesis `Ric ≥ (n−1)K` on an `n`-dimensional Riemannian manifold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RiemannParams {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: f64,
}

impl RiemannParams {
    pub fn new(n: u32, k: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter("n must be ≥ 2".into()));
        }
        if !k.is_finite() {
            return Err(Error::InvalidParameter("K must be finite".into()));
        }
        Ok(RiemannParams { n, k })
    }

    pub fn drift_spec(&self) -> DriftSpec {
        DriftSpec::new(vec![
            DriftTerm::new(f64::from(self.n - 1), self.k).expect("validated")
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// `φ'(±D/2) = 0` for `φ'' − w φ' = −μ φ`.
    Neumann,
    /// `v(±D/2) = 0` for the differentiated equation
    /// `v'' − w v' − (Σ multᵢ S_{Kᵢ}) v = −μ v`.
    Dirichlet,
}

/// A drift, a diameter and a boundary condition; validated on construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelProblem {
    spec: DriftSpec,
    diameter: f64,
    bc: BoundaryCondition,
}

/// Largest diameter whose half-interval stays inside the pole guard.
pub fn max_admissible_diameter(spec: &DriftSpec) -> f64 {
    2.0 * (1.0 - POLE_GUARD) * spec.singular_threshold()
}

/// A diameter `LIMIT_EPS` short of the singular one, or `None` when the drift
/// has no pole.
pub fn limiting_diameter(spec: &DriftSpec) -> Option<f64> {
    let threshold = spec.singular_threshold();
    threshold
        .is_finite()
        .then_some(2.0 * threshold * (1.0 - LIMIT_EPS))
}

impl ModelProblem {
    pub fn new(spec: DriftSpec, diameter: f64, bc: BoundaryCondition) -> Result<Self> {
        if !(diameter.is_finite() && diameter > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "diameter must be positive and finite, got {diameter}"
            )));
        }
        let max_diameter = max_admissible_diameter(&spec);
        if diameter > max_diameter {
            return Err(Error::InvalidDiameter {
                diameter,
                max_diameter: 2.0 * spec.singular_threshold(),
            });
        }
        Ok(ModelProblem { spec, diameter, bc })
    }

    pub fn spec(&self) -> &DriftSpec {
        &self.spec
    }

    pub fn diameter(&self) -> f64 {
        self.diameter
    }

    pub fn half_width(&self) -> f64 {
        0.5 * self.diameter
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn is_flat(&self) -> bool {
        self.spec.is_flat()
    }

    /// The zeroth-order coefficient at `x`: `Σ multᵢ S_{Kᵢ}(x)` for the
    /// Dirichlet (differentiated) problem, zero for the Neumann one.
    pub fn zeroth_order(&self, x: f64) -> Result<f64> {
        match self.bc {
            BoundaryCondition::Neumann => Ok(0.0),
            BoundaryCondition::Dirichlet => self.spec.potential(x),
        }
    }

    /// `D / (2·threshold)`, how close the interval comes to the nearest pole.
    pub fn pole_proximity(&self) -> f64 {
        self.half_width() / self.spec.singular_threshold()
    }
}

/// The Kähler comparison problem with drift `2(m−1)T_{κ₂} + T_{4κ₁}`.
pub fn li_wang_problem(p: &KahlerParams, diameter: f64) -> Result<ModelProblem> {
    ModelProblem::new(p.drift_spec(), diameter, BoundaryCondition::Neumann)
}

/// The Riemannian comparison problem with drift `(n−1)T_K`.
pub fn kroger_problem(p: &RiemannParams, diameter: f64) -> Result<ModelProblem> {
    ModelProblem::new(p.drift_spec(), diameter, BoundaryCondition::Neumann)
}

/// The Dirichlet problem satisfied by `v = φ'` when `φ` solves `p`.
pub fn differentiated_problem(p: &ModelProblem) -> Result<ModelProblem> {
    if p.bc != BoundaryCondition::Neumann {
        return Err(Error::Precondition(
            "only a Neumann problem can be differentiated".into(),
        ));
    }
    Ok(ModelProblem {
        spec: p.spec.clone(),
        diameter: p.diameter,
        bc: BoundaryCondition::Dirichlet,
    })
}
