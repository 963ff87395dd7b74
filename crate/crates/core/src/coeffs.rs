//! Comparison coefficient functions.
//!
//! For a curvature constant `K` the drift coefficient is
//!
//! ```text
//! T_K(x) =  √K tan(√K x)      K > 0
//!           0                 K = 0
//!          −√−K tanh(√−K x)   K < 0
//! ```
//!
//! with derivative `S_K = T_K'` (`K sec²`, `0`, `K sech²`) and the
//! cosine-type factor `C_K` (`cos`, `1`, `cosh`) satisfying `C_K'/C_K = −T_K`.
//! A [`DriftSpec`] is a multiplicity-weighted sum of `T_K` terms; its
//! integrating factor `p = Π C_K^mult` puts the model equation
//! `φ'' − w φ' = −μ φ` into the self-adjoint form `(p φ')' = −μ p φ`.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative margin kept from a tangent pole: `x` is admissible when
/// `|x| ≤ (1 − POLE_GUARD)·π/(2√K)`.
pub const POLE_GUARD: f64 = 1e-12;

/// Curvatures with `|K|` at or below this value use the flat branch.
pub const FLAT_CUTOFF: f64 = 1e-14;

/// A finite curvature normalization constant.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Curvature(f64);

enum Branch {
    Spherical(f64),
    Flat,
    Hyperbolic(f64),
}

impl Curvature {
    pub const ZERO: Curvature = Curvature(0.0);

    pub fn new(k: f64) -> Result<Self> {
        if k.is_finite() {
            Ok(Curvature(k))
        } else {
            Err(Error::InvalidParameter(format!(
                "curvature must be finite, got {k}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    fn branch(self) -> Branch {
        if self.0 > FLAT_CUTOFF {
            Branch::Spherical(self.0.sqrt())
        } else if self.0 < -FLAT_CUTOFF {
            Branch::Hyperbolic((-self.0).sqrt())
        } else {
            Branch::Flat
        }
    }

    /// Location `π/(2√K)` of the first tangent pole, if `K > 0`.
    pub fn pole(self) -> Option<f64> {
        match self.branch() {
            Branch::Spherical(r) => Some(FRAC_PI_2 / r),
            _ => None,
        }
    }

    /// Whether `T_K` and `S_K` may be evaluated at `x`.
    pub fn admits(self, x: f64) -> bool {
        match self.pole() {
            Some(pole) => x.abs() <= (1.0 - POLE_GUARD) * pole,
            None => x.is_finite(),
        }
    }

    fn check(self, x: f64) -> Result<()> {
        if self.admits(x) {
            Ok(())
        } else {
            Err(Error::Domain(format!(
                "x = {x} is not admissible for K = {} (pole at {})",
                self.0,
                self.pole().unwrap_or(f64::INFINITY)
            )))
        }
    }
}

impl TryFrom<f64> for Curvature {
    type Error = Error;

    fn try_from(k: f64) -> Result<Self> {
        Curvature::new(k)
    }
}

impl From<Curvature> for f64 {
    fn from(k: Curvature) -> f64 {
        k.0
    }
}

/// The drift coefficient `T_K(x)`.
pub fn t_k(k: Curvature, x: f64) -> Result<f64> {
    k.check(x)?;
    Ok(match k.branch() {
        Branch::Spherical(r) => r * (r * x).tan(),
        Branch::Flat => 0.0,
        Branch::Hyperbolic(r) => -r * (r * x).tanh(),
    })
}

/// `S_K(x) = T_K'(x)`.
pub fn s_k(k: Curvature, x: f64) -> Result<f64> {
    k.check(x)?;
    Ok(match k.branch() {
        Branch::Spherical(r) => {
            let c = (r * x).cos();
            k.0 / (c * c)
        }
        Branch::Flat => 0.0,
        Branch::Hyperbolic(r) => {
            let c = (r * x).cosh();
            k.0 / (c * c)
        }
    })
}

/// The cosine-type factor `C_K(x)`; positive only inside the pole when `K > 0`.
pub fn c_k(k: Curvature, x: f64) -> f64 {
    match k.branch() {
        Branch::Spherical(r) => (r * x).cos(),
        Branch::Flat => 1.0,
        Branch::Hyperbolic(r) => (r * x).cosh(),
    }
}

/// `ln C_K(x)`, evaluated without overflow for large hyperbolic arguments.
fn ln_c_k(k: Curvature, x: f64) -> f64 {
    match k.branch() {
        Branch::Spherical(r) => (r * x).cos().ln(),
        Branch::Flat => 0.0,
        Branch::Hyperbolic(r) => {
            let y = (r * x).abs();
            // ln cosh y = y + ln(1 + e^{-2y}) − ln 2
            y + (-2.0 * y).exp().ln_1p() - std::f64::consts::LN_2
        }
    }
}

/// One summand `multiplicity · T_K` of a drift.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftTerm {
    multiplicity: f64,
    curvature: Curvature,
}

impl DriftTerm {
    pub fn new(multiplicity: f64, curvature: f64) -> Result<Self> {
        if !(multiplicity.is_finite() && multiplicity > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "drift multiplicity must be positive and finite, got {multiplicity}"
            )));
        }
        Ok(DriftTerm {
            multiplicity,
            curvature: Curvature::new(curvature)?,
        })
    }

    pub fn multiplicity(&self) -> f64 {
        self.multiplicity
    }

    pub fn curvature(&self) -> Curvature {
        self.curvature
    }
}

/// A drift `w(x) = Σ multᵢ · T_{Kᵢ}(x)`. The empty sum is the flat case.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DriftSpec {
    terms: Vec<DriftTerm>,
}

impl DriftSpec {
    pub fn new(terms: Vec<DriftTerm>) -> Self {
        DriftSpec { terms }
    }

    /// Shorthand for building from `(multiplicity, curvature)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        pairs
            .iter()
            .map(|&(m, k)| DriftTerm::new(m, k))
            .collect::<Result<Vec<_>>>()
            .map(DriftSpec::new)
    }

    pub fn flat() -> Self {
        DriftSpec::default()
    }

    pub fn terms(&self) -> &[DriftTerm] {
        &self.terms
    }

    pub fn is_flat(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.curvature.value().abs() <= FLAT_CUTOFF)
    }

    /// Nearest tangent pole over all positive-curvature terms; `+∞` if none.
    pub fn singular_threshold(&self) -> f64 {
        self.terms
            .iter()
            .filter_map(|t| t.curvature.pole())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn admits(&self, x: f64) -> bool {
        self.terms.iter().all(|t| t.curvature.admits(x))
    }

    /// `Σ multᵢ Kᵢ`, the value of the zeroth-order coefficient at `x = 0`.
    pub fn curvature_sum(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.multiplicity * t.curvature.value())
            .sum()
    }

    /// `Σ multᵢ |Kᵢ|`, a scale for the drift strength.
    pub fn curvature_scale(&self) -> f64 {
        self.terms
            .iter()
            .map(|t| t.multiplicity * t.curvature.value().abs())
            .sum()
    }

    pub fn drift(&self, x: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|t| t_k(t.curvature, x).map(|v| t.multiplicity * v))
            .sum()
    }

    /// Zeroth-order coefficient `Σ multᵢ S_{Kᵢ}(x)` of the differentiated problem.
    pub fn potential(&self, x: f64) -> Result<f64> {
        self.terms
            .iter()
            .map(|t| s_k(t.curvature, x).map(|v| t.multiplicity * v))
            .sum()
    }

    /// `ln p(x)` for the integrating factor `p = Π C_{Kᵢ}^{multᵢ}`.
    pub fn log_weight(&self, x: f64) -> Result<f64> {
        if !self.admits(x) {
            return Err(Error::Domain(format!(
                "x = {x} lies beyond the singular threshold {}",
                self.singular_threshold()
            )));
        }
        Ok(self
            .terms
            .iter()
            .map(|t| t.multiplicity * ln_c_k(t.curvature, x))
            .sum())
    }

    pub fn weight(&self, x: f64) -> Result<f64> {
        self.log_weight(x).map(f64::exp)
    }

    /// Terms with identical curvature combined, sorted by curvature.
    pub fn merged(&self) -> DriftSpec {
        let mut out: Vec<DriftTerm> = Vec::with_capacity(self.terms.len());
        let mut sorted = self.terms.clone();
        sorted.sort_by(|a, b| a.curvature.value().total_cmp(&b.curvature.value()));
        for term in sorted {
            match out.last_mut() {
                Some(last) if last.curvature == term.curvature => {
                    last.multiplicity += term.multiplicity
                }
                _ => out.push(term),
            }
        }
        DriftSpec { terms: out }
    }
}

/// Free-function form of [`DriftSpec::drift`].
pub fn drift(spec: &DriftSpec, x: f64) -> Result<f64> {
    spec.drift(x)
}

/// Free-function form of [`DriftSpec::weight`].
pub fn weight(spec: &DriftSpec, x: f64) -> Result<f64> {
    spec.weight(x)
}
