//! Coordinate maps from a computational variable to `x ∈ [−D/2, D/2]`.
//!
//! Discretizations and integrators work on a uniform grid in the
//! computational variable `u ∈ [−U, U]`; the physical abscissa is `x(u)` with
//! Jacobian `J(u) = dx/du`. Near a tangent pole the drift behaves like
//! `mult/(P − |x|)`, and the tanh map `x = P tanh u` has `J ≈ 2(P − |x|)`
//! there, so `J·w` stays bounded and fixed-step integration remains stable.

use crate::model::ModelProblem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mapping {
    /// `x = u` on `[−h, h]`.
    Linear { half: f64 },
    /// `x = P tanh u` on `[−atanh(h/P), atanh(h/P)]`.
    Tanh { pole: f64, half: f64 },
    /// `x = h g(ξ)` on `[−1, 1]` with `g' = (35/16)(1 − ξ²)³`. The Jacobian
    /// vanishes to third order at both ends, so integrands with algebraic
    /// endpoint singularities (like `v^{a−2}` for a Dirichlet `v`) become
    /// smooth in `ξ`.
    Clustered { half: f64 },
}

impl Mapping {
    /// Linear map, or the tanh map when the drift has a pole.
    pub fn for_problem(p: &ModelProblem) -> Mapping {
        let pole = p.spec().singular_threshold();
        if pole.is_finite() {
            Mapping::Tanh {
                pole,
                half: p.half_width(),
            }
        } else {
            Mapping::Linear {
                half: p.half_width(),
            }
        }
    }

    /// Half-length `U` of the computational interval.
    pub fn extent(&self) -> f64 {
        match *self {
            Mapping::Linear { half } => half,
            Mapping::Tanh { pole, half } => (half / pole).atanh(),
            Mapping::Clustered { .. } => 1.0,
        }
    }

    pub fn x(&self, u: f64) -> f64 {
        match *self {
            Mapping::Linear { .. } => u,
            Mapping::Tanh { pole, .. } => pole * u.tanh(),
            Mapping::Clustered { half } => {
                let u2 = u * u;
                half * u * (35.0 + u2 * (-35.0 + u2 * (21.0 - 5.0 * u2))) / 16.0
            }
        }
    }

    pub fn jacobian(&self, u: f64) -> f64 {
        match *self {
            Mapping::Linear { .. } => 1.0,
            Mapping::Tanh { pole, .. } => {
                let s = 1.0 / u.cosh();
                pole * s * s
            }
            Mapping::Clustered { half } => {
                let r = 1.0 - u * u;
                half * 35.0 / 16.0 * r * r * r
            }
        }
    }

    /// Computational nodes `u_i = −U + i·Δu`, `i = 0..=intervals`.
    pub fn nodes(&self, intervals: usize) -> Vec<f64> {
        let ext = self.extent();
        let du = 2.0 * ext / intervals as f64;
        (0..=intervals)
            .map(|i| {
                if i == intervals {
                    ext
                } else {
                    -ext + i as f64 * du
                }
            })
            .collect()
    }

    /// The endpoint abscissae are returned exactly as `±D/2`.
    pub fn x_nodes(&self, intervals: usize) -> Vec<f64> {
        let half = match *self {
            Mapping::Linear { half } | Mapping::Tanh { half, .. } | Mapping::Clustered { half } => {
                half
            }
        };
        let mut xs: Vec<f64> = self
            .nodes(intervals)
            .into_iter()
            .map(|u| self.x(u))
            .collect();
        xs[0] = -half;
        xs[intervals] = half;
        xs
    }
}
