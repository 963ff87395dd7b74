//! Composite Simpson quadrature over sampled functions.

use serde::{Deserialize, Serialize};

use crate::eigensolver::shooting::{Coefficients, Direction};
use crate::error::{Error, Result};
use crate::mesh::Mapping;
use crate::model::{BoundaryCondition, ModelProblem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureKind {
    CompositeSimpson,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub kind: QuadratureKind,
    pub panels: usize,
}

impl QuadratureRule {
    pub fn simpson(panels: usize) -> Result<Self> {
        if panels < 8 || !panels.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "Simpson rule needs an even number of panels ≥ 8, got {panels}"
            )));
        }
        Ok(QuadratureRule {
            kind: QuadratureKind::CompositeSimpson,
            panels,
        })
    }

    pub fn nodes(&self) -> usize {
        self.panels + 1
    }

    /// Weights for unit spacing: `1, 4, 2, 4, …, 2, 4, 1` over 3.
    pub fn unit_weights(&self) -> Vec<f64> {
        (0..=self.panels)
            .map(|i| {
                let w = if i == 0 || i == self.panels {
                    1.0
                } else if i % 2 == 1 {
                    4.0
                } else {
                    2.0
                };
                w / 3.0
            })
            .collect()
    }

    /// `∫ f` for samples on a uniform grid of spacing `h`.
    pub fn integrate(&self, h: f64, values: &[f64]) -> f64 {
        assert_eq!(
            values.len(),
            self.nodes(),
            "sample count must match the rule"
        );
        self.unit_weights()
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum::<f64>()
            * h
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::simpson(2048).expect("valid panel count")
    }
}

/// Fourth-order first derivative of uniformly spaced samples.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= 5, "need at least five samples");
    let f = values;
    let mut d = vec![0.0; n];
    let c = 1.0 / (12.0 * h);
    d[0] = c * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = c * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]);
    for i in 2..n - 2 {
        d[i] = c * (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]);
    }
    let m = n - 1;
    d[m] =
        -c * (-25.0 * f[m] + 48.0 * f[m - 1] - 36.0 * f[m - 2] + 16.0 * f[m - 3] - 3.0 * f[m - 4]);
    d[m - 1] = -c * (-3.0 * f[m] - 10.0 * f[m - 1] + 18.0 * f[m - 2] - 6.0 * f[m - 3] + f[m - 4]);
    d
}

/// A function sampled on quadrature nodes, with its physical derivative and
/// the computational-variable derivative of that derivative.
#[derive(Debug, Clone)]
pub struct Profile {
    /// Physical abscissae.
    pub x: Vec<f64>,
    /// Quadrature weights in the computational variable (spacing included).
    pub weight: Vec<f64>,
    /// `dx/dξ` at each node.
    pub jacobian: Vec<f64>,
    pub value: Vec<f64>,
    /// `df/dx`.
    pub slope: Vec<f64>,
    /// `d(df/dx)/dξ`, so that `∫ g f'' dx = Σ weightᵢ gᵢ slope_dxiᵢ`.
    pub slope_dxi: Vec<f64>,
}

impl Profile {
    /// Samples on the uniform grid `lo + i (hi − lo)/panels`; derivatives by
    /// fourth-order finite differences.
    pub fn from_samples(lo: f64, hi: f64, values: Vec<f64>) -> Result<Self> {
        let rule = QuadratureRule::simpson(values.len().saturating_sub(1))?;
        if hi.is_nan() || lo.is_nan() || hi <= lo {
            return Err(Error::InvalidParameter(format!(
                "interval [{lo}, {hi}] is empty"
            )));
        }
        let h = (hi - lo) / rule.panels as f64;
        let x = (0..=rule.panels)
            .map(|i| {
                if i == rule.panels {
                    hi
                } else {
                    lo + i as f64 * h
                }
            })
            .collect();
        let slope = derivative(&values, h);
        let slope_dxi = derivative(&slope, h);
        Ok(Profile {
            x,
            weight: rule.unit_weights().into_iter().map(|w| w * h).collect(),
            jacobian: vec![1.0; rule.nodes()],
            value: values,
            slope,
            slope_dxi,
        })
    }

    /// Samples `f` on `rule`'s uniform grid over `[lo, hi]`.
    pub fn sample(rule: &QuadratureRule, lo: f64, hi: f64, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = (hi - lo) / rule.panels as f64;
        let values = (0..=rule.panels)
            .map(|i| {
                f(if i == rule.panels {
                    hi
                } else {
                    lo + i as f64 * h
                })
            })
            .collect();
        Profile::from_samples(lo, hi, values)
    }

    /// The first eigenfunction `v` of a Dirichlet problem at eigenvalue `mu`,
    /// integrated by RK4 from both ends on an endpoint-clustered grid and
    /// matched at the midpoint. `v'` is the integrator state; `v''` comes from
    /// differencing it. Both endpoint values are exactly zero.
    pub fn dirichlet_mode(p: &ModelProblem, mu: f64, rule: &QuadratureRule) -> Result<Self> {
        if p.bc() != BoundaryCondition::Dirichlet {
            return Err(Error::Precondition(
                "dirichlet_mode needs a Dirichlet problem".into(),
            ));
        }
        let map = Mapping::Clustered {
            half: p.half_width(),
        };
        let steps = rule.panels;
        let coef = Coefficients::new(p, &map, steps)?;
        let left = coef.integrate(mu, (0.0, 1.0), Direction::Forward, true);
        let right = coef.integrate(mu, (0.0, -1.0), Direction::Backward, true);
        let mid = steps / 2;
        let scale = left.y[mid] / right.y[mid];
        let mut value = Vec::with_capacity(steps + 1);
        let mut slope = Vec::with_capacity(steps + 1);
        for i in 0..=steps {
            if i <= mid {
                value.push(left.y[i]);
                slope.push(left.dy[i]);
            } else {
                value.push(scale * right.y[i]);
                slope.push(scale * right.dy[i]);
            }
        }
        let peak = value.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        value.iter_mut().for_each(|v| *v /= peak);
        slope.iter_mut().for_each(|v| *v /= peak);

        let dxi = 2.0 / steps as f64;
        let slope_dxi = derivative(&slope, dxi);
        let xi: Vec<f64> = map.nodes(steps);
        Ok(Profile {
            x: map.x_nodes(steps),
            weight: rule.unit_weights().into_iter().map(|w| w * dxi).collect(),
            jacobian: xi.iter().map(|&u| map.jacobian(u)).collect(),
            value,
            slope,
            slope_dxi,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn lo(&self) -> f64 {
        self.x[0]
    }

    pub fn hi(&self) -> f64 {
        self.x[self.len() - 1]
    }

    pub fn length(&self) -> f64 {
        self.hi() - self.lo()
    }

    /// `∫ f dx` with `f` given per node; nodes of zero weight are skipped so
    /// that integrable endpoint singularities do not poison the sum.
    pub fn integrate(&self, f: impl Fn(usize) -> f64) -> f64 {
        (0..self.len())
            .filter(|&i| self.weight[i] * self.jacobian[i] != 0.0)
            .map(|i| self.weight[i] * self.jacobian[i] * f(i))
            .sum()
    }

    /// `∫ g f'' dx` with `g` given per node.
    pub fn integrate_against_curvature(&self, g: impl Fn(usize) -> f64) -> f64 {
        (0..self.len())
            .filter(|&i| self.weight[i] * self.jacobian[i] != 0.0)
            .map(|i| self.weight[i] * g(i) * self.slope_dxi[i])
            .sum()
    }

    /// Largest magnitude of the integrand `f` as actually summed, `|f·J|`,
    /// divided by the mean Jacobian. On a uniform grid this is `max |f|`; on
    /// the clustered grid it stays bounded for integrable endpoint
    /// singularities.
    pub fn max_abs(&self, f: impl Fn(usize) -> f64) -> f64 {
        let total: f64 = self
            .weight
            .iter()
            .zip(&self.jacobian)
            .map(|(w, j)| w * j)
            .sum();
        let extent: f64 = self.weight.iter().sum();
        let mean_jacobian = total / extent;
        (0..self.len())
            .filter(|&i| self.weight[i] * self.jacobian[i] != 0.0)
            .map(|i| (f(i) * self.jacobian[i]).abs())
            .fold(0.0, f64::max)
            / mean_jacobian
    }

    pub fn peak(&self) -> f64 {
        self.value.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Shifts the abscissae by `offset`.
    pub fn translated(mut self, offset: f64) -> Self {
        self.x.iter_mut().for_each(|x| *x += offset);
        self
    }
}
