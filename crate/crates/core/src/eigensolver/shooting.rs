//! Shooting with classical fourth-order Runge–Kutta.
//!
//! The state is `(y, y')` with `'` the physical derivative `d/dx`, advanced in
//! the computational variable `u`:
//!
//! ```text
//! dy/du  = J y'
//! dy'/du = J (w y' + (S − μ) y)
//! ```
//!
//! where `S` is the zeroth-order coefficient (zero for Neumann problems).

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::Mapping;
use crate::model::{BoundaryCondition, ModelProblem};

/// Number of logarithmically spaced probes used to bracket the first root.
pub const BRACKET_PROBES: usize = 64;

/// Coefficients `J`, `J·w`, `J·S` sampled at nodes and midpoints
/// (`2·steps + 1` points).
pub(crate) struct Coefficients {
    du: f64,
    steps: usize,
    jac: Vec<f64>,
    jac_drift: Vec<f64>,
    jac_potential: Vec<f64>,
    x_nodes: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Direction {
    Forward,
    Backward,
}

pub(crate) struct Trajectory {
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
}

impl Coefficients {
    pub fn new(p: &ModelProblem, map: &Mapping, steps: usize) -> Result<Self> {
        let ext = map.extent();
        let du = 2.0 * ext / steps as f64;
        let half = p.half_width();
        let count = 2 * steps + 1;
        let mut jac = Vec::with_capacity(count);
        let mut jac_drift = Vec::with_capacity(count);
        let mut jac_potential = Vec::with_capacity(count);
        for k in 0..count {
            let u = -ext + 0.5 * du * k as f64;
            let x = if k == 0 {
                -half
            } else if k == count - 1 {
                half
            } else {
                map.x(u)
            };
            let j = map.jacobian(u);
            jac.push(j);
            jac_drift.push(j * p.spec().drift(x)?);
            jac_potential.push(j * p.zeroth_order(x)?);
        }
        Ok(Coefficients {
            du,
            steps,
            jac,
            jac_drift,
            jac_potential,
            x_nodes: map.x_nodes(steps),
        })
    }

    pub fn x_nodes(&self) -> &[f64] {
        &self.x_nodes
    }

    #[inline]
    fn rhs(&self, k: usize, mu: f64, y: f64, z: f64) -> (f64, f64) {
        let j = self.jac[k];
        (
            j * z,
            self.jac_drift[k] * z + (self.jac_potential[k] - mu * j) * y,
        )
    }

    /// Integrates from one end to the other. With `record`, the returned
    /// trajectory holds the state at every node in left-to-right order;
    /// otherwise only the terminal state.
    pub fn integrate(
        &self,
        mu: f64,
        start: (f64, f64),
        direction: Direction,
        record: bool,
    ) -> Trajectory {
        let n = self.steps;
        let (mut y, mut z) = start;
        let mut ys = Vec::new();
        let mut zs = Vec::new();
        if record {
            ys.reserve(n + 1);
            zs.reserve(n + 1);
            ys.push(y);
            zs.push(z);
        }
        let (h, idx): (f64, fn(usize, usize, usize) -> usize) = match direction {
            Direction::Forward => (self.du, |i, off, _| 2 * i + off),
            Direction::Backward => (-self.du, |i, off, n| 2 * (n - i) - off),
        };
        for i in 0..n {
            let k0 = idx(i, 0, n);
            let k1 = idx(i, 1, n);
            let k2 = idx(i, 2, n);
            let (a1, b1) = self.rhs(k0, mu, y, z);
            let (a2, b2) = self.rhs(k1, mu, y + 0.5 * h * a1, z + 0.5 * h * b1);
            let (a3, b3) = self.rhs(k1, mu, y + 0.5 * h * a2, z + 0.5 * h * b2);
            let (a4, b4) = self.rhs(k2, mu, y + h * a3, z + h * b3);
            y += h / 6.0 * (a1 + 2.0 * a2 + 2.0 * a3 + a4);
            z += h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4);
            if record {
                ys.push(y);
                zs.push(z);
            }
        }
        if !record {
            ys.push(y);
            zs.push(z);
        } else if matches!(direction, Direction::Backward) {
            ys.reverse();
            zs.reverse();
        }
        Trajectory { y: ys, dy: zs }
    }
}

pub(crate) struct ShootResult {
    pub mu: f64,
    pub nodes: Vec<f64>,
    pub phi: Vec<f64>,
    pub residual: f64,
}

fn start_state(bc: BoundaryCondition) -> (f64, f64) {
    match bc {
        BoundaryCondition::Neumann => (1.0, 0.0),
        BoundaryCondition::Dirichlet => (0.0, 1.0),
    }
}

/// `F(μ)`: the boundary quantity that must vanish at the far end.
fn mismatch(coef: &Coefficients, bc: BoundaryCondition, mu: f64) -> f64 {
    let t = coef.integrate(mu, start_state(bc), Direction::Forward, false);
    match bc {
        BoundaryCondition::Neumann => t.dy[0],
        BoundaryCondition::Dirichlet => t.y[0],
    }
}

/// Lower and upper limits of the bracketing scan.
pub(crate) fn search_window(p: &ModelProblem) -> (f64, f64) {
    let scale = p.spec().curvature_scale();
    let d = p.diameter();
    (1e-10 * (1.0 + scale), 100.0 * (PI * PI / (d * d) + scale))
}

pub(crate) fn solve(p: &ModelProblem, steps: usize) -> Result<ShootResult> {
    let map = Mapping::for_problem(p);
    let coef = Coefficients::new(p, &map, steps)?;
    let bc = p.bc();
    let (floor, ceiling) = search_window(p);

    let ratio = (ceiling / floor).powf(1.0 / (BRACKET_PROBES - 1) as f64);
    let mut prev_mu = floor;
    let base = mismatch(&coef, bc, floor);
    let mut bracket = None;
    let mut probe = floor;
    for _ in 1..BRACKET_PROBES {
        probe *= ratio;
        let f = mismatch(&coef, bc, probe);
        if f != 0.0 && (f > 0.0) != (base > 0.0) {
            bracket = Some((prev_mu, probe));
            break;
        }
        prev_mu = probe;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::BracketFailure { ceiling })?;

    let f_lo_positive = base > 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-15 * hi || mid <= lo || mid >= hi {
            break;
        }
        let f = mismatch(&coef, bc, mid);
        if (f > 0.0) == f_lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mu = 0.5 * (lo + hi);

    let t = coef.integrate(mu, start_state(bc), Direction::Forward, true);
    let (boundary, reference) = match bc {
        BoundaryCondition::Neumann => (t.dy[steps], &t.dy),
        BoundaryCondition::Dirichlet => (t.y[steps], &t.y),
    };
    let scale = reference.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(ShootResult {
        mu,
        nodes: coef.x_nodes().to_vec(),
        phi: t.y,
        residual: boundary.abs() / scale.max(f64::MIN_POSITIVE),
    })
}
