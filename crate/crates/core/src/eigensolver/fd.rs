//! Second-order finite differences on the self-adjoint form.
//!
//! In the computational variable `u` the model equation reads
//! `(p/J · φ_u)_u − pJ·S·φ = −μ pJ φ`. Flux coefficients `p/J` are sampled at
//! cell midpoints and mass `pJ` at nodes (trapezoid weights, halved at Neumann
//! ends), which gives a symmetric tridiagonal pencil. The Neumann pencil is
//! the ghost-node closure `φ_{−1} = φ_1`; the Dirichlet pencil keeps interior
//! nodes only.

use super::pencil::Pencil;
use crate::error::Result;
use crate::mesh::Mapping;
use crate::model::{BoundaryCondition, ModelProblem};

pub(crate) struct FdResult {
    pub mu: f64,
    pub nodes: Vec<f64>,
    pub phi: Vec<f64>,
    pub residual: f64,
}

pub(crate) fn assemble(p: &ModelProblem, map: &Mapping, intervals: usize) -> Result<Pencil> {
    let ext = map.extent();
    let du = 2.0 * ext / intervals as f64;
    let xs = map.x_nodes(intervals);
    let spec = p.spec();

    let mut log_mass = Vec::with_capacity(intervals + 1);
    for (i, &x) in xs.iter().enumerate() {
        let u = -ext + i as f64 * du;
        log_mass.push(spec.log_weight(x)? + map.jacobian(u).ln());
    }
    let mut log_flux = Vec::with_capacity(intervals);
    for i in 0..intervals {
        let u = -ext + (i as f64 + 0.5) * du;
        log_flux.push(spec.log_weight(map.x(u))? - map.jacobian(u).ln());
    }
    // p enters A and B alike, so only its variation matters; normalize by the
    // largest value to keep exp() finite for strongly hyperbolic drifts.
    let shift = spec.log_weight(0.0)?.max(
        xs.iter()
            .map(|&x| spec.log_weight(x))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max),
    );
    let inv_du2 = 1.0 / (du * du);
    let flux: Vec<f64> = log_flux
        .iter()
        .map(|l| (l - shift).exp() * inv_du2)
        .collect();
    let mass: Vec<f64> = log_mass.iter().map(|l| (l - shift).exp()).collect();

    let pencil = match p.bc() {
        BoundaryCondition::Neumann => {
            let mut m = mass;
            m[0] *= 0.5;
            m[intervals] *= 0.5;
            Pencil {
                coupling: flux,
                boundary: (0.0, 0.0),
                potential: vec![0.0; intervals + 1],
                mass: m,
            }
        }
        BoundaryCondition::Dirichlet => {
            let potential = (1..intervals)
                .map(|i| p.zeroth_order(xs[i]).map(|s| mass[i] * s))
                .collect::<Result<Vec<_>>>()?;
            Pencil {
                coupling: flux[1..intervals - 1].to_vec(),
                boundary: (flux[0], flux[intervals - 1]),
                potential,
                mass: mass[1..intervals].to_vec(),
            }
        }
    };
    Ok(pencil)
}

/// Raw (unextrapolated) eigenvalue and eigenvector on `intervals` cells.
pub(crate) fn solve(p: &ModelProblem, intervals: usize) -> Result<FdResult> {
    let map = Mapping::for_problem(p);
    let pencil = assemble(p, &map, intervals)?;
    let index = match p.bc() {
        BoundaryCondition::Neumann => 1,
        BoundaryCondition::Dirichlet => 0,
    };
    let mu = pencil.eigenvalue(index);
    let w = pencil.eigenvector(mu);
    let residual = pencil.residual(mu, &w);
    let phi = match p.bc() {
        BoundaryCondition::Neumann => w,
        BoundaryCondition::Dirichlet => {
            let mut full = Vec::with_capacity(intervals + 1);
            full.push(0.0);
            full.extend(w);
            full.push(0.0);
            full
        }
    };
    Ok(FdResult {
        mu,
        nodes: map.x_nodes(intervals),
        phi,
        residual,
    })
}
