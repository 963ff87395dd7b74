//! First nonzero Neumann (and first Dirichlet) eigenvalue of a model problem.
//!
//! Two independent backends:
//!
//! * [`Backend::FiniteDifference`]: symmetric tridiagonal pencil from the
//!   self-adjoint form, eigenvalue located by Sturm inertia counts and
//!   bisection. Second order in the mesh width.
//! * [`Backend::Shooting`]: fixed-step RK4 initial value problem, first sign
//!   change of the far-end boundary mismatch bracketed and bisected. Fourth
//!   order in the step.
//!
//! Both run on a uniform grid in a computational variable (see
//! [`crate::mesh`]); results are Richardson-extrapolated over successive mesh
//! doublings until the error estimate drops below `rel_tol · μ`.

mod fd;
pub(crate) mod pencil;
pub(crate) mod shooting;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::Mapping;
use crate::model::{BoundaryCondition, ModelProblem};

pub use pencil::Pencil;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Backend {
    FiniteDifference,
    Shooting,
    /// Finite differences as the reported value, shooting as a cross-check.
    Both,
}

impl Backend {
    /// Convergence order used for the Richardson estimate.
    fn order(self) -> i32 {
        match self {
            Backend::FiniteDifference | Backend::Both => 2,
            Backend::Shooting => 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Initial number of mesh nodes (intervals + 1).
    pub mesh_points: usize,
    pub rel_tol: f64,
    /// Mesh doublings allowed beyond the first comparison pair.
    pub max_refinements: usize,
    pub backend: Backend,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mesh_points: 1025,
            rel_tol: 1e-7,
            max_refinements: 6,
            backend: Backend::Both,
        }
    }
}

impl SolverConfig {
    pub fn with_backend(mut self, backend: Backend) -> Self {
        self.backend = backend;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mesh_points < 16 {
            return Err(Error::InvalidParameter(format!(
                "mesh_points must be ≥ 16, got {}",
                self.mesh_points
            )));
        }
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must lie in (0, 1), got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }
}

/// A computed eigenpair with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenSolution {
    /// Richardson-extrapolated eigenvalue.
    pub mu: f64,
    /// Eigenvalue on the finest mesh, before extrapolation.
    pub raw_mu: f64,
    pub nodes: Vec<f64>,
    /// Eigenfunction at `nodes`, scaled to `max |φ| = 1` and positive at the
    /// left end (Neumann) or in the interior (Dirichlet).
    pub phi: Vec<f64>,
    pub residual: f64,
    /// Richardson error estimate `|μ_h − μ_{h/2}| / (2^order − 1)`.
    pub est_error: f64,
    pub backend_used: Backend,
    pub mesh_points: usize,
    /// Shooting eigenvalue when the backend is [`Backend::Both`].
    pub cross_check_mu: Option<f64>,
}

impl EigenSolution {
    /// Relative difference between the two backends, when both ran.
    pub fn backend_delta(&self) -> Option<f64> {
        self.cross_check_mu
            .map(|other| (self.mu - other).abs() / self.mu.abs())
    }

    /// Number of sign changes of `phi` strictly inside the interval.
    pub fn interior_sign_changes(&self) -> usize {
        let n = self.phi.len();
        let scale = self.phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tiny = 1e-12 * scale;
        let mut count = 0;
        let mut last = 0.0;
        for &v in &self.phi[1..n - 1] {
            if v.abs() <= tiny {
                continue;
            }
            if last != 0.0 && (v > 0.0) != (last > 0.0) {
                count += 1;
            }
            last = v;
        }
        count
    }
}

fn normalize(phi: &mut [f64], bc: BoundaryCondition) {
    let scale = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return;
    }
    let reference = match bc {
        BoundaryCondition::Neumann => phi[0],
        BoundaryCondition::Dirichlet => phi[phi.len() / 2],
    };
    let s = if reference < 0.0 { -scale } else { scale };
    phi.iter_mut().for_each(|v| *v /= s);
}

/// One solve on a fixed mesh, without extrapolation.
fn raw_solve(p: &ModelProblem, intervals: usize, backend: Backend) -> Result<EigenSolution> {
    let (mu, nodes, mut phi, residual) = match backend {
        Backend::FiniteDifference | Backend::Both => {
            let r = fd::solve(p, intervals)?;
            (r.mu, r.nodes, r.phi, r.residual)
        }
        Backend::Shooting => {
            let r = shooting::solve(p, intervals)?;
            (r.mu, r.nodes, r.phi, r.residual)
        }
    };
    normalize(&mut phi, p.bc());
    Ok(EigenSolution {
        mu,
        raw_mu: mu,
        nodes,
        phi,
        residual,
        est_error: f64::INFINITY,
        backend_used: backend,
        mesh_points: intervals + 1,
        cross_check_mu: None,
    })
}

/// Halves the mesh width of `solution`, re-solves and Richardson-extrapolates.
pub fn refine(
    solution: &EigenSolution,
    p: &ModelProblem,
    _cfg: &SolverConfig,
) -> Result<EigenSolution> {
    let intervals = 2 * (solution.mesh_points - 1);
    let mut fine = raw_solve(p, intervals, solution.backend_used)?;
    let factor = f64::from(2i32.pow(solution.backend_used.order() as u32) - 1);
    let diff = fine.raw_mu - solution.raw_mu;
    fine.mu = fine.raw_mu + diff / factor;
    fine.est_error = diff.abs() / factor;
    fine.cross_check_mu = solution.cross_check_mu;
    Ok(fine)
}

fn converge(p: &ModelProblem, cfg: &SolverConfig, backend: Backend) -> Result<EigenSolution> {
    cfg.validate()?;
    let mut current = raw_solve(p, cfg.mesh_points - 1, backend)?;
    for refinement in 0..=cfg.max_refinements {
        current = refine(&current, p, cfg)?;
        if current.est_error <= cfg.rel_tol * current.mu.abs() {
            return Ok(current);
        }
        if refinement == cfg.max_refinements {
            return Err(Error::NoConvergence {
                refinements: refinement + 1,
                est_error: current.est_error,
                target: cfg.rel_tol * current.mu.abs(),
            });
        }
    }
    unreachable!("loop returns on its last iteration")
}

fn solve(p: &ModelProblem, cfg: &SolverConfig) -> Result<EigenSolution> {
    match cfg.backend {
        Backend::Both => {
            let mut primary = converge(p, cfg, Backend::FiniteDifference)?;
            let check = converge(p, cfg, Backend::Shooting)?;
            primary.backend_used = Backend::Both;
            primary.cross_check_mu = Some(check.mu);
            Ok(primary)
        }
        backend => converge(p, cfg, backend),
    }
}

/// Smallest strictly positive eigenvalue of `(pφ')' = −μpφ`, `φ'(±D/2) = 0`.
pub fn solve_neumann_first(p: &ModelProblem, cfg: &SolverConfig) -> Result<EigenSolution> {
    if p.bc() != BoundaryCondition::Neumann {
        return Err(Error::Precondition(
            "solve_neumann_first requires a Neumann problem".into(),
        ));
    }
    solve(p, cfg)
}

/// Smallest eigenvalue of the differentiated (Dirichlet) problem, including
/// its zeroth-order coefficient.
pub fn solve_dirichlet_first(p: &ModelProblem, cfg: &SolverConfig) -> Result<EigenSolution> {
    if p.bc() != BoundaryCondition::Dirichlet {
        return Err(Error::Precondition(
            "solve_dirichlet_first requires a Dirichlet problem".into(),
        ));
    }
    solve(p, cfg)
}

/// The shooting backend alone, for either boundary condition.
pub fn shooting_eigenvalue(p: &ModelProblem, cfg: &SolverConfig) -> Result<EigenSolution> {
    converge(p, cfg, Backend::Shooting)
}

/// One unextrapolated solve on `intervals` cells, the starting point for
/// [`refine`]. [`Backend::Both`] runs finite differences only.
pub fn solve_on_mesh(
    p: &ModelProblem,
    intervals: usize,
    backend: Backend,
) -> Result<EigenSolution> {
    raw_solve(p, intervals, backend)
}

/// Raw finite-difference eigenvalue on a mesh of `intervals` cells.
pub fn fd_eigenvalue(p: &ModelProblem, intervals: usize) -> Result<f64> {
    fd::solve(p, intervals).map(|r| r.mu)
}

/// Raw shooting eigenvalue with `steps` RK4 steps.
pub fn shooting_raw_eigenvalue(p: &ModelProblem, steps: usize) -> Result<f64> {
    shooting::solve(p, steps).map(|r| r.mu)
}

/// The coordinate map the backends use for `p`.
pub fn mapping_for(p: &ModelProblem) -> Mapping {
    Mapping::for_problem(p)
}
