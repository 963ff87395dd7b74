//! Symmetric tridiagonal pencils `A − σB` with `B` diagonal positive.

/// `A` is stored in flux form: `coupling[i] > 0` links unknowns `i` and
/// `i+1` (off-diagonal `−coupling[i]`), `boundary` holds the fluxes to
/// eliminated Dirichlet nodes at either end, and `potential` is the diagonal
/// excess over the flux sum. `B = diag(mass)`.
#[derive(Debug, Clone)]
pub struct Pencil {
    pub coupling: Vec<f64>,
    pub boundary: (f64, f64),
    pub potential: Vec<f64>,
    pub mass: Vec<f64>,
}

const PIVOT_FLOOR: f64 = 1e-300;

fn guard(q: f64, floor: f64) -> f64 {
    if q.abs() < floor {
        if q < 0.0 {
            -floor
        } else {
            floor
        }
    } else {
        q
    }
}

impl Pencil {
    /// Flux form of an arbitrary symmetric tridiagonal matrix.
    pub fn from_matrix(diag: &[f64], off: &[f64], mass: &[f64]) -> Self {
        let n = diag.len();
        let coupling: Vec<f64> = off.iter().map(|e| -e).collect();
        let potential = (0..n)
            .map(|i| {
                let left = if i > 0 { coupling[i - 1] } else { 0.0 };
                let right = if i + 1 < n { coupling[i] } else { 0.0 };
                diag[i] - left - right
            })
            .collect();
        Pencil {
            coupling,
            boundary: (0.0, 0.0),
            potential,
            mass: mass.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    fn left_flux(&self, i: usize) -> f64 {
        if i == 0 {
            self.boundary.0
        } else {
            self.coupling[i - 1]
        }
    }

    fn right_flux(&self, i: usize) -> f64 {
        if i + 1 == self.len() {
            self.boundary.1
        } else {
            self.coupling[i]
        }
    }

    pub fn diag(&self, i: usize) -> f64 {
        self.left_flux(i) + self.right_flux(i) + self.potential[i]
    }

    /// Number of eigenvalues of `A w = μ B w` strictly below `sigma`.
    ///
    /// By Sylvester's law of inertia this is the number of negative pivots
    /// `q_i` in the LDLᵀ factorization of `A − σB`. The pivots are carried as
    /// `q_i = right_flux(i) + r_i` with
    /// `r_i = left_flux(i) + potential_i − σ mass_i − coupling_{i−1}²/q_{i−1}`
    /// rewritten as `potential_i − σ mass_i + coupling_{i−1} r_{i−1}/q_{i−1}`,
    /// which avoids the cancellation between large fluxes that otherwise
    /// limits discrete Laplacians to absolute accuracy `ε‖A‖`.
    pub fn count_below(&self, sigma: f64) -> usize {
        let n = self.len();
        let mut count = 0;
        let mut r = self.boundary.0 + self.potential[0] - sigma * self.mass[0];
        let mut q = self.right_flux(0) + r;
        if q < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let c = self.coupling[i - 1];
            // A pivot below ε·c is replaced by ±ε·c so that c·r/q stays
            // finite; a bare underflow guard overflows to ∞ and then NaN.
            let floor = (f64::EPSILON * c.abs()).max(PIVOT_FLOOR);
            r = self.potential[i] - sigma * self.mass[i] + c * (r / guard(q, floor));
            q = self.right_flux(i) + r;
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin enclosure of the spectrum of `B^{-1/2} A B^{-1/2}`.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut radius = 0.0;
            if i > 0 {
                radius += self.coupling[i - 1].abs() / (self.mass[i] * self.mass[i - 1]).sqrt();
            }
            if i + 1 < n {
                radius += self.coupling[i].abs() / (self.mass[i] * self.mass[i + 1]).sqrt();
            }
            let centre = self.diag(i) / self.mass[i];
            lo = lo.min(centre - radius);
            hi = hi.max(centre + radius);
        }
        (lo, hi)
    }

    /// The `index`-th smallest eigenvalue (0-based) by bisection on the
    /// inertia count, to full double precision.
    pub fn eigenvalue(&self, index: usize) -> f64 {
        assert!(index < self.len(), "eigenvalue index out of range");
        let (lo, hi) = self.gershgorin();
        let pad = 1e-3 * (hi - lo).abs().max(1.0);
        let (mut lo, mut hi) = (lo - pad, hi + pad);
        for _ in 0..300 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) > index {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an eigenvalue `mu` by inverse iteration.
    pub fn eigenvector(&self, mu: f64) -> Vec<f64> {
        let n = self.len();
        let shifted: Vec<f64> = (0..n).map(|i| self.diag(i) - mu * self.mass[i]).collect();
        let off: Vec<f64> = self.coupling.iter().map(|c| -c).collect();
        // A generic non-constant start so both even and odd modes are present.
        let mut x: Vec<f64> = (0..n)
            .map(|i| {
                let t = (i as f64 + 0.5) / n as f64;
                1.0 + t + (7.3 * t).sin()
            })
            .collect();
        for _ in 0..3 {
            let rhs: Vec<f64> = x.iter().zip(&self.mass).map(|(v, b)| v * b).collect();
            x = solve_tridiagonal(&off, &shifted, &off, &rhs);
            let scale = x.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            if scale > 0.0 && scale.is_finite() {
                x.iter_mut().for_each(|v| *v /= scale);
            }
        }
        x
    }

    /// `‖(A − μB)w‖₂ / (|μ| ‖Bw‖₂)`, or the unscaled norm when `μ = 0`.
    pub fn residual(&self, mu: f64, w: &[f64]) -> f64 {
        let n = self.len();
        let mut r2 = 0.0;
        let mut b2 = 0.0;
        for i in 0..n {
            let mut r = (self.diag(i) - mu * self.mass[i]) * w[i];
            if i > 0 {
                r -= self.coupling[i - 1] * w[i - 1];
            }
            if i + 1 < n {
                r -= self.coupling[i] * w[i + 1];
            }
            r2 += r * r;
            b2 += (self.mass[i] * w[i]).powi(2);
        }
        let denom = if mu != 0.0 { mu.abs() * b2.sqrt() } else { 1.0 };
        r2.sqrt() / denom
    }
}

/// Solves a general tridiagonal system by Gaussian elimination with partial
/// pivoting (the LAPACK `gtsv` scheme). `sub[i]` is entry `(i+1, i)`,
/// `sup[i]` is entry `(i, i+1)`.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut dl = sub.to_vec();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut b = rhs.to_vec();

    for i in 0..n.saturating_sub(1) {
        if d[i].abs() >= dl[i].abs() {
            let piv = if d[i] == 0.0 { PIVOT_FLOOR } else { d[i] };
            let fact = dl[i] / piv;
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
            dl[i] = 0.0;
        } else {
            // interchange rows i and i+1; dl[i] then holds the fill-in
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let temp = d[i + 1];
            d[i + 1] = du[i] - fact * temp;
            if i + 2 < n {
                dl[i] = du[i + 1];
                du[i + 1] = -fact * dl[i];
            } else {
                dl[i] = 0.0;
            }
            du[i] = temp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
    }

    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        if i + 1 < n {
            s -= du[i] * x[i + 1];
        }
        if i + 2 < n {
            s -= dl[i] * x[i + 2];
        }
        let piv = if d[i] == 0.0 { PIVOT_FLOOR } else { d[i] };
        x[i] = s / piv;
    }
    x
}
