//! Axisymmetric collocation on the unit ball in R^5.
//!
//! Fields live on a tensor grid (rho_i, x_j) with rho in (0, 1] the radius
//! (Gauss--Radau--Jacobi nodes for the weight rho^4, so rho = 1 is a node
//! and rho = 0 is excluded) and x = cos(theta) in (-1, 1) the polar angle
//! about the boost axis (Gauss--Jacobi nodes for the weight 1 - x^2, the
//! axisymmetric surface measure of S^4). A field value array is an
//! N_r x N_theta matrix, radial index first.
//!
//! Cartesian derivatives of axisymmetric functions are organised through
//! the cylinder coordinates (z, r) = (rho x, rho sqrt(1-x^2)); full
//! derivative-tensor contractions up to third order reduce to closed
//! combinations of the (z, r) partials with multiplicities from the m = 4
//! transverse directions.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::quad::{
    bary_eval, bary_weights, diff_matrix, gauss_jacobi, gauss_radau_right, orthonormal_vandermonde,
};

/// Area of the transverse unit sphere S^3 (the orbit of the axisymmetry).
pub const TRANSVERSE_AREA: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::PI;

/// Grid parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub d: usize,
    pub n_r: usize,
    pub n_theta: usize,
    /// Boost axis (1-based Cartesian index); the grid realizes axisymmetry
    /// about this axis.
    pub axis: usize,
}

impl GridSpec {
    pub fn new(n_r: usize, n_theta: usize) -> Self {
        Self { d: 5, n_r, n_theta, axis: 5 }
    }
}

/// Scalar field samples on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField(pub DMatrix<f64>);

impl ScalarField {
    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// State pair (psi1, psi2) on a common grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldPair {
    pub first: ScalarField,
    pub second: ScalarField,
}

impl FieldPair {
    pub fn max_abs(&self) -> f64 {
        self.first.max_abs().max(self.second.max_abs())
    }
}

/// Realized grid: nodes, weights, differentiation and filter operators.
#[derive(Debug, Clone)]
pub struct Grid {
    pub spec: GridSpec,
    pub rho: Vec<f64>,
    pub w_rho: Vec<f64>,
    pub x: Vec<f64>,
    pub w_x: Vec<f64>,
    /// sin(theta) at the angular nodes.
    pub y: Vec<f64>,
    pub d_rho: DMatrix<f64>,
    pub d_x: DMatrix<f64>,
    filter_rho: DMatrix<f64>,
    filter_x: DMatrix<f64>,
    modal_rho: DMatrix<f64>,
    modal_x: DMatrix<f64>,
    bary_rho: Vec<f64>,
}

impl Grid {
    pub fn new(spec: GridSpec) -> Result<Self> {
        if spec.d != 5 {
            return Err(Error::UnsupportedDimension(spec.d));
        }
        if spec.n_r < 8 || spec.n_theta < 4 {
            return Err(Error::Config(format!(
                "grid too small: N_r = {} (>= 8), N_theta = {} (>= 4)",
                spec.n_r, spec.n_theta
            )));
        }
        let (t, wt) = gauss_radau_right(spec.n_r, 0.0, 4.0)?;
        let rho: Vec<f64> = t.iter().map(|&v| (v + 1.0) / 2.0).collect();
        let w_rho: Vec<f64> = wt.iter().map(|&v| v / 32.0).collect();
        let (x, w_x) = gauss_jacobi(spec.n_theta, 1.0, 1.0)?;
        let y: Vec<f64> = x.iter().map(|&v| (1.0 - v * v).sqrt()).collect();
        let d_rho = diff_matrix(&rho);
        let d_x = diff_matrix(&x);

        // Exponential modal filter: the collocation generator is not
        // discretely dissipative even though the continuum operator is, so
        // the top of the spectrum is damped each time step.
        // Written as I + P (sigma - 1) P^T W so that resolved fields pass
        // through at rounding level. The raw quadrature orthonormality defect
        // (~1e-13) gets amplified by the large top-mode values of the
        // weighted basis near rho = 0, so the basis is re-orthonormalized
        // through a Cholesky factor of its Gram matrix first.
        let filt = |p: &DMatrix<f64>, w: &[f64], n: usize| -> (DMatrix<f64>, DMatrix<f64>) {
            let mut wdiag = DMatrix::<f64>::zeros(n, n);
            for i in 0..n {
                wdiag[(i, i)] = w[i];
            }
            let gram = p.transpose() * &wdiag * p;
            let chol = gram
                .cholesky()
                .expect("modal Gram matrix must be positive definite");
            let rinv = chol
                .l()
                .transpose()
                .try_inverse()
                .expect("Cholesky factor is invertible");
            let p = p * rinv;
            // exact plateau on the resolved two thirds, exponential roll-off
            // on the top third (the spurious-mode habitat)
            let m0 = 2 * n / 3;
            let mut sig1 = DMatrix::<f64>::zeros(n, n);
            for m in m0..n {
                let s = (m - m0) as f64 / (n - 1 - m0) as f64;
                sig1[(m, m)] = (-36.0 * s.powi(8)).exp() - 1.0;
            }
            let modal = p.transpose() * &wdiag;
            (DMatrix::identity(n, n) + &p * sig1 * &modal, modal)
        };
        let p_r = orthonormal_vandermonde(&t, 0.0, 4.0, spec.n_r);
        let (filter_rho, modal_rho) = filt(&p_r, &wt, spec.n_r);
        let p_x = orthonormal_vandermonde(&x, 1.0, 1.0, spec.n_theta);
        let (filter_x, modal_x) = filt(&p_x, &w_x, spec.n_theta);
        let bary_rho = bary_weights(&rho);

        Ok(Self { spec, rho, w_rho, x, w_x, y, d_rho, d_x, filter_rho, filter_x, modal_rho, modal_x, bary_rho })
    }

    pub fn dof(&self) -> usize {
        self.spec.n_r * self.spec.n_theta
    }

    /// Sample a function of (rho, x = cos theta).
    pub fn field_from_fn(&self, mut f: impl FnMut(f64, f64) -> f64) -> ScalarField {
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            f(self.rho[i], self.x[j])
        }))
    }

    /// Sample a function of the cylinder coordinates (z, r).
    pub fn field_from_zr(&self, mut f: impl FnMut(f64, f64) -> f64) -> ScalarField {
        self.field_from_fn(|rho, x| f(rho * x, rho * (1.0 - x * x).sqrt()))
    }

    pub fn zeros(&self) -> ScalarField {
        ScalarField(DMatrix::zeros(self.spec.n_r, self.spec.n_theta))
    }

    pub fn zero_pair(&self) -> FieldPair {
        FieldPair { first: self.zeros(), second: self.zeros() }
    }

    /// The axis coordinate z = rho x as a field.
    pub fn z_field(&self) -> ScalarField {
        self.field_from_fn(|rho, x| rho * x)
    }

    // Derivative applications use sum_j D_ij (f_j - f_i): identical in exact
    // arithmetic (rows of D sum to zero) but without the large-entry
    // cancellation, which keeps polynomial derivatives exact to ~1e-14.
    fn dx_of(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        let (nr, nt) = (f.nrows(), self.spec.n_theta);
        let mut out = DMatrix::<f64>::zeros(nr, nt);
        for i in 0..nr {
            for j in 0..nt {
                let base = f[(i, j)];
                let mut acc = 0.0;
                for k in 0..nt {
                    if k != j {
                        acc += self.d_x[(j, k)] * (f[(i, k)] - base);
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    fn drho_of(&self, f: &DMatrix<f64>) -> DMatrix<f64> {
        let (nr, nt) = (self.spec.n_r, f.ncols());
        let mut out = DMatrix::<f64>::zeros(nr, nt);
        for j in 0..nt {
            for i in 0..nr {
                let base = f[(i, j)];
                let mut acc = 0.0;
                for k in 0..nr {
                    if k != i {
                        acc += self.d_rho[(i, k)] * (f[(k, j)] - base);
                    }
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Compensated radial differentiation (public for boundary operators).
    pub fn radial_derivative(&self, f: &ScalarField) -> ScalarField {
        ScalarField(self.drho_of(&f.0))
    }

    /// Axis-direction Cartesian derivative d_z.
    pub fn dz(&self, f: &ScalarField) -> ScalarField {
        let fr = self.drho_of(&f.0);
        let fx = self.dx_of(&f.0);
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            self.x[j] * fr[(i, j)] + (1.0 - self.x[j] * self.x[j]) / self.rho[i] * fx[(i, j)]
        }))
    }

    /// Transverse radial derivative d_r (meridian section), computed as
    /// 2 r d_s f so the small-rho chain-rule amplification cancels.
    pub fn dr(&self, f: &ScalarField) -> ScalarField {
        let ds = self.ds(f);
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            2.0 * self.rho[i] * self.y[j] * ds.0[(i, j)]
        }))
    }

    /// Cartesian derivative d_j on the meridian half-plane through e_j and
    /// the axis. For j = axis this is the axisymmetric field d_z f; for
    /// transverse j it is d_r f on that plane.
    pub fn cartesian_derivative(&self, f: &ScalarField, j: usize) -> ScalarField {
        if j == self.spec.axis {
            self.dz(f)
        } else {
            self.dr(f)
        }
    }

    /// Euler operator xi . grad = rho d_rho.
    pub fn euler(&self, f: &ScalarField) -> ScalarField {
        let fr = self.drho_of(&f.0);
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            self.rho[i] * fr[(i, j)]
        }))
    }

    /// Full Laplacian on R^5 of an axisymmetric field.
    pub fn laplacian(&self, f: &ScalarField) -> ScalarField {
        let fr = self.drho_of(&f.0);
        let frr = self.drho_of(&fr);
        let fx = self.dx_of(&f.0);
        let fxx = self.dx_of(&fx);
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            let lap_s = (1.0 - self.x[j] * self.x[j]) * fxx[(i, j)] - 4.0 * self.x[j] * fx[(i, j)];
            frr[(i, j)] + 4.0 / self.rho[i] * fr[(i, j)] + lap_s / (self.rho[i] * self.rho[i])
        }))
    }

    /// Quadrature over the unit ball.
    pub fn ball_integral(&self, f: &ScalarField) -> f64 {
        let mut s = 0.0;
        for i in 0..self.spec.n_r {
            for j in 0..self.spec.n_theta {
                s += self.w_rho[i] * self.w_x[j] * f.0[(i, j)];
            }
        }
        TRANSVERSE_AREA * s
    }

    /// Quadrature over the unit sphere of a boundary-row vector.
    pub fn sphere_integral(&self, boundary: &[f64]) -> f64 {
        TRANSVERSE_AREA
            * boundary
                .iter()
                .zip(&self.w_x)
                .map(|(v, w)| v * w)
                .sum::<f64>()
    }

    /// Index of the rho = 1 row.
    pub fn boundary_row(&self) -> usize {
        self.spec.n_r - 1
    }

    pub fn boundary_values(&self, f: &ScalarField) -> Vec<f64> {
        let i = self.boundary_row();
        (0..self.spec.n_theta).map(|j| f.0[(i, j)]).collect()
    }

    /// Spherical Laplacian on S^4 of a boundary function of x = cos theta.
    pub fn sphere_laplacian_boundary(&self, g: &[f64]) -> Vec<f64> {
        let n = self.spec.n_theta;
        let gv = DMatrix::from_fn(1, n, |_, j| g[j]);
        let g1 = self.dx_of(&gv);
        let g2 = self.dx_of(&g1);
        (0..n)
            .map(|j| (1.0 - self.x[j] * self.x[j]) * g2[(0, j)] - 4.0 * self.x[j] * g1[(0, j)])
            .collect()
    }

    /// Derivative with respect to s = r^2 at fixed z. Smooth axisymmetric
    /// fields are smooth functions H(z, s), and both d_z and d_s stay inside
    /// that class, so iterating them is exact on polynomials (unlike d_r,
    /// whose result carries a sqrt(1-x^2) factor).
    pub fn ds(&self, f: &ScalarField) -> ScalarField {
        let fr = self.drho_of(&f.0);
        let fx = self.dx_of(&f.0);
        ScalarField(DMatrix::from_fn(self.spec.n_r, self.spec.n_theta, |i, j| {
            (fr[(i, j)] - self.x[j] / self.rho[i] * fx[(i, j)]) / (2.0 * self.rho[i])
        }))
    }

    /// All (z, s) partial derivatives of a field up to third order.
    pub fn partials(&self, f: &ScalarField) -> Partials {
        let hz = self.dz(f);
        let hs = self.ds(f);
        let hzz = self.dz(&hz);
        let hzs = self.ds(&hz);
        let hss = self.ds(&hs);
        let hzzz = self.dz(&hzz);
        let hzzs = self.ds(&hzz);
        let hzss = self.ds(&hzs);
        let hsss = self.ds(&hss);
        Partials { f: f.clone(), hz, hs, hzz, hzs, hss, hzzz, hzzs, hzss, hsss }
    }

    /// Pointwise contraction sum_{i_1..i_k} d^k f . d^k g over all Cartesian
    /// index tuples, for axisymmetric f, g (transverse multiplicity m = 4),
    /// assembled from the (z, s)-derivatives:
    ///   d_r = 2r d_s on H(z, s), so e.g. f_r g_r = 4 s H_s K_s and
    ///   f_rr = 2 H_s + 4 s H_ss.
    pub fn contraction(&self, k: usize, pf: &Partials, pg: &Partials) -> ScalarField {
        let n_r = self.spec.n_r;
        let n_t = self.spec.n_theta;
        let m = 4.0;
        let val = |i: usize, j: usize| -> f64 {
            let s = (self.rho[i] * self.y[j]).powi(2);
            match k {
                0 => pf.f.0[(i, j)] * pg.f.0[(i, j)],
                1 => {
                    pf.hz.0[(i, j)] * pg.hz.0[(i, j)]
                        + 4.0 * s * pf.hs.0[(i, j)] * pg.hs.0[(i, j)]
                }
                2 => {
                    let frr_f = 2.0 * pf.hs.0[(i, j)] + 4.0 * s * pf.hss.0[(i, j)];
                    let frr_g = 2.0 * pg.hs.0[(i, j)] + 4.0 * s * pg.hss.0[(i, j)];
                    pf.hzz.0[(i, j)] * pg.hzz.0[(i, j)]
                        + 8.0 * s * pf.hzs.0[(i, j)] * pg.hzs.0[(i, j)]
                        + frr_f * frr_g
                        + (m - 1.0) * 4.0 * pf.hs.0[(i, j)] * pg.hs.0[(i, j)]
                }
                3 => {
                    let fzrr_f = 2.0 * pf.hzs.0[(i, j)] + 4.0 * s * pf.hzss.0[(i, j)];
                    let fzrr_g = 2.0 * pg.hzs.0[(i, j)] + 4.0 * s * pg.hzss.0[(i, j)];
                    let frrr_f = 12.0 * pf.hss.0[(i, j)] + 8.0 * s * pf.hsss.0[(i, j)];
                    let frrr_g = 12.0 * pg.hss.0[(i, j)] + 8.0 * s * pg.hsss.0[(i, j)];
                    pf.hzzz.0[(i, j)] * pg.hzzz.0[(i, j)]
                        + 12.0 * s * pf.hzzs.0[(i, j)] * pg.hzzs.0[(i, j)]
                        + 3.0 * fzrr_f * fzrr_g
                        + 12.0 * (m - 1.0) * pf.hzs.0[(i, j)] * pg.hzs.0[(i, j)]
                        + s * frrr_f * frrr_g
                        + 48.0 * (m - 1.0) * s * pf.hss.0[(i, j)] * pg.hss.0[(i, j)]
                }
                _ => panic!("contraction order {k} not supported"),
            }
        };
        ScalarField(DMatrix::from_fn(n_r, n_t, val))
    }

    /// Homogeneous Sobolev seminorm |f|_{H^k(B^5)} via the tensor-contraction
    /// convention (sum over all index tuples).
    pub fn sobolev_seminorm(&self, f: &ScalarField, k: usize) -> Result<f64> {
        if k > 3 {
            return Err(Error::Config(format!("seminorm order {k} exceeds (d+1)/2 = 3")));
        }
        let p = self.partials(f);
        Ok(self.ball_integral(&self.contraction(k, &p, &p)).max(0.0).sqrt())
    }

    /// Apply the exponential modal filter to a field.
    pub fn filter(&self, f: &ScalarField) -> ScalarField {
        ScalarField(&self.filter_rho * &f.0 * self.filter_x.transpose())
    }

    pub fn filter_pair(&self, u: &FieldPair) -> FieldPair {
        FieldPair { first: self.filter(&u.first), second: self.filter(&u.second) }
    }

    /// Relative size of the trailing modal coefficients; exceeds the
    /// threshold when the grid under-resolves the field.
    pub fn resolution_tail(&self, f: &ScalarField) -> f64 {
        let c = &self.modal_rho * &f.0 * self.modal_x.transpose();
        let (n_r, n_t) = (self.spec.n_r, self.spec.n_theta);
        let mut max_all = 0.0f64;
        let mut max_tail = 0.0f64;
        for i in 0..n_r {
            for j in 0..n_t {
                let v = c[(i, j)].abs();
                max_all = max_all.max(v);
                if i >= n_r - 2 || j >= n_t - 1 {
                    max_tail = max_tail.max(v);
                }
            }
        }
        if max_all == 0.0 {
            0.0
        } else {
            max_tail / max_all
        }
    }

    /// Whether a field's spectral tail exceeds the resolution threshold.
    pub fn resolution_warning(&self, f: &ScalarField) -> bool {
        self.resolution_tail(f) > 1e-6
    }

    /// Interpolate a field to rho = 0 (value must be x-independent for a
    /// smooth axisymmetric field; the angular average is returned).
    pub fn value_at_origin(&self, f: &ScalarField) -> f64 {
        let n_t = self.spec.n_theta;
        let mut s = 0.0;
        for j in 0..n_t {
            let col: Vec<f64> = (0..self.spec.n_r).map(|i| f.0[(i, j)]).collect();
            s += bary_eval(&self.rho, &self.bary_rho, &col, 0.0);
        }
        s / n_t as f64
    }

    /// Weighted L^2(B^5)^2 norm of a pair; the natural residual norm on the
    /// grid.
    pub fn l2_pair(&self, u: &FieldPair) -> f64 {
        let mut s = 0.0;
        for i in 0..self.spec.n_r {
            for j in 0..self.spec.n_theta {
                let a = u.first.0[(i, j)];
                let b = u.second.0[(i, j)];
                s += self.w_rho[i] * self.w_x[j] * (a * a + b * b);
            }
        }
        (TRANSVERSE_AREA * s).sqrt()
    }
}

/// Mixed (z, s = r^2) partial derivatives of a field up to order three.
#[derive(Debug, Clone)]
pub struct Partials {
    pub f: ScalarField,
    pub hz: ScalarField,
    pub hs: ScalarField,
    pub hzz: ScalarField,
    pub hzs: ScalarField,
    pub hss: ScalarField,
    pub hzzz: ScalarField,
    pub hzzs: ScalarField,
    pub hzss: ScalarField,
    pub hsss: ScalarField,
}

// ---- field arithmetic ----

pub fn axpy(a: f64, x: &FieldPair, y: &FieldPair) -> FieldPair {
    FieldPair {
        first: ScalarField(&y.first.0 + &x.first.0 * a),
        second: ScalarField(&y.second.0 + &x.second.0 * a),
    }
}

pub fn pair_scale(a: f64, x: &FieldPair) -> FieldPair {
    FieldPair { first: ScalarField(&x.first.0 * a), second: ScalarField(&x.second.0 * a) }
}

pub fn pair_sub(x: &FieldPair, y: &FieldPair) -> FieldPair {
    FieldPair {
        first: ScalarField(&x.first.0 - &y.first.0),
        second: ScalarField(&x.second.0 - &y.second.0),
    }
}

/// Flatten a pair into a single coefficient vector (first slot then second).
pub fn pair_to_vec(u: &FieldPair) -> Vec<f64> {
    let mut v: Vec<f64> = u.first.0.iter().copied().collect();
    v.extend(u.second.0.iter().copied());
    v
}

pub fn vec_to_pair(grid: &Grid, v: &[f64]) -> FieldPair {
    let n = grid.dof();
    FieldPair {
        first: ScalarField(DMatrix::from_column_slice(grid.spec.n_r, grid.spec.n_theta, &v[..n])),
        second: ScalarField(DMatrix::from_column_slice(grid.spec.n_r, grid.spec.n_theta, &v[n..])),
    }
}

// ---- snapshot serialization (CSV) ----

/// Write a field-pair snapshot: header line `d,n_r,n_theta,tau`, then the
/// first slot row-major (one radial row per line), then the second slot.
pub fn write_snapshot(w: &mut impl std::io::Write, grid: &Grid, u: &FieldPair, tau: f64) -> Result<()> {
    writeln!(w, "{},{},{},{}", grid.spec.d, grid.spec.n_r, grid.spec.n_theta, tau)?;
    for slot in [&u.first, &u.second] {
        for i in 0..grid.spec.n_r {
            let row: Vec<String> =
                (0..grid.spec.n_theta).map(|j| format!("{:.17e}", slot.0[(i, j)])).collect();
            writeln!(w, "{}", row.join(","))?;
        }
    }
    Ok(())
}

/// Read a snapshot written by [`write_snapshot`]; returns (spec, tau, pair
/// values as two row-major matrices).
pub fn read_snapshot(r: &mut impl std::io::BufRead) -> Result<(GridSpec, f64, DMatrix<f64>, DMatrix<f64>)> {
    let mut header = String::new();
    r.read_line(&mut header)?;
    let parts: Vec<&str> = header.trim().split(',').collect();
    if parts.len() != 4 {
        return Err(Error::Config("snapshot header must be d,n_r,n_theta,tau".into()));
    }
    let d: usize = parts[0].parse().map_err(|_| Error::Config("bad d".into()))?;
    let n_r: usize = parts[1].parse().map_err(|_| Error::Config("bad n_r".into()))?;
    let n_t: usize = parts[2].parse().map_err(|_| Error::Config("bad n_theta".into()))?;
    let tau: f64 = parts[3].parse().map_err(|_| Error::Config("bad tau".into()))?;
    let mut read_slot = || -> Result<DMatrix<f64>> {
        let mut m = DMatrix::<f64>::zeros(n_r, n_t);
        for i in 0..n_r {
            let mut line = String::new();
            r.read_line(&mut line)?;
            for (j, tok) in line.trim().split(',').enumerate() {
                m[(i, j)] = tok.parse().map_err(|_| Error::Config("bad value".into()))?;
            }
        }
        Ok(m)
    };
    let first = read_slot()?;
    let second = read_slot()?;
    Ok((GridSpec { d, n_r, n_theta: n_t, axis: d }, tau, first, second))
}
