//! The similarity-frame operators: the free generator, the boost potential,
//! the linearized generator, the remainder nonlinearity, dense matrix
//! assembly for spectra, and linear-flow decay probes.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::SQRT2;
use crate::grid::{pair_to_vec, vec_to_pair, FieldPair, Grid, ScalarField};
use crate::quad::{diff_matrix, gauss_radau_right};

/// V_alpha(xi) = 6 / (A_0 - A_j xi^j)^2 for an axis boost of rapidity a.
pub fn potential_field(grid: &Grid, a: f64) -> ScalarField {
    let (a0, a5) = (a.cosh(), a.sinh());
    grid.field_from_zr(|z, _| 6.0 / (a0 - a5 * z).powi(2))
}

/// The static profile pair Psi_alpha on the grid (axis boost).
pub fn profile_pair(grid: &Grid, a: f64) -> FieldPair {
    let (a0, a5) = (a.cosh(), a.sinh());
    FieldPair {
        first: grid.field_from_zr(|z, _| SQRT2 / (a0 - a5 * z)),
        second: grid.field_from_zr(|z, _| SQRT2 * a0 / (a0 - a5 * z).powi(2)),
    }
}

/// Free operator L~ u = (-xi.grad u1 - u1 + u2, Lap u1 - xi.grad u2 - 2 u2).
pub fn apply_free(grid: &Grid, u: &FieldPair) -> FieldPair {
    let e1 = grid.euler(&u.first);
    let e2 = grid.euler(&u.second);
    let lap1 = grid.laplacian(&u.first);
    FieldPair {
        first: ScalarField(-&e1.0 - &u.first.0 + &u.second.0),
        second: ScalarField(&lap1.0 - &e2.0 - &u.second.0 * 2.0),
    }
}

/// Linearized operator L_alpha u = L~ u + (0, V_alpha u1).
pub fn apply_linearized(grid: &Grid, u: &FieldPair, potential: &ScalarField) -> FieldPair {
    let mut out = apply_free(grid, u);
    out.second = ScalarField(&out.second.0 + potential.0.component_mul(&u.first.0));
    out
}

/// Remainder nonlinearity N_alpha(u) = (0, 3 psi_alpha u1^2 + u1^3),
/// evaluated pointwise at the collocation nodes.
pub fn apply_nonlinear(grid: &Grid, u: &FieldPair, a: f64) -> FieldPair {
    let (a0, a5) = (a.cosh(), a.sinh());
    let psi = grid.field_from_zr(|z, _| SQRT2 / (a0 - a5 * z));
    let n = u.first.0.zip_map(&psi.0, |v, p| 3.0 * p * v * v + v * v * v);
    FieldPair { first: grid.zeros(), second: ScalarField(n) }
}

/// Full right-hand side of the flow: L~ Psi + (0, Psi_1^3).
pub fn apply_rhs_full(grid: &Grid, u: &FieldPair) -> FieldPair {
    let mut out = apply_free(grid, u);
    out.second = ScalarField(&out.second.0 + u.first.0.map(|v| v * v * v));
    out
}

/// Which operator a dense matrix represents.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Which {
    Free,
    /// Linearized about the axis-boost profile of the given rapidity.
    Linearized(f64),
}

/// Dense matrix acting on stacked field-pair degrees of freedom.
#[derive(Debug, Clone)]
pub struct GeneratorMatrix {
    pub mat: DMatrix<f64>,
    pub which: Which,
    pub n_r: usize,
    pub n_theta: usize,
}

/// Column-by-column assembly: M vec(u) = vec(apply(u)) exactly.
pub fn assemble_generator(grid: &Grid, which: Which) -> Result<GeneratorMatrix> {
    let n = 2 * grid.dof();
    if n > 20_000 {
        return Err(Error::Config(format!("dense assembly infeasible at {n} unknowns")));
    }
    let potential = match which {
        Which::Free => None,
        Which::Linearized(a) => Some(potential_field(grid, a)),
    };
    let mut mat = DMatrix::<f64>::zeros(n, n);
    let mut basis = vec![0.0; n];
    for k in 0..n {
        basis[k] = 1.0;
        let u = vec_to_pair(grid, &basis);
        let out = match &potential {
            None => apply_free(grid, &u),
            Some(v) => apply_linearized(grid, &u, v),
        };
        let col = pair_to_vec(&out);
        for (i, val) in col.iter().enumerate() {
            mat[(i, k)] = *val;
        }
        basis[k] = 0.0;
    }
    Ok(GeneratorMatrix { mat, which, n_r: grid.spec.n_r, n_theta: grid.spec.n_theta })
}

/// Radial generator in the spherical-harmonic sector l for alpha = 0, acting
/// on (g1, g2) with u_i = rho^l g_i; the substitution absorbs the
/// centrifugal term so no 1/rho^2 coefficient remains.
pub fn assemble_radial_sector(n_r: usize, l: usize) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let (t, _) = gauss_radau_right(n_r, 0.0, 4.0)?;
    let rho: Vec<f64> = t.iter().map(|&v| (v + 1.0) / 2.0).collect();
    let d = diff_matrix(&rho);
    let d2 = &d * &d;
    let lf = l as f64;
    let n = n_r;
    let mut m = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            // A11 = -rho D - (l+1) I ; A12 = I
            m[(i, j)] = -rho[i] * d[(i, j)] - if i == j { lf + 1.0 } else { 0.0 };
            if i == j {
                m[(i, n + j)] = 1.0;
            }
            // A21 = D^2 + (2l+4)/rho D + 6 I ; A22 = -rho D - (l+2) I
            m[(n + i, j)] = d2[(i, j)] + (2.0 * lf + 4.0) / rho[i] * d[(i, j)]
                + if i == j { 6.0 } else { 0.0 };
            m[(n + i, n + j)] = -rho[i] * d[(i, j)] - if i == j { lf + 2.0 } else { 0.0 };
        }
    }
    Ok((rho, m))
}

/// All eigenvalues of a dense real matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|z| Complex64::new(z.re, z.im))
        .collect()
}

/// Eigenvalues of the coarse matrix that persist (within `tol`) in the fine
/// matrix's spectrum: the refinement-converged subset.
pub fn converged_eigenvalues(
    coarse: &[Complex64],
    fine: &[Complex64],
    tol: f64,
) -> Vec<Complex64> {
    coarse
        .iter()
        .filter(|z| fine.iter().any(|w| (*z - w).norm() < tol))
        .copied()
        .collect()
}

/// Left eigenvector of `m` for the (known) eigenvalue `shift`, by inverse
/// iteration on the transpose.
pub fn left_eigenvector(m: &DMatrix<f64>, shift: f64) -> Result<DVector<f64>> {
    inverse_iteration(&m.transpose(), shift)
}

/// Right eigenvector by inverse iteration.
pub fn right_eigenvector(m: &DMatrix<f64>, shift: f64) -> Result<DVector<f64>> {
    inverse_iteration(m, shift)
}

fn inverse_iteration(m: &DMatrix<f64>, shift: f64) -> Result<DVector<f64>> {
    let n = m.nrows();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] -= shift;
    }
    let lu = a.lu();
    let mut v = DVector::<f64>::from_fn(n, |i, _| ((i * 2654435761 + 1) % 1000) as f64 / 1000.0 - 0.5);
    v /= v.norm();
    for _ in 0..8 {
        let mut w = lu
            .solve(&v)
            .ok_or_else(|| Error::Convergence("inverse iteration solve failed".into()))?;
        let nw = w.norm();
        if !nw.is_finite() || nw == 0.0 {
            return Err(Error::Convergence("inverse iteration produced invalid vector".into()));
        }
        w /= nw;
        v = w;
    }
    Ok(v)
}

/// One entry of a computed spectrum.
#[derive(Debug, Clone, Copy)]
pub struct SpectrumPoint {
    pub lambda: Complex64,
    /// Harmonic sector: the assembly sector for radial spectra, the
    /// dominant-energy sector of the eigenvector for classified 2D
    /// eigenvalues, -1 when unclassified.
    pub l: i64,
    pub converged: bool,
}

/// Spectrum of the radial sector-l generator with refinement filtering
/// (n_r versus 3 n_r / 2).
pub fn radial_sector_spectrum(n_r: usize, l: usize, tol: f64) -> Result<Vec<SpectrumPoint>> {
    let (_, coarse) = assemble_radial_sector(n_r, l)?;
    let (_, fine) = assemble_radial_sector(3 * n_r / 2, l)?;
    let ec = eigenvalues(&coarse);
    let ef = eigenvalues(&fine);
    Ok(ec
        .iter()
        .map(|&z| SpectrumPoint {
            lambda: z,
            l: l as i64,
            converged: ef.iter().any(|w| (z - w).norm() < tol),
        })
        .collect())
}

/// Dominant harmonic sector of a stacked eigenvector: the l maximizing the
/// radially-integrated modal energy of the first slot.
pub fn classify_sector(grid: &Grid, v: &DVector<f64>) -> usize {
    let u = vec_to_pair(grid, v.as_slice());
    let n_t = grid.spec.n_theta;
    // modal透 coefficients along x per radial node via the orthonormal basis
    let p = crate::quad::orthonormal_vandermonde(&grid.x, 1.0, 1.0, n_t);
    let mut energy = vec![0.0f64; n_t];
    for i in 0..grid.spec.n_r {
        for l in 0..n_t {
            let mut c = 0.0;
            for j in 0..n_t {
                c += grid.w_x[j] * p[(j, l)] * u.first.0[(i, j)];
            }
            energy[l] += grid.w_rho[i] * c * c;
        }
    }
    energy
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(l, _)| l)
        .unwrap_or(0)
}

/// Spectrum of the full 2D generator at the given rapidity with radial
/// refinement filtering; converged eigenvalues with Re > `classify_above`
/// get a sector label from their (inverse-iteration) eigenvector.
pub fn full_spectrum(
    n_r: usize,
    n_theta: usize,
    a: f64,
    tol: f64,
    classify_above: f64,
) -> Result<Vec<SpectrumPoint>> {
    let g1 = Grid::new(crate::grid::GridSpec::new(n_r, n_theta))?;
    let g2 = Grid::new(crate::grid::GridSpec::new(3 * n_r / 2, n_theta))?;
    let m1 = assemble_generator(&g1, Which::Linearized(a))?;
    let m2 = assemble_generator(&g2, Which::Linearized(a))?;
    let e1 = eigenvalues(&m1.mat);
    let e2 = eigenvalues(&m2.mat);
    let mut out = Vec::with_capacity(e1.len());
    for &z in &e1 {
        let converged = e2.iter().any(|w| (z - w).norm() < tol);
        let mut l = -1i64;
        if converged && z.re > classify_above && z.im.abs() < tol {
            if let Ok(v) = right_eigenvector(&m1.mat, z.re) {
                l = classify_sector(&g1, &v) as i64;
            }
        }
        out.push(SpectrumPoint { lambda: z, l, converged });
    }
    Ok(out)
}

/// Report from a linear decay probe.
#[derive(Debug, Clone)]
pub struct DecayReport {
    pub rate: f64,
    /// RMS deviation of log-norm from the affine fit.
    pub quality: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Integrate u' = M u with filtered RK4 from the given initial pair (after
/// deflating the supplied (left, right) eigenpair directions), measure the
/// norm through `norm`, and fit an exponential rate over the window.
#[allow(clippy::too_many_arguments)]
pub fn semigroup_decay_probe(
    grid: &Grid,
    m: &GeneratorMatrix,
    initial: &FieldPair,
    deflate: &[(DVector<f64>, FieldPair)],
    dt: f64,
    tau_max: f64,
    window: (f64, f64),
    norm: &dyn Fn(&FieldPair) -> f64,
) -> Result<DecayReport> {
    let mut v = DVector::<f64>::from_vec(pair_to_vec(initial));
    for (left, right) in deflate {
        let rv = DVector::<f64>::from_vec(pair_to_vec(right));
        let c = left.dot(&v) / left.dot(&rv);
        v -= rv * c;
    }
    let mut tau = 0.0;
    let mut samples = Vec::new();
    let mut next_out = 0.0;
    while tau < tau_max {
        if tau >= next_out - 1e-12 {
            let u = vec_to_pair(grid, v.as_slice());
            samples.push((tau, norm(&u)));
            next_out += 0.05;
        }
        let k1 = &m.mat * &v;
        let k2 = &m.mat * &(&v + &k1 * (dt / 2.0));
        let k3 = &m.mat * &(&v + &k2 * (dt / 2.0));
        let k4 = &m.mat * &(&v + &k3 * dt);
        v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
        let u = grid.filter_pair(&vec_to_pair(grid, v.as_slice()));
        v = DVector::from_vec(pair_to_vec(&u));
        tau += dt;
    }
    let (rate, quality) = fit_log_slope(&samples, window)?;
    Ok(DecayReport { rate, quality, samples })
}

/// Affine least-squares fit of log(value) over a tau window.
pub fn fit_log_slope(samples: &[(f64, f64)], window: (f64, f64)) -> Result<(f64, f64)> {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(t, v)| *t >= window.0 && *t <= window.1 && *v > 0.0)
        .map(|&(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < 20 {
        return Err(Error::NonConvergedFit(format!(
            "only {} samples in the fit window",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let icpt = (sy - slope * sx) / n;
    let rms = (pts
        .iter()
        .map(|p| (p.1 - slope * p.0 - icpt).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok((slope, rms))
}

/// Matrix-free estimate of the spectral radius of the linearized generator,
/// by power iteration on operator applications.
pub fn spectral_radius_estimate(grid: &Grid, a: f64) -> f64 {
    let potential = potential_field(grid, a);
    let mut v = grid.field_from_fn(|rho, x| ((rho * 37.0).sin() + (x * 23.0).cos()) * 0.5);
    let mut u = FieldPair { first: v.clone(), second: v.clone() };
    let mut est = 0.0f64;
    let mut nrm = grid.l2_pair(&u);
    for _ in 0..120 {
        u = crate::grid::pair_scale(1.0 / nrm, &u);
        u = apply_linearized(grid, &u, &potential);
        let nn = grid.l2_pair(&u);
        est = est.max(nn);
        nrm = nn;
        v = u.first.clone();
        let _ = &v;
    }
    est
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{pair_sub, GridSpec};
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn grid() -> Grid {
        Grid::new(GridSpec::new(24, 10)).unwrap()
    }

    fn constant_pair(g: &Grid, c1: f64, c2: f64) -> FieldPair {
        FieldPair { first: g.field_from_fn(|_, _| c1), second: g.field_from_fn(|_, _| c2) }
    }

    #[test]
    fn free_operator_hand_values() {
        let g = grid();
        // (1, 0) -> (-1, 0); (0, 1) -> (1, -2)
        let out = apply_free(&g, &constant_pair(&g, 1.0, 0.0));
        assert!((out.first.0.add_scalar(1.0)).abs().max() < 1e-11);
        assert!(out.second.0.abs().max() < 1e-10);
        let out = apply_free(&g, &constant_pair(&g, 0.0, 1.0));
        assert!((out.first.0.add_scalar(-1.0)).abs().max() < 1e-11);
        assert!((out.second.0.add_scalar(2.0)).abs().max() < 1e-10);
        // (xi^5, 0) -> (-2 xi^5, 0)
        let z = g.z_field();
        let u = FieldPair { first: z.clone(), second: g.zeros() };
        let out = apply_free(&g, &u);
        let want = ScalarField(&z.0 * -2.0);
        assert!((&out.first.0 - &want.0).abs().max() < 1e-10);
        assert!(out.second.0.abs().max() < 1e-8);
    }

    #[test]
    fn potential_examples() {
        let g = grid();
        let v0 = potential_field(&g, 0.0);
        assert!((v0.0.add_scalar(-6.0)).abs().max() < 1e-14);
        // V_{0.1 e5} at xi = e5: 6 e^{0.2}
        let v = potential_field(&g, 0.1);
        let b = g.boundary_row();
        // node with largest x approximates the axis point xi = e5; evaluate
        // by the closed form instead at z = rho x
        let (a0, a5) = (0.1f64.cosh(), 0.1f64.sinh());
        for j in 0..g.spec.n_theta {
            let z = g.rho[b] * g.x[j];
            assert_relative_eq!(v.0[(b, j)], 6.0 / (a0 - a5 * z).powi(2), epsilon = 1e-13);
        }
        assert_relative_eq!(
            6.0 / (a0 - a5).powi(2),
            6.0 * (0.2f64).exp(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn linearized_eigenpairs_on_grid() {
        let g = grid();
        let v0 = potential_field(&g, 0.0);
        // g_0 = (1, 2) with eigenvalue 1
        let gp = crate::spectral::eigenfunction_g(&g, 0.0);
        let out = apply_linearized(&g, &gp, &v0);
        let resid = pair_sub(&out, &gp);
        assert!(g.l2_pair(&resid) < 1e-10, "g_0 residual {}", g.l2_pair(&resid));
        // h_{0,5} = sqrt2 (xi^5, 2 xi^5) in the kernel
        let hp = crate::spectral::eigenfunction_h_axis(&g, 0.0);
        let out = apply_linearized(&g, &hp, &v0);
        assert!(g.l2_pair(&out) < 1e-10, "h_0 residual {}", g.l2_pair(&out));
    }

    #[test]
    fn nonlinear_remainder() {
        let g = grid();
        // u = 0 -> 0
        let out = apply_nonlinear(&g, &g.zero_pair(), 0.0);
        assert_eq!(out.second.0.abs().max(), 0.0);
        // alpha = 0, u = (c, 0): (0, 3 sqrt2 c^2 + c^3)
        let c = 0.37;
        let out = apply_nonlinear(&g, &constant_pair(&g, c, 0.0), 0.0);
        let want = 3.0 * SQRT2 * c * c + c * c * c;
        assert!((out.second.0.add_scalar(-want)).abs().max() < 1e-14);
        assert_eq!(out.first.0.abs().max(), 0.0);
        // quadratic leading order: ||N(eps u)||/eps^2 bounded as eps -> 0
        let u = FieldPair {
            first: g.field_from_zr(|z, r| z + 0.5 * r * r),
            second: g.zeros(),
        };
        let mut prev = f64::INFINITY;
        for k in 1..=4 {
            let eps = 10f64.powi(-k);
            let n = apply_nonlinear(&g, &crate::grid::pair_scale(eps, &u), 0.0);
            let ratio = g.l2_pair(&n) / (eps * eps);
            assert!(ratio < 2.0 * prev.max(1.0), "quadratic scaling violated");
            prev = ratio;
        }
    }

    #[test]
    fn nonlinear_lipschitz_constant_bounded() {
        let g = grid();
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let mut cmax = 0.0f64;
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                let a: f64 = rng.random_range(-1.0..1.0);
                let b: f64 = rng.random_range(-1.0..1.0);
                let c: f64 = rng.random_range(-1.0..1.0);
                let u = FieldPair {
                    first: g.field_from_zr(move |z, r| a * z + b * r * r + c * z * z),
                    second: g.zeros(),
                };
                let s = 0.1 / g.l2_pair(&u);
                crate::grid::pair_scale(s, &u)
            };
            let u = mk(&mut rng);
            let v = mk(&mut rng);
            let nu = apply_nonlinear(&g, &u, 0.0);
            let nv = apply_nonlinear(&g, &v, 0.0);
            let num = g.l2_pair(&pair_sub(&nu, &nv));
            let den = (g.l2_pair(&u) + g.l2_pair(&v)) * g.l2_pair(&pair_sub(&u, &v));
            if den > 1e-14 {
                cmax = cmax.max(num / den);
            }
        }
        assert!(cmax.is_finite() && cmax > 0.0 && cmax < 50.0, "lipschitz C = {cmax}");
    }

    #[test]
    fn potential_regularity_in_alpha() {
        // sup |d^j V_alpha| finite and continuous on |alpha| <= 0.2
        let g = grid();
        let sup_derivs = |a: f64| -> [f64; 3] {
            let v = potential_field(&g, a);
            let p = g.partials(&v);
            let c1 = g.contraction(1, &p, &p);
            let c2 = g.contraction(2, &p, &p);
            [
                v.max_abs(),
                c1.0.iter().fold(0.0f64, |m, x| m.max(x.max(0.0))).sqrt(),
                c2.0.iter().fold(0.0f64, |m, x| m.max(x.max(0.0))).sqrt(),
            ]
        };
        let mut prev: Option<[f64; 3]> = None;
        let mut a = -0.2;
        while a <= 0.2 + 1e-12 {
            let s = sup_derivs(a);
            for v in s {
                assert!(v.is_finite() && v < 100.0);
            }
            if let Some(p) = prev {
                for k in 0..3 {
                    // Lipschitz in alpha on the admissible ball
                    assert!((s[k] - p[k]).abs() < 60.0 * 0.05, "V not continuous in alpha");
                }
            }
            prev = Some(s);
            a += 0.05;
        }
    }

    #[test]
    fn generator_matrix_matches_operator() {
        let g = Grid::new(GridSpec::new(12, 6)).unwrap();
        let m = assemble_generator(&g, Which::Linearized(0.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v0 = potential_field(&g, 0.0);
        for _ in 0..5 {
            let u = FieldPair {
                first: g.field_from_fn(|_, _| rng.random_range(-1.0..1.0)),
                second: g.field_from_fn(|_, _| rng.random_range(-1.0..1.0)),
            };
            let direct = pair_to_vec(&apply_linearized(&g, &u, &v0));
            let via = &m.mat * DVector::from_vec(pair_to_vec(&u));
            for (a, b) in direct.iter().zip(via.iter()) {
                assert!((a - b).abs() < 1e-12 * a.abs().max(1.0));
            }
        }
        // eigen-directions through the matrix
        let gp = pair_to_vec(&crate::spectral::eigenfunction_g(&g, 0.0));
        let gv = DVector::from_vec(gp.clone());
        let r = &m.mat * &gv - &gv;
        assert!(r.amax() < 1e-9, "matrix eigenvector residual {}", r.amax());
        let hp = DVector::from_vec(pair_to_vec(&crate::spectral::eigenfunction_h_axis(&g, 0.0)));
        assert!((&m.mat * &hp).amax() < 1e-9);
        // linearity on random pairs (relative to the result scale)
        let u = DVector::from_fn(2 * g.dof(), |i, _| ((i % 7) as f64 - 3.0) / 3.0);
        let v = DVector::from_fn(2 * g.dof(), |i, _| ((i % 5) as f64 - 2.0) / 2.0);
        let lhs = &m.mat * (&u * 2.0 + &v * 3.0);
        let rhs = (&m.mat * &u) * 2.0 + (&m.mat * &v) * 3.0;
        let scale = lhs.amax().max(1.0);
        assert!((lhs - rhs).amax() < 1e-12 * scale);
    }

    #[test]
    fn dense_assembly_rejects_huge_grids() {
        let g = Grid::new(GridSpec::new(128, 96)).unwrap();
        assert!(assemble_generator(&g, Which::Free).is_err());
    }

    #[test]
    fn radial_sector_eigen_directions() {
        // residuals in the rho^4-weighted norm (the 1/rho coefficient makes
        // raw near-axis rows noisier without affecting the physical norm)
        let wnorm = |rho: &[f64], r: &DVector<f64>| -> f64 {
            let n = rho.len();
            let mut s = 0.0;
            for i in 0..n {
                s += rho[i].powi(4) * (r[i] * r[i] + r[n + i] * r[n + i]);
            }
            s.sqrt()
        };
        // l = 0: (1, 2) is an eigenvector with eigenvalue 1 in g-variables
        let (rho, m) = assemble_radial_sector(24, 0).unwrap();
        let n = 24;
        let mut v = DVector::<f64>::zeros(2 * n);
        for i in 0..n {
            v[i] = 1.0;
            v[n + i] = 2.0;
        }
        let r = &m * &v - &v;
        assert!(wnorm(&rho, &r) < 1e-10, "l=0 residual {}", wnorm(&rho, &r));
        // l = 1: (1, 2) (the h-profile divided by sqrt2 rho) is in the kernel
        let (rho, m) = assemble_radial_sector(24, 1).unwrap();
        let r = &m * &v;
        assert!(wnorm(&rho, &r) < 1e-10, "l=1 residual {}", wnorm(&rho, &r));
    }

    #[test]
    fn radial_spectrum_converged_unstable_set() {
        for l in 0..=2usize {
            let pts = radial_sector_spectrum(32, l, 1e-4).unwrap();
            let unstable: Vec<_> = pts
                .iter()
                .filter(|p| p.converged && p.lambda.re > -0.5)
                .collect();
            match l {
                0 => {
                    assert_eq!(unstable.len(), 1);
                    assert!((unstable[0].lambda - Complex64::new(1.0, 0.0)).norm() < 1e-8);
                }
                1 => {
                    assert_eq!(unstable.len(), 1);
                    assert!(unstable[0].lambda.norm() < 1e-8);
                }
                _ => assert!(unstable.is_empty()),
            }
        }
    }

    #[test]
    fn left_eigenvectors_are_biorthogonal() {
        let g = Grid::new(GridSpec::new(16, 6)).unwrap();
        let m = assemble_generator(&g, Which::Linearized(0.0)).unwrap();
        let l1 = left_eigenvector(&m.mat, 1.0).unwrap();
        let l0 = left_eigenvector(&m.mat, 0.0).unwrap();
        let gv = DVector::from_vec(pair_to_vec(&crate::spectral::eigenfunction_g(&g, 0.0)));
        let hv = DVector::from_vec(pair_to_vec(&crate::spectral::eigenfunction_h_axis(&g, 0.0)));
        // cross functionals vanish, self functionals do not
        assert!(l1.dot(&hv).abs() < 1e-8 * l1.dot(&gv).abs());
        assert!(l0.dot(&gv).abs() < 1e-8 * l0.dot(&hv).abs());
    }
}
