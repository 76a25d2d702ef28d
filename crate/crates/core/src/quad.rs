//! Gauss--Jacobi quadrature rules and barycentric interpolation /
//! differentiation on arbitrary node sets.
//!
//! The ball quadrature in this crate is built from a radial rule with
//! weight rho^(d-1) on [0,1] (right-Radau so that rho = 1 is a node) and
//! an angular rule with weight (1-x^2)^((d-3)/2) on [-1,1], x = cos(theta).

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Three-term recurrence coefficients for monic Jacobi polynomials with
/// weight (1-t)^a (1+t)^b on [-1,1].
pub fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    let mut alpha = vec![0.0; n];
    let mut beta = vec![0.0; n];
    for (i, al) in alpha.iter_mut().enumerate() {
        let k = i as f64;
        *al = if i == 0 {
            (b - a) / (a + b + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * k + a + b) * (2.0 * k + a + b + 2.0))
        };
    }
    beta[0] = 2f64.powf(a + b + 1.0) * gamma_ratio_beta(a, b);
    for (i, be) in beta.iter_mut().enumerate().skip(1) {
        let k = i as f64;
        *be = 4.0 * k * (k + a) * (k + b) * (k + a + b)
            / ((2.0 * k + a + b).powi(2) * (2.0 * k + a + b + 1.0) * (2.0 * k + a + b - 1.0));
    }
    (alpha, beta)
}

// B(a+1, b+1) via the real gamma function.
fn gamma_ratio_beta(a: f64, b: f64) -> f64 {
    crate::spectral::gamma(a + 1.0) * crate::spectral::gamma(b + 1.0)
        / crate::spectral::gamma(a + b + 2.0)
}

fn golub_welsch(alpha: &[f64], beta: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = alpha.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = alpha[i];
        if i + 1 < n {
            let s = beta[i + 1].sqrt();
            j[(i, i + 1)] = s;
            j[(i + 1, i)] = s;
        }
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], beta[0] * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
}

/// Gauss--Jacobi rule: integrates (1-t)^a (1+t)^b f(t) on [-1,1] exactly for
/// polynomial f of degree <= 2n-1.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 2 {
        return Err(Error::Config(format!("quadrature needs n >= 2, got {n}")));
    }
    let (alpha, beta) = jacobi_recurrence(n, a, b);
    Ok(golub_welsch(&alpha, &beta))
}

/// Gauss--Radau--Jacobi rule with a fixed node at t = +1; exact for degree
/// <= 2n-2.
pub fn gauss_radau_right(n: usize, a: f64, b: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    if n < 3 {
        return Err(Error::Config(format!("Radau rule needs n >= 3, got {n}")));
    }
    let (mut alpha, beta) = jacobi_recurrence(n, a, b);
    // Solve (J_{n-1} - I) delta = beta_{n-1} e_{n-1} and shift the last
    // diagonal entry so that +1 becomes an eigenvalue.
    let m = n - 1;
    let mut jm = DMatrix::<f64>::zeros(m, m);
    for i in 0..m {
        jm[(i, i)] = alpha[i] - 1.0;
        if i + 1 < m {
            let s = beta[i + 1].sqrt();
            jm[(i, i + 1)] = s;
            jm[(i + 1, i)] = s;
        }
    }
    let mut rhs = DVector::<f64>::zeros(m);
    rhs[m - 1] = beta[n - 1];
    let delta = jm
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Convergence("Radau modification solve failed".into()))?;
    alpha[n - 1] = 1.0 + delta[m - 1];
    Ok(golub_welsch(&alpha, &beta))
}

/// Barycentric interpolation weights for a node set (any distribution).
pub fn bary_weights(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &v| (l.min(v), h.max(v)));
    let c = 4.0 / (hi - lo);
    (0..n)
        .map(|i| {
            let mut p = 1.0;
            for j in 0..n {
                if j != i {
                    p *= (x[i] - x[j]) * c;
                }
            }
            1.0 / p
        })
        .collect()
}

/// Spectral differentiation matrix on the given nodes.
pub fn diff_matrix(x: &[f64]) -> DMatrix<f64> {
    let n = x.len();
    let w = bary_weights(x);
    let mut d = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let mut diag = 0.0;
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (x[i] - x[j]);
                d[(i, j)] = v;
                diag -= v;
            }
        }
        d[(i, i)] = diag;
    }
    d
}

/// Barycentric evaluation of the interpolant through (x_i, f_i) at point t.
pub fn bary_eval(x: &[f64], w: &[f64], f: &[f64], t: f64) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..x.len() {
        let dt = t - x[i];
        if dt.abs() < 1e-300 {
            return f[i];
        }
        let s = w[i] / dt;
        num += s * f[i];
        den += s;
    }
    num / den
}

/// Vandermonde matrix of the first n orthonormal Jacobi polynomials (weight
/// (1-t)^a (1+t)^b) evaluated at the given points.
pub fn orthonormal_vandermonde(t: &[f64], a: f64, b: f64, n: usize) -> DMatrix<f64> {
    let (alpha, beta) = jacobi_recurrence(n, a, b);
    let m = t.len();
    let mut p = DMatrix::<f64>::zeros(m, n);
    for i in 0..m {
        p[(i, 0)] = 1.0 / beta[0].sqrt();
        if n > 1 {
            p[(i, 1)] = (t[i] - alpha[0]) * p[(i, 0)] / beta[1].sqrt();
        }
        for k in 2..n {
            p[(i, k)] = ((t[i] - alpha[k - 1]) * p[(i, k - 1)]
                - beta[k - 1].sqrt() * p[(i, k - 2)])
                / beta[k].sqrt();
        }
    }
    p
}
