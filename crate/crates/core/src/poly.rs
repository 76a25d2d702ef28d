//! Sparse multivariate polynomials with exact ball / sphere integration.
//!
//! This is the oracle layer: polynomial test fields can be differentiated
//! and integrated in closed form in any dimension, independently of the
//! collocation grid, which makes them suitable reference values for the
//! quadrature and for the surface-operator identities in d = 5, 7, 9, 11.

use std::collections::BTreeMap;

use crate::spectral::gamma;

/// A polynomial in `dim` variables, stored as exponent-vector -> coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiPoly {
    pub dim: usize,
    pub terms: BTreeMap<Vec<u16>, f64>,
}

impl MultiPoly {
    pub fn zero(dim: usize) -> Self {
        Self { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: f64) -> Self {
        let mut p = Self::zero(dim);
        if c != 0.0 {
            p.terms.insert(vec![0; dim], c);
        }
        p
    }

    /// The coordinate monomial xi^(var+1), var 0-based.
    pub fn var(dim: usize, var: usize) -> Self {
        let mut e = vec![0u16; dim];
        e[var] = 1;
        let mut p = Self::zero(dim);
        p.terms.insert(e, 1.0);
        p
    }

    pub fn add_term(&mut self, exps: Vec<u16>, c: f64) {
        assert_eq!(exps.len(), self.dim);
        let entry = self.terms.entry(exps).or_insert(0.0);
        *entry += c;
        if entry.abs() < 1e-300 {
            // keep the map sparse
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= s;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            *out.terms.entry(e.clone()).or_insert(0.0) += c;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zero(self.dim);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u16> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                *out.terms.entry(e).or_insert(0.0) += c1 * c2;
            }
        }
        out
    }

    /// Partial derivative with respect to variable `var` (0-based).
    pub fn deriv(&self, var: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                *out.terms.entry(e2).or_insert(0.0) += c * e[var] as f64;
            }
        }
        out
    }

    /// Euler operator xi . grad.
    pub fn euler(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let n: u16 = e.iter().sum();
            if n > 0 {
                *out.terms.entry(e.clone()).or_insert(0.0) += c * n as f64;
            }
        }
        out
    }

    /// Falling factorial of the Euler operator:
    /// xi^{i_1}..xi^{i_j} d_{i_1}..d_{i_j} = E(E-1)...(E-j+1).
    pub fn euler_falling(&self, j: usize) -> Self {
        let mut out = Self::zero(self.dim);
        for (e, c) in &self.terms {
            let n = e.iter().sum::<u16>() as f64;
            let mut f = 1.0;
            for t in 0..j {
                f *= n - t as f64;
            }
            if f != 0.0 {
                *out.terms.entry(e.clone()).or_insert(0.0) += c * f;
            }
        }
        out
    }

    pub fn laplacian(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for var in 0..self.dim {
            out = out.add(&self.deriv(var).deriv(var));
        }
        out
    }

    /// Spherical Laplacian of the restriction to S^{d-1}, expressed through
    /// the ambient extension: Lap_S f = Lap f - E(E-1) f - (d-1) E f on the
    /// sphere.
    pub fn sphere_laplacian(&self) -> Self {
        self.laplacian()
            .add(&self.euler_falling(2).scale(-1.0))
            .add(&self.euler().scale(-((self.dim - 1) as f64)))
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            let mut m = *c;
            for (xi, &ei) in x.iter().zip(e) {
                for _ in 0..ei {
                    m *= xi;
                }
            }
            total += m;
        }
        total
    }

    /// Exact integral over the unit sphere S^{dim-1}: each monomial
    /// integrates to 2 prod Gamma((a_i+1)/2) / Gamma(sum (a_i+1)/2) when all
    /// exponents are even, zero otherwise.
    pub fn sphere_integral(&self) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            if e.iter().any(|&a| a % 2 == 1) {
                continue;
            }
            let mut num = 2.0;
            let mut s = 0.0;
            for &a in e {
                num *= gamma((a as f64 + 1.0) / 2.0);
                s += (a as f64 + 1.0) / 2.0;
            }
            total += c * num / gamma(s);
        }
        total
    }

    /// Exact integral over the unit ball B^dim: radial factor 1/(n + d) on a
    /// degree-n monomial times its sphere integral.
    pub fn ball_integral(&self) -> f64 {
        let mut total = 0.0;
        for (e, c) in &self.terms {
            if e.iter().any(|&a| a % 2 == 1) {
                continue;
            }
            let n = e.iter().sum::<u16>() as f64;
            let mut num = 2.0;
            let mut s = 0.0;
            for &a in e {
                num *= gamma((a as f64 + 1.0) / 2.0);
                s += (a as f64 + 1.0) / 2.0;
            }
            total += c * num / gamma(s) / (n + self.dim as f64);
        }
        total
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Build an axisymmetric polynomial in `dim` ambient variables from a
/// polynomial H(z, s) with z the axis coordinate (last variable) and
/// s = |xi_perp|^2, given as (z-exponent, s-exponent, coefficient) triples.
pub fn axisymmetric_poly(dim: usize, terms: &[(u16, u16, f64)]) -> MultiPoly {
    let mut s = MultiPoly::zero(dim);
    for v in 0..dim - 1 {
        s = s.add(&MultiPoly::var(dim, v).mul(&MultiPoly::var(dim, v)));
    }
    let z = MultiPoly::var(dim, dim - 1);
    let mut out = MultiPoly::zero(dim);
    for &(ez, es, c) in terms {
        let mut m = MultiPoly::constant(dim, c);
        for _ in 0..ez {
            m = m.mul(&z);
        }
        for _ in 0..es {
            m = m.mul(&s);
        }
        out = out.add(&m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn sphere_and_ball_volumes() {
        let one5 = MultiPoly::constant(5, 1.0);
        assert_relative_eq!(one5.sphere_integral(), 8.0 * PI * PI / 3.0, epsilon = 1e-12);
        assert_relative_eq!(one5.ball_integral(), 8.0 * PI * PI / 15.0, epsilon = 1e-12);
    }

    #[test]
    fn axis_monomial_ball_moment() {
        // int_{B^5} (xi^5)^2 = |B^5| / 7
        let z2 = axisymmetric_poly(5, &[(2, 0, 1.0)]);
        assert_relative_eq!(
            z2.ball_integral(),
            8.0 * PI * PI / 15.0 / 7.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn euler_falling_matches_explicit_contraction() {
        // xi^i xi^j d_i d_j on xi1^2 xi2 equals E(E-1) = 3*2 = 6 times it
        let p = MultiPoly::var(3, 0)
            .mul(&MultiPoly::var(3, 0))
            .mul(&MultiPoly::var(3, 1));
        let q = p.euler_falling(2);
        assert_eq!(q.eval(&[1.0, 2.0, 0.5]), 6.0 * p.eval(&[1.0, 2.0, 0.5]));
    }

    #[test]
    fn stokes_on_sphere_laplacian() {
        let p = axisymmetric_poly(5, &[(3, 1, 0.7), (1, 2, -0.4), (0, 1, 1.1)]);
        let s = p.sphere_laplacian().sphere_integral();
        assert!(s.abs() < 1e-12, "surface integral of Lap_S must vanish: {s}");
    }
}
