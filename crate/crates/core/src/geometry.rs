//! Symmetry group of the blowup family: hyperbolic boost coefficients,
//! the boosted ODE blowup solution, similarity coordinates and the static
//! profiles they induce.

use crate::error::{Error, Result};

pub const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Boost parameter (hyperbolic angles), one component per space dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Rapidity {
    pub components: Vec<f64>,
}

impl Rapidity {
    pub fn new(components: Vec<f64>) -> Self {
        Self { components }
    }

    pub fn zero(d: usize) -> Self {
        Self { components: vec![0.0; d] }
    }

    /// Rapidity a*e_axis in dimension d (axes are 1-based like the paper's
    /// coordinate indices).
    pub fn along_axis(d: usize, axis: usize, a: f64) -> Self {
        let mut c = vec![0.0; d];
        c[axis - 1] = a;
        Self { components: c }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn norm(&self) -> f64 {
        self.components.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// The coefficients A_0..A_d of the boosted blowup solution: products of
/// hyperbolic functions of the rapidity components.
#[derive(Debug, Clone)]
pub struct BoostCoeffs {
    /// a[0] = A_0, a[j] = A_j for j = 1..d.
    pub a: Vec<f64>,
}

impl BoostCoeffs {
    pub fn a0(&self) -> f64 {
        self.a[0]
    }

    /// A . xi with xi given in Cartesian components (Einstein sum over
    /// spatial indices only).
    pub fn dot_space(&self, xi: &[f64]) -> f64 {
        self.a[1..].iter().zip(xi).map(|(a, x)| a * x).sum()
    }

    /// Admissibility for profile assembly: A_0 - sum_j |A_j| > 0 guarantees a
    /// positive denominator on the closed unit ball.
    pub fn admissible(&self) -> bool {
        self.a0() - self.a[1..].iter().map(|v| v.abs()).sum::<f64>() > 0.0
    }
}

/// A_0 = cosh(a^d)...cosh(a^1), A_j = cosh(a^d)...cosh(a^{j+1}) sinh(a^j).
pub fn boost_coeffs(alpha: &Rapidity) -> BoostCoeffs {
    let d = alpha.dim();
    let mut a = vec![0.0; d + 1];
    // running product of cosh(a^d)...cosh(a^{j+1})
    let mut tail = 1.0;
    for j in (1..=d).rev() {
        a[j] = tail * alpha.components[j - 1].sinh();
        tail *= alpha.components[j - 1].cosh();
    }
    a[0] = tail;
    BoostCoeffs { a }
}

/// One Lorentz boost in the j-direction (1-based) about the event (T, 0),
/// acting on (t, x).
fn boost_axis(t: f64, x: &[f64], big_t: f64, j: usize, angle: f64) -> (f64, Vec<f64>) {
    let (s, c) = (angle.sinh(), angle.cosh());
    let mut y = x.to_vec();
    let tp = (t - big_t) * c + x[j - 1] * s + big_t;
    y[j - 1] = (t - big_t) * s + x[j - 1] * c;
    (tp, y)
}

/// The full boost Lambda_T(alpha) = Lambda^d o ... o Lambda^1. The rapidity
/// components do not commute beyond first order, so the composition order is
/// part of the definition.
pub fn lorentz_boost(t: f64, x: &[f64], big_t: f64, alpha: &Rapidity) -> (f64, Vec<f64>) {
    let mut state = (t, x.to_vec());
    for j in 1..=alpha.dim() {
        state = boost_axis(state.0, &state.1, big_t, j, alpha.components[j - 1]);
    }
    state
}

/// The boosted ODE blowup solution sqrt(2) / (A_0 (T - t) - A_j x^j).
pub fn blowup_solution(t: f64, x: &[f64], big_t: f64, alpha: &Rapidity) -> Result<f64> {
    let coeffs = boost_coeffs(alpha);
    let den = coeffs.a0() * (big_t - t) - coeffs.dot_space(x);
    if den <= 0.0 {
        return Err(Error::Domain(format!(
            "point outside the boosted cone of regularity (denominator {den})"
        )));
    }
    Ok(SQRT2 / den)
}

/// Time derivative of the blowup solution (closed form).
pub fn blowup_solution_dt(t: f64, x: &[f64], big_t: f64, alpha: &Rapidity) -> Result<f64> {
    let coeffs = boost_coeffs(alpha);
    let den = coeffs.a0() * (big_t - t) - coeffs.dot_space(x);
    if den <= 0.0 {
        return Err(Error::Domain("outside cone".into()));
    }
    Ok(SQRT2 * coeffs.a0() / (den * den))
}

/// The similarity frame: blowup time and odd space dimension.
#[derive(Debug, Clone, Copy)]
pub struct SimilarityFrame {
    pub big_t: f64,
    pub d: usize,
}

impl SimilarityFrame {
    pub fn new(big_t: f64, d: usize) -> Result<Self> {
        if big_t <= 0.0 {
            return Err(Error::Config("blowup time must be positive".into()));
        }
        if !matches!(d, 5 | 7 | 9 | 11 | 13) {
            return Err(Error::UnsupportedDimension(d));
        }
        Ok(Self { big_t, d })
    }

    /// (t, x) -> (tau, xi) = (log(T/(T-t)), x/(T-t)).
    pub fn map(&self, t: f64, x: &[f64]) -> Result<(f64, Vec<f64>)> {
        if t < 0.0 || t >= self.big_t {
            return Err(Error::Domain(format!("t = {t} outside [0, T)")));
        }
        let rem = self.big_t - t;
        let r = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        if r > rem * (1.0 + 1e-12) {
            return Err(Error::Domain(format!("|x| = {r} outside the light cone")));
        }
        Ok(((self.big_t / rem).ln(), x.iter().map(|v| v / rem).collect()))
    }

    /// Inverse of `map`.
    pub fn inverse_map(&self, tau: f64, xi: &[f64]) -> Result<(f64, Vec<f64>)> {
        if tau < 0.0 {
            return Err(Error::Domain("tau must be nonnegative".into()));
        }
        let rem = self.big_t * (-tau).exp();
        Ok((self.big_t - rem, xi.iter().map(|v| v * rem).collect()))
    }
}

/// psi_alpha(xi) = sqrt(2) / (A_0 - A_j xi^j).
pub fn static_profile(xi: &[f64], alpha: &Rapidity) -> Result<f64> {
    let coeffs = boost_coeffs(alpha);
    let den = coeffs.a0() - coeffs.dot_space(xi);
    if den <= 0.0 {
        return Err(Error::Domain("vanishing profile denominator".into()));
    }
    Ok(SQRT2 / den)
}

/// The pair (psi_alpha, xi . grad psi_alpha + psi_alpha); the second slot
/// collapses to sqrt(2) A_0 / (A_0 - A_j xi^j)^2 in closed form.
pub fn static_profile_pair(xi: &[f64], alpha: &Rapidity) -> Result<(f64, f64)> {
    let coeffs = boost_coeffs(alpha);
    let den = coeffs.a0() - coeffs.dot_space(xi);
    if den <= 0.0 {
        return Err(Error::Domain("vanishing profile denominator".into()));
    }
    Ok((SQRT2 / den, SQRT2 * coeffs.a0() / (den * den)))
}

/// Cartesian gradient of psi_alpha: grad_j = sqrt(2) A_j / (A_0 - A.xi)^2.
pub fn static_profile_gradient(xi: &[f64], alpha: &Rapidity) -> Result<Vec<f64>> {
    let coeffs = boost_coeffs(alpha);
    let den = coeffs.a0() - coeffs.dot_space(xi);
    if den <= 0.0 {
        return Err(Error::Domain("vanishing profile denominator".into()));
    }
    Ok(coeffs.a[1..].iter().map(|a| SQRT2 * a / (den * den)).collect())
}
