//! Nonlinear time integration in the similarity frame, rapidity modulation,
//! blowup-time shooting, and decay-rate measurement.
//!
//! The full state Psi is evolved (free part plus cubic nonlinearity) with a
//! filtered explicit RK4 step; modulation is diagnostic: at each output time
//! the rapidity alpha(tau) is re-solved from the constraint that the
//! zero-mode amplitude of Psi - Psi_alpha vanishes, using left eigenvectors
//! of the discretized generator.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::geometry::SQRT2;
use crate::grid::{pair_sub, pair_to_vec, FieldPair, Grid};
use crate::operators::{
    apply_rhs_full, assemble_generator, fit_log_slope, left_eigenvector, profile_pair,
    spectral_radius_estimate, Which,
};

/// Closed-form perturbation shapes (f~, g~), evaluable on the ball of radius
/// 1 + delta so that the T-rescaling is defined for T near 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Perturbation {
    None,
    /// (eps exp(-(|xi|/width)^2), 0): even, exercises the time-translation
    /// instability and T-shooting.
    RadialGaussian { amp: f64, width: f64 },
    /// (eps xi_axis exp(-(|xi|/width)^2), 0): odd, exercises the rapidity
    /// modulation.
    AxisOdd { amp: f64, width: f64 },
    /// Sum of the two.
    Mixed { amp: f64, width: f64 },
}

impl Perturbation {
    /// First-slot shape at (radius, cos-angle).
    pub fn eval_first(&self, rho: f64, x: f64) -> f64 {
        match *self {
            Perturbation::None => 0.0,
            Perturbation::RadialGaussian { amp, width } => amp * (-(rho / width).powi(2)).exp(),
            Perturbation::AxisOdd { amp, width } => {
                amp * rho * x * (-(rho / width).powi(2)).exp()
            }
            Perturbation::Mixed { amp, width } => {
                amp * (1.0 + rho * x) * (-(rho / width).powi(2)).exp()
            }
        }
    }
}

/// Evolution parameters.
#[derive(Debug, Clone)]
pub struct EvolutionConfig {
    /// Time step; None selects min(cfl / spectral-radius, 1e-2).
    pub dt: Option<f64>,
    pub cfl: f64,
    pub tau_max: f64,
    pub output_every: f64,
    /// Fit window for decay rates.
    pub window: (f64, f64),
    /// Terminate when max|Psi| exceeds guard * sqrt(2).
    pub guard_factor: f64,
}

impl Default for EvolutionConfig {
    fn default() -> Self {
        Self {
            dt: None,
            cfl: 2.5,
            tau_max: 10.0,
            output_every: 0.05,
            window: (2.0, 8.0),
            guard_factor: 50.0,
        }
    }
}

/// Psi(0) = Psi_0 + U(T, v) with U(T, v) = v^T + Psi_0^T - Psi_0 and
/// w^T(xi) = T w(T xi) slot-wise.
pub fn prepare_initial_data(grid: &Grid, big_t: f64, v: Perturbation) -> Result<FieldPair> {
    if !(0.5..=1.5).contains(&big_t) {
        return Err(Error::Domain(format!(
            "T = {big_t} outside the data-map neighbourhood of 1"
        )));
    }
    let first = grid.field_from_fn(|rho, x| SQRT2 + (big_t - 1.0) * SQRT2
        + big_t * v.eval_first(big_t * rho, x));
    let second = grid.field_from_fn(|_, _| SQRT2 + (big_t - 1.0) * SQRT2);
    Ok(FieldPair { first, second })
}

/// Time stepper: filtered classical RK4 on the full system.
pub struct Stepper<'g> {
    pub grid: &'g Grid,
    pub dt: f64,
    pub guard: f64,
    /// Modal filter after each step (on by default; the raw collocation
    /// generator has discretely-unstable spurious modes).
    pub filter: bool,
}

impl<'g> Stepper<'g> {
    pub fn new(grid: &'g Grid, cfg: &EvolutionConfig) -> Self {
        let dt = cfg.dt.unwrap_or_else(|| {
            let sr = spectral_radius_estimate(grid, 0.0);
            (cfg.cfl / (1.2 * sr)).min(1e-2)
        });
        Self { grid, dt, guard: cfg.guard_factor * SQRT2, filter: true }
    }

    /// One step; errors with BlowupDetected when the state leaves the
    /// perturbative regime.
    pub fn step(&self, u: &FieldPair, tau: f64) -> Result<FieldPair> {
        let g = self.grid;
        let dt = self.dt;
        let k1 = apply_rhs_full(g, u);
        let k2 = apply_rhs_full(g, &crate::grid::axpy(dt / 2.0, &k1, u));
        let k3 = apply_rhs_full(g, &crate::grid::axpy(dt / 2.0, &k2, u));
        let k4 = apply_rhs_full(g, &crate::grid::axpy(dt, &k3, u));
        let mut out = u.clone();
        out = crate::grid::axpy(dt / 6.0, &k1, &out);
        out = crate::grid::axpy(dt / 3.0, &k2, &out);
        out = crate::grid::axpy(dt / 3.0, &k3, &out);
        out = crate::grid::axpy(dt / 6.0, &k4, &out);
        let out = if self.filter { g.filter_pair(&out) } else { out };
        let m = out.max_abs();
        if m > self.guard {
            return Err(Error::BlowupDetected { tau, max_abs: m });
        }
        Ok(out)
    }
}

/// Left-eigenvector functionals realizing the spectral projections of the
/// discretized generator.
pub struct ModulationTools {
    /// Left eigenvector for eigenvalue 0 (zero-mode / rapidity direction).
    pub l0: DVector<f64>,
    /// Left eigenvector for eigenvalue 1 (time-translation direction).
    pub l1: DVector<f64>,
    pub alpha_max: f64,
}

impl ModulationTools {
    /// Build from the generator at alpha = 0 (adequate for |alpha| well
    /// inside the admissible ball; the defining constraint is exact at the
    /// recovered profile independently of the functional).
    pub fn new(grid: &Grid) -> Result<Self> {
        let m = assemble_generator(grid, Which::Linearized(0.0))?;
        Ok(Self {
            l0: left_eigenvector(&m.mat, 0.0)?,
            l1: left_eigenvector(&m.mat, 1.0)?,
            alpha_max: 0.3,
        })
    }

    fn q_amplitude(&self, grid: &Grid, phi: &FieldPair, a: f64) -> f64 {
        let h = crate::spectral::eigenfunction_h_axis(grid, a);
        let hv = DVector::from_vec(pair_to_vec(&h));
        let pv = DVector::from_vec(pair_to_vec(phi));
        self.l0.dot(&pv) / self.l0.dot(&hv)
    }

    fn p_amplitude(&self, grid: &Grid, phi: &FieldPair, a: f64) -> f64 {
        let gp = crate::spectral::eigenfunction_g(grid, a);
        let gv = DVector::from_vec(pair_to_vec(&gp));
        let pv = DVector::from_vec(pair_to_vec(phi));
        self.l1.dot(&pv) / self.l1.dot(&gv)
    }

    /// Solve Q_{alpha,axis}(Psi - Psi_alpha) = 0 for alpha by safeguarded
    /// Newton from alpha_prev; returns (alpha, Phi, p, q).
    pub fn extract(
        &self,
        grid: &Grid,
        psi: &FieldPair,
        alpha_prev: f64,
    ) -> Result<(f64, FieldPair, f64, f64)> {
        let mut a = alpha_prev;
        let mut converged = false;
        for _ in 0..60 {
            let phi = pair_sub(psi, &profile_pair(grid, a));
            let f = self.q_amplitude(grid, &phi, a);
            let a_next = a + f;
            if a_next.abs() > self.alpha_max {
                return Err(Error::ModulationDiverged(format!(
                    "alpha = {a_next} left the admissible ball"
                )));
            }
            let delta = (a_next - a).abs();
            a = a_next;
            if delta < 1e-13 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::ModulationDiverged("Newton did not settle".into()));
        }
        let phi = pair_sub(psi, &profile_pair(grid, a));
        let p = self.p_amplitude(grid, &phi, a);
        let q = self.q_amplitude(grid, &phi, a);
        Ok((a, phi, p, q))
    }
}

/// One output record of an evolution.
#[derive(Debug, Clone, Copy)]
pub struct TraceRow {
    pub tau: f64,
    /// Energy norm of Phi = Psi - Psi_alpha.
    pub phi_norm: f64,
    /// Homogeneous Sobolev seminorms of the first slot of Phi, k = 0..3.
    pub h: [f64; 4],
    pub alpha: f64,
    pub p: f64,
    pub q: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Termination {
    Completed,
    Blowup { tau: f64 },
}

#[derive(Debug, Clone)]
pub struct EvolutionTrace {
    pub rows: Vec<TraceRow>,
    pub termination: Termination,
    pub dt: f64,
}

impl EvolutionTrace {
    pub fn write_csv(&self, w: &mut impl std::io::Write) -> Result<()> {
        writeln!(w, "tau,energy_norm_Phi,H0,H1,H2,H3,alpha,p,q")?;
        for r in &self.rows {
            writeln!(
                w,
                "{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}",
                r.tau, r.phi_norm, r.h[0], r.h[1], r.h[2], r.h[3], r.alpha, r.p, r.q
            )?;
        }
        Ok(())
    }
}

/// Evolve the full system from the given data, extracting modulation
/// diagnostics at output times. `full_norms = false` skips the energy and
/// Sobolev norms (used by shooting classification runs).
pub fn evolve(
    grid: &Grid,
    tools: &ModulationTools,
    stepper: &Stepper,
    data: &FieldPair,
    cfg: &EvolutionConfig,
    full_norms: bool,
) -> Result<EvolutionTrace> {
    let mut psi = data.clone();
    let mut tau = 0.0;
    let mut alpha = 0.0;
    let mut rows = Vec::new();
    let mut next_out = 0.0;
    let mut termination = Termination::Completed;
    loop {
        if tau >= next_out - 1e-12 {
            let (a, phi, p, q) = tools.extract(grid, &psi, alpha)?;
            alpha = a;
            let (phi_norm, h) = if full_norms {
                let e = crate::energy::energy_norm(grid, &phi);
                let mut h = [0.0; 4];
                for (k, hk) in h.iter_mut().enumerate() {
                    *hk = grid.sobolev_seminorm(&phi.first, k)?;
                }
                (e, h)
            } else {
                (grid.l2_pair(&phi), [0.0; 4])
            };
            rows.push(TraceRow { tau, phi_norm, h, alpha, p, q });
            next_out += cfg.output_every;
        }
        if tau >= cfg.tau_max {
            break;
        }
        match stepper.step(&psi, tau) {
            Ok(next) => psi = next,
            Err(Error::BlowupDetected { tau: t, .. }) => {
                termination = Termination::Blowup { tau: t };
                break;
            }
            Err(e) => return Err(e),
        }
        tau += stepper.dt;
    }
    Ok(EvolutionTrace { rows, termination, dt: stepper.dt })
}

/// Sign classification of the late-time unstable amplitude for one trial T.
fn classify(trace: &EvolutionTrace) -> Option<f64> {
    // first output where |p| clearly exceeds its floor, else the last sample
    for r in &trace.rows {
        if r.p.abs() > 1e-2 {
            return Some(r.p.signum());
        }
    }
    trace.rows.last().map(|r| r.p.signum())
}

/// Result of blowup-time shooting.
#[derive(Debug, Clone)]
pub struct ShootResult {
    pub t_star: f64,
    pub bracket_width: f64,
    pub iterations: usize,
    /// (T, classification sign) per bisection trial, for diagnostics.
    pub trials: Vec<(f64, f64)>,
}

/// Bisection on T: classify the late-time sign of the time-translation
/// amplitude p(tau) and shrink the bracket until `width_target`.
pub fn shoot_blowup_time(
    grid: &Grid,
    tools: &ModulationTools,
    v: Perturbation,
    bracket: (f64, f64),
    width_target: f64,
    cfg: &EvolutionConfig,
) -> Result<ShootResult> {
    if !(bracket.0 < bracket.1) {
        return Err(Error::Bracket("empty bracket".into()));
    }
    let stepper = Stepper::new(grid, cfg);
    let mut cls_cfg = cfg.clone();
    cls_cfg.tau_max = cfg.tau_max.min(9.0);
    let run = |t: f64| -> Result<f64> {
        let data = prepare_initial_data(grid, t, v)?;
        let trace = evolve(grid, tools, &stepper, &data, &cls_cfg, false)?;
        classify(&trace).ok_or_else(|| Error::Bracket("no classification sample".into()))
    };
    let (mut lo, mut hi) = bracket;
    let s_lo = run(lo)?;
    let s_hi = run(hi)?;
    let mut trials = vec![(lo, s_lo), (hi, s_hi)];
    if s_lo == s_hi {
        return Err(Error::Bracket(format!(
            "both ends classify with sign {s_lo}: widen the bracket or shrink the perturbation"
        )));
    }
    let mut iterations = 0;
    while hi - lo > width_target && iterations < 80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break; // f64 resolution reached
        }
        let s_mid = run(mid)?;
        trials.push((mid, s_mid));
        if s_mid == s_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    Ok(ShootResult {
        t_star: 0.5 * (lo + hi),
        bracket_width: hi - lo,
        iterations,
        trials,
    })
}

/// Affine fit of log ||Phi|| over the window.
pub fn fit_decay_rate(trace: &EvolutionTrace, window: (f64, f64)) -> Result<(f64, f64)> {
    let samples: Vec<(f64, f64)> = trace.rows.iter().map(|r| (r.tau, r.phi_norm)).collect();
    fit_log_slope(&samples, window)
}

/// Fit of log |alpha(tau) - alpha_inf| over the window, with alpha_inf
/// proxied by the final trace value; samples below the resolution floor are
/// masked.
pub fn fit_alpha_rate(trace: &EvolutionTrace, window: (f64, f64)) -> Result<(f64, f64, f64)> {
    let alpha_inf = trace
        .rows
        .last()
        .ok_or_else(|| Error::NonConvergedFit("empty trace".into()))?
        .alpha;
    let floor = 1e-12;
    let samples: Vec<(f64, f64)> = trace
        .rows
        .iter()
        .map(|r| (r.tau, (r.alpha - alpha_inf).abs()))
        .filter(|(_, v)| *v > floor)
        .collect();
    let (slope, q) = fit_log_slope(&samples, window)?;
    Ok((slope, q, alpha_inf))
}

/// Pure ODE blowup check: spatially constant data must reproduce
/// u(t, 0) = sqrt(2)/(1 - t); returns the max relative error up to t_max.
pub fn ode_blowup_check(grid: &Grid, cfg: &EvolutionConfig, t_max: f64) -> Result<f64> {
    let stepper = Stepper::new(grid, cfg);
    let mut psi = profile_pair(grid, 0.0);
    let mut tau = 0.0;
    let tau_end = -(1.0 - t_max).ln();
    let mut worst = 0.0f64;
    while tau < tau_end {
        psi = stepper.step(&psi, tau)?;
        tau += stepper.dt;
        let t = 1.0 - (-tau).exp();
        let u0 = grid.value_at_origin(&psi.first) / (1.0 - t);
        let want = SQRT2 / (1.0 - t);
        worst = worst.max((u0 - want).abs() / want);
    }
    Ok(worst)
}
