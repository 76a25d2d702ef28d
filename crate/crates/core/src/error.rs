use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// Evaluation point lies outside the domain of validity (cone, ball,
    /// admissible rapidity range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration (grid sizes, brackets, windows).
    #[error("config error: {0}")]
    Config(String),

    /// Operation requested in a dimension the coefficient tables do not cover.
    #[error("unsupported dimension d={0}")]
    UnsupportedDimension(usize),

    /// Gamma/hypergeometric parameter hit a pole.
    #[error("pole error: {0}")]
    Pole(String),

    /// Series or iteration failed to reach its accuracy target.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Least-squares fit not affine within tolerance over the window.
    #[error("fit not converged: {0}")]
    NonConvergedFit(String),

    /// Modulation Newton iteration left the admissible rapidity ball.
    #[error("modulation diverged: {0}")]
    ModulationDiverged(String),

    /// Both bracket ends classify identically in blowup-time shooting.
    #[error("bracket error: {0}")]
    Bracket(String),

    /// Solution left the perturbative regime during evolution.
    #[error("blowup detected at tau={tau}: max|Psi| = {max_abs}")]
    BlowupDetected { tau: f64, max_abs: f64 },

    /// I/O failure writing or reading artifacts.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
