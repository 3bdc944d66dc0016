use thiserror::Error;

/// Errors raised by the numerical routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum HillError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("quadrature did not converge on [{lo}, {hi}]: achieved {achieved:.3e}, requested {requested:.3e}")]
    Quadrature {
        lo: f64,
        hi: f64,
        achieved: f64,
        requested: f64,
    },

    #[error("eigensolver did not converge after {iterations} iterations (n = {dim}, fingerprint {fingerprint:016x})")]
    EigenNoConvergence {
        dim: usize,
        iterations: usize,
        fingerprint: u64,
    },

    #[error("step size underflow at x = {x} (h = {step:.3e}); problem too stiff for the explicit integrator")]
    Stiffness { x: f64, step: f64 },

    #[error("invalid bracket [{lo}, {hi}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e} have the same sign")]
    InvalidBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("Fourier table half-width {half_width} too small: coefficient index {needed} required")]
    TableExtension { needed: i64, half_width: usize },

    #[error("band assignment failed for m = {m}: {detail}")]
    BandAssignment { m: usize, detail: String },

    #[error("shooting refinement failed for m = {m}: {detail}; samples {samples:?}")]
    Refinement {
        m: usize,
        detail: String,
        samples: Vec<(f64, f64)>,
    },

    #[error("near resonance in series for band N = {n}: denominator {denominator:.3e} at m1 = {m1}")]
    NearResonance { n: usize, m1: i64, denominator: f64 },

    #[error("unsupported potential form: {0}")]
    UnsupportedForm(String),
}

pub type Result<T> = std::result::Result<T, HillError>;
