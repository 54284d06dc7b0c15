use thiserror::Error;

/// Numerical failures raised by the physics modules.
///
/// Poles are reported rather than clamped; several of them (the single
/// interface surface-mode pole in particular) are physically meaningful.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum PhysicsError {
    #[error("susceptibility denominator underflow: |D| = {magnitude:e}")]
    DenominatorUnderflow { magnitude: f64 },

    #[error("steady-state amplitude system is singular")]
    SingularSystem,

    #[error("local-field pole: |1 - chi/3| = {magnitude:e}")]
    LocalFieldPole { magnitude: f64 },

    #[error("division by zero: {what}")]
    DivideByZero { what: &'static str },

    #[error("surface-mode pole in single-interface Fresnel coefficient")]
    SurfaceModePole,

    #[error("Fabry-Perot pole in three-layer stack denominator")]
    FabryPerotPole,

    #[error("surface plasmon pole: |eps_m + eps_s| = {magnitude:e}")]
    SurfacePlasmonPole { magnitude: f64 },

    #[error("thin-film short-range mode diverges at zero thickness")]
    ThicknessZero,

    #[error("no sign change of the residual over [{start}, {stop}] ({} samples)", samples.len())]
    NoBracket {
        start: f64,
        stop: f64,
        /// Sampled `(x, residual)` curve.
        samples: Vec<(f64, f64)>,
    },

    #[error("no convergence after {iterations} iterations, last |residual| = {residual:e}")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("finite-difference step too large: estimates {coarse:e} and {fine:e} differ by more than 1%")]
    StepTooLarge { coarse: f64, fine: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, PhysicsError>;
