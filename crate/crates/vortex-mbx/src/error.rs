use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} must be strictly positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    #[error("{name} must be non-negative, got {value}")]
    Negative { name: &'static str, value: f64 },

    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("effective distance must be finite and non-negative, got {0}")]
    BadDistance(f64),

    #[error("probe input amplitude must be nonzero")]
    ZeroProbeInput,

    #[error("unknown concentration label {0} (expected one of 0.5, 3, 15, 33, 100)")]
    UnknownConcentration(f64),

    #[error("grid must be at least 16x16, got {nx}x{ny}")]
    GridTooCoarse { nx: usize, ny: usize },

    #[error("sampling circle r/w = {radius} does not fit inside the grid extent {half_extent}")]
    CircleOutsideGrid { radius: f64, half_extent: f64 },

    #[error(
        "singular circle: field modulus {min_modulus:.3e} at r/w = {radius} is too close to \
         the phase singularity; choose a different radius"
    )]
    SingularCircle { radius: f64, min_modulus: f64 },

    #[error("map observable {0} has no absorption part; expected a coherence map")]
    NotACoherenceMap(&'static str),

    #[error("sweep {0}")]
    BadSweep(&'static str),

    #[error("search window start {start} exceeds stop {stop}")]
    BadWindow { start: f64, stop: f64 },

    #[error("integrator tolerance {0:.3e} outside the supported range (1e-14, 1e-4)")]
    BadTolerance(f64),

    #[error(
        "integrator did not reach tolerance {tol:.3e} after {refinements} refinements \
         (last residual {residual:.3e})"
    )]
    NoConvergence {
        tol: f64,
        refinements: u32,
        residual: f64,
    },

    #[error("steady-state system is singular; relaxation rates are likely invalid")]
    SingularSystem,

    #[error("non-finite value produced for {0}")]
    NonFiniteResult(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
