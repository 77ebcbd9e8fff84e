use thiserror::Error;

/// Errors raised by the simulator, the drive generators and the oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QtmError {
    #[error("network must have between 2 and {max} spins, got {got}")]
    SpinCount { got: usize, max: usize },

    #[error("amplitude vector has length {got}, expected {expected}")]
    AmplitudeLength { got: usize, expected: usize },

    #[error("state is not normalised (norm {norm:.17e})")]
    NotNormalized { norm: f64 },

    #[error("norm drifted to {norm:.17e} after a unitary step")]
    NormDrift { norm: f64 },

    #[error("gate is not unitary: max |U^dagger U - 1| = {defect:.3e}")]
    NonUnitary { defect: f64 },

    #[error("gate dimension {dim} is not 2 or 4")]
    GateDimension { dim: usize },

    #[error("gate of dimension {dim} cannot act on {targets} target spin(s)")]
    GateArity { dim: usize, targets: usize },

    #[error("spin index {index} out of range for a {num_spins}-spin network")]
    SpinOutOfRange { index: usize, num_spins: usize },

    #[error("target spin {0} listed twice")]
    DuplicateTarget(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid density matrix: {0}")]
    InvalidDensityMatrix(String),

    #[error("drive supplies {available} angles but {required} are needed")]
    DriveExhausted { available: usize, required: usize },

    #[error("F({0}) does not fit in 64 bits")]
    FibonacciOverflow(u64),

    #[error("invalid angle `{0}`: expected `p/q pi`, `p pi`, `pi` or decimal radians")]
    AngleSyntax(String),

    #[error("denominator of an exact angle must be in 1..=2^31, got {0}")]
    AngleDenominator(u64),

    #[error("angle {0} is not an exact rational multiple of pi")]
    InexactAngle(String),

    #[error("unknown drive rule `{0}`")]
    UnknownRule(String),

    #[error("drive rule `{0}` is not a regular rule (expected constant or arithmetic)")]
    NotRegularRule(String),

    #[error("perturbation delta must be nonzero")]
    ZeroDelta,

    #[error("sin(alpha1) vanishes for alpha1 = {0}")]
    DegenerateAlpha(f64),

    #[error("no closed-form D^2 row for n = {0} (rows exist for 0..=12)")]
    NoTableRow(usize),

    #[error("step {step} is outside a trajectory of {len} states")]
    StepOutOfRange { step: usize, len: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, QtmError>;
