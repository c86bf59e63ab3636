use thiserror::Error;

/// Errors raised by the model, the solvers and the calibrator.
///
/// Numeric payloads are carried as `f64` regardless of the scalar type the
/// computation ran in.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value for {0}")]
    NonFinite(&'static str),
    #[error("negative flow ratio {name} = {value}")]
    NegativeFlow { name: &'static str, value: f64 },
    #[error("flow ratios sum to {sum}, expected 1")]
    SimplexViolation { sum: f64 },
    #[error("cost coefficient {name} = {value} must be finite and non-negative")]
    InvalidCoefficient { name: &'static str, value: f64 },
    #[error("{what} = {value} lies outside [0, 1]")]
    DomainError { what: &'static str, value: f64 },
    #[error("degenerate costs: K1s + K1b = 0")]
    DegenerateCosts,
    #[error("configuration outside the Stackelberg regime (phi = {phi}, gamma = {gamma})")]
    NotAdmissible { phi: f64, gamma: f64 },
    #[error("equilibrium residuals h1 = {h1}, h2 = {h2} exceed the bound")]
    ToleranceNotMet { h1: f64, h2: f64 },
    #[error("orientation (cos = {cos}, sin = {sin}) violates the admissible angle range for {class}")]
    AngleOutOfRange { class: &'static str, cos: f64, sin: f64 },
    #[error("type weight {0} must lie in (0, 1]")]
    InvalidWeight(f64),
    #[error("{class} weights sum to {sum}, expected 1")]
    WeightSum { class: &'static str, sum: f64 },
    #[error("population has no vehicle types")]
    EmptyPopulation,
    #[error("population has no {class} types but their share at p = {p} is positive")]
    MissingClass { class: &'static str, p: f64 },
    #[error("thresholds of types {first} and {second} differ by only {gap}")]
    DistinctnessViolated { first: usize, second: usize, gap: f64 },
    #[error("allocation has {got} entries, population has {expected} types")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid penetration grid: {0}")]
    InvalidGrid(String),
    #[error("zero denominator in {0}")]
    ZeroDenominator(&'static str),
    #[error("calibration dataset is empty")]
    EmptyDataset,
    #[error("bounds for {name} are infeasible: [{lo}, {hi}]")]
    BoundsInfeasible { name: &'static str, lo: f64, hi: f64 },
    #[error("observation {index} has zero observed steadfast share")]
    ZeroObservedShare { index: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
