use crate::C64;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Pointwise evaluation failure of a holomorphic expression.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("division by zero at z = {z}")]
    DivisionByZero { z: C64 },
    #[error("principal log evaluated on or within 1e-13 of the negative real cut at z = {z}")]
    BranchCut { z: C64 },
    #[error("non-finite value at z = {z}")]
    NonFinite { z: C64 },
    #[error("{name} failed at z = {z}: {reason}")]
    Kernel {
        name: String,
        z: C64,
        reason: String,
    },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Eval(#[from] EvalError),

    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {z} lies outside the annulus 1/{r} < |z| < {r}")]
    OutsideAnnulus { z: C64, r: f64 },

    #[error("g vanishes on the probe circle |z| = {radius}; retry at a perturbed radius")]
    VanishesOnCircle { radius: f64 },

    #[error("g has {count} zero(s) inside the annulus")]
    GaussVanishes { count: i64 },

    #[error("expression has no symbolic derivative: {0}")]
    NoDerivative(String),

    #[error("period defect {defect:?} exceeds tolerance {tol:e}: not a tube over the annulus")]
    NotATube { defect: [f64; 3], tol: f64 },

    #[error("third flux component J3 = {j3} is not positive")]
    NonPositiveFlux { j3: f64 },

    #[error("u3 is unbounded on the annulus")]
    Unbounded,

    #[error("tau = {tau} is outside the life interval ({lo}, {hi})")]
    OutsideLifeInterval { tau: f64, lo: f64, hi: f64 },

    #[error("ring domain is not doubly connected at spacing h = {h}: {reason}")]
    NotDoublyConnected { h: f64, reason: String },

    #[error("conjugate gradient did not converge: residual {residual:e} after {iterations} iterations")]
    SolverDiverged { iterations: usize, residual: f64 },

    #[error("u = {u} is within 1e-10 of a lattice point")]
    LatticePoint { u: C64 },

    #[error("no sign change found for the {which} witness; condition residual {residual:e}")]
    NoWitness { which: &'static str, residual: f64 },

    #[error("no solution: {reason} (best residual {best_residual:e})")]
    NoSolution { reason: String, best_residual: f64 },

    #[error("a zero of g enters the annulus")]
    ZeroInAnnulus,

    #[error("calibration infeasible: {0}")]
    Calibration(String),
}
