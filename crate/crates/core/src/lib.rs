//! Minimization of decomposable submodular functions by accelerated gradient descent on a
//! smoothed Lovász extension, with exact discrete optimality certificates.

pub mod certify;
pub mod error;
pub mod harness;
pub mod model;
pub mod reformulate;
pub mod smoothing;
pub mod solver;

pub use certify::{certificate_gap, round_to_sets, Certificate, Rounding};
pub use error::{Error, Result};
pub use model::{
    brute_force_minimize, check_submodular, lovasz, ConcaveCurve, ConcavePotential,
    DecomposableFunction, FunctionBuilder, SetFunction, SparseWeights, Subset,
    ThresholdPotential,
};
pub use smoothing::{effective_d, smoothed_f, SmoothedGradientResult};
pub use solver::{slg_minimize, SolveResult, SolverOptions, Termination, TraceRow};
