//! Fisher-information bounds and measurement schemes for gradient
//! magnetometry with two spatially separated spin ensembles.

pub mod baselines;
pub mod closed_form;
pub mod error;
pub mod estimator;
pub mod export;
pub mod linalg;
pub mod moments;
pub mod optimal;
pub mod oracle;
pub mod polytope;
pub mod qfi;
pub mod spin;
pub mod states;
pub mod tolerance;

pub use error::{Error, Result};
pub use estimator::{EstimationConfig, EstimationRun, MeasurementModel, RunReport};
pub use linalg::{CMatrix, CVector};
pub use moments::MomentObservable;
pub use optimal::{CommutantBasis, OptimalSolution};
pub use polytope::{PolytopeModel, PolytopeReport, QfiSixVector, SignVector};
pub use qfi::{PrecisionBounds, QfiMatrix2};
pub use spin::{Axis, SpaceOperators, TwoWellSpace};
pub use states::{EvolutionParams, StateKind, StateVector};
