//! Finite-N Monte Carlo for unitary and orthogonal matrix models: Haar
//! sampling, empirical traces, Metropolis Gibbs estimates and the checks
//! that compare them with the exact large-N solver.

pub mod ensemble;
pub mod error;
pub mod estimate;
pub mod gibbs;
pub mod haar;
pub mod predict;
pub mod words;

pub use ensemble::{DiscreteMeasure, Group, MatrixEnsembleConfig};
pub use error::{McError, Result};
pub use estimate::{cumulants_classical, empirical_moment, empirical_moments, fluctuation_decay, MCEstimate};
pub use gibbs::{gibbs_moment, orthogonal_universality, GibbsOptions, NumericPotential, Universality, UniversalityReport};
pub use haar::sample_haar;
pub use predict::{free_limit, solver_prediction};
