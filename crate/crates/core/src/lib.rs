//! Exact large-N solutions of Schwinger-Dyson equations for unitary matrix
//! models coupled to deterministic matrices.

pub mod algebra;
pub mod corpus;
pub mod cumulants;
pub mod error;
pub mod exec;
pub mod hciz;
pub mod json;
pub mod maps;
pub mod multi_index;
pub mod nc;
pub mod potential;
pub mod solver;
pub mod tau;
pub mod verify;
pub mod weight;

pub use algebra::{CyclicClass, Letter, LetterKind, Monomial, Polynomial, TensorPolynomial};
pub use error::{Error, Result};
pub use exec::Execution;
pub use maps::{enumerate_maps, MapRecord, RootPolicy};
pub use multi_index::MultiIndex;
pub use nc::{catalan, noncrossing_partitions, NCPartition};
pub use potential::{Potential, PotentialConfig};
pub use solver::{BoundConstants, Caps, SeriesTable};
pub use tau::{moments_free, MomentTable, TauConfig, TauState};
pub use weight::{GenMonomial, Generator, Weight};
