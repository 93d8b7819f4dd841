//! First-quantized grid simulation toolkit: states, Hamiltonian evolution, a mean-field
//! baseline, Slater-determinant preparation circuits, classical-shadow RDM estimation,
//! and asymptotic cost formulas.

pub mod costmodel;
pub mod error;
pub mod grid;
pub mod hamiltonian;
pub mod linalg;
pub mod meanfield;
pub mod perm;
pub mod rdm;
pub mod rng;
pub mod shadows;
pub mod snapshot;
pub mod state;
pub mod stateprep;

pub use error::{Error, Result};
pub use grid::GridSpec;
pub use state::{FirstQuantizedState, OrbitalVector};
