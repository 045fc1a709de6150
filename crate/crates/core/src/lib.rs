pub mod checks;
pub mod config;
pub mod error;
pub mod exact;
pub mod lattice;
pub mod pauli;
pub mod qec;
pub mod sum_rule;
pub mod theta;
pub mod valence_bond;
pub mod vmc;
pub mod wavefunction;

pub use config::SpinConfiguration;
pub use error::{Error, Result};
pub use lattice::{Direction, LatticeSpec, Site};
pub use pauli::{Pauli, PauliString};
pub use theta::LogAmplitude;
pub use wavefunction::{Sector, WaveFunctionSpec, Wavefunction};
