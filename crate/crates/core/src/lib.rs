//! Quantum Lévy processes on involutive bialgebras, real Lie algebras,
//! dual semigroups and braided spaces: Schürmann triples, truncated Fock
//! space realizations, classical marginal laws, universal independences,
//! braided Brownian motion, Lindblad dilations and quasi-invariance
//! densities.

pub mod algebra;
pub mod braided;
pub mod schurmann;
pub mod dilation;
pub mod fock;
pub mod independence;
pub mod ito;
pub mod linalg;
pub mod quasiinv;
pub mod scalar;
pub mod smat;
