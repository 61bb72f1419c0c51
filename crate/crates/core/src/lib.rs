//! Numerical laboratory for the correspondence between continuous- and
//! discrete-time quantum walks.
//!
//! * [`linalg`]: dense Hermitian substrate and the exact propagator oracle.
//! * [`walk`]: the walk operator `U = iS(2TT† - 1)` for any Hermitian `H`.
//! * [`lazy`]: lazy walks and the continuous-time limit.
//! * [`product`]: first/second-order product formulas and star-forest tree simulation.
//! * [`phase`]: phase-estimation-based simulation and its transfer function.
//! * [`distinctness`]: the element-distinctness Hamiltonian on the Johnson graph.
//! * [`arith`]: prime fields, Kloosterman sums, the Paley sign problem and association schemes.

pub mod arith;
pub mod distinctness;
pub mod error;
pub mod fit;
pub mod io;
pub mod lazy;
pub mod linalg;
pub mod phase;
pub mod product;
pub mod sampling;
pub mod tolerance;
pub mod walk;

pub use error::{Result, WalkError};
pub use linalg::{CMatrix, CVector, HermitianMatrix, SpectralDecomposition};
pub use tolerance::Tolerances;
