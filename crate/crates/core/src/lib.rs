//! Exact symbolic computation with lattice vertex algebras.
//!
//! This crate builds the vertex algebra `V_L` of an even lattice `L`, its
//! coset modules `V_{L+β}` for `β` in the dual lattice, and tensor products of
//! these, all over exact rationals. On top of the construction it provides
//! executable checks for the vertex algebra axioms in mode form, graded
//! characters, and windowed irreducibility / commutant / decomposition
//! computations.
//!
//! Everything here is `no_std` with `alloc`; file formats and the command line
//! front end live in the companion `latvoa` crate.
#![no_std]

extern crate alloc;

pub mod axioms;
pub mod characters;
pub mod error;
pub mod fock;
pub mod graded;
pub mod lattice;
pub mod linalg;
pub mod lincomb;
pub mod module;
pub mod scalar;
pub mod tensor;
pub mod vertex;

pub use error::{AxiomError, LatticeError, ModuleError, VertexError};
pub use fock::{DoubleDegree, FockMonomial, Mode, StateVector};
pub use lattice::{DualCoset, EpsilonCocycle, EvenLattice, LatticeVector, Sector};
pub use lincomb::LinComb;
pub use scalar::{Frac, Q};
pub use vertex::{ModeEngine, ModeOperator, TruncationWindow};
