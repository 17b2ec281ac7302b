//! Quantum mechanics of a particle whose translations are deformed by a
//! position-dependent stretch `x → x + dx·(1 + γx)`.
//!
//! The deformed translation generator corresponds to a position-dependent
//! linear momentum and, with the `γ/2` counterterm included, to a Hermitian
//! momentum operator and a position-dependent effective mass
//! `m/(1 + γx)²`. This crate provides:
//!
//! - the scalar deformed algebra (deformed addition, q-exponential,
//!   logarithmic coordinate map) in [`algebra`];
//! - exactly Hermitian grid discretizations of the momentum, Hamiltonian
//!   and ordered position-dependent-mass kinetic operators in [`operators`];
//! - the closed-form infinite-well solutions (eigenfunctions,
//!   normalization, wavenumbers, spectrum, energy bound) in [`well`];
//! - an independent symmetric-tridiagonal eigensolver used as the numerical
//!   oracle for the closed forms in [`solver`] and [`tridiag`];
//! - quadrature, expectation values and product densities in
//!   [`observables`];
//! - unitary Crank–Nicolson propagation contrasting the Hermitian and
//!   non-Hermitian Hamiltonians in [`evolution`];
//! - the pass/fail self-check suite behind the CLI in [`verify`].

pub mod algebra;
pub mod banded;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod observables;
pub mod operators;
pub mod params;
pub mod solver;
pub mod tridiag;
pub mod verify;
pub mod wavefunction;
pub mod well;

pub use error::{Error, Result};
pub use grid::{Coordinate, Grid};
pub use params::PhysicalParams;
pub use wavefunction::WaveFunction;
