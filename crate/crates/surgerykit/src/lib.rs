//! surgerykit: exact chain-level constructions of algebraic L-theory.
//!
//! Everything is computed over ℤ, ℤ[finite group] or ℤ[ℤ^k] with the
//! involution g ↦ g⁻¹, with no floating point anywhere. The crate is
//! organised around:
//!
//! * [`exact`] — scalars, matrices and integer normal forms;
//! * [`chain`] — bounded chain complexes, cones, homology oracles;
//! * [`simplicial`] — ordered complexes, dual cells, collars, covers;
//! * [`forms`] — quadratic/symmetric structures, Thom construction,
//!   boundary thickening and the interval pairing;
//! * [`kbased`] — complexes graded by simplices, chain duality, assembly,
//!   local dualisation and the collar constructions;
//! * [`suspension`] — banded infinite matrices, the ℕ-graded categories,
//!   lifting, finite domination and the transfer homomorphism;
//! * [`scenario`] — the scenario file format, verification runner and the
//!   intersection-form signature.

pub mod chain;
pub mod exact;
pub mod forms;
pub mod kbased;
pub mod scenario;
pub mod simplicial;
pub mod suspension;
