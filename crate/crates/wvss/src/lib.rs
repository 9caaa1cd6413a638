//! Verifiable weighted-ramp secret sharing over the Chinese Remainder
//! Theorem.
//!
//! A dealer lifts a secret `s_0` into `s = Σ aⱼ·p0^j` (with `a_0 = s_0` and
//! the other digits random), hands party `i` the residue `s mod pᵢ` for a
//! prime sized to the party's weight, and broadcasts Pedersen commitments to
//! the secret and every share together with one logarithmic-size proof that
//! each committed share really is the lifted secret reduced modulo the right
//! prime. Any subset with enough total weight recombines its residues by the
//! Chinese Remainder Theorem; everyone else learns nothing.
//!
//! Modules, bottom to top: [`group`] (ristretto255 and Pedersen
//! commitments), [`crt`] (exact integer arithmetic, primes, CRT), [`r1cs`]
//! and [`circuits`] (the congruence circuits), [`proof`] (the circuit
//! argument), [`pom`] (congruence witness solvers and the standalone
//! proof-of-mod), [`vss`] (parameters, dealing, verification,
//! reconstruction), and [`adversary`] (cheating dealers for tests and
//! simulations).

pub mod adversary;
pub mod circuits;
pub mod crt;
pub mod field;
pub mod group;
mod ipp;
pub mod pom;
pub mod proof;
pub mod r1cs;
mod transcript;
pub mod vss;

pub use group::{Commitment, GroupElement, PedersenParams, Scalar};
pub use vss::{
    derive_params, explicit_params, reconstruct, share, verify_deal, Deal, DealProof, Opening,
    WvssParams,
};
