//! Identity testing of reversible Markov chains from a single trajectory.
//!
//! A reversible reference chain `P̄` whose stationary law is rational,
//! `π̄ = p/Δ`, is mapped by a memoryless Markov embedding (the
//! *symmetrizer*) to a symmetric chain on `Δ` states. The embedding
//! preserves the Kazakos contrast `K(P, P̄) = 1 − ρ(P^{∘1/2} ∘ P̄^{∘1/2})`
//! between any two chains that share `P̄`'s support and stationary law, and
//! an observed trajectory of the unknown chain can be pushed through the same
//! embedding by resampling each state within its block. Identity testing
//! against `P̄` therefore reduces to identity testing against a symmetric
//! chain.
//!
//! Modules:
//! - [`markov`]: matrices, stationary laws, Perron roots, class membership;
//! - [`contrast`]: the contrast and Rényi-1/2 divergences;
//! - [`embedding`]: lumping, embeddings and the symmetrizer;
//! - [`paths`]: exact stationary path laws and the induced path morphism;
//! - [`sampling`]: trajectory simulation and embedding;
//! - [`testing`]: the reduction pipeline and Monte Carlo risk estimates;
//! - [`generate`], [`verify`]: random instances and the seeded oracle sweep.

pub mod contrast;
pub mod embedding;
mod error;
pub mod generate;
pub mod markov;
pub mod paths;
pub mod sampling;
pub mod testing;
pub mod verify;

pub use error::{Error, Result};
