//! Lumping maps, lumpability, Markov embeddings and the symmetrizer.

mod general;
mod lumping;
mod memoryless;
mod symmetrizer;

pub use general::MarkovEmbedding;
pub use lumping::{induced_edge_image, is_lumpable, lump, LumpingMap, LUMP_TOL};
pub use memoryless::{MemorylessEmbedding, WEIGHT_TOL};
pub use symmetrizer::{build_symmetrizer, verify_symmetrization, Symmetrizer, SymmetrizerFile};
