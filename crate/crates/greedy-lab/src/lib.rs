//! Exact sequence-space norms, greedy sets and greedy-type constants on
//! finitely supported vectors.
//!
//! The crate is organized bottom-up: [`vector`], [`sequence`] and [`pairs`]
//! hold the combinatorial substrate; [`norms`] evaluates every catalog norm
//! exactly; [`greedy`] runs the thresholding greedy algorithm and the reference
//! errors it is compared against; [`parameters`] computes the greedy-type
//! constants; [`properties`] decides the pointwise symmetry conditions and
//! related probes; [`suite`] bundles the verification checks the CLI runs.

pub mod catalog;
pub mod error;
pub mod greedy;
pub mod norms;
pub mod oracle;
pub mod pairs;
pub mod parameters;
pub mod properties;
pub mod sequence;
pub mod suite;
pub mod vector;
pub mod witnesses;

pub use catalog::Catalog;
pub use error::{LabError, Result};
pub use norms::{NormSpec, NormValue};
pub use pairs::{classify_pair, enumerate_pairs, AdmissiblePair, PairClass, PairContext};
pub use sequence::IndexSequence;
pub use vector::{indicator, prefix_project, project, SignPattern, SparseVector};
