//! Hermitian caps and ovoids of H(3,q²).
//!
//! A Hermitian cap is a set of points of the Hermitian surface U of
//! PG(3,q²) meeting every generator line in at most one point; an ovoid
//! meets every generator exactly once and has q³+1 points. This crate
//! enumerates U, maintains caps with incremental coverage counters, grows
//! them to complete caps with several strategies and runs seeded spectrum
//! experiments over the sizes of the resulting caps.

pub mod capfile;
pub mod capstate;
pub mod error;
pub mod galois;
pub mod harness;
pub mod hermitian;
pub mod rng;
pub mod search;
pub mod verify;

pub use capfile::CapFile;
pub use capstate::CapState;
pub use error::{Error, Result};
pub use galois::{FieldElem, FieldSpec, FieldTables};
pub use hermitian::{GeneratorLine, PointId, ProjPoint, SurfaceModel};
pub use rng::{derive_seed, SplitMix64};
pub use search::{complete, SearchConfig, SearchOutcome, StrategyKind, TieMode};
