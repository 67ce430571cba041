//! Variable-length motif and discord discovery in univariate time series.
//!
//! The matrix profile of the shortest length is computed in full. For every
//! longer length a small set of neighbors per window, chosen by a lower bound
//! on their future distance, is extended in constant time; rows are only
//! recomputed when those neighbors cannot certify the answer.

pub mod bounds;
pub mod discords;
pub mod error;
pub mod motif_sets;
pub mod oracle;
pub mod policy;
pub mod profile;
pub mod serde_float;
pub mod series;
pub mod synthetic;
pub mod valmod;

pub use discords::{
    topkm_discord_discovery, DiscordConfig, DiscordMatrix, DiscordRun, VarDiscordMatrix,
};
pub use error::{Error, Result};
pub use motif_sets::{motif_sets, MotifSet, MotifSetConfig, MotifSetRun};
pub use profile::{compute_matrix_profile, MatrixProfile};
pub use series::{ingest, DataSeries};
pub use valmod::{valmod, valmod_run, Valmp, ValmodConfig, ValmodRun};
