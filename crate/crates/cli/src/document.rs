//! Result documents written by every subcommand.

use serde::{Deserialize, Serialize};
use varmine::discords::{DiscordMatrix, VarDiscordMatrix};
use varmine::motif_sets::MotifSet;
use varmine::oracle::PruningReport;
use varmine::profile::MatrixProfile;
use varmine::valmod::{LengthMotif, Valmp, VariableLengthMotif};

pub const SCHEMA_VERSION: u32 = 1;

/// Resolved job parameters; fields that do not apply to the job are omitted.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct JobConfig {
    pub input: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub column: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lmin: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lmax: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub top_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radius_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub min_frequency: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub baseline_lengths: Option<usize>,
    pub trace: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JobMeta {
    /// Subcommand, e.g. `motifs` or `oracle discords`.
    pub command: String,
    pub parameters: JobConfig,
    pub series_length: usize,
    /// Mining time, ingestion excluded; `null` with `--no-timing`.
    pub wall_time_secs: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum JobResult {
    Motifs {
        valmp: Valmp,
        top_motif: Option<VariableLengthMotif>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        per_length: Option<Vec<LengthMotif>>,
    },
    MotifSets {
        sets: Vec<MotifSet>,
        /// Motif pairs the sets were grown from.
        ranked_pairs: usize,
    },
    Discords {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        per_length: Option<Vec<DiscordMatrix>>,
        merged: VarDiscordMatrix,
    },
    MatrixProfile {
        profile: MatrixProfile,
    },
    Bench(BenchReport),
}

/// Range search against per-length recomputation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub lengths: usize,
    /// Lengths whose single-length matrix profile was timed.
    pub baseline_lengths: Vec<usize>,
    pub valmod_secs: Option<f64>,
    /// Mean single-length time over `baseline_lengths`.
    pub baseline_secs_per_length: Option<f64>,
    /// `baseline_secs_per_length * lengths`.
    pub baseline_secs: Option<f64>,
    /// `baseline_secs / valmod_secs`.
    pub speedup: Option<f64>,
    pub top_motif: Option<VariableLengthMotif>,
    pub pruning: PruningReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ResultDocument {
    pub schema_version: u32,
    pub job: JobMeta,
    pub result: JobResult,
    /// Pruning statistics, present with `--trace`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PruningReport>,
}

impl ResultDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}
