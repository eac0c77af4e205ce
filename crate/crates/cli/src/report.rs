//! Report plumbing: the JSON envelope, input digests, and the shared
//! JSON shapes for matroids and extension chains.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use matroid_lab::cuts::{ChainStatus, ExtensionChain};
use matroid_lab::ground::Subset;
use matroid_lab::matroid::Matroid;

#[derive(Clone, Serialize)]
pub struct InputFile {
    pub path: String,
    pub sha256: String,
}

impl InputFile {
    pub fn digest(path: &Path, bytes: &[u8]) -> InputFile {
        InputFile {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// The outer JSON report: same inputs and seed give byte-identical output
/// (timings are opt-in).
#[derive(Serialize)]
pub struct ReportEnv {
    pub command: &'static str,
    pub inputs: Vec<InputFile>,
    pub config: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Value>,
}

pub struct Outcome {
    pub results: Value,
    pub human: String,
    pub inputs: Vec<InputFile>,
    pub exit: u8,
}

pub fn subset_labels(m: &Matroid, s: &Subset) -> Vec<String> {
    m.ground_set()
        .labels_of(s)
        .into_iter()
        .map(str::to_string)
        .collect()
}

pub fn matroid_summary(m: &Matroid) -> Value {
    json!({
        "name": m.name(),
        "elements": m.size(),
        "rank": m.rank(),
        "flats_per_rank": (0..=m.rank())
            .map(|k| m.flats_of_rank(k).len())
            .collect::<Vec<_>>(),
    })
}

fn status_json(status: &ChainStatus) -> Value {
    match status {
        ChainStatus::Complete => json!("complete"),
        ChainStatus::Partial { remaining } => json!({"partial": {"remaining_pairs": remaining}}),
        ChainStatus::StoppedEarly { reason } => json!({"stopped_early": {"reason": reason}}),
    }
}

/// Machine-readable chain log: enough to replay or resume a budgeted run
/// (feed the result file back with a fresh budget).
pub fn chain_log_json(chain: &ExtensionChain) -> Value {
    // extensions append the new element at the end, so index i in the ground
    // set of step k is a base label for i < |base| and an earlier step's
    // label otherwise
    let base_labels = chain.base.ground_set().labels();
    let label_at = |i: usize| -> &str {
        if i < base_labels.len() {
            &base_labels[i]
        } else {
            &chain.steps[i - base_labels.len()].label
        }
    };
    let names = |s: &Subset| -> Vec<String> {
        s.iter().map(|i| label_at(i).to_string()).collect()
    };
    let steps: Vec<Value> = chain
        .steps
        .iter()
        .map(|step| {
            json!({
                "label": step.label,
                "generators": step.generators.iter().map(&names).collect::<Vec<_>>(),
                "cut_size": step.cut.len(),
                "cut_minimal_members": step.cut.minimal_members().iter()
                    .map(|f| names(f))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "base": matroid_summary(&chain.base),
        "steps": steps,
        "status": status_json(&chain.status),
        "result": matroid_summary(&chain.result),
    })
}
