//! Serialized result forms: assignment documents, spectrum and level
//! tables, and the float formatting they share.
//!
//! Every emitter builds a complete string so callers can write it in one
//! shot; combined with fixed field order and sorted maps this is what
//! makes repeated runs byte-identical.

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use blockspectral::algo::{BlockAssignment, Provenance};
use blockspectral::spectral::SpectrumResult;

use crate::error::{CliError, CliResult};
use crate::io::IdMap;

/// 17 significant digits in scientific notation: enough to reproduce any
/// f64 bit for bit when parsed back.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

/// The JSON document a detection or ranking run leaves behind. Labels are
/// keyed by the node names of the input file; `c_a` appears once the
/// labels are ranks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssignmentDoc {
    pub algorithm: String,
    pub k: usize,
    pub seed: u64,
    pub ranked: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub c_a: Option<f64>,
    pub labels: BTreeMap<String, usize>,
}

impl AssignmentDoc {
    pub fn new(a: &BlockAssignment, ids: &IdMap, c_a: Option<f64>) -> Self {
        let labels = a
            .labels
            .iter()
            .enumerate()
            .map(|(i, &l)| (ids.name(i).to_string(), l))
            .collect();
        AssignmentDoc {
            algorithm: a.provenance.algorithm.clone(),
            k: a.k,
            seed: a.provenance.seed,
            ranked: a.ranked,
            c_a,
            labels,
        }
    }

    /// Labels in the dense node order of `ids`. The document must cover
    /// exactly the nodes of the graph it is being applied to.
    pub fn labels_for(&self, ids: &IdMap) -> CliResult<Vec<usize>> {
        if self.labels.len() != ids.len() {
            return Err(CliError::data(format!(
                "assignment covers {} nodes but the graph has {}",
                self.labels.len(),
                ids.len()
            )));
        }
        (0..ids.len())
            .map(|i| {
                self.labels.get(ids.name(i)).copied().ok_or_else(|| {
                    CliError::data(format!("assignment has no label for node {:?}", ids.name(i)))
                })
            })
            .collect()
    }

    /// Rebuilds enough of a [`BlockAssignment`] to feed ranking and
    /// refinement with this document's labels.
    pub fn to_assignment(&self, ids: &IdMap) -> CliResult<BlockAssignment> {
        Ok(BlockAssignment {
            labels: self.labels_for(ids)?,
            k: self.k,
            ranked: self.ranked,
            provenance: provenance_stub(&self.algorithm, self.k, self.seed),
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain fields serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text)
            .map_err(|e| CliError::parse(format!("assignment document: {e}")))
    }
}

/// A provenance record for labels that arrived from a file or a baseline
/// rather than a detector run in this process.
pub fn provenance_stub(algorithm: &str, k: usize, seed: u64) -> Provenance {
    Provenance {
        algorithm: algorithm.to_string(),
        k,
        seed,
        filter: None,
        embedding_fallback: false,
        solver_iterations: 0,
        solver_converged: true,
        refined: false,
        warnings: Vec::new(),
        deleted_block_edges: Vec::new(),
    }
}

/// Wraps baseline labels so they can flow through ranking like any other
/// assignment.
pub fn baseline_assignment(
    labels: Vec<usize>,
    k: usize,
    algorithm: &str,
    seed: u64,
) -> BlockAssignment {
    BlockAssignment {
        labels,
        k,
        ranked: false,
        provenance: provenance_stub(algorithm, k, seed),
    }
}

/// One row per eigenpair: real part, imaginary part, modulus, and the
/// solver's residual for that pair.
pub fn spectrum_csv(spectrum: &SpectrumResult) -> String {
    let mut out = String::from("re,im,modulus,residual\n");
    for pair in &spectrum.pairs {
        out.push_str(&format!(
            "{},{},{},{}\n",
            sig17(pair.value.re),
            sig17(pair.value.im),
            sig17(pair.value.norm()),
            sig17(pair.residual)
        ));
    }
    out
}

/// Per-node score table, `id,level`, in dense node order.
pub fn levels_csv(ids: &IdMap, levels: &[f64]) -> String {
    let mut out = String::from("id,level\n");
    for (i, &level) in levels.iter().enumerate() {
        out.push_str(&format!("{},{}\n", ids.name(i), sig17(level)));
    }
    out
}

/// Reads a two-column `id,value` CSV (header required) into a map.
pub fn parse_scores(reader: impl BufRead) -> CliResult<BTreeMap<String, f64>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let mut out = BTreeMap::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| CliError::parse(format!("scores row {}: {e}", i + 1)))?;
        if record.len() != 2 {
            return Err(CliError::parse(format!(
                "scores row {}: expected id,value, found {} fields",
                i + 1,
                record.len()
            )));
        }
        let value: f64 = record[1]
            .trim()
            .parse()
            .map_err(|_| CliError::parse(format!("scores row {}: bad value {:?}", i + 1, &record[1])))?;
        out.insert(record[0].trim().to_string(), value);
    }
    if out.is_empty() {
        return Err(CliError::parse("scores file has no rows"));
    }
    Ok(out)
}
