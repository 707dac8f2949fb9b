//! Parameter sweeps: builds a grid of `(n, k)` instances, compares heights
//! against the analytic bounds, and optionally verifies robustness per cell.

use crate::adversary::verify_robust;
use crate::builder::{build_with_limit, BuildError, BuildSpec};
use crate::par;
use crate::tree::TreeMode;

/// Default node cap guarding a sweep against runaway cells.
pub const DEFAULT_NODE_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurveyRow {
    pub n: u64,
    pub k: u32,
    pub r: usize,
    pub height: usize,
    /// Height bound: `log2 n + 2k` for ternary, `r + (x+1)k` for binary.
    pub bound: usize,
    pub nodes: usize,
    pub verified: Option<bool>,
    /// Set when the node cap aborted this cell.
    pub skipped: bool,
}

#[derive(Debug, Clone)]
pub struct SurveyConfig {
    pub mode: TreeMode,
    pub n_values: Vec<u64>,
    pub k_values: Vec<u32>,
    pub x: u8,
    pub verify: bool,
    pub node_cap: usize,
}

/// Analytic height bound for one cell.
pub fn height_bound(mode: TreeMode, n: u64, k: u32, r: usize, x: u8) -> usize {
    match mode {
        TreeMode::Standard => n.trailing_zeros() as usize,
        TreeMode::Ternary => n.trailing_zeros() as usize + 2 * k as usize,
        TreeMode::Binary => r + (x as usize + 1) * k as usize,
    }
}

/// Builds every `(n, k)` cell, in input order. Cells run in parallel; the
/// output order is fixed by the input grid regardless of scheduling.
pub fn survey(config: &SurveyConfig) -> Vec<Result<SurveyRow, BuildError>> {
    let cells: Vec<(u64, u32)> = config
        .n_values
        .iter()
        .flat_map(|&n| config.k_values.iter().map(move |&k| (n, k)))
        .collect();
    par::map(cells, |(n, k)| survey_cell(config, n, k))
}

fn survey_cell(config: &SurveyConfig, n: u64, k: u32) -> Result<SurveyRow, BuildError> {
    let spec = match config.mode {
        TreeMode::Standard => BuildSpec::standard(n),
        TreeMode::Ternary => BuildSpec::ternary(n, k),
        TreeMode::Binary => BuildSpec::binary(n, k, config.x),
    };
    let tree = match build_with_limit(&spec, config.node_cap) {
        Ok(tree) => tree,
        Err(BuildError::NodeCap { .. }) => {
            return Ok(SurveyRow {
                n,
                k,
                r: 0,
                height: 0,
                bound: 0,
                nodes: 0,
                verified: None,
                skipped: true,
            })
        }
        Err(err) => return Err(err),
    };
    let verified = config
        .verify
        .then(|| verify_robust(&tree, k).map(|v| v.robust).unwrap_or(false));
    Ok(SurveyRow {
        n,
        k,
        r: tree.r,
        height: tree.height(),
        bound: height_bound(config.mode, n, k, tree.r, config.x),
        nodes: tree.len(),
        verified,
        skipped: false,
    })
}
