//! Construction of standard, ternary and binary tournament trees.
//!
//! The ternary and binary builders expand vertex labels with the
//! cancellation rules of [`crate::label`], prune children whose labels can
//! no longer reach a leaf, and pad under-full vertices by duplicating an
//! existing child subtree. Because expansion is purely label-driven, padding
//! amounts to repeating a child's edge symbol: the duplicated subtree grows
//! identically on its own.

use std::collections::VecDeque;

use thiserror::Error;

use crate::label::{min_name_length, Alphabet, LabelState, Symbol};
use crate::tree::{TournamentTree, TreeMode, TreeNode};

/// Parameters of a tree construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildSpec {
    pub mode: TreeMode,
    pub n: u64,
    pub k: u32,
    pub x: u8,
}

impl BuildSpec {
    pub fn standard(n: u64) -> Self {
        BuildSpec {
            mode: TreeMode::Standard,
            n,
            k: 0,
            x: 2,
        }
    }

    pub fn ternary(n: u64, k: u32) -> Self {
        BuildSpec {
            mode: TreeMode::Ternary,
            n,
            k,
            x: 2,
        }
    }

    pub fn binary(n: u64, k: u32, x: u8) -> Self {
        BuildSpec {
            mode: TreeMode::Binary,
            n,
            k,
            x,
        }
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.n < 2 {
            return Err(BuildError::TooFewPlayers { n: self.n });
        }
        match self.mode {
            TreeMode::Standard | TreeMode::Ternary => {
                if !self.n.is_power_of_two() {
                    return Err(BuildError::NotPowerOfTwo { n: self.n });
                }
            }
            TreeMode::Binary => {
                if self.x < 2 {
                    return Err(BuildError::BadRunLength { x: self.x });
                }
            }
        }
        if self.mode == TreeMode::Standard && self.k != 0 {
            return Err(BuildError::StandardWithBudget { k: self.k });
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error("standard and ternary constructions need a power-of-two player count, got {n}")]
    NotPowerOfTwo { n: u64 },
    #[error("a tournament needs at least two players, got {n}")]
    TooFewPlayers { n: u64 },
    #[error("run-length parameter x must be at least 2, got {x}")]
    BadRunLength { x: u8 },
    #[error("standard trees have no manipulation budget, got k = {k}")]
    StandardWithBudget { k: u32 },
    #[error("construction exceeded the node cap of {cap}")]
    NodeCap { cap: usize },
}

/// Counters gathered while building; `node_visits` is incremented exactly
/// once per emitted node, so equality with the node count witnesses that the
/// construction does constant label work per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BuildStats {
    pub node_visits: u64,
}

/// True when some leaf label (`|f| = r`, `e = k`) is still reachable from
/// `label` under the expansion rules.
///
/// Any label with `e <= k` and `|f| <= r` is live: error budget can be spent
/// by signalling chains and the name finished with zero-appends. Labels with
/// `|f| > r` sit on a signalling chain whose only continuation appends ones;
/// liveness follows the forced cancellations until the length returns to `r`
/// or the budget runs out.
pub fn is_live(label: &LabelState, r: usize, k: u32) -> bool {
    if label.e() > k {
        return false;
    }
    match label.alphabet() {
        Alphabet::Ternary => label.f().len() <= r,
        Alphabet::Binary { .. } => {
            let mut f = label.f().clone();
            let mut e = label.e();
            while f.len() > r {
                if e >= k {
                    return false;
                }
                let run = f.trailing_ones();
                if run == f.len() {
                    f.truncate(0);
                } else {
                    // The forced ones complete a run of x; the cancellation
                    // also consumes the zero in front of it.
                    f.truncate(f.len() - run - 1);
                }
                e += 1;
            }
            true
        }
    }
}

/// Complete binary tree of height `log2 n` whose leaf names spell the paths.
pub fn build_standard(n: u64) -> Result<TournamentTree, BuildError> {
    let spec = BuildSpec::standard(n);
    spec.validate()?;
    Ok(grow(&spec, None)?.0)
}

/// Ternary robust tree for `n = 2^r` players and per-run budget `k`.
///
/// With `k = 0` no error child is ever emitted and the construction is the
/// standard tree, which is returned as such.
pub fn build_ternary(n: u64, k: u32) -> Result<TournamentTree, BuildError> {
    let spec = BuildSpec::ternary(n, k);
    spec.validate()?;
    if k == 0 {
        return build_standard(n);
    }
    Ok(grow(&spec, None)?.0)
}

/// Binary robust tree for `n` players, per-run budget `k` and run length `x`.
pub fn build_binary(n: u64, k: u32, x: u8) -> Result<TournamentTree, BuildError> {
    let spec = BuildSpec::binary(n, k, x);
    spec.validate()?;
    Ok(grow(&spec, None)?.0)
}

/// Builds per `spec` and also returns construction counters.
pub fn build_with_stats(spec: &BuildSpec) -> Result<(TournamentTree, BuildStats), BuildError> {
    spec.validate()?;
    if spec.mode == TreeMode::Ternary && spec.k == 0 {
        return grow(&BuildSpec::standard(spec.n), None);
    }
    grow(spec, None)
}

/// Builds per `spec`, aborting once the node count would exceed `cap`.
pub fn build_with_limit(spec: &BuildSpec, cap: usize) -> Result<TournamentTree, BuildError> {
    spec.validate()?;
    if spec.mode == TreeMode::Ternary && spec.k == 0 {
        return Ok(grow(&BuildSpec::standard(spec.n), Some(cap))?.0);
    }
    Ok(grow(spec, Some(cap))?.0)
}

/// Ternary tree driven directly by the name length instead of `n`.
pub fn build_ternary_tree(r: usize, k: u32) -> Result<TournamentTree, BuildError> {
    build_ternary(1u64 << r, k)
}

/// Binary tree driven directly by the name length instead of `n`.
///
/// The tree shape depends only on `(r, k, x)`; `n` merely selects `r`. This
/// entry point is what protocol-to-tree correspondence checks use.
pub fn build_binary_tree(r: usize, k: u32, x: u8) -> Result<TournamentTree, BuildError> {
    if x < 2 {
        return Err(BuildError::BadRunLength { x });
    }
    assert!(r >= 1, "name length must be positive");
    let names = crate::label::valid_name_count(r, x).min(u64::MAX as u128) as u64;
    let spec = BuildSpec {
        mode: TreeMode::Binary,
        n: names,
        k,
        x,
    };
    Ok(grow(&spec, None)?.0)
}

fn child_labels(spec: &BuildSpec, r: usize, label: &LabelState) -> Vec<(Symbol, LabelState)> {
    let mut out = Vec::with_capacity(3);
    match spec.mode {
        TreeMode::Standard => {
            if label.f().len() < r {
                for sym in [Symbol::Zero, Symbol::One] {
                    out.push((sym, label.step(sym).expect("bits are ternary symbols")));
                }
            }
        }
        TreeMode::Ternary => {
            if label.f().len() < r {
                for sym in [Symbol::Zero, Symbol::One] {
                    out.push((sym, label.step(sym).expect("bits are ternary symbols")));
                }
            }
            if label.e() < spec.k && !label.f().is_empty() {
                let stepped = label.step(Symbol::Bot).expect("ternary accepts the error symbol");
                out.push((Symbol::Bot, stepped));
            }
        }
        TreeMode::Binary => {
            if label.f().len() < r {
                let stepped = label.step(Symbol::Zero).expect("zero is a bit");
                if is_live(&stepped, r, spec.k) {
                    out.push((Symbol::Zero, stepped));
                }
            }
            // The one-append covers the paper's |f| < r and |f| = r rules and
            // continues the signalling chain when |f| has overshot r. Children
            // whose labels cannot reach a leaf are pruned.
            let stepped = label.step(Symbol::One).expect("one is a bit");
            if is_live(&stepped, r, spec.k) {
                out.push((Symbol::One, stepped));
            }
        }
    }
    out
}

fn grow(
    spec: &BuildSpec,
    cap: Option<usize>,
) -> Result<(TournamentTree, BuildStats), BuildError> {
    let r = match spec.mode {
        TreeMode::Standard | TreeMode::Ternary => spec.n.trailing_zeros() as usize,
        TreeMode::Binary => min_name_length(spec.n, spec.x),
    };
    let alphabet = match spec.mode {
        TreeMode::Binary => Alphabet::Binary { x: spec.x },
        _ => Alphabet::Ternary,
    };
    let arity = spec.mode.arity();

    let mut nodes: Vec<TreeNode> = Vec::new();
    let mut stats = BuildStats::default();
    let mut queue: VecDeque<(Option<usize>, Option<Symbol>, LabelState)> = VecDeque::new();
    queue.push_back((None, None, LabelState::root(alphabet)));

    while let Some((parent, edge, label)) = queue.pop_front() {
        if let Some(cap) = cap {
            if nodes.len() >= cap {
                return Err(BuildError::NodeCap { cap });
            }
        }
        stats.node_visits += 1;
        let id = nodes.len();
        if let Some(p) = parent {
            nodes[p].children.push(id);
        }

        let is_leaf = label.f().len() == r && label.e() == spec.k;
        let seed_name = is_leaf.then(|| label.f().clone());
        let mut expansions = Vec::new();
        if !is_leaf {
            expansions = child_labels(spec, r, &label);
            debug_assert!(
                !expansions.is_empty(),
                "non-leaf labels must keep at least one live child"
            );
            // Pad by repeating the first child; the duplicate subtree unfolds
            // identically from the repeated label.
            while expansions.len() < arity {
                expansions.push(expansions[0].clone());
            }
        }
        nodes.push(TreeNode {
            id,
            parent,
            edge_symbol: edge,
            label,
            children: Vec::new(),
            seed_name,
        });
        for (sym, child_label) in expansions {
            queue.push_back((Some(id), Some(sym), child_label));
        }
    }

    let seed_names = TournamentTree::collect_seed_names(&nodes);
    let tree = TournamentTree {
        mode: spec.mode,
        n: spec.n,
        k: spec.k,
        x: spec.x,
        r,
        nodes,
        seed_names,
    };
    Ok((tree, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::label::{reduce_ternary, seed_names, BitString};
    use crate::tree::TreeMode;

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn standard_tree_spells_paths() {
        let tree = build_standard(2).unwrap();
        assert_eq!(tree.height(), 1);
        let names: Vec<String> = tree.leaves().map(|l| l.seed_name.clone().unwrap().to_string()).collect();
        assert_eq!(names, vec!["0", "1"]);

        let tree = build_standard(8).unwrap();
        assert_eq!(tree.height(), 3);
        assert_eq!(tree.seed_names.len(), 8);

        let tree = build_standard(4).unwrap();
        let names: std::collections::BTreeSet<String> =
            tree.seed_names.iter().map(|n| n.to_string()).collect();
        assert_eq!(
            names,
            ["00", "01", "10", "11"].iter().map(|s| s.to_string()).collect()
        );
    }

    #[test]
    fn standard_rejects_non_powers_of_two() {
        assert!(matches!(
            build_standard(6),
            Err(BuildError::NotPowerOfTwo { n: 6 })
        ));
    }

    #[test]
    fn ternary_without_budget_is_the_standard_tree() {
        assert_eq!(build_ternary(8, 0).unwrap(), build_standard(8).unwrap());
    }

    #[test]
    fn ternary_height_is_exact() {
        let tree = build_ternary(8, 1).unwrap();
        assert_eq!(tree.height(), 5);
        assert!(tree.validate().is_empty());
    }

    #[test]
    fn ternary_error_paths_reach_expected_leaves() {
        let tree = build_ternary(2, 1).unwrap();
        let symbols = crate::label::parse_symbols("0E0").unwrap();
        let id = tree.walk(&symbols).expect("path 0,E,0 exists");
        let node = tree.node(id).unwrap();
        assert!(node.is_leaf());
        assert_eq!(node.seed_name, Some(bits("0")));
        assert_eq!(node.label.e(), 1);
        let reduced = reduce_ternary(&symbols);
        assert_eq!(reduced.f(), &bits("0"));
        assert_eq!(reduced.e(), 1);
    }

    #[test]
    fn binary_small_trees_match_examples() {
        let tree = build_binary(2, 0, 2).unwrap();
        assert_eq!(tree.height(), 1);
        let names: Vec<String> = tree.seed_names.iter().map(|n| n.to_string()).collect();
        assert_eq!(names, vec!["0", "1"]);

        let tree = build_binary(16, 1, 2).unwrap();
        assert_eq!(tree.r, 6);
        assert!(tree.height() <= 9);

        let tree = build_binary(4, 0, 2).unwrap();
        assert_eq!(tree.r, 3);
        let expected: std::collections::BTreeSet<BitString> =
            seed_names(3, 2).into_iter().collect();
        assert_eq!(tree.seed_names, expected);
    }

    #[test]
    fn binary_trees_validate_and_pad_to_full_arity() {
        for (n, k, x) in [(2, 1, 2), (4, 1, 2), (8, 2, 2), (5, 1, 3)] {
            let tree = build_binary(n, k, x).unwrap();
            assert!(tree.validate().is_empty(), "violations for n={n} k={k} x={x}");
            for node in &tree.nodes {
                if !node.is_leaf() {
                    assert_eq!(node.children.len(), 2);
                }
            }
        }
    }

    #[test]
    fn liveness_matches_the_reachability_rule() {
        let alphabet = Alphabet::binary(2).unwrap();
        let r = 3;
        let k = 1;
        // e would exceed k after the forced cancellation.
        let dead = LabelState::from_parts(bits("1"), k, alphabet).step(Symbol::One).unwrap();
        assert!(!is_live(&dead, r, k));
        // Length r ending in zero, budget left: two further ones cancel back.
        let live = LabelState::from_parts(bits("010"), 0, alphabet).step(Symbol::One).unwrap();
        assert_eq!(live.f().len(), r + 1);
        assert!(is_live(&live, r, k));
        assert!(is_live(&LabelState::root(alphabet), r, k));
    }

    #[test]
    fn node_visits_equal_node_count() {
        let spec = BuildSpec::binary(64, 3, 2);
        let (tree, stats) = build_with_stats(&spec).unwrap();
        assert_eq!(stats.node_visits, tree.len() as u64);
    }

    #[test]
    fn node_cap_aborts_large_builds() {
        let spec = BuildSpec::binary(64, 3, 2);
        assert!(matches!(
            build_with_limit(&spec, 10),
            Err(BuildError::NodeCap { cap: 10 })
        ));
    }

    #[test]
    fn padding_preserves_distinct_names() {
        for x in [2u8, 3, 4] {
            let tree = build_binary(6, 1, x).unwrap();
            let expected: std::collections::BTreeSet<BitString> =
                seed_names(tree.r, x).into_iter().collect();
            assert_eq!(tree.seed_names, expected);
            assert_eq!(tree.mode, TreeMode::Binary);
        }
    }
}
