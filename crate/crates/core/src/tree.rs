//! The tournament-tree data model: nodes, validation, height, balancing,
//! and the bit-exact JSON / DOT serializations.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{is_reduced, Alphabet, BitString, LabelState, Symbol};

pub type NodeId = usize;

/// Which construction a tree came from. Standard trees are plain complete
/// binary trees; ternary and binary trees are the redundant constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeMode {
    Standard,
    Ternary,
    Binary,
}

impl TreeMode {
    pub fn as_str(self) -> &'static str {
        match self {
            TreeMode::Standard => "standard",
            TreeMode::Ternary => "ternary",
            TreeMode::Binary => "binary",
        }
    }

    pub fn from_str_name(s: &str) -> Result<Self, TreeError> {
        match s {
            "standard" => Ok(TreeMode::Standard),
            "ternary" => Ok(TreeMode::Ternary),
            "binary" => Ok(TreeMode::Binary),
            other => Err(TreeError::Schema {
                field: "mode".to_string(),
                detail: format!("unknown mode {other:?}"),
            }),
        }
    }

    /// Children required at every internal vertex.
    pub fn arity(self) -> usize {
        match self {
            TreeMode::Ternary => 3,
            _ => 2,
        }
    }
}

/// One vertex of a tournament tree.
///
/// The transmission string `s` of a vertex is not stored; it is the
/// concatenation of `edge_symbol`s on the root path and can be rebuilt by a
/// path walk. Padding edges introduced by `balance` carry no symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeNode {
    pub id: NodeId,
    pub parent: Option<NodeId>,
    pub edge_symbol: Option<Symbol>,
    pub label: LabelState,
    pub children: Vec<NodeId>,
    pub seed_name: Option<BitString>,
}

impl TreeNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TournamentTree {
    pub mode: TreeMode,
    pub n: u64,
    pub k: u32,
    pub x: u8,
    pub r: usize,
    pub nodes: Vec<TreeNode>,
    /// Distinct seed names appearing at leaves; derived, not serialized.
    pub seed_names: BTreeSet<BitString>,
}

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema violation in field {field:?}: {detail}")]
    Schema { field: String, detail: String },
    #[error("balance is only defined for standard and binary trees")]
    UnsupportedMode,
}

/// A single validation failure, naming the offending node when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub node: Option<NodeId>,
    pub rule: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node {
            Some(id) => write!(f, "node {}: {}", id, self.rule),
            None => write!(f, "tree: {}", self.rule),
        }
    }
}

impl TournamentTree {
    pub fn root(&self) -> &TreeNode {
        &self.nodes[0]
    }

    pub fn node(&self, id: NodeId) -> Option<&TreeNode> {
        self.nodes.get(id)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn leaves(&self) -> impl Iterator<Item = &TreeNode> {
        self.nodes.iter().filter(|n| n.is_leaf())
    }

    /// The alphabet governing this tree's labels. Standard trees use the
    /// ternary alphabet, under which plain bit strings reduce to themselves.
    pub fn alphabet(&self) -> Alphabet {
        match self.mode {
            TreeMode::Binary => Alphabet::Binary { x: self.x },
            _ => Alphabet::Ternary,
        }
    }

    /// Depth of a node in edges from the root.
    pub fn depth(&self, id: NodeId) -> usize {
        let mut d = 0;
        let mut cur = id;
        while let Some(p) = self.nodes[cur].parent {
            d += 1;
            cur = p;
        }
        d
    }

    /// Maximum edge count over all root-to-leaf paths.
    pub fn height(&self) -> usize {
        let mut depths = vec![0usize; self.nodes.len()];
        let mut best = 0;
        for node in &self.nodes {
            if let Some(p) = node.parent {
                depths[node.id] = depths[p] + 1;
            }
            if node.is_leaf() {
                best = best.max(depths[node.id]);
            }
        }
        best
    }

    /// Recomputes the derived distinct-name set from the leaves.
    pub fn collect_seed_names(nodes: &[TreeNode]) -> BTreeSet<BitString> {
        nodes
            .iter()
            .filter_map(|n| n.seed_name.clone())
            .collect()
    }

    /// Follows edge symbols from the root; `None` if some step has no
    /// matching child. Padding copies share symbols, so the first match wins.
    pub fn walk(&self, symbols: &[Symbol]) -> Option<NodeId> {
        let mut cur = 0;
        for &sym in symbols {
            cur = *self.nodes[cur]
                .children
                .iter()
                .find(|&&c| self.nodes[c].edge_symbol == Some(sym))?;
        }
        Some(cur)
    }

    /// Checks every structural and label invariant, reporting each failure.
    /// Never aborts: a malformed tree yields a list, not a panic.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.nodes.is_empty() {
            out.push(Violation {
                node: None,
                rule: "tree has no nodes".to_string(),
            });
            return out;
        }

        let arity = self.mode.arity();
        for node in &self.nodes {
            let leafish = node.is_leaf();
            if leafish != node.seed_name.is_some() {
                out.push(Violation {
                    node: Some(node.id),
                    rule: "seed name present iff the node is a leaf".to_string(),
                });
            }
            if !leafish && node.children.len() != arity {
                out.push(Violation {
                    node: Some(node.id),
                    rule: format!(
                        "internal vertex has {} children, expected {arity}",
                        node.children.len()
                    ),
                });
            }
            if leafish {
                if node.label.f().len() != self.r {
                    out.push(Violation {
                        node: Some(node.id),
                        rule: format!(
                            "leaf label length {} differs from r = {}",
                            node.label.f().len(),
                            self.r
                        ),
                    });
                }
                if node.label.e() != self.k {
                    out.push(Violation {
                        node: Some(node.id),
                        rule: format!(
                            "leaf error count {} differs from k = {}",
                            node.label.e(),
                            self.k
                        ),
                    });
                }
                if node.seed_name.is_some() && node.seed_name.as_ref() != Some(node.label.f()) {
                    out.push(Violation {
                        node: Some(node.id),
                        rule: "leaf seed name differs from its reduced label".to_string(),
                    });
                }
            }
        }

        // Labels must equal the step-composition of edge symbols from the
        // root, skipping symbol-less padding edges.
        let alphabet = self.alphabet();
        let mut expected: Vec<Option<LabelState>> = vec![None; self.nodes.len()];
        expected[0] = Some(LabelState::root(alphabet));
        for node in &self.nodes {
            let Some(parent_label) = node
                .parent
                .and_then(|p| expected.get(p).cloned().flatten())
            else {
                if node.parent.is_some() {
                    expected[node.id] = None;
                }
                continue;
            };
            let stepped = match node.edge_symbol {
                Some(sym) => match parent_label.step(sym) {
                    Ok(next) => next,
                    Err(_) => {
                        out.push(Violation {
                            node: Some(node.id),
                            rule: "edge symbol invalid for the tree alphabet".to_string(),
                        });
                        continue;
                    }
                },
                None => parent_label,
            };
            expected[node.id] = Some(stepped);
        }
        for node in &self.nodes {
            if let Some(exp) = &expected[node.id] {
                if exp != &node.label {
                    out.push(Violation {
                        node: Some(node.id),
                        rule: "label differs from the step-composition of its root path"
                            .to_string(),
                    });
                }
            }
        }

        if (self.seed_names.len() as u64) < self.n {
            out.push(Violation {
                node: None,
                rule: format!(
                    "only {} distinct seed names for n = {}",
                    self.seed_names.len(),
                    self.n
                ),
            });
        }
        for name in &self.seed_names {
            if name.len() != self.r || !is_reduced(name, alphabet) {
                out.push(Violation {
                    node: None,
                    rule: format!("seed name {name} is not a valid name of length {}", self.r),
                });
            }
        }
        out
    }

    /// Lifts every shallow leaf into a complete subtree of copies so that all
    /// leaves share the maximum depth. Inserted edges carry no symbol and the
    /// copies repeat the original leaf's label and seed name.
    pub fn balance(&self) -> Result<TournamentTree, TreeError> {
        if self.mode == TreeMode::Ternary {
            return Err(TreeError::UnsupportedMode);
        }
        let target = self.height();

        enum Source {
            Real(NodeId),
            Pad(LabelState, BitString),
        }

        struct Item {
            source: Source,
            parent: Option<NodeId>,
            edge: Option<Symbol>,
            pad_left: usize,
        }

        let mut depths = vec![0usize; self.nodes.len()];
        for node in &self.nodes {
            if let Some(p) = node.parent {
                depths[node.id] = depths[p] + 1;
            }
        }

        let mut nodes: Vec<TreeNode> = Vec::new();
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(Item {
            source: Source::Real(0),
            parent: None,
            edge: None,
            pad_left: 0,
        });
        while let Some(item) = queue.pop_front() {
            let id = nodes.len();
            if let Some(p) = item.parent {
                nodes[p].children.push(id);
            }
            match item.source {
                Source::Real(old_id) => {
                    let old = &self.nodes[old_id];
                    let pad_left = if old.is_leaf() {
                        target - depths[old_id]
                    } else {
                        0
                    };
                    if old.is_leaf() && pad_left > 0 {
                        // Lift the leaf: it becomes an inner vertex above a
                        // complete subtree of copies carrying its name.
                        nodes.push(TreeNode {
                            id,
                            parent: item.parent,
                            edge_symbol: item.edge,
                            label: old.label.clone(),
                            children: Vec::new(),
                            seed_name: None,
                        });
                        let name = old.seed_name.clone().expect("leaves carry names");
                        for _ in 0..2 {
                            queue.push_back(Item {
                                source: Source::Pad(old.label.clone(), name.clone()),
                                parent: Some(id),
                                edge: None,
                                pad_left: pad_left - 1,
                            });
                        }
                    } else {
                        nodes.push(TreeNode {
                            id,
                            parent: item.parent,
                            edge_symbol: item.edge,
                            label: old.label.clone(),
                            children: Vec::new(),
                            seed_name: old.seed_name.clone(),
                        });
                        for &child in &old.children {
                            queue.push_back(Item {
                                source: Source::Real(child),
                                parent: Some(id),
                                edge: self.nodes[child].edge_symbol,
                                pad_left: 0,
                            });
                        }
                    }
                }
                Source::Pad(label, name) => {
                    let leaf = item.pad_left == 0;
                    nodes.push(TreeNode {
                        id,
                        parent: item.parent,
                        edge_symbol: None,
                        label: label.clone(),
                        children: Vec::new(),
                        seed_name: if leaf { Some(name.clone()) } else { None },
                    });
                    if !leaf {
                        for _ in 0..2 {
                            queue.push_back(Item {
                                source: Source::Pad(label.clone(), name.clone()),
                                parent: Some(id),
                                edge: None,
                                pad_left: item.pad_left - 1,
                            });
                        }
                    }
                }
            }
        }

        let seed_names = Self::collect_seed_names(&nodes);
        Ok(TournamentTree {
            mode: self.mode,
            n: self.n,
            k: self.k,
            x: self.x,
            r: self.r,
            nodes,
            seed_names,
        })
    }

    pub fn to_json(&self) -> String {
        let doc = TreeDoc {
            mode: self.mode.as_str().to_string(),
            n: self.n,
            k: self.k,
            x: self.x,
            r: self.r,
            nodes: self
                .nodes
                .iter()
                .map(|node| NodeDoc {
                    id: node.id,
                    parent: node.parent,
                    edge: node.edge_symbol.map(|s| s.as_char().to_string()),
                    f: node.label.f().to_string(),
                    e: node.label.e(),
                    children: node.children.clone(),
                    seed: node.seed_name.as_ref().map(|n| n.to_string()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("tree documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<TournamentTree, TreeError> {
        let doc: TreeDoc = serde_json::from_str(text)?;
        let mode = TreeMode::from_str_name(&doc.mode)?;
        let alphabet = match mode {
            TreeMode::Binary => {
                if doc.x < 2 {
                    return Err(TreeError::Schema {
                        field: "x".to_string(),
                        detail: format!("run length must be >= 2, got {}", doc.x),
                    });
                }
                Alphabet::Binary { x: doc.x }
            }
            _ => Alphabet::Ternary,
        };

        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (index, nd) in doc.nodes.iter().enumerate() {
            if nd.id != index {
                return Err(TreeError::Schema {
                    field: "id".to_string(),
                    detail: format!("node at position {index} has id {}", nd.id),
                });
            }
            let edge_symbol = match &nd.edge {
                None => None,
                Some(s) => {
                    let mut chars = s.chars();
                    let (Some(c), None) = (chars.next(), chars.next()) else {
                        return Err(TreeError::Schema {
                            field: "edge".to_string(),
                            detail: format!("node {index}: edge must be one character, got {s:?}"),
                        });
                    };
                    Some(Symbol::from_char(c).map_err(|e| TreeError::Schema {
                        field: "edge".to_string(),
                        detail: format!("node {index}: {e}"),
                    })?)
                }
            };
            let f: BitString = nd.f.parse().map_err(|e| TreeError::Schema {
                field: "f".to_string(),
                detail: format!("node {index}: {e}"),
            })?;
            let seed_name = match &nd.seed {
                None => None,
                Some(s) => Some(s.parse().map_err(|e| TreeError::Schema {
                    field: "seed".to_string(),
                    detail: format!("node {index}: {e}"),
                })?),
            };
            nodes.push(TreeNode {
                id: nd.id,
                parent: nd.parent,
                edge_symbol,
                label: LabelState::from_parts(f, nd.e, alphabet),
                children: nd.children.clone(),
                seed_name,
            });
        }

        // Structural soundness: parent/child references must agree and ids
        // must follow the canonical breadth-first numbering.
        if !nodes.is_empty() {
            if nodes[0].parent.is_some() {
                return Err(TreeError::Schema {
                    field: "parent".to_string(),
                    detail: "root must have a null parent".to_string(),
                });
            }
            for node in &nodes {
                for &c in &node.children {
                    if c >= nodes.len() || nodes[c].parent != Some(node.id) {
                        return Err(TreeError::Schema {
                            field: "children".to_string(),
                            detail: format!("node {}: child {c} does not point back", node.id),
                        });
                    }
                }
                if let Some(p) = node.parent {
                    if p >= nodes.len() || !nodes[p].children.contains(&node.id) {
                        return Err(TreeError::Schema {
                            field: "parent".to_string(),
                            detail: format!("node {}: parent {p} does not list it", node.id),
                        });
                    }
                }
            }
            let mut order = Vec::with_capacity(nodes.len());
            let mut queue = std::collections::VecDeque::from([0usize]);
            while let Some(id) = queue.pop_front() {
                order.push(id);
                queue.extend(nodes[id].children.iter().copied());
            }
            if order.len() != nodes.len() || order.iter().enumerate().any(|(i, &id)| i != id) {
                return Err(TreeError::Schema {
                    field: "id".to_string(),
                    detail: "node ids are not in breadth-first order".to_string(),
                });
            }
        }

        let seed_names = Self::collect_seed_names(&nodes);
        Ok(TournamentTree {
            mode,
            n: doc.n,
            k: doc.k,
            x: doc.x,
            r: doc.r,
            nodes,
            seed_names,
        })
    }

    /// Graphviz rendering: one statement per node labelled `f|e` (leaves also
    /// show their seed name) and one per edge labelled with its symbol.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph tournament {\n");
        for node in &self.nodes {
            let mut label = format!("{}|{}", node.label.f(), node.label.e());
            if let Some(name) = &node.seed_name {
                label.push_str(&format!("\\n{name}"));
            }
            out.push_str(&format!("  {} [label=\"{}\"];\n", node.id, label));
        }
        for node in &self.nodes {
            for &c in &node.children {
                let edge = match self.nodes[c].edge_symbol {
                    Some(sym) => sym.as_char().to_string(),
                    None => String::new(),
                };
                out.push_str(&format!("  {} -> {} [label=\"{}\"];\n", node.id, c, edge));
            }
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TreeDoc {
    mode: String,
    n: u64,
    k: u32,
    x: u8,
    r: usize,
    nodes: Vec<NodeDoc>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: usize,
    parent: Option<usize>,
    edge: Option<String>,
    f: String,
    e: u32,
    children: Vec<usize>,
    seed: Option<String>,
}
