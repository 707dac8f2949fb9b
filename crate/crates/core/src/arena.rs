//! Tournament conduction: winner matrices, seedings, manipulation schedules
//! and the round-by-round evaluation of a tree.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::label::{BitString, Symbol};
use crate::tree::{NodeId, TournamentTree};

pub type PlayerId = u32;

#[derive(Debug, Error)]
pub enum ArenaError {
    #[error("json parse error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("player {0} is out of range 1..={1}")]
    PlayerRange(PlayerId, u32),
    #[error("pair ({0}, {1}) listed more than once in the winner matrix")]
    DuplicatePair(PlayerId, PlayerId),
    #[error("pair ({0}, {1}) missing from the winner matrix")]
    MissingPair(PlayerId, PlayerId),
    #[error("entry ({0}, {1}) contradicts the strongest player {2}")]
    ContradictsStrongest(PlayerId, PlayerId, PlayerId),
    #[error("self-pair ({0}, {0}) has a fixed outcome and may not be listed")]
    SelfPair(PlayerId),
    #[error("invalid seed name {0:?}: {1}")]
    BadName(String, String),
    #[error("seeding misses seed name {0}")]
    SeedingIncomplete(BitString),
    #[error("seeding never assigns player {0}")]
    PlayerUnseeded(PlayerId),
    #[error("unknown vertex id {0}")]
    UnknownVertex(NodeId),
    #[error("vertex {0} is a leaf and cannot host a manipulation")]
    LeafManipulation(NodeId),
    #[error("vertex {0} is listed more than once in the schedule")]
    DuplicateVertex(NodeId),
    #[error("promoted player {player} is not among the arrivals at vertex {vertex}")]
    PromoteNotArriving { vertex: NodeId, player: PlayerId },
    #[error("promoted player {player} equals the honest winner at vertex {vertex}")]
    PromoteHonest { vertex: NodeId, player: PlayerId },
    #[error("vertex {0} has unsupported arity {1}")]
    Arity(NodeId, usize),
    #[error("leaf {0} carries no seed name")]
    UnnamedLeaf(NodeId),
}

/// Pairwise winner function over players `1..=n`, with an optional player
/// that beats everyone.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WinnerMatrix {
    n: u32,
    strongest: Option<PlayerId>,
    /// `beats[tri(i, j)]` is true when the smaller-id player of the pair wins.
    beats: Vec<bool>,
}

fn tri_index(n: u32, i: PlayerId, j: PlayerId) -> usize {
    debug_assert!(i < j && j <= n);
    let i = (i - 1) as usize;
    let j = (j - 1) as usize;
    let n = n as usize;
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

impl WinnerMatrix {
    /// Matrix where the lowest id wins every game, apart from the strongest
    /// player (when given) who wins everything.
    pub fn lowest_id_wins(n: u32, strongest: Option<PlayerId>) -> Self {
        Self::from_rule(n, strongest, |_, _| true)
    }

    /// Matrix where the highest id wins, apart from the strongest player.
    pub fn highest_id_wins(n: u32, strongest: Option<PlayerId>) -> Self {
        Self::from_rule(n, strongest, |_, _| false)
    }

    /// Builds a matrix from a rule deciding, for `i < j`, whether `i` wins.
    /// Pairs involving the strongest player ignore the rule.
    pub fn from_rule(
        n: u32,
        strongest: Option<PlayerId>,
        rule: impl Fn(PlayerId, PlayerId) -> bool,
    ) -> Self {
        let mut beats = vec![false; (n as usize * (n as usize - 1)) / 2];
        for i in 1..=n {
            for j in (i + 1)..=n {
                let low_wins = match strongest {
                    Some(s) if s == i => true,
                    Some(s) if s == j => false,
                    _ => rule(i, j),
                };
                beats[tri_index(n, i, j)] = low_wins;
            }
        }
        WinnerMatrix {
            n,
            strongest,
            beats,
        }
    }

    /// Builds a matrix from explicit `[winner, loser]` pairs. Every unordered
    /// pair of distinct players must appear exactly once and agree with the
    /// strongest player when one is declared.
    pub fn from_beats(
        n: u32,
        strongest: Option<PlayerId>,
        pairs: &[(PlayerId, PlayerId)],
    ) -> Result<Self, ArenaError> {
        if let Some(s) = strongest {
            if s == 0 || s > n {
                return Err(ArenaError::PlayerRange(s, n));
            }
        }
        let mut beats = vec![None; (n as usize * (n as usize - 1)) / 2];
        for &(winner, loser) in pairs {
            for p in [winner, loser] {
                if p == 0 || p > n {
                    return Err(ArenaError::PlayerRange(p, n));
                }
            }
            if winner == loser {
                return Err(ArenaError::SelfPair(winner));
            }
            if let Some(s) = strongest {
                if loser == s {
                    return Err(ArenaError::ContradictsStrongest(winner, loser, s));
                }
            }
            let (lo, hi) = (winner.min(loser), winner.max(loser));
            let slot = &mut beats[tri_index(n, lo, hi)];
            if slot.is_some() {
                return Err(ArenaError::DuplicatePair(lo, hi));
            }
            *slot = Some(winner == lo);
        }
        let mut resolved = Vec::with_capacity(beats.len());
        for i in 1..=n {
            for j in (i + 1)..=n {
                match beats[tri_index(n, i, j)] {
                    Some(low_wins) => resolved.push(low_wins),
                    None => return Err(ArenaError::MissingPair(i, j)),
                }
            }
        }
        Ok(WinnerMatrix {
            n,
            strongest,
            beats: resolved,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn strongest(&self) -> Option<PlayerId> {
        self.strongest
    }

    /// The winner of a game between `i` and `j`; a player beats itself.
    pub fn winner(&self, i: PlayerId, j: PlayerId) -> PlayerId {
        if i == j {
            return i;
        }
        let (lo, hi) = (i.min(j), i.max(j));
        if self.beats[tri_index(self.n, lo, hi)] {
            lo
        } else {
            hi
        }
    }

    pub fn to_json(&self) -> String {
        let mut pairs = Vec::new();
        for i in 1..=self.n {
            for j in (i + 1)..=self.n {
                if self.beats[tri_index(self.n, i, j)] {
                    pairs.push([i, j]);
                } else {
                    pairs.push([j, i]);
                }
            }
        }
        let doc = MatrixDoc {
            n: self.n,
            strongest: self.strongest,
            beats: pairs,
        };
        serde_json::to_string_pretty(&doc).expect("matrix documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ArenaError> {
        let doc: MatrixDoc = serde_json::from_str(text)?;
        let pairs: Vec<(PlayerId, PlayerId)> =
            doc.beats.iter().map(|&[w, l]| (w, l)).collect();
        Self::from_beats(doc.n, doc.strongest, &pairs)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDoc {
    n: u32,
    strongest: Option<PlayerId>,
    beats: Vec<[PlayerId; 2]>,
}

/// The winner of a three-player game, derived from the pairwise matrix.
///
/// The strongest player wins whenever present. Otherwise the player beating
/// both others pairwise wins, and a cycle resolves to the lowest id.
/// Duplicate arrivals reduce to the distinct set first.
pub fn ternary_game(a: PlayerId, b: PlayerId, c: PlayerId, winners: &WinnerMatrix) -> PlayerId {
    let mut distinct = vec![a, b, c];
    distinct.sort_unstable();
    distinct.dedup();
    if let Some(s) = winners.strongest() {
        if distinct.contains(&s) {
            return s;
        }
    }
    match distinct.as_slice() {
        [p] => *p,
        [p, q] => winners.winner(*p, *q),
        [p, q, t] => {
            for &cand in &[*p, *q, *t] {
                if distinct
                    .iter()
                    .all(|&other| winners.winner(cand, other) == cand)
                {
                    return cand;
                }
            }
            *p
        }
        _ => unreachable!("dedup of three elements"),
    }
}

/// Assignment of the tree's seed names to players.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seeding {
    map: BTreeMap<BitString, PlayerId>,
}

impl Seeding {
    pub fn new(map: BTreeMap<BitString, PlayerId>) -> Self {
        Seeding { map }
    }

    /// Assigns the sorted names round-robin to players `1..=n`, so surplus
    /// names beyond `n` wrap around and every player is seated at least once.
    pub fn round_robin(names: &BTreeSet<BitString>, n: u32) -> Self {
        let map = names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), (i as u32 % n) + 1))
            .collect();
        Seeding { map }
    }

    /// Round-robin seeding with the strongest player moved to `iw_name`.
    pub fn round_robin_with(
        names: &BTreeSet<BitString>,
        n: u32,
        iw: PlayerId,
        iw_name: &BitString,
    ) -> Self {
        let mut seeding = Self::round_robin(names, n);
        let displaced = seeding.map.insert(iw_name.clone(), iw);
        if let Some(displaced) = displaced {
            if displaced != iw && !seeding.map.values().any(|&p| p == displaced) {
                // Keep the mapping surjective: reseat the displaced player on
                // a spare name of some multiply-seated player.
                let mut counts: BTreeMap<PlayerId, usize> = BTreeMap::new();
                for &p in seeding.map.values() {
                    *counts.entry(p).or_default() += 1;
                }
                let spare = seeding
                    .map
                    .iter()
                    .find(|(name, p)| counts[p] > 1 && *name != iw_name)
                    .map(|(name, _)| name.clone());
                if let Some(name) = spare {
                    seeding.map.insert(name, displaced);
                }
            }
        }
        seeding
    }

    pub fn player(&self, name: &BitString) -> Option<PlayerId> {
        self.map.get(name).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BitString, PlayerId)> {
        self.map.iter().map(|(name, &p)| (name, p))
    }

    /// Total over the tree's names and surjective onto `1..=n`.
    pub fn validate_for(&self, tree: &TournamentTree, n: u32) -> Result<(), ArenaError> {
        for name in &tree.seed_names {
            if !self.map.contains_key(name) {
                return Err(ArenaError::SeedingIncomplete(name.clone()));
            }
        }
        for player in 1..=n {
            if !self.map.values().any(|&p| p == player) {
                return Err(ArenaError::PlayerUnseeded(player));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let doc: BTreeMap<String, PlayerId> = self
            .map
            .iter()
            .map(|(name, &p)| (name.to_string(), p))
            .collect();
        serde_json::to_string_pretty(&doc).expect("seeding documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ArenaError> {
        let doc: BTreeMap<String, PlayerId> = serde_json::from_str(text)?;
        let mut map = BTreeMap::new();
        for (name, player) in doc {
            let parsed: BitString = name
                .parse()
                .map_err(|e| ArenaError::BadName(name.clone(), format!("{e}")))?;
            map.insert(parsed, player);
        }
        Ok(Seeding { map })
    }
}

/// How a manipulated vertex picks its promoted player.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Promotion {
    Player(PlayerId),
    /// The lowest-id arrival that differs from the honest winner.
    Loser,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub vertex: NodeId,
    pub promote: Promotion,
}

/// The set of vertices an adversary manipulates during one conduction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ManipulationSchedule {
    pub entries: Vec<ScheduleEntry>,
}

impl ManipulationSchedule {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn entry_for(&self, vertex: NodeId) -> Option<&ScheduleEntry> {
        self.entries.iter().find(|e| e.vertex == vertex)
    }

    pub fn to_json(&self) -> String {
        let doc: Vec<ScheduleEntryDoc> = self
            .entries
            .iter()
            .map(|e| ScheduleEntryDoc {
                vertex: e.vertex,
                promote: match e.promote {
                    Promotion::Player(p) => PromoteDoc::Player(p),
                    Promotion::Loser => PromoteDoc::Rule("loser".to_string()),
                },
            })
            .collect();
        serde_json::to_string_pretty(&doc).expect("schedule documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, ArenaError> {
        let doc: Vec<ScheduleEntryDoc> = serde_json::from_str(text)?;
        let mut entries = Vec::with_capacity(doc.len());
        for item in doc {
            let promote = match item.promote {
                PromoteDoc::Player(p) => Promotion::Player(p),
                PromoteDoc::Rule(rule) if rule == "loser" => Promotion::Loser,
                PromoteDoc::Rule(other) => {
                    return Err(ArenaError::BadName(
                        other,
                        "promote must be a player id or \"loser\"".to_string(),
                    ))
                }
            };
            entries.push(ScheduleEntry {
                vertex: item.vertex,
                promote,
            });
        }
        Ok(ManipulationSchedule { entries })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleEntryDoc {
    vertex: NodeId,
    promote: PromoteDoc,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PromoteDoc {
    Player(PlayerId),
    Rule(String),
}

/// Per-leaf counts of scheduled vertices along the leaf-to-root path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduleReport {
    pub per_leaf: BTreeMap<NodeId, u32>,
    pub max: u32,
}

impl ScheduleReport {
    pub fn within(&self, k: u32) -> bool {
        self.max <= k
    }
}

/// Counts, for every leaf, how many scheduled vertices lie on its run.
/// The per-run budget passes iff the maximum count stays within `k`.
pub fn validate_schedule(
    tree: &TournamentTree,
    schedule: &ManipulationSchedule,
    _k: u32,
) -> Result<ScheduleReport, ArenaError> {
    let mut scheduled = vec![false; tree.len()];
    let mut seen = BTreeSet::new();
    for entry in &schedule.entries {
        let node = tree
            .node(entry.vertex)
            .ok_or(ArenaError::UnknownVertex(entry.vertex))?;
        if node.is_leaf() {
            return Err(ArenaError::LeafManipulation(entry.vertex));
        }
        if !seen.insert(entry.vertex) {
            return Err(ArenaError::DuplicateVertex(entry.vertex));
        }
        scheduled[entry.vertex] = true;
    }
    let mut counts = vec![0u32; tree.len()];
    let mut per_leaf = BTreeMap::new();
    let mut max = 0;
    for node in &tree.nodes {
        let own = u32::from(scheduled[node.id]);
        counts[node.id] = own
            + node
                .parent
                .map(|p| counts[p])
                .unwrap_or(0);
        if node.is_leaf() {
            per_leaf.insert(node.id, counts[node.id]);
            max = max.max(counts[node.id]);
        }
    }
    Ok(ScheduleReport { per_leaf, max })
}

/// The record of one internal vertex during conduction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameRecord {
    pub vertex: NodeId,
    pub arrivals: Vec<PlayerId>,
    pub honest: PlayerId,
    pub promoted: PlayerId,
    pub manipulated: bool,
    /// A scheduled manipulation whose arrivals all coincide cannot promote a
    /// different player; it is conducted honestly and reported void.
    pub void: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConductLog {
    pub games: Vec<GameRecord>,
    pub winner: PlayerId,
    /// True when the schedule exceeds the tree's per-run budget.
    pub over_budget: bool,
}

/// Conducts the tournament bottom-up. Over-budget schedules run anyway and
/// are flagged, so non-robustness witnesses can be demonstrated.
pub fn conduct(
    tree: &TournamentTree,
    seeding: &Seeding,
    winners: &WinnerMatrix,
    schedule: &ManipulationSchedule,
) -> Result<ConductLog, ArenaError> {
    let report = validate_schedule(tree, schedule, tree.k)?;
    let over_budget = !report.within(tree.k);

    let mut promoted: Vec<Option<PlayerId>> = vec![None; tree.len()];
    let mut games = Vec::new();
    // Children carry larger ids than their parents, so one reverse sweep
    // resolves every vertex after all of its children.
    for id in (0..tree.len()).rev() {
        let node = &tree.nodes[id];
        if node.is_leaf() {
            let name = node
                .seed_name
                .as_ref()
                .ok_or(ArenaError::UnnamedLeaf(id))?;
            let player = seeding
                .player(name)
                .ok_or_else(|| ArenaError::SeedingIncomplete(name.clone()))?;
            promoted[id] = Some(player);
            continue;
        }
        let arrivals: Vec<PlayerId> = node
            .children
            .iter()
            .map(|&c| promoted[c].expect("children resolved before parents"))
            .collect();
        let honest = match arrivals.as_slice() {
            [a, b] => winners.winner(*a, *b),
            [a, b, c] => ternary_game(*a, *b, *c, winners),
            other => return Err(ArenaError::Arity(id, other.len())),
        };
        let mut record = GameRecord {
            vertex: id,
            arrivals: arrivals.clone(),
            honest,
            promoted: honest,
            manipulated: false,
            void: false,
        };
        if let Some(entry) = schedule.entry_for(id) {
            let all_same = arrivals.iter().all(|&p| p == arrivals[0]);
            if all_same {
                record.void = true;
            } else {
                let target = match entry.promote {
                    Promotion::Player(p) => {
                        if !arrivals.contains(&p) {
                            return Err(ArenaError::PromoteNotArriving { vertex: id, player: p });
                        }
                        if p == honest {
                            return Err(ArenaError::PromoteHonest { vertex: id, player: p });
                        }
                        p
                    }
                    Promotion::Loser => *arrivals
                        .iter()
                        .filter(|&&p| p != honest)
                        .min()
                        .expect("arrivals differ, so a loser exists"),
                };
                record.promoted = target;
                record.manipulated = true;
            }
        }
        promoted[id] = Some(record.promoted);
        games.push(record);
    }
    games.reverse();
    Ok(ConductLog {
        games,
        winner: promoted[0].expect("root resolves last"),
        over_budget,
    })
}

/// The root-to-leaf edge-symbol string of a leaf, skipping symbol-less
/// padding edges. Reducing it reproduces the leaf's `(seed name, k)`.
pub fn path_to_transcript(tree: &TournamentTree, leaf: NodeId) -> Result<Vec<Symbol>, ArenaError> {
    let node = tree.node(leaf).ok_or(ArenaError::UnknownVertex(leaf))?;
    if !node.is_leaf() {
        return Err(ArenaError::UnknownVertex(leaf));
    }
    let mut symbols = Vec::new();
    let mut cur = leaf;
    loop {
        let node = &tree.nodes[cur];
        if let Some(sym) = node.edge_symbol {
            symbols.push(sym);
        }
        match node.parent {
            Some(p) => cur = p,
            None => break,
        }
    }
    symbols.reverse();
    Ok(symbols)
}
