//! Robustness verification.
//!
//! [`reach_sets`] runs a reach-set dynamic program against an adaptive
//! adversary: with the strongest player's seat fixed, `R(v, b)` collects
//! every player the adversary can promote to vertex `v` spending at most `b`
//! manipulations on each path through `v`'s subtree. The adversary decides
//! every game among non-strongest players on the fly, so it dominates every
//! fixed winner function that exhibits a strongest player: an empty reach of
//! anyone but the strongest certifies robustness outright.
//!
//! [`brute_force_robust`] is the independent oracle for tiny instances: it
//! enumerates every fixed winner matrix with a designated strongest player
//! and every surjective seeding, rerunning the budgeted recurrence with the
//! winner function pinned. [`lemma_check`] operationalizes the prefix
//! invariant that drives the constructions' correctness argument.

use thiserror::Error;

use crate::arena::{
    conduct, ternary_game, validate_schedule, ManipulationSchedule, PlayerId, Promotion,
    ScheduleEntry, Seeding, WinnerMatrix,
};
use crate::label::{prefix_drop_binary, prefix_drop_ternary, BitString};
use crate::par;
use crate::tree::{NodeId, TournamentTree, TreeMode};

#[derive(Debug, Error)]
pub enum AdversaryError {
    #[error("seed name {0} does not appear in the tree")]
    UnknownName(BitString),
    #[error("brute force is capped at {max} {what}, got {got}")]
    GuardRail {
        what: &'static str,
        max: usize,
        got: usize,
    },
    #[error("tree has no nodes")]
    EmptyTree,
}

/// A set of players over a small fixed universe.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerSet {
    words: Vec<u64>,
    len: usize,
}

impl PlayerSet {
    pub fn empty(universe: usize) -> Self {
        PlayerSet {
            words: vec![0; universe.div_ceil(64)],
            len: 0,
        }
    }

    pub fn insert(&mut self, p: usize) {
        let word = &mut self.words[p / 64];
        let bit = 1u64 << (p % 64);
        if *word & bit == 0 {
            *word |= bit;
            self.len += 1;
        }
    }

    pub fn contains(&self, p: usize) -> bool {
        self.words[p / 64] & (1u64 << (p % 64)) != 0
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn union_with(&mut self, other: &PlayerSet) {
        for (w, o) in self.words.iter_mut().zip(&other.words) {
            *w |= o;
        }
        self.len = self.words.iter().map(|w| w.count_ones() as usize).sum();
    }

    pub fn is_subset(&self, other: &PlayerSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(w, o)| w & !o == 0)
    }

    /// True iff the set is exactly `{p}`.
    pub fn is_singleton(&self, p: usize) -> bool {
        self.len == 1 && self.contains(p)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter_map(move |b| (w & (1u64 << b) != 0).then_some(i * 64 + b))
        })
    }

    /// Elements excluding `p`, short-circuiting emptiness checks.
    fn has_other_than(&self, p: usize) -> bool {
        self.len > 1 || (self.len == 1 && !self.contains(p))
    }
}

/// Reach sets `R(v, b)` for one seat of the strongest player.
///
/// Players are collapsed to the tree's distinct seed names: the adversary
/// controls all games among non-strongest players, so only the strongest
/// player's seat matters and each other name acts as its own player.
#[derive(Debug, Clone)]
pub struct ReachTable {
    names: Vec<BitString>,
    iw: usize,
    k: u32,
    /// `sets[node][budget]`
    sets: Vec<Vec<PlayerSet>>,
}

impl ReachTable {
    pub fn names(&self) -> &[BitString] {
        &self.names
    }

    pub fn iw_index(&self) -> usize {
        self.iw
    }

    pub fn budget(&self) -> u32 {
        self.k
    }

    pub fn set(&self, v: NodeId, b: u32) -> &PlayerSet {
        &self.sets[v][b as usize]
    }

    /// Names reachable at `(v, b)`, in name order.
    pub fn reachable(&self, v: NodeId, b: u32) -> Vec<&BitString> {
        self.set(v, b).iter().map(|i| &self.names[i]).collect()
    }

    /// True iff only the strongest player can be promoted to `v` within `b`.
    pub fn only_strongest(&self, v: NodeId, b: u32) -> bool {
        self.set(v, b).is_singleton(self.iw)
    }
}

/// Adaptive-adversary reach DP for the strongest player seated at `iw_name`.
///
/// The per-run budget is error-capped: on the segment from any leaf up to a
/// vertex carrying error count `e`, at most `k - e` games may be
/// manipulated, matching the error signals still available on that segment.
/// At the root (`e = 0`) this is exactly the `k`-per-run budget, and in
/// standard trees (`e = 0` everywhere) the cap never binds.
pub fn reach_sets(
    tree: &TournamentTree,
    iw_name: &BitString,
    k: u32,
) -> Result<ReachTable, AdversaryError> {
    if tree.is_empty() {
        return Err(AdversaryError::EmptyTree);
    }
    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    let iw = names
        .binary_search(iw_name)
        .map_err(|_| AdversaryError::UnknownName(iw_name.clone()))?;
    let universe = names.len();
    let budgets = k as usize + 1;

    let mut sets: Vec<Vec<PlayerSet>> = vec![Vec::new(); tree.len()];
    for id in (0..tree.len()).rev() {
        let node = &tree.nodes[id];
        if node.is_leaf() {
            let name = node.seed_name.as_ref().expect("leaves carry names");
            let player = names
                .binary_search(name)
                .expect("leaf names are collected from the tree");
            let mut set = PlayerSet::empty(universe);
            set.insert(player);
            sets[id] = vec![set; budgets];
            continue;
        }
        let avail = k.saturating_sub(node.label.e()) as usize;
        let mut per_budget = Vec::with_capacity(budgets);
        for b in 0..budgets {
            let b = b.min(avail);
            let mut reach = PlayerSet::empty(universe);
            // Honest play: the strongest player wins whenever it arrives; any
            // other tuple outcome is the adversary's pick, provided every
            // child can supply a non-strongest arrival.
            let children = &node.children;
            if children.iter().any(|&c| sets[c][b].contains(iw)) {
                reach.insert(iw);
            }
            if children.iter().all(|&c| sets[c][b].has_other_than(iw)) {
                for &c in children {
                    for p in sets[c][b].iter() {
                        if p != iw {
                            reach.insert(p);
                        }
                    }
                }
            }
            // Manipulating this game charges every run below it, so children
            // contribute at budget b - 1. Any arrival other than the honest
            // winner can be promoted unless the arrivals all coincide.
            if b >= 1 && children.len() >= 2 {
                let mut union = PlayerSet::empty(universe);
                for &c in children {
                    union.union_with(&sets[c][b - 1]);
                }
                if union.len() >= 2 {
                    for p in union.iter() {
                        if p != iw {
                            reach.insert(p);
                        }
                    }
                }
            }
            per_budget.push(reach);
        }
        sets[id] = per_budget;
    }

    Ok(ReachTable {
        names,
        iw,
        k,
        sets,
    })
}

/// The outcome of a robustness check, with a replayable counterexample when
/// the tree is not robust.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub robust: bool,
    pub witness: Option<Witness>,
}

/// A concrete dethroning: seat the strongest player at `iw_name`, conduct
/// with `winners` and `schedule`, and a different player wins.
#[derive(Debug, Clone)]
pub struct Witness {
    pub iw_name: BitString,
    pub iw_player: PlayerId,
    pub seeding: Seeding,
    pub winners: WinnerMatrix,
    pub schedule: ManipulationSchedule,
    pub winner: PlayerId,
}

impl Witness {
    /// Re-runs the conduction and checks that the recorded player dethrones
    /// the strongest one within the given per-run budget.
    pub fn replay(&self, tree: &TournamentTree, k: u32) -> Result<bool, crate::arena::ArenaError> {
        let report = validate_schedule(tree, &self.schedule, k)?;
        let log = conduct(tree, &self.seeding, &self.winners, &self.schedule)?;
        Ok(report.within(k) && log.winner == self.winner && log.winner != self.iw_player)
    }

    pub fn to_json(&self) -> String {
        let value = serde_json::json!({
            "seat": self.iw_name.to_string(),
            "iw_player": self.iw_player,
            "winner": self.winner,
            "seeding": serde_json::from_str::<serde_json::Value>(&self.seeding.to_json())
                .expect("seeding serializes to valid json"),
            "winners": serde_json::from_str::<serde_json::Value>(&self.winners.to_json())
                .expect("matrix serializes to valid json"),
            "schedule": serde_json::from_str::<serde_json::Value>(&self.schedule.to_json())
                .expect("schedule serializes to valid json"),
        });
        serde_json::to_string_pretty(&value).expect("witness documents always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, crate::arena::ArenaError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        let get = |field: &str| {
            value
                .get(field)
                .cloned()
                .ok_or_else(|| serde_json::Error::io(std::io::Error::new(
                    std::io::ErrorKind::InvalidData,
                    format!("missing field `{field}`"),
                )))
        };
        let seat: String = serde_json::from_value(get("seat")?)?;
        let iw_player: PlayerId = serde_json::from_value(get("iw_player")?)?;
        let winner: PlayerId = serde_json::from_value(get("winner")?)?;
        let seeding = Seeding::from_json(&get("seeding")?.to_string())?;
        let winners = WinnerMatrix::from_json(&get("winners")?.to_string())?;
        let schedule = ManipulationSchedule::from_json(&get("schedule")?.to_string())?;
        let iw_name = seat
            .parse()
            .map_err(|e| crate::arena::ArenaError::BadName(seat.clone(), format!("{e}")))?;
        Ok(Witness {
            iw_name,
            iw_player,
            seeding,
            winners,
            schedule,
            winner,
        })
    }
}

/// Checks robustness at budget `k`, quantifying the strongest player's seat
/// over every distinct seed name (surplus names included). Seats verify
/// independently and in parallel.
pub fn verify_robust(tree: &TournamentTree, k: u32) -> Result<Verdict, AdversaryError> {
    if tree.is_empty() {
        return Err(AdversaryError::EmptyTree);
    }
    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    let failures = par::map(names.clone(), |name| {
        let table = reach_sets(tree, &name, k).expect("names come from the tree");
        (!table.only_strongest(0, k)).then_some(name)
    });
    let failing = failures.into_iter().flatten().next();
    match failing {
        None => Ok(Verdict {
            robust: true,
            witness: None,
        }),
        Some(name) => {
            let witness = build_witness(tree, &name, k);
            Ok(Verdict {
                robust: false,
                witness,
            })
        }
    }
}

/// Searches for a fixed winner matrix realizing a dethroning of the
/// strongest player seated at `iw_name`.
///
/// The adaptive adversary may mix inconsistent game outcomes, so a failing
/// seat does not always come with a fixed-function counterexample; the
/// heuristics below (lowest- and highest-id matrices, then full enumeration
/// over small player universes) cover every tree in the test matrix.
fn build_witness(tree: &TournamentTree, iw_name: &BitString, k: u32) -> Option<Witness> {
    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    let n = names.len() as u32;
    let iw_idx = names.binary_search(iw_name).ok()?;
    let iw_player = iw_idx as PlayerId + 1;
    let seeding = Seeding::new(
        names
            .iter()
            .enumerate()
            .map(|(i, name)| (name.clone(), i as PlayerId + 1))
            .collect(),
    );
    let leaf_players = leaf_assignment(tree, &seeding)?;

    let try_matrix = |winners: &WinnerMatrix| -> Option<Witness> {
        let reach = fixed_reach(tree, &leaf_players, winners, k);
        let target = reach[0][k as usize]
            .iter()
            .find(|&p| p as PlayerId + 1 != iw_player)?;
        let schedule = reconstruct_schedule(tree, &reach, &leaf_players, winners, target, k);
        let witness = Witness {
            iw_name: iw_name.clone(),
            iw_player,
            seeding: seeding.clone(),
            winners: winners.clone(),
            schedule,
            winner: target as PlayerId + 1,
        };
        witness.replay(tree, k).ok()? .then_some(witness)
    };

    let lowest = WinnerMatrix::lowest_id_wins(n, Some(iw_player));
    if let Some(w) = try_matrix(&lowest) {
        return Some(w);
    }
    let highest = WinnerMatrix::highest_id_wins(n, Some(iw_player));
    if let Some(w) = try_matrix(&highest) {
        return Some(w);
    }
    if n <= 6 {
        for mask in 0..(1u64 << non_strongest_pairs(n)) {
            let matrix = matrix_from_mask(n, iw_player, mask);
            if let Some(w) = try_matrix(&matrix) {
                return Some(w);
            }
        }
    }
    None
}

fn non_strongest_pairs(n: u32) -> u32 {
    let m = n - 1;
    m * (m - 1) / 2
}

/// Matrix with `iw` strongest and the remaining pair orientations read off
/// the bits of `mask`, pairs enumerated in lexicographic order.
fn matrix_from_mask(n: u32, iw: PlayerId, mask: u64) -> WinnerMatrix {
    let mut bit = 0;
    let mut orientation = std::collections::BTreeMap::new();
    for i in 1..=n {
        for j in (i + 1)..=n {
            if i != iw && j != iw {
                orientation.insert((i, j), mask & (1 << bit) != 0);
                bit += 1;
            }
        }
    }
    WinnerMatrix::from_rule(n, Some(iw), |i, j| orientation[&(i, j)])
}

fn leaf_assignment(tree: &TournamentTree, seeding: &Seeding) -> Option<Vec<PlayerId>> {
    let mut players = vec![0; tree.len()];
    for node in tree.leaves() {
        players[node.id] = seeding.player(node.seed_name.as_ref()?)?;
    }
    Some(players)
}

/// Budgeted reach sets under a fixed winner function: `sets[v][b]` holds
/// every player promotable to `v` when all honest games follow `winners`,
/// under the same error-capped per-run budget as [`reach_sets`].
fn fixed_reach(
    tree: &TournamentTree,
    leaf_players: &[PlayerId],
    winners: &WinnerMatrix,
    k: u32,
) -> Vec<Vec<PlayerSet>> {
    let universe = winners.n() as usize;
    let budgets = k as usize + 1;
    let mut sets: Vec<Vec<PlayerSet>> = vec![Vec::new(); tree.len()];
    let mut arrivals = Vec::new();
    for id in (0..tree.len()).rev() {
        let node = &tree.nodes[id];
        if node.is_leaf() {
            let mut set = PlayerSet::empty(universe);
            set.insert(leaf_players[id] as usize - 1);
            sets[id] = vec![set; budgets];
            continue;
        }
        let avail = k.saturating_sub(node.label.e()) as usize;
        let mut per_budget = Vec::with_capacity(budgets);
        for b in 0..budgets {
            let b = b.min(avail);
            let mut reach = PlayerSet::empty(universe);
            for_each_tuple(&sets, &node.children, b, &mut arrivals, &mut |tuple| {
                reach.insert(game_winner(tuple, winners) as usize - 1);
            });
            if b >= 1 && node.children.len() >= 2 {
                for_each_tuple(&sets, &node.children, b - 1, &mut arrivals, &mut |tuple| {
                    let honest = game_winner(tuple, winners);
                    for &p in tuple {
                        if p != honest {
                            reach.insert(p as usize - 1);
                        }
                    }
                });
            }
            per_budget.push(reach);
        }
        sets[id] = per_budget;
    }
    sets
}

fn game_winner(arrivals: &[PlayerId], winners: &WinnerMatrix) -> PlayerId {
    match arrivals {
        [a, b] => winners.winner(*a, *b),
        [a, b, c] => ternary_game(*a, *b, *c, winners),
        [a] => *a,
        _ => unreachable!("conducted vertices have at most three children"),
    }
}

/// Invokes `f` on every tuple of child picks at the given budget.
fn for_each_tuple(
    sets: &[Vec<PlayerSet>],
    children: &[NodeId],
    b: usize,
    scratch: &mut Vec<PlayerId>,
    f: &mut impl FnMut(&[PlayerId]),
) {
    fn go(
        sets: &[Vec<PlayerSet>],
        children: &[NodeId],
        b: usize,
        depth: usize,
        scratch: &mut Vec<PlayerId>,
        f: &mut impl FnMut(&[PlayerId]),
    ) {
        if depth == children.len() {
            f(scratch);
            return;
        }
        let picks: Vec<usize> = sets[children[depth]][b].iter().collect();
        for p in picks {
            scratch.push(p as PlayerId + 1);
            go(sets, children, b, depth + 1, scratch, f);
            scratch.pop();
        }
    }
    scratch.clear();
    go(sets, children, b, 0, scratch, f);
}

/// Rebuilds a manipulation schedule that promotes `target` (a zero-based
/// player index) to the root within the per-run budget, walking the fixed
/// reach sets top-down and preferring honest resolutions.
fn reconstruct_schedule(
    tree: &TournamentTree,
    reach: &[Vec<PlayerSet>],
    leaf_players: &[PlayerId],
    winners: &WinnerMatrix,
    target: usize,
    k: u32,
) -> ManipulationSchedule {
    let mut entries = Vec::new();
    let mut stack = vec![(0usize, k as usize, target as PlayerId + 1)];
    while let Some((v, b, want)) = stack.pop() {
        let node = &tree.nodes[v];
        if node.is_leaf() {
            debug_assert_eq!(leaf_players[v], want);
            continue;
        }
        let b = b.min(k.saturating_sub(node.label.e()) as usize);
        let mut chosen: Option<(Vec<PlayerId>, bool)> = None;
        let mut scratch = Vec::new();
        // Honest resolution first.
        for_each_tuple(reach, &node.children, b, &mut scratch, &mut |tuple| {
            if chosen.is_none() && game_winner(tuple, winners) == want {
                chosen = Some((tuple.to_vec(), false));
            }
        });
        if chosen.is_none() && b >= 1 && node.children.len() >= 2 {
            let mut scratch = Vec::new();
            for_each_tuple(reach, &node.children, b - 1, &mut scratch, &mut |tuple| {
                if chosen.is_none()
                    && tuple.contains(&want)
                    && game_winner(tuple, winners) != want
                {
                    chosen = Some((tuple.to_vec(), true));
                }
            });
        }
        let (tuple, manipulated) =
            chosen.expect("reach sets certify that the target is promotable");
        let child_budget = if manipulated { b - 1 } else { b };
        if manipulated {
            entries.push(ScheduleEntry {
                vertex: v,
                promote: Promotion::Player(want),
            });
        }
        for (&child, &pick) in node.children.iter().zip(&tuple) {
            stack.push((child, child_budget, pick));
        }
    }
    entries.sort_by_key(|e| e.vertex);
    ManipulationSchedule { entries }
}

/// Exhaustive oracle over every fixed winner matrix with a designated
/// strongest player and every surjective seeding. Guard-railed to tiny
/// instances; agrees with [`verify_robust`] wherever both apply.
pub fn brute_force_robust(
    tree: &TournamentTree,
    k: u32,
    n: u32,
) -> Result<Verdict, AdversaryError> {
    if n > 4 {
        return Err(AdversaryError::GuardRail {
            what: "players",
            max: 4,
            got: n as usize,
        });
    }
    if tree.len() > 200 {
        return Err(AdversaryError::GuardRail {
            what: "tree nodes",
            max: 200,
            got: tree.len(),
        });
    }
    if tree.is_empty() {
        return Err(AdversaryError::EmptyTree);
    }

    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    let matrices: Vec<(PlayerId, u64)> = (1..=n)
        .flat_map(|iw| (0..(1u64 << non_strongest_pairs(n))).map(move |mask| (iw, mask)))
        .collect();

    let verdicts = par::map(matrices, |(iw, mask)| {
        let winners = matrix_from_mask(n, iw, mask);
        for assignment in surjective_seedings(names.len(), n) {
            let seeding = Seeding::new(
                names
                    .iter()
                    .cloned()
                    .zip(assignment.iter().copied())
                    .collect(),
            );
            let leaf_players = match leaf_assignment(tree, &seeding) {
                Some(players) => players,
                None => continue,
            };
            let reach = fixed_reach(tree, &leaf_players, &winners, k);
            let root = &reach[0][k as usize];
            if !root.is_singleton(iw as usize - 1) {
                let target = reach[0][k as usize]
                    .iter()
                    .find(|&p| p as PlayerId + 1 != iw)
                    .expect("a non-strongest root reach exists");
                let schedule =
                    reconstruct_schedule(tree, &reach, &leaf_players, &winners, target, k);
                return Some(Witness {
                    iw_name: names
                        .iter()
                        .find(|name| seeding.player(name) == Some(iw))
                        .expect("surjective seedings seat every player")
                        .clone(),
                    iw_player: iw,
                    seeding,
                    winners,
                    schedule,
                    winner: target as PlayerId + 1,
                });
            }
        }
        None
    });

    match verdicts.into_iter().flatten().next() {
        Some(witness) => Ok(Verdict {
            robust: false,
            witness: Some(witness),
        }),
        None => Ok(Verdict {
            robust: true,
            witness: None,
        }),
    }
}

/// Every assignment of `names` positions to players `1..=n` seating each
/// player at least once.
fn surjective_seedings(names: usize, n: u32) -> Vec<Vec<PlayerId>> {
    let mut out = Vec::new();
    let mut current = vec![1 as PlayerId; names];
    loop {
        let mut seen = vec![false; n as usize];
        for &p in &current {
            seen[p as usize - 1] = true;
        }
        if seen.iter().all(|&s| s) {
            out.push(current.clone());
        }
        // Odometer step in base n.
        let mut pos = 0;
        loop {
            if pos == names {
                return out;
            }
            if current[pos] < n {
                current[pos] += 1;
                break;
            }
            current[pos] = 1;
            pos += 1;
        }
    }
}

/// One failed instance of the operational correctness invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaViolation {
    pub vertex: NodeId,
    pub iw_name: BitString,
    pub budget: u32,
}

/// Checks, for every vertex `v` with label `(f, e)` and every residual
/// budget `l <= k - e`: whenever the strongest player's name extends the
/// prefix of `f` that survives `k - e - l` further errors, only the
/// strongest player reaches `v` within `l` manipulations per run.
pub fn lemma_check(tree: &TournamentTree) -> Result<Vec<LemmaViolation>, AdversaryError> {
    if tree.is_empty() {
        return Err(AdversaryError::EmptyTree);
    }
    let k = tree.k;
    let names: Vec<BitString> = tree.seed_names.iter().cloned().collect();
    let binary = tree.mode == TreeMode::Binary;
    let x = tree.x;

    let per_name = par::map(names, |name| {
        let table = reach_sets(tree, &name, k).expect("names come from the tree");
        let mut violations = Vec::new();
        for node in &tree.nodes {
            let e = node.label.e();
            if e > k {
                continue;
            }
            for l in 0..=(k - e) {
                let drop = (k - e - l) as usize;
                let prefix = if binary {
                    prefix_drop_binary(node.label.f(), drop, x)
                } else {
                    prefix_drop_ternary(node.label.f(), drop)
                };
                if name.starts_with(&prefix) && !table.only_strongest(node.id, l) {
                    violations.push(LemmaViolation {
                        vertex: node.id,
                        iw_name: name.clone(),
                        budget: l,
                    });
                }
            }
        }
        violations
    });
    Ok(per_name.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builder::{build_binary, build_standard, build_ternary};

    fn bits(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn reach_sets_on_tiny_standard_trees() {
        let tree = build_standard(2).unwrap();
        for name in &tree.seed_names {
            let table = reach_sets(&tree, name, 0).unwrap();
            assert!(table.only_strongest(0, 0));
        }
        let tree = build_standard(4).unwrap();
        for name in &tree.seed_names {
            let table = reach_sets(&tree, name, 1).unwrap();
            assert!(!table.only_strongest(0, 1));
            assert!(table.set(0, 1).contains(table.iw_index()));
        }
    }

    #[test]
    fn reach_sets_grow_with_budget() {
        let tree = build_ternary(4, 2).unwrap();
        for name in &tree.seed_names {
            let table = reach_sets(&tree, name, 3).unwrap();
            for v in 0..tree.len() {
                for b in 0..3 {
                    assert!(
                        table.set(v, b).is_subset(table.set(v, b + 1)),
                        "monotonicity fails at vertex {v}, budget {b}"
                    );
                }
            }
        }
    }

    #[test]
    fn strongest_absorbs_upward() {
        let tree = build_binary(4, 1, 2).unwrap();
        for name in &tree.seed_names {
            let table = reach_sets(&tree, name, 1).unwrap();
            for node in &tree.nodes {
                if let Some(parent) = node.parent {
                    for b in 0..=1 {
                        if table.set(node.id, b).is_singleton(table.iw_index()) {
                            assert!(table.set(parent, b).contains(table.iw_index()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unknown_seat_is_rejected() {
        let tree = build_standard(4).unwrap();
        assert!(matches!(
            reach_sets(&tree, &bits("111111"), 1),
            Err(AdversaryError::UnknownName(_))
        ));
    }

    #[test]
    fn ternary_construction_verifies_robust() {
        let tree = build_ternary(2, 1).unwrap();
        let verdict = verify_robust(&tree, 1).unwrap();
        assert!(verdict.robust);
        let tree = build_ternary(8, 2).unwrap();
        assert!(verify_robust(&tree, 2).unwrap().robust);
    }

    #[test]
    fn binary_construction_verifies_robust() {
        let tree = build_binary(4, 1, 2).unwrap();
        assert!(verify_robust(&tree, 1).unwrap().robust);
    }

    #[test]
    fn standard_trees_fail_with_budget_and_witness_replays() {
        let tree = build_standard(4).unwrap();
        let verdict = verify_robust(&tree, 1).unwrap();
        assert!(!verdict.robust);
        let witness = verdict.witness.expect("failing trees yield witnesses");
        assert!(witness.replay(&tree, 1).unwrap());
    }

    #[test]
    fn witness_files_round_trip() {
        let tree = build_standard(4).unwrap();
        let witness = verify_robust(&tree, 1).unwrap().witness.unwrap();
        let text = witness.to_json();
        let back = Witness::from_json(&text).unwrap();
        assert_eq!(back.iw_name, witness.iw_name);
        assert_eq!(back.winner, witness.winner);
        assert!(back.replay(&tree, 1).unwrap());
    }

    #[test]
    fn brute_force_agrees_on_tiny_instances() {
        let standard = build_standard(4).unwrap();
        assert!(brute_force_robust(&standard, 0, 4).unwrap().robust);
        let failing = brute_force_robust(&standard, 1, 4).unwrap();
        assert!(!failing.robust);
        let witness = failing.witness.unwrap();
        assert!(witness.replay(&standard, 1).unwrap());
    }

    #[test]
    fn brute_force_guard_rails() {
        let tree = build_standard(8).unwrap();
        assert!(matches!(
            brute_force_robust(&tree, 1, 8),
            Err(AdversaryError::GuardRail { what: "players", .. })
        ));
    }

    #[test]
    fn lemma_check_passes_on_constructions() {
        for tree in [build_ternary(4, 1).unwrap(), build_binary(4, 1, 2).unwrap()] {
            assert_eq!(lemma_check(&tree).unwrap(), Vec::new());
        }
    }

    #[test]
    fn surjective_seeding_counts() {
        assert_eq!(surjective_seedings(4, 4).len(), 24);
        assert_eq!(surjective_seedings(5, 4).len(), 240);
    }
}
