//! Manipulation-robust knockout tournaments.
//!
//! Builds tournament trees that guarantee the strongest player wins even
//! when an adversary flips up to `k` game outcomes on every leaf-to-root
//! path. The constructions translate feedback-channel coding into tree
//! shape: a ternary variant with a dedicated error symbol reaching height
//! `log2 n + 2k`, and a binary variant over names without consecutive ones
//! reaching height `r + 3k` with `r` governed by Fibonacci counting.
//!
//! The crate also conducts tournaments under explicit winner functions and
//! manipulation schedules, verifies robustness with an adaptive-adversary
//! reach dynamic program (plus a brute-force oracle for tiny instances), and
//! simulates the two feedback protocols the constructions mirror.
//!
//! With the default `parallel` feature the verification and sweep entry
//! points fan out over rayon; disabling it yields the same results on one
//! thread.

pub mod adversary;
pub mod arena;
pub mod builder;
pub mod label;
mod par;
pub mod protocol;
pub mod survey;
pub mod tree;

pub use adversary::{
    brute_force_robust, lemma_check, reach_sets, verify_robust, ReachTable, Verdict, Witness,
};
pub use arena::{
    conduct, path_to_transcript, ternary_game, validate_schedule, ConductLog,
    ManipulationSchedule, PlayerId, Promotion, ScheduleEntry, Seeding, WinnerMatrix,
};
pub use builder::{
    build_binary, build_binary_tree, build_standard, build_ternary, build_ternary_tree,
    build_with_limit, build_with_stats, is_live, BuildSpec,
};
pub use label::{
    min_name_length, prefix_drop_binary, prefix_drop_ternary, reduce_binary, reduce_ternary,
    seed_names, valid_name_count, Alphabet, BitString, LabelState, Symbol,
};
pub use protocol::{
    decode, exhaustive_adversary_check, run_protocol, run_protocol_with, EveStrategy,
    ProtocolRun, Variant,
};
pub use survey::{survey, SurveyConfig, SurveyRow};
pub use tree::{NodeId, TournamentTree, TreeMode, TreeNode, Violation};
