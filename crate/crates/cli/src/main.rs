//! Command-line front end for robust knockout tournaments.
//!
//! Exit codes: 0 on success (and for robust verdicts), 1 when verification
//! or decoding fails, 2 on usage or input-format errors.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use knockout::{
    brute_force_robust, build_with_limit, conduct, run_protocol, survey, validate_schedule,
    verify_robust, BitString, BuildSpec, EveStrategy, ManipulationSchedule, Seeding, SurveyConfig,
    TournamentTree, TreeMode, Variant, WinnerMatrix, Witness,
};

#[derive(Parser)]
#[command(
    name = "knockout",
    about = "Manipulation-robust knockout tournament toolkit",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Standard,
    Ternary,
    Binary,
}

impl From<ModeArg> for TreeMode {
    fn from(mode: ModeArg) -> Self {
        match mode {
            ModeArg::Standard => TreeMode::Standard,
            ModeArg::Ternary => TreeMode::Ternary,
            ModeArg::Binary => TreeMode::Binary,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    ErrorSymbol,
    Binary,
}

#[derive(Clone, Copy, ValueEnum)]
enum EveArg {
    None,
    Random,
    Greedy,
}

#[derive(Subcommand)]
enum Command {
    /// Construct a tournament tree and print its statistics.
    Build(BuildArgs),
    /// Render a tree file as Graphviz DOT.
    ExportDot {
        /// Tree JSON file.
        tree: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print statistics and validation results for a tree file.
    Stats {
        /// Tree JSON file.
        tree: PathBuf,
    },
    /// Verify robustness of a tree file.
    Verify {
        /// Tree JSON file.
        tree: PathBuf,
        /// Manipulation budget; defaults to the tree's k.
        #[arg(long)]
        k: Option<u32>,
        /// Also run the exhaustive fixed-matrix oracle (tiny instances only).
        #[arg(long)]
        brute_force: bool,
        /// Where to write the witness when the tree is not robust.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Conduct a tournament under explicit winners, seeding and schedule.
    Conduct(ConductArgs),
    /// Run one feedback-channel protocol transmission.
    Protocol(ProtocolArgs),
    /// Sweep (n, k) cells and tabulate heights against the analytic bounds.
    Table(TableArgs),
}

#[derive(Args)]
struct BuildArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Player count.
    #[arg(long)]
    n: u64,
    /// Per-run manipulation budget.
    #[arg(long, default_value_t = 0)]
    k: u32,
    /// Run-length parameter for binary trees.
    #[arg(long, default_value_t = 2)]
    x: u8,
    /// Write the tree JSON here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Abort the build beyond this many nodes.
    #[arg(long, default_value_t = knockout::survey::DEFAULT_NODE_CAP)]
    cap: usize,
}

#[derive(Args)]
struct ConductArgs {
    /// Tree JSON file.
    tree: PathBuf,
    /// Seeding file (JSON object: name -> player).
    #[arg(long, required_unless_present = "witness")]
    seeding: Option<PathBuf>,
    /// Winner matrix file.
    #[arg(long, required_unless_present = "witness")]
    winners: Option<PathBuf>,
    /// Manipulation schedule file; empty schedule when omitted.
    #[arg(long)]
    schedule: Option<PathBuf>,
    /// Replay a witness file instead of separate inputs.
    #[arg(long, conflicts_with_all = ["seeding", "winners", "schedule"])]
    witness: Option<PathBuf>,
}

#[derive(Args)]
struct ProtocolArgs {
    #[arg(long, value_enum)]
    variant: VariantArg,
    /// Message bits, e.g. 0101.
    #[arg(long)]
    message: String,
    #[arg(long, value_enum, default_value_t = EveArg::None)]
    eve: EveArg,
    /// Seed for the random adversary.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Eve's corruption budget.
    #[arg(long, default_value_t = 0)]
    budget: u32,
}

#[derive(Args)]
struct TableArgs {
    #[arg(long, value_enum)]
    mode: ModeArg,
    /// Inclusive player-count range, e.g. 2:64 or a single value.
    #[arg(long, value_parser = parse_range_u64)]
    n_range: (u64, u64),
    /// Inclusive budget range, e.g. 0:2 or a single value.
    #[arg(long, value_parser = parse_range_u32)]
    k_range: (u32, u32),
    #[arg(long, default_value_t = 2)]
    x: u8,
    /// Skip per-cell robustness verification.
    #[arg(long)]
    no_verify: bool,
    /// Node cap per cell; capped cells are skipped with a notice.
    #[arg(long, default_value_t = knockout::survey::DEFAULT_NODE_CAP)]
    cap: usize,
}

fn parse_range_u64(s: &str) -> Result<(u64, u64), String> {
    parse_range(s)
}

fn parse_range_u32(s: &str) -> Result<(u32, u32), String> {
    parse_range(s)
}

fn parse_range<T: std::str::FromStr + Copy>(s: &str) -> Result<(T, T), String> {
    let parse = |part: &str| {
        part.parse::<T>()
            .map_err(|_| format!("invalid number {part:?}"))
    };
    match s.split_once(':') {
        Some((lo, hi)) => Ok((parse(lo)?, parse(hi)?)),
        None => {
            let v = parse(s)?;
            Ok((v, v))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Build(args) => cmd_build(args),
        Command::ExportDot { tree, out } => cmd_export_dot(&tree, out.as_deref()),
        Command::Stats { tree } => cmd_stats(&tree),
        Command::Verify {
            tree,
            k,
            brute_force,
            witness_out,
        } => cmd_verify(&tree, k, brute_force, witness_out),
        Command::Conduct(args) => cmd_conduct(args),
        Command::Protocol(args) => cmd_protocol(args),
        Command::Table(args) => cmd_table(args),
    }
}

fn load_tree(path: &Path) -> Result<TournamentTree> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read tree file {}", path.display()))?;
    TournamentTree::from_json(&text)
        .with_context(|| format!("malformed tree file {}", path.display()))
}

fn print_tree_summary(tree: &TournamentTree) {
    println!("mode {}", tree.mode.as_str());
    println!("n {}", tree.n);
    println!("k {}", tree.k);
    if tree.mode == TreeMode::Binary {
        println!("x {}", tree.x);
    }
    println!("r {}", tree.r);
    println!("height {}", tree.height());
    println!("nodes {}", tree.len());
    println!("leaves {}", tree.leaves().count());
    println!("names {}", tree.seed_names.len());
}

fn cmd_build(args: BuildArgs) -> Result<ExitCode> {
    let spec = BuildSpec {
        mode: args.mode.into(),
        n: args.n,
        k: args.k,
        x: args.x,
    };
    let tree = build_with_limit(&spec, args.cap)?;
    print_tree_summary(&tree);
    if let Some(out) = args.out {
        fs::write(&out, tree.to_json())
            .with_context(|| format!("cannot write {}", out.display()))?;
        println!("wrote {}", out.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_export_dot(tree: &Path, out: Option<&Path>) -> Result<ExitCode> {
    let tree = load_tree(tree)?;
    let dot = tree.to_dot();
    match out {
        Some(path) => {
            fs::write(path, dot).with_context(|| format!("cannot write {}", path.display()))?;
            println!("wrote {}", path.display());
        }
        None => print!("{dot}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_stats(tree: &Path) -> Result<ExitCode> {
    let tree = load_tree(tree)?;
    print_tree_summary(&tree);
    let violations = tree.validate();
    if violations.is_empty() {
        println!("valid");
        Ok(ExitCode::SUCCESS)
    } else {
        for violation in &violations {
            println!("violation: {violation}");
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_verify(
    tree_path: &Path,
    k: Option<u32>,
    brute_force: bool,
    witness_out: Option<PathBuf>,
) -> Result<ExitCode> {
    let tree = load_tree(tree_path)?;
    let k = k.unwrap_or(tree.k);
    let verdict = verify_robust(&tree, k)?;
    if brute_force {
        let oracle = brute_force_robust(&tree, k, tree.n as u32)?;
        println!(
            "brute force: {}",
            if oracle.robust { "ROBUST" } else { "NOT ROBUST" }
        );
        if oracle.robust != verdict.robust {
            bail!("brute-force oracle disagrees with the reach-set verifier");
        }
    }
    if verdict.robust {
        println!("ROBUST");
        Ok(ExitCode::SUCCESS)
    } else {
        println!("NOT ROBUST");
        let witness = verdict.witness;
        let path = witness_out.unwrap_or_else(|| {
            let mut path = tree_path.as_os_str().to_owned();
            path.push(".witness.json");
            PathBuf::from(path)
        });
        match witness {
            Some(witness) => {
                fs::write(&path, witness.to_json())
                    .with_context(|| format!("cannot write {}", path.display()))?;
                println!("witness {}", path.display());
            }
            None => println!("witness unavailable (no fixed winner matrix realizes the attack)"),
        }
        Ok(ExitCode::from(1))
    }
}

fn cmd_conduct(args: ConductArgs) -> Result<ExitCode> {
    let tree = load_tree(&args.tree)?;
    let (seeding, winners, schedule) = match args.witness {
        Some(path) => {
            let text = fs::read_to_string(&path)
                .with_context(|| format!("cannot read witness file {}", path.display()))?;
            let witness = Witness::from_json(&text)
                .with_context(|| format!("malformed witness file {}", path.display()))?;
            (witness.seeding, witness.winners, witness.schedule)
        }
        None => {
            let seeding_path = args.seeding.ok_or_else(|| anyhow!("--seeding is required"))?;
            let winners_path = args.winners.ok_or_else(|| anyhow!("--winners is required"))?;
            let seeding = Seeding::from_json(
                &fs::read_to_string(&seeding_path)
                    .with_context(|| format!("cannot read {}", seeding_path.display()))?,
            )
            .context("malformed seeding file")?;
            let winners = WinnerMatrix::from_json(
                &fs::read_to_string(&winners_path)
                    .with_context(|| format!("cannot read {}", winners_path.display()))?,
            )
            .context("malformed winner matrix file")?;
            let schedule = match args.schedule {
                Some(path) => ManipulationSchedule::from_json(
                    &fs::read_to_string(&path)
                        .with_context(|| format!("cannot read {}", path.display()))?,
                )
                .context("malformed schedule file")?,
                None => ManipulationSchedule::empty(),
            };
            (seeding, winners, schedule)
        }
    };

    let report = validate_schedule(&tree, &schedule, tree.k)?;
    let log = conduct(&tree, &seeding, &winners, &schedule)?;
    for game in &log.games {
        let arrivals: Vec<String> = game.arrivals.iter().map(|p| p.to_string()).collect();
        let mut line = format!(
            "vertex {} arrivals [{}] honest {} promoted {}",
            game.vertex,
            arrivals.join(" "),
            game.honest,
            game.promoted
        );
        if game.manipulated {
            line.push_str(" manipulated");
        }
        if game.void {
            line.push_str(" void");
        }
        println!("{line}");
    }
    println!("max manipulations per run {}", report.max);
    println!("winner {}", log.winner);
    if log.over_budget {
        eprintln!("warning: schedule exceeds the tree budget k = {}", tree.k);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_protocol(args: ProtocolArgs) -> Result<ExitCode> {
    let message: BitString = args
        .message
        .parse()
        .map_err(|e| anyhow!("invalid message: {e}"))?;
    let variant = match args.variant {
        VariantArg::ErrorSymbol => Variant::ErrorSymbol,
        VariantArg::Binary => Variant::Binary,
    };
    let eve = match args.eve {
        EveArg::None => EveStrategy::None,
        EveArg::Random => EveStrategy::Random { seed: args.seed },
        EveArg::Greedy => EveStrategy::GreedyPrefix,
    };
    let run = run_protocol(variant, &message, &eve, args.budget)?;
    for round in &run.rounds {
        let decoded = if round.decoded.is_empty() {
            "-".to_string()
        } else {
            round.decoded.to_string()
        };
        println!(
            "{} {} {} {}",
            round.sent, round.received, round.counter, decoded
        );
    }
    println!("rounds {}", run.len());
    println!("corruptions {}", run.corruptions);
    println!(
        "decoded {}",
        if run.decoded.is_empty() {
            "-".to_string()
        } else {
            run.decoded.to_string()
        }
    );
    if run.decoded == message {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("decode failure: expected {message}");
        Ok(ExitCode::from(1))
    }
}

fn cmd_table(args: TableArgs) -> Result<ExitCode> {
    let mode: TreeMode = args.mode.into();
    let config = SurveyConfig {
        mode,
        n_values: (args.n_range.0..=args.n_range.1).collect(),
        k_values: (args.k_range.0..=args.k_range.1).collect(),
        x: args.x,
        verify: !args.no_verify,
        node_cap: args.cap,
    };
    println!("mode {} x {}", mode.as_str(), args.x);
    println!("n k r height bound nodes verified");
    for row in survey(&config) {
        match row {
            Ok(row) if row.skipped => {
                eprintln!("notice: n={} k={} exceeds the node cap, skipped", row.n, row.k);
            }
            Ok(row) => {
                let verified = match row.verified {
                    Some(true) => "yes",
                    Some(false) => "NO",
                    None => "-",
                };
                println!(
                    "{} {} {} {} {} {} {}",
                    row.n, row.k, row.r, row.height, row.bound, row.nodes, verified
                );
            }
            Err(err) => eprintln!("notice: {err}"),
        }
    }
    Ok(ExitCode::SUCCESS)
}
