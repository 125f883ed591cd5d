//! Command-line front door: lattice queries, state construction, invariant
//! evaluation, signal construction and evaluation, verification sweeps, and
//! named reproduction scenarios.
//!
//! Exit codes: 0 on success, 1 when a verification or scenario check fails,
//! 2 on usage or input errors.

use clap::{Args, Parser, Subcommand};
use gme::algebra::{mobius_vector, solve_meet_vanishing};
use gme::error::{Error, Result};
use gme::harness::{run_all, run_scenario, Report, SuiteReport, DEFAULT_Q_MAX, DEFAULT_SEED};
use gme::invariant::{
    log_multi_invariant_e, multi_invariant_z, parse_family, renyi_entropy, PermutationTuple,
};
use gme::partition::{enumerate_partitions, mobius, Partition, PartySet};
use gme::rng::Rng;
use gme::signal::{
    build_signal_basis, expand_grouped, reduce_pure, render_expansion, AnySignal, Provenance,
    SignalMode,
};
use gme::state::{catalog_state, random_state, uniform_parties, PureState};
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const LN2: f64 = std::f64::consts::LN_2;

#[derive(Parser)]
#[command(
    name = "gme",
    version,
    about = "Entanglement signals from lattice inversion of local-unitary invariant families",
    propagate_version = true
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Set-partition lattice queries.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Construct and serialize pure states.
    State {
        #[command(subcommand)]
        cmd: StateCmd,
    },
    /// Evaluate local-unitary invariants on states.
    Invariant {
        #[command(subcommand)]
        cmd: InvariantCmd,
    },
    /// Build, evaluate, and expand signal specifications.
    Signal {
        #[command(subcommand)]
        cmd: SignalCmd,
    },
    /// Run verification suites.
    Verify {
        #[command(subcommand)]
        cmd: VerifyCmd,
    },
    /// Run a named reproduction scenario.
    Scenario(ScenarioArgs),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// List all partitions of a party set in enumeration order.
    Enum {
        /// Number of parties (1..=8).
        #[arg(long)]
        q: usize,
    },
    /// Inversion coefficient of a lattice interval.
    Mobius {
        /// Lower partition, e.g. "A|B|C".
        #[arg(long)]
        kappa: String,
        /// Upper partition, e.g. "ABC".
        #[arg(long)]
        pi: String,
    },
    /// Inversion vector of a partition, as a rational lattice combination.
    MobiusVector {
        /// Target partition, e.g. "AB|CD".
        #[arg(long)]
        rho: String,
    },
    /// Solve for all lattice vectors whose meet-extension vanishes on the
    /// given constraint partitions.
    Solve {
        /// Comma-separated constraint partitions, e.g. "AB|C|D,A|BCD".
        #[arg(long)]
        constraints: String,
        /// Number of parties (needed when the constraint list is empty).
        #[arg(long)]
        q: Option<usize>,
    },
}

#[derive(Subcommand)]
enum StateCmd {
    /// Emit a named catalog state.
    Make {
        /// Catalog name.
        #[arg(long)]
        catalog: String,
        /// Number of parties (defaults to the name's canonical geometry).
        #[arg(long)]
        q: Option<usize>,
        /// Local dimension (defaults to the name's canonical geometry).
        #[arg(long)]
        d: Option<usize>,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit a seeded random state.
    Random {
        /// Number of parties.
        #[arg(long)]
        q: usize,
        /// Local dimension.
        #[arg(long)]
        d: usize,
        /// RNG seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output file (stdout when omitted).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum InvariantCmd {
    /// Entropy of a party subset.
    Renyi {
        /// State file.
        #[arg(long)]
        state: PathBuf,
        /// Subset of party labels, e.g. "AB".
        #[arg(long)]
        subset: String,
        /// Entropy order (1 = von Neumann).
        #[arg(long, default_value_t = 1)]
        n: u32,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Permutation-tuple invariant of a state.
    Z {
        /// State file.
        #[arg(long)]
        state: PathBuf,
        /// Tuple file: {"n":3,"sigmas":[[2,3,1],...]} with 1-based rows.
        #[arg(long)]
        tuple: PathBuf,
        /// Report the log-invariant in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
}

#[derive(Subcommand)]
enum SignalCmd {
    /// Construct the basis of vanishing-guaranteed specs for a family.
    Build {
        /// Number of parties.
        #[arg(long)]
        q: usize,
        /// Seed family, e.g. "renyi:2", "residual", "log-multi:2",
        /// "square(renyi:2)".
        #[arg(long)]
        family: String,
        /// "signal" (vanishes on layer compositions) or "pre-signal"
        /// (vanishes on separable states).
        #[arg(long, default_value = "signal")]
        mode: String,
        /// Output directory; one JSON file per basis member.
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Evaluate a spec file on a state file.
    Eval {
        /// Spec file.
        #[arg(long)]
        spec: PathBuf,
        /// State file.
        #[arg(long)]
        state: PathBuf,
        /// Report in bits instead of nats.
        #[arg(long)]
        bits: bool,
    },
    /// Print a spec as a symbolic grouped-invariant expansion.
    Expand {
        /// Spec file.
        #[arg(long)]
        spec: PathBuf,
        /// Apply pure-state reductions before rendering.
        #[arg(long = "reduce-pure")]
        reduce_pure: bool,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Run every registered property suite.
    All {
        /// Largest lattice the parameterized sweeps run at (3..=6).
        #[arg(long = "q-max", default_value_t = DEFAULT_Q_MAX)]
        q_max: usize,
        /// Base seed for all suite RNG streams.
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Emit the machine-readable JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct ScenarioArgs {
    /// Scenario id (see `gme scenario --help` output of the error message
    /// for the list).
    id: String,
    /// Override the scenario's fixed default seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Emit the scenario report as JSON.
    #[arg(long)]
    json: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.cmd {
        Cmd::Lattice { cmd } => run_lattice(cmd)?,
        Cmd::State { cmd } => run_state(cmd)?,
        Cmd::Invariant { cmd } => run_invariant(cmd)?,
        Cmd::Signal { cmd } => run_signal(cmd)?,
        Cmd::Verify {
            cmd: VerifyCmd::All { q_max, seed, json },
        } => {
            let report = run_all(q_max, seed)?;
            if json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_report(&report);
            }
            return Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Cmd::Scenario(args) => {
            let report = run_scenario(&args.id, args.seed)?;
            if args.json {
                println!("{}", serde_json::to_string_pretty(&report)?);
            } else {
                print_suite(&report, true);
            }
            return Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Infer the party count of a partition text: its letters are the party
/// labels, `|` separates blocks.
fn parse_partition_arg(text: &str) -> Result<(Partition, PartySet)> {
    let q = text.chars().filter(|c| *c != '|').count();
    if q == 0 {
        return Err(Error::Parse("empty partition".into()));
    }
    let ps = PartySet::with_default_labels(q)?;
    Ok((Partition::parse(text, &ps)?, ps))
}

fn run_lattice(cmd: LatticeCmd) -> Result<()> {
    match cmd {
        LatticeCmd::Enum { q } => {
            let ps = PartySet::with_default_labels(q)?;
            for (i, pi) in enumerate_partitions(q)?.iter().enumerate() {
                println!("{i:3}  {}", pi.format(&ps));
            }
        }
        LatticeCmd::Mobius { kappa, pi } => {
            let (kappa, _) = parse_partition_arg(&kappa)?;
            let (pi, _) = parse_partition_arg(&pi)?;
            println!("{}", mobius(&kappa, &pi)?);
        }
        LatticeCmd::MobiusVector { rho } => {
            let (rho, ps) = parse_partition_arg(&rho)?;
            println!("{}", mobius_vector(&rho)?.vector().format(&ps));
        }
        LatticeCmd::Solve { constraints, q } => {
            let texts: Vec<&str> = constraints
                .split(',')
                .map(str::trim)
                .filter(|t| !t.is_empty())
                .collect();
            let q = match (texts.first(), q) {
                (Some(t), _) => t.chars().filter(|c| *c != '|').count(),
                (None, Some(q)) => q,
                (None, None) => {
                    return Err(Error::InvalidArgument(
                        "an empty constraint list needs --q".into(),
                    ))
                }
            };
            let ps = PartySet::with_default_labels(q)?;
            let parsed: Vec<Partition> = texts
                .iter()
                .map(|t| Partition::parse(t, &ps))
                .collect::<Result<_>>()?;
            let solutions = solve_meet_vanishing(q, &parsed)?;
            for m in &solutions {
                println!("{}", m.vector().format(&ps));
            }
        }
    }
    Ok(())
}

fn write_or_print(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn run_state(cmd: StateCmd) -> Result<()> {
    match cmd {
        StateCmd::Make {
            catalog,
            q,
            d,
            output,
        } => {
            let (cq, cd) = canonical_geometry(&catalog);
            let state = catalog_state(&catalog, q.unwrap_or(cq), d.unwrap_or(cd))?;
            write_or_print(&state.to_json_string(), output.as_deref())?;
        }
        StateCmd::Random { q, d, seed, output } => {
            let mut rng = Rng::new(seed);
            let state = random_state(&uniform_parties(q, d)?, &mut rng)?;
            write_or_print(&state.to_json_string(), output.as_deref())?;
        }
    }
    Ok(())
}

/// Default `(q, d)` for a catalog name when the caller does not pin them.
fn canonical_geometry(name: &str) -> (usize, usize) {
    match name {
        "bell" => (2, 2),
        n if n.starts_with("appendixA") => (3, 4),
        _ => (3, 2),
    }
}

fn load_state(path: &Path) -> Result<PureState> {
    PureState::from_json_str(&fs::read_to_string(path)?)
}

fn in_units(value: f64, bits: bool) -> f64 {
    if bits {
        value / LN2
    } else {
        value
    }
}

fn run_invariant(cmd: InvariantCmd) -> Result<()> {
    match cmd {
        InvariantCmd::Renyi {
            state,
            subset,
            n,
            bits,
        } => {
            let psi = load_state(&state)?;
            let mask = psi.party_set().parse_subset(&subset)?;
            let value = renyi_entropy(&psi, mask, n)?;
            println!("{}", in_units(value, bits));
        }
        InvariantCmd::Z { state, tuple, bits } => {
            let psi = load_state(&state)?;
            let tuple: PermutationTuple = serde_json::from_str(&fs::read_to_string(tuple)?)?;
            let z = multi_invariant_z(&tuple, &psi)?;
            println!("Z = {} + {}i", z.re, z.im);
            println!("|Z| = {}", z.norm());
            match log_multi_invariant_e(&tuple, &psi) {
                Ok(e) => println!("E = {}", in_units(e, bits)),
                Err(err) => println!("E undefined: {err}"),
            }
        }
    }
    Ok(())
}

/// File name for a basis member: its partition with block separators
/// replaced by '-'.
fn member_file_name(index: usize, spec: &gme::signal::SymmetricSignalSpec) -> String {
    match spec.provenance() {
        Provenance::MobiusVector(rho) => {
            let ps = PartySet::with_default_labels(rho.q()).expect("valid size");
            format!("m-{}.json", rho.format(&ps).replace('|', "-"))
        }
        _ => format!("member-{index}.json"),
    }
}

fn run_signal(cmd: SignalCmd) -> Result<()> {
    match cmd {
        SignalCmd::Build {
            q,
            family,
            mode,
            output,
        } => {
            let family = parse_family(&family)?;
            let mode = SignalMode::parse(&mode)?;
            let basis = build_signal_basis(&family, q, mode)?;
            fs::create_dir_all(&output)?;
            for (i, spec) in basis.iter().enumerate() {
                let path = output.join(member_file_name(i, spec));
                fs::write(&path, spec.to_json_string()?)?;
                println!("{}", path.display());
            }
        }
        SignalCmd::Eval { spec, state, bits } => {
            let signal = AnySignal::from_json_str(&fs::read_to_string(spec)?)?;
            let psi = load_state(&state)?;
            println!("{}", in_units(signal.evaluate(&psi)?, bits));
        }
        SignalCmd::Expand { spec, reduce_pure: reduce } => {
            let signal = AnySignal::from_json_str(&fs::read_to_string(spec)?)?;
            let spec = match signal {
                AnySignal::Symmetric(s) => s,
                AnySignal::NonSymmetric(_) => {
                    return Err(Error::InvalidArgument(
                        "tensor specs have no grouped expansion; only partition-term specs do"
                            .into(),
                    ))
                }
            };
            let mut terms = expand_grouped(&spec)?;
            if reduce {
                terms = reduce_pure(&terms, spec.q())?;
            }
            let ps = PartySet::with_default_labels(spec.q())?;
            println!("{}", render_expansion(&terms, &ps));
        }
    }
    Ok(())
}

fn print_suite(suite: &SuiteReport, with_checks: bool) {
    let verdict = if suite.pass { "PASS" } else { "FAIL" };
    println!(
        "{verdict} {} ({} checks, {} ms, seed {})",
        suite.name,
        suite.checks.len(),
        suite.wall_ms,
        suite.seed
    );
    for c in &suite.checks {
        if with_checks || !c.pass {
            println!(
                "  [{}] {}: measured {:e} vs {:e}",
                if c.pass { "ok" } else { "FAIL" },
                c.name,
                c.measured,
                c.tolerance
            );
        }
    }
}

fn print_report(report: &Report) {
    for suite in &report.suites {
        print_suite(suite, false);
    }
    println!(
        "{}: {} suites, seed {}, q-max {}",
        if report.pass { "PASS" } else { "FAIL" },
        report.suites.len(),
        report.seed,
        report.q_max
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use gme::state::CATALOG_NAMES;

    #[test]
    fn catalog_geometry_defaults_cover_all_names() {
        for name in CATALOG_NAMES {
            let (q, d) = canonical_geometry(name);
            assert!(catalog_state(name, q, d).is_ok(), "{name}");
        }
    }

    #[test]
    fn partition_argument_inference() {
        let (pi, ps) = parse_partition_arg("AB|CD").unwrap();
        assert_eq!(pi.q(), 4);
        assert_eq!(pi.format(&ps), "AB|CD");
        assert!(parse_partition_arg("").is_err());
    }
}
