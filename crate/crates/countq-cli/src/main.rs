//! `countq` — exact counting-gap compilation and quantum acceptance
//! decisions from the command line.
//!
//! Exit codes: 0 affirmative/success, 1 negative decision (probability
//! exactly zero / graphs isomorphic), 2 usage or input error, 3 internal
//! invariant violation (a cross-check that must never fail did).

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use countq_core::algebraic_converse::{
    parse_circuit_file, probability_decomposition, probability_of_state, simulate_field,
};
use countq_core::bits::BitString;
use countq_core::constructions::{
    describe_circuit, run_gni, run_variant, RunOptions, Variant, DEFAULT_VERTEX_CAP,
};
use countq_core::error::Error;
use countq_core::exact_scalar::Amplitude;
use countq_core::gap_oracle::{self, parse_graph, parse_predicate, WitnessPredicate};
use countq_core::selftest::run_selftest;

#[derive(Parser)]
#[command(
    name = "countq",
    about = "Exact quantum-circuit simulation with counting cross-checks",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Decimal digits for approximate renderings (exact forms are always shown)
    #[arg(long, global = true, env = "COUNTQ_DIGITS", default_value_t = 10,
          value_parser = positive_usize)]
    digits: usize,

    /// Emit per-layer transcripts and decompositions
    #[arg(long, global = true)]
    trace: bool,

    /// Machine-readable tab-separated output (one header line, one record)
    #[arg(long, global = true)]
    tsv: bool,

    /// Worker threads for witness enumeration (0 = rayon default)
    #[arg(long, global = true, env = "COUNTQ_THREADS", default_value_t = 0)]
    threads: usize,

    /// Cap on enumerable witness bits
    #[arg(
        long,
        global = true,
        env = "COUNTQ_MAX_WITNESS_BITS",
        default_value_t = gap_oracle::DEFAULT_WITNESS_CAP,
        value_parser = positive_usize
    )]
    max_witness_bits: usize,

    /// Cap on simultaneously stored superposition terms
    #[arg(long, global = true, env = "COUNTQ_MAX_TERMS", default_value_t = 1 << 26,
          value_parser = positive_usize)]
    max_terms: usize,

    /// Skip the gap-oracle cross-check (for witness widths near the cap)
    #[arg(long, global = true)]
    no_crosscheck: bool,
}

#[derive(Args)]
struct VariantArg {
    /// Compiler variant: sqrt2 or rational
    #[arg(long, env = "COUNTQ_VARIANT", default_value = "sqrt2")]
    variant: String,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a predicate's exact gap by witness enumeration
    Gap {
        /// Predicate file
        predicate: PathBuf,
        /// Classical input bits
        #[arg(long, default_value = "")]
        x: String,
    },
    /// Compile a predicate into a circuit, run it exactly, report the
    /// accepting amplitude and the gap cross-check
    Simulate {
        predicate: PathBuf,
        #[arg(long, default_value = "")]
        x: String,
        #[command(flatten)]
        variant: VariantArg,
    },
    /// Decide whether a circuit accepts with nonzero probability
    /// (exit 0 possible, 1 exactly zero)
    Qap {
        /// Circuit file
        circuit: PathBuf,
    },
    /// Compare two graphs through the amplitude-zero verdict, cross-checked
    /// by permutation search (exit 0 non-isomorphic, 1 isomorphic)
    Gni {
        graph1: PathBuf,
        graph2: PathBuf,
        #[command(flatten)]
        variant: VariantArg,
        /// Cap on vertex count
        #[arg(long, env = "COUNTQ_MAX_VERTICES", default_value_t = DEFAULT_VERTEX_CAP)]
        max_vertices: usize,
    },
    /// Run the built-in invariant suite (exit 3 on any failure)
    Selftest {
        /// Smaller subset, finishes in seconds
        #[arg(long)]
        quick: bool,
    },
}

fn positive_usize(s: &str) -> Result<usize, String> {
    let v: usize = s.parse().map_err(|e| format!("{e}"))?;
    if v == 0 {
        return Err("must be a positive integer".into());
    }
    Ok(v)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.threads > 0 {
        // a failure here means a pool already exists, which is fine
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_internal() {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn run_options(cli: &Cli) -> RunOptions {
    RunOptions {
        max_witness_bits: cli.max_witness_bits,
        max_terms: cli.max_terms,
        crosscheck: !cli.no_crosscheck,
        keep_final_state: false,
        trace: cli.trace,
        digits: cli.digits,
    }
}

fn load_predicate(path: &PathBuf) -> countq_core::Result<WitnessPredicate> {
    let text = std::fs::read_to_string(path)?;
    parse_predicate(&text)
}

fn run(cli: &Cli) -> countq_core::Result<ExitCode> {
    match &cli.command {
        Command::Gap { predicate, x } => {
            let pred = load_predicate(predicate)?;
            let x: BitString = x.parse()?;
            let gv = gap_oracle::gap_with_cap(&pred, &x, cli.max_witness_bits)?;
            if cli.tsv {
                output::tsv(
                    &["command", "predicate", "x", "n", "m", "accept", "reject", "gap"],
                    &[
                        "gap".into(),
                        predicate.display().to_string(),
                        x.to_string(),
                        pred.input_bits().to_string(),
                        pred.witness_bits().to_string(),
                        gv.accept.to_string(),
                        gv.reject.to_string(),
                        gv.gap.to_string(),
                    ],
                );
            } else {
                println!("A={} R={} gap={}", gv.accept, gv.reject, gv.gap);
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            predicate,
            x,
            variant,
        } => {
            let pred = load_predicate(predicate)?;
            let x: BitString = x.parse()?;
            let variant: Variant = variant.variant.parse()?;
            let opts = run_options(cli);
            let report = run_variant(variant, &pred, &x, &opts)?;
            if cli.trace && !cli.tsv {
                println!("circuit: {}", describe_circuit(variant, report.m));
                for line in &report.transcript {
                    println!("{line}");
                }
            }
            output::construction_report(&report, predicate, &x, &pred, cli.digits, cli.tsv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Qap { circuit } => {
            let c = parse_circuit_file(circuit)?;
            let opts = run_options(cli);
            let run = simulate_field(&c, &opts)?;
            if cli.trace && !cli.tsv {
                for line in &run.transcript {
                    println!("{line}");
                }
            }
            let possible = run
                .final_state
                .iter()
                .any(|(basis, _)| c.accepting.matches(&basis));
            let probability = probability_of_state(&run.final_state, &c.accepting)?;
            if possible == probability.is_zero() {
                return Err(Error::Internal(
                    "term inspection and summed probability disagree".into(),
                ));
            }
            if cli.trace && !cli.tsv {
                match probability_decomposition(&c, &opts) {
                    Ok(dec) => output::probability_decomposition(&dec),
                    Err(Error::DecompositionUnsupported(why)) => {
                        println!("decomposition: unavailable ({why})")
                    }
                    Err(e) => return Err(e),
                }
            }
            if cli.tsv {
                output::tsv(
                    &[
                        "command",
                        "circuit",
                        "qubits",
                        "layers",
                        "decision",
                        "probability",
                        "probability_dec",
                    ],
                    &[
                        "qap".into(),
                        circuit.display().to_string(),
                        c.width.to_string(),
                        c.layers.len().to_string(),
                        if possible { "possible" } else { "zero" }.into(),
                        probability.to_string(),
                        output::decimal_or_na(&probability, cli.digits),
                    ],
                );
            } else if possible {
                println!(
                    "POSSIBLE (acceptance probability != 0): {} (~ {})",
                    probability,
                    output::decimal_or_na(&probability, cli.digits)
                );
            } else {
                println!("ZERO (acceptance probability exactly 0)");
            }
            Ok(if possible {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Gni {
            graph1,
            graph2,
            variant,
            max_vertices,
        } => {
            let g1 = parse_graph(&std::fs::read_to_string(graph1)?)?;
            let g2 = parse_graph(&std::fs::read_to_string(graph2)?)?;
            let variant: Variant = variant.variant.parse()?;
            let opts = run_options(cli);
            let gni = run_gni(&g1, &g2, variant, *max_vertices, &opts)?;
            output::gni_report(&gni, graph1, graph2, cli.digits, cli.tsv)?;
            Ok(if gni.isomorphic {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            })
        }
        Command::Selftest { quick } => {
            let results = run_selftest(*quick);
            let width = results.iter().map(|r| r.name.len()).max().unwrap_or(0);
            let mut failed = Vec::new();
            for r in &results {
                println!(
                    "{:width$}  {}  {}",
                    r.name,
                    if r.passed { "PASS" } else { "FAIL" },
                    r.detail
                );
                if !r.passed {
                    failed.push(r.name);
                }
            }
            if failed.is_empty() {
                println!("all {} checks passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("failing properties: {}", failed.join(", "));
                Ok(ExitCode::from(3))
            }
        }
    }
}
