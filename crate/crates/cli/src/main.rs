//! `schur`: build, inspect and classify Schur rings over finite abelian groups.
//!
//! Rings travel as single-line JSON documents, so commands compose through
//! pipes. Exit codes: 0 success, 1 negative verdict, 2 input error, 3 bound
//! exceeded.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use schur_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "schur",
    version,
    about = "Schur rings over finite abelian groups"
)]
pub struct Cli {
    /// Size limit for the searches, overriding each command's default
    /// (group order for combinatorial searches and enumeration, rank for
    /// algebraic ones).
    #[arg(long, global = true)]
    pub bound: Option<usize>,

    /// Worker threads for the parallel searches. Output does not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Facts about a group.
    #[command(subcommand)]
    Group(GroupCmd),
    /// Validate and inspect a ring.
    #[command(subcommand)]
    Sring(SringCmd),
    /// Construct rings.
    #[command(subcommand)]
    Build(BuildCmd),
    /// Combinatorial and algebraic isomorphisms.
    #[command(subcommand)]
    Iso(IsoCmd),
    /// Schurity, normality and separability.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Exhaustive enumeration.
    #[command(subcommand)]
    Enum(EnumCmd),
    /// The two non-separable fixtures.
    #[command(subcommand)]
    Witness(WitnessCmd),
}

/// A ring read from a file, or from stdin when omitted.
#[derive(Args, Debug)]
pub struct RingIn {
    pub input: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum GroupCmd {
    /// Order, invariant factors, exponent, |Aut(G)| and subgroup count.
    Info {
        /// Cyclic factor orders such as `2,2,4`; otherwise a group document is read.
        #[arg(long)]
        factors: Option<String>,
        input: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum SringCmd {
    /// Revalidate and print the canonical form.
    Validate(RingIn),
    /// Structure constants `c[X][Y][Z]`.
    Constants(RingIn),
    /// The ring induced on the section `U/L`.
    Induce {
        #[command(flatten)]
        ring: RingIn,
        /// Generators of U as residue lists, e.g. `--upper 1,0 --upper 0,1`. Defaults to G.
        #[arg(long)]
        upper: Vec<String>,
        /// Generators of L. Defaults to the trivial subgroup.
        #[arg(long)]
        lower: Vec<String>,
    },
    /// `<X>` and `rad(X)` for every basic set.
    Radical(RingIn),
}

#[derive(Subcommand, Debug)]
pub enum BuildCmd {
    /// Cyclotomic ring: orbits of a group of automorphisms.
    Cyc {
        #[arg(long)]
        factors: String,
        /// Images of the canonical generators, e.g. `1,0,0;1,1,2;1,0,1`. Repeatable.
        #[arg(long = "auto")]
        autos: Vec<String>,
    },
    /// Orbit ring of `G_right` extended by automorphisms and permutations.
    Orbit {
        #[arg(long)]
        factors: String,
        #[arg(long = "auto")]
        autos: Vec<String>,
        /// Extra permutations of element indices, e.g. `0,2,1,3`. Repeatable.
        #[arg(long = "perm")]
        perms: Vec<String>,
    },
    /// Tensor product over the direct product of the two groups.
    Tensor { left: PathBuf, right: PathBuf },
    /// Wreath product `A_L wr A_{G/L}`.
    Wreath {
        lower_ring: PathBuf,
        quotient_ring: PathBuf,
        #[arg(long)]
        factors: String,
        /// Generators of L.
        #[arg(long)]
        lower: Vec<String>,
    },
    /// Generalized wreath product over the section `U/L`.
    Swreath {
        upper_ring: PathBuf,
        quotient_ring: PathBuf,
        #[arg(long)]
        factors: String,
        #[arg(long)]
        upper: Vec<String>,
        #[arg(long)]
        lower: Vec<String>,
    },
    /// Algebraic fusion by the group generated by the given class maps.
    Fusion {
        #[command(flatten)]
        ring: RingIn,
        /// Class maps such as `0,2,1`. The envelope's map is used when omitted.
        #[arg(long = "map")]
        maps: Vec<String>,
    },
    /// Lift of an algebraic automorphism to `B wr Z(G/H)`.
    Lift {
        #[command(flatten)]
        ring: RingIn,
        #[arg(long)]
        factors: String,
        /// Generators of the subgroup H carrying B.
        #[arg(long)]
        subgroup: Vec<String>,
        #[arg(long = "map")]
        map: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum IsoCmd {
    /// Aut(A): order, base and strong generators.
    Aut(RingIn),
    /// Aut_alg(A) and its induced subgroup.
    Autalg(RingIn),
    /// Whether a class map is induced by a combinatorial isomorphism. Exit 1 if not.
    Induced {
        #[command(flatten)]
        ring: RingIn,
        #[arg(long = "map")]
        map: Option<String>,
        /// Target ring; defaults to the source.
        #[arg(long)]
        target: Option<PathBuf>,
    },
    /// Algebraic and combinatorial isomorphisms between two rings.
    Between { left: PathBuf, right: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum AnalyzeCmd {
    /// Exit 1 if the ring is not schurian.
    Schurian(RingIn),
    /// Exit 1 if the ring is not normal.
    Normal(RingIn),
    /// Separability report. Exit 1 on NON_SEPARABLE.
    Separable {
        #[command(flatten)]
        ring: RingIn,
        /// Use the ring itself as the only target.
        #[arg(long = "self", group = "targets_from")]
        self_only: bool,
        /// JSON-lines file of target rings.
        #[arg(long, group = "targets_from")]
        targets: Option<PathBuf>,
        /// All rings over all abelian groups of the same order.
        #[arg(long, group = "targets_from")]
        exhaustive: bool,
    },
}

#[derive(Subcommand, Debug)]
pub enum EnumCmd {
    /// Every S-ring over the group, one JSON document per line.
    Srings {
        #[arg(long)]
        factors: String,
        /// One representative per Cayley-isomorphism class.
        #[arg(long)]
        up_to_cayley: bool,
    },
    /// The exceptional rings over C3^3 as CSV.
    Table1,
}

#[derive(Subcommand, Debug)]
pub enum WitnessCmd {
    /// Order 16 witness with its non-induced class map.
    P2,
    /// Order 81 witness with its non-induced class map.
    P3,
}

/// Successful runs either confirm or refute what was asked.
pub enum Outcome {
    Positive,
    Negative,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::BoundExceeded { .. } => 3,
        _ => 2,
    }
}

/// Variant name of an error, for machine consumption.
fn kind(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!(
                "{}",
                json!({ "error": "Workers", "message": e.to_string() })
            );
            return ExitCode::from(2);
        }
    }
    match commands::run(&cli) {
        Ok(Outcome::Positive) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("{}", json!({ "error": kind(&e), "message": e.to_string() }));
            ExitCode::from(exit_code(&e))
        }
    }
}
