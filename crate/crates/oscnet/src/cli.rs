//! Command-line interface.
//!
//! Vertex indices are 1-based on the command line and in reports.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use oscnet_core::enumerate::{ScanConfig, DEFAULT_SCAN_LIMIT};
use oscnet_core::gaussian::exponent_matrix;
use oscnet_core::netgraph::{distance_relations, graph_distance_relations, verify_scheme};
use oscnet_core::strata::{block_multiplicities, stratum_term_counts, verify_family_with_tol, Family};
use oscnet_core::{
    bipartite_entropy, build_hamming, potential_matrix, Bipartition, ExponentConvention, HammingSpec, LogBase,
    SymmetricMatrix,
};

use crate::edges::read_edge_list;
use crate::error::{CliError, EXIT_OK, EXIT_VALIDATION};
use crate::parallel::scan_parallel;
use crate::render::{self, Format, Header};
use crate::tables::{check_table1, check_table2, failure_summary, table1, table2, TableCheck};

/// Overrides the largest graph `scan` accepts.
pub const SCAN_LIMIT_ENV: &str = "OSC_SCAN_LIMIT";

#[derive(Debug, Parser)]
#[command(
    name = "oscnet",
    version,
    about = "Ground-state entanglement entropy of harmonic-oscillator networks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entropy of one bipartition, with its mode spectrum.
    Entropy(EntropyArgs),
    /// Entropy classes of all bipartitions with a given part size.
    Scan(ScanArgs),
    /// Closed-form spectra of the strata families next to the direct computation.
    Analytic(AnalyticArgs),
    /// Tridiagonal blocks of the Hamming adjacency.
    Blocks(BlocksArgs),
    /// Intersection numbers of the distance relations.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Number of digits of the Hamming graph H(d, n).
    #[arg(long, requires = "n", conflicts_with = "edges")]
    pub d: Option<usize>,
    /// Alphabet size of the Hamming graph H(d, n).
    #[arg(long, requires = "d", conflicts_with = "edges")]
    pub n: Option<usize>,
    /// Edge-list file: vertex count on the first line, then 0-based "i j" pairs.
    #[arg(long, value_name = "FILE")]
    pub edges: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Coupling strength in V = I + 2gL.
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    /// Logarithm base: 2 or e.
    #[arg(long, default_value = "2", value_parser = parse_log_base)]
    pub log_base: LogBase,
    /// Ground-state exponent: literal-v (M = V) or sqrt-v (M = V^1/2).
    #[arg(long, default_value = "literal-v", value_parser = parse_convention)]
    pub convention: ExponentConvention,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// Relative clustering tolerance (scan) or agreement tolerance (analytic).
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    /// Write to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Vertices of part A, 1-based, comma separated.
    #[arg(long, required = true, value_delimiter = ',')]
    pub part: Vec<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Size of part A.
    #[arg(long)]
    pub size_a: usize,
    /// For equal halves, count each partition and its complement once.
    #[arg(long)]
    pub dedup: bool,
    /// List every member of every class.
    #[arg(long)]
    pub members: bool,
    /// Compare with the reference classes of H(2,3), part size 5.
    #[arg(long, conflicts_with = "check_table2")]
    pub check_table1: bool,
    /// Compare with the reference classes of H(2,4), part size 8, deduplicated.
    #[arg(long)]
    pub check_table2: bool,
    /// Worker threads (does not change the output).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long, value_parser = parse_family)]
    pub family: Family,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    /// halfhalf only: reduce every chain instead of using the parity-restricted closed form.
    #[arg(long)]
    pub general: bool,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct BlocksArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub common: CommonArgs,
}

fn parse_log_base(s: &str) -> Result<LogBase, String> {
    s.parse().map_err(|e: oscnet_core::Error| e.to_string())
}

fn parse_convention(s: &str) -> Result<ExponentConvention, String> {
    s.parse().map_err(|e: oscnet_core::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: oscnet_core::Error| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: Command) -> Result<(), CliError> {
    match command {
        Command::Entropy(a) => cmd_entropy(a),
        Command::Scan(a) => cmd_scan(a),
        Command::Analytic(a) => cmd_analytic(a),
        Command::Blocks(a) => cmd_blocks(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

enum Graph {
    Hamming(HammingSpec),
    Edges,
}

fn resolve_graph(args: &GraphArgs, header: &mut Header) -> Result<(Graph, SymmetricMatrix), CliError> {
    match (args.d, args.n, &args.edges) {
        (Some(d), Some(n), None) => {
            let spec = HammingSpec::new(d, n)?;
            header.push("graph", "hamming");
            header.push("d", d);
            header.push("n", n);
            Ok((Graph::Hamming(spec), build_hamming(spec)?))
        }
        (None, None, Some(path)) => {
            let list = read_edge_list(path)?;
            header.push("graph", "edges");
            header.push("edges", path.display());
            header.push("vertices", list.vertices);
            header.push("edge_lines", list.edges.len());
            Ok((Graph::Edges, list.adjacency()?))
        }
        _ => Err(CliError::Validation("give either --d and --n, or --edges".into())),
    }
}

fn push_common(header: &mut Header, c: &CommonArgs) -> Result<(), CliError> {
    if !(c.tol > 0.0) || !c.tol.is_finite() {
        return Err(CliError::Validation(format!("--tol must be positive, got {}", c.tol)));
    }
    header.push("g", c.g);
    header.push("log_base", c.log_base.as_str());
    header.push("convention", c.convention.as_str());
    header.push("format", c.format.as_str());
    header.push("tol", c.tol);
    Ok(())
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Output {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Output {
                    path: "stdout".into(),
                    source,
                })
        }
    }
}

fn cmd_entropy(a: EntropyArgs) -> Result<(), CliError> {
    let mut header = Header::default();
    header.push("command", "entropy");
    let (_, adj) = resolve_graph(&a.graph, &mut header)?;
    let p = Bipartition::from_one_based(&a.part, adj.dim())?;
    header.push(
        "part",
        p.to_one_based()
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(","),
    );
    push_common(&mut header, &a.common)?;
    let m = exponent_matrix(&potential_matrix(&adj, a.common.g)?, a.common.convention)?;
    let result = bipartite_entropy(&m, &p, a.common.log_base)?;
    emit(&render::entropy(&header, &result, a.common.format), &a.common.out)
}

fn scan_limit() -> Result<usize, CliError> {
    match std::env::var(SCAN_LIMIT_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Validation(format!("{SCAN_LIMIT_ENV}={v:?} is not a vertex count"))),
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_SCAN_LIMIT),
        Err(e) => Err(CliError::Validation(format!("{SCAN_LIMIT_ENV}: {e}"))),
    }
}

fn cmd_scan(a: ScanArgs) -> Result<(), CliError> {
    let mut header = Header::default();
    header.push("command", "scan");
    let (graph, adj) = resolve_graph(&a.graph, &mut header)?;
    let limit = scan_limit()?;
    header.push("size_a", a.size_a);
    header.push("dedup", a.dedup);
    header.push("members", a.members);
    header.push("check_table1", a.check_table1);
    header.push("check_table2", a.check_table2);
    header.push("scan_limit", limit);
    push_common(&mut header, &a.common)?;

    let shape = match graph {
        Graph::Hamming(s) => Some((s.d(), s.n())),
        Graph::Edges => None,
    };
    if a.check_table1 && (shape != Some((2, 3)) || a.size_a != 5) {
        return Err(CliError::Validation(
            "--check-table1 needs --d 2 --n 3 --size-a 5".into(),
        ));
    }
    if a.check_table2 && (shape != Some((2, 4)) || a.size_a != 8 || !a.dedup) {
        return Err(CliError::Validation(
            "--check-table2 needs --d 2 --n 4 --size-a 8 --dedup".into(),
        ));
    }

    let cfg = ScanConfig {
        size_a: a.size_a,
        dedup_complements: a.dedup,
        g: a.common.g,
        convention: a.common.convention,
        log_base: a.common.log_base,
        cluster_tol: a.common.tol,
        keep_members: a.members || a.check_table1 || a.check_table2,
    };
    let report = scan_parallel(&adj, &cfg, limit, a.jobs)?;
    let checks: Vec<TableCheck> = if a.check_table1 {
        check_table1(&report, &table1())?
    } else if a.check_table2 {
        check_table2(&report, &table2())?
    } else {
        Vec::new()
    };
    emit(
        &render::scan(&header, &report, &checks, a.members, a.common.format),
        &a.common.out,
    )?;
    match failure_summary(&checks) {
        Some(diff) => Err(CliError::CheckFailed(diff)),
        None => Ok(()),
    }
}

fn cmd_analytic(a: AnalyticArgs) -> Result<(), CliError> {
    let mut header = Header::default();
    header.push("command", "analytic");
    header.push("family", a.family.as_str());
    header.push("d", a.d);
    header.push("n", a.n);
    header.push("general", a.general);
    push_common(&mut header, &a.common)?;
    if a.common.convention != ExponentConvention::LiteralV {
        return Err(CliError::Validation(
            "closed-form families are defined for the literal-v convention only".into(),
        ));
    }
    let report = verify_family_with_tol(a.family, a.d, a.n, a.common.g, a.general, a.common.tol)?;
    let scale = match a.common.log_base {
        LogBase::Two => 1.0,
        LogBase::E => std::f64::consts::LN_2,
    };
    emit(
        &render::analytic(&header, &report, scale, a.common.format),
        &a.common.out,
    )
}

fn cmd_blocks(a: BlocksArgs) -> Result<(), CliError> {
    let mut header = Header::default();
    header.push("command", "blocks");
    header.push("d", a.d);
    header.push("n", a.n);
    push_common(&mut header, &a.common)?;
    let blocks = block_multiplicities(a.d, a.n)?;
    let terms = stratum_term_counts(a.d, a.n)?;
    emit(
        &render::blocks(&header, &blocks, &terms, a.common.format),
        &a.common.out,
    )
}

fn cmd_verify(a: VerifyArgs) -> Result<(), CliError> {
    let mut header = Header::default();
    header.push("command", "verify");
    let (graph, adj) = resolve_graph(&a.graph, &mut header)?;
    push_common(&mut header, &a.common)?;
    let relations = match graph {
        Graph::Hamming(spec) => distance_relations(spec)?,
        Graph::Edges => graph_distance_relations(&adj)?,
    };
    let tensor = verify_scheme(&relations)?;
    emit(&render::verify(&header, &tensor, a.common.format), &a.common.out)
}
