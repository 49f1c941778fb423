use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;
use trident::bounds::{complement_identity_check, BoundParams};
use trident::certifier::{Failure, PeelCertificate};
use trident::counting::CountError;
use trident::enumerator::{random_bounded_graph, EnumError, EnumerationReport};
use trident::format::{parse_edge_list, parse_graph6};
use trident::{
    count_cliques, enumerate_and_verify, full_report, gls_bound, peel, verify_certificate, CountsReport,
    EnumerationConfig, Graph, Verification,
};

/// Exact triangle and clique counting on degree-bounded graphs, with
/// checkable peeling certificates.
#[derive(Parser, Debug)]
#[command(name = "trident", version, about)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Input format; by default taken from the extension (.g6, .el, .txt).
    #[arg(long, global = true, value_enum)]
    format: Option<InputFormat>,
    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Seed for `random:N:D` graph sources.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the primary output (certificate, report, ...) to this file.
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    G6,
    El,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count triangles, or t-cliques with -t.
    Count {
        graph: String,
        #[arg(short = 't', default_value_t = 3)]
        t: usize,
    },
    /// Print q, r and the extremal bound for n vertices and maximum degree d.
    Bound {
        n: u64,
        d: u64,
        #[arg(default_value_t = 3)]
        t: u64,
    },
    /// Peel the graph and emit a certificate for the triangle bound.
    Certify {
        graph: String,
        #[arg(short = 'd')]
        d: u64,
    },
    /// Replay a certificate against a graph.
    Verify { graph: String, certificate: PathBuf },
    /// Exhaustively check the clique bound over all labeled graphs.
    Enumerate {
        #[arg(short = 'n')]
        n: usize,
        #[arg(short = 'd')]
        d: usize,
        #[arg(short = 't', default_value_t = 3)]
        t: usize,
    },
    /// Check T(G) + T(complement) against the degree formula.
    ComplementCheck { graph: String },
    /// Per-vertex neighborhood counts and the W statistic.
    Report { graph: String },
}

#[derive(Debug, Error)]
enum CliError {
    /// Bad flags, unreadable files, malformed input. Exit 2.
    #[error("{0}")]
    Input(String),
    /// A check ran and failed. Exit 1.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Input(_) => 2,
        }
    }
}

fn input(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn count_error(e: CountError) -> CliError {
    match e {
        CountError::IdentityViolation { .. } => CliError::Failed(e.to_string()),
        other => input(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = io::stdout().lock();
    match run(cli, &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = stdout.flush();
            eprintln!("trident: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let g = &cli.global;
    if g.jobs == 0 {
        return Err(input("--jobs must be at least 1"));
    }
    match &cli.command {
        Command::Count { graph, t } => count(g, graph, *t, out),
        Command::Bound { n, d, t } => bound(g, *n, *d, *t, out),
        Command::Certify { graph, d } => certify(g, graph, *d, out),
        Command::Verify { graph, certificate } => verify(g, graph, certificate, out),
        Command::Enumerate { n, d, t } => enumerate(g, *n, *d, *t, out),
        Command::ComplementCheck { graph } => complement(g, graph, out),
        Command::Report { graph } => report(g, graph, out),
    }
}

fn detect_format(path: &str, forced: Option<InputFormat>) -> Result<InputFormat, CliError> {
    if let Some(f) = forced {
        return Ok(f);
    }
    match Path::new(path).extension().and_then(|e| e.to_str()) {
        Some("g6") => Ok(InputFormat::G6),
        Some("el") | Some("txt") => Ok(InputFormat::El),
        _ => Err(input(format!("cannot infer the format of {path:?}; pass --format g6 or --format el"))),
    }
}

/// `random:N:D` builds a seeded random graph; `-` reads standard input.
fn load_graph(g: &Global, source: &str) -> Result<Graph, CliError> {
    if let Some(rest) = source.strip_prefix("random:") {
        let (n, d) = rest
            .split_once(':')
            .and_then(|(n, d)| Some((n.parse::<usize>().ok()?, d.parse::<usize>().ok()?)))
            .ok_or_else(|| input(format!("expected random:N:D, got {source:?}")))?;
        return Ok(random_bounded_graph(n, d, g.seed));
    }
    let text = if source == "-" {
        let mut buf = String::new();
        io::stdin().read_to_string(&mut buf).map_err(|e| input(format!("stdin: {e}")))?;
        buf
    } else {
        fs::read_to_string(source).map_err(|e| input(format!("{source}: {e}")))?
    };
    let format = if source == "-" { g.format.unwrap_or(InputFormat::El) } else { detect_format(source, g.format)? };
    let parsed = match format {
        InputFormat::G6 => {
            let mut records = text.lines().filter(|l| !l.trim().is_empty());
            let first = records.next().ok_or_else(|| input(format!("{source}: no graph6 record")))?;
            if records.next().is_some() {
                return Err(input(format!("{source}: expected a single graph6 record")));
            }
            parse_graph6(first.trim())
        }
        InputFormat::El => parse_edge_list(&text),
    };
    parsed.map_err(|e| input(format!("{source}: {e}")))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| input(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

/// Prints `text` or, when `-o` is set, writes it there instead.
fn emit(g: &Global, out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    match &g.output {
        Some(path) => write_file(path, text),
        None => out.write_all(text.as_bytes()).map_err(|e| input(format!("stdout: {e}"))),
    }
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| input(format!("stdout: {e}")))
}

#[derive(Serialize)]
struct CountOutput {
    n: usize,
    m: usize,
    t: usize,
    count: u128,
}

fn count(g: &Global, source: &str, t: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = load_graph(g, source)?;
    let count = count_cliques(&graph, t).map_err(count_error)?;
    let text = if g.json {
        to_json(&CountOutput { n: graph.n(), m: graph.edge_count(), t, count })
    } else if t == 3 {
        format!("triangles={count}\n")
    } else {
        format!("cliques_{t}={count}\n")
    };
    emit(g, out, &text)
}

#[derive(Serialize)]
struct BoundOutput {
    #[serde(flatten)]
    params: BoundParams,
    bound: u128,
}

fn bound(g: &Global, n: u64, d: u64, t: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let (params, bound) = gls_bound(n, d, t).map_err(input)?;
    let text = if g.json {
        to_json(&BoundOutput { params, bound })
    } else {
        format!("q={} r={} bound={bound}\n", params.q, params.r)
    };
    emit(g, out, &text)
}

#[derive(Serialize)]
struct CertifySummary<'a> {
    input_hash: &'a str,
    n: u64,
    d: u64,
    steps: usize,
    total_triangles: u128,
    bound: u128,
}

fn certify(g: &Global, source: &str, d: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = load_graph(g, source)?;
    let cert = peel(&graph, d).map_err(input)?;
    let Some(path) = &g.output else {
        return say(out, &(cert.to_json() + "\n"));
    };
    write_file(path, &(cert.to_json() + "\n"))?;
    let summary = CertifySummary {
        input_hash: &cert.header.input_hash,
        n: cert.header.n,
        d: cert.header.d,
        steps: cert.steps.len(),
        total_triangles: cert.totals.total_triangles,
        bound: cert.header.bound,
    };
    let text = if g.json {
        to_json(&summary)
    } else {
        format!(
            "certificate  {}\nsteps        {}\ntriangles    {}\nbound        {}\n",
            path.display(),
            summary.steps,
            summary.total_triangles,
            summary.bound
        )
    };
    say(out, &text)
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    valid: bool,
    failure: Option<&'a Failure>,
}

fn verify(g: &Global, source: &str, cert_path: &Path, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = load_graph(g, source)?;
    let text = fs::read_to_string(cert_path).map_err(|e| input(format!("{}: {e}", cert_path.display())))?;
    let cert = PeelCertificate::from_json(&text).map_err(|e| input(format!("{}: {e}", cert_path.display())))?;
    let verdict = verify_certificate(&graph, &cert);
    let failure = verdict.failure();
    let text = if g.json {
        to_json(&VerifyOutput { valid: verdict.is_valid(), failure })
    } else if verdict.is_valid() {
        "valid\n".to_string()
    } else {
        "invalid\n".to_string()
    };
    emit(g, out, &text)?;
    match verdict {
        Verification::Valid => Ok(()),
        Verification::Invalid(f) => Err(CliError::Failed(format!("certificate rejected: {f}"))),
    }
}

fn enumerate(g: &Global, n: usize, d: usize, t: usize, out: &mut dyn Write) -> Result<(), CliError> {
    let mut config = EnumerationConfig::from_env().map_err(input)?;
    config.jobs = g.jobs;
    let report = enumerate_and_verify(n, d, t, &config).map_err(|e| match e {
        EnumError::NeighborhoodBoundViolated { .. } | EnumError::CountMismatch { .. } | EnumError::Count(_) => {
            CliError::Failed(e.to_string())
        }
        other => input(other),
    })?;
    if let Some(path) = &g.output {
        write_file(path, &to_json(&report))?;
    }
    let text = if g.json { to_json(&report) } else { enumeration_table(&report) };
    say(out, &text)?;
    if report.violation_found {
        return Err(CliError::Failed(format!(
            "found {} cliques, above the bound {}",
            report.max_cliques_found, report.bound
        )));
    }
    Ok(())
}

fn enumeration_table(r: &EnumerationReport) -> String {
    let verdict = serde_json::to_value(r.uniqueness_verdict).expect("verdict serializes");
    let mut s = format!(
        "n={} d={} t={} q={} r={}\n\
         graphs enumerated   {}\n\
         bound               {}\n\
         max cliques found   {}\n\
         violation           {}\n\
         labeled extremal    {}\n\
         verdict             {}\n",
        r.n,
        r.d,
        r.t,
        r.q,
        r.r,
        r.graphs_enumerated,
        r.bound,
        r.max_cliques_found,
        r.violation_found,
        r.labeled_extremal,
        verdict.as_str().unwrap_or_default(),
    );
    if let Some(m) = r.matches_prediction {
        s += &format!("matches prediction  {m}\n");
    }
    s += "extremal graphs (graph6):\n";
    for form in &r.extremal_graphs {
        s += &format!("  {form}\n");
    }
    s
}

#[derive(Serialize)]
struct ComplementOutput {
    n: usize,
    triangles_plus_complement: u128,
    formula: u128,
    holds: bool,
}

fn complement(g: &Global, source: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = load_graph(g, source)?;
    let (lhs, rhs) = complement_identity_check(&graph).map_err(count_error)?;
    let text = if g.json {
        to_json(&ComplementOutput { n: graph.n(), triangles_plus_complement: lhs, formula: rhs, holds: lhs == rhs })
    } else {
        format!("T(G)+T(Gc)={lhs} formula={rhs}\n")
    };
    emit(g, out, &text)?;
    if lhs != rhs {
        return Err(CliError::Failed(format!("complement identity fails: {lhs} != {rhs}")));
    }
    Ok(())
}

#[derive(Serialize)]
struct ReportOutput<'a> {
    n: usize,
    m: usize,
    degrees: &'a [usize],
    #[serde(flatten)]
    counts: &'a CountsReport,
    min_slack_vertex: Option<usize>,
    min_slack: Option<i128>,
}

fn report(g: &Global, source: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let graph = load_graph(g, source)?;
    let counts = full_report(&graph).map_err(count_error)?;
    let slack = counts.min_slack(graph.degrees());
    let text = if g.json {
        to_json(&ReportOutput {
            n: graph.n(),
            m: graph.edge_count(),
            degrees: graph.degrees(),
            counts: &counts,
            min_slack_vertex: slack.map(|s| s.0),
            min_slack: slack.map(|s| s.1),
        })
    } else {
        let mut s = format!(
            "n={} m={}\ntriangles={}\nw={}\nomega={}\ndegree_cube_sum={}\n",
            graph.n(),
            graph.edge_count(),
            counts.triangle_count,
            counts.w_count,
            counts.omega_count,
            counts.degree_cube_sum
        );
        if let Some((v, sl)) = slack {
            s += &format!("min_slack_vertex={v} min_slack={sl}\n");
        }
        s += "vertex  degree  meeting\n";
        for (v, m) in counts.per_vertex_meeting.iter().enumerate() {
            s += &format!("{v:>6}  {:>6}  {m:>7}\n", graph.degree(v));
        }
        s
    };
    emit(g, out, &text)
}
