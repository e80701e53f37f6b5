//! Command-line surface for biquadratic tensor analysis.
//!
//! Commands: `analyze` (structure + largest eigenvalue + bound estimate,
//! optionally the exhaustive oracle), `graph` (tensor constructions and
//! separability reports from edge lists), `psd` (one-sided semi-definiteness
//! probe), `eig` (largest M-eigenvalue only), `oracle` (exhaustive
//! enumeration for m, n <= 3).
//!
//! Exit codes: 0 success, 2 malformed input (with line/column), 3
//! dimension or validity violations. Reports go to stdout in one write;
//! phase timings go to stderr so equal inputs and seeds produce
//! byte-identical reports.

use biquad_core::io::{
    parse_edge_list, to_json_line, AnalysisReport, DocumentError, EigenpairDoc, PsdReport,
    SeparabilityReportDoc, SolverSummaryDoc, StructureReportDoc, TensorDocument,
};
use biquad_core::{
    enumerate_m_eigenpairs_small, estimate_rho_star, min_m_eigenvalue_probe, solve_lambda_max,
    BiquadraticTensor, Error, SolverConfig, DEFAULT_RESIDUAL_TOL,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

const EXIT_PARSE: i32 = 2;
const EXIT_INVALID: i32 = 3;

#[derive(Parser)]
#[command(
    name = "biquad",
    version,
    about = "Spectral analysis of biquadratic tensors and bipartite 2-graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct SolverArgs {
    /// Convergence threshold on the iteration bound gap.
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    /// Number of solver restarts.
    #[arg(long, default_value_t = 32)]
    restarts: usize,
    /// Sweep budget per restart.
    #[arg(long, default_value_t = 5000)]
    max_iter: usize,
    /// Base seed for random starts.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl SolverArgs {
    fn config(&self) -> SolverConfig {
        SolverConfig {
            max_iter: self.max_iter,
            tol: self.tol,
            shift: None,
            restarts: self.restarts,
            seed: self.seed,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structure report, largest M-eigenvalue, and bound estimate for a
    /// tensor document.
    Analyze {
        tensor_file: PathBuf,
        /// Also enumerate all M-eigenpairs (requires m, n <= 3).
        #[arg(long)]
        oracle: bool,
        /// Angular resolution of the oracle scan (points per half-turn).
        #[arg(long, default_value_t = 721)]
        grid: usize,
        /// Sample count for the max-min bound estimate.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        solver: SolverArgs,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Emit a tensor construction or separability report for an edge list.
    Graph {
        edge_file: PathBuf,
        /// Which construction to emit.
        #[arg(long, value_enum)]
        emit: EmitKind,
        /// Emit the separability report as JSON (tensor documents are
        /// always JSON).
        #[arg(long)]
        json: bool,
    },
    /// One-sided positive semi-definiteness probe.
    Psd {
        tensor_file: PathBuf,
        /// Verdict threshold: NOT-PSD when the probe drops below -tol.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 5000)]
        max_iter: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Largest M-eigenvalue of a nonnegative tensor.
    Eig {
        tensor_file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long)]
        json: bool,
    },
    /// Exhaustive M-eigenpair enumeration (m, n <= 3).
    Oracle {
        tensor_file: PathBuf,
        /// Angular resolution of the scan (points per half-turn).
        #[arg(long, default_value_t = 721)]
        grid: usize,
        /// Residual tolerance for accepting an eigenpair.
        #[arg(long, default_value_t = DEFAULT_RESIDUAL_TOL)]
        tol: f64,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum EmitKind {
    Adjacency,
    D0,
    Dx,
    Dy,
    Q,
    L,
    Report,
}

impl EmitKind {
    fn name(self) -> &'static str {
        match self {
            EmitKind::Adjacency => "adjacency",
            EmitKind::D0 => "d0",
            EmitKind::Dx => "dx",
            EmitKind::Dy => "dy",
            EmitKind::Q => "signless-laplacian",
            EmitKind::L => "laplacian",
            EmitKind::Report => "report",
        }
    }
}

fn fail(code: i32, message: impl std::fmt::Display) -> ! {
    eprintln!("error: {message}");
    std::process::exit(code);
}

fn read_file(path: &Path) -> String {
    std::fs::read_to_string(path)
        .unwrap_or_else(|e| fail(1, format!("cannot read {}: {e}", path.display())))
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::DimensionMismatch { .. }
        | Error::EntryCount { .. }
        | Error::NonFiniteEntry { .. }
        | Error::ModeTooSmall { .. }
        | Error::NegativeEntry { .. }
        | Error::SizeTooLargeForOracle { .. }
        | Error::DegenerateEdge { .. }
        | Error::VertexOutOfRange { .. }
        | Error::BadWeight(_)
        | Error::DuplicateEdge { .. } => EXIT_INVALID,
        _ => 1,
    }
}

fn check<T>(result: Result<T, Error>) -> T {
    result.unwrap_or_else(|e| fail(exit_code_for(&e), e))
}

fn doc_error_exit(err: DocumentError) -> ! {
    let code = if err.is_parse_error() {
        EXIT_PARSE
    } else {
        EXIT_INVALID
    };
    fail(code, err)
}

fn load_tensor(path: &Path) -> (TensorDocument, BiquadraticTensor) {
    let text = read_file(path);
    let doc = TensorDocument::from_json(&text).unwrap_or_else(|e| doc_error_exit(e));
    let tensor = check(doc.to_tensor());
    (doc, tensor)
}

fn format_vec(v: &[f64]) -> String {
    let body: Vec<String> = v.iter().map(|c| format!("{c:.12}")).collect();
    format!("[{}]", body.join(", "))
}

fn main() {
    let cli = Cli::parse();
    match cli.command {
        Command::Analyze {
            tensor_file,
            oracle,
            grid,
            samples,
            solver,
            json,
        } => cmd_analyze(&tensor_file, oracle, grid, samples, &solver, json),
        Command::Graph {
            edge_file,
            emit,
            json,
        } => cmd_graph(&edge_file, emit, json),
        Command::Psd {
            tensor_file,
            tol,
            restarts,
            max_iter,
            seed,
            json,
        } => cmd_psd(&tensor_file, tol, restarts, max_iter, seed, json),
        Command::Eig {
            tensor_file,
            solver,
            json,
        } => cmd_eig(&tensor_file, &solver, json),
        Command::Oracle {
            tensor_file,
            grid,
            tol,
            json,
        } => cmd_oracle(&tensor_file, grid, tol, json),
    }
}

fn cmd_analyze(
    path: &Path,
    oracle: bool,
    grid: usize,
    samples: usize,
    solver: &SolverArgs,
    json: bool,
) {
    let mut timing: BTreeMap<String, u128> = BTreeMap::new();
    let t0 = Instant::now();
    let (_, tensor) = load_tensor(path);
    timing.insert("parse".into(), t0.elapsed().as_millis());

    let t = Instant::now();
    let structure = check(biquad_core::structure_report(&tensor));
    timing.insert("structure".into(), t.elapsed().as_millis());

    let t = Instant::now();
    let cfg = solver.config();
    let outcome = check(solve_lambda_max(&tensor, &cfg));
    timing.insert("lambda_max".into(), t.elapsed().as_millis());

    let t = Instant::now();
    let rho_star = check(estimate_rho_star(&tensor, samples, solver.seed));
    timing.insert("rho_star".into(), t.elapsed().as_millis());

    let run_oracle = oracle && tensor.m() <= 3 && tensor.n() <= 3;
    let eigenpair_table: Vec<EigenpairDoc> = if run_oracle {
        let t = Instant::now();
        let pairs = check(enumerate_m_eigenpairs_small(
            &tensor,
            grid,
            DEFAULT_RESIDUAL_TOL,
        ));
        timing.insert("oracle".into(), t.elapsed().as_millis());
        pairs.iter().map(EigenpairDoc::from).collect()
    } else {
        vec![EigenpairDoc::from(&outcome.best)]
    };

    let report = AnalysisReport {
        m: tensor.m(),
        n: tensor.n(),
        structure: StructureReportDoc::from(&structure),
        lambda_max: SolverSummaryDoc::from(&outcome),
        rho_star_estimate: rho_star,
        eigenpair_table,
        timing_ms: timing,
    };

    let timing_line: Vec<String> = report
        .timing_ms
        .iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect();
    eprintln!("timing (ms): {}", timing_line.join(" "));

    if json {
        print!("{}", to_json_line(&report));
    } else {
        print!("{}", render_analysis(&report, run_oracle));
    }
}

fn render_structure(s: &StructureReportDoc, out: &mut String) {
    use std::fmt::Write;
    let wit = |w: &Option<biquad_core::io::WitnessDoc>| match w {
        Some(w) => format!("  (fixed {}, block {:?})", w.fixed, w.block),
        None => String::new(),
    };
    let qwit = |w: &Option<biquad_core::io::QuasiWitnessDoc>| match w {
        Some(w) => format!("  (pair {:?}, block {:?})", w.pair, w.block),
        None => String::new(),
    };
    writeln!(out, "structure:").unwrap();
    writeln!(
        out,
        "  x-reducible:       {}{}",
        s.x_reducible,
        wit(&s.x_witness)
    )
    .unwrap();
    writeln!(
        out,
        "  y-reducible:       {}{}",
        s.y_reducible,
        wit(&s.y_witness)
    )
    .unwrap();
    writeln!(
        out,
        "  x-quasi-reducible: {}{}",
        s.x_quasi_reducible,
        qwit(&s.x_quasi_witness)
    )
    .unwrap();
    writeln!(
        out,
        "  y-quasi-reducible: {}{}",
        s.y_quasi_reducible,
        qwit(&s.y_quasi_witness)
    )
    .unwrap();
    writeln!(out, "  irreducible:       {}", s.irreducible).unwrap();
    writeln!(out, "  quasi-irreducible: {}", s.quasi_irreducible).unwrap();
}

fn render_solver(s: &SolverSummaryDoc, out: &mut String) {
    use std::fmt::Write;
    writeln!(
        out,
        "lambda_max: {:.12} ({}, {} iterations, {} restarts)",
        s.lambda,
        if s.converged {
            "converged"
        } else {
            "not converged"
        },
        s.iterations_used,
        s.restart_values.len()
    )
    .unwrap();
    writeln!(
        out,
        "  bounds: v={:.12} u={:.12} (gap {:.3e})",
        s.lower_bound,
        s.upper_bound,
        s.upper_bound - s.lower_bound
    )
    .unwrap();
    writeln!(
        out,
        "  eigenvector: x={} y={} class={} residual={:.3e}",
        format_vec(&s.eigenpair.x),
        format_vec(&s.eigenpair.y),
        s.eigenpair.class,
        s.eigenpair.residual
    )
    .unwrap();
}

fn render_eigenpair_table(table: &[EigenpairDoc], out: &mut String) {
    use std::fmt::Write;
    writeln!(out, "m-eigenpairs:").unwrap();
    writeln!(out, "  {:<18} {:<5} {:<10} x / y", "lambda", "class", "residual").unwrap();
    for p in table {
        writeln!(
            out,
            "  {:<18.12} {:<5} {:<10.2e} {} / {}",
            p.lambda,
            p.class,
            p.residual,
            format_vec(&p.x),
            format_vec(&p.y)
        )
        .unwrap();
    }
}

fn render_analysis(r: &AnalysisReport, oracle_ran: bool) -> String {
    use std::fmt::Write;
    let mut out = String::new();
    writeln!(out, "tensor: {}x{}", r.m, r.n).unwrap();
    render_structure(&r.structure, &mut out);
    render_solver(&r.lambda_max, &mut out);
    writeln!(out, "rho_star estimate: {:.12}", r.rho_star_estimate).unwrap();
    if oracle_ran {
        render_eigenpair_table(&r.eigenpair_table, &mut out);
    }
    out
}

fn cmd_graph(path: &Path, emit: EmitKind, json: bool) {
    let text = read_file(path);
    let graph = parse_edge_list(&text).unwrap_or_else(|e| doc_error_exit(e));
    match emit {
        EmitKind::Report => {
            let report = check(graph.separability_report());
            let doc = SeparabilityReportDoc::new(graph.m(), graph.n(), &report);
            if json {
                print!("{}", to_json_line(&doc));
            } else {
                let mut out = String::new();
                use std::fmt::Write;
                writeln!(out, "graph: m={} n={} edges={}", graph.m(), graph.n(), graph.edges().len()).unwrap();
                let wit = |w: &Option<biquad_core::io::SeparabilityWitnessDoc>| match w {
                    Some(w) => format!("  (pair {:?}, block {:?})", w.pair, w.block),
                    None => String::new(),
                };
                writeln!(out, "T-separable:  {}{}", doc.t_separable, wit(&doc.t_witness)).unwrap();
                writeln!(out, "S-separable:  {}{}", doc.s_separable, wit(&doc.s_witness)).unwrap();
                writeln!(out, "bi-separable: {}", doc.bi_separable).unwrap();
                print!("{out}");
            }
        }
        kind => {
            let tensor = match kind {
                EmitKind::Adjacency => graph.adjacency_tensor(),
                EmitKind::D0 => graph.degree_tensors().0,
                EmitKind::Dx => graph.degree_tensors().1,
                EmitKind::Dy => graph.degree_tensors().2,
                EmitKind::Q => graph.signless_laplacian(),
                EmitKind::L => graph.laplacian(),
                EmitKind::Report => unreachable!(),
            };
            let mut metadata = BTreeMap::new();
            metadata.insert("name".to_string(), kind.name().to_string());
            if let Some(stem) = path.file_name().and_then(|s| s.to_str()) {
                metadata.insert("source".to_string(), stem.to_string());
            }
            let doc = TensorDocument::from_tensor(&tensor, metadata);
            print!("{}", doc.to_json());
        }
    }
}

fn cmd_psd(path: &Path, tol: f64, restarts: usize, max_iter: usize, seed: u64, json: bool) {
    let (_, tensor) = load_tensor(path);
    let cfg = SolverConfig {
        restarts,
        max_iter,
        seed,
        ..SolverConfig::default()
    };
    let probe = check(min_m_eigenvalue_probe(&tensor, &cfg));
    let report = PsdReport::new(&probe, tol);
    if json {
        print!("{}", to_json_line(&report));
    } else {
        let mut out = String::new();
        use std::fmt::Write;
        writeln!(out, "probe: {:.12}", report.probe).unwrap();
        writeln!(out, "verdict: {}", report.verdict).unwrap();
        if report.verdict == "NOT-PSD" {
            writeln!(
                out,
                "witness: x={} y={}",
                format_vec(&report.witness_x),
                format_vec(&report.witness_y)
            )
            .unwrap();
        }
        print!("{out}");
    }
}

fn cmd_eig(path: &Path, solver: &SolverArgs, json: bool) {
    let (_, tensor) = load_tensor(path);
    let outcome = check(solve_lambda_max(&tensor, &solver.config()));
    let doc = SolverSummaryDoc::from(&outcome);
    if json {
        print!("{}", to_json_line(&doc));
    } else {
        let mut out = String::new();
        render_solver(&doc, &mut out);
        print!("{out}");
    }
}

fn cmd_oracle(path: &Path, grid: usize, tol: f64, json: bool) {
    let (_, tensor) = load_tensor(path);
    let pairs = check(enumerate_m_eigenpairs_small(&tensor, grid, tol));
    let docs: Vec<EigenpairDoc> = pairs.iter().map(EigenpairDoc::from).collect();
    if json {
        print!("{}", to_json_line(&docs));
    } else {
        let mut out = String::new();
        render_eigenpair_table(&docs, &mut out);
        print!("{out}");
    }
}
