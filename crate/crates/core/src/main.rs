//! Command-line entry point: constructions, verification, counting, exact
//! Turán/Zarankiewicz searches, regularity decomposition, bound analysis,
//! and report emission.
//!
//! Exit codes: 0 success, 1 domain/input error, 2 budget exhaustion (with
//! partial results emitted), 3 internal invariant failure, 64 usage.

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::json;
use std::io::Write;
use std::path::PathBuf;

use turanforge::bounds::{self, ExpansionCase, SmoothnessParams};
use turanforge::constructions::{self, MultiplierSet, MultiplierStrategy};
use turanforge::detect::{self, ForbiddenFamily};
use turanforge::graph::Graph;
use turanforge::regularity;
use turanforge::report::{self, OutputFormat, Precision, RunConfig, SCHEMA};
use turanforge::turan;
use turanforge::{Error, Result};

#[derive(Parser)]
#[command(
    name = "turanforge",
    version,
    about = "Extremal graph theory workbench",
    disable_help_subcommand = true
)]
struct Cli {
    /// RNG seed; a fixed seed gives byte-identical reports
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (TURANFORGE_THREADS overrides)
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Node/trial budget for searches
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Output format where a choice applies
    #[arg(long, global = true, value_enum)]
    output: Option<OutputCli>,
    /// Arithmetic mode for energy computations
    #[arg(long, global = true, value_enum)]
    precision: Option<PrecisionCli>,
    /// JSON config file with the same keys
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the main artifact here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputCli {
    Json,
    Csv,
    Graph6,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum PrecisionCli {
    Float64,
    Rational,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphFormat {
    Auto,
    Graph6,
    Edgelist,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Build one of the algebraic graphs
    Construct {
        #[command(subcommand)]
        which: ConstructCmd,
    },
    /// Check a graph against a forbidden family
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
        /// Comma-separated patterns, e.g. triangle,c5,k{2,3},b3
        #[arg(long)]
        forbid: String,
    },
    /// Exact counts and girths
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
    },
    /// Exact Turán / Zarankiewicz searches
    Turan {
        #[command(subcommand)]
        which: TuranCmd,
    },
    /// Sparse regular partition of an input graph
    Regularity {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
        #[arg(long)]
        eps: f64,
        /// Density scale: a float, or auto:<alpha> for p = n^(alpha-2)
        #[arg(long)]
        p: String,
        /// Cluster-graph density threshold
        #[arg(long)]
        d: f64,
        /// Energy cap L
        #[arg(long, default_value_t = 2.0)]
        cap: f64,
        #[arg(long, default_value_t = 16)]
        max_rounds: usize,
        #[arg(long, default_value_t = 40)]
        witness_budget: u32,
    },
    /// Bound calculators and constructive procedures
    Analyze {
        #[command(subcommand)]
        which: AnalyzeCmd,
    },
    /// Tabular reports
    Report {
        #[command(subcommand)]
        which: ReportCmd,
    },
}

#[derive(Subcommand)]
enum ConstructCmd {
    /// Tripartite triangle-free K_{2,3}-free graph over F_q
    Gq {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "graph6")]
        format: OutFormat,
    },
    /// (t+2)-partite generalization with multiplier search
    Gqt {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value = "backtracking")]
        strategy: StrategyCli,
        /// Load a multiplier table instead of searching
        #[arg(long)]
        multipliers: Option<PathBuf>,
        /// Write the multiplier table used
        #[arg(long)]
        emit_multipliers: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "graph6")]
        format: OutFormat,
    },
    /// Projective-plane incidence graph over F_q
    Pg {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "graph6")]
        format: OutFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Graph6,
    Edgelist,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyCli {
    Backtracking,
    Greedy,
}

#[derive(Subcommand)]
enum TuranCmd {
    Ex {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forbid: String,
    },
    Z {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        forbid: String,
    },
    /// ex(n, {C3, K_{2,2t+1}}) vs z(n/2, n/2, {K_{2,2t+1}}) per n
    Ratio {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        n_max: usize,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Closed-form bound calculators
    Bound(BoundArgs),
    /// Stability dichotomy: triangle-rich vertex or near-bipartition
    Tristab {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
        #[arg(long)]
        gamma: f64,
    },
    /// Layered odd-cycle finder with BFS-derived layers
    Oddcycle {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
        /// Odd cycle length to look for
        #[arg(long)]
        k: usize,
        /// Start vertex
        #[arg(long, default_value_t = 0)]
        v: usize,
        /// Number of pyramid layers
        #[arg(long, default_value_t = 1)]
        layers: usize,
    },
    /// Density-transfer diagnostic over a regularity run
    Transfer {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "auto")]
        format: GraphFormat,
        /// Smoothness exponent alpha (rational, e.g. 3/2)
        #[arg(long)]
        alpha: String,
        /// Smoothness error exponent beta (rational)
        #[arg(long, default_value = "1")]
        beta: String,
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        gamma: f64,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Cluster threshold; defaults to gamma * rho / 2
        #[arg(long)]
        d: Option<f64>,
        #[arg(long, default_value_t = 2.0)]
        cap: f64,
        #[arg(long, default_value_t = 8)]
        max_rounds: usize,
        #[arg(long, default_value_t = 40)]
        witness_budget: u32,
    },
}

#[derive(Args)]
struct BoundArgs {
    /// furedi | book | c4 | ell0 | f | expansion
    #[arg(long)]
    which: String,
    #[arg(long)]
    m: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    t: Option<u64>,
    #[arg(long)]
    e: Option<u64>,
    /// rational, e.g. 3/2
    #[arg(long)]
    alpha: Option<String>,
    /// rational, e.g. 4/3
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    i: Option<u64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    size_u: Option<u64>,
    /// smaller | larger
    #[arg(long)]
    case: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = 0.0)]
    rho: f64,
    #[arg(long)]
    rho_x: Option<f64>,
    #[arg(long)]
    rho_y: Option<f64>,
    #[arg(long)]
    size_y: Option<u64>,
}

#[derive(Subcommand)]
enum ReportCmd {
    /// Edge density of the algebraic constructions against the bipartite
    /// upper bound, per prime
    #[command(name = "density-ratio")]
    DensityRatio {
        #[arg(long)]
        t: u64,
        /// Comma-separated prime list
        #[arg(long)]
        q: String,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's own help/version paths exit 0; anything else is usage
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                std::process::exit(0);
            }
            let _ = e.print();
            std::process::exit(64);
        }
    };
    match run(cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("turanforge: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn effective_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::from_json(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(t) = cli.threads {
        cfg.threads = t;
    }
    if let Ok(t) = std::env::var("TURANFORGE_THREADS") {
        cfg.threads = t.parse().map_err(|_| {
            Error::Domain(format!("TURANFORGE_THREADS = {t:?} is not a thread count"))
        })?;
    }
    if let Some(b) = cli.budget {
        cfg.budget = b;
    }
    if let Some(o) = cli.output {
        cfg.output = match o {
            OutputCli::Json => OutputFormat::Json,
            OutputCli::Csv => OutputFormat::Csv,
            OutputCli::Graph6 => OutputFormat::Graph6,
            OutputCli::Edgelist => OutputFormat::Edgelist,
        };
    }
    if let Some(p) = cli.precision {
        cfg.precision = match p {
            PrecisionCli::Float64 => Precision::Float64,
            PrecisionCli::Rational => Precision::Rational,
        };
    }
    Ok(cfg)
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn read_graph(path: &PathBuf, format: GraphFormat) -> Result<Graph> {
    let text = std::fs::read_to_string(path)?;
    match format {
        GraphFormat::Graph6 => turanforge::graph6::decode(&text),
        GraphFormat::Edgelist => Graph::from_edge_list_text(&text),
        GraphFormat::Auto => turanforge::graph6::decode(&text)
            .or_else(|_| Graph::from_edge_list_text(&text))
            .map_err(|_| {
                Error::Parse(format!(
                    "{} parses neither as graph6 nor as an edge list",
                    path.display()
                ))
            }),
    }
}

fn graph_payload(g: &Graph, format: OutFormat) -> Result<String> {
    match format {
        OutFormat::Graph6 => Ok(format!("{}\n", turanforge::graph6::encode(g)?)),
        OutFormat::Edgelist => Ok(g.to_edge_list_text()),
    }
}

fn parse_rational(text: &str) -> Result<Rational64> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
        if d == 0 {
            return Err(Error::Parse("rational with zero denominator".into()));
        }
        return Ok(Rational64::new(n, d));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let digits = frac.len() as u32;
        if digits > 12 {
            return Err(Error::Parse(
                "too many decimal digits for an exact rational".into(),
            ));
        }
        let scale = 10i64.pow(digits);
        let whole: i64 = int
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
        let part: i64 = frac
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
        let sign = if whole < 0 { -1 } else { 1 };
        return Ok(Rational64::new(whole * scale + sign * part, scale));
    }
    let n: i64 = t
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational {t:?}")))?;
    Ok(Rational64::from_integer(n))
}

fn parse_scale(spec: &str, n: usize) -> Result<f64> {
    if let Some(alpha) = spec.strip_prefix("auto:") {
        let a = parse_rational(alpha)?;
        let af = *a.numer() as f64 / *a.denom() as f64;
        if !(1.0 < af && af < 2.0) {
            return Err(Error::Domain(format!(
                "auto scale needs 1 < alpha < 2, got {alpha}"
            )));
        }
        return Ok((n as f64).powf(af - 2.0));
    }
    let p: f64 = spec
        .parse()
        .map_err(|_| Error::Parse(format!("bad scale {spec:?}")))?;
    Ok(p)
}

fn json_line(value: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&value).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<()> {
    let cfg = effective_config(&cli)?;
    // ignore the error when a pool already exists (tests, repeat calls)
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build_global();

    match &cli.command {
        Command::Construct { which } => run_construct(&cli, &cfg, which),
        Command::Verify {
            input,
            format,
            forbid,
        } => {
            let g = read_graph(input, *format)?;
            let fam = ForbiddenFamily::parse(forbid)?;
            let rep = detect::is_family_free(&g, &fam)?;
            let counts = json!({
                "n": g.n(),
                "m": g.edge_count(),
                "triangles": detect::count_triangles(&g),
                "c4": detect::count_c4(&g),
            });
            let payload = json!({
                "schema": SCHEMA,
                "forbid": fam.tokens(),
                "free": rep.free,
                "witness": rep.witness.as_ref().map(|w| json!({
                    "pattern": w.pattern.token(),
                    "vertices": w.vertices,
                })),
                "counts": counts,
            });
            emit(&cli.out, &json_line(payload))
        }
        Command::Count { input, format } => {
            let g = read_graph(input, *format)?;
            let payload = json!({
                "schema": SCHEMA,
                "n": g.n(),
                "m": g.edge_count(),
                "triangles": detect::count_triangles(&g),
                "c4": detect::count_c4(&g),
                "girth": detect::girth(&g),
                "odd_girth": detect::odd_girth(&g),
            });
            emit(&cli.out, &json_line(payload))
        }
        Command::Turan { which } => run_turan(&cli, &cfg, which),
        Command::Regularity {
            input,
            format,
            eps,
            p,
            d,
            cap,
            max_rounds,
            witness_budget,
        } => {
            let g = read_graph(input, *format)?;
            let scale = parse_scale(p, g.n())?;
            let run = regularity::sparse_regular_partition(
                &g,
                *eps,
                scale,
                *cap,
                *max_rounds,
                *witness_budget,
                cfg.seed,
            )?;
            let cg = regularity::cluster_graph(&run.partition, &run.classification, *d)?;
            let pairs: Vec<serde_json::Value> = run
                .classification
                .pairs()
                .map(|(i, j, info)| {
                    let status = match &info.status {
                        regularity::PairStatus::Regular => json!("regular_up_to_budget"),
                        regularity::PairStatus::Irregular {
                            x_witness,
                            y_witness,
                        } => json!({
                            "irregular": {"x_witness": x_witness, "y_witness": y_witness}
                        }),
                        regularity::PairStatus::Unknown => json!("unknown"),
                    };
                    json!({"i": i, "j": j, "d_p": info.d_p, "status": status})
                })
                .collect();
            let exact = if cfg.precision == Precision::Rational && g.n() <= 200 {
                Some(regularity::energy_rational(&g, &run.partition)?.to_string())
            } else {
                None
            };
            let payload = json!({
                "schema": SCHEMA,
                "n": g.n(),
                "eps": eps,
                "p": scale,
                "d": d,
                "cap": cap,
                "seed": cfg.seed,
                "converged": run.converged,
                "rounds": run.trace.len(),
                "partition": {
                    "exceptional": run.partition.exceptional,
                    "parts": run.partition.parts,
                },
                "pairs": pairs,
                "cluster_edges": cg.edges,
                "cluster_degrees": cg.degrees(),
                "trace": run.trace,
                "energy_exact": exact,
            });
            emit(&cli.out, &json_line(payload))
        }
        Command::Analyze { which } => run_analyze(&cli, &cfg, which),
        Command::Report { which } => match which {
            ReportCmd::DensityRatio { t, q } => {
                let qs: Vec<u64> = q
                    .split(',')
                    .map(|x| {
                        x.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad prime {x:?}")))
                    })
                    .collect::<Result<_>>()?;
                let rows = report::density_ratio_report(*t, &qs, cfg.budget)?;
                match cfg.output {
                    OutputFormat::Json => {
                        let payload = json!({"schema": SCHEMA, "rows": rows});
                        emit(&cli.out, &json_line(payload))
                    }
                    _ => emit(&cli.out, &report::density_ratio_csv(&rows)),
                }
            }
        },
    }
}

fn run_construct(cli: &Cli, cfg: &RunConfig, which: &ConstructCmd) -> Result<()> {
    match which {
        ConstructCmd::Gq { q, format } => {
            let g = constructions::build_gq(*q)?;
            emit(&cli.out, &graph_payload(g.graph(), *format)?)
        }
        ConstructCmd::Gqt {
            q,
            t,
            strategy,
            multipliers,
            emit_multipliers,
            format,
        } => {
            let ms: MultiplierSet = match multipliers {
                Some(path) => MultiplierSet::from_json(&std::fs::read_to_string(path)?)?,
                None => {
                    let strat = match strategy {
                        StrategyCli::Backtracking => MultiplierStrategy::Backtracking,
                        StrategyCli::Greedy => MultiplierStrategy::PaperGreedy,
                    };
                    let search = constructions::find_multipliers(*q, *t, strat, cfg.budget)?;
                    match search.found {
                        Some(ms) => ms,
                        None if search.exhaustive => {
                            return Err(Error::Domain(format!(
                                "no valid multiplier table exists for q = {q}, t = {t} under this strategy"
                            )))
                        }
                        None => {
                            return Err(Error::Budget(format!(
                                "multiplier search for q = {q}, t = {t} ran out of budget"
                            )))
                        }
                    }
                }
            };
            if let Some(path) = emit_multipliers {
                std::fs::write(path, ms.to_json())?;
            }
            let g = constructions::build_gqt(*q, &ms)?;
            emit(&cli.out, &graph_payload(g.graph(), *format)?)
        }
        ConstructCmd::Pg { q, format } => {
            let b = constructions::projective_plane_incidence(*q)?;
            emit(&cli.out, &graph_payload(b.graph(), *format)?)
        }
    }
}

fn run_turan(cli: &Cli, cfg: &RunConfig, which: &TuranCmd) -> Result<()> {
    match which {
        TuranCmd::Ex { n, forbid } => {
            let fam = ForbiddenFamily::parse(forbid)?;
            let r = turan::ex_exact(*n, &fam, cfg.budget)?;
            let payload = json!({
                "schema": SCHEMA,
                "n": n,
                "forbid": fam.tokens(),
                "value": r.value,
                "exhaustive": r.exhaustive,
                "witness": turanforge::graph6::encode(&r.witness)?,
            });
            emit(&cli.out, &json_line(payload))?;
            if !r.exhaustive {
                return Err(Error::Budget(format!(
                    "search explored {} nodes without completing; value {} is a lower bound",
                    r.nodes_explored, r.value
                )));
            }
            Ok(())
        }
        TuranCmd::Z { m, n, forbid } => {
            let fam = ForbiddenFamily::parse(forbid)?;
            let r = turan::z_exact(*m, *n, &fam, cfg.budget)?;
            let payload = json!({
                "schema": SCHEMA,
                "m": m,
                "n": n,
                "forbid": fam.tokens(),
                "value": r.value,
                "exhaustive": r.exhaustive,
                "witness": turanforge::graph6::encode(&r.witness)?,
            });
            emit(&cli.out, &json_line(payload))?;
            if !r.exhaustive {
                return Err(Error::Budget(format!(
                    "search explored {} nodes without completing; value {} is a lower bound",
                    r.nodes_explored, r.value
                )));
            }
            Ok(())
        }
        TuranCmd::Ratio { t, n_max } => {
            let kst = detect::Pattern::CompleteBipartite(2, 2 * t + 1);
            let fam_cycle = ForbiddenFamily::new(vec![detect::Pattern::Cycle(3), kst])?;
            let fam_bip = ForbiddenFamily::new(vec![kst])?;
            let ns: Vec<usize> = (1..=*n_max).collect();
            let rows = turan::ratio_table(&ns, &fam_cycle, &fam_bip, cfg.budget)?;
            match cfg.output {
                OutputFormat::Json => emit(
                    &cli.out,
                    &json_line(json!({"schema": SCHEMA, "rows": rows})),
                ),
                _ => emit(&cli.out, &turan::ratio_table_csv(&rows)),
            }
        }
    }
}

fn run_analyze(cli: &Cli, cfg: &RunConfig, which: &AnalyzeCmd) -> Result<()> {
    match which {
        AnalyzeCmd::Bound(args) => {
            let payload = run_bound(args)?;
            emit(&cli.out, &json_line(payload))
        }
        AnalyzeCmd::Tristab {
            input,
            format,
            gamma,
        } => {
            let g = read_graph(input, *format)?;
            let outcome = bounds::tri_stab(&g, *gamma)?;
            let body = match &outcome {
                bounds::StabilityOutcome::TriangleRich { vertex, triangles } => json!({
                    "kind": "triangle_rich",
                    "vertex": vertex,
                    "triangles": triangles,
                }),
                bounds::StabilityOutcome::Bipartition {
                    side_x,
                    side_y,
                    non_crossing,
                } => json!({
                    "kind": "bipartition",
                    "x": side_x,
                    "y": side_y,
                    "non_crossing": non_crossing,
                }),
            };
            emit(
                &cli.out,
                &json_line(json!({"schema": SCHEMA, "gamma": gamma, "outcome": body})),
            )
        }
        AnalyzeCmd::Oddcycle {
            input,
            format,
            k,
            v,
            layers,
        } => {
            let g = read_graph(input, *format)?;
            if *v >= g.n() {
                return Err(Error::Domain(format!("start vertex {v} out of range")));
            }
            let (layer_sets, b, b_prime) = bfs_layers(&g, *v, *layers, cfg.seed)?;
            let found =
                bounds::find_odd_cycle_via_expansion(&g, *v, &layer_sets, &b, &b_prime, *k)?;
            let payload = json!({
                "schema": SCHEMA,
                "k": k,
                "v": v,
                "layers": layer_sets,
                "b": b,
                "b_prime": b_prime,
                "cycle": found,
            });
            emit(&cli.out, &json_line(payload))
        }
        AnalyzeCmd::Transfer {
            input,
            format,
            alpha,
            beta,
            rho,
            gamma,
            eps,
            d,
            cap,
            max_rounds,
            witness_budget,
        } => {
            let g = read_graph(input, *format)?;
            let alpha = parse_rational(alpha)?;
            let beta = parse_rational(beta)?;
            let params = SmoothnessParams::new(alpha, beta, *rho, 1.0)?;
            let p = (g.n() as f64).powf(params.alpha_f64() - 2.0);
            let d = d.unwrap_or(gamma * rho / 2.0);
            let run = regularity::sparse_regular_partition(
                &g,
                *eps,
                p,
                *cap,
                *max_rounds,
                *witness_budget,
                cfg.seed,
            )?;
            let cg = regularity::cluster_graph(&run.partition, &run.classification, d)?;
            let rep = bounds::transfer_report(
                &g,
                &run.partition,
                &run.classification,
                &cg,
                &params,
                *gamma,
            )?;
            let payload = json!({
                "schema": SCHEMA,
                "alpha": alpha.to_string(),
                "beta": beta.to_string(),
                "rho": rho,
                "gamma": gamma,
                "eps": eps,
                "d": d,
                "p": p,
                "report": rep,
            });
            emit(&cli.out, &json_line(payload))
        }
    }
}

fn need<T: Copy>(x: Option<T>, name: &str) -> Result<T> {
    x.ok_or_else(|| Error::Domain(format!("--{name} is required for this bound")))
}

fn run_bound(args: &BoundArgs) -> Result<serde_json::Value> {
    match args.which.as_str() {
        "furedi" => {
            let (m, n, s, t) = (
                need(args.m, "m")?,
                need(args.n, "n")?,
                need(args.s, "s")?,
                need(args.t, "t")?,
            );
            let v = bounds::furedi_kst_bound(m, n, s, t)?;
            Ok(
                json!({"schema": SCHEMA, "bound": "furedi", "m": m, "n": n, "s": s, "t": t, "value": v}),
            )
        }
        "book" => {
            let (m, n, t) = (need(args.m, "m")?, need(args.n, "n")?, need(args.t, "t")?);
            let v = bounds::book_family_bound(m, n, t)?;
            Ok(json!({"schema": SCHEMA, "bound": "book", "m": m, "n": n, "t": t, "value": v}))
        }
        "c4" => {
            let (m, n, e) = (need(args.m, "m")?, need(args.n, "n")?, need(args.e, "e")?);
            let v = bounds::c4_lower_bound(m, n, e)?;
            Ok(json!({
                "schema": SCHEMA,
                "bound": "c4",
                "m": m, "n": n, "e": e,
                "applicable": v.is_some(),
                "value": v.as_ref().map(|x| x.to_string()),
                "value_float": v.as_ref().map(num_traits::ToPrimitive::to_f64),
            }))
        }
        "ell0" => {
            let alpha = parse_rational(need(args.alpha.as_deref(), "alpha")?)?;
            let beta = parse_rational(need(args.beta.as_deref(), "beta")?)?;
            let params = SmoothnessParams::new(alpha, beta, args.rho.max(0.0), args.c)?;
            let th = bounds::expansion_thresholds(&params)?;
            Ok(json!({
                "schema": SCHEMA,
                "bound": "ell0",
                "alpha": alpha.to_string(),
                "beta": beta.to_string(),
                "depth": th.depth,
                "min_odd_cycle": th.min_odd_cycle,
                "kst_fast_path_min_odd_cycle": bounds::KST_MIN_ODD_CYCLE,
            }))
        }
        "f" => {
            let i = need(args.i, "i")?;
            let beta = parse_rational(need(args.beta.as_deref(), "beta")?)?;
            let v = bounds::growth_exponent(i, beta)?;
            Ok(json!({
                "schema": SCHEMA,
                "bound": "f",
                "i": i,
                "beta": beta.to_string(),
                "value": v.to_string(),
                "value_float": num_traits::ToPrimitive::to_f64(&v),
            }))
        }
        "expansion" => {
            let alpha = parse_rational(need(args.alpha.as_deref(), "alpha")?)?;
            let beta = parse_rational(need(args.beta.as_deref(), "beta")?)?;
            let params = SmoothnessParams::new(alpha, beta, args.rho.max(0.0), args.c)?;
            let delta = need(args.delta, "delta")?;
            let size_u = need(args.size_u, "size-u")?;
            let n = need(args.n, "n")?;
            let case = match args.case.as_deref() {
                Some("smaller") | None => ExpansionCase::USmaller,
                Some("larger") => ExpansionCase::ULarger,
                Some(other) => {
                    return Err(Error::Domain(format!(
                        "--case must be smaller|larger, got {other:?}"
                    )))
                }
            };
            let b = bounds::smooth_expansion_bound(&params, delta, size_u, n, case)?;
            Ok(json!({
                "schema": SCHEMA,
                "bound": "expansion",
                "alpha": alpha.to_string(),
                "beta": beta.to_string(),
                "delta": delta,
                "size_u": size_u,
                "n": n,
                "applicable": b.applicable,
                "n_threshold": b.n_threshold,
                "value": if b.applicable { Some(b.value) } else { None },
            }))
        }
        "kst-expansion" => {
            let (s, t, n) = (need(args.s, "s")?, need(args.t, "t")?, need(args.n, "n")?);
            let rho_x = need(args.rho_x, "rho-x")?;
            let rho_y = need(args.rho_y, "rho-y")?;
            let size_y = need(args.size_y, "size-y")?;
            let v = bounds::kst_expansion_bound(rho_x, rho_y, size_y, n, s, t)?;
            Ok(json!({
                "schema": SCHEMA,
                "bound": "kst-expansion",
                "s": s, "t": t, "n": n,
                "rho_x": rho_x, "rho_y": rho_y, "size_y": size_y,
                "value": v,
            }))
        }
        other => Err(Error::Domain(format!(
            "unknown bound {other:?}; expected furedi|book|c4|ell0|f|expansion|kst-expansion"
        ))),
    }
}

/// Layer sets for the odd-cycle finder: the pyramid layers and the split
/// pair of target sets.
type CycleLayers = (Vec<Vec<usize>>, Vec<usize>, Vec<usize>);

/// Default layer construction for the odd-cycle finder: distance classes
/// `1..=layers` around `v`, then the next distance class split in two by a
/// seeded shuffle.
fn bfs_layers(g: &Graph, v: usize, layers: usize, seed: u64) -> Result<CycleLayers> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut dist = vec![usize::MAX; g.n()];
    dist[v] = 0;
    let mut queue = vec![v];
    let mut head = 0;
    while head < queue.len() {
        let u = queue[head];
        head += 1;
        for w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push(w);
            }
        }
    }
    let class = |d: usize| -> Vec<usize> { (0..g.n()).filter(|&w| dist[w] == d).collect() };
    let layer_sets: Vec<Vec<usize>> = (1..=layers).map(class).collect();
    if layer_sets.iter().any(Vec::is_empty) {
        return Err(Error::Domain(format!(
            "vertex {v} has no full {layers}-layer neighborhood"
        )));
    }
    let mut last = class(layers + 1);
    if last.len() < 2 {
        return Err(Error::Domain(format!(
            "distance class {} around vertex {v} is too small to split",
            layers + 1
        )));
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    last.shuffle(&mut rng);
    let half = last.len() / 2;
    let mut b: Vec<usize> = last[..half].to_vec();
    let mut b_prime: Vec<usize> = last[half..].to_vec();
    b.sort_unstable();
    b_prime.sort_unstable();
    Ok((layer_sets, b, b_prime))
}
