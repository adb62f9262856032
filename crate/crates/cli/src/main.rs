//! Command-line surface for the minimum-weight clique/subgraph bound engine.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cliquedist::cliques::{self, BoundReport, CliqueInstance, TableRow, Tail};
use cliquedist::error::Error;
use cliquedist::montecarlo::{self, Target};
use cliquedist::numerics::PrecisionConfig;
use cliquedist::subgraphs::{self, GraphSpec};
use cliquedist::weights::WeightModel;

#[derive(Parser)]
#[command(
    name = "cliquedist",
    about = "Bounds, asymptotics and simulation for the distribution of the \
             minimum-weight k-clique (or fixed subgraph) under i.i.d. random edge weights",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone)]
struct Common {
    /// Host graph order.
    #[arg(long)]
    n: Option<u64>,
    /// Clique size (exactly one of --k / --graph).
    #[arg(long)]
    k: Option<u32>,
    /// Subgraph preset (K4, C5, P3), inline edge list, or edge-list file.
    #[arg(long)]
    graph: Option<String>,
    /// Edge-weight law: `uniform` or `exp:RATE`.
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// Output format.
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Write output to this file instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Working decimal digits for extended-precision evaluation.
    #[arg(long, default_value_t = 50)]
    digits: u32,
    /// Override the resource guards on graph size and enumeration scale.
    #[arg(long, default_value_t = false)]
    force_guards: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Lower/upper CDF bounds at a single weight.
    Bounds {
        #[command(flatten)]
        common: Common,
        /// Raw weight (exactly one of --w / --z).
        #[arg(long)]
        w: Option<f64>,
        /// Scaled weight z; converts via w = z * n^(-1/d).
        #[arg(long)]
        z: Option<f64>,
    },
    /// Bound-quality summary row (0.05 column, bounds at the mean, 0.95
    /// column, max gap) for the uniform model.
    Table {
        #[command(flatten)]
        common: Common,
    },
    /// Bound curves on a weight grid in units of the estimated mean.
    Curve {
        #[command(flatten)]
        common: Common,
        /// Number of grid points.
        #[arg(long, default_value_t = 200)]
        grid_points: usize,
        /// Upper end of the grid in units of the estimated mean.
        #[arg(long, default_value_t = 3.0)]
        mean_multiples: f64,
    },
    /// One-tailed significance test of an observed minimum weight.
    Test {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        observed: f64,
        /// `lower` or `upper`.
        #[arg(long)]
        tail: String,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Monte-Carlo sampling of W plus envelope and mean validation.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Uniform-band confidence parameter for the envelope check.
        #[arg(long, default_value_t = 1e-3)]
        delta: f64,
        /// Grid points for the analytic envelope.
        #[arg(long, default_value_t = 200)]
        grid_points: usize,
        /// Write the raw samples as CSV to this file.
        #[arg(long)]
        dump_samples: Option<std::path::PathBuf>,
    },
    /// Structural report for a subgraph: density, automorphisms, strict
    /// balance, overlap density, asymptotics.
    GraphInfo {
        #[command(flatten)]
        common: Common,
    },
    /// Asymptotic mean of the minimum weight.
    Mean {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io(std::io::Error),
    Usage(String),
    /// Bounds were produced but quadrature did not converge.
    QuadratureFlagged,
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::QuadratureFlagged => {
                write!(f, "quadrature did not converge; bounds widened to [0, 1]")
            }
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

/// 0 success, 1 internal, 2 validity/hypothesis violation, 3 quadrature
/// nonconvergence.
fn exit_code(e: &CliError) -> u8 {
    match e {
        CliError::Io(_) => 1,
        CliError::Usage(_) => 2,
        CliError::QuadratureFlagged => 3,
        CliError::Core(Error::QuadratureNonConvergence { .. }) => 3,
        CliError::Core(_) => 2,
    }
}

type CliResult = Result<(), CliError>;

fn run(cmd: Command) -> CliResult {
    match cmd {
        Command::Bounds { common, w, z } => cmd_bounds(common, w, z),
        Command::Table { common } => cmd_table(common),
        Command::Curve {
            common,
            grid_points,
            mean_multiples,
        } => cmd_curve(common, grid_points, mean_multiples),
        Command::Test {
            common,
            observed,
            tail,
            alpha,
        } => cmd_test(common, observed, tail, alpha),
        Command::Simulate {
            common,
            trials,
            seed,
            delta,
            grid_points,
            dump_samples,
        } => cmd_simulate(common, trials, seed, delta, grid_points, dump_samples),
        Command::GraphInfo { common } => cmd_graph_info(common),
        Command::Mean { common } => cmd_mean(common),
    }
}

struct Resolved {
    n: u64,
    model: WeightModel,
    precision: PrecisionConfig,
    kind: TargetKind,
    force: bool,
}

enum TargetKind {
    Clique(u32),
    Graph(GraphSpec),
}

impl Common {
    fn resolve(&self, need_n: bool) -> Result<Resolved, CliError> {
        let model = WeightModel::parse(&self.dist)?;
        let precision = PrecisionConfig::new(self.digits, PrecisionConfig::default().quad_rel_tol)?;
        let n = match (self.n, need_n) {
            (Some(n), _) => n,
            (None, false) => 0,
            (None, true) => return Err(CliError::Usage("--n is required".into())),
        };
        let kind = match (&self.k, &self.graph) {
            (Some(_), Some(_)) | (None, None) => {
                return Err(CliError::Usage("give exactly one of --k / --graph".into()))
            }
            (Some(k), None) => TargetKind::Clique(*k),
            (None, Some(source)) => {
                let text = if std::path::Path::new(source).exists() {
                    std::fs::read_to_string(source)?
                } else {
                    source.clone()
                };
                TargetKind::Graph(GraphSpec::parse(&text, self.force_guards)?)
            }
        };
        Ok(Resolved {
            n,
            model,
            precision,
            kind,
            force: self.force_guards,
        })
    }

    fn config_line(&self, cmd: &str, extra: &str) -> String {
        let target = match (&self.k, &self.graph) {
            (Some(k), _) => format!("k={k}"),
            (_, Some(g)) => format!("graph={g}"),
            _ => String::new(),
        };
        format!(
            "# cliquedist {cmd} n={} {target} dist={} digits={} force_guards={}{}{}",
            self.n.map_or_else(|| "-".into(), |n| n.to_string()),
            self.dist,
            self.digits,
            self.force_guards,
            if extra.is_empty() { "" } else { " " },
            extra
        )
    }

    fn emit(&self, text: &str) -> CliResult {
        match &self.out {
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                Ok(())
            }
            Some(path) => {
                std::fs::write(path, text)?;
                Ok(())
            }
        }
    }

    fn emit_json(&self, value: &serde_json::Value) -> CliResult {
        self.emit(&format!(
            "{}\n",
            serde_json::to_string_pretty(value).expect("serializable reports")
        ))
    }
}

fn config_json(common: &Common, cmd: &str, extra: serde_json::Value) -> serde_json::Value {
    serde_json::json!({
        "command": cmd,
        "n": common.n,
        "k": common.k,
        "graph": common.graph,
        "dist": common.dist,
        "digits": common.digits,
        "force_guards": common.force_guards,
        "extra": extra,
    })
}

fn report_for(res: &Resolved, w: f64) -> Result<BoundReport, CliError> {
    if w < 0.0 {
        return Err(CliError::Usage(format!("weight must be >= 0, got {w}")));
    }
    match &res.kind {
        TargetKind::Clique(k) => {
            let inst = CliqueInstance::with_precision(res.n, *k, res.model, res.precision)?;
            Ok(cliques::cdf_bounds(&inst, w))
        }
        TargetKind::Graph(g) => Ok(subgraphs::general_bounds(
            g,
            res.n,
            w,
            res.model,
            &res.precision,
            res.force,
        )?),
    }
}

fn mean_for(res: &Resolved) -> Result<f64, CliError> {
    let g = match &res.kind {
        TargetKind::Clique(k) => GraphSpec::clique(*k, true)?,
        TargetKind::Graph(g) => g.clone(),
    };
    Ok(subgraphs::asymptotic_mean(&g, res.n)?)
}

fn cmd_bounds(common: Common, w: Option<f64>, z: Option<f64>) -> CliResult {
    let res = common.resolve(true)?;
    let w = match (w, z) {
        (Some(w), None) => w,
        (None, Some(z)) => {
            let inv_d = match &res.kind {
                TargetKind::Clique(k) => 2.0 / (*k as f64 - 1.0),
                TargetKind::Graph(g) => g.vertex_count() as f64 / g.edge_count() as f64,
            };
            z * (-inv_d * (res.n as f64).ln()).exp()
        }
        _ => return Err(CliError::Usage("give exactly one of --w / --z".into())),
    };
    let report = report_for(&res, w)?;
    match common.format {
        Format::Csv => {
            common.emit(&format!(
                "{}\n{}\n{}\n",
                common.config_line("bounds", &format!("w={w:.6e}")),
                BoundReport::csv_header(),
                report.csv_row()
            ))?;
        }
        Format::Json => {
            common.emit_json(&serde_json::json!({
                "config": config_json(&common, "bounds", serde_json::json!({"w": w})),
                "report": report,
            }))?;
        }
    }
    if !report.flags.bounds_valid {
        return Err(CliError::QuadratureFlagged);
    }
    Ok(())
}

fn cmd_table(common: Common) -> CliResult {
    let res = common.resolve(true)?;
    let TargetKind::Clique(k) = res.kind else {
        return Err(CliError::Usage(
            "table statistics are defined for cliques; use --k".into(),
        ));
    };
    let inst = CliqueInstance::with_precision(res.n, k, res.model, res.precision)?;
    let row = cliques::table_stats(&inst)?;
    match common.format {
        Format::Csv => common.emit(&format!(
            "{}\n{}\n{}\n",
            common.config_line("table", ""),
            TableRow::csv_header(),
            row.csv_row()
        )),
        Format::Json => common.emit_json(&serde_json::json!({
            "config": config_json(&common, "table", serde_json::Value::Null),
            "row": row,
        })),
    }
}

fn curve_reports(res: &Resolved, grid: &[f64]) -> Result<Vec<BoundReport>, CliError> {
    match &res.kind {
        TargetKind::Clique(k) => {
            let inst = CliqueInstance::with_precision(res.n, *k, res.model, res.precision)?;
            Ok(cliques::cdf_curve(&inst, grid)?)
        }
        TargetKind::Graph(g) => {
            let census = subgraphs::overlap_census(g, res.force)?;
            let mut reports = Vec::with_capacity(grid.len());
            for &w in grid {
                reports.push(subgraphs::general_bounds_with_census(
                    g,
                    &census,
                    res.n,
                    w,
                    res.model,
                    &res.precision,
                )?);
            }
            let mut running = 0.0f64;
            for r in &mut reports {
                running = running.max(r.lower);
                r.lower = running;
            }
            Ok(reports)
        }
    }
}

fn cmd_curve(common: Common, grid_points: usize, mean_multiples: f64) -> CliResult {
    if grid_points < 2 {
        return Err(CliError::Usage("--grid-points must be at least 2".into()));
    }
    let res = common.resolve(true)?;
    let mu = mean_for(&res)?;
    let domain_cap = res.model.closed_form_max();
    let w_max = (mean_multiples * mu).min(domain_cap);
    let mut grid: Vec<f64> = (1..=grid_points)
        .map(|i| w_max * i as f64 / grid_points as f64)
        .collect();
    if mu < w_max && !grid.contains(&mu) {
        grid.push(mu);
        grid.sort_by(f64::total_cmp);
    }
    let reports = curve_reports(&res, &grid)?;
    match common.format {
        Format::Csv => {
            let mut text = format!(
                "{}\nw,w_over_mu,lower,upper\n",
                common.config_line(
                    "curve",
                    &format!("mu_hat={mu:.6e} grid_points={grid_points}")
                )
            );
            for r in &reports {
                text.push_str(&format!(
                    "{:.6e},{:.6e},{:.5e},{:.5e}\n",
                    r.w,
                    r.w / mu,
                    r.lower,
                    r.upper
                ));
            }
            common.emit(&text)
        }
        Format::Json => {
            let points: Vec<serde_json::Value> = reports
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "w": r.w, "w_over_mu": r.w / mu,
                        "lower": r.lower, "upper": r.upper,
                    })
                })
                .collect();
            common.emit_json(&serde_json::json!({
                "config": config_json(&common, "curve",
                    serde_json::json!({"mu_hat": mu, "grid_points": grid_points})),
                "points": points,
            }))
        }
    }
}

fn cmd_test(common: Common, observed: f64, tail: String, alpha: f64) -> CliResult {
    let res = common.resolve(true)?;
    let TargetKind::Clique(k) = res.kind else {
        return Err(CliError::Usage(
            "significance tests are defined for cliques; use --k".into(),
        ));
    };
    let tail: Tail = tail.parse()?;
    let inst = CliqueInstance::with_precision(res.n, k, res.model, res.precision)?;
    let verdict = cliques::significance_test(&inst, observed, tail, alpha)?;
    match common.format {
        Format::Csv => common.emit(&format!(
            "{}\nobserved,tail,alpha,f_minus,f_plus,p_lower,p_upper,outcome\n\
             {:.6e},{:?},{},{:.5e},{:.5e},{:.5e},{:.5e},{:?}\n",
            common.config_line("test", ""),
            verdict.observed_w,
            verdict.tail,
            verdict.alpha,
            verdict.f_minus,
            verdict.f_plus,
            verdict.p_lower,
            verdict.p_upper,
            verdict.outcome
        )),
        Format::Json => common.emit_json(&serde_json::json!({
            "config": config_json(&common, "test", serde_json::Value::Null),
            "verdict": verdict,
        })),
    }
}

fn cmd_simulate(
    common: Common,
    trials: u64,
    seed: u64,
    delta: f64,
    grid_points: usize,
    dump_samples: Option<std::path::PathBuf>,
) -> CliResult {
    let res = common.resolve(true)?;
    let target = match &res.kind {
        TargetKind::Clique(k) => Target::Clique(*k),
        TargetKind::Graph(g) => Target::Subgraph(g.clone()),
    };
    let emp = montecarlo::run_trials(res.n, target, res.model, trials, seed)?;
    if let Some(path) = &dump_samples {
        std::fs::write(path, emp.to_csv())?;
    }
    let w_hi = *emp.samples.last().expect("at least one trial");
    let w_max = w_hi.min(res.model.closed_form_max());
    let grid: Vec<f64> = (1..=grid_points)
        .map(|i| w_max * i as f64 / grid_points as f64)
        .collect();
    let curve = curve_reports(&res, &grid)?;
    let envelope = montecarlo::envelope_check(&emp, &curve, delta);
    let mu = mean_for(&res)?;
    let mean = montecarlo::mean_check(&emp, mu);
    match common.format {
        Format::Csv => common.emit(&format!(
            "{}\ntrials,seed,epsilon,worst_margin,envelope_pass,sample_mean,std_error,mu_hat,mean_ratio\n\
             {},{},{:.5e},{:.5e},{},{:.5e},{:.5e},{:.5e},{:.5e}\n",
            common.config_line(
                "simulate",
                &format!("trials={trials} seed={seed} delta={delta:.3e}")
            ),
            trials,
            seed,
            envelope.epsilon,
            envelope.worst_margin,
            envelope.pass,
            mean.sample_mean,
            mean.std_error,
            mean.mu_hat,
            mean.ratio
        )),
        Format::Json => common.emit_json(&serde_json::json!({
            "config": config_json(&common, "simulate",
                serde_json::json!({"trials": trials, "seed": seed, "delta": delta})),
            "envelope": envelope,
            "mean": mean,
        })),
    }
}

fn cmd_graph_info(common: Common) -> CliResult {
    let res = common.resolve(false)?;
    let g = match &res.kind {
        TargetKind::Graph(g) => g.clone(),
        TargetKind::Clique(k) => GraphSpec::clique(*k, res.force)?,
    };
    let d_prime = g
        .overlap_density()
        .map(|r| format!("{}/{}", r.numer(), r.denom()));
    let (mu, asymptotic) = if res.n > 0 && g.is_strictly_balanced() {
        let mu = subgraphs::asymptotic_mean(&g, res.n)?;
        let pts: Vec<_> = (1..=10)
            .map(|i| subgraphs::asymptotic_point(&g, res.n, i as f64 * 0.5))
            .collect::<Result<_, _>>()?;
        (Some(mu), pts)
    } else {
        (None, Vec::new())
    };
    match common.format {
        Format::Csv => {
            let mut text = format!("{}\nkey,value\n", common.config_line("graph-info", ""));
            text.push_str(&format!("vertices,{}\n", g.vertex_count()));
            text.push_str(&format!("edges,{}\n", g.edge_count()));
            text.push_str(&format!(
                "density,{}/{}\n",
                g.density().numer(),
                g.density().denom()
            ));
            text.push_str(&format!("automorphisms,{}\n", g.automorphism_count()));
            text.push_str(&format!("strictly_balanced,{}\n", g.is_strictly_balanced()));
            text.push_str(&format!(
                "overlap_density,{}\n",
                d_prime.as_deref().unwrap_or("-")
            ));
            if let Some(mu) = mu {
                text.push_str(&format!("mu_hat,{mu:.6e}\n"));
            }
            for p in &asymptotic {
                text.push_str(&format!("asymptotic_cdf_at_z={:.1},{:.5e}\n", p.z, p.cdf));
            }
            common.emit(&text)
        }
        Format::Json => common.emit_json(&serde_json::json!({
            "config": config_json(&common, "graph-info", serde_json::Value::Null),
            "vertices": g.vertex_count(),
            "edges": g.edge_count(),
            "density": format!("{}/{}", g.density().numer(), g.density().denom()),
            "automorphisms": g.automorphism_count(),
            "strictly_balanced": g.is_strictly_balanced(),
            "overlap_density": d_prime,
            "mu_hat": mu,
            "asymptotic": asymptotic,
        })),
    }
}

fn cmd_mean(common: Common) -> CliResult {
    let res = common.resolve(true)?;
    let mu = mean_for(&res)?;
    match common.format {
        Format::Csv => common.emit(&format!(
            "{}\nmu_hat\n{mu:.6e}\n",
            common.config_line("mean", "")
        )),
        Format::Json => common.emit_json(&serde_json::json!({
            "config": config_json(&common, "mean", serde_json::Value::Null),
            "mu_hat": mu,
        })),
    }
}
