use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod error;
mod report;
mod svg;

use config::Ctx;
use error::CliError;

#[derive(Parser)]
#[command(name = "boolperc", version, about = "Boolean discrete percolation on doubling graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Clone, Copy, Debug)]
enum Command {
    /// Ball growth table |B(v, r)| over the r-grid
    GraphInfo,
    /// Greedy separated net of B(v, r) at separation ceil(eps r)
    Net,
    /// Covering profile and Assouad-dimension fit
    Assouad,
    /// Occupied vertices and radii of one sampled window
    Sample,
    /// Cluster of v in sampled windows
    Cluster,
    /// Estimates of P(G(v, r)) over the p- and r-grids
    EventG,
    /// Estimates of P(H~(v, r))
    EventHtilde,
    /// Estimates of the window-restricted P(H(v, r))
    EventH,
    /// First-moment bounds SB1, SB2 and the threshold p0
    Bounds,
    /// Bracket on P(H(v, r)) from exact sphere sizes
    HBracket,
    /// Scale recursion against its closed-form bound
    Recursion,
    /// Empirical check of the scale inequality
    ScalingCheck,
    /// G estimates over the p-grid times the r-grid
    Sweep,
    /// Coverage series and covered fraction
    Coverage,
    /// Component size histogram and spanning clusters
    Census,
}

#[derive(Args, Debug, Default)]
struct Opts {
    /// Graph: z:<d>, heis, tree:<b> or file:<path>
    #[arg(long, global = true)]
    model: Option<String>,
    /// Radius law: const:<c>, geom:<q> or zeta:<alpha>
    #[arg(long, global = true)]
    law: Option<String>,
    /// Retention parameter or comma-separated grid
    #[arg(long, global = true)]
    p: Option<String>,
    /// Scale or comma-separated grid
    #[arg(long, global = true)]
    r: Option<String>,
    /// Window radius L (a list for `coverage`)
    #[arg(long, global = true)]
    window: Option<String>,
    #[arg(long, global = true)]
    replicas: Option<String>,
    #[arg(long, global = true)]
    seed: Option<String>,
    /// Declared dimension in |B(v,r)| <= C1 r^dim
    #[arg(long, global = true)]
    dim: Option<String>,
    /// Declared growth constant C1
    #[arg(long, global = true)]
    c1: Option<String>,
    /// Worker threads for replicas
    #[arg(long, global = true)]
    jobs: Option<String>,
    /// Net scales, e.g. 1/2,1/4
    #[arg(long, global = true)]
    eps: Option<String>,
    /// Vertex budget per ball expansion (also PERC_BUDGET)
    #[arg(long, global = true)]
    budget: Option<String>,
    /// Vertex as colon-separated coordinates, `e` for the tree root
    #[arg(long, global = true)]
    vertex: Option<String>,
    /// Centers sampled on non-transitive graphs
    #[arg(long, global = true)]
    centers: Option<String>,
    /// Base-scale values for `recursion`
    #[arg(long, global = true)]
    f0: Option<String>,
    /// Per-level perturbations for `recursion`
    #[arg(long, global = true)]
    g: Option<String>,
    /// Radius up to which `h-bracket` uses exact sphere sizes
    #[arg(long, global = true)]
    exact_radius: Option<String>,
    /// Number of coverage-series terms
    #[arg(long, global = true)]
    terms: Option<String>,
    /// key = value file; flags take precedence
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG chart of the primary curve
    #[arg(long, global = true)]
    plot: Option<PathBuf>,
    /// JSON instead of CSV
    #[arg(long, global = true)]
    json: bool,
}

impl Opts {
    fn flags(&self) -> BTreeMap<String, String> {
        let pairs = [
            ("model", &self.model),
            ("law", &self.law),
            ("p", &self.p),
            ("r", &self.r),
            ("window", &self.window),
            ("replicas", &self.replicas),
            ("seed", &self.seed),
            ("dim", &self.dim),
            ("c1", &self.c1),
            ("jobs", &self.jobs),
            ("eps", &self.eps),
            ("budget", &self.budget),
            ("vertex", &self.vertex),
            ("centers", &self.centers),
            ("f0", &self.f0),
            ("g", &self.g),
            ("exact-radius", &self.exact_radius),
            ("terms", &self.terms),
        ];
        debug_assert_eq!(pairs.len(), config::KEYS.len());
        pairs.into_iter().filter_map(|(k, v)| v.clone().map(|v| (k.to_string(), v))).collect()
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let ctx = Ctx::new(cli.opts.flags(), cli.opts.config.as_deref())?;
    if let Some(jobs) = ctx.opt::<usize>("jobs")? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    }
    let report = match cli.command {
        Command::GraphInfo => commands::graph_info(&ctx)?,
        Command::Net => commands::net(&ctx)?,
        Command::Assouad => commands::assouad(&ctx)?,
        Command::Sample => commands::sample(&ctx)?,
        Command::Cluster => commands::cluster(&ctx)?,
        Command::EventG => commands::event_g(&ctx)?,
        Command::EventHtilde => commands::event_htilde(&ctx)?,
        Command::EventH => commands::event_h(&ctx)?,
        Command::Bounds => commands::bounds(&ctx)?,
        Command::HBracket => commands::h_bracket(&ctx)?,
        Command::Recursion => commands::recursion(&ctx)?,
        Command::ScalingCheck => commands::scaling_check(&ctx)?,
        Command::Sweep => commands::sweep(&ctx)?,
        Command::Coverage => commands::coverage(&ctx)?,
        Command::Census => commands::census(&ctx)?,
    };
    let generated = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let echo = ctx.echo();
    let body = if cli.opts.json {
        let mut s = serde_json::to_string_pretty(&report.to_json(&echo, &generated)).expect("json values serialize");
        s.push('\n');
        s.into_bytes()
    } else {
        report.to_csv(&echo, &generated)?
    };
    for note in &report.notes {
        eprintln!("{note}");
    }
    match &cli.opts.out {
        Some(path) => {
            std::fs::write(path, &body)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            use std::io::Write;
            std::io::stdout().write_all(&body)?;
        }
    }
    if let Some(path) = &cli.opts.plot {
        match &report.chart {
            Some(chart) => {
                let mut svg = chart.render();
                let config: Vec<String> = echo.iter().map(|(k, v)| format!("{k}={v}")).collect();
                svg.push_str(&format!("<!-- boolperc {} {} -->\n", report.command, config.join(" ")));
                std::fs::write(path, svg)?;
                eprintln!("wrote {}", path.display());
            }
            None => log::warn!("`{}` has no curve to plot", report.command),
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
