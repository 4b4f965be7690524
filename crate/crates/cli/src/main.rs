//! Command-line front end: instance generation, single runs, edge
//! classification, detection sweeps and query scaling.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use cyclefree::generators::{cycle_len_for_eps, generate, Family, InstanceSpec};
use cyclefree::graph::{read_edge_list, write_edge_list};
use cyclefree::harness::{run_experiment, scaling_fit, scaling_points, CellSpec, ExperimentSpec, ParamPreset};
use cyclefree::oracles::{
    check_dominant_forest, check_dominant_path_through_edge, check_no_bidirectional_dominance, classify_edges,
    count_recessive_vs_bound, ClassifyConfig,
};
use cyclefree::tester::{DeskPreset, Exploration, TesterParams};
use cyclefree::{cycle_freeness_tester_observed, seeded_rng, BoundedDegreeGraph, Walk};

#[derive(Parser)]
#[command(name = "cyclefree", version, about = "One-sided cycle-freeness testing for bounded-degree graphs")]
struct Cli {
    /// Base random seed.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for sweeps and sampling.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// More log output (repeatable).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance as an edge list with a `.meta.json` sidecar.
    Gen(GenArgs),
    /// Run the tester once on a graph file.
    Test(TestArgs),
    /// Classify edges as dominant or recessive and run the structural checks.
    Analyze(AnalyzeArgs),
    /// Detection-rate sweep over a grid of sizes.
    Sweep(SweepArgs),
    /// Query-count growth in n, with a fitted exponent.
    Scaling(ScalingArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyKind {
    UniformForest,
    DisjointCycles,
    ForestPlusPlantedCycles,
    WellConnectedCyclic,
}

#[derive(Args)]
struct FamilyArgs {
    #[arg(long, value_enum)]
    family: FamilyKind,
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Cycle length for disjoint-cycles; defaults to ceil(1/eps).
    #[arg(long)]
    cycle_len: Option<usize>,
    /// Planted cycle count for forest-plus-planted-cycles.
    #[arg(long, default_value_t = 1)]
    planted: usize,
}

impl FamilyArgs {
    fn family(&self, eps: f64) -> Result<Family> {
        Ok(match self.family {
            FamilyKind::UniformForest => Family::UniformForest,
            FamilyKind::DisjointCycles => Family::DisjointCycles {
                cycle_len: match self.cycle_len {
                    Some(k) => k,
                    None => cycle_len_for_eps(eps)?,
                },
            },
            FamilyKind::ForestPlusPlantedCycles => Family::ForestPlusPlantedCycles { planted: self.planted },
            FamilyKind::WellConnectedCyclic => Family::WellConnectedCyclic,
        })
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    n: usize,
    /// Used for the default cycle length.
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    /// Epsilons to label as far or not in the sidecar.
    #[arg(long, value_delimiter = ',')]
    far_eps: Vec<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Paper,
    Desk,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.1)]
    eps: f64,
    #[arg(long, value_enum, default_value_t = Mode::Desk)]
    mode: Mode,
    #[arg(long, default_value_t = 4.0)]
    beta1: f64,
    #[arg(long, default_value_t = 2.0)]
    beta2: f64,
    /// Constant in front of num_starts (and m in paper mode).
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    /// Explicit walk length; with --m and --starts replaces the schedule.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    starts: Option<usize>,
    /// Build the explored subgraph only after all walks.
    #[arg(long)]
    after_walks: bool,
}

impl ParamArgs {
    fn preset(&self) -> Result<ParamPreset> {
        match (self.ell, self.m, self.starts) {
            (Some(ell), Some(m), Some(num_starts)) => Ok(ParamPreset::Explicit { ell, m, num_starts }),
            (None, None, None) => Ok(match self.mode {
                Mode::Paper => ParamPreset::Paper { c: self.c },
                Mode::Desk => ParamPreset::Desk(DeskPreset {
                    beta1: self.beta1,
                    beta2: self.beta2,
                    c: self.c,
                }),
            }),
            _ => bail!(cyclefree::Error::InvalidArgument(
                "--ell, --m and --starts must be given together".into()
            )),
        }
    }

    fn exploration(&self) -> Exploration {
        if self.after_walks {
            Exploration::AfterWalks
        } else {
            Exploration::Incremental
        }
    }
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    graph: PathBuf,
    #[command(flatten)]
    params: ParamArgs,
    /// Refuse runs that could exceed this many walk steps.
    #[arg(long, default_value_t = 2_000_000_000)]
    max_steps: u64,
    /// Write every walk, one vertex per line, blank line between walks.
    #[arg(long)]
    dump_walks: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 0)]
    start: usize,
    #[arg(long, default_value_t = 0.2)]
    alpha: f64,
    #[arg(long, default_value_t = 30)]
    ell: usize,
    #[arg(long, default_value_t = 20_000)]
    samples: usize,
    /// Companion walks per sample for heavy/light and blue labels.
    #[arg(long)]
    cyc_samples: Option<usize>,
    /// Component vertices; default is every vertex reached with probability above alpha.
    #[arg(long, value_delimiter = ',')]
    component: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, value_delimiter = ',', required = true)]
    n: Vec<usize>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write per-trial rows to this CSV file.
    #[arg(long)]
    trials_out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalingArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long, default_value_t = 10)]
    k_min: u32,
    #[arg(long, default_value_t = 16)]
    k_max: u32,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long, default_value_t = 20)]
    trials: usize,
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)?)
}

fn load_graph(path: &Path) -> Result<BoundedDegreeGraph> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(read_edge_list(std::io::BufReader::new(file))?)
}

fn cmd_gen(cli: &Cli, args: &GenArgs) -> Result<()> {
    let spec = InstanceSpec {
        family: args.family.family(args.eps)?,
        n: args.n,
        d: args.family.d,
        seed: cli.seed,
    };
    let inst = generate(&spec)?;
    let mut buf = Vec::new();
    write_edge_list(&inst.graph, &mut buf)?;
    emit(cli.out.as_deref(), &String::from_utf8(buf)?)?;
    let meta = to_json(&inst.metadata(&args.far_eps))?;
    match &cli.out {
        Some(p) => {
            let mut side = p.as_os_str().to_owned();
            side.push(".meta.json");
            fs::write(&side, meta + "\n")?;
        }
        None => eprintln!("{meta}"),
    }
    Ok(())
}

#[derive(Serialize)]
struct TestReport<'a> {
    graph: String,
    n: usize,
    d: usize,
    params: &'a TesterParams,
    seed: u64,
    wall_time_ms: f64,
    #[serde(flatten)]
    verdict: &'a cyclefree::TestVerdict,
}

fn cmd_test(cli: &Cli, args: &TestArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let params = args
        .params
        .preset()?
        .resolve(g.n(), g.d(), args.params.eps)?
        .with_exploration(args.params.exploration());
    params.check_step_budget(args.max_steps)?;
    let mut dump = match &args.dump_walks {
        Some(p) => Some(std::io::BufWriter::new(fs::File::create(p)?)),
        None => None,
    };
    let mut dump_err = None;
    let mut write_walk = |w: &Walk| {
        if let Some(f) = dump.as_mut() {
            if let Err(e) = writeln!(f, "{}", w.to_debug_text()) {
                dump_err.get_or_insert(e);
            }
        }
    };
    let started = Instant::now();
    let verdict = cycle_freeness_tester_observed(&g, &params, &mut seeded_rng(cli.seed, 1), Some(&mut write_walk))?;
    let wall = started.elapsed();
    if let Some(e) = dump_err {
        return Err(e.into());
    }
    if let Some(mut f) = dump {
        f.flush()?;
    }
    log::info!("{:?} after {} queries", verdict.outcome, verdict.queries.total());
    let report = TestReport {
        graph: args.graph.display().to_string(),
        n: g.n(),
        d: g.d(),
        params: &params,
        seed: cli.seed,
        wall_time_ms: wall.as_secs_f64() * 1e3,
        verdict: &verdict,
    };
    emit(cli.out.as_deref(), &to_json(&report)?)
}

fn cmd_analyze(cli: &Cli, args: &AnalyzeArgs) -> Result<()> {
    let g = load_graph(&args.graph)?;
    let mut cfg = ClassifyConfig::new(args.alpha, args.ell, args.samples).with_seed(cli.seed);
    cfg.cyc_samples = args.cyc_samples;
    cfg.component = args.component.clone();
    let cls = classify_edges(&g, args.start, &cfg)?;
    let forest = check_dominant_forest(&cls);
    let bidirectional = check_no_bidirectional_dominance(&cls);
    let path_through = check_dominant_path_through_edge(&cls);
    let recessive = count_recessive_vs_bound(&g, &cls);
    let text = match args.format {
        Format::Json => to_json(&serde_json::json!({
            "classification": cls,
            "checks": {
                "dominant_forest": forest,
                "no_bidirectional_dominance": bidirectional,
                "dominant_path_through_edge": path_through,
            },
            "recessive": recessive,
        }))?,
        Format::Csv | Format::Text => {
            let mut t = String::from("tail,head,dominant,avoid_mass\n");
            for c in &cls.directed {
                t.push_str(&format!(
                    "{},{},{},{:.6}\n",
                    c.edge.tail,
                    c.edge.head,
                    serde_json::to_value(c.dominant)?.as_str().unwrap_or(""),
                    c.avoid_mass
                ));
            }
            if args.format == Format::Text {
                t.push_str(&format!(
                    "\n# forest: {forest:?}\n# bidirectional: {bidirectional:?}\n# path-through-edge: {path_through:?}\n# recessive: {} certain, {} uncertain, bound {}\n",
                    recessive.certain_recessive, recessive.uncertain, recessive.lower_bound
                ));
            }
            t
        }
    };
    emit(cli.out.as_deref(), &text)
}

fn experiment(cli: &Cli, family: &FamilyArgs, ns: &[usize], params: &ParamArgs, trials: usize) -> Result<ExperimentSpec> {
    let fam = family.family(params.eps)?;
    let cells = ns
        .iter()
        .map(|&n| CellSpec {
            family: fam.clone(),
            n,
            d: family.d,
        })
        .collect();
    let mut spec = ExperimentSpec::new(cells, params.eps, params.preset()?, trials, cli.seed);
    spec.workers = cli.workers;
    spec.exploration = params.exploration();
    Ok(spec)
}

fn cmd_sweep(cli: &Cli, args: &SweepArgs) -> Result<()> {
    let spec = experiment(cli, &args.family, &args.n, &args.params, args.trials)?;
    let report = run_experiment(&spec)?;
    if let Some(p) = &args.trials_out {
        fs::write(p, report.trials_csv()?)?;
    }
    let text = match args.format {
        Format::Json => report.to_json()?,
        Format::Csv | Format::Text => report.to_csv()?,
    };
    emit(cli.out.as_deref(), &text)
}

fn cmd_scaling(cli: &Cli, args: &ScalingArgs) -> Result<()> {
    if args.k_min > args.k_max || args.k_max >= usize::BITS {
        bail!(cyclefree::Error::InvalidArgument("need k_min <= k_max < word size".into()));
    }
    let ns: Vec<usize> = (args.k_min..=args.k_max).map(|k| 1usize << k).collect();
    let spec = experiment(cli, &args.family, &ns, &args.params, args.trials)?;
    let report = run_experiment(&spec)?;
    let fit = scaling_fit(&scaling_points(&report))?;
    emit(
        cli.out.as_deref(),
        &to_json(&serde_json::json!({ "fit": fit, "cells": report.cells }))?,
    )
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Gen(a) => cmd_gen(cli, a),
        Command::Test(a) => cmd_test(cli, a),
        Command::Analyze(a) => cmd_analyze(cli, a),
        Command::Sweep(a) => cmd_sweep(cli, a),
        Command::Scaling(a) => cmd_scaling(cli, a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Some(k) = cli.workers {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            let limit = e
                .downcast_ref::<cyclefree::Error>()
                .is_some_and(|err| err.is_resource_limit());
            ExitCode::from(if limit { 2 } else { 1 })
        }
    }
}
