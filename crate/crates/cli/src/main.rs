//! `sdairp` command-line front end.
//!
//! Exit codes: 0 success (optimal for solver commands), 1 bad input or a
//! failed cross-check, 2 infeasible, 3 node or time limit hit.

mod manifest;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use log::info;
use serde::Serialize;

use sdairp_core::evaluation::{format_delta, inventory_csv, run_experiment, summarize, ExperimentSpec, PolicyKind};
use sdairp_core::formulations::{build_airp_model, build_carp_model, extract_routes, AirpInstance, Routes};
use sdairp_core::graph::{binarize_demands, import_gdb, parse_canonical, Network};
use sdairp_core::stochastic::simulate_paths;
use sdairp_milp::{
    enumerate_oracle, solve_mip, LinearModel, MipSolution, SolveStatus, SolverConfig, MAX_ENUMERATED_BINARIES,
};

use manifest::{write_atomic, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "sdairp", version, about = "Arc-inventory routing solvers and dispatch-policy experiments")]
struct Cli {
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Single-period capacitated arc routing.
    SolveCarp {
        instance: PathBuf,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Multi-period deterministic arc-inventory routing.
    SolveAirp {
        instance: PathBuf,
        #[arg(long)]
        horizon: usize,
        /// Holding cost per unit inventory and period; one value or one per arc.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        holding: Vec<f64>,
        /// Consumption rate; one value or one per arc.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        rates: Vec<f64>,
        /// Initial inventory; one value or one per arc (default: q).
        #[arg(long, value_delimiter = ',')]
        s0: Option<Vec<f64>>,
        #[command(flatten)]
        load: LoadArgs,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Sample rate paths for the arcs of an experiment.
    Simulate {
        experiment: PathBuf,
        #[arg(long, default_value_t = 100)]
        paths: usize,
        /// Periods to simulate (default: the experiment horizon).
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Compare dispatch policies on seeded rate trajectories.
    PolicyEval {
        experiment: PathBuf,
        /// Evaluate this single seed instead of the experiment's seed set.
        #[arg(long)]
        seed: Option<u64>,
        /// Sample paths for every look-ahead policy.
        #[arg(long)]
        paths: Option<usize>,
        /// Basis size for every look-ahead policy.
        #[arg(long)]
        basis: Option<usize>,
        /// Look-ahead horizon for every look-ahead policy.
        #[arg(long)]
        horizon: Option<usize>,
        /// Stock-out cost on every arc.
        #[arg(long)]
        rho: Option<f64>,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Rerun the command recorded in a manifest.
    Replay {
        manifest: PathBuf,
        /// Write to this directory instead of the recorded one.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug)]
struct LoadArgs {
    /// Serve every gdb edge with positive demand (q = 1).
    #[arg(long)]
    binarize: bool,
    /// Service cost as a fraction of traversal cost for gdb files.
    #[arg(long, default_value_t = 0.0)]
    service_ratio: f64,
}

#[derive(Args, Debug)]
struct SolverArgs {
    #[arg(long)]
    node_limit: Option<u64>,
    /// Seconds. Runs stopped by the clock are not reproducible.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Cross-check the optimum against exhaustive enumeration.
    #[arg(long)]
    oracle: bool,
}

impl SolverArgs {
    fn config(&self) -> Result<SolverConfig> {
        let time_limit = match self.time_limit {
            Some(s) if !(s > 0.0 && s.is_finite()) => bail!("--time-limit must be positive"),
            Some(s) => Some(Duration::from_secs_f64(s)),
            None => None,
        };
        Ok(SolverConfig { node_limit: self.node_limit, time_limit, ..SolverConfig::default() })
    }
}

/// Outcome of a command: the exit code plus what the manifest records.
struct Outcome {
    code: u8,
    instance: Option<PathBuf>,
    config: Option<PathBuf>,
    seeds: Vec<u64>,
    out: PathBuf,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let args: Vec<String> = std::env::args().skip(1).collect();
    match run(args) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(args: Vec<String>) -> Result<u8> {
    let cli = match Cli::try_parse_from(std::iter::once("sdairp".to_string()).chain(args.iter().cloned())) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return Ok(0);
        }
        Err(e) => bail!("{e}"),
    };
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        // Fails only if a pool already exists, which happens on replay.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    if let Command::Replay { manifest, out } = &cli.command {
        return replay(manifest, out.as_deref(), cli.threads);
    }
    let command = subcommand_name(&cli.command);
    let start = Instant::now();
    let outcome = dispatch(cli.command)?;
    let manifest = RunManifest {
        command: command.to_string(),
        args,
        instance: outcome.instance.map(|p| p.display().to_string()),
        config: outcome.config.map(|p| p.display().to_string()),
        seeds: outcome.seeds,
        out_dir: outcome.out.display().to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_seconds: start.elapsed().as_secs_f64(),
    };
    manifest.write(&outcome.out)?;
    Ok(outcome.code)
}

fn subcommand_name(c: &Command) -> &'static str {
    match c {
        Command::SolveCarp { .. } => "solve-carp",
        Command::SolveAirp { .. } => "solve-airp",
        Command::Simulate { .. } => "simulate",
        Command::PolicyEval { .. } => "policy-eval",
        Command::Replay { .. } => "replay",
    }
}

fn replay(path: &Path, out: Option<&Path>, threads: Option<usize>) -> Result<u8> {
    let manifest = RunManifest::read(path)?;
    let mut args = manifest.args.clone();
    if let Some(out) = out {
        manifest::set_flag(&mut args, "--out", Some(&out.display().to_string()));
    }
    if let Some(n) = threads {
        manifest::set_flag(&mut args, "--threads", Some(&n.to_string()));
    }
    info!("replaying {} {:?}", manifest.command, args);
    run(args)
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::SolveCarp { instance, load, solver, out } => {
            let net = load_instance(&instance, &load)?;
            let carp = build_carp_model(&net)?;
            let (sol, code) = solve(&carp.model, &solver, &out)?;
            let routes = if sol.objective.is_some() {
                Some(extract_routes(&net, &carp.dirs, &carp.vars, &sol.values)?)
            } else {
                None
            };
            write_json(&out.join("routes.json"), &routes)?;
            if let Some(r) = &routes {
                print!("{}", describe_routes(r));
            }
            Ok(Outcome { code, instance: Some(instance), config: None, seeds: vec![], out })
        }
        Command::SolveAirp { instance, horizon, holding, rates, s0, load, solver, out } => {
            let net = load_instance(&instance, &load)?;
            let m = net.num_arcs();
            let q: Vec<f64> = net.arcs.iter().map(|a| f64::from(a.q)).collect();
            let h = per_arc(&holding, m, "--holding")?;
            let r = per_arc(&rates, m, "--rates")?;
            let s0 = match s0 {
                Some(v) => per_arc(&v, m, "--s0")?,
                None => q,
            };
            let airp = build_airp_model(&AirpInstance::new(net.clone(), horizon, h, r, s0))?;
            let (sol, code) = solve(&airp.model, &solver, &out)?;
            if sol.objective.is_some() {
                let schedule = airp.schedule(&net, &sol.values)?;
                for (t, routes) in schedule.iter().enumerate() {
                    write_json(&out.join(format!("routes_t{}.json", t + 1)), routes)?;
                    print!("period {}\n{}", t + 1, describe_routes(routes));
                }
                let mut csv = String::from("period,arc,i,j,s\n");
                for (t, row) in airp.inventories(&sol.values).iter().enumerate() {
                    for (k, (a, s)) in net.arcs.iter().zip(row).enumerate() {
                        let _ = writeln!(csv, "{t},{},{},{},{s:.6}", k + 1, a.i, a.j);
                    }
                }
                write_atomic(&out.join("inventory.csv"), csv.as_bytes())?;
            }
            Ok(Outcome { code, instance: Some(instance), config: None, seeds: vec![], out })
        }
        Command::Simulate { experiment, paths, horizon, seed, out } => {
            let spec = load_experiment(&experiment)?;
            let matrix = simulate_paths(&spec.ou(), paths, horizon.unwrap_or(spec.horizon), seed)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            write_atomic(&out.join("paths.csv"), matrix.to_csv().as_bytes())?;
            Ok(Outcome { code: 0, instance: None, config: Some(experiment), seeds: vec![seed], out })
        }
        Command::PolicyEval { experiment, seed, paths, basis, horizon, rho, node_limit, out } => {
            let mut spec = load_experiment(&experiment)?;
            if let Some(s) = seed {
                spec.seeds = vec![s];
            }
            if let Some(r) = rho {
                spec.arcs.iter_mut().for_each(|a| a.rho = r);
            }
            if node_limit.is_some() {
                spec.node_limit = node_limit;
            }
            for p in &mut spec.roster {
                if let PolicyKind::Sdairp { horizon: t, basis: m, paths: n, .. } = &mut p.kind {
                    *t = horizon.unwrap_or(*t);
                    *m = basis.unwrap_or(*m);
                    *n = paths.unwrap_or(*n);
                }
            }
            spec.validate()?;
            let runs = run_experiment(&spec)?;
            let summary = summarize(&spec, &runs)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            write_atomic(&out.join("summary.csv"), summary.to_csv().as_bytes())?;
            write_json(&out.join("summary.json"), &summary)?;
            write_atomic(&out.join("inventory.csv"), inventory_csv(&runs).as_bytes())?;
            println!(
                "{:<16} {:>10} {:>10} {:>10} {:>10}  vs {}",
                "policy",
                "X",
                "H",
                "O",
                "total",
                spec.baseline.as_deref().unwrap_or("-")
            );
            for p in &summary.policies {
                let c = &p.total;
                println!(
                    "{:<16} {:>10.4} {:>10.4} {:>10.4} {:>10.4}  {}",
                    p.policy,
                    c.x,
                    c.h,
                    c.o,
                    c.total,
                    format_delta(p.delta_vs_baseline)
                );
            }
            Ok(Outcome { code: 0, instance: None, config: Some(experiment), seeds: spec.seeds.clone(), out })
        }
        Command::Replay { .. } => unreachable!("handled before dispatch"),
    }
}

fn load_instance(path: &Path, load: &LoadArgs) -> Result<Network> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_gdb = text.lines().any(|l| l.trim_start().to_ascii_uppercase().starts_with("VERTICES"));
    let net = if is_gdb {
        let net = import_gdb(&text, load.service_ratio).with_context(|| format!("parsing {}", path.display()))?;
        if load.binarize {
            binarize_demands(&net)
        } else {
            net
        }
    } else {
        if load.binarize {
            bail!("--binarize applies to gdb files only");
        }
        parse_canonical(&text).with_context(|| format!("parsing {}", path.display()))?
    };
    Ok(net)
}

fn load_experiment(path: &Path) -> Result<ExperimentSpec> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    ExperimentSpec::parse(&text).with_context(|| format!("parsing {}", path.display()))
}

fn per_arc(values: &[f64], m: usize, flag: &str) -> Result<Vec<f64>> {
    match values.len() {
        1 => Ok(vec![values[0]; m]),
        n if n == m => Ok(values.to_vec()),
        n => bail!("{flag} takes one value or one per arc ({m}), got {n}"),
    }
}

/// Solves, writes `solution.json` (and `oracle.json` when asked) and maps the
/// status to an exit code.
fn solve(model: &LinearModel, args: &SolverArgs, out: &Path) -> Result<(MipSolution, u8)> {
    let cfg = args.config()?;
    if args.oracle && model.num_binaries() > MAX_ENUMERATED_BINARIES {
        bail!("--oracle supports at most {MAX_ENUMERATED_BINARIES} binaries, the model has {}", model.num_binaries());
    }
    let sol = solve_mip(model, &cfg)?;
    info!("{:?} after {} nodes in {:?}", sol.status, sol.nodes, sol.wall_time);
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    write_json(&out.join("solution.json"), &sol)?;
    match sol.objective {
        Some(z) => println!("status {:?} objective {z} nodes {}", sol.status, sol.nodes),
        None => println!("status {:?} nodes {}", sol.status, sol.nodes),
    }
    if args.oracle {
        let reference = enumerate_oracle(model)?;
        write_json(&out.join("oracle.json"), &reference)?;
        let agree = match (sol.status, reference.objective, sol.objective) {
            (SolveStatus::Optimal, Some(a), Some(b)) => (a - b).abs() <= 1e-6 * a.abs().max(1.0),
            (SolveStatus::Infeasible, None, None) => reference.status == SolveStatus::Infeasible,
            // A limited run proves nothing to compare.
            (SolveStatus::NodeLimit | SolveStatus::TimeLimit, ..) => true,
            _ => false,
        };
        if !agree {
            bail!("oracle disagrees: enumeration {:?} vs branch-and-bound {:?}", reference.objective, sol.objective);
        }
        println!("oracle objective {:?} agrees", reference.objective);
    }
    let code = match sol.status {
        SolveStatus::Optimal => 0,
        SolveStatus::Infeasible | SolveStatus::Unbounded => 2,
        SolveStatus::NodeLimit | SolveStatus::TimeLimit => 3,
    };
    Ok((sol, code))
}

fn describe_routes(routes: &Routes) -> String {
    let mut s = String::new();
    for v in routes.vehicles.iter().filter(|v| !v.walk.is_empty()) {
        let walk: Vec<String> = v.walk.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  vehicle {}: {} (cost {}, fuel {:.3})", v.vehicle, walk.join("-"), v.cost, v.fuel);
    }
    let _ = writeln!(s, "  total cost {}", routes.cost);
    s
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_atomic(path, text.as_bytes())
}
