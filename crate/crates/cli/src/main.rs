mod plot;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use clcbs::bct::{solve, solve_sequential, SolveError, SolverConfig};
use clcbs::bench_io::{generate, read_instance, read_solution, validate, write_instance, write_solution, GeneratorSpec};
use clcbs::geometry::Footprint;
use clcbs::kinematics::AgentParams;
use clcbs::sha_star::Penalties;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "clcbs", version, about = "Multi-agent path finding for car-like robots")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance and write the schedule.
    Solve(SolveArgs),
    /// Generate seeded benchmark instances.
    Generate(GenerateArgs),
    /// Check a solution against its instance.
    Validate(ValidateArgs),
    /// Render an instance and optional solution as SVG.
    Plot(PlotArgs),
}

/// Fleet shape and motion limits, shared by every agent.
#[derive(Args, Clone)]
struct FleetArgs {
    /// Sample time in seconds.
    #[arg(long, default_value_t = 0.5)]
    ts: f64,
    /// Top speed in m/s, forward and backward.
    #[arg(long, default_value_t = 2.0)]
    vmax: f64,
    /// Minimum turning radius in meters.
    #[arg(long, default_value_t = 3.0)]
    rmin: f64,
    /// Rear axle to front edge, meters.
    #[arg(long, default_value_t = 2.0)]
    lf: f64,
    /// Rear axle to back edge, meters.
    #[arg(long, default_value_t = 1.0)]
    lb: f64,
    /// Body width, meters.
    #[arg(long, default_value_t = 2.0)]
    wr: f64,
    /// Wheelbase, meters.
    #[arg(long, default_value_t = 2.0)]
    wheelbase: f64,
}

impl FleetArgs {
    fn params(&self) -> Result<AgentParams, String> {
        let fp = Footprint::new(self.lf, self.lb, self.wr).map_err(|e| e.to_string())?;
        AgentParams::with_turning_radius(fp, self.wheelbase, self.vmax, self.rmin, self.ts).map_err(|e| e.to_string())
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Number of sequential batches; 1 solves all agents jointly.
    #[arg(long, default_value_t = 1)]
    batch_size: usize,
    /// Wall-clock budget in seconds.
    #[arg(long, default_value_t = 90.0)]
    time_limit: f64,
    /// High-level node budget.
    #[arg(long, default_value_t = 10_000)]
    node_limit: usize,
    /// Constraint inflation coefficient.
    #[arg(long, default_value_t = 1.2)]
    inflation: f64,
    /// Constraint half-window in timesteps.
    #[arg(long, default_value_t = 1)]
    delta_t: usize,
    #[arg(long, default_value_t = 1.5)]
    penalty_turn: f64,
    #[arg(long, default_value_t = 2.0)]
    penalty_reverse: f64,
    #[arg(long, default_value_t = 2.0)]
    penalty_switch: f64,
    #[command(flatten)]
    fleet: FleetArgs,
}

#[derive(Args)]
struct GenerateArgs {
    /// Side length of the square map in meters.
    #[arg(long, alias = "map")]
    map_size: f64,
    #[arg(long)]
    agents: usize,
    /// Scatter circular obstacles over 1% of the map.
    #[arg(long, conflicts_with = "empty")]
    obstacles: bool,
    /// No obstacles (the default).
    #[arg(long)]
    empty: bool,
    #[arg(long, default_value_t = 1)]
    count: usize,
    /// Seed of the first instance; later ones count up from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    fleet: FleetArgs,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    solution: PathBuf,
    #[command(flatten)]
    fleet: FleetArgs,
}

#[derive(Args)]
struct PlotArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Omit to draw only the map, starts and goals.
    #[arg(short, long)]
    solution: Option<PathBuf>,
    #[arg(short, long)]
    output: PathBuf,
    #[command(flatten)]
    fleet: FleetArgs,
}

/// A failed command: message for stderr and the exit status.
struct Failure(u8, String);

type Outcome = Result<(), Failure>;

fn fail(code: u8) -> impl Fn(String) -> Failure {
    move |msg| Failure(code, msg)
}

fn cmd_solve(a: &SolveArgs) -> Outcome {
    let bad = fail(3);
    let params = a.fleet.params().map_err(&bad)?;
    let instance = read_instance(&a.input, params).map_err(|e| bad(e.to_string()))?;
    if !(a.time_limit > 0.0) {
        return Err(bad(format!("--time-limit must be positive, got {}", a.time_limit)));
    }
    let config = SolverConfig {
        inflation: a.inflation,
        delta_t: a.delta_t,
        time_limit: Some(Duration::from_secs_f64(a.time_limit)),
        node_limit: a.node_limit,
        planner: clcbs::sha_star::PlannerConfig {
            penalties: Penalties { turn: a.penalty_turn, reverse: a.penalty_reverse, switch: a.penalty_switch },
            ..Default::default()
        },
        ..SolverConfig::default()
    };
    let result = if a.batch_size > 1 {
        solve_sequential(&instance, a.batch_size, &config)
    } else if a.batch_size == 1 {
        solve(&instance, &config)
    } else {
        return Err(bad("--batch-size must be at least 1".into()));
    };
    match result {
        Ok(solution) => {
            write_solution(&a.output, &solution).map_err(|e| bad(e.to_string()))?;
            let s = &solution.stats;
            println!(
                "solved in {:.3} s: makespan {:.3} m, sum of costs {:.3} m, {} high-level nodes",
                s.runtime_s, s.makespan, s.sum_of_costs, s.bct_expanded
            );
            Ok(())
        }
        Err(e @ (SolveError::InvalidInstance(_) | SolveError::InvalidConfig(_))) => Err(bad(e.to_string())),
        Err(e) if e.is_budget() => Err(Failure(2, e.to_string())),
        Err(e) => Err(Failure(1, e.to_string())),
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    spec: GeneratorSpec,
}

fn cmd_generate(a: &GenerateArgs) -> Outcome {
    let err = fail(1);
    let params = a.fleet.params().map_err(&err)?;
    fs::create_dir_all(&a.output).map_err(|e| err(format!("{}: {e}", a.output.display())))?;
    let mut manifest = Vec::with_capacity(a.count);
    for k in 0..a.count {
        let spec = GeneratorSpec {
            width: a.map_size,
            height: a.map_size,
            agents: a.agents,
            obstacles: a.obstacles,
            seed: a.seed + k as u64,
        };
        let instance = generate(&spec, params).map_err(|e| err(format!("instance {k}: {e}")))?;
        let file = format!("{}_{k}.json", spec.stem());
        write_instance(&a.output.join(&file), &instance).map_err(|e| err(e.to_string()))?;
        manifest.push(ManifestEntry { file, spec });
    }
    let text = serde_json::to_string_pretty(&manifest).map_err(|e| err(e.to_string()))? + "\n";
    let path = a.output.join("manifest.json");
    fs::write(&path, text).map_err(|e| err(format!("{}: {e}", path.display())))?;
    println!("wrote {} instances to {}", a.count, a.output.display());
    Ok(())
}

fn cmd_validate(a: &ValidateArgs) -> Outcome {
    let bad = fail(2);
    let params = a.fleet.params().map_err(&bad)?;
    let instance = read_instance(&a.input, params).map_err(|e| bad(e.to_string()))?;
    let solution = read_solution(&a.solution).map_err(|e| bad(e.to_string()))?;
    let report = validate(&instance, &solution).map_err(|e| bad(e.to_string()))?;
    let m = &report.metrics;
    println!("makespan {:.3} m, sum of costs {:.3} m", m.makespan, m.sum_of_costs);
    if report.is_ok() {
        println!("feasible, no conflicts");
        return Ok(());
    }
    for v in &report.violations {
        println!("violation: {v}");
    }
    for c in &report.conflicts {
        println!("conflict: agents {} and {} at t={}", c.i, c.j, c.t);
    }
    Err(Failure(
        1,
        format!("{} violations, {} conflicts", report.violations.len(), report.conflicts.len()),
    ))
}

fn cmd_plot(a: &PlotArgs) -> Outcome {
    let bad = fail(1);
    let params = a.fleet.params().map_err(&bad)?;
    let instance = read_instance(&a.input, params).map_err(|e| bad(e.to_string()))?;
    let solution = a.solution.as_deref().map(read_solution).transpose().map_err(|e| bad(e.to_string()))?;
    let svg = plot::render_svg(&instance, solution.as_ref());
    write_file(&a.output, &svg).map_err(bad)
}

fn write_file(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Validate(a) => cmd_validate(a),
        Command::Plot(a) => cmd_plot(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("clcbs: {msg}");
            ExitCode::from(code)
        }
    }
}
