use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use gstp::bench::{fit_scaling, run_bench, scaling_report, scaling_sweep, BenchConfig};
use gstp::fnilp::{decide_by_fracture_with, FnError};
use gstp::fracture::fracture_modulator;
use gstp::instance::families::{family, FamilyOutput};
use gstp::instance::params::{parameter, Param, ParamError};
use gstp::instance::{augment, verify, AugmentMode};
use gstp::io::{
    load_decomposition, parse_graph, parse_instance, parse_solution, write_graph, write_instance, write_solution,
    Decomposition,
};
use gstp::oracle::{solve_exact, OracleResult};
use gstp::twdp::{decide_tw, dispatch_with_td, Branch, DispatchConfig, TreeDecomposition, TwError};
use gstp::{GstpInstance, Solution};

#[derive(Parser)]
#[command(name = "gstp", version, about = "Exact solvers for Steiner tree packing problems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Algo {
    Oracle,
    Twdp,
    Fnilp,
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamName {
    Vc,
    Fvs,
    Fen,
    Fracture,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Vertex,
    Clique,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an instance; prints FEASIBLE or INFEASIBLE on the last line.
    Solve {
        instance: String,
        #[arg(long, value_enum, default_value = "auto")]
        algo: Algo,
        /// Print one part per line above the verdict.
        #[arg(long)]
        witness: bool,
        /// Tree decomposition file for twdp.
        #[arg(long)]
        td: Option<String>,
        /// Caps and solver order as `key value` lines.
        #[arg(long)]
        config: Option<String>,
        /// Overrides a config key, e.g. `--set twdp.max_width=5`.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Check a solution file against an instance.
    Verify { instance: String, solution: String },
    /// Write a named family as an instance file.
    Gen {
        family: String,
        params: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exact structural parameter of the instance graph.
    Params {
        instance: String,
        #[arg(value_enum)]
        which: ParamName,
    },
    /// Augmented graph of an instance.
    Augment {
        instance: String,
        #[arg(value_enum)]
        mode: Mode,
    },
    /// Cross-check solvers on seeded random instances and log DP table sizes.
    Bench {
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated subset of oracle,twdp,fnilp.
        #[arg(long, default_value = "oracle,twdp,fnilp")]
        algos: String,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Skip the table-size sweep.
        #[arg(long)]
        no_scaling: bool,
    },
}

enum Failure {
    Usage(String),
    Cap(String),
    Disagreement,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Cap(_) => 2,
            Failure::Disagreement => 3,
        }
    }
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn load_instance(path: &str) -> Result<GstpInstance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn load_graph(path: &str) -> Result<gstp::Graph, Failure> {
    parse_graph(&read(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))
}

fn dispatch_config(config: Option<&str>, overrides: &[String]) -> Result<DispatchConfig, Failure> {
    let mut cfg = DispatchConfig::default();
    if let Some(path) = config {
        cfg.apply(&read(path)?).map_err(|e| Failure::Usage(format!("{path}: {e}")))?;
    }
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got '{o}'")))?;
        cfg.set(k.trim(), v.trim()).map_err(Failure::Usage)?;
    }
    Ok(cfg)
}

fn tw_error(e: TwError) -> Failure {
    match e {
        TwError::Cap { .. } => Failure::Cap(e.to_string()),
        TwError::Td(_) => Failure::Usage(e.to_string()),
    }
}

fn fn_error(e: FnError) -> Failure {
    match e {
        FnError::ScaleCap { .. } => Failure::Cap(e.to_string()),
        other => Failure::Usage(other.to_string()),
    }
}

fn oracle_witness(inst: &GstpInstance, cfg: &DispatchConfig) -> Result<(bool, Option<Solution>), Failure> {
    match solve_exact(inst, &cfg.oracle) {
        OracleResult::Feasible(s) => Ok((true, Some(s))),
        OracleResult::Infeasible => Ok((false, None)),
        OracleResult::BudgetExceeded(why) => Err(Failure::Cap(format!("oracle cap exceeded: {why}"))),
    }
}

fn tw_witness(
    inst: &GstpInstance,
    td: Option<&TreeDecomposition>,
    cfg: &DispatchConfig,
    witness: bool,
) -> Result<(bool, Option<Solution>), Failure> {
    let tw = gstp::twdp::TwConfig { witness, ..cfg.tw };
    let o = decide_tw(inst, td, &tw).map_err(tw_error)?;
    Ok((o.feasible, o.witness))
}

fn solve(path: &str, algo: Algo, witness: bool, td: Option<&str>, cfg: &DispatchConfig) -> Result<(), Failure> {
    let inst = load_instance(path)?;
    let td = match td {
        None => None,
        Some(p) => {
            match load_decomposition(&read(p)?, inst.graph()).map_err(|e| Failure::Usage(format!("{p}: {e}")))? {
                Decomposition::Tree(td) => Some(td),
                Decomposition::TreeCut(_) => {
                    return Err(Failure::Usage(format!("{p}: expected a tree decomposition ('p td')")))
                }
            }
        }
    };
    let branch = match algo {
        Algo::Oracle => Branch::Oracle,
        Algo::Twdp => Branch::TwDp,
        Algo::Fnilp => Branch::FnIlp,
        Algo::Auto => dispatch_with_td(&inst, td.as_ref(), cfg).map_err(|e| Failure::Cap(e.to_string()))?.1,
    };
    let (feasible, sol) = match branch {
        Branch::Oracle => oracle_witness(&inst, cfg)?,
        Branch::TwDp => tw_witness(&inst, td.as_ref(), cfg, witness)?,
        Branch::FnIlp => (decide_by_fracture_with(&inst, &cfg.fnilp).map_err(fn_error)?.feasible, None),
    };
    if witness && feasible {
        match sol {
            Some(s) => print!("{}", write_solution(&s.canonical())),
            None => println!("c {branch} gives no witness"),
        }
    }
    println!("{}", if feasible { "FEASIBLE" } else { "INFEASIBLE" });
    Ok(())
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Solve { instance, algo, witness, td, config, overrides } => {
            let cfg = dispatch_config(config.as_deref(), &overrides)?;
            solve(&instance, algo, witness, td.as_deref(), &cfg)
        }
        Cmd::Verify { instance, solution } => {
            let inst = load_instance(&instance)?;
            let sol = parse_solution(&read(&solution)?).map_err(|e| Failure::Usage(format!("{solution}: {e}")))?;
            match verify(&inst, &sol) {
                Ok(()) => println!("VALID"),
                Err(v) => println!("INVALID {v}"),
            }
            Ok(())
        }
        Cmd::Gen { family: name, params, seed } => {
            match family(&name, &params, seed).map_err(|e| Failure::Usage(e.to_string()))? {
                FamilyOutput::Graph(g) => print!("{}", write_graph(&g)),
                FamilyOutput::Instance(inst) => print!("{}", write_instance(&inst)),
            }
            Ok(())
        }
        Cmd::Params { instance, which } => {
            let g = load_graph(&instance)?;
            let cap = |e: ParamError| Failure::Cap(e.to_string());
            match which {
                ParamName::Vc => println!("{}", parameter(&g, Param::VertexCover).map_err(cap)?),
                ParamName::Fvs => println!("{}", parameter(&g, Param::FeedbackVertexSet).map_err(cap)?),
                ParamName::Fen => println!("{}", parameter(&g, Param::FeedbackEdgeNumber).map_err(cap)?),
                ParamName::Fracture => {
                    let (s, k) = fracture_modulator(&g);
                    println!("{k}");
                    println!("c modulator {}", s.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "));
                }
            }
            Ok(())
        }
        Cmd::Augment { instance, mode } => {
            let inst = load_instance(&instance)?;
            let mode = match mode {
                Mode::Vertex => AugmentMode::Vertex,
                Mode::Clique => AugmentMode::Clique,
            };
            let aug = augment(&inst, mode);
            for (j, a) in aug.aug_vertex_of.iter().enumerate() {
                println!("c aug {j} {a}");
            }
            print!("{}", write_graph(&aug.graph));
            Ok(())
        }
        Cmd::Bench { count, seed, algos, jobs, no_scaling } => {
            let algos = algos
                .split(',')
                .map(|a| a.trim().parse())
                .collect::<Result<Vec<Branch>, _>>()
                .map_err(Failure::Usage)?;
            if algos.len() < 2 {
                return Err(Failure::Usage("bench needs at least two solvers".into()));
            }
            let report =
                run_bench(&BenchConfig { count, seed, algos, jobs }).map_err(|e| Failure::Usage(e.to_string()))?;
            print!("{report}");
            if !no_scaling {
                let points = scaling_sweep(&[1, 2, 3], &[1, 2, 3], 8, 2);
                print!("{}", scaling_report(&points, &fit_scaling(&points)));
            }
            if report.disagreements() > 0 {
                return Err(Failure::Disagreement);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Cap(m) => eprintln!("error: {m}"),
                Failure::Disagreement => eprintln!("error: solvers disagree"),
            }
            ExitCode::from(f.code())
        }
    }
}
