use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use genkahler_cli::scenario::Task;
use genkahler_cli::{render, run_scenario, CliError, Overrides, Scenario};
use serde_json::Value as Json;

#[derive(Parser)]
#[command(name = "genkahler", version, about = "Exact checks for generalized complex and Kähler structures")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Clone)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Truncation order of deformation series.
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Number of sample points.
    #[arg(long, global = true)]
    samples: Option<usize>,
    #[arg(long = "degree-bound", global = true)]
    degree_bound: Option<u32>,
    /// Write the report here instead of stdout.
    #[arg(long = "json-out", global = true)]
    json_out: Option<PathBuf>,
    /// Worker threads for independent tasks.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Chart dimension for a task given on the command line.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Task parameter `key=value`; the value is parsed as JSON when it can be,
    /// and taken as a string otherwise.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
}

#[derive(Subcommand, Clone)]
enum Command {
    /// Run every task of the scenario.
    Run,
    /// Schouten bracket of a bivector with itself.
    CheckPoisson,
    /// Whether an ideal cuts out a Poisson submanifold.
    PoissonSub,
    /// Invariance of the conormal bundle under J_βt.
    ConormalInvariant,
    /// Generalized complex submanifold test and induced structure.
    JSub,
    /// Pointwise type, eigenframe and integrability of a structure.
    GcsType,
    /// Generalized Kähler pair conditions.
    KahlerPair,
    /// Pullback of the deformed pure spinor to a submanifold.
    SpinorPullback,
    /// Solve the deformation equation order by order.
    Deform,
    /// Kodaira-Spencer class and first-order bi-Hermitian frames.
    Bihermitian,
    /// Rank criterion for Poisson bivectors on a torus times CP¹.
    ObstructionRank,
    /// Whether a bivector extends to projective space.
    ExtendsProjective,
    /// `courant` or `schouten`.
    Brackets { kind: String },
}

impl Command {
    fn name(&self) -> Option<&'static str> {
        Some(match self {
            Command::Run => return None,
            Command::CheckPoisson => "check-poisson",
            Command::PoissonSub => "poisson-sub",
            Command::ConormalInvariant => "conormal-invariant",
            Command::JSub => "j-sub",
            Command::GcsType => "gcs-type",
            Command::KahlerPair => "kahler-pair",
            Command::SpinorPullback => "spinor-pullback",
            Command::Deform => "deform",
            Command::Bihermitian => "bihermitian",
            Command::ObstructionRank => "obstruction-rank",
            Command::ExtendsProjective => "extends-projective",
            Command::Brackets { .. } => "brackets",
        })
    }
}

fn parse_set(items: &[String]) -> Result<BTreeMap<String, Json>, CliError> {
    let mut out = BTreeMap::new();
    for it in items {
        let (k, v) = it.split_once('=').ok_or_else(|| CliError::Usage(format!("`--set {it}`: expected KEY=VALUE")))?;
        let v = serde_json::from_str(v).unwrap_or_else(|_| Json::String(v.to_string()));
        out.insert(k.to_string(), v);
    }
    Ok(out)
}

/// The scenario to run: the file as given for `run`, or only the tasks with
/// the chosen command, or a single task built from `--set`.
fn build(cli: &Cli) -> Result<Scenario, CliError> {
    let c = &cli.common;
    let command = cli.command.clone().unwrap_or(Command::Run);
    let mut params = parse_set(&c.set)?;
    if let Command::Brackets { kind } = &command {
        params.insert("kind".into(), Json::String(kind.clone()));
    }
    let mut scn = match &c.scenario {
        Some(path) => Scenario::load(path)?,
        None => {
            let n = c.n.ok_or_else(|| CliError::Usage("give --scenario FILE or --n N".into()))?;
            let text = serde_json::json!({ "name": "command-line", "n": n, "tasks": [] }).to_string();
            Scenario::from_json(&text)?
        }
    };
    if let Some(n) = c.n {
        scn.n = n;
    }
    let Some(name) = command.name() else {
        if scn.tasks.is_empty() {
            return Err(CliError::Usage("the scenario has no tasks".into()));
        }
        return Ok(scn);
    };
    let from_file: Vec<Task> = scn.tasks.iter().filter(|t| t.command == name).cloned().collect();
    scn.tasks = if from_file.is_empty() || !params.is_empty() {
        vec![Task { command: name.to_string(), expect: None, params }]
    } else {
        from_file
    };
    Ok(scn)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let scn = match build(&cli) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("genkahler: {e}");
            return ExitCode::from(2);
        }
    };
    let c = &cli.common;
    let overrides = Overrides { seed: c.seed, order: c.order, samples: c.samples, degree_bound: c.degree_bound };
    let report = run_scenario(&scn, scn.settings(&overrides), c.jobs);
    let text = render(&report.json);
    match &c.json_out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("genkahler: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.exit_code as u8)
}
