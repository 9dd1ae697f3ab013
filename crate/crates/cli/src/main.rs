mod commands;
mod config;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use topoff_core::circuit::serialize;
use topoff_core::dynamics::{braid_circuit, DynamicsScript};
use topoff_core::prep::{PrepPlan, PrepStrategy};
use topoff_core::{Lattice, LatticeKind, NoiseSpec};

use commands::{BudgetArgs, Output, RandomizedRun, Setup};
use config::{CliError, CliResult, RunConfig};

const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "topoff", version, about = "Toric code preparation, anyon dynamics and estimators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// `torus4x4` or `defect`. Dynamics commands default to `defect`.
    #[arg(long, global = true)]
    lattice: Option<String>,
    /// Strategy preset (hardware, optimized, all_ancilla_reuse, inferred) or a JSON file.
    #[arg(long, global = true, default_value = "optimized")]
    strategy: String,
    /// `none`, `h1-1`, or a noise JSON file (also looked up in $TOPOFF_CONFIG_DIR).
    #[arg(long, global = true)]
    noise: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write a plot-ready CSV table.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Worker threads for shot-parallel loops.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Leave out the creation timestamp so reports are byte-reproducible.
    #[arg(long, global = true)]
    canonical: bool,
    /// Estimate from heralded shots too instead of discarding them.
    #[arg(long, global = true)]
    keep_all: bool,
    /// Decode with one whole-register condition per syndrome value.
    #[arg(long, global = true)]
    qasm2_conditions: bool,
    /// Write the preparation circuit in text form.
    #[arg(long, global = true)]
    emit_circuit: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Prepare the ground state and read out every stabilizer.
    Prepare {
        #[arg(long, default_value_t = 1240)]
        shots: usize,
        /// Invert the readout matrix of the noise model.
        #[arg(long)]
        mitigate: bool,
        /// Write per-shot records (NDJSON).
        #[arg(long)]
        records: Option<PathBuf>,
    },
    /// Rényi-2 entropies from randomized measurements.
    Entropy(RandomizedArgs),
    /// Topological entanglement entropy from randomized measurements.
    Tee(RandomizedArgs),
    /// Move anyons and read every stabilizer after each checkpoint.
    Transmute {
        /// Script JSON file, or the `transmutation` preset.
        #[arg(long)]
        script: Option<String>,
        #[arg(long, default_value_t = 600)]
        shots_per_setting: usize,
    },
    /// Track anyons with repeated non-destructive checks in one shot.
    Qnd {
        /// Script JSON file, or the `qnd_trace` preset.
        #[arg(long)]
        script: Option<String>,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// Write per-shot trajectories (NDJSON).
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Hadamard-test interferometry of a fermion around a twist defect.
    Braid {
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
        #[arg(long, value_enum, default_value_t = Fermion::Both)]
        fermion: Fermion,
    },
    /// Closed-form success probability of a circuit under the noise model.
    Budget {
        #[arg(long)]
        n2q: Option<usize>,
        #[arg(long)]
        n1q: Option<usize>,
        /// Two-qubit gate layers.
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        qubits: Option<usize>,
        #[arg(long)]
        spam_events: Option<usize>,
    },
    /// Energy density while one noise parameter varies.
    Sweep {
        /// Noise field: p2, p1, mem, z_bias, p01, p10, spam, spam_error.
        #[arg(long)]
        field: String,
        #[arg(long, value_delimiter = ',', conflicts_with_all = ["from", "to", "steps"])]
        values: Option<Vec<f64>>,
        #[arg(long, requires_all = ["to", "steps"])]
        from: Option<f64>,
        #[arg(long)]
        to: Option<f64>,
        #[arg(long)]
        steps: Option<usize>,
        #[arg(long, default_value_t = 2000)]
        shots: usize,
    },
    /// Raw against readout-mitigated stabilizer estimates.
    Mitigate {
        /// Shot records from `prepare --records`; simulated when absent.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        shots: usize,
    },
}

#[derive(Args)]
struct RandomizedArgs {
    /// Random measurement settings (N_U).
    #[arg(long, default_value_t = 72)]
    settings: usize,
    /// Shots per setting (N_M).
    #[arg(long, default_value_t = 256)]
    shots_per_setting: usize,
    #[arg(long, default_value_t = 200)]
    bootstrap: usize,
    /// Write the collected dataset (NDJSON).
    #[arg(long)]
    dataset: Option<PathBuf>,
    /// Analyze an existing dataset instead of simulating.
    #[arg(long, conflicts_with = "dataset")]
    input: Option<PathBuf>,
}

impl RandomizedArgs {
    fn run(&self) -> RandomizedRun<'_> {
        RandomizedRun {
            settings: self.settings,
            shots_per_setting: self.shots_per_setting,
            bootstrap: self.bootstrap,
            dataset: self.dataset.as_deref(),
            input: self.input.as_deref(),
        }
    }

    fn echo(&self) -> Value {
        json!({
            "settings": self.settings,
            "shots_per_setting": self.shots_per_setting,
            "bootstrap": self.bootstrap,
            "input": self.input.is_some(),
        })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Fermion {
    Both,
    With,
    Without,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Prepare { .. } => "prepare",
            Command::Entropy(_) => "entropy",
            Command::Tee(_) => "tee",
            Command::Transmute { .. } => "transmute",
            Command::Qnd { .. } => "qnd",
            Command::Braid { .. } => "braid",
            Command::Budget { .. } => "budget",
            Command::Sweep { .. } => "sweep",
            Command::Mitigate { .. } => "mitigate",
        }
    }

    fn default_lattice(&self) -> LatticeKind {
        match self {
            Command::Transmute { .. } | Command::Qnd { .. } | Command::Braid { .. } => LatticeKind::Defect,
            _ => LatticeKind::Torus,
        }
    }

    fn default_noise(&self) -> &'static str {
        match self {
            Command::Budget { .. } | Command::Sweep { .. } | Command::Mitigate { .. } => "h1-1",
            _ => "none",
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a> {
    schema: u32,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    created_unix: Option<u64>,
    result: Value,
}

fn sweep_values(values: &Option<Vec<f64>>, from: Option<f64>, to: Option<f64>, steps: Option<usize>) -> CliResult<Vec<f64>> {
    match (values, from, to, steps) {
        (Some(v), ..) if !v.is_empty() => Ok(v.clone()),
        (None, Some(a), Some(b), Some(n)) if n >= 2 => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
        (None, Some(a), Some(_), Some(1)) => Ok(vec![a]),
        _ => Err(CliError::Config("sweep needs --values or --from/--to/--steps".into())),
    }
}

fn emit_circuit(path: &Path, plan: &PrepPlan, command: &Command) -> CliResult<()> {
    let mut c = plan.circuit.clone();
    if let Command::Braid { .. } = command {
        let braid = braid_circuit(plan.n_qubits(), plan.n_data(), true);
        let offset = c.n_clbits;
        c.n_clbits += braid.n_clbits;
        c.extend(&braid.remap(c.n_qubits, c.n_clbits, |q| q, |b| b + offset));
    }
    std::fs::write(path, serialize(&c)).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Runtime(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            Ok(out.flush()?)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let c = &cli.common;
    if let Some(n) = c.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let cmd = &cli.command;
    let lattice: Lattice = match &c.lattice {
        Some(name) => config::lattice(name)?,
        None => cmd.default_lattice().build(),
    };
    let noise = config::noise(c.noise.as_deref().unwrap_or(cmd.default_noise()))?;
    let strategy: PrepStrategy = config::strategy(&c.strategy, &lattice, c.qasm2_conditions)?;
    let seed = match (cmd, c.seed) {
        (Command::Budget { .. }, s) => s,
        (_, Some(s)) => Some(s),
        (_, None) => return Err(CliError::Config("--seed is required".into())),
    };

    let params = match cmd {
        Command::Prepare { shots, mitigate, .. } => json!({ "shots": shots, "mitigate": mitigate }),
        Command::Entropy(a) | Command::Tee(a) => a.echo(),
        Command::Transmute { script, shots_per_setting } => {
            json!({ "script": config::script(script.as_deref(), DynamicsScript::transmutation)?, "shots_per_setting": shots_per_setting })
        }
        Command::Qnd { script, shots, .. } => {
            json!({ "script": config::script(script.as_deref(), DynamicsScript::qnd_trace)?, "shots": shots })
        }
        Command::Braid { shots, fermion } => {
            json!({ "shots": shots, "fermion": fermion.to_possible_value().map(|v| v.get_name().to_string()) })
        }
        Command::Budget { n2q, n1q, depth, qubits, spam_events } => {
            json!({ "n2q": n2q, "n1q": n1q, "depth": depth, "qubits": qubits, "spam_events": spam_events })
        }
        Command::Sweep { field, values, from, to, steps, shots } => {
            json!({ "field": field, "values": sweep_values(values, *from, *to, *steps)?, "shots": shots })
        }
        Command::Mitigate { records, shots } => json!({ "shots": shots, "from_records": records.is_some() }),
    };
    let run_config = RunConfig {
        command: cmd.name().to_string(),
        lattice: lattice.kind().name().to_string(),
        strategy: Some(strategy.clone()),
        noise,
        seed,
        keep_all: c.keep_all,
        params,
    };

    if let Some(path) = &c.emit_circuit {
        emit_circuit(path, &PrepPlan::new(&lattice, &strategy)?, cmd)?;
    }

    let setup = Setup { lattice: &lattice, strategy: &strategy, noise: noise.as_ref(), seed: seed.unwrap_or(0), keep_all: c.keep_all };
    let Output { mut result, table } = match cmd {
        Command::Prepare { shots, mitigate, records } => commands::prepare(&setup, *shots, *mitigate, records.as_deref())?,
        Command::Entropy(a) => commands::entropy(&setup, &a.run())?,
        Command::Tee(a) => commands::tee(&setup, &a.run())?,
        Command::Transmute { script, shots_per_setting } => {
            let script = config::script(script.as_deref(), DynamicsScript::transmutation)?;
            commands::transmute(&setup, &script, *shots_per_setting)?
        }
        Command::Qnd { script, shots, trace } => {
            let script = config::script(script.as_deref(), DynamicsScript::qnd_trace)?;
            commands::qnd(&setup, &script, *shots, trace.as_deref())?
        }
        Command::Braid { shots, fermion } => {
            let choices: &[bool] = match fermion {
                Fermion::Both => &[true, false],
                Fermion::With => &[true],
                Fermion::Without => &[false],
            };
            commands::braid(&setup, *shots, choices)?
        }
        Command::Budget { n2q, n1q, depth, qubits, spam_events } => {
            let args = BudgetArgs { n2q: *n2q, n1q: *n1q, depth: *depth, qubits: *qubits, spam_events: *spam_events };
            commands::budget(&lattice, &strategy, &noise.unwrap_or_else(NoiseSpec::noiseless), &args)?
        }
        Command::Sweep { field, values, from, to, steps, shots } => {
            let base = noise.unwrap_or_else(NoiseSpec::noiseless);
            commands::sweep(&setup, &base, field, &sweep_values(values, *from, *to, *steps)?, *shots)?
        }
        Command::Mitigate { records, shots } => commands::mitigate(&setup, records.as_deref(), *shots)?,
    };

    let created_unix =
        (!c.canonical).then(|| SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0));
    if let (Some(t), Some(Value::Object(meta))) = (created_unix, result.get_mut("meta")) {
        meta.insert("created_unix".into(), t.into());
    }
    let envelope = Envelope { schema: SCHEMA, command: cmd.name(), config: &run_config, created_unix, result };
    let text = serde_json::to_string_pretty(&envelope)? + "\n";

    // sweep is a table first: without --csv the table goes to stdout
    let sweep_to_stdout = matches!(cmd, Command::Sweep { .. }) && c.csv.is_none();
    if let Some(t) = &table {
        if let Some(path) = &c.csv {
            let f = std::fs::File::create(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
            t.write(f)?;
        } else if sweep_to_stdout {
            t.write(std::io::stdout().lock())?;
        }
    }
    if !sweep_to_stdout || c.out.is_some() {
        write_output(c.out.as_deref(), &text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // usage errors exit with 2, help and version with 0
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
