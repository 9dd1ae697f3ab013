//! One function per subcommand. Each returns the JSON result plus an
//! optional plot-ready table.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};
use topoff_core::circuit::{compile_to_native, NativeGateCounts};
use topoff_core::dynamics::{
    run_braid_interferometry, run_qnd_trace, run_transmutation, DynamicsConfig, DynamicsScript,
};
use topoff_core::estimators::report::ShotRecord;
use topoff_core::estimators::spam::TransitionMatrix;
use topoff_core::estimators::{
    entropy_report, expectation_report, shadow_fidelity, EntropyReport, ExperimentReport, MeasurementPlan,
    RandomizedMeasurementDataset, ReportOptions,
};
use topoff_core::experiment::{collect_randomized, prepare_ground_state, PrepRunConfig, RandomizedConfig};
use topoff_core::noise::error_budget;
use topoff_core::prep::{PrepPlan, PrepStrategy};
use topoff_core::{Lattice, NoiseSpec};

use crate::config::{read_input, CliError, CliResult};

/// Columns and rows of a CSV table.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(headers: &[&'static str]) -> Self {
        Table { headers: headers.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(&self.headers)?;
        for r in &self.rows {
            out.write_record(r)?;
        }
        out.flush()?;
        Ok(())
    }
}

pub struct Output {
    pub result: Value,
    pub table: Option<Table>,
}

/// Shared inputs of the simulation commands.
pub struct Setup<'a> {
    pub lattice: &'a Lattice,
    pub strategy: &'a PrepStrategy,
    pub noise: Option<&'a NoiseSpec>,
    pub seed: u64,
    pub keep_all: bool,
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))
}

fn write_ndjson<T: Serialize>(path: &Path, items: impl IntoIterator<Item = T>) -> CliResult<()> {
    let mut w = create(path)?;
    for item in items {
        serde_json::to_writer(&mut w, &item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

fn stabilizer_rows(table: &mut Table, lead: &[String], lattice: &Lattice, report: &ExperimentReport) {
    for (label, e) in &report.stabilizers {
        let kind = lattice.plaquette(*label).map(|p| format!("{:?}", p.kind).to_lowercase()).unwrap_or_default();
        let mut row = lead.to_vec();
        row.extend([label.to_string(), kind, e.mean.to_string(), e.std_err.to_string(), e.n.to_string()]);
        table.push(row);
    }
}

pub fn prepare(s: &Setup, shots: usize, mitigate: bool, records: Option<&Path>) -> CliResult<Output> {
    let mut cfg = PrepRunConfig::new(s.seed, shots);
    cfg.keep_all = s.keep_all;
    cfg.mitigate = mitigate;
    let outcome = prepare_ground_state(s.lattice, s.strategy, s.noise, &cfg)?;
    if let Some(path) = records {
        write_ndjson(path, &outcome.records)?;
    }
    warn_negativity(&outcome.report);
    let mut table = Table::new(&["label", "kind", "mean", "std_err", "n"]);
    stabilizer_rows(&mut table, &[], s.lattice, &outcome.report);
    Ok(Output { result: serde_json::to_value(&outcome.report)?, table: Some(table) })
}

fn warn_negativity(report: &ExperimentReport) {
    if let Some(m) = report.mitigation_negativity.filter(|m| *m < 0.0) {
        eprintln!("warning: mitigated distributions carry negative mass down to {m:.3e}");
    }
}

/// Knobs shared by `entropy` and `tee`.
pub struct RandomizedRun<'a> {
    pub settings: usize,
    pub shots_per_setting: usize,
    pub bootstrap: usize,
    pub dataset: Option<&'a Path>,
    pub input: Option<&'a Path>,
}

fn randomized(s: &Setup, r: &RandomizedRun) -> CliResult<(EntropyReport, Value)> {
    let (data, stats) = match r.input {
        Some(path) => {
            let f = File::open(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            (RandomizedMeasurementDataset::read_ndjson(BufReader::new(f))?, None)
        }
        None => {
            let plan = PrepPlan::new(s.lattice, s.strategy)?;
            let cfg = RandomizedConfig {
                seed: s.seed,
                n_settings: r.settings,
                shots_per_setting: r.shots_per_setting,
                keep_all: s.keep_all,
            };
            let (data, stats) = collect_randomized(&plan, s.noise, &cfg)?;
            (data, Some(stats))
        }
    };
    if data.n_qubits() != s.lattice.num_qubits() {
        return Err(CliError::Config(format!(
            "dataset has {} qubits, lattice has {}",
            data.n_qubits(),
            s.lattice.num_qubits()
        )));
    }
    if let Some(path) = r.dataset {
        let mut w = create(path)?;
        data.write_ndjson(&mut w)?;
        w.flush()?;
    }
    let reference = s.lattice.ground_state(s.lattice.num_qubits())?;
    let report = entropy_report(&data, s.lattice, Some(&reference), r.bootstrap, s.seed)?;
    let fidelity = shadow_fidelity(&data, &reference)?;
    let extra = json!({
        "shadow_fidelity": fidelity,
        "preparations": stats.map(|st| json!({
            "attempts": st.attempts,
            "heralded": st.heralded,
            "discard_fraction": st.discard_fraction(),
        })),
    });
    Ok((report, extra))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn entropy(s: &Setup, r: &RandomizedRun) -> CliResult<Output> {
    let (report, extra) = randomized(s, r)?;
    let mut table = Table::new(&[
        "shape",
        "subsystem",
        "size",
        "purity",
        "purity_err",
        "purity_exact",
        "entropy",
        "entropy_err",
        "entropy_exact",
    ]);
    for shape in &report.shapes {
        let name = serde_json::to_value(shape.shape)?.as_str().unwrap_or_default().to_string();
        for sub in &shape.subsystems {
            table.push(vec![
                name.clone(),
                sub.name.clone(),
                sub.size.to_string(),
                sub.purity.to_string(),
                sub.purity_err.to_string(),
                opt(sub.purity_exact),
                sub.entropy.to_string(),
                sub.entropy_err.to_string(),
                opt(sub.entropy_exact),
            ]);
        }
    }
    let mut result = serde_json::to_value(&report)?;
    merge(&mut result, extra);
    Ok(Output { result, table: Some(table) })
}

pub fn tee(s: &Setup, r: &RandomizedRun) -> CliResult<Output> {
    let (report, extra) = randomized(s, r)?;
    let ln2 = std::f64::consts::LN_2;
    let mut table = Table::new(&["shape", "region", "gamma", "gamma_over_ln2"]);
    let mut shapes = Vec::new();
    for shape in &report.shapes {
        let name = serde_json::to_value(shape.shape)?.as_str().unwrap_or_default().to_string();
        table.push(vec![name.clone(), "pooled".into(), shape.gamma.to_string(), (shape.gamma / ln2).to_string()]);
        for region in &shape.regions {
            table.push(vec![
                name.clone(),
                region.region.clone(),
                region.gamma.to_string(),
                (region.gamma / ln2).to_string(),
            ]);
        }
        shapes.push(json!({
            "shape": shape.shape,
            "partitions": shape.partitions,
            "gamma": shape.gamma,
            "gamma_err": shape.gamma_err,
            "gamma_over_ln2": shape.gamma / ln2,
            "gamma_region_mean": shape.gamma_region_mean,
            "gamma_region_mean_err": shape.gamma_region_mean_err,
            "gamma_exact": shape.gamma_exact,
        }));
    }
    let mut result = json!({
        "n_qubits": report.n_qubits,
        "n_settings": report.n_settings,
        "shots_per_setting": report.shots_per_setting,
        "bootstrap_resamples": report.bootstrap_resamples,
        "shapes": shapes,
    });
    merge(&mut result, extra);
    Ok(Output { result, table: Some(table) })
}

fn merge(into: &mut Value, extra: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, extra) {
        a.extend(b);
    }
}

pub fn transmute(s: &Setup, script: &DynamicsScript, shots_per_setting: usize) -> CliResult<Output> {
    let mut cfg = DynamicsConfig::new(s.seed, shots_per_setting);
    cfg.keep_all = s.keep_all;
    let steps = run_transmutation(s.lattice, s.strategy, s.noise, script, &cfg)?;
    let mut table = Table::new(&["step", "moves", "label", "kind", "mean", "std_err", "n", "expected"]);
    for (k, step) in steps.iter().enumerate() {
        let lead = [k.to_string(), step.moves.join(" ")];
        let before = table.rows.len();
        stabilizer_rows(&mut table, &lead, s.lattice, &step.report);
        for row in &mut table.rows[before..] {
            let label: usize = row[2].parse().unwrap_or(usize::MAX);
            row.push(step.expected.sign(label).map(|v| v.to_string()).unwrap_or_default());
        }
    }
    Ok(Output { result: json!({ "steps": steps }), table: Some(table) })
}

pub fn qnd(s: &Setup, script: &DynamicsScript, shots: usize, trace_path: Option<&Path>) -> CliResult<Output> {
    let trace = run_qnd_trace(s.lattice, s.strategy, s.noise, script, s.seed, shots)?;
    if let Some(path) = trace_path {
        write_ndjson(path, &trace.records)?;
    }
    let mut table = Table::new(&["checkpoint", "label", "expected", "mean", "std_err", "n"]);
    for (k, (means, expected)) in trace.means.iter().zip(&trace.expected).enumerate() {
        for (label, e) in means {
            table.push(vec![
                k.to_string(),
                label.to_string(),
                expected.get(label).map(|v| v.to_string()).unwrap_or_default(),
                e.mean.to_string(),
                e.std_err.to_string(),
                e.n.to_string(),
            ]);
        }
    }
    let mut result = serde_json::to_value(&trace)?;
    if let Value::Object(m) = &mut result {
        m.remove("records");
    }
    Ok(Output { result, table: Some(table) })
}

pub fn braid(s: &Setup, shots: usize, choices: &[bool]) -> CliResult<Output> {
    let mut cfg = DynamicsConfig::new(s.seed, shots);
    cfg.keep_all = s.keep_all;
    let mut table = Table::new(&["with_fermion", "ancilla_z", "std_err", "n", "shots", "discard_fraction"]);
    let mut results = Vec::new();
    for &with in choices {
        let r = run_braid_interferometry(s.lattice, s.strategy, with, s.noise, &cfg)?;
        table.push(vec![
            with.to_string(),
            r.ancilla_z.mean.to_string(),
            r.ancilla_z.std_err.to_string(),
            r.ancilla_z.n.to_string(),
            r.shots.to_string(),
            r.discard_fraction.to_string(),
        ]);
        results.push(r);
    }
    Ok(Output { result: json!({ "runs": results }), table: Some(table) })
}

/// Explicit counts; any missing one is taken from the compiled preparation
/// circuit of the chosen lattice and strategy.
pub struct BudgetArgs {
    pub n2q: Option<usize>,
    pub n1q: Option<usize>,
    pub depth: Option<usize>,
    pub qubits: Option<usize>,
    pub spam_events: Option<usize>,
}

pub fn budget(lattice: &Lattice, strategy: &PrepStrategy, noise: &NoiseSpec, a: &BudgetArgs) -> CliResult<Output> {
    let needs_plan =
        a.n2q.is_none() || a.n1q.is_none() || a.depth.is_none() || a.qubits.is_none() || a.spam_events.is_none();
    let mut counts = NativeGateCounts::default();
    let mut qubits = 0;
    let mut spam_events = 0;
    if needs_plan {
        let plan = PrepPlan::new(lattice, strategy)?;
        counts = compile_to_native(&plan.circuit)?.1;
        qubits = plan.n_qubits();
        spam_events = plan.circuit.count_measurements() + plan.n_data();
    }
    counts.n_2q = a.n2q.unwrap_or(counts.n_2q);
    counts.n_1q = a.n1q.unwrap_or(counts.n_1q);
    counts.depth = a.depth.unwrap_or(counts.depth);
    let qubits = a.qubits.unwrap_or(qubits);
    let spam_events = a.spam_events.unwrap_or(spam_events);
    let value = error_budget(&counts, qubits, spam_events, noise);
    Ok(Output {
        result: json!({
            "budget": value,
            "n_2q": counts.n_2q,
            "n_1q": counts.n_1q,
            "depth": counts.depth,
            "qubits": qubits,
            "spam_events": spam_events,
        }),
        table: None,
    })
}

pub fn sweep(s: &Setup, base: &NoiseSpec, field: &str, values: &[f64], shots: usize) -> CliResult<Output> {
    let mut table = Table::new(&[
        "field",
        "value",
        "energy_density",
        "std_err",
        "discard_fraction",
        "mean_x_plaquettes",
        "mean_z_plaquettes",
    ]);
    let mut points = Vec::new();
    for &v in values {
        let noise = base.with_field(field, v)?;
        let mut cfg = PrepRunConfig::new(s.seed, shots);
        cfg.keep_all = s.keep_all;
        let r = prepare_ground_state(s.lattice, s.strategy, Some(&noise), &cfg)?.report;
        table.push(vec![
            field.to_string(),
            v.to_string(),
            r.energy_density.mean.to_string(),
            r.energy_density.std_err.to_string(),
            r.discard_fraction.to_string(),
            r.mean_x_plaquettes.to_string(),
            r.mean_z_plaquettes.to_string(),
        ]);
        points.push(json!({
            "value": v,
            "energy_density": r.energy_density,
            "discard_fraction": r.discard_fraction,
            "mean_x_plaquettes": r.mean_x_plaquettes,
            "mean_z_plaquettes": r.mean_z_plaquettes,
        }));
    }
    Ok(Output { result: json!({ "field": field, "points": points }), table: Some(table) })
}

fn summary(r: &ExperimentReport) -> Value {
    json!({
        "energy_density": r.energy_density,
        "mean_x_plaquettes": r.mean_x_plaquettes,
        "mean_z_plaquettes": r.mean_z_plaquettes,
        "kept": r.kept,
    })
}

fn read_records(path: &Path) -> CliResult<Vec<ShotRecord>> {
    let text = read_input(path)?;
    let reader = BufReader::new(text.as_bytes());
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| CliError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}

/// Raw vs mitigated estimates. Without a records file the preparation is
/// simulated, and a run with the same random streams but no final readout
/// errors is added as the reference the mitigation aims at.
pub fn mitigate(s: &Setup, records: Option<&Path>, shots: usize) -> CliResult<Output> {
    let noise = s.noise.ok_or_else(|| CliError::Config("mitigate needs a noise model with readout errors".into()))?;
    let matrix = TransitionMatrix::from_spam(&noise.spam);
    let plan = MeasurementPlan::for_lattice(s.lattice)?;
    let (recs, reference) = match records {
        Some(path) => (read_records(path)?, None),
        None => {
            let mut cfg = PrepRunConfig::new(s.seed, shots);
            cfg.keep_all = s.keep_all;
            let recs = prepare_ground_state(s.lattice, s.strategy, Some(noise), &cfg)?.records;
            cfg.final_readout_errors = false;
            let clean = prepare_ground_state(s.lattice, s.strategy, Some(noise), &cfg)?.report;
            (recs, Some(clean))
        }
    };
    if let Some(bad) = recs.iter().find(|r| r.setting >= plan.settings.len()) {
        return Err(CliError::Config(format!("record has setting {} outside the lattice plan", bad.setting)));
    }
    let raw = expectation_report(&recs, &plan, s.lattice, &ReportOptions { keep_all: s.keep_all, mitigation: None })?;
    let mitigated =
        expectation_report(&recs, &plan, s.lattice, &ReportOptions { keep_all: s.keep_all, mitigation: Some(matrix) })?;
    warn_negativity(&mitigated);
    let mut table = Table::new(&["estimate", "label", "kind", "mean", "std_err", "n"]);
    stabilizer_rows(&mut table, &["raw".into()], s.lattice, &raw);
    stabilizer_rows(&mut table, &["mitigated".into()], s.lattice, &mitigated);
    if let Some(r) = &reference {
        stabilizer_rows(&mut table, &["no_readout_error".into()], s.lattice, r);
    }
    let result = json!({
        "records": recs.len(),
        "raw": summary(&raw),
        "mitigated": summary(&mitigated),
        "mitigation_negativity": mitigated.mitigation_negativity,
        "improvement": raw.energy_density.mean - mitigated.energy_density.mean,
        "no_readout_error": reference.as_ref().map(summary),
    });
    Ok(Output { result, table: Some(table) })
}
