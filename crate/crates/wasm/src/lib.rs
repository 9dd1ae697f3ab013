//! Browser bindings. Every export takes and returns JSON strings so the page
//! needs nothing beyond `JSON.parse`.

use serde::Serialize;
use topoff_core::dynamics::{run_braid_interferometry, DynamicsConfig, Move};
use topoff_core::experiment::{prepare_ground_state, PrepRunConfig};
use topoff_core::lattice::{LatticeDescription, PlaquetteKind};
use topoff_core::prep::PrepStrategy;
use topoff_core::{Lattice, LatticeKind, NoiseSpec, PauliOperator};
use wasm_bindgen::prelude::*;

/// Keeps a click from freezing the tab.
pub const MAX_SHOTS: usize = 20_000;

fn lattice(name: &str) -> Result<Lattice, String> {
    name.parse::<LatticeKind>().map(LatticeKind::build).map_err(|e| e.to_string())
}

/// `"none"` or a noise-model JSON object.
fn noise(spec: &str) -> Result<Option<NoiseSpec>, String> {
    match spec.trim() {
        "" | "none" => Ok(None),
        "h1-1" => Ok(Some(NoiseSpec::h1_1())),
        json => NoiseSpec::from_json(json).map(Some).map_err(|e| e.to_string()),
    }
}

fn check_shots(shots: usize) -> Result<(), String> {
    if shots == 0 || shots > MAX_SHOTS {
        return Err(format!("shots must be in 1..={MAX_SHOTS}"));
    }
    Ok(())
}

#[derive(Serialize)]
struct Geometry {
    #[serde(flatten)]
    description: LatticeDescription,
    plaquettes: Vec<PlaquetteView>,
}

#[derive(Serialize)]
struct PlaquetteView {
    label: usize,
    kind: PlaquetteKind,
    support: Vec<usize>,
}

pub fn geometry_json(name: &str) -> Result<String, String> {
    let l = lattice(name)?;
    let plaquettes = l
        .plaquettes()
        .iter()
        .map(|p| PlaquetteView { label: p.label, kind: p.kind, support: p.support() })
        .collect();
    serde_json::to_string(&Geometry { description: l.description(), plaquettes }).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct PrepSummary {
    energy_density: f64,
    std_err: f64,
    discard_fraction: f64,
    mean_x_plaquettes: f64,
    mean_z_plaquettes: f64,
    kept: usize,
    stabilizers: Vec<(usize, f64)>,
}

pub fn prepare_json(name: &str, noise_spec: &str, shots: usize, seed: u64) -> Result<String, String> {
    check_shots(shots)?;
    let l = lattice(name)?;
    let noise = noise(noise_spec)?;
    let r = prepare_ground_state(&l, &PrepStrategy::optimized(&l), noise.as_ref(), &PrepRunConfig::new(seed, shots))
        .map_err(|e| e.to_string())?
        .report;
    let summary = PrepSummary {
        energy_density: r.energy_density.mean,
        std_err: r.energy_density.std_err,
        discard_fraction: r.discard_fraction,
        mean_x_plaquettes: r.mean_x_plaquettes,
        mean_z_plaquettes: r.mean_z_plaquettes,
        kept: r.kept,
        stabilizers: r.stabilizers.iter().map(|(l, e)| (*l, e.mean)).collect(),
    };
    serde_json::to_string(&summary).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct Excitation {
    label: usize,
    /// `e` on X plaquettes, `m` on Z plaquettes, `defect` on twisted ones.
    anyon: &'static str,
}

#[derive(Serialize)]
struct Playground {
    moves: Vec<String>,
    excitations: Vec<Excitation>,
}

/// Applies space-separated moves such as `"X12 X13 Z6"` to the ground state
/// and lists the plaquettes that end up at −1.
pub fn anyons_json(name: &str, moves: &str) -> Result<String, String> {
    let l = lattice(name)?;
    let n = l.num_qubits();
    let moves: Vec<Move> = moves.split_whitespace().map(str::parse::<Move>).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let mut state = l.ground_state(n).map_err(|e| e.to_string())?;
    for m in &moves {
        let op = PauliOperator::single(n, m.qubit, m.pauli).map_err(|e| e.to_string())?;
        state.apply_pauli(&op).map_err(|e| e.to_string())?;
    }
    let signs = l.stabilizer_expectations(&state).map_err(|e| e.to_string())?;
    let excitations = signs
        .iter()
        .filter(|(_, &s)| s < 0)
        .map(|(&label, _)| {
            let anyon = match l.plaquette(label).map(|p| p.kind) {
                Some(PlaquetteKind::X) => "e",
                Some(PlaquetteKind::Z) => "m",
                _ => "defect",
            };
            Excitation { label, anyon }
        })
        .collect();
    let out = Playground { moves: moves.iter().map(|m| m.to_string()).collect(), excitations };
    serde_json::to_string(&out).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct BraidSummary {
    with_fermion: f64,
    with_fermion_err: f64,
    without_fermion: f64,
    without_fermion_err: f64,
    discard_fraction: f64,
}

pub fn braid_json(noise_spec: &str, shots: usize, seed: u64) -> Result<String, String> {
    check_shots(shots)?;
    let l = LatticeKind::Defect.build();
    let noise = noise(noise_spec)?;
    let strategy = PrepStrategy::optimized(&l);
    let cfg = DynamicsConfig::new(seed, shots);
    let run = |with| run_braid_interferometry(&l, &strategy, with, noise.as_ref(), &cfg).map_err(|e| e.to_string());
    let (with, without) = (run(true)?, run(false)?);
    let summary = BraidSummary {
        with_fermion: with.ancilla_z.mean,
        with_fermion_err: with.ancilla_z.std_err,
        without_fermion: without.ancilla_z.mean,
        without_fermion_err: without.ancilla_z.std_err,
        discard_fraction: with.discard_fraction,
    };
    serde_json::to_string(&summary).map_err(|e| e.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

/// Qubit coordinates and plaquette supports for drawing.
#[wasm_bindgen]
pub fn geometry(lattice: &str) -> Result<String, JsError> {
    js(geometry_json(lattice))
}

#[wasm_bindgen]
pub fn prepare(lattice: &str, noise: &str, shots: usize, seed: u64) -> Result<String, JsError> {
    js(prepare_json(lattice, noise, shots, seed))
}

#[wasm_bindgen]
pub fn anyons(lattice: &str, moves: &str) -> Result<String, JsError> {
    js(anyons_json(lattice, moves))
}

#[wasm_bindgen]
pub fn braid(noise: &str, shots: usize, seed: u64) -> Result<String, JsError> {
    js(braid_json(noise, shots, seed))
}
