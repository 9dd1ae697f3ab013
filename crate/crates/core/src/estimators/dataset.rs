//! Randomized-measurement datasets and their NDJSON form.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest register a dataset can hold (bitstrings are packed in a `u64`).
pub const MAX_DATASET_QUBITS: usize = 64;

/// Shots grouped by randomized setting. `bases[u][q]` is the index (0..24)
/// of the single-qubit Clifford applied to qubit `q` before readout.
#[derive(Clone, Debug, PartialEq)]
pub struct RandomizedMeasurementDataset {
    n_qubits: usize,
    bases: Vec<Vec<u8>>,
    /// Bit `q` of each word is qubit `q`'s outcome.
    shots: Vec<Vec<u64>>,
}

/// One NDJSON line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecord {
    pub setting_id: usize,
    pub bases: Vec<u8>,
    /// Qubit 0 first.
    pub bitstring: String,
}

impl RandomizedMeasurementDataset {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_DATASET_QUBITS {
            return Err(Error::InvalidArgument(format!("dataset needs 1..={MAX_DATASET_QUBITS} qubits")));
        }
        Ok(RandomizedMeasurementDataset { n_qubits, bases: Vec::new(), shots: Vec::new() })
    }

    pub fn push_setting(&mut self, bases: Vec<u8>, shots: Vec<u64>) -> Result<()> {
        if bases.len() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, got: bases.len() });
        }
        if let Some(&b) = bases.iter().find(|&&b| b as usize >= super::NUM_CLIFFORDS) {
            return Err(Error::InvalidArgument(format!("Clifford index {b} out of range")));
        }
        self.bases.push(bases);
        self.shots.push(shots);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Number of settings (N_U).
    pub fn n_settings(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self, setting: usize) -> &[u8] {
        &self.bases[setting]
    }

    pub fn shots(&self, setting: usize) -> &[u64] {
        &self.shots[setting]
    }

    /// Shots per setting (N_M) if uniform.
    pub fn shots_per_setting(&self) -> Option<usize> {
        let n = self.shots.first()?.len();
        self.shots.iter().all(|s| s.len() == n).then_some(n)
    }

    pub fn total_shots(&self) -> usize {
        self.shots.iter().map(Vec::len).sum()
    }

    pub fn write_ndjson<W: Write>(&self, mut w: W) -> Result<()> {
        for (u, shots) in self.shots.iter().enumerate() {
            for &s in shots {
                let rec = DatasetRecord {
                    setting_id: u,
                    bases: self.bases[u].clone(),
                    bitstring: (0..self.n_qubits).map(|q| if s >> q & 1 == 1 { '1' } else { '0' }).collect(),
                };
                writeln!(w, "{}", serde_json::to_string(&rec)?)?;
            }
        }
        Ok(())
    }

    /// Reads records; setting ids must be contiguous from 0, and every
    /// record of a setting must repeat its bases.
    pub fn read_ndjson<R: BufRead>(r: R) -> Result<Self> {
        let mut data: Option<Self> = None;
        for (i, line) in r.lines().enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let err = |message: String| Error::Parse { line: i + 1, message };
            let rec: DatasetRecord = serde_json::from_str(&line).map_err(|e| err(e.to_string()))?;
            let d = match &mut data {
                Some(d) => d,
                None => data.insert(Self::new(rec.bitstring.len()).map_err(|e| err(e.to_string()))?),
            };
            if rec.bitstring.len() != d.n_qubits {
                return Err(err(format!("bitstring has {} bits, expected {}", rec.bitstring.len(), d.n_qubits)));
            }
            let mut bits = 0u64;
            for (q, ch) in rec.bitstring.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits |= 1 << q,
                    other => return Err(err(format!("bad bit '{other}'"))),
                }
            }
            if rec.setting_id == d.n_settings() {
                d.push_setting(rec.bases, Vec::new()).map_err(|e| err(e.to_string()))?;
            } else if rec.setting_id + 1 != d.n_settings() {
                return Err(err(format!("setting {} out of order", rec.setting_id)));
            } else if d.bases[rec.setting_id] != rec.bases {
                return Err(err(format!("bases of setting {} changed", rec.setting_id)));
            }
            d.shots[rec.setting_id].push(bits);
        }
        data.ok_or_else(|| Error::InvalidArgument("empty dataset".into()))
    }

    /// Dataset restricted to a subset of settings (with repetition), for
    /// resampling.
    pub fn select(&self, settings: &[usize]) -> Self {
        RandomizedMeasurementDataset {
            n_qubits: self.n_qubits,
            bases: settings.iter().map(|&u| self.bases[u].clone()).collect(),
            shots: settings.iter().map(|&u| self.shots[u].clone()).collect(),
        }
    }
}
