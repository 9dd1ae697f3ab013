//! Plaquette geometry for the periodic Wen-plaquette toric code and its
//! single-dislocation variant.
//!
//! Qubits sit on the sites of a `rows × cols` grid, numbered row-major. The
//! plaquette labeled `q` has qubit `q` as its upper-left corner and covers
//! the 2×2 block to its lower right, with periodic wraparound. Plaquettes
//! with `r + c` odd are X-type, the others Z-type.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BitMatrix;
use crate::pauli::{Pauli, PauliOperator};
use crate::tableau::StabilizerTableau;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaquetteKind {
    X,
    Z,
    Defect,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Plaquette {
    pub label: usize,
    pub kind: PlaquetteKind,
    pub op: PauliOperator,
}

impl Plaquette {
    pub fn support(&self) -> Vec<usize> {
        self.op.support()
    }

    /// Whether the operator has an X or Y factor, i.e. is not diagonal in Z.
    pub fn has_x_part(&self) -> bool {
        self.op.x_words().iter().any(|&w| w != 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LatticeKind {
    #[serde(rename = "torus4x4")]
    Torus,
    #[serde(rename = "defect")]
    Defect,
}

impl LatticeKind {
    pub fn name(self) -> &'static str {
        match self {
            LatticeKind::Torus => "torus4x4",
            LatticeKind::Defect => "defect",
        }
    }

    pub fn build(self) -> Lattice {
        match self {
            LatticeKind::Torus => build_torus(4, 4).expect("4x4 is even"),
            LatticeKind::Defect => build_defect_lattice(),
        }
    }
}

impl std::str::FromStr for LatticeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus4x4" | "torus" => Ok(LatticeKind::Torus),
            "defect" => Ok(LatticeKind::Defect),
            other => Err(Error::InvalidArgument(format!("unknown lattice '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lattice {
    kind: LatticeKind,
    rows: usize,
    cols: usize,
    removed: Vec<(usize, usize)>,
    grid: Vec<Option<usize>>,
    coords: Vec<(usize, usize)>,
    plaquettes: Vec<Plaquette>,
    logicals: Vec<(String, PauliOperator)>,
}

impl Lattice {
    pub fn kind(&self) -> LatticeKind {
        self.kind
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_qubits(&self) -> usize {
        self.coords.len()
    }

    pub fn removed_sites(&self) -> &[(usize, usize)] {
        &self.removed
    }

    pub fn qubit_at(&self, r: usize, c: usize) -> Option<usize> {
        self.grid[(r % self.rows) * self.cols + c % self.cols]
    }

    pub fn coords(&self, q: usize) -> (usize, usize) {
        self.coords[q]
    }

    /// All stabilizers ordered by label.
    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    pub fn plaquette(&self, label: usize) -> Option<&Plaquette> {
        self.plaquettes.iter().find(|p| p.label == label)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.plaquettes.iter().map(|p| p.label).collect()
    }

    pub fn of_kind(&self, kind: PlaquetteKind) -> Vec<&Plaquette> {
        self.plaquettes.iter().filter(|p| p.kind == kind).collect()
    }

    pub fn x_plaquettes(&self) -> Vec<&Plaquette> {
        self.of_kind(PlaquetteKind::X)
    }

    pub fn z_plaquettes(&self) -> Vec<&Plaquette> {
        self.of_kind(PlaquetteKind::Z)
    }

    pub fn defect_plaquettes(&self) -> Vec<&Plaquette> {
        self.of_kind(PlaquetteKind::Defect)
    }

    /// Stabilizers that do not stabilize `|0…0⟩` and so must be measured
    /// during preparation: X-type plaquettes and defects.
    pub fn x_containing(&self) -> Vec<&Plaquette> {
        self.plaquettes.iter().filter(|p| p.has_x_part()).collect()
    }

    pub fn logicals(&self) -> &[(String, PauliOperator)] {
        &self.logicals
    }

    pub fn logical(&self, name: &str) -> Option<&PauliOperator> {
        self.logicals.iter().find(|(n, _)| n == name).map(|(_, p)| p)
    }

    /// Number of independent stabilizer generators.
    pub fn stabilizer_rank(&self) -> usize {
        let rows: Vec<Vec<bool>> = self.plaquettes.iter().map(|p| p.op.symplectic_bits()).collect();
        BitMatrix::from_bool_rows(2 * self.num_qubits(), &rows).rank()
    }

    /// First pair of non-commuting operators among stabilizers and
    /// logicals, if any.
    pub fn commutation_violation(&self) -> Option<(String, String)> {
        let named: Vec<(String, &PauliOperator)> = self
            .plaquettes
            .iter()
            .map(|p| (format!("p{}", p.label), &p.op))
            .chain(self.logicals.iter().map(|(n, p)| (n.clone(), p)))
            .collect();
        for i in 0..named.len() {
            for j in i + 1..named.len() {
                if !named[i].1.commutes(named[j].1) {
                    return Some((named[i].0.clone(), named[j].0.clone()));
                }
            }
        }
        None
    }

    /// Ground state in the sector where every stabilizer is +1 and every
    /// Z-string logical is +1, on an `n_total`-qubit register whose extra
    /// qubits are left in `|0⟩`.
    pub fn ground_state(&self, n_total: usize) -> Result<StabilizerTableau> {
        if n_total < self.num_qubits() {
            return Err(Error::SizeMismatch { expected: self.num_qubits(), got: n_total });
        }
        let mut state = StabilizerTableau::new(n_total)?;
        for p in self.x_containing() {
            state.measure_pauli_forced(&widen(&p.op, n_total), 1)?;
        }
        Ok(state)
    }

    /// Exact expectation of every stabilizer, by label.
    pub fn stabilizer_expectations(&self, state: &StabilizerTableau) -> Result<BTreeMap<usize, i8>> {
        let n = state.num_qubits();
        if n < self.num_qubits() {
            return Err(Error::SizeMismatch { expected: self.num_qubits(), got: n });
        }
        self.plaquettes.iter().map(|p| Ok((p.label, state.expect_pauli(&widen(&p.op, n))?))).collect()
    }

    /// Exact logical string expectations plus translation averages
    /// `Z_hori` and `Z_vert`.
    pub fn logical_expectations(&self, state: &StabilizerTableau) -> Result<BTreeMap<String, f64>> {
        if state.num_qubits() < self.num_qubits() {
            return Err(Error::SizeMismatch { expected: self.num_qubits(), got: state.num_qubits() });
        }
        let mut out = BTreeMap::new();
        let mut sums: BTreeMap<&str, (f64, usize)> = BTreeMap::new();
        for (name, op) in &self.logicals {
            let op = widen(op, state.num_qubits());
            let v = state.expect_pauli(&op)? as f64;
            out.insert(name.clone(), v);
            let family = if name.starts_with("Z_hori") { "Z_hori" } else { "Z_vert" };
            let e = sums.entry(family).or_insert((0.0, 0));
            e.0 += v;
            e.1 += 1;
        }
        for (family, (s, k)) in sums {
            out.insert(family.to_string(), s / k as f64);
        }
        Ok(out)
    }

    pub fn description(&self) -> LatticeDescription {
        let list = |kind| {
            self.of_kind(kind)
                .into_iter()
                .map(|p| PlaquetteEntry { label: p.label, pauli: p.op.to_support_string() })
                .collect()
        };
        LatticeDescription {
            name: self.kind.name().to_string(),
            rows: self.rows,
            cols: self.cols,
            num_qubits: self.num_qubits(),
            removed_sites: self.removed.clone(),
            qubit_coords: self.coords.clone(),
            x_plaquettes: list(PlaquetteKind::X),
            z_plaquettes: list(PlaquetteKind::Z),
            defect_plaquettes: list(PlaquetteKind::Defect),
            logicals: self.logicals.iter().map(|(n, p)| (n.clone(), p.to_support_string())).collect(),
        }
    }
}

/// Embeds an operator into a larger register (extra qubits get identity).
pub fn widen(op: &PauliOperator, n: usize) -> PauliOperator {
    if op.num_qubits() == n {
        return op.clone();
    }
    let factors: Vec<(usize, Pauli)> = op.support().into_iter().map(|q| (q, op.get(q))).collect();
    PauliOperator::from_sparse(n, &factors).expect("widening keeps indices in range").with_phase(op.phase())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaquetteEntry {
    pub label: usize,
    pub pauli: String,
}

/// JSON form of a lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LatticeDescription {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub num_qubits: usize,
    pub removed_sites: Vec<(usize, usize)>,
    pub qubit_coords: Vec<(usize, usize)>,
    pub x_plaquettes: Vec<PlaquetteEntry>,
    pub z_plaquettes: Vec<PlaquetteEntry>,
    pub defect_plaquettes: Vec<PlaquetteEntry>,
    pub logicals: BTreeMap<String, String>,
}

struct Grid {
    rows: usize,
    cols: usize,
    index: Vec<Option<usize>>,
    coords: Vec<(usize, usize)>,
}

impl Grid {
    fn new(rows: usize, cols: usize, removed: &[(usize, usize)]) -> Self {
        let mut index = vec![None; rows * cols];
        let mut coords = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if !removed.contains(&(r, c)) {
                    index[r * cols + c] = Some(coords.len());
                    coords.push((r, c));
                }
            }
        }
        Grid { rows, cols, index, coords }
    }

    fn at(&self, r: usize, c: usize) -> Option<usize> {
        self.index[(r % self.rows) * self.cols + c % self.cols]
    }

    /// The four corners of the plaquette anchored at `(r, c)`, in the order
    /// upper-left, upper-right, lower-left, lower-right.
    fn corners(&self, r: usize, c: usize) -> [Option<usize>; 4] {
        [self.at(r, c), self.at(r, c + 1), self.at(r + 1, c), self.at(r + 1, c + 1)]
    }

    fn row_string(&self, r: usize) -> Vec<usize> {
        (0..self.cols).filter_map(|c| self.at(r, c)).collect()
    }

    fn col_string(&self, c: usize) -> Vec<usize> {
        (0..self.rows).filter_map(|r| self.at(r, c)).collect()
    }
}

fn plaquette_type(r: usize, c: usize) -> PlaquetteKind {
    if (r + c) % 2 == 1 {
        PlaquetteKind::X
    } else {
        PlaquetteKind::Z
    }
}

fn letter(kind: PlaquetteKind) -> Pauli {
    if kind == PlaquetteKind::X {
        Pauli::X
    } else {
        Pauli::Z
    }
}

/// Z strings along every row and column that commute with all stabilizers.
fn z_logicals(grid: &Grid, plaquettes: &[Plaquette]) -> Vec<(String, PauliOperator)> {
    let n = grid.coords.len();
    let mut out = Vec::new();
    let mut push = |name: String, qubits: Vec<usize>| {
        let op = PauliOperator::uniform(n, &qubits, Pauli::Z).expect("grid indices in range");
        if plaquettes.iter().all(|p| p.op.commutes(&op)) {
            out.push((name, op));
        }
    };
    for r in 0..grid.rows {
        if grid.row_string(r).len() == grid.cols {
            push(format!("Z_hori_{r}"), grid.row_string(r));
        }
    }
    for c in 0..grid.cols {
        if grid.col_string(c).len() == grid.rows {
            push(format!("Z_vert_{c}"), grid.col_string(c));
        }
    }
    out
}

pub fn build_torus(rows: usize, cols: usize) -> Result<Lattice> {
    if rows % 2 == 1 || cols % 2 == 1 || rows == 0 || cols == 0 {
        return Err(Error::OddDimension { rows, cols });
    }
    let grid = Grid::new(rows, cols, &[]);
    let n = grid.coords.len();
    let mut plaquettes = Vec::with_capacity(n);
    for (label, &(r, c)) in grid.coords.iter().enumerate() {
        let kind = plaquette_type(r, c);
        let support: Vec<usize> = grid.corners(r, c).iter().map(|q| q.expect("no removed sites")).collect();
        plaquettes.push(Plaquette { label, kind, op: PauliOperator::uniform(n, &support, letter(kind))? });
    }
    let logicals = z_logicals(&grid, &plaquettes);
    Ok(Lattice {
        kind: LatticeKind::Torus,
        rows,
        cols,
        removed: Vec::new(),
        grid: grid.index,
        coords: grid.coords,
        plaquettes,
        logicals,
    })
}

/// Site removed from the 4×4 torus to create the dislocation.
pub const DEFECT_REMOVED_SITE: (usize, usize) = (2, 2);

/// The four broken plaquettes around the removed site merge pairwise along
/// columns into two defect stabilizers, labeled by the upper broken
/// plaquette: anchors (1,1)+(2,1) and (1,2)+(2,2).
const DEFECT_MERGES: [((usize, usize), (usize, usize)); 2] = [((1, 1), (2, 1)), ((1, 2), (2, 2))];

/// A lattice whose defect stabilizers are still unknown.
pub struct PartialLattice {
    pub num_qubits: usize,
    pub regular: Vec<Plaquette>,
    /// `(label, support)` for each defect stabilizer to solve for.
    pub defect_supports: Vec<(usize, Vec<usize>)>,
}

/// 15-qubit lattice: the 4×4 torus with one site removed.
pub fn build_defect_lattice() -> Lattice {
    let (rows, cols) = (4, 4);
    let removed = vec![DEFECT_REMOVED_SITE];
    let grid = Grid::new(rows, cols, &removed);
    let n = grid.coords.len();

    let broken: Vec<(usize, usize)> = DEFECT_MERGES.iter().flat_map(|&(a, b)| [a, b]).collect();
    let mut regular = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if broken.contains(&(r, c)) {
                continue;
            }
            let label = grid.at(r, c).expect("regular plaquette anchors exist");
            let kind = plaquette_type(r, c);
            let support: Vec<usize> = grid.corners(r, c).iter().map(|q| q.expect("intact plaquette")).collect();
            regular.push(Plaquette { label, kind, op: PauliOperator::uniform(n, &support, letter(kind)).unwrap() });
        }
    }
    let defect_supports = DEFECT_MERGES
        .iter()
        .map(|&(upper, lower)| {
            let label = grid.at(upper.0, upper.1).expect("upper anchor exists");
            let mut support: Vec<usize> =
                grid.corners(upper.0, upper.1).into_iter().chain(grid.corners(lower.0, lower.1)).flatten().collect();
            support.sort_unstable();
            support.dedup();
            (label, support)
        })
        .collect();
    let partial = PartialLattice { num_qubits: n, regular, defect_supports };
    let defects = derive_defect_stabilizers(&partial).expect("defect stabilizers exist for the fixed geometry");

    let mut plaquettes = partial.regular;
    for (label, op) in defects {
        plaquettes.push(Plaquette { label, kind: PlaquetteKind::Defect, op });
    }
    plaquettes.sort_by_key(|p| p.label);
    let logicals = z_logicals(&grid, &plaquettes);
    Lattice {
        kind: LatticeKind::Defect,
        rows,
        cols,
        removed,
        grid: grid.index,
        coords: grid.coords,
        plaquettes,
        logicals,
    }
}

fn lex_key(p: &PauliOperator) -> Vec<bool> {
    p.symplectic_bits()
}

/// Solves for the defect stabilizers: on each given support, the Paulis with
/// a nontrivial factor on every site that commute with all regular
/// stabilizers; then the lexicographically smallest mutually commuting
/// choice in `(x_bits, z_bits)` order.
pub fn derive_defect_stabilizers(partial: &PartialLattice) -> Result<Vec<(usize, PauliOperator)>> {
    let n = partial.num_qubits;
    let mut candidates: Vec<Vec<PauliOperator>> = Vec::new();
    for (label, support) in &partial.defect_supports {
        let k = support.len();
        // unknowns: x bits then z bits on the support
        let mut m = BitMatrix::new(2 * k);
        for p in &partial.regular {
            let row: Vec<bool> =
                support.iter().map(|&q| p.op.z_bit(q)).chain(support.iter().map(|&q| p.op.x_bit(q))).collect();
            m.push_bools(&row);
        }
        let basis = m.nullspace();
        if basis.len() > 20 {
            return Err(Error::NoSolution(format!("defect {label}: solution space too large")));
        }
        let mut sols = Vec::new();
        for combo in 1u64..1 << basis.len() {
            let mut v = vec![0u64; (2 * k).div_ceil(64)];
            for (i, b) in basis.iter().enumerate() {
                if combo >> i & 1 == 1 {
                    crate::gf2::xor_into(&mut v, b);
                }
            }
            let bit = |j: usize| crate::gf2::get_bit(&v, j);
            if (0..k).any(|j| !bit(j) && !bit(k + j)) {
                continue;
            }
            let factors: Vec<(usize, Pauli)> =
                support.iter().enumerate().map(|(j, &q)| (q, Pauli::from_bits(bit(j), bit(k + j)))).collect();
            sols.push(PauliOperator::from_sparse(n, &factors)?);
        }
        if sols.is_empty() {
            return Err(Error::NoSolution(format!("defect {label} has no full-support commuting operator")));
        }
        sols.sort_by_key(lex_key);
        candidates.push(sols);
    }
    let chosen = choose_commuting(&candidates, &mut Vec::new())
        .ok_or_else(|| Error::NoSolution("defect candidates do not mutually commute".into()))?;
    Ok(partial.defect_supports.iter().map(|(l, _)| *l).zip(chosen).collect())
}

/// Depth-first search through sorted candidate lists; the first complete
/// assignment found is the lexicographically smallest.
fn choose_commuting(cands: &[Vec<PauliOperator>], acc: &mut Vec<PauliOperator>) -> Option<Vec<PauliOperator>> {
    let i = acc.len();
    if i == cands.len() {
        return Some(acc.clone());
    }
    for c in &cands[i] {
        if acc.iter().all(|a| a.commutes(c)) {
            acc.push(c.clone());
            if let Some(done) = choose_commuting(cands, acc) {
                return Some(done);
            }
            acc.pop();
        }
    }
    None
}

/// Measurement settings for the defect lattice: each setting measures the
/// listed stabilizers simultaneously with one basis per qubit.
pub const DEFECT_SETTINGS: [&[usize]; 4] = [&[0, 2, 5, 7, 14], &[3, 5, 10, 11, 13], &[1, 3, 4, 6, 11], &[0, 6, 8, 12, 14]];

/// Expected sign of each stabilizer.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnyonConfig(pub BTreeMap<usize, i8>);

impl AnyonConfig {
    /// Vacuum: every stabilizer +1.
    pub fn vacuum(lattice: &Lattice) -> Self {
        AnyonConfig(lattice.labels().into_iter().map(|l| (l, 1)).collect())
    }

    /// Signs after applying `op` to the vacuum: stabilizers that
    /// anticommute with `op` flip.
    pub fn after(lattice: &Lattice, op: &PauliOperator) -> Self {
        AnyonConfig(
            lattice
                .plaquettes()
                .iter()
                .map(|p| (p.label, if widen(&p.op, op.num_qubits()).commutes(op) { 1 } else { -1 }))
                .collect(),
        )
    }

    pub fn sign(&self, label: usize) -> Option<i8> {
        self.0.get(&label).copied()
    }

    pub fn excited(&self) -> Vec<usize> {
        self.0.iter().filter(|(_, &s)| s < 0).map(|(&l, _)| l).collect()
    }

    pub fn validate(&self, lattice: &Lattice) -> Result<()> {
        for &l in self.0.keys() {
            if lattice.plaquette(l).is_none() {
                return Err(Error::InvalidArgument(format!("no plaquette labeled {l}")));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut v: Vec<usize>) -> Vec<usize> {
        v.sort_unstable();
        v
    }

    #[test]
    fn torus_plaquette_types() {
        let t = build_torus(4, 4).unwrap();
        let xs: Vec<usize> = t.x_plaquettes().iter().map(|p| p.label).collect();
        assert_eq!(xs, vec![1, 3, 4, 6, 9, 11, 12, 14]);
        assert_eq!(t.z_plaquettes().len(), 8);
        assert!(t.defect_plaquettes().is_empty());
    }

    #[test]
    fn torus_wraparound_support() {
        let t = build_torus(4, 4).unwrap();
        assert_eq!(t.plaquette(3).unwrap().support(), vec![0, 3, 4, 7]);
        assert_eq!(t.plaquette(15).unwrap().support(), vec![0, 3, 12, 15]);
        assert_eq!(t.plaquette(0).unwrap().support(), vec![0, 1, 4, 5]);
    }

    #[test]
    fn torus_coverage_and_commutation() {
        let t = build_torus(4, 4).unwrap();
        for q in 0..16 {
            for kind in [PlaquetteKind::X, PlaquetteKind::Z] {
                let k = t.of_kind(kind).iter().filter(|p| p.support().contains(&q)).count();
                assert_eq!(k, 2, "qubit {q} {kind:?}");
            }
        }
        assert_eq!(t.commutation_violation(), None);
        assert_eq!(t.stabilizer_rank(), 14);
        let prod_x = t.x_plaquettes().iter().fold(PauliOperator::identity(16), |a, p| &a * &p.op);
        assert!(prod_x.is_identity());
    }

    #[test]
    fn torus_logicals() {
        let t = build_torus(4, 4).unwrap();
        assert_eq!(t.logical("Z_hori_0").unwrap().to_support_string(), "ZZZZ@[0,1,2,3]");
        assert_eq!(t.logical("Z_vert_0").unwrap().to_support_string(), "ZZZZ@[0,4,8,12]");
        assert_eq!(t.logicals().len(), 8);
    }

    #[test]
    fn odd_torus_rejected() {
        assert_eq!(build_torus(3, 4).unwrap_err(), Error::OddDimension { rows: 3, cols: 4 });
    }

    #[test]
    fn defect_lattice_shape() {
        let d = build_defect_lattice();
        assert_eq!(d.num_qubits(), 15);
        assert_eq!(d.labels(), vec![0, 1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 14]);
        assert_eq!(d.commutation_violation(), None);
        assert_eq!(d.plaquette(5).unwrap().op.to_support_string(), "ZZYXX@[5,6,9,12,13]");
        assert_eq!(d.plaquette(6).unwrap().op.to_support_string(), "XXYZZ@[6,7,10,13,14]");
        assert_eq!(sorted(d.plaquette(7).unwrap().support()), vec![4, 7, 8, 10]);
        assert_eq!(d.plaquette(7).unwrap().kind, PlaquetteKind::Z);
        assert_eq!(d.qubit_at(2, 3), Some(10));
        assert_eq!(d.qubit_at(2, 2), None);
    }

    #[test]
    fn defect_settings_cover_every_label() {
        let d = build_defect_lattice();
        let mut count: BTreeMap<usize, usize> = BTreeMap::new();
        for s in DEFECT_SETTINGS {
            for &l in s {
                *count.entry(l).or_default() += 1;
            }
        }
        assert_eq!(count.keys().copied().collect::<Vec<_>>(), d.labels());
        let twice: Vec<usize> = count.iter().filter(|(_, &c)| c == 2).map(|(&l, _)| l).collect();
        assert_eq!(twice, vec![0, 3, 5, 6, 11, 14]);
    }

    #[test]
    fn anyon_config_after_pauli() {
        let t = build_torus(4, 4).unwrap();
        let z5 = PauliOperator::single(16, 5, Pauli::Z).unwrap();
        let cfg = AnyonConfig::after(&t, &z5);
        assert_eq!(cfg.excited(), vec![1, 4]);
        assert!(cfg.validate(&t).is_ok());
        assert!(AnyonConfig([(9, -1)].into_iter().collect()).validate(&build_defect_lattice()).is_err());
    }

    #[test]
    fn description_json() {
        let d = build_defect_lattice().description();
        let s = serde_json::to_string(&d).unwrap();
        let back: LatticeDescription = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert_eq!(d.defect_plaquettes.len(), 2);
        assert_eq!(d.removed_sites, vec![(2, 2)]);
    }
}
