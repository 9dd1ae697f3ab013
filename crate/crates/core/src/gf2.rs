//! Dense linear algebra over GF(2) on packed rows.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<Vec<u64>>,
}

pub fn get_bit(row: &[u64], j: usize) -> bool {
    row[j / 64] >> (j % 64) & 1 == 1
}

pub fn set_bit(row: &mut [u64], j: usize, v: bool) {
    let m = 1u64 << (j % 64);
    if v {
        row[j / 64] |= m;
    } else {
        row[j / 64] &= !m;
    }
}

pub fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

impl BitMatrix {
    pub fn new(cols: usize) -> Self {
        BitMatrix { cols, rows: Vec::new() }
    }

    pub fn from_bool_rows(cols: usize, rows: &[Vec<bool>]) -> Self {
        let mut m = Self::new(cols);
        for r in rows {
            m.push_bools(r);
        }
        m
    }

    pub fn words(&self) -> usize {
        self.cols.div_ceil(64).max(1)
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i]
    }

    pub fn push_row(&mut self, mut row: Vec<u64>) {
        row.resize(self.words(), 0);
        self.rows.push(row);
    }

    pub fn push_bools(&mut self, bits: &[bool]) {
        assert_eq!(bits.len(), self.cols);
        let mut row = vec![0u64; self.words()];
        for (j, &b) in bits.iter().enumerate() {
            set_bit(&mut row, j, b);
        }
        self.rows.push(row);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        get_bit(&self.rows[i], j)
    }

    /// Reduced row echelon form in place; returns pivot columns in order.
    /// Zero rows are dropped.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| get_bit(&self.rows[i], c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot_row = self.rows[r].clone();
            for i in 0..self.rows.len() {
                if i != r && get_bit(&self.rows[i], c) {
                    xor_into(&mut self.rows[i], &pivot_row);
                }
            }
            pivots.push(c);
            r += 1;
        }
        self.rows.truncate(r);
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of `{v : M v = 0}` as packed column vectors of length `cols`.
    pub fn nullspace(&self) -> Vec<Vec<u64>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let words = self.words();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u64; words];
            set_bit(&mut v, free, true);
            for (i, &p) in pivots.iter().enumerate() {
                if get_bit(&m.rows[i], free) {
                    set_bit(&mut v, p, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `M v` for a packed column vector `v`.
    pub fn mul_vec(&self, v: &[u64]) -> Vec<bool> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(v).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1 == 1)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_nullspace() {
        let m = BitMatrix::from_bool_rows(
            4,
            &[
                vec![true, true, false, false],
                vec![false, true, true, false],
                vec![true, false, true, false],
            ],
        );
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(m.mul_vec(v).iter().all(|&b| !b));
        }
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        let rows: Vec<Vec<bool>> = (0..70).map(|i| (0..70).map(|j| i == j).collect()).collect();
        let m = BitMatrix::from_bool_rows(70, &rows);
        assert_eq!(m.rank(), 70);
        assert!(m.nullspace().is_empty());
    }
}
