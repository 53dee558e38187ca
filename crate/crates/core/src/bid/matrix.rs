use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Default tolerance on row and column sums.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Square matrix with non-negative entries and unit row and column sums,
/// stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct BistochasticMatrix {
    n: usize,
    entries: Vec<f64>,
}

/// Validates `rows` as a doubly stochastic matrix.
///
/// Violations are reported for the first offending entry, row, then column.
pub fn validate_bistochastic(rows: &[Vec<f64>], tol: f64) -> Result<BistochasticMatrix> {
    let n = rows.len();
    if n == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let mut entries = Vec::with_capacity(n * n);
    for (r, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::NotSquare {
                rows: n,
                row: r,
                len: row.len(),
            });
        }
        entries.extend_from_slice(row);
    }
    BistochasticMatrix::from_row_major(n, entries, tol)
}

impl BistochasticMatrix {
    pub fn from_row_major(n: usize, entries: Vec<f64>, tol: f64) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        for (k, &v) in entries.iter().enumerate() {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::NegativeEntry {
                    row: k / n,
                    col: k % n,
                    value: v,
                });
            }
        }
        for row in 0..n {
            let sum: f64 = entries[row * n..(row + 1) * n].iter().sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::RowSumViolation { row, sum });
            }
        }
        for col in 0..n {
            let sum: f64 = (0..n).map(|row| entries[row * n + col]).sum();
            if (sum - 1.0).abs() > tol {
                return Err(Error::ColSumViolation { col, sum });
            }
        }
        Ok(Self { n, entries })
    }

    pub fn identity(n: usize) -> Self {
        Permutation::identity(n).to_bistochastic()
    }

    /// The matrix with every entry `1/n`.
    pub fn uniform(n: usize) -> Self {
        Self {
            n,
            entries: vec![1.0 / n as f64; n * n],
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(|r| r.to_vec()).collect()
    }
}

/// A permutation matrix, held as the column of the single 1 in each row.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    mapping: Vec<usize>,
}

impl Permutation {
    pub fn from_mapping(mapping: Vec<usize>) -> Result<Self> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &j in &mapping {
            if j >= n || seen[j] {
                return Err(Error::NotAPermutation);
            }
            seen[j] = true;
        }
        Ok(Self { mapping })
    }

    /// Reads a 0/1 matrix with exactly one 1 per row and column.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut mapping = Vec::with_capacity(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            let ones: Vec<usize> = (0..n).filter(|&j| row[j] == 1.0).collect();
            if ones.len() != 1 || row.iter().any(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::NotAPermutation);
            }
            mapping.push(ones[0]);
        }
        Self::from_mapping(mapping)
    }

    pub fn identity(n: usize) -> Self {
        Self {
            mapping: (0..n).collect(),
        }
    }

    /// The anti-diagonal permutation `i → n-1-i`.
    pub fn reversal(n: usize) -> Self {
        Self {
            mapping: (0..n).rev().collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.mapping.len()
    }

    /// Column holding the 1 of `row`.
    pub fn image(&self, row: usize) -> usize {
        self.mapping[row]
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.order()];
        for (i, &j) in self.mapping.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { mapping: inv }
    }

    pub fn is_set(&self, row: usize, col: usize) -> bool {
        self.mapping[row] == col
    }

    /// Disjoint cycles, each starting from its smallest index, ordered by
    /// that index. Fixed points appear as one-element cycles.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut visited = vec![false; n];
        let mut cycles = Vec::new();
        for start in 0..n {
            if visited[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut i = start;
            while !visited[i] {
                visited[i] = true;
                cycle.push(i);
                i = self.mapping[i];
            }
            cycles.push(cycle);
        }
        cycles
    }

    pub fn to_bistochastic(&self) -> BistochasticMatrix {
        let n = self.order();
        let mut entries = vec![0.0; n * n];
        for (i, &j) in self.mapping.iter().enumerate() {
            entries[i * n + j] = 1.0;
        }
        BistochasticMatrix { n, entries }
    }

    pub fn to_support(&self) -> SupportMatrix {
        let mut support = SupportMatrix::zeros(self.order());
        for (i, &j) in self.mapping.iter().enumerate() {
            support.set(i, j);
        }
        support
    }
}

/// Disjoint-cycle decomposition of a permutation matrix.
pub fn cycles_of(p: &Permutation) -> Vec<Vec<usize>> {
    p.cycles()
}

/// A square 0/1 matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupportMatrix {
    n: usize,
    cells: Vec<bool>,
}

impl SupportMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            cells: vec![false; n * n],
        }
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::NotSquare {
                    rows: n,
                    row: r,
                    len: row.len(),
                });
            }
            for (c, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(r, c),
                    _ => return Err(Error::Domain("support entries must be 0 or 1")),
                }
            }
        }
        Ok(m)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cells[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize) {
        self.cells[row * self.n + col] = true;
    }

    pub fn ones(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Entry-wise logical OR.
    pub fn union_with(&mut self, other: &SupportMatrix) -> Result<()> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        for (a, &b) in self.cells.iter_mut().zip(&other.cells) {
            *a |= b;
        }
        Ok(())
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        self.cells
            .chunks(self.n)
            .map(|r| r.iter().map(|&c| c as u8).collect())
            .collect()
    }
}
