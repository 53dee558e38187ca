//! Birkhoff–von Neumann decomposition by constructive peeling.
//!
//! Each round finds a perfect matching on the positive support of the
//! residual, removes the smallest matched entry times that permutation, and
//! zeroes at least one entry. Every round therefore drops the residual onto a
//! strictly smaller face of the Birkhoff polytope, which caps the number of
//! terms at `(n-1)^2 + 1`.

use alloc::vec::Vec;

use super::matching::perfect_matching;
use super::matrix::{BistochasticMatrix, Permutation};
use crate::{Error, Result};

/// Entries below this value are treated as zero while matching.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

/// Residual row mass that may be left over when no further matching exists.
const RESIDUAL_MASS_TOLERANCE: f64 = 1e-9;

/// Tolerance on `Σ W_β = 1` for user-supplied terms.
pub const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTerm {
    pub weight: f64,
    pub permutation: Permutation,
}

/// `M = Σ_β W_β Π_β` with positive weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct BirkhoffDecomposition {
    order: usize,
    terms: Vec<DecompositionTerm>,
}

/// Upper bound `n² − 2n + 2` on the number of terms.
pub fn max_terms(n: usize) -> usize {
    if n == 0 {
        0
    } else {
        (n - 1) * (n - 1) + 1
    }
}

impl BirkhoffDecomposition {
    /// Accepts architect weights and permutations supplied directly.
    pub fn from_terms(terms: Vec<DecompositionTerm>) -> Result<Self> {
        let order = terms.first().ok_or(Error::EmptySelection)?.permutation.order();
        for t in &terms {
            if t.permutation.order() != order {
                return Err(Error::DimensionMismatch {
                    expected: order,
                    found: t.permutation.order(),
                });
            }
            if !(t.weight > 0.0 && t.weight <= 1.0 + WEIGHT_SUM_TOLERANCE) {
                return Err(Error::Domain("term weights must lie in (0, 1]"));
            }
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOLERANCE {
            return Err(Error::Domain("term weights must sum to 1"));
        }
        Ok(Self { order, terms })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &[DecompositionTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> f64 {
        self.terms.iter().map(|t| t.weight).sum()
    }

    /// `Σ W_β Π_β` in row-major order.
    pub fn reconstruct(&self) -> Vec<f64> {
        let n = self.order;
        let mut out = alloc::vec![0.0; n * n];
        for t in &self.terms {
            for (i, &j) in t.permutation.mapping().iter().enumerate() {
                out[i * n + j] += t.weight;
            }
        }
        out
    }

    /// `‖M − Σ W_β Π_β‖_∞` entry-wise.
    pub fn reconstruction_error(&self, m: &BistochasticMatrix) -> f64 {
        self.reconstruct()
            .iter()
            .zip(m.entries())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Decomposes `m` into a convex combination of permutation matrices.
///
/// The result is deterministic: matchings are searched row by row with the
/// smallest admissible column first.
pub fn birkhoff_decompose(m: &BistochasticMatrix) -> Result<BirkhoffDecomposition> {
    let n = m.order();
    let mut residual: Vec<f64> = m
        .entries()
        .iter()
        .map(|&v| if v < SUPPORT_TOLERANCE { 0.0 } else { v })
        .collect();
    let mut terms = Vec::new();

    while residual.iter().any(|&v| v > 0.0) {
        let Some(assignment) = perfect_matching(n, |i, j| residual[i * n + j] > 0.0) else {
            let mass = residual.chunks(n).map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
            if mass <= RESIDUAL_MASS_TOLERANCE {
                break;
            }
            return Err(Error::MatchingFailure { terms: terms.len() });
        };
        let weight = assignment
            .iter()
            .enumerate()
            .map(|(i, &j)| residual[i * n + j])
            .fold(f64::INFINITY, f64::min);
        for (i, &j) in assignment.iter().enumerate() {
            let cell = &mut residual[i * n + j];
            *cell -= weight;
            if *cell < SUPPORT_TOLERANCE {
                *cell = 0.0;
            }
        }
        terms.push(DecompositionTerm {
            weight,
            permutation: Permutation::from_mapping(assignment)?,
        });
    }

    let total: f64 = terms.iter().map(|t| t.weight).sum();
    if !(total > 0.0) {
        return Err(Error::MatchingFailure { terms: 0 });
    }
    for t in &mut terms {
        t.weight /= total;
    }
    Ok(BirkhoffDecomposition { order: n, terms })
}
