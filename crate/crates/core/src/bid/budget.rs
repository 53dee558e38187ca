//! Costing and information operators, ROM bounds, architect budgets and the
//! selection thresholds derived from them.

use alloc::vec::Vec;

use super::birkhoff::BirkhoffDecomposition;
use super::matrix::{BistochasticMatrix, Permutation, SupportMatrix};
use crate::{Error, Result};

const FEASIBILITY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// Costing operator `E`.
    Cost,
    /// Information operator `I`.
    Information,
}

/// A diagonal operator, kept as its list of eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct DiagOperator {
    pub kind: OperatorKind,
    values: Vec<f64>,
}

impl DiagOperator {
    /// Bid-stage operator: every eigenvalue must be positive.
    pub fn new(kind: OperatorKind, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::DimensionMismatch { expected: 1, found: 0 });
        }
        if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
            return Err(Error::NonPositiveOperator { index, value });
        }
        Ok(Self { kind, values })
    }

    pub fn cost(values: Vec<f64>) -> Result<Self> {
        Self::new(OperatorKind::Cost, values)
    }

    pub fn information(values: Vec<f64>) -> Result<Self> {
        Self::new(OperatorKind::Information, values)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn trace(&self) -> f64 {
        self.values.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

fn same_len(e: &DiagOperator, i: &DiagOperator) -> Result<usize> {
    if e.len() != i.len() {
        return Err(Error::DimensionMismatch {
            expected: e.len(),
            found: i.len(),
        });
    }
    Ok(e.len())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RomBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Rough order of magnitude `I_θ Tr(E) ≤ ROM ≤ E_p Tr(I)`.
///
/// `best_knowledge` is `I_θ`, `professionalism` is `E_p`. When the expectation
/// matrix is given, the per-row and per-column feasibility conditions are
/// checked against it as well.
pub fn rom_bounds(
    e: &DiagOperator,
    i: &DiagOperator,
    best_knowledge: f64,
    professionalism: f64,
    expectation: Option<&BistochasticMatrix>,
) -> Result<RomBounds> {
    let n = same_len(e, i)?;
    if best_knowledge > i.trace() {
        return Err(Error::AdmissibilityViolation("best knowledge exceeds Tr(I)"));
    }
    if e.trace() > professionalism {
        return Err(Error::AdmissibilityViolation("Tr(E) exceeds professionalism level"));
    }
    if let Some(m) = expectation {
        if m.order() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.order(),
            });
        }
        let (ev, iv) = (e.values(), i.values());
        for row in 0..n {
            let informed: f64 = (0..n).map(|col| m.get(row, col) * iv[col]).sum();
            if informed < best_knowledge * (1.0 - FEASIBILITY_TOLERANCE) {
                return Err(Error::AdmissibilityViolation(
                    "a row falls below the best-knowledge level",
                ));
            }
        }
        for col in 0..n {
            let costed: f64 = (0..n).map(|row| ev[row] * m.get(row, col)).sum();
            if costed > professionalism * (1.0 + FEASIBILITY_TOLERANCE) {
                return Err(Error::AdmissibilityViolation(
                    "a column exceeds the professionalism level",
                ));
            }
        }
    }
    Ok(RomBounds {
        lower: best_knowledge * e.trace(),
        upper: professionalism * i.trace(),
    })
}

fn check_order(e: &DiagOperator, i: &DiagOperator, p: &Permutation) -> Result<usize> {
    let n = same_len(e, i)?;
    if p.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.order(),
        });
    }
    Ok(n)
}

/// Budget of one architect, `b_β = Σ_i E_i I_{P(i)}`.
pub fn architect_budget(e: &DiagOperator, i: &DiagOperator, p: &Permutation) -> Result<f64> {
    check_order(e, i, p)?;
    Ok(e.values()
        .iter()
        .enumerate()
        .map(|(row, ev)| ev * i.values()[p.image(row)])
        .sum())
}

/// Per-architect bounds taken from the smallest and largest permuted product
/// `E_i I_{P(i)}`, scaled by the order.
pub fn term_bounds(e: &DiagOperator, i: &DiagOperator, p: &Permutation) -> Result<(f64, f64)> {
    let n = check_order(e, i, p)?;
    let products = e
        .values()
        .iter()
        .enumerate()
        .map(|(row, ev)| ev * i.values()[p.image(row)]);
    let (lo, hi) = products.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    Ok((n as f64 * lo, n as f64 * hi))
}

fn ascending_order(values: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    idx
}

/// The permutations attaining the rearrangement bounds: `(anti-sorted,
/// sorted)`, i.e. the pairings that minimize and maximize `Σ E_i I_{P(i)}`.
pub fn rearrangement_extremes(e: &DiagOperator, i: &DiagOperator) -> Result<(Permutation, Permutation)> {
    let n = same_len(e, i)?;
    let e_rank = ascending_order(e.values());
    let i_rank = ascending_order(i.values());
    let mut similar = alloc::vec![0; n];
    let mut opposite = alloc::vec![0; n];
    for k in 0..n {
        similar[e_rank[k]] = i_rank[k];
        opposite[e_rank[k]] = i_rank[n - 1 - k];
    }
    Ok((
        Permutation::from_mapping(opposite)?,
        Permutation::from_mapping(similar)?,
    ))
}

/// Bounds from the rearrangement inequality: `b⁻` pairs oppositely sorted
/// eigenvalues, `b⁺` similarly sorted ones.
pub fn budget_bounds(e: &DiagOperator, i: &DiagOperator) -> Result<(f64, f64)> {
    same_len(e, i)?;
    let mut es = e.values().to_vec();
    let mut is = i.values().to_vec();
    es.sort_by(f64::total_cmp);
    is.sort_by(f64::total_cmp);
    let plus = es.iter().zip(&is).map(|(a, b)| a * b).sum();
    let minus = es.iter().zip(is.iter().rev()).map(|(a, b)| a * b).sum();
    Ok((minus, plus))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolutionClass {
    /// `W_β > W⁺`.
    Excellent,
    /// `W⁺ ≥ W_β ≥ W⁻`.
    Attractive,
    /// `W_β < W⁻`.
    Unsatisfactory,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TermAssessment {
    pub weight: f64,
    pub budget: f64,
    pub lower: f64,
    pub upper: f64,
    pub class: SolutionClass,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelectionReport {
    pub terms: Vec<TermAssessment>,
    pub w_plus: f64,
    pub w_minus: f64,
    pub w_mean: f64,
    /// `W⁺ < W⁻`.
    pub pathology: bool,
}

fn weighted_mean(weights: &[f64], budgets: &[f64]) -> f64 {
    let num: f64 = weights.iter().zip(budgets).map(|(w, b)| w * b).sum();
    num / budgets.iter().sum::<f64>()
}

/// Thresholds and classes from explicit weights, budgets and bounds.
pub fn assess(weights: &[f64], budgets: &[f64], lower: &[f64], upper: &[f64]) -> Result<SelectionReport> {
    let n = weights.len();
    if n == 0 {
        return Err(Error::EmptySelection);
    }
    for len in [budgets.len(), lower.len(), upper.len()] {
        if len != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: len,
            });
        }
    }
    for k in 0..n {
        if !(lower[k] <= budgets[k] && budgets[k] <= upper[k]) {
            return Err(Error::Domain("every budget must lie within its bounds"));
        }
        if !(lower[k] > 0.0) {
            return Err(Error::Domain("budgets must be positive at bid stage"));
        }
    }
    let w_plus = weighted_mean(weights, upper);
    let w_minus = weighted_mean(weights, lower);
    let w_mean = weighted_mean(weights, budgets);
    let terms = (0..n)
        .map(|k| {
            let w = weights[k];
            let class = if w > w_plus {
                SolutionClass::Excellent
            } else if w < w_minus {
                SolutionClass::Unsatisfactory
            } else {
                SolutionClass::Attractive
            };
            TermAssessment {
                weight: w,
                budget: budgets[k],
                lower: lower[k],
                upper: upper[k],
                class,
            }
        })
        .collect();
    Ok(SelectionReport {
        terms,
        w_plus,
        w_minus,
        w_mean,
        pathology: w_plus < w_minus,
    })
}

/// Budgets, bounds, thresholds and classes for every term of a decomposition.
pub fn selection_report(
    decomposition: &BirkhoffDecomposition,
    e: &DiagOperator,
    i: &DiagOperator,
) -> Result<SelectionReport> {
    let mut weights = Vec::new();
    let mut budgets = Vec::new();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    for t in decomposition.terms() {
        let (lo, hi) = term_bounds(e, i, &t.permutation)?;
        weights.push(t.weight);
        budgets.push(architect_budget(e, i, &t.permutation)?);
        lower.push(lo);
        upper.push(hi);
    }
    assess(&weights, &budgets, &lower, &upper)
}

/// Solution matrix `M_B`: the logical OR of the selected permutations.
pub fn superpose(selected: &[Permutation]) -> Result<SupportMatrix> {
    let first = selected.first().ok_or(Error::EmptySelection)?;
    let mut out = first.to_support();
    for p in &selected[1..] {
        out.union_with(&p.to_support())?;
    }
    Ok(out)
}

/// Expected relations `ω_{i,j} ≠ 0` that the selected solutions leave out.
pub fn uncovered_relations(expectation: &BistochasticMatrix, solution: &SupportMatrix) -> Result<Vec<(usize, usize)>> {
    let n = expectation.order();
    if solution.order() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: solution.order(),
        });
    }
    Ok((0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&(r, c)| expectation.get(r, c) > 0.0 && !solution.get(r, c))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ops(e: &[f64], i: &[f64]) -> (DiagOperator, DiagOperator) {
        (
            DiagOperator::cost(e.to_vec()).unwrap(),
            DiagOperator::information(i.to_vec()).unwrap(),
        )
    }

    #[test]
    fn operators_must_be_positive() {
        assert!(matches!(
            DiagOperator::cost(vec![1.0, 0.0]),
            Err(Error::NonPositiveOperator { index: 1, .. })
        ));
    }

    #[test]
    fn rom_examples() {
        let (e, i) = ops(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        let uniform = BistochasticMatrix::uniform(3);
        let rom = rom_bounds(&e, &i, 4.0, 6.0, Some(&uniform)).unwrap();
        assert_eq!((rom.lower, rom.upper), (24.0, 90.0));

        let rom = rom_bounds(&e, &i, 15.0, 6.0, None).unwrap();
        assert_eq!(rom.lower, rom.upper);

        assert!(matches!(
            rom_bounds(&e, &i, 15.5, 6.0, None),
            Err(Error::AdmissibilityViolation(_))
        ));
        assert!(matches!(
            rom_bounds(&e, &i, 4.0, 5.9, None),
            Err(Error::AdmissibilityViolation(_))
        ));
        // uniform rows average I to 5, so I_θ = 5.5 is admissible overall but not per row
        assert!(matches!(
            rom_bounds(&e, &i, 5.5, 6.0, Some(&uniform)),
            Err(Error::AdmissibilityViolation(_))
        ));
    }

    #[test]
    fn architect_budget_examples() {
        let (e, i) = ops(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        assert_eq!(architect_budget(&e, &i, &Permutation::identity(3)).unwrap(), 32.0);
        assert_eq!(architect_budget(&e, &i, &Permutation::reversal(3)).unwrap(), 28.0);
        let (e, i) = ops(&[1.0, 1.0, 1.0], &[4.0, 5.0, 6.0]);
        let p = Permutation::from_mapping(vec![2, 0, 1]).unwrap();
        assert_eq!(architect_budget(&e, &i, &p).unwrap(), 15.0);
        assert!(architect_budget(&e, &i, &Permutation::identity(2)).is_err());
    }

    #[test]
    fn budget_bounds_examples() {
        let (e, i) = ops(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]);
        assert_eq!(budget_bounds(&e, &i).unwrap(), (28.0, 32.0));
        let (e, i) = ops(&[2.0, 2.0], &[1.0, 3.0]);
        assert_eq!(budget_bounds(&e, &i).unwrap(), (8.0, 8.0));
        let (e, i) = ops(&[3.0], &[7.0]);
        assert_eq!(budget_bounds(&e, &i).unwrap(), (21.0, 21.0));
    }

    #[test]
    fn extremes_attain_bounds() {
        let (e, i) = ops(&[3.0, 1.0, 2.0], &[5.0, 6.0, 4.0]);
        let (lo, hi) = rearrangement_extremes(&e, &i).unwrap();
        let (b_minus, b_plus) = budget_bounds(&e, &i).unwrap();
        assert_eq!(architect_budget(&e, &i, &lo).unwrap(), b_minus);
        assert_eq!(architect_budget(&e, &i, &hi).unwrap(), b_plus);
    }

    #[test]
    fn single_term_sits_on_the_threshold() {
        let r = assess(&[1.0], &[10.0], &[5.0], &[20.0]).unwrap();
        assert_eq!((r.w_plus, r.w_minus, r.w_mean), (1.0, 1.0, 1.0));
        assert_eq!(r.terms[0].class, SolutionClass::Attractive);
        assert!(!r.pathology);
    }

    #[test]
    fn uniform_weights_with_equal_bounds() {
        let r = assess(&[0.25; 4], &[3.0; 4], &[2.0; 4], &[4.0; 4]).unwrap();
        assert_eq!((r.w_plus, r.w_minus, r.w_mean), (0.25, 0.25, 0.25));
    }

    #[test]
    fn weighted_mean_example() {
        let r = assess(
            &[0.5, 0.3, 0.2],
            &[10.0, 20.0, 30.0],
            &[10.0, 20.0, 30.0],
            &[10.0, 20.0, 30.0],
        )
        .unwrap();
        assert!((r.w_mean - 17.0 / 60.0).abs() < 1e-15);
        assert_eq!(r.w_plus, r.w_minus);
        assert_eq!(r.terms[0].class, SolutionClass::Excellent);
        assert_eq!(r.terms[1].class, SolutionClass::Excellent);
        assert_eq!(r.terms[2].class, SolutionClass::Unsatisfactory);
    }

    #[test]
    fn pathology_is_flagged() {
        // heavy weight on the tightly bounded term, light weight on the loose one
        let r = assess(&[0.9, 0.1], &[2.0, 2.0], &[1.9, 1.0], &[2.1, 10.0]).unwrap();
        assert!(r.w_plus < r.w_minus);
        assert!(r.pathology);
    }

    #[test]
    fn out_of_bounds_budget_is_rejected() {
        assert!(assess(&[1.0], &[10.0], &[11.0], &[20.0]).is_err());
    }

    #[test]
    fn superpose_examples() {
        let id = Permutation::identity(2);
        let swap = Permutation::reversal(2);
        assert_eq!(superpose(core::slice::from_ref(&id)).unwrap(), id.to_support());
        assert_eq!(superpose(&[id.clone(), swap.clone()]).unwrap().ones(), 4);
        let a = Permutation::from_mapping(vec![1, 2, 3, 0]).unwrap();
        let b = Permutation::from_mapping(vec![3, 0, 1, 2]).unwrap();
        assert_eq!(superpose(&[a, b]).unwrap().ones(), 8);
        assert!(superpose(&[]).is_err());
    }

    #[test]
    fn uncovered_relations_list_left_out_cells() {
        let m = BistochasticMatrix::uniform(2);
        let sol = superpose(&[Permutation::identity(2)]).unwrap();
        assert_eq!(uncovered_relations(&m, &sol).unwrap(), vec![(0, 1), (1, 0)]);
    }
}
