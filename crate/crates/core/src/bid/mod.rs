//! Bid-stage matrix formalism.
//!
//! The customer's expectations are a doubly stochastic matrix `M_F`. Its
//! Birkhoff decomposition splits it into permutation matrices, one per
//! architect, weighted by that architect's influence. Costing (`E`) and
//! information (`I`) operators turn each permutation into a budget; the
//! weighted budgets define the selection thresholds, and the chosen
//! permutations are superposed into the solution matrix `M_B`.

mod birkhoff;
mod budget;
mod matching;
mod matrix;

pub use birkhoff::{
    birkhoff_decompose, max_terms, BirkhoffDecomposition, DecompositionTerm, SUPPORT_TOLERANCE, WEIGHT_SUM_TOLERANCE,
};
pub use budget::{
    architect_budget, assess, budget_bounds, rearrangement_extremes, rom_bounds, selection_report, superpose,
    term_bounds, uncovered_relations, DiagOperator, OperatorKind, RomBounds, SelectionReport, SolutionClass,
    TermAssessment,
};
pub use matching::perfect_matching;
pub use matrix::{cycles_of, validate_bistochastic, BistochasticMatrix, Permutation, SupportMatrix, SUM_TOLERANCE};

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;

    fn seven_functions() -> Permutation {
        // f1→f2, f2→f4, f3→f6, f4→f3, f5→f7, f6→f1, f7→f5
        Permutation::from_mapping(vec![1, 3, 5, 2, 6, 0, 4]).unwrap()
    }

    #[test]
    fn validate_examples() {
        assert!(validate_bistochastic(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]], 1e-9).is_ok());
        assert!(validate_bistochastic(&[vec![0.5, 0.5], vec![0.5, 0.5]], 1e-9).is_ok());
        assert!(matches!(
            validate_bistochastic(&[vec![0.9, 0.2], vec![0.1, 0.8]], 1e-9),
            Err(crate::Error::RowSumViolation { row: 0, .. })
        ));
        assert!(matches!(
            validate_bistochastic(&[vec![0.5, 0.5], vec![0.6, 0.4]], 1e-9),
            Err(crate::Error::ColSumViolation { col: 0, .. })
        ));
        assert!(matches!(
            validate_bistochastic(&[vec![1.5, -0.5], vec![-0.5, 1.5]], 1e-9),
            Err(crate::Error::NegativeEntry { row: 0, col: 1, .. })
        ));
        assert!(matches!(
            validate_bistochastic(&[vec![1.0], vec![0.0, 1.0]], 1e-9),
            Err(crate::Error::NotSquare { .. })
        ));
    }

    #[test]
    fn cycles_examples() {
        assert_eq!(cycles_of(&Permutation::identity(3)), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(cycles_of(&seven_functions()), vec![vec![0, 1, 3, 2, 5], vec![4, 6]]);
        assert_eq!(cycles_of(&Permutation::reversal(2)), vec![vec![0, 1]]);
    }

    #[test]
    fn permutation_from_rows_matches_the_printed_matrix() {
        let rows: Vec<Vec<f64>> = (0..7)
            .map(|i| (0..7).map(|j| if seven_functions().image(i) == j { 1.0 } else { 0.0 }).collect())
            .collect();
        assert_eq!(Permutation::from_rows(&rows).unwrap(), seven_functions());
        assert!(Permutation::from_mapping(vec![0, 0]).is_err());
    }
}
