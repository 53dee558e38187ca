//! Perfect matching on a bipartite graph by augmenting paths.
//!
//! Rows are processed in increasing order. Each row takes its smallest free
//! column if it has one and only then reroutes earlier rows, trying columns
//! smallest-first, so the matching found for a given graph never varies.

use alloc::vec;
use alloc::vec::Vec;

/// Returns `assignment[row] = col` for a perfect matching of the `n × n`
/// bipartite graph whose edges are given by `edge(row, col)`, or `None` when
/// no perfect matching exists.
pub fn perfect_matching(n: usize, edge: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut row_of_col: Vec<Option<usize>> = vec![None; n];
    let mut seen = vec![false; n];
    for row in 0..n {
        seen.iter_mut().for_each(|s| *s = false);
        if !augment(row, n, &edge, &mut seen, &mut row_of_col) {
            return None;
        }
    }
    let mut assignment = vec![0; n];
    for (col, row) in row_of_col.into_iter().enumerate() {
        assignment[row?] = col;
    }
    Some(assignment)
}

fn augment(
    row: usize,
    n: usize,
    edge: &impl Fn(usize, usize) -> bool,
    seen: &mut [bool],
    row_of_col: &mut [Option<usize>],
) -> bool {
    // a free column is taken before any earlier row is rerouted
    if let Some(col) = (0..n).find(|&c| !seen[c] && row_of_col[c].is_none() && edge(row, c)) {
        seen[col] = true;
        row_of_col[col] = Some(row);
        return true;
    }
    for col in 0..n {
        if seen[col] || !edge(row, col) {
            continue;
        }
        seen[col] = true;
        let other = row_of_col[col].expect("free columns were tried first");
        if augment(other, n, edge, seen, row_of_col) {
            row_of_col[col] = Some(row);
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_graph() {
        assert_eq!(perfect_matching(3, |i, j| i == j), Some(vec![0, 1, 2]));
    }

    #[test]
    fn complete_graph_prefers_smallest_columns() {
        assert_eq!(perfect_matching(3, |_, _| true), Some(vec![0, 1, 2]));
    }

    #[test]
    fn augmenting_path_reroutes_earlier_rows() {
        // row 0 may use 0 or 1, row 1 only 0
        let edges = [[true, true], [true, false]];
        assert_eq!(perfect_matching(2, |i, j| edges[i][j]), Some(vec![1, 0]));
    }

    #[test]
    fn hall_violation_has_no_matching() {
        let edges = [[true, false, false], [true, false, false], [true, true, true]];
        assert_eq!(perfect_matching(3, |i, j| edges[i][j]), None);
    }

    #[test]
    fn empty_graph() {
        assert_eq!(perfect_matching(0, |_, _| false), Some(vec![]));
    }
}
