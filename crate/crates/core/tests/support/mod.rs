#![allow(dead_code)]

use funex_core::bid::{BistochasticMatrix, Permutation};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn random_permutation(n: usize, rng: &mut impl Rng) -> Permutation {
    let mut mapping: Vec<usize> = (0..n).collect();
    mapping.shuffle(rng);
    Permutation::from_mapping(mapping).unwrap()
}

/// Convex combination of `k` random permutations of order `n`.
pub fn random_bistochastic(n: usize, k: usize, rng: &mut impl Rng) -> BistochasticMatrix {
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = weights.iter().sum();
    let mut entries = vec![0.0; n * n];
    for w in weights {
        let p = random_permutation(n, rng);
        for (i, &j) in p.mapping().iter().enumerate() {
            entries[i * n + j] += w / total;
        }
    }
    BistochasticMatrix::from_row_major(n, entries, 1e-12).unwrap()
}

/// Every permutation of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                prefix.push(j);
                go(prefix, used, out);
                prefix.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Every tuple of length `len` over `1..=max`.
pub fn all_orders(len: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (1..=max).map(move |d| {
                    let mut t = t.clone();
                    t.push(d);
                    t
                })
            })
            .collect();
    }
    out
}
