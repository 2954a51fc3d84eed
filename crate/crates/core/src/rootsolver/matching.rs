//! Minimal-cost bipartite matching, used to compare root multisets whose
//! ordering carries no meaning.

use super::{rel_distance, RootSet};

/// Minimal-total-cost assignment of rows to columns of a square cost
/// matrix, by the potentials form of the Hungarian algorithm in O(n^3).
/// Returns `assign` with row `i` matched to column `assign[i]`.
pub fn hungarian_min_cost(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    assert!(cost.iter().all(|row| row.len() == n), "cost matrix must be square");
    if n == 0 {
        return Vec::new();
    }
    // Columns are 1-indexed internally; index 0 is the virtual start.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut matched_row = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        matched_row[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = matched_row[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[matched_row[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched_row[j0] == 0 {
                break;
            }
        }
        // Augment along the recorded alternating path.
        loop {
            let j1 = way[j0];
            matched_row[j0] = matched_row[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assign = vec![0usize; n];
    for j in 1..=n {
        if matched_row[j] > 0 {
            assign[matched_row[j] - 1] = j - 1;
        }
    }
    assign
}

/// Pairs the roots of two sets of equal degree by minimal total relative
/// distance; `result[i]` is the index in `b` matched to root `i` of `a`.
pub fn match_roots(a: &RootSet, b: &RootSet) -> Vec<usize> {
    assert_eq!(a.n, b.n, "root sets must have equal degree");
    let cost: Vec<Vec<f64>> = a
        .roots
        .iter()
        .map(|ra| {
            b.roots
                .iter()
                .map(|rb| rel_distance(ra.polar(), rb.polar()))
                .collect()
        })
        .collect();
    hungarian_min_cost(&cost)
}

/// Largest per-pair relative distance under the optimal matching.
pub fn max_matched_rel_distance(a: &RootSet, b: &RootSet) -> f64 {
    let assign = match_roots(a, b);
    a.roots
        .iter()
        .enumerate()
        .map(|(i, ra)| rel_distance(ra.polar(), b.roots[assign[i]].polar()))
        .fold(0.0, f64::max)
}
