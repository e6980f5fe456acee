//! Euler-product side of the zeta function.
//!
//! Taking logarithms of the product over primitive classes gives
//! `log Z(X,u) = -sum_m N_m u^m / m`, where `N_m` counts closed
//! non-backtracking, tailless walks of length `m`. `N_m` is the trace of
//! the `m`-th power of the non-backtracking transfer operator on oriented
//! edges. Nothing here touches the determinant polynomial, so these
//! coefficients are an independent check of the rationality formula.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;

/// Non-backtracking successor lists on oriented edges.
///
/// Edge `i = (a, b)` yields oriented edges `2i: a -> b` and `2i+1: b -> a`;
/// a loop yields two oriented edges traversing it in opposite senses.
/// `f` follows `e` when `head(e) = tail(f)` and `f` is not the reversal of `e`.
#[derive(Debug, Clone)]
pub struct NonBacktrackingOperator {
    successors: Vec<Vec<usize>>,
}

impl NonBacktrackingOperator {
    pub fn new(g: &MultiGraph) -> Self {
        let mut tails = Vec::with_capacity(2 * g.edge_count());
        let mut heads = Vec::with_capacity(2 * g.edge_count());
        for &(a, b) in g.edges() {
            tails.extend([a, b]);
            heads.extend([b, a]);
        }
        let mut leaving = vec![Vec::new(); g.vertex_count()];
        for (e, &t) in tails.iter().enumerate() {
            leaving[t].push(e);
        }
        let successors = (0..tails.len())
            .map(|e| {
                leaving[heads[e]]
                    .iter()
                    .copied()
                    .filter(|&f| f != (e ^ 1))
                    .collect()
            })
            .collect();
        NonBacktrackingOperator { successors }
    }

    pub fn dimension(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self, e: usize) -> &[usize] {
        &self.successors[e]
    }

    /// `trace(T^m)` for `m = 1..=max_len`.
    pub fn traces(&self, max_len: usize) -> Result<Vec<u128>> {
        let d = self.dimension();
        // row a of T^m
        let mut power: Vec<Vec<u128>> = (0..d)
            .map(|a| {
                let mut row = vec![0u128; d];
                row[a] = 1;
                row
            })
            .collect();
        let mut out = Vec::with_capacity(max_len);
        for _ in 0..max_len {
            let mut next = vec![vec![0u128; d]; d];
            for (row, out_row) in power.iter().zip(next.iter_mut()) {
                for (e, &count) in row.iter().enumerate() {
                    if count == 0 {
                        continue;
                    }
                    for &f in &self.successors[e] {
                        out_row[f] = out_row[f]
                            .checked_add(count)
                            .ok_or_else(|| ZetaError::numeric("walk count overflow"))?;
                    }
                }
            }
            power = next;
            let trace = (0..d)
                .try_fold(0u128, |acc, a| acc.checked_add(power[a][a]))
                .ok_or_else(|| ZetaError::numeric("walk count overflow"))?;
            out.push(trace);
        }
        Ok(out)
    }
}

/// Number of closed non-backtracking tailless walks of each length `1..=max_len`.
pub fn closed_walk_counts(g: &MultiGraph, max_len: usize) -> Result<Vec<u128>> {
    NonBacktrackingOperator::new(g).traces(max_len)
}

/// Taylor coefficients `c_1..c_L` of `log Z(X,u)`, `c_m = -N_m / m`.
pub fn euler_log_coeffs(g: &MultiGraph, max_len: usize) -> Result<Vec<BigRational>> {
    Ok(closed_walk_counts(g, max_len)?
        .into_iter()
        .enumerate()
        .map(|(i, n)| BigRational::new(-BigInt::from(n), BigInt::from(i + 1)))
        .collect())
}
