//! Power-series route to `Tr_pi log Delta(Y,u)` for `Z^k`-covers.
//!
//! With `A = delta u - q u^2 I`,
//! `Tr_pi log(I - A) = -sum_m Tr_pi(A^m) / m`, and `Tr_pi delta^j` is the
//! number of closed walks of length `j` at the lifts of the base vertices,
//! counted exactly by dynamic programming over positions in `Z^k`. No
//! eigenvalues or quadrature are involved.

use std::collections::HashMap;

use num_complex::Complex64;

use super::symbol::TorusSymbol;
use crate::error::{Result, ZetaError};

/// `Tr_pi delta^j` for `j = 0..=max_len`, summed over base vertices.
pub fn closed_walk_traces(sym: &TorusSymbol, max_len: usize) -> Result<Vec<u128>> {
    let n = sym.base_vertex_count;
    let mut out_terms: Vec<Vec<(usize, i64, &[i64])>> = vec![Vec::new(); n];
    for t in &sym.terms {
        if t.coeff < 0 {
            return Err(ZetaError::input("walk counting needs non-negative coefficients"));
        }
        out_terms[t.row].push((t.col, t.coeff, &t.freq));
    }
    let reach = sym
        .terms
        .iter()
        .flat_map(|t| t.freq.iter())
        .map(|f| f.abs())
        .max()
        .unwrap_or(0);
    let overflow = || ZetaError::numeric("closed walk count overflow");
    let mut traces = vec![0u128; max_len + 1];
    for start in 0..n {
        let mut states: HashMap<(usize, Vec<i64>), u128> = HashMap::new();
        states.insert((start, vec![0; sym.rank]), 1);
        traces[0] += 1;
        for step in 1..=max_len {
            let remaining = (max_len - step) as i64;
            let mut next: HashMap<(usize, Vec<i64>), u128> = HashMap::new();
            for ((x, pos), count) in &states {
                for &(y, c, f) in &out_terms[*x] {
                    let p: Vec<i64> = pos.iter().zip(f).map(|(a, b)| a + b).collect();
                    // positions that cannot return to the origin in time
                    if p.iter().any(|a| a.abs() > remaining * reach) {
                        continue;
                    }
                    let add = count.checked_mul(c as u128).ok_or_else(overflow)?;
                    let slot = next.entry((y, p)).or_insert(0);
                    *slot = slot.checked_add(add).ok_or_else(overflow)?;
                }
            }
            states = next;
            if let Some(c) = states.get(&(start, vec![0; sym.rank])) {
                traces[step] = traces[step].checked_add(*c).ok_or_else(overflow)?;
            }
        }
    }
    Ok(traces)
}

/// Truncated series for `Tr_pi log Delta(Y,u)`, valid for
/// `|u| < 1/(2(q+1))`.
pub fn l2_series_oracle(sym: &TorusSymbol, q: i64, u: Complex64, terms: usize) -> Result<Complex64> {
    let limit = 1.0 / (2.0 * (q + 1) as f64);
    if !(u.norm() < limit) {
        return Err(ZetaError::domain(format!(
            "series oracle needs |u| < {limit}, got |u| = {}",
            u.norm()
        )));
    }
    let walks: Vec<f64> = closed_walk_traces(sym, terms)?
        .into_iter()
        .map(|w| w as f64)
        .collect();
    let neg_qu2 = -u * u * q as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for m in 1..=terms {
        // Tr (delta u - q u^2)^m = sum_j C(m,j) u^j (-q u^2)^{m-j} W_j
        let mut binom = 1.0f64;
        let mut tr = Complex64::new(0.0, 0.0);
        for (j, w) in walks.iter().enumerate().take(m + 1) {
            if j > 0 {
                binom = binom * (m + 1 - j) as f64 / j as f64;
            }
            tr += u.powi(j as i32) * neg_qu2.powi((m - j) as i32) * (binom * w);
        }
        total -= tr / m as f64;
    }
    Ok(total)
}
