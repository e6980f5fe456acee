//! Fourier symbols of adjacency operators of `Z^k`-covers.
//!
//! For the cover defined by integer voltages, Fourier transform along the
//! deck group turns the adjacency operator into a Hermitian matrix-valued
//! function on the torus: `delta(theta)_{xy} = sum exp(i theta . s)` over
//! base edges `x -> y` of voltage `s`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::covers::{VoltageAssignment, VoltageGroup};
use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolTerm {
    pub row: usize,
    pub col: usize,
    pub coeff: i64,
    pub freq: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusSymbol {
    pub base_vertex_count: usize,
    pub rank: usize,
    /// Sorted, with like terms combined.
    pub terms: Vec<SymbolTerm>,
}

impl TorusSymbol {
    pub fn new(base_vertex_count: usize, rank: usize, mut terms: Vec<SymbolTerm>) -> Result<Self> {
        if let Some(t) = terms
            .iter()
            .find(|t| t.row >= base_vertex_count || t.col >= base_vertex_count || t.freq.len() != rank)
        {
            return Err(ZetaError::input(format!("malformed symbol term {t:?}")));
        }
        terms.sort_by(|a, b| (a.row, a.col, &a.freq).cmp(&(b.row, b.col, &b.freq)));
        let mut merged: Vec<SymbolTerm> = Vec::with_capacity(terms.len());
        for t in terms {
            match merged.last_mut() {
                Some(m) if m.row == t.row && m.col == t.col && m.freq == t.freq => m.coeff += t.coeff,
                _ => merged.push(t),
            }
        }
        merged.retain(|t| t.coeff != 0);
        let sym = TorusSymbol {
            base_vertex_count,
            rank,
            terms: merged,
        };
        if !sym.is_hermitian() {
            return Err(ZetaError::input("symbol is not Hermitian"));
        }
        Ok(sym)
    }

    /// Entry `(y, x)` must carry every term of `(x, y)` with negated frequency.
    pub fn is_hermitian(&self) -> bool {
        self.terms.iter().all(|t| {
            let neg: Vec<i64> = t.freq.iter().map(|f| -f).collect();
            self.terms
                .iter()
                .filter(|s| s.row == t.col && s.col == t.row && s.freq == neg)
                .map(|s| s.coeff)
                .sum::<i64>()
                == t.coeff
        })
    }

    /// Largest absolute row sum of coefficients; bounds every eigenvalue.
    pub fn norm_bound(&self) -> f64 {
        let mut rows = vec![0i64; self.base_vertex_count];
        for t in &self.terms {
            rows[t.row] += t.coeff.abs();
        }
        rows.into_iter().max().unwrap_or(0) as f64
    }

    pub fn matrix_at(&self, theta: &[f64]) -> DMatrix<Complex64> {
        let n = self.base_vertex_count;
        let mut m = DMatrix::zeros(n, n);
        for t in &self.terms {
            let phase: f64 = t.freq.iter().zip(theta).map(|(&f, &th)| f as f64 * th).sum();
            m[(t.row, t.col)] += Complex64::from_polar(t.coeff as f64, phase);
        }
        m
    }

    /// Eigenvalues of `delta(theta)`, unsorted.
    pub fn eigenvalues_at(&self, theta: &[f64]) -> Result<Vec<f64>> {
        let m = self.matrix_at(theta);
        if self.base_vertex_count == 1 {
            return Ok(vec![m[(0, 0)].re]);
        }
        let eig = SymmetricEigen::try_new(m, f64::EPSILON, 1000 * self.base_vertex_count.max(10))
            .ok_or_else(|| ZetaError::numeric("Hermitian eigensolver did not converge"))?;
        Ok(eig.eigenvalues.iter().copied().collect())
    }
}

/// Symbol of the `Z^k`-cover of `base` given by `volt`.
pub fn torus_symbol(base: &MultiGraph, volt: &VoltageAssignment) -> Result<TorusSymbol> {
    let VoltageGroup::Free(k) = volt.group else {
        return Err(ZetaError::input("torus symbols need Z^k voltages"));
    };
    if volt.voltages.len() != base.edge_count() {
        return Err(ZetaError::input("one voltage per base edge is required"));
    }
    let mut terms = Vec::with_capacity(2 * base.edge_count());
    for (&(a, b), s) in base.edges().iter().zip(&volt.voltages) {
        terms.push(SymbolTerm { row: a, col: b, coeff: 1, freq: s.clone() });
        terms.push(SymbolTerm { row: b, col: a, coeff: 1, freq: s.iter().map(|x| -x).collect() });
    }
    TorusSymbol::new(base.vertex_count(), k, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    fn free(k: usize, v: Vec<Vec<i64>>) -> VoltageAssignment {
        VoltageAssignment::new(VoltageGroup::Free(k), v).unwrap()
    }

    #[test]
    fn loop_symbol_is_two_cos() {
        let s = torus_symbol(&corpus::cycle(1), &free(1, vec![vec![1]])).unwrap();
        for th in [0.0, 0.3, 2.0] {
            assert!((s.eigenvalues_at(&[th]).unwrap()[0] - 2.0 * f64::cos(th)).abs() < 1e-15);
        }
    }

    #[test]
    fn bouquet_symbol() {
        let s = torus_symbol(&corpus::bouquet(2), &free(2, vec![vec![1, 0], vec![0, 1]])).unwrap();
        let th = [0.4f64, -1.3];
        let expected = 2.0 * th[0].cos() + 2.0 * th[1].cos();
        assert!((s.eigenvalues_at(&th).unwrap()[0] - expected).abs() < 1e-15);
        assert_eq!(s.norm_bound(), 4.0);
    }

    #[test]
    fn trivial_voltages_give_base_adjacency() {
        let k4 = corpus::complete(4);
        let s = torus_symbol(&k4, &VoltageAssignment::trivial(&k4, VoltageGroup::Free(1))).unwrap();
        let m = s.matrix_at(&[1.234]);
        let adj = k4.adjacency_matrix();
        for i in 0..4 {
            for j in 0..4 {
                assert!((m[(i, j)] - adj[(i, j)]).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn symbol_at_zero_is_quotient_adjacency() {
        let k4 = corpus::complete(4);
        let v = free(1, (0..6).map(|i| vec![i as i64 % 3 - 1]).collect());
        let s = torus_symbol(&k4, &v).unwrap();
        let m = s.matrix_at(&[0.0]);
        let adj = k4.adjacency_matrix();
        assert!((0..16).all(|i| (m[(i / 4, i % 4)] - adj[(i / 4, i % 4)]).norm() < 1e-15));
        let mut ev = s.eigenvalues_at(&[0.7]).unwrap();
        ev.sort_by(f64::total_cmp);
        assert!(ev.iter().all(|x| x.abs() <= 3.0 + 1e-12));
    }

    #[test]
    fn rejects_non_hermitian() {
        let bad = TorusSymbol::new(1, 1, vec![SymbolTerm { row: 0, col: 0, coeff: 1, freq: vec![1] }]);
        assert!(bad.is_err());
    }
}
