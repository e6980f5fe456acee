//! Periodic trapezoid quadrature of `Tr_pi log Delta(Y,u)` over the torus.
//!
//! For `pi = Z^k` the von Neumann trace of a function of the adjacency
//! operator is the torus average of the matrix trace of that function of
//! the symbol:
//!
//! ```text
//! Tr_pi log Delta(Y,u) = (2 pi)^-k int_{T^k} sum_j log(1 - lambda_j(theta) u + q u^2) d theta
//! ```
//!
//! The integrand is analytic and periodic, so the uniform-grid trapezoid
//! rule converges geometrically; the grid is doubled until two successive
//! values agree.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use super::symbol::TorusSymbol;
use crate::error::{Result, ZetaError};
use crate::zeta::{log_det_from_clusters, RegionOmega};

/// Successive grid refinements must agree to this absolute tolerance.
pub const QUADRATURE_TOLERANCE: f64 = 1e-10;

/// Largest number of nodes per torus dimension.
pub const QUADRATURE_MAX_POINTS: usize = 1 << 14;

/// Smallest accepted starting grid.
pub const QUADRATURE_MIN_POINTS: usize = 4;

/// Sum in a fixed binary-tree order, so the result does not depend on how
/// the values were produced.
pub fn pairwise_sum(values: &[Complex64]) -> Complex64 {
    if values.len() <= 8 {
        values.iter().sum()
    } else {
        let (a, b) = values.split_at(values.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

// (eigenvalue, multiplicity) clusters at each quadrature node
type NodeClusters = Vec<Vec<(f64, usize)>>;

/// Symbol eigenvalues on uniform torus grids, cached per grid size.
#[derive(Debug)]
pub struct TorusQuadrature {
    symbol: TorusSymbol,
    omega: RegionOmega,
    grids: Mutex<BTreeMap<usize, Arc<NodeClusters>>>,
}

impl TorusQuadrature {
    pub fn new(symbol: TorusSymbol, q: i64) -> Result<Self> {
        Ok(TorusQuadrature {
            symbol,
            omega: RegionOmega::new(q)?,
            grids: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn symbol(&self) -> &TorusSymbol {
        &self.symbol
    }

    pub fn q(&self) -> i64 {
        self.omega.q()
    }

    fn node_count(&self, m: usize) -> Result<usize> {
        u32::try_from(self.symbol.rank)
            .ok()
            .and_then(|k| m.checked_pow(k))
            .ok_or_else(|| ZetaError::Resource(format!("{m}^{} quadrature nodes", self.symbol.rank)))
    }

    /// Per-node eigenvalue clusters on the `m^k` grid.
    fn grid(&self, m: usize) -> Result<Arc<NodeClusters>> {
        if let Some(g) = self.grids.lock().unwrap().get(&m) {
            return Ok(g.clone());
        }
        let k = self.symbol.rank;
        let nodes = self.node_count(m)?;
        let computed: Vec<Vec<(f64, usize)>> = (0..nodes)
            .into_par_iter()
            .map(|idx| {
                let mut rest = idx;
                let theta: Vec<f64> = (0..k)
                    .map(|_| {
                        let j = rest % m;
                        rest /= m;
                        TAU * j as f64 / m as f64
                    })
                    .collect();
                let mut ev = self.symbol.eigenvalues_at(&theta)?;
                ev.sort_by(f64::total_cmp);
                Ok(crate::zeta::eigenvalue_clusters(&ev, 1e-13))
            })
            .collect::<Result<_>>()?;
        let arc = Arc::new(computed);
        self.grids.lock().unwrap().insert(m, arc.clone());
        Ok(arc)
    }

    /// Trapezoid value on the `m^k` grid.
    pub fn trapezoid(&self, u: Complex64, m: usize) -> Result<Complex64> {
        self.omega.require(u)?;
        let grid = self.grid(m)?;
        let q = self.q();
        let values: Vec<Complex64> = grid
            .par_iter()
            .map(|clusters| log_det_from_clusters(clusters, q, u))
            .collect::<Result<_>>()?;
        Ok(pairwise_sum(&values) / values.len() as f64)
    }

    /// Adaptive value of `Tr_pi log Delta(Y,u)` starting from `m` nodes per
    /// dimension. Returns the value and the grid size it settled on.
    pub fn log_det(&self, u: Complex64, m: usize) -> Result<(Complex64, usize)> {
        self.omega.require(u)?;
        let mut m = m.max(QUADRATURE_MIN_POINTS);
        let mut prev = self.trapezoid(u, m)?;
        while 2 * m <= QUADRATURE_MAX_POINTS {
            m *= 2;
            let next = self.trapezoid(u, m)?;
            if (next - prev).norm() < QUADRATURE_TOLERANCE {
                return Ok((next, m));
            }
            prev = next;
        }
        Err(ZetaError::numeric(format!(
            "torus quadrature at u = {u} did not settle below {QUADRATURE_TOLERANCE:e} by {m} points per dimension"
        )))
    }
}

/// `Tr_pi log Delta(Y,u)` for the `Z^k`-cover with symbol `sym`.
pub fn l2_log_det(sym: &TorusSymbol, q: i64, u: Complex64, m: usize) -> Result<Complex64> {
    Ok(TorusQuadrature::new(sym.clone(), q)?.log_det(u, m)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::covers::{VoltageAssignment, VoltageGroup};
    use crate::l2::torus_symbol;

    fn loop_symbol() -> TorusSymbol {
        torus_symbol(
            &corpus::cycle(1),
            &VoltageAssignment::new(VoltageGroup::Free(1), vec![vec![1]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn line_has_trivial_determinant() {
        let v = l2_log_det(&loop_symbol(), 1, Complex64::new(0.5, 0.0), 8).unwrap();
        assert!(v.norm() < 1e-10);
        let v = l2_log_det(&loop_symbol(), 1, Complex64::new(0.0, 0.0), 8).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn conjugate_symmetry() {
        let sym = torus_symbol(
            &corpus::bouquet(2),
            &VoltageAssignment::new(VoltageGroup::Free(2), vec![vec![1, 0], vec![0, 1]]).unwrap(),
        )
        .unwrap();
        let quad = TorusQuadrature::new(sym, 3).unwrap();
        let u = Complex64::new(0.21, 0.13);
        let (a, _) = quad.log_det(u, 8).unwrap();
        let (b, _) = quad.log_det(u.conj(), 8).unwrap();
        assert!((a - b.conj()).norm() < 1e-12);
    }

    #[test]
    fn self_consistent_under_doubling() {
        let quad = TorusQuadrature::new(loop_symbol(), 1).unwrap();
        let u = Complex64::new(-0.3, 0.6);
        let (v, m) = quad.log_det(u, 4).unwrap();
        let finer = quad.trapezoid(u, 2 * m).unwrap();
        assert!((v - finer).norm() < 1e-10);
    }

    #[test]
    fn outside_omega_is_rejected() {
        let err = l2_log_det(&loop_symbol(), 1, Complex64::new(1.0, 0.0), 8);
        assert!(matches!(err, Err(ZetaError::Domain(_))));
    }

    #[test]
    fn pairwise_sum_matches_naive() {
        let xs: Vec<Complex64> = (0..1000).map(|i| Complex64::new(i as f64, -(i as f64))).collect();
        assert_eq!(pairwise_sum(&xs), Complex64::new(499500.0, -499500.0));
    }
}
