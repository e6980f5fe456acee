//! L2-zeta functions of infinite covers with a free cocompact group action.
//!
//! The L2-zeta is evaluated through its determinant form,
//! `Z_pi(Y,u) = (1 - u^2)^(-chi(B)) Det_pi Delta(Y,u)`, with
//! `Det_pi = exp(Tr_pi log)`. Two instances of `Tr_pi` are computable:
//! `pi = Z^k`, by Fourier integration of the adjacency symbol, and the
//! regular tree, where `Z_pi` is identically 1.

mod cdf;
mod quadrature;
mod series;
mod symbol;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

pub use cdf::{arcsine_cdf, empirical_cdf, SpectralCDF, CDF_TIE_TOLERANCE};
pub use quadrature::{
    l2_log_det, pairwise_sum, TorusQuadrature, QUADRATURE_MAX_POINTS, QUADRATURE_MIN_POINTS,
    QUADRATURE_TOLERANCE,
};
pub use series::{closed_walk_traces, l2_series_oracle};
pub use symbol::{torus_symbol, SymbolTerm, TorusSymbol};

use crate::covers::{VoltageAssignment, VoltageGroup};
use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;
use crate::zeta::RegionOmega;

/// Default starting grid for torus quadrature.
pub const DEFAULT_QUADRATURE_POINTS: usize = 8;

type Evaluator = dyn Fn(Complex64) -> Result<Complex64> + Send + Sync;

/// An L2-zeta function `Z_pi(Y, .)` on `Omega`.
#[derive(Clone)]
pub struct L2Zeta {
    pub chi_base: i64,
    pub q: i64,
    pub description: String,
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for L2Zeta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("L2Zeta")
            .field("chi_base", &self.chi_base)
            .field("q", &self.q)
            .field("description", &self.description)
            .finish()
    }
}

impl L2Zeta {
    pub fn new<F>(chi_base: i64, q: i64, description: impl Into<String>, evaluator: F) -> Self
    where
        F: Fn(Complex64) -> Result<Complex64> + Send + Sync + 'static,
    {
        L2Zeta {
            chi_base,
            q,
            description: description.into(),
            evaluator: Arc::new(evaluator),
        }
    }

    /// The constant function `value`.
    pub fn constant(q: i64, chi_base: i64, value: Complex64) -> Self {
        L2Zeta::new(chi_base, q, format!("constant {value}"), move |_| Ok(value))
    }

    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        RegionOmega::new(self.q)?.require(u)?;
        (self.evaluator)(u)
    }

    /// `Det_pi Delta(Y,u) = (1 - u^2)^chi(B) Z_pi(Y,u)`.
    pub fn det_pi(&self, u: Complex64) -> Result<Complex64> {
        let pre = (Complex64::new(1.0, 0.0) - u * u).powi(self.chi_base as i32);
        Ok(pre * self.eval(u)?)
    }
}

/// The L2-zeta of the `(q+1)`-regular tree covering a base with Euler
/// characteristic `chi_base`: the tree has no closed paths, so it is 1.
pub fn tree_l2_reference(q: i64, chi_base: i64) -> L2Zeta {
    let mut z = L2Zeta::constant(q, chi_base, Complex64::new(1.0, 0.0));
    z.description = format!("universal cover of a {}-regular base (tree): Z = 1", q + 1);
    z
}

fn free_voltages(base: &MultiGraph, voltages: &[Vec<i64>]) -> Result<VoltageAssignment> {
    let k = voltages.first().map_or(0, Vec::len);
    let volt = VoltageAssignment::new(VoltageGroup::Free(k), voltages.to_vec())?;
    if volt.voltages.len() != base.edge_count() {
        return Err(ZetaError::input("one voltage per base edge is required"));
    }
    Ok(volt)
}

/// Evaluator for the L2-zeta of the `Z^k`-cover of a regular base.
pub fn abelian_l2_zeta(base: &MultiGraph, voltages: &[Vec<i64>]) -> Result<L2Zeta> {
    let q = base.regularity().require_q("the L2-zeta")?;
    let volt = free_voltages(base, voltages)?;
    let quad = TorusQuadrature::new(torus_symbol(base, &volt)?, q)?;
    let chi = base.euler_characteristic();
    let k = volt.group.rank();
    Ok(L2Zeta::new(chi, q, format!("Z^{k}-cover with voltages {voltages:?}"), move |u| {
        let (log_det, _) = quad.log_det(u, DEFAULT_QUADRATURE_POINTS)?;
        let pre = (Complex64::new(1.0, 0.0) - u * u).powi(-chi as i32);
        Ok(pre * log_det.exp())
    }))
}

/// `Z_pi(Y,u)` for the `Z^k`-cover of a regular base.
pub fn l2_zeta_abelian(base: &MultiGraph, voltages: &[Vec<i64>], u: Complex64) -> Result<Complex64> {
    abelian_l2_zeta(base, voltages)?.eval(u)
}

/// Spectral distribution of the `Z^k`-cover, approximated by counting
/// symbol eigenvalues on an `m^k` torus grid. Normalised to total mass
/// `|V(base)|`.
pub fn torus_cdf(sym: &TorusSymbol, m: usize) -> Result<SpectralCDF> {
    let k = sym.rank as u32;
    let nodes = m.pow(k);
    let mut eig = Vec::with_capacity(nodes * sym.base_vertex_count);
    for idx in 0..nodes {
        let mut rest = idx;
        let theta: Vec<f64> = (0..k)
            .map(|_| {
                let j = rest % m;
                rest /= m;
                std::f64::consts::TAU * (j as f64 + 0.5) / m as f64
            })
            .collect();
        eig.extend(sym.eigenvalues_at(&theta)?);
    }
    Ok(SpectralCDF::from_eigenvalues(&eig, nodes as u64))
}
