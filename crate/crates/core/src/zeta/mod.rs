//! Ihara zeta functions of finite graphs.
//!
//! The convention throughout is `Z(X,u) = prod_gamma (1 - u^len(gamma))`
//! over primitive classes, which is the reciprocal of the classical Ihara
//! zeta. It is a polynomial:
//!
//! ```text
//! Z(X,u) = (1 - u^2)^(-chi(X)) * det(I - delta u + Q u^2)
//! ```
//!
//! with `delta` the adjacency operator and `Q` the diagonal of `deg - 1`.

mod det;
mod euler;
mod omega;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

pub use det::{
    det_poly, det_poly_exact, laplace_matrix, numeric_det, EXACT_FALLBACK_MAX_VERTICES,
    INTERPOLATION_RESIDUAL,
};
pub use euler::{closed_walk_counts, euler_log_coeffs, NonBacktrackingOperator};
pub use omega::{omega_contains, RegionOmega, BOUNDARY_TOLERANCE};

use crate::error::{Result, ZetaError};
use crate::graph::{MultiGraph, RegularityInfo, SpectrumData};
use crate::poly::IntPolynomial;
use omega::near_branch_cut;

/// `Z(X,u) = (1-u^2)^{-chi} * det_poly(u)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ZetaFunction {
    pub chi: i64,
    pub det_poly: IntPolynomial,
    pub q_info: RegularityInfo,
    /// Adjacency spectrum, kept for regular graphs where it factors the
    /// determinant.
    pub spectrum: Option<SpectrumData>,
}

impl ZetaFunction {
    pub fn of(g: &MultiGraph) -> Result<Self> {
        let q_info = g.regularity();
        let spectrum = if q_info.is_regular {
            Some(g.spectrum()?.clone())
        } else {
            None
        };
        Ok(ZetaFunction {
            chi: g.euler_characteristic(),
            det_poly: det_poly(g)?,
            q_info,
            spectrum,
        })
    }

    /// `Z(X,u)`. Fails at `u = +-1` when `chi > 0`, where the prefactor has
    /// a pole.
    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        let base = Complex64::new(1.0, 0.0) - u * u;
        if self.chi > 0 && base.norm() == 0.0 {
            return Err(ZetaError::domain(format!("Z has a pole at u = {u}")));
        }
        Ok(base.powi(-self.chi as i32) * self.det_poly.eval(u))
    }

    /// Exact Taylor coefficients `c_1..c_L` of `log Z(X,u)` from the
    /// rationality formula.
    pub fn log_coeffs(&self, terms: usize) -> Result<Vec<BigRational>> {
        let mut c = self.det_poly.log_series(terms)?;
        // -chi * log(1 - u^2) = chi * sum_m u^{2m} / m
        for m in 1..=terms / 2 {
            c[2 * m - 1] += BigRational::new(BigInt::from(self.chi), BigInt::from(m));
        }
        Ok(c)
    }

    fn regular_q(&self, what: &str) -> Result<i64> {
        self.q_info.require_q(what)
    }

    /// All zeros of `Z`, with multiplicities and distances to `C`.
    ///
    /// Each adjacency eigenvalue `lambda` contributes the two roots of
    /// `q u^2 - lambda u + 1`; the prefactor contributes `+1` and `-1` with
    /// multiplicity `-chi` each.
    pub fn zeros(&self) -> Result<ZeroReport> {
        let q = self.regular_q("locating zeta zeros")?;
        if q < 1 {
            return Err(ZetaError::Unsupported(
                "zeros on C are only defined for q >= 1".into(),
            ));
        }
        let omega = RegionOmega::new(q)?;
        let spectrum = self.spectrum.as_ref().expect("regular zeta carries its spectrum");
        let mut roots = Vec::with_capacity(2 * spectrum.eigenvalues.len());
        for &lambda in &spectrum.eigenvalues {
            roots.extend(quadratic_roots(lambda, q));
        }
        if self.chi < 0 {
            for _ in 0..-self.chi {
                roots.push(Complex64::new(1.0, 0.0));
                roots.push(Complex64::new(-1.0, 0.0));
            }
        }
        let mut zeros: Vec<ZetaZero> = Vec::new();
        for r in roots {
            match zeros.iter_mut().find(|z| (z.root - r).norm() < ROOT_MERGE_TOLERANCE) {
                Some(z) => z.multiplicity += 1,
                None => zeros.push(ZetaZero {
                    root: r,
                    multiplicity: 1,
                    dist_to_c: omega.distance_to_c(r),
                }),
            }
        }
        zeros.sort_by(|a, b| {
            a.root
                .re
                .total_cmp(&b.root.re)
                .then(a.root.im.total_cmp(&b.root.im))
        });
        let max_dist_to_c = zeros.iter().map(|z| z.dist_to_c).fold(0.0, f64::max);
        Ok(ZeroReport {
            q,
            zeros,
            max_dist_to_c,
        })
    }
}

/// Roots closer than this are reported as one root with multiplicity.
pub const ROOT_MERGE_TOLERANCE: f64 = 1e-8;

// Roots of q u^2 - lambda u + 1. A discriminant within rounding of zero is
// treated as a double root so that the pair stays exactly on C.
fn quadratic_roots(lambda: f64, q: i64) -> [Complex64; 2] {
    let qf = q as f64;
    let lambda = lambda.clamp(-(qf + 1.0), qf + 1.0);
    let disc = lambda * lambda - 4.0 * qf;
    let scale = 1e-10 * (qf + 1.0) * (qf + 1.0);
    if disc.abs() <= scale {
        let r = Complex64::new(lambda / (2.0 * qf), 0.0);
        [r, r]
    } else if disc < 0.0 {
        let re = lambda / (2.0 * qf);
        let im = (-disc).sqrt() / (2.0 * qf);
        [Complex64::new(re, im), Complex64::new(re, -im)]
    } else {
        let big = (lambda + lambda.signum() * disc.sqrt()) / (2.0 * qf);
        [Complex64::new(big, 0.0), Complex64::new(1.0 / (qf * big), 0.0)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZetaZero {
    pub root: Complex64,
    pub multiplicity: usize,
    pub dist_to_c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroReport {
    pub q: i64,
    pub zeros: Vec<ZetaZero>,
    pub max_dist_to_c: f64,
}

impl ZeroReport {
    pub fn total_multiplicity(&self) -> usize {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    pub fn all_on_c(&self, tol: f64) -> bool {
        self.max_dist_to_c <= tol
    }

    /// CSV with header `re,im,multiplicity,dist_to_C`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("re,im,multiplicity,dist_to_C\n");
        for z in &self.zeros {
            out.push_str(&format!(
                "{:.17e},{:.17e},{},{:.6e}\n",
                z.root.re, z.root.im, z.multiplicity, z.dist_to_c
            ));
        }
        out
    }
}

/// Convenience wrapper for [`ZetaFunction::eval`].
pub fn zeta_eval(z: &ZetaFunction, u: Complex64) -> Result<Complex64> {
    z.eval(u)
}

/// Convenience wrapper for [`ZetaFunction::zeros`].
pub fn zeta_zeros(z: &ZetaFunction) -> Result<ZeroReport> {
    z.zeros()
}

/// Eigenvalues grouped into `(value, multiplicity)` clusters.
///
/// Adjacency spectra of covers are highly degenerate; evaluating one
/// logarithm per cluster is what makes grid sweeps over large tower levels
/// affordable.
pub fn eigenvalue_clusters(eigenvalues: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut out: Vec<(f64, usize, f64)> = Vec::new();
    for &x in eigenvalues {
        match out.last_mut() {
            Some((first, count, sum)) if (x - *first).abs() <= tol => {
                *count += 1;
                *sum += x;
            }
            _ => out.push((x, 1, x)),
        }
    }
    out.into_iter()
        .map(|(_, count, sum)| (sum / count as f64, count))
        .collect()
}

const CLUSTER_TOLERANCE: f64 = 1e-11;

/// `sum_lambda log(1 - lambda u + q u^2)` with principal logarithms.
///
/// `u` must already be known to lie in `Omega`; a factor landing within the
/// boundary tolerance of the branch cut is reported as a domain error.
pub fn log_det_from_clusters(clusters: &[(f64, usize)], q: i64, u: Complex64) -> Result<Complex64> {
    let qu2 = u * u * q as f64;
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    for &(lambda, mult) in clusters {
        let f = one - u * lambda + qu2;
        if near_branch_cut(f) {
            return Err(ZetaError::domain(format!(
                "factor 1 - {lambda} u + {q} u^2 at u = {u} touches the branch cut"
            )));
        }
        acc += f.ln() * mult as f64;
    }
    Ok(acc)
}

/// Analytic `N`-th root of `det Delta(X,u)` on `Omega`:
/// `prod_lambda exp(log(1 - lambda u + q u^2) / N)`.
pub fn nth_root_det(g: &MultiGraph, n: u64, u: Complex64) -> Result<Complex64> {
    let root = DetRoot::new(g)?;
    root.eval(n, u)
}

/// Cached evaluator of the analytic roots of `det Delta` for one regular
/// graph.
#[derive(Debug, Clone)]
pub struct DetRoot {
    omega: RegionOmega,
    clusters: Vec<(f64, usize)>,
}

impl DetRoot {
    pub fn new(g: &MultiGraph) -> Result<Self> {
        let q = g.regularity().require_q("the analytic N-th root")?;
        let omega = RegionOmega::new(q)?;
        let clusters = eigenvalue_clusters(&g.spectrum()?.eigenvalues, CLUSTER_TOLERANCE);
        Ok(DetRoot { omega, clusters })
    }

    pub fn q(&self) -> i64 {
        self.omega.q()
    }

    pub fn log_det(&self, u: Complex64) -> Result<Complex64> {
        self.omega.require(u)?;
        log_det_from_clusters(&self.clusters, self.omega.q(), u)
    }

    pub fn eval(&self, n: u64, u: Complex64) -> Result<Complex64> {
        if n == 0 {
            return Err(ZetaError::input("root order must be at least 1"));
        }
        Ok((self.log_det(u)? / n as f64).exp())
    }
}

/// `Z(B_i,u)^{1/N_i} = (1-u^2)^{-chi(B)} (det Delta(B_i,u))^{1/N_i}` for a
/// level `g_i` of a tower over a base with Euler characteristic `chi_base`.
pub fn normalized_zeta(g: &MultiGraph, n: u64, chi_base: i64, u: Complex64) -> Result<Complex64> {
    NormalizedZeta::new(g, n, chi_base)?.eval(u)
}

/// Cached form of [`normalized_zeta`] for evaluation over many points.
#[derive(Debug, Clone)]
pub struct NormalizedZeta {
    root: DetRoot,
    index: u64,
    chi_base: i64,
}

impl NormalizedZeta {
    pub fn new(g: &MultiGraph, index: u64, chi_base: i64) -> Result<Self> {
        if index == 0 {
            return Err(ZetaError::input("cover index must be at least 1"));
        }
        if g.euler_characteristic() != index as i64 * chi_base {
            return Err(ZetaError::input(format!(
                "chi = {} is not {index} * {chi_base}; not an {index}-fold cover of the base",
                g.euler_characteristic()
            )));
        }
        Ok(NormalizedZeta {
            root: DetRoot::new(g)?,
            index,
            chi_base,
        })
    }

    pub fn q(&self) -> i64 {
        self.root.q()
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn eval(&self, u: Complex64) -> Result<Complex64> {
        let pre = (Complex64::new(1.0, 0.0) - u * u).powi(-self.chi_base as i32);
        Ok(pre * self.root.eval(self.index, u)?)
    }
}

/// Both sides of the functional equation
/// `Z(X, 1/(qu)) = ((1-u^2)/(q^2u^2-1))^chi q^{v-2e} u^{-2e} Z(X,u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: Complex64,
}

impl FunctionalCheck {
    /// `|residual| / max(|lhs|, |rhs|, 1)`.
    pub fn relative(&self) -> f64 {
        self.residual.norm() / self.lhs.norm().max(self.rhs.norm()).max(1.0)
    }
}

pub fn functional_equation_residual(g: &MultiGraph, u: Complex64) -> Result<FunctionalCheck> {
    let z = ZetaFunction::of(g)?;
    functional_equation_check(&z, g.vertex_count(), g.edge_count(), u)
}

/// Functional equation for an already computed zeta of a graph with `v`
/// vertices and `e` edges.
pub fn functional_equation_check(z: &ZetaFunction, v: usize, e: usize, u: Complex64) -> Result<FunctionalCheck> {
    let q = z.regular_q("the functional equation")?;
    if q < 1 {
        return Err(ZetaError::Unsupported("functional equation needs q >= 1".into()));
    }
    let qf = q as f64;
    let one = Complex64::new(1.0, 0.0);
    let tol = BOUNDARY_TOLERANCE;
    if u.norm() < tol || (one - u * u).norm() < tol || (u * u * qf * qf - one).norm() < tol {
        return Err(ZetaError::domain(format!(
            "functional equation is singular at u = {u}"
        )));
    }
    let lhs = z.eval(one / (u * qf))?;
    let ratio = (one - u * u) / (u * u * qf * qf - one);
    let rhs = ratio.powi(z.chi as i32)
        * qf.powi(v as i32 - 2 * e as i32)
        * u.powi(-2 * e as i32)
        * z.eval(u)?;
    Ok(FunctionalCheck {
        lhs,
        rhs,
        residual: lhs - rhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eval_examples() {
        let c3 = ZetaFunction::of(&corpus::cycle(3)).unwrap();
        assert!((c3.eval(c(0.5, 0.0)).unwrap() - 0.765625).norm() < 1e-14);
        for g in corpus::standard_corpus() {
            let z = ZetaFunction::of(&g).unwrap();
            assert_eq!(z.eval(c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        }
        let k4 = ZetaFunction::of(&corpus::complete(4)).unwrap();
        assert!(k4.eval(c(0.5, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn pole_when_chi_positive() {
        let two_points = MultiGraph::new(2, vec![]).unwrap();
        let z = ZetaFunction::of(&two_points).unwrap();
        assert!(matches!(z.eval(c(1.0, 0.0)), Err(ZetaError::Domain(_))));
        assert!(z.eval(c(0.5, 0.0)).is_ok());
    }

    #[test]
    fn zeros_of_triangle_are_cube_roots_of_unity() {
        let z = ZetaFunction::of(&corpus::cycle(3)).unwrap().zeros().unwrap();
        assert_eq!(z.zeros.len(), 3);
        for zero in &z.zeros {
            assert_eq!(zero.multiplicity, 2);
            assert!((zero.root.powi(3) - 1.0).norm() < 1e-12);
        }
        assert!(z.all_on_c(1e-8));
    }

    #[test]
    fn zeros_of_k4() {
        let z = ZetaFunction::of(&corpus::complete(4)).unwrap().zeros().unwrap();
        let mult = |target: Complex64| {
            z.zeros
                .iter()
                .find(|x| (x.root - target).norm() < 1e-9)
                .map(|x| x.multiplicity)
        };
        let s7 = 7f64.sqrt() / 4.0;
        assert_eq!(mult(c(1.0, 0.0)), Some(3));
        assert_eq!(mult(c(-1.0, 0.0)), Some(2));
        assert_eq!(mult(c(0.5, 0.0)), Some(1));
        assert_eq!(mult(c(-0.25, s7)), Some(3));
        assert_eq!(mult(c(-0.25, -s7)), Some(3));
        assert_eq!(z.total_multiplicity(), 12);
    }

    #[test]
    fn zeros_need_regularity() {
        let z = ZetaFunction::of(&corpus::path(3)).unwrap();
        assert!(matches!(z.zeros(), Err(ZetaError::Unsupported(_))));
    }

    #[test]
    fn zeros_annihilate_zeta() {
        for g in corpus::standard_corpus() {
            let z = ZetaFunction::of(&g).unwrap();
            let report = z.zeros().unwrap();
            assert_eq!(report.total_multiplicity(), 2 * g.edge_count());
            for zero in &report.zeros {
                let scale: f64 = z
                    .det_poly
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(k, a)| num_traits::ToPrimitive::to_f64(a).unwrap().abs() * zero.root.norm().powi(k as i32))
                    .sum();
                let val = z.det_poly.eval(zero.root);
                let pre = (c(1.0, 0.0) - zero.root * zero.root).norm();
                assert!(val.norm() < 1e-6 * scale || pre < 1e-12, "{:?} {}", g.name(), zero.root);
            }
        }
    }

    #[test]
    fn nth_root_examples() {
        let c4 = corpus::cycle(4);
        let v = nth_root_det(&c4, 2, c(0.5, 0.0)).unwrap();
        assert!((v - 0.9375).norm() < 1e-13);
        let k4 = corpus::complete(4);
        let u = c(0.1, 0.3);
        let p = det_poly(&k4).unwrap();
        assert!((nth_root_det(&k4, 1, u).unwrap() - p.eval(u)).norm() < 1e-12);
        assert!((nth_root_det(&k4, 7, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
        assert!(matches!(nth_root_det(&k4, 2, c(0.6, 0.0)), Err(ZetaError::Domain(_))));
        assert!(matches!(nth_root_det(&corpus::path(3), 2, u), Err(ZetaError::Unsupported(_))));
    }

    #[test]
    fn normalized_zeta_examples() {
        let c8 = corpus::cycle(8);
        let v = normalized_zeta(&c8, 8, 0, c(0.0, 0.5)).unwrap();
        let expected = (1.0f64 - 1.0 / 256.0).powf(0.25);
        assert!((v - expected).norm() < 1e-13);
        assert!((v.re - 0.999_022_003_720_1).abs() < 1e-12);
        assert!(matches!(normalized_zeta(&c8, 4, -1, c(0.1, 0.0)), Err(ZetaError::Input(_))));
        let k4 = corpus::complete(4);
        let u = c(0.2, -0.1);
        let direct = ZetaFunction::of(&k4).unwrap().eval(u).unwrap();
        assert!((normalized_zeta(&k4, 1, -2, u).unwrap() - direct).norm() < 1e-12);
        assert!((normalized_zeta(&k4, 1, -2, c(0.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn functional_equation_examples() {
        for (g, u) in [
            (corpus::complete(4), c(0.3, 0.1)),
            (corpus::petersen(), c(0.2, -0.25)),
            (corpus::complete(4), c(0.0, 0.5)),
        ] {
            let chk = functional_equation_residual(&g, u).unwrap();
            assert!(chk.relative() < 1e-12, "{:?}: {}", g.name(), chk.relative());
        }
        let k4 = corpus::complete(4);
        assert!(matches!(functional_equation_residual(&k4, c(0.0, 0.0)), Err(ZetaError::Domain(_))));
        assert!(matches!(functional_equation_residual(&k4, c(0.5, 0.0)), Err(ZetaError::Domain(_))));
    }

    #[test]
    fn functional_equation_random_points() {
        let mut rng = StdRng::seed_from_u64(3);
        for g in corpus::standard_corpus() {
            let z = ZetaFunction::of(&g).unwrap();
            for _ in 0..100 {
                let u = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                if let Ok(chk) = functional_equation_check(&z, g.vertex_count(), g.edge_count(), u) {
                    assert!(chk.relative() < 1e-9, "{:?} at {u}: {}", g.name(), chk.relative());
                }
            }
        }
    }

    #[test]
    fn log_coeffs_match_euler_product() {
        for g in corpus::standard_corpus() {
            let z = ZetaFunction::of(&g).unwrap();
            assert_eq!(z.log_coeffs(12).unwrap(), euler_log_coeffs(&g, 12).unwrap(), "{:?}", g.name());
        }
    }

    #[test]
    fn clusters_merge_close_values() {
        let cl = eigenvalue_clusters(&[-1.0, -1.0 + 1e-13, 0.5, 3.0], 1e-11);
        assert_eq!(cl.len(), 3);
        assert_eq!(cl[0].1, 2);
    }
}
