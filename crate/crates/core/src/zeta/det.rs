//! The determinant polynomial `det(I - delta u + Q u^2)`.
//!
//! The coefficients are integers, so the fast route samples the
//! determinant on a circle, inverts the discrete Fourier transform, rounds,
//! and then checks the rounded polynomial against fresh determinant
//! evaluations. Small graphs fall back to fraction-free elimination over
//! `Z[u]` when that check fails.

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::FromPrimitive;

use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;
use crate::poly::IntPolynomial;

/// Largest vertex count for which the exact elimination fallback runs.
pub const EXACT_FALLBACK_MAX_VERTICES: usize = 64;

/// Relative residual accepted when re-checking an interpolated polynomial.
pub const INTERPOLATION_RESIDUAL: f64 = 1e-6;

// Beyond this a rounded double no longer pins down an integer.
const MAX_RELIABLE_COEFF: f64 = 4.0e15;

/// `I - delta u + Q u^2` at a complex point.
pub fn laplace_matrix(g: &MultiGraph, u: Complex64) -> DMatrix<Complex64> {
    let n = g.vertex_count();
    let adj = g.adjacency_matrix();
    let deg = g.degrees();
    DMatrix::from_fn(n, n, |i, j| {
        let mut z = -u * adj[(i, j)];
        if i == j {
            z += Complex64::new(1.0, 0.0) + u * u * (deg[i] as f64 - 1.0);
        }
        z
    })
}

/// `det(I - delta u + Q u^2)` by LU factorisation.
pub fn numeric_det(g: &MultiGraph, u: Complex64) -> Complex64 {
    laplace_matrix(g, u).determinant()
}

/// Exact determinant polynomial.
pub fn det_poly(g: &MultiGraph) -> Result<IntPolynomial> {
    // the leading coefficient is det(Q) exactly; no point sampling past it
    let log_leading: f64 = g.degrees().iter().map(|&d| (d.max(2) as f64 - 1.0).ln()).sum();
    if log_leading > MAX_RELIABLE_COEFF.ln() {
        if g.vertex_count() <= EXACT_FALLBACK_MAX_VERTICES {
            return det_poly_exact(g);
        }
        return Err(ZetaError::Resource(format!(
            "determinant polynomial of a {}-vertex graph has coefficients beyond 2^52; \
             exact elimination is limited to {EXACT_FALLBACK_MAX_VERTICES} vertices",
            g.vertex_count()
        )));
    }
    match interpolate(g) {
        Ok(p) => Ok(p),
        Err(_) if g.vertex_count() <= EXACT_FALLBACK_MAX_VERTICES => det_poly_exact(g),
        Err(e) => Err(e),
    }
}

fn sample_radius(g: &MultiGraph) -> f64 {
    let q = g.max_degree().saturating_sub(1).max(1) as f64;
    q.sqrt().recip()
}

fn interpolate(g: &MultiGraph) -> Result<IntPolynomial> {
    let v = g.vertex_count();
    let n = 2 * v + 1;
    let r = sample_radius(g);
    let samples: Vec<Complex64> = (0..n)
        .map(|j| numeric_det(g, Complex64::from_polar(r, TAU * j as f64 / n as f64)))
        .collect();
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, s) in samples.iter().enumerate() {
            let angle = -TAU * ((j * k) % n) as f64 / n as f64;
            acc += s * Complex64::from_polar(1.0, angle);
        }
        let c = acc.re / (n as f64 * r.powi(k as i32));
        if !c.is_finite() || c.abs() > MAX_RELIABLE_COEFF {
            return Err(ZetaError::numeric(format!(
                "coefficient of u^{k} too large for interpolation"
            )));
        }
        coeffs.push(BigInt::from_f64(c.round()).unwrap());
    }
    let p = IntPolynomial::new(coeffs);
    verify(g, &p, r)?;
    Ok(p)
}

fn verify(g: &MultiGraph, p: &IntPolynomial, r: f64) -> Result<()> {
    let n = (2 * g.vertex_count() + 1) as f64;
    let fresh = [
        Complex64::from_polar(r, TAU * 0.5 / n),
        Complex64::from_polar(r, TAU * 0.37),
        Complex64::from_polar(0.5 * r, 1.1),
    ];
    let eigen = regular_eigen_product(g)?;
    for &z in &fresh {
        let approx = p.eval(z);
        let mut checks = vec![numeric_det(g, z)];
        if let Some(f) = &eigen {
            checks.push(f(z));
        }
        for exact in checks {
            let residual = (approx - exact).norm() / exact.norm().max(1.0);
            if !(residual < INTERPOLATION_RESIDUAL) {
                return Err(ZetaError::numeric(format!(
                    "interpolated determinant fails re-evaluation at {z} (residual {residual:e})"
                )));
            }
        }
    }
    Ok(())
}

type EigenProduct = Box<dyn Fn(Complex64) -> Complex64>;

// For a regular graph the determinant factors over the adjacency spectrum.
fn regular_eigen_product(g: &MultiGraph) -> Result<Option<EigenProduct>> {
    let Some(q) = g.regularity().q else {
        return Ok(None);
    };
    let eig = g.spectrum()?.eigenvalues.clone();
    let q = q as f64;
    Ok(Some(Box::new(move |u| {
        eig.iter()
            .map(|&l| Complex64::new(1.0, 0.0) - u * l + u * u * q)
            .product()
    })))
}

/// Fraction-free (Bareiss) elimination over `Z[u]`.
///
/// Every leading principal minor of `Delta(u)` has constant term 1 because
/// `Delta(0) = I`, so no pivoting is needed and each division is exact by a
/// divisor with unit constant term.
pub fn det_poly_exact(g: &MultiGraph) -> Result<IntPolynomial> {
    let n = g.vertex_count();
    let adj = g.adjacency_counts();
    let deg = g.degrees();
    let mut m: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        IntPolynomial::from_i64(&[1, -adj[i][i], deg[i] as i64 - 1])
                    } else {
                        IntPolynomial::from_i64(&[0, -adj[i][j]])
                    }
                })
                .collect()
        })
        .collect();
    let mut prev = IntPolynomial::one();
    for k in 0..n.saturating_sub(1) {
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    Ok(m[n - 1][n - 1].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn triangle_gives_one_minus_u_cubed_squared() {
        let p = det_poly(&corpus::cycle(3)).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[1, 0, 0, -2, 0, 0, 1]));
    }

    #[test]
    fn k4_factorisation() {
        // (1-u)(1-2u)(1+u+2u^2)^3
        let expected = IntPolynomial::from_i64(&[1, -1])
            .mul(&IntPolynomial::from_i64(&[1, -2]))
            .mul(&IntPolynomial::from_i64(&[1, 1, 2]).pow(3));
        assert_eq!(det_poly(&corpus::complete(4)).unwrap(), expected);
        assert_eq!(det_poly_exact(&corpus::complete(4)).unwrap(), expected);
    }

    #[test]
    fn bouquet_two() {
        let p = det_poly(&corpus::bouquet(2)).unwrap();
        assert_eq!(p, IntPolynomial::from_i64(&[1, -4, 3]));
    }

    #[test]
    fn interpolation_agrees_with_elimination() {
        let mut graphs = corpus::standard_corpus();
        graphs.push(corpus::path(5));
        graphs.push(MultiGraph::new(3, vec![(0, 1), (1, 1), (1, 2), (2, 2), (0, 0)]).unwrap());
        graphs.push(MultiGraph::new(2, vec![(0, 1)]).unwrap());
        for g in graphs {
            assert_eq!(det_poly(&g).unwrap(), det_poly_exact(&g).unwrap(), "{:?}", g.name());
        }
    }

    #[test]
    fn leading_and_constant_terms() {
        for g in corpus::standard_corpus() {
            let p = det_poly(&g).unwrap();
            assert_eq!(p.coeff(0), BigInt::from(1));
            let lead: i64 = g.degrees().iter().map(|&d| d as i64 - 1).product();
            assert_eq!(p.degree(), Some(2 * g.vertex_count()));
            assert_eq!(p.leading_coefficient(), BigInt::from(lead));
        }
    }

    #[test]
    fn oversized_polynomial_is_refused_up_front() {
        let g = corpus::random_regular(80, 3, &mut <rand::rngs::StdRng as rand::SeedableRng>::seed_from_u64(1));
        assert!(matches!(det_poly(&g), Err(ZetaError::Resource(_))));
    }
}
