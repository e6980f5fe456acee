//! Normalised eigenvalue-counting functions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::graph::SpectrumData;

/// Eigenvalues closer than this are treated as one atom, and a query point
/// within this distance of an atom counts it.
pub const CDF_TIE_TOLERANCE: f64 = 1e-9;

/// Right-continuous step function `F(lambda) = #{mu <= lambda} / N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralCDF {
    jump_points: Vec<f64>,
    /// `values[i]` is `F` on `[jump_points[i], jump_points[i+1])`.
    values: Vec<f64>,
    /// Mass of each atom.
    weights: Vec<f64>,
    normalization: u64,
}

impl SpectralCDF {
    /// Counting function of `eigenvalues` divided by `normalization`.
    pub fn from_eigenvalues(eigenvalues: &[f64], normalization: u64) -> Self {
        assert!(normalization >= 1, "normalization must be positive");
        let mut sorted = eigenvalues.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mut jump_points: Vec<f64> = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for x in sorted {
            match jump_points.last() {
                Some(&p) if x - p <= CDF_TIE_TOLERANCE => *counts.last_mut().unwrap() += 1,
                _ => {
                    jump_points.push(x);
                    counts.push(1);
                }
            }
        }
        let n = normalization as f64;
        let weights: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
        let mut running = 0usize;
        let values = counts
            .iter()
            .map(|&c| {
                running += c;
                running as f64 / n
            })
            .collect();
        SpectralCDF {
            jump_points,
            values,
            weights,
            normalization,
        }
    }

    pub fn jump_points(&self) -> &[f64] {
        &self.jump_points
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn normalization(&self) -> u64 {
        self.normalization
    }

    /// Total mass, `F` above the top of the spectrum.
    pub fn mass(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        let idx = self
            .jump_points
            .partition_point(|&p| p <= lambda + CDF_TIE_TOLERANCE);
        if idx == 0 {
            0.0
        } else {
            self.values[idx - 1]
        }
    }

    /// `int f dF` over the whole spectrum, atoms at the lower end included.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(f64) -> Complex64,
    {
        self.jump_points
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| f(x) * w)
            .sum()
    }

    /// CSV with header `lambda,F`, one row per jump.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,F\n");
        for (x, f) in self.jump_points.iter().zip(&self.values) {
            out.push_str(&format!("{x:.17e},{f:.17e}\n"));
        }
        out
    }
}

/// `F_i` for a tower level whose spectrum is `s` and whose index is `n`.
pub fn empirical_cdf(s: &SpectrumData, n: u64) -> SpectralCDF {
    SpectralCDF::from_eigenvalues(&s.eigenvalues, n)
}

/// Spectral distribution of the bi-infinite line: `1/2 + asin(lambda/2)/pi`
/// on `[-2, 2]`.
pub fn arcsine_cdf(lambda: f64) -> f64 {
    if lambda <= -2.0 {
        0.0
    } else if lambda >= 2.0 {
        1.0
    } else {
        0.5 + (lambda / 2.0).asin() / std::f64::consts::PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use proptest::prelude::*;

    #[test]
    fn cycle_four() {
        let f = empirical_cdf(corpus::cycle(4).spectrum().unwrap(), 4);
        assert_eq!(f.eval(0.0), 0.75);
        assert_eq!(f.eval(-2.5), 0.0);
        assert_eq!(f.eval(2.0), 1.0);
        assert_eq!(f.jump_points().len(), 3);
        assert_eq!(f.mass(), 1.0);
    }

    #[test]
    fn mass_over_multi_vertex_base() {
        // level with index 2 over a 4-vertex base
        let f = empirical_cdf(corpus::cycle(8).spectrum().unwrap(), 2);
        assert_eq!(f.mass(), 4.0);
    }

    #[test]
    fn arcsine_limits() {
        assert_eq!(arcsine_cdf(-3.0), 0.0);
        assert!((arcsine_cdf(0.0) - 0.5).abs() < 1e-15);
        assert_eq!(arcsine_cdf(2.0), 1.0);
    }

    proptest! {
        #[test]
        fn monotone_and_right_continuous(xs in proptest::collection::vec(-5.0f64..5.0, 1..40),
                                         probes in proptest::collection::vec(-6.0f64..6.0, 2..20)) {
            let f = SpectralCDF::from_eigenvalues(&xs, xs.len() as u64);
            let mut p = probes.clone();
            p.sort_by(f64::total_cmp);
            for w in p.windows(2) {
                prop_assert!(f.eval(w[0]) <= f.eval(w[1]));
            }
            for (&x, &v) in f.jump_points().iter().zip(f.values()) {
                prop_assert_eq!(f.eval(x), v);
            }
            prop_assert!((f.mass() - 1.0).abs() < 1e-12);
            prop_assert_eq!(f.eval(-6.0), 0.0);
        }
    }
}
