//! The closed set `C` carrying all zeta zeros of a `(q+1)`-regular graph,
//! and the open region `Omega` it encloses.
//!
//! `C` is the circle `|u| = q^{-1/2}` together with the real segments
//! `[-1, -1/q]` and `[1/q, 1]`. `Omega` is the open disk `|u| < q^{-1/2}`
//! with the real slits `|u| >= 1/q` removed. On `Omega` every factor
//! `1 - lambda u + q u^2` with `lambda` in `[-(q+1), q+1]` avoids the
//! closed negative real axis, so principal logarithms are analytic there.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ZetaError};

/// Inputs closer than this to `C`, or to a branch cut, are rejected.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionOmega {
    q: i64,
}

impl RegionOmega {
    pub fn new(q: i64) -> Result<Self> {
        if q < 1 {
            return Err(ZetaError::input(format!("Omega needs q >= 1, got {q}")));
        }
        Ok(RegionOmega { q })
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// `q^{-1/2}`.
    pub fn radius(&self) -> f64 {
        (self.q as f64).sqrt().recip()
    }

    /// `1/q`, where the real slits begin.
    pub fn slit_start(&self) -> f64 {
        (self.q as f64).recip()
    }

    /// Distance from `u` to the rays `{t real : |t| >= 1/q}`.
    pub fn distance_to_slits(&self, u: Complex64) -> f64 {
        let s = self.slit_start();
        let x = u.re.abs();
        if x >= s {
            u.im.abs()
        } else {
            (s - x).hypot(u.im)
        }
    }

    /// Open-set membership.
    pub fn contains(&self, u: Complex64) -> bool {
        u.norm() < self.radius() && !(u.im == 0.0 && u.re.abs() >= self.slit_start())
    }

    /// Membership at least `margin` away from the circle and the slits.
    pub fn contains_with_margin(&self, u: Complex64, margin: f64) -> bool {
        self.contains(u)
            && u.norm() <= self.radius() - margin
            && self.distance_to_slits(u) >= margin
    }

    /// Distance from `u` to the set `C`.
    pub fn distance_to_c(&self, u: Complex64) -> f64 {
        let circle = (u.norm() - self.radius()).abs();
        let lo = self.slit_start();
        let seg = |a: f64, b: f64| {
            let t = u.re.clamp(a, b);
            (u.re - t).hypot(u.im)
        };
        circle.min(seg(lo, 1.0)).min(seg(-1.0, -lo))
    }

    /// Domain check used by every evaluator defined on `Omega`.
    pub fn require(&self, u: Complex64) -> Result<()> {
        if self.contains_with_margin(u, BOUNDARY_TOLERANCE) {
            Ok(())
        } else {
            Err(ZetaError::domain(format!(
                "u = {u} is not inside Omega for q = {}",
                self.q
            )))
        }
    }

    /// `C` as polylines for plotting: the circle sampled at `samples`
    /// points (closed), then each real segment as a two-point line.
    /// Rows are `(piece, x, y)`.
    pub fn c_polyline(&self, samples: usize) -> Vec<(usize, f64, f64)> {
        let r = self.radius();
        let mut out: Vec<(usize, f64, f64)> = (0..=samples)
            .map(|j| {
                let t = std::f64::consts::TAU * j as f64 / samples as f64;
                (0, r * t.cos(), r * t.sin())
            })
            .collect();
        let s = self.slit_start();
        out.extend([(1, s, 0.0), (1, 1.0, 0.0), (2, -1.0, 0.0), (2, -s, 0.0)]);
        out
    }
}

/// True iff `u` lies in `Omega` for this `q`, at least `margin` away from
/// the circle and from the real slits.
pub fn omega_contains(q: i64, u: Complex64, margin: f64) -> bool {
    RegionOmega::new(q).is_ok_and(|o| o.contains_with_margin(u, margin))
}

/// True when `z` lies within the boundary tolerance of `(-inf, 0]`.
pub(crate) fn near_branch_cut(z: Complex64) -> bool {
    z.re <= BOUNDARY_TOLERANCE && z.im.abs() <= BOUNDARY_TOLERANCE
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        assert!(omega_contains(2, c(0.0, 0.3), 0.0));
        assert!(!omega_contains(2, c(0.6, 0.0), 0.0));
        assert!(omega_contains(2, c(0.4, 0.0), 0.0));
        assert!(!omega_contains(2, c(0.0, 0.71), 0.0));
        assert!(!omega_contains(0, c(0.0, 0.0), 0.0));
        // just off the slit is inside
        assert!(omega_contains(2, c(0.6, 1e-3), 0.0));
        assert!(!omega_contains(2, c(0.6, 1e-3), 0.01));
    }

    #[test]
    fn q_one_is_the_unit_disk() {
        let o = RegionOmega::new(1).unwrap();
        assert!(o.contains(c(0.999, 0.0)));
        assert!(!o.contains(c(1.0, 0.0)));
        assert!(o.contains(c(-0.5, 0.5)));
    }

    #[test]
    fn distance_to_c() {
        let o = RegionOmega::new(2).unwrap();
        assert!(o.distance_to_c(c(0.7, 0.0)) < 1e-15);
        assert!(o.distance_to_c(c(-0.9, 0.0)) < 1e-15);
        assert!((o.distance_to_c(c(0.0, 0.0)) - 0.5).abs() < 1e-15);
        let on_circle = Complex64::from_polar(o.radius(), 1.0);
        assert!(o.distance_to_c(on_circle) < 1e-15);
    }

    #[test]
    fn c_and_omega_are_disjoint() {
        for q in 1..6 {
            let o = RegionOmega::new(q).unwrap();
            for (_, x, y) in o.c_polyline(64) {
                assert!(!o.contains(c(x, y)) || o.distance_to_c(c(x, y)) > 0.0);
                assert!(!o.contains_with_margin(c(x, y), 1e-9));
            }
        }
    }
}
