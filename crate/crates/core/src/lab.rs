//! Numerical audit of convergence along towers.
//!
//! For a tower `B_i` of covers of `B` inside an infinite cover `Y`, the
//! normalised zetas `Z(B_i,u)^{1/N_i}` converge to `Z_pi(Y,u)` uniformly on
//! compact subsets of `Omega`. Here the compact set is a finite grid in a
//! disk kept a fixed margin away from `C`, and the report records the
//! largest error at each level.

use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::covers::{LimitCover, Tower};
use crate::error::{Result, ZetaError};
use crate::graph::MultiGraph;
use crate::l2::{empirical_cdf, tree_l2_reference, L2Zeta};
use crate::zeta::{NormalizedZeta, RegionOmega, ZetaFunction};

/// A square grid clipped to a disk inside `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub q: i64,
    pub radius: f64,
    pub resolution: usize,
    pub margin: f64,
}

impl GridSpec {
    /// Fails unless the closed disk of `radius` stays `margin` inside the
    /// circle `|u| = q^{-1/2}`. Points within `margin` of the real slits are
    /// left out of [`GridSpec::points`].
    pub fn new(q: i64, radius: f64, resolution: usize, margin: f64) -> Result<Self> {
        let omega = RegionOmega::new(q)?;
        if !(radius > 0.0) || !(margin >= 0.0) || resolution < 2 {
            return Err(ZetaError::input(
                "grid needs radius > 0, margin >= 0 and resolution >= 2",
            ));
        }
        if radius > omega.radius() - margin {
            return Err(ZetaError::input(format!(
                "grid radius {radius} with margin {margin} reaches past |u| = q^(-1/2) = {}",
                omega.radius()
            )));
        }
        Ok(GridSpec {
            q,
            radius,
            resolution,
            margin,
        })
    }

    /// `0.05 q^{-1/2}`.
    pub fn default_margin(q: i64) -> f64 {
        0.05 / (q as f64).sqrt()
    }

    /// Parses `disk:<radius>:<resolution>:<margin>`.
    pub fn parse(text: &str, q: i64) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || ZetaError::input(format!("grid {text:?} is not disk:<radius>:<resolution>:<margin>"));
        if parts.len() != 4 || parts[0] != "disk" {
            return Err(bad());
        }
        let radius = f64::from_str(parts[1]).map_err(|_| bad())?;
        let resolution = usize::from_str(parts[2]).map_err(|_| bad())?;
        let margin = f64::from_str(parts[3]).map_err(|_| bad())?;
        GridSpec::new(q, radius, resolution, margin)
    }

    pub fn describe(&self) -> String {
        format!("disk:{}:{}:{}", self.radius, self.resolution, self.margin)
    }

    /// Grid points in row-major order (imaginary part outer, real part inner).
    pub fn points(&self) -> Vec<Complex64> {
        let omega = RegionOmega::new(self.q).expect("validated at construction");
        let n = self.resolution;
        let step = 2.0 * self.radius / (n - 1) as f64;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let u = Complex64::new(-self.radius + step * j as f64, -self.radius + step * i as f64);
                if u.norm() <= self.radius * (1.0 + 1e-12)
                    && omega.contains_with_margin(u, self.margin)
                {
                    out.push(u);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelRow {
    pub level: usize,
    pub index: u64,
    pub vertices: usize,
    pub sup_error: f64,
    pub argmax: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorPoint {
    pub level: usize,
    pub u: Complex64,
    pub value: Complex64,
    pub target: Complex64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub target: String,
    pub grid: GridSpec,
    pub grid_points: usize,
    pub tower: String,
    /// False when the tower's limit cover is not known from its construction.
    pub limit_verified: bool,
    pub rows: Vec<LevelRow>,
    #[serde(skip)]
    pub error_field: Vec<ErrorPoint>,
}

impl ConvergenceReport {
    pub fn sup_errors(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.sup_error).collect()
    }

    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].sup_error < w[0].sup_error)
    }

    /// CSV `level,index,re,im,value_re,value_im,target_re,target_im,error`.
    pub fn error_field_csv(&self) -> String {
        let mut out = String::from("level,index,re,im,value_re,value_im,target_re,target_im,error\n");
        for p in &self.error_field {
            let index = self.rows[p.level].index;
            out.push_str(&format!(
                "{},{},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e},{:.17e}\n",
                p.level + 1,
                index,
                p.u.re,
                p.u.im,
                p.value.re,
                p.value.im,
                p.target.re,
                p.target.im,
                p.error
            ));
        }
        out
    }
}

/// Sup-norm distance between each level's normalised zeta and `target` on
/// the grid.
pub fn tower_convergence(tower: &Tower, target: &L2Zeta, grid: &GridSpec) -> Result<ConvergenceReport> {
    if target.q != grid.q {
        return Err(ZetaError::input(format!(
            "target has q = {} but the grid has q = {}",
            target.q, grid.q
        )));
    }
    let chi_base = tower.base.euler_characteristic();
    let points = grid.points();
    let targets: Vec<Complex64> = points
        .par_iter()
        .map(|&u| target.eval(u))
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(tower.levels.len());
    let mut field = Vec::new();
    for (level, l) in tower.levels.iter().enumerate() {
        let q = l.graph.regularity().q;
        if q != Some(grid.q) {
            return Err(ZetaError::input(format!(
                "tower level {} is not {}-regular",
                level + 1,
                grid.q + 1
            )));
        }
        let z = NormalizedZeta::new(&l.graph, l.index, chi_base)?;
        let values: Vec<Complex64> = points.par_iter().map(|&u| z.eval(u)).collect::<Result<_>>()?;
        let mut sup_error = 0.0;
        let mut argmax = Complex64::new(0.0, 0.0);
        for ((&u, &value), &t) in points.iter().zip(&values).zip(&targets) {
            let error = (value - t).norm();
            if error > sup_error {
                sup_error = error;
                argmax = u;
            }
            field.push(ErrorPoint { level, u, value, target: t, error });
        }
        rows.push(LevelRow {
            level: level + 1,
            index: l.index,
            vertices: l.graph.vertex_count(),
            sup_error,
            argmax,
        });
    }
    Ok(ConvergenceReport {
        target: target.description.clone(),
        grid: *grid,
        grid_points: points.len(),
        tower: tower.provenance.clone(),
        limit_verified: tower.limit != LimitCover::Unverified,
        rows,
        error_field: field,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub level: usize,
    pub index: u64,
    pub sup_distance: f64,
}

/// `sup |F_i(lambda) - F(lambda)|` over `lambda_grid` for every level.
/// The grid should avoid atoms of the target.
pub fn cdf_convergence<F>(tower: &Tower, target: F, lambda_grid: &[f64]) -> Result<Vec<CdfRow>>
where
    F: Fn(f64) -> f64,
{
    tower
        .levels
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let cdf = empirical_cdf(l.graph.spectrum()?, l.index);
            let sup_distance = lambda_grid
                .iter()
                .map(|&x| (cdf.eval(x) - target(x)).abs())
                .fold(0.0, f64::max);
            Ok(CdfRow {
                level: i + 1,
                index: l.index,
                sup_distance,
            })
        })
        .collect()
}

/// `|Z(B,u) Det_pi Delta(Y,u) - det Delta(B,u)|` for the tree `Y` covering
/// a connected regular base, where `Det_pi Delta(Y,u) = (1-u^2)^chi(B)`.
pub fn deitmar_residual(base: &MultiGraph, u: Complex64) -> Result<f64> {
    DeitmarCheck::new(base)?.residual(u)
}

/// Reusable form of [`deitmar_residual`] for sweeps over many points.
#[derive(Debug, Clone)]
pub struct DeitmarCheck {
    zeta: ZetaFunction,
    tree: L2Zeta,
}

impl DeitmarCheck {
    pub fn new(base: &MultiGraph) -> Result<Self> {
        let q = base.regularity().require_q("the tree determinant identity")?;
        if !base.is_connected() {
            return Err(ZetaError::input("the base must be connected"));
        }
        Ok(DeitmarCheck {
            zeta: ZetaFunction::of(base)?,
            tree: tree_l2_reference(q, base.euler_characteristic()),
        })
    }

    pub fn residual(&self, u: Complex64) -> Result<f64> {
        let det_pi = self.tree.det_pi(u)?;
        let lhs = self.zeta.eval(u)? * det_pi;
        Ok((lhs - self.zeta.det_poly.eval(u)).norm())
    }
}
