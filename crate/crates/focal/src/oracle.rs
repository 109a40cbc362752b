//! Brute-force curve points from the distance relation alone.
//!
//! The oracle never looks at an implicit polynomial or at constraint
//! bookkeeping: it scans grid rows and columns of the residual field for
//! sign changes and bisects each one down to the requested tolerance. Its
//! output is the ground truth that derivations and traced arc sets are
//! judged against; keeping this path free of shared logic is the point.

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::eliminate::DerivedCurve;
use crate::scene::FocalScene;
use crate::trace::Window;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle point set is empty")]
    EmptyPointSet,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OraclePoint {
    pub x: f64,
    pub y: f64,
    /// Residual magnitude left after bisection.
    pub w_abs: f64,
}

/// Deduplicated locus points found by scanning, in deterministic scan
/// order (rows bottom to top, then columns left to right).
#[derive(Clone, Debug)]
pub struct OraclePointSet {
    pub points: Vec<OraclePoint>,
    pub window: Window,
    pub tol: f64,
}

impl OraclePointSet {
    pub fn coordinates(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.x, p.y)).collect()
    }
}

/// Bisects `w` for a zero along an axis-aligned interval until the
/// residual magnitude drops below `tol` (a sign change brackets a zero, so
/// this terminates long before the iteration cap).
fn bisect_to_tol<F: Fn(f64, f64) -> f64>(
    w: &F,
    mut a: (f64, f64),
    mut b: (f64, f64),
    va: f64,
    tol: f64,
) -> OraclePoint {
    let positive_at_a = va > 0.0;
    let mut mid = ((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5);
    let mut vm = w(mid.0, mid.1);
    for _ in 0..100 {
        if vm.abs() <= tol {
            break;
        }
        if (vm > 0.0) == positive_at_a {
            a = mid;
        } else {
            b = mid;
        }
        mid = ((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5);
        vm = w(mid.0, mid.1);
    }
    OraclePoint { x: mid.0, y: mid.1, w_abs: vm.abs() }
}

/// Scans the residual field of an arbitrary relation.
pub fn oracle_points_fn<F: Fn(f64, f64) -> f64 + Sync>(
    w: F,
    win: &Window,
    tol: f64,
) -> OraclePointSet {
    let (nx, ny) = (win.nx, win.ny);
    let values: Vec<Vec<f64>> = (0..=ny)
        .into_par_iter()
        .map(|iy| {
            let y = win.y_at(iy);
            (0..=nx).map(|ix| w(win.x_at(ix), y)).collect()
        })
        .collect();

    let mut found = Vec::new();
    for iy in 0..=ny {
        let y = win.y_at(iy);
        for ix in 0..nx {
            let (v0, v1) = (values[iy][ix], values[iy][ix + 1]);
            if (v0 > 0.0) != (v1 > 0.0) {
                found.push(bisect_to_tol(&w, (win.x_at(ix), y), (win.x_at(ix + 1), y), v0, tol));
            }
        }
    }
    for ix in 0..=nx {
        let x = win.x_at(ix);
        for iy in 0..ny {
            let (v0, v1) = (values[iy][ix], values[iy + 1][ix]);
            if (v0 > 0.0) != (v1 > 0.0) {
                found.push(bisect_to_tol(&w, (x, win.y_at(iy)), (x, win.y_at(iy + 1)), v0, tol));
            }
        }
    }

    // Row and column scans meet near grid nodes; collapse anything closer
    // than half a cell diagonal, first arrival wins.
    let radius = win.cell_diagonal() * 0.5;
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    let mut points: Vec<OraclePoint> = Vec::new();
    'candidates: for p in found {
        let key = ((p.x / radius).floor() as i64, (p.y / radius).floor() as i64);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(ids) = buckets.get(&(key.0 + dx, key.1 + dy)) {
                    for &i in ids {
                        let q = &points[i];
                        if (p.x - q.x).hypot(p.y - q.y) < radius {
                            continue 'candidates;
                        }
                    }
                }
            }
        }
        buckets.entry(key).or_default().push(points.len());
        points.push(p);
    }
    OraclePointSet { points, window: *win, tol }
}

/// Scans the scene residual `sum alpha_i R_i + sum beta_j r_j - S`.
pub fn oracle_points(scene: &FocalScene, win: &Window, tol: f64) -> OraclePointSet {
    oracle_points_fn(|x, y| scene.residual(x, y), win, tol)
}

/// Outcome of checking a derivation against oracle points.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyReport {
    pub total: usize,
    pub implicit_failures: usize,
    pub constraint_failures: usize,
    /// Largest gradient-normalized implicit residual seen.
    pub worst_implicit: f64,
    /// Smallest scale-normalized constraint margin seen.
    pub worst_margin: f64,
    pub pass: bool,
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "oracle points checked: {}", self.total)?;
        writeln!(
            f,
            "implicit failures: {} (worst normalized residual {:.3e})",
            self.implicit_failures, self.worst_implicit
        )?;
        writeln!(
            f,
            "constraint failures: {} (worst margin {:.3e})",
            self.constraint_failures, self.worst_margin
        )?;
        write!(f, "verdict: {}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Requires every oracle point to satisfy the implicit polynomial (within
/// `tol`, normalized by the local gradient magnitude) and every recorded
/// constraint (within `tol` relative to coefficient scale; locus points
/// keep large margins, so a generous slack still catches a corrupted
/// derivation outright).
pub fn verify_derivation(
    curve: &DerivedCurve,
    points: &OraclePointSet,
    tol: f64,
) -> Result<VerifyReport, OracleError> {
    if points.points.is_empty() {
        return Err(OracleError::EmptyPointSet);
    }
    let fp = curve.implicit.to_float();
    let mut implicit_failures = 0;
    let mut constraint_failures = 0;
    let mut worst_implicit = 0.0_f64;
    let mut worst_margin = f64::INFINITY;
    for p in &points.points {
        let (x, y) = (p.x, p.y);
        let h = 1e-6 * x.abs().max(y.abs()).max(1.0);
        let gx = (fp.eval(x + h, y) - fp.eval(x - h, y)) / (2.0 * h);
        let gy = (fp.eval(x, y + h) - fp.eval(x, y - h)) / (2.0 * h);
        let normalized = fp.eval(x, y).abs() / (gx.hypot(gy) + 1.0);
        worst_implicit = worst_implicit.max(normalized);
        if normalized > tol {
            implicit_failures += 1;
        }
        let margin = curve
            .constraints
            .iter()
            .map(|c| c.margin(x, y) / c.scale())
            .fold(f64::INFINITY, f64::min);
        worst_margin = worst_margin.min(margin);
        if !curve.satisfies_constraints(x, y, tol) {
            constraint_failures += 1;
        }
    }
    Ok(VerifyReport {
        total: points.points.len(),
        implicit_failures,
        constraint_failures,
        worst_implicit,
        worst_margin,
        pass: implicit_failures == 0 && constraint_failures == 0,
    })
}
