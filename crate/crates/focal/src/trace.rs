//! Numeric arc extraction: marching squares over a grid window with
//! bisection-refined crossings, validity filtering, and edge chaining.
//!
//! Tracing works on any scalar field. For derived curves the field is the
//! implicit polynomial and every refined crossing must additionally pass
//! the recorded constraints and the residual of the defining relation;
//! crossings that sit on the implicit curve but fail those checks are
//! phantom-branch points and land in `zariski_rejects`. For raw scenes the
//! field is the residual itself and no filtering is needed.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::eliminate::DerivedCurve;
use crate::scene::FocalScene;

/// Bisection iterations per crossing: the bracket shrinks below float
/// resolution long before this many halvings.
pub const BISECTION_STEPS: u32 = 60;

/// Relative slack for constraint filtering at segment endpoints, so true
/// boundary points survive float rounding.
pub const CONSTRAINT_SLACK: f64 = 1e-9;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TraceError {
    #[error("window must have positive extent")]
    EmptyWindow,
    #[error("window bounds must be finite")]
    NonFiniteWindow,
    #[error("grid resolution must be at least 2 in each direction")]
    TooCoarse,
    #[error("point set is empty")]
    EmptyPointSet,
}

/// Axis-aligned sampling window with `nx * ny` cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Window {
    pub fn new(
        xmin: f64,
        xmax: f64,
        ymin: f64,
        ymax: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Self, TraceError> {
        if ![xmin, xmax, ymin, ymax].iter().all(|v| v.is_finite()) {
            return Err(TraceError::NonFiniteWindow);
        }
        if xmin >= xmax || ymin >= ymax {
            return Err(TraceError::EmptyWindow);
        }
        if nx < 2 || ny < 2 {
            return Err(TraceError::TooCoarse);
        }
        Ok(Self { xmin, xmax, ymin, ymax, nx, ny })
    }

    /// Square window centered like `[-half, half]^2`.
    pub fn square(half: f64, n: usize) -> Result<Self, TraceError> {
        Self::new(-half, half, -half, half, n, n)
    }

    pub fn x_at(&self, ix: usize) -> f64 {
        self.xmin + (self.xmax - self.xmin) * (ix as f64 / self.nx as f64)
    }

    pub fn y_at(&self, iy: usize) -> f64 {
        self.ymin + (self.ymax - self.ymin) * (iy as f64 / self.ny as f64)
    }

    pub fn cell_diagonal(&self) -> f64 {
        let dx = (self.xmax - self.xmin) / self.nx as f64;
        let dy = (self.ymax - self.ymin) / self.ny as f64;
        dx.hypot(dy)
    }
}

/// Ordered vertex list of one traced arc.
#[derive(Clone, Debug, PartialEq)]
pub struct Polyline {
    pub points: Vec<(f64, f64)>,
    pub closed: bool,
}

impl Polyline {
    pub fn length(&self) -> f64 {
        let mut len = 0.0;
        for pair in self.points.windows(2) {
            len += (pair[1].0 - pair[0].0).hypot(pair[1].1 - pair[0].1);
        }
        if self.closed && self.points.len() > 2 {
            let (first, last) = (self.points[0], *self.points.last().unwrap());
            len += (first.0 - last.0).hypot(first.1 - last.1);
        }
        len
    }
}

/// Crossing that lies on the traced field's zero set but fails the
/// validity checks: a point of the Zariski closure only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Reject {
    pub x: f64,
    pub y: f64,
    pub w_abs: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ArcStats {
    pub arc_count: usize,
    pub vertex_count: usize,
    pub reject_count: usize,
    /// Largest defining-relation residual over kept vertices.
    pub max_abs_w: f64,
    pub total_length: f64,
}

#[derive(Clone, Debug)]
pub struct ArcSet {
    pub arcs: Vec<Polyline>,
    pub zariski_rejects: Vec<Reject>,
    pub stats: ArcStats,
}

impl ArcSet {
    /// All kept vertices in arc order.
    pub fn vertices(&self) -> Vec<(f64, f64)> {
        self.arcs.iter().flat_map(|a| a.points.iter().copied()).collect()
    }
}

/// Grid edge between adjacent nodes. `H` leaves node `(ix, iy)` rightward,
/// `V` leaves it upward. Derived order keys all deterministic iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum EdgeKey {
    H(usize, usize),
    V(usize, usize),
}

fn inside(v: f64) -> bool {
    v > 0.0
}

/// Bisects for a sign change along the segment `p0..p1`, `v0 = f(p0)`.
fn refine<F: Fn(f64, f64) -> f64>(f: &F, p0: (f64, f64), p1: (f64, f64), v0: f64) -> (f64, f64) {
    let (mut a, mut b) = (p0, p1);
    let ina = inside(v0);
    for _ in 0..BISECTION_STEPS {
        let m = ((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5);
        if inside(f(m.0, m.1)) == ina {
            a = m;
        } else {
            b = m;
        }
    }
    ((a.0 + b.0) * 0.5, (a.1 + b.1) * 0.5)
}

struct RawTrace {
    crossings: BTreeMap<EdgeKey, (f64, f64)>,
    segments: Vec<(EdgeKey, EdgeKey)>,
}

/// Marching squares: evaluates the field on grid nodes (rows in parallel),
/// refines every sign-changing edge, and emits cell segments with saddle
/// cells disambiguated by a center sample.
fn march<F: Fn(f64, f64) -> f64 + Sync>(f: &F, win: &Window) -> RawTrace {
    let (nx, ny) = (win.nx, win.ny);
    let values: Vec<Vec<f64>> = (0..=ny)
        .into_par_iter()
        .map(|iy| {
            let y = win.y_at(iy);
            (0..=nx).map(|ix| f(win.x_at(ix), y)).collect()
        })
        .collect();

    let mut crossings = BTreeMap::new();
    for iy in 0..=ny {
        for ix in 0..nx {
            let (v0, v1) = (values[iy][ix], values[iy][ix + 1]);
            if inside(v0) != inside(v1) {
                let p0 = (win.x_at(ix), win.y_at(iy));
                let p1 = (win.x_at(ix + 1), win.y_at(iy));
                crossings.insert(EdgeKey::H(ix, iy), refine(f, p0, p1, v0));
            }
        }
    }
    for iy in 0..ny {
        for ix in 0..=nx {
            let (v0, v1) = (values[iy][ix], values[iy + 1][ix]);
            if inside(v0) != inside(v1) {
                let p0 = (win.x_at(ix), win.y_at(iy));
                let p1 = (win.x_at(ix), win.y_at(iy + 1));
                crossings.insert(EdgeKey::V(ix, iy), refine(f, p0, p1, v0));
            }
        }
    }

    // Local cell edges: bottom, right, top, left.
    #[derive(Clone, Copy)]
    enum E {
        B,
        R,
        T,
        L,
    }
    use E::*;

    let mut segments = Vec::new();
    for cy in 0..ny {
        for cx in 0..nx {
            let case = inside(values[cy][cx]) as u8
                | (inside(values[cy][cx + 1]) as u8) << 1
                | (inside(values[cy + 1][cx + 1]) as u8) << 2
                | (inside(values[cy + 1][cx]) as u8) << 3;
            let pairs: &[(E, E)] = match case {
                0 | 15 => &[],
                1 => &[(L, B)],
                2 => &[(B, R)],
                3 => &[(L, R)],
                4 => &[(T, R)],
                6 => &[(B, T)],
                7 => &[(L, T)],
                8 => &[(L, T)],
                9 => &[(B, T)],
                11 => &[(T, R)],
                12 => &[(L, R)],
                13 => &[(B, R)],
                14 => &[(L, B)],
                // Saddles: the center sample picks which diagonal the two
                // contour lines hug.
                5 | 10 => {
                    let cxm = (win.x_at(cx) + win.x_at(cx + 1)) * 0.5;
                    let cym = (win.y_at(cy) + win.y_at(cy + 1)) * 0.5;
                    let center = inside(f(cxm, cym));
                    match (case, center) {
                        (5, true) => &[(L, T), (B, R)],
                        (5, false) => &[(L, B), (T, R)],
                        (10, true) => &[(R, T), (L, B)],
                        (10, false) => &[(B, R), (L, T)],
                        _ => unreachable!(),
                    }
                }
                _ => unreachable!(),
            };
            let key = |e: E| -> EdgeKey {
                match e {
                    B => EdgeKey::H(cx, cy),
                    T => EdgeKey::H(cx, cy + 1),
                    L => EdgeKey::V(cx, cy),
                    R => EdgeKey::V(cx + 1, cy),
                }
            };
            for &(a, b) in pairs {
                segments.push((key(a), key(b)));
            }
        }
    }
    RawTrace { crossings, segments }
}

/// Filters crossings through `keep`, drops segments touching a rejected
/// crossing, chains the survivors into polylines, and gathers stats.
/// `keep` returns the defining-relation residual magnitude and whether the
/// point belongs to the true locus.
fn assemble<K: Fn(f64, f64) -> (bool, f64)>(raw: RawTrace, keep: K) -> ArcSet {
    let mut kept = BTreeMap::new();
    let mut rejects = Vec::new();
    let mut max_abs_w = 0.0_f64;
    for (&edge, &(x, y)) in &raw.crossings {
        let (ok, w_abs) = keep(x, y);
        if ok {
            max_abs_w = max_abs_w.max(w_abs);
            kept.insert(edge, (x, y));
        } else {
            rejects.push(Reject { x, y, w_abs });
        }
    }
    let segments: Vec<(EdgeKey, EdgeKey)> = raw
        .segments
        .into_iter()
        .filter(|(a, b)| kept.contains_key(a) && kept.contains_key(b))
        .collect();

    let arcs = chain(&kept, &segments);
    let stats = ArcStats {
        arc_count: arcs.len(),
        vertex_count: arcs.iter().map(|a| a.points.len()).sum(),
        reject_count: rejects.len(),
        max_abs_w,
        total_length: arcs.iter().map(Polyline::length).sum(),
    };
    ArcSet { arcs, zariski_rejects: rejects, stats }
}

/// Joins segments sharing grid edges into maximal paths and cycles. Every
/// edge touches at most two segments, so the adjacency graph decomposes
/// into simple chains; open chains are walked first from their endpoints,
/// then leftover cycles, both in deterministic edge order.
fn chain(
    crossings: &BTreeMap<EdgeKey, (f64, f64)>,
    segments: &[(EdgeKey, EdgeKey)],
) -> Vec<Polyline> {
    let mut adjacency: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for (i, &(a, b)) in segments.iter().enumerate() {
        adjacency.entry(a).or_default().push(i);
        adjacency.entry(b).or_default().push(i);
    }
    let mut used = vec![false; segments.len()];
    let mut arcs = Vec::new();

    // Open chains start at degree-1 edges.
    let starts: Vec<EdgeKey> = adjacency
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(&e, _)| e)
        .collect();
    for start in starts {
        if let Some(arc) = walk_chain(crossings, segments, &adjacency, &mut used, start, false) {
            arcs.push(arc);
        }
    }
    // Remaining segments form cycles.
    let cycle_starts: Vec<EdgeKey> = adjacency.keys().copied().collect();
    for start in cycle_starts {
        if let Some(arc) = walk_chain(crossings, segments, &adjacency, &mut used, start, true) {
            arcs.push(arc);
        }
    }
    arcs
}

fn walk_chain(
    crossings: &BTreeMap<EdgeKey, (f64, f64)>,
    segments: &[(EdgeKey, EdgeKey)],
    adjacency: &BTreeMap<EdgeKey, Vec<usize>>,
    used: &mut [bool],
    start: EdgeKey,
    cycle_pass: bool,
) -> Option<Polyline> {
    let mut current = start;
    let mut points = vec![crossings[&current]];
    let mut moved = false;
    loop {
        let next_seg = adjacency[&current].iter().copied().find(|&i| !used[i]);
        let Some(seg) = next_seg else { break };
        used[seg] = true;
        let (a, b) = segments[seg];
        current = if a == current { b } else { a };
        if current == start {
            return Some(Polyline { points, closed: true });
        }
        points.push(crossings[&current]);
        moved = true;
    }
    if !moved {
        return None;
    }
    // Open chains discovered during the cycle pass can't happen: every
    // degree-1 endpoint was consumed earlier.
    debug_assert!(!cycle_pass || points.len() > 1);
    Some(Polyline { points, closed: false })
}

/// Traces the zero set of an arbitrary residual field.
pub fn trace_fn<F: Fn(f64, f64) -> f64 + Sync>(
    w: F,
    win: &Window,
    tol: f64,
) -> Result<ArcSet, TraceError> {
    let raw = march(&w, win);
    Ok(assemble(raw, |x, y| {
        let wv = w(x, y).abs();
        (wv <= tol, wv)
    }))
}

/// Traces the scene's full locus through its residual.
pub fn trace_residual(scene: &FocalScene, win: &Window, tol: f64) -> Result<ArcSet, TraceError> {
    trace_fn(|x, y| scene.residual(x, y), win, tol)
}

/// Traces the implicit polynomial of a derivation and keeps only crossings
/// that pass the recorded constraints and the defining relation `w`.
/// Everything else on the implicit curve is reported in `zariski_rejects`.
pub fn trace_implicit<F: Fn(f64, f64) -> f64 + Sync>(
    curve: &DerivedCurve,
    w: F,
    win: &Window,
    tol: f64,
) -> Result<ArcSet, TraceError> {
    let fp = curve.implicit.to_float();
    let raw = march(&|x, y| fp.eval(x, y), win);
    Ok(assemble(raw, |x, y| {
        let wv = w(x, y).abs();
        let ok = wv <= tol && curve.satisfies_constraints(x, y, CONSTRAINT_SLACK);
        (ok, wv)
    }))
}

/// Symmetric Hausdorff distance between two point sets.
pub fn hausdorff(a: &[(f64, f64)], b: &[(f64, f64)]) -> Result<f64, TraceError> {
    if a.is_empty() || b.is_empty() {
        return Err(TraceError::EmptyPointSet);
    }
    let directed = |from: &[(f64, f64)], to: &[(f64, f64)]| -> f64 {
        from.par_iter()
            .map(|p| {
                to.iter()
                    .map(|q| (p.0 - q.0).hypot(p.1 - q.1))
                    .fold(f64::INFINITY, f64::min)
            })
            .reduce(|| 0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}
