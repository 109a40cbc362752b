//! Built-in curve families: classical conics as one- and two-radical
//! relations, Cartesian ovals, the three-focus generalization of the
//! ellipse, and the equality curve of the Erdos-Mordell inequality.
//!
//! Each constructor returns a [`FamilyInstance`] bundling the scene, the
//! radical equation(s) describing its locus, and, where the family has a
//! closed form, expected values built by an independent route (direct
//! textbook polynomials or symmetric expansion formulas rather than the
//! squaring cascade) so derivations can be cross-checked.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::eliminate::{eliminate, Constraint, DerivedCurve, EliminateError, RadicalEquation};
use crate::poly2::{sqrt_exact, Poly2, Rational};
use crate::scene::{Directrix, FocalScene, Focus, SceneError};

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("family parameter `{0}` must be positive")]
    NonPositive(&'static str),
    #[error("ellipse needs a >= b > 0")]
    AxisOrder,
    #[error("focal distance is irrational: c^2 = {0} is not a rational square")]
    IrrationalFocalDistance(Rational),
    #[error("oval weights must be distinct positive integers")]
    BadOvalWeights,
    #[error("triangle vertices are collinear")]
    Collinear,
    #[error("instance has no symbolic equations; trace the residual instead")]
    NumericOnly,
    #[error(transparent)]
    Scene(#[from] SceneError),
    #[error(transparent)]
    Eliminate(#[from] EliminateError),
}

/// Which sign the second radical takes in a two-radical relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OvalBranch {
    Plus,
    Minus,
}

/// A named scene with its radical equations and optional frozen expectations.
///
/// `equations` holds one entry for single-locus families, the two sign
/// branches for the hyperbola, and the eight sign-region equations (region
/// mask order, mask 0 all-positive) for the Erdos-Mordell curve. It is
/// empty when the scene is not rationally normalizable; the residual field
/// still traces such instances.
#[derive(Clone, Debug)]
pub struct FamilyInstance {
    pub name: String,
    pub scene: FocalScene,
    pub equations: Vec<RadicalEquation>,
    pub expected_implicit: Option<Poly2>,
    pub expected_constraints: Option<Vec<Constraint>>,
    pub notes: String,
    /// The locus is `|sum alpha_i R_i| = S` (both hyperbola branches).
    abs_locus: bool,
}

impl FamilyInstance {
    /// Residual whose zero set is the family's full locus.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        let w = self.scene.residual(x, y);
        if self.abs_locus {
            let s = self.scene.s().to_f64().unwrap_or(f64::NAN);
            (w + s).abs() - s
        } else {
            w
        }
    }

    pub fn primary_equation(&self) -> Result<&RadicalEquation, FamilyError> {
        self.equations.first().ok_or(FamilyError::NumericOnly)
    }

    /// Elimination applied to the primary equation.
    pub fn derive(&self) -> Result<DerivedCurve, FamilyError> {
        Ok(eliminate(self.primary_equation()?)?)
    }
}

fn require_positive(r: &Rational, name: &'static str) -> Result<(), FamilyError> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(FamilyError::NonPositive(name))
    }
}

fn rational_sqrt(sq: Rational) -> Result<Rational, FamilyError> {
    sqrt_exact(&sq).ok_or(FamilyError::IrrationalFocalDistance(sq))
}

fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// `y^2 = 2 p x`: focus `(p/2, 0)`, directrix `x = -p/2`, equal distances.
pub fn parabola(p: Rational) -> Result<FamilyInstance, FamilyError> {
    require_positive(&p, "p")?;
    let half_p = &p / int(2);
    let scene = FocalScene::new(
        vec![Focus::new(half_p.clone(), int(0))],
        vec![int(1)],
        vec![Directrix::new(int(1), int(0), half_p.clone())?],
        vec![int(-1)],
        int(0),
    )?;
    let equation = RadicalEquation::new(scene.radical_terms(), scene.region_rhs(&[1])?)?;
    let expected_implicit =
        Some(Poly2::from_terms([(0, 2, int(1)), (1, 0, -(int(2) * &p))]));
    let expected_constraints = Some(vec![Constraint::geq(Poly2::from_terms([
        (1, 0, int(1)),
        (0, 0, half_p),
    ]))?]);
    Ok(FamilyInstance {
        name: "parabola".into(),
        scene,
        equations: vec![equation],
        expected_implicit,
        expected_constraints,
        notes: format!("y^2 = {}x; valid on the focus side of the directrix", int(2) * &p),
        abs_locus: false,
    })
}

/// `R1 + R2 = 2a` with foci `(+-c, 0)`, `c^2 = a^2 - b^2`.
pub fn ellipse(a: Rational, b: Rational) -> Result<FamilyInstance, FamilyError> {
    require_positive(&a, "a")?;
    require_positive(&b, "b")?;
    if a < b {
        return Err(FamilyError::AxisOrder);
    }
    let c = rational_sqrt(&a * &a - &b * &b)?;
    let scene = FocalScene::from_foci(
        vec![Focus::new(c.clone(), int(0)), Focus::new(-c.clone(), int(0))],
        vec![int(1), int(1)],
        int(2) * &a,
    )?;
    let equation =
        RadicalEquation::new(scene.radical_terms(), Poly2::constant(scene.s().clone()))?;
    let (a2, b2) = (&a * &a, &b * &b);
    let expected_implicit = Some(Poly2::from_terms([
        (2, 0, b2.clone()),
        (0, 2, a2.clone()),
        (0, 0, -(&a2 * &b2)),
    ]));
    // Both radicals positive: the kept region is the disc E1 >= 0, which
    // reduces to 2a^2 - c^2 - x^2 - y^2 >= 0.
    let expected_constraints = Some(vec![Constraint::geq(Poly2::from_terms([
        (2, 0, int(-1)),
        (0, 2, int(-1)),
        (0, 0, int(2) * &a2 - &c * &c),
    ]))?]);
    Ok(FamilyInstance {
        name: "ellipse".into(),
        scene,
        equations: vec![equation],
        expected_implicit,
        expected_constraints,
        notes: format!("semi-axes {a}, {b}; foci (+-{c}, 0)"),
        abs_locus: false,
    })
}

/// `|R1 - R2| = 2a` with foci `(+-c, 0)`, `c^2 = a^2 + b^2`. The two sign
/// branches carry the same implicit polynomial; the defining relation of
/// each branch separates them.
pub fn hyperbola(a: Rational, b: Rational) -> Result<FamilyInstance, FamilyError> {
    require_positive(&a, "a")?;
    require_positive(&b, "b")?;
    let c = rational_sqrt(&a * &a + &b * &b)?;
    let scene = FocalScene::from_foci(
        vec![Focus::new(c.clone(), int(0)), Focus::new(-c.clone(), int(0))],
        vec![int(1), int(-1)],
        int(2) * &a,
    )?;
    let rhs = Poly2::constant(scene.s().clone());
    let q1 = scene.squared_distance_poly(0)?;
    let q2 = scene.squared_distance_poly(1)?;
    let equations = vec![
        RadicalEquation::new(vec![(int(1), q1.clone()), (int(-1), q2.clone())], rhs.clone())?,
        RadicalEquation::new(vec![(int(-1), q1), (int(1), q2)], rhs)?,
    ];
    let (a2, b2) = (&a * &a, &b * &b);
    let expected_implicit = Some(Poly2::from_terms([
        (2, 0, b2.clone()),
        (0, 2, -a2.clone()),
        (0, 0, -(&a2 * &b2)),
    ]));
    // Mixed signs force E1 <= 0: x^2 + y^2 >= c^2 - 2a^2... rearranged as
    // x^2 + y^2 - (2a^2 - c^2) >= 0 with 2a^2 - c^2 = a^2 - b^2.
    let expected_constraints = Some(vec![Constraint::geq(Poly2::from_terms([
        (2, 0, int(1)),
        (0, 2, int(1)),
        (0, 0, &c * &c - int(2) * &a2),
    ]))?]);
    Ok(FamilyInstance {
        name: "hyperbola".into(),
        scene,
        equations,
        expected_implicit,
        expected_constraints,
        notes: format!("semi-axes {a}, {b}; foci (+-{c}, 0); two branches"),
        abs_locus: true,
    })
}

/// `m R1 +- n R2 = s` with foci `(+-c, 0)`: the Cartesian ovals.
pub fn cartesian_oval(
    c: Rational,
    m: u32,
    n: u32,
    s: Rational,
    branch: OvalBranch,
) -> Result<FamilyInstance, FamilyError> {
    require_positive(&c, "c")?;
    require_positive(&s, "s")?;
    if m == 0 || n == 0 || m == n {
        return Err(FamilyError::BadOvalWeights);
    }
    let (rm, rn) = (int(m as i64), int(n as i64));
    let second = match branch {
        OvalBranch::Plus => rn.clone(),
        OvalBranch::Minus => -rn.clone(),
    };
    let scene = FocalScene::from_foci(
        vec![Focus::new(c.clone(), int(0)), Focus::new(-c.clone(), int(0))],
        vec![rm.clone(), second],
        s.clone(),
    )?;
    let equation =
        RadicalEquation::new(scene.radical_terms(), Poly2::constant(s.clone()))?;

    // Independent expansion of the quartic. With u = m^2 + n^2,
    // v = m^2 - n^2, w = s^2 - c^2 u:
    //   v^2 (x^2 + y^2)^2 - 4cuv x (x^2 + y^2)
    //     + (2c^2 (3m^4 + 2m^2 n^2 + 3n^4) - 2 s^2 u) x^2
    //     + (2c^2 v^2 - 2 s^2 u) y^2
    //     + 4cvw x + w^2 - 4 c^4 m^2 n^2.
    // The same polynomial serves both branches: it depends on the weights
    // only through their squares.
    let (m2, n2) = (&rm * &rm, &rn * &rn);
    let u = &m2 + &n2;
    let v = &m2 - &n2;
    let s2 = &s * &s;
    let c2 = &c * &c;
    let w = &s2 - &(&c2 * &u);
    let v2 = &v * &v;
    let x2_coeff = int(2) * &c2 * (int(3) * &m2 * &m2 + int(2) * &m2 * &n2 + int(3) * &n2 * &n2)
        - int(2) * &s2 * &u;
    let y2_coeff = int(2) * &c2 * &v2 - int(2) * &s2 * &u;
    let expected_implicit = Some(Poly2::from_terms([
        (4, 0, v2.clone()),
        (2, 2, int(2) * &v2),
        (0, 4, v2.clone()),
        (3, 0, int(-4) * &c * &u * &v),
        (1, 2, int(-4) * &c * &u * &v),
        (2, 0, x2_coeff),
        (0, 2, y2_coeff),
        (1, 0, int(4) * &c * &v * &w),
        (0, 0, &w * &w - int(4) * &c2 * &c2 * &m2 * &n2),
    ]));
    // E1 = s^2 - m^2 Q1 - n^2 Q2 changes orientation with the branch:
    // interior of the limiting circle for plus, exterior for minus.
    let e1 = Poly2::from_terms([
        (2, 0, -u.clone()),
        (0, 2, -u.clone()),
        (1, 0, int(2) * &c * &v),
        (0, 0, &s2 - &(&c2 * &u)),
    ]);
    let expected_constraints = Some(vec![match branch {
        OvalBranch::Plus => Constraint::geq(e1)?,
        OvalBranch::Minus => Constraint::geq(-&e1)?,
    }]);
    let sign = match branch {
        OvalBranch::Plus => '+',
        OvalBranch::Minus => '-',
    };
    Ok(FamilyInstance {
        name: "cartesian_oval".into(),
        scene,
        equations: vec![equation],
        expected_implicit,
        expected_constraints,
        notes: format!("{m}*R1 {sign} {n}*R2 = {s}; foci (+-{c}, 0)"),
        abs_locus: false,
    })
}

/// `R1 + R2 + R3 = s` with foci `(a, 0)`, `(b, 0)`, `(0, h)`.
pub fn trifocal(
    a: Rational,
    b: Rational,
    h: Rational,
    s: Rational,
) -> Result<FamilyInstance, FamilyError> {
    require_positive(&s, "s")?;
    let scene = FocalScene::from_foci(
        vec![
            Focus::new(a.clone(), int(0)),
            Focus::new(b.clone(), int(0)),
            Focus::new(int(0), h.clone()),
        ],
        vec![int(1), int(1), int(1)],
        s.clone(),
    )?;
    let equation =
        RadicalEquation::new(scene.radical_terms(), Poly2::constant(s.clone()))?;

    // Independent route to the octic: the fully symmetric quartic
    //   E2 = s^4 + Q1^2 + Q2^2 + Q3^2
    //        - 2 s^2 (Q1 + Q2 + Q3) - 2 (Q1 Q2 + Q1 Q3 + Q2 Q3)
    // vanishes where sqrt(Q1 Q2 Q3) terms align, and the closure is
    //   64 s^2 Q1 Q2 Q3 - E2^2.
    let q1 = scene.squared_distance_poly(0)?;
    let q2 = scene.squared_distance_poly(1)?;
    let q3 = scene.squared_distance_poly(2)?;
    let s2 = &s * &s;
    let s2p = Poly2::constant(s2.clone());
    let s4 = Poly2::constant(&s2 * &s2);
    let sum_sq = &(&(&q1 * &q1) + &(&q2 * &q2)) + &(&q3 * &q3);
    let sum_q = &(&q1 + &q2) + &q3;
    let pair = &(&(&q1 * &q2) + &(&q1 * &q3)) + &(&q2 * &q3);
    let e2 = &(&(&s4 + &sum_sq) - &(&s2p * &sum_q).scale(&int(2))) - &pair.scale(&int(2));
    let prod = &(&q1 * &q2) * &q3;
    let octic = &prod.scale(&(int(64) * &s2)) - &(&e2 * &e2);
    let expected_implicit = Some(octic);
    // Reversibility conditions: two discs of radius s (around the isolated
    // focus and its reflection through the other two) and E2 itself.
    let disc1 = &Poly2::constant(s2.clone()) - &q3;
    let disc2 = &(&Poly2::constant(s2) + &q3) - &(&q1 + &q2);
    let expected_constraints = Some(vec![
        Constraint::geq(disc1)?,
        Constraint::geq(disc2)?,
        Constraint::geq(e2)?,
    ]);
    Ok(FamilyInstance {
        name: "trifocal".into(),
        scene,
        equations: vec![equation],
        expected_implicit,
        expected_constraints,
        notes: format!("R1 + R2 + R3 = {s}; foci ({a}, 0), ({b}, 0), (0, {h})"),
        abs_locus: false,
    })
}

/// Equality curve of the Erdos-Mordell inequality for a triangle:
/// `R1 + R2 + R3 = 2 (r1 + r2 + r3)` with vertex foci and side directrices.
///
/// Directrices are oriented so the open interior is the all-positive sign
/// region. When every side length is rational the instance carries the
/// eight sign-region equations in region mask order (bit `j` of the mask
/// set means directrix `j` takes sign -1); otherwise `equations` is empty
/// and only residual tracing applies.
pub fn erdos_mordell(vertices: [(Rational, Rational); 3]) -> Result<FamilyInstance, FamilyError> {
    let [a, b, c] = &vertices;
    let cross = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    if cross.is_zero() {
        return Err(FamilyError::Collinear);
    }

    // Side opposite vertex i, oriented positive toward that vertex.
    let side = |p: &(Rational, Rational),
                q: &(Rational, Rational),
                opp: &(Rational, Rational)|
     -> Result<Directrix, FamilyError> {
        let la = &q.1 - &p.1;
        let lb = &p.0 - &q.0;
        let lc = &q.0 * &p.1 - &p.0 * &q.1;
        let at_opp = &la * &opp.0 + &lb * &opp.1 + &lc;
        if at_opp.is_negative() {
            Ok(Directrix::new(-la, -lb, -lc)?)
        } else {
            Ok(Directrix::new(la, lb, lc)?)
        }
    };
    let directrices = vec![side(b, c, a)?, side(c, a, b)?, side(a, b, c)?];

    let foci = vertices
        .iter()
        .map(|(x, y)| Focus::new(x.clone(), y.clone()))
        .collect();
    let scene = FocalScene::new(
        foci,
        vec![int(1), int(1), int(1)],
        directrices,
        vec![int(-2), int(-2), int(-2)],
        int(0),
    )?;

    let mut equations = Vec::new();
    if scene.is_symbolically_derivable() {
        for mask in 0..8u8 {
            let eps: Vec<i8> = (0..3).map(|j| if mask >> j & 1 == 1 { -1 } else { 1 }).collect();
            let rhs = scene.region_rhs(&eps)?;
            equations.push(RadicalEquation::new(scene.radical_terms(), rhs)?);
        }
    }
    let notes = if equations.is_empty() {
        "irrational side length: residual tracing only".to_string()
    } else {
        "eight sign-region equations, mask 0 = triangle interior".to_string()
    };
    Ok(FamilyInstance {
        name: "erdos_mordell".into(),
        scene,
        equations,
        expected_implicit: None,
        expected_constraints: None,
        notes,
        abs_locus: false,
    })
}

/// Fermat-Torricelli point and minimal total distance `S0` for foci
/// `(a, 0)`, `(b, 0)`, `(0, h)`. `R1 + R2 + R3 = s` has nonempty locus
/// exactly for `s >= S0`.
pub fn fermat_torricelli(a: f64, b: f64, h: f64) -> ((f64, f64), f64) {
    geometric_median3([[a, 0.0], [b, 0.0], [0.0, h]])
}

/// Geometric median of three points by damped Weiszfeld iteration with a
/// vertex-optimality check: the minimizer is a vertex when its angle is at
/// least 120 degrees, where the iteration cannot converge.
fn geometric_median3(pts: [[f64; 2]; 3]) -> ((f64, f64), f64) {
    let total = |x: f64, y: f64| -> f64 {
        pts.iter().map(|p| ((x - p[0]).powi(2) + (y - p[1]).powi(2)).sqrt()).sum()
    };
    let scale = pts
        .iter()
        .map(|p| p[0].abs().max(p[1].abs()))
        .fold(1.0_f64, f64::max);

    let (mut x, mut y) = (
        (pts[0][0] + pts[1][0] + pts[2][0]) / 3.0,
        (pts[0][1] + pts[1][1] + pts[2][1]) / 3.0,
    );
    for _ in 0..500 {
        let (mut sx, mut sy, mut sw) = (0.0, 0.0, 0.0);
        let mut stuck = false;
        for p in &pts {
            let d = ((x - p[0]).powi(2) + (y - p[1]).powi(2)).sqrt();
            if d < 1e-14 * scale {
                stuck = true;
                break;
            }
            sx += p[0] / d;
            sy += p[1] / d;
            sw += 1.0 / d;
        }
        if stuck {
            break;
        }
        let (nx, ny) = (sx / sw, sy / sw);
        let step = (nx - x).hypot(ny - y);
        x = nx;
        y = ny;
        if step < 1e-15 * scale {
            break;
        }
    }

    let mut best = ((x, y), total(x, y));
    for p in &pts {
        let t = total(p[0], p[1]);
        if t < best.1 {
            best = ((p[0], p[1]), t);
        }
    }
    best
}
