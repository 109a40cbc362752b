//! Radical elimination by repeated squaring.
//!
//! Input is a relation `sum_{i=1..k} c_i * sqrt(Q_i) = P` with `k <= 3`,
//! rational weights, squared-distance radicands, and `deg P <= 1`. Each
//! squaring step is sign-lossy, so alongside the final polynomial the
//! cascade records the inequality that makes that step reversible. The
//! implicit polynomial therefore cuts out the Zariski closure of the locus,
//! and the recorded constraints shrink the closure back toward the true
//! arcs. Constraints are necessary, not always sufficient: a mirror branch
//! `-sum c_i sqrt(Q_i) = P` can survive every recorded inequality, which is
//! why extraction always rechecks the defining relation itself.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly2::{FloatPoly2, Poly2, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EliminateError {
    #[error("radical count {0} unsupported (need 1 to 3 terms)")]
    BadCount(usize),
    #[error("zero radical weight at index {0}")]
    ZeroWeight(usize),
    #[error("radicand at index {0} is not a squared-distance form")]
    BadRadicand(usize),
    #[error("right-hand side must have degree <= 1")]
    BadRhs,
    #[error("mixed radical signs with three terms are unsupported")]
    MixedSigns,
    #[error("implicit polynomial vanished identically (degenerate scene)")]
    ZeroImplicit,
    #[error("constraint polynomial is zero")]
    ZeroConstraint,
}

/// Inequality orientation. Everything the cascade emits is `>= 0`; the
/// `<= 0` form exists so harness self-tests can corrupt a derivation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    GeqZero,
    LeqZero,
}

/// Polynomial inequality `poly >= 0` or `poly <= 0`.
///
/// The polynomial is reduced by its positive content at construction (sign
/// pattern preserved) and a float mirror is cached for grid evaluation.
#[derive(Clone, Debug)]
pub struct Constraint {
    poly: Poly2,
    sense: Sense,
    fp: FloatPoly2,
    scale: f64,
}

impl Constraint {
    pub fn new(poly: Poly2, sense: Sense) -> Result<Self, EliminateError> {
        if poly.is_zero() {
            return Err(EliminateError::ZeroConstraint);
        }
        let poly = poly.reduce_content();
        let fp = poly.to_float();
        let scale = fp.max_abs_coeff().max(1.0);
        Ok(Self { poly, sense, fp, scale })
    }

    pub fn geq(poly: Poly2) -> Result<Self, EliminateError> {
        Self::new(poly, Sense::GeqZero)
    }

    pub fn poly(&self) -> &Poly2 {
        &self.poly
    }

    pub fn sense(&self) -> Sense {
        self.sense
    }

    /// Largest coefficient magnitude, floored at 1: the normalizer for
    /// relative slack.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Same polynomial, opposite sense.
    pub fn flipped(&self) -> Self {
        Self {
            poly: self.poly.clone(),
            sense: match self.sense {
                Sense::GeqZero => Sense::LeqZero,
                Sense::LeqZero => Sense::GeqZero,
            },
            fp: self.fp.clone(),
            scale: self.scale,
        }
    }

    /// Signed satisfaction margin: nonnegative iff the inequality holds.
    pub fn margin(&self, x: f64, y: f64) -> f64 {
        let v = self.fp.eval(x, y);
        match self.sense {
            Sense::GeqZero => v,
            Sense::LeqZero => -v,
        }
    }

    /// Holds up to `slack` relative to the largest coefficient magnitude,
    /// so boundary points survive float rounding.
    pub fn satisfied_at(&self, x: f64, y: f64, slack: f64) -> bool {
        self.margin(x, y) >= -slack * self.scale
    }

    /// `>= 0` orientation of the inequality, positive-content reduced.
    pub fn canonical_geq(&self) -> Poly2 {
        match self.sense {
            Sense::GeqZero => self.poly.clone(),
            Sense::LeqZero => (-&self.poly).reduce_content(),
        }
    }

    /// Same half-plane of polynomial space: equal canonical `>= 0` forms.
    pub fn matches(&self, other: &Self) -> bool {
        self.canonical_geq() == other.canonical_geq()
    }
}

impl PartialEq for Constraint {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.sense == other.sense
    }
}

impl std::fmt::Display for Constraint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let op = match self.sense {
            Sense::GeqZero => ">=",
            Sense::LeqZero => "<=",
        };
        write!(f, "{} {} 0", self.poly.to_string_positives_first(), op)
    }
}

/// Relation `sum c_i sqrt(Q_i) = P`.
///
/// Invariants enforced at construction: `1 <= k <= 3`, every `c_i` nonzero,
/// every `Q_i` monic of the shape `(x-a)^2 + (y-b)^2 + d` with `d >= 0`,
/// and `deg P <= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct RadicalEquation {
    terms: Vec<(Rational, Poly2)>,
    rhs: Poly2,
}

impl RadicalEquation {
    pub fn new(terms: Vec<(Rational, Poly2)>, rhs: Poly2) -> Result<Self, EliminateError> {
        if terms.is_empty() || terms.len() > 3 {
            return Err(EliminateError::BadCount(terms.len()));
        }
        for (i, (c, q)) in terms.iter().enumerate() {
            if c.is_zero() {
                return Err(EliminateError::ZeroWeight(i));
            }
            if !is_squared_distance_form(q) {
                return Err(EliminateError::BadRadicand(i));
            }
        }
        if rhs.degree() > 1 {
            return Err(EliminateError::BadRhs);
        }
        Ok(Self { terms, rhs })
    }

    pub fn k(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> &[(Rational, Poly2)] {
        &self.terms
    }

    pub fn rhs(&self) -> &Poly2 {
        &self.rhs
    }

    /// `sum c_i sqrt(Q_i(x, y)) - P(x, y)` in floats. Radicand values are
    /// clamped at zero: they are sums of squares, so any negative float
    /// evaluation is rounding noise.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        let mut acc = -self.rhs.eval(x, y);
        for (c, q) in &self.terms {
            let qv = q.eval(x, y).max(0.0);
            acc += c.to_f64().unwrap_or(f64::NAN) * qv.sqrt();
        }
        acc
    }
}

fn is_squared_distance_form(q: &Poly2) -> bool {
    use num_traits::One;
    if q.degree() != 2 || !q.coeff(2, 0).is_one() || !q.coeff(0, 2).is_one() {
        return false;
    }
    if !q.coeff(1, 1).is_zero() {
        return false;
    }
    // (x-a)^2 + (y-b)^2 + d with d >= 0
    let two = Rational::from_integer(2.into());
    let a = -q.coeff(1, 0) / &two;
    let b = -q.coeff(0, 1) / &two;
    let d = q.coeff(0, 0) - &a * &a - &b * &b;
    !d.is_negative()
}

/// Implicit polynomial plus the inequalities recorded while deriving it.
///
/// `steps` holds the right-hand side of each squaring stage in derivation
/// order; `steps[0]` is always `P`.
#[derive(Clone, Debug)]
pub struct DerivedCurve {
    pub implicit: Poly2,
    pub constraints: Vec<Constraint>,
    pub steps: Vec<Poly2>,
}

impl DerivedCurve {
    pub fn satisfies_constraints(&self, x: f64, y: f64, slack: f64) -> bool {
        self.constraints.iter().all(|c| c.satisfied_at(x, y, slack))
    }
}

/// How a point relates to a derived curve, judged against the implicit
/// polynomial and the residual of the defining relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointClass {
    /// On the implicit curve and on the true locus.
    OnArc,
    /// On the implicit curve but not on the locus: a squaring phantom.
    ZariskiOnly,
    OffCurve,
}

/// Classifies `(x, y)` against `curve` using `w` as the residual of the
/// defining relation. "On the implicit curve" is judged relative to the
/// local gradient magnitude so the test is uniform across the polynomial's
/// dynamic range.
pub fn classify_point(
    curve: &DerivedCurve,
    w: impl Fn(f64, f64) -> f64,
    x: f64,
    y: f64,
    tol: f64,
) -> PointClass {
    let fp = curve.implicit.to_float();
    let h = 1e-6 * x.abs().max(y.abs()).max(1.0);
    let gx = (fp.eval(x + h, y) - fp.eval(x - h, y)) / (2.0 * h);
    let gy = (fp.eval(x, y + h) - fp.eval(x, y - h)) / (2.0 * h);
    let grad = gx.hypot(gy);
    let on_implicit = fp.eval(x, y).abs() <= tol * (grad + 1.0);
    if !on_implicit {
        return PointClass::OffCurve;
    }
    if w(x, y).abs() <= tol && curve.satisfies_constraints(x, y, tol) {
        PointClass::OnArc
    } else {
        PointClass::ZariskiOnly
    }
}

/// Runs the squaring cascade and records one reversibility inequality per
/// squaring step. Three-term relations must have uniform weight signs.
pub fn eliminate(eq: &RadicalEquation) -> Result<DerivedCurve, EliminateError> {
    // A global sign flip of both sides changes nothing; canonicalize
    // all-negative weights to all-positive.
    let all_negative = eq.terms.iter().all(|(c, _)| c.is_negative());
    let (signs, p): (Vec<Rational>, Poly2) = if all_negative {
        (eq.terms.iter().map(|(c, _)| -c.clone()).collect(), -&eq.rhs)
    } else {
        (eq.terms.iter().map(|(c, _)| c.clone()).collect(), eq.rhs.clone())
    };
    let radicands: Vec<&Poly2> = eq.terms.iter().map(|(_, q)| q).collect();

    let mut constraints = Vec::new();
    let mut steps = vec![p.clone()];

    // sign(c) * P >= 0 is the reversibility condition of the first squaring
    // whenever every radical enters with the same sign. Constant and
    // positive means trivially true; k = 1 keeps it anyway so a derivation
    // always carries at least one region marker.
    let push_p_constraint = |constraints: &mut Vec<Constraint>, keep_trivial: bool| {
        let trivial = p.degree() <= 0 && !p.coeff(0, 0).is_negative();
        if (!trivial || keep_trivial) && !p.is_zero() {
            constraints.push(Constraint::geq(p.clone()).expect("nonzero"));
        }
    };

    let implicit_raw = match signs.len() {
        1 => {
            let c = &signs[0];
            push_p_constraint(&mut constraints, true);
            let c2 = c * c;
            &radicands[0].scale(&c2) - &(&p * &p)
        }
        2 => {
            let (c1, c2) = (&signs[0], &signs[1]);
            let same_sign = c1.is_positive() == c2.is_positive();
            if same_sign {
                push_p_constraint(&mut constraints, false);
            }
            // (c1 sqrt(Q1) + c2 sqrt(Q2))^2 = P^2 rearranges to
            // 2 c1 c2 sqrt(Q1 Q2) = E1, so E1 must carry the sign of c1 c2.
            let q1s = radicands[0].scale(&(c1 * c1));
            let q2s = radicands[1].scale(&(c2 * c2));
            let e1 = &(&(&p * &p) - &q1s) - &q2s;
            steps.push(e1.clone());
            let oriented = if same_sign { e1.clone() } else { -&e1 };
            if !oriented.is_zero() {
                constraints.push(Constraint::geq(oriented).expect("nonzero"));
            }
            let c12 = c1 * c2;
            let four = Rational::from_integer(4.into());
            &(radicands[0] * radicands[1]).scale(&(&four * &c12 * &c12)) - &(&e1 * &e1)
        }
        3 => {
            if !signs.iter().all(|c| c.is_positive()) {
                return Err(EliminateError::MixedSigns);
            }
            let (c1, c2, c3) = (&signs[0], &signs[1], &signs[2]);
            // Stage 1: c1 sqrt(Q1) + c2 sqrt(Q2) = P - c3 sqrt(Q3).
            // The left side is nonnegative, so reversibility needs
            // P >= 0 and P^2 - c3^2 Q3 >= 0.
            push_p_constraint(&mut constraints, false);
            let p2 = &p * &p;
            let q3s = radicands[2].scale(&(c3 * c3));
            let disc3 = &p2 - &q3s;
            if !disc3.is_zero() {
                constraints.push(Constraint::geq(disc3).expect("nonzero"));
            }
            // Squaring gives 2 c1 c2 sqrt(Q1 Q2) + 2 c3 P sqrt(Q3) = E1,
            // whose left side is nonnegative on the kept region.
            let q1s = radicands[0].scale(&(c1 * c1));
            let q2s = radicands[1].scale(&(c2 * c2));
            let e1 = &(&(&p2 + &q3s) - &q1s) - &q2s;
            steps.push(e1.clone());
            if !e1.is_zero() {
                constraints.push(Constraint::geq(e1.clone()).expect("nonzero"));
            }
            // Stage 2: squaring that sum isolates the last radical:
            // 8 c1 c2 c3 P sqrt(Q1 Q2 Q3) = E2, again nonnegative.
            let four = Rational::from_integer(4.into());
            let c12 = c1 * c2;
            let q1q2 = (radicands[0] * radicands[1]).scale(&(&four * &c12 * &c12));
            let pq3 = (&p2 * radicands[2]).scale(&(&four * &(c3 * c3)));
            let e2 = &(&(&e1 * &e1) - &q1q2) - &pq3;
            steps.push(e2.clone());
            if !e2.is_zero() {
                constraints.push(Constraint::geq(e2.clone()).expect("nonzero"));
            }
            // Stage 3: final squaring.
            let sixty_four = Rational::from_integer(64.into());
            let csq = &(&c12 * &c12) * &(c3 * c3);
            let prod = &(&(radicands[0] * radicands[1]) * radicands[2]) * &p2;
            &prod.scale(&(&sixty_four * &csq)) - &(&e2 * &e2)
        }
        n => return Err(EliminateError::BadCount(n)),
    };

    let implicit = implicit_raw.normalize().map_err(|_| EliminateError::ZeroImplicit)?;
    Ok(DerivedCurve { implicit, constraints, steps })
}

/// Zariski-closure-only elimination: squares through with unsigned weights
/// and returns the implicit polynomial with no region constraints. Valid
/// for every sign pattern because the implicit polynomial depends on the
/// weights only through their squares.
pub fn eliminate_closure(eq: &RadicalEquation) -> Result<DerivedCurve, EliminateError> {
    let unsigned = RadicalEquation::new(
        eq.terms.iter().map(|(c, q)| (c.abs(), q.clone())).collect(),
        eq.rhs.clone(),
    )?;
    let derived = eliminate(&unsigned)?;
    Ok(DerivedCurve { implicit: derived.implicit, constraints: Vec::new(), steps: derived.steps })
}
