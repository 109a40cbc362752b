//! Scene data: foci, directrices, weights, and the distance relation
//! `sum alpha_i R_i + sum beta_j r_j = S`.
//!
//! Coordinates and weights are exact rationals; every numeric query goes
//! through float mirrors computed once at construction. Sign queries
//! against directrix lines are evaluated exactly so a point reports 0 only
//! when it lies on the line.

use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::poly2::{rational_from_f64, sqrt_exact, Poly2, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SceneError {
    #[error("scene needs at least one focus")]
    NoFoci,
    #[error("{foci} foci but {weights} focal weights")]
    FocalWeightCount { foci: usize, weights: usize },
    #[error("{directrices} directrices but {weights} directrix weights")]
    DirectrixWeightCount { directrices: usize, weights: usize },
    #[error("zero weight at index {0}")]
    ZeroWeight(usize),
    #[error("degenerate directrix: a and b both zero")]
    DegenerateDirectrix,
    #[error("focus index {0} out of range")]
    FocusIndex(usize),
    #[error("directrix index {0} out of range")]
    DirectrixIndex(usize),
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("sign vector length {got} does not match {expect} directrices")]
    SignVectorLength { got: usize, expect: usize },
    #[error("on-line region is measure zero")]
    OnLineRegion,
    #[error("directrix not rationally normalizable")]
    NotRationallyNormalizable,
}

/// Point focus with exact coordinates and float mirrors.
#[derive(Clone, Debug, PartialEq)]
pub struct Focus {
    x: Rational,
    y: Rational,
    fx: f64,
    fy: f64,
}

impl Focus {
    pub fn new(x: Rational, y: Rational) -> Self {
        let fx = x.to_f64().unwrap_or(f64::INFINITY);
        let fy = y.to_f64().unwrap_or(f64::INFINITY);
        Self { x, y, fx, fy }
    }

    /// Exact dyadic adoption of float coordinates.
    pub fn from_f64(x: f64, y: f64) -> Result<Self, SceneError> {
        let rx = rational_from_f64(x).ok_or(SceneError::NonFinite)?;
        let ry = rational_from_f64(y).ok_or(SceneError::NonFinite)?;
        Ok(Self::new(rx, ry))
    }

    pub fn x(&self) -> &Rational {
        &self.x
    }

    pub fn y(&self) -> &Rational {
        &self.y
    }

    pub fn fx(&self) -> f64 {
        self.fx
    }

    pub fn fy(&self) -> f64 {
        self.fy
    }
}

/// Line `a*x + b*y + c = 0` with `(a, b) != (0, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Directrix {
    a: Rational,
    b: Rational,
    c: Rational,
    norm_sq: Rational,
    fa: f64,
    fb: f64,
    fc: f64,
    fnorm: f64,
}

impl Directrix {
    pub fn new(a: Rational, b: Rational, c: Rational) -> Result<Self, SceneError> {
        let norm_sq = &a * &a + &b * &b;
        if norm_sq.is_zero() {
            return Err(SceneError::DegenerateDirectrix);
        }
        let fa = a.to_f64().unwrap_or(f64::INFINITY);
        let fb = b.to_f64().unwrap_or(f64::INFINITY);
        let fc = c.to_f64().unwrap_or(f64::INFINITY);
        let fnorm = norm_sq.to_f64().unwrap_or(f64::INFINITY).sqrt();
        Ok(Self { a, b, c, norm_sq, fa, fb, fc, fnorm })
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn c(&self) -> &Rational {
        &self.c
    }

    pub fn norm_sq(&self) -> &Rational {
        &self.norm_sq
    }

    /// Unnormalized signed line value `a*x + b*y + c`.
    pub fn signed_value(&self, x: f64, y: f64) -> f64 {
        self.fa * x + self.fb * y + self.fc
    }

    pub fn distance(&self, x: f64, y: f64) -> f64 {
        self.signed_value(x, y).abs() / self.fnorm
    }

    /// Exact sign of the line value at an exactly-converted float point.
    fn exact_sign(&self, x: f64, y: f64) -> Result<i8, SceneError> {
        let rx = rational_from_f64(x).ok_or(SceneError::NonFinite)?;
        let ry = rational_from_f64(y).ok_or(SceneError::NonFinite)?;
        let v = &self.a * &rx + &self.b * &ry + &self.c;
        Ok(if v.is_zero() {
            0
        } else if v.is_negative() {
            -1
        } else {
            1
        })
    }

    /// `(a, b, c) / sqrt(a^2 + b^2)` when the norm is a rational square.
    pub fn unit_form(&self) -> Result<(Rational, Rational, Rational), SceneError> {
        let t = sqrt_exact(&self.norm_sq).ok_or(SceneError::NotRationallyNormalizable)?;
        Ok((&self.a / &t, &self.b / &t, &self.c / &t))
    }
}

/// Foci with weights `alpha`, directrices with weights `beta`, and the
/// right-hand side `S` of `sum alpha_i R_i + sum beta_j r_j = S`.
#[derive(Clone, Debug, PartialEq)]
pub struct FocalScene {
    foci: Vec<Focus>,
    alpha: Vec<Rational>,
    directrices: Vec<Directrix>,
    beta: Vec<Rational>,
    s: Rational,
    falpha: Vec<f64>,
    fbeta: Vec<f64>,
    fs: f64,
}

impl FocalScene {
    pub fn new(
        foci: Vec<Focus>,
        alpha: Vec<Rational>,
        directrices: Vec<Directrix>,
        beta: Vec<Rational>,
        s: Rational,
    ) -> Result<Self, SceneError> {
        if foci.is_empty() {
            return Err(SceneError::NoFoci);
        }
        if foci.len() != alpha.len() {
            return Err(SceneError::FocalWeightCount { foci: foci.len(), weights: alpha.len() });
        }
        if directrices.len() != beta.len() {
            return Err(SceneError::DirectrixWeightCount {
                directrices: directrices.len(),
                weights: beta.len(),
            });
        }
        if let Some(i) = alpha.iter().chain(beta.iter()).position(|w| w.is_zero()) {
            return Err(SceneError::ZeroWeight(i));
        }
        for f in &foci {
            if !f.fx.is_finite() || !f.fy.is_finite() {
                return Err(SceneError::NonFinite);
            }
        }
        let tof = |r: &Rational| r.to_f64().unwrap_or(f64::INFINITY);
        let falpha = alpha.iter().map(tof).collect();
        let fbeta = beta.iter().map(tof).collect();
        let fs = tof(&s);
        Ok(Self { foci, alpha, directrices, beta, s, falpha, fbeta, fs })
    }

    /// Scene with foci only.
    pub fn from_foci(
        foci: Vec<Focus>,
        alpha: Vec<Rational>,
        s: Rational,
    ) -> Result<Self, SceneError> {
        Self::new(foci, alpha, Vec::new(), Vec::new(), s)
    }

    pub fn foci(&self) -> &[Focus] {
        &self.foci
    }

    pub fn alpha(&self) -> &[Rational] {
        &self.alpha
    }

    pub fn directrices(&self) -> &[Directrix] {
        &self.directrices
    }

    pub fn beta(&self) -> &[Rational] {
        &self.beta
    }

    pub fn s(&self) -> &Rational {
        &self.s
    }

    pub fn focal_distance(&self, i: usize, x: f64, y: f64) -> Result<f64, SceneError> {
        let f = self.foci.get(i).ok_or(SceneError::FocusIndex(i))?;
        Ok(((x - f.fx).powi(2) + (y - f.fy).powi(2)).sqrt())
    }

    pub fn directrix_distance(&self, j: usize, x: f64, y: f64) -> Result<f64, SceneError> {
        let d = self.directrices.get(j).ok_or(SceneError::DirectrixIndex(j))?;
        Ok(d.distance(x, y))
    }

    /// `sum alpha_i R_i + sum beta_j r_j - S` in floats. The final arbiter
    /// for whether a point lies on the scene's locus.
    pub fn residual(&self, x: f64, y: f64) -> f64 {
        let mut acc = -self.fs;
        for (f, w) in self.foci.iter().zip(&self.falpha) {
            acc += w * ((x - f.fx).powi(2) + (y - f.fy).powi(2)).sqrt();
        }
        for (d, w) in self.directrices.iter().zip(&self.fbeta) {
            acc += w * d.distance(x, y);
        }
        acc
    }

    /// Exact directrix-side signs at a point: one entry per directrix,
    /// 0 only exactly on the line.
    pub fn sign_vector(&self, x: f64, y: f64) -> Result<Vec<i8>, SceneError> {
        self.directrices.iter().map(|d| d.exact_sign(x, y)).collect()
    }

    /// Right-hand side polynomial of the region equation
    /// `sum alpha_i R_i = S - sum beta_j eps_j * (a_j x + b_j y + c_j) / |l_j|`
    /// on the open region where each directrix sign matches `eps`.
    pub fn region_rhs(&self, eps: &[i8]) -> Result<Poly2, SceneError> {
        if eps.len() != self.directrices.len() {
            return Err(SceneError::SignVectorLength {
                got: eps.len(),
                expect: self.directrices.len(),
            });
        }
        let mut rhs = Poly2::constant(self.s.clone());
        for ((d, beta), &e) in self.directrices.iter().zip(&self.beta).zip(eps) {
            if e != 1 && e != -1 {
                return Err(SceneError::OnLineRegion);
            }
            let (ua, ub, uc) = d.unit_form()?;
            let sign = Rational::from_integer(e.into());
            let w = beta * &sign;
            let line = Poly2::from_terms([(1, 0, ua), (0, 1, ub), (0, 0, uc)]);
            rhs = &rhs - &line.scale(&w);
        }
        Ok(rhs)
    }

    /// Exact squared distance to focus `i` as a polynomial in `x, y`.
    pub fn squared_distance_poly(&self, i: usize) -> Result<Poly2, SceneError> {
        let f = self.foci.get(i).ok_or(SceneError::FocusIndex(i))?;
        let two = Rational::from_integer(2.into());
        Ok(Poly2::from_terms([
            (2, 0, Rational::from_integer(1.into())),
            (0, 2, Rational::from_integer(1.into())),
            (1, 0, -(&two * f.x())),
            (0, 1, -(&two * f.y())),
            (0, 0, f.x() * f.x() + f.y() * f.y()),
        ]))
    }

    /// Weighted squared-distance radical terms `(alpha_i, Q_i)`.
    pub fn radical_terms(&self) -> Vec<(Rational, Poly2)> {
        (0..self.foci.len())
            .map(|i| (self.alpha[i].clone(), self.squared_distance_poly(i).expect("index in range")))
            .collect()
    }

    /// Whether every directrix normal has a rational length, which is what
    /// symbolic derivation of region equations requires.
    pub fn is_symbolically_derivable(&self) -> bool {
        self.directrices.iter().all(|d| sqrt_exact(&d.norm_sq).is_some())
    }

    /// `sum |alpha_i| + sum |beta_j|`: a global Lipschitz constant for the
    /// residual, since each distance term is 1-Lipschitz.
    pub fn lipschitz_bound(&self) -> f64 {
        self.falpha.iter().chain(self.fbeta.iter()).map(|w| w.abs()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly2::{rat, rat_int};

    fn parabola_scene() -> FocalScene {
        // Focus (1, 0), directrix x + 1 = 0, R - r = 0.
        FocalScene::new(
            vec![Focus::new(rat_int(1), rat_int(0))],
            vec![rat_int(1)],
            vec![Directrix::new(rat_int(1), rat_int(0), rat_int(1)).unwrap()],
            vec![rat_int(-1)],
            rat_int(0),
        )
        .unwrap()
    }

    #[test]
    fn directrix_distance_vertical_line() {
        let s = parabola_scene();
        assert_eq!(s.directrix_distance(0, 3.0, 4.0).unwrap(), 4.0);
        assert!(matches!(s.directrix_distance(1, 0.0, 0.0), Err(SceneError::DirectrixIndex(1))));
    }

    #[test]
    fn residual_vanishes_on_parabola() {
        let s = parabola_scene();
        // y^2 = 4x at x = 2
        let w = s.residual(2.0, 2.8284271247461903);
        assert!(w.abs() < 1e-12, "got {w}");
        assert!(s.residual(2.0, 3.0) > 0.0);
    }

    #[test]
    fn sign_vector_is_exact() {
        let s = parabola_scene();
        assert_eq!(s.sign_vector(3.0, 4.0).unwrap(), vec![1]);
        assert_eq!(s.sign_vector(-2.0, 1.0).unwrap(), vec![-1]);
        assert_eq!(s.sign_vector(-1.0, 0.0).unwrap(), vec![0]);
    }

    #[test]
    fn region_rhs_parabola() {
        let s = parabola_scene();
        let rhs = s.region_rhs(&[1]).unwrap();
        let expected = Poly2::from_terms([(1, 0, rat_int(1)), (0, 0, rat_int(1))]);
        assert_eq!(rhs, expected);
        assert_eq!(
            s.region_rhs(&[0]).unwrap_err().to_string(),
            "on-line region is measure zero"
        );
        assert!(matches!(s.region_rhs(&[1, 1]), Err(SceneError::SignVectorLength { .. })));
    }

    #[test]
    fn region_rhs_rejects_irrational_normal() {
        let s = FocalScene::new(
            vec![Focus::new(rat_int(0), rat_int(0))],
            vec![rat_int(1)],
            vec![Directrix::new(rat_int(1), rat_int(1), rat_int(0)).unwrap()],
            vec![rat_int(1)],
            rat_int(1),
        )
        .unwrap();
        assert!(!s.is_symbolically_derivable());
        assert_eq!(
            s.region_rhs(&[1]).unwrap_err().to_string(),
            "directrix not rationally normalizable"
        );
    }

    #[test]
    fn region_rhs_scaled_line_normalizes() {
        // 3x + 4y + 5 = 0 has |(3,4)| = 5, so the unit form is exact.
        let s = FocalScene::new(
            vec![Focus::new(rat_int(0), rat_int(0))],
            vec![rat_int(1)],
            vec![Directrix::new(rat_int(3), rat_int(4), rat_int(5)).unwrap()],
            vec![rat_int(-2)],
            rat_int(7),
        )
        .unwrap();
        let rhs = s.region_rhs(&[-1]).unwrap();
        let expected = Poly2::from_terms([
            (1, 0, rat(-6, 5)),
            (0, 1, rat(-8, 5)),
            (0, 0, rat_int(5)),
        ]);
        assert_eq!(rhs, expected);
    }

    #[test]
    fn squared_distance_poly_matches_distance() {
        let s = parabola_scene();
        let q = s.squared_distance_poly(0).unwrap();
        let r = s.focal_distance(0, 3.5, -2.25).unwrap();
        assert!((q.eval(3.5, -2.25) - r * r).abs() < 1e-12);
    }

    #[test]
    fn construction_validations() {
        assert!(matches!(
            FocalScene::from_foci(vec![], vec![], rat_int(1)),
            Err(SceneError::NoFoci)
        ));
        assert!(matches!(
            FocalScene::from_foci(vec![Focus::new(rat_int(0), rat_int(0))], vec![], rat_int(1)),
            Err(SceneError::FocalWeightCount { .. })
        ));
        assert!(matches!(
            FocalScene::from_foci(
                vec![Focus::new(rat_int(0), rat_int(0))],
                vec![rat_int(0)],
                rat_int(1)
            ),
            Err(SceneError::ZeroWeight(0))
        ));
        assert!(matches!(
            Directrix::new(rat_int(0), rat_int(0), rat_int(3)),
            Err(SceneError::DegenerateDirectrix)
        ));
        assert!(Focus::from_f64(f64::NAN, 0.0).is_err());
    }

    #[test]
    fn from_f64_is_exact_dyadic() {
        let f = Focus::from_f64(0.5, -0.75).unwrap();
        assert_eq!(f.x(), &rat(1, 2));
        assert_eq!(f.y(), &rat(-3, 4));
    }

    #[test]
    fn lipschitz_bound_sums_weights() {
        let s = parabola_scene();
        assert_eq!(s.lipschitz_bound(), 2.0);
    }
}
