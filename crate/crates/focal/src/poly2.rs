//! Sparse bivariate polynomials over arbitrary-precision rationals.
//!
//! Coefficient arithmetic is exact throughout; floats only appear in the
//! dense [`FloatPoly2`] mirror used by grid evaluation. Term order for
//! printing and sign normalization is graded lexicographic: higher total
//! degree first, ties broken by higher power of `x`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational scalar shared by every symbolic computation in the crate.
pub type Rational = BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("cannot normalize zero")]
    NormalizeZero,
    #[error("invalid rational literal `{0}`")]
    BadRational(String),
}

/// Shorthand for the exact rational `n/d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for an integer rational.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact dyadic value of a finite float. `None` for NaN and infinities.
pub fn rational_from_f64(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Parses `"p"` or `"p/q"` (optionally signed) into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational, PolyError> {
    let bad = || PolyError::BadRational(s.to_string());
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| bad())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(numer, denom))
}

/// Exact square root of a nonnegative rational, if one exists in Q.
pub fn sqrt_exact(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let sn = r.numer().sqrt();
    let sd = r.denom().sqrt();
    if &(&sn * &sn) == r.numer() && &(&sd * &sd) == r.denom() {
        Some(Rational::new(sn, sd))
    } else {
        None
    }
}

/// Graded lex: total degree first, then power of `x`.
fn grlex(a: (u32, u32), b: (u32, u32)) -> Ordering {
    (a.0 + a.1, a.0).cmp(&(b.0 + b.1, b.0))
}

/// Sparse polynomial in `x` and `y`.
///
/// Invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(0, 0, c)
    }

    /// The monomial `c * x^i * y^j`; collapses to zero when `c == 0`.
    pub fn monomial(i: u32, j: u32, c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        Self { terms }
    }

    /// Accumulates `(i, j, coefficient)` triples, merging repeated keys.
    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Rational)>>(iter: I) -> Self {
        let mut p = Self::zero();
        for (i, j, c) in iter {
            p.add_term(i, j, c);
        }
        p
    }

    fn add_term(&mut self, i: u32, j: u32, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn degree(&self) -> i64 {
        self.terms.keys().map(|&(i, j)| (i + j) as i64).max().unwrap_or(-1)
    }

    /// Coefficient of `x^i * y^j` (zero when absent).
    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, u32, &Rational)> {
        self.terms.iter().map(|(&(i, j), c)| (i, j, c))
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn leading_key(&self) -> Option<(u32, u32)> {
        self.terms.keys().copied().max_by(|a, b| grlex(*a, *b))
    }

    pub fn scale(&self, s: &Rational) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&k, c)| (k, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(Rational::one());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Positive content: gcd of numerators over lcm of denominators.
    /// Zero for the zero polynomial.
    fn content(&self) -> Rational {
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        if num_gcd.is_zero() {
            Rational::zero()
        } else {
            Rational::new(num_gcd, den_lcm)
        }
    }

    /// Divides by the positive content, keeping the sign pattern intact.
    pub fn reduce_content(&self) -> Self {
        let c = self.content();
        if c.is_zero() {
            return Self::zero();
        }
        self.scale(&c.recip())
    }

    /// Canonical form: coprime integer coefficients with positive leading
    /// coefficient in graded lex order.
    pub fn normalize(&self) -> Result<Self, PolyError> {
        let lead = self.leading_key().ok_or(PolyError::NormalizeZero)?;
        let reduced = self.reduce_content();
        if reduced.terms[&lead].is_negative() {
            Ok(-&reduced)
        } else {
            Ok(reduced)
        }
    }

    /// Whether `a` and `b` agree up to a nonzero rational factor.
    pub fn equal_up_to_scale(a: &Self, b: &Self) -> Result<bool, PolyError> {
        Ok(a.normalize()? == b.normalize()?)
    }

    /// Dense float mirror for grid evaluation.
    pub fn to_float(&self) -> FloatPoly2 {
        let (mut di, mut dj) = (0, 0);
        for &(i, j) in self.terms.keys() {
            di = di.max(i as usize);
            dj = dj.max(j as usize);
        }
        let mut rows = vec![vec![0.0; dj + 1]; if self.is_zero() { 0 } else { di + 1 }];
        for (&(i, j), c) in &self.terms {
            rows[i as usize][j as usize] = c.to_f64().unwrap_or(f64::NAN);
        }
        FloatPoly2 { rows }
    }

    /// Convenience single-point evaluation; hot loops should reuse
    /// [`Poly2::to_float`] instead.
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        self.to_float().eval(x, y)
    }

    /// Terms in descending graded lex order.
    fn ordered_keys(&self) -> Vec<(u32, u32)> {
        let mut keys: Vec<_> = self.terms.keys().copied().collect();
        keys.sort_by(|a, b| grlex(*b, *a));
        keys
    }

    /// Renders positive terms first, then negative terms, each group in
    /// descending graded lex order. Inequality text reads naturally this
    /// way: `41 - x^2 - y^2` rather than `-x^2 - y^2 + 41`.
    pub fn to_string_positives_first(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let keys = self.ordered_keys();
        let (pos, neg): (Vec<_>, Vec<_>) =
            keys.into_iter().partition(|&k| !self.terms[&k].is_negative());
        let mut out = String::new();
        for k in pos.into_iter().chain(neg) {
            push_term(&mut out, &self.terms[&k], k);
        }
        out
    }
}

fn format_rat(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn push_term(out: &mut String, c: &Rational, (i, j): (u32, u32)) {
    let neg = c.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let mag = c.abs();
    let constant = i == 0 && j == 0;
    if constant || !mag.is_one() {
        out.push_str(&format_rat(&mag));
        if !constant {
            out.push('*');
        }
    }
    if i > 0 {
        out.push('x');
        if i > 1 {
            out.push_str(&format!("^{i}"));
        }
    }
    if i > 0 && j > 0 {
        out.push('*');
    }
    if j > 0 {
        out.push('y');
        if j > 1 {
            out.push_str(&format!("^{j}"));
        }
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for k in self.ordered_keys() {
            push_term(&mut out, &self.terms[&k], k);
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

impl Add for &Poly2 {
    type Output = Poly2;
    fn add(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }
}

impl Sub for &Poly2 {
    type Output = Poly2;
    fn sub(self, rhs: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (&(i, j), c) in &rhs.terms {
            out.add_term(i, j, -c.clone());
        }
        out
    }
}

impl Neg for &Poly2 {
    type Output = Poly2;
    fn neg(self) -> Poly2 {
        Poly2 {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl Mul for &Poly2 {
    type Output = Poly2;
    fn mul(self, rhs: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for (&(ia, ja), ca) in &self.terms {
            for (&(ib, jb), cb) in &rhs.terms {
                out.add_term(ia + ib, ja + jb, ca * cb);
            }
        }
        out
    }
}

/// Dense coefficient grid `rows[i][j] = coeff(x^i y^j)` with Horner
/// evaluation in `y` inside `x`.
#[derive(Clone, Debug)]
pub struct FloatPoly2 {
    rows: Vec<Vec<f64>>,
}

impl FloatPoly2 {
    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for row in self.rows.iter().rev() {
            let mut inner = 0.0;
            for &c in row.iter().rev() {
                inner = inner * y + c;
            }
            acc = acc * x + inner;
        }
        acc
    }

    /// Largest coefficient magnitude; scale reference for tolerances.
    pub fn max_abs_coeff(&self) -> f64 {
        self.rows
            .iter()
            .flat_map(|r| r.iter())
            .fold(0.0_f64, |m, &c| m.max(c.abs()))
    }
}
