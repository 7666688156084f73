//! Closed-form data functions.
//!
//! Problem data (sources, fluxes, initial profile, measurement, coefficient
//! pieces) enter either as polynomials, as dense samples with linear
//! interpolation, or as opaque closures. Polynomials and samples integrate
//! exactly; closures fall back to adaptive quadrature.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quad;

/// Dense polynomial in one variable, ascending coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<f64>,
}

impl Poly {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(alloc::vec![c])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, y: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    /// Exact `∫_a^b` (signed).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.antiderivative_at(b) - self.antiderivative_at(a)
    }

    fn antiderivative_at(&self, y: f64) -> f64 {
        let mut acc = 0.0;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            acc = acc * y + c / (i as f64 + 1.0);
        }
        acc * y
    }
}

/// Sparse polynomial in two variables `(x, t)`: terms `c · x^px · t^pt`.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly2 {
    terms: Vec<(f64, u32, u32)>,
}

impl Poly2 {
    pub fn new(terms: Vec<(f64, u32, u32)>) -> Self {
        Self { terms }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(alloc::vec![(c, 0, 0)])
    }

    pub fn terms(&self) -> &[(f64, u32, u32)] {
        &self.terms
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(c, px, pt)| c * pow_u(x, px) * pow_u(t, pt))
            .sum()
    }

    /// Exact mean value over the cell `[x0, x1] × [t0, t1]`.
    pub fn cell_average(&self, x0: f64, x1: f64, t0: f64, t1: f64) -> f64 {
        let mut acc = 0.0;
        for &(c, px, pt) in &self.terms {
            acc += c * monomial_mean(x0, x1, px) * monomial_mean(t0, t1, pt);
        }
        acc
    }
}

fn pow_u(base: f64, exp: u32) -> f64 {
    let mut acc = 1.0;
    let mut b = base;
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        b *= b;
        e >>= 1;
    }
    acc
}

/// Mean of `y^p` over `[a, b]`; the pointwise value when the cell degenerates.
fn monomial_mean(a: f64, b: f64, p: u32) -> f64 {
    if a == b {
        return pow_u(a, p);
    }
    let q = p as f64 + 1.0;
    (pow_u(b, p + 1) - pow_u(a, p + 1)) / (q * (b - a))
}

/// Continuous piecewise-linear function on strictly increasing knots.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl PiecewiseLinear {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() != values.len() || knots.len() < 2 {
            return Err(Error::InvalidSpec(String::from(
                "piecewise-linear data needs at least two matching knot/value pairs",
            )));
        }
        if knots.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSpec(String::from(
                "piecewise-linear knots must be strictly increasing",
            )));
        }
        if knots.iter().chain(values.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(String::from(
                "piecewise-linear data must be finite",
            )));
        }
        Ok(Self { knots, values })
    }

    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Segment index whose closed span `[knots[s], knots[s+1]]` covers `t`
    /// (clamped at the ends).
    fn segment(&self, t: f64) -> usize {
        match self
            .knots
            .binary_search_by(|k| k.partial_cmp(&t).expect("finite knots"))
        {
            Ok(i) => i.min(self.knots.len() - 2),
            Err(0) => 0,
            Err(i) => (i - 1).min(self.knots.len() - 2),
        }
    }

    /// Linear interpolation, constant extrapolation outside the knot range.
    pub fn eval(&self, t: f64) -> f64 {
        let first = self.knots[0];
        let last = *self.knots.last().expect("non-empty");
        if t <= first {
            return self.values[0];
        }
        if t >= last {
            return *self.values.last().expect("non-empty");
        }
        let s = self.segment(t);
        let (t0, t1) = (self.knots[s], self.knots[s + 1]);
        let (v0, v1) = (self.values[s], self.values[s + 1]);
        v0 + (v1 - v0) / (t1 - t0) * (t - t0)
    }

    /// Exact `∫_a^b g` for `a <= b` (extrapolated constant outside the knots).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        self.integrate_segments(a, b, |ga, gb, len| 0.5 * (ga + gb) * len)
    }

    /// Exact `∫_a^b g²`.
    pub fn integral_sq(&self, a: f64, b: f64) -> f64 {
        self.integrate_segments(a, b, |ga, gb, len| (ga * ga + ga * gb + gb * gb) * len / 3.0)
    }

    /// Exact `∫_a^b (g')²` (the derivative is piecewise constant).
    pub fn derivative_sq_integral(&self, a: f64, b: f64) -> f64 {
        let mut acc = 0.0;
        for s in 0..self.knots.len() - 1 {
            let lo = self.knots[s].max(a);
            let hi = self.knots[s + 1].min(b);
            if hi > lo {
                let slope =
                    (self.values[s + 1] - self.values[s]) / (self.knots[s + 1] - self.knots[s]);
                acc += slope * slope * (hi - lo);
            }
        }
        acc
    }

    fn integrate_segments(&self, a: f64, b: f64, piece: impl Fn(f64, f64, f64) -> f64) -> f64 {
        debug_assert!(a <= b);
        let mut acc = 0.0;
        // constant tails outside the knot span
        let first = self.knots[0];
        let last = *self.knots.last().expect("non-empty");
        if a < first {
            let hi = b.min(first);
            acc += piece(self.values[0], self.values[0], hi - a);
        }
        if b > last {
            let lo = a.max(last);
            let v = *self.values.last().expect("non-empty");
            acc += piece(v, v, b - lo);
        }
        for s in 0..self.knots.len() - 1 {
            let lo = self.knots[s].max(a);
            let hi = self.knots[s + 1].min(b);
            if hi > lo {
                acc += piece(self.eval(lo), self.eval(hi), hi - lo);
            }
        }
        acc
    }
}

type Fn1 = dyn Fn(f64) -> f64 + Send + Sync;
type Fn2 = dyn Fn(f64, f64) -> f64 + Send + Sync;

/// One-variable data function.
#[derive(Clone)]
pub enum Profile {
    Poly(Poly),
    Samples(PiecewiseLinear),
    Func(Arc<Fn1>),
}

impl core::fmt::Debug for Profile {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Profile::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Profile::Samples(s) => f.debug_tuple("Samples").field(s).finish(),
            Profile::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl Profile {
    pub fn constant(c: f64) -> Self {
        Profile::Poly(Poly::constant(c))
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Profile::Poly(Poly::new(coeffs))
    }

    pub fn samples(pl: PiecewiseLinear) -> Self {
        Profile::Samples(pl)
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Func(Arc::new(f))
    }

    pub fn eval(&self, y: f64) -> f64 {
        match self {
            Profile::Poly(p) => p.eval(y),
            Profile::Samples(s) => s.eval(y),
            Profile::Func(f) => f(y),
        }
    }

    /// Number of sample points when the profile is sampled data.
    pub fn sample_count(&self) -> Option<usize> {
        match self {
            Profile::Samples(s) => Some(s.knots().len()),
            _ => None,
        }
    }

    /// Mean value over `[lo, hi]`: exact for polynomials and samples,
    /// adaptive quadrature (relative tolerance 1e-10) otherwise.
    pub fn average(&self, lo: f64, hi: f64, context: &str) -> Result<f64> {
        if lo == hi {
            return Ok(self.eval(lo));
        }
        debug_assert!(lo < hi);
        match self {
            Profile::Poly(p) => Ok(p.integral(lo, hi) / (hi - lo)),
            Profile::Samples(s) => Ok(s.integral(lo, hi) / (hi - lo)),
            Profile::Func(f) => {
                Ok(quad::integrate_adaptive(&**f, lo, hi, 1e-10, context)? / (hi - lo))
            }
        }
    }
}

/// Two-variable data function `f(x, t)`.
#[derive(Clone)]
pub enum Field {
    Poly(Poly2),
    Func(Arc<Fn2>),
}

impl core::fmt::Debug for Field {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Field::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Field::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl Field {
    pub fn constant(c: f64) -> Self {
        Field::Poly(Poly2::constant(c))
    }

    pub fn poly(terms: Vec<(f64, u32, u32)>) -> Self {
        Field::Poly(Poly2::new(terms))
    }

    pub fn from_fn(f: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Field::Func(Arc::new(f))
    }

    pub fn eval(&self, x: f64, t: f64) -> f64 {
        match self {
            Field::Poly(p) => p.eval(x, t),
            Field::Func(f) => f(x, t),
        }
    }

    /// Mean value over the cell `[x0, x1] × [t0, t1]`.
    pub fn cell_average(&self, x0: f64, x1: f64, t0: f64, t1: f64, context: &str) -> Result<f64> {
        match self {
            Field::Poly(p) => Ok(p.cell_average(x0, x1, t0, t1)),
            Field::Func(f) => {
                let area = (x1 - x0) * (t1 - t0);
                debug_assert!(area > 0.0);
                Ok(quad::integrate_adaptive_2d(&**f, x0, x1, t0, t1, 1e-10, context)? / area)
            }
        }
    }
}
