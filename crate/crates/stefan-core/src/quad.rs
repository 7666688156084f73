//! Quadrature kernels: Gauss–Legendre rules of arbitrary order and an
//! adaptive Simpson scheme for the few integrals without closed form.

use alloc::string::ToString;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Nodes are found by Newton iteration on the three-term Legendre recurrence;
/// they come out sorted ascending and symmetric to machine precision.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1, "quadrature order must be at least 1");
    let mut nodes = alloc::vec![0.0; order];
    let mut weights = alloc::vec![0.0; order];
    let nf = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = libm::cos(core::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5));
        let mut deriv = 1.0;
        for _ in 0..64 {
            let (p, d) = legendre_with_derivative(order, x);
            deriv = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        // one clean-up step so node pairs are exactly symmetric
        let (p, d) = legendre_with_derivative(order, x);
        x -= p / d;
        deriv = d;
        let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` via the recurrence `j P_j = (2j-1) x P_{j-1} - (j-1) P_{j-2}`.
fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=order {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let d = nf_derivative(order, x, p, p_prev);
    (p, d)
}

fn nf_derivative(order: usize, x: f64, p: f64, p_prev: f64) -> f64 {
    (order as f64) * (x * p - p_prev) / (x * x - 1.0)
}

/// Applies a rule given on `[-1, 1]` to `∫_lo^hi f`.
pub fn gl_sum(nodes: &[f64], weights: &[f64], lo: f64, hi: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    let mut acc = 0.0;
    for (&u, &w) in nodes.iter().zip(weights) {
        acc += w * f(mid + half * u);
    }
    acc * half
}

/// Adaptive Simpson integration of `f` over `[lo, hi]` to the given relative
/// tolerance (measured against `max(1, |coarse estimate|)`).
pub fn integrate_adaptive(
    f: &dyn Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
    context: &str,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let (lo, hi, sign) = if lo < hi { (lo, hi, 1.0) } else { (hi, lo, -1.0) };
    let f_lo = f(lo);
    let mid = 0.5 * (lo + hi);
    let f_mid = f(mid);
    let f_hi = f(hi);
    let whole = simpson(lo, hi, f_lo, f_mid, f_hi);
    let tol = rel_tol * 1.0_f64.max(whole.abs());
    match refine(f, lo, hi, f_lo, f_mid, f_hi, whole, tol, 56) {
        Some(v) => Ok(sign * v),
        None => Err(Error::Quadrature {
            context: context.to_string(),
            lo,
            hi,
        }),
    }
}

/// Iterated (inner-x, outer-t) adaptive integration over a rectangle.
pub fn integrate_adaptive_2d(
    f: &dyn Fn(f64, f64) -> f64,
    x_lo: f64,
    x_hi: f64,
    t_lo: f64,
    t_hi: f64,
    rel_tol: f64,
    context: &str,
) -> Result<f64> {
    let inner_tol = rel_tol * 0.25;
    let inner = |t: f64| {
        integrate_adaptive(&|x| f(x, t), x_lo, x_hi, inner_tol, context).unwrap_or(f64::NAN)
    };
    let value = integrate_adaptive(&inner, t_lo, t_hi, rel_tol, context)?;
    if value.is_nan() {
        return Err(Error::Quadrature {
            context: context.to_string(),
            lo: x_lo,
            hi: x_hi,
        });
    }
    Ok(value)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn refine(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Option<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let f_lm = f(lm);
    let f_rm = f(rm);
    let left = simpson(a, m, fa, f_lm, fm);
    let right = simpson(m, b, fm, f_rm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Some(left + right + delta / 15.0);
    }
    if depth == 0 {
        return None;
    }
    let l = refine(f, a, m, fa, f_lm, fm, left, 0.5 * tol, depth - 1)?;
    let r = refine(f, m, b, fm, f_rm, fb, right, 0.5 * tol, depth - 1)?;
    Some(l + r)
}
