//! Transformed problem construction.
//!
//! Starting from piecewise coefficients `α, k > 0` with first-kind
//! discontinuities at the critical temperatures `u^1 < … < u^J`, this module
//! builds:
//!
//! - the Kirchhoff transform `v = F(u) = ∫_{u¹}^{u} k(y) dy` and its inverse;
//! - the enthalpy `b(v)` with `b'(v) = β(v) = α(F⁻¹(v)) / k(F⁻¹(v))` on each
//!   smooth segment and a prescribed jump `γ_j` at each critical value
//!   `v^j = F(u^j)` (normalized so `b(0⁻) = 0`, `v¹ = 0`);
//! - the mollification `b_ε(v) = ∫ b(y) ω_ε(v − y) dy` with the standard
//!   bump kernel `ω(u) = 𝓒 e^{−1/(1−u²)}`, evaluated by a fixed-order
//!   Gauss–Legendre rule split at the jump locations inside the window.
//!
//! The smooth part of `b` has a closed form: substituting `w = F(y)` in
//! `∫_0^v β(w) dw` gives `A(F⁻¹(v))` with `A(y) = ∫_{u¹}^{y} α`, so polynomial
//! coefficient pieces integrate exactly and no quadrature enters `b` itself.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::func::Poly;
use crate::quad;

type Fn1 = dyn Fn(f64) -> f64 + Send + Sync;

/// One coefficient piece: a polynomial (integrated exactly) or an opaque
/// positive function (integrated adaptively to relative tolerance 1e-12).
#[derive(Clone)]
pub enum Coeff {
    Poly(Poly),
    Func(Arc<Fn1>),
}

impl core::fmt::Debug for Coeff {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Coeff::Poly(p) => f.debug_tuple("Poly").field(p).finish(),
            Coeff::Func(_) => f.write_str("Func(..)"),
        }
    }
}

impl Coeff {
    pub fn constant(c: f64) -> Self {
        Coeff::Poly(Poly::constant(c))
    }

    pub fn poly(coeffs: Vec<f64>) -> Self {
        Coeff::Poly(Poly::new(coeffs))
    }

    pub fn from_fn(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Coeff::Func(Arc::new(f))
    }

    pub fn eval(&self, u: f64) -> f64 {
        match self {
            Coeff::Poly(p) => p.eval(u),
            Coeff::Func(f) => f(u),
        }
    }

    /// Signed `∫_a^b`, exact for polynomials.
    fn integral(&self, a: f64, b: f64, context: &str) -> Result<f64> {
        match self {
            Coeff::Poly(p) => Ok(p.integral(a, b)),
            Coeff::Func(f) => quad::integrate_adaptive(&**f, a, b, 1e-12, context),
        }
    }
}

/// Physical coefficients of the multiphase problem: critical temperatures,
/// latent heats, and one `α`/`k` piece per segment
/// `(−∞, u¹], [u^j, u^{j+1}], [u^J, ∞)`.
///
/// Immutable after construction; cumulative integrals of `k` and `α` at the
/// critical temperatures are cached so transform evaluations stay cheap.
#[derive(Debug, Clone)]
pub struct PhaseSpec {
    critical_temps: Vec<f64>,
    latent_heats: Vec<f64>,
    alpha_pieces: Vec<Coeff>,
    k_pieces: Vec<Coeff>,
    /// `F(u^j)` per critical temperature (`= v^j`); empty when `J = 0`.
    k_cum: Vec<f64>,
    /// `A(u^j) = ∫_{u¹}^{u^j} α`.
    a_cum: Vec<f64>,
}

impl PhaseSpec {
    pub fn new(
        critical_temps: Vec<f64>,
        latent_heats: Vec<f64>,
        alpha_pieces: Vec<Coeff>,
        k_pieces: Vec<Coeff>,
    ) -> Result<Self> {
        let j = critical_temps.len();
        if latent_heats.len() != j {
            return Err(Error::InvalidSpec(String::from(
                "latent_heats must match critical_temps in length",
            )));
        }
        if alpha_pieces.len() != j + 1 || k_pieces.len() != j + 1 {
            return Err(Error::InvalidSpec(format!(
                "expected {} coefficient pieces per coefficient, got alpha: {}, k: {}",
                j + 1,
                alpha_pieces.len(),
                k_pieces.len()
            )));
        }
        if critical_temps.iter().any(|u| !u.is_finite()) {
            return Err(Error::InvalidSpec(String::from(
                "critical temperatures must be finite",
            )));
        }
        if critical_temps.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidSpec(String::from(
                "critical temperatures must be strictly increasing",
            )));
        }
        if latent_heats.iter().any(|&g| !(g > 0.0)) {
            return Err(Error::InvalidSpec(String::from(
                "latent heats must be positive",
            )));
        }
        let mut spec = Self {
            critical_temps,
            latent_heats,
            alpha_pieces,
            k_pieces,
            k_cum: Vec::new(),
            a_cum: Vec::new(),
        };
        spec.check_positivity()?;
        spec.check_tail_ratio()?;
        spec.k_cum = spec.cumulative(&spec.k_pieces, "k piece")?;
        spec.a_cum = spec.cumulative(&spec.alpha_pieces, "alpha piece")?;
        Ok(spec)
    }

    pub fn critical_temps(&self) -> &[f64] {
        &self.critical_temps
    }

    pub fn latent_heats(&self) -> &[f64] {
        &self.latent_heats
    }

    pub fn phase_count(&self) -> usize {
        self.critical_temps.len()
    }

    /// Sampling window of piece `idx` used for validation and for the
    /// `bbar` estimate.
    fn piece_window(&self, idx: usize) -> (f64, f64) {
        let j = self.critical_temps.len();
        if j == 0 {
            return (-50.0, 50.0);
        }
        let span = 10.0 * (self.critical_temps[j - 1] - self.critical_temps[0]).max(1.0);
        if idx == 0 {
            (self.critical_temps[0] - span, self.critical_temps[0])
        } else if idx == j {
            (self.critical_temps[j - 1], self.critical_temps[j - 1] + span)
        } else {
            (self.critical_temps[idx - 1], self.critical_temps[idx])
        }
    }

    fn check_positivity(&self) -> Result<()> {
        const SAMPLES: usize = 129;
        for idx in 0..self.alpha_pieces.len() {
            let (lo, hi) = self.piece_window(idx);
            for s in 0..SAMPLES {
                let u = lo + (hi - lo) * (s as f64 + 0.5) / SAMPLES as f64;
                let a = self.alpha_pieces[idx].eval(u);
                let k = self.k_pieces[idx].eval(u);
                if !(a > 0.0) || !(k > 0.0) {
                    return Err(Error::InvalidSpec(format!(
                        "coefficient piece {idx} not positive at u = {u} (alpha = {a}, k = {k})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Sampled stand-in for `liminf_{u→∞} α/k ≥ a_0 > 0`.
    fn check_tail_ratio(&self) -> Result<()> {
        let j = self.critical_temps.len();
        let (base, scale) = if j == 0 {
            (0.0, 50.0)
        } else {
            let span = (self.critical_temps[j - 1] - self.critical_temps[0]).max(1.0);
            (self.critical_temps[j - 1], 10.0 * span)
        };
        let piece = j; // topmost segment
        for mag in [1.0, 10.0, 100.0, 1e3, 1e4] {
            let u = base + scale * mag;
            let ratio = self.alpha_pieces[piece].eval(u) / self.k_pieces[piece].eval(u);
            if !(ratio > 1e-12) {
                return Err(Error::InvalidSpec(format!(
                    "alpha/k tail ratio {ratio} at u = {u} is not bounded away from zero"
                )));
            }
        }
        Ok(())
    }

    fn cumulative(&self, pieces: &[Coeff], what: &str) -> Result<Vec<f64>> {
        let j = self.critical_temps.len();
        let mut cum = alloc::vec![0.0; j];
        for i in 1..j {
            let ctx = format!("{what} {i}");
            cum[i] = cum[i - 1]
                + pieces[i].integral(self.critical_temps[i - 1], self.critical_temps[i], &ctx)?;
        }
        Ok(cum)
    }

    /// Index of the piece covering `u` (upper pieces are lower-closed).
    fn piece_index(&self, u: f64) -> usize {
        self.critical_temps.partition_point(|&c| c <= u)
    }

    /// Reference temperature of the transform: `u¹`, or 0 when there are no
    /// critical temperatures.
    pub fn reference_temp(&self) -> f64 {
        self.critical_temps.first().copied().unwrap_or(0.0)
    }

    /// Kirchhoff transform `F(u) = ∫_{u¹}^{u} k(y) dy`.
    pub fn kirchhoff(&self, u: f64) -> Result<f64> {
        let idx = self.piece_index(u);
        let ctx = format!("k piece {idx}");
        if self.critical_temps.is_empty() {
            return self.k_pieces[0].integral(0.0, u, &ctx);
        }
        if idx == 0 {
            return self.k_pieces[0].integral(self.critical_temps[0], u, &ctx);
        }
        Ok(self.k_cum[idx - 1]
            + self.k_pieces[idx].integral(self.critical_temps[idx - 1], u, &ctx)?)
    }

    /// `A(u) = ∫_{u¹}^{u} α(y) dy`, the smooth part of the enthalpy composed
    /// with `F`.
    fn alpha_antiderivative(&self, u: f64) -> Result<f64> {
        let idx = self.piece_index(u);
        let ctx = format!("alpha piece {idx}");
        if self.critical_temps.is_empty() {
            return self.alpha_pieces[0].integral(0.0, u, &ctx);
        }
        if idx == 0 {
            return self.alpha_pieces[0].integral(self.critical_temps[0], u, &ctx);
        }
        Ok(self.a_cum[idx - 1]
            + self.alpha_pieces[idx].integral(self.critical_temps[idx - 1], u, &ctx)?)
    }

    /// Inverse transform: the unique `u` with `|F(u) − v| ≤ 1e-10·max(1,|v|)`.
    pub fn inverse_kirchhoff(&self, v: f64) -> Result<f64> {
        self.inverse_from(v, v + self.reference_temp())
    }

    /// Inverse transform warm-started from `guess` (bisection bracket plus
    /// Newton polish; `F` is strictly increasing since `k > 0`).
    pub(crate) fn inverse_from(&self, v: f64, guess: f64) -> Result<f64> {
        let target = 1e-10 * v.abs().max(1.0);
        let mut lo = guess;
        let mut hi = guess;
        let mut step = 1.0_f64.max(target);
        let mut f_lo = self.kirchhoff(lo)?;
        let mut f_hi = f_lo;
        let mut tries = 0usize;
        while f_lo > v {
            hi = lo;
            f_hi = f_lo;
            lo -= step;
            step *= 2.0;
            f_lo = self.kirchhoff(lo)?;
            tries += 1;
            if tries > 200 {
                return Err(Error::Precondition(format!(
                    "value {v} not reachable by the Kirchhoff transform"
                )));
            }
        }
        while f_hi < v {
            lo = hi;
            hi += step;
            step *= 2.0;
            f_hi = self.kirchhoff(hi)?;
            tries += 1;
            if tries > 200 {
                return Err(Error::Precondition(format!(
                    "value {v} not reachable by the Kirchhoff transform"
                )));
            }
        }
        let mut u = 0.5 * (lo + hi);
        for _ in 0..160 {
            let residual = self.kirchhoff(u)? - v;
            if residual.abs() <= 0.5 * target {
                return Ok(u);
            }
            if residual > 0.0 {
                hi = u;
            } else {
                lo = u;
            }
            let slope = self.k_pieces[self.piece_index(u)].eval(u);
            let newton = u - residual / slope;
            u = if newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        Ok(u)
    }
}

/// Policy tying the mollification radius to the time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EpsilonPolicy {
    /// `ε = 1/n`, following the smoothing sequence of the scheme.
    InverseN,
    /// A fixed radius, for studies that vary the grid and `ε` independently.
    Fixed(f64),
}

impl EpsilonPolicy {
    pub fn value_for(&self, n: usize) -> f64 {
        match self {
            EpsilonPolicy::InverseN => 1.0 / n as f64,
            EpsilonPolicy::Fixed(e) => *e,
        }
    }
}

/// The monotone enthalpy `b`: smooth part `A(F⁻¹(v))` plus the cumulative
/// latent-heat jumps below `v`. Normalized so `b(0⁻) = 0`.
#[derive(Debug, Clone)]
pub struct EnthalpyFunction {
    spec: PhaseSpec,
    phase_values: Vec<f64>,
    jumps: Vec<f64>,
    bbar: f64,
}

/// Builds the enthalpy from a validated [`PhaseSpec`].
///
/// `analytic_bbar` is a caller-supplied lower bound for `b'`; when absent the
/// bound is the sampled infimum of `β = α/k` minus a 1% safety margin.
pub fn build_enthalpy(spec: PhaseSpec, analytic_bbar: Option<f64>) -> Result<EnthalpyFunction> {
    let phase_values = spec.k_cum.clone();
    let jumps = spec.latent_heats.clone();
    let mut sampled = f64::INFINITY;
    const SAMPLES: usize = 513;
    for idx in 0..spec.alpha_pieces.len() {
        let (lo, hi) = spec.piece_window(idx);
        for s in 0..SAMPLES {
            let u = lo + (hi - lo) * (s as f64 + 0.5) / SAMPLES as f64;
            let beta = spec.alpha_pieces[idx].eval(u) / spec.k_pieces[idx].eval(u);
            if !(beta > 0.0) {
                return Err(Error::InvalidSpec(format!(
                    "beta non-positive at u = {u} on piece {idx}"
                )));
            }
            sampled = sampled.min(beta);
        }
    }
    let mut bbar = sampled * 0.99;
    if let Some(a) = analytic_bbar {
        if !(a > 0.0) {
            return Err(Error::InvalidSpec(String::from(
                "analytic lower bound for b' must be positive",
            )));
        }
        bbar = bbar.max(a);
    }
    if !(bbar > 0.0) {
        return Err(Error::InvalidSpec(String::from(
            "could not establish a positive lower bound for b'",
        )));
    }
    Ok(EnthalpyFunction {
        spec,
        phase_values,
        jumps,
        bbar,
    })
}

impl EnthalpyFunction {
    pub fn spec(&self) -> &PhaseSpec {
        &self.spec
    }

    /// Critical values `v^j = F(u^j)`, with `v¹ = 0`.
    pub fn phase_values(&self) -> &[f64] {
        &self.phase_values
    }

    pub fn jumps(&self) -> &[f64] {
        &self.jumps
    }

    /// Positive lower bound for `b'` (and for `b_ε'` after mollification).
    pub fn bbar(&self) -> f64 {
        self.bbar
    }

    /// Sum of the jumps strictly below `v`; at `v = v^j` the left branch is
    /// used, so `b(0) = 0`.
    pub fn jump_sum_below(&self, v: f64) -> f64 {
        self.phase_values
            .iter()
            .zip(&self.jumps)
            .filter(|(&vj, _)| vj < v)
            .map(|(_, &g)| g)
            .sum()
    }

    /// `b(v)`; at a critical value this returns the left limit.
    pub fn eval(&self, v: f64) -> f64 {
        let u = self
            .spec
            .inverse_from(v, v + self.spec.reference_temp())
            .expect("inverse Kirchhoff transform");
        self.eval_with_inverse(u, v)
    }

    pub(crate) fn eval_with_inverse(&self, u: f64, v: f64) -> f64 {
        let smooth = self
            .spec
            .alpha_antiderivative(u)
            .expect("alpha antiderivative quadrature");
        smooth + self.jump_sum_below(v)
    }

    /// One-sided limits at the `j`-th critical value.
    pub fn left_limit(&self, j: usize) -> f64 {
        let smooth = self.spec.a_cum[j];
        let below: f64 = self.jumps[..j].iter().sum();
        smooth + below
    }

    pub fn right_limit(&self, j: usize) -> f64 {
        self.left_limit(j) + self.jumps[j]
    }

    /// `β(v) = b'(v)` away from the critical values.
    pub fn beta(&self, v: f64) -> f64 {
        let u = self
            .spec
            .inverse_from(v, v + self.spec.reference_temp())
            .expect("inverse Kirchhoff transform");
        self.beta_at_u(u)
    }

    pub(crate) fn beta_at_u(&self, u: f64) -> f64 {
        let idx = self.spec.piece_index(u);
        self.spec.alpha_pieces[idx].eval(u) / self.spec.k_pieces[idx].eval(u)
    }
}

/// Default Gauss–Legendre order for the mollifier convolution. This order
/// integrates the bump kernel itself to ~1e-15 relative error, so the
/// quadrature never limits the kernel normalization.
pub const DEFAULT_MOLLIFIER_ORDER: usize = 96;

/// Smooth approximation `b_ε` of the enthalpy, with its exact-kernel
/// derivative `b_ε' = β ∗ ω_ε + Σ γ_j ω_ε(· − v^j)`.
#[derive(Debug, Clone)]
pub struct MollifiedEnthalpy {
    base: EnthalpyFunction,
    epsilon: f64,
    order: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    kernel_c: f64,
}

/// Mollifies the enthalpy with radius `eps` at the default quadrature order.
pub fn mollify(base: EnthalpyFunction, eps: f64) -> Result<MollifiedEnthalpy> {
    MollifiedEnthalpy::with_order(base, eps, DEFAULT_MOLLIFIER_ORDER)
}

fn bump(u: f64) -> f64 {
    let w = 1.0 - u * u;
    if w <= 0.0 {
        0.0
    } else {
        libm::exp(-1.0 / w)
    }
}

impl MollifiedEnthalpy {
    pub fn with_order(base: EnthalpyFunction, eps: f64, order: usize) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::Precondition(String::from(
                "mollification radius must be positive",
            )));
        }
        assert!(order >= 32, "mollifier quadrature order must be >= 32");
        let mass = quad::integrate_adaptive(&bump, -1.0, 1.0, 1e-14, "mollifier kernel")?;
        let (nodes, weights) = quad::gauss_legendre(order);
        Ok(Self {
            base,
            epsilon: eps,
            order,
            nodes,
            weights,
            kernel_c: 1.0 / mass,
        })
    }

    pub fn base(&self) -> &EnthalpyFunction {
        &self.base
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Normalization constant `𝓒` of the unit kernel.
    pub fn kernel_constant(&self) -> f64 {
        self.kernel_c
    }

    /// `ω_ε(z) = (𝓒/ε) e^{−1/(1−(z/ε)²)}` for `|z| < ε`, else 0.
    pub fn kernel_at(&self, z: f64) -> f64 {
        self.kernel_c / self.epsilon * bump(z / self.epsilon)
    }

    pub fn bbar(&self) -> f64 {
        self.base.bbar()
    }

    pub fn value(&self, v: f64) -> f64 {
        self.convolve(v, false).0
    }

    pub fn derivative(&self, v: f64) -> f64 {
        self.convolve(v, true).1
    }

    pub fn value_and_derivative(&self, v: f64) -> (f64, f64) {
        self.convolve(v, true)
    }

    /// Quadrature of the convolution in normalized coordinates
    /// `y = v − ε u, u ∈ [−1, 1]`, split at every jump inside the window so
    /// each panel integrand is smooth. The value is normalized by the
    /// quadrature mass of the kernel over the same panels, which keeps
    /// `b_ε` exact on affine segments and `b_ε' ≥ b̄` a convex-combination
    /// identity rather than a quadrature accident.
    fn convolve(&self, v: f64, with_derivative: bool) -> (f64, f64) {
        let eps = self.epsilon;
        let mut cuts: [f64; 8] = [0.0; 8];
        let mut n_cuts = 0;
        for &vj in self.base.phase_values() {
            let u = (v - vj) / eps;
            if u > -1.0 && u < 1.0 && n_cuts < cuts.len() {
                cuts[n_cuts] = u;
                n_cuts += 1;
            }
        }
        cuts[..n_cuts].sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite cuts"));

        let mut num = 0.0;
        let mut dnum = 0.0;
        let mut mass = 0.0;
        let mut lo = -1.0;
        let mut u_guess = v + self.base.spec().reference_temp();
        for cut in cuts[..n_cuts].iter().copied().chain(core::iter::once(1.0)) {
            let hi = cut;
            if hi > lo {
                let half = 0.5 * (hi - lo);
                let mid = 0.5 * (hi + lo);
                for (&node, &w) in self.nodes.iter().zip(&self.weights) {
                    let u = mid + half * node;
                    let omega = w * half * bump(u);
                    if omega == 0.0 {
                        continue;
                    }
                    let y = v - eps * u;
                    let inv = self
                        .base
                        .spec()
                        .inverse_from(y, u_guess)
                        .expect("inverse Kirchhoff transform");
                    u_guess = inv;
                    mass += omega;
                    num += omega * self.base.eval_with_inverse(inv, y);
                    if with_derivative {
                        dnum += omega * self.base.beta_at_u(inv);
                    }
                }
            }
            lo = hi;
        }
        debug_assert!(mass > 0.0);
        let value = num / mass;
        if !with_derivative {
            return (value, 0.0);
        }
        let mut deriv = dnum / mass;
        for (&vj, &g) in self.base.phase_values().iter().zip(self.base.jumps()) {
            deriv += g * self.kernel_at(v - vj);
        }
        (value, deriv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_spec() -> PhaseSpec {
        // k ≡ 1, α ≡ 1, one transition at u¹ = 0 with γ = 1
        PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![1.0],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
        )
        .unwrap()
    }

    fn no_jump_spec(alpha: f64, k: f64) -> PhaseSpec {
        PhaseSpec::new(
            alloc::vec![],
            alloc::vec![],
            alloc::vec![Coeff::constant(alpha)],
            alloc::vec![Coeff::constant(k)],
        )
        .unwrap()
    }

    #[test]
    fn kirchhoff_identity_for_unit_conductivity() {
        let spec = unit_spec();
        assert_relative_eq!(spec.kirchhoff(0.7).unwrap(), 0.7, epsilon = 1e-14);
        assert_relative_eq!(spec.inverse_kirchhoff(0.7).unwrap(), 0.7, epsilon = 1e-10);
    }

    #[test]
    fn kirchhoff_scales_with_conductivity() {
        let spec = PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![1.0],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
            alloc::vec![Coeff::constant(2.0), Coeff::constant(2.0)],
        )
        .unwrap();
        assert_relative_eq!(spec.kirchhoff(0.5).unwrap(), 1.0, epsilon = 1e-14);
        assert_relative_eq!(spec.inverse_kirchhoff(1.0).unwrap(), 0.5, epsilon = 1e-10);
    }

    /// Composite-Simpson oracle for `∫_0^u (1 + y) dy` at 10⁴ panels.
    fn simpson_oracle(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            let w = if i % 2 == 0 { 2.0 } else { 4.0 };
            acc += w * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn kirchhoff_affine_conductivity_matches_quadrature_oracle() {
        let spec = PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![1.0],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
            alloc::vec![
                Coeff::poly(alloc::vec![1.0, 1.0]),
                Coeff::poly(alloc::vec![1.0, 1.0]),
            ],
        )
        .unwrap();
        let v = spec.kirchhoff(1.0).unwrap();
        assert_relative_eq!(v, 1.5, epsilon = 1e-14);
        let oracle = simpson_oracle(|y| 1.0 + y, 0.0, 1.0, 10_000);
        assert_relative_eq!(v, oracle, epsilon = 1e-12);
        // invert the oracle value by bisection on the oracle itself
        let mut lo = 0.0;
        let mut hi = 4.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if simpson_oracle(|y| 1.0 + y, 0.0, mid, 1_000) < 1.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_relative_eq!(spec.inverse_kirchhoff(1.5).unwrap(), lo, epsilon = 1e-9);
    }

    #[test]
    fn kirchhoff_round_trip() {
        let spec = PhaseSpec::new(
            alloc::vec![-1.0, 2.0],
            alloc::vec![0.5, 0.25],
            alloc::vec![
                Coeff::constant(2.0),
                Coeff::poly(alloc::vec![1.0, 0.0, 0.1]),
                Coeff::constant(3.0),
            ],
            alloc::vec![
                Coeff::constant(1.0),
                Coeff::poly(alloc::vec![2.0, 0.5]),
                Coeff::constant(2.0),
            ],
        )
        .unwrap();
        for i in 0..60 {
            let u = -4.0 + 8.0 * i as f64 / 59.0;
            let v = spec.kirchhoff(u).unwrap();
            let back = spec.inverse_kirchhoff(v).unwrap();
            assert_relative_eq!(back, u, epsilon = 1e-9, max_relative = 1e-9);
        }
        // monotone in u
        let mut prev = f64::NEG_INFINITY;
        for i in 0..60 {
            let u = -4.0 + 8.0 * i as f64 / 59.0;
            let v = spec.kirchhoff(u).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn spec_validation_rejects_bad_input() {
        assert!(PhaseSpec::new(
            alloc::vec![1.0, 0.0],
            alloc::vec![1.0, 1.0],
            alloc::vec![Coeff::constant(1.0); 3],
            alloc::vec![Coeff::constant(1.0); 3],
        )
        .is_err());
        assert!(PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![-1.0],
            alloc::vec![Coeff::constant(1.0); 2],
            alloc::vec![Coeff::constant(1.0); 2],
        )
        .is_err());
        assert!(PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![1.0],
            alloc::vec![Coeff::constant(-1.0), Coeff::constant(1.0)],
            alloc::vec![Coeff::constant(1.0); 2],
        )
        .is_err());
    }

    #[test]
    fn enthalpy_unit_case_is_identity_plus_jump() {
        let b = build_enthalpy(unit_spec(), Some(1.0)).unwrap();
        assert_relative_eq!(b.eval(-0.5), -0.5, epsilon = 1e-12);
        assert_relative_eq!(b.eval(0.5), 1.5, epsilon = 1e-12);
        assert_relative_eq!(b.eval(0.0), 0.0, epsilon = 1e-12); // left branch at the jump
        assert_relative_eq!(b.left_limit(0), 0.0);
        assert_relative_eq!(b.right_limit(0), 1.0);
        assert_relative_eq!(b.bbar(), 1.0);
    }

    #[test]
    fn enthalpy_scales_with_alpha() {
        let b = build_enthalpy(no_jump_spec(2.0, 1.0), None).unwrap();
        assert_relative_eq!(b.eval(-1.0), -2.0, epsilon = 1e-12);
        assert!(b.bbar() <= 2.0 && b.bbar() >= 2.0 * 0.99 - 1e-12);
    }

    #[test]
    fn enthalpy_jump_prescription() {
        let spec = PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![0.5],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
        )
        .unwrap();
        let b = build_enthalpy(spec, None).unwrap();
        let gap = b.eval(1e-12) - b.eval(-1e-12);
        assert_relative_eq!(gap, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn enthalpy_monotone_across_samples() {
        let spec = PhaseSpec::new(
            alloc::vec![0.0, 1.0],
            alloc::vec![0.5, 0.25],
            alloc::vec![
                Coeff::constant(1.0),
                Coeff::constant(2.0),
                Coeff::constant(1.5),
            ],
            alloc::vec![
                Coeff::constant(1.0),
                Coeff::constant(1.0),
                Coeff::constant(2.0),
            ],
        )
        .unwrap();
        let b = build_enthalpy(spec, None).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for i in 0..200 {
            let v = -2.0 + 5.0 * i as f64 / 199.0;
            let val = b.eval(v);
            assert!(val >= prev, "b not monotone at v = {v}");
            prev = val;
        }
    }

    #[test]
    fn kernel_constant_matches_composite_simpson_oracle() {
        let b = build_enthalpy(unit_spec(), Some(1.0)).unwrap();
        let bm = mollify(b, 0.1).unwrap();
        // independent oracle: composite Simpson with 2^20 panels
        let oracle = simpson_oracle(bump, -1.0, 1.0, 1 << 20);
        assert_relative_eq!(bm.kernel_constant() * oracle, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn mollifying_affine_enthalpy_is_identity() {
        let b = build_enthalpy(no_jump_spec(2.0, 1.0), None).unwrap();
        let bm = mollify(b, 0.25).unwrap();
        for v in [-3.0, -0.2, 0.0, 0.4, 1.7] {
            assert_relative_eq!(bm.value(v), 2.0 * v, epsilon = 1e-13, max_relative = 1e-13);
            assert_relative_eq!(bm.derivative(v), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn mollified_jump_midpoint_and_far_field() {
        let b = build_enthalpy(unit_spec(), Some(1.0)).unwrap();
        let eps = 0.125;
        let bm = mollify(b, eps).unwrap();
        // kernel symmetry: the mollified value at the jump is the midpoint
        assert_relative_eq!(bm.value(0.0), 0.5, epsilon = 1e-12);
        // outside the kernel support the mollification is exact
        assert_relative_eq!(bm.value(2.0 * eps), 2.0 * eps + 1.0, epsilon = 1e-12);
        assert_relative_eq!(bm.value(-2.0 * eps), -2.0 * eps, epsilon = 1e-12);
    }

    #[test]
    fn mollified_derivative_matches_kernel_formula_and_finite_difference() {
        let b = build_enthalpy(unit_spec(), Some(1.0)).unwrap();
        let eps = 0.1;
        let bm = mollify(b, eps).unwrap();
        let expected = 1.0 + bm.kernel_at(0.0);
        let analytic = bm.derivative(0.0);
        assert_relative_eq!(analytic, expected, epsilon = 1e-10, max_relative = 1e-10);
        // central finite difference of b_ε at step 1e-5·ε
        let h = 1e-5 * eps;
        let fd = (bm.value(h) - bm.value(-h)) / (2.0 * h);
        assert_relative_eq!(analytic, fd, max_relative = 1e-6);
        // same cross-check away from the jump center
        for v in [-0.07, 0.033, 0.09] {
            let fd = (bm.value(v + h) - bm.value(v - h)) / (2.0 * h);
            assert_relative_eq!(bm.derivative(v), fd, max_relative = 1e-6);
        }
    }

    #[test]
    fn mollified_derivative_dominates_bbar() {
        let spec = PhaseSpec::new(
            alloc::vec![0.0],
            alloc::vec![0.75],
            alloc::vec![Coeff::constant(0.5), Coeff::poly(alloc::vec![1.0, 0.25])],
            alloc::vec![Coeff::constant(1.0), Coeff::constant(1.0)],
        )
        .unwrap();
        let b = build_enthalpy(spec, None).unwrap();
        let bm = mollify(b, 0.05).unwrap();
        let bbar = bm.bbar();
        for i in 0..10_000 {
            let v = -2.0 + 4.0 * i as f64 / 9_999.0;
            assert!(
                bm.derivative(v) >= bbar,
                "derivative below bbar at v = {v}"
            );
        }
    }

    #[test]
    fn mollified_value_monotone_and_consistent_as_eps_shrinks() {
        let b = build_enthalpy(unit_spec(), Some(1.0)).unwrap();
        let mut last_gap = f64::INFINITY;
        for eps in [1e-1, 1e-2, 1e-3] {
            let bm = mollify(b.clone(), eps).unwrap();
            // monotone on a sample sweep crossing the jump
            let mut prev = f64::NEG_INFINITY;
            for i in 0..400 {
                let v = -0.5 + i as f64 / 399.0;
                let val = bm.value(v);
                assert!(val > prev, "b_eps not strictly increasing at {v}");
                prev = val;
            }
            // consistency at a fixed continuity point
            let gap = (bm.value(0.04) - b.eval(0.04)).abs();
            assert!(gap < last_gap || gap < 1e-14);
            last_gap = gap;
        }
        assert!(last_gap < 1e-12);
    }
}
