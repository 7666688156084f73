//! Grids, Steklov cell averages, and the mappings between continuous and
//! discrete controls.
//!
//! The control spaces are `W₂¹(0,T)` on the continuous side and vectors
//! `[g]_n = (g_0, …, g_n)` with the discrete norm
//! `‖[g]_n‖²_{w₂¹} = Σ_{k≥1} τ g_k² + Σ_{k≥1} τ ((g_k − g_{k−1})/τ)²`
//! on the discrete side. `Q_n` takes cell averages (`g_0 = g(0)`), `P_n`
//! interpolates piecewise-linearly, and the admissible set is the ball of
//! radius `R`, onto which radial scaling projects exactly because the norm
//! is homogeneous.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::func::{Field, PiecewiseLinear, Profile};
use crate::solver::Array2;

/// Uniform space-time grid: `n` time steps of length `τ = T/n` and `m` space
/// cells of length `h = L/m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    n: usize,
    m: usize,
    total_time: f64,
    length: f64,
}

impl Grid {
    pub fn new(n: usize, m: usize, total_time: f64, length: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidSpec(String::from(
                "grid needs at least one time step and one space cell",
            )));
        }
        if !(total_time > 0.0) || !(length > 0.0) {
            return Err(Error::InvalidSpec(String::from(
                "grid extents must be positive",
            )));
        }
        Ok(Self {
            n,
            m,
            total_time,
            length,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn total_time(&self) -> f64 {
        self.total_time
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn tau(&self) -> f64 {
        self.total_time / self.n as f64
    }

    pub fn h(&self) -> f64 {
        self.length / self.m as f64
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.tau()
    }

    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h()
    }

    /// Same domain with both step counts multiplied by `factor`.
    pub fn refined(&self, factor: usize) -> Self {
        Self {
            n: self.n * factor,
            m: self.m * factor,
            total_time: self.total_time,
            length: self.length,
        }
    }
}

/// Closed-form problem data: source `f(x,t)`, right flux `p(t)`, initial
/// profile `Φ(x)` (already Kirchhoff-transformed), measurement `Γ(t)`, and
/// the control-ball radius `R`.
#[derive(Debug, Clone)]
pub struct ProblemData {
    pub f: Field,
    pub p: Profile,
    pub phi: Profile,
    pub gamma: Profile,
    pub radius: f64,
}

/// Steklov cell averages of all data on one grid.
///
/// `f` is indexed `[k-1][i]` for `k = 1..n`, `i = 0..m-1`; `p` and `gamma`
/// hold `p_k`, `Γ_k` for `k = 1..n`; `phi` holds `Φ_i` for `i = 0..m` with
/// the endpoint rule `Φ_m = Φ(L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SteklovData {
    pub f: Array2,
    pub p: Vec<f64>,
    pub gamma: Vec<f64>,
    pub phi: Vec<f64>,
    pub radius: f64,
}

/// Computes every Steklov average of Eq.-style cell means: exact for
/// polynomial data, adaptive quadrature otherwise.
pub fn steklov_averages(data: &ProblemData, grid: &Grid) -> Result<SteklovData> {
    let (n, m) = (grid.n(), grid.m());
    let tau = grid.tau();
    let h = grid.h();
    let mut f = Array2::zeros(n, m);
    for k in 1..=n {
        let (t0, t1) = ((k - 1) as f64 * tau, k as f64 * tau);
        for i in 0..m {
            let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
            f[(k - 1, i)] = data.f.cell_average(x0, x1, t0, t1, "source f")?;
        }
    }
    let mut p = Vec::with_capacity(n);
    let mut gamma = Vec::with_capacity(n);
    for k in 1..=n {
        let (t0, t1) = ((k - 1) as f64 * tau, k as f64 * tau);
        p.push(data.p.average(t0, t1, "flux p")?);
        gamma.push(data.gamma.average(t0, t1, "measurement gamma")?);
    }
    let mut phi = Vec::with_capacity(m + 1);
    for i in 0..m {
        let (x0, x1) = (i as f64 * h, (i + 1) as f64 * h);
        phi.push(data.phi.average(x0, x1, "initial profile phi")?);
    }
    phi.push(data.phi.eval(grid.length()));
    Ok(SteklovData {
        f,
        p,
        gamma,
        phi,
        radius: data.radius,
    })
}

/// Discrete boundary control `[g]_n = (g_0, …, g_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteControl {
    values: Vec<f64>,
}

impl DiscreteControl {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::InvalidSpec(String::from(
                "a discrete control needs n + 1 >= 2 components",
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidSpec(String::from(
                "discrete control components must be finite",
            )));
        }
        Ok(Self { values })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            values: alloc::vec![0.0; n + 1],
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn steps(&self) -> usize {
        self.values.len() - 1
    }
}

/// `Q_n`: cell averages of a continuous control, `g_0 = g(0)`.
pub fn qn_map(g: &Profile, grid: &Grid) -> Result<DiscreteControl> {
    let n = grid.n();
    let tau = grid.tau();
    let mut values = Vec::with_capacity(n + 1);
    values.push(g.eval(0.0));
    for k in 1..=n {
        values.push(g.average((k - 1) as f64 * tau, k as f64 * tau, "control g")?);
    }
    DiscreteControl::new(values)
}

/// `P_n`: the continuous piecewise-linear interpolant with knot values `g_k`.
pub fn pn_map(gd: &DiscreteControl, grid: &Grid) -> PiecewiseLinear {
    let n = gd.steps();
    assert_eq!(n, grid.n(), "control length must match the grid");
    let knots = (0..=n).map(|k| grid.t(k)).collect();
    PiecewiseLinear::new(knots, gd.values().to_vec()).expect("grid knots are strictly increasing")
}

/// Squared discrete Sobolev norm `Σ τ g_k² + Σ τ g_{k t̄}²` (sums over
/// `k = 1..n`; `g_0` enters only through the first difference).
pub fn w21_discrete_norm_sq(gd: &DiscreteControl, grid: &Grid) -> f64 {
    let tau = grid.tau();
    let g = gd.values();
    assert_eq!(g.len(), grid.n() + 1, "control length must match the grid");
    let mut acc = 0.0;
    for k in 1..g.len() {
        let dt = (g[k] - g[k - 1]) / tau;
        acc += tau * (g[k] * g[k] + dt * dt);
    }
    acc
}

pub fn w21_discrete_norm(gd: &DiscreteControl, grid: &Grid) -> f64 {
    libm::sqrt(w21_discrete_norm_sq(gd, grid))
}

/// Exact `W₂¹` norm of a piecewise-linear function over its knot span.
pub fn w21_continuous_norm(g: &PiecewiseLinear) -> f64 {
    let lo = g.knots()[0];
    let hi = *g.knots().last().expect("non-empty");
    libm::sqrt(g.integral_sq(lo, hi) + g.derivative_sq_integral(lo, hi))
}

/// Radial projection onto the control ball `G_R^n`: controls inside the ball
/// pass through unchanged, anything outside is scaled back to norm `R`
/// (exact, because the norm is homogeneous).
pub fn project_to_ball(gd: &DiscreteControl, radius: f64, grid: &Grid) -> DiscreteControl {
    assert!(radius > 0.0, "ball radius must be positive");
    let norm = w21_discrete_norm(gd, grid);
    if norm <= radius {
        return gd.clone();
    }
    let scale = radius / norm;
    DiscreteControl {
        values: gd.values().iter().map(|&v| v * scale).collect(),
    }
}

/// Validation for user-sampled controls: `Q_n` needs dense enough data.
pub fn check_sample_density(g: &Profile, grid: &Grid) -> Result<()> {
    if let Some(count) = g.sample_count() {
        let needed = 10 * grid.n();
        if count < needed {
            return Err(Error::Precondition(format!(
                "sampled control provides {count} points but n = {} requires at least {needed}",
                grid.n()
            )));
        }
    }
    Ok(())
}
