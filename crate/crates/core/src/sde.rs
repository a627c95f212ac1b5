//! Demand diffusions: parameter sets, admissibility, exact path sampling and
//! the closed-form conditional moments used by the boundary and the cost
//! functionals.
//!
//! Three models are supported:
//!
//! ```text
//! ABM:  dD = μ dt + σ dW                 O = ℝ
//! GBM:  dD = μ D dt + σ D dW             O = (0, ∞)
//! CIR:  dD = γ(δ − D) dt + σ √D dW       O = (0, ∞)
//! ```
//!
//! All three have an affine drift `μ(d) = a·d + b`, which is what makes the
//! resolvent `β` affine in `d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stochastic model for the demand intercept `D`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DemandModel {
    /// Arithmetic Brownian motion: drift in units/year, volatility in units/√year.
    Abm { mu: f64, sigma: f64 },
    /// Geometric Brownian motion: relative drift and volatility.
    Gbm { mu: f64, sigma: f64 },
    /// Cox-Ingersoll-Ross: reversion speed, long-run level, volatility.
    Cir { gamma: f64, delta: f64, sigma: f64 },
}

/// Parameters of the CIR model, split out for the routines that only make
/// sense for it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CirParams {
    pub gamma: f64,
    pub delta: f64,
    pub sigma: f64,
}

/// State space of a demand model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateSpace {
    /// The whole real line.
    Real,
    /// The open half line `(0, ∞)`.
    Positive,
}

impl StateSpace {
    pub fn contains(self, d: f64) -> bool {
        match self {
            StateSpace::Real => d.is_finite(),
            StateSpace::Positive => d.is_finite() && d > 0.0,
        }
    }

    /// Left end point of the state space, if finite.
    pub fn lower_bound(self) -> Option<f64> {
        match self {
            StateSpace::Real => None,
            StateSpace::Positive => Some(0.0),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            StateSpace::Real => "(-inf, inf)",
            StateSpace::Positive => "(0, inf)",
        }
    }
}

/// Affine drift `μ(d) = slope·d + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineDrift {
    pub slope: f64,
    pub intercept: f64,
}

impl AffineDrift {
    /// `E[D_t | D_0 = d]` for any diffusion with this drift.
    pub fn mean(&self, d: f64, t: f64) -> f64 {
        let at = self.slope * t;
        d * at.exp() + self.intercept * t * expm1_ratio(at)
    }
}

/// `(e^x − 1)/x`, equal to 1 at `x = 0`.
pub(crate) fn expm1_ratio(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0 + 0.5 * x
    } else {
        x.exp_m1() / x
    }
}

impl DemandModel {
    pub fn state_space(&self) -> StateSpace {
        match self {
            DemandModel::Abm { .. } => StateSpace::Real,
            DemandModel::Gbm { .. } | DemandModel::Cir { .. } => StateSpace::Positive,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DemandModel::Abm { .. } => "abm",
            DemandModel::Gbm { .. } => "gbm",
            DemandModel::Cir { .. } => "cir",
        }
    }

    pub fn cir_params(&self) -> Option<CirParams> {
        match *self {
            DemandModel::Cir {
                gamma,
                delta,
                sigma,
            } => Some(CirParams {
                gamma,
                delta,
                sigma,
            }),
            _ => None,
        }
    }

    pub fn sigma(&self) -> f64 {
        match *self {
            DemandModel::Abm { sigma, .. }
            | DemandModel::Gbm { sigma, .. }
            | DemandModel::Cir { sigma, .. } => sigma,
        }
    }

    /// Copy of the model with a different volatility.
    pub fn with_sigma(&self, sigma: f64) -> DemandModel {
        let mut out = *self;
        match &mut out {
            DemandModel::Abm { sigma: s, .. }
            | DemandModel::Gbm { sigma: s, .. }
            | DemandModel::Cir { sigma: s, .. } => *s = sigma,
        }
        out
    }

    pub fn drift(&self, d: f64) -> f64 {
        let a = self.affine_drift();
        a.slope * d + a.intercept
    }

    /// Local variance `σ²(d)`.
    pub fn variance(&self, d: f64) -> f64 {
        match *self {
            DemandModel::Abm { sigma, .. } => sigma * sigma,
            DemandModel::Gbm { sigma, .. } => sigma * sigma * d * d,
            DemandModel::Cir { sigma, .. } => sigma * sigma * d,
        }
    }

    pub fn affine_drift(&self) -> AffineDrift {
        match *self {
            DemandModel::Abm { mu, .. } => AffineDrift {
                slope: 0.0,
                intercept: mu,
            },
            DemandModel::Gbm { mu, .. } => AffineDrift {
                slope: mu,
                intercept: 0.0,
            },
            DemandModel::Cir { gamma, delta, .. } => AffineDrift {
                slope: -gamma,
                intercept: gamma * delta,
            },
        }
    }

    /// Exponential growth rate of `E[D_t²]` used for admissibility and tail
    /// bounds. Zero for the models whose second moment grows sub-exponentially.
    pub fn second_moment_growth(&self) -> f64 {
        match *self {
            DemandModel::Gbm { mu, sigma } => (2.0 * mu + sigma * sigma).max(0.0),
            DemandModel::Abm { .. } | DemandModel::Cir { .. } => 0.0,
        }
    }

    pub fn check_level(&self, d: f64) -> Result<()> {
        let space = self.state_space();
        if space.contains(d) {
            Ok(())
        } else {
            Err(Error::Domain {
                value: d,
                space: space.label(),
            })
        }
    }
}

/// Checks the model invariants and the discount-rate admissibility condition.
pub fn validate(model: &DemandModel, rho: f64) -> Result<()> {
    let finite = |name: &str, v: f64| {
        if v.is_finite() {
            Ok(())
        } else {
            Err(Error::Parameter(format!("{name} must be finite, got {v}")))
        }
    };
    finite("rho", rho)?;
    match *model {
        DemandModel::Abm { mu, sigma } => {
            finite("mu", mu)?;
            finite("sigma", sigma)?;
            if sigma <= 0.0 {
                return Err(Error::Parameter(format!(
                    "ABM requires sigma > 0, got {sigma}"
                )));
            }
            if rho <= 0.0 {
                return Err(Error::Parameter(format!("ABM requires rho > 0, got {rho}")));
            }
        }
        DemandModel::Gbm { mu, sigma } => {
            finite("mu", mu)?;
            finite("sigma", sigma)?;
            if sigma <= 0.0 {
                return Err(Error::Parameter(format!(
                    "GBM requires sigma > 0, got {sigma}"
                )));
            }
            let bound = 2.0 * mu + sigma * sigma;
            if rho <= bound {
                return Err(Error::Parameter(format!(
                    "GBM requires rho > 2 mu + sigma^2: {rho} <= {bound}"
                )));
            }
        }
        DemandModel::Cir {
            gamma,
            delta,
            sigma,
        } => {
            finite("gamma", gamma)?;
            finite("delta", delta)?;
            finite("sigma", sigma)?;
            if gamma <= 0.0 || delta <= 0.0 || sigma <= 0.0 {
                return Err(Error::Parameter(format!(
                    "CIR requires gamma, delta, sigma > 0, got ({gamma}, {delta}, {sigma})"
                )));
            }
            let feller = 2.0 * gamma * delta;
            if feller < sigma * sigma {
                return Err(Error::Parameter(format!(
                    "CIR requires 2 gamma delta >= sigma^2: {feller} < {}",
                    sigma * sigma
                )));
            }
            if rho <= 0.0 {
                return Err(Error::Parameter(format!("CIR requires rho > 0, got {rho}")));
            }
        }
    }
    Ok(())
}

/// `β₀(d) = E[D_h | D_0 = d]`.
pub fn beta0(model: &DemandModel, d: f64, h: f64) -> f64 {
    match *model {
        DemandModel::Abm { mu, .. } => d + mu * h,
        DemandModel::Gbm { mu, .. } => d * (mu * h).exp(),
        DemandModel::Cir { gamma, delta, .. } => {
            let decay = (-gamma * h).exp();
            decay * d + (1.0 - decay) * delta
        }
    }
}

/// `α₀(d) = E[D_h² | D_0 = d]`.
pub fn alpha0(model: &DemandModel, d: f64, h: f64) -> f64 {
    match *model {
        DemandModel::Abm { mu, sigma } => {
            let m = d + mu * h;
            m * m + sigma * sigma * h
        }
        DemandModel::Gbm { mu, sigma } => d * d * ((2.0 * mu + sigma * sigma) * h).exp(),
        DemandModel::Cir {
            gamma,
            delta,
            sigma,
        } => {
            let m = beta0(model, d, h);
            let e1 = (-gamma * h).exp();
            let s2 = sigma * sigma;
            let var = d * s2 * (e1 - e1 * e1) / gamma
                + delta * s2 * (1.0 - e1) * (1.0 - e1) / (2.0 * gamma);
            m * m + var
        }
    }
}

/// Resolvent `β(d) = ∫₀^∞ e^{−ρt} E[β₀(D_t)] dt`.
pub fn beta_resolvent(model: &DemandModel, d: f64, rho: f64, h: f64) -> f64 {
    match *model {
        DemandModel::Abm { mu, .. } => mu * h / rho + d / rho + mu / (rho * rho),
        DemandModel::Gbm { mu, .. } => (mu * h).exp() * d / (rho - mu),
        DemandModel::Cir { gamma, delta, .. } => {
            (-gamma * h).exp() * (d - delta) / (rho + gamma) + delta / rho
        }
    }
}

/// `β'(d)`; constant because the drift is affine.
pub fn beta_resolvent_slope(model: &DemandModel, rho: f64, h: f64) -> f64 {
    match *model {
        DemandModel::Abm { .. } => 1.0 / rho,
        DemandModel::Gbm { mu, .. } => (mu * h).exp() / (rho - mu),
        DemandModel::Cir { gamma, .. } => (-gamma * h).exp() / (rho + gamma),
    }
}

/// Uniform time grid `t_i = t0 + i·dt`, `i = 0..=n_steps`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t0: f64,
    pub dt: f64,
    pub n_steps: usize,
}

impl TimeGrid {
    pub fn new(t0: f64, dt: f64, n_steps: usize) -> Result<Self> {
        let grid = TimeGrid { t0, dt, n_steps };
        grid.validate()?;
        Ok(grid)
    }

    /// Grid starting at zero covering `[0, horizon]`; the horizon is rounded
    /// up to a whole number of steps.
    pub fn covering(dt: f64, horizon: f64) -> Result<Self> {
        if horizon.is_nan() || horizon <= 0.0 {
            return Err(Error::Grid(format!(
                "horizon must be positive, got {horizon}"
            )));
        }
        let n = (horizon / dt - 1e-9).ceil().max(1.0) as usize;
        TimeGrid::new(0.0, dt, n)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Grid(format!("dt must be positive, got {}", self.dt)));
        }
        if self.n_steps == 0 {
            return Err(Error::Grid("n_steps must be at least 1".into()));
        }
        if !self.t0.is_finite() {
            return Err(Error::Grid("t0 must be finite".into()));
        }
        Ok(())
    }

    #[inline]
    pub fn time(&self, i: usize) -> f64 {
        self.t0 + i as f64 * self.dt
    }

    /// Number of grid points, `n_steps + 1`.
    pub fn len(&self) -> usize {
        self.n_steps + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn end(&self) -> f64 {
        self.time(self.n_steps)
    }

    /// Number of steps spanning `duration`, if it is a whole multiple of `dt`.
    pub fn steps_in(&self, duration: f64) -> Option<usize> {
        let n = (duration / self.dt).round();
        if n < 0.0 {
            return None;
        }
        let err = (n * self.dt - duration).abs();
        (err <= 1e-9 * duration.abs().max(self.dt)).then_some(n as usize)
    }
}

/// A sampled demand trajectory together with its running maximum
/// `sup_{s ≤ t_i} D_s`. Sampled paths carry the continuous-time supremum;
/// paths built from explicit values use the maximum over grid points.
#[derive(Debug, Clone, PartialEq)]
pub struct DemandPath {
    pub grid: TimeGrid,
    pub values: Vec<f64>,
    pub running_max: Vec<f64>,
    pub seed: u64,
}

impl DemandPath {
    /// Builds a path from explicit values; `values[0]` is the initial level.
    pub fn from_values(grid: TimeGrid, values: Vec<f64>, seed: u64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::Grid(format!(
                "path has {} values for a grid of {} points",
                values.len(),
                grid.len()
            )));
        }
        let mut running_max = Vec::with_capacity(values.len());
        let mut m = f64::NEG_INFINITY;
        for &v in &values {
            m = m.max(v);
            running_max.push(m);
        }
        Ok(DemandPath {
            grid,
            values,
            running_max,
            seed,
        })
    }

    pub fn initial(&self) -> f64 {
        self.values[0]
    }
}

/// Transition scheme used by the path sampler.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingScheme {
    /// Exact transition law for every model.
    #[default]
    Exact,
    /// Milstein with full truncation for CIR (exact for ABM/GBM). Only for
    /// cross-checking the exact sampler; not positivity preserving.
    MilsteinFullTruncation,
}

/// Mixes a master seed and a path index into an independent per-path seed.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    splitmix(master ^ splitmix(index.wrapping_add(0xA076_1D64_78BD_642F)))
}

/// Samples `D` on `grid` starting from `d0` with the exact transition law.
pub fn sample_path(model: &DemandModel, d0: f64, grid: TimeGrid, seed: u64) -> Result<DemandPath> {
    sample_path_with(model, d0, grid, seed, SamplingScheme::Exact)
}

pub fn sample_path_with(
    model: &DemandModel,
    d0: f64,
    grid: TimeGrid,
    seed: u64,
    scheme: SamplingScheme,
) -> Result<DemandPath> {
    grid.validate()?;
    model.check_level(d0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stepper = Stepper::new(model, grid.dt, scheme)?;
    let mut values = Vec::with_capacity(grid.len());
    values.push(d0);
    let mut x = d0;
    for _ in 0..grid.n_steps {
        x = stepper.step(x, &mut rng);
        values.push(x);
    }
    // Separate stream so the bridge draws leave the path values untouched.
    let mut bridge = ChaCha8Rng::seed_from_u64(seed);
    bridge.set_stream(1);
    let mut running_max = Vec::with_capacity(values.len());
    let mut m = d0;
    running_max.push(m);
    for w in values.windows(2) {
        let u = 1.0 - bridge.random::<f64>();
        m = m.max(bridge_max(model, w[0], w[1], grid.dt, u));
        running_max.push(m);
    }
    Ok(DemandPath {
        grid,
        values,
        running_max,
        seed,
    })
}

/// Maximum of the path between two grid values, drawn from the law of the
/// Brownian-bridge maximum in coordinates where the noise has unit scale:
/// `D/σ` (ABM), `ln D/σ` (GBM), `2√D/σ` (CIR). Exact for ABM and GBM; for CIR
/// the drift is frozen over the step.
fn bridge_max(model: &DemandModel, a: f64, b: f64, dt: f64, u: f64) -> f64 {
    let top = |ya: f64, yb: f64| {
        let dy = yb - ya;
        0.5 * (ya + yb + (dy * dy - 2.0 * dt * u.ln()).sqrt())
    };
    match *model {
        DemandModel::Abm { sigma, .. } => sigma * top(a / sigma, b / sigma),
        DemandModel::Gbm { sigma, .. } => (sigma * top(a.ln() / sigma, b.ln() / sigma)).exp(),
        DemandModel::Cir { sigma, .. } => {
            let y = top(
                2.0 * a.max(0.0).sqrt() / sigma,
                2.0 * b.max(0.0).sqrt() / sigma,
            );
            let r = 0.5 * sigma * y;
            r * r
        }
    }
}

/// One-step transition sampler with precomputed constants.
struct Stepper {
    kind: StepKind,
}

enum StepKind {
    Abm {
        drift: f64,
        scale: f64,
    },
    Gbm {
        log_drift: f64,
        scale: f64,
    },
    CirExact {
        c: f64,
        decay: f64,
        chi: ChiSquared<f64>,
    },
    CirMilstein {
        gamma: f64,
        delta: f64,
        sigma: f64,
        dt: f64,
    },
}

impl Stepper {
    fn new(model: &DemandModel, dt: f64, scheme: SamplingScheme) -> Result<Self> {
        let kind = match (*model, scheme) {
            (DemandModel::Abm { mu, sigma }, _) => StepKind::Abm {
                drift: mu * dt,
                scale: sigma * dt.sqrt(),
            },
            (DemandModel::Gbm { mu, sigma }, _) => StepKind::Gbm {
                log_drift: (mu - 0.5 * sigma * sigma) * dt,
                scale: sigma * dt.sqrt(),
            },
            (
                DemandModel::Cir {
                    gamma,
                    delta,
                    sigma,
                },
                SamplingScheme::Exact,
            ) => {
                // D_{t+dt} = c·χ'²(df, λ) with λ = D_t e^{−γ dt}/c. For df > 1 the
                // noncentral chi-square splits as (Z + √λ)² + χ²(df − 1).
                let s2 = sigma * sigma;
                let df = 4.0 * gamma * delta / s2;
                if df <= 1.0 {
                    return Err(Error::Parameter(format!(
                        "exact CIR sampler needs 4 gamma delta / sigma^2 > 1, got {df}"
                    )));
                }
                let chi = ChiSquared::new(df - 1.0)
                    .map_err(|e| Error::Parameter(format!("chi-square law: {e}")))?;
                StepKind::CirExact {
                    c: -s2 * (-gamma * dt).exp_m1() / (4.0 * gamma),
                    decay: (-gamma * dt).exp(),
                    chi,
                }
            }
            (
                DemandModel::Cir {
                    gamma,
                    delta,
                    sigma,
                },
                SamplingScheme::MilsteinFullTruncation,
            ) => StepKind::CirMilstein {
                gamma,
                delta,
                sigma,
                dt,
            },
        };
        Ok(Stepper { kind })
    }

    #[inline]
    fn step<R: Rng>(&mut self, x: f64, rng: &mut R) -> f64 {
        match &self.kind {
            StepKind::Abm { drift, scale } => {
                let z: f64 = rng.sample(StandardNormal);
                x + drift + scale * z
            }
            StepKind::Gbm { log_drift, scale } => {
                let z: f64 = rng.sample(StandardNormal);
                x * (log_drift + scale * z).exp()
            }
            StepKind::CirExact { c, decay, chi } => {
                let lambda = x * decay / c;
                let z: f64 = rng.sample(StandardNormal);
                let central = chi.sample(rng);
                let shifted = z + lambda.sqrt();
                c * (shifted * shifted + central)
            }
            StepKind::CirMilstein {
                gamma,
                delta,
                sigma,
                dt,
            } => {
                let z: f64 = rng.sample(StandardNormal);
                let xp = x.max(0.0);
                let dw = dt.sqrt() * z;
                x + gamma * (delta - xp) * dt
                    + sigma * xp.sqrt() * dw
                    + 0.25 * sigma * sigma * (dw * dw - dt)
            }
        }
    }
}
