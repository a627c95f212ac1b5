//! Model-agnostic boundary
//!
//! ```text
//! ĉ(d) = ρ[β(d) − (ψ(d)/ψ'(d)) β'(d) − q0 e^{ρh}]
//! ```
//!
//! with `ψ'/ψ` obtained by integrating the Riccati form of
//! `ρφ − μ(d)φ' − ½σ²(d)φ'' = 0`,
//!
//! ```text
//! u' = 2(ρ − μ(d)u)/σ²(d) − u²,   u = φ'/φ,
//! ```
//!
//! forward in `d`. Any positive solution started far to the left is
//! attracted to the increasing fundamental solution, because the decreasing
//! companion dies out relative to `ψ`.

use crate::error::{Error, Result};
use crate::ode::{integrate, Tolerance};
use crate::sde::{AffineDrift, DemandModel, StateSpace};

/// Diffusion with drift `a·d + b`, which makes `β` affine.
pub trait AffineDiffusion {
    fn drift_coefficients(&self) -> AffineDrift;
    fn local_variance(&self, d: f64) -> f64;
    fn space(&self) -> StateSpace;

    /// `β(d) = ∫ e^{−ρt} E[D_{t+h} | D_0 = d] dt`.
    fn resolvent(&self, d: f64, rho: f64, h: f64) -> f64 {
        let AffineDrift {
            slope: a,
            intercept: b,
        } = self.drift_coefficients();
        let grow = (a * h).exp();
        let phi = crate::sde::expm1_ratio(a * h);
        grow * (d / (rho - a) + b / (rho * (rho - a))) + b * h * phi / rho
    }

    /// `β'(d) = e^{ah}/(ρ − a)`.
    fn resolvent_slope(&self, rho: f64, h: f64) -> f64 {
        let a = self.drift_coefficients().slope;
        (a * h).exp() / (rho - a)
    }
}

impl AffineDiffusion for DemandModel {
    fn drift_coefficients(&self) -> AffineDrift {
        self.affine_drift()
    }

    fn local_variance(&self, d: f64) -> f64 {
        self.variance(d)
    }

    fn space(&self) -> StateSpace {
        self.state_space()
    }
}

/// How far left of `d` the half-line integration starts, as a fraction of `d`.
const START_FRACTION: f64 = 1e-8;
/// Width of the ABM integration window in units of the decay scale.
const REAL_LINE_SPAN: f64 = 60.0;

/// `ψ'(d)/ψ(d)` for the increasing fundamental solution.
pub fn log_derivative<M: AffineDiffusion + ?Sized>(model: &M, rho: f64, d: f64) -> Result<f64> {
    if !model.space().contains(d) {
        return Err(Error::Domain {
            value: d,
            space: model.space().label(),
        });
    }
    let AffineDrift { slope, intercept } = model.drift_coefficients();
    let mu = |x: f64| slope * x + intercept;
    let tol = Tolerance::default();
    match model.space() {
        StateSpace::Real => {
            let s2 = model.local_variance(d);
            let m = mu(d);
            let rate = 2.0 * (m * m + 2.0 * rho * s2).sqrt() / s2;
            let start = d - REAL_LINE_SPAN / rate;
            let u0 = (2.0 * rho / model.local_variance(start)).sqrt();
            integrate(
                |x, u| 2.0 * (rho - mu(x) * u) / model.local_variance(x) - u * u,
                start,
                u0,
                d,
                tol,
            )
        }
        StateSpace::Positive => {
            // s = ln x, w = x·u
            let x0 = d * START_FRACTION;
            let w0 = x0 * (2.0 * rho / model.local_variance(x0)).sqrt();
            let w = integrate(
                |s, w| {
                    let x = s.exp();
                    let s2 = model.local_variance(x);
                    w + 2.0 * x * (x * rho - mu(x) * w) / s2 - w * w
                },
                x0.ln(),
                w0,
                d.ln(),
                tol,
            )?;
            Ok(w / d)
        }
    }
}

/// `ĉ(d)` computed from the ODE, independent of the closed forms.
pub fn generic_boundary<M: AffineDiffusion + ?Sized>(
    model: &M,
    rho: f64,
    h: f64,
    q0: f64,
    d: f64,
) -> Result<f64> {
    let u = log_derivative(model, rho, d)?;
    let beta = model.resolvent(d, rho, h);
    let slope = model.resolvent_slope(rho, h);
    Ok(rho * (beta - slope / u - q0 * (rho * h).exp()))
}
