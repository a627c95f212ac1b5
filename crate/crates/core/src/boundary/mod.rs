//! The optimal investment boundary
//!
//! ```text
//! ĉ(d) = β₀(d) − b_ρ − b_σ(d),   b_ρ = q0 ρ e^{ρh},
//! b_σ(d) = ½ σ²(d) β'(d) ψ''(d)/ψ'(d)
//! ```
//!
//! in closed form for the three demand models, plus the CIR tangent and
//! asymptote lines and a model-agnostic numerical oracle.

mod cir;
mod generic;

pub use cir::{cir_asymptote, cir_kink, cir_tangent};
pub use generic::{generic_boundary, log_derivative, AffineDiffusion};

use crate::error::{Error, Result};
use crate::sde::{self, DemandModel};
use crate::special::CirPsi;

/// Anything that maps a demand level to a committed-capacity target.
pub trait CapacityRule {
    fn level(&self, d: f64) -> Result<f64>;
}

/// GBM boundary constants: `m`, the positive root of
/// `ρ − μm − ½σ²m(m−1) = 0`, and the slope `A` of `ĉ(d) = A·d − q0ρe^{ρh}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GbmConstants {
    pub m: f64,
    pub a: f64,
}

/// `m` and `A` for a GBM demand. Requires `ρ > 2μ + σ²`.
pub fn gbm_constants(mu: f64, sigma: f64, rho: f64, h: f64) -> Result<GbmConstants> {
    sde::validate(&DemandModel::Gbm { mu, sigma }, rho)?;
    check_delay(h)?;
    let s2 = sigma * sigma;
    let c = mu - 0.5 * s2;
    let root = (c * c + 2.0 * rho * s2).sqrt();
    // Rationalised when c > 0 to avoid cancelling √S against c.
    let m = if c > 0.0 {
        2.0 * rho / (root + c)
    } else {
        (root - c) / s2
    };
    let a = (mu * h).exp() * (1.0 - s2 * (m - 1.0) / (2.0 * (rho - mu)));
    Ok(GbmConstants { m, a })
}

/// `λ = ψ'/ψ` for the ABM, `(√(μ² + 2ρσ²) − μ)/σ²`.
pub fn abm_lambda(mu: f64, sigma: f64, rho: f64) -> Result<f64> {
    sde::validate(&DemandModel::Abm { mu, sigma }, rho)?;
    let s2 = sigma * sigma;
    let root = (mu * mu + 2.0 * rho * s2).sqrt();
    Ok(if mu > 0.0 {
        2.0 * rho / (root + mu)
    } else {
        (root - mu) / s2
    })
}

fn check_delay(h: f64) -> Result<()> {
    if h >= 0.0 && h.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!(
            "time-to-build must be finite and >= 0, got {h}"
        )))
    }
}

/// The three additive pieces of `ĉ(d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BiasDecomposition {
    pub beta0: f64,
    pub discounting_bias: f64,
    pub precautionary_bias: f64,
}

impl BiasDecomposition {
    pub fn boundary(&self) -> f64 {
        self.beta0 - self.discounting_bias - self.precautionary_bias
    }
}

#[derive(Debug, Clone, Copy)]
enum Shape {
    /// Constant precautionary bias.
    Abm { lambda: f64, bias: f64 },
    /// Precautionary bias linear in `d`.
    Gbm { consts: GbmConstants, slope: f64 },
    /// `b_σ(d) = factor · d · ψ''(d)/ψ'(d)`.
    Cir { psi: CirPsi, factor: f64 },
}

/// Optimal boundary for one `(model, ρ, h, q0)`.
#[derive(Debug, Clone, Copy)]
pub struct Boundary {
    model: DemandModel,
    rho: f64,
    h: f64,
    q0: f64,
    shape: Shape,
}

impl Boundary {
    pub fn new(model: DemandModel, rho: f64, h: f64, q0: f64) -> Result<Self> {
        sde::validate(&model, rho)?;
        check_delay(h)?;
        if !(q0 >= 0.0 && q0.is_finite()) {
            return Err(Error::Parameter(format!(
                "unit investment cost must be finite and >= 0, got {q0}"
            )));
        }
        let slope = sde::beta_resolvent_slope(&model, rho, h);
        let shape = match model {
            DemandModel::Abm { mu, sigma } => {
                let lambda = abm_lambda(mu, sigma, rho)?;
                // ½σ²·(1/ρ)·λ
                Shape::Abm {
                    lambda,
                    bias: 0.5 * sigma * sigma * slope * lambda,
                }
            }
            DemandModel::Gbm { mu, sigma } => {
                let consts = gbm_constants(mu, sigma, rho, h)?;
                Shape::Gbm {
                    consts,
                    slope: 0.5 * sigma * sigma * slope * (consts.m - 1.0),
                }
            }
            DemandModel::Cir { sigma, .. } => {
                let params = model.cir_params().expect("CIR model");
                Shape::Cir {
                    psi: CirPsi::new(params, rho)?,
                    factor: 0.5 * sigma * sigma * slope,
                }
            }
        };
        Ok(Boundary {
            model,
            rho,
            h,
            q0,
            shape,
        })
    }

    pub fn model(&self) -> &DemandModel {
        &self.model
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn q0(&self) -> f64 {
        self.q0
    }

    pub fn gbm_constants(&self) -> Option<GbmConstants> {
        match self.shape {
            Shape::Gbm { consts, .. } => Some(consts),
            _ => None,
        }
    }

    pub fn abm_lambda(&self) -> Option<f64> {
        match self.shape {
            Shape::Abm { lambda, .. } => Some(lambda),
            _ => None,
        }
    }

    /// `b_ρ = q0 ρ e^{ρh}`.
    pub fn discounting_bias(&self) -> f64 {
        self.q0 * self.rho * (self.rho * self.h).exp()
    }

    /// `b_σ(d)`.
    pub fn precautionary_bias(&self, d: f64) -> Result<f64> {
        self.model.check_level(d)?;
        match self.shape {
            Shape::Abm { bias, .. } => Ok(bias),
            Shape::Gbm { slope, .. } => Ok(slope * d),
            Shape::Cir { psi, factor } => Ok(factor * d * psi.ratio_second(d)?),
        }
    }

    pub fn decompose(&self, d: f64) -> Result<BiasDecomposition> {
        let precautionary_bias = self.precautionary_bias(d)?;
        Ok(BiasDecomposition {
            beta0: sde::beta0(&self.model, d, self.h),
            discounting_bias: self.discounting_bias(),
            precautionary_bias,
        })
    }

    /// `ĉ(d)`.
    pub fn eval(&self, d: f64) -> Result<f64> {
        Ok(self.decompose(d)?.boundary())
    }
}

impl CapacityRule for Boundary {
    fn level(&self, d: f64) -> Result<f64> {
        self.eval(d)
    }
}
