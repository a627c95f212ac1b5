//! Comparative statics of the boundary: the GBM elasticities of `A` and
//! `b_σ`, the ABM partial derivatives of `ĉ`, and a central-difference
//! checker for both.

use serde::{Deserialize, Serialize};

use crate::boundary::{gbm_constants, Boundary};
use crate::error::{Error, Result};
use crate::sde::DemandModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Slope of the GBM boundary.
    A,
    /// Precautionary bias.
    BSigma,
    /// The boundary itself.
    CHat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Param {
    H,
    Sigma,
    Mu,
    Rho,
    Q0,
}

impl Param {
    pub const ALL: [Param; 5] = [Param::H, Param::Sigma, Param::Mu, Param::Rho, Param::Q0];

    pub fn name(self) -> &'static str {
        match self {
            Param::H => "h",
            Param::Sigma => "sigma",
            Param::Mu => "mu",
            Param::Rho => "rho",
            Param::Q0 => "q0",
        }
    }
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::A => "A",
            Quantity::BSigma => "b_sigma",
            Quantity::CHat => "c_hat",
        }
    }
}

/// `(x/Q)·∂Q/∂x`, or a plain partial derivative when `analytic` is false
/// and it came from finite differences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Elasticity {
    pub quantity: Quantity,
    pub wrt: Param,
    pub value: f64,
    pub analytic: bool,
}

/// A parameter point shared by the GBM and ABM formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub mu: f64,
    pub sigma: f64,
    pub rho: f64,
    pub h: f64,
    pub q0: f64,
}

impl Point {
    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::H => self.h,
            Param::Sigma => self.sigma,
            Param::Mu => self.mu,
            Param::Rho => self.rho,
            Param::Q0 => self.q0,
        }
    }

    pub fn with(&self, p: Param, value: f64) -> Point {
        let mut out = *self;
        match p {
            Param::H => out.h = value,
            Param::Sigma => out.sigma = value,
            Param::Mu => out.mu = value,
            Param::Rho => out.rho = value,
            Param::Q0 => out.q0 = value,
        }
        out
    }
}

/// `√((μ − σ²/2)² + 2ρσ²)`
fn gbm_root(mu: f64, sigma: f64, rho: f64) -> f64 {
    let s2 = sigma * sigma;
    ((mu - 0.5 * s2).powi(2) + 2.0 * rho * s2).sqrt()
}

/// `b_σ(d)/d` for the GBM model.
pub fn gbm_precaution_slope(mu: f64, sigma: f64, rho: f64, h: f64) -> Result<f64> {
    gbm_constants(mu, sigma, rho, h)?;
    let root = gbm_root(mu, sigma, rho);
    Ok(0.5 * (mu * h).exp() / (rho - mu) * (root - mu - 0.5 * sigma * sigma))
}

/// `∂ ln Q / ∂x` for `Q ∈ {A, b_σ}` under GBM.
pub fn gbm_log_derivative(
    quantity: Quantity,
    wrt: Param,
    mu: f64,
    sigma: f64,
    rho: f64,
    h: f64,
) -> Result<f64> {
    gbm_constants(mu, sigma, rho, h)?;
    let s2 = sigma * sigma;
    let root = gbm_root(mu, sigma, rho);
    let value = match (quantity, wrt) {
        (Quantity::A | Quantity::BSigma, Param::H) => mu,
        (Quantity::A | Quantity::BSigma, Param::Q0) => 0.0,
        (Quantity::A, Param::Sigma) => -sigma / root,
        (Quantity::A, Param::Mu) => h + (1.0 - (mu + 0.5 * s2) / root) / (2.0 * (rho - mu)),
        (Quantity::A, Param::Rho) => {
            0.5 * (rho * s2 + mu * mu - 0.5 * mu * s2 - mu * root) / (rho * (rho - mu) * root)
        }
        (Quantity::BSigma, Param::Sigma) => {
            sigma * ((2.0 * rho - mu + 0.5 * s2) / root - 1.0) / (root - mu - 0.5 * s2)
        }
        (Quantity::BSigma, Param::Mu) => {
            h - 0.5 / (rho - mu) * (2.0 * rho - mu + 0.5 * s2 - root) / root
        }
        (Quantity::BSigma, Param::Rho) => 0.5 / (rho - mu) * (mu + 0.5 * s2 - root) / root,
        (Quantity::CHat, _) => {
            return Err(Error::Parameter(
                "the GBM boundary elasticity depends on d and q0; use gbm_boundary_partial".into(),
            ))
        }
    };
    Ok(value)
}

/// `(x/Q) ∂Q/∂x` for `Q ∈ {A, b_σ}` under GBM, from the closed forms.
pub fn gbm_elasticity(
    quantity: Quantity,
    wrt: Param,
    mu: f64,
    sigma: f64,
    rho: f64,
    h: f64,
) -> Result<Elasticity> {
    let point = Point {
        mu,
        sigma,
        rho,
        h,
        q0: 0.0,
    };
    let value = point.get(wrt) * gbm_log_derivative(quantity, wrt, mu, sigma, rho, h)?;
    Ok(Elasticity {
        quantity,
        wrt,
        value,
        analytic: true,
    })
}

/// `∂ĉ(d)/∂x` for the GBM boundary `ĉ(d) = A d − q0 ρ e^{ρh}`.
pub fn gbm_boundary_partial(wrt: Param, p: &Point, d: f64) -> Result<f64> {
    let Point {
        mu,
        sigma,
        rho,
        h,
        q0,
    } = *p;
    let a = gbm_constants(mu, sigma, rho, h)?.a;
    let grow = (rho * h).exp();
    let slope = a * d * gbm_log_derivative(Quantity::A, wrt, mu, sigma, rho, h)?;
    Ok(match wrt {
        Param::Q0 => -rho * grow,
        Param::H => slope - q0 * rho * rho * grow,
        Param::Rho => slope - q0 * (1.0 + rho * h) * grow,
        Param::Sigma | Param::Mu => slope,
    })
}

/// Partial derivatives of the ABM boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbmPartials {
    pub d_sigma: f64,
    pub d_h: f64,
    pub d_mu: f64,
    pub d_rho: f64,
    pub d_q0: f64,
    /// `∂²ĉ/∂h∂σ`, identically zero.
    pub d_h_sigma: f64,
    /// `ĉ` is a sum of an `h`-only and a `σ`-only part.
    pub separable: bool,
}

impl AbmPartials {
    pub fn get(&self, p: Param) -> f64 {
        match p {
            Param::H => self.d_h,
            Param::Sigma => self.d_sigma,
            Param::Mu => self.d_mu,
            Param::Rho => self.d_rho,
            Param::Q0 => self.d_q0,
        }
    }
}

pub fn abm_partials(mu: f64, sigma: f64, rho: f64, h: f64, q0: f64) -> Result<AbmPartials> {
    if !(rho > 0.0 && sigma > 0.0) || !mu.is_finite() || !h.is_finite() || !q0.is_finite() {
        return Err(Error::Parameter(format!(
            "ABM partials need rho > 0 and sigma > 0, got rho = {rho}, sigma = {sigma}"
        )));
    }
    let root = (mu * mu + 2.0 * rho * sigma * sigma).sqrt();
    let grow = (rho * h).exp();
    Ok(AbmPartials {
        d_sigma: -sigma / root,
        d_h: mu - q0 * rho * rho * grow,
        d_mu: h + (1.0 - mu / root) / (2.0 * rho),
        d_rho: -q0 * (1.0 + h * rho) * grow
            + 0.5 * (mu * mu + rho * sigma * sigma - mu * root) / (rho * rho * root),
        d_q0: -rho * grow,
        d_h_sigma: 0.0,
        separable: true,
    })
}

/// `ĉ(d)` for the ABM at a parameter point.
pub fn abm_boundary(p: &Point, d: f64) -> Result<f64> {
    Boundary::new(
        DemandModel::Abm {
            mu: p.mu,
            sigma: p.sigma,
        },
        p.rho,
        p.h,
        p.q0,
    )?
    .eval(d)
}

/// Value of `Q ∈ {A, b_σ/d}` for the GBM at a parameter point.
pub fn gbm_quantity(quantity: Quantity, p: &Point) -> Result<f64> {
    match quantity {
        Quantity::A => Ok(gbm_constants(p.mu, p.sigma, p.rho, p.h)?.a),
        Quantity::BSigma => gbm_precaution_slope(p.mu, p.sigma, p.rho, p.h),
        Quantity::CHat => Err(Error::Parameter(
            "use gbm_boundary_partial for c_hat".into(),
        )),
    }
}

/// Outcome of a central-difference check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdReport {
    pub analytic: f64,
    pub finite_difference: f64,
    pub step: f64,
    pub pass: bool,
}

/// Compares `analytic` with `(f(x+δ) − f(x−δ))/(2δ)`, `δ = rel_step·|x|`
/// (or `rel_step` itself at `x = 0`).
/// Passes iff the gap is at most `max(1e-6, 1e-4·|analytic|)`.
pub fn finite_diff_check<F>(f: F, x: f64, analytic: f64, rel_step: f64) -> Result<FdReport>
where
    F: Fn(f64) -> Result<f64>,
{
    let step = if x == 0.0 {
        rel_step
    } else {
        rel_step * x.abs()
    };
    let eval = |v: f64| {
        f(v).map_err(|e| Error::Step(format!("perturbed point {v} is not admissible: {e}")))
    };
    let up = eval(x + step)?;
    let down = eval(x - step)?;
    let finite_difference = (up - down) / (2.0 * step);
    let pass = (analytic - finite_difference).abs() <= (1e-4 * analytic.abs()).max(1e-6);
    Ok(FdReport {
        analytic,
        finite_difference,
        step,
        pass,
    })
}

/// Finite-difference check of a GBM elasticity of `A` or `b_σ`.
pub fn check_gbm_elasticity(
    quantity: Quantity,
    wrt: Param,
    p: &Point,
    rel_step: f64,
) -> Result<FdReport> {
    let x = p.get(wrt);
    let analytic = gbm_log_derivative(quantity, wrt, p.mu, p.sigma, p.rho, p.h)?;
    let base = gbm_quantity(quantity, p)?;
    if x == 0.0 {
        return Err(Error::Step(format!(
            "cannot take a relative step from {} = 0",
            wrt.name()
        )));
    }
    let report = finite_diff_check(
        |v| gbm_quantity(quantity, &p.with(wrt, v)),
        x,
        analytic * base,
        rel_step,
    )?;
    // report as elasticities
    let scale = x / base;
    let analytic = report.analytic * scale;
    let finite_difference = report.finite_difference * scale;
    Ok(FdReport {
        analytic,
        finite_difference,
        step: report.step,
        pass: (analytic - finite_difference).abs() <= (1e-4 * analytic.abs()).max(1e-6),
    })
}

/// Finite-difference check of an ABM partial of `ĉ(d)`.
pub fn check_abm_partial(wrt: Param, p: &Point, d: f64, rel_step: f64) -> Result<FdReport> {
    let analytic = abm_partials(p.mu, p.sigma, p.rho, p.h, p.q0)?.get(wrt);
    finite_diff_check(
        |v| abm_boundary(&p.with(wrt, v), d),
        p.get(wrt),
        analytic,
        rel_step,
    )
}
