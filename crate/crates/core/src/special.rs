//! Kummer's confluent hypergeometric function `M(a, b, z)` for `a, b > 0`,
//! `z ≥ 0`, and the log-derivative ratios of the CIR fundamental solution
//! `ψ(d) = M(ρ/γ, 2γδ/σ², 2γd/σ²)`.
//!
//! Two evaluation branches are used:
//!
//! * the power series `Σ (a)_s/((b)_s s!) z^s`. All terms are positive, so the
//!   sum is accurate; it is carried as a mantissa and a power of `1e300` so
//!   that values far beyond `f64::MAX` keep their ratios.
//! * the large-`z` expansion
//!   `M ~ Γ(b)/Γ(a) e^z z^{a−b} Σ (b−a)_s (1−a)_s / (s! z^s)`, used for
//!   `z ≥ Z_SWITCH` whenever its terms fall below machine precision before
//!   they start growing (roughly `z − b ≳ 10√z`).
//!
//! Ratios `M(a+1, b+1, z)/M(a, b, z)` are formed inside one branch, so neither
//! the exponential factor nor the Gamma functions are ever evaluated for them.

use crate::error::{Error, Result};
use crate::sde::CirParams;

/// Smallest argument at which the large-`z` expansion is attempted.
pub const Z_SWITCH: f64 = 50.0;

const SCALE: f64 = 1e300;
const INV_SCALE: f64 = 1e-300;
const LN_SCALE: f64 = 300.0 * std::f64::consts::LN_10;
const TOL: f64 = 1e-17;
const MAX_SERIES_TERMS: usize = 50_000_000;
const MAX_ASYMPTOTIC_TERMS: usize = 100_000;

/// Arguments of `M(a, b, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KummerArgs {
    pub a: f64,
    pub b: f64,
    pub z: f64,
}

impl KummerArgs {
    pub fn new(a: f64, b: f64, z: f64) -> Result<Self> {
        let args = KummerArgs { a, b, z };
        args.check()?;
        Ok(args)
    }

    fn check(&self) -> Result<()> {
        if !(self.a > 0.0 && self.a.is_finite()) || !(self.b > 0.0 && self.b.is_finite()) {
            return Err(Error::Parameter(format!(
                "Kummer M needs a, b > 0, got a = {}, b = {}",
                self.a, self.b
            )));
        }
        if !(self.z >= 0.0 && self.z.is_finite()) {
            return Err(Error::Parameter(format!(
                "Kummer M needs finite z >= 0, got {}",
                self.z
            )));
        }
        Ok(())
    }
}

/// Series value `mantissa · SCALE^exponent`.
#[derive(Debug, Clone, Copy)]
struct Scaled {
    mantissa: f64,
    exponent: i64,
}

impl Scaled {
    fn ln(&self) -> f64 {
        self.mantissa.ln() + self.exponent as f64 * LN_SCALE
    }
}

/// Positive-term power series with Kahan compensation and rescaling.
fn series(a: f64, b: f64, z: f64) -> Result<Scaled> {
    let mut sum = 1.0_f64;
    let mut comp = 0.0_f64;
    let mut term = 1.0_f64;
    let mut exponent = 0_i64;
    if z == 0.0 {
        return Ok(Scaled {
            mantissa: 1.0,
            exponent: 0,
        });
    }
    for s in 0..MAX_SERIES_TERMS {
        let k = s as f64;
        let ratio = (a + k) * z / ((b + k) * (k + 1.0));
        term *= ratio;
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        if sum > SCALE {
            sum *= INV_SCALE;
            term *= INV_SCALE;
            comp *= INV_SCALE;
            exponent += 1;
        }
        // Past this index the term ratios decrease monotonically, so the
        // remaining tail is bounded by a geometric series.
        let k1 = k + 1.0;
        let next = (a + k1) * z / ((b + k1) * (k1 + 1.0));
        let monotone = a >= b || (b - a) * (k1 + 1.0) < (a + k1) * (b + k1);
        if monotone && next < 1.0 && term * next / (1.0 - next) <= TOL * sum {
            return Ok(Scaled {
                mantissa: sum,
                exponent,
            });
        }
    }
    Err(Error::Numerics(format!(
        "Kummer series did not converge for a = {a}, b = {b}, z = {z}"
    )))
}

/// Sum of the large-`z` expansion, or `None` below the switch point, when
/// the neglected `e^{-z}` companion term is not negligible, or when the
/// expansion does not converge.
fn asymptotic_sum(a: f64, b: f64, z: f64) -> Option<f64> {
    if z < Z_SWITCH {
        return None;
    }
    // Relative size of the neglected e^{-z} companion term.
    if b > a {
        let ln_companion = -z + (b - 2.0 * a) * z.ln() + ln_gamma(a) - ln_gamma(b - a);
        if ln_companion > -38.0 {
            return None;
        }
    }
    expansion_sum(a, b, z, true)
}

/// `Σ (b−a)_s (1−a)_s / (s! z^s)`. When the terms start to grow before
/// reaching machine precision, returns `None` if `strict`, else the sum
/// truncated at the smallest term.
fn expansion_sum(a: f64, b: f64, z: f64, strict: bool) -> Option<f64> {
    let mut sum = 1.0_f64;
    let mut term = 1.0_f64;
    for s in 0..MAX_ASYMPTOTIC_TERMS {
        let k = s as f64;
        let p = b - a + k;
        let q = 1.0 - a + k;
        if p == 0.0 || q == 0.0 {
            return (sum > 0.0).then_some(sum);
        }
        let next = term * p * q / ((k + 1.0) * z);
        if next.abs() > term.abs() {
            return (!strict && sum > 0.0).then_some(sum);
        }
        term = next;
        sum += term;
        if term.abs() <= TOL * sum.abs() {
            return (sum > 0.0).then_some(sum);
        }
    }
    None
}

fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// `ln M(a, b, z)`, finite for every admissible argument.
pub fn ln_kummer_m(args: KummerArgs) -> Result<f64> {
    args.check()?;
    let KummerArgs { a, b, z } = args;
    if let Some(s) = asymptotic_sum(a, b, z) {
        return Ok(ln_gamma(b) - ln_gamma(a) + z + (a - b) * z.ln() + s.ln());
    }
    Ok(series(a, b, z)?.ln())
}

fn exp_checked(ln_value: f64, what: &'static str) -> Result<f64> {
    if ln_value >= f64::MAX.ln() {
        Err(Error::Overflow {
            what,
            log_magnitude: ln_value,
        })
    } else {
        Ok(ln_value.exp())
    }
}

/// `M(a, b, z)`.
pub fn kummer_m(args: KummerArgs) -> Result<f64> {
    exp_checked(ln_kummer_m(args)?, "Kummer M")
}

/// `M(a, b, z)` forced through the power series.
pub fn kummer_m_series(args: KummerArgs) -> Result<f64> {
    args.check()?;
    exp_checked(series(args.a, args.b, args.z)?.ln(), "Kummer M (series)")
}

/// `M(a, b, z)` forced through the large-`z` expansion, truncated at its
/// smallest term and ignoring the exponentially small companion term.
pub fn kummer_m_asymptotic(args: KummerArgs) -> Result<f64> {
    args.check()?;
    let KummerArgs { a, b, z } = args;
    let s = expansion_sum(a, b, z, false)
        .filter(|_| z > 0.0)
        .ok_or_else(|| {
            Error::Numerics(format!(
                "large-z expansion does not converge for a = {a}, b = {b}, z = {z}"
            ))
        })?;
    exp_checked(
        ln_gamma(b) - ln_gamma(a) + z + (a - b) * z.ln() + s.ln(),
        "Kummer M (asymptotic)",
    )
}

/// `M(a+1, b+1, z) / M(a, b, z)`, stable for arguments where both values
/// overflow.
pub fn kummer_ratio(a: f64, b: f64, z: f64) -> Result<f64> {
    KummerArgs::new(a, b, z)?;
    if z == 0.0 {
        return Ok(1.0);
    }
    if let (Some(s0), Some(s1)) = (asymptotic_sum(a, b, z), asymptotic_sum(a + 1.0, b + 1.0, z)) {
        return Ok(b / a * s1 / s0);
    }
    let m0 = series(a, b, z)?;
    let m1 = series(a + 1.0, b + 1.0, z)?;
    let shift = (m1.exponent - m0.exponent) as f64 * LN_SCALE;
    Ok((m1.mantissa / m0.mantissa) * shift.exp())
}

/// `dM/dz = (a/b) M(a+1, b+1, z)`.
pub fn kummer_m_prime(args: KummerArgs) -> Result<f64> {
    args.check()?;
    let KummerArgs { a, b, z } = args;
    let ln_shifted = ln_kummer_m(KummerArgs {
        a: a + 1.0,
        b: b + 1.0,
        z,
    })?;
    exp_checked((a / b).ln() + ln_shifted, "Kummer M'")
}

/// `dM/dz` through the contiguous relation `z M' = a (M(a+1, b, z) − M(a, b, z))`.
/// Loses relative accuracy like `ε/z` for small `z`; the `z = 0` value is
/// the limit `a/b`.
pub fn kummer_m_prime_contiguous(args: KummerArgs) -> Result<f64> {
    args.check()?;
    let KummerArgs { a, b, z } = args;
    if z == 0.0 {
        return Ok(a / b);
    }
    let up = kummer_m(KummerArgs { a: a + 1.0, b, z })?;
    let base = kummer_m(args)?;
    Ok(a * (up - base) / z)
}

/// The increasing fundamental solution of `ρφ − γ(δ − d)φ' − ½σ²dφ'' = 0`,
/// `ψ(d) = M(ρ/γ, 2γδ/σ², 2γd/σ²)`.
#[derive(Debug, Clone, Copy)]
pub struct CirPsi {
    /// `ρ/γ`
    a: f64,
    /// `2γδ/σ²`
    b: f64,
    /// `2γ/σ²`, mapping demand to the Kummer argument.
    scale: f64,
}

impl CirPsi {
    pub fn new(params: CirParams, rho: f64) -> Result<Self> {
        let CirParams {
            gamma,
            delta,
            sigma,
        } = params;
        if !(gamma > 0.0 && delta > 0.0 && sigma > 0.0 && rho > 0.0) {
            return Err(Error::Parameter(format!(
                "CIR fundamental solution needs gamma, delta, sigma, rho > 0, got ({gamma}, {delta}, {sigma}, {rho})"
            )));
        }
        let s2 = sigma * sigma;
        Ok(CirPsi {
            a: rho / gamma,
            b: 2.0 * gamma * delta / s2,
            scale: 2.0 * gamma / s2,
        })
    }

    fn argument(&self, d: f64) -> Result<f64> {
        if !(d > 0.0 && d.is_finite()) {
            return Err(Error::Domain {
                value: d,
                space: "(0, inf)",
            });
        }
        Ok(self.scale * d)
    }

    pub fn value(&self, d: f64) -> Result<f64> {
        kummer_m(KummerArgs::new(self.a, self.b, self.argument(d)?)?)
    }

    pub fn first_derivative(&self, d: f64) -> Result<f64> {
        let x = self.argument(d)?;
        Ok(self.scale * kummer_m_prime(KummerArgs::new(self.a, self.b, x)?)?)
    }

    pub fn second_derivative(&self, d: f64) -> Result<f64> {
        let x = self.argument(d)?;
        let inner = kummer_m_prime(KummerArgs::new(self.a + 1.0, self.b + 1.0, x)?)?;
        Ok(self.scale * self.scale * self.a / self.b * inner)
    }

    /// `ψ''(d)/ψ'(d)`.
    pub fn ratio_second(&self, d: f64) -> Result<f64> {
        let x = self.argument(d)?;
        let r = kummer_ratio(self.a + 1.0, self.b + 1.0, x)?;
        Ok(self.scale * (self.a + 1.0) / (self.b + 1.0) * r)
    }

    /// `ψ(d)/ψ'(d)`.
    pub fn over_derivative(&self, d: f64) -> Result<f64> {
        let x = self.argument(d)?;
        let r = kummer_ratio(self.a, self.b, x)?;
        Ok(self.b / (self.a * self.scale * r))
    }
}

/// `ψ''(d)/ψ'(d)` for the CIR fundamental solution.
pub fn psi_ratio_second(params: CirParams, rho: f64, d: f64) -> Result<f64> {
    CirPsi::new(params, rho)?.ratio_second(d)
}

/// `ψ(d)/ψ'(d)` for the CIR fundamental solution.
pub fn psi_over_psi_prime(params: CirParams, rho: f64, d: f64) -> Result<f64> {
    CirPsi::new(params, rho)?.over_derivative(d)
}
