//! Straight-line approximations of the CIR boundary near zero and at
//! infinity.

use crate::sde::CirParams;

fn discounting(rho: f64, h: f64, q0: f64) -> f64 {
    q0 * rho * (rho * h).exp()
}

/// Tangent to `ĉ` at `d = 0`.
pub fn cir_tangent(params: CirParams, rho: f64, h: f64, q0: f64, d: f64) -> f64 {
    let CirParams {
        gamma,
        delta,
        sigma,
    } = params;
    let decay = (-gamma * h).exp();
    let slope = gamma * delta / (gamma * delta + 0.5 * sigma * sigma) * decay;
    slope * d + (1.0 - decay) * delta - discounting(rho, h, q0)
}

/// Asymptote of `ĉ` as `d → ∞`.
pub fn cir_asymptote(params: CirParams, rho: f64, h: f64, q0: f64, d: f64) -> f64 {
    let CirParams {
        gamma,
        delta,
        sigma,
    } = params;
    let k = rho / (rho + gamma) * (-gamma * h).exp();
    k * d + (1.0 - k) * delta - sigma * sigma / (2.0 * gamma) * k - discounting(rho, h, q0)
}

/// Intersection of the tangent and the asymptote.
pub fn cir_kink(params: CirParams, rho: f64, h: f64, q0: f64) -> (f64, f64) {
    let CirParams {
        gamma,
        delta,
        sigma,
    } = params;
    (
        delta + sigma * sigma / (2.0 * gamma),
        delta - discounting(rho, h, q0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: CirParams = CirParams {
        gamma: 0.8,
        delta: 20.0,
        sigma: 0.1,
    };

    #[test]
    fn kink_lies_on_both_lines() {
        for (h, q0) in [(1.0, 0.0), (8.0, 5.0), (0.0, 1.0)] {
            let (x, y) = cir_kink(P, 0.08, h, q0);
            assert!((cir_tangent(P, 0.08, h, q0, x) - y).abs() < 1e-12);
            assert!((cir_asymptote(P, 0.08, h, q0, x) - y).abs() < 1e-12);
        }
        let (x, y) = cir_kink(P, 0.08, 1.0, 0.0);
        assert!((x - 20.00625).abs() < 1e-12 && (y - 20.0).abs() < 1e-12);
        let (_, y) = cir_kink(P, 0.08, 8.0, 5.0);
        assert!((y - 19.241407).abs() < 1e-6);
    }

    #[test]
    fn tangent_slope_and_origin() {
        assert_eq!(cir_tangent(P, 0.08, 0.0, 0.0, 0.0), 0.0);
        let slope = cir_tangent(P, 0.08, 1.0, 0.0, 1.0) - cir_tangent(P, 0.08, 1.0, 0.0, 0.0);
        assert!((slope - 0.44918).abs() < 1e-5);
    }

    #[test]
    fn asymptote_is_nearly_flat_for_long_delays() {
        let slope = cir_asymptote(P, 0.08, 8.0, 0.0, 1.0) - cir_asymptote(P, 0.08, 8.0, 0.0, 0.0);
        assert!((slope - 1.513e-4).abs() < 1e-6);
    }
}
