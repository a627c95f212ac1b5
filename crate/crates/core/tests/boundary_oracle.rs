//! Closed-form boundaries against the ODE oracle and the CIR line geometry.

use capacity_core::boundary::{
    cir_asymptote, cir_kink, cir_tangent, generic_boundary, Boundary, CapacityRule,
};
use capacity_core::sde::CirParams;
use capacity_core::DemandModel;

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1e-300)
}

fn cir(gamma: f64, delta: f64, sigma: f64) -> DemandModel {
    DemandModel::Cir {
        gamma,
        delta,
        sigma,
    }
}

#[test]
fn abm_and_gbm_match_oracle() {
    let abm = DemandModel::Abm {
        mu: 300.0,
        sigma: 600.0,
    };
    let b = Boundary::new(abm, 0.08, 8.0, 0.0).unwrap();
    let g = generic_boundary(&abm, 0.08, 8.0, 0.0, 10_000.0).unwrap();
    assert!(rel(b.eval(10_000.0).unwrap(), g) < 1e-6);

    let gbm = DemandModel::Gbm {
        mu: 0.03,
        sigma: 0.1,
    };
    let b = Boundary::new(gbm, 0.08, 1.0, 5.0).unwrap();
    let g = generic_boundary(&gbm, 0.08, 1.0, 5.0, 1000.0).unwrap();
    let a = b.gbm_constants().unwrap().a;
    assert!(rel(a * 1000.0 - b.discounting_bias(), g) < 1e-6);
}

#[test]
fn cir_matches_oracle() {
    let m = cir(0.8, 20.0, 0.1);
    let b = Boundary::new(m, 0.08, 8.0, 1.0).unwrap();
    let g = generic_boundary(&m, 0.08, 8.0, 1.0, 10.0).unwrap();
    assert!(
        (b.eval(10.0).unwrap() - g).abs() < 1e-6,
        "{} vs {g}",
        b.eval(10.0).unwrap()
    );

    let b = Boundary::new(m, 0.08, 1.0, 1.0).unwrap();
    let g = generic_boundary(&m, 0.08, 1.0, 1.0, 30.0).unwrap();
    assert!(rel(b.eval(30.0).unwrap(), g) < 1e-5);
}

#[test]
fn cir_closed_form_uses_printed_expression() {
    let (gamma, delta, sigma, rho, h, q0) = (0.8, 20.0, 0.1, 0.08, 8.0, 1.0);
    let b = Boundary::new(cir(gamma, delta, sigma), rho, h, q0).unwrap();
    let psi = capacity_core::special::CirPsi::new(
        CirParams {
            gamma,
            delta,
            sigma,
        },
        rho,
    )
    .unwrap();
    for d in [0.5, 10.0, 25.0, 300.0] {
        let decay = (-gamma * h).exp();
        let printed = delta + decay * (d - delta)
            - q0 * rho * (rho * h).exp()
            - sigma * sigma * decay / (2.0 * (rho + gamma)) * d * psi.ratio_second(d).unwrap();
        assert!(rel(b.eval(d).unwrap(), printed) < 1e-13);
    }
}

#[test]
fn cir_lines_touch_the_boundary_at_the_extremes() {
    for gamma in [0.8, 0.08] {
        for sigma in [0.05, 0.1] {
            for h in [1.0, 8.0] {
                let p = CirParams {
                    gamma,
                    delta: 20.0,
                    sigma,
                };
                let b = Boundary::new(cir(gamma, 20.0, sigma), 0.08, h, 1.0).unwrap();
                let near = 1e-4 * 20.0;
                let gap0 = (b.eval(near).unwrap() - cir_tangent(p, 0.08, h, 1.0, near)).abs();
                assert!(gap0 <= 1e-3 * 20.0, "tangent gap {gap0}");
                let mut prev = f64::INFINITY;
                for k in 0..=20 {
                    let d = 200.0 * 100f64.powf(k as f64 / 20.0);
                    let gap = (b.eval(d).unwrap() - cir_asymptote(p, 0.08, h, 1.0, d)).abs();
                    assert!(
                        gap <= prev * (1.0 + 1e-9),
                        "asymptote gap not shrinking at {d}"
                    );
                    prev = gap;
                }
                assert!(prev <= 1e-3 * 20.0, "asymptote gap {prev}");
                let (x, y) = cir_kink(p, 0.08, h, 1.0);
                assert!((cir_tangent(p, 0.08, h, 1.0, x) - y).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn cir_tangent_slope_matches_finite_difference() {
    let p = CirParams {
        gamma: 0.8,
        delta: 20.0,
        sigma: 0.1,
    };
    let b = Boundary::new(cir(0.8, 20.0, 0.1), 0.08, 1.0, 0.0).unwrap();
    let (d0, step) = (1e-6, 1e-7);
    let fd = (b.eval(d0 + step).unwrap() - b.eval(d0 - step).unwrap()) / (2.0 * step);
    let slope = cir_tangent(p, 0.08, 1.0, 0.0, 1.0) - cir_tangent(p, 0.08, 1.0, 0.0, 0.0);
    assert!((fd - slope).abs() < 1e-4, "{fd} vs {slope}");
}

#[test]
fn capacity_rule_is_the_boundary() {
    let b = Boundary::new(cir(0.8, 20.0, 0.1), 0.08, 1.0, 0.0).unwrap();
    assert_eq!(b.level(12.0).unwrap(), b.eval(12.0).unwrap());
}
