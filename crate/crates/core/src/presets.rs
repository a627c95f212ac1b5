//! Named parameter sets from the simulation studies.
//!
//! Unit investment costs are not given for these studies; the values here are
//! chosen so that the discounting bias is visible but small next to the
//! precautionary bias.

use crate::policy::{Pipeline, Scenario};
use crate::sde::DemandModel;

/// Names accepted by [`scenario`].
pub const NAMES: [&str; 4] = ["gbm", "cir_fast", "cir_slow", "abm_mw"];

/// GBM demand starting at 1000 with an eight-year delay.
pub fn gbm() -> Scenario {
    Scenario {
        model: DemandModel::Gbm {
            mu: 0.03,
            sigma: 0.06,
        },
        rho: 0.08,
        h: 8.0,
        q0: 10.0,
        k: 1000.0,
        d: 1000.0,
        pipeline: Pipeline::empty(),
        eta: 0.0,
        theta: 1.0,
    }
}

fn cir(gamma: f64) -> Scenario {
    Scenario {
        model: DemandModel::Cir {
            gamma,
            delta: 20.0,
            sigma: 0.2,
        },
        rho: 0.08,
        h: 8.0,
        q0: 1.0,
        k: 10.0,
        d: 10.0,
        pipeline: Pipeline::empty(),
        eta: 0.0,
        theta: 1.0,
    }
}

/// Fast mean reversion (`γ = 0.8`) towards 20, starting at 10.
pub fn cir_fast() -> Scenario {
    cir(0.8)
}

/// Slow mean reversion (`γ = 0.08`) towards 20, starting at 10.
pub fn cir_slow() -> Scenario {
    cir(0.08)
}

/// ABM electricity demand in MW: 10,000 MW growing by 300 MW a year.
pub fn abm_mw() -> Scenario {
    Scenario {
        model: DemandModel::Abm {
            mu: 300.0,
            sigma: 600.0,
        },
        rho: 0.08,
        h: 8.0,
        q0: 5.0,
        k: 10_000.0,
        d: 10_000.0,
        pipeline: Pipeline::empty(),
        eta: 0.0,
        theta: 1.0,
    }
}

pub fn scenario(name: &str) -> Option<Scenario> {
    match name {
        "gbm" => Some(gbm()),
        "cir_fast" => Some(cir_fast()),
        "cir_slow" => Some(cir_slow()),
        "abm_mw" => Some(abm_mw()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_are_valid() {
        for name in NAMES {
            let s = scenario(name).unwrap();
            s.validate().unwrap();
            s.boundary().unwrap().eval(s.d).unwrap();
        }
        assert!(scenario("nope").is_none());
    }
}
