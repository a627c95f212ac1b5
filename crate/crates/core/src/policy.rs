//! Simulation of the reflected investment policy.
//!
//! Committed capacity `C_t = max(c, ĉ(sup_{s≤t} D_s))` is pushed up only when
//! the running maximum of demand sets a new record; installed capacity is
//! committed capacity `h` years earlier, with the initial pipeline filling
//! `[0, h)`.

use serde::{Deserialize, Serialize};

use crate::boundary::{Boundary, CapacityRule};
use crate::error::{Error, Result};
use crate::sde::{self, DemandModel, DemandPath, TimeGrid};

/// Investment made before time zero that is still under construction.
/// A jump of size `x` at `s ∈ [−h, 0)` becomes productive at `s + h`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Pipeline {
    pub jump_times: Vec<f64>,
    pub jump_sizes: Vec<f64>,
}

impl Pipeline {
    pub fn empty() -> Self {
        Pipeline::default()
    }

    pub fn new(jump_times: Vec<f64>, jump_sizes: Vec<f64>, h: f64) -> Result<Self> {
        let p = Pipeline {
            jump_times,
            jump_sizes,
        };
        p.validate(h)?;
        Ok(p)
    }

    pub fn validate(&self, h: f64) -> Result<()> {
        if self.jump_times.len() != self.jump_sizes.len() {
            return Err(Error::Parameter(format!(
                "pipeline has {} times but {} sizes",
                self.jump_times.len(),
                self.jump_sizes.len()
            )));
        }
        for (i, (&s, &x)) in self.jump_times.iter().zip(&self.jump_sizes).enumerate() {
            if !(s >= -h && s < 0.0) {
                return Err(Error::Parameter(format!(
                    "pipeline time {s} is outside [-{h}, 0)"
                )));
            }
            if i > 0 && s <= self.jump_times[i - 1] {
                return Err(Error::Parameter(
                    "pipeline times must be strictly increasing".into(),
                ));
            }
            if !(x >= 0.0 && x.is_finite()) {
                return Err(Error::Parameter(format!(
                    "pipeline size {x} must be finite and >= 0"
                )));
            }
        }
        Ok(())
    }

    /// `I⁰_{0⁻}`, everything still under construction at time zero.
    pub fn total(&self) -> f64 {
        self.jump_sizes.iter().sum()
    }

    /// `I⁰_s`, cumulative investment up to and including `s`.
    pub fn cumulative(&self, s: f64) -> f64 {
        self.jump_times
            .iter()
            .zip(&self.jump_sizes)
            .filter(|(&t, _)| t <= s)
            .map(|(_, &x)| x)
            .sum()
    }

    /// Capacity completed by time `t ≥ 0`; `slack` absorbs grid rounding.
    pub fn completed_by(&self, t: f64, h: f64, slack: f64) -> f64 {
        self.jump_times
            .iter()
            .zip(&self.jump_sizes)
            .filter(|(&s, _)| s + h <= t + slack)
            .map(|(_, &x)| x)
            .sum()
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub model: DemandModel,
    /// Discount rate per year.
    pub rho: f64,
    /// Time-to-build in years.
    pub h: f64,
    /// Unit investment cost.
    pub q0: f64,
    /// Installed capacity at time zero.
    pub k: f64,
    /// Demand at time zero.
    pub d: f64,
    #[serde(default)]
    pub pipeline: Pipeline,
    /// Marginal production cost.
    pub eta: f64,
    /// Slope of inverse demand.
    pub theta: f64,
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        sde::validate(&self.model, self.rho)?;
        if !(self.h > 0.0 && self.h.is_finite()) {
            return Err(Error::Parameter(format!(
                "h must be positive, got {}",
                self.h
            )));
        }
        if !(self.q0 >= 0.0 && self.q0.is_finite()) {
            return Err(Error::Parameter(format!(
                "q0 must be >= 0, got {}",
                self.q0
            )));
        }
        if !(self.theta > 0.0 && self.theta.is_finite()) {
            return Err(Error::Parameter(format!(
                "theta must be positive, got {}",
                self.theta
            )));
        }
        if !(self.eta >= 0.0 && self.eta.is_finite()) {
            return Err(Error::Parameter(format!(
                "eta must be >= 0, got {}",
                self.eta
            )));
        }
        if !self.k.is_finite() {
            return Err(Error::Parameter(format!(
                "k must be finite, got {}",
                self.k
            )));
        }
        self.model.check_level(self.d)?;
        self.pipeline.validate(self.h)
    }

    /// `c = k + I⁰_{0⁻}`.
    pub fn committed_start(&self) -> f64 {
        self.k + self.pipeline.total()
    }

    pub fn boundary(&self) -> Result<Boundary> {
        Boundary::new(self.model, self.rho, self.h, self.q0)
    }
}

/// One simulated run of the optimal (or any monotone) policy.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: TimeGrid,
    pub demand: Vec<f64>,
    pub committed: Vec<f64>,
    pub installed: Vec<f64>,
    /// `dI` at each grid point; entry 0 is the atom at time zero.
    pub investment: Vec<f64>,
    pub price: Vec<f64>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.demand.len()
    }

    pub fn is_empty(&self) -> bool {
        self.demand.is_empty()
    }
}

/// Number of grid steps in the time-to-build.
pub fn delay_steps(grid: &TimeGrid, h: f64) -> Result<usize> {
    grid.steps_in(h).ok_or_else(|| {
        Error::Grid(format!(
            "time-to-build {h} is not a whole number of steps of {}",
            grid.dt
        ))
    })
}

/// Runs the policy `C_t = max(c, rule(sup_{s≤t} D_s))` along `path`.
///
/// The rule is only evaluated when the running maximum moves, and the
/// committed level is carried forward with `max`, so irreversibility holds
/// for any rule.
pub fn simulate<R: CapacityRule + ?Sized>(
    scenario: &Scenario,
    rule: &R,
    path: &DemandPath,
) -> Result<Trajectory> {
    let grid = path.grid;
    if grid.t0 != 0.0 {
        return Err(Error::Grid(format!(
            "path must start at t = 0, got {}",
            grid.t0
        )));
    }
    let lag = delay_steps(&grid, scenario.h)?;
    let d0 = path.initial();
    if (d0 - scenario.d).abs() > 1e-12 * scenario.d.abs().max(1.0) {
        return Err(Error::Parameter(format!(
            "path starts at {d0} but the scenario demand is {}",
            scenario.d
        )));
    }
    let n = grid.len();
    let c = scenario.committed_start();
    let mut committed = Vec::with_capacity(n);
    let mut investment = Vec::with_capacity(n);
    let mut level = c;
    let mut last_max = f64::NAN;
    for i in 0..n {
        let m = path.running_max[i];
        if m != last_max {
            level = level.max(rule.level(m)?);
            last_max = m;
        }
        let prev = if i == 0 { c } else { committed[i - 1] };
        investment.push(level - prev);
        committed.push(level);
    }
    let slack = 1e-9 * grid.dt;
    let installed: Vec<f64> = (0..n)
        .map(|i| {
            if i >= lag {
                committed[i - lag]
            } else {
                scenario.k
                    + scenario
                        .pipeline
                        .completed_by(grid.time(i), scenario.h, slack)
            }
        })
        .collect();
    let price = path
        .values
        .iter()
        .zip(&installed)
        .map(|(&d, &k)| scenario.eta + scenario.theta * (d - k))
        .collect();
    Ok(Trajectory {
        grid,
        demand: path.values.clone(),
        committed,
        installed,
        investment,
        price,
    })
}

/// Result of checking `C_t = K_{t+h}` on the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagReport {
    pub max_violation: f64,
    pub points_checked: usize,
}

/// Largest `|C_t − K_{t+h}|` over grid points where both are available.
pub fn committed_identity_check(traj: &Trajectory, h: f64) -> LagReport {
    let lag = (h / traj.grid.dt).round() as usize;
    let n = traj.len();
    let mut max_violation = 0.0_f64;
    let mut points_checked = 0;
    for i in 0..n.saturating_sub(lag) {
        max_violation = max_violation.max((traj.committed[i] - traj.installed[i + lag]).abs());
        points_checked += 1;
    }
    LagReport {
        max_violation,
        points_checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sde::sample_path;

    fn abm_scenario(sigma: f64) -> Scenario {
        Scenario {
            model: DemandModel::Abm { mu: 300.0, sigma },
            rho: 0.08,
            h: 8.0,
            q0: 1e-9,
            k: 10_000.0,
            d: 10_000.0,
            pipeline: Pipeline::empty(),
            eta: 0.0,
            theta: 1.0,
        }
    }

    #[test]
    fn scenario_validation() {
        let mut s = abm_scenario(600.0);
        assert!(s.validate().is_ok());
        s.q0 = 0.0;
        assert!(s.validate().is_ok());
        s.q0 = -1.0;
        assert!(matches!(s.validate(), Err(Error::Parameter(_))));
        let mut s = abm_scenario(600.0);
        s.theta = 0.0;
        assert!(s.validate().is_err());
        let mut s = abm_scenario(600.0);
        s.pipeline = Pipeline {
            jump_times: vec![-9.0],
            jump_sizes: vec![1.0],
        };
        assert!(s.validate().is_err());
        let mut s = abm_scenario(600.0);
        s.model = DemandModel::Gbm {
            mu: 0.03,
            sigma: 0.1,
        };
        s.d = -1.0;
        assert!(matches!(s.validate(), Err(Error::Domain { .. })));
    }

    #[test]
    fn grid_must_resolve_the_delay() {
        let s = abm_scenario(600.0);
        let b = s.boundary().unwrap();
        let path = sample_path(&s.model, s.d, TimeGrid::new(0.0, 0.3, 100).unwrap(), 1).unwrap();
        assert!(matches!(simulate(&s, &b, &path), Err(Error::Grid(_))));
    }

    #[test]
    fn deterministic_abm_tracks_the_mean() {
        let s = abm_scenario(1e-7);
        let b = s.boundary().unwrap();
        let grid = TimeGrid::new(0.0, 0.25, 200).unwrap();
        let path = sample_path(&s.model, s.d, grid, 3).unwrap();
        let traj = simulate(&s, &b, &path).unwrap();
        for i in 0..traj.len() {
            let target = sde::beta0(&s.model, traj.demand[i], s.h);
            assert!((traj.committed[i] - target).abs() < 1e-3);
        }
    }

    #[test]
    fn pipeline_fills_the_first_h_years() {
        let mut s = abm_scenario(600.0);
        s.pipeline = Pipeline::new(vec![-6.0, -2.5], vec![100.0, 50.0], 8.0).unwrap();
        s.k = 9_000.0;
        let b = s.boundary().unwrap();
        let grid = TimeGrid::new(0.0, 0.5, 40).unwrap();
        let path = sample_path(&s.model, s.d, grid, 5).unwrap();
        let traj = simulate(&s, &b, &path).unwrap();
        assert_eq!(traj.installed[0], 9_000.0);
        assert_eq!(traj.installed[4], 9_100.0);
        assert_eq!(traj.installed[11], 9_150.0);
        assert_eq!(committed_identity_check(&traj, 8.0).max_violation, 0.0);
        assert_eq!(traj.investment[0], traj.committed[0] - 9_150.0);
    }

    #[test]
    fn pipeline_accessors() {
        let p = Pipeline::new(vec![-3.0, -1.0], vec![2.0, 5.0], 4.0).unwrap();
        assert_eq!(p.total(), 7.0);
        assert_eq!(p.cumulative(-2.0), 2.0);
        assert_eq!(p.completed_by(3.0, 4.0, 0.0), 7.0);
        assert_eq!(p.completed_by(2.9, 4.0, 0.0), 2.0);
    }
}
