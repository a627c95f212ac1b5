//! Irreversible capacity expansion with time-to-build under stochastic
//! demand: optimal investment boundaries, policy simulation, Monte Carlo cost
//! functionals and comparative statics.
//!
//! ```
//! use capacity_core::{Boundary, DemandModel};
//!
//! let model = DemandModel::Abm { mu: 300.0, sigma: 600.0 };
//! let boundary = Boundary::new(model, 0.08, 8.0, 0.0).unwrap();
//! let gap = boundary.eval(10_000.0).unwrap() - 10_000.0;
//! assert!((gap - 1873.8).abs() < 0.1);
//! ```

pub mod boundary;
pub mod error;
pub mod montecarlo;
pub mod ode;
pub mod policy;
pub mod presets;
pub mod sde;
pub mod special;
pub mod statics;

pub use boundary::{BiasDecomposition, Boundary, CapacityRule};
pub use error::{Error, Result};
pub use montecarlo::{CostEstimate, McSettings, PolicySpec};
pub use policy::{Pipeline, Scenario, Trajectory};
pub use sde::{DemandModel, DemandPath, StateSpace, TimeGrid};
