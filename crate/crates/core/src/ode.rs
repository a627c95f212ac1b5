//! Adaptive Dormand–Prince 5(4) integration of a scalar ODE `y' = f(x, y)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            rtol: 1e-12,
            atol: 1e-14,
            max_steps: 5_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
// 5th-order weights are the last row of A; these are the 4th-order ones.
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrates from `(x0, y0)` to `x1` and returns `y(x1)`.
pub fn integrate<F>(mut f: F, x0: f64, y0: f64, x1: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64, f64) -> f64,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut h = span / 100.0;
    let mut k = [0.0_f64; 7];
    k[0] = f(x, y);
    for _ in 0..tol.max_steps {
        // A step that would leave a sliver of the interval takes all of it.
        let last = (x + h - x1) * dir >= -1e-9 * h.abs();
        if last {
            h = x1 - x;
        }
        for i in 1..7 {
            let mut yi = y;
            for j in 0..i {
                yi += h * A[i][j] * k[j];
            }
            k[i] = f(x + C[i] * h, yi);
        }
        let y5 = y + h * (0..6).map(|j| A[6][j] * k[j]).sum::<f64>();
        let y4 = y + h * (0..7).map(|j| B4[j] * k[j]).sum::<f64>();
        let scale = tol.atol + tol.rtol * y.abs().max(y5.abs());
        let err = ((y5 - y4) / scale).abs();
        if y5.is_finite() && err <= 1.0 {
            if last {
                return Ok(y5);
            }
            x += h;
            y = y5;
            k[0] = k[6];
            let grow = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).min(5.0)
            };
            h *= grow;
            continue;
        }
        h *= if y5.is_finite() {
            (0.9 * err.powf(-0.2)).max(0.2)
        } else {
            0.2
        };
        if h.abs() <= 1e-15 * x.abs().max(1.0) {
            return Err(Error::Numerics(format!(
                "step size underflow at x = {x} (y = {y})"
            )));
        }
    }
    Err(Error::Numerics(format!(
        "exceeded {} steps integrating from {x0} to {x1}",
        tol.max_steps
    )))
}
