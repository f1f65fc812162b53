//! Adaptive Dormand–Prince 5(4) integration for autonomous fields.

use nalgebra::DVector;
use thiserror::Error;

type Vector = DVector<f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OdeError {
    #[error("state norm exceeded {limit:e} at t = {t}")]
    BlowUp { t: f64, limit: f64, state: Vec<f64> },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("step budget exhausted at t = {t}")]
    TooManySteps { t: f64 },
}

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// 5th minus 4th order weights
const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
const E7: f64 = -1.0 / 40.0;

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
}

#[derive(Debug, Clone)]
pub struct Step {
    pub x: Vector,
    /// Scaled error estimate; the step is acceptable when `err <= 1`.
    pub err: f64,
}

impl Dopri5 {
    pub fn new(tol: f64) -> Self {
        Self {
            rtol: tol,
            atol: tol,
        }
    }

    pub fn attempt<F: Fn(&Vector) -> Vector>(&self, f: &F, x: &Vector, h: f64) -> Step {
        let k1 = f(x);
        let k2 = f(&(x + &k1 * (h * A21)));
        let k3 = f(&(x + (&k1 * A31 + &k2 * A32) * h));
        let k4 = f(&(x + (&k1 * A41 + &k2 * A42 + &k3 * A43) * h));
        let k5 = f(&(x + (&k1 * A51 + &k2 * A52 + &k3 * A53 + &k4 * A54) * h));
        let k6 = f(&(x + (&k1 * A61 + &k2 * A62 + &k3 * A63 + &k4 * A64 + &k5 * A65) * h));
        let x_new = x + (&k1 * B1 + &k3 * B3 + &k4 * B4 + &k5 * B5 + &k6 * B6) * h;
        let k7 = f(&x_new);
        let e = (&k1 * E1 + &k3 * E3 + &k4 * E4 + &k5 * E5 + &k6 * E6 + &k7 * E7) * h;
        let mut acc = 0.0;
        for i in 0..x.len() {
            let sc = self.atol + self.rtol * x[i].abs().max(x_new[i].abs());
            acc += (e[i] / sc).powi(2);
        }
        let err = if x.is_empty() {
            0.0
        } else {
            (acc / x.len() as f64).sqrt()
        };
        Step {
            x: x_new,
            err: if err.is_finite() { err } else { f64::INFINITY },
        }
    }

    /// Step-size update after an attempt with error `err`.
    pub fn next_h(h: f64, err: f64) -> f64 {
        let factor = if err == 0.0 {
            5.0
        } else {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        };
        h * factor
    }
}

/// Integrates `ẋ = f(x)` for signed `duration`, returning the final state and
/// the number of accepted steps.
pub fn integrate<F: Fn(&Vector) -> Vector>(
    f: &F,
    x0: &Vector,
    duration: f64,
    tol: f64,
    blowup: f64,
) -> Result<(Vector, usize), OdeError> {
    let solver = Dopri5::new(tol);
    let sign = if duration < 0.0 { -1.0 } else { 1.0 };
    let total = duration.abs();
    let mut t = 0.0;
    let mut x = x0.clone();
    if total == 0.0 {
        return Ok((x, 0));
    }
    let mut h = initial_step(f, &x, total);
    let mut steps = 0usize;
    const MAX_STEPS: usize = 2_000_000;
    while t < total {
        if steps >= MAX_STEPS {
            return Err(OdeError::TooManySteps { t: sign * t });
        }
        let last = h >= total - t;
        let h_try = if last { total - t } else { h };
        let step = solver.attempt(f, &x, sign * h_try);
        if step.err <= 1.0 {
            if step.x.iter().any(|v| !v.is_finite()) {
                return Err(OdeError::NonFinite { t: sign * t });
            }
            t = if last { total } else { t + h_try };
            x = step.x;
            steps += 1;
            if x.norm() > blowup {
                return Err(OdeError::BlowUp {
                    t: sign * t,
                    limit: blowup,
                    state: x.iter().copied().collect(),
                });
            }
        }
        h = Dopri5::next_h(h_try, step.err);
        if h < 1e-14 * total.max(1.0) && t < total {
            return Err(OdeError::StepUnderflow { t: sign * t });
        }
    }
    Ok((x, steps))
}

fn initial_step<F: Fn(&Vector) -> Vector>(f: &F, x: &Vector, total: f64) -> f64 {
    let speed = f(x).norm();
    let scale = x.norm().max(1.0);
    let h = if speed > 0.0 {
        0.01 * scale / speed
    } else {
        total
    };
    h.min(total).max(1e-12 * total)
}
