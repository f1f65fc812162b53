//! Matrix exponential by scaling and squaring with Padé approximants.
//!
//! The degree selection and the `θ_m` thresholds follow Higham, "The Scaling
//! and Squaring Method for the Matrix Exponential Revisited" (2005). Norms are
//! 1-norms.

use nalgebra::DMatrix;

use super::{LieError, Matrix};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// Returns `exp(t·a)`.
///
/// Fails when `a` is not square, when any input is non-finite, or when the
/// result overflows.
pub fn matrix_exponential(a: &Matrix, t: f64) -> Result<Matrix, LieError> {
    if !a.is_square() {
        return Err(LieError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    if !t.is_finite() || a.iter().any(|v| !v.is_finite()) {
        return Err(LieError::NonFinite);
    }
    let n = a.nrows();
    if n == 0 {
        return Ok(DMatrix::zeros(0, 0));
    }
    let ta = a * t;
    if n == 1 {
        let v = ta[(0, 0)].exp();
        return finite(DMatrix::from_element(1, 1, v));
    }

    let norm = one_norm(&ta);
    let ident = DMatrix::<f64>::identity(n, n);
    let (u, v, squarings) = if norm <= THETA_3 {
        let (u, v) = pade_low(&ta, &ident, &B3);
        (u, v, 0)
    } else if norm <= THETA_5 {
        let (u, v) = pade_low(&ta, &ident, &B5);
        (u, v, 0)
    } else if norm <= THETA_7 {
        let (u, v) = pade_low(&ta, &ident, &B7);
        (u, v, 0)
    } else if norm <= THETA_9 {
        let (u, v) = pade_low(&ta, &ident, &B9);
        (u, v, 0)
    } else {
        let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
        let scaled = &ta * 2f64.powi(-s);
        let (u, v) = pade13(&scaled, &ident);
        (u, v, s as u32)
    };

    // r = (v - u)^{-1} (v + u)
    let numer = &v + &u;
    let denom = &v - &u;
    let mut r = denom.lu().solve(&numer).ok_or(LieError::Singular)?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    finite(r)
}

fn finite(m: Matrix) -> Result<Matrix, LieError> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(m)
    } else {
        Err(LieError::Overflow)
    }
}

pub(crate) fn one_norm(a: &Matrix) -> f64 {
    a.column_iter()
        .map(|c| c.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Odd/even split for the degree 3, 5, 7 and 9 approximants.
fn pade_low(a: &Matrix, ident: &Matrix, b: &[f64]) -> (Matrix, Matrix) {
    let a2 = a * a;
    let degree = b.len() - 1;
    let mut powers = vec![ident.clone(), a2.clone()];
    while powers.len() <= degree / 2 {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let n = a.nrows();
    let mut odd = DMatrix::<f64>::zeros(n, n);
    let mut even = DMatrix::<f64>::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        if 2 * k + 1 <= degree {
            odd += p * b[2 * k + 1];
        }
        even += p * b[2 * k];
    }
    (a * odd, even)
}

fn pade13(a: &Matrix, ident: &Matrix) -> (Matrix, Matrix) {
    let b = &B13;
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let inner_u = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]);
    let u = a * (inner_u + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + ident * b[1]);
    let inner_v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]);
    let v = inner_v + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + ident * b[0];
    (u, v)
}
