//! Matrix Lie-algebra computations on `gl(n)`: commutators, bracket
//! closure, evaluation of a Lie algebra at a point, and matrix exponentials.
//!
//! `gl(n)` is given the Frobenius inner product throughout, so a
//! [`LieBasis`] is an orthonormal family of `n×n` matrices.

mod expm;

use nalgebra::{DMatrix, DVector};
use thiserror::Error;

use crate::linalg::{frobenius_dot, rank_of, singular_values};

pub use expm::matrix_exponential;

/// Dense real square matrix.
pub type Matrix = DMatrix<f64>;
/// Dense real vector.
pub type Vector = DVector<f64>;

/// Default relative singular-value cutoff for numerical rank.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("no generators supplied")]
    EmptyGenerators,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("non-finite entry in input")]
    NonFinite,
    #[error("matrix exponential overflowed")]
    Overflow,
    #[error("Padé denominator is singular")]
    Singular,
    #[error("evaluation point is the origin")]
    ZeroPoint,
}

/// Commutator `AB − BA`.
pub fn bracket(a: &Matrix, b: &Matrix) -> Result<Matrix, LieError> {
    check_square(a)?;
    check_square(b)?;
    if a.nrows() != b.nrows() {
        return Err(LieError::DimensionMismatch {
            expected: a.nrows(),
            found: b.nrows(),
        });
    }
    Ok(a * b - b * a)
}

fn check_square(a: &Matrix) -> Result<(), LieError> {
    if a.is_square() {
        Ok(())
    } else {
        Err(LieError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        })
    }
}

/// Frobenius-orthonormal basis of a bracket-closed subspace of `gl(n)`.
#[derive(Debug, Clone)]
pub struct LieBasis {
    n: usize,
    basis: Vec<Matrix>,
    tol: f64,
    depth: usize,
    converged: bool,
}

impl LieBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.basis
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Number of bracketing rounds that admitted at least one new direction.
    pub fn depth(&self) -> usize {
        self.depth
    }

    /// False when the round cap was hit while brackets were still adding
    /// directions; the closure property is then unverified.
    pub fn converged(&self) -> bool {
        self.converged
    }

    /// Residual of `m` after orthogonal projection onto the span.
    pub fn residual(&self, m: &Matrix) -> Matrix {
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let c = frobenius_dot(&r, b);
                r -= b * c;
            }
        }
        r
    }

    /// Largest relative projection residual `‖res([bᵢ,bⱼ])‖ / ‖[bᵢ,bⱼ]‖`
    /// over all basis pairs; brackets that vanish are skipped.
    pub fn closure_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.basis.len() {
            for j in (i + 1)..self.basis.len() {
                let c = &self.basis[i] * &self.basis[j] - &self.basis[j] * &self.basis[i];
                let norm = c.norm();
                if norm > 0.0 {
                    worst = worst.max(self.residual(&c).norm() / norm);
                }
            }
        }
        worst
    }

    /// The `n × dim` matrix whose columns are `L x` for `L` in the basis.
    pub fn stack_at(&self, x: &Vector) -> Matrix {
        let mut m = DMatrix::zeros(self.n, self.basis.len());
        for (k, l) in self.basis.iter().enumerate() {
            m.set_column(k, &(l * x));
        }
        m
    }
}

/// `depth_cap` used when callers have no better bound: `2n²` rounds.
pub fn default_depth_cap(n: usize) -> usize {
    2 * n * n
}

/// Smallest bracket-closed subspace of `gl(n)` containing `generators`.
///
/// Breadth-first: each round brackets every pair that involves a direction
/// admitted in the previous round. A candidate is admitted when its residual
/// after projection exceeds `tol` times the largest candidate norm seen in
/// its phase (generators, then brackets, whose norm floor is 1 because basis
/// elements are unit). The basis is re-orthonormalized after every round.
pub fn lie_closure(
    generators: &[Matrix],
    tol: f64,
    depth_cap: usize,
) -> Result<LieBasis, LieError> {
    let first = generators.first().ok_or(LieError::EmptyGenerators)?;
    if !(tol > 0.0) {
        return Err(LieError::BadTolerance(tol));
    }
    check_square(first)?;
    let n = first.nrows();
    for g in generators {
        check_square(g)?;
        if g.nrows() != n {
            return Err(LieError::DimensionMismatch {
                expected: n,
                found: g.nrows(),
            });
        }
        if g.iter().any(|v| !v.is_finite()) {
            return Err(LieError::NonFinite);
        }
    }
    let full = n * n;

    let mut basis: Vec<Matrix> = Vec::new();
    let gen_scale = generators.iter().map(|g| g.norm()).fold(0.0, f64::max);
    for g in generators {
        if basis.len() == full {
            break;
        }
        admit(&mut basis, g, tol * gen_scale);
    }

    let mut depth = 0;
    let mut converged = true;
    let mut bracket_scale: f64 = 1.0;
    let mut frontier = 0;
    let mut rounds = 0;
    while basis.len() < full && frontier < basis.len() {
        if rounds == depth_cap {
            converged = false;
            break;
        }
        rounds += 1;
        let before = basis.len();
        'pairs: for j in frontier..before {
            for i in 0..j {
                let c = &basis[i] * &basis[j] - &basis[j] * &basis[i];
                bracket_scale = bracket_scale.max(c.norm());
                admit(&mut basis, &c, tol * bracket_scale);
                if basis.len() == full {
                    break 'pairs;
                }
            }
        }
        reorthonormalize(&mut basis);
        if basis.len() == before {
            break;
        }
        depth += 1;
        frontier = before;
    }

    Ok(LieBasis {
        n,
        basis,
        tol,
        depth,
        converged,
    })
}

fn admit(basis: &mut Vec<Matrix>, candidate: &Matrix, threshold: f64) -> bool {
    let mut r = candidate.clone();
    // two Gram-Schmidt passes
    for _ in 0..2 {
        for b in basis.iter() {
            let c = frobenius_dot(&r, b);
            r -= b * c;
        }
    }
    let norm = r.norm();
    if norm > threshold && norm > 0.0 {
        basis.push(r / norm);
        true
    } else {
        false
    }
}

fn reorthonormalize(basis: &mut [Matrix]) {
    for k in 0..basis.len() {
        let (done, rest) = basis.split_at_mut(k);
        let cur = &mut rest[0];
        for b in done.iter() {
            let c = frobenius_dot(cur, b);
            *cur -= b * c;
        }
        let norm = cur.norm();
        *cur /= norm;
    }
}

/// The evaluated subspace `{L x : L ∈ basis}`.
#[derive(Debug, Clone)]
pub struct SubspaceReport {
    pub vectors: Vec<Vector>,
    pub singular_values: Vec<f64>,
    pub dim: usize,
}

/// Evaluates the Lie algebra at `x` and measures its numerical rank with the
/// basis tolerance.
///
/// The cutoff is `tol · max(σ_max, |x|)`; basis elements have unit Frobenius
/// norm, so `|x|` bounds every `|L x|` and stops round-off from being ranked
/// against itself when all images nearly vanish.
pub fn evaluate_at(basis: &LieBasis, x: &Vector) -> Result<SubspaceReport, LieError> {
    if x.len() != basis.n {
        return Err(LieError::DimensionMismatch {
            expected: basis.n,
            found: x.len(),
        });
    }
    let norm = x.norm();
    if norm == 0.0 {
        return Err(LieError::ZeroPoint);
    }
    let stacked = basis.stack_at(x);
    let singular_values = singular_values(&stacked);
    let dim = rank_of(&singular_values, basis.tol, norm);
    let vectors = stacked.column_iter().map(|c| c.into_owned()).collect();
    Ok(SubspaceReport {
        vectors,
        singular_values,
        dim,
    })
}

/// Standard infinitesimal rotation generators `L₁, L₂, L₃` of `so(3)`.
pub fn so3_generators() -> [Matrix; 3] {
    [
        DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 0.0, 0.0, 0.0, -1.0, 0.0, 1.0, 0.0]),
        DMatrix::from_row_slice(3, 3, &[0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0, 0.0, 0.0]),
        DMatrix::from_row_slice(3, 3, &[0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
    ]
}
