//! Dense Lyapunov and Sylvester solvers by Kronecker vectorization.
//!
//! Problem sizes here are fixed and tiny (blocks of the 6x6 cascade), so a
//! direct LU solve of the vectorized system is the deterministic choice.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Conditioning limit for the vectorized operator.
const MAX_CONDITION: f64 = 1e12;

fn solve_vectorized(op: DMatrix<f64>, rhs: DMatrix<f64>, rows: usize) -> Result<DMatrix<f64>> {
    let sv = op.clone().svd(false, false).singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if smin <= 0.0 || smax / smin > MAX_CONDITION {
        return Err(Error::SolverFailure(format!(
            "vectorized operator condition number {:.3e} exceeds {MAX_CONDITION:.0e}",
            if smin > 0.0 { smax / smin } else { f64::INFINITY }
        )));
    }
    let cols = rhs.ncols();
    let v = nalgebra::DVector::from_column_slice(rhs.as_slice());
    let sol = op
        .lu()
        .solve(&(-v))
        .ok_or_else(|| Error::SolverFailure("LU solve failed".into()))?;
    Ok(DMatrix::from_column_slice(rows, cols, sol.as_slice()))
}

/// Solve the continuous Lyapunov equation `A V + V Aᵀ + Q = 0`.
pub fn solve_lyapunov(a: &DMatrix<f64>, q: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!((q.nrows(), q.ncols()), (n, n));
    let eye = DMatrix::<f64>::identity(n, n);
    // vec(AV) = (I ⊗ A) vec(V), vec(V Aᵀ) = (A ⊗ I) vec(V)
    let op = eye.kronecker(a) + a.kronecker(&eye);
    let v = solve_vectorized(op, q.clone(), n)?;
    // symmetric Q gives a symmetric solution; strip round-off asymmetry
    Ok(0.5 * (&v + v.transpose()))
}

/// Solve the Sylvester equation `A X + X B + C = 0` for rectangular `X`.
pub fn solve_sylvester(
    a: &DMatrix<f64>,
    b: &DMatrix<f64>,
    c: &DMatrix<f64>,
) -> Result<DMatrix<f64>> {
    let (m, n) = (a.nrows(), b.nrows());
    assert_eq!(a.ncols(), m);
    assert_eq!(b.ncols(), n);
    assert_eq!((c.nrows(), c.ncols()), (m, n));
    let eye_m = DMatrix::<f64>::identity(m, m);
    let eye_n = DMatrix::<f64>::identity(n, n);
    // vec(AX) = (Iₙ ⊗ A) vec(X), vec(XB) = (Bᵀ ⊗ Iₘ) vec(X)
    let op = eye_n.kronecker(a) + b.transpose().kronecker(&eye_m);
    solve_vectorized(op, c.clone(), m)
}
