use faer::linalg::solvers::Solve;
use faer::Mat;

use crate::error::{Error, Result};

/// Solves the dense system `a x = b` by LU with partial pivoting.
pub fn solve_dense(a: &Mat<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.len(),
        });
    }
    let rhs = Mat::<f64>::from_fn(n, 1, |i, _| b[i]);
    let x = a.partial_piv_lu().solve(&rhs);
    let out: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if out.iter().all(|v| v.is_finite()) {
        Ok(out)
    } else {
        Err(Error::Singular)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_system() {
        let a = Mat::<f64>::from_fn(3, 3, |i, j| [[2.0, 1.0, 0.0], [1.0, 3.0, 1.0], [0.0, 1.0, 4.0]][i][j]);
        let x = solve_dense(&a, &[3.0, 5.0, 5.0]).unwrap();
        for (xi, e) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - e).abs() < 1e-14);
        }
    }

    #[test]
    fn singular_is_reported() {
        let a = Mat::<f64>::zeros(2, 2);
        assert!(matches!(solve_dense(&a, &[1.0, 1.0]), Err(Error::Singular)));
    }
}
