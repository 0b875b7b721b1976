//! Column orthogonalization via modified Gram-Schmidt.

use rand::Rng;
use rand_distr::StandardNormal;

use super::Matrix;
use crate::error::{Error, Result};

/// Residual-norm threshold below which a column counts as rank-deficient.
pub const DEFAULT_RANK_EPS: f64 = 1e-10;

/// Result of [`orthogonalize`]: the orthonormal basis plus the indices of
/// columns that were rank-deficient and had to be replaced by random
/// re-draws.
#[derive(Clone, Debug)]
pub struct Orthogonalized {
    pub q: Matrix,
    pub redrawn: Vec<usize>,
}

/// Orthonormalize the columns of `m` with [`DEFAULT_RANK_EPS`].
pub fn orthogonalize<R: Rng + ?Sized>(m: &Matrix, rng: &mut R) -> Result<Orthogonalized> {
    orthogonalize_with_eps(m, DEFAULT_RANK_EPS, rng)
}

/// Modified Gram-Schmidt, column by column with one re-projection pass.
///
/// A column whose residual norm falls below `eps` is replaced by an i.i.d.
/// standard normal draw, re-orthogonalized, and its index reported in
/// `redrawn`; the output always has orthonormal columns.
pub fn orthogonalize_with_eps<R: Rng + ?Sized>(
    m: &Matrix,
    eps: f64,
    rng: &mut R,
) -> Result<Orthogonalized> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows < cols {
        return Err(Error::DimMismatch(format!(
            "orthogonalize: {rows}x{cols} matrix has more columns than rows"
        )));
    }
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(cols);
    let mut redrawn = Vec::new();
    for j in 0..cols {
        let mut v = m.col(j);
        let mut norm = project_out(&mut v, &q);
        if norm < eps {
            redrawn.push(j);
            let mut attempts = 0;
            while norm < eps {
                attempts += 1;
                if attempts > 64 {
                    return Err(Error::InvalidArgument(format!(
                        "orthogonalize: could not replace degenerate column {j}"
                    )));
                }
                for x in v.iter_mut() {
                    *x = rng.sample(StandardNormal);
                }
                norm = project_out(&mut v, &q);
            }
        }
        for x in v.iter_mut() {
            *x /= norm;
        }
        q.push(v);
    }
    let mut out = Matrix::zeros(rows, cols);
    for (j, col) in q.iter().enumerate() {
        for (r, &x) in col.iter().enumerate() {
            out.set(r, j, x);
        }
    }
    Ok(Orthogonalized { q: out, redrawn })
}

/// Remove the components of `v` along each basis vector (two passes) and
/// return the residual norm.
fn project_out(v: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for _ in 0..2 {
        for q in basis {
            let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, b) in v.iter_mut().zip(q) {
                *x -= dot * b;
            }
        }
    }
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthonormal_input_is_a_fixed_point() {
        // Columns of a rotation: exactly orthonormal.
        let theta: f64 = 0.7;
        let m = Matrix::from_vec(
            2,
            2,
            vec![theta.cos(), -theta.sin(), theta.sin(), theta.cos()],
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let out = orthogonalize(&m, &mut rng).unwrap();
        assert!(out.redrawn.is_empty());
        let diff = out.q.sub(&m).unwrap();
        for v in diff.data() {
            assert!(v.abs() < 1e-12, "deviation {v}");
        }
    }

    #[test]
    fn random_matrix_becomes_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Matrix::standard_normal(5, 2, &mut rng);
        let out = orthogonalize(&m, &mut rng).unwrap();
        assert!(out.redrawn.is_empty());
        assert!(out.q.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn duplicated_columns_trigger_redraw_and_stay_orthonormal() {
        let m = Matrix::from_vec(3, 2, vec![1.0, 1.0, 2.0, 2.0, 3.0, 3.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let out = orthogonalize(&m, &mut rng).unwrap();
        assert_eq!(out.redrawn, vec![1]);
        assert!(out.q.orthonormality_defect() < 1e-10);
    }

    #[test]
    fn span_is_preserved_for_full_rank_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Matrix::standard_normal(6, 3, &mut rng);
        let out = orthogonalize(&m, &mut rng).unwrap();
        // Each input column must be reproduced by projecting onto the basis.
        let coeffs = out.q.tr_matmul(&m).unwrap();
        let back = out.q.matmul(&coeffs).unwrap();
        let err = back.sub(&m).unwrap().frobenius_norm() / m.frobenius_norm();
        assert!(err < 1e-12, "span changed, projection error {err}");
    }

    #[test]
    fn wide_matrix_is_rejected() {
        let m = Matrix::zeros(2, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        assert!(orthogonalize(&m, &mut rng).is_err());
    }
}
