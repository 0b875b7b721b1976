//! Exact dense SVD (oracle) and explained-variance rank selection.
//!
//! `truncated_svd` is the reference factorization used for per-mode HOSVD
//! truncation, perplexity calibration, and as the test oracle for the
//! subspace-iteration path. It is never called in the per-step compression
//! hot path.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{Matrix, SingularSpectrum};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct TruncatedSvd {
    /// Left singular vectors, `rows x rank`.
    pub u: Matrix,
    /// Leading singular values, nonincreasing.
    pub s: SingularSpectrum,
    /// Right singular vectors, `cols x rank`.
    pub v: Matrix,
}

impl TruncatedSvd {
    /// `U · diag(s) · Vᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let rank = self.s.len();
        let mut scaled = self.u.clone();
        for r in 0..scaled.rows() {
            for k in 0..rank {
                let v = scaled.at(r, k) * self.s.values()[k];
                scaled.set(r, k, v);
            }
        }
        scaled
            .matmul(&self.v.transpose())
            .expect("factor dimensions are consistent by construction")
    }
}

/// Best rank-`rank` factorization of `m` in the Frobenius norm.
pub fn truncated_svd(m: &Matrix, rank: usize) -> Result<TruncatedSvd> {
    let max_rank = m.rows().min(m.cols());
    if rank < 1 || rank > max_rank {
        return Err(Error::RankOutOfRange {
            rank,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let dm = DMatrix::from_row_slice(m.rows(), m.cols(), m.data());
    let svd = dm.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let sv = svd.singular_values;

    let mut order: Vec<usize> = (0..sv.len()).collect();
    order.sort_by(|&a, &b| sv[b].partial_cmp(&sv[a]).expect("finite singular values"));
    order.truncate(rank);

    let mut um = Matrix::zeros(m.rows(), rank);
    let mut vm = Matrix::zeros(m.cols(), rank);
    let mut values = Vec::with_capacity(rank);
    for (k, &idx) in order.iter().enumerate() {
        values.push(sv[idx].max(0.0));
        for r in 0..m.rows() {
            um.set(r, k, u[(r, idx)]);
        }
        for r in 0..m.cols() {
            vm.set(r, k, v_t[(idx, r)]);
        }
    }
    Ok(TruncatedSvd {
        u: um,
        s: SingularSpectrum::new(values)?,
        v: vm,
    })
}

/// Full left singular basis and spectrum of `m`.
///
/// Returns `U` with `min(rows, cols)` orthonormal columns and all singular
/// values, computed from the eigendecomposition of the smaller Gram matrix
/// (`A·Aᵀ` or `Aᵀ·A`), which is what keeps the per-mode cost proportional
/// to `max(d, P_d)² · min(d, P_d)`.
pub fn left_singular(m: &Matrix) -> Result<(Matrix, SingularSpectrum)> {
    let (rows, cols) = (m.rows(), m.cols());
    let k = rows.min(cols);
    if rows <= cols {
        // Eigen basis of A·Aᵀ is a complete orthonormal U, even at rank deficiency.
        let g = gram_rows(m);
        let (vecs, energies) = sym_eig_desc(&g);
        let values: Vec<f64> = energies.iter().map(|&e| e.max(0.0).sqrt()).collect();
        Ok((vecs, SingularSpectrum::new(values)?))
    } else {
        let g = gram_cols(m);
        let (vecs, energies) = sym_eig_desc(&g);
        let values: Vec<f64> = energies.iter().map(|&e| e.max(0.0).sqrt()).collect();
        let tol = values.first().copied().unwrap_or(0.0) * 1e-12;
        let mut u = Matrix::zeros(rows, k);
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(k);
        for j in 0..k {
            let col = if values[j] > tol {
                let mut col = vec![0.0; rows];
                for r in 0..rows {
                    let mut acc = 0.0;
                    for c in 0..cols {
                        acc += m.at(r, c) * vecs.at(c, j);
                    }
                    col[r] = acc / values[j];
                }
                col
            } else {
                complete_column(rows, &basis)
            };
            for (r, &x) in col.iter().enumerate() {
                u.set(r, j, x);
            }
            basis.push(col);
        }
        Ok((u, SingularSpectrum::new(values)?))
    }
}

/// Minimal rank whose cumulative squared-singular-value energy reaches the
/// fraction `eps` of the total; always at least 1.
pub fn rank_for_variance(s: &SingularSpectrum, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "explained variance threshold must be in (0, 1], got {eps}"
        )));
    }
    let total = s.total_energy();
    if total == 0.0 {
        log::warn!("rank_for_variance: all-zero spectrum (degenerate activation), using rank 1");
        return Ok(1);
    }
    let mut cum = 0.0;
    for (i, v) in s.values().iter().enumerate() {
        cum += v * v;
        if cum / total >= eps {
            return Ok(i + 1);
        }
    }
    Ok(s.len())
}

/// `A·Aᵀ`.
fn gram_rows(m: &Matrix) -> DMatrix<f64> {
    let n = m.rows();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        let ri = m.row(i);
        for j in i..n {
            let dot: f64 = ri.iter().zip(m.row(j)).map(|(a, b)| a * b).sum();
            g[(i, j)] = dot;
            g[(j, i)] = dot;
        }
    }
    g
}

/// `Aᵀ·A`.
fn gram_cols(m: &Matrix) -> DMatrix<f64> {
    let n = m.cols();
    let mut g = DMatrix::zeros(n, n);
    for r in 0..m.rows() {
        let row = m.row(r);
        for i in 0..n {
            let a = row[i];
            if a == 0.0 {
                continue;
            }
            for j in i..n {
                g[(i, j)] += a * row[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            g[(i, j)] = g[(j, i)];
        }
    }
    g
}

/// Eigendecomposition of a symmetric matrix, eigenvalues descending.
fn sym_eig_desc(g: &DMatrix<f64>) -> (Matrix, Vec<f64>) {
    let eig = SymmetricEigen::new(g.clone());
    let n = g.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("finite eigenvalues")
    });
    let mut vecs = Matrix::zeros(n, n);
    let mut vals = Vec::with_capacity(n);
    for (k, &idx) in order.iter().enumerate() {
        vals.push(eig.eigenvalues[idx]);
        for r in 0..n {
            vecs.set(r, k, eig.eigenvectors[(r, idx)]);
        }
    }
    (vecs, vals)
}

/// Deterministic unit vector orthogonal to `basis` (for zero-singular-value
/// columns): first standard basis vector with a usable residual.
fn complete_column(rows: usize, basis: &[Vec<f64>]) -> Vec<f64> {
    for k in 0..rows {
        let mut v = vec![0.0; rows];
        v[k] = 1.0;
        for _ in 0..2 {
            for q in basis {
                let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
                for (x, b) in v.iter_mut().zip(q) {
                    *x -= dot * b;
                }
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.5 {
            for x in v.iter_mut() {
                *x /= norm;
            }
            return v;
        }
    }
    unreachable!("basis has fewer vectors than the ambient dimension")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diagonal_matrix_top_two() {
        let m = Matrix::from_vec(3, 3, vec![5.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0, 0.0, 1.0]).unwrap();
        let svd = truncated_svd(&m, 2).unwrap();
        assert!((svd.s.values()[0] - 5.0).abs() < 1e-12);
        assert!((svd.s.values()[1] - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_outer_product_is_exact_at_rank_one() {
        let u = [1.0, -2.0, 0.5];
        let v = [3.0, 1.0, -1.0, 2.0];
        let m = Matrix::from_fn(3, 4, |r, c| u[r] * v[c]);
        let svd = truncated_svd(&m, 1).unwrap();
        let err = svd.reconstruct().sub(&m).unwrap().frobenius_norm();
        assert!(err < 1e-10, "residual {err}");
    }

    #[test]
    fn residual_equals_tail_energy() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        let m = Matrix::standard_normal(6, 8, &mut rng);
        let full = truncated_svd(&m, 6).unwrap();
        let expected = full.s.tail_energy(3).sqrt();
        let svd = truncated_svd(&m, 3).unwrap();
        let err = svd.reconstruct().sub(&m).unwrap().frobenius_norm();
        assert!((err - expected).abs() < 1e-8, "{err} vs {expected}");
    }

    #[test]
    fn rank_out_of_range_is_rejected() {
        let m = Matrix::zeros(3, 4);
        assert!(truncated_svd(&m, 0).is_err());
        assert!(truncated_svd(&m, 4).is_err());
    }

    #[test]
    fn left_singular_matches_oracle_both_orientations() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (rows, cols) in [(4usize, 30usize), (30, 4)] {
            let m = Matrix::standard_normal(rows, cols, &mut rng);
            let (u, s) = left_singular(&m).unwrap();
            assert!(u.orthonormality_defect() < 1e-9);
            let oracle = truncated_svd(&m, rows.min(cols)).unwrap();
            for (a, b) in s.values().iter().zip(oracle.s.values()) {
                assert!((a - b).abs() < 1e-8 * (1.0 + b), "{a} vs {b}");
            }
            // Same dominant subspace: projecting the oracle's leading vector
            // onto the computed basis must preserve its norm.
            let lead = oracle.u.leading_columns(1);
            let coeff = u.tr_matmul(&lead).unwrap();
            let norm = coeff.frobenius_norm();
            assert!((norm - 1.0).abs() < 1e-8, "projection norm {norm}");
        }
    }

    #[test]
    fn left_singular_rank_deficient_tall_matrix_is_orthonormal() {
        // 5x2 with identical columns: rank 1, one zero singular value.
        let m = Matrix::from_fn(5, 2, |r, _| (r + 1) as f64);
        let (u, s) = left_singular(&m).unwrap();
        assert!(u.orthonormality_defect() < 1e-9);
        assert!(s.values()[1].abs() < 1e-9 * s.values()[0]);
    }

    #[test]
    fn variance_rank_hand_cases() {
        // s² = (9, 1): 0.9 of the energy is in the first value.
        let s = SingularSpectrum::new(vec![3.0, 1.0]).unwrap();
        assert_eq!(rank_for_variance(&s, 0.9).unwrap(), 1);

        // s² = (5, 3, 2): cumulative ratios 0.5, 0.8, 1.0.
        let s = SingularSpectrum::new(vec![5f64.sqrt(), 3f64.sqrt(), 2f64.sqrt()]).unwrap();
        assert_eq!(rank_for_variance(&s, 0.8).unwrap(), 2);
        assert_eq!(rank_for_variance(&s, 0.5).unwrap(), 1);
        assert_eq!(rank_for_variance(&s, 0.81).unwrap(), 3);
    }

    #[test]
    fn variance_rank_full_energy_stops_at_last_positive() {
        let s = SingularSpectrum::new(vec![2.0, 1.0, 0.0, 0.0]).unwrap();
        assert_eq!(rank_for_variance(&s, 1.0).unwrap(), 2);
    }

    #[test]
    fn variance_rank_degenerate_spectrum() {
        let s = SingularSpectrum::new(vec![0.0, 0.0]).unwrap();
        assert_eq!(rank_for_variance(&s, 0.5).unwrap(), 1);
        assert!(rank_for_variance(&s, 0.0).is_err());
        assert!(rank_for_variance(&s, 1.5).is_err());
    }

    #[test]
    fn variance_rank_nondecreasing_in_eps() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = Matrix::standard_normal(6, 10, &mut rng);
        let (_, s) = left_singular(&m).unwrap();
        let mut prev = 0;
        for i in 1..=100 {
            let eps = i as f64 / 100.0;
            let r = rank_for_variance(&s, eps).unwrap();
            assert!(r >= prev, "rank dropped from {prev} to {r} at eps={eps}");
            prev = r;
        }
    }
}
