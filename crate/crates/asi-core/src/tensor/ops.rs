//! Unfolding, folding, and the m-mode product.

use super::{DenseTensor4, Matrix, Shape4};
use crate::error::{Error, Result};

/// Column index of a tensor element in the mode-`mode` unfolding.
///
/// The remaining modes are laid out in ascending mode order, last fastest.
#[inline]
fn unfold_col(idx: [usize; 4], dims: [usize; 4], mode: usize) -> usize {
    let mut col = 0;
    for j in 0..4 {
        if j != mode {
            col = col * dims[j] + idx[j];
        }
    }
    col
}

/// Matricize `t` along `mode`: rows = extent of `mode`, columns = the other
/// three modes in ascending order, last fastest.
pub fn unfold(t: &DenseTensor4, mode: usize) -> Result<Matrix> {
    if mode >= 4 {
        return Err(Error::InvalidMode(mode));
    }
    let dims = t.shape().dims();
    let rows = dims[mode];
    let cols = t.shape().count() / rows;
    let mut out = Matrix::zeros(rows, cols);
    let mut p = 0;
    for i0 in 0..dims[0] {
        for i1 in 0..dims[1] {
            for i2 in 0..dims[2] {
                for i3 in 0..dims[3] {
                    let idx = [i0, i1, i2, i3];
                    let col = unfold_col(idx, dims, mode);
                    out.set(idx[mode], col, t.data()[p]);
                    p += 1;
                }
            }
        }
    }
    Ok(out)
}

/// Exact inverse of [`unfold`].
pub fn fold(m: &Matrix, mode: usize, shape: Shape4) -> Result<DenseTensor4> {
    if mode >= 4 {
        return Err(Error::InvalidMode(mode));
    }
    let dims = shape.dims();
    let rows = dims[mode];
    let cols = shape.count() / rows;
    if m.rows() != rows || m.cols() != cols {
        return Err(Error::DimMismatch(format!(
            "fold: {}x{} matrix does not match mode-{mode} unfolding {rows}x{cols} of shape {:?}",
            m.rows(),
            m.cols(),
            dims
        )));
    }
    let mut out = DenseTensor4::zeros(shape);
    let mut p = 0;
    for i0 in 0..dims[0] {
        for i1 in 0..dims[1] {
            for i2 in 0..dims[2] {
                for i3 in 0..dims[3] {
                    let idx = [i0, i1, i2, i3];
                    let col = unfold_col(idx, dims, mode);
                    out.data_mut()[p] = m.at(idx[mode], col);
                    p += 1;
                }
            }
        }
    }
    Ok(out)
}

/// m-mode product `t ×_mode m`: contracts the extent of `mode` with the
/// columns of `m`, replacing it by `m.rows()`.
pub fn mode_product(t: &DenseTensor4, m: &Matrix, mode: usize) -> Result<DenseTensor4> {
    if mode >= 4 {
        return Err(Error::InvalidMode(mode));
    }
    let dims = t.shape().dims();
    if m.cols() != dims[mode] {
        return Err(Error::DimMismatch(format!(
            "mode_product: matrix has {} columns but mode {mode} extent is {}",
            m.cols(),
            dims[mode]
        )));
    }
    let unfolded = unfold(t, mode)?;
    let contracted = m.matmul(&unfolded)?;
    let mut new_dims = dims;
    new_dims[mode] = m.rows();
    fold(&contracted, mode, Shape4::from_dims(new_dims)?)
}
