//! Dense 4-mode tensors and matrices.
//!
//! Modes are indexed `0..4`. For an activation map the extents are
//! `(batch, channels, height, width)`. The mode-`m` unfolding places mode
//! `m` along rows and the remaining modes along columns in ascending mode
//! order, last index fastest; [`ops::fold`] is its exact inverse and every
//! consumer in the crate uses the same ordering.
//!
//! Storage is `f64` throughout. Serialization boundaries (checkpoints,
//! factor fragments) convert to little-endian `f32`.

mod matrix;
mod ops;
mod orthogonalize;
mod svd;

pub use matrix::Matrix;
pub use ops::{fold, mode_product, unfold};
pub use orthogonalize::{orthogonalize, orthogonalize_with_eps, Orthogonalized, DEFAULT_RANK_EPS};
pub use svd::{left_singular, rank_for_variance, truncated_svd, TruncatedSvd};

use crate::error::{Error, Result};

/// Extents of a 4-mode tensor: batch, channels, height, width.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Shape4 {
    b: usize,
    c: usize,
    h: usize,
    w: usize,
}

impl Shape4 {
    pub fn new(b: usize, c: usize, h: usize, w: usize) -> Result<Self> {
        if b == 0 || c == 0 || h == 0 || w == 0 {
            return Err(Error::InvalidShape(format!(
                "all extents must be >= 1, got ({b},{c},{h},{w})"
            )));
        }
        b.checked_mul(c)
            .and_then(|p| p.checked_mul(h))
            .and_then(|p| p.checked_mul(w))
            .ok_or_else(|| Error::InvalidShape(format!("element count of ({b},{c},{h},{w}) overflows usize")))?;
        Ok(Self { b, c, h, w })
    }

    pub fn b(&self) -> usize {
        self.b
    }
    pub fn c(&self) -> usize {
        self.c
    }
    pub fn h(&self) -> usize {
        self.h
    }
    pub fn w(&self) -> usize {
        self.w
    }

    pub fn dims(&self) -> [usize; 4] {
        [self.b, self.c, self.h, self.w]
    }

    pub fn from_dims(d: [usize; 4]) -> Result<Self> {
        Self::new(d[0], d[1], d[2], d[3])
    }

    /// Extent of one mode.
    pub fn extent(&self, mode: usize) -> Result<usize> {
        if mode >= 4 {
            return Err(Error::InvalidMode(mode));
        }
        Ok(self.dims()[mode])
    }

    /// Product of the extents of all modes except `mode`.
    pub fn co_extent(&self, mode: usize) -> Result<usize> {
        Ok(self.count() / self.extent(mode)?)
    }

    /// Total element count.
    pub fn count(&self) -> usize {
        self.b * self.c * self.h * self.w
    }
}

/// Dense 4-mode tensor, row-major (last mode fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor4 {
    shape: Shape4,
    data: Vec<f64>,
}

impl DenseTensor4 {
    pub fn zeros(shape: Shape4) -> Self {
        Self {
            shape,
            data: vec![0.0; shape.count()],
        }
    }

    /// Build from a row-major value buffer. Length and finiteness are checked.
    pub fn from_vec(shape: Shape4, data: Vec<f64>) -> Result<Self> {
        if data.len() != shape.count() {
            return Err(Error::DimMismatch(format!(
                "tensor data length {} != element count {} of shape {:?}",
                data.len(),
                shape.count(),
                shape.dims()
            )));
        }
        if let Some(v) = data.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("tensor entry {v}")));
        }
        Ok(Self { shape, data })
    }

    pub fn from_fn(shape: Shape4, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let [db, dc, dh, dw] = shape.dims();
        let mut data = Vec::with_capacity(shape.count());
        for b in 0..db {
            for c in 0..dc {
                for h in 0..dh {
                    for w in 0..dw {
                        data.push(f(b, c, h, w));
                    }
                }
            }
        }
        Self { shape, data }
    }

    pub(crate) fn from_vec_unchecked(shape: Shape4, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), shape.count());
        Self { shape, data }
    }

    pub fn shape(&self) -> Shape4 {
        self.shape
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    #[inline]
    pub fn at(&self, b: usize, c: usize, h: usize, w: usize) -> f64 {
        let s = &self.shape;
        self.data[((b * s.c + c) * s.h + h) * s.w + w]
    }

    #[inline]
    pub fn set(&mut self, b: usize, c: usize, h: usize, w: usize, v: f64) {
        let s = &self.shape;
        self.data[((b * s.c + c) * s.h + h) * s.w + w] = v;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.sq_norm().sqrt()
    }

    pub fn sq_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum()
    }

    /// `self - other`, shapes must match.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape != other.shape {
            return Err(Error::DimMismatch(format!(
                "tensor shapes {:?} vs {:?}",
                self.shape.dims(),
                other.shape.dims()
            )));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self::from_vec_unchecked(self.shape, data))
    }

    /// Relative Frobenius distance `|self - other| / |self|` (0 if both zero).
    pub fn rel_error(&self, other: &Self) -> Result<f64> {
        let diff = self.sub(other)?.frobenius_norm();
        let norm = self.frobenius_norm();
        Ok(if norm == 0.0 { diff } else { diff / norm })
    }
}

/// Nonincreasing, nonnegative singular values.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularSpectrum {
    values: Vec<f64>,
}

impl SingularSpectrum {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("empty singular spectrum".into()));
        }
        for pair in values.windows(2) {
            if pair[1] > pair[0] {
                return Err(Error::InvalidArgument(format!(
                    "singular values not nonincreasing: {} < {}",
                    pair[0], pair[1]
                )));
            }
        }
        if values.last().copied().unwrap_or(0.0) < 0.0 {
            return Err(Error::InvalidArgument("negative singular value".into()));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("singular value".into()));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total energy, the sum of squared singular values.
    pub fn total_energy(&self) -> f64 {
        self.values.iter().map(|s| s * s).sum()
    }

    /// Energy past the leading `rank` values.
    pub fn tail_energy(&self, rank: usize) -> f64 {
        self.values.iter().skip(rank).map(|s| s * s).sum()
    }

    /// Keep the leading `rank` values.
    pub fn truncate(&self, rank: usize) -> Self {
        Self {
            values: self.values[..rank.min(self.values.len())].to_vec(),
        }
    }
}
