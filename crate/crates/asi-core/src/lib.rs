//! Low-rank activation compression for memory-efficient training.
//!
//! During backpropagation every trained convolutional layer must keep its
//! input activation around until the backward pass consumes it for the
//! weight gradient. This crate shrinks that storage by keeping activations
//! in Tucker form (a small core tensor plus one orthonormal factor matrix
//! per mode) and computing the weight gradient directly from the factors.
//!
//! The pieces:
//!
//! * [`tensor`] — dense 4-mode tensors, unfolding/folding, mode products,
//!   modified Gram-Schmidt, and an exact truncated SVD used as the oracle.
//! * [`decomposition`] — HOSVD truncation (by explained variance or fixed
//!   ranks) and the fast path: a single warm-started subspace-iteration
//!   step per mode ([`decomposition::asi_compress`]).
//! * [`nn`] — minimal convolution / fully-connected layers with exact dense
//!   backward, the factored weight-gradient contraction, and SGD. Every
//!   multiply-accumulate can be counted for cost-model validation.
//! * [`model`] — a small sequential CNN built from those layers.
//! * [`rank_selection`] — offline calibration of per-layer gradient
//!   perplexity across explained-variance thresholds and the budgeted
//!   backtracking solver that picks one rank vector per layer.
//! * [`cost`] — closed-form FLOP and memory accounting for the vanilla,
//!   per-step-HOSVD, and subspace-iteration training regimes.

pub mod cost;
pub mod decomposition;
pub mod error;
pub mod model;
pub mod nn;
pub mod rank_selection;
pub mod seed;
pub mod tensor;

pub use error::{Error, Result};
