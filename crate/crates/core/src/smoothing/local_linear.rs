use std::ops::Range;

use super::{DesignPairs, KernelSpec};
use crate::error::{GasError, Result};
use crate::scalar::{lit, wide, Real};

/// Minimum number of design points inside `[x - h, x + h]`.
pub const MIN_WINDOW_POINTS: usize = 5;
/// Factor applied to `h` each time a window is too sparse or singular.
pub const WINDOW_INFLATION: f64 = 1.2;
/// Maximum number of inflations before giving up.
pub const MAX_INFLATIONS: u32 = 25;
const DET_TOL: f64 = 1e-12;

/// Effective local linear weights at one evaluation point.
///
/// Only pairs in `range` (indices into the sorted design) can carry non-zero
/// weight; `weights[i]` belongs to pair `range.start + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalWeights<T = f64> {
    pub x: T,
    pub h: T,
    pub inflations: u32,
    pub range: Range<usize>,
    pub weights: Vec<T>,
}

impl<T: Real> LocalWeights<T> {
    /// Weights expanded to one entry per design pair.
    pub fn dense(&self, n: usize) -> Vec<T> {
        let mut out = vec![T::zero(); n];
        out[self.range.clone()].copy_from_slice(&self.weights);
        out
    }

    /// `sum_t W_t y_t` over the design responses.
    pub fn apply(&self, response: &[T]) -> T {
        self.weights
            .iter()
            .zip(&response[self.range.clone()])
            .fold(T::zero(), |acc, (&w, &y)| acc + w * y)
    }
}

/// Result of a local linear fit at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalFit<T = f64> {
    pub value: T,
    /// Bandwidth actually used, after any sparse-window inflation.
    pub h: T,
    pub inflations: u32,
    /// Pairs inside `[x - h, x + h]`.
    pub count: usize,
}

fn try_weights<T: Real>(
    pairs: &DesignPairs<T>,
    kernel: &KernelSpec<T>,
    x: T,
    h: T,
) -> Option<(Range<usize>, Vec<T>)> {
    let range = pairs.window(x - h, x + h);
    if range.len() < MIN_WINDOW_POINTS {
        return None;
    }
    let xs = &pairs.regressor()[range.clone()];
    let (mut s0, mut s1, mut s2) = (T::zero(), T::zero(), T::zero());
    let kv: Vec<T> = xs
        .iter()
        .map(|&xi| {
            let d = xi - x;
            let k = kernel.eval(d / h);
            s0 += k;
            s1 += k * d;
            s2 += k * d * d;
            k
        })
        .collect();
    let det = s0 * s2 - s1 * s1;
    let scale = s0 * s0 * h * h;
    if !(det > lit::<T>(DET_TOL) * scale) || !det.is_finite() {
        return None;
    }
    let weights = xs
        .iter()
        .zip(&kv)
        .map(|(&xi, &k)| k * (s2 - (xi - x) * s1) / det)
        .collect();
    Some((range, weights))
}

/// Effective kernel weights of the local linear estimator at `x`.
///
/// Sparse or numerically singular windows are widened by
/// [`WINDOW_INFLATION`] up to [`MAX_INFLATIONS`] times before failing.
pub fn effective_weights<T: Real>(
    pairs: &DesignPairs<T>,
    kernel: &KernelSpec<T>,
    x: T,
    h: T,
) -> Result<LocalWeights<T>> {
    if !(h > T::zero()) || !h.is_finite() {
        return Err(GasError::Estimation { x: wide(x), reason: format!("invalid bandwidth {h}") });
    }
    if !x.is_finite() {
        return Err(GasError::Estimation { x: wide(x), reason: "non-finite evaluation point".into() });
    }
    let mut h_cur = h;
    for inflations in 0..=MAX_INFLATIONS {
        if let Some((range, weights)) = try_weights(pairs, kernel, x, h_cur) {
            return Ok(LocalWeights { x, h: h_cur, inflations, range, weights });
        }
        h_cur *= lit(WINDOW_INFLATION);
    }
    Err(GasError::Estimation {
        x: wide(x),
        reason: format!(
            "local linear window is degenerate after {MAX_INFLATIONS} inflations of h = {h}"
        ),
    })
}

/// Local linear estimate `sum_t X_t^2 W_t(x)` of the volatility function.
pub fn lle_fit<T: Real>(
    pairs: &DesignPairs<T>,
    kernel: &KernelSpec<T>,
    x: T,
    h: T,
) -> Result<LocalFit<T>> {
    let w = effective_weights(pairs, kernel, x, h)?;
    Ok(LocalFit {
        value: w.apply(pairs.response()),
        h: w.h,
        inflations: w.inflations,
        count: w.range.len(),
    })
}
