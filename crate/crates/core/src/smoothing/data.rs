use std::cmp::Ordering;
use std::ops::Range;

use crate::error::{GasError, Result};
use crate::scalar::{count, Real};

/// Shortest series accepted by any estimation call.
pub const MIN_SERIES_LEN: usize = 30;

/// An ordered series of returns `X_1, ..., X_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReturnSeries<T = f64> {
    values: Vec<T>,
}

impl<T: Real> ReturnSeries<T> {
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < MIN_SERIES_LEN {
            return Err(GasError::InvalidInput(format!(
                "return series has {} values, need at least {MIN_SERIES_LEN}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(GasError::InvalidInput(format!("return at position {i} is not finite")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn mean(&self) -> T {
        self.values.iter().fold(T::zero(), |a, &v| a + v) / count(self.len())
    }

    /// Sample variance with the `n - 1` divisor.
    pub fn variance(&self) -> T {
        let m = self.mean();
        let ss = self.values.iter().fold(T::zero(), |a, &v| a + (v - m) * (v - m));
        ss / count(self.len() - 1)
    }

    /// Lagged design `(X_{t-1}, X_t^2)`, `t = 2..n`.
    pub fn design_pairs(&self) -> DesignPairs<T> {
        let regressor = self.values[..self.len() - 1].to_vec();
        let response = self.values[1..].iter().map(|&v| v * v).collect();
        DesignPairs::from_sorted_parts(regressor, response)
    }
}

/// Regression design `(X_{t-1}, X_t^2)` for the volatility smoother.
///
/// Pairs are held sorted by regressor (ties broken by response), which makes
/// every estimator built on them exactly invariant to the order in which the
/// pairs were supplied and lets windows be located by binary search.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignPairs<T = f64> {
    regressor: Vec<T>,
    response: Vec<T>,
}

impl<T: Real> DesignPairs<T> {
    /// Builds a design from explicit pairs; responses must be finite and
    /// non-negative (they are squared returns).
    pub fn new(regressor: Vec<T>, response: Vec<T>) -> Result<Self> {
        if regressor.len() != response.len() {
            return Err(GasError::InvalidInput(format!(
                "regressor has {} values but response has {}",
                regressor.len(),
                response.len()
            )));
        }
        if regressor.is_empty() {
            return Err(GasError::InvalidInput("empty design".into()));
        }
        if regressor.iter().any(|v| !v.is_finite()) || response.iter().any(|v| !v.is_finite()) {
            return Err(GasError::InvalidInput("design contains non-finite values".into()));
        }
        if response.iter().any(|&v| v < T::zero()) {
            return Err(GasError::InvalidInput("design responses must be non-negative".into()));
        }
        Ok(Self::from_sorted_parts(regressor, response))
    }

    fn from_sorted_parts(regressor: Vec<T>, response: Vec<T>) -> Self {
        let mut idx: Vec<usize> = (0..regressor.len()).collect();
        idx.sort_by(|&i, &j| {
            cmp(regressor[i], regressor[j]).then_with(|| cmp(response[i], response[j]))
        });
        Self {
            regressor: idx.iter().map(|&i| regressor[i]).collect(),
            response: idx.iter().map(|&i| response[i]).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.regressor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regressor.is_empty()
    }

    /// Regressor values in ascending order.
    pub fn regressor(&self) -> &[T] {
        &self.regressor
    }

    /// Responses aligned with [`DesignPairs::regressor`].
    pub fn response(&self) -> &[T] {
        &self.response
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.regressor.iter().copied().zip(self.response.iter().copied())
    }

    pub fn min_regressor(&self) -> T {
        self.regressor[0]
    }

    pub fn max_regressor(&self) -> T {
        self.regressor[self.len() - 1]
    }

    /// Index range of pairs whose regressor lies in `[lo, hi]`.
    pub fn window(&self, lo: T, hi: T) -> Range<usize> {
        let start = self.regressor.partition_point(|&v| v < lo);
        let end = self.regressor.partition_point(|&v| v <= hi);
        start..end.max(start)
    }

    pub fn count_in(&self, lo: T, hi: T) -> usize {
        self.window(lo, hi).len()
    }

    /// Linear-interpolation quantile of the regressor, `p` in `[0, 1]`.
    pub fn regressor_quantile(&self, p: f64) -> T {
        let p = p.clamp(0.0, 1.0);
        let pos = p * (self.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac: T = T::from_f64(pos - lo as f64).unwrap_or_else(T::zero);
        self.regressor[lo] + (self.regressor[hi] - self.regressor[lo]) * frac
    }

    /// Sample standard deviation of the regressor.
    pub fn regressor_std(&self) -> T {
        let n: T = count(self.len());
        let mean = self.regressor.iter().fold(T::zero(), |a, &v| a + v) / n;
        let ss = self.regressor.iter().fold(T::zero(), |a, &v| a + (v - mean) * (v - mean));
        (ss / count(self.len().saturating_sub(1).max(1))).sqrt()
    }
}

fn cmp<T: Real>(a: T, b: T) -> Ordering {
    a.partial_cmp(&b).unwrap_or(Ordering::Equal)
}
