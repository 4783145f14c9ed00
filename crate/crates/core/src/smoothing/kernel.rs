use std::fmt;
use std::str::FromStr;

use crate::error::{GasError, Result};
use crate::scalar::{lit, Real};

/// Supported smoothing kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum KernelKind {
    #[default]
    Epanechnikov,
}

impl FromStr for KernelKind {
    type Err = GasError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "epanechnikov" | "epa" => Ok(KernelKind::Epanechnikov),
            other => Err(GasError::Config(format!("unsupported kernel `{other}`"))),
        }
    }
}

impl fmt::Display for KernelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelKind::Epanechnikov => f.write_str("epanechnikov"),
        }
    }
}

/// A second-order kernel on `[-1, 1]` with its moment constants.
///
/// `c1 = mu2 / 2` and `c2 = R(K)` are the constants entering the
/// AMISE-optimal local linear bandwidth `h = (V / (4 n B))^{1/5}` with
/// `B = c1^2 * E[sigma''^2]` and `V = c2 * Var / f`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec<T = f64> {
    kind: KernelKind,
    mu2: T,
    rk: T,
}

impl<T: Real> KernelSpec<T> {
    pub fn new(kind: KernelKind) -> Self {
        match kind {
            // mu2 = int u^2 * 0.75(1-u^2) du = 1/5, R(K) = int (0.75(1-u^2))^2 du = 3/5
            KernelKind::Epanechnikov => Self { kind, mu2: lit(1.0 / 5.0), rk: lit(3.0 / 5.0) },
        }
    }

    pub fn epanechnikov() -> Self {
        Self::new(KernelKind::Epanechnikov)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    /// Closed support `[-1, 1]`.
    pub fn support(&self) -> (T, T) {
        (-T::one(), T::one())
    }

    pub fn mu2(&self) -> T {
        self.mu2
    }

    pub fn roughness(&self) -> T {
        self.rk
    }

    pub fn c1(&self) -> T {
        self.mu2 / lit(2.0)
    }

    pub fn c2(&self) -> T {
        self.rk
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        match self.kind {
            KernelKind::Epanechnikov => {
                if u.abs() <= T::one() {
                    lit::<T>(0.75) * (T::one() - u * u)
                } else {
                    T::zero()
                }
            }
        }
    }
}

impl<T: Real> Default for KernelSpec<T> {
    fn default() -> Self {
        Self::epanechnikov()
    }
}

/// Epanechnikov kernel `0.75 (1 - u^2)` on `|u| <= 1`, zero elsewhere.
#[inline]
pub fn kernel_eval<T: Real>(u: T) -> T {
    KernelSpec::<T>::epanechnikov().eval(u)
}

/// Bias and variance constants `(c1, c2)` of a kernel.
pub fn kernel_constants<T: Real>(spec: &KernelSpec<T>) -> (T, T) {
    (spec.c1(), spec.c2())
}
