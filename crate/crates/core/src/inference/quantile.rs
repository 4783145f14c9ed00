use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{GasError, Result};

/// Standard normal quantile. `p = 0` and `p = 1` map to the infinities.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(GasError::Domain(format!("probability {p} outside [0, 1]")));
    }
    if p == 0.0 {
        return Ok(f64::NEG_INFINITY);
    }
    if p == 1.0 {
        return Ok(f64::INFINITY);
    }
    Ok(Normal::standard().inverse_cdf(p))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Normal CDF by composite Simpson integration of the density.
    fn cdf_oracle(x: f64) -> f64 {
        let m = 200_000;
        let (a, b) = (0.0, x);
        let h = (b - a) / m as f64;
        let f = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let mut s = f(a) + f(b);
        for i in 1..m {
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        0.5 + s * h / 3.0
    }

    #[test]
    fn reference_quantiles() {
        assert!((normal_quantile(0.975).unwrap() - 1.959_963_984_540_054).abs() < 1e-12);
        assert!((normal_quantile(0.9995).unwrap() - 3.290_526_731_491_926).abs() < 1e-12);
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert_eq!(normal_quantile(1.0).unwrap(), f64::INFINITY);
        assert!(normal_quantile(1.5).is_err());
    }

    #[test]
    fn inverts_the_cdf() {
        for &p in &[1e-10, 1e-4, 0.01, 0.2, 0.5, 0.7, 0.95, 0.999, 1.0 - 1e-9] {
            let x = normal_quantile(p).unwrap();
            let back = cdf_oracle(x);
            assert!((back - p).abs() < 1e-9 * p.min(1.0 - p).max(1e-3), "p={p} back={back}");
        }
    }

    #[test]
    fn antisymmetric() {
        for &p in &[0.001, 0.1, 0.3, 0.45] {
            assert!((normal_quantile(p).unwrap() + normal_quantile(1.0 - p).unwrap()).abs() < 1e-12);
        }
    }
}
