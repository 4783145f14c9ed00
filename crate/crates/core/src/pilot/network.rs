use std::fmt::Write as _;

use crate::error::{GasError, Result};
use crate::scalar::{lit, Real};

/// Logistic sigmoid, evaluated without overflow for large `|z|`.
#[inline]
pub fn sigmoid<T: Real>(z: T) -> T {
    if z >= T::zero() {
        T::one() / (T::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (T::one() + e)
    }
}

/// One hidden unit `c * psi(a * x + b)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HiddenNode<T = f64> {
    /// Output weight.
    pub c: T,
    /// Input weight.
    pub a: T,
    /// Input bias.
    pub b: T,
}

/// Fitted pilot network in the original units of the regressor.
///
/// The fit runs on a standardized regressor; `input_mean` and `input_scale`
/// record that transform, which is already folded into each node's `a` and
/// `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotNetwork<T = f64> {
    pub bias: T,
    pub nodes: Vec<HiddenNode<T>>,
    pub input_mean: T,
    pub input_scale: T,
    pub weight_budget: T,
}

impl<T: Real> PilotNetwork<T> {
    pub fn new(bias: T, nodes: Vec<HiddenNode<T>>, weight_budget: T) -> Result<Self> {
        let net = Self { bias, nodes, input_mean: T::zero(), input_scale: T::one(), weight_budget };
        net.validate()?;
        Ok(net)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(GasError::Config("pilot network needs at least one hidden node".into()));
        }
        let finite = self.bias.is_finite()
            && self.nodes.iter().all(|n| n.a.is_finite() && n.b.is_finite() && n.c.is_finite());
        if !finite {
            return Err(GasError::InvalidInput("pilot network has non-finite weights".into()));
        }
        if !(self.weight_budget > T::zero()) {
            return Err(GasError::Config("weight budget must be positive".into()));
        }
        if self.output_weight_norm() > self.weight_budget * lit(1.0 + 1e-12) {
            return Err(GasError::InvalidInput(format!(
                "output weights sum to {} which exceeds the budget {}",
                self.output_weight_norm(),
                self.weight_budget
            )));
        }
        Ok(())
    }

    pub fn hidden_count(&self) -> usize {
        self.nodes.len()
    }

    /// `sum_k |c_k|`.
    pub fn output_weight_norm(&self) -> T {
        self.nodes.iter().fold(T::zero(), |s, n| s + n.c.abs())
    }

    /// Number of free parameters, `3 d + 1`.
    pub fn parameter_count(&self) -> usize {
        3 * self.nodes.len() + 1
    }

    #[inline]
    pub fn eval(&self, x: T) -> T {
        self.nodes.iter().fold(self.bias, |s, n| s + n.c * sigmoid(n.a * x + n.b))
    }

    pub fn first_derivative(&self, x: T) -> T {
        self.nodes.iter().fold(T::zero(), |s, n| {
            let p = sigmoid(n.a * x + n.b);
            s + n.c * n.a * p * (T::one() - p)
        })
    }

    /// Analytic `q''(x) = sum_k c_k a_k^2 psi''(a_k x + b_k)` with
    /// `psi'' = psi (1 - psi) (1 - 2 psi)`.
    #[inline]
    pub fn second_derivative(&self, x: T) -> T {
        let two: T = lit(2.0);
        self.nodes.iter().fold(T::zero(), |s, n| {
            let p = sigmoid(n.a * x + n.b);
            s + n.c * n.a * n.a * p * (T::one() - p) * (T::one() - two * p)
        })
    }

    /// Limit of `q(x)` as `x -> +inf`.
    pub fn upper_limit(&self) -> T {
        self.nodes.iter().fold(self.bias, |s, n| {
            if n.a > T::zero() {
                s + n.c
            } else if n.a == T::zero() {
                s + n.c * sigmoid(n.b)
            } else {
                s
            }
        })
    }

    /// Rescales output weights so that `sum |c_k| <= budget`.
    pub(crate) fn enforce_budget(&mut self) -> bool {
        let norm = self.output_weight_norm();
        if norm > self.weight_budget {
            let f = self.weight_budget / norm;
            for n in &mut self.nodes {
                n.c *= f;
            }
            true
        } else {
            false
        }
    }

    pub fn to_f64(&self) -> PilotNetwork<f64> {
        let w = |v: T| v.to_f64().unwrap_or(f64::NAN);
        PilotNetwork {
            bias: w(self.bias),
            nodes: self.nodes.iter().map(|n| HiddenNode { c: w(n.c), a: w(n.a), b: w(n.b) }).collect(),
            input_mean: w(self.input_mean),
            input_scale: w(self.input_scale),
            weight_budget: w(self.weight_budget),
        }
    }

    /// Flat `key=value` text, one weight per line.
    pub fn to_kv_string(&self) -> String {
        let mut s = String::from("# gasvol pilot network\n");
        let _ = writeln!(s, "d={}", self.nodes.len());
        let _ = writeln!(s, "input_mean={}", self.input_mean);
        let _ = writeln!(s, "input_scale={}", self.input_scale);
        let _ = writeln!(s, "weight_budget={}", self.weight_budget);
        let _ = writeln!(s, "bias={}", self.bias);
        for (k, n) in self.nodes.iter().enumerate() {
            let _ = writeln!(s, "node{}.c={}", k + 1, n.c);
            let _ = writeln!(s, "node{}.a={}", k + 1, n.a);
            let _ = writeln!(s, "node{}.b={}", k + 1, n.b);
        }
        s
    }

    pub fn from_kv_str(text: &str) -> Result<Self> {
        let mut map = std::collections::HashMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| GasError::Parse {
                line: i as u64 + 1,
                msg: format!("expected key=value, got `{line}`"),
            })?;
            map.insert(k.trim().to_string(), (i as u64 + 1, v.trim().to_string()));
        }
        let get = |key: &str| -> Result<T> {
            let (line, v) = map
                .get(key)
                .ok_or_else(|| GasError::Parse { line: 0, msg: format!("missing key `{key}`") })?;
            v.parse::<T>()
                .map_err(|_| GasError::Parse { line: *line, msg: format!("bad number `{v}` for `{key}`") })
        };
        let d: usize = map
            .get("d")
            .ok_or_else(|| GasError::Parse { line: 0, msg: "missing key `d`".into() })?
            .1
            .parse()
            .map_err(|_| GasError::Parse { line: 0, msg: "bad hidden count".into() })?;
        let nodes = (1..=d)
            .map(|k| {
                Ok(HiddenNode {
                    c: get(&format!("node{k}.c"))?,
                    a: get(&format!("node{k}.a"))?,
                    b: get(&format!("node{k}.b"))?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let net = Self {
            bias: get("bias")?,
            nodes,
            input_mean: get("input_mean")?,
            input_scale: get("input_scale")?,
            weight_budget: get("weight_budget")?,
        };
        net.validate()?;
        Ok(net)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn net(nodes: Vec<(f64, f64, f64)>, bias: f64) -> PilotNetwork<f64> {
        PilotNetwork::new(
            bias,
            nodes.into_iter().map(|(c, a, b)| HiddenNode { c, a, b }).collect(),
            1e3,
        )
        .unwrap()
    }

    #[test]
    fn zero_output_weights_give_bias() {
        let q = net(vec![(0.0, 1.3, -0.2), (0.0, -2.0, 0.5)], 0.7);
        for &x in &[-5.0, 0.0, 3.3] {
            assert_eq!(q.eval(x), 0.7);
            assert_eq!(q.second_derivative(x), 0.0);
        }
    }

    #[test]
    fn single_node_at_origin() {
        let q = net(vec![(2.0, 1.0, 0.0)], 0.25);
        assert!((q.eval(0.0) - 1.25).abs() < 1e-15);
        let q1 = net(vec![(1.0, 1.0, 0.0)], 0.0);
        assert_eq!(q1.second_derivative(0.0), 0.0);
    }

    #[test]
    fn saturation_limit() {
        let q = net(vec![(2.0, 1.5, 0.0), (-0.5, -3.0, 1.0), (0.3, 0.8, -2.0)], 0.1);
        assert!((q.eval(1e4) - q.upper_limit()).abs() < 1e-12);
        assert!((q.upper_limit() - (0.1 + 2.0 + 0.3)).abs() < 1e-15);
    }

    #[test]
    fn sigmoid_is_stable() {
        assert_eq!(sigmoid(800.0_f64), 1.0);
        assert_eq!(sigmoid(-800.0_f64), 0.0);
        assert!((sigmoid(0.0_f64) - 0.5).abs() < 1e-16);
    }

    #[test]
    fn budget_violation_rejected() {
        let r = PilotNetwork::new(0.0, vec![HiddenNode { c: 3.0, a: 1.0, b: 0.0 }], 2.0);
        assert!(r.is_err());
    }

    #[test]
    fn kv_round_trip_is_exact() {
        let mut q = net(vec![(0.123456789012345, -1.75, 0.3), (2.5e-7, 4.0, -1.0)], 0.1 + 0.2);
        q.input_mean = -0.012;
        q.input_scale = 1.0 / 3.0;
        let text = q.to_kv_string();
        let back = PilotNetwork::<f64>::from_kv_str(&text).unwrap();
        assert_eq!(q, back);
    }

    #[test]
    fn kv_errors_name_lines() {
        let bad = "d=1\nbias=0\nnode1.c=zz\nnode1.a=1\nnode1.b=0\ninput_mean=0\ninput_scale=1\nweight_budget=10\n";
        match PilotNetwork::<f64>::from_kv_str(bad) {
            Err(GasError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(PilotNetwork::<f64>::from_kv_str("nonsense").is_err());
    }

    proptest! {
        #[test]
        fn second_derivative_matches_finite_differences(
            params in proptest::collection::vec((-3.0..3.0f64, -4.0..4.0f64, -3.0..3.0f64), 1..5),
            x in -3.0..3.0f64,
        ) {
            let q = net(params, 0.2);
            let h = 1e-4;
            let fd = (q.eval(x + h) - 2.0 * q.eval(x) + q.eval(x - h)) / (h * h);
            let an = q.second_derivative(x);
            let scale = q.nodes.iter().map(|n| (n.c * n.a * n.a).abs()).sum::<f64>().max(1.0);
            prop_assert!((fd - an).abs() <= 1e-5 * scale, "fd {} an {}", fd, an);
        }
    }
}
