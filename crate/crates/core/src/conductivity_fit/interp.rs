//! One-dimensional interpolants through `(x, y)` nodes.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Interp {
    Linear,
    /// Monotone piecewise cubic Hermite (Fritsch-Carlson slopes). Never
    /// overshoots the node values, so positive data stay positive.
    #[default]
    Pchip,
}

impl std::str::FromStr for Interp {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> crate::error::Result<Self> {
        match s {
            "linear" => Ok(Interp::Linear),
            "pchip" | "cubic" => Ok(Interp::Pchip),
            other => Err(crate::error::Error::invalid(format!(
                "unknown interpolation {other:?}"
            ))),
        }
    }
}

/// Interpolant over strictly increasing abscissae. Outside the node span
/// the end values are held constant.
#[derive(Debug, Clone, PartialEq)]
pub struct Interpolant {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slopes: Vec<f64>,
    kind: Interp,
}

impl Interpolant {
    /// `nodes` must hold at least two points with strictly increasing `x`.
    pub fn new(nodes: &[[f64; 2]], kind: Interp) -> Self {
        let xs: Vec<f64> = nodes.iter().map(|n| n[0]).collect();
        let ys: Vec<f64> = nodes.iter().map(|n| n[1]).collect();
        let slopes = match kind {
            Interp::Linear => Vec::new(),
            Interp::Pchip => pchip_slopes(&xs, &ys),
        };
        Interpolant {
            xs,
            ys,
            slopes,
            kind,
        }
    }

    fn locate(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0];
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1];
        }
        let k = self.locate(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        match self.kind {
            Interp::Linear => self.ys[k] + t * (self.ys[k + 1] - self.ys[k]),
            Interp::Pchip => {
                let (t2, t3) = (t * t, t * t * t);
                let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
                let h10 = t3 - 2.0 * t2 + t;
                let h01 = -2.0 * t3 + 3.0 * t2;
                let h11 = t3 - t2;
                h00 * self.ys[k]
                    + h10 * h * self.slopes[k]
                    + h01 * self.ys[k + 1]
                    + h11 * h * self.slopes[k + 1]
            }
        }
    }

    /// Derivative; zero outside the node span.
    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let k = self.locate(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        match self.kind {
            Interp::Linear => (self.ys[k + 1] - self.ys[k]) / h,
            Interp::Pchip => {
                let t2 = t * t;
                let d00 = (6.0 * t2 - 6.0 * t) / h;
                let d10 = 3.0 * t2 - 4.0 * t + 1.0;
                let d01 = (-6.0 * t2 + 6.0 * t) / h;
                let d11 = 3.0 * t2 - 2.0 * t;
                d00 * self.ys[k]
                    + d10 * self.slopes[k]
                    + d01 * self.ys[k + 1]
                    + d11 * self.slopes[k + 1]
            }
        }
    }

    pub fn span(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }
}

fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        if delta[k - 1] * delta[k] > 0.0 {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

// Three-point end slope, limited to keep the end interval monotone.
fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() || d0 == 0.0 {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nodes(f: impl Fn(f64) -> f64, xs: &[f64]) -> Vec<[f64; 2]> {
        xs.iter().map(|&x| [x, f(x)]).collect()
    }

    #[test]
    fn reproduces_nodes_exactly() {
        let data = nodes(|x| (2.0 * x).exp(), &[-1.0, -0.3, 0.0, 0.4, 1.0]);
        for kind in [Interp::Linear, Interp::Pchip] {
            let f = Interpolant::new(&data, kind);
            for n in &data {
                assert_eq!(f.eval(n[0]), n[1]);
            }
        }
    }

    #[test]
    fn clamps_outside_the_span() {
        let f = Interpolant::new(&[[0.0, 1.0], [1.0, 3.0]], Interp::Pchip);
        assert_eq!(f.eval(-5.0), 1.0);
        assert_eq!(f.eval(5.0), 3.0);
        assert_eq!(f.eval(0.5), 2.0);
        assert_eq!(f.derivative(7.0), 0.0);
    }

    #[test]
    fn pchip_does_not_overshoot() {
        let data = vec![
            [0.0, 1e-3],
            [1.0, 1e-3],
            [1.1, 5.0],
            [2.0, 5.0],
            [3.0, 1e-3],
        ];
        let f = Interpolant::new(&data, Interp::Pchip);
        for k in 0..=300 {
            let v = f.eval(k as f64 / 100.0);
            assert!((1e-3 - 1e-15..=5.0 + 1e-12).contains(&v), "{v}");
        }
    }

    #[test]
    fn cubic_accuracy_on_smooth_data() {
        let xs: Vec<f64> = (0..=20).map(|k| -1.0 + k as f64 / 10.0).collect();
        let f = Interpolant::new(&nodes(f64::exp, &xs), Interp::Pchip);
        assert!((f.eval(0.05) - 0.05f64.exp()).abs() < 1e-4);
        assert!((f.derivative(0.05) - 0.05f64.exp()).abs() < 1e-2);
    }

    #[test]
    fn parsing() {
        assert_eq!("linear".parse::<Interp>().unwrap(), Interp::Linear);
        assert_eq!("cubic".parse::<Interp>().unwrap(), Interp::Pchip);
        assert!("spline".parse::<Interp>().is_err());
    }
}
