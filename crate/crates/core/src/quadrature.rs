//! Composite 16-point Gauss-Legendre quadrature with recursive bisection, for
//! small vectors of complex integrands.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const ORDER: usize = 16;
pub const MAX_DEPTH: u32 = 20;

// Two-level differences below this fraction of the whole integral are roundoff.
const ROUNDOFF: f64 = 1e-14;

/// Nodes and weights on [-1, 1].
#[derive(Debug)]
pub struct GaussLegendre {
    pub nodes: [f64; ORDER],
    pub weights: [f64; ORDER],
}

pub fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(build_rule)
}

fn build_rule() -> GaussLegendre {
    let n = ORDER;
    let mut nodes = [0.0; ORDER];
    let mut weights = [0.0; ORDER];
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre(n, x);
        if d != 0.0 {
            dp = d;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    GaussLegendre { nodes, weights }
}

// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn panel<const N: usize, F>(f: &F, a: f64, b: f64) -> Result<[Complex64; N]>
where
    F: Fn(f64) -> Result<[Complex64; N]>,
{
    let rule = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = [Complex64::new(0.0, 0.0); N];
    for (x, w) in rule.nodes.iter().zip(rule.weights.iter()) {
        let v = f(mid + half * x)?;
        for k in 0..N {
            acc[k] += v[k] * (w * half);
        }
    }
    Ok(acc)
}

#[derive(Default)]
struct Shortfall {
    failed: bool,
    estimate: f64,
}

/// Integrates `f` over `[a, b]`, bisecting until the one-panel and two-panel
/// estimates of every component differ by less than `tol`.
pub fn integrate<const N: usize, F>(f: F, a: f64, b: f64, tol: f64) -> Result<[Complex64; N]>
where
    F: Fn(f64) -> Result<[Complex64; N]>,
{
    if a == b {
        return Ok([Complex64::new(0.0, 0.0); N]);
    }
    let whole = panel(&f, a, b)?;
    let mut shortfall = Shortfall::default();
    let scale = whole.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let floor = ROUNDOFF * scale;
    let value = refine(&f, a, b, whole, tol, floor, 0, &mut shortfall)?;
    if shortfall.failed {
        return Err(Error::Quadrature {
            estimate: shortfall.estimate,
            tol,
        });
    }
    Ok(value)
}

#[allow(clippy::too_many_arguments)]
fn refine<const N: usize, F>(
    f: &F,
    a: f64,
    b: f64,
    whole: [Complex64; N],
    tol: f64,
    floor: f64,
    depth: u32,
    shortfall: &mut Shortfall,
) -> Result<[Complex64; N]>
where
    F: Fn(f64) -> Result<[Complex64; N]>,
{
    let mid = 0.5 * (a + b);
    let left = panel(f, a, mid)?;
    let right = panel(f, mid, b)?;
    let mut sum = [Complex64::new(0.0, 0.0); N];
    let mut err: f64 = 0.0;
    for k in 0..N {
        sum[k] = left[k] + right[k];
        err = err.max((sum[k] - whole[k]).norm());
    }
    if err < tol || err <= floor {
        return Ok(sum);
    }
    if depth >= MAX_DEPTH {
        shortfall.failed = true;
        shortfall.estimate += err;
        return Ok(sum);
    }
    let l = refine(f, a, mid, left, 0.5 * tol, floor, depth + 1, shortfall)?;
    let r = refine(f, mid, b, right, 0.5 * tol, floor, depth + 1, shortfall)?;
    let mut out = [Complex64::new(0.0, 0.0); N];
    for k in 0..N {
        out[k] = l[k] + r[k];
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(f: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<[Complex64; 1]> {
        move |x| Ok([Complex64::new(f(x), 0.0)])
    }

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre();
        let total: f64 = rule.weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // degree 30 is the highest exactly integrated degree
        let moment: f64 = rule
            .nodes
            .iter()
            .zip(rule.weights.iter())
            .map(|(x, w)| w * x.powi(30))
            .sum();
        assert!((moment - 2.0 / 31.0).abs() < 1e-14);
    }

    #[test]
    fn entire_integrand() {
        let v = integrate(real(f64::exp), 0.0, 3.0, 1e-12).unwrap();
        assert!((v[0].re - (3.0f64.exp() - 1.0)).abs() < 1e-12);
    }

    #[test]
    fn bisection_resolves_a_kink() {
        let v = integrate(real(|x: f64| x.abs()), -1.0, 2.0, 1e-10).unwrap();
        assert!((v[0].re - 2.5).abs() < 1e-9);
    }

    #[test]
    fn reports_non_convergence() {
        // integrable singularity the rule cannot resolve to 1e-15
        let err = integrate(real(|x: f64| 1.0 / x.abs().sqrt()), -1.0, 1.0, 1e-15).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
