use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::current_density;
use crate::error::{Error, Result};
use crate::formal_powers::{Coeff, DEFAULT_TOL};
use crate::pseudoanalytic::Point;
use crate::quaternion_ohm::{ExpSigmaModel, Point3};
use crate::special::{decay_ratio, decay_ratio2};

/// Default step of the fourth-order derivative stencils used on potentials.
pub const FD_STEP: f64 = 1e-3;

/// Factor by which homogeneous boundary potentials are usually magnified
/// when drawn next to the exponential ones. Never applied to stored values.
pub const HOMOGENEOUS_DISPLAY_SCALE: f64 = 20.0;

// Below this rate the literal potentials lose too much to cancellation
// against their constant parts.
const LITERAL_RATE_MIN: f64 = 1e-3;

/// `u` with `j = −σ grad u` for the currents of degree 0 and 1, written
/// exactly as the integrated formulas:
///
/// ```text
/// u^(0)(1) = e^{−2σ1x1} / (2σ1)
/// u^(0)(i) = e^{−2σ2x2} / (2σ2)
/// u^(1)(1) = (e^{−2σ1x1} + e^{−2σ2x2} − e^{−2σ1x1 − 2σ2x2}) / (4σ1σ2)
/// u^(1)(i) = x1/(2σ1) − x2/(2σ2) + e^{−2σ1x1}/(4σ1²) − e^{−2σ2x2}/(4σ2²)
/// ```
pub fn potential_literal(m: usize, coeff: Coeff, model: &ExpSigmaModel, at: Point) -> Result<f64> {
    let (s1, s2) = (model.sigma1, model.sigma2);
    let (x1, x2) = (at.x1, at.x2);
    let d1 = (-2.0 * s1 * x1).exp();
    let d2 = (-2.0 * s2 * x2).exp();
    let u = match (m, coeff) {
        (0, Coeff::One) => d1 / (2.0 * s1),
        (0, Coeff::I) => d2 / (2.0 * s2),
        (1, Coeff::One) => (d1 + d2 - d1 * d2) / (4.0 * s1 * s2),
        (1, Coeff::I) => {
            x1 / (2.0 * s1) - x2 / (2.0 * s2) + d1 / (4.0 * s1 * s1) - d2 / (4.0 * s2 * s2)
        }
        _ => return Err(Error::UnsupportedClosedForm { degree: m as u32 }),
    };
    if u.is_finite() {
        Ok(u)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// The same potentials with their rate-dependent constants removed, so that
/// they stay bounded and tend to the homogeneous potentials as the rates vanish.
pub fn potential_regularized(
    m: usize,
    coeff: Coeff,
    model: &ExpSigmaModel,
    at: Point,
) -> Result<f64> {
    let (s1, s2) = (model.sigma1, model.sigma2);
    let (x1, x2) = (at.x1, at.x2);
    let u = match (m, coeff) {
        (0, Coeff::One) => -decay_ratio(s1, x1),
        (0, Coeff::I) => -decay_ratio(s2, x2),
        (1, Coeff::One) => -decay_ratio(s1, x1) * decay_ratio(s2, x2),
        (1, Coeff::I) => decay_ratio2(s1, x1) - decay_ratio2(s2, x2),
        _ => return Err(Error::UnsupportedClosedForm { degree: m as u32 }),
    };
    if u.is_finite() {
        Ok(u)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// The potential of degree `m ≤ 1`. Uses the literal formula when every rate
/// it involves is at least `1e−3` in magnitude and the regularized one
/// otherwise; the two differ by a constant.
pub fn potential(m: usize, coeff: Coeff, model: &ExpSigmaModel, at: Point) -> Result<f64> {
    let rates: &[f64] = match (m, coeff) {
        (0, Coeff::One) => &[model.sigma1],
        (0, Coeff::I) => &[model.sigma2],
        _ => &[model.sigma1, model.sigma2],
    };
    if rates.iter().all(|r| r.abs() >= LITERAL_RATE_MIN) {
        potential_literal(m, coeff, model, at)
    } else {
        potential_regularized(m, coeff, model, at)
    }
}

/// Potentials of the homogeneous currents: `−x1`, `−x2`, `−x1x2`, `(x1² − x2²)/2`.
pub fn homogeneous_potential(m: usize, coeff: Coeff, at: Point) -> Result<f64> {
    let (x1, x2) = (at.x1, at.x2);
    match (m, coeff) {
        (0, Coeff::One) => Ok(-x1),
        (0, Coeff::I) => Ok(-x2),
        (1, Coeff::One) => Ok(-x1 * x2),
        (1, Coeff::I) => Ok(0.5 * (x1 * x1 - x2 * x2)),
        _ => Err(Error::UnsupportedClosedForm { degree: m as u32 }),
    }
}

// Fourth-order central first derivative.
fn d5(f: &dyn Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

fn gradient(u: &dyn Fn(Point) -> Result<f64>, at: Point, h: f64) -> Result<[f64; 2]> {
    Ok([
        d5(&|s| u(Point::new(s, at.x2)), at.x1, h)?,
        d5(&|s| u(Point::new(at.x1, s)), at.x2, h)?,
    ])
}

/// `max |j + σ grad u|` over both components, with the gradient from a
/// five-point stencil of step `h`.
pub fn gradient_consistency(
    m: usize,
    coeff: Coeff,
    model: &ExpSigmaModel,
    at: Point,
    h: f64,
) -> Result<f64> {
    let j = current_density(m, coeff, model, Point3::new(at.x1, at.x2, 0.0), DEFAULT_TOL)?;
    let sigma = model.conductivity(Point3::new(at.x1, at.x2, 0.0));
    let g = gradient(&|p| potential(m, coeff, model, p), at, h)?;
    Ok((j.j1 + sigma * g[0]).abs().max((j.j2 + sigma * g[1]).abs()))
}

/// `|div(σ grad u)|` with both derivatives taken by five-point stencils.
pub fn flux_divergence(
    m: usize,
    coeff: Coeff,
    model: &ExpSigmaModel,
    at: Point,
    h: f64,
) -> Result<f64> {
    let flux = |p: Point, axis: usize| -> Result<f64> {
        let g = gradient(&|q| potential(m, coeff, model, q), p, h)?;
        Ok(model.conductivity(Point3::new(p.x1, p.x2, 0.0)) * g[axis])
    };
    let div = d5(&|s| flux(Point::new(s, at.x2), 0), at.x1, h)?
        + d5(&|s| flux(Point::new(at.x1, s), 1), at.x2, h)?;
    Ok(div.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PotentialSample {
    pub theta: f64,
    pub u: f64,
    /// The homogeneous potential of the same degree and coefficient.
    pub u_h: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryTrace {
    pub samples: Vec<PotentialSample>,
    /// Suggested magnification of `u_h` for plotting.
    pub homogeneous_display_scale: f64,
}

/// Potentials on the unit circle `(x1, x2) = (cos θ, sin θ)` at
/// `θ = 2πk / n_theta`.
pub fn boundary_trace(
    m: usize,
    coeff: Coeff,
    model: &ExpSigmaModel,
    n_theta: usize,
) -> Result<BoundaryTrace> {
    if n_theta < 3 {
        return Err(Error::invalid("boundary traces need at least 3 angles"));
    }
    let samples = (0..n_theta)
        .map(|k| {
            let theta = TAU * k as f64 / n_theta as f64;
            let at = Point::new(theta.cos(), theta.sin());
            Ok(PotentialSample {
                theta,
                u: potential(m, coeff, model, at)?,
                u_h: homogeneous_potential(m, coeff, at)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(BoundaryTrace {
        samples,
        homogeneous_display_scale: HOMOGENEOUS_DISPLAY_SCALE,
    })
}
