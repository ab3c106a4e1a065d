//! Current densities, electric potentials and current streamlines for the
//! planar conductivity problem at `x3 = 0`.
//!
//! Every solution `W` of the reduced Vekua equation yields a current
//! `j = −σ grad u`. For a separable conductivity `σ = s1(x1)·s2(x2)` it is
//! `j = √σ (Re W, Im W, 0)`, where `W` is pseudoanalytic for the weight
//! `p = √(s2 / s1)`. For `σ = e^{2σ1x1 + 2σ2x2 + 2σ3x3}` this is
//! `j = e^{σ1x1 + σ2x2 + 2σ3x3} (Re W, Im W, 0)`.

mod potential;
mod streamline;
mod svg;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formal_powers::{
    closed_form_power, formal_power, Coeff, FormalPowerSpec, GeneratingSequence, Profile,
    SeparableP,
};
use crate::pseudoanalytic::Point;
use crate::quaternion_ohm::{ExpSigmaModel, Point3};

pub use potential::{
    boundary_trace, flux_divergence, gradient_consistency, homogeneous_potential, potential,
    potential_literal, potential_regularized, BoundaryTrace, PotentialSample, FD_STEP,
    HOMOGENEOUS_DISPLAY_SCALE,
};
pub use streamline::{
    ring_seeds, trace_both_ways, trace_streamline, Integrator, StepRule, Streamline, Termination,
    TraceConfig, STAGNATION,
};
pub use svg::{render_svg, SvgStyle};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct CurrentVector {
    pub j1: f64,
    pub j2: f64,
    pub j3: f64,
}

impl CurrentVector {
    pub const fn planar(j1: f64, j2: f64) -> Self {
        CurrentVector { j1, j2, j3: 0.0 }
    }

    pub fn norm(&self) -> f64 {
        (self.j1 * self.j1 + self.j2 * self.j2 + self.j3 * self.j3).sqrt()
    }

    pub fn max_abs_diff(&self, other: &CurrentVector) -> f64 {
        (self.j1 - other.j1)
            .abs()
            .max((self.j2 - other.j2).abs())
            .max((self.j3 - other.j3).abs())
    }
}

/// Currents of the homogeneous medium `σ = 1` built from `ζ^m` and `i ζ^m`.
pub fn homogeneous_current(m: usize, coeff: Coeff, at: Point) -> Result<CurrentVector> {
    let (x1, x2) = (at.x1, at.x2);
    let j = match (m, coeff) {
        (0, Coeff::One) => CurrentVector::planar(1.0, 0.0),
        (0, Coeff::I) => CurrentVector::planar(0.0, 1.0),
        (1, Coeff::One) => CurrentVector::planar(x2, x1),
        (1, Coeff::I) => CurrentVector::planar(-x1, x2),
        (2, Coeff::One) => CurrentVector::planar(x2 * x2 - x1 * x1, 2.0 * x1 * x2),
        (2, Coeff::I) => CurrentVector::planar(-2.0 * x1 * x2, x2 * x2 - x1 * x1),
        _ => return Err(Error::UnsupportedClosedForm { degree: m as u32 }),
    };
    Ok(j)
}

/// Whether [`current_density`] falls back to numeric formal powers.
pub fn current_is_numeric(m: usize) -> bool {
    m > 2
}

/// `j^(m)` generated by `Z^(m)(coeff, 0; ζ)` in the exponential medium.
/// Degrees above 2 use numeric formal powers with tolerance `tol`.
pub fn current_density(
    m: usize,
    coeff: Coeff,
    model: &ExpSigmaModel,
    at: Point3,
    tol: f64,
) -> Result<CurrentVector> {
    let plane = at.plane();
    let z = if current_is_numeric(m) {
        let seq = GeneratingSequence::exponential(model.sigma1, model.sigma2);
        formal_power(&seq, &FormalPowerSpec::at_origin(m, coeff), plane, tol)?
    } else {
        closed_form_power(m, coeff, model.sigma1, model.sigma2, plane)?
    };
    let scale = (model.sigma1 * at.x1 + model.sigma2 * at.x2 + 2.0 * model.sigma3 * at.x3).exp();
    let j = CurrentVector::planar(scale * z.re, scale * z.im);
    if j.j1.is_finite() && j.j2.is_finite() {
        Ok(j)
    } else {
        Err(Error::NonFinite { at: plane })
    }
}

type Profile1d = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A conductivity in the plane `x3 = 0`.
#[derive(Clone, Debug)]
pub enum Medium {
    Exponential(ExpSigmaModel),
    /// `σ = s1(x1)·s2(x2)` with positive factors.
    Separable {
        s1: Profile,
        s2: Profile,
    },
}

impl Medium {
    pub fn homogeneous() -> Self {
        Medium::Exponential(ExpSigmaModel::default())
    }

    pub fn conductivity(&self, at: Point) -> f64 {
        match self {
            Medium::Exponential(m) => m.conductivity(Point3::new(at.x1, at.x2, 0.0)),
            Medium::Separable { s1, s2 } => s1.value(at.x1) * s2.value(at.x2),
        }
    }

    /// The generating sequence of the weight `p = √(s2 / s1)`.
    pub fn sequence(&self) -> GeneratingSequence {
        match self {
            Medium::Exponential(m) => GeneratingSequence::exponential(m.sigma1, m.sigma2),
            Medium::Separable { s1, s2 } => {
                let root = |profile: &Profile, power: f64| -> Profile {
                    let value: Profile1d = {
                        let p = profile.clone();
                        Arc::new(move |s| p.value(s).powf(power))
                    };
                    let log_derivative: Profile1d = {
                        let p = profile.clone();
                        Arc::new(move |s| power * p.log_derivative(s))
                    };
                    Profile::Custom {
                        value,
                        log_derivative: Some(log_derivative),
                    }
                };
                GeneratingSequence::new(SeparableP::new(root(s1, -0.5), root(s2, 0.5)))
            }
        }
    }

    /// `j` generated by `Z^(m)(coeff, 0; ζ)`. Closed forms are used for the
    /// exponential medium up to degree 2, numeric formal powers otherwise.
    pub fn current(&self, m: usize, coeff: Coeff, at: Point, tol: f64) -> Result<CurrentVector> {
        match self {
            Medium::Exponential(model) => {
                current_density(m, coeff, model, Point3::new(at.x1, at.x2, 0.0), tol)
            }
            Medium::Separable { .. } => {
                let z = formal_power(
                    &self.sequence(),
                    &FormalPowerSpec::at_origin(m, coeff),
                    at,
                    tol,
                )?;
                let root = self.conductivity(at).sqrt();
                let j = CurrentVector::planar(root * z.re, root * z.im);
                if j.j1.is_finite() && j.j2.is_finite() {
                    Ok(j)
                } else {
                    Err(Error::NonFinite { at })
                }
            }
        }
    }

    pub fn uses_closed_form(&self, m: usize) -> bool {
        matches!(self, Medium::Exponential(_)) && !current_is_numeric(m)
    }
}
