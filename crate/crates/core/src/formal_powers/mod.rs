//! Generating sequences for separable weights and the formal powers they
//! produce.
//!
//! For a weight `p = p1(x1)·p2(x2)` the pairs
//!
//! ```text
//! even m:  (p1 p2,  i / (p1 p2))
//! odd m:   (p1 / p2,  i p2 / p1)
//! ```
//!
//! form a generating sequence of period 2, each pair a successor of the
//! previous one. Formal powers `Z_n^(m)(a, z0; ζ)` are built from it by
//! repeated (F,G)-integration, and behave like `a (ζ − z0)^m` near the center.

mod closed_form;
mod integral;
mod path;
mod powers;
mod taylor;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudoanalytic::{ComplexField, GeneratingPair, Point};

pub use closed_form::{closed_form_power, closed_form_power_termwise, ClosedFormField};
pub use integral::{fg_integral, fg_integral_with, path_independence_check, LoopIntegrals};
pub use path::Path;
pub use powers::{
    formal_power, formal_power_along, formal_power_zero, FormalPowerField, FormalPowerZero,
};
pub use taylor::{
    higher_bers_derivatives, taylor_coefficients, taylor_eval, TaylorFit, TaylorSeries,
};

/// Default quadrature tolerance for formal powers.
pub const DEFAULT_TOL: f64 = 1e-9;

type Profile1d = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// One factor of a separable weight, as a function of a single coordinate.
#[derive(Clone)]
pub enum Profile {
    /// `e^{rate·s}`.
    Exponential { rate: f64 },
    /// An arbitrary non-vanishing profile. Without an explicit logarithmic
    /// derivative one is taken by central differences.
    Custom {
        value: Profile1d,
        log_derivative: Option<Profile1d>,
    },
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Exponential { rate } => write!(f, "Exponential {{ rate: {rate} }}"),
            Profile::Custom { log_derivative, .. } => {
                write!(
                    f,
                    "Custom {{ exact_log_derivative: {} }}",
                    log_derivative.is_some()
                )
            }
        }
    }
}

impl Profile {
    pub fn custom(value: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile::Custom {
            value: Arc::new(value),
            log_derivative: None,
        }
    }

    pub fn custom_with_log_derivative(
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        log_derivative: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Profile::Custom {
            value: Arc::new(value),
            log_derivative: Some(Arc::new(log_derivative)),
        }
    }

    pub fn value(&self, s: f64) -> f64 {
        match self {
            Profile::Exponential { rate } => (rate * s).exp(),
            Profile::Custom { value, .. } => value(s),
        }
    }

    /// `(d/ds) ln|profile|`.
    pub fn log_derivative(&self, s: f64) -> f64 {
        match self {
            Profile::Exponential { rate } => *rate,
            Profile::Custom {
                log_derivative: Some(d),
                ..
            } => d(s),
            Profile::Custom { value, .. } => {
                let h = 1e-6 * s.abs().max(1.0);
                let h = (s + h) - s;
                ((value(s + h).abs()).ln() - (value(s - h).abs()).ln()) / (2.0 * h)
            }
        }
    }

    pub fn rate(&self) -> Option<f64> {
        match self {
            Profile::Exponential { rate } => Some(*rate),
            Profile::Custom { .. } => None,
        }
    }
}

/// A weight `p(x1, x2) = p1(x1)·p2(x2)`.
#[derive(Clone, Debug)]
pub struct SeparableP {
    pub p1: Profile,
    pub p2: Profile,
}

impl SeparableP {
    pub fn new(p1: Profile, p2: Profile) -> Self {
        SeparableP { p1, p2 }
    }

    /// `p = e^{−σ1 x1 + σ2 x2}`.
    pub fn exponential(sigma1: f64, sigma2: f64) -> Self {
        SeparableP {
            p1: Profile::Exponential { rate: -sigma1 },
            p2: Profile::Exponential { rate: sigma2 },
        }
    }

    /// `p ≡ 1`; the sequence then yields the analytic functions of `ζ`.
    pub fn homogeneous() -> Self {
        Self::exponential(0.0, 0.0)
    }

    /// `(σ1, σ2)` when `p = e^{−σ1 x1 + σ2 x2}`.
    pub fn exponential_rates(&self) -> Option<(f64, f64)> {
        Some((-self.p1.rate()?, self.p2.rate()?))
    }

    pub fn eval(&self, at: Point) -> f64 {
        self.power(at, 1, 1)
    }

    /// `p1(x1)^e1 · p2(x2)^e2` with `e1, e2 ∈ {−1, 1}`.
    fn power(&self, at: Point, e1: i32, e2: i32) -> f64 {
        match (&self.p1, &self.p2) {
            (Profile::Exponential { rate: r1 }, Profile::Exponential { rate: r2 }) => {
                (e1 as f64 * r1 * at.x1 + e2 as f64 * r2 * at.x2).exp()
            }
            _ => self.p1.value(at.x1).powi(e1) * self.p2.value(at.x2).powi(e2),
        }
    }

    pub fn check(&self, points: &[Point]) -> Result<()> {
        for &at in points {
            let v = self.eval(at);
            if !v.is_finite() {
                return Err(Error::NonFinite { at });
            }
            if v == 0.0 {
                return Err(Error::SingularWeight { at });
            }
        }
        Ok(())
    }
}

/// The period-2 generating sequence built from a separable weight.
#[derive(Clone, Debug)]
pub struct GeneratingSequence {
    pub base: SeparableP,
}

impl GeneratingSequence {
    pub fn new(base: SeparableP) -> Self {
        GeneratingSequence { base }
    }

    pub fn exponential(sigma1: f64, sigma2: f64) -> Self {
        Self::new(SeparableP::exponential(sigma1, sigma2))
    }

    pub fn homogeneous() -> Self {
        Self::new(SeparableP::homogeneous())
    }

    /// The `m`-th pair. Both members carry exact partial derivatives.
    pub fn pair_at(&self, m: usize) -> GeneratingPair {
        let parity = if m.is_multiple_of(2) { 1 } else { -1 };
        let member = |second: bool| -> Arc<dyn ComplexField> {
            Arc::new(SequenceMember {
                base: self.base.clone(),
                parity,
                second,
            })
        };
        GeneratingPair::new(member(false), member(true))
    }
}

/// `F = p1 p2^parity` or `G = i / (p1 p2^parity)`.
struct SequenceMember {
    base: SeparableP,
    parity: i32,
    second: bool,
}

impl SequenceMember {
    fn sign(&self) -> f64 {
        if self.second {
            -1.0
        } else {
            1.0
        }
    }
}

impl ComplexField for SequenceMember {
    fn eval(&self, at: Point) -> Complex64 {
        if self.second {
            Complex64::new(0.0, self.base.power(at, -1, -self.parity))
        } else {
            Complex64::new(self.base.power(at, 1, self.parity), 0.0)
        }
    }

    fn partials(&self, at: Point) -> Option<(Complex64, Complex64)> {
        let v = self.eval(at);
        let s = self.sign();
        let d1 = s * self.base.p1.log_derivative(at.x1);
        let d2 = s * self.parity as f64 * self.base.p2.log_derivative(at.x2);
        Some((v * d1, v * d2))
    }
}

/// The two real basis coefficients used throughout: `1` and `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coeff {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "i")]
    I,
}

impl Coeff {
    pub fn value(self) -> Complex64 {
        match self {
            Coeff::One => Complex64::new(1.0, 0.0),
            Coeff::I => Complex64::new(0.0, 1.0),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Coeff::One => "1",
            Coeff::I => "i",
        })
    }
}

impl std::str::FromStr for Coeff {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Coeff::One),
            "i" | "I" => Ok(Coeff::I),
            other => Err(Error::invalid(format!(
                "coefficient must be 1 or i, got {other:?}"
            ))),
        }
    }
}

/// `Z_n^(m)(a, z0; ·)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FormalPowerSpec {
    pub n: usize,
    pub m: usize,
    pub a: Complex64,
    pub z0: Point,
}

impl FormalPowerSpec {
    pub fn new(n: usize, m: usize, a: Complex64, z0: Point) -> Self {
        FormalPowerSpec { n, m, a, z0 }
    }

    /// `Z^(m)(coeff, 0; ·)` of the first pair.
    pub fn at_origin(m: usize, coeff: Coeff) -> Self {
        Self::new(0, m, coeff.value(), Point::ORIGIN)
    }
}
