//! Complex-plane primitives of pseudoanalytic function theory.
//!
//! Every operator in this crate works in the plane coordinate
//! `ζ = x2 + i·x1` (real part `x2`, imaginary part `x1`), so that
//!
//! ```text
//! ∂_ζ̄ = ∂/∂x2 + i ∂/∂x1,      ∂_ζ = ∂/∂x2 − i ∂/∂x1
//! ```
//!
//! Neither operator carries the customary factor ½; in particular
//! `∂_ζ̄ conj(ζ) = 2` and `∂_ζ ζ^m = 2m ζ^{m−1}`.
//!
//! Derivatives are taken from exact partials when a field supplies them and
//! otherwise from second-order central differences with step
//! `h·max(1, |coordinate|)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default relative finite-difference step.
pub const REL_STEP: f64 = 1e-5;

/// `|F conj(G) − conj(F) G|` below this is treated as a degenerate pair.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Decompositions whose 2×2 system is worse conditioned than this are flagged.
pub const CONDITION_WARN: f64 = 1e8;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x1: f64,
    pub x2: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x1: 0.0, x2: 0.0 };

    pub const fn new(x1: f64, x2: f64) -> Self {
        Point { x1, x2 }
    }

    /// The plane coordinate `ζ = x2 + i·x1`.
    pub fn zeta(self) -> Complex64 {
        Complex64::new(self.x2, self.x1)
    }

    pub fn from_zeta(z: Complex64) -> Self {
        Point { x1: z.im, x2: z.re }
    }

    pub fn norm(self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn is_finite(self) -> bool {
        self.x1.is_finite() && self.x2.is_finite()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x1 + t * (other.x1 - self.x1),
            self.x2 + t * (other.x2 - self.x2),
        )
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x1, self.x2)
    }
}

/// A complex-valued function of the plane.
pub trait ComplexField: Send + Sync {
    fn eval(&self, at: Point) -> Complex64;

    /// Exact `(∂/∂x1, ∂/∂x2)`, if the field knows them.
    fn partials(&self, _at: Point) -> Option<(Complex64, Complex64)> {
        None
    }
}

impl<F> ComplexField for F
where
    F: Fn(Point) -> Complex64 + Send + Sync,
{
    fn eval(&self, at: Point) -> Complex64 {
        self(at)
    }
}

/// A real-valued function of the plane.
pub trait RealField: Send + Sync {
    fn eval(&self, at: Point) -> f64;
}

impl<F> RealField for F
where
    F: Fn(Point) -> f64 + Send + Sync,
{
    fn eval(&self, at: Point) -> f64 {
        self(at)
    }
}

pub type SharedField = Arc<dyn ComplexField>;

/// Hides the exact partials of a field so that every derivative goes through
/// the difference stencil.
pub struct StencilOnly(pub SharedField);

impl ComplexField for StencilOnly {
    fn eval(&self, at: Point) -> Complex64 {
        self.0.eval(at)
    }
}

fn step(coord: f64, rel: f64) -> f64 {
    let h = rel * coord.abs().max(1.0);
    // representable spacing
    (coord + h) - coord
}

fn checked<F: ComplexField + ?Sized>(field: &F, at: Point) -> Result<Complex64> {
    let v = field.eval(at);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at })
    }
}

fn checked_real<F: RealField + ?Sized>(field: &F, at: Point) -> Result<f64> {
    let v = field.eval(at);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// `(∂/∂x1, ∂/∂x2)` of a complex field.
pub fn partials<F: ComplexField + ?Sized>(
    field: &F,
    at: Point,
    rel_step: f64,
) -> Result<(Complex64, Complex64)> {
    if let Some((d1, d2)) = field.partials(at) {
        if d1.re.is_finite() && d1.im.is_finite() && d2.re.is_finite() && d2.im.is_finite() {
            return Ok((d1, d2));
        }
        return Err(Error::NonFinite { at });
    }
    let h1 = step(at.x1, rel_step);
    let h2 = step(at.x2, rel_step);
    let d1 = (checked(field, Point::new(at.x1 + h1, at.x2))?
        - checked(field, Point::new(at.x1 - h1, at.x2))?)
        / (2.0 * h1);
    let d2 = (checked(field, Point::new(at.x1, at.x2 + h2))?
        - checked(field, Point::new(at.x1, at.x2 - h2))?)
        / (2.0 * h2);
    Ok((d1, d2))
}

/// `(∂/∂x1, ∂/∂x2)` of a real field by central differences.
pub fn real_partials<F: RealField + ?Sized>(
    field: &F,
    at: Point,
    rel_step: f64,
) -> Result<(f64, f64)> {
    let h1 = step(at.x1, rel_step);
    let h2 = step(at.x2, rel_step);
    let d1 = (checked_real(field, Point::new(at.x1 + h1, at.x2))?
        - checked_real(field, Point::new(at.x1 - h1, at.x2))?)
        / (2.0 * h1);
    let d2 = (checked_real(field, Point::new(at.x1, at.x2 + h2))?
        - checked_real(field, Point::new(at.x1, at.x2 - h2))?)
        / (2.0 * h2);
    Ok((d1, d2))
}

/// `∂_ζ̄ W = ∂W/∂x2 + i ∂W/∂x1`.
pub fn d_zeta_bar<F: ComplexField + ?Sized>(
    field: &F,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let (d1, d2) = partials(field, at, rel_step)?;
    Ok(d2 + I * d1)
}

/// `∂_ζ W = ∂W/∂x2 − i ∂W/∂x1`.
pub fn d_zeta<F: ComplexField + ?Sized>(field: &F, at: Point, rel_step: f64) -> Result<Complex64> {
    let (d1, d2) = partials(field, at, rel_step)?;
    Ok(d2 - I * d1)
}

/// `∂_ζ̄` of a real field, as a complex number.
pub fn d_zeta_bar_real<F: RealField + ?Sized>(
    field: &F,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let (d1, d2) = real_partials(field, at, rel_step)?;
    Ok(Complex64::new(d2, d1))
}

/// `∂_ζ` of a real field, as a complex number.
pub fn d_zeta_real<F: RealField + ?Sized>(
    field: &F,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let (d1, d2) = real_partials(field, at, rel_step)?;
    Ok(Complex64::new(d2, -d1))
}

/// Two complex fields `(F, G)` with `Im(conj(F) G) > 0` on the working domain.
///
/// The positivity condition is a pointwise property; it is checked wherever
/// the pair is evaluated and can be sampled with [`GeneratingPair::check`].
#[derive(Clone)]
pub struct GeneratingPair {
    pub f: SharedField,
    pub g: SharedField,
}

impl GeneratingPair {
    pub fn new(f: SharedField, g: SharedField) -> Self {
        GeneratingPair { f, g }
    }

    /// The constant pair `(1, i)` whose pseudoanalytic functions are the
    /// analytic functions of `ζ`.
    pub fn analytic() -> Self {
        Self::from_weight(Arc::new(|_: Point| 1.0))
    }

    /// The pair `(p, i/p)` for a non-vanishing real weight `p`.
    pub fn from_weight(p: Arc<dyn RealField>) -> Self {
        let q = p.clone();
        GeneratingPair {
            f: Arc::new(move |at: Point| Complex64::new(p.eval(at), 0.0)),
            g: Arc::new(move |at: Point| Complex64::new(0.0, 1.0 / q.eval(at))),
        }
    }

    pub fn eval(&self, at: Point) -> (Complex64, Complex64) {
        (self.f.eval(at), self.g.eval(at))
    }

    /// `F conj(G) − conj(F) G`, which equals `−2i·Im(conj(F) G)`.
    pub fn determinant(&self, at: Point) -> Result<Complex64> {
        let f = checked(&*self.f, at)?;
        let g = checked(&*self.g, at)?;
        let den = f * g.conj() - f.conj() * g;
        if den.norm() < DEGENERACY_TOL {
            return Err(Error::DegeneratePair {
                at,
                magnitude: den.norm(),
            });
        }
        Ok(den)
    }

    /// Checks `Im(conj(F) G) > 0` at every sample point.
    pub fn check(&self, points: &[Point]) -> Result<()> {
        for &at in points {
            let (f, g) = self.eval(at);
            let im = (f.conj() * g).im;
            if im.is_nan() || im <= 0.5 * DEGENERACY_TOL {
                return Err(Error::DegeneratePair {
                    at,
                    magnitude: 2.0 * im.abs(),
                });
            }
        }
        Ok(())
    }

    /// The same pair with every derivative forced through the difference stencil.
    pub fn stencil_only(&self) -> Self {
        GeneratingPair {
            f: Arc::new(StencilOnly(self.f.clone())),
            g: Arc::new(StencilOnly(self.g.clone())),
        }
    }

    /// The pair `(G, F)`. It is not a generating pair (the sign of
    /// `Im(conj(F) G)` flips) but its characteristic coefficients enter the
    /// successor condition.
    pub fn swapped(&self) -> Self {
        GeneratingPair {
            f: self.g.clone(),
            g: self.f.clone(),
        }
    }
}

/// The characteristic coefficients `A, a, B, b` of a pair at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharCoefficients {
    pub big_a: Complex64,
    pub a: Complex64,
    pub big_b: Complex64,
    pub b: Complex64,
}

pub fn characteristic_coefficients(pair: &GeneratingPair, at: Point) -> Result<CharCoefficients> {
    characteristic_coefficients_with_step(pair, at, REL_STEP)
}

pub fn characteristic_coefficients_with_step(
    pair: &GeneratingPair,
    at: Point,
    rel_step: f64,
) -> Result<CharCoefficients> {
    let den = pair.determinant(at)?;
    let f = pair.f.eval(at);
    let g = pair.g.eval(at);
    let (f1, f2) = partials(&*pair.f, at, rel_step)?;
    let (g1, g2) = partials(&*pair.g, at, rel_step)?;
    let (dz_f, dzb_f) = (f2 - I * f1, f2 + I * f1);
    let (dz_g, dzb_g) = (g2 - I * g1, g2 + I * g1);
    Ok(CharCoefficients {
        big_a: -(f.conj() * dz_g - g.conj() * dz_f) / den,
        a: -(f.conj() * dzb_g - g.conj() * dzb_f) / den,
        big_b: (f * dz_g - g * dz_f) / den,
        b: (f * dzb_g - g * dzb_f) / den,
    })
}

/// Largest violation of the successor conditions `a₀ = a₁` and
/// `B₀ = −b_(G₁,F₁)` between two pairs at one point.
pub fn successor_residual(first: &GeneratingPair, next: &GeneratingPair, at: Point) -> Result<f64> {
    let c0 = characteristic_coefficients(first, at)?;
    let c1 = characteristic_coefficients(next, at)?;
    let swapped = characteristic_coefficients(&next.swapped(), at)?;
    Ok((c0.a - c1.a).norm().max((c0.big_b + swapped.b).norm()))
}

/// Real coordinates `(φ, ψ)` of `W = φF + ψG` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Decomposition {
    pub phi: f64,
    pub psi: f64,
    /// 2-norm condition number of the real 2×2 system.
    pub condition: f64,
}

impl Decomposition {
    pub fn ill_conditioned(&self) -> bool {
        self.condition > CONDITION_WARN
    }
}

/// Solves `w = φ f + ψ g` for real `φ, ψ`.
pub fn decompose_value(
    w: Complex64,
    f: Complex64,
    g: Complex64,
    at: Point,
) -> Result<Decomposition> {
    let det = f.re * g.im - g.re * f.im;
    if (2.0 * det).abs() < DEGENERACY_TOL {
        return Err(Error::DegeneratePair {
            at,
            magnitude: 2.0 * det.abs(),
        });
    }
    let phi = (w.re * g.im - g.re * w.im) / det;
    let psi = (f.re * w.im - w.re * f.im) / det;
    let frob2 = f.norm_sqr() + g.norm_sqr();
    let disc = (frob2 * frob2 - 4.0 * det * det).max(0.0).sqrt();
    let smax = (0.5 * (frob2 + disc)).sqrt();
    let smin = det.abs() / smax;
    Ok(Decomposition {
        phi,
        psi,
        condition: smax / smin,
    })
}

pub fn decompose<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
) -> Result<Decomposition> {
    let (f, g) = (checked(&*pair.f, at)?, checked(&*pair.g, at)?);
    decompose_value(checked(w, at)?, f, g, at)
}

/// The derivative in the sense of Bers, `∂_ζ W − A W − B conj(W)`.
pub fn bers_derivative<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
) -> Result<Complex64> {
    bers_derivative_with_step(w, pair, at, REL_STEP)
}

pub fn bers_derivative_with_step<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let c = characteristic_coefficients_with_step(pair, at, rel_step)?;
    let value = checked(w, at)?;
    Ok(d_zeta(w, at, rel_step)? - c.big_a * value - c.big_b * value.conj())
}

/// The same derivative computed as `(∂_ζ φ) F + (∂_ζ ψ) G` from the real
/// coordinates of `W` in the pair.
pub fn bers_derivative_decomposed<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let coords = |p: Point| decompose(w, pair, p);
    let h1 = step(at.x1, rel_step);
    let h2 = step(at.x2, rel_step);
    let plus1 = coords(Point::new(at.x1 + h1, at.x2))?;
    let minus1 = coords(Point::new(at.x1 - h1, at.x2))?;
    let plus2 = coords(Point::new(at.x1, at.x2 + h2))?;
    let minus2 = coords(Point::new(at.x1, at.x2 - h2))?;
    let dphi = Complex64::new(
        (plus2.phi - minus2.phi) / (2.0 * h2),
        -(plus1.phi - minus1.phi) / (2.0 * h1),
    );
    let dpsi = Complex64::new(
        (plus2.psi - minus2.psi) / (2.0 * h2),
        -(plus1.psi - minus1.psi) / (2.0 * h1),
    );
    let (f, g) = pair.eval(at);
    Ok(dphi * f + dpsi * g)
}

/// `∂_ζ̄ W − a W − b conj(W)`; zero exactly when `W` is pseudoanalytic for the pair.
pub fn vekua_residual<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
) -> Result<Complex64> {
    vekua_residual_with_step(w, pair, at, REL_STEP)
}

pub fn vekua_residual_with_step<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    at: Point,
    rel_step: f64,
) -> Result<Complex64> {
    let c = characteristic_coefficients_with_step(pair, at, rel_step)?;
    let value = checked(w, at)?;
    Ok(d_zeta_bar(w, at, rel_step)? - c.a * value - c.b * value.conj())
}

/// The adjoint pair `F* = −2 conj(F)/(F conj(G) − conj(F) G)`,
/// `G* = 2 conj(G)/(F conj(G) − conj(F) G)`.
#[derive(Clone)]
pub struct AdjointPair {
    pair: GeneratingPair,
}

pub fn adjoint_pair(pair: &GeneratingPair) -> AdjointPair {
    AdjointPair { pair: pair.clone() }
}

impl AdjointPair {
    pub fn eval(&self, at: Point) -> Result<(Complex64, Complex64)> {
        let den = self.pair.determinant(at)?;
        let (f, g) = self.pair.eval(at);
        Ok((-2.0 * f.conj() / den, 2.0 * g.conj() / den))
    }

    /// `F*` as a field; NaN where the pair degenerates.
    pub fn f_star(&self) -> SharedField {
        let this = self.clone();
        Arc::new(move |at: Point| {
            this.eval(at)
                .map(|v| v.0)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
    }

    /// `G*` as a field; NaN where the pair degenerates.
    pub fn g_star(&self) -> SharedField {
        let this = self.clone();
        Arc::new(move |at: Point| {
            this.eval(at)
                .map(|v| v.1)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
    }
}

/// Residuals of the p-analytic system
///
/// ```text
/// ∂φ/∂x2 = (1/p²) ∂ψ/∂x1,     ∂φ/∂x1 = −(1/p²) ∂ψ/∂x2
/// ```
///
/// which holds exactly when `W = pφ + (i/p)ψ` solves `∂_ζ̄W − (∂_ζ̄p/p) conj(W) = 0`.
pub fn p_analytic_residual<A, B, P>(phi: &A, psi: &B, p: &P, at: Point) -> Result<(f64, f64)>
where
    A: RealField + ?Sized,
    B: RealField + ?Sized,
    P: RealField + ?Sized,
{
    let weight = checked_real(p, at)?;
    if weight.abs() < DEGENERACY_TOL {
        return Err(Error::SingularWeight { at });
    }
    let (phi1, phi2) = real_partials(phi, at, REL_STEP)?;
    let (psi1, psi2) = real_partials(psi, at, REL_STEP)?;
    let inv = 1.0 / (weight * weight);
    Ok((phi2 - inv * psi1, phi1 + inv * psi2))
}

/// `(∂_ζ̄ − a − b C)(φF) − (∂_ζ̄ φ) F`, where `C` is complex conjugation.
///
/// Vanishes whenever `F` solves `∂_ζ̄F − aF − b conj(F) = 0`.
pub fn mult_identity_residual<P, F, A, B>(
    phi: &P,
    f: &F,
    a: &A,
    b: &B,
    at: Point,
) -> Result<Complex64>
where
    P: RealField + ?Sized,
    F: ComplexField + ?Sized,
    A: ComplexField + ?Sized,
    B: ComplexField + ?Sized,
{
    let product = |x: Point| phi.eval(x) * f.eval(x);
    let value = checked(&product, at)?;
    let lhs = d_zeta_bar(&product, at, REL_STEP)?
        - checked(a, at)? * value
        - checked(b, at)? * value.conj();
    let rhs = d_zeta_bar_real(phi, at, REL_STEP)? * checked(f, at)?;
    Ok(lhs - rhs)
}
