//! Real quaternions, the Moisil-Theodoresco operator and the quaternionic
//! form of Ohm's law for a separable exponential conductivity.
//!
//! A vector field `ℰ` with `div(σℰ) = 0` and `rot ℰ = 0` satisfies
//! `(D + M^σ⃗) ℰ = 0`, where `D = Σ e_k ∂_k` acts from the left, `M^σ⃗`
//! multiplies by `σ⃗ = grad√σ / √σ` from the right, and `σ⃗` is read as a
//! purely vectorial quaternion.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudoanalytic::{ComplexField, Point};

/// Default step of the three-dimensional difference stencils.
pub const STEP_3D: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const E1: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const E2: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const E3: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(q0: f64, q1: f64, q2: f64, q3: f64) -> Self {
        Quaternion { q0, q1, q2, q3 }
    }

    pub const fn scalar(s: f64) -> Self {
        Quaternion::new(s, 0.0, 0.0, 0.0)
    }

    pub const fn vector(v: [f64; 3]) -> Self {
        Quaternion::new(0.0, v[0], v[1], v[2])
    }

    pub fn vector_part(self) -> [f64; 3] {
        [self.q1, self.q2, self.q3]
    }

    pub fn components(self) -> [f64; 4] {
        [self.q0, self.q1, self.q2, self.q3]
    }

    pub fn conj(self) -> Self {
        Quaternion::new(self.q0, -self.q1, -self.q2, -self.q3)
    }

    pub fn norm(self) -> f64 {
        self.components().iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    /// Largest absolute component.
    pub fn max_abs(self) -> f64 {
        self.components().iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn is_finite(self) -> bool {
        self.components().iter().all(|c| c.is_finite())
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + {}e1 + {}e2 + {}e3",
            self.q0, self.q1, self.q2, self.q3
        )
    }
}

impl Add for Quaternion {
    type Output = Quaternion;
    fn add(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.q0 + o.q0,
            self.q1 + o.q1,
            self.q2 + o.q2,
            self.q3 + o.q3,
        )
    }
}

impl AddAssign for Quaternion {
    fn add_assign(&mut self, o: Quaternion) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;
    fn sub(self, o: Quaternion) -> Quaternion {
        Quaternion::new(
            self.q0 - o.q0,
            self.q1 - o.q1,
            self.q2 - o.q2,
            self.q3 - o.q3,
        )
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.q0, -self.q1, -self.q2, -self.q3)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.q0 * s, self.q1 * s, self.q2 * s, self.q3 * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

/// Hamilton product: `e1e2 = e3`, `e2e3 = e1`, `e3e1 = e2`, distinct units anticommute.
impl Mul for Quaternion {
    type Output = Quaternion;
    fn mul(self, o: Quaternion) -> Quaternion {
        let (a0, a1, a2, a3) = (self.q0, self.q1, self.q2, self.q3);
        let (b0, b1, b2, b3) = (o.q0, o.q1, o.q2, o.q3);
        Quaternion::new(
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        )
    }
}

pub fn quat_mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point3 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Point3 { x1, x2, x3 }
    }

    pub fn plane(self) -> Point {
        Point::new(self.x1, self.x2)
    }

    fn shifted(self, axis: usize, by: f64) -> Self {
        let mut c = [self.x1, self.x2, self.x3];
        c[axis] += by;
        Point3::new(c[0], c[1], c[2])
    }

    fn coord(self, axis: usize) -> f64 {
        [self.x1, self.x2, self.x3][axis]
    }
}

/// A quaternion-valued function of space.
pub trait QuatField: Send + Sync {
    fn eval(&self, at: Point3) -> Quaternion;
}

impl<F> QuatField for F
where
    F: Fn(Point3) -> Quaternion + Send + Sync,
{
    fn eval(&self, at: Point3) -> Quaternion {
        self(at)
    }
}

pub type SharedQuatField = Arc<dyn QuatField>;

fn checked<Q: QuatField + ?Sized>(q: &Q, at: Point3) -> Result<Quaternion> {
    let v = q.eval(at);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { at: at.plane() })
    }
}

fn partial<Q: QuatField + ?Sized>(q: &Q, at: Point3, axis: usize, h: f64) -> Result<Quaternion> {
    let step = h * at.coord(axis).abs().max(1.0);
    let plus = checked(q, at.shifted(axis, step))?;
    let minus = checked(q, at.shifted(axis, -step))?;
    Ok((plus - minus) * (0.5 / step))
}

/// `D q = e1 ∂1q + e2 ∂2q + e3 ∂3q` by central differences.
///
/// For `q = q0 + q⃗` this is `−div q⃗ + grad q0 + rot q⃗`.
pub fn mt_operator<Q: QuatField + ?Sized>(q: &Q, at: Point3, h: f64) -> Result<Quaternion> {
    let units = [Quaternion::E1, Quaternion::E2, Quaternion::E3];
    let mut out = Quaternion::ZERO;
    for (axis, unit) in units.into_iter().enumerate() {
        out += unit * partial(q, at, axis, h)?;
    }
    Ok(out)
}

/// [`mt_operator`] with one Richardson step, `(4 D_{h/2} − D_h) / 3`.
pub fn mt_operator_richardson<Q: QuatField + ?Sized>(
    q: &Q,
    at: Point3,
    h: f64,
) -> Result<Quaternion> {
    let coarse = mt_operator(q, at, h)?;
    let fine = mt_operator(q, at, 0.5 * h)?;
    Ok((fine * 4.0 - coarse) * (1.0 / 3.0))
}

/// `σ = e^{2σ1x1 + 2σ2x2 + 2σ3x3}`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ExpSigmaModel {
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
}

impl ExpSigmaModel {
    pub const fn new(sigma1: f64, sigma2: f64, sigma3: f64) -> Self {
        ExpSigmaModel {
            sigma1,
            sigma2,
            sigma3,
        }
    }

    pub fn conductivity(&self, at: Point3) -> f64 {
        (2.0 * (self.sigma1 * at.x1 + self.sigma2 * at.x2 + self.sigma3 * at.x3)).exp()
    }

    /// `d ln√s_k / dx_k`, which is `σ_k` for every `x_k`.
    pub fn log_derivative(&self, axis: usize, _coord: f64) -> f64 {
        [self.sigma1, self.sigma2, self.sigma3][axis]
    }

    /// The planar weight `p = e^{−σ1x1 + σ2x2}` of the reduced Vekua equation.
    pub fn weight(&self, at: Point) -> f64 {
        (-self.sigma1 * at.x1 + self.sigma2 * at.x2).exp()
    }
}

/// `σ⃗ = grad√σ / √σ`, constant for the exponential model.
pub fn sigma_vector(model: &ExpSigmaModel, _at: Point3) -> Quaternion {
    Quaternion::vector([model.sigma1, model.sigma2, model.sigma3])
}

/// `D ℰ + ℰ σ⃗`.
pub fn ohm_residual<Q: QuatField + ?Sized>(
    field: &Q,
    model: &ExpSigmaModel,
    at: Point3,
    h: f64,
) -> Result<Quaternion> {
    Ok(mt_operator(field, at, h)? + checked(field, at)? * sigma_vector(model, at))
}

/// The three solutions `ℰ⃗_k = e_k e^{±σ1x1 ± σ2x2 ± σ3x3}`, the sign being
/// negative exactly on the `k`-th coordinate.
///
/// The exponents integrate `d ln√s_k / dx_k` rather than `d ln s_k / dx_k`;
/// only this reading turns the residual [`ohm_residual`] into zero and
/// reproduces the planar weight `e^{−σ1x1 + σ2x2}`.
pub fn bers_set(model: &ExpSigmaModel) -> [SharedQuatField; 3] {
    let make = |k: usize| -> SharedQuatField {
        let m = *model;
        Arc::new(move |at: Point3| {
            let rates = [m.sigma1, m.sigma2, m.sigma3];
            let coords = [at.x1, at.x2, at.x3];
            let exponent: f64 = (0..3)
                .map(|j| {
                    if j == k {
                        -rates[j] * coords[j]
                    } else {
                        rates[j] * coords[j]
                    }
                })
                .sum();
            let mut v = [0.0; 3];
            v[k] = exponent.exp();
            Quaternion::vector(v)
        })
    };
    [make(0), make(1), make(2)]
}

/// Residuals of the real system for `ℰ = φ1ℰ⃗1 + φ2ℰ⃗2`:
///
/// ```text
/// ∂1φ1 + ∂2φ2 / p²,   ∂2φ1 − ∂1φ2 / p²,   ∂3φ1,   ∂3φ2
/// ```
///
/// with `p = e^{−σ1x1 + σ2x2}`.
pub fn coefficient_system_residual<A, B>(
    phi1: &A,
    phi2: &B,
    model: &ExpSigmaModel,
    at: Point3,
    h: f64,
) -> Result<[f64; 4]>
where
    A: Fn(Point3) -> f64 + ?Sized,
    B: Fn(Point3) -> f64 + ?Sized,
{
    let grad = |f: &dyn Fn(Point3) -> f64| -> Result<[f64; 3]> {
        let mut g = [0.0; 3];
        for (axis, slot) in g.iter_mut().enumerate() {
            let step = h * at.coord(axis).abs().max(1.0);
            let plus = f(at.shifted(axis, step));
            let minus = f(at.shifted(axis, -step));
            if !(plus.is_finite() && minus.is_finite()) {
                return Err(Error::NonFinite { at: at.plane() });
            }
            *slot = (plus - minus) / (2.0 * step);
        }
        Ok(g)
    };
    let g1 = grad(&|x| phi1(x))?;
    let g2 = grad(&|x| phi2(x))?;
    let p = model.weight(at.plane());
    let inv = 1.0 / (p * p);
    Ok([g1[0] + inv * g2[1], g1[1] - inv * g2[0], g1[2], g2[2]])
}

/// The quaternionic field `φ1ℰ⃗1 + φ2ℰ⃗2` built from a planar solution `W`
/// of the reduced Vekua equation, with `φ1 = Re W / p` and `φ2 = p Im W`.
pub fn lift<W: ComplexField + ?Sized + 'static>(
    w: Arc<W>,
    model: ExpSigmaModel,
) -> SharedQuatField {
    let [e1, e2, _] = bers_set(&model);
    Arc::new(move |at: Point3| {
        let plane = at.plane();
        let value = w.eval(plane);
        let p = model.weight(plane);
        e1.eval(at) * (value.re / p) + e2.eval(at) * (p * value.im)
    })
}

/// The scalar coordinates `(φ1, φ2)` used by [`lift`].
pub fn lift_coordinates<W: ComplexField + ?Sized>(
    w: &W,
    model: &ExpSigmaModel,
    at: Point3,
) -> (f64, f64) {
    let plane = at.plane();
    let value = w.eval(plane);
    let p = model.weight(plane);
    (value.re / p, p * value.im)
}

/// `D(φQ) + (φQ)σ⃗ − (Dφ)Q`, which vanishes whenever `Q` solves the
/// quaternionic Ohm equation.
pub fn scalar_product_residual<P, Q>(
    phi: &P,
    q: &Q,
    model: &ExpSigmaModel,
    at: Point3,
    h: f64,
) -> Result<Quaternion>
where
    P: Fn(Point3) -> f64 + Send + Sync + ?Sized,
    Q: QuatField + ?Sized,
{
    let product = |x: Point3| q.eval(x) * phi(x);
    let scalar = |x: Point3| Quaternion::scalar(phi(x));
    let lhs = ohm_residual(&product, model, at, h)?;
    let d_phi = mt_operator(&scalar, at, h)?;
    Ok(lhs - d_phi * checked(q, at)?)
}
