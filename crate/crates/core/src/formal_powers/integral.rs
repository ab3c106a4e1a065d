use num_complex::Complex64;

use super::Path;
use crate::error::{Error, Result};
use crate::pseudoanalytic::{adjoint_pair, ComplexField, GeneratingPair, Point};
use crate::quadrature::integrate;

/// The two line integrals `∫ F* W dζ` and `∫ G* W dζ` along a path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoopIntegrals {
    pub with_f_star: Complex64,
    pub with_g_star: Complex64,
}

impl LoopIntegrals {
    /// `Re∮G*W dζ + i Re∮F*W dζ`, whose vanishing on every loop is
    /// (F,G)-integrability.
    pub fn closure(&self) -> Complex64 {
        Complex64::new(self.with_g_star.re, self.with_f_star.re)
    }
}

fn line_integrals<W>(w: &W, pair: &GeneratingPair, path: &Path, tol: f64) -> Result<LoopIntegrals>
where
    W: Fn(Point) -> Result<Complex64>,
{
    let adjoint = adjoint_pair(pair);
    let pieces = path.segments().count() as f64;
    let mut total = [Complex64::new(0.0, 0.0); 2];
    for (a, b) in path.segments() {
        let dzeta = b.zeta() - a.zeta();
        let part = integrate(
            |t| {
                let at = a.lerp(b, t);
                let value = w(at)?;
                let (fs, gs) = adjoint.eval(at)?;
                Ok([fs * value * dzeta, gs * value * dzeta])
            },
            0.0,
            1.0,
            tol / pieces,
        )?;
        total[0] += part[0];
        total[1] += part[1];
    }
    Ok(LoopIntegrals {
        with_f_star: total[0],
        with_g_star: total[1],
    })
}

/// The (F,G)-integral `G(z)·Re∫F*W dζ + F(z)·Re∫G*W dζ` along `path`, with
/// the prefactors taken at the path's endpoint `z`.
pub fn fg_integral<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    path: &Path,
    tol: f64,
) -> Result<Complex64> {
    fg_integral_with(&|at: Point| Ok(w.eval(at)), pair, path, tol)
}

/// [`fg_integral`] for an integrand that can fail.
pub fn fg_integral_with<W>(w: &W, pair: &GeneratingPair, path: &Path, tol: f64) -> Result<Complex64>
where
    W: Fn(Point) -> Result<Complex64>,
{
    let checked = |at: Point| {
        let v = w(at)?;
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at })
        }
    };
    let parts = line_integrals(&checked, pair, path, tol)?;
    let (f, g) = pair.eval(path.end());
    Ok(g * parts.with_f_star.re + f * parts.with_g_star.re)
}

/// `|Re∮G*W dζ + i Re∮F*W dζ|` around a closed polygon.
pub fn path_independence_check<W: ComplexField + ?Sized>(
    w: &W,
    pair: &GeneratingPair,
    closed: &Path,
    tol: f64,
) -> Result<f64> {
    if !closed.is_closed() {
        return Err(Error::invalid("path independence needs a closed loop"));
    }
    let checked = |at: Point| {
        let v = w.eval(at);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at })
        }
    };
    Ok(line_integrals(&checked, pair, closed, tol)?
        .closure()
        .norm())
}
