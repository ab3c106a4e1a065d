use num_complex::Complex64;

use super::powers::closed_form_for;
use super::{formal_power, FormalPowerSpec, GeneratingSequence};
use crate::error::{Error, Result};
use crate::pseudoanalytic::{bers_derivative_with_step, ComplexField, Point};

/// A truncated expansion `Σ Z^(m)(a_m, z0; ζ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorSeries {
    pub center: Point,
    pub coefficients: Vec<Complex64>,
}

/// Coefficients recovered from a field together with the raw derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorFit {
    pub series: TaylorSeries,
    /// `W^[m](z0)` for `m = 0..=M`.
    pub derivatives: Vec<Complex64>,
    pub step: f64,
    /// Set when some `|W^[m+1]| / |W^[m]|` exceeds `1/step`, a sign that
    /// differencing noise dominates the higher derivatives.
    pub noisy: bool,
}

/// `W^[0..=order](at)`, where `W^[k+1]` is the Bers derivative of `W^[k]`
/// with respect to the `k`-th pair of the sequence. Each level is a central
/// difference of the previous one with relative step `step`.
pub fn higher_bers_derivatives<W: ComplexField + ?Sized>(
    w: &W,
    seq: &GeneratingSequence,
    at: Point,
    order: usize,
    step: f64,
) -> Result<Vec<Complex64>> {
    (0..=order).map(|k| nested(w, seq, k, at, step)).collect()
}

fn nested<W: ComplexField + ?Sized>(
    w: &W,
    seq: &GeneratingSequence,
    k: usize,
    at: Point,
    step: f64,
) -> Result<Complex64> {
    if k == 0 {
        let v = w.eval(at);
        return if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at })
        };
    }
    let inner =
        |x: Point| nested(w, seq, k - 1, x, step).unwrap_or(Complex64::new(f64::NAN, f64::NAN));
    bers_derivative_with_step(&inner, &seq.pair_at(k - 1), at, step)
}

/// `a_m = W^[m](z0) / (2^m m!)`. The factor `2^m` compensates for the
/// unhalved derivative operators, so that `W = a ζ^m` yields `a_m = a`.
pub fn taylor_coefficients<W: ComplexField + ?Sized>(
    w: &W,
    seq: &GeneratingSequence,
    z0: Point,
    order: usize,
) -> Result<TaylorFit> {
    let step = f64::EPSILON.powf(1.0 / (order as f64 + 2.0));
    let derivatives = higher_bers_derivatives(w, seq, z0, order, step)?;
    let mut scale = 1.0;
    let mut coefficients = Vec::with_capacity(order + 1);
    for (m, d) in derivatives.iter().enumerate() {
        if m > 0 {
            scale *= 2.0 * m as f64;
        }
        coefficients.push(d / scale);
    }
    let noisy = derivatives
        .windows(2)
        .any(|pair| pair[0].norm() > 0.0 && pair[1].norm() / pair[0].norm() > 1.0 / step);
    Ok(TaylorFit {
        series: TaylorSeries {
            center: z0,
            coefficients,
        },
        derivatives,
        step,
        noisy,
    })
}

/// `Σ_m Re(a_m) Z^(m)(1, z0; at) + Im(a_m) Z^(m)(i, z0; at)`.
pub fn taylor_eval(
    series: &TaylorSeries,
    seq: &GeneratingSequence,
    at: Point,
    tol: f64,
) -> Result<Complex64> {
    let mut sum = Complex64::new(0.0, 0.0);
    for (m, &a) in series.coefficients.iter().enumerate() {
        if !(a.re.is_finite() && a.im.is_finite()) {
            return Err(Error::invalid(format!("coefficient {m} is not finite")));
        }
        if a == Complex64::new(0.0, 0.0) {
            continue;
        }
        let spec = FormalPowerSpec::new(0, m, a, series.center);
        sum += match closed_form_for(seq, &spec, at) {
            Some(v) => v?,
            None => formal_power(seq, &spec, at, tol)?,
        };
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_powers::{closed_form_power, ClosedFormField, Coeff};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn expansion_of_a_first_degree_power() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let w = ClosedFormField::new(1, Coeff::One, 3.0, 1.0);
        let fit = taylor_coefficients(&w, &seq, Point::ORIGIN, 2).unwrap();
        let a = &fit.series.coefficients;
        assert!(a[0].norm() < 1e-12);
        assert!((a[1] - c(1.0, 0.0)).norm() < 1e-6, "{:?}", a[1]);
        assert!(a[2].norm() < 1e-4, "{:?}", a[2]);
        assert!(!fit.noisy);
    }

    #[test]
    fn expansion_of_a_generator() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let pair = seq.pair_at(0);
        let z0 = Point::new(0.1, -0.2);
        let fit = taylor_coefficients(&*pair.f, &seq, z0, 1).unwrap();
        assert!((fit.series.coefficients[0] - pair.f.eval(z0)).norm() < 1e-15);
        assert!(fit.series.coefficients[1].norm() < 1e-8);
    }

    #[test]
    fn classical_taylor_coefficients() {
        let seq = GeneratingSequence::homogeneous();
        let w = |p: Point| 2.0 + 3.0 * p.zeta() * p.zeta();
        let fit = taylor_coefficients(&w, &seq, Point::ORIGIN, 3).unwrap();
        let expected = [c(2.0, 0.0), c(0.0, 0.0), c(3.0, 0.0), c(0.0, 0.0)];
        for (a, e) in fit.series.coefficients.iter().zip(expected) {
            assert!((a - e).norm() < 1e-5, "{a} vs {e}");
        }
    }

    #[test]
    fn series_evaluation() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let at = Point::new(0.0, 0.5);
        let one = TaylorSeries {
            center: Point::ORIGIN,
            coefficients: vec![c(1.0, 0.0)],
        };
        let v = taylor_eval(&one, &seq, Point::new(0.2, 0.1), 1e-10).unwrap();
        assert_eq!(
            v,
            closed_form_power(0, Coeff::One, 3.0, 1.0, Point::new(0.2, 0.1)).unwrap()
        );
        let linear = TaylorSeries {
            center: Point::ORIGIN,
            coefficients: vec![c(0.0, 0.0), c(1.0, 0.0)],
        };
        let v = taylor_eval(&linear, &seq, at, 1e-10).unwrap();
        assert!((v - c(0.5f64.sinh(), 0.0)).norm() < 1e-15);
        let mixed = TaylorSeries {
            center: Point::ORIGIN,
            coefficients: vec![c(0.0, 0.0), c(1.0, 1.0)],
        };
        let p = Point::new(-0.3, 0.2);
        let v = taylor_eval(&mixed, &seq, p, 1e-10).unwrap();
        let e = closed_form_power(1, Coeff::One, 3.0, 1.0, p).unwrap()
            + closed_form_power(1, Coeff::I, 3.0, 1.0, p).unwrap();
        assert!((v - e).norm() < 1e-15);
    }

    #[test]
    fn off_center_series_uses_quadrature() {
        let seq = GeneratingSequence::homogeneous();
        let z0 = Point::new(0.1, 0.2);
        let s = TaylorSeries {
            center: z0,
            coefficients: vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 2.0)],
        };
        let at = Point::new(0.5, -0.1);
        let d = at.zeta() - z0.zeta();
        let v = taylor_eval(&s, &seq, at, 1e-12).unwrap();
        assert!((v - (1.0 + c(0.0, 2.0) * d * d)).norm() < 1e-12);
    }
}
