//! Exact formal powers of degree 0, 1 and 2 for `p = e^{−σ1 x1 + σ2 x2}`,
//! centered at the origin.
//!
//! Writing `S_k = sinh(σk xk)/σk` and `K(t) = (e^{−t} − sinh(t)/t)/t`:
//!
//! ```text
//! Z^(1)(1) = e^{−σ1x1} S2 + i e^{−σ2x2} S1
//! Z^(1)(i) = −e^{σ2x2} S1 + i e^{σ1x1} S2
//! Z^(2)(1) = e^{σ2x2} x1² K(σ1x1) − e^{−σ1x1} x2² K(−σ2x2) + 2i S1 S2
//! Z^(2)(i) = −2 S1 S2 + i (e^{−σ2x2} x1² K(−σ1x1) − e^{σ1x1} x2² K(σ2x2))
//! ```
//!
//! These forms stay finite and accurate as either rate goes to zero, where
//! the powers reduce to `ζ^m` and `i ζ^m`.

use num_complex::Complex64;

use super::Coeff;
use crate::error::{Error, Result};
use crate::pseudoanalytic::{ComplexField, Point};
use crate::special::{exp_sinhc_kernel, sinh_ratio, sinhc};

pub fn closed_form_power(
    m: usize,
    coeff: Coeff,
    sigma1: f64,
    sigma2: f64,
    at: Point,
) -> Result<Complex64> {
    let (x1, x2) = (at.x1, at.x2);
    let (t1, t2) = (sigma1 * x1, sigma2 * x2);
    let value = match (m, coeff) {
        (0, Coeff::One) => Complex64::new((-t1 + t2).exp(), 0.0),
        (0, Coeff::I) => Complex64::new(0.0, (t1 - t2).exp()),
        (1, Coeff::One) => Complex64::new(
            (-t1).exp() * sinh_ratio(sigma2, x2),
            (-t2).exp() * sinh_ratio(sigma1, x1),
        ),
        (1, Coeff::I) => Complex64::new(
            -t2.exp() * sinh_ratio(sigma1, x1),
            t1.exp() * sinh_ratio(sigma2, x2),
        ),
        (2, Coeff::One) => Complex64::new(
            t2.exp() * x1 * x1 * exp_sinhc_kernel(t1)
                - (-t1).exp() * x2 * x2 * exp_sinhc_kernel(-t2),
            2.0 * sinh_ratio(sigma1, x1) * sinh_ratio(sigma2, x2),
        ),
        (2, Coeff::I) => Complex64::new(
            -2.0 * sinh_ratio(sigma1, x1) * sinh_ratio(sigma2, x2),
            (-t2).exp() * x1 * x1 * exp_sinhc_kernel(-t1)
                - t1.exp() * x2 * x2 * exp_sinhc_kernel(t2),
        ),
        _ => return Err(Error::UnsupportedClosedForm { degree: m as u32 }),
    };
    if value.re.is_finite() && value.im.is_finite() {
        Ok(value)
    } else {
        Err(Error::NonFinite { at })
    }
}

/// Second-degree powers summed term by term in their expanded exponential
/// form. Only defined for nonzero rates; agrees with [`closed_form_power`].
pub fn closed_form_power_termwise(
    coeff: Coeff,
    sigma1: f64,
    sigma2: f64,
    at: Point,
) -> Result<Complex64> {
    if sigma1 == 0.0 || sigma2 == 0.0 {
        return Err(Error::invalid("the term-by-term form needs nonzero rates"));
    }
    let (x1, x2) = (at.x1, at.x2);
    let (s1, s2) = (sigma1, sigma2);
    let (t1, t2) = (s1 * x1, s2 * x2);
    let linear = x1 / (2.0 * s1) + x2 / (2.0 * s2);
    // (x1/σ2 − x2/σ1) sinh(t1 − t2) / (2t1 − 2t2)
    let cross = 0.5 * (x1 / s2 - x2 / s1) * sinhc(t1 - t2);
    let half = match coeff {
        Coeff::One => Complex64::new(
            linear * (-t1 + t2).exp()
                - t2.exp() * t1.sinh() / (2.0 * s1 * s1)
                - (-t1).exp() * t2.sinh() / (2.0 * s2 * s2),
            (t1.exp() * t2.sinh() - (-t2).exp() * t1.sinh()) / (2.0 * s1 * s2) + cross,
        ),
        Coeff::I => Complex64::new(
            ((-t1).exp() * t2.sinh() - t2.exp() * t1.sinh()) / (2.0 * s1 * s2) + cross,
            -linear * (t1 - t2).exp()
                + (-t2).exp() * t1.sinh() / (2.0 * s1 * s1)
                + t1.exp() * t2.sinh() / (2.0 * s2 * s2),
        ),
    };
    Ok(2.0 * half)
}

/// A closed-form power as a field; NaN where it cannot be evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClosedFormField {
    pub m: usize,
    pub coeff: Coeff,
    pub sigma1: f64,
    pub sigma2: f64,
}

impl ClosedFormField {
    pub fn new(m: usize, coeff: Coeff, sigma1: f64, sigma2: f64) -> Self {
        ClosedFormField {
            m,
            coeff,
            sigma1,
            sigma2,
        }
    }
}

impl ComplexField for ClosedFormField {
    fn eval(&self, at: Point) -> Complex64 {
        closed_form_power(self.m, self.coeff, self.sigma1, self.sigma2, at)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formal_powers::GeneratingSequence;
    use crate::pseudoanalytic::vekua_residual;

    fn z(m: usize, coeff: Coeff, at: Point) -> Complex64 {
        closed_form_power(m, coeff, 3.0, 1.0, at).unwrap()
    }

    #[test]
    fn center_values() {
        assert_eq!(z(0, Coeff::One, Point::ORIGIN), Complex64::new(1.0, 0.0));
        assert_eq!(z(0, Coeff::I, Point::ORIGIN), Complex64::new(0.0, 1.0));
        for m in 1..3 {
            assert_eq!(z(m, Coeff::One, Point::ORIGIN).norm(), 0.0);
        }
    }

    #[test]
    fn first_degree_examples() {
        let v = z(1, Coeff::One, Point::new(0.0, 0.5));
        assert!((v - Complex64::new(0.5f64.sinh(), 0.0)).norm() < 1e-15);
        // −sinh(0.6)/3
        let v = z(1, Coeff::I, Point::new(0.2, 0.0));
        assert!((v.re + 0.6f64.sinh() / 3.0).abs() < 1e-15 && v.im == 0.0);
        assert!((v.re + 0.2122178607).abs() < 1e-9);
    }

    #[test]
    fn unsupported_degree() {
        assert!(matches!(
            closed_form_power(3, Coeff::One, 3.0, 1.0, Point::ORIGIN),
            Err(Error::UnsupportedClosedForm { degree: 3 })
        ));
    }

    #[test]
    fn stable_and_termwise_forms_agree() {
        for at in [
            Point::new(0.3, -0.2),
            Point::new(-0.7, 0.4),
            Point::new(0.1, 0.3),
        ] {
            for coeff in [Coeff::One, Coeff::I] {
                let a = z(2, coeff, at);
                let b = closed_form_power_termwise(coeff, 3.0, 1.0, at).unwrap();
                assert!((a - b).norm() < 1e-12, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn removable_singularity() {
        // σ1 x1 = σ2 x2 exactly, and just off it
        let on = z(2, Coeff::One, Point::new(0.1, 0.3));
        assert!(on.re.is_finite() && on.im.is_finite());
        let off = Point::new(0.1 + 1e-6 / 3.0, 0.3);
        let series = closed_form_power_termwise(Coeff::One, 3.0, 1.0, off).unwrap();
        let direct = z(2, Coeff::One, off);
        assert!((series - direct).norm() < 1e-10);
        let on_termwise =
            closed_form_power_termwise(Coeff::One, 3.0, 1.0, Point::new(0.1, 0.3)).unwrap();
        assert!((on_termwise - on).norm() < 1e-12);
    }

    #[test]
    fn vanishing_rates_give_powers_of_zeta() {
        let at = Point::new(0.35, -0.6);
        let zeta = at.zeta();
        for m in 0..3 {
            for coeff in [Coeff::One, Coeff::I] {
                let v = closed_form_power(m, coeff, 1e-12, 1e-12, at).unwrap();
                assert!((v - coeff.value() * zeta.powi(m as i32)).norm() < 1e-8);
                let v = closed_form_power(m, coeff, 0.0, 0.0, at).unwrap();
                assert!((v - coeff.value() * zeta.powi(m as i32)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn closed_forms_solve_the_vekua_equation() {
        let pair = GeneratingSequence::exponential(3.0, 1.0).pair_at(0);
        for m in 0..3 {
            for coeff in [Coeff::One, Coeff::I] {
                let w = ClosedFormField::new(m, coeff, 3.0, 1.0);
                for at in [Point::new(0.2, 0.1), Point::new(-0.5, 0.6)] {
                    assert!(vekua_residual(&w, &pair, at).unwrap().norm() < 1e-6);
                }
            }
        }
    }
}
