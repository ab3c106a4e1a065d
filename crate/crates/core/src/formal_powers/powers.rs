use num_complex::Complex64;

use super::{
    closed_form_power, fg_integral_with, Coeff, FormalPowerSpec, GeneratingSequence, Path,
};
use crate::error::{Error, Result};
use crate::pseudoanalytic::{decompose_value, ComplexField, GeneratingPair, Point};

/// `λ F_n + μ G_n` with real `λ, μ` fixed by the value at the center.
#[derive(Clone)]
pub struct FormalPowerZero {
    pub lambda: f64,
    pub mu: f64,
    pair: GeneratingPair,
}

impl FormalPowerZero {
    pub fn pair(&self) -> &GeneratingPair {
        &self.pair
    }
}

impl ComplexField for FormalPowerZero {
    fn eval(&self, at: Point) -> Complex64 {
        let (f, g) = self.pair.eval(at);
        self.lambda * f + self.mu * g
    }

    fn partials(&self, at: Point) -> Option<(Complex64, Complex64)> {
        let (f1, f2) = self.pair.f.partials(at)?;
        let (g1, g2) = self.pair.g.partials(at)?;
        Some((
            self.lambda * f1 + self.mu * g1,
            self.lambda * f2 + self.mu * g2,
        ))
    }
}

/// `Z_n^(0)(a0, z0; ·)`.
pub fn formal_power_zero(
    seq: &GeneratingSequence,
    n: usize,
    a0: Complex64,
    z0: Point,
) -> Result<FormalPowerZero> {
    let pair = seq.pair_at(n);
    pair.determinant(z0)?;
    let (f, g) = pair.eval(z0);
    let d = decompose_value(a0, f, g, z0)?;
    Ok(FormalPowerZero {
        lambda: d.phi,
        mu: d.psi,
        pair,
    })
}

struct Recursion {
    pairs: Vec<GeneratingPair>,
    bottom: FormalPowerZero,
    z0: Point,
    tol: f64,
}

impl Recursion {
    fn new(seq: &GeneratingSequence, spec: &FormalPowerSpec, tol: f64) -> Result<Self> {
        if tol.is_nan() || tol <= 0.0 {
            return Err(Error::invalid("quadrature tolerance must be positive"));
        }
        let pairs = (0..spec.m).map(|k| seq.pair_at(spec.n + k)).collect();
        let bottom = formal_power_zero(seq, spec.n + spec.m, spec.a, spec.z0)?;
        Ok(Recursion {
            pairs,
            bottom,
            z0: spec.z0,
            tol,
        })
    }

    // Z_{n+level}^(m−level) at `at`, integrating along `path` at the top level.
    fn eval(&self, level: usize, at: Point, path: Option<&Path>) -> Result<Complex64> {
        let m = self.pairs.len();
        if level == m {
            return Ok(self.bottom.eval(at));
        }
        let straight;
        let path = match path {
            Some(p) => p,
            None => {
                straight = Path::segment(self.z0, at);
                &straight
            }
        };
        let inner = |x: Point| self.eval(level + 1, x, None);
        let integral = fg_integral_with(&inner, &self.pairs[level], path, self.tol)?;
        Ok((m - level) as f64 * integral)
    }
}

/// `Z_n^(m)(a, z0; at)` by recursive (F,G)-integration along straight
/// segments from the center.
pub fn formal_power(
    seq: &GeneratingSequence,
    spec: &FormalPowerSpec,
    at: Point,
    tol: f64,
) -> Result<Complex64> {
    Recursion::new(seq, spec, tol)?.eval(0, at, None)
}

/// Like [`formal_power`], with the outermost integral taken along `path`
/// (which must start at the center).
pub fn formal_power_along(
    seq: &GeneratingSequence,
    spec: &FormalPowerSpec,
    path: &Path,
    tol: f64,
) -> Result<Complex64> {
    if path.start() != spec.z0 {
        return Err(Error::invalid(
            "the integration path must start at the center",
        ));
    }
    let recursion = Recursion::new(seq, spec, tol)?;
    recursion.eval(0, path.end(), Some(path))
}

/// Closed-form value when one exists: exponential weight, center at the
/// origin, even index (even members of the sequence coincide) and `m ≤ 2`.
pub(crate) fn closed_form_for(
    seq: &GeneratingSequence,
    spec: &FormalPowerSpec,
    at: Point,
) -> Option<Result<Complex64>> {
    let (s1, s2) = seq.base.exponential_rates()?;
    if !spec.n.is_multiple_of(2) || spec.z0 != Point::ORIGIN || spec.m > 2 {
        return None;
    }
    let real = closed_form_power(spec.m, Coeff::One, s1, s2, at);
    let imag = closed_form_power(spec.m, Coeff::I, s1, s2, at);
    Some(real.and_then(|r| imag.map(|i| spec.a.re * r + spec.a.im * i)))
}

/// A formal power as a field, using the closed form when available.
/// Evaluation failures show up as NaN.
#[derive(Clone)]
pub struct FormalPowerField {
    pub seq: GeneratingSequence,
    pub spec: FormalPowerSpec,
    pub tol: f64,
    pub prefer_closed_form: bool,
}

impl FormalPowerField {
    pub fn new(seq: GeneratingSequence, spec: FormalPowerSpec, tol: f64) -> Self {
        FormalPowerField {
            seq,
            spec,
            tol,
            prefer_closed_form: true,
        }
    }

    pub fn numeric(seq: GeneratingSequence, spec: FormalPowerSpec, tol: f64) -> Self {
        FormalPowerField {
            seq,
            spec,
            tol,
            prefer_closed_form: false,
        }
    }

    pub fn try_eval(&self, at: Point) -> Result<Complex64> {
        if self.prefer_closed_form {
            if let Some(v) = closed_form_for(&self.seq, &self.spec, at) {
                return v;
            }
        }
        formal_power(&self.seq, &self.spec, at, self.tol)
    }
}

impl ComplexField for FormalPowerField {
    fn eval(&self, at: Point) -> Complex64 {
        self.try_eval(at)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_degree_coefficients() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let z = formal_power_zero(&seq, 0, c(1.0, 0.0), Point::ORIGIN).unwrap();
        assert!((z.lambda - 1.0).abs() < 1e-15 && z.mu.abs() < 1e-15);
        let at = Point::new(0.2, 0.3);
        assert!((z.eval(at) - c((-0.6f64 + 0.3).exp(), 0.0)).norm() < 1e-14);
        let z = formal_power_zero(&seq, 0, c(0.0, 1.0), Point::ORIGIN).unwrap();
        assert!(z.lambda.abs() < 1e-15 && (z.mu - 1.0).abs() < 1e-15);
        assert!((z.eval(at) - c(0.0, (0.6f64 - 0.3).exp())).norm() < 1e-14);
        let z = formal_power_zero(
            &GeneratingSequence::homogeneous(),
            0,
            c(2.0, 3.0),
            Point::ORIGIN,
        )
        .unwrap();
        assert_eq!(z.eval(Point::new(0.9, -0.4)), c(2.0, 3.0));
    }

    #[test]
    fn center_value_is_coefficient() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let z0 = Point::new(0.2, -0.1);
        let a = c(0.4, -1.5);
        for n in 0..3 {
            let z = formal_power_zero(&seq, n, a, z0).unwrap();
            assert!((z.eval(z0) - a).norm() < 1e-14);
        }
    }

    #[test]
    fn first_degree_matches_closed_form() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let spec = FormalPowerSpec::at_origin(1, Coeff::One);
        let v = formal_power(&seq, &spec, Point::new(0.0, 0.5), 1e-10).unwrap();
        assert!((v - c(0.5210953054937474, 0.0)).norm() < 1e-9, "{v}");
    }

    #[test]
    fn second_degree_matches_closed_form() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let at = Point::new(0.3, -0.2);
        for coeff in [Coeff::One, Coeff::I] {
            let spec = FormalPowerSpec::at_origin(2, coeff);
            let numeric = formal_power(&seq, &spec, at, 1e-10).unwrap();
            let exact = closed_form_power(2, coeff, 3.0, 1.0, at).unwrap();
            assert!(
                (numeric - exact).norm() < 1e-8 * exact.norm().max(1.0),
                "{numeric} vs {exact}"
            );
        }
    }

    #[test]
    fn homogeneous_powers_are_monomials() {
        let seq = GeneratingSequence::homogeneous();
        let spec = FormalPowerSpec::at_origin(3, Coeff::One);
        let at = Point::new(0.4, 0.7);
        let v = formal_power(&seq, &spec, at, 1e-12).unwrap();
        assert!((v - at.zeta().powi(3)).norm() < 1e-12, "{v}");
        let spec = FormalPowerSpec::new(0, 2, c(0.0, 1.0), Point::new(0.1, 0.1));
        let v = formal_power(&seq, &spec, at, 1e-12).unwrap();
        let d = at.zeta() - Point::new(0.1, 0.1).zeta();
        assert!((v - c(0.0, 1.0) * d * d).norm() < 1e-12);
    }

    #[test]
    fn odd_index_uses_the_second_pair() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let spec = FormalPowerSpec::new(1, 0, c(1.0, 0.0), Point::ORIGIN);
        let at = Point::new(0.2, 0.3);
        let v = formal_power(&seq, &spec, at, 1e-10).unwrap();
        assert!((v - c((-0.6f64 - 0.3).exp(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn dog_leg_path_agrees() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let spec = FormalPowerSpec::at_origin(2, Coeff::I);
        let at = Point::new(-0.4, 0.5);
        let straight = formal_power(&seq, &spec, at, 1e-9).unwrap();
        let bent = formal_power_along(
            &seq,
            &spec,
            &Path::dog_leg(Point::ORIGIN, Point::new(-0.4, 0.0), at),
            1e-9,
        )
        .unwrap();
        assert!((straight - bent).norm() < 1e-8);
        let wrong_start = Path::segment(Point::new(0.1, 0.0), at);
        assert!(formal_power_along(&seq, &spec, &wrong_start, 1e-9).is_err());
    }

    #[test]
    fn field_prefers_closed_form() {
        let seq = GeneratingSequence::exponential(3.0, 1.0);
        let spec = FormalPowerSpec::new(0, 1, c(1.0, 1.0), Point::ORIGIN);
        let at = Point::new(0.25, -0.3);
        let closed = FormalPowerField::new(seq.clone(), spec, 1e-10).eval(at);
        let numeric = FormalPowerField::numeric(seq, spec, 1e-10).eval(at);
        let sum = closed_form_power(1, Coeff::One, 3.0, 1.0, at).unwrap()
            + closed_form_power(1, Coeff::I, 3.0, 1.0, at).unwrap();
        assert!((closed - sum).norm() < 1e-15);
        assert!((numeric - sum).norm() < 1e-9);
    }
}
