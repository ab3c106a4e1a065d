//! Stable evaluation of the hyperbolic quotients that appear in the closed-form
//! formal powers and potentials.

/// Below this magnitude `sinh(t)/t` is replaced by its Maclaurin polynomial.
pub const SINHC_SERIES_BELOW: f64 = 1e-4;

/// Below this magnitude `sinh(σ s)/σ` is replaced by `s + σ² s³ / 6`.
pub const RATE_SERIES_BELOW: f64 = 1e-8;

const KERNEL_SERIES_BELOW: f64 = 0.1;

/// `sinh(t) / t`, with value 1 at the origin.
pub fn sinhc(t: f64) -> f64 {
    if t.abs() < SINHC_SERIES_BELOW {
        let t2 = t * t;
        1.0 + t2 / 6.0 * (1.0 + t2 / 20.0 * (1.0 + t2 / 42.0))
    } else {
        t.sinh() / t
    }
}

/// `sinh(rate · s) / rate`, tending to `s` as the rate vanishes.
pub fn sinh_ratio(rate: f64, s: f64) -> f64 {
    if rate.abs() < RATE_SERIES_BELOW {
        s + rate * rate * s * s * s / 6.0
    } else {
        (rate * s).sinh() / rate
    }
}

/// `(e^{-t} - sinh(t)/t) / t`, which tends to -1 at the origin.
///
/// Both second-degree formal powers are built from `s² · exp_sinhc_kernel(±σ s)`,
/// the stable form of `(s e^{∓σ s} - sinh(σ s)/σ) / σ`.
pub fn exp_sinhc_kernel(t: f64) -> f64 {
    if t.abs() < KERNEL_SERIES_BELOW {
        // Coefficient of t^{k-1}: k/(k+1)! for even k, -1/k! for odd k.
        let mut sum = 0.0;
        let mut power = 1.0;
        let mut factorial = 1.0;
        for k in 1..=14u32 {
            factorial *= k as f64;
            let coeff = if k % 2 == 0 {
                k as f64 / (factorial * (k + 1) as f64)
            } else {
                -1.0 / factorial
            };
            sum += coeff * power;
            power *= t;
        }
        sum
    } else {
        ((-t).exp() - t.sinh() / t) / t
    }
}

/// `(1 - e^{-2 rate s}) / (2 rate)`, tending to `s`.
pub fn decay_ratio(rate: f64, s: f64) -> f64 {
    if rate == 0.0 {
        s
    } else {
        -(-2.0 * rate * s).exp_m1() / (2.0 * rate)
    }
}

/// `(e^{-2 rate s} - 1 + 2 rate s) / (4 rate²)`, tending to `s²/2`.
pub fn decay_ratio2(rate: f64, s: f64) -> f64 {
    let t = 2.0 * rate * s;
    if t.abs() < KERNEL_SERIES_BELOW {
        // (e^{-t} - 1 + t)/t² = Σ_{k≥2} (-t)^{k-2}/k!
        let mut sum = 0.0;
        let mut power = 1.0;
        let mut factorial = 1.0;
        for k in 2..=14u32 {
            factorial *= k as f64;
            sum += power / factorial;
            power *= -t;
        }
        s * s * sum
    } else {
        ((-t).exp_m1() + t) / (4.0 * rate * rate)
    }
}
