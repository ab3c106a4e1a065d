//! Checks that the exact formal powers of `p = e^{−3x1 + x2}` solve the
//! Vekua equation, and that the Bers derivative lowers the degree.
//!
//! Derivatives here are `∂_ζ = ∂2 − i∂1` without the usual factor ½, so the
//! identity reads `d Z_0^(m) = 2m Z_1^(m−1)`.

use num_complex::Complex64;
use vekua::formal_powers::{
    formal_power, ClosedFormField, Coeff, FormalPowerSpec, GeneratingSequence,
};
use vekua::grid::disk_grid;
use vekua::pseudoanalytic::{bers_derivative, characteristic_coefficients, vekua_residual};
use vekua::Point;

fn show(z: Complex64) -> String {
    let clean = |x: f64| if x.abs() < 5e-7 { 0.0 } else { x };
    format!("{:.6} {:+.6}i", clean(z.re), clean(z.im))
}

fn main() -> vekua::Result<()> {
    let (s1, s2) = (3.0, 1.0);
    let seq = GeneratingSequence::exponential(s1, s2);
    let pair = seq.pair_at(0);

    let at = Point::new(0.2, -0.4);
    let c = characteristic_coefficients(&pair, at)?;
    println!("characteristic coefficients at {at}:");
    println!(
        "  A = {}  a = {}  B = {}  b = {}",
        show(c.big_a),
        show(c.a),
        show(c.big_b),
        show(c.b)
    );

    for m in 0..3 {
        for coeff in [Coeff::One, Coeff::I] {
            let w = ClosedFormField::new(m, coeff, s1, s2);
            let mut worst: f64 = 0.0;
            for p in disk_grid(41) {
                worst = worst.max(vekua_residual(&w, &pair, p)?.norm());
            }
            println!("Z^({m})({coeff}, 0): max |residual| over the disk = {worst:.2e}");
        }
    }

    let z2 = ClosedFormField::new(2, Coeff::One, s1, s2);
    let d = bers_derivative(&z2, &pair, at)?;
    let lowered = formal_power(
        &seq,
        &FormalPowerSpec::new(1, 1, Complex64::new(1.0, 0.0), Point::ORIGIN),
        at,
        1e-10,
    )?;
    println!("Bers derivative of Z_0^(2)(1, 0) at {at}: {}", show(d));
    println!(
        "4 Z_1^(1)(1, 0) at {at}:                    {}",
        show(4.0 * lowered)
    );
    Ok(())
}
