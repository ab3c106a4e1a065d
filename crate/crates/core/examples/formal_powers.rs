//! Formal powers built by repeated (F, G)-integration, compared with their
//! exact expressions, plus a Taylor expansion in formal powers.

use vekua::formal_powers::{
    closed_form_power, formal_power, formal_power_along, taylor_coefficients, taylor_eval, Coeff,
    FormalPowerField, FormalPowerSpec, GeneratingSequence, Path,
};
use vekua::pseudoanalytic::ComplexField;
use vekua::Point;

fn main() -> vekua::Result<()> {
    let (s1, s2) = (3.0, 1.0);
    let seq = GeneratingSequence::exponential(s1, s2);
    let tol = 1e-10;
    let at = Point::new(0.35, -0.5);

    println!("generating pairs at {at}:");
    for m in 0..3 {
        let (f, g) = seq.pair_at(m).eval(at);
        println!("  m = {m}: F = {f:.6}, G = {g:.6}");
    }

    for m in 0..4 {
        for coeff in [Coeff::One, Coeff::I] {
            let spec = FormalPowerSpec::at_origin(m, coeff);
            let numeric = formal_power(&seq, &spec, at, tol)?;
            match closed_form_power(m, coeff, s1, s2, at) {
                Ok(exact) => println!("Z^({m})({coeff}, 0) = {numeric:.10}  exact {exact:.10}"),
                Err(_) => println!("Z^({m})({coeff}, 0) = {numeric:.10}"),
            }
        }
    }

    // the integral does not depend on the route taken
    let spec = FormalPowerSpec::at_origin(3, Coeff::One);
    let bent = Path::dog_leg(Point::ORIGIN, Point::new(0.0, at.x2), at);
    println!(
        "Z^(3) along a bent path: {:.10}",
        formal_power_along(&seq, &spec, &bent, tol)?
    );

    // W = 2 Z^(0)(1) − Z^(1)(i) + 0.5 Z^(2)(1), recovered from its Bers derivatives
    let parts = [
        (
            2.0,
            FormalPowerField::new(seq.clone(), FormalPowerSpec::at_origin(0, Coeff::One), tol),
        ),
        (
            -1.0,
            FormalPowerField::new(seq.clone(), FormalPowerSpec::at_origin(1, Coeff::I), tol),
        ),
        (
            0.5,
            FormalPowerField::new(seq.clone(), FormalPowerSpec::at_origin(2, Coeff::One), tol),
        ),
    ];
    let w = move |p: Point| parts.iter().map(|(c, f)| *c * f.eval(p)).sum();
    let fit = taylor_coefficients(&w, &seq, Point::ORIGIN, 3)?;
    println!("Taylor coefficients (noisy: {}):", fit.noisy);
    for (m, a) in fit.series.coefficients.iter().enumerate() {
        println!("  a_{m} = {a:.6}");
    }
    let p = Point::new(0.1, 0.15);
    println!(
        "series at {p}: {:.8}, field: {:.8}",
        taylor_eval(&fit.series, &seq, p, tol)?,
        w(p)
    );
    Ok(())
}
