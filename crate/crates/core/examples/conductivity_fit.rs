//! Fits a piecewise separable conductivity to samples of `e^{2x1 + 2x2}` and
//! of a non-separable medium, then solves for a current in the central band.

use vekua::conductivity_fit::{fit, Interp, SampleGrid};
use vekua::formal_powers::Coeff;
use vekua::grid::linspace;
use vekua::Point;

fn main() -> vekua::Result<()> {
    let axis = linspace(-1.0, 1.0, 5);
    let source = |p: Point| (2.0 * p.x1 + 2.0 * p.x2).exp();
    let fitted = fit(
        &SampleGrid::sample(source, &axis, &axis)?,
        None,
        Interp::Pchip,
    )?;
    println!("K = {}, {} bands", fitted.k, fitted.bands.len());
    for (j, band) in fitted.bands.iter().enumerate() {
        println!(
            "  band {j}: x2 in [{:.3}, {:.3}), separability defect {:.1e}",
            band.lo,
            band.hi,
            fitted.separability_check(j, 9)?
        );
    }
    let p = Point::new(0.3, 0.1);
    println!(
        "σ at {p}: fitted {:.6}, source {:.6}",
        fitted.evaluate(p)?,
        source(p)
    );

    let mixed = |p: Point| 1.0 + (p.x1 * p.x2).exp();
    let rough = fit(
        &SampleGrid::sample(mixed, &axis, &axis)?,
        None,
        Interp::Linear,
    )?;
    println!(
        "non-separable source: jumps across band edges {:?}",
        rough.boundary_jumps(9)
    );

    let (band, medium) = fitted.central_medium()?;
    let j = medium.current(1, Coeff::One, Point::new(0.2, 0.1), 1e-9)?;
    println!(
        "current of Z^(1)(1, 0) in band {band} at (0.2, 0.1): ({:.6}, {:.6})",
        j.j1, j.j2
    );

    println!("{}", fitted.to_json()?);
    Ok(())
}
