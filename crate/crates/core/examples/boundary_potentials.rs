//! Electric potentials on the unit circle next to their homogeneous
//! counterparts, and the check `j = −σ grad u` inside the disk.

use vekua::fields::{boundary_trace, flux_divergence, gradient_consistency, FD_STEP};
use vekua::formal_powers::Coeff;
use vekua::grid::disk_grid_within;
use vekua::quaternion_ohm::ExpSigmaModel;

fn main() -> vekua::Result<()> {
    let model = ExpSigmaModel::new(3.0, 1.0, 0.0);
    for (m, coeff) in [
        (0, Coeff::One),
        (0, Coeff::I),
        (1, Coeff::One),
        (1, Coeff::I),
    ] {
        let trace = boundary_trace(m, coeff, &model, 8)?;
        println!(
            "u^({m})({coeff}, 0) on the circle (u_h shown x{}):",
            trace.homogeneous_display_scale
        );
        for s in &trace.samples {
            println!(
                "  θ = {:.4}  u = {:>14.6e}  u_h = {:>8.4}",
                s.theta,
                s.u,
                s.u_h * trace.homogeneous_display_scale
            );
        }
        let mut grad: f64 = 0.0;
        let mut div: f64 = 0.0;
        for p in disk_grid_within(15, 0.95) {
            grad = grad.max(gradient_consistency(m, coeff, &model, p, FD_STEP)?);
            div = div.max(flux_divergence(m, coeff, &model, p, FD_STEP)?);
        }
        println!("  max |j + σ grad u| = {grad:.2e}, max |div(σ grad u)| = {div:.2e}");
    }
    Ok(())
}
