//! Current densities of the first formal powers and their streamlines,
//! written as SVG files to the system temp directory.

use vekua::fields::{
    current_density, homogeneous_current, render_svg, ring_seeds, trace_both_ways, Medium,
    StepRule, SvgStyle, TraceConfig,
};
use vekua::formal_powers::Coeff;
use vekua::quaternion_ohm::{ExpSigmaModel, Point3};
use vekua::Point;

fn main() -> vekua::Result<()> {
    let model = ExpSigmaModel::new(3.0, 1.0, 0.0);
    let at = Point::new(0.1, 0.2);
    for m in 0..3 {
        for coeff in [Coeff::One, Coeff::I] {
            let j = current_density(m, coeff, &model, Point3::new(at.x1, at.x2, 0.0), 1e-9)?;
            let h = homogeneous_current(m, coeff, at)?;
            println!(
                "m = {m}, a = {coeff}: j = ({:.6}, {:.6})  homogeneous ({:.3}, {:.3})",
                j.j1, j.j2, h.j1, h.j2
            );
        }
    }

    let medium = Medium::Exponential(model);
    let dir = std::env::temp_dir();
    for coeff in [Coeff::One, Coeff::I] {
        let current = |p: Point| medium.current(1, coeff, p, 1e-9).map(|j| [j.j1, j.j2]);
        let sigma = |p: Point| medium.conductivity(p);
        let cfg = TraceConfig::new(StepRule::conductivity_scaled(1.0));
        let mut lines = Vec::new();
        for seed in ring_seeds(0.4, 10, 0.0) {
            lines.extend(trace_both_ways(&current, &sigma, seed, &cfg)?);
        }
        let path = dir.join(format!("streamlines_m1_{coeff}.svg"));
        std::fs::write(&path, render_svg(&lines, &SvgStyle::default()))?;
        let vertices: usize = lines.iter().map(|l| l.points.len()).sum();
        println!(
            "wrote {} ({} lines, {vertices} vertices)",
            path.display(),
            lines.len()
        );
    }
    Ok(())
}
