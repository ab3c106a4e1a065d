//! The quaternionic form of Ohm's law for `σ = e^{2σ1x1 + 2σ2x2 + 2σ3x3}`:
//! residuals of the three exponential solutions and of a lifted planar solution.

use std::sync::Arc;

use vekua::formal_powers::{ClosedFormField, Coeff};
use vekua::quaternion_ohm::{
    bers_set, lift, ohm_residual, ExpSigmaModel, Point3, Quaternion, STEP_3D,
};

fn main() -> vekua::Result<()> {
    println!("e1 e2 = {:?}", Quaternion::E1 * Quaternion::E2);
    println!(
        "(1 + e1)(1 - e1) = {:?}",
        (Quaternion::ONE + Quaternion::E1) * (Quaternion::ONE - Quaternion::E1)
    );

    let at = Point3::new(0.3, -0.2, 0.4);
    for model in [
        ExpSigmaModel::new(3.0, 1.0, 0.0),
        ExpSigmaModel::new(1.0, 1.0, 1.0),
    ] {
        println!("model {model:?}");
        for (k, field) in bers_set(&model).iter().enumerate() {
            let r = ohm_residual(&**field, &model, at, STEP_3D)?;
            println!(
                "  solution {}: value {:?}, residual {:.2e}",
                k + 1,
                field.eval(at),
                r.max_abs()
            );
        }
    }

    let model = ExpSigmaModel::new(3.0, 1.0, 0.0);
    let planar = Arc::new(ClosedFormField::new(1, Coeff::I, 3.0, 1.0));
    let lifted = lift(planar, model);
    let r = ohm_residual(&*lifted, &model, at, STEP_3D)?;
    println!(
        "lifted Z^(1)(i, 0): value {:?}, residual {:.2e}",
        lifted.eval(at),
        r.max_abs()
    );
    Ok(())
}
