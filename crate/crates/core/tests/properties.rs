use proptest::prelude::*;

use vekua::conductivity_fit::{fit, Interp, Interpolant, SampleGrid};
use vekua::fields::{trace_streamline, StepRule, TraceConfig};
use vekua::formal_powers::{
    closed_form_power, closed_form_power_termwise, Coeff, GeneratingSequence,
};
use vekua::quaternion_ohm::Quaternion;
use vekua::Point;

fn quaternion() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-3.0..3.0f64).prop_map(|q| Quaternion::new(q[0], q[1], q[2], q[3]))
}

fn disk_point() -> impl Strategy<Value = Point> {
    (0.0..1.0f64, 0.0..std::f64::consts::TAU)
        .prop_map(|(r, t)| Point::new(r.sqrt() * t.cos(), r.sqrt() * t.sin()))
}

proptest! {
    #[test]
    fn quaternion_norm_is_multiplicative(a in quaternion(), b in quaternion()) {
        prop_assert!(((a * b).norm() - a.norm() * b.norm()).abs() <= 1e-12 * (1.0 + a.norm() * b.norm()));
    }

    #[test]
    fn quaternion_product_is_associative(a in quaternion(), b in quaternion(), c in quaternion()) {
        let d = (a * b) * c - a * (b * c);
        prop_assert!(d.max_abs() <= 1e-12 * (1.0 + a.norm() * b.norm() * c.norm()));
    }

    #[test]
    fn sequence_has_period_two(s1 in -3.0..3.0f64, s2 in -3.0..3.0f64, p in disk_point(), m in 0usize..6) {
        let seq = GeneratingSequence::exponential(s1, s2);
        prop_assert_eq!(seq.pair_at(m).eval(p), seq.pair_at(m + 2).eval(p));
    }

    #[test]
    fn second_degree_forms_agree(s1 in 0.1..3.0f64, s2 in 0.1..3.0f64, p in disk_point(), i in any::<bool>()) {
        let coeff = if i { Coeff::I } else { Coeff::One };
        let a = closed_form_power(2, coeff, s1, s2, p).unwrap();
        let b = closed_form_power_termwise(coeff, s1, s2, p).unwrap();
        let scale = 1.0 + (s1.abs() + s2.abs()).exp() / (s1 * s2).min(s1 * s1).min(s2 * s2);
        prop_assert!((a - b).norm() <= 1e-12 * scale, "{a} vs {b}");
    }

    #[test]
    fn bands_partition_the_range(x2 in -1.0..=1.0f64) {
        let axis = [-1.0, -0.3, 0.2, 1.0];
        let fitted = fit(&SampleGrid::sample(|p| 1.0 + p.x1 * p.x1 + p.x2.exp(), &axis, &axis).unwrap(), None, Interp::Pchip).unwrap();
        let holders = fitted.bands.iter().enumerate()
            .filter(|(j, b)| (b.lo <= x2 && x2 < b.hi) || (*j == 0 && x2 == b.hi))
            .count();
        prop_assert_eq!(holders, 1);
        prop_assert!(fitted.band_index(x2).is_some());
    }

    #[test]
    fn fit_reproduces_its_samples(values in prop::collection::vec(0.1..10.0f64, 16), linear in any::<bool>()) {
        let axis = [-1.0, -0.25, 0.5, 1.0];
        let mut points = Vec::new();
        for (i, &a) in axis.iter().enumerate() {
            for (j, &b) in axis.iter().enumerate() {
                points.push([a, b, values[4 * i + j]]);
            }
        }
        let interp = if linear { Interp::Linear } else { Interp::Pchip };
        let fitted = fit(&SampleGrid::from_points(&points, 1e-12).unwrap(), None, interp).unwrap();
        for [a, b, v] in points {
            let got = fitted.evaluate(Point::new(a, b)).unwrap();
            prop_assert!((got - v).abs() <= 1e-12 * v, "{got} vs {v}");
        }
    }

    #[test]
    fn pchip_keeps_monotone_data_monotone(steps in prop::collection::vec(0.0..2.0f64, 5), x in -1.0..1.0f64, dx in 0.0..0.5f64) {
        let mut nodes = Vec::new();
        let mut y = 0.0;
        for (k, s) in steps.iter().enumerate() {
            y += s;
            nodes.push([-1.0 + 0.5 * k as f64, y]);
        }
        let f = Interpolant::new(&nodes, Interp::Pchip);
        prop_assert!(f.eval(x) <= f.eval(x + dx) + 1e-12);
    }

    #[test]
    fn scaled_steps_stay_in_bounds(sigma_ref in 1e-3..1e3f64, sigma in 1e-6..1e6f64) {
        let h = StepRule::conductivity_scaled(sigma_ref).length(sigma, 1.0);
        prop_assert!((1e-4 - 1e-18..=0.1 + 1e-18).contains(&h));
    }

    #[test]
    fn fixed_steps_have_fixed_length(angle in 0.0..std::f64::consts::TAU, step in 1e-3..0.1f64) {
        let dir = [angle.cos(), angle.sin()];
        let current = move |_: Point| Ok(dir);
        let line = trace_streamline(&current, &|_: Point| 1.0, Point::new(0.1, -0.2), &TraceConfig::new(StepRule::Fixed { step })).unwrap();
        let n = line.points.len();
        for w in line.points[..n - 1].windows(2) {
            let d = ((w[1].x1 - w[0].x1).powi(2) + (w[1].x2 - w[0].x2).powi(2)).sqrt();
            prop_assert!((d - step).abs() < 1e-12);
        }
        prop_assert!((line.points[n - 1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_names_round_trip(i in any::<bool>()) {
        let coeff = if i { Coeff::I } else { Coeff::One };
        prop_assert_eq!(coeff.to_string().parse::<Coeff>().unwrap(), coeff);
    }
}
