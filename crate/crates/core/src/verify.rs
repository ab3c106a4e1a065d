//! Property checks run by `vekua verify`.
//!
//! Each check evaluates one invariant over a grid or a seeded random sample
//! and reports the worst value found against its threshold. Results depend
//! only on the configuration and the seed.

use std::f64::consts::TAU;
use std::fmt::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conductivity_fit::{fit, Interp, SampleGrid};
use crate::error::Result;
use crate::fields::{
    current_density, flux_divergence, gradient_consistency, homogeneous_current, potential, FD_STEP,
};
use crate::formal_powers::{
    closed_form_power, formal_power, formal_power_along, ClosedFormField, Coeff, FormalPowerSpec,
    GeneratingSequence, Path,
};
use crate::grid::{disk_grid, linspace};
use crate::pseudoanalytic::{successor_residual, vekua_residual, Point};
use crate::quaternion_ohm::{
    bers_set, lift, ohm_residual, ExpSigmaModel, Point3, Quaternion, STEP_3D,
};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

impl CheckResult {
    fn below(name: &'static str, worst: f64, threshold: f64) -> Self {
        CheckResult {
            name,
            worst,
            threshold,
            passed: worst.is_finite() && worst < threshold,
        }
    }
}

/// Parameters of a verification run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub sigma1: f64,
    pub sigma2: f64,
    pub grid: usize,
    pub quadrature_tol: f64,
    pub residual_tol: f64,
    pub seed: u64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            sigma1: 3.0,
            sigma2: 1.0,
            grid: 41,
            quadrature_tol: 1e-9,
            residual_tol: 1e-6,
            seed: 0,
        }
    }
}

const BASIS: [(usize, Coeff); 6] = [
    (0, Coeff::One),
    (0, Coeff::I),
    (1, Coeff::One),
    (1, Coeff::I),
    (2, Coeff::One),
    (2, Coeff::I),
];

fn disk_points(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let r = radius * rng.gen::<f64>().sqrt();
            let t = TAU * rng.gen::<f64>();
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn worst(values: impl ParallelIterator<Item = Result<f64>>) -> f64 {
    values
        .map(|v| v.unwrap_or(f64::INFINITY))
        .reduce(|| 0.0, f64::max)
}

/// Runs every check. The order of the returned list is fixed.
pub fn run_all(s: &VerifySettings) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let (s1, s2) = (s.sigma1, s.sigma2);
    let seq = GeneratingSequence::exponential(s1, s2);
    let mut out = Vec::new();

    let pair = seq.pair_at(0);
    let grid = disk_grid(s.grid);
    let residual = worst(grid.par_iter().flat_map_iter(|&p| {
        let pair = &pair;
        BASIS.iter().map(move |&(m, c)| {
            Ok(vekua_residual(&ClosedFormField::new(m, c, s1, s2), pair, p)?.norm())
        })
    }));
    out.push(CheckResult::below(
        "vekua residual of closed-form powers",
        residual,
        s.residual_tol,
    ));

    let sample = disk_points(&mut rng, 50, 1.0);
    for (m, threshold, name) in [
        (1, 1e-6, "numeric vs closed-form powers, degree 1"),
        (2, 1e-5, "numeric vs closed-form powers, degree 2"),
    ] {
        let rel = worst(sample.par_iter().flat_map_iter(|&p| {
            let seq = &seq;
            [Coeff::One, Coeff::I].into_iter().map(move |c| {
                let exact = closed_form_power(m, c, s1, s2, p)?;
                let numeric =
                    formal_power(seq, &FormalPowerSpec::at_origin(m, c), p, s.quadrature_tol)?;
                Ok((numeric - exact).norm() / exact.norm().max(f64::MIN_POSITIVE))
            })
        }));
        out.push(CheckResult::below(name, rel, threshold));
    }

    let mut bound: f64 = 0.0;
    for &(m, c) in &BASIS {
        for k in 0..8 {
            let t = TAU * k as f64 / 8.0;
            for r in [1e-1, 1e-2, 1e-3, 1e-4] {
                let p = Point::new(r * t.sin(), r * t.cos());
                let v = closed_form_power(m, c, s1, s2, p)
                    .map(|z| (z - c.value() * p.zeta().powi(m as i32)).norm());
                bound = bound.max(v.map(|d| d / r.powi(m as i32 + 1)).unwrap_or(f64::INFINITY));
            }
        }
    }
    out.push(CheckResult::below(
        "approach to a(ζ)^m near the center",
        bound,
        100.0,
    ));

    let tiny = ExpSigmaModel::new(1e-12, 1e-12, 1e-12);
    let sample = disk_points(&mut rng, 20, 1.0);
    let mut reduction: f64 = 0.0;
    let mut currents: f64 = 0.0;
    for &p in &sample {
        for &(m, c) in &BASIS {
            let z =
                closed_form_power(m, c, 1e-12, 1e-12, p).unwrap_or(Complex64::new(f64::NAN, 0.0));
            reduction = reduction.max((z - c.value() * p.zeta().powi(m as i32)).norm());
            let j = current_density(m, c, &tiny, Point3::new(p.x1, p.x2, 0.0), s.quadrature_tol);
            let h = homogeneous_current(m, c, p);
            currents = currents.max(match (j, h) {
                (Ok(j), Ok(h)) => j.max_abs_diff(&h),
                _ => f64::INFINITY,
            });
        }
    }
    out.push(CheckResult::below(
        "powers reduce to a(ζ)^m as σ → 0",
        reduction,
        1e-8,
    ));
    out.push(CheckResult::below(
        "currents reduce to the homogeneous table",
        currents,
        1e-6,
    ));

    let model = ExpSigmaModel::new(s1, s2, 0.0);
    let interior: Vec<Point> = disk_grid(21)
        .into_iter()
        .filter(|p| p.norm() < 1.0)
        .collect();
    let low = [
        (0, Coeff::One),
        (0, Coeff::I),
        (1, Coeff::One),
        (1, Coeff::I),
    ];
    let grad = worst(interior.par_iter().flat_map_iter(|&p| {
        low.iter()
            .map(move |&(m, c)| gradient_consistency(m, c, &model, p, FD_STEP))
    }));
    out.push(CheckResult::below("j + σ grad u", grad, 1e-6));
    let div = worst(interior.par_iter().flat_map_iter(|&p| {
        low.iter()
            .map(move |&(m, c)| flux_divergence(m, c, &model, p, FD_STEP))
    }));
    out.push(CheckResult::below("div(σ grad u)", div, 1e-5));
    let spot = Point::new(0.3, -0.6);
    let spot_err = match (
        potential(0, Coeff::One, &model, spot),
        potential(1, Coeff::I, &model, spot),
    ) {
        (Ok(u0), Ok(u1)) => {
            let e0 = (-2.0 * s1 * spot.x1).exp() / (2.0 * s1);
            let e1 = spot.x1 / (2.0 * s1) - spot.x2 / (2.0 * s2)
                + (-2.0 * s1 * spot.x1).exp() / (4.0 * s1 * s1)
                - (-2.0 * s2 * spot.x2).exp() / (4.0 * s2 * s2);
            (u0 - e0).abs().max((u1 - e1).abs())
        }
        _ => f64::INFINITY,
    };
    out.push(CheckResult::below("potential spot values", spot_err, 1e-14));

    let axis = linspace(-1.0, 1.0, 9);
    let mut cube = Vec::with_capacity(axis.len().pow(3));
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                cube.push(Point3::new(a, b, c));
            }
        }
    }
    let mut quat: f64 = 0.0;
    for model in [
        ExpSigmaModel::new(3.0, 1.0, 0.0),
        ExpSigmaModel::new(1.0, 1.0, 1.0),
        ExpSigmaModel::default(),
    ] {
        let set = bers_set(&model);
        quat = quat.max(worst(cube.par_iter().flat_map_iter(|&p| {
            set.iter()
                .map(move |e| Ok(ohm_residual(&**e, &model, p, STEP_3D)?.max_abs()))
        })));
    }
    out.push(CheckResult::below(
        "quaternionic Ohm residual of the Bers set",
        quat,
        1e-6,
    ));
    let demo = ExpSigmaModel::new(s1, s2, 0.0);
    let mut lifted: f64 = 0.0;
    for &(m, c) in &BASIS {
        let field = lift(
            std::sync::Arc::new(ClosedFormField::new(m, c, s1, s2)),
            demo,
        );
        lifted = lifted
            .max(worst(cube.par_iter().map(|&p| {
                Ok(ohm_residual(&*field, &demo, p, STEP_3D)?.max_abs())
            })));
    }
    out.push(CheckResult::below(
        "lifted Vekua solutions solve the Ohm equation",
        lifted,
        1e-5,
    ));

    let mut norm_defect: f64 = 0.0;
    for _ in 0..200 {
        let mut q = || {
            Quaternion::new(
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
                rng.gen_range(-2.0..2.0),
            )
        };
        let (a, b) = (q(), q());
        norm_defect = norm_defect.max(((a * b).norm() - a.norm() * b.norm()).abs());
    }
    out.push(CheckResult::below("|ab| = |a||b|", norm_defect, 1e-12));

    let sample = disk_points(&mut rng, 100, 1.0);
    let mut period: f64 = 0.0;
    let mut successor: f64 = 0.0;
    for &p in &sample {
        for m in 0..2 {
            let (f0, g0) = seq.pair_at(m).eval(p);
            let (f2, g2) = seq.pair_at(m + 2).eval(p);
            period = period.max((f0 - f2).norm()).max((g0 - g2).norm());
            let r = successor_residual(
                &seq.pair_at(m).stencil_only(),
                &seq.pair_at(m + 1).stencil_only(),
                p,
            );
            successor = successor.max(r.unwrap_or(f64::INFINITY));
        }
    }
    out.push(CheckResult::below(
        "generating sequence has period 2",
        period,
        1e-10,
    ));
    out.push(CheckResult::below(
        "consecutive pairs are successors",
        successor,
        1e-6,
    ));

    let p = Point::new(-0.45, 0.55);
    let spec = FormalPowerSpec::at_origin(2, Coeff::One);
    let path_gap = match (
        formal_power(&seq, &spec, p, s.quadrature_tol),
        formal_power_along(
            &seq,
            &spec,
            &Path::dog_leg(Point::ORIGIN, Point::new(p.x1, 0.0), p),
            s.quadrature_tol,
        ),
    ) {
        (Ok(a), Ok(b)) => (a - b).norm(),
        _ => f64::INFINITY,
    };
    out.push(CheckResult::below(
        "formal powers are path independent",
        path_gap,
        10.0 * s.quadrature_tol.max(1e-9),
    ));

    let axis = linspace(-1.0, 1.0, 5);
    let source = |q: Point| (2.0 * q.x1 + 2.0 * q.x2).exp();
    let (nodes, separable, partition) =
        match SampleGrid::sample(source, &axis, &axis).and_then(|g| fit(&g, None, Interp::Pchip)) {
            Ok(f) => {
                let mut nodes: f64 = 0.0;
                for &a in &axis {
                    for &b in &axis {
                        let q = Point::new(a, b);
                        nodes = nodes.max(
                            f.evaluate(q)
                                .map(|v| (v - source(q)).abs() / source(q))
                                .unwrap_or(f64::INFINITY),
                        );
                    }
                }
                let separable = (0..f.bands.len())
                    .map(|j| f.separability_check(j, 7).unwrap_or(f64::INFINITY))
                    .fold(0.0, f64::max);
                let misses = (0..1000)
                    .filter(|_| {
                        let x2: f64 = rng.gen_range(-1.0..=1.0);
                        f.bands
                            .iter()
                            .enumerate()
                            .filter(|(j, b)| (b.lo <= x2 && x2 < b.hi) || (*j == 0 && x2 == b.hi))
                            .count()
                            != 1
                    })
                    .count();
                (nodes, separable, misses as f64)
            }
            Err(_) => (f64::INFINITY, f64::INFINITY, f64::INFINITY),
        };
    out.push(CheckResult::below(
        "fit reproduces grid samples",
        nodes,
        1e-12,
    ));
    out.push(CheckResult::below(
        "fitted bands are separable",
        separable,
        1e-12,
    ));
    out.push(CheckResult::below(
        "bands partition the x2 range (misses)",
        partition,
        0.5,
    ));

    out
}

/// One line per check: status, name, worst value and threshold.
pub fn render_table(results: &[CheckResult]) -> String {
    let mut out = String::new();
    for r in results {
        let _ = writeln!(
            out,
            "{}  {:<48} worst {:.3e}  limit {:.1e}",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.worst,
            r.threshold
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    let _ = writeln!(out, "{} checks, {} failed", results.len(), failed);
    out
}
