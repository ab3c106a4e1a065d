use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pseudoanalytic::Point;

/// Currents weaker than this stop a trace.
pub const STAGNATION: f64 = 1e-12;

/// How far a trace advances from a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum StepRule {
    /// `base · clamp(σ_ref / σ(x), min_ratio, max_ratio)`: short steps where
    /// the medium conducts well, long ones where it does not.
    ConductivityScaled {
        base: f64,
        min_ratio: f64,
        max_ratio: f64,
        sigma_ref: f64,
    },
    /// A fixed fraction of `|j(x)|`, `high` where `σ(x) > threshold` and `low` elsewhere.
    TwoTier {
        threshold: f64,
        high: f64,
        low: f64,
    },
    Fixed {
        step: f64,
    },
}

impl StepRule {
    /// Steps between `1e−4` and `0.1`, equal to `0.01` where `σ = sigma_ref`.
    pub fn conductivity_scaled(sigma_ref: f64) -> Self {
        StepRule::ConductivityScaled {
            base: 0.01,
            min_ratio: 0.01,
            max_ratio: 10.0,
            sigma_ref,
        }
    }

    /// `0.01 %` of `|j|` above `threshold`, `10 %` below.
    pub fn two_tier(threshold: f64) -> Self {
        StepRule::TwoTier {
            threshold,
            high: 1e-4,
            low: 0.1,
        }
    }

    pub fn length(&self, sigma: f64, current: f64) -> f64 {
        match *self {
            StepRule::ConductivityScaled {
                base,
                min_ratio,
                max_ratio,
                sigma_ref,
            } => base * (sigma_ref / sigma).clamp(min_ratio, max_ratio),
            StepRule::TwoTier {
                threshold,
                high,
                low,
            } => {
                if sigma > threshold {
                    high * current
                } else {
                    low * current
                }
            }
            StepRule::Fixed { step } => step,
        }
    }

    fn validate(&self) -> Result<()> {
        let ok = match *self {
            StepRule::ConductivityScaled {
                base,
                min_ratio,
                max_ratio,
                sigma_ref,
            } => base > 0.0 && min_ratio > 0.0 && max_ratio >= min_ratio && sigma_ref > 0.0,
            StepRule::TwoTier {
                threshold,
                high,
                low,
            } => threshold.is_finite() && high > 0.0 && low > 0.0,
            StepRule::Fixed { step } => step > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::invalid(format!("invalid step rule {self:?}")))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Integrator {
    Euler,
    /// Direction taken at the midpoint of a trial step.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub rule: StepRule,
    pub integrator: Integrator,
    pub max_steps: usize,
    /// Follow `−j` instead of `j`.
    pub backward: bool,
}

impl TraceConfig {
    pub fn new(rule: StepRule) -> Self {
        TraceConfig {
            rule,
            integrator: Integrator::Midpoint,
            max_steps: 20_000,
            backward: false,
        }
    }

    pub fn reversed(self) -> Self {
        TraceConfig {
            backward: !self.backward,
            ..self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    BoundaryExit,
    MaxSteps,
    Stagnation,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Streamline {
    pub points: Vec<Point>,
    pub termination: Termination,
}

// Smallest t ≥ 0 with |from + t·dir| = 1, for |from| ≤ 1 and |dir| = 1.
fn exit_distance(from: Point, dir: [f64; 2]) -> f64 {
    let b = from.x1 * dir[0] + from.x2 * dir[1];
    let c = from.x1 * from.x1 + from.x2 * from.x2 - 1.0;
    let disc = (b * b - c).max(0.0);
    (-b + disc.sqrt()).max(0.0)
}

fn onto_disk(p: Point) -> Point {
    let r = p.norm();
    if r > 1.0 {
        Point::new(p.x1 / r, p.x2 / r)
    } else {
        p
    }
}

/// Follows the current from `start` until it leaves the unit disk, stalls,
/// or `max_steps` steps have been taken.
///
/// Every step has exactly the length prescribed by the rule at the point it
/// starts from; only the final step of a boundary exit is shortened to end
/// on the circle.
pub fn trace_streamline<J, S>(
    current: &J,
    conductivity: &S,
    start: Point,
    cfg: &TraceConfig,
) -> Result<Streamline>
where
    J: Fn(Point) -> Result<[f64; 2]> + ?Sized,
    S: Fn(Point) -> f64 + ?Sized,
{
    cfg.rule.validate()?;
    if !start.is_finite() || start.norm() > 1.0 {
        return Err(Error::invalid(format!(
            "streamline seed {start} lies outside the unit disk"
        )));
    }
    let sign = if cfg.backward { -1.0 } else { 1.0 };
    let direction = |p: Point| -> Result<Option<([f64; 2], f64)>> {
        let j = current(p)?;
        let norm = j[0].hypot(j[1]);
        if !norm.is_finite() {
            return Err(Error::NonFinite { at: p });
        }
        if norm < STAGNATION {
            return Ok(None);
        }
        Ok(Some(([sign * j[0] / norm, sign * j[1] / norm], norm)))
    };

    let mut points = vec![start];
    let mut here = start;
    for _ in 0..cfg.max_steps {
        let Some((d0, norm)) = direction(here)? else {
            return Ok(Streamline {
                points,
                termination: Termination::Stagnation,
            });
        };
        let length = cfg.rule.length(conductivity(here), norm);
        let dir = match cfg.integrator {
            Integrator::Euler => d0,
            Integrator::Midpoint => {
                let mid = Point::new(
                    here.x1 + 0.5 * length * d0[0],
                    here.x2 + 0.5 * length * d0[1],
                );
                if mid.norm() > 1.0 {
                    d0
                } else {
                    match direction(mid)? {
                        Some((d, _)) => d,
                        None => {
                            return Ok(Streamline {
                                points,
                                termination: Termination::Stagnation,
                            })
                        }
                    }
                }
            }
        };
        let next = Point::new(here.x1 + length * dir[0], here.x2 + length * dir[1]);
        if next.norm() > 1.0 {
            let t = exit_distance(here, dir).min(length);
            points.push(onto_disk(Point::new(
                here.x1 + t * dir[0],
                here.x2 + t * dir[1],
            )));
            return Ok(Streamline {
                points,
                termination: Termination::BoundaryExit,
            });
        }
        points.push(next);
        here = next;
    }
    Ok(Streamline {
        points,
        termination: Termination::MaxSteps,
    })
}

/// Traces forward and backward from `start` and joins the two halves into
/// one line oriented along the current.
pub fn trace_both_ways<J, S>(
    current: &J,
    conductivity: &S,
    start: Point,
    cfg: &TraceConfig,
) -> Result<[Streamline; 2]>
where
    J: Fn(Point) -> Result<[f64; 2]> + ?Sized,
    S: Fn(Point) -> f64 + ?Sized,
{
    let forward_cfg = TraceConfig {
        backward: false,
        ..*cfg
    };
    let forward = trace_streamline(current, conductivity, start, &forward_cfg)?;
    let mut backward = trace_streamline(current, conductivity, start, &forward_cfg.reversed())?;
    backward.points.reverse();
    Ok([backward, forward])
}

/// `count` seeds evenly spaced on the circle of radius `radius`, starting at
/// angle `phase` measured from the `x1` axis.
pub fn ring_seeds(radius: f64, count: usize, phase: f64) -> Vec<Point> {
    (0..count)
        .map(|k| {
            let t = phase + TAU * k as f64 / count as f64;
            Point::new(radius * t.cos(), radius * t.sin())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(_: Point) -> Result<[f64; 2]> {
        Ok([1.0, 0.0])
    }

    fn saddle(p: Point) -> Result<[f64; 2]> {
        Ok([-p.x1, p.x2])
    }

    fn unit(_: Point) -> f64 {
        1.0
    }

    fn step_len(a: Point, b: Point) -> f64 {
        (b.x1 - a.x1).hypot(b.x2 - a.x2)
    }

    #[test]
    fn uniform_current_exits_on_the_right() {
        let cfg = TraceConfig::new(StepRule::conductivity_scaled(1.0));
        let line = trace_streamline(&uniform, &unit, Point::ORIGIN, &cfg).unwrap();
        assert_eq!(line.termination, Termination::BoundaryExit);
        assert!(line
            .points
            .windows(2)
            .all(|w| w[1].x1 > w[0].x1 && w[1].x2 == 0.0));
        let last = *line.points.last().unwrap();
        assert!((last.x1 - 1.0).abs() < 1e-12 && last.norm() <= 1.0);
    }

    #[test]
    fn step_lengths_follow_the_rule() {
        let sigma = |p: Point| (6.0 * p.x1 + 2.0 * p.x2).exp();
        let cfg = TraceConfig::new(StepRule::conductivity_scaled(1.0));
        let line = trace_streamline(&saddle, &sigma, Point::new(0.5, 0.01), &cfg).unwrap();
        let n = line.points.len();
        for w in line.points[..n - 1].windows(2) {
            let expected = cfg.rule.length(sigma(w[0]), 0.0);
            assert!((step_len(w[0], w[1]) - expected).abs() <= 1e-12 * expected.max(1.0));
            assert!((1e-4 - 1e-15..=0.1 + 1e-15).contains(&expected));
        }
        assert!(line.points.iter().all(|p| p.norm() <= 1.0));
    }

    #[test]
    fn saddle_conserves_the_product() {
        let cfg = TraceConfig {
            max_steps: 100_000,
            ..TraceConfig::new(StepRule::Fixed { step: 1e-3 })
        };
        let start = Point::new(0.5, 0.001);
        let line = trace_streamline(&saddle, &unit, start, &cfg).unwrap();
        assert_eq!(line.termination, Termination::BoundaryExit);
        let invariant = start.x1 * start.x2;
        for w in line.points.windows(2) {
            assert!(w[1].x1 < w[0].x1 && w[1].x2 > w[0].x2);
        }
        let drift = line
            .points
            .iter()
            .map(|p| (p.x1 * p.x2 - invariant).abs())
            .fold(0.0, f64::max);
        assert!(drift < 1e-6, "{drift}");
        let euler = TraceConfig {
            integrator: Integrator::Euler,
            ..cfg
        };
        let rough = trace_streamline(&saddle, &unit, start, &euler).unwrap();
        let drift_euler = rough
            .points
            .iter()
            .map(|p| (p.x1 * p.x2 - invariant).abs())
            .fold(0.0, f64::max);
        assert!(drift_euler > drift);
    }

    #[test]
    fn stagnation_point() {
        let cfg = TraceConfig::new(StepRule::Fixed { step: 0.01 });
        let line = trace_streamline(&saddle, &unit, Point::ORIGIN, &cfg).unwrap();
        assert_eq!(line.termination, Termination::Stagnation);
        assert_eq!(line.points, vec![Point::ORIGIN]);
    }

    #[test]
    fn max_steps_and_bad_input() {
        let cfg = TraceConfig {
            max_steps: 5,
            ..TraceConfig::new(StepRule::Fixed { step: 0.01 })
        };
        let line = trace_streamline(&uniform, &unit, Point::ORIGIN, &cfg).unwrap();
        assert_eq!(line.termination, Termination::MaxSteps);
        assert_eq!(line.points.len(), 6);
        assert!(trace_streamline(&uniform, &unit, Point::new(1.0, 1.0), &cfg).is_err());
        let bad = TraceConfig::new(StepRule::Fixed { step: -1.0 });
        assert!(trace_streamline(&uniform, &unit, Point::ORIGIN, &bad).is_err());
    }

    #[test]
    fn two_tier_rule() {
        let rule = StepRule::two_tier(1.0);
        assert!((rule.length(2.0, 3.0) - 3e-4).abs() < 1e-18);
        assert!((rule.length(0.5, 3.0) - 0.3).abs() < 1e-15);
    }

    #[test]
    fn both_ways_are_joined() {
        let cfg = TraceConfig::new(StepRule::Fixed { step: 0.05 });
        let [back, fwd] = trace_both_ways(&uniform, &unit, Point::new(0.0, 0.5), &cfg).unwrap();
        assert!(back.points.first().unwrap().x1 < -0.8);
        assert_eq!(*back.points.last().unwrap(), Point::new(0.0, 0.5));
        assert!(fwd.points.last().unwrap().x1 > 0.8);
    }

    #[test]
    fn ring() {
        let seeds = ring_seeds(0.5, 4, 0.0);
        assert_eq!(seeds[0], Point::new(0.5, 0.0));
        assert!((seeds[1].x2 - 0.5).abs() < 1e-15);
    }
}
