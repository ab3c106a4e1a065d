//! Sampling grids over the unit disk.

use crate::pseudoanalytic::Point;

/// Uniformly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Points of the `n × n` grid on `[−1, 1]²` lying in the closed unit disk,
/// with `x1` as the outer (slower) index.
pub fn disk_grid(n: usize) -> Vec<Point> {
    disk_grid_within(n, 1.0)
}

/// Grid points of `[−1, 1]²` with `|x| ≤ radius`.
pub fn disk_grid_within(n: usize, radius: f64) -> Vec<Point> {
    let axis = linspace(-1.0, 1.0, n);
    let mut points = Vec::with_capacity(n * n);
    for &x1 in &axis {
        for &x2 in &axis {
            let p = Point::new(x1, x2);
            if p.norm() <= radius {
                points.push(p);
            }
        }
    }
    points
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_shape() {
        assert_eq!(linspace(-1.0, 1.0, 3), vec![-1.0, 0.0, 1.0]);
        let g = disk_grid(41);
        assert!(g.iter().all(|p| p.norm() <= 1.0));
        assert!(g.contains(&Point::new(0.0, 1.0)) && g.contains(&Point::ORIGIN));
        assert_eq!(g[0].x1, -1.0);
        assert!(disk_grid_within(21, 0.9).len() < disk_grid(21).len());
    }
}
