//! Piecewise separable conductivities fitted to samples on horizontal lines.
//!
//! Samples `σ(x1, z_j)` taken along rows `x2 = z_j` are interpolated row by
//! row into `f_j(x1)`. With an offset `K` such that `x2 + K` never vanishes,
//! each row defines a band of the plane in which
//!
//! ```text
//! σ(x1, x2) = (x2 + K) · α_j(x1),   α_j = f_j / (z_j + K)
//! ```
//!
//! is exactly separable and matches the samples on the row itself. Band
//! boundaries sit halfway between adjacent rows.

mod interp;

use std::io::Read;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::Medium;
use crate::formal_powers::Profile;
use crate::pseudoanalytic::Point;

pub use interp::{Interp, Interpolant};

/// Default tolerance for grouping samples into rows by their `x2`.
pub const ROW_TOLERANCE: f64 = 1e-12;

/// `|x2 + K|` must stay at least this large over the fitted range.
pub const OFFSET_MARGIN: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRow {
    pub ordinate: f64,
    /// `(x1, σ)` pairs with strictly increasing `x1`.
    pub nodes: Vec<[f64; 2]>,
}

/// Conductivity samples on rows of constant `x2`, sorted by decreasing `x2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleGrid {
    rows: Vec<SampleRow>,
}

#[derive(Debug, Deserialize)]
struct CsvSample {
    x1: f64,
    x2: f64,
    sigma: f64,
}

impl SampleGrid {
    pub fn new(mut rows: Vec<SampleRow>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::invalid("no sample rows"));
        }
        for row in &mut rows {
            if !row.ordinate.is_finite() {
                return Err(Error::invalid("row ordinate is not finite"));
            }
            if row.nodes.len() < 2 {
                return Err(Error::invalid(format!(
                    "row x2 = {} needs at least two samples",
                    row.ordinate
                )));
            }
            for n in &row.nodes {
                if !n[0].is_finite() || !n[1].is_finite() {
                    return Err(Error::invalid(format!(
                        "non-finite sample in row x2 = {}",
                        row.ordinate
                    )));
                }
                if n[1] <= 0.0 {
                    return Err(Error::invalid(format!(
                        "conductivity must be positive, got {} at ({}, {})",
                        n[1], n[0], row.ordinate
                    )));
                }
            }
            row.nodes.sort_by(|a, b| a[0].total_cmp(&b[0]));
            if row.nodes.windows(2).any(|w| w[0][0] == w[1][0]) {
                return Err(Error::invalid(format!(
                    "duplicate x1 in row x2 = {}",
                    row.ordinate
                )));
            }
        }
        rows.sort_by(|a, b| b.ordinate.total_cmp(&a.ordinate));
        if rows.windows(2).any(|w| w[0].ordinate == w[1].ordinate) {
            return Err(Error::invalid("duplicate row ordinates"));
        }
        Ok(SampleGrid { rows })
    }

    /// Groups scattered `(x1, x2, σ)` samples into rows whose ordinates agree
    /// within `tolerance`.
    pub fn from_points(points: &[[f64; 3]], tolerance: f64) -> Result<Self> {
        let mut sorted = points.to_vec();
        sorted.sort_by(|a, b| b[1].total_cmp(&a[1]).then(a[0].total_cmp(&b[0])));
        let mut rows: Vec<SampleRow> = Vec::new();
        for p in sorted {
            match rows.last_mut() {
                Some(row) if (row.ordinate - p[1]).abs() <= tolerance => {
                    row.nodes.push([p[0], p[2]])
                }
                _ => rows.push(SampleRow {
                    ordinate: p[1],
                    nodes: vec![[p[0], p[2]]],
                }),
            }
        }
        Self::new(rows)
    }

    /// Reads a CSV file with columns `x1, x2, sigma`.
    pub fn from_csv<R: Read>(reader: R, tolerance: f64) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut points = Vec::new();
        for record in rdr.deserialize() {
            let s: CsvSample = record?;
            points.push([s.x1, s.x2, s.sigma]);
        }
        Self::from_points(&points, tolerance)
    }

    /// Samples `sigma` at every combination of the given abscissae and ordinates.
    pub fn sample(sigma: impl Fn(Point) -> f64, x1s: &[f64], x2s: &[f64]) -> Result<Self> {
        let rows = x2s
            .iter()
            .map(|&x2| SampleRow {
                ordinate: x2,
                nodes: x1s
                    .iter()
                    .map(|&x1| [x1, sigma(Point::new(x1, x2))])
                    .collect(),
            })
            .collect();
        Self::new(rows)
    }

    pub fn rows(&self) -> &[SampleRow] {
        &self.rows
    }

    /// `(lowest, highest)` ordinate.
    pub fn ordinate_range(&self) -> (f64, f64) {
        (
            self.rows[self.rows.len() - 1].ordinate,
            self.rows[0].ordinate,
        )
    }
}

/// One band `lo ≤ x2 < hi` of a fitted conductivity.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
    pub ordinate: f64,
    pub nodes: Vec<[f64; 2]>,
    pub interp: Interp,
    #[serde(skip)]
    row: Option<Interpolant>,
}

impl PartialEq for Band {
    fn eq(&self, o: &Band) -> bool {
        self.lo == o.lo
            && self.hi == o.hi
            && self.ordinate == o.ordinate
            && self.nodes == o.nodes
            && self.interp == o.interp
    }
}

impl Band {
    fn new(lo: f64, hi: f64, row: &SampleRow, interp: Interp) -> Self {
        Band {
            lo,
            hi,
            ordinate: row.ordinate,
            nodes: row.nodes.clone(),
            interp,
            row: Some(Interpolant::new(&row.nodes, interp)),
        }
    }

    fn row(&self) -> Interpolant {
        match &self.row {
            Some(r) => r.clone(),
            None => Interpolant::new(&self.nodes, self.interp),
        }
    }

    /// The row interpolant `f_j(x1)`.
    pub fn row_value(&self, x1: f64) -> f64 {
        match &self.row {
            Some(r) => r.eval(x1),
            None => Interpolant::new(&self.nodes, self.interp).eval(x1),
        }
    }
}

/// `σ(x1, x2) = (x2 + K)·α_j(x1)` on horizontal bands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseSeparableSigma {
    #[serde(rename = "K")]
    pub k: f64,
    pub bands: Vec<Band>,
}

/// Checks that `x2 + K` keeps one sign and stays away from zero on `[lo, hi]`.
pub fn check_offset(k: f64, lo: f64, hi: f64) -> Result<()> {
    let (a, b) = (lo + k, hi + k);
    if !k.is_finite() || a.signum() != b.signum() || a.abs().min(b.abs()) < OFFSET_MARGIN {
        return Err(Error::invalid(format!(
            "offset K = {k} violates |x2 + K| >= {OFFSET_MARGIN:e} without a sign change on x2 in [{lo}, {hi}]"
        )));
    }
    Ok(())
}

/// Fits over the span of the row ordinates.
pub fn fit(grid: &SampleGrid, k: Option<f64>, interp: Interp) -> Result<PiecewiseSeparableSigma> {
    let (lo, hi) = grid.ordinate_range();
    fit_over(grid, k, interp, lo, hi)
}

/// Fits with the outer bands stretched to cover `x2 ∈ [lo, hi]`. The default
/// offset is `K = 1 − lo`, which makes `x2 + K ≥ 1`.
pub fn fit_over(
    grid: &SampleGrid,
    k: Option<f64>,
    interp: Interp,
    lo: f64,
    hi: f64,
) -> Result<PiecewiseSeparableSigma> {
    let (row_lo, row_hi) = grid.ordinate_range();
    if !(lo <= row_lo && hi >= row_hi) {
        return Err(Error::invalid(format!(
            "fit range [{lo}, {hi}] must contain every row ordinate ([{row_lo}, {row_hi}])"
        )));
    }
    let k = k.unwrap_or(1.0 - lo);
    check_offset(k, lo, hi)?;
    let rows = grid.rows();
    let bands = rows
        .iter()
        .enumerate()
        .map(|(j, row)| {
            let top = if j == 0 {
                hi
            } else {
                0.5 * (rows[j - 1].ordinate + row.ordinate)
            };
            let bottom = if j + 1 == rows.len() {
                lo
            } else {
                0.5 * (row.ordinate + rows[j + 1].ordinate)
            };
            Band::new(bottom, top, row, interp)
        })
        .collect();
    Ok(PiecewiseSeparableSigma { k, bands })
}

impl PiecewiseSeparableSigma {
    pub fn from_json(text: &str) -> Result<Self> {
        let fitted: PiecewiseSeparableSigma = serde_json::from_str(text)?;
        fitted.validate()?;
        Ok(fitted)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    fn validate(&self) -> Result<()> {
        if self.bands.is_empty() {
            return Err(Error::invalid("fit has no bands"));
        }
        for (j, band) in self.bands.iter().enumerate() {
            let rows = SampleGrid::new(vec![SampleRow {
                ordinate: band.ordinate,
                nodes: band.nodes.clone(),
            }])?;
            if band.nodes != rows.rows[0].nodes {
                return Err(Error::invalid(format!(
                    "band {j}: nodes must be sorted by x1"
                )));
            }
            if !(band.lo <= band.ordinate && band.ordinate <= band.hi) {
                return Err(Error::invalid(format!(
                    "band {j}: ordinate outside [lo, hi]"
                )));
            }
            if j > 0 && self.bands[j - 1].lo != band.hi {
                return Err(Error::invalid(format!(
                    "bands {} and {j} leave a gap or overlap",
                    j - 1
                )));
            }
        }
        let (lo, hi) = self.x2_range();
        check_offset(self.k, lo, hi)
    }

    /// `(lowest, highest)` `x2` covered by the bands.
    pub fn x2_range(&self) -> (f64, f64) {
        (self.bands[self.bands.len() - 1].lo, self.bands[0].hi)
    }

    /// Index of the band containing `x2`: `lo ≤ x2 < hi`, except that the
    /// topmost band also contains its upper edge.
    pub fn band_index(&self, x2: f64) -> Option<usize> {
        self.bands
            .iter()
            .enumerate()
            .position(|(j, b)| (b.lo <= x2 && x2 < b.hi) || (j == 0 && x2 == b.hi))
    }

    /// `α_j(x1)`; `x1` outside the row's samples is clamped to the nearest end.
    pub fn alpha(&self, band: usize, x1: f64) -> f64 {
        let b = &self.bands[band];
        b.row_value(x1) / (b.ordinate + self.k)
    }

    /// `(x2 + K)·α_j(x1)` using band `band` regardless of where `x2` lies.
    pub fn evaluate_in(&self, band: usize, at: Point) -> f64 {
        (at.x2 + self.k) * self.alpha(band, at.x1)
    }

    pub fn evaluate(&self, at: Point) -> Result<f64> {
        let band = self.band_index(at.x2).ok_or(Error::OutsideDomain {
            x1: at.x1,
            x2: at.x2,
        })?;
        Ok(self.evaluate_in(band, at))
    }

    /// Rank-one defect `max |σ(a,b)σ(c,d) − σ(a,d)σ(c,b)|` over an `n × n`
    /// sample of the band, relative to the largest `σ²` seen.
    pub fn separability_check(&self, band: usize, n: usize) -> Result<f64> {
        let b = self
            .bands
            .get(band)
            .ok_or_else(|| Error::invalid(format!("no band {band}")))?;
        let (x_lo, x_hi) = b.row().span();
        let n = n.max(2);
        let xs: Vec<f64> = (0..n)
            .map(|k| x_lo + (x_hi - x_lo) * k as f64 / (n - 1) as f64)
            .collect();
        let ys: Vec<f64> = (0..n)
            .map(|k| b.lo + (b.hi - b.lo) * k as f64 / n as f64)
            .collect();
        Ok(rank_one_defect(&|p| self.evaluate_in(band, p), &xs, &ys))
    }

    /// The same defect for a sample whose rows lie at `x2_a` and `x2_b`,
    /// looked up through [`evaluate`](Self::evaluate). Nonzero when the two
    /// ordinates fall into bands with different profiles.
    pub fn straddle_defect(&self, x2_a: f64, x2_b: f64, n: usize) -> Result<f64> {
        let (x_lo, x_hi) = self.bands[0].row().span();
        let n = n.max(2);
        let xs: Vec<f64> = (0..n)
            .map(|k| x_lo + (x_hi - x_lo) * k as f64 / (n - 1) as f64)
            .collect();
        for x2 in [x2_a, x2_b] {
            self.evaluate(Point::new(x_lo, x2))?;
        }
        Ok(rank_one_defect(
            &|p| self.evaluate(p).unwrap_or(f64::NAN),
            &xs,
            &[x2_a, x2_b],
        ))
    }

    /// Largest jump `|σ_above − σ_below|` across each interior band boundary,
    /// scanned at `n` abscissae; one entry per boundary, top to bottom.
    pub fn boundary_jumps(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        self.bands
            .windows(2)
            .enumerate()
            .map(|(j, pair)| {
                let (x_lo, x_hi) = pair[0].row().span();
                let edge = pair[0].lo;
                (0..n)
                    .map(|k| {
                        let x1 = x_lo + (x_hi - x_lo) * k as f64 / (n - 1) as f64;
                        (self.evaluate_in(j, Point::new(x1, edge))
                            - self.evaluate_in(j + 1, Point::new(x1, edge)))
                        .abs()
                    })
                    .fold(0.0, f64::max)
            })
            .collect()
    }

    /// The band containing `x2 = 0`, extended to the whole plane as the
    /// separable medium `|α_j(x1)|·|x2 + K|`.
    pub fn central_medium(&self) -> Result<(usize, Medium)> {
        let band = self
            .band_index(0.0)
            .ok_or(Error::OutsideDomain { x1: 0.0, x2: 0.0 })?;
        Ok((band, self.band_medium(band)))
    }

    pub fn band_medium(&self, band: usize) -> Medium {
        let b = &self.bands[band];
        let row = Arc::new(b.row());
        let scale = 1.0 / (b.ordinate + self.k);
        let value_row = row.clone();
        let s1 = Profile::custom_with_log_derivative(
            move |x1| (scale * value_row.eval(x1)).abs(),
            move |x1| row.derivative(x1) / row.eval(x1),
        );
        let k = self.k;
        let s2 =
            Profile::custom_with_log_derivative(move |x2| (x2 + k).abs(), move |x2| 1.0 / (x2 + k));
        Medium::Separable { s1, s2 }
    }
}

fn rank_one_defect(sigma: &dyn Fn(Point) -> f64, xs: &[f64], ys: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for &a in xs {
        for &c in xs {
            for &b in ys {
                for &d in ys {
                    let ab = sigma(Point::new(a, b));
                    let cd = sigma(Point::new(c, d));
                    let ad = sigma(Point::new(a, d));
                    let cb = sigma(Point::new(c, b));
                    worst = worst.max((ab * cd - ad * cb).abs());
                    scale = scale.max(ab * ab);
                }
            }
        }
    }
    if scale > 0.0 {
        worst / scale
    } else {
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::linspace;

    fn constant_two_rows() -> PiecewiseSeparableSigma {
        let grid = SampleGrid::sample(|_| 1.0, &[-1.0, 0.0, 1.0], &[0.5, -0.5]).unwrap();
        fit(&grid, Some(2.0), Interp::Pchip).unwrap()
    }

    #[test]
    fn two_constant_rows() {
        let f = constant_two_rows();
        assert_eq!(f.bands.len(), 2);
        assert!((f.alpha(0, 0.3) - 1.0 / 2.5).abs() < 1e-15);
        assert!((f.alpha(1, 0.3) - 1.0 / 1.5).abs() < 1e-15);
        assert!((f.evaluate(Point::new(0.7, 0.5)).unwrap() - 1.0).abs() < 1e-15);
        assert!((f.evaluate(Point::new(0.0, 0.25)).unwrap() - 0.9).abs() < 1e-15);
        assert_eq!(f.separability_check(0, 6).unwrap(), 0.0);
    }

    #[test]
    fn band_lookup_is_half_open() {
        let f = constant_two_rows();
        assert_eq!(f.band_index(0.0), Some(0));
        assert_eq!(f.band_index(-1e-15), Some(1));
        assert_eq!(f.band_index(0.5), Some(0));
        assert_eq!(f.band_index(-0.5), Some(1));
        assert_eq!(f.band_index(0.6), None);
        assert!(matches!(
            f.evaluate(Point::new(0.0, 0.6)),
            Err(Error::OutsideDomain { .. })
        ));
        // the jump at x2 = 0 is (2/2.5 − 2/1.5)
        let jumps = f.boundary_jumps(5);
        assert!((jumps[0] - (2.0 / 1.5 - 2.0 / 2.5)).abs() < 1e-15);
    }

    #[test]
    fn single_row_reproduces_its_samples() {
        let xs = linspace(-1.0, 1.0, 7);
        let grid = SampleGrid::sample(|p| (2.0 * p.x1).exp(), &xs, &[0.0]).unwrap();
        let f = fit(&grid, Some(1.0), Interp::Pchip).unwrap();
        for &x in &xs {
            assert_eq!(f.evaluate(Point::new(x, 0.0)).unwrap(), (2.0 * x).exp());
        }
    }

    #[test]
    fn exponential_grid() {
        let axis = linspace(-1.0, 1.0, 5);
        let source = |p: Point| (2.0 * p.x1 + 2.0 * p.x2).exp();
        let grid = SampleGrid::sample(source, &axis, &axis).unwrap();
        for interp in [Interp::Linear, Interp::Pchip] {
            let f = fit(&grid, Some(3.0), interp).unwrap();
            for &x1 in &axis {
                for &x2 in &axis {
                    let p = Point::new(x1, x2);
                    assert!((f.evaluate(p).unwrap() - source(p)).abs() <= 1e-12 * source(p));
                }
            }
            for band in 0..f.bands.len() {
                assert!(f.separability_check(band, 7).unwrap() < 1e-12);
            }
            // off the rows the fit is only approximate
            let p = Point::new(0.1, 0.3);
            assert!((f.evaluate(p).unwrap() - source(p)).abs() > 1e-3);
            // rows of a separable source share one profile, so no defect appears
            assert!(f.straddle_defect(0.9, -0.9, 5).unwrap() < 1e-12);
        }
    }

    #[test]
    fn straddling_bands_breaks_separability() {
        let axis = linspace(-1.0, 1.0, 5);
        let grid = SampleGrid::sample(|p| (p.x1 * p.x2).exp(), &axis, &axis).unwrap();
        let f = fit(&grid, None, Interp::Pchip).unwrap();
        assert!(f.separability_check(0, 5).unwrap() < 1e-12);
        assert!(f.straddle_defect(0.9, -0.9, 5).unwrap() > 1e-2);
    }

    #[test]
    fn default_offset_and_violations() {
        let grid = SampleGrid::sample(|_| 1.0, &[0.0, 1.0], &[-0.5, 0.5]).unwrap();
        assert_eq!(fit(&grid, None, Interp::Linear).unwrap().k, 1.5);
        assert!(fit(&grid, Some(0.0), Interp::Linear).is_err());
        assert!(fit(&grid, Some(0.5), Interp::Linear).is_err());
        assert!(fit(&grid, Some(-0.5 - 1e-9), Interp::Linear).is_err());
        assert!(fit(&grid, Some(-0.6), Interp::Linear).is_ok());
    }

    #[test]
    fn grid_validation() {
        assert!(SampleGrid::new(vec![]).is_err());
        assert!(SampleGrid::sample(|_| 1.0, &[0.0], &[0.0]).is_err());
        assert!(SampleGrid::sample(|_| -1.0, &[0.0, 1.0], &[0.0]).is_err());
        assert!(SampleGrid::sample(|_| 1.0, &[0.0, 1.0], &[0.0, 0.0]).is_err());
        let g = SampleGrid::sample(|_| 1.0, &[1.0, 0.0], &[-1.0, 2.0]).unwrap();
        assert_eq!(g.rows()[0].ordinate, 2.0);
        assert_eq!(g.rows()[0].nodes[0][0], 0.0);
    }

    #[test]
    fn csv_ingestion_groups_rows() {
        let text =
            "x1,x2,sigma\n0,0.5,1\n1,0.5,2\n0,-0.5,3\n1, -0.5 ,4\n0.5,0.5000000000000001,1.5\n";
        let g = SampleGrid::from_csv(text.as_bytes(), ROW_TOLERANCE).unwrap();
        assert_eq!(g.rows().len(), 2);
        assert_eq!(g.rows()[0].nodes.len(), 3);
        assert!(SampleGrid::from_csv("x1,x2\n0,1\n".as_bytes(), ROW_TOLERANCE).is_err());
    }

    #[test]
    fn json_round_trip() {
        let axis = linspace(-1.0, 1.0, 5);
        let grid = SampleGrid::sample(|p| (2.0 * p.x1 + p.x2).exp(), &axis, &axis).unwrap();
        let f = fit(&grid, None, Interp::Pchip).unwrap();
        let back = PiecewiseSeparableSigma::from_json(&f.to_json().unwrap()).unwrap();
        assert_eq!(back, f);
        let p = Point::new(0.123, -0.456);
        assert_eq!(back.evaluate(p).unwrap(), f.evaluate(p).unwrap());
        assert!(f.to_json().unwrap().contains("\"K\""));
        assert!(PiecewiseSeparableSigma::from_json(r#"{"K": 1.0, "bands": []}"#).is_err());
    }

    #[test]
    fn central_medium_matches_the_fit() {
        let axis = linspace(-1.0, 1.0, 5);
        let grid = SampleGrid::sample(|p| (2.0 * p.x1 + 2.0 * p.x2).exp(), &axis, &axis).unwrap();
        let f = fit(&grid, None, Interp::Pchip).unwrap();
        let (band, medium) = f.central_medium().unwrap();
        let p = Point::new(0.3, 0.1);
        assert_eq!(f.band_index(p.x2), Some(band));
        assert!((medium.conductivity(p) - f.evaluate(p).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn linear_fit_stays_positive() {
        let axis = linspace(-1.0, 1.0, 4);
        let grid = SampleGrid::sample(|p| 1e-3 + (p.x1 * 5.0).sin().powi(2), &axis, &axis).unwrap();
        let f = fit(&grid, None, Interp::Linear).unwrap();
        for x1 in linspace(-1.2, 1.2, 50) {
            for x2 in linspace(-1.0, 1.0, 50) {
                assert!(f.evaluate(Point::new(x1, x2)).unwrap() > 0.0);
            }
        }
    }
}
