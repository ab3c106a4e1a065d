use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::pseudoanalytic::Point;

/// A polygonal path through the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct Path {
    vertices: Vec<Point>,
}

impl Path {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::invalid("a path needs at least two vertices"));
        }
        if let Some(bad) = vertices.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite { at: *bad });
        }
        Ok(Path { vertices })
    }

    pub fn segment(from: Point, to: Point) -> Self {
        Path {
            vertices: vec![from, to],
        }
    }

    /// `from → corner → to`.
    pub fn dog_leg(from: Point, corner: Point, to: Point) -> Self {
        Path {
            vertices: vec![from, corner, to],
        }
    }

    /// A closed regular polygon inscribed in the circle, traversed counter-clockwise
    /// in the `ζ` plane.
    pub fn circle(center: Point, radius: f64, sides: usize) -> Self {
        let sides = sides.max(3);
        let mut vertices: Vec<Point> = (0..sides)
            .map(|k| {
                let t = TAU * k as f64 / sides as f64;
                Point::new(center.x1 + radius * t.sin(), center.x2 + radius * t.cos())
            })
            .collect();
        vertices.push(vertices[0]);
        Path { vertices }
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn is_closed(&self) -> bool {
        self.start() == self.end()
    }

    pub fn segments(&self) -> impl Iterator<Item = (Point, Point)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn length(&self) -> f64 {
        self.segments()
            .map(|(a, b)| (b.x1 - a.x1).hypot(b.x2 - a.x2))
            .sum()
    }
}
