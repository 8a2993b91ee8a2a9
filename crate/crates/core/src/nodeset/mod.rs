//! Scattered 2-D node sets, their domains, and neighbour stencils.
//!
//! Two domain kinds are supported: doubly periodic rectangles and discs with
//! Dirichlet boundary nodes placed exactly on the circle. Node sets are
//! immutable once generated and can be shared freely between threads.

mod generate;
mod grid;
mod io;
mod stencil;

pub use generate::{generate_nodes, uniform_grid, SHIFT_ITERATIONS};
pub use grid::NeighbourGrid;
pub use io::{read_nodes, write_nodes};
pub use stencil::{build_stencils, stencil_within, Selector, Stencil};

use serde::{Deserialize, Serialize};

/// A point or offset in the plane.
pub type Point = [f64; 2];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Domain {
    /// Axis-aligned rectangle `[origin, origin + size]`, periodic in both directions.
    PeriodicRectangle { origin: Point, size: Point },
    /// Disc with Dirichlet boundary on its circumference.
    Disc { centre: Point, radius: f64 },
}

impl Domain {
    pub fn unit_square() -> Self {
        Self::periodic_square(1.0)
    }

    /// `[0, side]²`, periodic.
    pub fn periodic_square(side: f64) -> Self {
        Domain::PeriodicRectangle {
            origin: [0.0, 0.0],
            size: [side, side],
        }
    }

    /// `[-π lx, π lx] × [-π ly, π ly]`, periodic.
    pub fn centred_periodic(lx: f64, ly: f64) -> Self {
        use std::f64::consts::PI;
        Domain::PeriodicRectangle {
            origin: [-PI * lx, -PI * ly],
            size: [2.0 * PI * lx, 2.0 * PI * ly],
        }
    }

    pub fn disc(radius: f64) -> Self {
        Domain::Disc {
            centre: [0.0, 0.0],
            radius,
        }
    }

    pub fn is_periodic(&self) -> bool {
        matches!(self, Domain::PeriodicRectangle { .. })
    }

    pub fn area(&self) -> f64 {
        match *self {
            Domain::PeriodicRectangle { size, .. } => size[0] * size[1],
            Domain::Disc { radius, .. } => std::f64::consts::PI * radius * radius,
        }
    }

    /// Bounding box as `(lower, upper)`.
    pub fn bounds(&self) -> (Point, Point) {
        match *self {
            Domain::PeriodicRectangle { origin, size } => (origin, [origin[0] + size[0], origin[1] + size[1]]),
            Domain::Disc { centre, radius } => (
                [centre[0] - radius, centre[1] - radius],
                [centre[0] + radius, centre[1] + radius],
            ),
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = match *self {
            Domain::PeriodicRectangle { origin, size } => {
                size[0] > 0.0 && size[1] > 0.0 && origin.iter().all(|v| v.is_finite())
            }
            Domain::Disc { centre, radius } => radius > 0.0 && centre.iter().all(|v| v.is_finite()),
        };
        if ok && self.area().is_finite() {
            Ok(())
        } else {
            Err(crate::Error::InvalidInput(format!("degenerate domain {self:?}")))
        }
    }

    pub fn contains(&self, p: Point) -> bool {
        match *self {
            Domain::PeriodicRectangle { origin, size } => {
                (0..2).all(|d| p[d] >= origin[d] && p[d] < origin[d] + size[d])
            }
            Domain::Disc { centre, radius } => {
                let dx = p[0] - centre[0];
                let dy = p[1] - centre[1];
                dx * dx + dy * dy <= radius * radius * (1.0 + 1e-12)
            }
        }
    }

    /// Maps a point back into the fundamental cell (identity on discs).
    pub fn wrap(&self, p: Point) -> Point {
        match *self {
            Domain::PeriodicRectangle { origin, size } => {
                let mut q = p;
                for d in 0..2 {
                    q[d] = origin[d] + (p[d] - origin[d]).rem_euclid(size[d]);
                    // rem_euclid can round up to exactly size
                    if q[d] >= origin[d] + size[d] {
                        q[d] = origin[d];
                    }
                }
                q
            }
            Domain::Disc { .. } => p,
        }
    }

    /// Minimum-image convention for a separation vector.
    pub fn min_image(&self, d: Point) -> Point {
        match *self {
            Domain::PeriodicRectangle { size, .. } => {
                let mut r = d;
                for k in 0..2 {
                    r[k] -= size[k] * (d[k] / size[k]).round();
                }
                r
            }
            Domain::Disc { .. } => d,
        }
    }

    /// Separation `b - a`, periodicity-adjusted.
    pub fn offset(&self, a: Point, b: Point) -> Point {
        self.min_image([b[0] - a[0], b[1] - a[1]])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeFlag {
    Interior,
    Dirichlet,
}

#[derive(Clone, Debug, PartialEq)]
pub struct NodeSet {
    pub positions: Vec<Point>,
    /// Mean nodal spacing.
    pub spacing: f64,
    pub domain: Domain,
    pub flags: Vec<NodeFlag>,
    pub seed: u64,
}

impl NodeSet {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// `π / s`.
    pub fn nyquist(&self) -> f64 {
        std::f64::consts::PI / self.spacing
    }

    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        self.flags
            .iter()
            .enumerate()
            .filter(|(_, f)| **f == NodeFlag::Interior)
            .map(|(i, _)| i)
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.flags[i] == NodeFlag::Dirichlet
    }

    pub fn x(&self) -> Vec<f64> {
        self.positions.iter().map(|p| p[0]).collect()
    }

    pub fn y(&self) -> Vec<f64> {
        self.positions.iter().map(|p| p[1]).collect()
    }

    /// Distance from each node to its nearest neighbour.
    pub fn nearest_neighbour_distances(&self) -> Vec<f64> {
        let grid = NeighbourGrid::new(self, 2.0 * self.spacing);
        (0..self.len())
            .map(|i| {
                let mut radius = 2.0 * self.spacing;
                loop {
                    let best = grid
                        .within(self.positions[i], radius)
                        .into_iter()
                        .filter(|&(j, _)| j != i)
                        .map(|(_, d)| (d[0] * d[0] + d[1] * d[1]).sqrt())
                        .fold(f64::INFINITY, f64::min);
                    if best.is_finite() || radius > 1e3 * self.spacing {
                        return best;
                    }
                    radius *= 2.0;
                }
            })
            .collect()
    }
}
