use super::{Domain, NeighbourGrid, NodeSet, Point};
use crate::{Error, Result};

/// Neighbours of one centre node with their offsets `x_j - x_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct Stencil {
    pub centre: usize,
    pub neighbours: Vec<usize>,
    pub offsets: Vec<Point>,
}

impl Stencil {
    pub fn len(&self) -> usize {
        self.neighbours.len()
    }

    pub fn is_empty(&self) -> bool {
        self.neighbours.is_empty()
    }

    /// Largest neighbour distance.
    pub fn radius(&self) -> f64 {
        self.offsets
            .iter()
            .map(|o| (o[0] * o[0] + o[1] * o[1]).sqrt())
            .fold(0.0, f64::max)
    }

    /// Smallest neighbour distance.
    pub fn min_distance(&self) -> f64 {
        self.offsets
            .iter()
            .map(|o| (o[0] * o[0] + o[1] * o[1]).sqrt())
            .fold(f64::INFINITY, f64::min)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Selector {
    /// All nodes strictly closer than the radius.
    Radius(f64),
    /// The `k` nearest nodes, ties broken by index.
    Count(usize),
}

fn half_period(domain: &Domain) -> f64 {
    match domain {
        Domain::PeriodicRectangle { size, .. } => 0.5 * size[0].min(size[1]),
        Domain::Disc { .. } => f64::INFINITY,
    }
}

fn sorted(centre: usize, mut found: Vec<(usize, Point)>) -> Stencil {
    found.retain(|&(j, _)| j != centre);
    found.sort_by(|a, b| {
        let da = a.1[0] * a.1[0] + a.1[1] * a.1[1];
        let db = b.1[0] * b.1[0] + b.1[1] * b.1[1];
        da.total_cmp(&db).then(a.0.cmp(&b.0))
    });
    Stencil {
        centre,
        neighbours: found.iter().map(|f| f.0).collect(),
        offsets: found.iter().map(|f| f.1).collect(),
    }
}

/// Radius stencil of node `i` from a prebuilt grid. Neighbours are ordered by
/// distance, then index.
pub fn stencil_within(nodes: &NodeSet, grid: &NeighbourGrid, i: usize, radius: f64) -> Stencil {
    sorted(i, grid.within(nodes.positions[i], radius))
}

/// Builds one stencil per node.
pub fn build_stencils(nodes: &NodeSet, selector: Selector) -> Result<Vec<Stencil>> {
    let n = nodes.len();
    let half = half_period(&nodes.domain);
    match selector {
        Selector::Radius(radius) => {
            if !(radius > 0.0) {
                return Err(Error::InvalidInput(format!("stencil radius {radius}")));
            }
            if radius > half {
                return Err(Error::InvalidInput(format!(
                    "stencil radius {radius} exceeds half the period {half}"
                )));
            }
            let grid = NeighbourGrid::new(nodes, radius);
            (0..n)
                .map(|i| {
                    let st = stencil_within(nodes, &grid, i, radius);
                    if st.is_empty() {
                        Err(Error::EmptyStencil { node: i })
                    } else {
                        Ok(st)
                    }
                })
                .collect()
        }
        Selector::Count(k) => {
            if k == 0 {
                return Err(Error::InvalidInput("stencil count must be positive".into()));
            }
            if k >= n {
                return Err(Error::InvalidInput(format!(
                    "stencil count {k} must be smaller than the node count {n}"
                )));
            }
            let cell = nodes.spacing * (k as f64 / std::f64::consts::PI).sqrt().max(1.0);
            let grid = NeighbourGrid::new(nodes, cell);
            (0..n)
                .map(|i| {
                    let mut radius = 1.5 * cell;
                    loop {
                        let capped = radius.min(half);
                        let found = grid.within(nodes.positions[i], capped);
                        if found.len() > k {
                            let mut st = sorted(i, found);
                            st.neighbours.truncate(k);
                            st.offsets.truncate(k);
                            return Ok(st);
                        }
                        if capped >= half {
                            return Err(Error::InvalidInput(format!(
                                "{k} neighbours of node {i} do not fit within half the period"
                            )));
                        }
                        radius *= 1.5;
                    }
                })
                .collect()
        }
    }
}
