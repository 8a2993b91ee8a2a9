use super::{Domain, NodeSet, Point};

/// Uniform cell list over a domain's bounding box.
///
/// Queries return each node at most once, using the minimum image on
/// periodic domains, so query radii must not exceed half the period.
#[derive(Clone, Debug)]
pub struct NeighbourGrid {
    domain: Domain,
    lower: Point,
    cell: [f64; 2],
    dims: [usize; 2],
    cells: Vec<Vec<usize>>,
    points: Vec<Point>,
}

impl NeighbourGrid {
    pub fn new(nodes: &NodeSet, cell: f64) -> Self {
        let mut grid = Self::empty(nodes.domain, cell);
        for &p in &nodes.positions {
            grid.insert(p);
        }
        grid
    }

    pub fn empty(domain: Domain, cell: f64) -> Self {
        let (lower, upper) = domain.bounds();
        let mut dims = [1usize; 2];
        let mut width = [0.0; 2];
        for d in 0..2 {
            let extent = upper[d] - lower[d];
            dims[d] = ((extent / cell).floor() as usize).clamp(1, 1 << 14);
            width[d] = extent / dims[d] as f64;
        }
        NeighbourGrid {
            domain,
            lower,
            cell: width,
            dims,
            cells: vec![Vec::new(); dims[0] * dims[1]],
            points: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    fn cell_of(&self, p: Point) -> [usize; 2] {
        let mut c = [0usize; 2];
        for d in 0..2 {
            let k = ((p[d] - self.lower[d]) / self.cell[d]).floor();
            c[d] = (k.max(0.0) as usize).min(self.dims[d] - 1);
        }
        c
    }

    /// Appends a point and returns its index.
    pub fn insert(&mut self, p: Point) -> usize {
        let idx = self.points.len();
        let c = self.cell_of(p);
        self.cells[c[0] + self.dims[0] * c[1]].push(idx);
        self.points.push(p);
        idx
    }

    /// Moves point `idx` to `p`.
    pub fn relocate(&mut self, idx: usize, p: Point) {
        let old = self.cell_of(self.points[idx]);
        let new = self.cell_of(p);
        if old != new {
            let cell = &mut self.cells[old[0] + self.dims[0] * old[1]];
            if let Some(pos) = cell.iter().position(|&k| k == idx) {
                cell.swap_remove(pos);
            }
            self.cells[new[0] + self.dims[0] * new[1]].push(idx);
        }
        self.points[idx] = p;
    }

    /// Visits every stored point within `radius` of `p` (strictly closer),
    /// passing its index and the periodicity-adjusted offset `x_j - p`.
    pub fn for_each_within(&self, p: Point, radius: f64, mut f: impl FnMut(usize, Point)) {
        let periodic = self.domain.is_periodic();
        let centre = self.cell_of(p);
        let r2 = radius * radius;
        let mut ranges: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for d in 0..2 {
            let reach = (radius / self.cell[d]).ceil() as isize;
            let n = self.dims[d] as isize;
            if periodic {
                if 2 * reach + 1 >= n {
                    ranges[d] = (0..self.dims[d]).collect();
                } else {
                    ranges[d] = (-reach..=reach)
                        .map(|k| (centre[d] as isize + k).rem_euclid(n) as usize)
                        .collect();
                }
            } else {
                let lo = (centre[d] as isize - reach).max(0);
                let hi = (centre[d] as isize + reach).min(n - 1);
                ranges[d] = (lo..=hi).map(|k| k as usize).collect();
            }
        }
        for &cy in &ranges[1] {
            for &cx in &ranges[0] {
                for &j in &self.cells[cx + self.dims[0] * cy] {
                    let q = self.points[j];
                    let off = self.domain.offset(p, q);
                    if off[0] * off[0] + off[1] * off[1] < r2 {
                        f(j, off);
                    }
                }
            }
        }
    }

    pub fn within(&self, p: Point, radius: f64) -> Vec<(usize, Point)> {
        let mut out = Vec::new();
        self.for_each_within(p, radius, |j, off| out.push((j, off)));
        out
    }
}
