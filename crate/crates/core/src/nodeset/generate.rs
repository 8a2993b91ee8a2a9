use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Domain, NeighbourGrid, NodeFlag, NodeSet, Point};
use crate::{Error, Result};

/// Number of shifting sweeps applied after seeding.
pub const SHIFT_ITERATIONS: usize = 10;

/// Initial exclusion radius of the seeding pass, in units of `s`.
const SEED_EXCLUSION: f64 = 0.7;
/// Largest displacement a node may take in one shifting sweep, in units of `s`.
const MAX_SHIFT: f64 = 0.2;
/// Range of the shifting repulsion, in units of `s`.
const SHIFT_RANGE: f64 = 1.5;
const SHIFT_GAIN: f64 = 0.1;
/// Interior nodes of a disc stay at least this far (in `s`) inside the circle.
const WALL_GAP: f64 = 0.5;

/// Generates a quasi-uniform node set with mean spacing `s`.
///
/// Nodes are seeded by random sequential Poisson-disc insertion and then
/// regularised by [`SHIFT_ITERATIONS`] sweeps of short-range repulsive
/// shifting. On periodic rectangles exactly `round(area / s²)` nodes are
/// produced. On discs, `⌈2πr/s⌉` equally spaced Dirichlet nodes are placed on
/// the circle first and never move.
pub fn generate_nodes(domain: Domain, s: f64, seed: u64) -> Result<NodeSet> {
    domain.validate()?;
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidInput(format!("spacing must be positive, got {s}")));
    }
    let target = (domain.area() / (s * s)).round() as usize;
    if target < 9 {
        return Err(Error::Sizing {
            spacing: s,
            reason: format!("only {target} nodes fit (need at least 9)"),
        });
    }
    if let Domain::PeriodicRectangle { size, .. } = domain {
        if size[0] < 3.0 * s || size[1] < 3.0 * s {
            return Err(Error::Sizing {
                spacing: s,
                reason: "period shorter than three spacings".into(),
            });
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = NeighbourGrid::empty(domain, SEED_EXCLUSION * s);
    let mut flags = Vec::with_capacity(target);

    if let Domain::Disc { centre, radius } = domain {
        let nb = (2.0 * std::f64::consts::PI * radius / s).ceil() as usize;
        if nb + 1 > target {
            return Err(Error::Sizing {
                spacing: s,
                reason: "no room for interior nodes".into(),
            });
        }
        for k in 0..nb {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / nb as f64;
            grid.insert([centre[0] + radius * theta.cos(), centre[1] + radius * theta.sin()]);
            flags.push(NodeFlag::Dirichlet);
        }
    }
    let fixed = grid.len();

    seed_points(&mut grid, domain, s, target, &mut rng)?;
    flags.resize(grid.len(), NodeFlag::Interior);

    for _ in 0..SHIFT_ITERATIONS {
        shift_sweep(&mut grid, domain, s, fixed);
    }

    Ok(NodeSet {
        positions: grid.points().to_vec(),
        spacing: s,
        domain,
        flags,
        seed,
    })
}

fn sample(domain: Domain, s: f64, rng: &mut ChaCha8Rng) -> Point {
    match domain {
        Domain::PeriodicRectangle { origin, size } => [
            origin[0] + size[0] * rng.random::<f64>(),
            origin[1] + size[1] * rng.random::<f64>(),
        ],
        Domain::Disc { centre, radius } => {
            let inner = radius - WALL_GAP * s;
            loop {
                let x = 2.0 * rng.random::<f64>() - 1.0;
                let y = 2.0 * rng.random::<f64>() - 1.0;
                if x * x + y * y <= 1.0 {
                    return [centre[0] + inner * x, centre[1] + inner * y];
                }
            }
        }
    }
}

fn seed_points(grid: &mut NeighbourGrid, domain: Domain, s: f64, target: usize, rng: &mut ChaCha8Rng) -> Result<()> {
    let mut exclusion = SEED_EXCLUSION * s;
    while grid.len() < target {
        let mut misses = 0usize;
        let budget = 30 * target;
        while grid.len() < target && misses < budget {
            let p = sample(domain, s, rng);
            let mut clear = true;
            grid.for_each_within(p, exclusion, |_, _| clear = false);
            if clear {
                grid.insert(p);
                misses = 0;
            } else {
                misses += 1;
            }
        }
        exclusion *= 0.95;
        if exclusion < 0.05 * s {
            return Err(Error::Sizing {
                spacing: s,
                reason: "could not place the requested node count".into(),
            });
        }
    }
    Ok(())
}

/// One Jacobi sweep of pairwise repulsion, clipped to `MAX_SHIFT * s`.
fn shift_sweep(grid: &mut NeighbourGrid, domain: Domain, s: f64, fixed: usize) {
    let n = grid.len();
    let mut moves = vec![[0.0; 2]; n];
    for (i, mv) in moves.iter_mut().enumerate().skip(fixed) {
        let p = grid.points()[i];
        let mut acc = [0.0; 2];
        grid.for_each_within(p, SHIFT_RANGE * s, |j, off| {
            if j == i {
                return;
            }
            let r = (off[0] * off[0] + off[1] * off[1]).sqrt().max(1e-6 * s);
            let q = r / s;
            let push = 1.0 / (q * q) - 1.0 / (SHIFT_RANGE * SHIFT_RANGE);
            acc[0] -= push * off[0] / r;
            acc[1] -= push * off[1] / r;
        });
        let mut step = [SHIFT_GAIN * s * acc[0], SHIFT_GAIN * s * acc[1]];
        let len = (step[0] * step[0] + step[1] * step[1]).sqrt();
        if len > MAX_SHIFT * s {
            step[0] *= MAX_SHIFT * s / len;
            step[1] *= MAX_SHIFT * s / len;
        }
        *mv = step;
    }
    for (i, mv) in moves.iter().enumerate().skip(fixed) {
        let p = grid.points()[i];
        let mut q = domain.wrap([p[0] + mv[0], p[1] + mv[1]]);
        if let Domain::Disc { centre, radius } = domain {
            let inner = radius - WALL_GAP * s;
            let dx = q[0] - centre[0];
            let dy = q[1] - centre[1];
            let r = (dx * dx + dy * dy).sqrt();
            if r > inner {
                q = [centre[0] + dx * inner / r, centre[1] + dy * inner / r];
            }
        }
        grid.relocate(i, q);
    }
}

/// Cartesian lattice with `n_per_side` nodes along each side of a periodic
/// rectangle (spacing `size / n_per_side`, first node at the origin).
pub fn uniform_grid(domain: Domain, n_per_side: usize) -> Result<NodeSet> {
    domain.validate()?;
    if n_per_side < 2 {
        return Err(Error::InvalidInput(format!(
            "uniform grid needs at least 2 nodes per side, got {n_per_side}"
        )));
    }
    let Domain::PeriodicRectangle { origin, size } = domain else {
        return Err(Error::Unsupported("uniform grids on discs".into()));
    };
    let h = [size[0] / n_per_side as f64, size[1] / n_per_side as f64];
    let mut positions = Vec::with_capacity(n_per_side * n_per_side);
    for iy in 0..n_per_side {
        for ix in 0..n_per_side {
            positions.push([origin[0] + ix as f64 * h[0], origin[1] + iy as f64 * h[1]]);
        }
    }
    let n = positions.len();
    Ok(NodeSet {
        positions,
        spacing: (h[0] * h[1]).sqrt(),
        domain,
        flags: vec![NodeFlag::Interior; n],
        seed: 0,
    })
}
