use std::sync::Arc;

use super::poly::factorial;
use super::{Method, OperatorKind, WeightSet};
use crate::nodeset::{NeighbourGrid, NodeSet, Stencil};
use crate::{Error, Result};

/// Central-difference weights on a line, centre included, at integer
/// multiples of the spacing.
#[derive(Clone, Debug, PartialEq)]
pub struct LineWeights {
    pub offsets: Vec<i64>,
    pub weights: Vec<f64>,
}

/// Classical central differences of even `order` for a first (`ddx`, `ddy`)
/// or second (`laplacian`, per direction) derivative.
pub fn fd_reference_weights(order: usize, op: OperatorKind, spacing: f64) -> Result<LineWeights> {
    if order == 0 || !order.is_multiple_of(2) {
        return Err(Error::InvalidInput(format!(
            "central differences need an even order, got {order}"
        )));
    }
    let p = order / 2;
    let pf = factorial(p);
    let mut offsets = Vec::with_capacity(2 * p + 1);
    let mut weights = Vec::with_capacity(2 * p + 1);
    match op {
        OperatorKind::Ddx | OperatorKind::Ddy => {
            for k in 1..=p {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let c = sign * pf * pf / (k as f64 * factorial(p - k) * factorial(p + k)) / spacing;
                offsets.extend([-(k as i64), k as i64]);
                weights.extend([-c, c]);
            }
            offsets.push(0);
            weights.push(0.0);
        }
        OperatorKind::Laplacian => {
            let mut centre = 0.0;
            for k in 1..=p {
                let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                let d =
                    sign * 2.0 * pf * pf / ((k * k) as f64 * factorial(p - k) * factorial(p + k)) / (spacing * spacing);
                offsets.extend([-(k as i64), k as i64]);
                weights.extend([d, d]);
                centre -= 2.0 * d;
            }
            offsets.push(0);
            weights.push(centre);
        }
        OperatorKind::Hyperviscosity(_) => return Err(Error::Unsupported("finite-difference hyperviscosity".into())),
    }
    Ok(LineWeights { offsets, weights })
}

/// Difference-form FD weights on a uniform periodic grid. The Laplacian is
/// the sum of the x and y second-derivative lines.
pub fn fd_weight_set(nodes: &NodeSet, order: usize, op: OperatorKind) -> Result<WeightSet> {
    let dx = nodes.spacing;
    let line = fd_reference_weights(order, op, dx)?;
    let dirs: Vec<[f64; 2]> = match op {
        OperatorKind::Ddx => vec![[1.0, 0.0]],
        OperatorKind::Ddy => vec![[0.0, 1.0]],
        _ => vec![[1.0, 0.0], [0.0, 1.0]],
    };
    let grid = NeighbourGrid::new(nodes, dx);
    let mut stencils = Vec::with_capacity(nodes.len());
    let mut weights = Vec::with_capacity(nodes.len());
    for i in 0..nodes.len() {
        let p = nodes.positions[i];
        let mut st = Stencil {
            centre: i,
            neighbours: Vec::new(),
            offsets: Vec::new(),
        };
        let mut w = Vec::new();
        for d in &dirs {
            for (&k, &c) in line.offsets.iter().zip(&line.weights) {
                if k == 0 {
                    continue;
                }
                let off = [k as f64 * dx * d[0], k as f64 * dx * d[1]];
                let target = nodes.domain.wrap([p[0] + off[0], p[1] + off[1]]);
                let found = grid.within(target, 0.25 * dx);
                let &(j, _) = found
                    .first()
                    .ok_or_else(|| Error::InvalidInput(format!("node set is not a uniform grid near node {i}")))?;
                st.neighbours.push(j);
                st.offsets.push(off);
                w.push(c);
            }
        }
        stencils.push(st);
        weights.push(w);
    }
    Ok(WeightSet {
        method: Method::Fd,
        operator: op,
        order,
        stencils: Arc::new(stencils),
        conditions: vec![1.0; nodes.len()],
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn get(l: &LineWeights, k: i64) -> f64 {
        l.weights[l.offsets.iter().position(|&o| o == k).unwrap()]
    }

    #[test]
    fn second_order_first_derivative() {
        let l = fd_reference_weights(2, OperatorKind::Ddx, 0.5).unwrap();
        assert_eq!(get(&l, -1), -1.0);
        assert_eq!(get(&l, 1), 1.0);
    }

    #[test]
    fn fourth_order_first_derivative() {
        let l = fd_reference_weights(4, OperatorKind::Ddx, 1.0).unwrap();
        let expect = [(-2, 1.0 / 12.0), (-1, -2.0 / 3.0), (1, 2.0 / 3.0), (2, -1.0 / 12.0)];
        for (k, c) in expect {
            assert!((get(&l, k) - c).abs() < 1e-15, "offset {k}");
        }
    }

    #[test]
    fn second_derivative_of_square() {
        let dx = 0.1;
        for order in [2, 4, 6, 8] {
            let l = fd_reference_weights(order, OperatorKind::Laplacian, dx).unwrap();
            let v: f64 = l
                .offsets
                .iter()
                .zip(&l.weights)
                .map(|(&k, &c)| c * (k as f64 * dx).powi(2))
                .sum();
            assert!((v - 2.0).abs() < 1e-10, "order {order}: {v}");
        }
        let l = fd_reference_weights(2, OperatorKind::Laplacian, dx).unwrap();
        assert!((get(&l, 0) + 2.0 / (dx * dx)).abs() < 1e-9);
    }

    #[test]
    fn odd_order_rejected() {
        assert!(fd_reference_weights(3, OperatorKind::Ddx, 1.0).is_err());
    }
}
