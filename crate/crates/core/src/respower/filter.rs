use serde::{Deserialize, Serialize};

use crate::nodeset::{Point, Stencil};
use crate::weights::WeightSet;
use crate::{Error, Result};

/// Filter targets: damping `λ_n` of the mode `k_n`, with wavenumbers in units
/// of the Nyquist wavenumber.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterTargets {
    pub k1: Point,
    pub lambda1: f64,
    pub k2: Point,
    pub lambda2: f64,
}

impl Default for FilterTargets {
    fn default() -> Self {
        let d = std::f64::consts::FRAC_1_SQRT_2;
        FilterTargets {
            k1: [2.0 / 3.0, 2.0 / 3.0],
            lambda1: 2.0 / 3.0,
            k2: [0.2 * d, 0.2 * d],
            lambda2: 1e-4,
        }
    }
}

impl FilterTargets {
    pub fn scaled(&self, k_ny: f64) -> (Point, Point) {
        (
            [self.k1[0] * k_ny, self.k1[1] * k_ny],
            [self.k2[0] * k_ny, self.k2[1] * k_ny],
        )
    }
}

fn damping_sum(stencil: &Stencil, w: &[f64], k: Point) -> f64 {
    stencil
        .offsets
        .iter()
        .zip(w)
        .map(|(o, w)| (1.0 - (k[0] * o[0] + k[1] * o[1]).cos()) * w)
        .sum()
}

/// Per-node `(κ, ĉ)` of one filter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NodeFilter {
    pub kappa: f64,
    pub c_hat: f64,
}

/// Solves `κ Σ (1 - cos(k_n·x_ji)) (ĉ ŵ + (1 - ĉ) w̄) = λ_n` for `n = 1, 2`.
/// The filtered field is `φ + κ L φ` with `L` the combined operator, which
/// multiplies the mode `k_n` by `1 - λ_n`.
#[allow(clippy::too_many_arguments)]
pub fn calibrate_filter(
    stencil: &Stencil,
    w_hat: &[f64],
    w_bar: &[f64],
    k1: Point,
    k2: Point,
    lambda1: f64,
    lambda2: f64,
) -> Result<NodeFilter> {
    let a1 = damping_sum(stencil, w_hat, k1);
    let b1 = damping_sum(stencil, w_bar, k1);
    let a2 = damping_sum(stencil, w_hat, k2);
    let b2 = damping_sum(stencil, w_bar, k2);
    // unknowns u = κ ĉ, v = κ
    let (m11, m12, m21, m22) = (a1 - b1, b1, a2 - b2, b2);
    let det = m11 * m22 - m12 * m21;
    let scale = (m11.abs() + m12.abs()) * (m21.abs() + m22.abs());
    if !(det.abs() > 1e-13 * scale) {
        return Err(Error::Singular(format!(
            "filter calibration at node {} is singular",
            stencil.centre
        )));
    }
    let u = (lambda1 * m22 - m12 * lambda2) / det;
    let v = (m11 * lambda2 - m21 * lambda1) / det;
    if v == 0.0 {
        return Err(Error::Singular(format!(
            "filter calibration at node {} gives κ = 0",
            stencil.centre
        )));
    }
    Ok(NodeFilter { kappa: v, c_hat: u / v })
}

/// Single-kernel filter: `κ` fixed by the first target only.
pub fn calibrate_filter_single(stencil: &Stencil, w: &[f64], k1: Point, lambda1: f64) -> Result<f64> {
    let a = damping_sum(stencil, w, k1);
    if a == 0.0 {
        return Err(Error::Singular(format!(
            "filter operator at node {} does not see the target mode",
            stencil.centre
        )));
    }
    Ok(lambda1 / a)
}

/// A calibrated filter over all nodes: combined hyperviscosity weights with
/// `κ` folded in, so the filtered field is `φ + Σ_j φ_ji w_ji`.
#[derive(Clone, Debug)]
pub struct FilterCalibration {
    pub targets: FilterTargets,
    pub order: usize,
    pub kappa: Vec<f64>,
    pub c_hat: Vec<f64>,
    /// Nodes where `ĉ` was clamped.
    pub clamped: usize,
    pub scaled: WeightSet,
}

impl FilterCalibration {
    pub fn apply(&self, field: &mut [f64]) {
        let delta = self.scaled.apply(field);
        for (f, d) in field.iter_mut().zip(delta) {
            *f += d;
        }
    }
}

fn fold(ws: &WeightSet, coeffs: impl Fn(usize) -> (f64, f64), other: Option<&WeightSet>) -> WeightSet {
    let weights = (0..ws.len())
        .map(|i| {
            let (kappa, c) = coeffs(i);
            match other {
                Some(bar) => ws.weights[i]
                    .iter()
                    .zip(&bar.weights[i])
                    .map(|(a, b)| kappa * (c * a + (1.0 - c) * b))
                    .collect(),
                None => ws.weights[i].iter().map(|a| kappa * a).collect(),
            }
        })
        .collect();
    WeightSet { weights, ..ws.clone() }
}

/// Multi-kernel filter over all nodes with nonempty stencils; both targets
/// are met exactly at every node.
pub fn calibrate_filter_set(
    w_hat: &WeightSet,
    w_bar: &WeightSet,
    targets: FilterTargets,
    k_ny: f64,
) -> Result<FilterCalibration> {
    calibrate_set(w_hat, w_bar, targets, k_ny, false)
}

/// As [`calibrate_filter_set`], but `ĉ` is clamped to `[0, 1]` and `κ`
/// refitted to the first target wherever the exact solution falls outside.
/// The response is then a weighted mean of the two single-kernel responses.
pub fn calibrate_filter_set_bounded(
    w_hat: &WeightSet,
    w_bar: &WeightSet,
    targets: FilterTargets,
    k_ny: f64,
) -> Result<FilterCalibration> {
    calibrate_set(w_hat, w_bar, targets, k_ny, true)
}

fn calibrate_set(
    w_hat: &WeightSet,
    w_bar: &WeightSet,
    targets: FilterTargets,
    k_ny: f64,
    bounded: bool,
) -> Result<FilterCalibration> {
    let (k1, k2) = targets.scaled(k_ny);
    let mut kappa = Vec::with_capacity(w_hat.len());
    let mut c_hat = Vec::with_capacity(w_hat.len());
    let mut clamped = 0;
    for i in 0..w_hat.len() {
        let st = &w_hat.stencils[i];
        if st.is_empty() {
            kappa.push(0.0);
            c_hat.push(1.0);
            continue;
        }
        let (wh, wb) = (&w_hat.weights[i], &w_bar.weights[i]);
        let mut f = calibrate_filter(st, wh, wb, k1, k2, targets.lambda1, targets.lambda2)?;
        if bounded && !(0.0..=1.0).contains(&f.c_hat) {
            clamped += 1;
            let c = f.c_hat.clamp(0.0, 1.0);
            let w: Vec<f64> = wh.iter().zip(wb).map(|(a, b)| c * a + (1.0 - c) * b).collect();
            f = NodeFilter {
                kappa: calibrate_filter_single(st, &w, k1, targets.lambda1)?,
                c_hat: c,
            };
        }
        kappa.push(f.kappa);
        c_hat.push(f.c_hat);
    }
    let scaled = fold(w_hat, |i| (kappa[i], c_hat[i]), Some(w_bar));
    Ok(FilterCalibration {
        targets,
        order: w_hat.operator.degree(),
        kappa,
        c_hat,
        clamped,
        scaled,
    })
}

/// Single-kernel filter over all nodes.
pub fn calibrate_filter_set_single(ws: &WeightSet, targets: FilterTargets, k_ny: f64) -> Result<FilterCalibration> {
    let (k1, _) = targets.scaled(k_ny);
    let kappa = (0..ws.len())
        .map(|i| {
            let st = &ws.stencils[i];
            if st.is_empty() {
                Ok(0.0)
            } else {
                calibrate_filter_single(st, &ws.weights[i], k1, targets.lambda1)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let scaled = fold(ws, |i| (kappa[i], 1.0), None);
    Ok(FilterCalibration {
        targets,
        order: ws.operator.degree(),
        c_hat: vec![1.0; ws.len()],
        clamped: 0,
        kappa,
        scaled,
    })
}
