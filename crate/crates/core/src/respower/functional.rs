use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::nodeset::Stencil;
use crate::weights::{OperatorKind, WeightSet};
use crate::{Error, Result};

/// Polar midpoint rule over the half disc `|k| ≤ k_M`, `θ ∈ [0, π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quadrature {
    pub radial: usize,
    pub angular: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            radial: 32,
            angular: 48,
        }
    }
}

/// Coefficients of `E(c) = P - 2 c Q + c² S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadratic {
    pub p: f64,
    pub q: f64,
    pub s: f64,
}

impl Quadratic {
    pub fn eval(&self, c: f64) -> f64 {
        (self.p - 2.0 * c * self.q + c * c * self.s).max(0.0)
    }
}

/// Symbol of one weight vector at wavenumber `k`, split as (real, imag) so
/// that the spectral target is `(T, 0)`.
fn symbol(op: OperatorKind, e: &[Complex64], w: &[f64]) -> (f64, f64) {
    // e_j = exp(i k·x_ji)
    let mut sin = 0.0;
    let mut omc = 0.0;
    for (z, w) in e.iter().zip(w) {
        sin += z.im * w;
        omc += (1.0 - z.re) * w;
    }
    if op.is_gradient() {
        (sin, omc)
    } else {
        (omc, -sin)
    }
}

fn target(op: OperatorKind, k: [f64; 2]) -> f64 {
    match op {
        OperatorKind::Ddx => k[0],
        OperatorKind::Ddy => k[1],
        _ => k[0] * k[0] + k[1] * k[1],
    }
}

/// Accumulates the quadratic coefficients of the error functional of
/// `c ŵ + (1 - c) w̄` in one pass over the quadrature points.
pub fn e_quadratic(
    stencil: &Stencil,
    w_hat: &[f64],
    w_bar: &[f64],
    k_m: f64,
    op: OperatorKind,
    quad: Quadrature,
) -> Result<Quadratic> {
    if !(k_m > 0.0 && k_m.is_finite()) {
        return Err(Error::InvalidInput(format!("k_M must be positive, got {k_m}")));
    }
    if matches!(op, OperatorKind::Hyperviscosity(_)) {
        return Err(Error::Unsupported("error functional of hyperviscosity".into()));
    }
    if w_hat.len() != stencil.len() || w_bar.len() != stencil.len() {
        return Err(Error::StencilMismatch { node: stencil.centre });
    }
    let dr = k_m / quad.radial as f64;
    let dt = PI / quad.angular as f64;
    let n = stencil.len();
    let mut e = vec![Complex64::new(0.0, 0.0); n];
    let mut step = vec![Complex64::new(0.0, 0.0); n];
    let (mut p, mut q, mut s) = (0.0, 0.0, 0.0);
    for a in 0..quad.angular {
        let theta = (a as f64 + 0.5) * dt;
        let dir = [theta.cos(), theta.sin()];
        for (j, o) in stencil.offsets.iter().enumerate() {
            let proj = dir[0] * o[0] + dir[1] * o[1];
            e[j] = Complex64::from_polar(1.0, 0.5 * dr * proj);
            step[j] = Complex64::from_polar(1.0, dr * proj);
        }
        for r in 0..quad.radial {
            if r > 0 {
                for (z, st) in e.iter_mut().zip(&step) {
                    *z *= st;
                }
            }
            let rho = (r as f64 + 0.5) * dr;
            let k = [rho * dir[0], rho * dir[1]];
            let t = target(op, k);
            let (rh, ih) = symbol(op, &e, w_hat);
            let (rb, ib) = symbol(op, &e, w_bar);
            let a1 = t - rb;
            let b1 = rh - rb;
            let a2 = ib;
            let b2 = ih - ib;
            let wq = rho * dr * dt;
            p += wq * (a1 * a1 + a2 * a2);
            q += wq * (a1 * b1 - a2 * b2);
            s += wq * (b1 * b1 + b2 * b2);
        }
    }
    Ok(Quadratic { p, q, s })
}

/// `E(c)`: squared dispersion plus dissipation error of the combined
/// weights, integrated over the half disc `|k| ≤ k_M`.
pub fn e_functional(
    stencil: &Stencil,
    w_hat: &[f64],
    w_bar: &[f64],
    c: f64,
    k_m: f64,
    op: OperatorKind,
    quad: Quadrature,
) -> Result<f64> {
    Ok(e_quadratic(stencil, w_hat, w_bar, k_m, op, quad)?.eval(c))
}

/// Closed-form minimiser of the error functional.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Optimum {
    pub c_hat: f64,
    pub e_opt: f64,
    /// `E(1)`: the primary kernel alone.
    pub e_hat: f64,
    /// `E(0)`: the secondary kernel alone.
    pub e_bar: f64,
    /// Set when the two weight vectors are (numerically) indistinguishable;
    /// `c_hat` is then 1.
    pub degenerate: bool,
}

pub fn optimize_quadratic(quad: Quadratic) -> Optimum {
    let degenerate = quad.s <= 1e-13 * (quad.p + quad.s) || quad.s == 0.0;
    let c_hat = if degenerate { 1.0 } else { quad.q / quad.s };
    Optimum {
        c_hat,
        e_opt: quad.eval(c_hat),
        e_hat: quad.eval(1.0),
        e_bar: quad.eval(0.0),
        degenerate,
    }
}

pub fn optimize_c(
    stencil: &Stencil,
    w_hat: &[f64],
    w_bar: &[f64],
    k_m: f64,
    op: OperatorKind,
    quad: Quadrature,
) -> Result<Optimum> {
    Ok(optimize_quadratic(e_quadratic(stencil, w_hat, w_bar, k_m, op, quad)?))
}

fn same_stencils(a: &WeightSet, b: &WeightSet) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput("weight sets cover different node counts".into()));
    }
    if Arc::ptr_eq(&a.stencils, &b.stencils) {
        return Ok(());
    }
    for (i, (x, y)) in a.stencils.iter().zip(b.stencils.iter()).enumerate() {
        if x.neighbours != y.neighbours {
            return Err(Error::StencilMismatch { node: i });
        }
    }
    Ok(())
}

/// Per-node affine combination `ĉ_i ŵ + (1 - ĉ_i) w̄`.
pub fn combine(w_hat: &WeightSet, w_bar: &WeightSet, c_hat: &[f64]) -> Result<WeightSet> {
    same_stencils(w_hat, w_bar)?;
    if w_hat.operator != w_bar.operator {
        return Err(Error::InvalidInput("weight sets are for different operators".into()));
    }
    if c_hat.len() != w_hat.len() {
        return Err(Error::InvalidInput("one coefficient per node required".into()));
    }
    let weights = w_hat
        .weights
        .iter()
        .zip(&w_bar.weights)
        .zip(c_hat)
        .enumerate()
        .map(|(i, ((a, b), &c))| {
            if a.len() != b.len() {
                return Err(Error::StencilMismatch { node: i });
            }
            Ok(if c == 1.0 {
                a.clone()
            } else if c == 0.0 {
                b.clone()
            } else {
                a.iter().zip(b).map(|(x, y)| c * x + (1.0 - c) * y).collect()
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(WeightSet {
        weights,
        conditions: w_hat
            .conditions
            .iter()
            .zip(&w_bar.conditions)
            .map(|(a, b)| a.max(*b))
            .collect(),
        ..w_hat.clone()
    })
}

/// Per-node optimal coefficients of one operator.
#[derive(Clone, Debug, PartialEq)]
pub struct MkCombination {
    pub operator: OperatorKind,
    pub k_m: f64,
    pub optima: Vec<Optimum>,
}

impl MkCombination {
    pub fn c_hat(&self) -> Vec<f64> {
        self.optima.iter().map(|o| o.c_hat).collect()
    }
}

/// Optimises `ĉ_i` at every node with a nonempty stencil (others get the
/// tie-break value 1).
pub fn mk_combination(w_hat: &WeightSet, w_bar: &WeightSet, k_m: f64, quad: Quadrature) -> Result<MkCombination> {
    same_stencils(w_hat, w_bar)?;
    let optima = (0..w_hat.len())
        .map(|i| {
            let st = &w_hat.stencils[i];
            if st.is_empty() {
                return Ok(Optimum {
                    c_hat: 1.0,
                    e_opt: 0.0,
                    e_hat: 0.0,
                    e_bar: 0.0,
                    degenerate: true,
                });
            }
            optimize_c(st, &w_hat.weights[i], &w_bar.weights[i], k_m, w_hat.operator, quad)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MkCombination {
        operator: w_hat.operator,
        k_m,
        optima,
    })
}

/// How the upper integration limit `k_M` is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", content = "value", rename_all = "kebab-case")]
pub enum KmRule {
    /// A fraction of the Nyquist wavenumber.
    Nyquist(f64),
    /// A fixed wavenumber, clipped to the Nyquist wavenumber.
    Absolute(f64),
}

impl KmRule {
    pub fn resolve(self, k_ny: f64) -> f64 {
        match self {
            KmRule::Nyquist(f) => f * k_ny,
            KmRule::Absolute(k) => k.min(k_ny),
        }
    }
}
