use num_complex::Complex64;

use crate::nodeset::{NodeSet, Point, Stencil};
use crate::weights::{OperatorKind, WeightSet};
use crate::{Error, Result};

/// Effective wavenumber of a first-derivative stencil:
/// `Σ sin(k·x_ji) w_ji + i Σ (1 - cos(k·x_ji)) w_ji`.
pub fn keff_gradient(stencil: &Stencil, weights: &[f64], k: Point) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (o, w) in stencil.offsets.iter().zip(weights) {
        let (s, c) = (k[0] * o[0] + k[1] * o[1]).sin_cos();
        re += s * w;
        im += (1.0 - c) * w;
    }
    Complex64::new(re, im)
}

/// Effective squared wavenumber of a Laplacian stencil:
/// `Σ (1 - cos(k·x_ji)) w_ji - i Σ sin(k·x_ji) w_ji`.
pub fn qeff2_laplacian(stencil: &Stencil, weights: &[f64], k: Point) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (o, w) in stencil.offsets.iter().zip(weights) {
        let (s, c) = (k[0] * o[0] + k[1] * o[1]).sin_cos();
        re += (1.0 - c) * w;
        im -= s * w;
    }
    Complex64::new(re, im)
}

/// Node-averaged scaled effective wavenumber at one point of a ray.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RaySample {
    pub k_hat: f64,
    pub re: f64,
    pub im: f64,
}

/// Scaled resolving-power curve along `k_y = slope · k_x` (or `-slope` when
/// `negative_ky`). Gradient curves hold `k_eff |k| / (k_Ny k_d)` with `k_d`
/// the differentiated component, Laplacian curves `q_eff² / k_Ny²`, both
/// against `k̂ = |k| / k_Ny`.
#[derive(Clone, Debug, PartialEq)]
pub struct RayCurve {
    pub operator: OperatorKind,
    pub slope: f64,
    pub negative_ky: bool,
    pub samples: Vec<RaySample>,
}

impl RayCurve {
    /// Spectrally exact value at `k̂`.
    pub fn target(&self, k_hat: f64) -> f64 {
        if self.operator.is_gradient() {
            k_hat
        } else {
            k_hat * k_hat
        }
    }
}

pub(crate) fn ray_direction(slope: f64, negative_ky: bool) -> Point {
    let ly = if negative_ky { -slope } else { slope };
    let n = (1.0 + ly * ly).sqrt();
    [1.0 / n, ly / n]
}

/// Scaled effective value of one node at wavenumber `k`.
pub(crate) fn scaled_effective(ws: &WeightSet, i: usize, k: Point, k_ny: f64) -> Complex64 {
    let st = &ws.stencils[i];
    let w = &ws.weights[i];
    let kn = (k[0] * k[0] + k[1] * k[1]).sqrt();
    match ws.operator {
        OperatorKind::Ddx => keff_gradient(st, w, k) * (kn / (k_ny * k[0])),
        OperatorKind::Ddy => keff_gradient(st, w, k) * (kn / (k_ny * k[1])),
        _ => qeff2_laplacian(st, w, k) / (k_ny * k_ny),
    }
}

/// Samples the node-averaged resolving power at `k̂ = j / n_samples`,
/// `j = 1..=n_samples`, averaging over interior nodes.
pub fn ray_curve(nodes: &NodeSet, ws: &WeightSet, slope: f64, negative_ky: bool, n_samples: usize) -> Result<RayCurve> {
    if n_samples < 2 {
        return Err(Error::InvalidInput(format!(
            "a ray curve needs at least 2 samples, got {n_samples}"
        )));
    }
    if matches!(ws.operator, OperatorKind::Hyperviscosity(_)) {
        return Err(Error::Unsupported("ray curves of hyperviscosity operators".into()));
    }
    let dir = ray_direction(slope, negative_ky);
    if (ws.operator == OperatorKind::Ddx && dir[0] == 0.0) || (ws.operator == OperatorKind::Ddy && dir[1] == 0.0) {
        return Err(Error::InvalidInput(
            "ray is orthogonal to the differentiated direction".into(),
        ));
    }
    let k_ny = nodes.nyquist();
    let interior: Vec<usize> = nodes.interior().collect();
    if interior.is_empty() {
        return Err(Error::InvalidInput("no interior nodes".into()));
    }
    let samples = (1..=n_samples)
        .map(|j| {
            let k_hat = j as f64 / n_samples as f64;
            let k = [k_hat * k_ny * dir[0], k_hat * k_ny * dir[1]];
            let sum: Complex64 = interior.iter().map(|&i| scaled_effective(ws, i, k, k_ny)).sum();
            let mean = sum / interior.len() as f64;
            RaySample {
                k_hat,
                re: mean.re,
                im: mean.im,
            }
        })
        .collect();
    Ok(RayCurve {
        operator: ws.operator,
        slope,
        negative_ky,
        samples,
    })
}

/// Percentage reduction `(1 - e_mk / e_sk) · 100` of the resolving-power
/// error `|(re - target, im)|` at each sample; `None` where the SK error is
/// zero.
pub fn improvement_metric(sk: &RayCurve, mk: &RayCurve) -> Result<Vec<Option<f64>>> {
    if sk.samples.len() != mk.samples.len() || sk.samples.iter().zip(&mk.samples).any(|(a, b)| a.k_hat != b.k_hat) {
        return Err(Error::InvalidInput("curves are sampled differently".into()));
    }
    Ok(sk
        .samples
        .iter()
        .zip(&mk.samples)
        .map(|(a, b)| {
            let t = sk.target(a.k_hat);
            let e_sk = (a.re - t).hypot(a.im);
            let e_mk = (b.re - t).hypot(b.im);
            if e_sk == 0.0 {
                None
            } else {
                Some((1.0 - e_mk / e_sk) * 100.0)
            }
        })
        .collect())
}
