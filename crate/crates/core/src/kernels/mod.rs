//! Smoothing kernels, radial basis functions and Hermite anisotropic basis
//! functions, with the derivatives the weight schemes need.
//!
//! SPH kernels are normalised to unit mass in 2-D and have compact support of
//! radius `2h`; the Gaussian SPH kernel is simply truncated there. RBFs are
//! parameterised by a flatness `ε` and are not normalised.

mod hermite;
mod radial;

pub use hermite::{hermite_basis, hermite_polynomials, hermite_recurrence, monomial_exponents};
pub use radial::radial_laplacian_power;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::nodeset::Point;

/// Radial weight multiplying the Hermite polynomials of an ABF.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AbfWeight {
    WendlandC2,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    WendlandC2,
    GaussianSph,
    GaussianRbf,
    InverseMultiquadric,
    HermiteAbf(AbfWeight),
}

impl KernelFamily {
    pub fn is_sph(self) -> bool {
        matches!(self, KernelFamily::WendlandC2 | KernelFamily::GaussianSph)
    }

    pub fn is_rbf(self) -> bool {
        matches!(self, KernelFamily::GaussianRbf | KernelFamily::InverseMultiquadric)
    }
}

/// A kernel family with its length scale: smoothing length `h` for SPH and
/// ABF families, flatness `epsilon` for RBF families.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub family: KernelFamily,
    pub h: f64,
    pub epsilon: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RbfOp {
    Dx,
    Dy,
    Laplacian,
}

impl KernelSpec {
    pub fn wendland(h: f64) -> Self {
        Self::sph(KernelFamily::WendlandC2, h)
    }

    pub fn gaussian_sph(h: f64) -> Self {
        Self::sph(KernelFamily::GaussianSph, h)
    }

    pub fn gaussian_rbf(epsilon: f64) -> Self {
        KernelSpec {
            family: KernelFamily::GaussianRbf,
            h: 0.0,
            epsilon,
        }
    }

    pub fn inverse_multiquadric(epsilon: f64) -> Self {
        KernelSpec {
            family: KernelFamily::InverseMultiquadric,
            h: 0.0,
            epsilon,
        }
    }

    pub fn hermite(weight: AbfWeight, h: f64) -> Self {
        Self::sph(KernelFamily::HermiteAbf(weight), h)
    }

    fn sph(family: KernelFamily, h: f64) -> Self {
        KernelSpec {
            family,
            h,
            epsilon: 0.0,
        }
    }

    pub fn with_h(self, h: f64) -> Self {
        KernelSpec { h, ..self }
    }

    pub fn with_epsilon(self, epsilon: f64) -> Self {
        KernelSpec { epsilon, ..self }
    }

    /// Support radius (`2h` for compact families, infinite for RBFs).
    pub fn support(&self) -> f64 {
        if self.family.is_rbf() {
            f64::INFINITY
        } else {
            2.0 * self.h
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        let ok = if self.family.is_rbf() {
            self.epsilon > 0.0 && self.epsilon.is_finite()
        } else {
            self.h > 0.0 && self.h.is_finite()
        };
        if ok {
            Ok(())
        } else {
            Err(crate::Error::InvalidInput(format!(
                "kernel length scale not positive: {self:?}"
            )))
        }
    }

    /// Kernel value at distance `r`.
    pub fn value(&self, r: f64) -> f64 {
        let r = r.abs();
        match self.family {
            KernelFamily::WendlandC2 | KernelFamily::HermiteAbf(AbfWeight::WendlandC2) => wendland_c2(r, self.h).0,
            KernelFamily::GaussianSph | KernelFamily::HermiteAbf(AbfWeight::Gaussian) => gaussian_sph(r, self.h).0,
            KernelFamily::GaussianRbf | KernelFamily::InverseMultiquadric => rbf_radial(*self, r).0,
        }
    }

    /// `dW/dr` at distance `r`.
    pub fn radial_derivative(&self, r: f64) -> f64 {
        let r = r.abs();
        match self.family {
            KernelFamily::WendlandC2 | KernelFamily::HermiteAbf(AbfWeight::WendlandC2) => wendland_c2(r, self.h).1,
            KernelFamily::GaussianSph | KernelFamily::HermiteAbf(AbfWeight::Gaussian) => gaussian_sph(r, self.h).1,
            KernelFamily::GaussianRbf | KernelFamily::InverseMultiquadric => rbf_radial(*self, r).1,
        }
    }
}

/// Wendland C2 in 2-D: `7/(4πh²) (1 - q/2)⁴ (1 + 2q)`, `q = r/h < 2`.
fn wendland_c2(r: f64, h: f64) -> (f64, f64) {
    let q = r / h;
    if q >= 2.0 {
        return (0.0, 0.0);
    }
    let sigma = 7.0 / (4.0 * PI * h * h);
    let t = 1.0 - 0.5 * q;
    let t3 = t * t * t;
    (sigma * t3 * t * (1.0 + 2.0 * q), -sigma * 5.0 * q * t3 / h)
}

/// Normalised 2-D Gaussian `exp(-q²)/(πh²)` truncated at `q = 2`.
fn gaussian_sph(r: f64, h: f64) -> (f64, f64) {
    let q = r / h;
    if q >= 2.0 {
        return (0.0, 0.0);
    }
    let w = (-q * q).exp() / (PI * h * h);
    (w, -2.0 * q * w / h)
}

/// `(ψ, ψ', ψ'')` for the RBF families.
fn rbf_radial(spec: KernelSpec, r: f64) -> (f64, f64, f64) {
    let e2 = spec.epsilon * spec.epsilon;
    match spec.family {
        KernelFamily::GaussianRbf => {
            let psi = (-e2 * r * r).exp();
            (psi, -2.0 * e2 * r * psi, (4.0 * e2 * e2 * r * r - 2.0 * e2) * psi)
        }
        KernelFamily::InverseMultiquadric => {
            let u = 1.0 + e2 * r * r;
            let psi = u.powf(-0.5);
            let d1 = -e2 * r * u.powf(-1.5);
            let d2 = -e2 * u.powf(-1.5) + 3.0 * e2 * e2 * r * r * u.powf(-2.5);
            (psi, d1, d2)
        }
        _ => unreachable!("not an RBF family"),
    }
}

/// Kernel value at distance `r`.
pub fn kernel_value(spec: &KernelSpec, r: f64) -> f64 {
    spec.value(r)
}

/// `∇W` at `offset`: the radial derivative times the unit offset vector.
pub fn kernel_gradient(spec: &KernelSpec, offset: Point) -> Point {
    let r = (offset[0] * offset[0] + offset[1] * offset[1]).sqrt();
    if r == 0.0 {
        return [0.0, 0.0];
    }
    let dw = spec.radial_derivative(r);
    [dw * offset[0] / r, dw * offset[1] / r]
}

pub fn rbf_value(spec: &KernelSpec, r: f64) -> f64 {
    rbf_radial(*spec, r.abs()).0
}

/// Derivative of `x ↦ ψ(|x|)` evaluated at `x = offset`.
pub fn rbf_operator_value(spec: &KernelSpec, offset: Point, op: RbfOp) -> f64 {
    let e2 = spec.epsilon * spec.epsilon;
    let r2 = offset[0] * offset[0] + offset[1] * offset[1];
    match spec.family {
        KernelFamily::GaussianRbf => {
            let psi = (-e2 * r2).exp();
            match op {
                RbfOp::Dx => -2.0 * e2 * offset[0] * psi,
                RbfOp::Dy => -2.0 * e2 * offset[1] * psi,
                RbfOp::Laplacian => 4.0 * e2 * (e2 * r2 - 1.0) * psi,
            }
        }
        KernelFamily::InverseMultiquadric => {
            let u = 1.0 + e2 * r2;
            match op {
                RbfOp::Dx => -e2 * offset[0] * u.powf(-1.5),
                RbfOp::Dy => -e2 * offset[1] * u.powf(-1.5),
                RbfOp::Laplacian => e2 * (e2 * r2 - 2.0) * u.powf(-2.5),
            }
        }
        _ => panic!("rbf_operator_value called with non-RBF family {:?}", spec.family),
    }
}
