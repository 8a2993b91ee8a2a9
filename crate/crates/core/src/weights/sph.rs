use crate::kernels::{kernel_gradient, KernelSpec};
use crate::nodeset::Stencil;
use crate::{Error, Result};

fn check(stencil: &Stencil, spec: &KernelSpec) -> Result<()> {
    if stencil.is_empty() {
        return Err(Error::EmptyStencil { node: stencil.centre });
    }
    if !spec.family.is_sph() {
        return Err(Error::InvalidInput(format!("{:?} is not an SPH kernel", spec.family)));
    }
    spec.validate()
}

/// Antisymmetric SPH gradient weights `∇W(x_i - x_j) V`, returned as
/// `(x weights, y weights)` in stencil order.
pub fn sph_gradient_weights(stencil: &Stencil, spec: &KernelSpec, volume: f64) -> Result<(Vec<f64>, Vec<f64>)> {
    check(stencil, spec)?;
    let mut wx = Vec::with_capacity(stencil.len());
    let mut wy = Vec::with_capacity(stencil.len());
    for off in &stencil.offsets {
        let g = kernel_gradient(spec, [-off[0], -off[1]]);
        wx.push(g[0] * volume);
        wy.push(g[1] * volume);
    }
    Ok((wx, wy))
}

/// Morris Laplacian weights `-2 W'(r) V / r`. These are nonnegative for a
/// radially decreasing kernel, so that `φ = x² + y²` maps to roughly 4.
pub fn sph_laplacian_weights(stencil: &Stencil, spec: &KernelSpec, volume: f64) -> Result<Vec<f64>> {
    check(stencil, spec)?;
    stencil
        .offsets
        .iter()
        .zip(&stencil.neighbours)
        .map(|(off, &j)| {
            let r = (off[0] * off[0] + off[1] * off[1]).sqrt();
            if r == 0.0 {
                return Err(Error::CoincidentNodes {
                    node: stencil.centre,
                    neighbour: j,
                });
            }
            Ok(-2.0 * spec.radial_derivative(r) * volume / r)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cross(d: f64) -> Stencil {
        Stencil {
            centre: 0,
            neighbours: vec![1, 2, 3, 4],
            offsets: vec![[d, 0.0], [-d, 0.0], [0.0, d], [0.0, -d]],
        }
    }

    fn apply(w: &[f64], st: &Stencil, f: impl Fn(f64, f64) -> f64) -> f64 {
        st.offsets
            .iter()
            .zip(w)
            .map(|(o, w)| (f(o[0], o[1]) - f(0.0, 0.0)) * w)
            .sum()
    }

    #[test]
    fn constant_field_is_annihilated() {
        let st = cross(0.1);
        let k = KernelSpec::wendland(0.13);
        let (wx, wy) = sph_gradient_weights(&st, &k, 0.01).unwrap();
        assert_eq!(apply(&wx, &st, |_, _| 5.0), 0.0);
        assert_eq!(apply(&wy, &st, |_, _| 5.0), 0.0);
        let wl = sph_laplacian_weights(&st, &k, 0.01).unwrap();
        assert_eq!(apply(&wl, &st, |_, _| 5.0), 0.0);
    }

    #[test]
    fn cross_stencil_gradient_matches_hand_evaluation() {
        let (d, h, v) = (0.1, 0.13, 0.01);
        let st = cross(d);
        let k = KernelSpec::wendland(h);
        let (wx, wy) = sph_gradient_weights(&st, &k, v).unwrap();
        // Only the two x-neighbours contribute: 2 d (-W'(d)) V.
        let q = d / h;
        let dw = -7.0 / (4.0 * std::f64::consts::PI * h * h) * 5.0 * q * (1.0 - q / 2.0).powi(3) / h;
        let expected = 2.0 * d * (-dw) * v;
        let got = apply(&wx, &st, |x, _| x);
        assert!((got - expected).abs() < 1e-12 * expected.abs());
        assert!(apply(&wy, &st, |x, _| x).abs() < 1e-15);
    }

    #[test]
    fn cross_stencil_laplacian_of_radius_squared() {
        let (d, h, v) = (0.1, 0.13, 0.01);
        let st = cross(d);
        let k = KernelSpec::wendland(h);
        let wl = sph_laplacian_weights(&st, &k, v).unwrap();
        let got = apply(&wl, &st, |x, y| x * x + y * y);
        let expected: f64 = wl.iter().map(|w| w * d * d).sum();
        assert!((got - expected).abs() < 1e-14);
        assert!(wl.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn coincident_node_rejected() {
        let st = Stencil {
            centre: 0,
            neighbours: vec![7],
            offsets: vec![[0.0, 0.0]],
        };
        let err = sph_laplacian_weights(&st, &KernelSpec::wendland(1.0), 1.0).unwrap_err();
        assert!(matches!(err, Error::CoincidentNodes { node: 0, neighbour: 7 }));
    }

    #[test]
    fn empty_stencil_rejected() {
        let st = Stencil {
            centre: 3,
            neighbours: vec![],
            offsets: vec![],
        };
        assert!(sph_gradient_weights(&st, &KernelSpec::wendland(1.0), 1.0).is_err());
    }
}
