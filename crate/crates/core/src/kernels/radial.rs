//! Powers of the 2-D Laplacian applied to radial RBFs.
//!
//! Writing a radial function as `g(ρ)` with `ρ = r²`, the 2-D Laplacian is
//! `4 (g' + ρ g'')`. Both RBF families stay closed under this map: the
//! Gaussian as `p(ρ) e^{-ε²ρ}` and the inverse multiquadric as
//! `Σ_n p_n(ρ) (1 + ε²ρ)^{-(n + 1/2)}`, with polynomial `p`.

use super::{KernelFamily, KernelSpec};
use crate::{Error, Result};

type Poly = Vec<f64>;

fn deriv(p: &Poly) -> Poly {
    p.iter().enumerate().skip(1).map(|(k, c)| k as f64 * c).collect()
}

fn shift(p: &Poly) -> Poly {
    let mut out = vec![0.0; p.len() + 1];
    out[1..].copy_from_slice(p);
    out
}

fn add_into(acc: &mut Poly, p: &Poly, scale: f64) {
    if acc.len() < p.len() {
        acc.resize(p.len(), 0.0);
    }
    for (a, c) in acc.iter_mut().zip(p) {
        *a += scale * c;
    }
}

fn eval(p: &Poly, x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

/// `p(ρ) e^{-aρ}`.
fn gaussian_laplacian(p: &Poly, a: f64) -> Poly {
    // g' = (p' - a p) e, g'' = (p'' - 2a p' + a² p) e
    let d1 = deriv(p);
    let d2 = deriv(&d1);
    let mut first = d1.clone();
    add_into(&mut first, p, -a);
    let mut second = d2;
    add_into(&mut second, &d1, -2.0 * a);
    add_into(&mut second, p, a * a);
    let mut out = first;
    add_into(&mut out, &shift(&second), 1.0);
    out.iter_mut().for_each(|c| *c *= 4.0);
    out
}

/// `Σ_n p_n(ρ) (1 + bρ)^{-(n + 1/2)}`, indexed by `n`.
type Imq = Vec<Poly>;

fn imq_deriv(g: &Imq, b: f64) -> Imq {
    let mut out: Imq = vec![Vec::new(); g.len() + 1];
    for (n, p) in g.iter().enumerate() {
        add_into(&mut out[n], &deriv(p), 1.0);
        let nu = n as f64 + 0.5;
        add_into(&mut out[n + 1], p, -nu * b);
    }
    out
}

fn imq_laplacian(g: &Imq, b: f64) -> Imq {
    let d1 = imq_deriv(g, b);
    let d2 = imq_deriv(&d1, b);
    let mut out: Imq = vec![Vec::new(); d2.len()];
    for (n, p) in d1.iter().enumerate() {
        add_into(&mut out[n], p, 4.0);
    }
    for (n, p) in d2.iter().enumerate() {
        add_into(&mut out[n], &shift(p), 4.0);
    }
    out
}

/// `Δ^k ψ` at distance `r` for the RBF families.
pub fn radial_laplacian_power(spec: &KernelSpec, r: f64, k: usize) -> Result<f64> {
    let b = spec.epsilon * spec.epsilon;
    let rho = r * r;
    match spec.family {
        KernelFamily::GaussianRbf => {
            let mut p: Poly = vec![1.0];
            for _ in 0..k {
                p = gaussian_laplacian(&p, b);
            }
            Ok(eval(&p, rho) * (-b * rho).exp())
        }
        KernelFamily::InverseMultiquadric => {
            let mut g: Imq = vec![vec![1.0]];
            for _ in 0..k {
                g = imq_laplacian(&g, b);
            }
            let u = 1.0 + b * rho;
            Ok(g.iter()
                .enumerate()
                .map(|(n, p)| eval(p, rho) * u.powf(-(n as f64 + 0.5)))
                .sum())
        }
        other => Err(Error::Unsupported(format!("radial Laplacian powers of {other:?}"))),
    }
}
