//! Closed-form solutions of the benchmark problems.

use std::f64::consts::PI;

use crate::{Error, Result};

/// Number of Fourier terms in the top-hat test function.
pub const TEST_FUNCTION_TERMS: usize = 8;

/// Value, gradient and Laplacian of a field at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Evaluated {
    pub value: f64,
    pub dx: f64,
    pub dy: f64,
    pub laplacian: f64,
}

/// `sin(2πy)·g(x)`, where `g` is the eight-term Fourier series of a top-hat
/// of unit height.
pub fn test_function(x: f64, y: f64) -> Evaluated {
    let (mut g, mut g1, mut g2) = (0.0, 0.0, 0.0);
    for k in 1..=TEST_FUNCTION_TERMS {
        let odd = (2 * k - 1) as f64;
        let a = 2.0 * odd * PI;
        let (s, c) = (a * (x - 0.25)).sin_cos();
        g += 4.0 / PI * s / odd;
        g1 += 8.0 * c;
        g2 -= 8.0 * a * s;
    }
    let (sy, cy) = (2.0 * PI * y).sin_cos();
    Evaluated {
        value: sy * g,
        dx: sy * g1,
        dy: 2.0 * PI * cy * g,
        laplacian: sy * (g2 - 4.0 * PI * PI * g),
    }
}

/// Largest wavenumber magnitude present in [`test_function`].
pub fn test_function_max_wavenumber() -> f64 {
    let a = 2.0 * (2 * TEST_FUNCTION_TERMS - 1) as f64 * PI;
    (a * a + 4.0 * PI * PI).sqrt()
}

/// `sin(2πx) sin(2πy)` and its Laplacian, for the periodic Poisson problem.
pub fn poisson_periodic(x: f64, y: f64) -> (f64, f64) {
    let v = (2.0 * PI * x).sin() * (2.0 * PI * y).sin();
    (v, -8.0 * PI * PI * v)
}

/// Solution `r⁴ cos(πr/2) cos θ` of the disc problem and its Laplacian.
pub fn poisson_disc(x: f64, y: f64) -> (f64, f64) {
    let r = x.hypot(y);
    if r == 0.0 {
        return (0.0, 0.0);
    }
    let ct = x / r;
    let (s, c) = (0.5 * PI * r).sin_cos();
    let r2 = r * r;
    let value = r2 * r2 * c * ct;
    let f = ((15.0 * r2 - 0.25 * PI * PI * r2 * r2) * c - 4.5 * PI * r2 * r * s) * ct;
    (value, f)
}

/// Advection–diffusion solution on the unit square: waves travelling in x.
pub fn ad_exact_case1(x: f64, _y: f64, t: f64, modes: usize, re: f64, a: [f64; 2]) -> f64 {
    (1..=modes)
        .map(|m| {
            let m = m as f64;
            (-4.0 * m * m * PI * PI * t / re).exp() * (2.0 * PI * m * (x - a[0] * t)).sin()
        })
        .sum()
}

/// Advection–diffusion solution on `[0,√2]²`: waves along the diagonal.
pub fn ad_exact_case2(x: f64, y: f64, t: f64, modes: usize, re: f64, a: [f64; 2]) -> f64 {
    let k = 2f64.sqrt() * PI;
    (1..=modes)
        .map(|m| {
            let m = m as f64;
            (-4.0 * m * m * PI * PI * t / re).exp() * (k * m * (x + y - (a[0] + a[1]) * t)).sin()
        })
        .sum()
}

/// `e^{-z} I_n(z)` for `n = 0..=n_max`, by downward recurrence normalised
/// with `I_0 + 2 Σ I_n = e^z`.
pub fn scaled_bessel_i(n_max: usize, z: f64) -> Result<Vec<f64>> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::Evaluation(format!(
            "Bessel argument {z} must be positive and finite"
        )));
    }
    let start = 2 * (n_max + z.ceil() as usize) + 40;
    let mut out = vec![0.0; n_max + 1];
    let (mut above, mut current) = (0.0f64, 1e-300f64);
    let mut sum = 0.0;
    for k in (1..=start).rev() {
        let below = above + 2.0 * k as f64 / z * current;
        above = current;
        current = below;
        // `current` is now I_{k-1}, `above` is I_k.
        if k <= n_max {
            out[k] = above;
        }
        sum += 2.0 * above;
        if current > 1e250 {
            let f = 1e-250;
            current *= f;
            above *= f;
            sum *= f;
            out.iter_mut().for_each(|v| *v *= f);
        }
    }
    out[0] = current;
    sum += current;
    out.iter_mut().for_each(|v| *v /= sum);
    Ok(out)
}

/// Cole–Hopf series for viscous Burgers with `u(x,0) = sin(2πx)` on the
/// unit period. Coefficients are computed once per Reynolds number.
#[derive(Clone, Debug)]
pub struct BurgersSeries {
    re: f64,
    /// `A_0, A_1, ...` of the series.
    coeffs: Vec<f64>,
}

impl BurgersSeries {
    pub fn new(re: f64, n_terms: usize) -> Result<Self> {
        let i = scaled_bessel_i(n_terms, re / (4.0 * PI))?;
        let coeffs = i
            .iter()
            .enumerate()
            .map(|(n, v)| if n == 0 { *v } else { 2.0 * v })
            .collect();
        Ok(BurgersSeries { re, coeffs })
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        let mut num = 0.0;
        let mut den = self.coeffs[0];
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            let nf = n as f64;
            let a = a * (-4.0 * nf * nf * PI * PI * t / self.re).exp();
            let (s, c) = (2.0 * nf * PI * x).sin_cos();
            num += nf * a * s;
            den += a * c;
        }
        if !den.is_finite() || den.abs() < 1e-300 {
            return Err(Error::Evaluation(format!(
                "Burgers series denominator {den:e} at x = {x}, t = {t}"
            )));
        }
        Ok(4.0 * PI / self.re * num / den)
    }
}

/// Single-point wrapper over [`BurgersSeries`].
pub fn burgers_exact(x: f64, t: f64, re: f64, n_terms: usize) -> Result<f64> {
    BurgersSeries::new(re, n_terms)?.eval(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bessel_small_argument_series() {
        let z = 0.7;
        let i = scaled_bessel_i(10, z).unwrap();
        for (n, &v) in i.iter().enumerate().take(6) {
            // Power series I_n(z) = Σ (z/2)^{2k+n} / (k! (n+k)!).
            let mut term = (0..n).fold(1.0, |acc, j| acc * (z / 2.0) / (j + 1) as f64);
            let mut series = 0.0;
            for k in 0..30 {
                series += term;
                term *= (z / 2.0).powi(2) / ((k + 1) as f64 * (n + k + 1) as f64);
            }
            assert!((v - (-z).exp() * series).abs() < 1e-15, "n = {n}");
        }
    }

    #[test]
    fn bessel_large_argument_stays_finite() {
        let i = scaled_bessel_i(40, 800.0).unwrap();
        assert!(i.iter().all(|v| v.is_finite() && *v > 0.0));
        // e^{-z} I_0(z) ≈ 1/√(2πz) for large z.
        assert!((i[0] - 1.0 / (2.0 * PI * 800.0).sqrt()).abs() < 1e-4 * i[0] * 10.0);
    }

    #[test]
    fn test_function_vanishes_on_y_zero() {
        for j in 0..20 {
            assert_eq!(test_function(j as f64 / 19.0, 0.0).value, 0.0);
        }
    }

    #[test]
    fn ad_single_mode_matches_closed_form() {
        let (x, t, re) = (0.3, 0.7, 50.0);
        let v = ad_exact_case1(x, 0.0, t, 1, re, [1.0, 0.0]);
        let e = (-4.0 * PI * PI * t / re).exp() * (2.0 * PI * (x - t)).sin();
        assert!((v - e).abs() < 1e-15);
    }

    #[test]
    fn disc_forcing_is_the_laplacian() {
        let h = 1e-4;
        for &(x, y) in &[(0.3, 0.2), (-0.5, 0.4), (0.1, -0.7), (0.6, 0.6)] {
            let v = |x, y| poisson_disc(x, y).0;
            let lap = (v(x + h, y) + v(x - h, y) + v(x, y + h) + v(x, y - h) - 4.0 * v(x, y)) / (h * h);
            assert!(
                (lap - poisson_disc(x, y).1).abs() < 1e-5,
                "{lap} vs {}",
                poisson_disc(x, y).1
            );
        }
    }

    #[test]
    fn disc_solution_vanishes_on_boundary() {
        for j in 0..16 {
            let th = j as f64 * PI / 8.0;
            assert!(poisson_disc(th.cos(), th.sin()).0.abs() < 1e-15);
        }
    }
}
