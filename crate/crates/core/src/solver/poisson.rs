use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::GlobalOperator;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Boundary {
    /// Constant null space removed by working with mean-zero vectors.
    Periodic,
    /// Listed nodes get identity rows carrying the given values.
    Dirichlet(Vec<(usize, f64)>),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub tolerance: f64,
    /// Iteration cap as a multiple of the system size.
    pub max_iter_factor: usize,
    /// Use a dense solve when the system is at most this large.
    pub dense_limit: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tolerance: 1e-10,
            max_iter_factor: 10,
            dense_limit: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoissonSolution {
    pub values: Vec<f64>,
    pub iterations: usize,
    /// Final relative residual; for periodic problems it is measured after
    /// removing the mean.
    pub residual: f64,
    pub history: Vec<f64>,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn remove_mean(v: &mut [f64]) {
    let m = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= m);
}

/// Jacobi-preconditioned BiCGStab (right preconditioning) for `A x = b`,
/// where `apply` computes `A x`. Returns the solution, iteration count,
/// final relative residual and residual history.
pub fn bicgstab(
    apply: impl Fn(&[f64], &mut [f64]),
    diag: &[f64],
    b: &[f64],
    x0: Option<&[f64]>,
    tol: f64,
    max_iter: usize,
) -> Result<(Vec<f64>, usize, f64, Vec<f64>)> {
    let n = b.len();
    let inv: Vec<f64> = diag.iter().map(|&d| if d != 0.0 { 1.0 / d } else { 1.0 }).collect();
    let bnorm = norm(b);
    let mut x = x0.map_or_else(|| vec![0.0; n], |v| v.to_vec());
    if bnorm == 0.0 {
        return Ok((vec![0.0; n], 0, 0.0, vec![0.0]));
    }
    let mut r = vec![0.0; n];
    apply(&x, &mut r);
    r.iter_mut().zip(b).for_each(|(ri, bi)| *ri = bi - *ri);
    let r_hat = r.clone();
    let (mut rho, mut alpha, mut omega) = (1.0, 1.0, 1.0);
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut s = vec![0.0; n];
    let mut z = vec![0.0; n];
    let mut t = vec![0.0; n];
    let mut history = vec![norm(&r) / bnorm];
    for it in 1..=max_iter {
        let rho_new = dot(&r_hat, &r);
        if rho_new == 0.0 || omega == 0.0 {
            break;
        }
        let beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for i in 0..n {
            p[i] = r[i] + beta * (p[i] - omega * v[i]);
            y[i] = inv[i] * p[i];
        }
        apply(&y, &mut v);
        let denom = dot(&r_hat, &v);
        if denom == 0.0 {
            break;
        }
        alpha = rho / denom;
        for i in 0..n {
            s[i] = r[i] - alpha * v[i];
        }
        let snorm = norm(&s) / bnorm;
        if snorm <= tol {
            for i in 0..n {
                x[i] += alpha * y[i];
            }
            history.push(snorm);
            return Ok((x, it, snorm, history));
        }
        for i in 0..n {
            z[i] = inv[i] * s[i];
        }
        apply(&z, &mut t);
        let tt = dot(&t, &t);
        omega = if tt > 0.0 { dot(&t, &s) / tt } else { 0.0 };
        for i in 0..n {
            x[i] += alpha * y[i] + omega * z[i];
            r[i] = s[i] - omega * t[i];
        }
        let rel = norm(&r) / bnorm;
        history.push(rel);
        if !rel.is_finite() {
            break;
        }
        if rel <= tol {
            return Ok((x, it, rel, history));
        }
    }
    let residual = *history.last().unwrap_or(&f64::NAN);
    Err(Error::IterativeFailure {
        iterations: history.len() - 1,
        residual,
        history,
    })
}

/// Dense solve used as a cross-check path. Periodic problems are bordered
/// with the mean-zero constraint.
fn dense_solve(a: &GlobalOperator, b: &[f64], periodic: bool) -> Result<Vec<f64>> {
    let n = a.n;
    let size = if periodic { n + 1 } else { n };
    let mut m = DMatrix::<f64>::zeros(size, size);
    let dense = a.to_dense();
    m.view_mut((0, 0), (n, n)).copy_from(&dense);
    let mut rhs = DVector::<f64>::zeros(size);
    for i in 0..n {
        rhs[i] = b[i];
    }
    if periodic {
        for i in 0..n {
            m[(i, n)] = 1.0;
            m[(n, i)] = 1.0;
        }
    }
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular("dense Poisson system is singular".into()))?;
    Ok(x.iter().take(n).copied().collect())
}

/// Solves `L φ = f` with the given boundary treatment.
pub fn poisson_solve(l: &GlobalOperator, f: &[f64], bc: &Boundary, opts: &SolverOptions) -> Result<PoissonSolution> {
    let n = l.n;
    if f.len() != n {
        return Err(Error::InvalidInput("right-hand side length mismatch".into()));
    }
    let mut a = l.clone();
    let mut b = f.to_vec();
    let periodic = matches!(bc, Boundary::Periodic);
    match bc {
        Boundary::Periodic => remove_mean(&mut b),
        Boundary::Dirichlet(values) => {
            let rows: Vec<usize> = values.iter().map(|v| v.0).collect();
            a.set_identity_rows(&rows);
            for &(i, g) in values {
                b[i] = g;
            }
        }
    }
    let apply = |x: &[f64], y: &mut [f64]| {
        a.matvec_into(x, y);
        if periodic {
            remove_mean(y);
        }
    };
    let residual_of = |x: &[f64]| {
        let mut r = vec![0.0; n];
        apply(x, &mut r);
        let d: Vec<f64> = r.iter().zip(&b).map(|(p, q)| p - q).collect();
        let bn = norm(&b);
        if bn == 0.0 {
            norm(&d)
        } else {
            norm(&d) / bn
        }
    };

    if n <= opts.dense_limit {
        let mut x = dense_solve(&a, &b, periodic)?;
        if periodic {
            remove_mean(&mut x);
        }
        let residual = residual_of(&x);
        return Ok(PoissonSolution {
            values: x,
            iterations: 0,
            residual,
            history: vec![residual],
        });
    }

    let diag = a.diagonal();
    let (mut x, iterations, _, history) = bicgstab(apply, &diag, &b, None, opts.tolerance, opts.max_iter_factor * n)?;
    if periodic {
        remove_mean(&mut x);
    }
    let residual = residual_of(&x);
    Ok(PoissonSolution {
        values: x,
        iterations,
        residual,
        history,
    })
}
