use nalgebra::linalg::Schur;
use num_complex::Complex64;

use super::GlobalOperator;
use crate::{Error, Result};

/// Default node-count limit for dense eigensolves.
pub const SPECTRUM_BUDGET: usize = 5000;

/// Full spectrum by a dense real Schur decomposition, sorted by real part
/// (then imaginary part).
pub fn spectrum(op: &GlobalOperator, budget: usize) -> Result<Vec<Complex64>> {
    if op.n > budget {
        return Err(Error::BudgetExceeded { n: op.n, budget });
    }
    if op.n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(op.to_dense(), f64::EPSILON, 1000 * op.n)
        .ok_or_else(|| Error::Singular("Schur iteration did not converge".into()))?;
    let mut eig: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    eig.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(eig)
}

/// Summary statistics of a spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectrumSummary {
    pub max_real: f64,
    pub radius: f64,
}

pub fn summarize(eig: &[Complex64]) -> SpectrumSummary {
    SpectrumSummary {
        max_real: eig.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max),
        radius: eig.iter().map(|z| z.norm()).fold(0.0, f64::max),
    }
}
