use nalgebra::{DMatrix, DVector};

use super::OperatorKind;
use crate::{Error, Result};

pub(crate) fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// All `(a, b)` with `a + b ≤ m`, constant first, then by total degree and
/// descending x-degree.
pub fn monomials_upto(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity((m + 1) * (m + 2) / 2);
    for n in 0..=m {
        for a in (0..=n).rev() {
            out.push((a, n - a));
        }
    }
    out
}

/// The operator applied to `x^a y^b`, evaluated at the origin.
pub fn operator_on_monomial(op: OperatorKind, a: usize, b: usize) -> f64 {
    match op {
        OperatorKind::Ddx => f64::from(u8::from(a == 1 && b == 0)),
        OperatorKind::Ddy => f64::from(u8::from(a == 0 && b == 1)),
        OperatorKind::Laplacian => {
            if (a, b) == (2, 0) || (a, b) == (0, 2) {
                2.0
            } else {
                0.0
            }
        }
        OperatorKind::Hyperviscosity(mf) => {
            if a + b == mf && a.is_multiple_of(2) && b.is_multiple_of(2) {
                binomial(mf / 2, a / 2) * factorial(a) * factorial(b)
            } else {
                0.0
            }
        }
    }
}

/// Solves a square system by column-pivoted QR, returning the solution and
/// the condition estimate `|R_11| / |R_nn|`.
pub(crate) fn solve_qr(a: DMatrix<f64>, rhs: &[DVector<f64>]) -> Result<(Vec<DVector<f64>>, f64)> {
    let n = a.nrows();
    let qr = a.col_piv_qr();
    let r = qr.r();
    let first = r[(0, 0)].abs();
    let last = r[(n - 1, n - 1)].abs();
    let condition = if last > 0.0 { first / last } else { f64::INFINITY };
    if !condition.is_finite() {
        return Err(Error::Singular("local system is rank deficient".into()));
    }
    let mut out = Vec::with_capacity(rhs.len());
    for b in rhs {
        let x = qr
            .solve(b)
            .ok_or_else(|| Error::Singular("local system is rank deficient".into()))?;
        out.push(x);
    }
    Ok((out, condition))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials_upto(0), vec![(0, 0)]);
        assert_eq!(monomials_upto(2).len(), 6);
        assert_eq!(monomials_upto(4).len(), 15);
    }

    #[test]
    fn hyperviscosity_of_biharmonic_monomials() {
        // Δ² = ∂x⁴ + 2∂x²∂y² + ∂y⁴
        let op = OperatorKind::Hyperviscosity(4);
        assert_eq!(operator_on_monomial(op, 4, 0), 24.0);
        assert_eq!(operator_on_monomial(op, 2, 2), 8.0);
        assert_eq!(operator_on_monomial(op, 0, 4), 24.0);
        assert_eq!(operator_on_monomial(op, 3, 1), 0.0);
        assert_eq!(operator_on_monomial(op, 2, 0), 0.0);
    }

    #[test]
    fn qr_condition_of_diagonal() {
        let a = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, 1e-3, 10.0]));
        let b = DVector::from_vec(vec![1.0, 1.0, 1.0]);
        let (x, cond) = solve_qr(a, &[b]).unwrap();
        assert!((cond - 1e4).abs() < 1e-6);
        assert!((x[0][1] - 1e3).abs() < 1e-9);
    }
}
