use nalgebra::{DMatrix, DVector};

use super::poly::{factorial, operator_on_monomial, solve_qr};
use super::{NodeWeights, OperatorKind, CONDITION_LIMIT};
use crate::kernels::{hermite_basis, monomial_exponents, KernelFamily, KernelSpec};
use crate::nodeset::Stencil;
use crate::{Error, Result};

/// Number of unknowns in the order-`m` LABFM system.
pub fn labfm_system_size(m: usize) -> usize {
    (m * m + 3 * m) / 2
}

/// Moment matrix `A_pk = Σ_j X_p(u_j) Ψ_k(u_j)` with scaled Taylor monomials
/// `X_p = u^a v^b / (a! b!)`, `u = x/h`, and the per-neighbour ABF values.
fn moments(stencil: &Stencil, spec: &KernelSpec, m: usize) -> Result<(DMatrix<f64>, Vec<Vec<f64>>)> {
    let exps = monomial_exponents(m);
    let n = exps.len();
    let h = spec.h;
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut basis = Vec::with_capacity(stencil.len());
    for off in &stencil.offsets {
        let psi = hermite_basis(spec, m, *off)?;
        let (u, v) = (off[0] / h, off[1] / h);
        for (p, &(ea, eb)) in exps.iter().enumerate() {
            let x = u.powi(ea as i32) * v.powi(eb as i32) / (factorial(ea) * factorial(eb));
            if x == 0.0 {
                continue;
            }
            for (k, &pk) in psi.iter().enumerate() {
                a[(p, k)] += x * pk;
            }
        }
        basis.push(psi);
    }
    Ok((a, basis))
}

fn check(stencil: &Stencil, spec: &KernelSpec, m: usize) -> Result<()> {
    if !matches!(spec.family, KernelFamily::HermiteAbf(_)) {
        return Err(Error::InvalidInput(format!(
            "{:?} is not a Hermite ABF family",
            spec.family
        )));
    }
    spec.validate()?;
    let need = labfm_system_size(m);
    if stencil.len() < need {
        return Err(Error::TooFewNeighbours {
            node: stencil.centre,
            found: stencil.len(),
            required: need,
        });
    }
    Ok(())
}

/// Condition estimate of the LABFM moment matrix for this stencil.
pub fn labfm_condition(stencil: &Stencil, spec: &KernelSpec, m: usize) -> Result<f64> {
    check(stencil, spec, m)?;
    let (a, _) = moments(stencil, spec, m)?;
    let n = a.nrows();
    let (_, cond) = solve_qr(a, &[DVector::zeros(n)])?;
    Ok(cond)
}

/// LABFM weights for several operators sharing one moment matrix.
pub fn labfm_weights_multi(
    stencil: &Stencil,
    spec: &KernelSpec,
    m: usize,
    ops: &[OperatorKind],
) -> Result<Vec<NodeWeights>> {
    check(stencil, spec, m)?;
    let exps = monomial_exponents(m);
    let h = spec.h;
    let mut rhs = Vec::with_capacity(ops.len());
    for &op in ops {
        op.validate()?;
        if op.degree() > m {
            return Err(Error::InvalidInput(format!(
                "{op:?} needs consistency order at least {}, got {m}",
                op.degree()
            )));
        }
        let scale = h.powi(op.degree() as i32);
        rhs.push(DVector::from_iterator(
            exps.len(),
            exps.iter()
                .map(|&(a, b)| operator_on_monomial(op, a, b) / (factorial(a) * factorial(b) * scale)),
        ));
    }
    let (a, basis) = moments(stencil, spec, m)?;
    let (sols, condition) = solve_qr(a, &rhs)?;
    if condition > CONDITION_LIMIT {
        return Err(Error::Conditioning {
            node: stencil.centre,
            condition,
        });
    }
    Ok(sols
        .iter()
        .map(|alpha| NodeWeights {
            weights: basis
                .iter()
                .map(|psi| psi.iter().zip(alpha.iter()).map(|(p, a)| p * a).sum())
                .collect(),
            condition,
        })
        .collect())
}

/// LABFM weights of consistency order `m` for one operator.
pub fn labfm_weights(stencil: &Stencil, spec: &KernelSpec, m: usize, op: OperatorKind) -> Result<NodeWeights> {
    Ok(labfm_weights_multi(stencil, spec, m, &[op])?.remove(0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn system_sizes() {
        assert_eq!(labfm_system_size(4), 14);
        assert_eq!(labfm_system_size(6), 27);
        assert_eq!(labfm_system_size(8), 44);
    }

    #[test]
    fn too_few_neighbours() {
        let st = Stencil {
            centre: 2,
            neighbours: (0..20).collect(),
            offsets: (0..20).map(|k| [0.01 * k as f64, 0.02]).collect(),
        };
        let spec = KernelSpec::hermite(crate::kernels::AbfWeight::WendlandC2, 0.2);
        let err = labfm_weights(&st, &spec, 6, OperatorKind::Ddx).unwrap_err();
        assert!(matches!(err, Error::TooFewNeighbours { required: 27, .. }));
    }
}
