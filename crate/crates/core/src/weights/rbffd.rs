use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::poly::{monomials_upto, operator_on_monomial, solve_qr};
use super::{NodeWeights, OperatorKind, CONDITION_LIMIT};
use crate::kernels::{radial_laplacian_power, rbf_operator_value, rbf_value, KernelFamily, KernelSpec, RbfOp};
use crate::nodeset::Stencil;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlatnessNode {
    Farthest,
    Nearest,
}

/// Fixes ε per stencil by prescribing the RBF value at one stencil node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FlatnessRule {
    pub target: f64,
    pub at: FlatnessNode,
}

impl FlatnessRule {
    /// `ψ = 1/2` at the farthest neighbour.
    pub const GAUSSIAN: FlatnessRule = FlatnessRule {
        target: 0.5,
        at: FlatnessNode::Farthest,
    };
    /// `ψ = 4/5` at the farthest neighbour.
    pub const INVERSE_MULTIQUADRIC: FlatnessRule = FlatnessRule {
        target: 0.8,
        at: FlatnessNode::Farthest,
    };
}

/// Closed-form ε such that the RBF takes `rule.target` at the chosen node.
pub fn solve_flatness(stencil: &Stencil, family: KernelFamily, rule: FlatnessRule) -> Result<f64> {
    if stencil.is_empty() {
        return Err(Error::EmptyStencil { node: stencil.centre });
    }
    let r = match rule.at {
        FlatnessNode::Farthest => stencil.radius(),
        FlatnessNode::Nearest => stencil.min_distance(),
    };
    if !(r > 0.0) {
        return Err(Error::InvalidInput(format!(
            "stencil of node {} has zero extent",
            stencil.centre
        )));
    }
    let t = rule.target;
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::InvalidInput(format!("flatness target {t} outside (0, 1)")));
    }
    match family {
        KernelFamily::GaussianRbf => Ok((-t.ln()).sqrt() / r),
        KernelFamily::InverseMultiquadric => Ok((1.0 / (t * t) - 1.0).sqrt() / r),
        other => Err(Error::InvalidInput(format!("{other:?} has no flatness parameter"))),
    }
}

fn operator_value(spec: &KernelSpec, offset: [f64; 2], op: OperatorKind) -> Result<f64> {
    Ok(match op {
        OperatorKind::Ddx => rbf_operator_value(spec, offset, RbfOp::Dx),
        OperatorKind::Ddy => rbf_operator_value(spec, offset, RbfOp::Dy),
        OperatorKind::Laplacian => rbf_operator_value(spec, offset, RbfOp::Laplacian),
        OperatorKind::Hyperviscosity(mf) => {
            let r = (offset[0] * offset[0] + offset[1] * offset[1]).sqrt();
            radial_laplacian_power(spec, r, mf / 2)?
        }
    })
}

/// Polynomial-augmented RBF-FD weights. Collocation uses the centre node and
/// every neighbour; the augmentation holds all monomials of total degree
/// `≤ m`, the constant included. Offsets are scaled by the stencil radius
/// before the system is formed.
pub fn rbffd_weights(stencil: &Stencil, spec: &KernelSpec, m: usize, op: OperatorKind) -> Result<NodeWeights> {
    if !spec.family.is_rbf() {
        return Err(Error::InvalidInput(format!("{:?} is not an RBF family", spec.family)));
    }
    spec.validate()?;
    op.validate()?;
    let monomials = monomials_upto(m);
    let np = monomials.len();
    let nb = stencil.len();
    if nb < np {
        return Err(Error::TooFewNeighbours {
            node: stencil.centre,
            found: nb,
            required: np,
        });
    }
    let scale = stencil.radius();
    if !(scale > 0.0) {
        return Err(Error::EmptyStencil { node: stencil.centre });
    }
    let scaled = spec.with_epsilon(spec.epsilon * scale);
    let mut pts = Vec::with_capacity(nb + 1);
    pts.push([0.0, 0.0]);
    pts.extend(stencil.offsets.iter().map(|o| [o[0] / scale, o[1] / scale]));

    let n = nb + 1 + np;
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut rhs = DVector::<f64>::zeros(n);
    for (p, xp) in pts.iter().enumerate() {
        for (q, xq) in pts.iter().enumerate().skip(p) {
            let r = ((xp[0] - xq[0]).powi(2) + (xp[1] - xq[1]).powi(2)).sqrt();
            let v = rbf_value(&scaled, r);
            a[(p, q)] = v;
            a[(q, p)] = v;
        }
        for (k, &(ea, eb)) in monomials.iter().enumerate() {
            let v = xp[0].powi(ea as i32) * xp[1].powi(eb as i32);
            a[(p, nb + 1 + k)] = v;
            a[(nb + 1 + k, p)] = v;
        }
        rhs[p] = operator_value(&scaled, [-xp[0], -xp[1]], op)?;
    }
    for (k, &(ea, eb)) in monomials.iter().enumerate() {
        rhs[nb + 1 + k] = operator_on_monomial(op, ea, eb);
    }

    let (sol, condition) = solve_qr(a, &[rhs])?;
    if condition > CONDITION_LIMIT {
        return Err(Error::Conditioning {
            node: stencil.centre,
            condition,
        });
    }
    let unscale = scale.powi(op.degree() as i32);
    Ok(NodeWeights {
        weights: (0..nb).map(|j| sol[0][1 + j] / unscale).collect(),
        condition,
    })
}
