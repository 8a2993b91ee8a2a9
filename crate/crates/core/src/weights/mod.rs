//! Per-node derivative weights for SPH, RBF-FD and LABFM, plus central
//! finite differences on uniform grids for reference.
//!
//! Every weight set is in difference form: the operator at node `i` is
//! `Σ_j (φ_j - φ_i) w_ji` over the stencil of `i`.

mod fd;
mod io;
mod labfm;
mod poly;
mod rbffd;
mod sph;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use fd::{fd_reference_weights, fd_weight_set, LineWeights};
pub use io::{read_weights, write_weights};
pub use labfm::{labfm_condition, labfm_system_size, labfm_weights, labfm_weights_multi};
pub use poly::{monomials_upto, operator_on_monomial};
pub use rbffd::{rbffd_weights, solve_flatness, FlatnessNode, FlatnessRule};
pub use sph::{sph_gradient_weights, sph_laplacian_weights};

use crate::kernels::{AbfWeight, KernelFamily, KernelSpec};
use crate::nodeset::{build_stencils, stencil_within, Domain, NeighbourGrid, NodeSet, Selector, Stencil};
use crate::{Error, Result};

/// Local systems with a larger condition estimate are rejected.
pub const CONDITION_LIMIT: f64 = 1e12;
/// LABFM stencils grow until both moment matrices are better conditioned
/// than this.
pub const SIZING_CONDITION: f64 = 1e10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Ddx,
    Ddy,
    Laplacian,
    /// `Δ^(m/2)` for even `m ≥ 4`.
    Hyperviscosity(usize),
}

impl OperatorKind {
    /// Differential order.
    pub fn degree(self) -> usize {
        match self {
            OperatorKind::Ddx | OperatorKind::Ddy => 1,
            OperatorKind::Laplacian => 2,
            OperatorKind::Hyperviscosity(m) => m,
        }
    }

    pub fn validate(self) -> Result<()> {
        match self {
            OperatorKind::Hyperviscosity(m) if m < 4 || m % 2 != 0 => Err(Error::InvalidInput(format!(
                "hyperviscosity order must be even and at least 4, got {m}"
            ))),
            _ => Ok(()),
        }
    }

    pub fn is_gradient(self) -> bool {
        matches!(self, OperatorKind::Ddx | OperatorKind::Ddy)
    }

    pub fn name(self) -> String {
        match self {
            OperatorKind::Ddx => "ddx".into(),
            OperatorKind::Ddy => "ddy".into(),
            OperatorKind::Laplacian => "laplacian".into(),
            OperatorKind::Hyperviscosity(m) => format!("hyperviscosity-{m}"),
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "ddx" => Ok(OperatorKind::Ddx),
            "ddy" => Ok(OperatorKind::Ddy),
            "laplacian" => Ok(OperatorKind::Laplacian),
            _ => s
                .strip_prefix("hyperviscosity-")
                .and_then(|m| m.parse().ok())
                .map(OperatorKind::Hyperviscosity)
                .ok_or_else(|| Error::InvalidInput(format!("unknown operator {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Sph,
    RbfFd,
    Labfm,
    Fd,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Sph => "sph",
            Method::RbfFd => "rbf-fd",
            Method::Labfm => "labfm",
            Method::Fd => "fd",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "sph" => Ok(Method::Sph),
            "rbf-fd" => Ok(Method::RbfFd),
            "labfm" => Ok(Method::Labfm),
            "fd" => Ok(Method::Fd),
            _ => Err(Error::InvalidInput(format!("unknown method {s:?}"))),
        }
    }
}

/// Weights of one node with the condition estimate of its local system.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeWeights {
    pub weights: Vec<f64>,
    pub condition: f64,
}

/// Weights of one operator for every node, aligned with the stencils.
/// Dirichlet nodes of a disc carry empty stencils.
#[derive(Clone, Debug)]
pub struct WeightSet {
    pub method: Method,
    pub operator: OperatorKind,
    pub order: usize,
    pub stencils: Arc<Vec<Stencil>>,
    pub weights: Vec<Vec<f64>>,
    pub conditions: Vec<f64>,
}

impl WeightSet {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        if self.stencils.len() != self.weights.len() || self.conditions.len() != self.weights.len() {
            return Err(Error::InvalidInput("weight set arrays differ in length".into()));
        }
        for (i, (st, w)) in self.stencils.iter().zip(&self.weights).enumerate() {
            if st.len() != w.len() {
                return Err(Error::StencilMismatch { node: i });
            }
            if w.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!("non-finite weight at node {i}")));
            }
        }
        Ok(())
    }

    /// Operator value at node `i`.
    pub fn apply_at(&self, i: usize, field: &[f64]) -> f64 {
        let st = &self.stencils[i];
        let fi = field[i];
        st.neighbours
            .iter()
            .zip(&self.weights[i])
            .map(|(&j, w)| (field[j] - fi) * w)
            .sum()
    }

    pub fn apply(&self, field: &[f64]) -> Vec<f64> {
        (0..self.len()).map(|i| self.apply_at(i, field)).collect()
    }
}

/// Which kernel of a method's pair to use: the primary one is the usual
/// single-kernel choice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelSlot {
    Primary,
    Secondary,
}

fn default_gaussian_target() -> f64 {
    FlatnessRule::GAUSSIAN.target
}

fn default_imq_target() -> f64 {
    FlatnessRule::INVERSE_MULTIQUADRIC.target
}

/// A discretisation method with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum Scheme {
    /// Wendland C2 and Gaussian kernels with support `2h`, `h = h_over_s · s`.
    Sph { h_over_s: f64 },
    /// Gaussian and inverse multiquadric RBFs on the `neighbours` nearest
    /// nodes, with ε fixed per stencil by the value at the farthest node.
    RbfFd {
        m: usize,
        neighbours: usize,
        #[serde(default = "default_gaussian_target")]
        gaussian_target: f64,
        #[serde(default = "default_imq_target")]
        imq_target: f64,
    },
    /// Hermite ABFs with Wendland C2 and Gaussian weights on adaptively sized
    /// radius stencils.
    Labfm { m: usize },
}

impl Scheme {
    pub fn sph(h_over_s: f64) -> Self {
        Scheme::Sph { h_over_s }
    }

    pub fn rbffd(m: usize, neighbours: usize) -> Self {
        Scheme::RbfFd {
            m,
            neighbours,
            gaussian_target: default_gaussian_target(),
            imq_target: default_imq_target(),
        }
    }

    /// RBF-FD with the usual neighbour count for `m ≤ 3`
    /// (10, 15, 20, 25).
    pub fn rbffd_default(m: usize) -> Result<Self> {
        match m {
            0..=3 => Ok(Scheme::rbffd(m, 10 + 5 * m)),
            _ => Err(Error::InvalidInput(format!(
                "no default neighbour count for RBF-FD order {m}"
            ))),
        }
    }

    pub fn labfm(m: usize) -> Self {
        Scheme::Labfm { m }
    }

    pub fn method(&self) -> Method {
        match self {
            Scheme::Sph { .. } => Method::Sph,
            Scheme::RbfFd { .. } => Method::RbfFd,
            Scheme::Labfm { .. } => Method::Labfm,
        }
    }

    /// Polynomial consistency order (zero for SPH).
    pub fn order(&self) -> usize {
        match *self {
            Scheme::Sph { .. } => 0,
            Scheme::RbfFd { m, .. } | Scheme::Labfm { m } => m,
        }
    }

    pub fn family(&self, slot: KernelSlot) -> KernelFamily {
        use KernelSlot::*;
        match (self, slot) {
            (Scheme::Sph { .. }, Primary) => KernelFamily::WendlandC2,
            (Scheme::Sph { .. }, Secondary) => KernelFamily::GaussianSph,
            (Scheme::RbfFd { .. }, Primary) => KernelFamily::GaussianRbf,
            (Scheme::RbfFd { .. }, Secondary) => KernelFamily::InverseMultiquadric,
            (Scheme::Labfm { .. }, Primary) => KernelFamily::HermiteAbf(AbfWeight::WendlandC2),
            (Scheme::Labfm { .. }, Secondary) => KernelFamily::HermiteAbf(AbfWeight::Gaussian),
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Scheme::Sph { h_over_s } => format!("sph-h{h_over_s}"),
            Scheme::RbfFd { m, neighbours, .. } => format!("rbf-fd-m{m}-n{neighbours}"),
            Scheme::Labfm { m } => format!("labfm-m{m}"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::Sph { h_over_s } if !(h_over_s > 0.0) => {
                Err(Error::InvalidInput(format!("h/s must be positive, got {h_over_s}")))
            }
            Scheme::RbfFd { m, neighbours, .. } if neighbours <= labfm_system_size(m) => {
                Err(Error::InvalidInput(format!(
                    "RBF-FD order {m} needs more than {} neighbours, got {neighbours}",
                    labfm_system_size(m)
                )))
            }
            Scheme::Labfm { m } if !(1..=8).contains(&m) => {
                Err(Error::InvalidInput(format!("LABFM order {m} outside 1..=8")))
            }
            _ => Ok(()),
        }
    }
}

/// Stencils shared by both kernels of a scheme, with the per-node
/// smoothing length (zero where unused).
#[derive(Clone, Debug)]
pub struct SchemeStencils {
    pub scheme: Scheme,
    pub stencils: Arc<Vec<Stencil>>,
    pub smoothing: Vec<f64>,
}

fn empty_stencil(i: usize) -> Stencil {
    Stencil {
        centre: i,
        neighbours: Vec::new(),
        offsets: Vec::new(),
    }
}

fn half_period(domain: &Domain) -> f64 {
    match domain {
        Domain::PeriodicRectangle { size, .. } => 0.5 * size[0].min(size[1]),
        Domain::Disc { radius, .. } => 4.0 * radius,
    }
}

/// Radius stencil for LABFM: starts at `2.4 s √(m/4)` (1.5 times that near
/// a disc boundary) and grows by 10% until it holds at least 1.5 times the
/// system size and both moment matrices are well conditioned.
fn labfm_stencil(nodes: &NodeSet, grid: &NeighbourGrid, i: usize, m: usize) -> Result<(Stencil, f64)> {
    let s = nodes.spacing;
    let need = (1.5 * labfm_system_size(m) as f64).ceil() as usize;
    let mut radius = 2.4 * s * (m as f64 / 4.0).sqrt();
    if let Domain::Disc { centre, radius: rd } = nodes.domain {
        let p = nodes.positions[i];
        let dist = rd - ((p[0] - centre[0]).powi(2) + (p[1] - centre[1]).powi(2)).sqrt();
        if dist < radius {
            radius *= 1.5;
        }
    }
    let limit = half_period(&nodes.domain);
    let mut last_condition = f64::NAN;
    while radius < limit {
        let st = stencil_within(nodes, grid, i, radius);
        if st.len() >= need {
            let h = 0.5 * radius;
            let c1 = labfm_condition(&st, &KernelSpec::hermite(AbfWeight::WendlandC2, h), m);
            let c2 = labfm_condition(&st, &KernelSpec::hermite(AbfWeight::Gaussian, h), m);
            match (c1, c2) {
                (Ok(a), Ok(b)) if a < SIZING_CONDITION && b < SIZING_CONDITION => return Ok((st, h)),
                (Ok(a), Ok(b)) => last_condition = a.max(b),
                _ => last_condition = f64::INFINITY,
            }
        }
        radius *= 1.1;
    }
    Err(Error::Sizing {
        spacing: s,
        reason: format!(
            "no well-conditioned LABFM stencil of order {m} at node {i} (last condition {last_condition:e})"
        ),
    })
}

/// Builds the stencils of `scheme` on `nodes`.
pub fn scheme_stencils(nodes: &NodeSet, scheme: Scheme) -> Result<SchemeStencils> {
    scheme.validate()?;
    let n = nodes.len();
    let s = nodes.spacing;
    let (mut stencils, smoothing) = match scheme {
        Scheme::Sph { h_over_s } => {
            let h = h_over_s * s;
            (build_stencils(nodes, Selector::Radius(2.0 * h))?, vec![h; n])
        }
        Scheme::RbfFd { neighbours, .. } => (build_stencils(nodes, Selector::Count(neighbours))?, vec![0.0; n]),
        Scheme::Labfm { m } => {
            let grid = NeighbourGrid::new(nodes, 2.4 * s);
            let mut st = Vec::with_capacity(n);
            let mut hs = Vec::with_capacity(n);
            for i in 0..n {
                if nodes.is_boundary(i) {
                    st.push(empty_stencil(i));
                    hs.push(0.0);
                } else {
                    let (stencil, h) = labfm_stencil(nodes, &grid, i, m)?;
                    st.push(stencil);
                    hs.push(h);
                }
            }
            (st, hs)
        }
    };
    for (i, st) in stencils.iter_mut().enumerate() {
        if nodes.is_boundary(i) {
            *st = empty_stencil(i);
        }
    }
    Ok(SchemeStencils {
        scheme,
        stencils: Arc::new(stencils),
        smoothing,
    })
}

/// Weight sets for several operators with one kernel of the scheme, on
/// prebuilt stencils. Boundary nodes get empty weights.
pub fn scheme_weights(
    nodes: &NodeSet,
    st: &SchemeStencils,
    slot: KernelSlot,
    ops: &[OperatorKind],
) -> Result<Vec<WeightSet>> {
    let n = nodes.len();
    let scheme = st.scheme;
    let family = scheme.family(slot);
    let mut weights = vec![Vec::with_capacity(n); ops.len()];
    let mut conditions = vec![Vec::with_capacity(n); ops.len()];
    let volume = nodes.spacing * nodes.spacing;
    for (i, stencil) in st.stencils.iter().enumerate() {
        if stencil.is_empty() {
            for k in 0..ops.len() {
                weights[k].push(Vec::new());
                conditions[k].push(1.0);
            }
            continue;
        }
        let per_op: Vec<NodeWeights> = match scheme {
            Scheme::Sph { .. } => {
                let spec = KernelSpec {
                    family,
                    h: st.smoothing[i],
                    epsilon: 0.0,
                };
                let mut grad = None;
                ops.iter()
                    .map(|&op| match op {
                        OperatorKind::Ddx | OperatorKind::Ddy => {
                            if grad.is_none() {
                                grad = Some(sph_gradient_weights(stencil, &spec, volume)?);
                            }
                            let (wx, wy) = grad.clone().unwrap();
                            Ok(NodeWeights {
                                weights: if op == OperatorKind::Ddx { wx } else { wy },
                                condition: 1.0,
                            })
                        }
                        OperatorKind::Laplacian => Ok(NodeWeights {
                            weights: sph_laplacian_weights(stencil, &spec, volume)?,
                            condition: 1.0,
                        }),
                        OperatorKind::Hyperviscosity(_) => Err(Error::Unsupported("SPH hyperviscosity".into())),
                    })
                    .collect::<Result<_>>()?
            }
            Scheme::RbfFd {
                m,
                gaussian_target,
                imq_target,
                ..
            } => {
                let target = match slot {
                    KernelSlot::Primary => gaussian_target,
                    KernelSlot::Secondary => imq_target,
                };
                let rule = FlatnessRule {
                    target,
                    at: FlatnessNode::Farthest,
                };
                let eps = solve_flatness(stencil, family, rule)?;
                let spec = KernelSpec {
                    family,
                    h: 0.0,
                    epsilon: eps,
                };
                ops.iter()
                    .map(|&op| rbffd_weights(stencil, &spec, m, op))
                    .collect::<Result<_>>()?
            }
            Scheme::Labfm { m } => {
                let spec = KernelSpec {
                    family,
                    h: st.smoothing[i],
                    epsilon: 0.0,
                };
                labfm_weights_multi(stencil, &spec, m, ops)?
            }
        };
        for (k, nw) in per_op.into_iter().enumerate() {
            weights[k].push(nw.weights);
            conditions[k].push(nw.condition);
        }
    }
    Ok(ops
        .iter()
        .zip(weights.into_iter().zip(conditions))
        .map(|(&op, (w, c))| WeightSet {
            method: scheme.method(),
            operator: op,
            order: scheme.order(),
            stencils: Arc::clone(&st.stencils),
            weights: w,
            conditions: c,
        })
        .collect())
}

/// Single-operator convenience wrapper over [`scheme_weights`].
pub fn scheme_weight_set(
    nodes: &NodeSet,
    st: &SchemeStencils,
    slot: KernelSlot,
    op: OperatorKind,
) -> Result<WeightSet> {
    Ok(scheme_weights(nodes, st, slot, &[op])?.remove(0))
}
