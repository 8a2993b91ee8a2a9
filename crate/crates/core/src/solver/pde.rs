use serde::{Deserialize, Serialize};

use super::oracles::{ad_exact_case1, ad_exact_case2, poisson_disc, poisson_periodic, BurgersSeries};
use super::poisson::{poisson_solve, Boundary, PoissonSolution, SolverOptions};
use super::time::{rk4_advance, timestep_with, TimestepRule};
use super::{assemble, l2_norm, GlobalOperator};
use crate::nodeset::NodeSet;
use crate::respower::{
    calibrate_filter_set_bounded, calibrate_filter_set_single, combine, mk_combination, FilterCalibration,
    FilterTargets, KmRule, Quadrature,
};
use crate::weights::{scheme_stencils, scheme_weights, KernelSlot, OperatorKind, Scheme, SchemeStencils, WeightSet};
use crate::{Error, Result};

/// Which weights drive a run: one kernel alone, or the optimised pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorSource {
    SkPrimary,
    SkSecondary,
    Mk,
}

impl OperatorSource {
    pub fn name(self) -> &'static str {
        match self {
            OperatorSource::SkPrimary => "sk1",
            OperatorSource::SkSecondary => "sk2",
            OperatorSource::Mk => "mk",
        }
    }
}

/// Weight sets of `ops` for the chosen source. MK weights are optimised per
/// node and per operator with `k_m`.
pub fn source_weights(
    nodes: &NodeSet,
    st: &SchemeStencils,
    source: OperatorSource,
    ops: &[OperatorKind],
    k_m: KmRule,
    quad: Quadrature,
) -> Result<Vec<WeightSet>> {
    match source {
        OperatorSource::SkPrimary => scheme_weights(nodes, st, KernelSlot::Primary, ops),
        OperatorSource::SkSecondary => scheme_weights(nodes, st, KernelSlot::Secondary, ops),
        OperatorSource::Mk => {
            let hat = scheme_weights(nodes, st, KernelSlot::Primary, ops)?;
            let bar = scheme_weights(nodes, st, KernelSlot::Secondary, ops)?;
            let k_m = k_m.resolve(nodes.nyquist());
            hat.iter()
                .zip(&bar)
                .map(|(h, b)| {
                    let comb = mk_combination(h, b, k_m, quad)?;
                    combine(h, b, &comb.c_hat())
                })
                .collect()
        }
    }
}

/// Global gradient and Laplacian operators.
#[derive(Clone, Debug)]
pub struct PdeOperators {
    pub ddx: GlobalOperator,
    pub ddy: GlobalOperator,
    pub laplacian: GlobalOperator,
}

pub fn build_operators(
    nodes: &NodeSet,
    scheme: Scheme,
    source: OperatorSource,
    k_m: KmRule,
    quad: Quadrature,
) -> Result<PdeOperators> {
    let st = scheme_stencils(nodes, scheme)?;
    let ops = [OperatorKind::Ddx, OperatorKind::Ddy, OperatorKind::Laplacian];
    let ws = source_weights(nodes, &st, source, &ops, k_m, quad)?;
    Ok(PdeOperators {
        ddx: assemble(nodes, &ws[0])?,
        ddy: assemble(nodes, &ws[1])?,
        laplacian: assemble(nodes, &ws[2])?,
    })
}

/// Order-8 LABFM filter matched to the operator source: single-kernel
/// calibration for SK runs, bounded two-target calibration for MK runs.
pub fn build_filter(nodes: &NodeSet, source: OperatorSource, targets: FilterTargets) -> Result<FilterCalibration> {
    let st = scheme_stencils(nodes, Scheme::labfm(8))?;
    let op = [OperatorKind::Hyperviscosity(8)];
    let k_ny = nodes.nyquist();
    match source {
        OperatorSource::SkPrimary => {
            let w = scheme_weights(nodes, &st, KernelSlot::Primary, &op)?;
            calibrate_filter_set_single(&w[0], targets, k_ny)
        }
        OperatorSource::SkSecondary => {
            let w = scheme_weights(nodes, &st, KernelSlot::Secondary, &op)?;
            calibrate_filter_set_single(&w[0], targets, k_ny)
        }
        OperatorSource::Mk => {
            let hat = scheme_weights(nodes, &st, KernelSlot::Primary, &op)?;
            let bar = scheme_weights(nodes, &st, KernelSlot::Secondary, &op)?;
            calibrate_filter_set_bounded(&hat[0], &bar[0], targets, k_ny)
        }
    }
}

/// `-a·∇u + ∇²u / Re`.
pub fn advection_diffusion_rhs(u: &[f64], ops: &PdeOperators, a: [f64; 2], re: f64) -> Vec<f64> {
    let ux = ops.ddx.matvec(u);
    let uy = ops.ddy.matvec(u);
    let lu = ops.laplacian.matvec(u);
    (0..u.len())
        .map(|i| -a[0] * ux[i] - a[1] * uy[i] + lu[i] / re)
        .collect()
}

/// `-(u·∇)u + ∇²u / Re` for both velocity components.
pub fn burgers_rhs(u: &[f64], v: &[f64], ops: &PdeOperators, re: f64) -> (Vec<f64>, Vec<f64>) {
    let (ux, uy, lu) = (ops.ddx.matvec(u), ops.ddy.matvec(u), ops.laplacian.matvec(u));
    let (vx, vy, lv) = (ops.ddx.matvec(v), ops.ddy.matvec(v), ops.laplacian.matvec(v));
    let n = u.len();
    let ru = (0..n).map(|i| -(u[i] * ux[i] + v[i] * uy[i]) + lu[i] / re).collect();
    let rv = (0..n).map(|i| -(u[i] * vx[i] + v[i] * vy[i]) + lv[i] / re).collect();
    (ru, rv)
}

/// Advection–diffusion benchmark layout.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdCase {
    /// Unit square, waves along x.
    Axis,
    /// Square of side √2, waves along the diagonal.
    Diagonal,
}

impl AdCase {
    pub fn side(self) -> f64 {
        match self {
            AdCase::Axis => 1.0,
            AdCase::Diagonal => 2f64.sqrt(),
        }
    }

    pub fn exact(self, x: f64, y: f64, t: f64, modes: usize, re: f64, a: [f64; 2]) -> f64 {
        match self {
            AdCase::Axis => ad_exact_case1(x, y, t, modes, re, a),
            AdCase::Diagonal => ad_exact_case2(x, y, t, modes, re, a),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSettings {
    pub re: f64,
    pub end_time: f64,
    #[serde(default)]
    pub rule: TimestepRule,
    /// Record the error every this many steps.
    #[serde(default = "one")]
    pub record_every: usize,
}

fn one() -> usize {
    1
}

/// Error history of a time-dependent run.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub dt: f64,
    pub times: Vec<f64>,
    pub l2: Vec<f64>,
    /// Time of the first non-finite state, if the run blew up.
    pub diverged_at: Option<f64>,
    /// Final numerical field (first component).
    pub field: Vec<f64>,
}

impl TimeSeries {
    /// First recorded time at which the error reaches `level`.
    pub fn first_crossing(&self, level: f64) -> Option<usize> {
        self.l2.iter().position(|&e| e >= level)
    }

    /// Error at the recorded time closest to `t`.
    pub fn at_time(&self, t: f64) -> Option<f64> {
        self.times
            .iter()
            .zip(&self.l2)
            .min_by(|a, b| (a.0 - t).abs().total_cmp(&(b.0 - t).abs()))
            .map(|(_, &e)| e)
    }
}

fn steps_for(end_time: f64, dt: f64) -> (usize, f64) {
    let steps = (end_time / dt).ceil().max(1.0) as usize;
    (steps, end_time / steps as f64)
}

fn run_loop<E>(
    state: Vec<Vec<f64>>,
    dt: f64,
    settings: &RunSettings,
    rhs: impl FnMut(f64, &[Vec<f64>]) -> Vec<Vec<f64>>,
    filter: Option<&FilterCalibration>,
    error: E,
) -> Result<TimeSeries>
where
    E: Fn(f64, &[Vec<f64>]) -> Result<f64>,
{
    let (steps, dt) = steps_for(settings.end_time, dt);
    let mut state = state;
    let mut times = vec![0.0];
    let mut l2 = vec![error(0.0, &state)?];
    let mut step = 0usize;
    let mut eval_error = None;
    let every = settings.record_every.max(1);
    let outcome = rk4_advance(&mut state, 0.0, dt, steps, rhs, |t, s| {
        if let Some(f) = filter {
            s.iter_mut().for_each(|c| f.apply(c));
        }
        step += 1;
        if (step.is_multiple_of(every) || step == steps) && eval_error.is_none() {
            match error(t, s) {
                Ok(e) => {
                    times.push(t);
                    l2.push(e);
                }
                Err(e) => eval_error = Some(e),
            }
        }
    });
    if let Some(e) = eval_error {
        return Err(e);
    }
    let diverged_at = match outcome {
        Ok(_) => None,
        Err(Error::Divergence { time }) => Some(time),
        Err(e) => return Err(e),
    };
    Ok(TimeSeries {
        dt,
        times,
        l2,
        diverged_at,
        field: state.swap_remove(0),
    })
}

/// Integrates the advection–diffusion benchmark from its exact initial
/// condition, recording the relative L2 error.
pub fn run_advection_diffusion(
    nodes: &NodeSet,
    ops: &PdeOperators,
    filter: Option<&FilterCalibration>,
    case: AdCase,
    modes: usize,
    a: [f64; 2],
    settings: &RunSettings,
) -> Result<TimeSeries> {
    let re = settings.re;
    if re <= 0.0 || modes == 0 {
        return Err(Error::InvalidInput("need Re > 0 and at least one mode".into()));
    }
    let exact_at = |t: f64| -> Vec<f64> {
        nodes
            .positions
            .iter()
            .map(|p| case.exact(p[0], p[1], t, modes, re, a))
            .collect()
    };
    let u_max = a[0].hypot(a[1]);
    let dt = timestep_with(settings.rule, nodes.spacing, u_max, re);
    run_loop(
        vec![exact_at(0.0)],
        dt,
        settings,
        |_, s| vec![advection_diffusion_rhs(&s[0], ops, a, re)],
        filter,
        |t, s| l2_norm(&s[0], &exact_at(t)),
    )
}

/// Integrates viscous Burgers from `u = sin(2πx)`, `v = 0`. The error is
/// the relative L2 norm of both components against the series solution.
pub fn run_burgers(
    nodes: &NodeSet,
    ops: &PdeOperators,
    filter: Option<&FilterCalibration>,
    settings: &RunSettings,
    n_terms: usize,
) -> Result<TimeSeries> {
    let re = settings.re;
    let series = BurgersSeries::new(re, n_terms)?;
    let u0: Vec<f64> = nodes
        .positions
        .iter()
        .map(|p| (2.0 * std::f64::consts::PI * p[0]).sin())
        .collect();
    let v0 = vec![0.0; nodes.len()];
    let dt = timestep_with(settings.rule, nodes.spacing, 1.0, re);
    run_loop(
        vec![u0, v0],
        dt,
        settings,
        |_, s| {
            let (ru, rv) = burgers_rhs(&s[0], &s[1], ops, re);
            vec![ru, rv]
        },
        filter,
        |t, s| {
            let ue = nodes
                .positions
                .iter()
                .map(|p| series.eval(p[0], t))
                .collect::<Result<Vec<_>>>()?;
            let num: f64 = s[0].iter().zip(&ue).map(|(a, b)| (a - b).powi(2)).sum::<f64>()
                + s[1].iter().map(|v| v * v).sum::<f64>();
            let den: f64 = ue.iter().map(|v| v * v).sum();
            if den == 0.0 {
                return Err(Error::Evaluation("exact Burgers field vanished".into()));
            }
            Ok((num / den).sqrt())
        },
    )
}

/// Result of a manufactured Poisson problem.
#[derive(Clone, Debug, PartialEq)]
pub struct PoissonRun {
    pub solution: PoissonSolution,
    pub exact: Vec<f64>,
    pub l2: f64,
}

/// `∇²φ = -8π² sin(2πx) sin(2πy)` on a periodic unit square. The numerical
/// solution is shifted to the mean of the exact one before comparing.
pub fn run_poisson_periodic(nodes: &NodeSet, laplacian: &GlobalOperator, opts: &SolverOptions) -> Result<PoissonRun> {
    let (exact, f): (Vec<f64>, Vec<f64>) = nodes.positions.iter().map(|p| poisson_periodic(p[0], p[1])).unzip();
    let mut solution = poisson_solve(laplacian, &f, &Boundary::Periodic, opts)?;
    let mean = exact.iter().sum::<f64>() / exact.len() as f64;
    solution.values.iter_mut().for_each(|v| *v += mean);
    let l2 = l2_norm(&solution.values, &exact)?;
    Ok(PoissonRun { solution, exact, l2 })
}

/// The unit-disc problem with homogeneous Dirichlet data on boundary nodes.
pub fn run_poisson_disc(nodes: &NodeSet, laplacian: &GlobalOperator, opts: &SolverOptions) -> Result<PoissonRun> {
    let (exact, f): (Vec<f64>, Vec<f64>) = nodes
        .positions
        .iter()
        .map(|p| {
            let c = match nodes.domain {
                crate::nodeset::Domain::Disc { centre, .. } => centre,
                _ => [0.0, 0.0],
            };
            poisson_disc(p[0] - c[0], p[1] - c[1])
        })
        .unzip();
    let bc: Vec<(usize, f64)> = (0..nodes.len())
        .filter(|&i| nodes.is_boundary(i))
        .map(|i| (i, exact[i]))
        .collect();
    if bc.is_empty() {
        return Err(Error::InvalidInput("disc node set has no boundary nodes".into()));
    }
    let solution = poisson_solve(laplacian, &f, &Boundary::Dirichlet(bc), opts)?;
    let l2 = l2_norm(&solution.values, &exact)?;
    Ok(PoissonRun { solution, exact, l2 })
}
