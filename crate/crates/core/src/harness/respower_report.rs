use std::io::Write;

use super::ExperimentPlan;
use crate::nodeset::{generate_nodes, Domain};
use crate::respower::{default_km, improvement_metric, ray_curve, RayCurve};
use crate::solver::{source_weights, OperatorSource};
use crate::weights::{scheme_stencils, OperatorKind, Scheme};
use crate::Result;

/// Ray slopes `k_y / k_x` reported for every operator.
pub const RAY_SLOPES: [f64; 3] = [0.0, 1.0, 2.0];

#[derive(Clone, Debug, PartialEq)]
pub struct CurveRecord {
    pub scheme: Scheme,
    pub source: OperatorSource,
    pub curve: RayCurve,
}

/// Percentage improvement of one MK ray over its SK counterpart.
#[derive(Clone, Debug, PartialEq)]
pub struct ImprovementRecord {
    pub scheme: Scheme,
    pub operator: OperatorKind,
    pub slope: f64,
    pub k_hat: Vec<f64>,
    pub percent: Vec<Option<f64>>,
}

impl ImprovementRecord {
    /// Largest improvement over samples with `k̂ ≤ k_max`.
    pub fn peak_below(&self, k_max: f64) -> Option<f64> {
        self.k_hat
            .iter()
            .zip(&self.percent)
            .filter(|(k, _)| **k <= k_max)
            .filter_map(|(_, p)| *p)
            .reduce(f64::max)
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RespowerReport {
    pub curves: Vec<CurveRecord>,
    pub improvements: Vec<ImprovementRecord>,
}

impl RespowerReport {
    pub fn improvement(&self, scheme: Scheme, operator: OperatorKind, slope: f64) -> Option<&ImprovementRecord> {
        self.improvements
            .iter()
            .find(|r| r.scheme == scheme && r.operator == operator && r.slope == slope)
    }

    pub fn write_improvements<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "scheme,operator,ray_slope,k_hat,epsilon_percent")?;
        for r in &self.improvements {
            for (k, p) in r.k_hat.iter().zip(&r.percent) {
                let p = p.map_or_else(String::new, |v| format!("{v:.4}"));
                writeln!(
                    out,
                    "{},{},{},{:.6},{}",
                    r.scheme.label(),
                    r.operator.name(),
                    r.slope,
                    k,
                    p
                )?;
            }
        }
        Ok(())
    }
}

/// SK and MK ray curves of the x-gradient and the Laplacian along
/// `k_y = l k_x` for `l` in [`RAY_SLOPES`], plus the improvement tables. Uses
/// the first spacing and seed of the plan.
pub fn run_respower_report(plan: &ExperimentPlan) -> Result<RespowerReport> {
    plan.validate()?;
    let s = plan.spacings[0];
    let nodes = generate_nodes(Domain::unit_square(), s, plan.seeds[0])?;
    let ops = [OperatorKind::Ddx, OperatorKind::Laplacian];
    let mut report = RespowerReport::default();
    for &scheme in &plan.schemes {
        let k_m = plan.k_m.unwrap_or_else(|| default_km(scheme.method()));
        let st = scheme_stencils(&nodes, scheme)?;
        let sk = source_weights(&nodes, &st, OperatorSource::SkPrimary, &ops, k_m, plan.quadrature)?;
        let mk = source_weights(&nodes, &st, OperatorSource::Mk, &ops, k_m, plan.quadrature)?;
        for (a, b) in sk.iter().zip(&mk) {
            for slope in RAY_SLOPES {
                let ca = ray_curve(&nodes, a, slope, false, plan.samples)?;
                let cb = ray_curve(&nodes, b, slope, false, plan.samples)?;
                report.improvements.push(ImprovementRecord {
                    scheme,
                    operator: a.operator,
                    slope,
                    k_hat: ca.samples.iter().map(|x| x.k_hat).collect(),
                    percent: improvement_metric(&ca, &cb)?,
                });
                report.curves.push(CurveRecord {
                    scheme,
                    source: OperatorSource::SkPrimary,
                    curve: ca,
                });
                report.curves.push(CurveRecord {
                    scheme,
                    source: OperatorSource::Mk,
                    curve: cb,
                });
            }
        }
    }
    Ok(report)
}
