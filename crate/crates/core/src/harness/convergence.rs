use std::io::Write;

use super::ExperimentPlan;
use crate::nodeset::{generate_nodes, Domain, NodeSet};
use crate::respower::{test_function_km, KmRule, Quadrature};
use crate::solver::oracles::test_function;
use crate::solver::{fit_slope, ratio_r, source_weights, OperatorSource};
use crate::weights::{scheme_stencils, OperatorKind, Scheme};
use crate::{Error, Result};

/// Derivative of the test function being measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantity {
    Gradient,
    Laplacian,
}

impl Quantity {
    pub fn name(self) -> &'static str {
        match self {
            Quantity::Gradient => "gradient",
            Quantity::Laplacian => "laplacian",
        }
    }
}

/// Errors of one (scheme, spacing, seed, quantity) cell.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepCell {
    pub scheme: Scheme,
    pub spacing: f64,
    pub seed: u64,
    pub nodes: usize,
    pub quantity: Quantity,
    pub l2_sk1: f64,
    pub l2_sk2: f64,
    pub l2_mk: f64,
    /// Set when the cell could not be computed; the norms are NaN then.
    pub failure: Option<String>,
}

impl SweepCell {
    /// MK error relative to the primary single-kernel error.
    pub fn r(&self) -> Option<f64> {
        ratio_r(self.l2_mk, self.l2_sk1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub scheme: Scheme,
    pub quantity: Quantity,
    pub source: OperatorSource,
    pub slope: f64,
    pub residual: f64,
    pub points: usize,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SweepResult {
    pub cells: Vec<SweepCell>,
    pub slopes: Vec<SlopeFit>,
}

impl SweepResult {
    pub fn cells_for(&self, scheme: Scheme, quantity: Quantity) -> impl Iterator<Item = &SweepCell> {
        self.cells
            .iter()
            .filter(move |c| c.scheme == scheme && c.quantity == quantity)
    }

    pub fn slope(&self, scheme: Scheme, quantity: Quantity, source: OperatorSource) -> Option<&SlopeFit> {
        self.slopes
            .iter()
            .find(|f| f.scheme == scheme && f.quantity == quantity && f.source == source)
    }

    /// Cells as CSV.
    pub fn write_cells<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "scheme,quantity,s,seed,n,l2_sk1,l2_sk2,l2_mk,R,failure")?;
        for c in &self.cells {
            writeln!(
                out,
                "{},{},{},{},{},{:.6e},{:.6e},{:.6e},{},{}",
                c.scheme.label(),
                c.quantity.name(),
                c.spacing,
                c.seed,
                c.nodes,
                c.l2_sk1,
                c.l2_sk2,
                c.l2_mk,
                c.r().map_or_else(String::new, |r| format!("{r:.6}")),
                c.failure.as_deref().unwrap_or("")
            )?;
        }
        Ok(())
    }

    pub fn write_slopes<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "scheme,quantity,source,slope,residual,points")?;
        for f in &self.slopes {
            writeln!(
                out,
                "{},{},{},{:.4},{:.4},{}",
                f.scheme.label(),
                f.quantity.name(),
                f.source.name(),
                f.slope,
                f.residual,
                f.points
            )?;
        }
        Ok(())
    }
}

fn relative(num: f64, den: f64) -> Result<f64> {
    if den == 0.0 {
        return Err(Error::Evaluation("analytic field is identically zero".into()));
    }
    Ok((num / den).sqrt())
}

/// Relative errors of the gradient (both components pooled) and the
/// Laplacian of the test function for the three operator sources.
fn cell_errors(nodes: &NodeSet, scheme: Scheme, k_m: KmRule, quad: Quadrature) -> Result<[[f64; 3]; 2]> {
    let st = scheme_stencils(nodes, scheme)?;
    let exact: Vec<_> = nodes.positions.iter().map(|p| test_function(p[0], p[1])).collect();
    let phi: Vec<f64> = exact.iter().map(|e| e.value).collect();
    let ops = [OperatorKind::Ddx, OperatorKind::Ddy, OperatorKind::Laplacian];
    let mut out = [[0.0; 3]; 2];
    let sources = [
        OperatorSource::SkPrimary,
        OperatorSource::SkSecondary,
        OperatorSource::Mk,
    ];
    for (k, &src) in sources.iter().enumerate() {
        let ws = source_weights(nodes, &st, src, &ops, k_m, quad)?;
        let dx = ws[0].apply(&phi);
        let dy = ws[1].apply(&phi);
        let lap = ws[2].apply(&phi);
        let (mut gn, mut gd, mut ln, mut ld) = (0.0, 0.0, 0.0, 0.0);
        for i in nodes.interior() {
            let e = &exact[i];
            gn += (dx[i] - e.dx).powi(2) + (dy[i] - e.dy).powi(2);
            gd += e.dx * e.dx + e.dy * e.dy;
            ln += (lap[i] - e.laplacian).powi(2);
            ld += e.laplacian * e.laplacian;
        }
        out[0][k] = relative(gn, gd)?;
        out[1][k] = relative(ln, ld)?;
    }
    Ok(out)
}

/// Convergence sweep of every scheme over the plan's spacings and seeds on
/// the periodic unit square. Failed cells are kept with their error message.
pub fn run_convergence(plan: &ExperimentPlan) -> Result<SweepResult> {
    plan.validate()?;
    let k_m = plan.k_m.unwrap_or_else(test_function_km);
    let mut result = SweepResult::default();
    for &scheme in &plan.schemes {
        for &s in &plan.spacings {
            for &seed in &plan.seeds {
                let outcome = generate_nodes(Domain::unit_square(), s, seed)
                    .and_then(|nodes| Ok((nodes.len(), cell_errors(&nodes, scheme, k_m, plan.quadrature)?)));
                for (q, quantity) in [Quantity::Gradient, Quantity::Laplacian].into_iter().enumerate() {
                    let mut cell = SweepCell {
                        scheme,
                        spacing: s,
                        seed,
                        nodes: 0,
                        quantity,
                        l2_sk1: f64::NAN,
                        l2_sk2: f64::NAN,
                        l2_mk: f64::NAN,
                        failure: None,
                    };
                    match &outcome {
                        Ok((n, errs)) => {
                            cell.nodes = *n;
                            [cell.l2_sk1, cell.l2_sk2, cell.l2_mk] = errs[q];
                        }
                        Err(e) => cell.failure = Some(e.to_string()),
                    }
                    result.cells.push(cell);
                }
            }
        }
        for quantity in [Quantity::Gradient, Quantity::Laplacian] {
            for source in [
                OperatorSource::SkPrimary,
                OperatorSource::SkSecondary,
                OperatorSource::Mk,
            ] {
                // Geometric mean over seeds at each spacing.
                let mut s_list = Vec::new();
                let mut e_list = Vec::new();
                for &s in &plan.spacings {
                    let logs: Vec<f64> = result
                        .cells_for(scheme, quantity)
                        .filter(|c| c.spacing == s && c.failure.is_none())
                        .map(|c| match source {
                            OperatorSource::SkPrimary => c.l2_sk1,
                            OperatorSource::SkSecondary => c.l2_sk2,
                            OperatorSource::Mk => c.l2_mk,
                        })
                        .filter(|e| *e > 0.0)
                        .map(f64::ln)
                        .collect();
                    if !logs.is_empty() {
                        s_list.push(s);
                        e_list.push((logs.iter().sum::<f64>() / logs.len() as f64).exp());
                    }
                }
                if s_list.len() >= 3 {
                    if let Some((slope, residual)) = fit_slope(&s_list, &e_list) {
                        result.slopes.push(SlopeFit {
                            scheme,
                            quantity,
                            source,
                            slope,
                            residual,
                            points: s_list.len(),
                        });
                    }
                }
            }
        }
    }
    Ok(result)
}
