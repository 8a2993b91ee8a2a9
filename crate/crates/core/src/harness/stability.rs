use std::io::Write;

use num_complex::Complex64;

use super::ExperimentPlan;
use crate::nodeset::{generate_nodes, Domain};
use crate::respower::default_km;
use crate::solver::{assemble, source_weights, spectrum, summarize, OperatorSource, SPECTRUM_BUDGET};
use crate::weights::{scheme_stencils, OperatorKind, Scheme};
use crate::Result;

/// Spacing giving the 441-node reference set on the unit square.
pub const REFERENCE_SPACING: f64 = 1.0 / 21.0;

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumRecord {
    pub scheme: Scheme,
    pub spacing: f64,
    pub seed: u64,
    pub operator: OperatorKind,
    pub source: OperatorSource,
    pub max_real: f64,
    pub radius: f64,
    pub eigenvalues: Vec<Complex64>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct StabilityReport {
    pub records: Vec<SpectrumRecord>,
}

impl StabilityReport {
    pub fn find(&self, scheme: Scheme, operator: OperatorKind, source: OperatorSource) -> Option<&SpectrumRecord> {
        self.records
            .iter()
            .find(|r| r.scheme == scheme && r.operator == operator && r.source == source)
    }

    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "scheme,s,seed,operator,source,max_re,radius,max_re_over_radius")?;
        for r in &self.records {
            writeln!(
                out,
                "{},{},{},{},{},{:.6e},{:.6e},{:.3e}",
                r.scheme.label(),
                r.spacing,
                r.seed,
                r.operator.name(),
                r.source.name(),
                r.max_real,
                r.radius,
                r.max_real / r.radius
            )?;
        }
        Ok(())
    }
}

pub fn write_spectrum<W: Write>(eig: &[Complex64], mut out: W) -> Result<()> {
    writeln!(out, "re,im")?;
    for z in eig {
        writeln!(out, "{:.12e},{:.12e}", z.re, z.im)?;
    }
    Ok(())
}

/// Full spectra of the SK and MK gradient (x) and Laplacian operators of
/// every scheme, by default on the seeded 441-node set.
pub fn run_stability_report(plan: &ExperimentPlan) -> Result<StabilityReport> {
    plan.validate()?;
    let spacings = if plan.spacings.is_empty() {
        vec![REFERENCE_SPACING]
    } else {
        plan.spacings.clone()
    };
    let ops = [OperatorKind::Ddx, OperatorKind::Laplacian];
    let mut report = StabilityReport::default();
    for &scheme in &plan.schemes {
        let k_m = plan.k_m.unwrap_or_else(|| default_km(scheme.method()));
        for &s in &spacings {
            for &seed in &plan.seeds {
                let nodes = generate_nodes(Domain::unit_square(), s, seed)?;
                let st = scheme_stencils(&nodes, scheme)?;
                for source in [OperatorSource::SkPrimary, OperatorSource::Mk] {
                    let ws = source_weights(&nodes, &st, source, &ops, k_m, plan.quadrature)?;
                    for w in &ws {
                        let eig = spectrum(&assemble(&nodes, w)?, SPECTRUM_BUDGET)?;
                        let sum = summarize(&eig);
                        report.records.push(SpectrumRecord {
                            scheme,
                            spacing: s,
                            seed,
                            operator: w.operator,
                            source,
                            max_real: sum.max_real,
                            radius: sum.radius,
                            eigenvalues: eig,
                        });
                    }
                }
            }
        }
    }
    Ok(report)
}
