use std::io::Write;

use super::{ExperimentPlan, PdeConfig, PdeSystem};
use crate::nodeset::{generate_nodes, NodeSet, Point};
use crate::respower::{default_km, KmRule};
use crate::solver::{
    assemble, build_filter, build_operators, ratio_r, run_advection_diffusion, run_burgers, run_poisson_disc,
    run_poisson_periodic, source_weights, OperatorSource, RunSettings, SolverOptions, TimeSeries,
};
use crate::weights::{scheme_stencils, OperatorKind, Scheme};
use crate::{Error, Result};

/// Outcome of one operator source on one benchmark.
#[derive(Clone, Debug, PartialEq)]
pub enum PdeOutcome {
    Steady {
        l2: f64,
        iterations: usize,
        residual: f64,
        field: Vec<f64>,
    },
    Transient(TimeSeries),
    Failed(String),
}

impl PdeOutcome {
    /// Final error, if the run produced one.
    pub fn final_l2(&self) -> Option<f64> {
        match self {
            PdeOutcome::Steady { l2, .. } => Some(*l2),
            PdeOutcome::Transient(ts) if ts.diverged_at.is_none() => ts.l2.last().copied(),
            _ => None,
        }
    }

    /// Final numerical field.
    pub fn field(&self) -> Option<&[f64]> {
        match self {
            PdeOutcome::Steady { field, .. } => Some(field),
            PdeOutcome::Transient(ts) => Some(&ts.field),
            PdeOutcome::Failed(_) => None,
        }
    }

    pub fn series(&self) -> Option<&TimeSeries> {
        match self {
            PdeOutcome::Transient(ts) => Some(ts),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PdeRecord {
    pub config: PdeConfig,
    pub scheme: Scheme,
    pub spacing: f64,
    pub seed: u64,
    pub nodes: usize,
    pub positions: Vec<Point>,
    pub sk: PdeOutcome,
    pub mk: PdeOutcome,
}

impl PdeRecord {
    pub fn label(&self) -> String {
        let mut l = format!("{}-{}", self.config.system.name(), self.scheme.label());
        if self.config.system == PdeSystem::AdvectionDiffusion {
            l += match self.config.case {
                crate::solver::AdCase::Axis => "-case1",
                crate::solver::AdCase::Diagonal => "-case2",
            };
        }
        if !self.config.system.is_steady() {
            l += &format!("-re{}", self.config.re);
            if self.config.filter {
                l += "-filtered";
            }
        }
        l + &format!("-s{:.6}-seed{}", self.spacing, self.seed)
    }

    /// Error ratio at the first recorded time where the SK error reaches
    /// `level`, with that time.
    pub fn ratio_at_sk_level(&self, level: f64) -> Option<(f64, f64)> {
        let (sk, mk) = (self.sk.series()?, self.mk.series()?);
        let i = sk.first_crossing(level)?;
        Some((sk.times[i], ratio_r(*mk.l2.get(i)?, sk.l2[i])?))
    }

    /// Error ratio at the recorded time closest to `t`.
    pub fn ratio_at_time(&self, t: f64) -> Option<f64> {
        let (sk, mk) = (self.sk.series()?, self.mk.series()?);
        ratio_r(mk.at_time(t)?, sk.at_time(t)?)
    }

    /// Final field of one source as `x,y,value`.
    pub fn write_field<W: Write>(&self, source: OperatorSource, mut out: W) -> Result<()> {
        let o = match source {
            OperatorSource::Mk => &self.mk,
            _ => &self.sk,
        };
        let field = o
            .field()
            .ok_or_else(|| Error::InvalidInput(format!("{} run of {} has no field", source.name(), self.label())))?;
        writeln!(out, "x,y,value")?;
        for (p, v) in self.positions.iter().zip(field) {
            writeln!(out, "{:.17e},{:.17e},{:.17e}", p[0], p[1], v)?;
        }
        Ok(())
    }

    /// `time,l2_sk,l2_mk,R` for transient runs, a single row otherwise.
    pub fn write_series<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "time,l2_sk,l2_mk,R")?;
        match (&self.sk, &self.mk) {
            (PdeOutcome::Transient(a), PdeOutcome::Transient(b)) => {
                for (k, (t, e)) in a.times.iter().zip(&a.l2).enumerate() {
                    let m = b.l2.get(k).copied().unwrap_or(f64::NAN);
                    let r = ratio_r(m, *e).map_or_else(String::new, |r| format!("{r:.6}"));
                    writeln!(out, "{t:.6},{e:.6e},{m:.6e},{r}")?;
                }
            }
            (a, b) => {
                let (e, m) = (a.final_l2().unwrap_or(f64::NAN), b.final_l2().unwrap_or(f64::NAN));
                let r = ratio_r(m, e).map_or_else(String::new, |r| format!("{r:.6}"));
                writeln!(out, "0,{e:.6e},{m:.6e},{r}")?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct PdeReport {
    pub records: Vec<PdeRecord>,
}

impl PdeReport {
    pub fn write_summary<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "run,n,final_l2_sk,final_l2_mk,R,diverged_sk,diverged_mk")?;
        for r in &self.records {
            let div = |o: &PdeOutcome| match o {
                PdeOutcome::Transient(ts) => ts.diverged_at.map_or_else(String::new, |t| format!("{t:.6}")),
                PdeOutcome::Failed(e) => e.replace(',', ";"),
                _ => String::new(),
            };
            let (e, m) = (r.sk.final_l2(), r.mk.final_l2());
            let ratio = match (e, m) {
                (Some(e), Some(m)) => ratio_r(m, e).map_or_else(String::new, |v| format!("{v:.6}")),
                _ => String::new(),
            };
            let fmt = |v: Option<f64>| v.map_or_else(String::new, |v| format!("{v:.6e}"));
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.label(),
                r.nodes,
                fmt(e),
                fmt(m),
                ratio,
                div(&r.sk),
                div(&r.mk)
            )?;
        }
        Ok(())
    }
}

/// Runs one benchmark with one operator source on a prebuilt node set.
pub fn run_pde(
    nodes: &NodeSet,
    scheme: Scheme,
    config: &PdeConfig,
    source: OperatorSource,
    k_m: KmRule,
    quad: crate::respower::Quadrature,
    solver: &SolverOptions,
) -> Result<PdeOutcome> {
    config.validate()?;
    if config.system.is_steady() {
        let st = scheme_stencils(nodes, scheme)?;
        let ws = source_weights(nodes, &st, source, &[OperatorKind::Laplacian], k_m, quad)?;
        let lap = assemble(nodes, &ws[0])?;
        let run = match config.system {
            PdeSystem::PoissonPeriodic => run_poisson_periodic(nodes, &lap, solver)?,
            _ => run_poisson_disc(nodes, &lap, solver)?,
        };
        return Ok(PdeOutcome::Steady {
            l2: run.l2,
            iterations: run.solution.iterations,
            residual: run.solution.residual,
            field: run.solution.values,
        });
    }
    let ops = build_operators(nodes, scheme, source, k_m, quad)?;
    let filter = if config.filter {
        Some(build_filter(nodes, source, config.filter_targets.unwrap_or_default())?)
    } else {
        None
    };
    let settings = RunSettings {
        re: config.re,
        end_time: config.end_time,
        rule: config.rule,
        record_every: config.record_every,
    };
    let ts = match config.system {
        PdeSystem::AdvectionDiffusion => run_advection_diffusion(
            nodes,
            &ops,
            filter.as_ref(),
            config.case,
            config.modes,
            config.advection,
            &settings,
        )?,
        PdeSystem::Burgers => run_burgers(nodes, &ops, filter.as_ref(), &settings, config.terms)?,
        _ => unreachable!(),
    };
    Ok(PdeOutcome::Transient(ts))
}

fn outcome(r: Result<PdeOutcome>) -> PdeOutcome {
    r.unwrap_or_else(|e| PdeOutcome::Failed(e.to_string()))
}

/// Every configured benchmark for every scheme, spacing and seed, with the
/// primary single-kernel and the multi-kernel operators.
pub fn run_pde_suite(plan: &ExperimentPlan) -> Result<PdeReport> {
    plan.validate()?;
    let solver = plan.solver.unwrap_or_default();
    let mut report = PdeReport::default();
    for config in &plan.pde {
        for &scheme in &plan.schemes {
            let k_m = plan.k_m.unwrap_or_else(|| default_km(scheme.method()));
            for &s in &plan.spacings {
                for &seed in &plan.seeds {
                    let nodes = match generate_nodes(config.domain(), s, seed) {
                        Ok(n) => n,
                        Err(e) => {
                            let f = PdeOutcome::Failed(e.to_string());
                            report.records.push(PdeRecord {
                                config: config.clone(),
                                scheme,
                                spacing: s,
                                seed,
                                nodes: 0,
                                positions: Vec::new(),
                                sk: f.clone(),
                                mk: f,
                            });
                            continue;
                        }
                    };
                    let run = |src| outcome(run_pde(&nodes, scheme, config, src, k_m, plan.quadrature, &solver));
                    report.records.push(PdeRecord {
                        config: config.clone(),
                        scheme,
                        spacing: s,
                        seed,
                        nodes: nodes.len(),
                        positions: nodes.positions.clone(),
                        sk: run(OperatorSource::SkPrimary),
                        mk: run(OperatorSource::Mk),
                    });
                }
            }
        }
    }
    if report.records.is_empty() {
        return Err(Error::Config("pde plan produced no runs".into()));
    }
    Ok(report)
}
