use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use super::{
    run_convergence, run_pde_suite, run_respower_report, run_stability_report, write_spectrum, ExperimentKind,
    ExperimentPlan, PdeRecord,
};
use crate::respower::write_curves;
use crate::solver::OperatorSource;
use crate::Result;

/// Files written by one plan, tagged with the plan hash.
#[derive(Clone, Debug, PartialEq)]
pub struct Manifest {
    pub config_hash: String,
    pub artifacts: Vec<PathBuf>,
}

impl Manifest {
    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "artifact,config_hash")?;
        for a in &self.artifacts {
            writeln!(out, "{},{}", a.display(), self.config_hash)?;
        }
        Ok(())
    }
}

fn src_ok(rec: &PdeRecord, src: OperatorSource) -> bool {
    match src {
        OperatorSource::Mk => rec.mk.field().is_some(),
        _ => rec.sk.field().is_some(),
    }
}

fn slug(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '.' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

struct Sink<'a> {
    dir: &'a Path,
    written: Vec<PathBuf>,
}

impl Sink<'_> {
    fn emit(&mut self, name: &str, f: impl FnOnce(&mut BufWriter<File>) -> Result<()>) -> Result<()> {
        let name = slug(name);
        let mut w = BufWriter::new(File::create(self.dir.join(&name))?);
        f(&mut w)?;
        w.flush()?;
        self.written.push(PathBuf::from(name));
        Ok(())
    }
}

/// Runs a plan and writes its data files plus `manifest.csv` into `dir`
/// (created if needed). Artifact paths in the manifest are relative to `dir`.
pub fn execute_plan(plan: &ExperimentPlan, dir: &Path) -> Result<Manifest> {
    plan.validate()?;
    fs::create_dir_all(dir)?;
    let mut sink = Sink {
        dir,
        written: Vec::new(),
    };
    match plan.kind {
        ExperimentKind::Convergence => {
            let r = run_convergence(plan)?;
            sink.emit("convergence.csv", |w| r.write_cells(w))?;
            sink.emit("convergence_slopes.csv", |w| r.write_slopes(w))?;
        }
        ExperimentKind::Respower => {
            let r = run_respower_report(plan)?;
            for c in &r.curves {
                let name = format!(
                    "curve_{}_{}_l{}_{}.csv",
                    c.scheme.label(),
                    c.curve.operator.name(),
                    c.curve.slope,
                    c.source.name()
                );
                sink.emit(&name, |w| write_curves(std::slice::from_ref(&c.curve), w))?;
            }
            sink.emit("improvement.csv", |w| r.write_improvements(w))?;
        }
        ExperimentKind::Stability => {
            let r = run_stability_report(plan)?;
            for rec in &r.records {
                let name = format!(
                    "spectrum_{}_{}_{}_seed{}.csv",
                    rec.scheme.label(),
                    rec.operator.name(),
                    rec.source.name(),
                    rec.seed
                );
                sink.emit(&name, |w| write_spectrum(&rec.eigenvalues, w))?;
            }
            sink.emit("stability_summary.csv", |w| r.write_summary(w))?;
        }
        ExperimentKind::Pde => {
            let r = run_pde_suite(plan)?;
            for rec in &r.records {
                sink.emit(&format!("pde_{}.csv", rec.label()), |w| rec.write_series(w))?;
                for src in [OperatorSource::SkPrimary, OperatorSource::Mk] {
                    if src_ok(rec, src) {
                        let name = format!("field_{}_{}.csv", rec.label(), src.name());
                        sink.emit(&name, |w| rec.write_field(src, w))?;
                    }
                }
            }
            sink.emit("pde_summary.csv", |w| r.write_summary(w))?;
        }
    }
    let manifest = Manifest {
        config_hash: plan.hash(),
        artifacts: sink.written,
    };
    let mut w = BufWriter::new(File::create(dir.join("manifest.csv"))?);
    manifest.write(&mut w)?;
    w.flush()?;
    Ok(manifest)
}
