//! Declarative experiment plans and the runners that turn them into
//! plot-ready data files.

mod convergence;
mod manifest;
mod pde_suite;
mod plan;
mod respower_report;
mod stability;

pub use convergence::{run_convergence, Quantity, SlopeFit, SweepCell, SweepResult};
pub use manifest::{execute_plan, Manifest};
pub use pde_suite::{run_pde, run_pde_suite, PdeOutcome, PdeRecord, PdeReport};
pub use plan::{ExperimentKind, ExperimentPlan, PdeConfig, PdeSystem};
pub use respower_report::{run_respower_report, CurveRecord, ImprovementRecord, RespowerReport, RAY_SLOPES};
pub use stability::{run_stability_report, write_spectrum, SpectrumRecord, StabilityReport, REFERENCE_SPACING};
