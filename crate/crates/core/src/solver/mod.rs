//! Global operators, spectra, linear solves and the benchmark PDE runs.

mod norms;
mod operator;
pub mod oracles;
mod pde;
mod poisson;
mod spectrum;
mod time;

pub use norms::{fit_slope, l2_norm, ratio_r};
pub use operator::{assemble, GlobalOperator};
pub use pde::{
    advection_diffusion_rhs, build_filter, build_operators, burgers_rhs, run_advection_diffusion, run_burgers,
    run_poisson_disc, run_poisson_periodic, source_weights, AdCase, OperatorSource, PdeOperators, PoissonRun,
    RunSettings, TimeSeries,
};
pub use poisson::{bicgstab, poisson_solve, Boundary, PoissonSolution, SolverOptions};
pub use spectrum::{spectrum, summarize, SpectrumSummary, SPECTRUM_BUDGET};
pub use time::{rk4_advance, rk4_step, timestep, timestep_with, TimestepRule};
