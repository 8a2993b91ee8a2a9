//! Resolving power of weight sets: effective wavenumbers, ray curves, the
//! error functional of a two-kernel combination and its closed-form
//! minimiser, and calibration of the hyperviscosity filter.

mod filter;
mod functional;
mod io;
mod keff;

pub use filter::{
    calibrate_filter, calibrate_filter_set, calibrate_filter_set_bounded, calibrate_filter_set_single,
    calibrate_filter_single, FilterCalibration, FilterTargets, NodeFilter,
};
pub use functional::{
    combine, e_functional, e_quadratic, mk_combination, optimize_c, optimize_quadratic, KmRule, MkCombination, Optimum,
    Quadratic, Quadrature,
};
pub use io::{write_combination, write_curves};
pub use keff::{improvement_metric, keff_gradient, qeff2_laplacian, ray_curve, RayCurve, RaySample};

use crate::weights::Method;

/// Default `k_M` for a method: `0.2 k_Ny` for SPH, `0.3 k_Ny` otherwise.
pub fn default_km(method: Method) -> KmRule {
    match method {
        Method::Sph => KmRule::Nyquist(0.2),
        _ => KmRule::Nyquist(0.3),
    }
}

/// Largest wavenumber magnitude of the convergence test function.
pub fn test_function_km() -> KmRule {
    KmRule::Absolute(std::f64::consts::PI * 904f64.sqrt())
}
