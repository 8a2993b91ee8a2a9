use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Time step selection.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TimestepRule {
    /// `min(0.1 s/u_max, 0.05 s²/Re)`.
    InverseRe,
    /// `min(0.1 s/u_max, 0.05 s² Re)`, the usual viscous bound for a
    /// diffusivity of `1/Re`.
    #[default]
    ViscousScaled,
}

/// `δt = min(0.1 s/u_max, 0.05 s²/Re)`. A zero `u_max` drops the convective
/// bound; an infinite `re` drops the viscous one.
pub fn timestep(s: f64, u_max: f64, re: f64) -> f64 {
    timestep_with(TimestepRule::InverseRe, s, u_max, re)
}

pub fn timestep_with(rule: TimestepRule, s: f64, u_max: f64, re: f64) -> f64 {
    let convective = if u_max > 0.0 { 0.1 * s / u_max } else { f64::INFINITY };
    let viscous = match rule {
        TimestepRule::InverseRe => 0.05 * s * s / re,
        TimestepRule::ViscousScaled => 0.05 * s * s * re,
    };
    convective.min(viscous)
}

/// One classical RK4 step of `dy/dt = f(t, y)` on a list of fields.
pub fn rk4_step<F>(state: &mut [Vec<f64>], t: f64, dt: f64, mut f: F)
where
    F: FnMut(f64, &[Vec<f64>]) -> Vec<Vec<f64>>,
{
    let stage = |base: &[Vec<f64>], k: &[Vec<f64>], a: f64| -> Vec<Vec<f64>> {
        base.iter()
            .zip(k)
            .map(|(u, ku)| u.iter().zip(ku).map(|(x, d)| x + a * d).collect())
            .collect()
    };
    let k1 = f(t, state);
    let k2 = f(t + 0.5 * dt, &stage(state, &k1, 0.5 * dt));
    let k3 = f(t + 0.5 * dt, &stage(state, &k2, 0.5 * dt));
    let k4 = f(t + dt, &stage(state, &k3, dt));
    for (c, u) in state.iter_mut().enumerate() {
        for (i, x) in u.iter_mut().enumerate() {
            *x += dt / 6.0 * (k1[c][i] + 2.0 * k2[c][i] + 2.0 * k3[c][i] + k4[c][i]);
        }
    }
}

/// Advances `state` from `t0` to `t0 + steps·dt`, calling `after_step` with
/// the new time after every step (filtering, recording). Fails on the first
/// non-finite value.
pub fn rk4_advance<F, G>(
    state: &mut [Vec<f64>],
    t0: f64,
    dt: f64,
    steps: usize,
    mut f: F,
    mut after_step: G,
) -> Result<f64>
where
    F: FnMut(f64, &[Vec<f64>]) -> Vec<Vec<f64>>,
    G: FnMut(f64, &mut [Vec<f64>]),
{
    let mut t = t0;
    for n in 1..=steps {
        rk4_step(state, t, dt, &mut f);
        t = t0 + n as f64 * dt;
        if state.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::Divergence { time: t });
        }
        after_step(t, state);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_re_rule_examples() {
        assert!((timestep(0.1, 1.0, 50.0) - 1e-5).abs() < 1e-18);
        assert_eq!(timestep(0.1, 2.0, f64::INFINITY), 0.0);
        let dt = timestep_with(TimestepRule::ViscousScaled, 0.1, 2.0, f64::INFINITY);
        assert!((dt - 0.005).abs() < 1e-15);
        let dt = timestep(1.0 / 80.0, 1.0, 200.0);
        assert!((dt - 0.05 / 6400.0 / 200.0).abs() < 1e-20);
    }

    #[test]
    fn linear_decay_one_step() {
        let mut y = vec![vec![1.0]];
        rk4_step(&mut y, 0.0, 0.1, |_, u| vec![vec![-u[0][0]]]);
        assert!((y[0][0] - 0.9048375).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs_is_identity() {
        let mut y = vec![vec![1.0, -2.0, 3.5]];
        rk4_advance(&mut y, 0.0, 0.3, 7, |_, u| vec![vec![0.0; u[0].len()]], |_, _| {}).unwrap();
        assert_eq!(y[0], vec![1.0, -2.0, 3.5]);
    }

    #[test]
    fn blow_up_reports_time() {
        let mut y = vec![vec![1.0]];
        let err = rk4_advance(
            &mut y,
            0.0,
            1.0,
            1000,
            |_, u| vec![vec![u[0][0] * u[0][0] * 1e30]],
            |_, _| {},
        );
        assert!(matches!(err, Err(Error::Divergence { .. })));
    }
}
