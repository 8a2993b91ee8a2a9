use std::io::Write;

use super::{MkCombination, RayCurve};
use crate::Result;

/// Ray curves as CSV: `k_hat,re_keff_mean,im_keff_mean,ray_slope`, with the
/// slope signed by the sign of `k_y`.
pub fn write_curves<W: Write>(curves: &[RayCurve], mut out: W) -> Result<()> {
    writeln!(out, "k_hat,re_keff_mean,im_keff_mean,ray_slope")?;
    for c in curves {
        let slope = if c.negative_ky { -c.slope } else { c.slope };
        for s in &c.samples {
            writeln!(out, "{:.6},{:.12e},{:.12e},{}", s.k_hat, s.re, s.im, slope)?;
        }
    }
    Ok(())
}

/// Per-node coefficients as CSV: `node,c_hat,E_opt,E_sk1,E_sk2`, where
/// `E_sk1` is the primary kernel alone and `E_sk2` the secondary.
pub fn write_combination<W: Write>(comb: &MkCombination, mut out: W) -> Result<()> {
    writeln!(out, "node,c_hat,E_opt,E_sk1,E_sk2")?;
    for (i, o) in comb.optima.iter().enumerate() {
        writeln!(
            out,
            "{i},{:.12e},{:.12e},{:.12e},{:.12e}",
            o.c_hat, o.e_opt, o.e_hat, o.e_bar
        )?;
    }
    Ok(())
}
