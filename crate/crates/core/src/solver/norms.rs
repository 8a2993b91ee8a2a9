use crate::{Error, Result};

/// Relative L2 error `‖numeric − analytic‖ / ‖analytic‖`.
pub fn l2_norm(numeric: &[f64], analytic: &[f64]) -> Result<f64> {
    if numeric.len() != analytic.len() {
        return Err(Error::InvalidInput(format!(
            "field lengths differ: {} vs {}",
            numeric.len(),
            analytic.len()
        )));
    }
    let den: f64 = analytic.iter().map(|a| a * a).sum();
    if den == 0.0 {
        return Err(Error::Evaluation("analytic field is identically zero".into()));
    }
    let num: f64 = numeric.iter().zip(analytic).map(|(n, a)| (a - n).powi(2)).sum();
    Ok((num / den).sqrt())
}

/// `R = mk / sk`; undefined (None) when the single-kernel error is zero.
pub fn ratio_r(mk_err: f64, sk_err: f64) -> Option<f64> {
    (sk_err > 0.0).then(|| mk_err / sk_err)
}

/// Least-squares slope of `log(err)` against `log(s)` and the RMS residual
/// of the fit.
pub fn fit_slope(s: &[f64], err: &[f64]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = s
        .iter()
        .zip(err)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0 && b.is_finite())
        .map(|(a, b)| (a.ln(), b.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    let res = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Some((slope, res))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_examples() {
        assert_eq!(l2_norm(&[1.0, 2.0], &[1.0, 2.0]).unwrap(), 0.0);
        assert_eq!(l2_norm(&[0.0, 0.0], &[3.0, -4.0]).unwrap(), 1.0);
        let v = l2_norm(&[1.0, 1.0, 2.0], &[1.0, 2.0, 2.0]).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-16);
        assert!(l2_norm(&[1.0], &[0.0]).is_err());
        assert_eq!(ratio_r(1.0, 0.0), None);
    }

    #[test]
    fn slope_of_power_law() {
        let s = [0.1, 0.05, 0.025];
        let e: Vec<f64> = s.iter().map(|h: &f64| 3.0 * h.powi(4)).collect();
        let (k, r) = fit_slope(&s, &e).unwrap();
        assert!((k - 4.0).abs() < 1e-12 && r < 1e-12);
    }
}
