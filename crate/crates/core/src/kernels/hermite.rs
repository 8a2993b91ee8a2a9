use super::{KernelFamily, KernelSpec};
use crate::nodeset::Point;
use crate::{Error, Result};

/// Largest consistency order supported by the Hermite basis.
pub const MAX_ORDER: usize = 8;

/// Exponents `(a, b)` of the monomials `x^a y^b` with `1 ≤ a + b ≤ m`,
/// ordered by total degree, then by descending x-degree. There are
/// `(m² + 3m) / 2` of them.
pub fn monomial_exponents(m: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity((m * m + 3 * m) / 2);
    for n in 1..=m {
        for a in (0..=n).rev() {
            out.push((a, n - a));
        }
    }
    out
}

/// Probabilists' Hermite polynomials `He_0(x) ..= He_n(x)` by the three-term
/// recurrence `He_{k+1} = x He_k - k He_{k-1}`.
pub fn hermite_recurrence(n: usize, x: f64) -> Vec<f64> {
    let mut he = Vec::with_capacity(n + 1);
    he.push(1.0);
    if n >= 1 {
        he.push(x);
    }
    for k in 1..n {
        he.push(x * he[k] - k as f64 * he[k - 1]);
    }
    he
}

fn check_order(m: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&m) {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "consistency order {m} outside 1..={MAX_ORDER}"
        )))
    }
}

/// `He_a(x/h) He_b(y/h)` for every exponent pair of [`monomial_exponents`].
pub fn hermite_polynomials(m: usize, offset: Point, h: f64) -> Result<Vec<f64>> {
    check_order(m)?;
    let hx = hermite_recurrence(m, offset[0] / h);
    let hy = hermite_recurrence(m, offset[1] / h);
    Ok(monomial_exponents(m).into_iter().map(|(a, b)| hx[a] * hy[b]).collect())
}

/// Anisotropic basis values: the radial weight `W(|offset|)` of `spec` times
/// the Hermite products, in [`monomial_exponents`] order.
pub fn hermite_basis(spec: &KernelSpec, m: usize, offset: Point) -> Result<Vec<f64>> {
    if !matches!(spec.family, KernelFamily::HermiteAbf(_)) {
        return Err(Error::InvalidInput(format!(
            "{:?} is not a Hermite ABF family",
            spec.family
        )));
    }
    spec.validate()?;
    let w = spec.value((offset[0] * offset[0] + offset[1] * offset[1]).sqrt());
    let mut basis = hermite_polynomials(m, offset, spec.h)?;
    for b in &mut basis {
        *b *= w;
    }
    Ok(basis)
}
