//! Truncated logarithms of products of Clifford exponentials.
//!
//! `z(t) = log(e^{g₁t} e^{g₂(t)})` is computed exactly in the truncated
//! series algebra over the full Clifford algebra, then checked to lie in
//! `CL²`.


use super::algebra::Clifford;
use crate::coeffring::Scalar;
use crate::error::{Error, Result};
use crate::tensorcalc::DiffForm;

/// Largest truncation order supported by [`bch_log`].
pub const MAX_BCH_ORDER: usize = 6;

/// Coefficients `x_0, …, x_T` of `Σ x_k t^k`.
pub type CliffordSeries<C> = Vec<Clifford<C>>;

fn series_mul<C: Scalar>(a: &[Clifford<C>], b: &[Clifford<C>], order: usize, n: usize) -> Result<CliffordSeries<C>> {
    let mut out = vec![Clifford::zero(n); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.mul(y)?;
            }
        }
    }
    Ok(out)
}

/// `exp(x(t))` for a series without constant term.
pub fn series_exp<C: Scalar>(x: &[Clifford<C>], order: usize, n: usize) -> Result<CliffordSeries<C>> {
    if x.first().is_some_and(|c| !c.is_zero()) {
        return Err(Error::Domain("series exponential needs zero constant term".into()));
    }
    let mut acc = vec![Clifford::zero(n); order + 1];
    acc[0] = Clifford::one(n);
    let mut term = acc.clone();
    for k in 1..=order {
        term = series_mul(&term, x, order, n)?
            .into_iter()
            .map(|c| c.scale(&C::from_frac(1, k as i64)))
            .collect();
        for (a, t) in acc.iter_mut().zip(&term) {
            *a = a.clone() + t.clone();
        }
    }
    Ok(acc)
}

fn series_log<C: Scalar>(g: &[Clifford<C>], order: usize, n: usize) -> Result<CliffordSeries<C>> {
    if g[0] != Clifford::one(n) {
        return Err(Error::Domain("series logarithm needs constant term 1".into()));
    }
    let mut y = g.to_vec();
    y[0] = Clifford::zero(n);
    let mut acc = vec![Clifford::zero(n); order + 1];
    let mut power = y.clone();
    for k in 1..=order {
        let c = C::from_frac(if k % 2 == 1 { 1 } else { -1 }, k as i64);
        for (a, p) in acc.iter_mut().zip(&power) {
            *a = a.clone() + p.scale(&c);
        }
        power = series_mul(&power, &y, order, n)?;
    }
    Ok(acc)
}

/// `z(t)` with `e^{z(t)} ≡ e^{g₁ t} e^{g₂(t)} mod t^{T+1}`.
pub fn bch_log<C: Scalar>(g1: &Clifford<C>, g2: &[Clifford<C>], order: usize) -> Result<CliffordSeries<C>> {
    if order > MAX_BCH_ORDER {
        return Err(Error::Domain(format!("BCH order {order} exceeds {MAX_BCH_ORDER}")));
    }
    let n = g1.n();
    let mut x = vec![Clifford::zero(n); order + 1];
    if order >= 1 {
        x[1] = g1.clone();
    }
    let mut y = vec![Clifford::zero(n); order + 1];
    for (k, c) in g2.iter().enumerate().take(order + 1) {
        y[k] = c.clone();
    }
    let prod = series_mul(&series_exp(&x, order, n)?, &series_exp(&y, order, n)?, order, n)?;
    let z = series_log(&prod, order, n)?;
    if let Some(bad) = z.iter().find(|c| c.filtration() > 2) {
        return Err(Error::Domain(format!("BCH term of filtration {} leaves CL²", bad.filtration())));
    }
    Ok(z)
}

/// Action of `exp(x(t))` on a form, as coefficients in `t`.
pub fn series_exp_act<C: Scalar>(x: &[Clifford<C>], phi: &DiffForm<C>, order: usize) -> Result<Vec<DiffForm<C>>> {
    let n = phi.n();
    series_exp(x, order, n)?.iter().map(|c| c.act(phi)).collect()
}
