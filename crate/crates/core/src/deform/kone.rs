//! Elements `h + p` of `K¹` and membership tests for `K¹`, `K²`.

use num_traits::Zero;

use crate::coeffring::{Poly, Scalar};
use crate::error::Result;
use crate::tensorcalc::{lefschetz_contract, DiffForm};

/// `h + p` with `p` a (1,1)-form and `Λ_ω p + 2h = 0`. The first-order term of
/// a deformation is real; later terms may carry an imaginary part, which moves
/// `ω` inside `e^{p + iω}`.
#[derive(Clone, Debug, PartialEq)]
pub struct KOne<C: Scalar> {
    pub h: Poly<C>,
    pub p: DiffForm<C>,
}

impl<C: Scalar> KOne<C> {
    pub fn zero(n: usize) -> Self {
        KOne { h: Poly::zero(), p: DiffForm::zero(n) }
    }

    /// The element with `h = −½ Λ_ω p`.
    pub fn from_p(p: DiffForm<C>, omega: &DiffForm<C>) -> Result<Self> {
        let h = lefschetz_contract(&p, omega)?.scale(&C::from_frac(-1, 2));
        Ok(KOne { h, p })
    }

    /// `h + p` as an even form.
    pub fn form(&self) -> DiffForm<C> {
        DiffForm::scalar(self.p.n(), self.h.clone()) + self.p.clone()
    }

    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.p.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.p.is_real() && self.h.conj(self.p.n()) == self.h
    }
}

/// `p` of bidegree (1,1) and `Λ_ω p + 2h = 0`. Reality is checked separately
/// by [`KOne::is_real`].
pub fn k1_membership<C: Scalar>(h: &Poly<C>, p: &DiffForm<C>, omega: &DiffForm<C>) -> Result<bool> {
    if !p.is_zero() && p.bidegrees() != vec![(1, 1)] {
        return Ok(false);
    }
    let lam = lefschetz_contract(p, omega)?;
    Ok((lam + h.scale(&C::from_i64(2))).is_zero())
}

/// `φ = η ∧ e^{iω}` with `η ∈ Λ¹ ⊕ Λ^{2,1} ⊕ Λ^{1,2}`; returns `η` when it is.
pub fn k2_factor<C: Scalar>(phi: &DiffForm<C>, omega: &DiffForm<C>) -> Result<Option<DiffForm<C>>> {
    let inv = omega.scale(&-C::imag_unit()).wedge_exp()?;
    let eta = inv.try_wedge(phi)?;
    let ok = eta.bidegrees().iter().all(|b| matches!(b, (1, 0) | (0, 1) | (2, 1) | (1, 2)));
    Ok(ok.then_some(eta))
}

pub fn k2_membership<C: Scalar>(phi: &DiffForm<C>, omega: &DiffForm<C>) -> Result<bool> {
    Ok(k2_factor(phi, omega)?.is_some())
}
