//! Polynomial ideals and membership.

use num_traits::Zero;

use super::poly::{mono_div, Poly};
use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Default cap on S-polynomial reductions during Buchberger completion.
pub const DEFAULT_REDUCTION_CAP: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdealKind {
    Principal,
    Monomial,
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolyIdeal<C: Scalar> {
    generators: Vec<Poly<C>>,
    kind: IdealKind,
    reduction_cap: usize,
}

impl<C: Scalar> PolyIdeal<C> {
    /// Builds an ideal and classifies it. Zero generators are dropped.
    pub fn new(generators: Vec<Poly<C>>) -> Self {
        let generators: Vec<_> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        let kind = if generators.len() <= 1 {
            IdealKind::Principal
        } else if generators.iter().all(|g| g.num_terms() == 1) {
            IdealKind::Monomial
        } else {
            IdealKind::General
        };
        PolyIdeal { generators, kind, reduction_cap: DEFAULT_REDUCTION_CAP }
    }

    pub fn principal(f: Poly<C>) -> Self {
        Self::new(vec![f])
    }

    pub fn with_reduction_cap(mut self, cap: usize) -> Self {
        self.reduction_cap = cap;
        self
    }

    pub fn generators(&self) -> &[Poly<C>] {
        &self.generators
    }

    pub fn kind(&self) -> IdealKind {
        self.kind
    }

    /// Whether `g` lies in the ideal.
    pub fn contains(&self, g: &Poly<C>) -> Result<bool> {
        if g.is_zero() {
            return Ok(true);
        }
        match self.kind {
            IdealKind::Principal => match self.generators.first() {
                None => Ok(false),
                Some(f) => Ok(g.exact_div(f)?.is_some()),
            },
            IdealKind::Monomial => Ok(g.terms().all(|(m, _)| {
                self.generators.iter().any(|gen| {
                    let (gm, _) = gen.leading().expect("nonzero generator");
                    mono_div(m, gm).is_some()
                })
            })),
            IdealKind::General => {
                let basis = self.groebner_basis()?;
                Ok(g.remainder(&basis)?.is_zero())
            }
        }
    }

    /// Reduced lexicographic Gröbner basis by Buchberger's algorithm with
    /// the product criterion. Errors once the reduction cap is exhausted.
    pub fn groebner_basis(&self) -> Result<Vec<Poly<C>>> {
        let mut basis: Vec<Poly<C>> = self.generators.iter().map(|g| g.make_monic()).collect();
        let mut pairs: Vec<(usize, usize)> = (0..basis.len())
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .collect();
        let mut reductions = 0usize;
        while let Some((i, j)) = pairs.pop() {
            if basis[i].lcm_is_product(&basis[j]) {
                continue;
            }
            reductions += 1;
            if reductions > self.reduction_cap {
                return Err(Error::Undecided { cap: self.reduction_cap });
            }
            let s = basis[i].s_polynomial(&basis[j])?;
            let r = s.remainder(&basis)?;
            if !r.is_zero() {
                let k = basis.len();
                basis.push(r.make_monic());
                pairs.extend((0..k).map(|i| (i, k)));
            }
        }
        reduce_basis(basis)
    }
}

fn reduce_basis<C: Scalar>(basis: Vec<Poly<C>>) -> Result<Vec<Poly<C>>> {
    // drop elements whose leading monomial is divisible by another's
    let mut minimal: Vec<Poly<C>> = Vec::new();
    for (k, g) in basis.iter().enumerate() {
        let (gm, _) = g.leading().expect("nonzero");
        let redundant = basis.iter().enumerate().any(|(j, h)| {
            let (hm, _) = h.leading().expect("nonzero");
            j != k && mono_div(gm, hm).is_some() && (hm != gm || j < k)
        });
        if !redundant {
            minimal.push(g.clone());
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for k in 0..minimal.len() {
        let others: Vec<_> = minimal
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, p)| p.clone())
            .collect();
        let (lm, lc) = minimal[k].leading().map(|(m, c)| (m.clone(), c.clone())).expect("nonzero");
        let tail = minimal[k].clone() - Poly::monomial(lm.clone(), lc);
        let tail = tail.remainder(&others)?;
        reduced.push(Poly::monomial(lm, C::one()) + tail);
    }
    reduced.sort_by(|a, b| a.leading().map(|x| x.0).cmp(&b.leading().map(|x| x.0)));
    Ok(reduced)
}
