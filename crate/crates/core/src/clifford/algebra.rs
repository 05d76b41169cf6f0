//! Clifford algebra of `T ⊕ T*` in normal-ordered words.
//!
//! Generators are `e_a` (coordinate vector fields) and `f_a` (coordinate
//! 1-forms) for the `2n` chart slots, with `⟨e_a, f_b⟩ = ½δ_ab`, so that
//! `e_a f_a + f_a e_a = 1` and all generators are isotropic. A word is stored
//! as `f_I e_J` with both index sets ascending; it acts on forms as
//! `dx_I ∧ (i_{j1} ⋯ i_{jk} ·)`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::tensorcalc::exterior::{degree_of, remove_sign, wedge_sign, Mask};
use crate::tensorcalc::{DiffForm, Multivector};

/// Largest filtration degree accepted by [`Clifford::cl_product`].
pub const MAX_FILTRATION: usize = 3;

type Word = (Mask, Mask);

#[derive(Clone, PartialEq)]
pub struct Clifford<C> {
    n: usize,
    terms: BTreeMap<Word, Poly<C>>,
}

/// `e_J · f_K` as a sum of normal words with signs.
fn move_vectors_past_forms(j: Mask, k: Mask) -> Vec<(Word, i64)> {
    let mut acc: Vec<(Word, i64)> = vec![((k, 0), 1)];
    let mut js: Vec<usize> = (0..32).filter(|b| j & (1 << b) != 0).collect();
    js.reverse();
    for a in js {
        let mut next = Vec::new();
        for ((fk, ej), s) in acc {
            if let Some(r) = remove_sign(fk, a) {
                next.push(((fk & !(1 << a), ej), s * r));
            }
            if let Some(w) = wedge_sign(1 << a, ej) {
                let pass = if degree_of(fk).is_multiple_of(2) { 1 } else { -1 };
                next.push(((fk, ej | (1 << a)), s * pass * w));
            }
        }
        acc = next;
    }
    acc
}

impl<C: Scalar> Clifford<C> {
    pub fn zero(n: usize) -> Self {
        Clifford { n, terms: BTreeMap::new() }
    }

    pub fn scalar(n: usize, c: Poly<C>) -> Self {
        let mut out = Self::zero(n);
        out.add_term((0, 0), c);
        out
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Poly::one())
    }

    /// Generator `e_a`.
    pub fn e(n: usize, a: usize) -> Self {
        let mut out = Self::zero(n);
        out.add_term((0, 1 << a), Poly::one());
        out
    }

    /// Generator `f_a`.
    pub fn f(n: usize, a: usize) -> Self {
        let mut out = Self::zero(n);
        out.add_term((1 << a, 0), Poly::one());
        out
    }

    pub fn from_form(phi: &DiffForm<C>) -> Self {
        let mut out = Self::zero(phi.n());
        for (&m, c) in phi.terms() {
            out.add_term((m, 0), c.clone());
        }
        out
    }

    pub fn from_polyvector(p: &Multivector<C>) -> Self {
        let mut out = Self::zero(p.n());
        for (&m, c) in p.terms() {
            out.add_term((0, m), c.clone());
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Word, c: Poly<C>) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Poly::zero);
        *entry = std::mem::replace(entry, Poly::zero()) + c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree: the longest word.
    pub fn filtration(&self) -> usize {
        self.terms.keys().map(|&(f, e)| degree_of(f) + degree_of(e)).max().unwrap_or(0)
    }

    pub fn scalar_part(&self) -> Poly<C> {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        let mut out = Self::zero(self.n);
        for (&w, c) in &self.terms {
            out.add_term(w, f(c));
        }
        out
    }

    /// Product in the full algebra, with no filtration bound.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        let mut out = Self::zero(self.n);
        for (&(fi, ej), c1) in &self.terms {
            for (&(fk, el), c2) in &other.terms {
                let c = c1.try_mul(c2)?;
                for ((fk2, ej2), s) in move_vectors_past_forms(ej, fk) {
                    let (Some(sf), Some(se)) = (wedge_sign(fi, fk2), wedge_sign(ej2, el)) else {
                        continue;
                    };
                    out.add_term((fi | fk2, ej2 | el), c.scale(&C::from_i64(s * sf * se)));
                }
            }
        }
        Ok(out)
    }

    /// Product restricted to the filtration `CL³`; longer results are an error.
    pub fn cl_product(&self, other: &Self) -> Result<Self> {
        let p = self.mul(other)?;
        if p.filtration() > MAX_FILTRATION {
            return Err(Error::Domain(format!(
                "filtration degree {} exceeds {}",
                p.filtration(),
                MAX_FILTRATION
            )));
        }
        Ok(p)
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(other)? - other.mul(self)?)
    }

    /// Spin representation on forms.
    pub fn act(&self, phi: &DiffForm<C>) -> Result<DiffForm<C>> {
        if self.n != phi.n() {
            return Err(Error::DimensionMismatch { expected: self.n, found: phi.n() });
        }
        let mut out = DiffForm::zero(self.n);
        for (&(f, e), c) in &self.terms {
            let mut acc = phi.clone();
            for a in (0..2 * self.n).rev().filter(|a| e & (1 << a) != 0) {
                acc = acc.interior_slot(a);
            }
            if acc.is_zero() {
                continue;
            }
            let wedge = DiffForm::basis(self.n, f, c.clone());
            out = out + wedge.try_wedge(&acc)?;
        }
        Ok(out)
    }

    /// `e^x · φ = Σ x^k φ / k!`, for `x` nilpotent in the spin representation.
    pub fn exp_act(&self, phi: &DiffForm<C>) -> Result<DiffForm<C>> {
        let mut acc = phi.clone();
        let mut term = phi.clone();
        for k in 1..=(4 * self.n + 1) {
            term = self.act(&term)?.scale(&C::from_frac(1, k as i64));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc + term.clone();
        }
        Err(Error::Domain("exponent is not nilpotent on this form".into()))
    }

    /// Truncated exponential `Σ_{k≤order} x^k / k!` in the algebra.
    pub fn exp_truncated(&self, order: usize) -> Result<Self> {
        let mut acc = Self::one(self.n);
        let mut term = Self::one(self.n);
        for k in 1..=order {
            term = term.mul(self)?.scale(&C::from_frac(1, k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc + term.clone();
        }
        Ok(acc)
    }

    /// Form part (words without vectors).
    pub fn form_part(&self) -> DiffForm<C> {
        DiffForm::from_terms(
            self.n,
            self.terms.iter().filter(|((_, e), _)| *e == 0).map(|(&(f, _), c)| (f, c.clone())),
        )
    }

    /// Polyvector part (words without forms).
    pub fn polyvector_part(&self) -> Multivector<C> {
        Multivector::from_terms(
            self.n,
            self.terms.iter().filter(|((f, _), _)| *f == 0).map(|(&(_, e), c)| (e, c.clone())),
        )
    }

    pub fn eval_coeffs(&self, point: &[C::Real]) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (&w, c) in &self.terms {
            out.add_term(w, Poly::constant(c.eval_at(point)?));
        }
        Ok(out)
    }
}

impl<C: Scalar> Add for Clifford<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "chart dimension mismatch");
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl<C: Scalar> Sub for Clifford<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Scalar> Neg for Clifford<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Clifford { n: self.n, terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl<C: Scalar> fmt::Debug for Clifford<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(fm, em), c)| format!("({c:?})[f{fm:b} e{em:b}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRat, PolyScalar};

    type Cl = Clifford<GaussRat>;

    #[test]
    fn relations() {
        let n = 2;
        let f0 = Cl::f(n, 0);
        let e0 = Cl::e(n, 0);
        assert!(f0.mul(&f0).unwrap().is_zero());
        assert!(e0.mul(&e0).unwrap().is_zero());
        let anti = e0.mul(&f0).unwrap() + f0.mul(&e0).unwrap();
        assert_eq!(anti, Cl::one(n));
        let e1 = Cl::e(n, 1);
        assert!((e1.mul(&f0).unwrap() + f0.mul(&e1).unwrap()).is_zero());
    }

    #[test]
    fn action_matches_generators() {
        let n = 2;
        let w = DiffForm::dz(n, 0).wedge(&DiffForm::dz(n, 1));
        assert_eq!(Cl::e(n, 0).act(&w).unwrap(), DiffForm::dz(n, 1));
        let b = DiffForm::dz(n, 0).wedge(&DiffForm::dzb(n, 1));
        let one = DiffForm::scalar(n, PolyScalar::one());
        assert_eq!(Cl::from_form(&b).act(&one).unwrap(), b);
    }

    #[test]
    fn filtration_bound() {
        let n = 2;
        let x = Cl::f(n, 0).mul(&Cl::f(n, 1)).unwrap();
        let y = Cl::e(n, 2).mul(&Cl::e(n, 3)).unwrap();
        assert!(x.cl_product(&y).is_err());
        assert!(x.cl_product(&Cl::e(n, 2)).is_ok());
    }
}
