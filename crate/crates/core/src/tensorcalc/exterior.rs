//! Sparse graded exterior algebra over polynomial coefficients.
//!
//! Basis elements are bitmasks over the `2n` chart slots: bit `j < n` is the
//! holomorphic slot `j`, bit `n + j` its conjugate. The same storage backs
//! differential forms (`dz`, `dzb`) and polyvectors (`@`, `@b`).

use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};

pub type Mask = u32;

pub trait Kind: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    fn symbol(slot: usize, n: usize) -> String;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormKind;
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorKind;

impl Kind for FormKind {
    fn symbol(slot: usize, n: usize) -> String {
        if slot < n {
            format!("dz{}", slot + 1)
        } else {
            format!("dzb{}", slot - n + 1)
        }
    }
}

impl Kind for VectorKind {
    fn symbol(slot: usize, n: usize) -> String {
        if slot < n {
            format!("@{}", slot + 1)
        } else {
            format!("@b{}", slot - n + 1)
        }
    }
}

pub fn degree_of(mask: Mask) -> usize {
    mask.count_ones() as usize
}

/// Sign of `e_I ∧ e_J` relative to `e_{I∪J}`, or `None` if they overlap.
pub fn wedge_sign(a: Mask, b: Mask) -> Option<i64> {
    if a & b != 0 {
        return None;
    }
    let mut swaps = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        swaps += (a >> (j + 1)).count_ones();
        rest &= rest - 1;
    }
    Some(if swaps.is_multiple_of(2) { 1 } else { -1 })
}

/// Removing slot `a` from the front: `e_I = s · e_a ∧ e_{I \ a}`.
pub fn remove_sign(mask: Mask, a: usize) -> Option<i64> {
    if mask & (1 << a) == 0 {
        return None;
    }
    let below = (mask & ((1 << a) - 1)).count_ones();
    Some(if below.is_multiple_of(2) { 1 } else { -1 })
}

pub fn slots(mask: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |k| mask & (1 << k) != 0)
}

/// Conjugate slot mask: swaps `j` and `n + j`. Returns the new mask and the
/// reordering sign.
pub fn conj_mask(mask: Mask, n: usize) -> (Mask, i64) {
    let mut sign = 1;
    let mut out: Mask = 0;
    for s in slots(mask) {
        let t = if s < n { s + n } else { s - n };
        // appending t at the right of `out`
        let s_ = wedge_sign(out, 1 << t).expect("distinct slots");
        sign *= s_;
        out |= 1 << t;
    }
    (out, sign)
}

#[derive(Clone, PartialEq)]
pub struct Exterior<C, K> {
    n: usize,
    terms: BTreeMap<Mask, Poly<C>>,
    _kind: PhantomData<K>,
}

impl<C: Scalar, K: Kind> Exterior<C, K> {
    pub fn zero(n: usize) -> Self {
        assert!(2 * n <= 32, "chart dimension too large");
        Exterior { n, terms: BTreeMap::new(), _kind: PhantomData }
    }

    pub fn scalar(n: usize, f: Poly<C>) -> Self {
        Self::basis(n, 0, f)
    }

    pub fn basis(n: usize, mask: Mask, coeff: Poly<C>) -> Self {
        let mut out = Self::zero(n);
        out.add_term(mask, coeff);
        out
    }

    /// Element `coeff · e_{slot}`.
    pub fn slot(n: usize, slot: usize, coeff: Poly<C>) -> Self {
        assert!(slot < 2 * n);
        Self::basis(n, 1 << slot, coeff)
    }

    /// Degree-one element from its `2n` components.
    pub fn from_components(n: usize, comps: &[Poly<C>]) -> Self {
        let mut out = Self::zero(n);
        for (a, c) in comps.iter().enumerate() {
            out.add_term(1 << a, c.clone());
        }
        out
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Mask, Poly<C>)>) -> Self {
        let mut out = Self::zero(n);
        for (m, c) in terms {
            out.add_term(m, c);
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mask, &Poly<C>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mask: Mask) -> Poly<C> {
        self.terms.get(&mask).cloned().unwrap_or_else(Poly::zero)
    }

    pub fn add_term(&mut self, mask: Mask, c: Poly<C>) {
        if c.is_zero() {
            return;
        }
        assert!(mask >> (2 * self.n) == 0, "slot outside chart");
        let entry = self.terms.entry(mask).or_insert_with(Poly::zero);
        *entry = std::mem::replace(entry, Poly::zero()) + c;
        if entry.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree-one components, indexed by slot.
    pub fn components(&self) -> Vec<Poly<C>> {
        (0..2 * self.n).map(|a| self.coeff(1 << a)).collect()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.terms.keys().map(|&m| degree_of(m)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn is_homogeneous(&self, k: usize) -> bool {
        self.terms.keys().all(|&m| degree_of(m) == k)
    }

    pub fn part(&self, k: usize) -> Self {
        self.filter(|m| degree_of(m) == k)
    }

    /// Component of holomorphic degree `p` and antiholomorphic degree `q`.
    pub fn bidegree_part(&self, p: usize, q: usize) -> Self {
        let n = self.n;
        let hol: Mask = (1 << n) - 1;
        self.filter(|m| degree_of(m & hol) == p && degree_of(m & !hol) == q)
    }

    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let hol: Mask = (1 << self.n) - 1;
        let mut v: Vec<_> = self
            .terms
            .keys()
            .map(|&m| (degree_of(m & hol), degree_of(m & !hol)))
            .collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn filter(&self, keep: impl Fn(Mask) -> bool) -> Self {
        Exterior {
            n: self.n,
            terms: self.terms.iter().filter(|(&m, _)| keep(m)).map(|(&m, c)| (m, c.clone())).collect(),
            _kind: PhantomData,
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&Poly<C>) -> Poly<C>) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(&m, c)| (m, f(c))))
    }

    pub fn try_map_coeffs(&self, f: impl Fn(&Poly<C>) -> Result<Poly<C>>) -> Result<Self> {
        let mut out = Self::zero(self.n);
        for (&m, c) in &self.terms {
            out.add_term(m, f(c)?);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map_coeffs(|p| p.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly<C>) -> Result<Self> {
        self.try_map_coeffs(|p| p.try_mul(f))
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let mut out = Self::zero(self.n);
        for (&a, ca) in &self.terms {
            for (&b, cb) in &other.terms {
                if let Some(s) = wedge_sign(a, b) {
                    out.add_term(a | b, ca.try_mul(cb)?.scale(&C::from_i64(s)));
                }
            }
        }
        Ok(out)
    }

    /// Panics on polynomial degree overflow; see [`Exterior::try_wedge`].
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("degree bound exceeded in wedge")
    }

    pub fn wedge_power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::scalar(self.n, Poly::one());
        for _ in 0..k {
            acc = acc.try_wedge(self)?;
        }
        Ok(acc)
    }

    /// Complex conjugation: conjugates coefficients and swaps `j ↔ n + j`.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero(self.n);
        for (&m, c) in &self.terms {
            let (cm, s) = conj_mask(m, self.n);
            out.add_term(cm, c.conj(self.n).scale(&C::from_i64(s)));
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// Pointwise value: constant coefficient on each basis mask.
    pub fn eval_at(&self, point: &[C::Real]) -> Result<BTreeMap<Mask, C>> {
        self.check_point(point)?;
        let mut out = BTreeMap::new();
        for (&m, c) in &self.terms {
            let v = c.eval_at(point)?;
            if !v.is_zero() {
                out.insert(m, v);
            }
        }
        Ok(out)
    }

    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        self.try_map_coeffs(|c| c.compose(subs))
    }

    pub fn max_poly_degree(&self) -> u32 {
        self.terms.values().filter_map(|c| c.total_degree()).max().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.values().all(|c| c.is_constant())
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.values().all(|c| c.is_holomorphic(self.n))
    }

    pub(crate) fn check_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: other.n });
        }
        Ok(())
    }

    fn check_point(&self, point: &[C::Real]) -> Result<()> {
        if point.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: point.len() });
        }
        Ok(())
    }
}

impl<C: Scalar, K: Kind> Add for Exterior<C, K> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        assert_eq!(self.n, rhs.n, "chart dimension mismatch");
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Scalar, K: Kind> Sub for Exterior<C, K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Scalar, K: Kind> Neg for Exterior<C, K> {
    type Output = Self;
    fn neg(self) -> Self {
        Exterior {
            n: self.n,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
            _kind: PhantomData,
        }
    }
}

impl<C: Scalar, K: Kind> fmt::Debug for Exterior<C, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&m, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c:?})")?;
            for s in slots(m) {
                write!(f, "·{}", K::symbol(s, self.n))?;
            }
        }
        Ok(())
    }
}
