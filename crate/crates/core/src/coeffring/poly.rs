//! Sparse multivariate polynomials in chart coordinates.
//!
//! Variables are indexed `0..2n`: index `j < n` is `z_{j+1}`, index `n + j` is
//! the formally independent conjugate `zb_{j+1}`. Exponent vectors are stored
//! with trailing zeros trimmed, so a polynomial does not need to know the chart
//! dimension until it is conjugated or evaluated.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::{Ring, Scalar};
use crate::error::{Error, Result};

/// Largest total degree a monomial may reach.
pub const MAX_TOTAL_DEGREE: u32 = 64;

/// Exponent vector with trailing zeros removed. Ordering is lexicographic with
/// variable 0 most significant.
pub type Monomial = Vec<u8>;

fn trim(m: &mut Monomial) {
    while m.last() == Some(&0) {
        m.pop();
    }
}

pub fn mono_degree(m: &[u8]) -> u32 {
    m.iter().map(|&e| e as u32).sum()
}

fn mono_mul(a: &[u8], b: &[u8]) -> Result<Monomial> {
    let len = a.len().max(b.len());
    let mut out = Vec::with_capacity(len);
    for k in 0..len {
        let e = *a.get(k).unwrap_or(&0) as u32 + *b.get(k).unwrap_or(&0) as u32;
        out.push(e);
    }
    let total: u32 = out.iter().sum();
    if total > MAX_TOTAL_DEGREE {
        return Err(Error::DegreeOverflow(total));
    }
    Ok(out.into_iter().map(|e| e as u8).collect())
}

/// `Some(a / b)` when the monomial `b` divides `a`.
pub fn mono_div(a: &[u8], b: &[u8]) -> Option<Monomial> {
    if b.len() > a.len() {
        return None;
    }
    let mut out = a.to_vec();
    for (k, &e) in b.iter().enumerate() {
        if out[k] < e {
            return None;
        }
        out[k] -= e;
    }
    trim(&mut out);
    Some(out)
}

fn mono_lcm(a: &[u8], b: &[u8]) -> Monomial {
    let len = a.len().max(b.len());
    let mut out: Monomial = (0..len)
        .map(|k| (*a.get(k).unwrap_or(&0)).max(*b.get(k).unwrap_or(&0)))
        .collect();
    trim(&mut out);
    out
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly<C> {
    terms: BTreeMap<Monomial, C>,
}

impl<C: Scalar> Poly<C> {
    pub fn constant(c: C) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Poly { terms }
    }

    pub fn var(index: usize) -> Self {
        let mut m = vec![0u8; index + 1];
        m[index] = 1;
        Self::monomial(m, C::one())
    }

    pub fn monomial(mut m: Monomial, c: C) -> Self {
        trim(&mut m);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn from_terms(iter: impl IntoIterator<Item = (Monomial, C)>) -> Self {
        let mut p = Poly::zero();
        for (m, c) in iter {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn add_term(&mut self, mut m: Monomial, c: C) {
        if c.is_zero() {
            return;
        }
        trim(&mut m);
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = v.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coeff(&self, m: &[u8]) -> C {
        let mut key = m.to_vec();
        trim(&mut key);
        self.terms.get(&key).cloned().unwrap_or_else(C::zero)
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&[])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.is_empty())
    }

    /// Number of variable slots in use (highest variable index + 1).
    pub fn var_span(&self) -> usize {
        self.terms.keys().map(|m| m.len()).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| mono_degree(m)).max()
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, v)| (m.clone(), v.clone() * c.clone()))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(mono_mul(ma, mb)?, ca.clone() * cb.clone());
            }
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: &[u8], c: &C) -> Result<Self> {
        let mut out = Poly::zero();
        for (ma, ca) in &self.terms {
            out.add_term(mono_mul(ma, m)?, ca.clone() * c.clone());
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = acc.try_mul(self)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let e = *m.get(index).unwrap_or(&0);
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm[index] -= 1;
            out.add_term(dm, c.clone() * C::from_i64(e as i64));
        }
        out
    }

    /// Conjugation on a chart of dimension `n`: swaps `z_j` and `zb_j`
    /// exponents and conjugates coefficients.
    pub fn conj(&self, n: usize) -> Self {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut cm = vec![0u8; 2 * n];
            for (k, &e) in m.iter().enumerate() {
                assert!(k < 2 * n, "variable index {k} outside chart of dimension {n}");
                let target = if k < n { k + n } else { k - n };
                cm[target] = e;
            }
            out.add_term(cm, c.conj());
        }
        out
    }

    /// True when no conjugate variable `zb_j` occurs.
    pub fn is_holomorphic(&self, n: usize) -> bool {
        self.terms.keys().all(|m| m.len() <= n)
    }

    /// Evaluate at complex values, one per variable slot.
    pub fn eval_complex(&self, values: &[C]) -> Result<C> {
        if self.var_span() > values.len() {
            return Err(Error::DimensionMismatch {
                expected: values.len(),
                found: self.var_span(),
            });
        }
        let mut acc = C::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.iter().enumerate() {
                for _ in 0..e {
                    t = t * values[k].clone();
                }
            }
            acc = acc + t;
        }
        Ok(acc)
    }

    /// Evaluate at a real point `(x_1..x_n, y_1..y_n)` with `z_j = x_j + i y_j`
    /// and `zb_j = x_j - i y_j`.
    pub fn eval_at(&self, point: &[C::Real]) -> Result<C> {
        let values = complex_values::<C>(point)?;
        self.eval_complex(&values)
    }

    /// Substitute `subs[k]` for variable `k`. Variables beyond `subs.len()`
    /// are an error.
    pub fn compose(&self, subs: &[Poly<C>]) -> Result<Self> {
        if self.var_span() > subs.len() {
            return Err(Error::DimensionMismatch {
                expected: subs.len(),
                found: self.var_span(),
            });
        }
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (k, &e) in m.iter().enumerate() {
                if e > 0 {
                    t = t.try_mul(&subs[k].pow(e as u32)?)?;
                }
            }
            out = out + t;
        }
        Ok(out)
    }

    /// Lexicographic leading monomial and coefficient.
    pub fn leading(&self) -> Option<(&Monomial, &C)> {
        self.terms.iter().next_back()
    }

    /// Remainder of multivariate division by `divisors` under lex order.
    pub fn remainder(&self, divisors: &[Poly<C>]) -> Result<Self> {
        let leads: Vec<_> = divisors
            .iter()
            .filter_map(|d| d.leading().map(|(m, c)| (m.clone(), c.clone(), d)))
            .collect();
        let mut p = self.clone();
        let mut rem = Poly::zero();
        while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let mut divided = false;
            for (dm, dc, d) in &leads {
                if let Some(q) = mono_div(&lm, dm) {
                    let factor = lc.clone() / dc.clone();
                    p = p - d.mul_monomial(&q, &factor)?;
                    divided = true;
                    break;
                }
            }
            if !divided {
                rem.add_term(lm.clone(), lc);
                p.terms.remove(&lm);
            }
        }
        Ok(rem)
    }

    /// Exact quotient if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Poly<C>) -> Result<Option<Self>> {
        let (dm, dc) = match divisor.leading() {
            Some((m, c)) => (m.clone(), c.clone()),
            None => return Err(Error::DivisionByZero),
        };
        let mut p = self.clone();
        let mut quot = Poly::zero();
        while let Some((lm, lc)) = p.leading().map(|(m, c)| (m.clone(), c.clone())) {
            let Some(q) = mono_div(&lm, &dm) else {
                return Ok(None);
            };
            let factor = lc / dc.clone();
            p = p - divisor.mul_monomial(&q, &factor)?;
            quot.add_term(q, factor);
        }
        Ok(Some(quot))
    }

    pub(crate) fn s_polynomial(&self, other: &Self) -> Result<Self> {
        let (ma, ca) = self.leading().expect("nonzero");
        let (mb, cb) = other.leading().expect("nonzero");
        let l = mono_lcm(ma, mb);
        let qa = mono_div(&l, ma).expect("lcm divisible");
        let qb = mono_div(&l, mb).expect("lcm divisible");
        Ok(self.mul_monomial(&qa, &ca.inv())? - other.mul_monomial(&qb, &cb.inv())?)
    }

    pub(crate) fn lcm_is_product(&self, other: &Self) -> bool {
        let (ma, _) = self.leading().expect("nonzero");
        let (mb, _) = other.leading().expect("nonzero");
        ma.iter().zip(mb.iter()).all(|(&a, &b)| a == 0 || b == 0)
    }

    pub fn make_monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv()),
            None => self.clone(),
        }
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

/// `[z_1..z_n, zb_1..zb_n]` values at a real point `(x, y)`.
pub fn complex_values<C: Scalar>(point: &[C::Real]) -> Result<Vec<C>> {
    if point.len() % 2 != 0 {
        return Err(Error::DimensionMismatch {
            expected: point.len() + 1,
            found: point.len(),
        });
    }
    let n = point.len() / 2;
    let z: Vec<C> = (0..n)
        .map(|j| C::from_parts(point[j].clone(), point[n + j].clone()))
        .collect();
    let zb: Vec<C> = z.iter().map(|v| v.conj()).collect();
    Ok(z.into_iter().chain(zb).collect())
}

impl<C: Scalar> Zero for Poly<C> {
    fn zero() -> Self {
        Poly { terms: BTreeMap::new() }
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<C: Scalar> One for Poly<C> {
    fn one() -> Self {
        Poly::constant(C::one())
    }
}

impl<C: Scalar> Add for Poly<C> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl<C: Scalar> Sub for Poly<C> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Scalar> Neg for Poly<C> {
    type Output = Self;
    fn neg(self) -> Self {
        Poly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl<C: Scalar> Mul for Poly<C> {
    type Output = Self;
    /// Panics when the product exceeds [`MAX_TOTAL_DEGREE`]; use
    /// [`Poly::try_mul`] to get the error instead.
    fn mul(self, rhs: Self) -> Self {
        self.try_mul(&rhs).expect("polynomial degree bound exceeded")
    }
}

impl<C: Scalar> Ring for Poly<C> {
    fn from_i64(v: i64) -> Self {
        Poly::constant(C::from_i64(v))
    }
    fn try_div_int(&self, k: i64) -> Option<Self> {
        (k != 0).then(|| self.scale(&C::from_frac(1, k)))
    }
}

impl<C: Scalar> fmt::Debug for Poly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (k, &e) in m.iter().enumerate() {
                if e == 1 {
                    write!(f, "*x{k}")?;
                } else if e > 1 {
                    write!(f, "*x{k}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRat, PolyScalar, Rational};
    use num_traits::One;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn eval_examples() {
        // z1 * zb1 at (x1, y1) = (1, 1) on C^1
        let p = PolyScalar::var(0) * PolyScalar::var(1);
        assert_eq!(p.eval_at(&[q(1), q(1)]).unwrap(), GaussRat::from_i64(2));
        assert_eq!(PolyScalar::zero().eval_at(&[q(3), q(4)]).unwrap(), GaussRat::zero());
        // z1^2 + zb2 on C^2 at (x1, x2, y1, y2) = (1, 2, 0, 3)
        let p = PolyScalar::var(0).pow(2).unwrap() + PolyScalar::var(3);
        let v = p.eval_at(&[q(1), q(2), q(0), q(3)]).unwrap();
        assert_eq!(v, GaussRat::new(q(3), q(-3)));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let p = PolyScalar::var(5);
        assert!(matches!(p.eval_at(&[q(1), q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degree_cap() {
        let p = PolyScalar::var(0).pow(40).unwrap();
        assert!(matches!(p.try_mul(&p), Err(Error::DegreeOverflow(80))));
    }

    #[test]
    fn conj_swaps_variables() {
        let i = GaussRat::imag_unit();
        let p = PolyScalar::monomial(vec![2, 0, 0, 1], i.clone());
        let c = p.conj(2);
        assert_eq!(c, PolyScalar::monomial(vec![0, 1, 2, 0], -i));
        assert_eq!(c.conj(2), p);
    }

    #[test]
    fn division() {
        let z1 = PolyScalar::var(0);
        let z2 = PolyScalar::var(1);
        let f = z1.clone() * z2.clone() + PolyScalar::one();
        let g = f.clone() * (z1.clone() - z2.clone());
        assert_eq!(g.exact_div(&f).unwrap(), Some(z1.clone() - z2.clone()));
        assert_eq!((g + PolyScalar::one()).exact_div(&f).unwrap(), None);
    }
}
