//! Power series in the deformation parameter `t`, truncated at a fixed order.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::Ring;

/// `Σ_k coeffs[k] t^k`, exact modulo `t^(order+1)`.
///
/// `order == None` marks an exact (untruncated) series, used for the ring
/// constants returned by `zero()` and `one()`. Binary operations truncate at
/// the smaller of the two orders.
#[derive(Clone, Debug, PartialEq)]
pub struct Series<R> {
    coeffs: Vec<R>,
    order: Option<usize>,
}

impl<R: Ring> Series<R> {
    pub fn new(mut coeffs: Vec<R>, order: usize) -> Self {
        coeffs.truncate(order + 1);
        let mut s = Series { coeffs, order: Some(order) };
        s.normalize();
        s
    }

    pub fn constant(c: R, order: usize) -> Self {
        Series::new(vec![c], order)
    }

    /// `c · t^k`.
    pub fn monomial(c: R, k: usize, order: usize) -> Self {
        let mut coeffs = vec![R::zero(); k];
        coeffs.push(c);
        Series::new(coeffs, order)
    }

    pub fn order(&self) -> Option<usize> {
        self.order
    }

    pub fn coeff(&self, k: usize) -> R {
        self.coeffs.get(k).cloned().unwrap_or_else(R::zero)
    }

    pub fn coeffs(&self) -> &[R] {
        &self.coeffs
    }

    /// Lowest power of `t` with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn with_order(&self, order: usize) -> Self {
        let order = self.order.map_or(order, |o| o.min(order));
        Series::new(self.coeffs.clone(), order)
    }

    pub fn map<S: Ring>(&self, f: impl Fn(&R) -> S) -> Series<S> {
        let mut s = Series { coeffs: self.coeffs.iter().map(f).collect(), order: self.order };
        s.normalize();
        s
    }

    /// `exp(self)` for a series without constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeff(0).is_zero(), "exp needs a series without constant term");
        let order = self.order.expect("exp needs a truncated series");
        let mut acc = Series::constant(R::one(), order);
        let mut term = Series::constant(R::one(), order);
        for k in 1..=order {
            term = term * self.clone();
            term = term.scale_by(|c| c.try_div_int(k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc + term.clone();
        }
        acc
    }

    fn scale_by(&self, f: impl Fn(&R) -> Option<R>) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| f(c).expect("scaling by 1/k needs a field of characteristic zero"))
            .collect();
        let mut s = Series { coeffs, order: self.order };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        if let Some(o) = self.order {
            self.coeffs.truncate(o + 1);
        }
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

fn min_order(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl<R: Ring> Zero for Series<R> {
    fn zero() -> Self {
        Series { coeffs: Vec::new(), order: None }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<R: Ring> One for Series<R> {
    fn one() -> Self {
        Series { coeffs: vec![R::one()], order: None }
    }
}

impl<R: Ring> Add for Series<R> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let order = min_order(self.order, rhs.order);
        let len = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        let mut s = Series { coeffs, order };
        s.normalize();
        s
    }
}

impl<R: Ring> Sub for Series<R> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<R: Ring> Neg for Series<R> {
    type Output = Self;
    fn neg(self) -> Self {
        Series { coeffs: self.coeffs.into_iter().map(|c| -c).collect(), order: self.order }
    }
}

impl<R: Ring> Mul for Series<R> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let order = min_order(self.order, rhs.order);
        let full = self.coeffs.len() + rhs.coeffs.len();
        let len = match order {
            Some(o) => full.min(o + 1),
            None => full,
        };
        let mut coeffs = vec![R::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j < len {
                    coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        let mut s = Series { coeffs, order };
        s.normalize();
        s
    }
}

impl<R: Ring> Ring for Series<R> {
    fn try_div_int(&self, k: i64) -> Option<Self> {
        let coeffs = self.coeffs.iter().map(|c| c.try_div_int(k)).collect::<Option<Vec<_>>>()?;
        Some(Series { coeffs, order: self.order })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::scalar::Scalar;
    use crate::GaussRat;

    fn s(v: &[i64], order: usize) -> Series<GaussRat> {
        Series::new(v.iter().map(|&x| GaussRat::from_i64(x)).collect(), order)
    }

    #[test]
    fn truncated_product() {
        let a = s(&[1, 1], 2);
        let b = a.clone() * a.clone() * a;
        assert_eq!(b, s(&[1, 3, 3], 2));
    }

    #[test]
    fn exp_of_t() {
        let t = s(&[0, 1], 3);
        let e = t.exp();
        assert_eq!(e.coeff(3), GaussRat::from_frac(1, 6));
        let back = e * (-s(&[0, 1], 3)).exp();
        assert_eq!(back, s(&[1], 3));
    }

    #[test]
    fn order_is_minimum() {
        let a = s(&[1, 2, 3, 4], 3);
        let b = s(&[1, 1], 1);
        assert_eq!((a * b).order(), Some(1));
    }
}
