//! Scalar traits and the Gaussian-rational field.
//!
//! Everything above this layer is generic over [`Scalar`], a field with a
//! conjugation. The only shipped instance is [`Gauss<Q>`] for an exact real
//! field `Q` (big or machine-width rationals).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Ratio;
use num_integer::Roots;
use num_traits::{One, Signed, Zero};

/// Commutative ring with unit. Used for matrix entries over polynomial and
/// series rings as well as over fields.
pub trait Ring:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    fn from_i64(v: i64) -> Self {
        let mut acc = Self::zero();
        let one = Self::one();
        for _ in 0..v.unsigned_abs() {
            acc = acc + one.clone();
        }
        if v < 0 {
            -acc
        } else {
            acc
        }
    }

    /// `self / k` when the integer `k` is invertible in the ring.
    fn try_div_int(&self, _k: i64) -> Option<Self> {
        None
    }
}

/// Exact ordered real field (the real and imaginary parts of a [`Scalar`]).
pub trait RealField:
    Ring + Div<Output = Self> + Ord + Signed + fmt::Display + Send + Sync + 'static
{
    fn from_frac(num: i64, den: i64) -> Self;
    /// Parse `"p"` or `"p/q"`.
    fn parse_frac(s: &str) -> Option<Self>;
    /// Numerator and denominator as decimal strings, denominator positive.
    fn to_frac_strings(&self) -> (String, String);
    /// `Some(v)` if this is an integer that fits in `i64`.
    fn to_i64(&self) -> Option<i64>;
    /// Rational square root, when one exists.
    fn exact_sqrt(&self) -> Option<Self>;
}

/// Field with complex conjugation and an imaginary unit.
pub trait Scalar: Ring + Div<Output = Self> + fmt::Display + Send + Sync + 'static {
    type Real: RealField;

    fn conj(&self) -> Self;
    fn imag_unit() -> Self;
    fn from_parts(re: Self::Real, im: Self::Real) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;

    fn from_real(re: Self::Real) -> Self {
        Self::from_parts(re, Self::Real::zero())
    }
    fn from_frac(num: i64, den: i64) -> Self {
        Self::from_real(Self::Real::from_frac(num, den))
    }
    fn is_real(&self) -> bool {
        self.im().is_zero()
    }
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

macro_rules! impl_real_for_ratio {
    ($int:ty, $from:expr, $toi64:expr) => {
        impl Ring for Ratio<$int> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer($from(v))
            }
            fn try_div_int(&self, k: i64) -> Option<Self> {
                (k != 0).then(|| self.clone() / Ratio::from_integer($from(k)))
            }
        }

        impl RealField for Ratio<$int> {
            fn from_frac(num: i64, den: i64) -> Self {
                Ratio::new($from(num), $from(den))
            }

            fn parse_frac(s: &str) -> Option<Self> {
                let s = s.trim();
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s, "1"),
                };
                let n: $int = n.parse().ok()?;
                let d: $int = d.parse().ok()?;
                if d.is_zero() {
                    return None;
                }
                Some(Ratio::new(n, d))
            }

            fn to_frac_strings(&self) -> (String, String) {
                (self.numer().to_string(), self.denom().to_string())
            }

            fn to_i64(&self) -> Option<i64> {
                if self.is_integer() {
                    $toi64(self.numer())
                } else {
                    None
                }
            }

            fn exact_sqrt(&self) -> Option<Self> {
                if self.is_negative() {
                    return None;
                }
                let (n, d) = (self.numer().sqrt(), self.denom().sqrt());
                (n.clone() * n.clone() == *self.numer() && d.clone() * d.clone() == *self.denom())
                    .then(|| Ratio::new(n, d))
            }
        }
    };
}

impl_real_for_ratio!(BigInt, BigInt::from, |n: &BigInt| i64::try_from(n).ok());
impl_real_for_ratio!(i64, |v: i64| v, |n: &i64| Some(*n));
impl_real_for_ratio!(i128, |v: i64| v as i128, |n: &i128| i64::try_from(*n).ok());

/// `re + i·im` over an exact real field.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gauss<Q> {
    pub re: Q,
    pub im: Q,
}

impl<Q: RealField> Gauss<Q> {
    pub fn new(re: Q, im: Q) -> Self {
        Gauss { re, im }
    }

    pub fn norm_sqr(&self) -> Q {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl<Q: RealField> Zero for Gauss<Q> {
    fn zero() -> Self {
        Gauss::new(Q::zero(), Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl<Q: RealField> One for Gauss<Q> {
    fn one() -> Self {
        Gauss::new(Q::one(), Q::zero())
    }
}

impl<Q: RealField> Add for Gauss<Q> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Gauss::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<Q: RealField> Sub for Gauss<Q> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Gauss::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<Q: RealField> Neg for Gauss<Q> {
    type Output = Self;
    fn neg(self) -> Self {
        Gauss::new(-self.re, -self.im)
    }
}

impl<Q: RealField> Mul for Gauss<Q> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let re = self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone();
        let im = self.re * rhs.im + self.im * rhs.re;
        Gauss::new(re, im)
    }
}

impl<Q: RealField> Div for Gauss<Q> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "division by zero Gaussian rational");
        let den = rhs.norm_sqr();
        let num = self * rhs.conj();
        Gauss::new(num.re / den.clone(), num.im / den)
    }
}

impl<Q: RealField> Ring for Gauss<Q> {
    fn from_i64(v: i64) -> Self {
        Gauss::new(Q::from_i64(v), Q::zero())
    }
    fn try_div_int(&self, k: i64) -> Option<Self> {
        let k = Q::from_i64(k);
        (!k.is_zero()).then(|| Gauss::new(self.re.clone() / k.clone(), self.im.clone() / k))
    }
}

impl<Q: RealField> Scalar for Gauss<Q> {
    type Real = Q;

    fn conj(&self) -> Self {
        Gauss::new(self.re.clone(), -self.im.clone())
    }
    fn imag_unit() -> Self {
        Gauss::new(Q::zero(), Q::one())
    }
    fn from_parts(re: Q, im: Q) -> Self {
        Gauss::new(re, im)
    }
    fn re(&self) -> Q {
        self.re.clone()
    }
    fn im(&self) -> Q {
        self.im.clone()
    }
}

impl<Q: RealField> fmt::Display for Gauss<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) => {
                if self.im.is_negative() {
                    write!(f, "({} - {}i)", self.re, -self.im.clone())
                } else {
                    write!(f, "({} + {}i)", self.re, self.im)
                }
            }
        }
    }
}

impl<Q: RealField> fmt::Debug for Gauss<Q> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Factorial as a ring element.
pub fn factorial<R: Ring>(k: usize) -> R {
    let mut acc = R::one();
    for j in 2..=k {
        acc = acc * R::from_i64(j as i64);
    }
    acc
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::GaussRat;

    fn g(a: i64, b: i64) -> GaussRat {
        GaussRat::new(Ratio::from_i64(a), Ratio::from_i64(b))
    }

    #[test]
    fn field_ops() {
        let x = g(1, 2);
        let y = g(3, -1);
        assert_eq!(x.clone() * y.clone(), g(5, 5));
        assert_eq!((x.clone() * y.clone()) / y.clone(), x);
        assert_eq!(x.conj().conj(), x);
        assert_eq!(GaussRat::imag_unit() * GaussRat::imag_unit(), -GaussRat::one());
    }

    #[test]
    fn parse_fracs() {
        let q = num_rational::BigRational::parse_frac("-3/6").unwrap();
        assert_eq!(q.to_frac_strings(), ("-1".to_string(), "2".to_string()));
        assert!(num_rational::BigRational::parse_frac("1/0").is_none());
    }

    #[test]
    fn display() {
        assert_eq!(g(1, -2).to_string(), "(1 - 2i)");
        assert_eq!(g(0, 1).to_string(), "1i");
        assert_eq!(factorial::<GaussRat>(4), g(24, 0));
    }
}
