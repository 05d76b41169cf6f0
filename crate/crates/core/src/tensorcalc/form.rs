//! Differential forms: d, ∂, ∂̄, interior products, Lie derivative, the
//! radial homotopy operator and Lefschetz contraction.

use num_traits::{One, Zero};

use super::exterior::{degree_of, remove_sign, slots, Exterior, FormKind};
use super::polyvector::Multivector;
use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub type DiffForm<C> = Exterior<C, FormKind>;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Part {
    Full,
    Hol,
    Antihol,
}

impl<C: Scalar> DiffForm<C> {
    pub fn dz(n: usize, j: usize) -> Self {
        Self::slot(n, j, Poly::one())
    }

    pub fn dzb(n: usize, j: usize) -> Self {
        Self::slot(n, n + j, Poly::one())
    }

    /// Differential of a function.
    pub fn differential(n: usize, f: &Poly<C>) -> Self {
        Self::scalar(n, f.clone()).d()
    }

    fn d_part(&self, part: Part) -> Self {
        let n = self.n();
        let range = match part {
            Part::Full => 0..2 * n,
            Part::Hol => 0..n,
            Part::Antihol => n..2 * n,
        };
        let mut out = Self::zero(n);
        for (&m, c) in self.terms() {
            for a in range.clone() {
                if m & (1 << a) != 0 {
                    continue;
                }
                let da = c.derivative(a);
                if da.is_zero() {
                    continue;
                }
                let s = remove_sign(m | (1 << a), a).expect("slot present");
                out.add_term(m | (1 << a), da.scale(&C::from_i64(s)));
            }
        }
        out
    }

    pub fn d(&self) -> Self {
        self.d_part(Part::Full)
    }

    pub fn del(&self) -> Self {
        self.d_part(Part::Hol)
    }

    pub fn delbar(&self) -> Self {
        self.d_part(Part::Antihol)
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Interior product with the coordinate field of `slot`.
    pub fn interior_slot(&self, slot: usize) -> Self {
        let mut out = Self::zero(self.n());
        for (&m, c) in self.terms() {
            if let Some(s) = remove_sign(m, slot) {
                out.add_term(m & !(1 << slot), c.scale(&C::from_i64(s)));
            }
        }
        out
    }

    /// `i_v` for a vector field `v` (the degree-one part of `v` is used).
    pub fn interior(&self, v: &Multivector<C>) -> Result<Self> {
        self.check_chart(v.n())?;
        let mut out = Self::zero(self.n());
        for (a, va) in v.components().iter().enumerate() {
            if !va.is_zero() {
                out = out + self.interior_slot(a).mul_poly(va)?;
            }
        }
        Ok(out)
    }

    /// Contraction by a polyvector with `i_{u∧v} = i_u ∘ i_v`: the basis
    /// element `∂_{a1}∧…∧∂_{ak}` (ascending) acts as `i_{a1} ⋯ i_{ak}`.
    pub fn contract(&self, p: &Multivector<C>) -> Result<Self> {
        self.check_chart(p.n())?;
        let mut out = Self::zero(self.n());
        for (&m, c) in p.terms() {
            let mut acc = self.clone();
            for a in slots(m).collect::<Vec<_>>().into_iter().rev() {
                acc = acc.interior_slot(a);
            }
            out = out + acc.mul_poly(c)?;
        }
        Ok(out)
    }

    /// `L_v = i_v d + d i_v`.
    pub fn lie_derivative(&self, v: &Multivector<C>) -> Result<Self> {
        Ok(self.d().interior(v)? + self.interior(v)?.d())
    }

    /// Evaluate a `k`-form on `k` vectors: `φ(u_1,…,u_k) = i_{u_k}⋯i_{u_1} φ`.
    pub fn evaluate_on(&self, vectors: &[Multivector<C>]) -> Result<Poly<C>> {
        let mut acc = self.clone();
        for v in vectors {
            acc = acc.interior(v)?;
        }
        Ok(acc.coeff(0))
    }

    /// Radial homotopy `K` with `dK + Kd = id` on positive-degree polynomial
    /// forms. Requires `self` closed; returns `α` with `dα = self`.
    pub fn homotopy(&self) -> Result<Self> {
        if !self.is_closed() {
            return Err(Error::Domain("form is not closed".into()));
        }
        if !self.part(0).is_zero() {
            return Err(Error::Domain("homotopy needs positive degree".into()));
        }
        Ok(self.homotopy_operator())
    }

    /// The operator `K` itself, without preconditions.
    pub fn homotopy_operator(&self) -> Self {
        let n = self.n();
        let mut out = Self::zero(n);
        for (&m, c) in self.terms() {
            let k = degree_of(m) as i64;
            if k == 0 {
                continue;
            }
            for (mono, coeff) in c.terms() {
                let weight = k + mono.iter().map(|&e| e as i64).sum::<i64>();
                let scaled = coeff.clone() * C::from_frac(1, weight);
                // i_E (x^α dx_I) with E the Euler field
                for a in slots(m) {
                    let s = remove_sign(m, a).expect("slot present");
                    let mut mono2 = mono.clone();
                    if mono2.len() <= a {
                        mono2.resize(a + 1, 0);
                    }
                    mono2[a] += 1;
                    out.add_term(
                        m & !(1 << a),
                        Poly::monomial(mono2, scaled.clone() * C::from_i64(s)),
                    );
                }
            }
        }
        out
    }

    fn check_chart(&self, n: usize) -> Result<()> {
        if self.n() != n {
            return Err(Error::DimensionMismatch { expected: self.n(), found: n });
        }
        Ok(())
    }

    /// Coefficient matrix `W[j][k]` of the `dz_j ∧ dzb_k` components.
    pub fn hermitian_matrix(&self) -> Matrix<Poly<C>> {
        let n = self.n();
        Matrix::from_fn(n, n, |j, k| self.coeff((1 << j) | (1 << (n + k))))
    }

    /// `(i/2) Σ dz_j ∧ dzb_j`.
    pub fn standard_kahler(n: usize) -> Self {
        let half_i = C::imag_unit() * C::from_frac(1, 2);
        let mut out = Self::zero(n);
        for j in 0..n {
            out.add_term((1 << j) | (1 << (n + j)), Poly::constant(half_i.clone()));
        }
        out
    }

    /// `dz_1 ∧ … ∧ dz_n`.
    pub fn canonical(n: usize) -> Self {
        Self::basis(n, (1 << n) - 1, Poly::one())
    }

    /// `e^{self}` for an even form (finite sum of wedge powers).
    pub fn wedge_exp(&self) -> Result<Self> {
        let n = self.n();
        if self.degrees().iter().any(|&k| k % 2 == 1) {
            return Err(Error::Domain("wedge exponential needs an even form".into()));
        }
        if !self.part(0).is_zero() {
            return Err(Error::Domain("wedge exponential needs zero scalar part".into()));
        }
        let mut acc = Self::scalar(n, Poly::one());
        let mut term = acc.clone();
        for k in 1..=n {
            term = term.try_wedge(self)?.scale(&C::from_frac(1, k as i64));
            if term.is_zero() {
                break;
            }
            acc = acc + term.clone();
        }
        Ok(acc)
    }
}

/// `Λ_ω p`: trace of `p` against the constant Kähler form `ω`, namely
/// `tr(W⁻¹ P)` for the `dz ∧ dzb` coefficient matrices `W` of `ω` and `P` of `p`.
/// This gives `Λ_ω ω = n`.
pub fn lefschetz_contract<C: Scalar>(p: &DiffForm<C>, omega: &DiffForm<C>) -> Result<Poly<C>> {
    let n = omega.n();
    if p.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: p.n() });
    }
    if p.is_zero() {
        return Ok(Poly::zero());
    }
    if p.bidegrees() != vec![(1, 1)] {
        return Err(Error::Domain("p is not of bidegree (1,1)".into()));
    }
    if !omega.is_constant() || omega.bidegrees() != vec![(1, 1)] {
        return Err(Error::Domain("ω must be a constant (1,1)-form".into()));
    }
    let w = omega.hermitian_matrix().map(|c| c.constant_term());
    let winv = w.inverse().map_err(|_| Error::Singular("ω is degenerate".into()))?;
    let pm = p.hermitian_matrix();
    let mut acc = Poly::zero();
    for j in 0..n {
        for k in 0..n {
            let wk = &winv[(k, j)];
            if !wk.is_zero() {
                acc = acc + pm[(j, k)].scale(wk);
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use crate::{GaussRat, PolyScalar};

    type F = DiffForm<GaussRat>;

    fn z(k: usize) -> PolyScalar {
        PolyScalar::var(k)
    }

    #[test]
    fn d_examples() {
        // d(z1 dz2) = dz1 ∧ dz2
        let f = F::slot(2, 1, z(0));
        assert_eq!(f.d(), F::dz(2, 0).wedge(&F::dz(2, 1)));
        // d(zb1 dz1) = dzb1 ∧ dz1 = -dz1 ∧ dzb1
        let g = F::slot(1, 0, z(1));
        assert_eq!(g.d(), -F::dz(1, 0).wedge(&F::dzb(1, 0)));
        assert!(F::standard_kahler(2).d().is_zero());
    }

    #[test]
    fn interior_and_contract() {
        let n = 2;
        let w = F::dz(n, 0).wedge(&F::dz(n, 1));
        assert_eq!(w.interior_slot(0), F::dz(n, 1));
        let beta = Multivector::slot(n, 0, PolyScalar::one()).wedge(&Multivector::slot(n, 1, PolyScalar::one()));
        assert_eq!(w.contract(&beta).unwrap(), F::scalar(n, -PolyScalar::one()));
        assert!(F::dzb(n, 0).contract(&beta).unwrap().is_zero());
    }

    #[test]
    fn lie_examples() {
        let d1 = Multivector::slot(2, 0, PolyScalar::one());
        let f = F::slot(2, 1, z(0));
        assert_eq!(f.lie_derivative(&d1).unwrap(), F::dz(2, 1));
        let e = Multivector::slot(1, 0, z(0));
        assert_eq!(F::dz(1, 0).lie_derivative(&e).unwrap(), F::dz(1, 0));
    }

    #[test]
    fn homotopy_example() {
        let phi = F::dz(1, 0).wedge(&F::dzb(1, 0));
        let alpha = phi.homotopy().unwrap();
        assert_eq!(alpha.d(), phi);
        let half = GaussRat::from_frac(1, 2);
        let expected = F::slot(1, 1, z(0).scale(&half)) - F::slot(1, 0, z(1).scale(&half));
        assert_eq!(alpha, expected);
        assert!(F::slot(1, 0, z(1)).homotopy().is_err());
    }

    #[test]
    fn lefschetz_examples() {
        let om = F::standard_kahler(3);
        assert_eq!(lefschetz_contract(&om, &om).unwrap(), PolyScalar::from_i64(3));
        let off = F::dz(3, 0).wedge(&F::dzb(3, 1));
        assert!(lefschetz_contract(&off, &om).unwrap().is_zero());
        assert!(lefschetz_contract(&F::zero(3), &om).unwrap().is_zero());
        assert!(lefschetz_contract(&F::dz(3, 0), &om).is_err());
    }
}
