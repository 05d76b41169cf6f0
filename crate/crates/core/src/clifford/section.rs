//! Sections `v + θ` of `T ⊕ T*`, the pairing, the Courant bracket and
//! adjoint actions of Clifford exponentials.

use num_traits::Zero;

use super::algebra::Clifford;
use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensorcalc::{DiffForm, Multivector};

#[derive(Clone, Debug, PartialEq)]
pub struct GenSection<C: Scalar> {
    pub vector: Multivector<C>,
    pub form: DiffForm<C>,
}

impl<C: Scalar> GenSection<C> {
    pub fn new(vector: Multivector<C>, form: DiffForm<C>) -> Self {
        assert_eq!(vector.n(), form.n(), "chart dimension mismatch");
        GenSection { vector, form }
    }

    pub fn zero(n: usize) -> Self {
        GenSection { vector: Multivector::zero(n), form: DiffForm::zero(n) }
    }

    pub fn from_vector(v: Multivector<C>) -> Self {
        let n = v.n();
        GenSection { vector: v, form: DiffForm::zero(n) }
    }

    pub fn from_form(theta: DiffForm<C>) -> Self {
        let n = theta.n();
        GenSection { vector: Multivector::zero(n), form: theta }
    }

    pub fn n(&self) -> usize {
        self.vector.n()
    }

    /// Components: `2n` vector slots then `2n` covector slots.
    pub fn to_vec(&self) -> Vec<Poly<C>> {
        let mut v = self.vector.components();
        v.extend(self.form.components());
        v
    }

    pub fn from_vec(n: usize, comps: &[Poly<C>]) -> Self {
        assert_eq!(comps.len(), 4 * n);
        GenSection {
            vector: Multivector::from_components(n, &comps[..2 * n]),
            form: DiffForm::from_components(n, &comps[2 * n..]),
        }
    }

    pub fn eval_at(&self, point: &[C::Real]) -> Result<Vec<C>> {
        self.to_vec().iter().map(|c| c.eval_at(point)).collect()
    }

    pub fn to_clifford(&self) -> Clifford<C> {
        Clifford::from_polyvector(&self.vector.part(1)) + Clifford::from_form(&self.form.part(1))
    }

    pub fn from_clifford(x: &Clifford<C>) -> Result<Self> {
        if x.filtration() > 1 || !x.scalar_part().is_zero() {
            return Err(Error::Domain("Clifford element is not a section".into()));
        }
        Ok(GenSection { vector: x.polyvector_part(), form: x.form_part() })
    }

    pub fn conj(&self) -> Self {
        GenSection { vector: self.vector.conj(), form: self.form.conj() }
    }

    pub fn scale(&self, c: &C) -> Self {
        GenSection { vector: self.vector.scale(c), form: self.form.scale(c) }
    }

    pub fn add(&self, other: &Self) -> Self {
        GenSection { vector: self.vector.clone() + other.vector.clone(), form: self.form.clone() + other.form.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-C::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.vector.is_zero() && self.form.is_zero()
    }
}

/// `⟨v₁+θ₁, v₂+θ₂⟩ = ½(θ₂(v₁) + θ₁(v₂))`.
pub fn pairing<C: Scalar>(a: &GenSection<C>, b: &GenSection<C>) -> Result<Poly<C>> {
    let s = b.vector.pair(&a.form)? + a.vector.pair(&b.form)?;
    Ok(s.scale(&C::from_frac(1, 2)))
}

/// Pairing of two pointwise component vectors of length `4n`.
pub fn pairing_values<C: Scalar>(a: &[C], b: &[C]) -> C {
    let m = a.len() / 2;
    let mut acc = C::zero();
    for k in 0..m {
        acc = acc + a[k].clone() * b[m + k].clone() + a[m + k].clone() * b[k].clone();
    }
    acc * C::from_frac(1, 2)
}

/// Courant bracket
/// `[u+θ, v+η] = [u,v] + L_u η − L_v θ − ½ d(i_u η − i_v θ)`.
pub fn courant<C: Scalar>(a: &GenSection<C>, b: &GenSection<C>) -> Result<GenSection<C>> {
    let vector = a.vector.schouten(&b.vector)?;
    let inner = b.form.interior(&a.vector)? - a.form.interior(&b.vector)?;
    let form = b.form.lie_derivative(&a.vector)? - a.form.lie_derivative(&b.vector)?
        - inner.d().scale(&C::from_frac(1, 2));
    Ok(GenSection { vector, form })
}

/// Matrix of `E ↦ [x, E]` on sections for `x` in `CL²`, in the component
/// basis of [`GenSection::to_vec`].
pub fn ad_matrix<C: Scalar>(x: &Clifford<C>) -> Result<Matrix<Poly<C>>> {
    let n = x.n();
    let mut cols = Vec::with_capacity(4 * n);
    for k in 0..4 * n {
        let g = if k < 2 * n { Clifford::e(n, k) } else { Clifford::f(n, k - 2 * n) };
        let c = x.commutator(&g)?;
        cols.push(GenSection::from_clifford(&c)?.to_vec());
    }
    Ok(Matrix::from_cols(4 * n, &cols))
}

/// Coefficients in `t` of `Ad_{e^{x t}} = Σ t^k ad_x^k / k!`, stopping at the
/// first vanishing power.
pub fn adjoint_series<C: Scalar>(x: &Clifford<C>) -> Result<Vec<Matrix<Poly<C>>>> {
    let n = x.n();
    let ad = ad_matrix(x)?;
    let mut out = vec![Matrix::identity(4 * n)];
    let mut term = Matrix::identity(4 * n);
    for k in 1..=4 * n + 1 {
        term = term.try_mul(&ad)?.map(|c| c.scale(&C::from_frac(1, k as i64)));
        if term.is_zero() {
            return Ok(out);
        }
        out.push(term.clone());
    }
    Err(Error::Domain("adjoint action is not nilpotent".into()))
}

/// `Ad_{e^x}` as a single matrix (the `t = 1` value of [`adjoint_series`]).
pub fn adjoint<C: Scalar>(x: &Clifford<C>) -> Result<Matrix<Poly<C>>> {
    let series = adjoint_series(x)?;
    let mut acc = series[0].clone();
    for m in &series[1..] {
        acc = acc + m.clone();
    }
    Ok(acc)
}

/// `Ad_{e^x}(E)`.
pub fn adjoint_on_section<C: Scalar>(x: &Clifford<C>, e: &GenSection<C>) -> Result<GenSection<C>> {
    let m = adjoint(x)?;
    Ok(GenSection::from_vec(e.n(), &m.mul_vec(&e.to_vec())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRat, PolyScalar};

    type F = DiffForm<GaussRat>;
    type V = Multivector<GaussRat>;

    #[test]
    fn b_field_adjoint() {
        let n = 1;
        let b = F::dz(n, 0).wedge(&F::dzb(n, 0));
        let e = GenSection::from_vector(V::d_z(n, 0));
        let out = adjoint_on_section(&Clifford::from_form(&b), &e).unwrap();
        // Ad_{e^b}(v) = v − i_v b
        assert_eq!(out.vector, V::d_z(n, 0));
        assert_eq!(out.form, -F::dzb(n, 0));
        let zero = adjoint_on_section(&Clifford::zero(n), &e).unwrap();
        assert_eq!(zero, e);
    }

    #[test]
    fn bivector_adjoint() {
        let n = 2;
        let beta = V::d_z(n, 0).wedge(&V::d_z(n, 1));
        let e = GenSection::from_form(F::dz(n, 0));
        let out = adjoint_on_section(&Clifford::from_polyvector(&beta), &e).unwrap();
        assert_eq!(out.form, F::dz(n, 0));
        assert_eq!(out.vector, beta.sharp(&F::dz(n, 0)).unwrap());
        assert_eq!(out.vector, -V::d_z(n, 1));
    }

    #[test]
    fn courant_of_coordinate_fields() {
        let n = 1;
        let a = GenSection::new(V::slot(n, 0, PolyScalar::var(0)), F::zero(n));
        let b = GenSection::from_form(F::dz(n, 0));
        // [z∂, dz] = L_{z∂} dz − ½ d(i_{z∂} dz) = dz − ½ dz
        let c = courant(&a, &b).unwrap();
        assert_eq!(c.form, F::dz(n, 0).scale(&GaussRat::from_frac(1, 2)));
        assert_eq!(pairing(&a, &b).unwrap(), PolyScalar::var(0).scale(&GaussRat::from_frac(1, 2)));
        assert_eq!(pairing(&b, &b).unwrap(), PolyScalar::zero());
    }
}
