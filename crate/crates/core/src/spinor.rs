//! Pure spinors at points: annihilators under the spin action, type,
//! non-degeneracy, the induced structure and pullbacks to subspaces.
//!
//! Everything here is pointwise linear algebra over a finite-dimensional space
//! with a conjugation that permutes basis vectors: the ambient `T_x C^n` with
//! basis `∂_a` (conjugation swaps `∂_j` and `∂̄_j`), or a real basis of a
//! tangent subspace (conjugation fixes every basis vector).

use std::collections::BTreeMap;


use crate::coeffring::Scalar;
use crate::error::{Error, Result};
use crate::linalg::{span_rank, Matrix};
use crate::tensorcalc::exterior::{degree_of, remove_sign, slots, wedge_sign, Mask};
use crate::tensorcalc::DiffForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSpace {
    conj_perm: Vec<usize>,
}

impl PointSpace {
    /// Complexified tangent space of `C^n` in the slot basis.
    pub fn ambient(n: usize) -> Self {
        PointSpace { conj_perm: (0..2 * n).map(|a| if a < n { a + n } else { a - n }).collect() }
    }

    /// Complexification of a real space with a real basis.
    pub fn real(dim: usize) -> Self {
        PointSpace { conj_perm: (0..dim).collect() }
    }

    pub fn dim(&self) -> usize {
        self.conj_perm.len()
    }

    fn conj_mask(&self, mask: Mask) -> (Mask, i64) {
        let image: Vec<usize> = slots(mask).map(|a| self.conj_perm[a]).collect();
        let mut inversions = 0;
        for i in 0..image.len() {
            for j in (i + 1)..image.len() {
                if image[i] > image[j] {
                    inversions += 1;
                }
            }
        }
        let out = image.iter().fold(0, |m, &a| m | (1 << a));
        (out, if inversions % 2 == 0 { 1 } else { -1 })
    }

    /// Conjugate of a component vector of `(T ⊕ T*)`: vector part then
    /// covector part, each of length `dim`.
    pub fn conj_components<C: Scalar>(&self, v: &[C]) -> Vec<C> {
        let d = self.dim();
        (0..2 * d).map(|k| v[(k / d) * d + self.conj_perm[k % d]].conj()).collect()
    }
}

/// A form with constant coefficients on a [`PointSpace`].
#[derive(Clone, Debug, PartialEq)]
pub struct PointForm<C> {
    space: PointSpace,
    coeffs: BTreeMap<Mask, C>,
}

impl<C: Scalar> PointForm<C> {
    pub fn new(space: PointSpace, coeffs: BTreeMap<Mask, C>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        PointForm { space, coeffs }
    }

    /// Value of a chart form at a real point.
    pub fn from_form(psi: &DiffForm<C>, point: &[C::Real]) -> Result<Self> {
        Ok(Self::new(PointSpace::ambient(psi.n()), psi.eval_at(point)?))
    }

    pub fn space(&self) -> &PointSpace {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<Mask, C> {
        &self.coeffs
    }

    pub fn coeff(&self, mask: Mask) -> C {
        self.coeffs.get(&mask).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, mask: Mask, c: C) {
        let v = self.coeff(mask) + c;
        if v.is_zero() {
            self.coeffs.remove(&mask);
        } else {
            self.coeffs.insert(mask, v);
        }
    }

    /// Lowest degree with a nonzero component.
    pub fn lowest_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|&m| degree_of(m)).min()
    }

    /// Component of degree `k`.
    pub fn part(&self, k: usize) -> Self {
        let coeffs = self.coeffs.iter().filter(|(&m, _)| degree_of(m) == k).map(|(&m, c)| (m, c.clone())).collect();
        PointForm { space: self.space.clone(), coeffs }
    }

    pub fn conj(&self) -> Self {
        let mut out = PointForm { space: self.space.clone(), coeffs: BTreeMap::new() };
        for (&m, c) in &self.coeffs {
            let (m2, s) = self.space.conj_mask(m);
            out.add_term(m2, c.conj() * C::from_i64(s));
        }
        out
    }

    /// Spin action of `v + θ` given as components of length `2·dim`:
    /// `i_v φ + θ ∧ φ`.
    pub fn act(&self, e: &[C]) -> Self {
        let d = self.space.dim();
        let mut out = PointForm { space: self.space.clone(), coeffs: BTreeMap::new() };
        for (&m, c) in &self.coeffs {
            for a in 0..d {
                let va = &e[a];
                if !va.is_zero() {
                    if let Some(s) = remove_sign(m, a) {
                        out.add_term(m & !(1 << a), va.clone() * c.clone() * C::from_i64(s));
                    }
                }
                let ta = &e[d + a];
                if !ta.is_zero() {
                    if let Some(s) = wedge_sign(1 << a, m) {
                        out.add_term(m | (1 << a), ta.clone() * c.clone() * C::from_i64(s));
                    }
                }
            }
        }
        out
    }

    /// `i_u` for a vector with components `u` on the basis of the space.
    pub fn interior(&self, u: &[C]) -> Self {
        let mut e = u.to_vec();
        e.extend(std::iter::repeat_n(C::zero(), self.space.dim()));
        self.act(&e)
    }

    /// Annihilator `{E : E·φ = 0}` by an exact kernel solve.
    pub fn kernel(&self) -> Result<Vec<Vec<C>>> {
        if self.is_zero() {
            return Err(Error::Domain("spinor vanishes at x".into()));
        }
        let d = self.space.dim();
        let rows = 1usize << d;
        let cols: Vec<Vec<C>> = (0..2 * d)
            .map(|k| {
                let mut e = vec![C::zero(); 2 * d];
                e[k] = C::one();
                let img = self.act(&e);
                (0..rows).map(|m| img.coeff(m as Mask)).collect()
            })
            .collect();
        let k = Matrix::from_cols(rows, &cols).kernel();
        if k.len() != d {
            return Err(Error::Domain(format!("not a pure spinor at x: annihilator has dimension {}", k.len())));
        }
        Ok(k)
    }

    /// `ker φ ⊕ conj(ker φ)` is everything; false when `φ` is not pure.
    pub fn is_nondegenerate(&self) -> Result<bool> {
        let k = match self.kernel() {
            Ok(k) => k,
            Err(Error::Domain(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let mut all = k.clone();
        all.extend(k.iter().map(|v| self.space.conj_components(v)));
        Ok(span_rank(&all) == 2 * self.space.dim())
    }

    /// Type: the lowest nonzero degree.
    pub fn spinor_type(&self) -> Result<usize> {
        self.lowest_degree().ok_or_else(|| Error::Domain("spinor vanishes at x".into()))
    }

    /// Structure with `−i` eigenspace `ker φ` and `+i` eigenspace its conjugate.
    pub fn induced_j(&self) -> Result<Matrix<C>> {
        if !self.is_nondegenerate()? {
            return Err(Error::Domain("spinor is degenerate at x".into()));
        }
        structure_from_eigenspace(&self.space, &self.kernel()?)
    }

    /// Restriction to the span of `basis` (vectors of this space); the result
    /// lives on the real space with that basis.
    pub fn pullback(&self, basis: &[Vec<C>]) -> Self {
        let p = basis.len();
        let mut out = PointForm { space: PointSpace::real(p), coeffs: BTreeMap::new() };
        for mask in 0..(1u32 << p) {
            // φ(u_{k1}, …, u_{kq}) = i_{u_kq} ⋯ i_{u_k1} φ
            let mut acc = self.clone();
            for k in slots(mask) {
                acc = acc.interior(&basis[k]);
                if acc.is_zero() {
                    break;
                }
            }
            let c = acc.coeff(0);
            if !c.is_zero() {
                out.add_term(mask, c);
            }
        }
        out
    }
}

/// The endomorphism of `(T ⊕ T*)` that is `−i` on `k` and `+i` on its
/// conjugate.
pub fn structure_from_eigenspace<C: Scalar>(space: &PointSpace, k: &[Vec<C>]) -> Result<Matrix<C>> {
    let d = space.dim();
    if k.len() != d {
        return Err(Error::DimensionMismatch { expected: d, found: k.len() });
    }
    let mut cols = k.to_vec();
    cols.extend(k.iter().map(|v| space.conj_components(v)));
    let b = Matrix::from_cols(2 * d, &cols);
    let i = C::imag_unit();
    let diag = Matrix::from_fn(2 * d, 2 * d, |r, c| {
        if r != c {
            C::zero()
        } else if r < d {
            -i.clone()
        } else {
            i.clone()
        }
    });
    let binv = b.inverse().map_err(|_| Error::Domain("eigenspace meets its conjugate".into()))?;
    b.try_mul(&diag)?.try_mul(&binv)
}

/// `½ dim − ½ rank` of the covector-to-vector block of a pointwise structure
/// on a space of dimension `d`.
pub fn type_of_structure<C: Scalar>(j: &Matrix<C>) -> Result<usize> {
    let d = j.rows() / 2;
    let r = j.block(0, d, d, d).rank();
    if !r.is_multiple_of(2) || !d.is_multiple_of(2) {
        return Err(Error::Domain("odd rank in structure".into()));
    }
    Ok((d - r) / 2)
}

pub fn kernel_at_point<C: Scalar>(psi: &DiffForm<C>, point: &[C::Real]) -> Result<Vec<Vec<C>>> {
    PointForm::from_form(psi, point)?.kernel()
}

pub fn is_nondegenerate<C: Scalar>(psi: &DiffForm<C>, points: &[Vec<C::Real>]) -> Result<bool> {
    for p in points {
        if !PointForm::from_form(psi, p)?.is_nondegenerate()? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn type_of_spinor_at_point<C: Scalar>(psi: &DiffForm<C>, point: &[C::Real]) -> Result<usize> {
    PointForm::from_form(psi, point)?.spinor_type()
}

/// `J_ψ` at each sample point.
pub fn induced_jpsi<C: Scalar>(psi: &DiffForm<C>, points: &[Vec<C::Real>]) -> Result<Vec<Matrix<C>>> {
    points.iter().map(|p| PointForm::from_form(psi, p)?.induced_j()).collect()
}

/// Value at `t` of a form given by its coefficients in `t`.
pub fn eval_t_series<C: Scalar>(coeffs: &[DiffForm<C>], t: &C::Real) -> DiffForm<C> {
    let mut acc = DiffForm::zero(coeffs[0].n());
    let mut power = C::one();
    for c in coeffs {
        acc = acc + c.scale(&power);
        power = power * C::from_real(t.clone());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::Clifford;
    use crate::gcs::GCStructure;
    use crate::tensorcalc::Multivector;
    use crate::{GaussRat, Rational};
    use num_traits::{One, Zero};

    type F = DiffForm<GaussRat>;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn eiw(n: usize) -> F {
        F::standard_kahler(n).scale(&GaussRat::imag_unit()).wedge_exp().unwrap()
    }

    #[test]
    fn kernels() {
        assert_eq!(kernel_at_point(&eiw(1), &[q(0), q(0)]).unwrap().len(), 2);
        assert_eq!(kernel_at_point(&F::dz(1, 0), &[q(0), q(0)]).unwrap().len(), 2);
        let s = F::dz(2, 0) + F::dz(2, 1);
        assert_eq!(kernel_at_point(&s, &[q(1), q(0), q(2), q(0)]).unwrap().len(), 4);
        assert!(kernel_at_point(&F::zero(1), &[q(0), q(0)]).is_err());
    }

    #[test]
    fn nondegeneracy_and_type() {
        let pts = vec![vec![q(0); 4], vec![q(1), q(2), q(0), q(3)]];
        assert!(is_nondegenerate(&eiw(2), &pts).unwrap());
        assert!(is_nondegenerate(&F::canonical(2), &pts).unwrap());
        let bad = F::dz(1, 0).wedge(&F::dzb(1, 0));
        assert!(!is_nondegenerate(&bad, &[vec![q(0), q(0)]]).unwrap());
        assert_eq!(type_of_spinor_at_point(&eiw(2), &pts[1]).unwrap(), 0);
        assert_eq!(type_of_spinor_at_point(&F::canonical(2), &pts[1]).unwrap(), 2);
    }

    #[test]
    fn beta_deformed_spinor_has_type_zero() {
        let n = 2;
        let beta = Multivector::d_z(n, 0).wedge(&Multivector::d_z(n, 1));
        let a = Clifford::from_polyvector(&(beta.clone() + beta.conj()));
        let psi = a.scale(&GaussRat::from_frac(1, 2)).exp_act(&F::canonical(n)).unwrap();
        let p = vec![q(0); 4];
        assert_eq!(type_of_spinor_at_point(&psi, &p).unwrap(), 0);
        assert!(is_nondegenerate(&psi, &[p]).unwrap());
    }

    #[test]
    fn induced_structures() {
        let p = vec![q(1), q(-1), q(2), q(0)];
        let zero = Rational::from_integer(0.into());
        let jw = GCStructure::make_jomega(&F::standard_kahler(2)).unwrap();
        assert_eq!(induced_jpsi(&eiw(2), std::slice::from_ref(&p)).unwrap()[0], jw.matrix_at(&zero, &p).unwrap());
        let jj = GCStructure::<GaussRat>::make_jj(2);
        assert_eq!(induced_jpsi(&F::canonical(2), std::slice::from_ref(&p)).unwrap()[0], jj.matrix_at(&zero, &p).unwrap());
        let b20 = F::dz(2, 0).wedge(&F::dz(2, 1));
        let b = b20.clone() + b20.conj();
        let ebpsi = Clifford::from_form(&b).exp_act(&eiw(2)).unwrap();
        let jb = jw.b_field_transform(&b).unwrap();
        assert_eq!(induced_jpsi(&ebpsi, std::slice::from_ref(&p)).unwrap()[0], jb.matrix_at(&zero, &p).unwrap());
    }

    #[test]
    fn pullback_to_coordinate_line() {
        // M = {z2 = 0} in C², real basis ∂x1 = ∂1 + ∂̄1, ∂y1 = i(∂1 − ∂̄1)
        let one = GaussRat::one();
        let i = GaussRat::imag_unit();
        let zero = GaussRat::zero();
        let u1 = vec![one.clone(), zero.clone(), one.clone(), zero.clone()];
        let u2 = vec![i.clone(), zero.clone(), -i.clone(), zero.clone()];
        let phi = PointForm::from_form(&eiw(2), &vec![q(0); 4]).unwrap();
        let pb = phi.pullback(&[u1, u2]);
        // i*ω = dx ∧ dy, so e^{i·i*ω} = 1 + i dx∧dy
        assert_eq!(pb.coeff(0), one);
        assert_eq!(pb.coeff(0b11), i);
        assert!(pb.is_nondegenerate().unwrap());
    }

}
