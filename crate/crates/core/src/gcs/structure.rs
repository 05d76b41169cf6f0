//! Generalized complex structures as matrices on `(T ⊕ T*)^C`, polynomial in
//! the chart coordinates and in the deformation parameter `t`.
//!
//! The component basis is that of [`GenSection::to_vec`]: `2n` vector slots
//! `∂_a` followed by `2n` covector slots `dx_a`.

use num_traits::{One, Zero};

use crate::clifford::section::{adjoint_series, courant, pairing_values};
use crate::clifford::{Clifford, GenSection};
use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{in_span, Matrix};
use crate::tensorcalc::{DiffForm, Multivector};

pub type TMatrix<C> = Vec<Matrix<Poly<C>>>;

/// Product of matrices that are polynomial in `t`.
pub fn tmat_mul<C: Scalar>(a: &[Matrix<Poly<C>>], b: &[Matrix<Poly<C>>]) -> Result<TMatrix<C>> {
    let dim = a[0].rows();
    let mut out = vec![Matrix::zeros(dim, b[0].cols()); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.try_mul(y)?;
        }
    }
    Ok(trim_t(out))
}

fn trim_t<C: Scalar>(mut m: TMatrix<C>) -> TMatrix<C> {
    while m.len() > 1 && m.last().is_some_and(|x| x.is_zero()) {
        m.pop();
    }
    m
}

pub fn t_power<C: Scalar>(t: &C::Real, k: usize) -> C {
    let mut acc = C::one();
    for _ in 0..k {
        acc = acc * C::from_real(t.clone());
    }
    acc
}

fn eval_t<C: Scalar>(m: &[Matrix<Poly<C>>], t: &C::Real) -> Matrix<Poly<C>> {
    let mut acc = m[0].clone();
    for (k, x) in m.iter().enumerate().skip(1) {
        acc = acc + x.map(|c| c.scale(&t_power::<C>(t, k)));
    }
    acc
}

/// Pairing matrix `Q` with `⟨E, F⟩ = Eᵀ Q F`.
pub fn pairing_matrix<C: Scalar>(n: usize) -> Matrix<Poly<C>> {
    let half = Poly::constant(C::from_frac(1, 2));
    Matrix::from_fn(4 * n, 4 * n, |r, c| {
        if r + 2 * n == c || c + 2 * n == r {
            half.clone()
        } else {
            Poly::zero()
        }
    })
}

/// Conjugation on component vectors: swaps holomorphic and antiholomorphic
/// slots in both halves and conjugates entries.
pub fn conj_components<C: Scalar>(v: &[C]) -> Vec<C> {
    let n = v.len() / 4;
    (0..4 * n)
        .map(|k| {
            let (half, s) = (k / (2 * n), k % (2 * n));
            let t = if s < n { s + n } else { s - n };
            v[half * 2 * n + t].conj()
        })
        .collect()
}

#[derive(Clone, Debug)]
pub struct GCStructure<C: Scalar> {
    n: usize,
    /// `J(t) = Σ_k t^k matrix[k]`.
    matrix: TMatrix<C>,
    /// Spanning sections of the `−i` eigenbundle, each as coefficients in `t`.
    frame: Option<Vec<Vec<GenSection<C>>>>,
}

impl<C: Scalar> GCStructure<C> {
    pub fn from_matrix(n: usize, matrix: Matrix<Poly<C>>) -> Self {
        GCStructure { n, matrix: vec![matrix], frame: None }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_coefficients(&self) -> &[Matrix<Poly<C>>] {
        &self.matrix
    }

    pub fn depends_on_t(&self) -> bool {
        self.matrix.len() > 1
    }

    /// `J_J = [[J, 0], [0, −J*]]` for the standard complex structure.
    pub fn make_jj(n: usize) -> Self {
        let i = C::imag_unit();
        let m = Matrix::from_fn(4 * n, 4 * n, |r, c| {
            if r != c {
                return Poly::zero();
            }
            let hol = r % (2 * n) < n;
            let vector = r < 2 * n;
            // J∂ = i∂, J∂̄ = −i∂̄; −J* dz = −i dz, −J* dzb = i dzb
            let v = if hol == vector { i.clone() } else { -i.clone() };
            Poly::constant(v)
        });
        let mut frame = Vec::new();
        for j in 0..n {
            frame.push(vec![GenSection::from_vector(Multivector::d_zb(n, j))]);
        }
        for j in 0..n {
            frame.push(vec![GenSection::from_form(DiffForm::dz(n, j))]);
        }
        GCStructure { n, matrix: vec![m], frame: Some(frame) }
    }

    /// `J_ω = [[0, W⁻¹], [−W, 0]]` with `W(v) = i_v ω`; its `−i` eigenbundle is
    /// `{X − i·i_X ω}`, the annihilator of `e^{iω}`.
    pub fn make_jomega(omega: &DiffForm<C>) -> Result<Self> {
        let n = omega.n();
        if !omega.is_constant() || !omega.is_homogeneous(2) {
            return Err(Error::Domain("ω must be a constant 2-form".into()));
        }
        let w = Matrix::from_fn(2 * n, 2 * n, |r, c| omega.interior_slot(c).coeff(1 << r).constant_term());
        let winv = w.inverse().map_err(|_| Error::Singular("ω is degenerate".into()))?;
        let mut m = Matrix::zeros(4 * n, 4 * n);
        m.set_block(0, 2 * n, &winv.map(|c| Poly::constant(c.clone())));
        m.set_block(2 * n, 0, &w.map(|c| Poly::constant(-c.clone())));
        let i = C::imag_unit();
        let frame = (0..2 * n)
            .map(|a| {
                let form = omega.interior_slot(a).scale(&-i.clone());
                vec![GenSection::new(Multivector::slot(n, a, Poly::one()), form)]
            })
            .collect();
        Ok(GCStructure { n, matrix: vec![m], frame: Some(frame) })
    }

    /// `J_βt = Ad_{e^{at}} J_J Ad_{e^{−at}}` with `a = β + β̄`; requires
    /// `[β, β] = 0`.
    pub fn make_j_beta_t(beta: &Multivector<C>) -> Result<Self> {
        if !beta.is_poisson()? {
            return Err(Error::Domain("β is not Poisson".into()));
        }
        Self::make_j_beta_t_unchecked(beta)
    }

    /// As [`GCStructure::make_j_beta_t`] without the Poisson check.
    pub fn make_j_beta_t_unchecked(beta: &Multivector<C>) -> Result<Self> {
        let a = beta.clone() + beta.conj();
        Self::make_jj(beta.n()).conjugate_t(&Clifford::from_polyvector(&a))
    }

    /// `Ad_{e^{xt}} J Ad_{e^{−xt}}`, with the frame transported by `Ad_{e^{xt}}`.
    pub fn conjugate_t(&self, x: &Clifford<C>) -> Result<Self> {
        let fwd = adjoint_series(x)?;
        let back = adjoint_series(&-x.clone())?;
        let matrix = tmat_mul(&tmat_mul(&fwd, &self.matrix)?, &back)?;
        let frame = match &self.frame {
            None => None,
            Some(fr) => Some(
                fr.iter()
                    .map(|sec| transport(&fwd, sec, self.n))
                    .collect::<Result<Vec<_>>>()?,
            ),
        };
        Ok(GCStructure { n: self.n, matrix, frame })
    }

    /// `Ad_{e^b} J Ad_{e^{−b}}` for a closed 2-form `b`.
    pub fn b_field_transform(&self, b: &DiffForm<C>) -> Result<Self> {
        if !b.is_homogeneous(2) {
            return Err(Error::Domain("b must be a 2-form".into()));
        }
        if !b.is_closed() {
            return Err(Error::Domain("b is not closed".into()));
        }
        let conj = self.conjugate_t(&Clifford::from_form(b))?;
        // collapse the t-series at t = 1
        let one = C::Real::one();
        Ok(GCStructure {
            n: self.n,
            matrix: vec![eval_t(&conj.matrix, &one)],
            frame: conj.frame.map(|fr| {
                fr.into_iter()
                    .map(|sec| vec![sum_sections(&sec, &one, self.n)])
                    .collect()
            }),
        })
    }

    /// Structure at a fixed value of `t`.
    pub fn at_t(&self, t: &C::Real) -> Self {
        GCStructure {
            n: self.n,
            matrix: vec![eval_t(&self.matrix, t)],
            frame: self.frame.as_ref().map(|fr| {
                fr.iter().map(|sec| vec![sum_sections(sec, t, self.n)]).collect()
            }),
        }
    }

    pub fn matrix_at_t(&self, t: &C::Real) -> Matrix<Poly<C>> {
        eval_t(&self.matrix, t)
    }

    pub fn matrix_at(&self, t: &C::Real, point: &[C::Real]) -> Result<Matrix<C>> {
        self.matrix_at_t(t).try_map(|c| c.eval_at(point))
    }

    /// Symbolic frame at a fixed `t`, if known.
    pub fn frame_at_t(&self, t: &C::Real) -> Option<Vec<GenSection<C>>> {
        self.frame.as_ref().map(|fr| fr.iter().map(|sec| sum_sections(sec, t, self.n)).collect())
    }

    /// Product `self · other` as structures' matrices (polynomial in `t`).
    pub fn compose(&self, other: &Self) -> Result<TMatrix<C>> {
        tmat_mul(&self.matrix, &other.matrix)
    }

    /// `J² = −I` identically in the coordinates and `t`.
    pub fn squares_to_minus_one(&self) -> Result<bool> {
        let sq = tmat_mul(&self.matrix, &self.matrix)?;
        let minus = Matrix::identity(4 * self.n).scale(&-Poly::one());
        Ok(sq.len() == 1 && sq[0] == minus)
    }

    /// `Jᵀ Q J = Q` identically.
    pub fn is_orthogonal(&self) -> Result<bool> {
        let q = pairing_matrix::<C>(self.n);
        let jt: Vec<_> = self.matrix.iter().map(|m| m.transpose()).collect();
        let p = tmat_mul(&tmat_mul(&jt, std::slice::from_ref(&q))?, &self.matrix)?;
        Ok(p.len() == 1 && p[0] == q)
    }

    /// Basis of the `−i` eigenspace at a point, by exact kernel of `J + iI`.
    pub fn eigenframe_at(&self, t: &C::Real, point: &[C::Real]) -> Result<Vec<Vec<C>>> {
        let j = self.matrix_at(t, point)?;
        let shifted = j + Matrix::identity(4 * self.n).scale(&C::imag_unit());
        let k = shifted.kernel();
        if k.len() != 2 * self.n {
            return Err(Error::Singular(format!(
                "eigenspace has dimension {}, expected {}",
                k.len(),
                2 * self.n
            )));
        }
        Ok(k)
    }

    /// `dim L = 2n` and `L ∩ L̄ = 0` at the point.
    pub fn is_almost_complex_at(&self, t: &C::Real, point: &[C::Real]) -> Result<bool> {
        let l = match self.eigenframe_at(t, point) {
            Ok(l) => l,
            Err(Error::Singular(_)) => return Ok(false),
            Err(e) => return Err(e),
        };
        let mut all = l.clone();
        all.extend(l.iter().map(|v| conj_components(v)));
        Ok(crate::linalg::span_rank(&all) == 4 * self.n)
    }

    /// `n − ½ rank` of the upper-right (covector → vector) block at a point.
    pub fn type_at(&self, t: &C::Real, point: &[C::Real]) -> Result<usize> {
        let m = self.matrix_at(t, point)?;
        let block = m.block(0, 2 * self.n, 2 * self.n, 2 * self.n);
        let r = block.rank();
        if r % 2 != 0 {
            return Err(Error::Domain("Poisson block has odd rank".into()));
        }
        Ok(self.n - r / 2)
    }

    /// Courant involutivity of the symbolic frame at `t`, tested by exact
    /// span membership at each point.
    pub fn integrability_check(&self, t: &C::Real, points: &[Vec<C::Real>]) -> Result<IntegrabilityReport> {
        let frame = self
            .frame_at_t(t)
            .ok_or_else(|| Error::Domain("no symbolic frame for this structure".into()))?;
        let constant = frame.iter().all(|s| s.vector.is_constant() && s.form.is_constant());
        let mut failures = Vec::new();
        let mut brackets = Vec::new();
        for i in 0..frame.len() {
            for j in (i + 1)..frame.len() {
                brackets.push(((i, j), courant(&frame[i], &frame[j])?));
            }
        }
        let origin = vec![C::Real::zero(); 2 * self.n];
        let pts: Vec<&[C::Real]> = if constant {
            vec![origin.as_slice()]
        } else {
            points.iter().map(|p| p.as_slice()).collect()
        };
        for (k, p) in pts.iter().enumerate() {
            let basis: Vec<Vec<C>> = frame.iter().map(|s| s.eval_at(p)).collect::<Result<_>>()?;
            for ((i, j), br) in &brackets {
                let v = br.eval_at(p)?;
                if !in_span(&basis, &v) {
                    failures.push(((*i, *j), k));
                }
            }
        }
        Ok(IntegrabilityReport { integrable: failures.is_empty(), symbolic: constant, points_checked: pts.len(), failures })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrabilityReport {
    pub integrable: bool,
    /// True when every frame coefficient is constant, so one check is exact.
    pub symbolic: bool,
    pub points_checked: usize,
    /// Failing frame pairs with the index of the sample point.
    pub failures: Vec<((usize, usize), usize)>,
}

fn transport<C: Scalar>(ad: &[Matrix<Poly<C>>], sec: &[GenSection<C>], n: usize) -> Result<Vec<GenSection<C>>> {
    let mut out = vec![GenSection::zero(n); ad.len() + sec.len() - 1];
    for (i, m) in ad.iter().enumerate() {
        for (j, s) in sec.iter().enumerate() {
            let v = GenSection::from_vec(n, &m.mul_vec(&s.to_vec()));
            out[i + j] = out[i + j].add(&v);
        }
    }
    while out.len() > 1 && out.last().is_some_and(|s| s.is_zero()) {
        out.pop();
    }
    Ok(out)
}

fn sum_sections<C: Scalar>(sec: &[GenSection<C>], t: &C::Real, n: usize) -> GenSection<C> {
    let mut acc = GenSection::zero(n);
    for (k, s) in sec.iter().enumerate() {
        acc = acc.add(&s.scale(&t_power::<C>(t, k)));
    }
    acc
}

/// `⟨J E, J F⟩ = ⟨E, F⟩` at a point, for pointwise matrices.
pub fn is_orthogonal_values<C: Scalar>(j: &Matrix<C>) -> bool {
    let dim = j.rows();
    (0..dim).all(|a| {
        (0..dim).all(|b| {
            let ea: Vec<C> = (0..dim).map(|k| if k == a { C::one() } else { C::zero() }).collect();
            let eb: Vec<C> = (0..dim).map(|k| if k == b { C::one() } else { C::zero() }).collect();
            pairing_values(&j.mul_vec(&ea), &j.mul_vec(&eb)) == pairing_values(&ea, &eb)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRat, Rational};

    type G = GCStructure<GaussRat>;
    type F = DiffForm<GaussRat>;
    type V = Multivector<GaussRat>;

    fn q(a: i64, b: i64) -> Rational {
        Rational::new(a.into(), b.into())
    }

    #[test]
    fn constructors_are_gcs() {
        for n in 1..=3 {
            let jj = G::make_jj(n);
            assert!(jj.squares_to_minus_one().unwrap());
            assert!(jj.is_orthogonal().unwrap());
            let jw = G::make_jomega(&F::standard_kahler(n)).unwrap();
            assert!(jw.squares_to_minus_one().unwrap());
            assert!(jw.is_orthogonal().unwrap());
        }
        assert!(G::make_jomega(&F::dz(2, 0).wedge(&F::dzb(2, 0))).is_err());
    }

    #[test]
    fn beta_t_block_form() {
        let n = 2;
        let beta = V::d_z(n, 0).wedge(&V::d_z(n, 1));
        let j = G::make_j_beta_t(&beta).unwrap();
        assert!(j.squares_to_minus_one().unwrap());
        assert!(j.is_orthogonal().unwrap());
        let origin = vec![q(0, 1); 4];
        assert_eq!(j.type_at(&q(1, 2), &origin).unwrap(), 0);
        assert_eq!(j.type_at(&q(0, 1), &origin).unwrap(), 2);
        assert!(j.integrability_check(&q(1, 2), std::slice::from_ref(&origin)).unwrap().integrable);
        let zero = G::make_j_beta_t(&V::zero(n)).unwrap();
        assert_eq!(zero.t_coefficients(), G::make_jj(n).t_coefficients());
    }

    #[test]
    fn eigenframe_matches_frame() {
        let n = 2;
        let jw = G::make_jomega(&F::standard_kahler(n)).unwrap();
        let p = vec![q(1, 2), q(0, 1), q(3, 1), q(-1, 1)];
        let k = jw.eigenframe_at(&q(0, 1), &p).unwrap();
        for s in jw.frame_at_t(&q(0, 1)).unwrap() {
            assert!(in_span(&k, &s.eval_at(&p).unwrap()));
        }
        assert!(jw.is_almost_complex_at(&q(0, 1), &p).unwrap());
    }

    #[test]
    fn b_field_cases() {
        let n = 2;
        let jj = G::make_jj(n);
        let real11 = F::dz(n, 0).wedge(&F::dzb(n, 0)).scale(&GaussRat::imag_unit());
        assert_eq!(jj.b_field_transform(&real11).unwrap().t_coefficients(), jj.t_coefficients());
        let b20 = F::dz(n, 0).wedge(&F::dz(n, 1));
        let b = b20.clone() + b20.conj();
        let jb = jj.b_field_transform(&b).unwrap();
        let m = &jb.t_coefficients()[0];
        assert!(m.block(0, 2 * n, 2 * n, 2 * n).is_zero());
        assert!(!m.block(2 * n, 0, 2 * n, 2 * n).is_zero());
        assert!(jb.squares_to_minus_one().unwrap());
        let not_closed = F::slot(n, 0, crate::PolyScalar::var(1));
        assert!(jj.b_field_transform(&not_closed.wedge(&F::dzb(n, 0))).is_err());
    }
}
