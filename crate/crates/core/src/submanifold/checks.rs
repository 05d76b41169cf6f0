//! Pointwise tests relating a structure on `C^n` to a submanifold: conormal
//! invariance, the J-submanifold condition, the induced structure and the
//! γ-isomorphism for generalized Kähler pairs.

use super::model::SubmanifoldModel;
use crate::coeffring::Scalar;
use crate::error::{Error, Result};
use crate::gcs::GCStructure;
use crate::linalg::{dot, in_span, intersect, span_rank, Matrix};
use crate::spinor::{structure_from_eigenspace, PointSpace};

fn unit<C: Scalar>(len: usize, k: usize) -> Vec<C> {
    (0..len).map(|i| if i == k { C::one() } else { C::zero() }).collect()
}

fn covector_section<C: Scalar>(theta: &[C]) -> Vec<C> {
    let mut v = vec![C::zero(); theta.len()];
    v.extend(theta.iter().cloned());
    v
}

/// Pointwise data of `M` at `x`: conormal, complex tangent and real tangent bases.
struct Frame<C> {
    n: usize,
    conormal: Vec<Vec<C>>,
    tangent: Vec<Vec<C>>,
    real: Vec<Vec<C>>,
}

impl<C: Scalar> Frame<C> {
    fn new(m: &SubmanifoldModel<C>, x: &[C::Real]) -> Result<Self> {
        Ok(Frame { n: m.n(), conormal: m.conormal_at(x)?, tangent: m.tangent_at(x)?, real: m.real_tangent_basis(x)? })
    }

    /// Spanning set of `π⁻¹(T_x M)^C = (T_x M)^C ⊕ T*`.
    fn preimage(&self) -> Vec<Vec<C>> {
        let dim = 2 * self.n;
        let mut out: Vec<Vec<C>> = self
            .tangent
            .iter()
            .map(|u| {
                let mut v = u.clone();
                v.extend(std::iter::repeat_n(C::zero(), dim));
                v
            })
            .collect();
        out.extend((0..dim).map(|a| covector_section(&unit(dim, a))));
        out
    }

    fn conormal_sections(&self) -> Vec<Vec<C>> {
        self.conormal.iter().map(|t| covector_section(t)).collect()
    }

    /// `q(v + θ) = (coordinates of v in the real basis, θ restricted)`.
    fn q(&self, e: &[C]) -> Result<Vec<C>> {
        let dim = 2 * self.n;
        let r = Matrix::from_cols(dim, &self.real);
        let coords = r
            .solve(&e[..dim])
            .ok_or_else(|| Error::Domain("vector part is not tangent to M".into()))?;
        let mut out = coords;
        out.extend(self.real.iter().map(|u| dot(&e[dim..], u)));
        Ok(out)
    }

    fn real_dim(&self) -> usize {
        self.real.len()
    }
}

/// `J N*_x ⊆ N*_x` for a pointwise structure matrix.
pub fn conormal_invariant_at<C: Scalar>(j: &Matrix<C>, conormal: &[Vec<C>]) -> bool {
    let dim = j.rows() / 2;
    let sections: Vec<Vec<C>> = conormal.iter().map(|t| covector_section(t)).collect();
    sections.iter().all(|s| {
        let img = j.mul_vec(s);
        img[..dim].iter().all(|c| c.is_zero()) && in_span(&sections, &img)
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampleReport {
    pub holds: bool,
    pub per_sample: Vec<bool>,
}

impl SampleReport {
    fn from_flags(per_sample: Vec<bool>) -> Self {
        SampleReport { holds: per_sample.iter().all(|&b| b), per_sample }
    }
}

/// Conormal invariance of `J` at `t` at every stored sample of `M`.
pub fn is_conormal_invariant<C: Scalar>(j: &GCStructure<C>, t: &C::Real, m: &SubmanifoldModel<C>) -> Result<SampleReport> {
    let flags = m
        .points()
        .iter()
        .map(|x| Ok(conormal_invariant_at(&j.matrix_at(t, x)?, &m.conormal_at(x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(SampleReport::from_flags(flags))
}

/// Dimensions behind the J-submanifold test at one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSubmanifoldDiag {
    pub dim_l_m: usize,
    pub dim_l_conormal: usize,
    pub dim_q: usize,
    pub dim_q_cap_conj: usize,
    pub is_j_submanifold: bool,
    /// `dim L(N*) + dim q(L(M)) = dim L(M)`.
    pub exact: bool,
}

fn eigenspace<C: Scalar>(j: &Matrix<C>) -> Result<Vec<Vec<C>>> {
    let dim = j.rows();
    let k = (j.clone() + Matrix::identity(dim).scale(&C::imag_unit())).kernel();
    if k.len() != dim / 2 {
        return Err(Error::Singular("−i eigenspace has the wrong dimension".into()));
    }
    Ok(k)
}

fn j_submanifold_data<C: Scalar>(
    j: &Matrix<C>,
    frame: &Frame<C>,
) -> Result<(JSubmanifoldDiag, Vec<Vec<C>>)> {
    let l = eigenspace(j)?;
    let l_m = intersect(&l, &frame.preimage());
    let l_n = intersect(&l, &frame.conormal_sections());
    let q_img: Vec<Vec<C>> = l_m.iter().map(|e| frame.q(e)).collect::<Result<_>>()?;
    let q_basis = crate::linalg::independent_subset(&q_img);
    let space = PointSpace::real(frame.real_dim());
    let q_bar: Vec<Vec<C>> = q_basis.iter().map(|v| space.conj_components(v)).collect();
    let cap = intersect(&q_basis, &q_bar).len();
    let d = frame.real_dim();
    let diag = JSubmanifoldDiag {
        dim_l_m: l_m.len(),
        dim_l_conormal: l_n.len(),
        dim_q: q_basis.len(),
        dim_q_cap_conj: cap,
        is_j_submanifold: cap == 0 && q_basis.len() == d,
        exact: l_n.len() + q_basis.len() == l_m.len(),
    };
    Ok((diag, q_basis))
}

pub fn j_submanifold_at<C: Scalar>(j: &Matrix<C>, m: &SubmanifoldModel<C>, x: &[C::Real]) -> Result<JSubmanifoldDiag> {
    Ok(j_submanifold_data(j, &Frame::new(m, x)?)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JSubmanifoldReport {
    pub holds: bool,
    /// False when `dim L(M)` changes between samples.
    pub constant_rank: bool,
    pub per_sample: Vec<JSubmanifoldDiag>,
}

pub fn is_j_submanifold<C: Scalar>(j: &GCStructure<C>, t: &C::Real, m: &SubmanifoldModel<C>) -> Result<JSubmanifoldReport> {
    let per_sample = m
        .points()
        .iter()
        .map(|x| j_submanifold_at(&j.matrix_at(t, x)?, m, x))
        .collect::<Result<Vec<_>>>()?;
    let constant_rank = per_sample.windows(2).all(|w| w[0].dim_l_m == w[1].dim_l_m);
    let holds = constant_rank && per_sample.iter().all(|d| d.is_j_submanifold);
    Ok(JSubmanifoldReport { holds, constant_rank, per_sample })
}

/// The induced structure on `T_x M ⊕ T*_x M` in the real tangent basis, with
/// `−i` eigenspace `q(L(M))`.
pub fn induced_structure_at<C: Scalar>(j: &Matrix<C>, m: &SubmanifoldModel<C>, x: &[C::Real]) -> Result<Matrix<C>> {
    let frame = Frame::new(m, x)?;
    let (diag, q) = j_submanifold_data(j, &frame)?;
    if !diag.is_j_submanifold {
        return Err(Error::Domain("not a J-submanifold at x".into()));
    }
    structure_from_eigenspace(&PointSpace::real(frame.real_dim()), &q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GammaReport {
    pub dim_plus: usize,
    pub dim_minus: usize,
    pub bijective: bool,
    pub j0_invariant: bool,
    pub j1_invariant: bool,
}

impl GammaReport {
    pub fn holds(&self) -> bool {
        self.bijective && self.j0_invariant && self.j1_invariant
    }
}

/// `C±(M) = C± ∩ π⁻¹(T M)`, their images under `q`, and invariance under both
/// structures, at one point.
pub fn gamma_iso_check<C: Scalar>(
    j0: &Matrix<C>,
    j1: &Matrix<C>,
    m: &SubmanifoldModel<C>,
    x: &[C::Real],
) -> Result<GammaReport> {
    let frame = Frame::new(m, x)?;
    let dim = j0.rows();
    let g = j0.try_mul(j1)?;
    let pre = frame.preimage();
    let plus = intersect(&(g.clone() - Matrix::identity(dim)).kernel(), &pre);
    let minus = intersect(&(g + Matrix::identity(dim)).kernel(), &pre);
    let d = frame.real_dim();
    let mut images: Vec<Vec<C>> = Vec::new();
    for e in plus.iter().chain(&minus) {
        images.push(frame.q(e)?);
    }
    let bijective = plus.len() == d && minus.len() == d && span_rank(&images) == 2 * d;
    let preserves = |j: &Matrix<C>| {
        [&plus, &minus].iter().all(|space| space.iter().all(|e| in_span(space, &j.mul_vec(e))))
    };
    Ok(GammaReport {
        dim_plus: plus.len(),
        dim_minus: minus.len(),
        bijective,
        j0_invariant: preserves(j0),
        j1_invariant: preserves(j1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spinor::type_of_structure;
    use crate::tensorcalc::{DiffForm, Multivector};
    use crate::{GaussRat, PolyScalar, Rational};

    type G = GCStructure<GaussRat>;
    type F = DiffForm<GaussRat>;

    fn z(k: usize) -> PolyScalar {
        PolyScalar::var(k)
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    fn half() -> Rational {
        Rational::new(1.into(), 2.into())
    }

    fn line(points: &[(i64, i64)]) -> SubmanifoldModel<GaussRat> {
        // {z1 = 0} in C²
        let pts = points.iter().map(|&(x, y)| vec![q(0), q(x), q(0), q(y)]).collect();
        SubmanifoldModel::complex(2, vec![z(0)]).unwrap().with_points(pts).unwrap()
    }

    #[test]
    fn complex_submanifold_of_jj() {
        let m = line(&[(1, 2), (0, 0), (-3, 1)]);
        let jj = G::make_jj(2);
        assert!(is_conormal_invariant(&jj, &q(0), &m).unwrap().holds);
        let r = is_j_submanifold(&jj, &q(0), &m).unwrap();
        assert!(r.holds && r.per_sample.iter().all(|d| d.exact));
        let ind = induced_structure_at(&jj.matrix_at(&q(0), &m.points()[0]).unwrap(), &m, &m.points()[0]).unwrap();
        assert_eq!(type_of_structure(&ind).unwrap(), 1);
    }

    #[test]
    fn symplectic_subspace() {
        // {z2 = 0} in (C², J_ω)
        let m = SubmanifoldModel::complex(2, vec![z(1)])
            .unwrap()
            .with_points(vec![vec![q(1), q(0), q(2), q(0)]])
            .unwrap();
        let jw = G::make_jomega(&F::standard_kahler(2)).unwrap();
        let r = is_j_submanifold(&jw, &q(0), &m).unwrap();
        assert!(r.holds);
        assert_eq!(r.per_sample[0].dim_l_conormal, 0);
        let ind = induced_structure_at(&jw.matrix_at(&q(0), &m.points()[0]).unwrap(), &m, &m.points()[0]).unwrap();
        assert_eq!(type_of_structure(&ind).unwrap(), 0);
    }

    #[test]
    fn totally_real_is_not_j_submanifold() {
        let half_i = GaussRat::new(q(0), -half());
        let y = |j: usize| (z(j) - z(2 + j)).scale(&half_i);
        let m = SubmanifoldModel::new(2, vec![y(0), y(1)], 2).with_points(vec![vec![q(1), q(2), q(0), q(0)]]).unwrap();
        let r = is_j_submanifold(&G::make_jj(2), &q(0), &m).unwrap();
        assert!(!r.holds);
    }

    #[test]
    fn conormal_invariance_for_beta() {
        let m = line(&[(1, 2), (2, -1)]);
        let constant = Multivector::d_z(2, 0).wedge(&Multivector::d_z(2, 1));
        let jb = G::make_j_beta_t(&constant).unwrap();
        assert!(!is_conormal_invariant(&jb, &half(), &m).unwrap().holds);
        let tangent = Multivector::slot(2, 0, z(0)).wedge(&Multivector::d_z(2, 1));
        let jb = G::make_j_beta_t(&tangent).unwrap();
        assert!(is_conormal_invariant(&jb, &half(), &m).unwrap().holds);
    }

    #[test]
    fn gamma_for_kahler_pair() {
        let m = line(&[(1, 2)]);
        let x = &m.points()[0];
        let j0 = G::make_jj(2).matrix_at(&q(0), x).unwrap();
        let j1 = G::make_jomega(&F::standard_kahler(2)).unwrap().matrix_at(&q(0), x).unwrap();
        let r = gamma_iso_check(&j0, &j1, &m, x).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.dim_plus, 2);
    }
}
