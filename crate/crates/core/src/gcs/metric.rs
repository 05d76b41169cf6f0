//! Generalized metrics from commuting pairs of structures, and the
//! generalized Kähler condition.

use num_traits::Signed;

use super::structure::{conj_components, t_power, tmat_mul, GCStructure, IntegrabilityReport, TMatrix};
use crate::clifford::section::pairing_values;
use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{intersect, span_rank, Matrix};

/// `G = J₀J₁` for commuting `J₀, J₁`.
#[derive(Clone, Debug)]
pub struct GenMetric<C: Scalar> {
    n: usize,
    g: TMatrix<C>,
}

impl<C: Scalar> GenMetric<C> {
    pub fn new(j0: &GCStructure<C>, j1: &GCStructure<C>) -> Result<Self> {
        if j0.n() != j1.n() {
            return Err(Error::DimensionMismatch { expected: j0.n(), found: j1.n() });
        }
        let a = j0.compose(j1)?;
        let b = j1.compose(j0)?;
        if a != b {
            return Err(Error::Domain("structures do not commute".into()));
        }
        Ok(GenMetric { n: j0.n(), g: a })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t_coefficients(&self) -> &[Matrix<Poly<C>>] {
        &self.g
    }

    pub fn squares_to_identity(&self) -> Result<bool> {
        let sq = tmat_mul(&self.g, &self.g)?;
        Ok(sq.len() == 1 && sq[0] == Matrix::identity(4 * self.n))
    }

    pub fn matrix_at(&self, t: &C::Real, point: &[C::Real]) -> Result<Matrix<C>> {
        let mut acc = Matrix::zeros(4 * self.n, 4 * self.n);
        for (k, m) in self.g.iter().enumerate() {
            acc = acc + m.try_map(|c| c.eval_at(point))?.scale(&t_power::<C>(t, k));
        }
        Ok(acc)
    }

    /// `H[k][l] = ⟨G e_l, conj e_k⟩` on the complex component basis.
    pub fn hermitian_form_at(&self, t: &C::Real, point: &[C::Real]) -> Result<Matrix<C>> {
        Ok(hermitian_form(&self.matrix_at(t, point)?))
    }

    /// Positive-definiteness of the Hermitian form `⟨G E, Ē⟩` at a point.
    pub fn is_positive_at(&self, t: &C::Real, point: &[C::Real]) -> Result<bool> {
        is_positive_hermitian(&self.hermitian_form_at(t, point)?)
    }

    /// `(g, b)` at a point, from `C⁺ = graph(g + b)`, as `2n × 2n` matrices on
    /// the slot basis `∂_a`.
    pub fn metric_and_b_at(&self, t: &C::Real, point: &[C::Real]) -> Result<(Matrix<C>, Matrix<C>)> {
        let dim = 4 * self.n;
        let gm = self.matrix_at(t, point)?;
        let plus = (gm - Matrix::identity(dim)).kernel();
        if plus.len() != 2 * self.n {
            return Err(Error::Singular("C⁺ has the wrong dimension".into()));
        }
        let k = Matrix::from_cols(dim, &plus);
        let v = k.block(0, 0, 2 * self.n, 2 * self.n);
        let th = k.block(2 * self.n, 0, 2 * self.n, 2 * self.n);
        let vinv = v.inverse().map_err(|_| Error::Singular("C⁺ is not a graph over T".into()))?;
        let m = th.try_mul(&vinv)?;
        let gb = m.transpose();
        let half = C::from_frac(1, 2);
        let g = (gb.clone() + gb.transpose()).scale(&half);
        let b = (gb.clone() - gb.transpose()).scale(&half);
        Ok((g, b))
    }
}

/// `H[k][l] = ⟨G e_l, conj e_k⟩` for a pointwise `G` in the ambient basis.
pub fn hermitian_form<C: Scalar>(g: &Matrix<C>) -> Matrix<C> {
    let dim = g.rows();
    let basis = |k: usize| -> Vec<C> { (0..dim).map(|i| if i == k { C::one() } else { C::zero() }).collect() };
    Matrix::from_fn(dim, dim, |k, l| pairing_values(&g.mul_vec(&basis(l)), &conj_components(&basis(k))))
}

/// Pointwise generalized Kähler conditions for two structure matrices:
/// commutation, `G² = 1` and positivity of `G = J₀J₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointPairReport {
    pub commute: bool,
    pub squares_to_identity: bool,
    pub positive: bool,
}

impl PointPairReport {
    pub fn holds(&self) -> bool {
        self.commute && self.squares_to_identity && self.positive
    }
}

pub fn kahler_pair_at<C: Scalar>(j0: &Matrix<C>, j1: &Matrix<C>) -> Result<PointPairReport> {
    let g = j0.try_mul(j1)?;
    let commute = g == j1.try_mul(j0)?;
    let squares = g.try_mul(&g)?.is_identity();
    let positive = commute && squares && is_positive_hermitian(&hermitian_form(&g))?;
    Ok(PointPairReport { commute, squares_to_identity: squares, positive })
}

/// Exact test for a positive-definite Hermitian matrix via its `LDL*` pivots.
pub fn is_positive_hermitian<C: Scalar>(h: &Matrix<C>) -> Result<bool> {
    let dim = h.rows();
    for r in 0..dim {
        for c in 0..dim {
            if h[(r, c)] != h[(c, r)].conj() {
                return Err(Error::Domain("form is not Hermitian".into()));
            }
        }
    }
    let mut a: Vec<Vec<C>> = (0..dim).map(|r| h.row(r).to_vec()).collect();
    for k in 0..dim {
        let p = a[k][k].clone();
        if !p.is_real() || !p.re().is_positive() {
            return Ok(false);
        }
        for r in (k + 1)..dim {
            let f = a[r][k].clone() / p.clone();
            if f.is_zero() {
                continue;
            }
            for c in k..dim {
                let d = f.clone() * a[k][c].clone();
                a[r][c] = a[r][c].clone() - d;
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct KahlerPairReport {
    pub commute: bool,
    pub squares_to_identity: bool,
    pub positive: bool,
    pub integrable: [Option<IntegrabilityReport>; 2],
    /// Sample indices `(t, point)` where positivity failed.
    pub positivity_failures: Vec<(usize, usize)>,
}

impl KahlerPairReport {
    pub fn holds(&self) -> bool {
        self.commute
            && self.squares_to_identity
            && self.positive
            && self.integrable.iter().all(|r| r.as_ref().is_some_and(|r| r.integrable))
    }
}

/// Commutation, `G² = 1`, positivity and integrability of both structures at
/// the sampled `t` values and points.
pub fn kahler_pair_check<C: Scalar>(
    j0: &GCStructure<C>,
    j1: &GCStructure<C>,
    ts: &[C::Real],
    points: &[Vec<C::Real>],
) -> Result<KahlerPairReport> {
    let metric = match GenMetric::new(j0, j1) {
        Ok(m) => m,
        Err(Error::Domain(_)) => {
            return Ok(KahlerPairReport {
                commute: false,
                squares_to_identity: false,
                positive: false,
                integrable: [None, None],
                positivity_failures: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let squares = metric.squares_to_identity()?;
    let mut failures = Vec::new();
    for (ti, t) in ts.iter().enumerate() {
        for (pi, p) in points.iter().enumerate() {
            if !metric.is_positive_at(t, p)? {
                failures.push((ti, pi));
            }
        }
    }
    let mut integrable = [None, None];
    for (slot, j) in integrable.iter_mut().zip([j0, j1]) {
        let mut merged: Option<IntegrabilityReport> = None;
        for t in ts {
            match j.integrability_check(t, points) {
                Ok(r) => {
                    merged = Some(match merged {
                        None => r,
                        Some(mut m) => {
                            m.integrable &= r.integrable;
                            m.points_checked += r.points_checked;
                            m.failures.extend(r.failures);
                            m
                        }
                    })
                }
                Err(Error::Domain(_)) => {
                    merged = None;
                    break;
                }
                Err(e) => return Err(e),
            }
        }
        *slot = merged;
    }
    Ok(KahlerPairReport {
        commute: true,
        squares_to_identity: squares,
        positive: failures.is_empty(),
        integrable,
        positivity_failures: failures,
    })
}

/// `(C⁺)^C = (L₀ ∩ L̄₁) ⊕ (L̄₀ ∩ L₁)` at a point, where `L_i` are the `−i`
/// eigenspaces.
pub fn plus_splitting_at<C: Scalar>(
    j0: &GCStructure<C>,
    j1: &GCStructure<C>,
    t: &C::Real,
    point: &[C::Real],
) -> Result<bool> {
    let n = j0.n();
    let l0 = j0.eigenframe_at(t, point)?;
    let l1 = j1.eigenframe_at(t, point)?;
    let bar = |v: &[Vec<C>]| v.iter().map(|x| conj_components(x)).collect::<Vec<_>>();
    let a = intersect(&l0, &bar(&l1));
    let b = intersect(&bar(&l0), &l1);
    let mut all = a.clone();
    all.extend(b.iter().cloned());
    if span_rank(&all) != 2 * n || a.len() + b.len() != 2 * n {
        return Ok(false);
    }
    let g = GenMetric::new(j0, j1)?.matrix_at(t, point)?;
    Ok(all.iter().all(|v| g.mul_vec(v) == *v))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use num_traits::Zero;
    use crate::tensorcalc::{DiffForm, Multivector};
    use crate::{GaussRat, Rational};

    type G = GCStructure<GaussRat>;
    type F = DiffForm<GaussRat>;

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn standard_pair_is_kahler() {
        for n in 1..=2 {
            let jj = G::make_jj(n);
            let jw = G::make_jomega(&F::standard_kahler(n)).unwrap();
            let pts = vec![vec![q(0); 2 * n], (0..2 * n as i64).map(q).collect()];
            let r = kahler_pair_check(&jj, &jw, &[q(0)], &pts).unwrap();
            assert!(r.holds(), "{r:?}");
            assert!(plus_splitting_at(&jj, &jw, &q(0), &pts[1]).unwrap());
            let m = GenMetric::new(&jj, &jw).unwrap();
            let (g, b) = m.metric_and_b_at(&q(0), &pts[0]).unwrap();
            assert!(b.is_zero());
            // Euclidean metric: g(∂_j, ∂̄_j) = ½
            assert_eq!(g[(0, n)], GaussRat::from_frac(1, 2));
            assert!(g[(0, 0)].is_zero());
        }
    }

    #[test]
    fn jj_with_itself_is_not_positive() {
        let jj = G::make_jj(1);
        let r = kahler_pair_check(&jj, &jj, &[q(0)], &[vec![q(0), q(0)]]).unwrap();
        assert!(r.commute && r.squares_to_identity);
        assert!(!r.positive);
    }

    #[test]
    fn positivity_by_pivots() {
        let m = Matrix::from_rows(vec![
            vec![GaussRat::from_i64(2), GaussRat::imag_unit()],
            vec![-GaussRat::imag_unit(), GaussRat::from_i64(1)],
        ]);
        assert!(is_positive_hermitian(&m).unwrap());
        let m = Matrix::from_rows(vec![
            vec![GaussRat::from_i64(1), GaussRat::from_i64(2)],
            vec![GaussRat::from_i64(2), GaussRat::from_i64(1)],
        ]);
        assert!(!is_positive_hermitian(&m).unwrap());
    }

    #[test]
    fn non_commuting_pair() {
        let n = 2;
        let beta = Multivector::d_z(n, 0).wedge(&Multivector::d_z(n, 1));
        let jb = G::make_j_beta_t(&beta).unwrap();
        let jw = G::make_jomega(&F::standard_kahler(n)).unwrap();
        let r = kahler_pair_check(&jb, &jw, &[q(1)], &[vec![q(0); 4]]).unwrap();
        assert!(!r.commute);
    }
}
