//! Submanifolds of `C^n` cut out by polynomial generators, with exact sample
//! points and pointwise tangent and conormal data.

use num_traits::Zero;
use rand::Rng;

use crate::coeffring::{Poly, PolyIdeal, RealField, Scalar};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, span_rank, Matrix};
use crate::tensorcalc::DiffForm;

#[derive(Clone, Debug)]
pub struct SubmanifoldModel<C: Scalar> {
    n: usize,
    ideal: PolyIdeal<C>,
    real_codim: usize,
    points: Vec<Vec<C::Real>>,
    parametrization: Option<Vec<Poly<C>>>,
}

/// Conjugate of a covector or vector given by slot components.
pub fn conj_slots<C: Scalar>(v: &[C]) -> Vec<C> {
    let n = v.len() / 2;
    (0..2 * n).map(|a| v[if a < n { a + n } else { a - n }].conj()).collect()
}

impl<C: Scalar> SubmanifoldModel<C> {
    /// Zero set of `generators` with the given real codimension.
    pub fn new(n: usize, generators: Vec<Poly<C>>, real_codim: usize) -> Self {
        SubmanifoldModel { n, ideal: PolyIdeal::new(generators), real_codim, points: Vec::new(), parametrization: None }
    }

    /// Complex submanifold cut out by independent holomorphic generators.
    pub fn complex(n: usize, generators: Vec<Poly<C>>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| !g.is_holomorphic(n)) {
            return Err(Error::Domain(format!("generator {g:?} is not holomorphic")));
        }
        let codim = 2 * generators.len();
        Ok(Self::new(n, generators, codim))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ideal(&self) -> &PolyIdeal<C> {
        &self.ideal
    }

    pub fn generators(&self) -> &[Poly<C>] {
        self.ideal.generators()
    }

    pub fn real_codim(&self) -> usize {
        self.real_codim
    }

    /// Real dimension of `M`.
    pub fn real_dim(&self) -> usize {
        2 * self.n - self.real_codim
    }

    pub fn points(&self) -> &[Vec<C::Real>] {
        &self.points
    }

    pub fn parametrization(&self) -> Option<&[Poly<C>]> {
        self.parametrization.as_deref()
    }

    pub fn with_parametrization(mut self, phi: Vec<Poly<C>>) -> Result<Self> {
        if phi.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: phi.len() });
        }
        let m = self.real_dim() / 2;
        let mut subs = phi.clone();
        subs.extend(phi.iter().map(|p| p.conj(m)));
        for g in self.generators() {
            if !g.compose(&subs)?.is_zero() {
                return Err(Error::Domain("parametrization does not lie on M".into()));
            }
        }
        self.parametrization = Some(phi);
        Ok(self)
    }

    /// Add sample points after checking that they lie on `M` and are smooth.
    pub fn with_points(mut self, points: Vec<Vec<C::Real>>) -> Result<Self> {
        for p in points {
            self.check_point(&p)?;
            self.points.push(p);
        }
        Ok(self)
    }

    pub fn check_point(&self, p: &[C::Real]) -> Result<()> {
        if p.len() != 2 * self.n {
            return Err(Error::DimensionMismatch { expected: 2 * self.n, found: p.len() });
        }
        for g in self.generators() {
            if !g.eval_at(p)?.is_zero() {
                return Err(Error::Domain("sample point does not lie on M".into()));
            }
        }
        self.conormal_at(p).map(|_| ())
    }

    /// Rational points found by fixing all but one coordinate per generator at
    /// random Gaussian rationals and solving the remaining linear or
    /// quadratic equation exactly. Holomorphic generators only.
    pub fn find_points(mut self, rng: &mut impl Rng, count: usize, max_tries: usize) -> Result<Self> {
        if self.generators().iter().any(|g| !g.is_holomorphic(self.n)) {
            return Err(Error::Domain("point search needs holomorphic generators; supply points".into()));
        }
        let mut tries = 0;
        while self.points.len() < count {
            if tries == max_tries {
                return Err(Error::Domain(format!(
                    "found {} of {} rational points; supply them",
                    self.points.len(),
                    count
                )));
            }
            tries += 1;
            let Some(z) = self.try_point(rng)? else { continue };
            let p: Vec<C::Real> = z.iter().map(|v| v.re()).chain(z.iter().map(|v| v.im())).collect();
            if self.points.contains(&p) || self.check_point(&p).is_err() {
                continue;
            }
            self.points.push(p);
        }
        Ok(self)
    }

    fn try_point(&self, rng: &mut impl Rng) -> Result<Option<Vec<C>>> {
        let n = self.n;
        let mut z: Vec<C> = (0..n).map(|_| random_gauss(rng)).collect();
        let mut solved: Vec<usize> = Vec::new();
        for g in self.generators() {
            let mut order: Vec<usize> = (0..n).filter(|v| !solved.contains(v)).collect();
            // shuffle so repeated tries explore different variables
            for i in (1..order.len()).rev() {
                order.swap(i, rng.gen_range(0..=i));
            }
            let mut done = false;
            for v in order {
                let uni = univariate(g, &z, v)?;
                if let Some(root) = solve_low_degree(&uni) {
                    z[v] = root;
                    solved.push(v);
                    done = true;
                    break;
                }
            }
            if !done {
                return Ok(None);
            }
        }
        Ok(Some(z))
    }

    /// `dF_k(x)` and conjugates, reduced to an independent set; errors at
    /// singular points.
    pub fn conormal_at(&self, x: &[C::Real]) -> Result<Vec<Vec<C>>> {
        let mut all = Vec::new();
        for g in self.generators() {
            let d: Vec<C> = (0..2 * self.n).map(|a| g.derivative(a).eval_at(x)).collect::<Result<_>>()?;
            let db = conj_slots(&d);
            all.push(d);
            all.push(db);
        }
        let basis = independent_subset(&all);
        if basis.len() != self.real_codim {
            return Err(Error::Singular(format!(
                "singular point of M: conormal rank {} instead of {}",
                basis.len(),
                self.real_codim
            )));
        }
        Ok(basis)
    }

    /// Conormal frame as constant 1-forms.
    pub fn conormal_frame(&self, x: &[C::Real]) -> Result<Vec<DiffForm<C>>> {
        Ok(self
            .conormal_at(x)?
            .iter()
            .map(|v| DiffForm::from_components(self.n, &v.iter().map(|c| Poly::constant(c.clone())).collect::<Vec<_>>()))
            .collect())
    }

    /// Basis of `(T_x M)^C` in slot components.
    pub fn tangent_at(&self, x: &[C::Real]) -> Result<Vec<Vec<C>>> {
        let nstar = self.conormal_at(x)?;
        if nstar.is_empty() {
            return Ok((0..2 * self.n).map(|a| unit(2 * self.n, a)).collect());
        }
        Ok(Matrix::from_rows(nstar).kernel())
    }

    /// Real basis of `T_x M` (vectors fixed by conjugation), in slot components.
    pub fn real_tangent_basis(&self, x: &[C::Real]) -> Result<Vec<Vec<C>>> {
        let mut cand = Vec::new();
        for u in self.tangent_at(x)? {
            let ub = conj_slots(&u);
            cand.push(u.iter().zip(&ub).map(|(a, b)| a.clone() + b.clone()).collect::<Vec<C>>());
            cand.push(u.iter().zip(&ub).map(|(a, b)| C::imag_unit() * (a.clone() - b.clone())).collect());
        }
        let basis = independent_subset(&cand);
        debug_assert_eq!(span_rank(&basis), self.real_dim());
        Ok(basis)
    }
}

fn unit<C: Scalar>(len: usize, k: usize) -> Vec<C> {
    (0..len).map(|i| if i == k { C::one() } else { C::zero() }).collect()
}

fn random_gauss<C: Scalar>(rng: &mut impl Rng) -> C {
    let part = |r: &mut dyn rand::RngCore| {
        let num = r.gen_range(-4..=4i64);
        let den = r.gen_range(1..=3i64);
        C::Real::from_frac(num, den)
    };
    let re = part(rng);
    let im = if rng.gen_bool(0.5) { part(rng) } else { C::Real::zero() };
    C::from_parts(re, im)
}

/// Coefficients of `g` as a polynomial in `z_v`, other variables fixed at `z`.
fn univariate<C: Scalar>(g: &Poly<C>, z: &[C], v: usize) -> Result<Vec<C>> {
    let mut subs: Vec<Poly<C>> = z.iter().map(|c| Poly::constant(c.clone())).collect();
    subs[v] = Poly::var(0);
    subs.extend(z.iter().map(|c| Poly::constant(c.conj())));
    let u = g.compose(&subs)?;
    let deg = u.total_degree().unwrap_or(0) as usize;
    Ok((0..=deg).map(|k| u.coeff(&[k as u8])).collect())
}

fn solve_low_degree<C: Scalar>(c: &[C]) -> Option<C> {
    match c.len() {
        2 if !c[1].is_zero() => Some(-c[0].clone() / c[1].clone()),
        3 if !c[2].is_zero() => {
            let disc = c[1].clone() * c[1].clone() - C::from_i64(4) * c[0].clone() * c[2].clone();
            let s = gauss_sqrt(&disc)?;
            Some((s - c[1].clone()) / (C::from_i64(2) * c[2].clone()))
        }
        _ => None,
    }
}

/// Square root in `Q(i)` when it exists.
pub fn gauss_sqrt<C: Scalar>(w: &C) -> Option<C> {
    let (a, b) = (w.re(), w.im());
    let r = (a.clone() * a.clone() + b.clone() * b.clone()).exact_sqrt()?;
    let two = C::Real::from_frac(2, 1);
    let x = ((r.clone() + a.clone()) / two.clone()).exact_sqrt()?;
    let y = if x.is_zero() {
        (-a).exact_sqrt()?
    } else {
        b / (two * x.clone())
    };
    Some(C::from_parts(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use crate::{GaussRat, PolyScalar, Rational};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn z(k: usize) -> PolyScalar {
        PolyScalar::var(k)
    }

    fn q(a: i64) -> Rational {
        Rational::from_integer(a.into())
    }

    #[test]
    fn coordinate_hyperplane() {
        let m = SubmanifoldModel::complex(2, vec![z(0)]).unwrap();
        let fr = m.conormal_frame(&[q(0), q(1), q(0), q(2)]).unwrap();
        assert_eq!(fr.len(), 2);
        assert_eq!(m.tangent_at(&[q(0), q(1), q(0), q(2)]).unwrap().len(), 2);
        assert_eq!(m.real_tangent_basis(&[q(0), q(1), q(0), q(2)]).unwrap().len(), 2);
    }

    #[test]
    fn singular_point_is_reported() {
        let m = SubmanifoldModel::complex(2, vec![z(0) * z(1)]).unwrap();
        assert!(matches!(m.conormal_at(&vec![q(0); 4]), Err(Error::Singular(_))));
        assert!(m.with_points(vec![vec![q(0); 4]]).is_err());
    }

    #[test]
    fn quadric_points() {
        let f = z(0) * z(0) + z(1) * z(1) + z(2) * z(2) + PolyScalar::from_i64(1);
        let m = SubmanifoldModel::complex(3, vec![f.clone()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let m = m.find_points(&mut rng, 5, 500).unwrap();
        for p in m.points() {
            assert!(f.eval_at(p).unwrap().is_zero());
            let fr = m.conormal_frame(p).unwrap();
            assert_eq!(fr.len(), 2);
        }
    }

    #[test]
    fn gaussian_square_roots() {
        let w = GaussRat::new(q(-3), q(4));
        let s = gauss_sqrt(&w).unwrap();
        assert_eq!(s.clone() * s, w);
        assert!(gauss_sqrt(&GaussRat::from_i64(2)).is_none());
        let w = GaussRat::new(q(-4), q(0));
        let s = gauss_sqrt(&w).unwrap();
        assert_eq!(s.clone() * s, w);
    }

    #[test]
    fn totally_real_plane() {
        // y1 = y2 = 0 with y = (z − zb)/(2i)
        let half_i = GaussRat::new(q(0), Rational::new((-1).into(), 2.into()));
        let y = |j: usize| (z(j) - z(2 + j)).scale(&half_i);
        let m = SubmanifoldModel::new(2, vec![y(0), y(1)], 2).with_points(vec![vec![q(1), q(2), q(0), q(0)]]).unwrap();
        assert_eq!(m.real_tangent_basis(&m.points()[0]).unwrap().len(), 2);
    }
}
