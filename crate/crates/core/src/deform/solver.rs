//! Order-by-order solution of `d(e^{at} e^{b(t)} · e^{iω}) = 0` with
//! `b(t) = Σ_k b_k t^k / k!` and each `b_k ∈ K¹`, for a holomorphic Poisson
//! bivector `β` and `a = β + β̄`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::kone::{k1_membership, k2_factor, KOne};
use crate::clifford::bch::series_exp_act;
use crate::clifford::{bch_log, Clifford, CliffordSeries};
use crate::coeffring::poly::mono_degree;
use crate::coeffring::{factorial, Monomial, Poly, Scalar};
use crate::error::{Error, Result};
use crate::gcs::{kahler_pair_at, GCStructure, PointPairReport};
use crate::spinor::PointForm;
use crate::linalg::Matrix;
use crate::tensorcalc::exterior::{remove_sign, slots};
use crate::tensorcalc::{lefschetz_contract, DiffForm, Multivector};

/// Largest truncation order accepted by the solver.
pub const MAX_ORDER: usize = 6;
/// Extra polynomial degree allowed over the data when searching for `b_k`.
pub const DEFAULT_DEGREE_SLACK: u32 = 4;

#[derive(Clone, Debug)]
pub struct DeformationSeries<C: Scalar> {
    pub beta: Multivector<C>,
    pub omega: DiffForm<C>,
    /// `b_1, …, b_T`.
    pub b: Vec<KOne<C>>,
    pub order: usize,
    /// `t`-coefficients of `e^{at} e^{b(t)} ψ` through `t^T`.
    pub spinor: Vec<DiffForm<C>>,
    /// Largest `k` such that the residual vanishes through `t^k`.
    pub residual_zero_through: Option<usize>,
    pub degree_bound: u32,
}

/// `e^{iω}`.
pub fn kahler_spinor<C: Scalar>(omega: &DiffForm<C>) -> Result<DiffForm<C>> {
    omega.scale(&C::imag_unit()).wedge_exp()
}

fn check_poisson<C: Scalar>(beta: &Multivector<C>) -> Result<()> {
    if !beta.is_homogeneous(2) && !beta.is_zero() {
        return Err(Error::Domain("β must be a bivector".into()));
    }
    if !beta.is_holomorphic() || beta.terms().any(|(&m, _)| m >> beta.n() != 0) {
        return Err(Error::Domain("β must be holomorphic".into()));
    }
    if !beta.is_poisson()? {
        return Err(Error::Domain("β is not Poisson".into()));
    }
    Ok(())
}

fn real_part_clifford<C: Scalar>(beta: &Multivector<C>) -> Clifford<C> {
    Clifford::from_polyvector(&(beta.clone() + beta.conj()))
}

/// `d(a · ψ)`, the source of the first-order equation.
pub fn first_order_source<C: Scalar>(beta: &Multivector<C>, omega: &DiffForm<C>) -> Result<DiffForm<C>> {
    check_poisson(beta)?;
    let psi = kahler_spinor(omega)?;
    Ok(real_part_clifford(beta).act(&psi)?.d())
}

/// The bidegrees of `η` where `first_order_source = η ∧ ψ`, or `None` when the
/// source is not of the form `η ∧ ψ` with `η ∈ Λ¹ ⊕ Λ^{2,1} ⊕ Λ^{1,2}`.
pub fn first_order_source_split<C: Scalar>(
    beta: &Multivector<C>,
    omega: &DiffForm<C>,
) -> Result<Option<Vec<(usize, usize)>>> {
    let src = first_order_source(beta, omega)?;
    Ok(k2_factor(&src, omega)?.map(|eta| eta.bidegrees()))
}

fn wedge_series<C: Scalar>(a: &[DiffForm<C>], b: &[DiffForm<C>], order: usize) -> Result<Vec<DiffForm<C>>> {
    let n = a[0].n();
    let mut out = vec![DiffForm::zero(n); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            if !y.is_zero() {
                out[i + j] = out[i + j].clone() + x.try_wedge(y)?;
            }
        }
    }
    Ok(out)
}

/// `t`-coefficients through `t^order` of `e^{at} e^{b(t)} ψ`, where `b` lists
/// `b_1, b_2, …` (missing orders are zero).
pub fn spinor_series<C: Scalar>(
    a: &Clifford<C>,
    b: &[KOne<C>],
    psi: &DiffForm<C>,
    order: usize,
) -> Result<Vec<DiffForm<C>>> {
    let n = psi.n();
    let mut bt = vec![DiffForm::zero(n); order + 1];
    for (k, bk) in b.iter().enumerate() {
        let k = k + 1;
        if k <= order {
            bt[k] = bk.form().scale(&factorial::<C>(k).inv());
        }
    }
    // e^{b(t)} under the wedge product
    let mut exp = vec![DiffForm::zero(n); order + 1];
    exp[0] = DiffForm::scalar(n, Poly::one());
    let mut term = exp.clone();
    for j in 1..=order {
        term = wedge_series(&term, &bt, order)?.into_iter().map(|f| f.scale(&C::from_frac(1, j as i64))).collect();
        for (e, t) in exp.iter_mut().zip(&term) {
            *e = e.clone() + t.clone();
        }
    }
    let inner: Vec<DiffForm<C>> = exp.iter().map(|e| e.try_wedge(psi)).collect::<Result<_>>()?;
    // e^{at}
    let mut out = vec![DiffForm::zero(n); order + 1];
    for (l, f) in inner.iter().enumerate() {
        let mut cur = f.clone();
        for j in 0..=(order - l) {
            if cur.is_zero() {
                break;
            }
            out[l + j] = out[l + j].clone() + cur.clone();
            cur = a.act(&cur)?.scale(&C::from_frac(1, (j + 1) as i64));
        }
    }
    Ok(out)
}

/// `d` of each coefficient of a spinor series.
pub fn residual<C: Scalar>(series: &[DiffForm<C>]) -> Vec<DiffForm<C>> {
    series.iter().map(|f| f.d()).collect()
}

/// Homotopy for `∂` (or `∂̄` when `!hol`): contraction with the Euler field in
/// the holomorphic (antiholomorphic) variables, weighted by the degree in
/// those variables. Inverts `∂` on `∂`-closed forms of positive weight.
fn partial_homotopy<C: Scalar>(f: &DiffForm<C>, hol: bool) -> DiffForm<C> {
    let n = f.n();
    let range = if hol { 0..n } else { n..2 * n };
    let mut out = DiffForm::zero(n);
    for (&m, c) in f.terms() {
        let active: Vec<usize> = slots(m).filter(|a| range.contains(a)).collect();
        for (mono, coeff) in c.terms() {
            let weight = active.len() as i64
                + mono.iter().enumerate().filter(|(v, _)| range.contains(v)).map(|(_, &e)| e as i64).sum::<i64>();
            if weight == 0 {
                continue;
            }
            let scaled = coeff.clone() * C::from_frac(1, weight);
            for &a in &active {
                let s = remove_sign(m, a).expect("slot present");
                let mut mono2 = mono.clone();
                if mono2.len() <= a {
                    mono2.resize(a + 1, 0);
                }
                mono2[a] += 1;
                out.add_term(m & !(1 << a), Poly::monomial(mono2, scaled.clone() * C::from_i64(s)));
            }
        }
    }
    out
}

fn homogeneous_monomials(vars: usize, degree: u32) -> Vec<Monomial> {
    if vars == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for e in 0..=degree {
        for mut rest in homogeneous_monomials(vars - 1, degree - e) {
            rest.resize(vars - 1, 0);
            rest.push(e as u8);
            while rest.last() == Some(&0) {
                rest.pop();
            }
            out.push(rest);
        }
    }
    out
}

/// `√−1 ∂∂̄ f`.
fn i_ddbar<C: Scalar>(n: usize, f: &Poly<C>) -> DiffForm<C> {
    DiffForm::scalar(n, f.clone()).delbar().del().scale(&C::imag_unit())
}

/// Polynomial `f` with `Λ_ω(√−1 ∂∂̄ f) = g`, solved one homogeneous degree at
/// a time. Real when `g` is.
fn solve_laplace<C: Scalar>(g: &Poly<C>, omega: &DiffForm<C>) -> Result<Poly<C>> {
    let n = omega.n();
    let mut by_degree: BTreeMap<u32, Poly<C>> = BTreeMap::new();
    for (m, c) in g.terms() {
        by_degree.entry(mono_degree(m)).or_insert_with(Poly::zero).add_term(m.clone(), c.clone());
    }
    let mut f = Poly::zero();
    for (d, gd) in by_degree {
        let unknowns = homogeneous_monomials(2 * n, d + 2);
        let images: Vec<Poly<C>> = unknowns
            .iter()
            .map(|m| lefschetz_contract(&i_ddbar(n, &Poly::monomial(m.clone(), C::one())), omega))
            .collect::<Result<_>>()?;
        let rows = homogeneous_monomials(2 * n, d);
        let mat = Matrix::from_fn(rows.len(), unknowns.len(), |r, c| images[c].coeff(&rows[r]));
        let rhs: Vec<C> = rows.iter().map(|m| gd.coeff(m)).collect();
        let x = mat.solve(&rhs).ok_or_else(|| Error::Singular("Λ_ω ∂∂̄ is not surjective".into()))?;
        for (m, c) in unknowns.into_iter().zip(x) {
            f.add_term(m, c);
        }
    }
    if g.conj(n) == *g {
        f = (f.clone() + f.conj(n)).scale(&C::from_frac(1, 2));
    }
    Ok(f)
}

/// `(h, p) ∈ K¹` with `d((h + p) ∧ ψ) = target`, built from `target = η ∧ ψ`:
/// `dh = η₁`, `dp = η₃` with `p` of type (1,1), then `Λ_ω p + 2h = 0` enforced
/// by adding `√−1 ∂∂̄ f`. Returns `Err(reason)` when `target` is not a closed
/// element of `K²`.
fn solve_k1<C: Scalar>(
    target: &DiffForm<C>,
    omega: &DiffForm<C>,
) -> Result<std::result::Result<KOne<C>, String>> {
    let n = omega.n();
    let Some(eta) = k2_factor(target, omega)? else {
        return Ok(Err("obstruction is not in K²".into()));
    };
    if !eta.is_closed() {
        return Ok(Err("obstruction is not closed".into()));
    }
    let h = eta.part(1).homotopy_operator().coeff(0);
    let alpha = eta.part(3).homotopy_operator();
    let gamma = partial_homotopy(&alpha.bidegree_part(2, 0), true);
    let gamma_bar = partial_homotopy(&alpha.bidegree_part(0, 2), false);
    let mut p = alpha.bidegree_part(1, 1) - gamma.delbar() - gamma_bar.del();
    let g = -(h.scale(&C::from_i64(2)) + lefschetz_contract(&p, omega)?);
    if !g.is_zero() {
        p = p + i_ddbar(n, &solve_laplace(&g, omega)?);
    }
    Ok(Ok(KOne { h, p }))
}

/// Exactness certificate: `Ob` is closed and `d K(Ob) = Ob` for the radial
/// homotopy `K`.
pub fn certify_exact<C: Scalar>(ob: &DiffForm<C>) -> bool {
    ob.is_zero() || (ob.part(0).is_zero() && ob.is_closed() && ob.homotopy_operator().d() == *ob)
}

impl<C: Scalar> DeformationSeries<C> {
    /// Start a series with no `b_k` solved yet.
    pub fn new(beta: Multivector<C>, omega: DiffForm<C>, order: usize, degree_bound: Option<u32>) -> Result<Self> {
        check_poisson(&beta)?;
        if order > MAX_ORDER {
            return Err(Error::Domain(format!("order {order} exceeds {MAX_ORDER}")));
        }
        if !omega.is_constant() || omega.bidegrees() != vec![(1, 1)] || !omega.is_real() {
            return Err(Error::Domain("ω must be a constant real (1,1)-form".into()));
        }
        let data_degree = beta.max_poly_degree();
        let degree_bound = degree_bound.unwrap_or(data_degree + DEFAULT_DEGREE_SLACK);
        let psi = kahler_spinor(&omega)?;
        Ok(DeformationSeries {
            beta,
            spinor: vec![psi],
            omega,
            b: Vec::new(),
            order,
            residual_zero_through: Some(0),
            degree_bound,
        })
    }

    pub fn a(&self) -> Clifford<C> {
        real_part_clifford(&self.beta)
    }

    pub fn psi(&self) -> Result<DiffForm<C>> {
        kahler_spinor(&self.omega)
    }

    /// Solve for `b_k` given `b_1, …, b_{k−1}`.
    pub fn solve_order_k(&mut self, k: usize) -> Result<KOne<C>> {
        if k == 0 || k != self.b.len() + 1 {
            return Err(Error::Domain(format!("orders below {k} are not solved")));
        }
        let psi = self.psi()?;
        let series = spinor_series(&self.a(), &self.b, &psi, k)?;
        let res = residual(&series);
        if res[..k].iter().any(|r| !r.is_zero()) {
            return Err(Error::Domain("residual does not vanish below order k".into()));
        }
        let ob = res[k].clone();
        if !certify_exact(&ob) {
            return Err(Error::NoSolution(format!("order {k}: obstruction is not d-exact")));
        }
        let target = ob.scale(&-factorial::<C>(k));
        let bk = match solve_k1(&target, &self.omega)? {
            Ok(bk) => bk,
            Err(reason) => return Err(Error::NoSolution(format!("order {k}: {reason}"))),
        };
        let degree = bk.p.max_poly_degree().max(bk.h.total_degree().unwrap_or(0));
        if degree > self.degree_bound {
            return Err(Error::NoSolution(format!(
                "no solution within degree bound {} at order {k}; the constructed solution has degree {degree}",
                self.degree_bound
            )));
        }
        self.b.push(bk.clone());
        Ok(bk)
    }

    /// Add a constant real primitive (1,1)-form to `b_1`.
    pub fn shift_first_order(&mut self, s: &DiffForm<C>) -> Result<()> {
        if self.b.is_empty() {
            return Err(Error::Domain("order 1 is not solved".into()));
        }
        if !s.is_constant() || !s.is_real() || !k1_membership(&Poly::zero(), s, &self.omega)? {
            return Err(Error::Domain("shift must be a constant real primitive (1,1)-form".into()));
        }
        self.b[0].p = self.b[0].p.clone() + s.clone();
        self.b.truncate(1);
        Ok(())
    }

    /// Recompute the spinor series and its residual from scratch.
    pub fn verify(&mut self) -> Result<()> {
        let psi = self.psi()?;
        self.spinor = spinor_series(&self.a(), &self.b, &psi, self.order)?;
        let res = residual(&self.spinor);
        self.residual_zero_through = res.iter().position(|r| !r.is_zero()).map_or(Some(self.order), |k| k.checked_sub(1));
        Ok(())
    }

    pub fn b_in_k1(&self) -> Result<bool> {
        for bk in &self.b {
            if !k1_membership(&bk.h, &bk.p, &self.omega)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `ψ_t = e^{at} e^{p(t)} e^{iω}` at a rational `t`, dropping the scalar
    /// factor `e^{h(t)}`, which does not change kernels or the type.
    pub fn spinor_at(&self, t: &C::Real) -> Result<DiffForm<C>> {
        let n = self.omega.n();
        let tc = C::from_real(t.clone());
        let mut p = DiffForm::zero(n);
        let mut power = C::one();
        for (k, bk) in self.b.iter().enumerate() {
            power = power * tc.clone();
            let f = factorial::<C>(k + 1).inv();
            p = p + bk.p.scale(&(power.clone() * f));
        }
        let inner = p.wedge_exp()?.try_wedge(&self.psi()?)?;
        self.a().scale(&tc).exp_act(&inner)
    }
}

impl<C: Scalar> DeformationSeries<C> {
    /// `b(t)` as a series in the Clifford algebra.
    pub fn b_clifford(&self) -> Vec<Clifford<C>> {
        let n = self.omega.n();
        let mut out = vec![Clifford::zero(n)];
        for (k, bk) in self.b.iter().enumerate() {
            out.push(Clifford::from_form(&bk.form().scale(&factorial::<C>(k + 1).inv())));
        }
        out
    }

    /// `z(t) = log(e^{at} e^{b(t)})` through `t^T`.
    pub fn bch_exponent(&self) -> Result<CliffordSeries<C>> {
        bch_log(&self.a(), &self.b_clifford(), self.order)
    }

    /// `e^{z(t)} ψ` from the BCH exponent agrees with the spinor series.
    pub fn bch_consistent(&self) -> Result<bool> {
        let via_bch = series_exp_act(&self.bch_exponent()?, &self.psi()?, self.order)?;
        let direct = spinor_series(&self.a(), &self.b, &self.psi()?, self.order)?;
        Ok(via_bch == direct)
    }
}

impl<C: Scalar> DeformationSeries<C> {
    /// `J_{ψ_t}` at a point, from the kernel of the pointwise spinor.
    pub fn j_psi_at(&self, t: &C::Real, point: &[C::Real]) -> Result<Matrix<C>> {
        PointForm::from_form(&self.spinor_at(t)?, point)?.induced_j()
    }

    /// Kähler-pair conditions for `(J_βt, J_{ψ_t})` at one point.
    pub fn pair_report_at(&self, t: &C::Real, point: &[C::Real]) -> Result<PointPairReport> {
        let jb = GCStructure::make_j_beta_t(&self.beta)?.matrix_at(t, point)?;
        kahler_pair_at(&jb, &self.j_psi_at(t, point)?)
    }
}

/// Solve orders `1..=order`, optionally shifting `b_1` by a harmonic form `s`,
/// and re-verify the residual independently.
pub fn solve_deformation<C: Scalar>(
    beta: &Multivector<C>,
    omega: &DiffForm<C>,
    order: usize,
    shift: Option<&DiffForm<C>>,
    degree_bound: Option<u32>,
) -> Result<DeformationSeries<C>> {
    let mut series = DeformationSeries::new(beta.clone(), omega.clone(), order, degree_bound)?;
    for k in 1..=order {
        series.solve_order_k(k)?;
        if k == 1 {
            if let Some(s) = shift {
                series.shift_first_order(s)?;
            }
        }
    }
    series.verify()?;
    Ok(series)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{GaussRat, PolyScalar};

    type F = DiffForm<GaussRat>;
    type V = Multivector<GaussRat>;

    fn z(k: usize) -> PolyScalar {
        PolyScalar::var(k)
    }

    #[test]
    fn constant_beta_needs_no_correction() {
        let n = 2;
        let beta = V::d_z(n, 0).wedge(&V::d_z(n, 1));
        let om = F::standard_kahler(n);
        assert!(first_order_source(&beta, &om).unwrap().is_zero());
        let s = solve_deformation(&beta, &om, 3, None, None).unwrap();
        assert!(s.b.iter().all(|b| b.is_zero()));
        assert_eq!(s.residual_zero_through, Some(3));
    }

    #[test]
    fn zero_beta() {
        let om = F::standard_kahler(2);
        let s = solve_deformation(&V::zero(2), &om, 2, None, None).unwrap();
        assert!(s.b.iter().all(|b| b.is_zero()));
        assert_eq!(s.spinor[0], kahler_spinor(&om).unwrap());
        assert!(s.spinor[1].is_zero());
    }

    #[test]
    fn linear_beta_second_order() {
        let n = 2;
        let beta = V::slot(n, 0, z(0)).wedge(&V::d_z(n, 1));
        let om = F::standard_kahler(n);
        let src = first_order_source(&beta, &om).unwrap();
        assert!(!src.is_zero());
        let s = solve_deformation(&beta, &om, 2, None, None).unwrap();
        assert_eq!(s.residual_zero_through, Some(2));
        assert!(s.b_in_k1().unwrap());
        let q = |a: i64, b: i64| crate::Rational::new(a.into(), b.into());
        let point = vec![q(1, 2), q(-1, 1), q(0, 1), q(1, 3)];
        assert!(s.pair_report_at(&q(1, 3), &point).unwrap().holds());
        assert!(s.bch_consistent().unwrap());
        assert!(s.b[0].is_real());
    }

    #[test]
    fn harmonic_shift() {
        let n = 2;
        let beta = V::slot(n, 0, z(0)).wedge(&V::d_z(n, 1));
        let om = F::standard_kahler(n);
        let i = GaussRat::imag_unit();
        let shift = (F::dz(n, 0).wedge(&F::dzb(n, 0)) - F::dz(n, 1).wedge(&F::dzb(n, 1))).scale(&i);
        let a = solve_deformation(&beta, &om, 1, None, None).unwrap();
        let b = solve_deformation(&beta, &om, 1, Some(&shift), None).unwrap();
        assert_eq!(b.residual_zero_through, Some(1));
        assert_ne!(a.b[0], b.b[0]);
        assert!(b.b_in_k1().unwrap());
    }

    #[test]
    fn monomial_enumeration() {
        assert_eq!(homogeneous_monomials(2, 2).len(), 3);
        assert_eq!(homogeneous_monomials(4, 0), vec![Vec::<u8>::new()]);
    }

    #[test]
    fn laplace_and_partial_homotopy() {
        let n = 2;
        let om = F::standard_kahler(n);
        let g = z(0) * z(2) + z(1);
        let f = solve_laplace(&g, &om).unwrap();
        assert_eq!(lefschetz_contract(&i_ddbar(n, &f), &om).unwrap(), g);
        let closed = F::differential(n, &(z(0) * z(3))).wedge(&F::dz(n, 1)).bidegree_part(2, 0);
        assert_eq!(partial_homotopy(&closed, true).del(), closed);
    }
}
