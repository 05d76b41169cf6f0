//! First-order bi-Hermitian data: the Kodaira–Spencer contraction of `β`
//! with `ω`, the deformed frames `Z_i^±`, and the rank test for Poisson
//! bivectors on a torus times `CP¹`.

use num_traits::Zero;

use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensorcalc::{DiffForm, Multivector};

/// `√−1 β·ω` as `Σ_a ∂_a ⊗ T[a]` with each `T[a]` a (0,1)-form.
#[derive(Clone, Debug, PartialEq)]
pub struct KsClass<C: Scalar> {
    pub components: Vec<DiffForm<C>>,
    pub delbar_closed: bool,
}

impl<C: Scalar> KsClass<C> {
    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|f| f.is_zero())
    }
}

pub fn ks_class<C: Scalar>(beta: &Multivector<C>, omega: &DiffForm<C>) -> Result<KsClass<C>> {
    let n = beta.n();
    if omega.n() != n {
        return Err(Error::DimensionMismatch { expected: n, found: omega.n() });
    }
    if !beta.is_poisson()? {
        return Err(Error::Domain("β is not Poisson".into()));
    }
    let b = beta.bivector_matrix();
    let w = omega.hermitian_matrix();
    let i = C::imag_unit();
    let mut components = Vec::with_capacity(n);
    for a in 0..n {
        let mut t = DiffForm::zero(n);
        for j in 0..n {
            if b[(a, j)].is_zero() {
                continue;
            }
            for k in 0..n {
                let c = b[(a, j)].try_mul(&w[(j, k)])?.scale(&i);
                t.add_term(1 << (n + k), c);
            }
        }
        components.push(t);
    }
    let delbar_closed = components.iter().all(|t| t.delbar().is_zero());
    Ok(KsClass { components, delbar_closed })
}

/// `Z_i^±(t) = Z_i ± t·v_i mod t²` with `v_i = β̄♯θ̄^i`.
#[derive(Clone, Debug, PartialEq)]
pub struct FirstOrderFrames<C: Scalar> {
    pub base: Vec<Multivector<C>>,
    pub velocity: Vec<Multivector<C>>,
}

impl<C: Scalar> FirstOrderFrames<C> {
    /// `t⁰` and `t¹` coefficients of `Z_i^+`.
    pub fn plus(&self, i: usize) -> (Multivector<C>, Multivector<C>) {
        (self.base[i].clone(), self.velocity[i].clone())
    }

    pub fn minus(&self, i: usize) -> (Multivector<C>, Multivector<C>) {
        (self.base[i].clone(), -self.velocity[i].clone())
    }

    /// The two frames coincide mod `t²`.
    pub fn agree(&self) -> bool {
        self.velocity.iter().all(|v| v.is_zero())
    }
}

/// `θ̄^i = −√−1 · i_{Z_i} ω`.
pub fn dual_coframe<C: Scalar>(omega: &DiffForm<C>, frame: &[Multivector<C>]) -> Result<Vec<DiffForm<C>>> {
    let mi = -C::imag_unit();
    frame.iter().map(|z| Ok(omega.interior(z)?.scale(&mi))).collect()
}

pub fn bihermitian_first_order<C: Scalar>(
    beta: &Multivector<C>,
    omega: &DiffForm<C>,
    frame: &[Multivector<C>],
) -> Result<FirstOrderFrames<C>> {
    let beta_bar = beta.conj();
    let velocity = dual_coframe(omega, frame)?
        .iter()
        .map(|th| beta_bar.sharp(th))
        .collect::<Result<Vec<_>>>()?;
    Ok(FirstOrderFrames { base: frame.to_vec(), velocity })
}

/// Rows `(a_i, b_i, c_i)` of the coefficients of `a_i + b_i ζ + c_i ζ²` and an
/// antisymmetric `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionMatrix<C: Scalar> {
    pub p: Vec<[C; 3]>,
    pub lambda: Matrix<C>,
}

impl<C: Scalar> ObstructionMatrix<C> {
    pub fn new(p: Vec<[C; 3]>, lambda: Matrix<C>) -> Result<Self> {
        let n = p.len();
        if lambda.rows() != n || lambda.cols() != n {
            return Err(Error::DimensionMismatch { expected: n, found: lambda.rows() });
        }
        for j in 0..n {
            for k in 0..n {
                if lambda[(j, k)] != -lambda[(k, j)].clone() {
                    return Err(Error::Domain("λ is not antisymmetric".into()));
                }
            }
        }
        Ok(ObstructionMatrix { p, lambda })
    }

    pub fn with_zero_lambda(p: Vec<[C; 3]>) -> Self {
        let n = p.len();
        ObstructionMatrix { p, lambda: Matrix::from_fn(n, n, |_, _| C::zero()) }
    }

    pub fn rank(&self) -> usize {
        Matrix::from_fn(self.p.len(), 3, |r, c| self.p[r][c].clone()).rank()
    }
}

/// `Σ_i (a_i + b_i ζ + c_i ζ²) ∂_ζ∧∂_{z_i} + Σ_{j<k} λ_{jk} ∂_{z_j}∧∂_{z_k}` on
/// `C^{n+1}` with `ζ` at index 0 and `z_i` at index `i`.
pub fn build_torus_cp1_bivector<C: Scalar>(m: &ObstructionMatrix<C>) -> Multivector<C> {
    let n = m.p.len() + 1;
    let zeta = Poly::<C>::var(0);
    let mut beta = Multivector::zero(n);
    for (i, row) in m.p.iter().enumerate() {
        let f = Poly::constant(row[0].clone())
            + zeta.scale(&row[1])
            + (zeta.clone() * zeta.clone()).scale(&row[2]);
        beta.add_term(1 | (1 << (i + 1)), f);
    }
    for j in 0..m.p.len() {
        for k in (j + 1)..m.p.len() {
            beta.add_term((1 << (j + 1)) | (1 << (k + 1)), Poly::constant(m.lambda[(j, k)].clone()));
        }
    }
    beta
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ObstructionReport {
    pub rank: usize,
    pub schouten_zero: bool,
    /// `rank ≤ 1` agrees with `[β,β] = 0`.
    pub consistent: bool,
}

impl ObstructionReport {
    pub fn rank_condition(&self) -> bool {
        self.rank <= 1
    }
}

pub fn obstruction_rank_test<C: Scalar>(m: &ObstructionMatrix<C>) -> Result<ObstructionReport> {
    let rank = m.rank();
    let beta = build_torus_cp1_bivector(m);
    let schouten_zero = beta.schouten(&beta)?.is_zero();
    Ok(ObstructionReport { rank, schouten_zero, consistent: (rank <= 1) == schouten_zero })
}
