//! Polyvector fields and the Schouten bracket.

use num_traits::Zero;

use super::exterior::{degree_of, slots, Exterior, Mask, VectorKind};
use super::form::DiffForm;
use crate::coeffring::{Poly, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

pub type Multivector<C> = Exterior<C, VectorKind>;

/// Right derivative of `ξ_I` by `ξ_a`: `ξ_I = s · ξ_{I∖a} ξ_a`.
fn right_remove_sign(mask: Mask, a: usize) -> Option<i64> {
    if mask & (1 << a) == 0 {
        return None;
    }
    let above = (mask >> (a + 1)).count_ones();
    Some(if above.is_multiple_of(2) { 1 } else { -1 })
}

impl<C: Scalar> Multivector<C> {
    /// `∂/∂z_j`.
    pub fn d_z(n: usize, j: usize) -> Self {
        Self::slot(n, j, Poly::constant(C::one()))
    }

    /// `∂/∂zb_j`.
    pub fn d_zb(n: usize, j: usize) -> Self {
        Self::slot(n, n + j, Poly::constant(C::one()))
    }

    /// Vector field applied to a function.
    pub fn apply(&self, f: &Poly<C>) -> Poly<C> {
        let mut acc = Poly::zero();
        for (a, va) in self.components().iter().enumerate() {
            if !va.is_zero() {
                acc = acc + va.clone() * f.derivative(a);
            }
        }
        acc
    }

    fn right_derivative(&self, a: usize) -> Self {
        let mut out = Self::zero(self.n());
        for (&m, c) in self.terms() {
            if let Some(s) = right_remove_sign(m, a) {
                out.add_term(m & !(1 << a), c.scale(&C::from_i64(s)));
            }
        }
        out
    }

    fn coeff_derivative(&self, a: usize) -> Self {
        self.map_coeffs(|c| c.derivative(a))
    }

    /// Schouten–Nijenhuis bracket, extending the Lie bracket of vector fields:
    /// `[P,Q] = Σ_a ∂ʳ_{ξ_a}P · ∂_a Q − (−1)^{(p−1)(q−1)} ∂ʳ_{ξ_a}Q · ∂_a P`.
    pub fn schouten(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.n();
        let mut out = Self::zero(n);
        for p in self.degrees() {
            let pp = self.part(p);
            for q in other.degrees() {
                let qq = other.part(q);
                let sign = if (p + 1) * (q + 1) % 2 == 0 { -1 } else { 1 };
                for a in 0..2 * n {
                    let t1 = pp.right_derivative(a).try_wedge(&qq.coeff_derivative(a))?;
                    let t2 = qq.right_derivative(a).try_wedge(&pp.coeff_derivative(a))?;
                    // sign = −(−1)^{(p−1)(q−1)}
                    out = out + t1 + t2.scale(&C::from_i64(sign));
                }
            }
        }
        Ok(out)
    }

    /// `{f, g} = β(df ∧ dg)`, using the contraction convention of
    /// [`DiffForm::contract`].
    pub fn poisson_bracket(&self, f: &Poly<C>, g: &Poly<C>) -> Result<Poly<C>> {
        let n = self.n();
        let w = DiffForm::differential(n, f).try_wedge(&DiffForm::differential(n, g))?;
        Ok(w.contract(self)?.coeff(0))
    }

    pub fn is_poisson(&self) -> Result<bool> {
        Ok(self.schouten(self)?.is_zero())
    }

    /// Antisymmetric coefficient matrix `B[a][b] = β^{ab}` of the bivector part.
    pub fn bivector_matrix(&self) -> Matrix<Poly<C>> {
        let n = self.n();
        let mut m = Matrix::zeros(2 * n, 2 * n);
        for (&mask, c) in self.terms() {
            if degree_of(mask) != 2 {
                continue;
            }
            let s: Vec<usize> = slots(mask).collect();
            m[(s[0], s[1])] = c.clone();
            m[(s[1], s[0])] = -c.clone();
        }
        m
    }

    /// `β♯θ = Σ_{a<b} β^{ab} (θ_b ∂_a − θ_a ∂_b)`, the Clifford commutator
    /// `[β, θ]`.
    pub fn sharp(&self, theta: &DiffForm<C>) -> Result<Self> {
        let n = self.n();
        if theta.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: theta.n() });
        }
        let th = theta.components();
        let mut out = Self::zero(n);
        for (&mask, c) in self.terms() {
            if degree_of(mask) != 2 {
                continue;
            }
            let s: Vec<usize> = slots(mask).collect();
            let (a, b) = (s[0], s[1]);
            out.add_term(1 << a, c.try_mul(&th[b])?);
            out.add_term(1 << b, -c.try_mul(&th[a])?);
        }
        Ok(out)
    }

    /// Rank of the bivector at a point, counted in wedge pairs
    /// (half the rank of its coefficient matrix).
    pub fn rank_at(&self, point: &[C::Real]) -> Result<usize> {
        let m = self.bivector_matrix().try_map(|c| c.eval_at(point))?;
        Ok(m.rank() / 2)
    }

    /// Interior product of a form with this vector field's left slot, for
    /// degree-one elements: `θ(v)`.
    pub fn pair(&self, theta: &DiffForm<C>) -> Result<Poly<C>> {
        theta.evaluate_on(std::slice::from_ref(self))
    }
}
