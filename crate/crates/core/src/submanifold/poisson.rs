//! Poisson submanifolds, induced bivectors, invariant ideals and extension of
//! affine bivectors to projective space.

use num_traits::Zero;

use crate::coeffring::{Poly, PolyIdeal, Scalar};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::tensorcalc::exterior::slots;
use crate::tensorcalc::Multivector;

/// `{F, g} ∈ I` for every generator `F` and every coordinate function `g`.
pub fn is_poisson_submanifold<C: Scalar>(beta: &Multivector<C>, ideal: &PolyIdeal<C>) -> Result<bool> {
    let n = beta.n();
    for f in ideal.generators() {
        for a in 0..2 * n {
            let b = beta.poisson_bracket(f, &Poly::var(a))?;
            if !ideal.contains(&b)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn holomorphic_matrix<C: Scalar>(beta: &Multivector<C>) -> Result<Matrix<Poly<C>>> {
    let n = beta.n();
    if beta.terms().any(|(&m, _)| slots(m).any(|a| a >= n)) {
        return Err(Error::Domain("bivector has antiholomorphic components".into()));
    }
    Ok(beta.bivector_matrix().block(0, 0, n, n))
}

#[derive(Clone, Debug)]
pub struct InducedPoisson<C: Scalar> {
    pub beta_m: Multivector<C>,
    pub nontrivial: bool,
    /// `φ_* β_M = β ∘ φ` on every component.
    pub consistent: bool,
}

/// Bivector induced on `M` through a graph-type parametrization `z = φ(w)`,
/// where each `w_a` is itself one of the coordinates `z_{σ(a)}`.
pub fn induced_poisson<C: Scalar>(beta: &Multivector<C>, phi: &[Poly<C>], m: usize) -> Result<InducedPoisson<C>> {
    let n = beta.n();
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: phi.len() });
    }
    let sigma: Vec<usize> = (0..m)
        .map(|a| {
            phi.iter()
                .position(|p| *p == Poly::var(a))
                .ok_or_else(|| Error::Domain("parametrization is not of graph type".into()))
        })
        .collect::<Result<_>>()?;
    let b = holomorphic_matrix(beta)?;
    let mut subs: Vec<Poly<C>> = phi.to_vec();
    subs.extend(phi.iter().map(|p| p.conj(m)));
    let pulled = b.try_map(|c| c.compose(&subs))?;
    let bm = Matrix::from_fn(m, m, |a, c| pulled[(sigma[a], sigma[c])].clone());
    let mut beta_m = Multivector::zero(m);
    for a in 0..m {
        for c in (a + 1)..m {
            beta_m.add_term((1 << a) | (1 << c), bm[(a, c)].clone());
        }
    }
    let jac = Matrix::from_fn(n, m, |i, a| phi[i].derivative(a));
    let push = jac.try_mul(&bm)?.try_mul(&jac.transpose())?;
    let consistent = push == pulled;
    Ok(InducedPoisson { nontrivial: !beta_m.is_zero(), beta_m, consistent })
}

/// `V_i(F) ∈ I` for all generators, after checking the fields commute.
pub fn group_invariant_ideal_check<C: Scalar>(fields: &[Multivector<C>], ideal: &PolyIdeal<C>) -> Result<bool> {
    for (i, u) in fields.iter().enumerate() {
        for v in &fields[i + 1..] {
            if !u.schouten(v)?.is_zero() {
                return Err(Error::Domain("vector fields do not commute".into()));
            }
        }
    }
    for v in fields {
        for f in ideal.generators() {
            if !ideal.contains(&v.apply(f))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveReport {
    pub extends: bool,
    /// Charts (by the index of the coordinate inverted) where a pole remains.
    pub failing_charts: Vec<usize>,
}

/// Whether a holomorphic bivector on the chart `{ζ₀ ≠ 0}` of `CP^m` extends to
/// the other standard charts. `projective` lists the affine coordinates of
/// the `CP^m` factor; other coordinates are carried along unchanged.
pub fn extends_to_projective<C: Scalar>(beta: &Multivector<C>, projective: &[usize]) -> Result<ProjectiveReport> {
    let n = beta.n();
    let b = holomorphic_matrix(beta)?;
    let proj_degree = |p: &Poly<C>| -> u32 {
        p.terms().map(|(m, _)| projective.iter().map(|&j| *m.get(j).unwrap_or(&0) as u32).sum()).max().unwrap_or(0)
    };
    let mut depth = 0;
    for r in 0..n {
        for c in 0..n {
            depth = depth.max(proj_degree(&b[(r, c)]));
        }
    }
    let mut failing = Vec::new();
    for &k in projective {
        // ζ_k = 1/u_k, ζ_j = u_j/u_k; multiply through by u_k^depth
        let homog = |p: &Poly<C>| -> Poly<C> {
            let mut out = Poly::zero();
            for (m, c) in p.terms() {
                let mut m2 = m.clone();
                if m2.len() <= k {
                    m2.resize(k + 1, 0);
                }
                let d: u32 = projective.iter().map(|&j| *m.get(j).unwrap_or(&0) as u32).sum();
                m2[k] = (depth - d) as u8;
                out.add_term(m2, c.clone());
            }
            out
        };
        let uk = Poly::<C>::var(k);
        let jac = Matrix::from_fn(n, n, |a, i| {
            if a == k {
                if i == k {
                    -(uk.clone() * uk.clone())
                } else {
                    Poly::zero()
                }
            } else if projective.contains(&a) {
                if i == a {
                    uk.clone()
                } else if i == k {
                    -(Poly::var(a) * uk.clone())
                } else {
                    Poly::zero()
                }
            } else if i == a {
                Poly::constant(C::one())
            } else {
                Poly::zero()
            }
        });
        let bh = b.map(homog);
        let transformed = jac.try_mul(&bh)?.try_mul(&jac.transpose())?;
        let pole = (0..n).any(|r| {
            (0..n).any(|c| transformed[(r, c)].terms().any(|(m, _)| (*m.get(k).unwrap_or(&0) as u32) < depth))
        });
        if pole {
            failing.push(k);
        }
    }
    Ok(ProjectiveReport { extends: failing.is_empty(), failing_charts: failing })
}

/// `β_f = f₁ ∂₂∧∂₃ + f₂ ∂₃∧∂₁ + f₃ ∂₁∧∂₂` on `C³`, with `f_i = ∂f/∂ζ_i`.
pub fn cubic_bivector<C: Scalar>(f: &Poly<C>) -> Multivector<C> {
    let n = 3;
    let term = |a: usize, b: usize, c: Poly<C>| Multivector::slot(n, a, c).wedge(&Multivector::d_z(n, b));
    term(1, 2, f.derivative(0)) + term(2, 0, f.derivative(1)) + term(0, 1, f.derivative(2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeffring::Ring;
    use crate::{GaussRat, PolyScalar};

    type V = Multivector<GaussRat>;

    fn z(k: usize) -> PolyScalar {
        PolyScalar::var(k)
    }

    #[test]
    fn poisson_submanifolds() {
        let f = z(0) * z(1) * z(2);
        let bf = cubic_bivector(&f);
        assert!(bf.is_poisson().unwrap());
        assert!(is_poisson_submanifold(&bf, &PolyIdeal::principal(f)).unwrap());
        let b = V::slot(2, 0, z(0)).wedge(&V::d_z(2, 1));
        assert!(is_poisson_submanifold(&b, &PolyIdeal::principal(z(0))).unwrap());
        let c = V::d_z(2, 0).wedge(&V::d_z(2, 1));
        assert!(!is_poisson_submanifold(&c, &PolyIdeal::principal(z(0))).unwrap());
    }

    #[test]
    fn induced_bivectors() {
        let b = V::slot(2, 0, z(0)).wedge(&V::d_z(2, 1));
        let r = induced_poisson(&b, &[PolyScalar::zero(), z(0)], 1).unwrap();
        assert!(!r.nontrivial && r.consistent);
        // M = {ζ3 = 0} for f = ζ1ζ2ζ3: β_M = w1w2 ∂1∧∂2
        let bf = cubic_bivector(&(z(0) * z(1) * z(2)));
        let r = induced_poisson(&bf, &[z(0), z(1), PolyScalar::zero()], 2).unwrap();
        assert!(r.nontrivial && r.consistent);
        assert_eq!(r.beta_m, V::slot(2, 0, z(0) * z(1)).wedge(&V::d_z(2, 1)));
        assert!(!induced_poisson(&V::zero(2), &[PolyScalar::zero(), z(0)], 1).unwrap().nontrivial);
    }

    #[test]
    fn toric_and_quadric_invariance() {
        let n = 3;
        let fields: Vec<V> = (0..n).map(|i| V::slot(n, i, z(i))).collect();
        let ideal = PolyIdeal::new(vec![z(0) * z(1), z(2) * z(2)]);
        assert!(group_invariant_ideal_check(&fields, &ideal).unwrap());
        let generic = PolyIdeal::principal(z(0) + z(1) * z(1));
        assert!(!group_invariant_ideal_check(&fields, &generic).unwrap());
        let non_commuting = vec![V::slot(1, 0, z(0)), V::d_z(1, 0)];
        assert!(group_invariant_ideal_check(&non_commuting, &generic).is_err());
    }

    #[test]
    fn projective_degree_condition() {
        let cubic = z(0) * z(1) * z(2) + z(0) * z(0) * z(0) + PolyScalar::from_i64(1);
        assert!(extends_to_projective(&cubic_bivector(&cubic), &[0, 1, 2]).unwrap().extends);
        let quintic = z(0).pow(5).unwrap() + z(1) * z(2);
        assert!(!extends_to_projective(&cubic_bivector(&quintic), &[0, 1, 2]).unwrap().extends);
        // a + bζ + cζ² on CP¹ times a torus coordinate
        let field = PolyScalar::from_i64(1) + z(0) * PolyScalar::from_i64(2) + z(0) * z(0);
        let b = V::slot(2, 0, field).wedge(&V::d_z(2, 1));
        assert!(extends_to_projective(&b, &[0]).unwrap().extends);
        let b3 = V::slot(2, 0, z(0).pow(3).unwrap()).wedge(&V::d_z(2, 1));
        assert!(!extends_to_projective(&b3, &[0]).unwrap().extends);
    }
}
