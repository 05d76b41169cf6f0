mod common;

use common::*;
use genkahler::linalg::Matrix;
use genkahler::spinor::type_of_structure;
use genkahler::{Form, GCStructure, GaussRat, Polyvector};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn j_beta_t_matches_explicit_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2, 3] {
        for _ in 0..10 {
            let beta = rand_poisson(&mut rng, n, false);
            let a = beta.clone() + beta.conj();
            let jj = GCStructure::<GaussRat>::make_jj(n).t_coefficients()[0].clone();
            let expected = trimmed(conjugate_by_hand(&jj, &sharp_block(&a)));
            let got = GCStructure::make_j_beta_t(&beta).unwrap();
            assert_eq!(trimmed(got.t_coefficients().to_vec()), expected, "β = {beta:?}");
        }
    }
}

#[test]
fn constructors_are_generalized_complex() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for n in [1, 2, 3] {
        let jj = GCStructure::<GaussRat>::make_jj(n);
        let jo = GCStructure::make_jomega(&Form::standard_kahler(n)).unwrap();
        assert!(jj.squares_to_minus_one().unwrap() && jj.is_orthogonal().unwrap());
        assert!(jo.squares_to_minus_one().unwrap() && jo.is_orthogonal().unwrap());
    }
    for n in [2, 3] {
        let beta = rand_poisson(&mut rng, n, false);
        let j = GCStructure::make_j_beta_t(&beta).unwrap();
        assert!(j.squares_to_minus_one().unwrap());
        assert!(j.is_orthogonal().unwrap());
        let b = Form::dz(n, 0).wedge(&Form::dzb(n, 1));
        let jb = j.b_field_transform(&b).unwrap();
        assert!(jb.squares_to_minus_one().unwrap() && jb.is_orthogonal().unwrap());
        let t = q(1, 2);
        for _ in 0..5 {
            let x = rand_point(&mut rng, n);
            assert_eq!(j.eigenframe_at(&t, &x).unwrap().len(), 2 * n);
            assert!(j.is_almost_complex_at(&t, &x).unwrap());
            // a B-field transform does not change the type
            assert_eq!(jb.type_at(&t, &x).unwrap(), j.type_at(&t, &x).unwrap());
        }
    }
}

/// Rank of `β(x)` in wedge pairs, from a matrix assembled here.
fn rank_pairs(beta: &Polyvector, x: &[genkahler::Rational]) -> usize {
    let n = beta.n();
    let mut m = Matrix::<GaussRat>::zeros(2 * n, 2 * n);
    for (&mask, c) in beta.terms() {
        let s: Vec<usize> = (0..2 * n).filter(|k| mask & (1 << k) != 0).collect();
        let v = c.eval_at(x).unwrap();
        m[(s[0], s[1])] = v.clone();
        m[(s[1], s[0])] = -v;
    }
    m.rank() / 2
}

#[test]
fn type_formula() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let t = q(1, 2);
    for n in [2, 3, 4] {
        for constant in [true, false] {
            let beta = rand_poisson(&mut rng, n, constant);
            let j = GCStructure::make_j_beta_t(&beta).unwrap();
            for _ in 0..20 {
                let x = rand_point(&mut rng, n);
                let ty = j.type_at(&t, &x).unwrap();
                assert_eq!(ty, n - 2 * rank_pairs(&beta, &x));
                assert_eq!(ty, n - 2 * beta.rank_at(&x).unwrap());
                assert_eq!(type_of_structure(&j.matrix_at(&t, &x).unwrap()).unwrap(), ty);
            }
        }
    }
}

#[test]
fn quadric_chart_has_type_two() {
    let n = 4;
    let e = |a: usize| Polyvector::slot(n, a, z(a));
    let beta = (e(0) + e(1)).wedge(&(e(2) + e(3)));
    let j = GCStructure::make_j_beta_t(&beta).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let x = rand_point(&mut rng, n);
        let generic = (0..2).any(|k| !x[k].is_zero() || !x[n + k].is_zero())
            && (2..4).any(|k| !x[k].is_zero() || !x[n + k].is_zero());
        let ty = j.type_at(&q(1, 2), &x).unwrap();
        assert_eq!(ty, if generic { 2 } else { 4 });
    }
}

#[test]
fn type_at_t_zero_is_complex() {
    let beta = dz_wedge(2, 0, 1, z(0));
    let j = GCStructure::make_j_beta_t(&beta).unwrap();
    assert_eq!(j.type_at(&q(0, 1), &[q(1, 1), q(0, 1), q(0, 1), q(0, 1)]).unwrap(), 2);
    assert_eq!(j.type_at(&q(1, 1), &[q(1, 1), q(0, 1), q(0, 1), q(0, 1)]).unwrap(), 0);
    assert_eq!(j.type_at(&q(1, 1), &[q(0, 1), q(1, 1), q(0, 1), q(0, 1)]).unwrap(), 2);
}
