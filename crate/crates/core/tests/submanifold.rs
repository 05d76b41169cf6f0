mod common;

use common::*;
use genkahler::deform::solve_deformation;
use genkahler::spinor::{type_of_structure, PointForm};
use genkahler::submanifold::{
    cubic_bivector, extends_to_projective, group_invariant_ideal_check, induced_structure_at, is_conormal_invariant,
    is_j_submanifold, is_poisson_submanifold, SubmanifoldModel,
};
use genkahler::{Form, GCStructure, GaussRat, PolyIdeal, PolyScalar, Polyvector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn cubics() -> Vec<PolyScalar> {
    let c = |k: i64| cst(g(k, 0));
    vec![
        z(0) * z(1) * z(2),
        z(0) * z(0) * z(0) + z(1) * z(1) * z(2),
        z(0) * z(0) * z(1) + z(2) * z(2) * z(2) + z(1) * z(2) * c(1),
    ]
}

fn surface(f: &PolyScalar, samples: usize, seed: u64) -> SubmanifoldModel<GaussRat> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SubmanifoldModel::complex(3, vec![f.clone()]).unwrap().find_points(&mut rng, samples, 200 * samples).unwrap()
}

#[test]
fn cubic_surfaces_are_poisson_and_conormal_invariant() {
    for (i, f) in cubics().iter().enumerate() {
        let beta = cubic_bivector(f);
        assert!(beta.is_poisson().unwrap());
        let ideal = PolyIdeal::new(vec![f.clone()]);
        assert!(is_poisson_submanifold(&beta, &ideal).unwrap());
        let j = GCStructure::make_j_beta_t(&beta).unwrap();
        let m = surface(f, 20, 100 + i as u64);
        assert_eq!(m.points().len(), 20);
        for t in [q(1, 2), q(1, 1), q(-2, 1)] {
            let r = is_conormal_invariant(&j, &t, &m).unwrap();
            assert!(r.holds, "cubic {i}, t = {t}: {:?}", r.per_sample);
        }
    }
}

#[test]
fn cubic_surface_inherits_type_zero() {
    let f = &cubics()[0];
    let j = GCStructure::make_j_beta_t(&cubic_bivector(f)).unwrap();
    let m = surface(f, 8, 7);
    let t = q(1, 2);
    assert!(is_j_submanifold(&j, &t, &m).unwrap().holds);
    for x in m.points() {
        let jm = induced_structure_at(&j.matrix_at(&t, x).unwrap(), &m, x).unwrap();
        assert_eq!(type_of_structure(&jm).unwrap(), 0);
    }
}

#[test]
fn non_poisson_hypersurface_is_not_invariant() {
    let f = &cubics()[0];
    let beta = cubic_bivector(f);
    let plane = z(0) + z(1) + cst(g(1, 0));
    let ideal = PolyIdeal::new(vec![plane.clone()]);
    assert!(!is_poisson_submanifold(&beta, &ideal).unwrap());
    let j = GCStructure::make_j_beta_t(&beta).unwrap();
    let m = surface(&plane, 10, 9);
    assert!(!is_conormal_invariant(&j, &q(1, 2), &m).unwrap().holds);
}

#[test]
fn torus_invariant_ideals() {
    let n = 3;
    let fields: Vec<Polyvector> = (0..n).map(|a| Polyvector::slot(n, a, z(a))).collect();
    let monomial = PolyIdeal::new(vec![z(0) * z(0) * z(1), z(1) * z(2) * z(2) * z(2)]);
    assert!(group_invariant_ideal_check(&fields, &monomial).unwrap());
    let line = PolyIdeal::new(vec![z(0) + z(1)]);
    assert!(!group_invariant_ideal_check(&fields, &line).unwrap());
}

#[test]
fn projective_extension_by_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for deg in 1..=3u32 {
        for _ in 0..3 {
            let f = rand_hol_poly_total(&mut rng, 3, deg, 3);
            let r = extends_to_projective(&cubic_bivector(&f), &[0, 1, 2]).unwrap();
            assert!(r.extends, "{f:?}");
        }
    }
    let quintic = z(0).pow(5).unwrap() + z(1) * z(2);
    let r = extends_to_projective(&cubic_bivector(&quintic), &[0, 1, 2]).unwrap();
    assert!(!r.extends && !r.failing_charts.is_empty());
}

#[test]
fn deformed_spinor_pulls_back_to_a_pure_spinor() {
    let f = &cubics()[0];
    let series = solve_deformation(&cubic_bivector(f), &Form::standard_kahler(3), 2, None, None).unwrap();
    assert_eq!(series.residual_zero_through, Some(2));
    let m = surface(f, 4, 31);
    let psi = series.spinor_at(&q(1, 2)).unwrap();
    for x in m.points() {
        let pb = PointForm::from_form(&psi, x).unwrap().pullback(&m.real_tangent_basis(x).unwrap());
        assert!(!pb.is_zero());
        assert_eq!(pb.kernel().unwrap().len(), 4);
        assert!(pb.is_nondegenerate().unwrap());
    }
}
