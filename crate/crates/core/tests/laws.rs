mod common;

use common::*;
use genkahler::clifford::{pairing, GenSection};
use genkahler::{Form, PolyScalar, Polyvector};
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

fn section(n: usize) -> impl Strategy<Value = GenSection<genkahler::GaussRat>> {
    (vector_field(n, 1), form(n, 1).prop_map(|f| f.part(1))).prop_map(|(v, f)| GenSection::new(v, f))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn d_squares_to_zero(phi in form(2, 2)) {
        prop_assert!(phi.d().d().is_zero());
        prop_assert!(phi.del().del().is_zero());
        prop_assert!(phi.delbar().delbar().is_zero());
        prop_assert_eq!(phi.del().delbar(), -phi.delbar().del());
        prop_assert_eq!(phi.del() + phi.delbar(), phi.d());
    }

    #[test]
    fn d_squares_to_zero_c3(phi in form(3, 2)) {
        prop_assert!(phi.d().d().is_zero());
    }

    #[test]
    fn cartan_formula(phi in form(2, 2), v in vector_field(2, 2)) {
        let cartan = phi.d().interior(&v).unwrap() + phi.interior(&v).unwrap().d();
        prop_assert_eq!(phi.lie_derivative(&v).unwrap(), cartan.clone());
        prop_assert_eq!(lie_by_components(&phi, &v), cartan);
    }

    #[test]
    fn clifford_relation(u in section(2), v in section(2), phi in form(2, 1)) {
        let lhs = spin(&u, &spin(&v, &phi)) + spin(&v, &spin(&u, &phi));
        let two_pair = pairing(&u, &v).unwrap().scale(&g(2, 0));
        prop_assert_eq!(lhs, phi.mul_poly(&two_pair).unwrap());
        // the Clifford algebra acts as the explicit spin action
        prop_assert_eq!(u.to_clifford().act(&phi).unwrap(), spin(&u, &phi));
    }

    #[test]
    fn homotopy_identity(phi in positive_form(2, 2)) {
        let k = |f: &Form| f.homotopy_operator();
        prop_assert_eq!(k(&phi).d() + k(&phi.d()), phi);
    }

    #[test]
    fn homotopy_identity_c3(phi in positive_form(3, 1)) {
        prop_assert_eq!(phi.homotopy_operator().d() + phi.d().homotopy_operator(), phi);
    }

    #[test]
    fn closed_forms_are_exact(alpha in positive_form(2, 2)) {
        let phi = alpha.d();
        prop_assert_eq!(phi.homotopy().unwrap().d(), phi);
    }

    #[test]
    fn schouten_graded_symmetry(p in polyvector(2, 1, 2), q in polyvector(2, 2, 1)) {
        // [P, Q] = -(-1)^{(p-1)(q-1)} [Q, P]
        prop_assert_eq!(p.schouten(&q).unwrap(), -q.schouten(&p).unwrap());
        prop_assert_eq!(q.schouten(&q).unwrap(), q.schouten(&q).unwrap());
    }

    #[test]
    fn schouten_jacobi(p in polyvector(2, 1, 1), q in polyvector(2, 2, 1), r in polyvector(2, 2, 1)) {
        // [P,[Q,R]] = [[P,Q],R] + (-1)^{(p-1)(q-1)} [Q,[P,R]] with p = 1
        let lhs = p.schouten(&q.schouten(&r).unwrap()).unwrap();
        let rhs = p.schouten(&q).unwrap().schouten(&r).unwrap() + q.schouten(&p.schouten(&r).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn poisson_jacobi(seed in any::<u64>(), f in hol_poly(3, 2, 2), gg in hol_poly(3, 2, 2), h in hol_poly(3, 2, 2)) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let beta = rand_poisson(&mut rng, 3, false);
        prop_assert!(beta.is_poisson().unwrap());
        let br = |a: &PolyScalar, b: &PolyScalar| beta.poisson_bracket(a, b).unwrap();
        let jac = br(&f, &br(&gg, &h)) + br(&gg, &br(&h, &f)) + br(&h, &br(&f, &gg));
        prop_assert!(num_traits::Zero::is_zero(&jac));
    }
}

#[test]
fn examples() {
    let n = 2;
    let dz = |j| Form::dz(n, j);
    let dzb = |j| Form::dzb(n, j);
    // d(z̄₁ dz₁) = dz̄₁∧dz₁ = −dz₁∧dz̄₁
    let phi = Form::scalar(n, z(2)).wedge(&dz(0));
    assert_eq!(phi.d(), -dz(0).wedge(&dzb(0)));
    // contraction convention i_{∂₁∧∂₂} = i_{∂₁} ∘ i_{∂₂}
    let b = dz_wedge(n, 0, 1, one());
    let w = dz(0).wedge(&dz(1));
    let nested = w.interior(&Polyvector::d_z(n, 1)).unwrap().interior(&Polyvector::d_z(n, 0)).unwrap();
    assert_eq!(w.contract(&b).unwrap(), nested);
    assert_eq!(nested, Form::scalar(n, -one()));
    // L_{z₁∂₁} dz₁ = dz₁
    let v = Polyvector::slot(n, 0, z(0));
    assert_eq!(dz(0).lie_derivative(&v).unwrap(), dz(0));
    // {z₁, z₂} = β(dz₁∧dz₂) = −z₁ for β = z₁∂₁∧∂₂ under the same convention
    let beta = dz_wedge(n, 0, 1, z(0));
    assert_eq!(beta.poisson_bracket(&z(0), &z(1)).unwrap(), -z(0));
}
