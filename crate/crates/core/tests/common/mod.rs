//! Random exact inputs shared by the integration tests.
#![allow(dead_code)]

use genkahler::clifford::GenSection;
use genkahler::deform::ObstructionMatrix;
use genkahler::linalg::Matrix;
use genkahler::submanifold::cubic_bivector;
use genkahler::{Form, GaussRat, PolyScalar, Polyvector, Rational, Scalar};
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn q(p: i64, d: i64) -> Rational {
    Rational::new(p.into(), d.into())
}

pub fn g(re: i64, im: i64) -> GaussRat {
    GaussRat::new(q(re, 1), q(im, 1))
}

pub fn z(j: usize) -> PolyScalar {
    PolyScalar::var(j)
}

pub fn cst(c: GaussRat) -> PolyScalar {
    PolyScalar::constant(c)
}

// proptest strategies

pub fn gauss() -> impl Strategy<Value = GaussRat> {
    (-3i64..=3, -3i64..=3).prop_map(|(a, b)| g(a, b))
}

/// Polynomial in `nvars` variables with at most `terms` monomials of partial
/// degree `<= maxdeg`.
pub fn poly(nvars: usize, maxdeg: u8, terms: usize) -> impl Strategy<Value = PolyScalar> {
    prop::collection::vec((prop::collection::vec(0..=maxdeg, nvars), gauss()), 0..=terms)
        .prop_map(PolyScalar::from_terms)
}

pub fn form(n: usize, maxdeg: u8) -> impl Strategy<Value = Form> {
    prop::collection::vec((0..(1u32 << (2 * n)), poly(2 * n, maxdeg, 2)), 0..=3)
        .prop_map(move |ts| Form::from_terms(n, ts))
}

/// Form without a degree-0 part.
pub fn positive_form(n: usize, maxdeg: u8) -> impl Strategy<Value = Form> {
    prop::collection::vec((1..(1u32 << (2 * n)), poly(2 * n, maxdeg, 2)), 0..=3)
        .prop_map(move |ts| Form::from_terms(n, ts))
}

pub fn vector_field(n: usize, maxdeg: u8) -> impl Strategy<Value = Polyvector> {
    prop::collection::vec((0..2 * n, poly(2 * n, maxdeg, 2)), 0..=2)
        .prop_map(move |ts| Polyvector::from_terms(n, ts.into_iter().map(|(s, c)| (1u32 << s, c))))
}

pub fn polyvector(n: usize, k: usize, maxdeg: u8) -> impl Strategy<Value = Polyvector> {
    let masks: Vec<u32> = (0..(1u32 << (2 * n))).filter(|m| m.count_ones() as usize == k).collect();
    prop::collection::vec((prop::sample::select(masks), poly(2 * n, maxdeg, 2)), 0..=2)
        .prop_map(move |ts| Polyvector::from_terms(n, ts))
}

/// Holomorphic polynomial in `z_1..z_n` only.
pub fn hol_poly(n: usize, maxdeg: u8, terms: usize) -> impl Strategy<Value = PolyScalar> {
    poly(n, maxdeg, terms)
}

// seeded generators for structured samples

pub fn rand_gauss(rng: &mut impl Rng) -> GaussRat {
    g(rng.gen_range(-3..=3), rng.gen_range(-3..=3))
}

pub fn rand_hol_poly(rng: &mut impl Rng, n: usize, maxdeg: u8, terms: usize) -> PolyScalar {
    let mut p = PolyScalar::zero();
    for _ in 0..terms {
        let m: Vec<u8> = (0..n).map(|_| rng.gen_range(0..=maxdeg)).collect();
        p = p + PolyScalar::monomial(m, rand_gauss(rng));
    }
    p
}

/// Holomorphic polynomial of total degree `<= total`.
pub fn rand_hol_poly_total(rng: &mut impl Rng, n: usize, total: u32, terms: usize) -> PolyScalar {
    let mut p = PolyScalar::zero();
    for _ in 0..terms {
        let mut m = vec![0u8; n];
        for _ in 0..rng.gen_range(0..=total) {
            m[rng.gen_range(0..n)] += 1;
        }
        p = p + PolyScalar::monomial(m, rand_gauss(rng));
    }
    p
}

pub fn rand_point(rng: &mut impl Rng, n: usize) -> Vec<Rational> {
    (0..2 * n).map(|_| q(rng.gen_range(-4..=4), rng.gen_range(1..=3))).collect()
}

pub fn dz_wedge(n: usize, a: usize, b: usize, c: PolyScalar) -> Polyvector {
    Polyvector::slot(n, a, c).wedge(&Polyvector::d_z(n, b))
}

/// A holomorphic Poisson bivector on `C^n`. `constant` forces constant
/// coefficients. Sources: arbitrary bivectors on `C²`, `β_f` on `C³`, and
/// `Σ λ_{jk} z_j z_k ∂_j∧∂_k` (commuting Euler fields) in any dimension.
pub fn rand_poisson(rng: &mut impl Rng, n: usize, constant: bool) -> Polyvector {
    if constant {
        // constant bivectors of rank <= 1 pairs plus, for n >= 4, a second
        // block on disjoint indices: all Schouten brackets vanish anyway
        let mut b = Polyvector::zero(n);
        for a in 0..n {
            for c in a + 1..n {
                if rng.gen_bool(0.5) {
                    b = b + dz_wedge(n, a, c, cst(rand_gauss(rng)));
                }
            }
        }
        return b;
    }
    match (n, rng.gen_range(0..2)) {
        (2, _) => dz_wedge(2, 0, 1, rand_hol_poly(rng, 2, 2, 3)),
        (3, 0) => cubic_bivector(&rand_hol_poly(rng, 3, 2, 3)),
        _ => {
            let mut b = Polyvector::zero(n);
            for a in 0..n {
                for c in a + 1..n {
                    if rng.gen_bool(0.6) {
                        b = b + dz_wedge(n, a, c, z(a) * z(c) * cst(rand_gauss(rng)));
                    }
                }
            }
            b
        }
    }
}

pub fn rand_obstruction(rng: &mut impl Rng, rows: usize, low_rank: bool) -> ObstructionMatrix<GaussRat> {
    let p: Vec<[GaussRat; 3]> = if low_rank {
        let u: Vec<GaussRat> = (0..rows).map(|_| rand_gauss(rng)).collect();
        let v: [GaussRat; 3] = [rand_gauss(rng), rand_gauss(rng), rand_gauss(rng)];
        u.iter().map(|x| [x.clone() * v[0].clone(), x.clone() * v[1].clone(), x.clone() * v[2].clone()]).collect()
    } else {
        (0..rows).map(|_| [rand_gauss(rng), rand_gauss(rng), rand_gauss(rng)]).collect()
    };
    let mut lambda = Matrix::zeros(rows, rows);
    for j in 0..rows {
        for k in j + 1..rows {
            let c = rand_gauss(rng);
            lambda[(j, k)] = c.clone();
            lambda[(k, j)] = -c;
        }
    }
    ObstructionMatrix::new(p, lambda).expect("antisymmetric")
}

pub fn one() -> PolyScalar {
    PolyScalar::one()
}

// independent reference computations

pub type PMat = Matrix<PolyScalar>;

/// `L_v` from the component formula
/// `L_v(f dx^I) = v(f) dx^I + f Σ_j dx^{i_1}∧…∧d(v^{i_j})∧…∧dx^{i_k}`.
pub fn lie_by_components(phi: &Form, v: &Polyvector) -> Form {
    let n = phi.n();
    let vc = v.components();
    let mut out = Form::zero(n);
    for (&mask, f) in phi.terms() {
        let idx: Vec<usize> = (0..2 * n).filter(|a| mask & (1 << a) != 0).collect();
        out = out + Form::basis(n, mask, v.apply(f));
        for j in 0..idx.len() {
            let mut acc = Form::scalar(n, f.clone());
            for (k, &a) in idx.iter().enumerate() {
                let factor = if k == j { Form::differential(n, &vc[a]) } else { Form::slot(n, a, one()) };
                acc = acc.wedge(&factor);
            }
            out = out + acc;
        }
    }
    out
}

/// `(v + θ)·φ = i_v φ + θ∧φ`.
pub fn spin(e: &GenSection<GaussRat>, phi: &Form) -> Form {
    phi.interior(&e.vector).unwrap() + e.form.wedge(phi)
}

/// `a♯` on covectors written out from the terms of `a`: the `(a, b)` entry of
/// the upper-right block is `a^{ab}`.
pub fn sharp_block(a: &Polyvector) -> PMat {
    let n = a.n();
    let mut m = PMat::zeros(4 * n, 4 * n);
    for (&mask, c) in a.terms() {
        let s: Vec<usize> = (0..2 * n).filter(|k| mask & (1 << k) != 0).collect();
        m[(s[0], 2 * n + s[1])] = m[(s[0], 2 * n + s[1])].clone() + c.clone();
        m[(s[1], 2 * n + s[0])] = m[(s[1], 2 * n + s[0])].clone() - c.clone();
    }
    m
}

/// `t`-coefficients of `(I + tN) J (I − tN)` with `N² = 0`.
pub fn conjugate_by_hand(j: &PMat, nmat: &PMat) -> Vec<PMat> {
    let nj = nmat.try_mul(j).unwrap();
    let jn = j.try_mul(nmat).unwrap();
    let njn = nj.try_mul(nmat).unwrap();
    vec![j.clone(), nj - jn, -njn]
}

pub fn trimmed(mut v: Vec<PMat>) -> Vec<PMat> {
    while v.len() > 1 && v.last().unwrap().is_zero() {
        v.pop();
    }
    v
}

/// `Z_i^± − Z_i = ±t·½ Σ_a conj(β^{ai}) ∂̄_a` for `Z_i = ∂_i` and the
/// standard `ω`, where `θ̄^i = ½ dz̄_i`.
pub fn expected_velocity(beta: &Polyvector, i: usize) -> Polyvector {
    let n = beta.n();
    let half = GaussRat::from_frac(1, 2);
    let mut v = Polyvector::zero(n);
    for (&mask, c) in beta.terms() {
        let s: Vec<usize> = (0..n).filter(|k| mask & (1 << k) != 0).collect();
        let cb = c.conj(n).scale(&half);
        if s[1] == i {
            v = v + Polyvector::slot(n, n + s[0], cb.clone());
        }
        if s[0] == i {
            v = v - Polyvector::slot(n, n + s[1], cb);
        }
    }
    v
}

/// `rank P ≤ 1` from the 2×2 minors.
pub fn rank_at_most_one(p: &[[GaussRat; 3]]) -> bool {
    for r in 0..p.len() {
        for s in r + 1..p.len() {
            for a in 0..3 {
                for b in a + 1..3 {
                    let minor = p[r][a].clone() * p[s][b].clone() - p[r][b].clone() * p[s][a].clone();
                    if !minor.is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

