mod common;

use lincat_core::derham::{build_derham, homotopy_defect, tilde_cochain, tilde_complex, DeRhamComplex, TildeCochain};
use lincat_core::dg::{compose_tilde, partial, PolyForm, TildeForm};
use lincat_core::linalg::{int, is_zero_vector, sub_vectors};
use lincat_core::{Form, Graded, ObjectId, Scalar, Vector};
use rand::rngs::StdRng;
use rand::Rng;

fn random_vector(len: usize, rng: &mut StdRng) -> Vector {
    (0..len).map(|_| common::random_scalar(rng)).collect()
}

fn random_cochain(complex: &DeRhamComplex, n: usize, rng: &mut StdRng) -> TildeCochain {
    let terms = rng.gen_range(1..=4);
    let part0 = (0..terms).map(|_| random_vector(complex.dim(n), rng)).collect();
    let part1 = if n == 0 { Vec::new() } else { (0..terms).map(|_| random_vector(complex.dim(n - 1), rng)).collect() };
    tilde_cochain(complex, n, part0, part1).unwrap()
}

#[test]
fn homotopy_formula_on_random_cochains() {
    let mut rng = common::rng(31);
    for (name, w) in common::dg_fixtures(4) {
        let complex = build_derham(&w).unwrap();
        for k in 0..24 {
            let n = 1 + k % 4;
            let c = random_cochain(&complex, n, &mut rng);
            assert!(is_zero_vector(&homotopy_defect(&complex, &c).unwrap()), "{name} degree {n}");
        }
        // Degree 0: k∘δ = ev₁ − ev₀.
        let c = random_cochain(&complex, 0, &mut rng);
        let k_delta = complex.homotopy_k(&complex.tilde_delta(&c).unwrap()).unwrap();
        assert_eq!(k_delta, sub_vectors(&complex.ev_at(&c, &int(1)), &complex.ev_at(&c, &int(0))));
    }
}

#[test]
fn extended_differential_squares_to_zero() {
    let mut rng = common::rng(32);
    for (name, w) in common::universal_fixtures(4) {
        let complex = build_derham(&w).unwrap();
        for n in 0..=2 {
            let c = random_cochain(&complex, n, &mut rng);
            let dd = complex.tilde_delta(&complex.tilde_delta(&c).unwrap()).unwrap();
            assert!(dd.is_zero(), "{name} degree {n}");
        }
    }
}

#[test]
fn evaluations_are_chain_maps() {
    let mut rng = common::rng(33);
    let points: Vec<Scalar> = [0, 1, -1, 2].into_iter().map(int).collect();
    for (name, w) in common::dg_fixtures(4) {
        let complex = build_derham(&w).unwrap();
        for n in 0..4 {
            for _ in 0..5 {
                let c = random_cochain(&complex, n, &mut rng);
                let delta = complex.tilde_delta(&c).unwrap();
                for a in &points {
                    let lhs = complex.ev_at(&delta, a);
                    let rhs = complex.apply_d(n, &complex.ev_at(&c, a)).unwrap();
                    assert_eq!(lhs, rhs, "{name} degree {n} at {a}");
                }
            }
        }
    }
}

#[test]
fn splitting_dimensions_agree() {
    for q in 1..=2 {
        for (name, w) in common::dg_fixtures(2 * q + 1) {
            let complex = build_derham(&w).unwrap();
            let tilde = tilde_complex(&w, &complex, 2 * q).unwrap();
            assert!(tilde.splitting_holds(), "{name} D={}: {:?}", 2 * q, tilde.splitting);
        }
    }
}

fn random_poly<G: Graded>(g: &G, degree: usize, cod: ObjectId, dom: ObjectId, rng: &mut StdRng) -> PolyForm {
    let mut p = PolyForm::zero(degree, cod, dom);
    for power in 0..rng.gen_range(1..=3) {
        let form = Form { degree, cod, dom, coords: random_vector(g.dim(degree, cod, dom), rng) };
        p = p.add(&PolyForm::monomial(&form, power)).unwrap();
    }
    p
}

fn random_tilde<G: Graded>(g: &G, degree: usize, cod: ObjectId, dom: ObjectId, rng: &mut StdRng) -> TildeForm {
    let omega1 = (degree > 0).then(|| random_poly(g, degree - 1, cod, dom, rng));
    TildeForm::new(random_poly(g, degree, cod, dom, rng), omega1).unwrap()
}

/// `∂² = 0`, the graded Leibniz rule and associativity in `Ω̃`.
#[test]
fn tilde_forms_form_a_dg_category() {
    let mut rng = common::rng(34);
    for (name, w) in common::universal_fixtures(5) {
        let k = w.object_count();
        for _ in 0..20 {
            let (x, y, z, v) = (
                ObjectId(rng.gen_range(0..k)),
                ObjectId(rng.gen_range(0..k)),
                ObjectId(rng.gen_range(0..k)),
                ObjectId(rng.gen_range(0..k)),
            );
            let (p, q, r) = (rng.gen_range(0..=2), rng.gen_range(0..=1), rng.gen_range(0..=1));
            let a = random_tilde(&w, p, x, y, &mut rng);
            let b = random_tilde(&w, q, y, z, &mut rng);
            let c = random_tilde(&w, r, z, v, &mut rng);
            assert_eq!(partial(&w, &partial(&w, &a)).normalized(), TildeForm::new(PolyForm::zero(p + 2, x, y), None).unwrap().normalized());

            let ab = compose_tilde(&w, &a, &b).unwrap();
            let lhs = partial(&w, &ab);
            let first = compose_tilde(&w, &partial(&w, &a), &b).unwrap();
            let second = compose_tilde(&w, &a, &partial(&w, &b)).unwrap();
            let second1 = second.omega1.clone().unwrap_or_else(|| PolyForm::zero(p + q, x, z));
            let first1 = first.omega1.clone().unwrap_or_else(|| PolyForm::zero(p + q, x, z));
            let sign = if p % 2 == 0 { int(1) } else { int(-1) };
            let rhs =
                TildeForm::new(first.omega0.add(&second.omega0.scale(&sign)).unwrap(), Some(first1.add(&second1.scale(&sign)).unwrap()))
                    .unwrap();
            assert_eq!(lhs.normalized(), rhs.normalized(), "{name} Leibniz degrees ({p}, {q})");

            let left = compose_tilde(&w, &ab, &c).unwrap();
            let right = compose_tilde(&w, &a, &compose_tilde(&w, &b, &c).unwrap()).unwrap();
            assert_eq!(left.normalized(), right.normalized(), "{name} associativity");
        }
    }
}
