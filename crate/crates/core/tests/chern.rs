mod common;

use lincat_core::chern::{certify_cocycle, chern_class, chern_cochain, invariance_certificate, k0_chern, tilde_mechanism, K0Element};
use lincat_core::connection::{direct_sum_connection, levi_civita};
use lincat_core::derham::build_derham;
use lincat_core::linalg::is_zero_vector;
use lincat_core::module::direct_sum;
use lincat_core::{instances, DGCategory, Error, Graded, ObjectId, ProjectiveModule};

#[test]
fn chern_cochains_are_cocycles() {
    let mut rng = common::rng(21);
    for q in 1..=2 {
        for (name, w) in common::dg_fixtures(2 * q + 1) {
            let modules = common::modules(w.base());
            for k in 0..10 {
                let (label, m) = &modules[k % modules.len()];
                let conn = common::random_connection(&w, m, &mut rng);
                let cert = certify_cocycle(&w, &conn, q).unwrap_or_else(|e| panic!("{name} {label} q={q}: {e}"));
                assert!(cert.verify());
            }
        }
    }
}

#[test]
fn classes_do_not_depend_on_the_connection() {
    let mut rng = common::rng(22);
    for q in 1..=2 {
        for (name, w) in common::universal_fixtures(2 * q + 1) {
            let complex = build_derham(&w).unwrap();
            for (label, m) in common::modules(w.base()) {
                for _ in 0..5 {
                    let a = common::random_connection(&w, &m, &mut rng);
                    let b = common::random_connection(&w, &m, &mut rng);
                    let cert = invariance_certificate(&w, &complex, &a, &b, q).unwrap_or_else(|e| panic!("{name} {label} q={q}: {e}"));
                    let d_eta = complex.apply_d(2 * q - 1, &cert.eta).unwrap();
                    assert_eq!(d_eta, complex.class_of(&cert.difference).unwrap());
                    assert_eq!(cert.mechanism_eta.is_some(), m.is_free(&w));
                }
            }
        }
    }
}

#[test]
fn deformation_argument_on_free_modules() {
    let mut rng = common::rng(23);
    for q in 1..=2 {
        for (name, w) in common::universal_fixtures(2 * q + 1) {
            let complex = build_derham(&w).unwrap();
            for (label, m) in common::modules(w.base()).into_iter().filter(|(_, m)| m.is_free(w.base())) {
                for _ in 0..3 {
                    let conn = common::random_connection(&w, &m, &mut rng);
                    let mech = tilde_mechanism(&w, &complex, &conn, q).unwrap_or_else(|e| panic!("{name} {label}: {e}"));
                    let omega = chern_cochain(&w, &conn, q).unwrap();
                    let diff = lincat_core::linalg::sub_vectors(&mech.ev1, &mech.ev0);
                    assert_eq!(diff, complex.class_of(&omega).unwrap());
                    assert_eq!(diff, mech.chern);
                }
            }
        }
    }
}

#[test]
fn chern_map_respects_direct_sums() {
    let mut rng = common::rng(24);
    for q in 0..=2 {
        for (name, w) in common::dg_fixtures(2 * q + 1) {
            let complex = build_derham(&w).unwrap();
            let modules: Vec<ProjectiveModule> = common::modules(w.base()).into_iter().map(|(_, m)| m).collect();
            for (i, a) in modules.iter().enumerate() {
                let b = &modules[(i * 7 + 3) % modules.len()];
                let (ca, cb) = (common::random_connection(&w, a, &mut rng), common::random_connection(&w, b, &mut rng));
                let sum = direct_sum_connection(&w, &ca, &cb).unwrap();
                let lhs = chern_cochain(&w, &sum, q).unwrap();
                let rhs = chern_cochain(&w, &ca, q).unwrap().add(&chern_cochain(&w, &cb, q).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{name} q={q}");

                let s = direct_sum(w.base(), a, b).unwrap().module;
                let list = vec![a.clone(), b.clone(), s];
                let class = k0_chern(&w, &complex, &list, &K0Element::relation(0, 1, 2), q).unwrap();
                assert!(is_zero_vector(&class.representative.coords), "{name} q={q}");
                assert!(class.is_zero());
            }
        }
    }
}

#[test]
fn free_modules_have_vanishing_higher_classes() {
    let mut rng = common::rng(25);
    for q in 1..=2 {
        for (name, w) in common::universal_fixtures(2 * q + 1) {
            let complex = build_derham(&w).unwrap();
            for (label, m) in common::modules(w.base()).into_iter().filter(|(_, m)| m.is_free(w.base())) {
                let conn = common::random_connection(&w, &m, &mut rng);
                assert!(chern_class(&w, &complex, &conn, q).unwrap().is_zero(), "{name} {label} q={q}");
            }
        }
    }
}

#[test]
fn nonfree_levi_civita_curvature_is_visible_at_cochain_level() {
    let w = DGCategory::universal(instances::cycle2(), 3).unwrap();
    let modules = common::modules(w.base());
    let (_, m) = modules.iter().find(|(l, _)| l == "K[b,a]").unwrap();
    let omega = chern_cochain(&w, &levi_civita(&w, m).unwrap(), 1).unwrap();
    assert!(!omega.is_zero());
}

#[test]
fn truncation_too_small_is_reported() {
    let w = DGCategory::universal(instances::dual_numbers(), 4).unwrap();
    let m = ProjectiveModule::free(w.base(), &[ObjectId(0)]).unwrap();
    let conn = levi_civita(&w, &m).unwrap();
    assert_eq!(certify_cocycle(&w, &conn, 2).unwrap_err(), Error::TruncationExceeded { required: 5, truncation: 4 });
    assert!(certify_cocycle(&w, &conn, 1).is_ok());
    assert_eq!(w.truncation(), 4);
}
