mod common;

use lincat_core::category::{validate_category, CategoryBuilder, Violation};
use lincat_core::dg::validate_dg;
use lincat_core::graded::graded_commutator;
use lincat_core::linalg::int;
use lincat_core::{instances, DGCategory, Error, FormMatrix, Graded, ObjectId, ProjectiveModule};
use proptest::prelude::*;

#[test]
fn every_fixture_validates() {
    for (name, c) in common::categories() {
        assert!(validate_category(&c).is_empty(), "{name}");
    }
    for (name, w) in common::dg_fixtures(4) {
        assert!(validate_dg(&w).is_empty(), "{name}: {:?}", validate_dg(&w));
    }
}

#[test]
fn broken_unit_is_reported() {
    let c = CategoryBuilder::new(["*"])
        .hom(0, 0, ["1", "u"])
        .identity(0, [("1", int(1))])
        .rule("1", "1", [("1", int(1))])
        .rule("u", "1", [("u", int(1))])
        .build()
        .unwrap();
    let found = validate_category(&c);
    assert!(found.iter().any(|v| matches!(v, Violation::LeftUnit { .. })), "{found:?}");
}

#[test]
fn broken_associativity_is_reported() {
    // ab = a, every other product of a and b zero: (ab)b = a but a(bb) = 0.
    let c = CategoryBuilder::new(["*"])
        .hom(0, 0, ["1", "a", "b"])
        .identity(0, [("1", int(1))])
        .rule("1", "1", [("1", int(1))])
        .rule("1", "a", [("a", int(1))])
        .rule("a", "1", [("a", int(1))])
        .rule("1", "b", [("b", int(1))])
        .rule("b", "1", [("b", int(1))])
        .rule("a", "b", [("a", int(1))])
        .build()
        .unwrap();
    let found = validate_category(&c);
    assert!(found.iter().any(|v| matches!(v, Violation::Associativity { .. })), "{found:?}");
}

#[test]
fn nonzero_d_squared_is_reported() {
    let mut w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
    let (n, x, y, a) = w.find_form("du").unwrap();
    let (_, _, _, b) = w.find_form("du·du").unwrap();
    let mut target = vec![int(0); w.dim(2, x, y)];
    target[b] = int(1);
    w.set_differential(n, x, y, a, &target).unwrap();
    let found = validate_dg(&w);
    assert!(found.iter().any(|v| matches!(v, Violation::DifferentialSquare { .. })), "{found:?}");
}

#[test]
fn leibniz_violation_is_reported() {
    let mut w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
    let (_, x, y, one) = w.find_form("1").unwrap();
    let (_, _, _, du) = w.find_form("du").unwrap();
    let mut target = vec![int(0); w.dim(1, x, y)];
    target[du] = int(1);
    w.set_differential(0, x, y, one, &target).unwrap();
    let found = validate_dg(&w);
    assert!(found.iter().any(|v| matches!(v, Violation::Leibniz { .. })), "{found:?}");
    assert!(!found.iter().any(|v| matches!(v, Violation::DifferentialSquare { .. })));
}

#[test]
fn non_idempotent_is_rejected_with_witness() {
    let c = instances::dual_numbers();
    let star = [ObjectId(0), ObjectId(0)];
    let one = vec![int(1), int(0)];
    let zero = vec![int(0), int(0)];
    let e = FormMatrix::from_entries(&c, &star, &star, 0, vec![vec![one.clone(), one.clone()], vec![zero, one]]).unwrap();
    assert_eq!(ProjectiveModule::from_idempotent(&c, &star, e), Err(Error::NotIdempotent { row: 0, col: 1 }));
}

#[test]
fn graded_commutator_of_odd_forms_is_symmetric() {
    let w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
    let star = ObjectId(0);
    let du = w.basis_form(1, star, star, w.find_form("du").unwrap().3);
    let bracket = graded_commutator(&w, &du, &du).unwrap();
    let square = w.compose_forms(&du, &du).unwrap();
    assert_eq!(bracket.coords, square.scale(&int(2)).coords);
}

fn morphism_strategy() -> impl Strategy<Value = (usize, usize, usize, Vec<i64>, Vec<i64>)> {
    (0usize..4, 0usize..3, 0usize..3, prop::collection::vec(-3i64..=3, 8), prop::collection::vec(-3i64..=3, 8))
}

proptest! {
    #[test]
    fn units_and_trace_symmetry((which, x, y, f, g) in morphism_strategy()) {
        let (_, c) = common::categories().swap_remove(which);
        let k = c.object_count();
        let (x, y) = (ObjectId(x % k), ObjectId(y % k));
        let f = c.morphism(x, y, f[..c.hom_dim(x, y)].iter().map(|&v| int(v)).collect()).unwrap();
        let g = c.morphism(y, x, g[..c.hom_dim(y, x)].iter().map(|&v| int(v)).collect()).unwrap();
        let id_x = c.morphism(x, x, c.identity(x).to_vec()).unwrap();
        let id_y = c.morphism(y, y, c.identity(y).to_vec()).unwrap();
        prop_assert_eq!(c.compose(&id_x, &f).unwrap(), f.clone());
        prop_assert_eq!(c.compose(&f, &id_y).unwrap(), f.clone());
        let fg = lincat_core::DiagonalForm::from_form(&c, &c.compose(&f, &g).unwrap()).unwrap();
        let gf = lincat_core::DiagonalForm::from_form(&c, &c.compose(&g, &f).unwrap()).unwrap();
        prop_assert_eq!(c.commutator_class(&fg).unwrap(), c.commutator_class(&gf).unwrap());
    }
}
