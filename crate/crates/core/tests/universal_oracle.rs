//! Independent recomputation of universal-form dimensions and of the
//! commutator subspaces.

mod common;

use lincat_core::derham::commutator_subspace;
use lincat_core::graded::{graded_commutator, DiagonalForm};
use lincat_core::linalg::{build_quotient, rank, unit_vector, zeros, Matrix};
use lincat_core::{Form, Graded, ObjectId, Vector};
use rand::Rng;

/// `dim ker(μ: ⊕_z _xC_z ⊗ _zC_y → _xC_y)`.
fn kernel_of_composition<G: Graded>(g: &G, x: ObjectId, y: ObjectId) -> usize {
    let c = g.base();
    let mut columns = Vec::new();
    for z in g.objects() {
        for a in 0..c.hom_dim(x, z) {
            for b in 0..c.hom_dim(z, y) {
                columns.push(c.compose_coords(0, 0, x, z, y, &unit_vector(c.hom_dim(x, z), a), &unit_vector(c.hom_dim(z, y), b)));
            }
        }
    }
    columns.len() - rank(&Matrix::from_columns(c.hom_dim(x, y), &columns).unwrap())
}

/// `dim (Ωᵖ ⊗_C Ω^q)_xy` as a literal quotient of `⊕_z _xΩᵖ_z ⊗ _zΩ^q_y`.
fn tensor_over_c<G: Graded>(g: &G, p: usize, q: usize, x: ObjectId, y: ObjectId) -> usize {
    let objects = g.objects();
    let mut offsets = Vec::new();
    let mut total = 0;
    for &z in &objects {
        offsets.push(total);
        total += g.dim(p, x, z) * g.dim(q, z, y);
    }
    let mut relations: Vec<Vector> = Vec::new();
    for &z in &objects {
        for &w in &objects {
            for a in 0..g.dim(p, x, z) {
                for f in 0..g.dim(0, z, w) {
                    for b in 0..g.dim(q, w, y) {
                        let (av, fv, bv) = (unit_vector(g.dim(p, x, z), a), unit_vector(g.dim(0, z, w), f), unit_vector(g.dim(q, w, y), b));
                        let af = g.compose_coords(p, 0, x, z, w, &av, &fv);
                        let fb = g.compose_coords(0, q, z, w, y, &fv, &bv);
                        let mut rel = zeros(total);
                        for (i, coef) in af.iter().enumerate() {
                            rel[offsets[w.0] + i * g.dim(q, w, y) + b] += coef;
                        }
                        for (j, coef) in fb.iter().enumerate() {
                            rel[offsets[z.0] + a * g.dim(q, z, y) + j] -= coef;
                        }
                        relations.push(rel);
                    }
                }
            }
        }
    }
    build_quotient(total, &relations).unwrap().dim()
}

#[test]
fn degree_one_is_kernel_of_composition() {
    for (name, w) in common::universal_fixtures(3) {
        for x in w.objects() {
            for y in w.objects() {
                assert_eq!(w.dim(1, x, y), kernel_of_composition(&w, x, y), "{name} at ({x}, {y})");
            }
        }
    }
}

#[test]
fn higher_degrees_are_tensor_powers() {
    for (name, w) in common::universal_fixtures(4) {
        for x in w.objects() {
            for y in w.objects() {
                assert_eq!(w.dim(2, x, y), tensor_over_c(&w, 1, 1, x, y), "{name} Ω² at ({x}, {y})");
                assert_eq!(w.dim(3, x, y), tensor_over_c(&w, 2, 1, x, y), "{name} Ω³ at ({x}, {y})");
                assert_eq!(w.dim(4, x, y), tensor_over_c(&w, 2, 2, x, y), "{name} Ω⁴ at ({x}, {y})");
            }
        }
    }
}

#[test]
fn dual_numbers_dimensions() {
    let (_, w) = common::universal_fixtures(4).swap_remove(1);
    let star = ObjectId(0);
    assert!((0..=4).all(|n| w.dim(n, star, star) == 2));
}

/// Brackets of random (non-basis) diagonal-composable pairs land inside the
/// subspace spanned by brackets of basis pairs.
#[test]
fn commutator_span_is_complete() {
    let mut rng = common::rng(7);
    for (name, w) in common::universal_fixtures(4) {
        for n in 0..=4 {
            let space = commutator_subspace(&w, n).unwrap();
            for _ in 0..10 {
                let p = rng.gen_range(0..=n);
                let x = ObjectId(rng.gen_range(0..w.object_count()));
                let y = ObjectId(rng.gen_range(0..w.object_count()));
                let random_form = |degree, cod, dom, rng: &mut rand::rngs::StdRng| Form {
                    degree,
                    cod,
                    dom,
                    coords: (0..w.dim(degree, cod, dom)).map(|_| common::random_scalar(rng)).collect(),
                };
                let left = random_form(p, x, y, &mut rng);
                let right = random_form(n - p, y, x, &mut rng);
                let bracket: DiagonalForm = graded_commutator(&w, &left, &right).unwrap();
                assert!(space.contains(&bracket.coords).unwrap(), "{name} degree {n}");
            }
        }
    }
}
