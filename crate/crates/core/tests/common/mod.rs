#![allow(dead_code)]

use lincat_core::category::Category;
use lincat_core::connection::{compress_connection, free_connection, Connection};
use lincat_core::linalg::{int, ratio};
use lincat_core::{DGCategory, FormMatrix, Graded, ObjectId, ProjectiveModule, Scalar};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn categories() -> Vec<(&'static str, Category)> {
    use lincat_core::instances::*;
    vec![("point", point()), ("dual_numbers", dual_numbers()), ("a2_path", a2_path()), ("cycle2", cycle2())]
}

/// Universal and trivial DG-categories over every small category.
pub fn dg_fixtures(truncation: usize) -> Vec<(String, DGCategory)> {
    let mut out = Vec::new();
    for (name, c) in categories() {
        out.push((format!("{name}/universal"), DGCategory::universal(c.clone(), truncation).unwrap()));
        out.push((format!("{name}/trivial"), DGCategory::trivial(c, truncation)));
    }
    out
}

pub fn universal_fixtures(truncation: usize) -> Vec<(String, DGCategory)> {
    categories().into_iter().map(|(n, c)| (n.to_string(), DGCategory::universal(c, truncation).unwrap())).collect()
}

fn basis_arrow(c: &Category, x: ObjectId, y: ObjectId, a: usize) -> Vec<Scalar> {
    let mut v = vec![int(0); c.hom_dim(x, y)];
    v[a] = int(1);
    v
}

/// Free modules on single objects and on all objects, plus `[[1, 0], [f, 0]]`
/// and `[[0, 0], [f, 1]]` for every non-identity basis arrow `f`.
pub fn modules(c: &Category) -> Vec<(String, ProjectiveModule)> {
    let mut out = Vec::new();
    let objects = c.objects();
    for &x in &objects {
        out.push((format!("free[{x}]"), ProjectiveModule::free(c, &[x]).unwrap()));
    }
    out.push(("free[all]".into(), ProjectiveModule::free(c, &objects).unwrap()));
    for &x in &objects {
        for &y in &objects {
            for a in 0..c.hom_dim(x, y) {
                let f = basis_arrow(c, x, y, a);
                if f == c.identity(x) && x == y {
                    continue;
                }
                let family = [y, x];
                let zero = |r: ObjectId, s: ObjectId| vec![int(0); c.hom_dim(r, s)];
                let left = vec![vec![c.identity(y).to_vec(), zero(y, x)], vec![f.clone(), zero(x, x)]];
                let right = vec![vec![zero(y, y), zero(y, x)], vec![f.clone(), c.identity(x).to_vec()]];
                for (tag, entries) in [("L", left), ("R", right)] {
                    let e = FormMatrix::from_entries(c, &family, &family, 0, entries).unwrap();
                    out.push((format!("{tag}[{}]", c.hom_labels(x, y)[a]), ProjectiveModule::from_idempotent(c, &family, e).unwrap()));
                }
            }
        }
    }
    // `[[1, g], [f, 0]]` is idempotent exactly when `gf = 0` and `fg = 0`.
    for &x in &objects {
        for &y in &objects {
            if x >= y {
                continue;
            }
            for a in 0..c.hom_dim(x, y) {
                for b in 0..c.hom_dim(y, x) {
                    let family = [y, x];
                    let entries = vec![
                        vec![c.identity(y).to_vec(), basis_arrow(c, y, x, b)],
                        vec![basis_arrow(c, x, y, a), vec![int(0); c.hom_dim(x, x)]],
                    ];
                    let e = FormMatrix::from_entries(c, &family, &family, 0, entries).unwrap();
                    if let Ok(m) = ProjectiveModule::from_idempotent(c, &family, e) {
                        out.push((format!("K[{},{}]", c.hom_labels(x, y)[a], c.hom_labels(y, x)[b]), m));
                    }
                }
            }
        }
    }
    if c.object_count() == 1 && c.hom_dim(ObjectId(0), ObjectId(0)) == 1 {
        let h = ratio(1, 2);
        let star = [ObjectId(0), ObjectId(0)];
        let e = FormMatrix::from_entries(c, &star, &star, 0, vec![vec![vec![h.clone()]; 2]; 2]).unwrap();
        out.push(("half".into(), ProjectiveModule::from_idempotent(c, &star, e).unwrap()));
    }
    out
}

pub fn random_scalar(rng: &mut StdRng) -> Scalar {
    match rng.gen_range(0..8) {
        0 => ratio(rng.gen_range(-3..=3), 2),
        1 | 2 => int(0),
        _ => int(rng.gen_range(-2..=2)),
    }
}

pub fn random_matrix<G: Graded + ?Sized>(g: &G, rows: &[ObjectId], cols: &[ObjectId], degree: usize, rng: &mut StdRng) -> FormMatrix {
    let zero = FormMatrix::zero(g, rows, cols, degree);
    let flat: Vec<Scalar> = (0..zero.flat_coords().len()).map(|_| random_scalar(rng)).collect();
    FormMatrix::from_flat(g, rows, cols, degree, &flat).unwrap()
}

/// A compression of a random free connection.
pub fn random_connection<G: Graded + ?Sized>(g: &G, module: &ProjectiveModule, rng: &mut StdRng) -> Connection {
    let family = module.family();
    let free = free_connection(g, family, random_matrix(g, family, family, 1, rng)).unwrap();
    if module.is_free(g) {
        free
    } else {
        compress_connection(g, &free, module).unwrap()
    }
}
