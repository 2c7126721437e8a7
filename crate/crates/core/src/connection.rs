//! Connections on idempotent-presented projectives and their curvature.
//!
//! A connection on `eC(I)` is stored as a degree-1 matrix `Λ` over the free
//! cover and acts on e-fixed columns of every degree by `∇(v) = e(Λv + dv)`.
//! For `e = 1` this is the free connection `Λv + dv`; for `Λ = 0` it is the
//! Levi-Civita connection. The induced map on `M ⊗ Ωⁿ` satisfies
//! `∇(m⊗ω) = ∇(m)·ω + m⊗dω`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graded::{FormMatrix, Graded, ObjectId};
use crate::module::{direct_sum, standard_column, ProjectiveModule};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    module: ProjectiveModule,
    lambda: FormMatrix,
}

impl Connection {
    pub fn module(&self) -> &ProjectiveModule {
        &self.module
    }

    /// The matrix `Λ` on the free cover.
    pub fn lambda(&self) -> &FormMatrix {
        &self.lambda
    }

    /// `Λe + de`: the columns give `∇(mᵢ) = Σⱼ mⱼ ⊗ λ'ⱼᵢ` after applying `e`.
    /// For the Levi-Civita connection this is `d(e)`.
    pub fn generator_matrix<G: Graded + ?Sized>(&self, g: &G) -> Result<FormMatrix> {
        let e = self.module.idempotent();
        self.lambda.mul(g, e)?.add(&e.differential(g))
    }
}

fn check_lambda<G: Graded + ?Sized>(g: &G, family: &[ObjectId], lambda: &FormMatrix) -> Result<()> {
    if lambda.degree() != 1 {
        return Err(Error::DegreeMismatch { expected: 1, found: lambda.degree() });
    }
    if lambda.rows() != family || lambda.cols() != family {
        return Err(Error::InvalidInput("connection matrix is not indexed by the module's family".into()));
    }
    if g.truncation() == 0 {
        return Err(Error::TruncationExceeded { required: 1, truncation: 0 });
    }
    Ok(())
}

/// `∇(v) = Λv + dv` on `C(I)`.
pub fn free_connection<G: Graded + ?Sized>(g: &G, family: &[ObjectId], lambda: FormMatrix) -> Result<Connection> {
    check_lambda(g, family, &lambda)?;
    Ok(Connection { module: ProjectiveModule::free(g.base(), family)?, lambda })
}

/// The connection `(π ⊗ 1) ∘ ∇ ∘ σ` induced on `eC(I)` by a connection on `C(I)`.
pub fn compress_connection<G: Graded + ?Sized>(g: &G, free: &Connection, module: &ProjectiveModule) -> Result<Connection> {
    if !free.module.is_free(g) {
        return Err(Error::InvalidInput("only connections on free modules can be compressed".into()));
    }
    if free.module.family() != module.family() {
        return Err(Error::InvalidInput("connection and idempotent use different index families".into()));
    }
    Ok(Connection { module: module.clone(), lambda: free.lambda.clone() })
}

/// `∇(m) = Σᵢ mᵢ ⊗ dφ^i(m)`, the compression of the `Λ = 0` free connection.
pub fn levi_civita<G: Graded + ?Sized>(g: &G, module: &ProjectiveModule) -> Result<Connection> {
    let family = module.family();
    let lambda = FormMatrix::zero(g, family, family, 1);
    check_lambda(g, family, &lambda)?;
    Ok(Connection { module: module.clone(), lambda })
}

/// `∇₁ ⊕ ∇₂` on `M₁ ⊕ M₂`, with `Λ = diag(Λ₁, Λ₂)`.
pub fn direct_sum_connection<G: Graded + ?Sized>(g: &G, first: &Connection, second: &Connection) -> Result<Connection> {
    let sum = direct_sum(g.base(), &first.module, &second.module)?;
    Ok(Connection { module: sum.module, lambda: first.lambda.block_diag(g, &second.lambda)? })
}

/// `∇ⁿ: (M ⊗ Ωⁿ)_x → (M ⊗ Ω^{n+1})_x` on an e-fixed column of degree `n`.
pub fn extend<G: Graded + ?Sized>(g: &G, conn: &Connection, v: &FormMatrix) -> Result<FormMatrix> {
    let n = v.degree();
    if n + 1 > g.truncation() {
        return Err(Error::TruncationExceeded { required: n + 1, truncation: g.truncation() });
    }
    let raw = conn.lambda.mul(g, v)?.add(&v.differential(g))?;
    conn.module.project(g, &raw)
}

/// Curvature matrices from the two independent computations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvatureData {
    /// Columns `R(mᵢ) = ∇¹∇⁰(mᵢ)`.
    pub gamma: FormMatrix,
    /// `e(dΛ' + Λ'²)` with `Λ' = Λe + de`; equal to `dΛ + Λ²` on free modules.
    pub matrix_formula: FormMatrix,
}

impl CurvatureData {
    /// `Γ^q`; `q = 0` gives `e`.
    pub fn power<G: Graded + ?Sized>(&self, g: &G, e: &FormMatrix, q: usize) -> Result<FormMatrix> {
        if 2 * q > g.truncation() {
            return Err(Error::TruncationExceeded { required: 2 * q, truncation: g.truncation() });
        }
        let mut out = e.clone();
        for _ in 0..q {
            out = out.mul(g, &self.gamma)?;
        }
        Ok(out)
    }
}

/// Curvature, computed by composing `∇¹ ∘ ∇⁰` on generators and by the
/// matrix formula; the two must agree.
pub fn curvature<G: Graded + ?Sized>(g: &G, conn: &Connection) -> Result<CurvatureData> {
    if g.truncation() < 2 {
        return Err(Error::TruncationExceeded { required: 2, truncation: g.truncation() });
    }
    let e = conn.module.idempotent();
    let first = e.mul(g, &conn.generator_matrix(g)?)?;
    let second = conn.lambda.mul(g, &first)?.add(&first.differential(g))?;
    let gamma = e.mul(g, &second)?;

    let lg = conn.generator_matrix(g)?;
    let matrix_formula = e.mul(g, &lg.differential(g).add(&lg.mul(g, &lg)?)?)?;
    if let Some((i, j)) = gamma.first_difference(&matrix_formula) {
        return Err(Error::CertificationFailed(format!("curvature methods disagree at entry ({i}, {j})")));
    }
    Ok(CurvatureData { gamma, matrix_formula })
}

/// `Γ^q`, the matrix of `R(∇)^q` on the generators.
pub fn curvature_power<G: Graded + ?Sized>(g: &G, conn: &Connection, q: usize) -> Result<FormMatrix> {
    if 2 * q > g.truncation() {
        return Err(Error::TruncationExceeded { required: 2 * q, truncation: g.truncation() });
    }
    if q == 0 {
        return Ok(conn.module.idempotent().clone());
    }
    curvature(g, conn)?.power(g, conn.module.idempotent(), q)
}

/// Columns `(∇∘∇)^q(mᵢ)`, by applying the extended connection `2q` times.
pub fn iterated_curvature<G: Graded + ?Sized>(g: &G, conn: &Connection, q: usize) -> Result<FormMatrix> {
    if 2 * q > g.truncation() {
        return Err(Error::TruncationExceeded { required: 2 * q, truncation: g.truncation() });
    }
    let family = conn.module.family();
    let mut out = FormMatrix::zero(g, family, family, 2 * q);
    for i in 0..family.len() {
        let mut v = conn.module.generator(i);
        for _ in 0..2 * q {
            v = extend(g, conn, &v)?;
        }
        for r in 0..family.len() {
            out.set_entry(r, i, v.entry(r, 0).clone())?;
        }
    }
    Ok(out)
}

/// Pairs `(generator, basis arrow)` where `∇(mᵢ·f) ≠ ∇(mᵢ)·f + mᵢ⊗df`.
pub fn leibniz_defects<G: Graded + ?Sized>(g: &G, conn: &Connection) -> Result<Vec<(usize, ObjectId, usize)>> {
    let mut out = Vec::new();
    let family = conn.module.family();
    for (i, &xi) in family.iter().enumerate() {
        let m = conn.module.generator(i);
        let nabla_m = extend(g, conn, &m)?;
        for y in g.objects() {
            for a in 0..g.dim(0, xi, y) {
                let f = FormMatrix::from_flat(g, &[xi], &[y], 0, &crate::linalg::unit_vector(g.dim(0, xi, y), a))?;
                let lhs = extend(g, conn, &m.mul(g, &f)?)?;
                let rhs = nabla_m.mul(g, &f)?.add(&m.mul(g, &f.differential(g))?)?;
                if lhs != rhs {
                    out.push((i, y, a));
                }
            }
        }
    }
    Ok(out)
}

/// `∇(Σ eᵢ·fᵢ) = Σ eᵢ ⊗ λᵢⱼfⱼ + Σ eᵢ ⊗ dfᵢ` on `C(I)`, evaluated from the
/// coefficients `fᵢ ∈ _{x_i}C_x`.
pub fn coordinate_formula<G: Graded + ?Sized>(g: &G, conn: &Connection, coefficients: &FormMatrix) -> Result<FormMatrix> {
    let family = conn.module.family();
    let mut acc = FormMatrix::zero(g, family, coefficients.cols(), 1);
    for (i, _) in family.iter().enumerate() {
        let fi = coefficients.row(i);
        let ei = standard_column(g, family, i);
        let nabla_ei = conn.lambda.mul(g, &ei)?;
        acc = acc.add(&nabla_ei.mul(g, &fi)?)?.add(&ei.mul(g, &fi.differential(g))?)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dg::DGCategory;
    use crate::instances;
    use crate::linalg::int;
    use alloc::vec;

    fn dual_du() -> (DGCategory, Connection) {
        let w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
        let star = [ObjectId(0)];
        let lambda = FormMatrix::from_entries(&w, &star, &star, 1, vec![vec![vec![int(1), int(0)]]]).unwrap();
        let conn = free_connection(&w, &star, lambda).unwrap();
        (w, conn)
    }

    #[test]
    fn dual_numbers_du_connection() {
        let (w, conn) = dual_du();
        let star = ObjectId(0);
        // ∇(u) = du·u + du = −u·du + du
        let u = FormMatrix::column_from(&w, &[star], star, 0, vec![vec![int(0), int(1)]]).unwrap();
        let nabla_u = extend(&w, &conn, &u).unwrap();
        assert_eq!(nabla_u.entry(0, 0), &vec![int(1), int(-1)]);
        let curv = curvature(&w, &conn).unwrap();
        assert_eq!(w.basis_label(2, star, star, 0), "du·du");
        assert_eq!(curv.gamma.entry(0, 0), &vec![int(1), int(0)]);
        assert!(leibniz_defects(&w, &conn).unwrap().is_empty());
    }

    #[test]
    fn zero_connection_is_flat() {
        let w = DGCategory::universal(instances::a2_path(), 3).unwrap();
        let family = [ObjectId(0), ObjectId(1)];
        let conn = levi_civita(&w, &ProjectiveModule::free(w.base(), &family).unwrap()).unwrap();
        assert!(conn.generator_matrix(&w).unwrap().is_zero());
        assert!(curvature(&w, &conn).unwrap().gamma.is_zero());
        assert_eq!(curvature_power(&w, &conn, 0).unwrap(), FormMatrix::identity(&w, &family));
    }

    #[test]
    fn truncation_is_enforced() {
        let (w, conn) = dual_du();
        assert!(matches!(curvature_power(&w, &conn, 2), Err(Error::TruncationExceeded { .. })));
        let top = FormMatrix::zero(&w, &[ObjectId(0)], &[ObjectId(0)], 3);
        assert!(matches!(extend(&w, &conn, &top), Err(Error::TruncationExceeded { .. })));
    }
}
