//! Chern cochains `ω^q(M, ∇) = Tr(Γ^q)`, certificates that they are cocycles
//! and that their classes do not depend on the connection, and the Chern map
//! on formal K₀ elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::connection::{curvature_power, levi_civita, Connection};
use crate::derham::{tilde_trace, DeRhamComplex, TildeCochain};
use crate::dg::TildeMatrix;
use crate::error::{Error, Result};
use crate::graded::{commutator_generators, CommutatorGenerator, DiagonalForm, FormMatrix, Graded};
use crate::linalg::{int, is_zero_vector, solve_in_span, sub_vectors, Matrix, Scalar, Vector};
use crate::module::ProjectiveModule;

fn require_truncation<G: Graded + ?Sized>(g: &G, q: usize) -> Result<()> {
    if 2 * q + 1 > g.truncation() {
        return Err(Error::TruncationExceeded { required: 2 * q + 1, truncation: g.truncation() });
    }
    Ok(())
}

/// `ω^q(M, ∇) = Σ φ^{i₀}(m_{i₁}) γ_{i₁i₂} ⋯ γ_{i_q i₀}`, the trace of `e Γ^q`.
/// In degree 0 this is `Tr(e)`.
pub fn chern_cochain<G: Graded + ?Sized>(g: &G, conn: &Connection, q: usize) -> Result<DiagonalForm> {
    require_truncation(g, q)?;
    curvature_power(g, conn, q)?.trace(g)
}

/// `d(ω^q)` written as an explicit combination of commutators of basis pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleCertificate {
    pub q: usize,
    pub cochain: DiagonalForm,
    pub differential: DiagonalForm,
    pub terms: Vec<(CommutatorGenerator, Scalar)>,
}

impl CocycleCertificate {
    /// Recombines the commutators and compares with `d(ω^q)`.
    pub fn verify(&self) -> bool {
        let mut acc = vec![Scalar::zero(); self.differential.coords.len()];
        for (generator, coef) in &self.terms {
            crate::linalg::axpy(&mut acc, coef, &generator.value.coords);
        }
        acc == self.differential.coords
    }
}

/// Exhibits `d(ω^q)` inside the commutator subspace of degree `2q + 1`.
pub fn certify_cocycle<G: Graded + ?Sized>(g: &G, conn: &Connection, q: usize) -> Result<CocycleCertificate> {
    let cochain = chern_cochain(g, conn, q)?;
    check_involution(g, conn.module())?;
    let differential = cochain.differential(g);
    let generators = commutator_generators(g, 2 * q + 1);
    let columns: Vec<Vector> = generators.iter().map(|c| c.value.coords.clone()).collect();
    let m = Matrix::from_columns(differential.coords.len(), &columns)?;
    let solution = solve_in_span(&m, &differential.coords)?
        .ok_or_else(|| Error::CertificationFailed(format!("d(ω^{q}) is not a sum of commutators: {:?}", differential.coords)))?;
    let terms = generators.into_iter().zip(solution).filter(|(_, c)| !c.is_zero()).collect();
    let certificate = CocycleCertificate { q, cochain, differential, terms };
    if !certificate.verify() {
        return Err(Error::CertificationFailed("commutator combination does not reproduce d(ω^q)".into()));
    }
    Ok(certificate)
}

/// `Π = 2Ψ − 1` squares to the identity because `Ψ = e` is idempotent.
pub fn check_involution<G: Graded + ?Sized>(g: &G, module: &ProjectiveModule) -> Result<FormMatrix> {
    let id = FormMatrix::identity(g, module.family());
    let pi = module.gram(g)?.scale(&int(2)).sub(&id)?;
    if pi.mul(g, &pi)? != id {
        return Err(Error::CertificationFailed("Π = 2Ψ − 1 does not square to the identity".into()));
    }
    Ok(pi)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernClass {
    pub q: usize,
    pub representative: DiagonalForm,
    /// Coordinates in `Ω^{2q}_ab`.
    pub class: Vector,
    /// Coordinates in the basis of `H^{2q}` chosen by the complex.
    pub cohomology: Vector,
}

impl ChernClass {
    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.cohomology)
    }
}

fn class_of_cocycle(complex: &DeRhamComplex, q: usize, representative: DiagonalForm) -> Result<ChernClass> {
    let class = complex.class_of(&representative)?;
    let cohomology = complex.cohomology_class(2 * q, &class)?;
    Ok(ChernClass { q, representative, class, cohomology })
}

/// The class of `ω^q(M, ∇)` in `H^{2q}`, after certifying it is a cocycle.
pub fn chern_class<G: Graded + ?Sized>(g: &G, complex: &DeRhamComplex, conn: &Connection, q: usize) -> Result<ChernClass> {
    let certificate = certify_cocycle(g, conn, q)?;
    class_of_cocycle(complex, q, certificate.cochain)
}

/// The cochain `ϖ = ⟨Tr Γ̃^q⟩` for `Λ̃ = Λt` on a free module, together with
/// its evaluations and `η = k(ϖ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeMechanism {
    pub q: usize,
    pub varpi: TildeCochain,
    pub ev0: Vector,
    pub ev1: Vector,
    /// Class of `Tr((dΛ + Λ²)^q)`.
    pub chern: Vector,
    pub eta: Vector,
}

/// Runs the deformation argument on a free connection and checks
/// `δϖ = 0`, `ev₁(ϖ) − ev₀(ϖ) = ⟨Tr((dΛ+Λ²)^q)⟩` and `d_ab k(ϖ) = ⟨ω^q⟩`.
pub fn tilde_mechanism<G: Graded + ?Sized>(g: &G, complex: &DeRhamComplex, conn: &Connection, q: usize) -> Result<TildeMechanism> {
    require_truncation(g, q)?;
    if q == 0 {
        return Err(Error::InvalidInput("the deformation argument needs q ≥ 1".into()));
    }
    if !conn.module().is_free(g) {
        return Err(Error::InvalidInput("the deformation argument applies to free modules".into()));
    }
    let family = conn.module().family();
    let lambda = conn.lambda();
    let zero = FormMatrix::zero(g, family, family, 1);
    let lambda_t = TildeMatrix::new(family, family, 1, vec![zero, lambda.clone()], Vec::new())?;
    let gamma_t = lambda_t.partial(g).add(g, &lambda_t.mul(g, &lambda_t)?)?;
    let mut power = gamma_t.clone();
    for _ in 1..q {
        power = power.mul(g, &gamma_t)?;
    }
    let varpi = complex.tilde_class(&tilde_trace(g, &power)?)?;
    if !complex.tilde_delta(&varpi)?.is_zero() {
        return Err(Error::CertificationFailed(format!("⟨Tr Γ̃^{q}⟩ is not a cocycle")));
    }
    let ev0 = complex.ev_at(&varpi, &Scalar::zero());
    let ev1 = complex.ev_at(&varpi, &int(1));
    let gamma = lambda.differential(g).add(&lambda.mul(g, lambda)?)?;
    let mut gamma_q = gamma.clone();
    for _ in 1..q {
        gamma_q = gamma_q.mul(g, &gamma)?;
    }
    let chern = complex.class_of(&gamma_q.trace(g)?)?;
    if sub_vectors(&ev1, &ev0) != chern {
        return Err(Error::CertificationFailed(format!("ev₁ − ev₀ of ⟨Tr Γ̃^{q}⟩ differs from Tr((dΛ+Λ²)^{q})")));
    }
    let eta = complex.homotopy_k(&varpi)?;
    if complex.apply_d(2 * q - 1, &eta)? != chern {
        return Err(Error::CertificationFailed("d_ab k(ϖ) differs from the Chern cochain".into()));
    }
    Ok(TildeMechanism { q, varpi, ev0, ev1, chern, eta })
}

/// `η` with `d_ab η = ⟨ω^q(∇₁) − ω^q(∇₂)⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceCertificate {
    pub q: usize,
    pub difference: DiagonalForm,
    /// Coordinates in `Ω^{2q−1}_ab`; empty when `q = 0`.
    pub eta: Vector,
    /// For free modules, `k(ϖ₁) − k(ϖ₂)` from the deformation argument.
    pub mechanism_eta: Option<Vector>,
}

pub fn invariance_certificate<G: Graded + ?Sized>(
    g: &G,
    complex: &DeRhamComplex,
    first: &Connection,
    second: &Connection,
    q: usize,
) -> Result<InvarianceCertificate> {
    if first.module() != second.module() {
        return Err(Error::InvalidInput("connections live on different modules".into()));
    }
    let a = certify_cocycle(g, first, q)?.cochain;
    let b = certify_cocycle(g, second, q)?.cochain;
    let difference = a.sub(&b)?;
    let eta = complex
        .is_coboundary(&difference)?
        .ok_or_else(|| Error::CertificationFailed(format!("Chern cochains of degree {} differ by a non-coboundary", 2 * q)))?;
    let mechanism_eta = if q >= 1 && first.module().is_free(g) {
        let m1 = tilde_mechanism(g, complex, first, q)?;
        let m2 = tilde_mechanism(g, complex, second, q)?;
        let eta = sub_vectors(&m1.eta, &m2.eta);
        if complex.apply_d(2 * q - 1, &eta)? != complex.class_of(&difference)? {
            return Err(Error::CertificationFailed("deformation η does not bound the difference".into()));
        }
        Some(eta)
    } else {
        None
    };
    Ok(InvarianceCertificate { q, difference, eta, mechanism_eta })
}

/// A formal integer combination of modules, referenced by index into a
/// caller-held list.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct K0Element {
    terms: BTreeMap<usize, i64>,
}

impl K0Element {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `[M]` for module `index`.
    pub fn class(index: usize) -> Self {
        Self::zero().plus(index, 1)
    }

    /// Adds `coefficient · [M_index]`.
    pub fn plus(mut self, index: usize, coefficient: i64) -> Self {
        let slot = self.terms.entry(index).or_insert(0);
        *slot += coefficient;
        if *slot == 0 {
            self.terms.remove(&index);
        }
        self
    }

    /// `[M′] + [M″] − [M′ ⊕ M″]`.
    pub fn relation(first: usize, second: usize, sum: usize) -> Self {
        Self::zero().plus(first, 1).plus(second, 1).plus(sum, -1)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, i64)> + '_ {
        self.terms.iter().map(|(&i, &c)| (i, c))
    }
}

/// `Σ cᵢ · Ch^q(Mᵢ)`, each term computed with the Levi-Civita connection.
pub fn k0_chern<G: Graded + ?Sized>(
    g: &G,
    complex: &DeRhamComplex,
    modules: &[ProjectiveModule],
    element: &K0Element,
    q: usize,
) -> Result<ChernClass> {
    require_truncation(g, q)?;
    let mut representative = DiagonalForm::zero(g, 2 * q);
    for (index, coefficient) in element.terms() {
        let module = modules.get(index).ok_or_else(|| Error::InvalidInput(format!("no module with index {index}")))?;
        let cochain = certify_cocycle(g, &levi_civita(g, module)?, q)?.cochain;
        representative = representative.add(&cochain.scale(&int(coefficient)))?;
    }
    class_of_cocycle(complex, q, representative)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connection::{direct_sum_connection, free_connection};
    use crate::derham::build_derham;
    use crate::dg::DGCategory;
    use crate::instances;
    use crate::module::direct_sum;
    use crate::ObjectId;

    #[test]
    fn dual_numbers_du() {
        let w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
        let complex = build_derham(&w).unwrap();
        let star = [ObjectId(0)];
        let lambda = FormMatrix::from_entries(&w, &star, &star, 1, vec![vec![vec![int(1), int(0)]]]).unwrap();
        let conn = free_connection(&w, &star, lambda).unwrap();
        let omega = chern_cochain(&w, &conn, 1).unwrap();
        assert_eq!(omega.coords, vec![int(1), int(0)]);
        let class = chern_class(&w, &complex, &conn, 1).unwrap();
        assert!(is_zero_vector(&class.class));
        assert!(class.is_zero());

        let flat = levi_civita(&w, conn.module()).unwrap();
        let cert = invariance_certificate(&w, &complex, &conn, &flat, 1).unwrap();
        assert!(is_zero_vector(&cert.eta));
        assert!(cert.mechanism_eta.is_some());

        let rank = chern_class(&w, &complex, &flat, 0).unwrap();
        assert_eq!(rank.representative.coords, vec![int(1), int(0)]);
        assert!(!rank.is_zero());
    }

    #[test]
    fn truncation_checked() {
        let w = DGCategory::universal(instances::dual_numbers(), 2).unwrap();
        let conn = levi_civita(&w, &ProjectiveModule::free(w.base(), &[ObjectId(0)]).unwrap()).unwrap();
        assert!(matches!(chern_cochain(&w, &conn, 1), Err(Error::TruncationExceeded { required: 3, truncation: 2 })));
    }

    #[test]
    fn k0_relations_vanish() {
        let w = DGCategory::universal(instances::a2_path(), 3).unwrap();
        let complex = build_derham(&w).unwrap();
        let c = w.base();
        let family = [ObjectId(0), ObjectId(1)];
        let e =
            FormMatrix::from_entries(c, &family, &family, 0, vec![vec![vec![int(1)], vec![]], vec![vec![int(1)], vec![int(0)]]]).unwrap();
        let p = ProjectiveModule::from_idempotent(c, &family, e).unwrap();
        let f = ProjectiveModule::free(c, &[ObjectId(1)]).unwrap();
        let sum = direct_sum(c, &p, &f).unwrap().module;
        let modules = vec![p.clone(), f.clone(), sum];
        for q in 0..=1 {
            let z = k0_chern(&w, &complex, &modules, &K0Element::relation(0, 1, 2), q).unwrap();
            assert!(z.is_zero());
            assert!(is_zero_vector(&z.representative.coords));
        }
        let lc_sum = direct_sum_connection(&w, &levi_civita(&w, &p).unwrap(), &levi_civita(&w, &f).unwrap()).unwrap();
        assert_eq!(lc_sum.module(), &modules[2]);
        let doubled = k0_chern(&w, &complex, &modules, &K0Element::class(1).plus(1, 1), 1).unwrap();
        assert!(doubled.is_zero());
    }
}
