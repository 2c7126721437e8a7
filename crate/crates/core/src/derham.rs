//! The de Rham complex `Ω_ab = ⊕ₓ ₓΩₓ / [Ω, Ω]`, its cohomology, and the
//! cochains of the ε-extended complex with evaluation and homotopy maps.
//!
//! Commutator subspaces are homogeneous in `t`, so `Ω[t]_ab` is `Ω_ab ⊗ ℚ[t]`
//! and a cochain of the extended complex is a pair of polynomials with
//! coefficients in `Ωⁿ_ab` and `Ω^{n−1}_ab`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::dg::{compose_tilde, PolyForm, TildeForm, TildeMatrix};
use crate::error::{Error, Result};
use crate::graded::{commutator_generators, diagonal_layout, DiagonalForm, Graded};
use crate::linalg::{
    axpy, build_quotient, is_zero_vector, kernel_basis, rank, scale_vector, solve_in_span, span_basis, unit_vector, zeros, Matrix,
    QuotientSpace, Scalar, Vector,
};

/// `⊕ₓ ₓΩⁿₓ / [Ω, Ω]ⁿ`, the subspace spanned by brackets of basis pairs.
pub fn commutator_subspace<G: Graded + ?Sized>(g: &G, n: usize) -> Result<QuotientSpace> {
    let spanning: Vec<Vector> = commutator_generators(g, n).into_iter().map(|c| c.value.coords).collect();
    build_quotient(diagonal_layout(g, n).1, &spanning)
}

/// Matrix of the componentwise differential `⊕ₓ ₓΩⁿₓ → ⊕ₓ ₓΩ^{n+1}ₓ`.
fn diagonal_differential<G: Graded + ?Sized>(g: &G, n: usize) -> Result<Matrix> {
    let (_, len) = diagonal_layout(g, n);
    let (_, target) = diagonal_layout(g, n + 1);
    let columns: Vec<Vector> = (0..len).map(|k| DiagonalForm { degree: n, coords: unit_vector(len, k) }.differential(g).coords).collect();
    Matrix::from_columns(target, &columns)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeRhamComplex {
    truncation: usize,
    quotients: Vec<QuotientSpace>,
    /// `differentials[n]` is `dⁿ_ab: Ωⁿ_ab → Ω^{n+1}_ab`; the last one maps to
    /// the zero space.
    differentials: Vec<Matrix>,
}

/// `H^n`: a basis of representatives and the dimensions around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub degree: usize,
    pub dim: usize,
    /// Coordinates in `Ωⁿ_ab` of the chosen basis cocycles.
    pub representatives: Vec<Vector>,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    /// Set in the top degree, where the differential into degree `N + 1` was
    /// truncated away.
    pub truncation_unreliable: bool,
}

/// Builds the quotient spaces and induced differentials in all degrees up
/// to the truncation, checking that `d` preserves commutators.
pub fn build_derham<G: Graded + ?Sized>(g: &G) -> Result<DeRhamComplex> {
    let top = g.truncation();
    let quotients: Vec<QuotientSpace> = (0..=top).map(|n| commutator_subspace(g, n)).collect::<Result<_>>()?;
    let mut differentials = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let q = &quotients[n];
        if n == top {
            differentials.push(Matrix::zeros(0, q.dim()));
            continue;
        }
        let d = diagonal_differential(g, n)?;
        let next = &quotients[n + 1];
        for v in q.subspace_basis() {
            if !next.contains(&d.mul_vec(v)?)? {
                return Err(Error::CertificationFailed(alloc::format!("d maps a degree-{n} commutator outside the commutators")));
            }
        }
        let columns: Vec<Vector> =
            (0..q.dim()).map(|k| next.project(&d.mul_vec(&q.lift(&unit_vector(q.dim(), k))?)?)).collect::<Result<_>>()?;
        differentials.push(Matrix::from_columns(next.dim(), &columns)?);
    }
    Ok(DeRhamComplex { truncation: top, quotients, differentials })
}

impl DeRhamComplex {
    pub fn truncation(&self) -> usize {
        self.truncation
    }

    /// `dim Ωⁿ_ab`; zero above the truncation.
    pub fn dim(&self, n: usize) -> usize {
        self.quotients.get(n).map_or(0, QuotientSpace::dim)
    }

    pub fn quotient(&self, n: usize) -> &QuotientSpace {
        &self.quotients[n]
    }

    pub fn differential(&self, n: usize) -> &Matrix {
        &self.differentials[n]
    }

    /// `dⁿ_ab` applied to coordinates; zero above the truncation.
    pub fn apply_d(&self, n: usize, coords: &[Scalar]) -> Result<Vector> {
        match self.differentials.get(n) {
            Some(d) => d.mul_vec(coords),
            None => Ok(Vec::new()),
        }
    }

    pub fn class_of(&self, form: &DiagonalForm) -> Result<Vector> {
        self.check_degree(form.degree)?;
        self.quotients[form.degree].project(&form.coords)
    }

    /// A diagonal form in the given class.
    pub fn representative(&self, n: usize, coords: &[Scalar]) -> Result<DiagonalForm> {
        self.check_degree(n)?;
        Ok(DiagonalForm { degree: n, coords: self.quotients[n].lift(coords)? })
    }

    fn check_degree(&self, n: usize) -> Result<()> {
        if n > self.truncation {
            Err(Error::TruncationExceeded { required: n, truncation: self.truncation })
        } else {
            Ok(())
        }
    }

    pub fn is_cocycle(&self, n: usize, coords: &[Scalar]) -> Result<bool> {
        Ok(is_zero_vector(&self.apply_d(n, coords)?))
    }

    /// Image basis of `d^{n−1}_ab` in reduced echelon form.
    fn coboundaries(&self, n: usize) -> Result<Vec<Vector>> {
        if n == 0 {
            return Ok(Vec::new());
        }
        let d = &self.differentials[n - 1];
        let columns: Vec<Vector> = (0..d.cols()).map(|k| d.column(k)).collect();
        Ok(span_basis(self.dim(n), &columns)?.0)
    }

    pub fn cohomology(&self, n: usize) -> Result<Cohomology> {
        self.check_degree(n)?;
        let cocycles = kernel_basis(&self.differentials[n]);
        let boundaries = self.coboundaries(n)?;
        let mut spanning = boundaries.clone();
        let mut current = boundaries.len();
        let mut representatives = Vec::new();
        for z in &cocycles {
            spanning.push(z.clone());
            let r = rank(&Matrix::from_rows(self.dim(n), &spanning)?);
            if r > current {
                current = r;
                representatives.push(z.clone());
            } else {
                spanning.pop();
            }
        }
        Ok(Cohomology {
            degree: n,
            dim: representatives.len(),
            representatives,
            cocycle_dim: cocycles.len(),
            coboundary_dim: boundaries.len(),
            truncation_unreliable: n == self.truncation,
        })
    }

    /// Coordinates of a cocycle's class in the basis of [`cohomology`](Self::cohomology).
    pub fn cohomology_class(&self, n: usize, coords: &[Scalar]) -> Result<Vector> {
        if !self.is_cocycle(n, coords)? {
            return Err(Error::InvalidInput(alloc::format!("degree-{n} element is not a cocycle")));
        }
        let h = self.cohomology(n)?;
        let boundaries = self.coboundaries(n)?;
        let mut columns = boundaries.clone();
        columns.extend(h.representatives.iter().cloned());
        let m = Matrix::from_columns(self.dim(n), &columns)?;
        let x = solve_in_span(&m, coords)?.ok_or_else(|| Error::CertificationFailed("cocycle outside cocycle span".into()))?;
        Ok(x[boundaries.len()..].to_vec())
    }

    /// `η ∈ Ω^{n−1}_ab` with `d_ab η = ⟨φ⟩`, when one exists.
    pub fn is_coboundary(&self, form: &DiagonalForm) -> Result<Option<Vector>> {
        self.coboundary_preimage(form.degree, &self.class_of(form)?)
    }

    /// Same as [`is_coboundary`](Self::is_coboundary) for a class given in coordinates.
    pub fn coboundary_preimage(&self, n: usize, class: &[Scalar]) -> Result<Option<Vector>> {
        if n == 0 {
            return Ok(is_zero_vector(class).then(Vec::new));
        }
        self.check_degree(n)?;
        solve_in_span(&self.differentials[n - 1], class)
    }

    /// `δ(⟨ω₀⟩ + ⟨ω₁⟩ε) = ⟨dω₀⟩ + ⟨dω₁ + (−1)^{n+1} ω̇₀⟩ε`.
    pub fn tilde_delta(&self, cochain: &TildeCochain) -> Result<TildeCochain> {
        let n = cochain.degree;
        let part0 = cochain.part0.iter().map(|c| self.apply_d(n, c)).collect::<Result<Vec<_>>>()?;
        let len = cochain.part0.len().max(cochain.part1.len());
        let sign = if n.is_multiple_of(2) { -Scalar::one() } else { Scalar::one() };
        let mut part1 = Vec::with_capacity(len);
        for i in 0..len {
            let mut v = zeros(self.dim(n));
            if let Some(next) = cochain.part0.get(i + 1) {
                axpy(&mut v, &(Scalar::from_integer(((i + 1) as i64).into()) * &sign), next);
            }
            if n > 0 {
                if let Some(w1) = cochain.part1.get(i) {
                    let dw1 = self.apply_d(n - 1, w1)?;
                    axpy(&mut v, &Scalar::one(), &dw1);
                }
            }
            part1.push(v);
        }
        Ok(TildeCochain { degree: n + 1, part0, part1 }.trimmed())
    }

    /// `ev_a(⟨ω₀⟩ + ⟨ω₁⟩ε) = ⟨ω₀(a)⟩`.
    pub fn ev_at(&self, cochain: &TildeCochain, a: &Scalar) -> Vector {
        let mut out = zeros(self.dim(cochain.degree));
        let mut power = Scalar::one();
        for c in &cochain.part0 {
            axpy(&mut out, &power, c);
            power *= a;
        }
        out
    }

    /// `kⁿ(⟨ω₀⟩ + ⟨ω₁⟩ε) = (−1)ⁿ ⟨∫₀¹ ω₁ dt⟩`.
    pub fn homotopy_k(&self, cochain: &TildeCochain) -> Result<Vector> {
        let n = cochain.degree;
        if n == 0 {
            return Err(Error::InvalidInput("the homotopy operator starts in degree 1".into()));
        }
        let mut out = zeros(self.dim(n - 1));
        for (i, c) in cochain.part1.iter().enumerate() {
            axpy(&mut out, &Scalar::new(1.into(), ((i + 1) as i64).into()), c);
        }
        Ok(if n.is_multiple_of(2) { out } else { scale_vector(&-Scalar::one(), &out) })
    }

    pub fn tilde_class(&self, form: &TildeDiagonal) -> Result<TildeCochain> {
        let part0 = form.part0.iter().map(|d| self.class_of(d)).collect::<Result<Vec<_>>>()?;
        let part1 = form.part1.iter().map(|d| self.class_of(d)).collect::<Result<Vec<_>>>()?;
        Ok(TildeCochain { degree: form.degree, part0, part1 }.trimmed())
    }
}

/// A cochain `⟨ω₀⟩ + ⟨ω₁⟩ε` of the extended complex: `part0[i]` is the
/// coefficient of `tⁱ` in `Ωⁿ_ab`, `part1[i]` in `Ω^{n−1}_ab`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeCochain {
    pub degree: usize,
    pub part0: Vec<Vector>,
    pub part1: Vec<Vector>,
}

impl TildeCochain {
    pub fn zero(degree: usize) -> Self {
        Self { degree, part0: Vec::new(), part1: Vec::new() }
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.part0.last().is_some_and(|c| is_zero_vector(c)) {
            self.part0.pop();
        }
        while self.part1.last().is_some_and(|c| is_zero_vector(c)) {
            self.part1.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.part0.iter().chain(&self.part1).all(|c| is_zero_vector(c))
    }

    pub fn t_degree(&self) -> usize {
        self.part0.len().max(self.part1.len()).saturating_sub(1)
    }
}

/// A diagonal element of `Ω̃` at the representative level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeDiagonal {
    pub degree: usize,
    pub part0: Vec<DiagonalForm>,
    pub part1: Vec<DiagonalForm>,
}

/// `Tr` of a square tilde matrix, coefficientwise.
pub fn tilde_trace<G: Graded + ?Sized>(g: &G, m: &TildeMatrix) -> Result<TildeDiagonal> {
    Ok(TildeDiagonal {
        degree: m.degree(),
        part0: m.part0().iter().map(|x| x.trace(g)).collect::<Result<_>>()?,
        part1: m.part1().iter().map(|x| x.trace(g)).collect::<Result<_>>()?,
    })
}

/// Dimensions comparing `[Ω̃, Ω̃]ⁿ` computed from brackets of tilde basis
/// pairs with the splitting `[Ω[t], Ω[t]]ⁿ ⊕ [Ω[t], Ω[t]]^{n−1}ε`, both
/// restricted to `t`-degree at most `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingCheck {
    pub degree: usize,
    pub direct: usize,
    pub predicted: usize,
}

/// Cochain dimensions of the extended complex at `t`-degree `≤ D`, with the
/// splitting check in every degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeComplex {
    pub bound: usize,
    pub cochain_dims: Vec<usize>,
    pub splitting: Vec<SplittingCheck>,
}

impl TildeComplex {
    pub fn splitting_holds(&self) -> bool {
        self.splitting.iter().all(|s| s.direct == s.predicted)
    }
}

pub fn tilde_complex<G: Graded + ?Sized>(g: &G, complex: &DeRhamComplex, bound: usize) -> Result<TildeComplex> {
    let top = g.truncation();
    let commutator_dim = |n: usize| diagonal_layout(g, n).1 - complex.dim(n);
    let mut cochain_dims = Vec::with_capacity(top + 1);
    let mut splitting = Vec::with_capacity(top + 1);
    for n in 0..=top {
        let below = if n == 0 { 0 } else { complex.dim(n - 1) };
        cochain_dims.push((bound + 1) * (complex.dim(n) + below));
        let predicted = (bound + 1) * (commutator_dim(n) + if n == 0 { 0 } else { commutator_dim(n - 1) });
        splitting.push(SplittingCheck { degree: n, direct: tilde_commutator_dim(g, n, bound)?, predicted });
    }
    Ok(TildeComplex { bound, cochain_dims, splitting })
}

/// Homogeneous tilde basis elements of `_xΩ̃ᵖ_y` with `t`-degree `≤ D`,
/// tagged with their `t`-degree.
fn tilde_basis<G: Graded + ?Sized>(g: &G, p: usize, x: crate::ObjectId, y: crate::ObjectId, bound: usize) -> Vec<(usize, TildeForm)> {
    let mut out = Vec::new();
    for i in 0..=bound {
        for a in 0..g.dim(p, x, y) {
            let omega0 = PolyForm::monomial(&g.basis_form(p, x, y, a), i);
            out.push((i, TildeForm { omega0, omega1: None }));
        }
        if p > 0 {
            for a in 0..g.dim(p - 1, x, y) {
                let omega1 = PolyForm::monomial(&g.basis_form(p - 1, x, y, a), i);
                out.push((i, TildeForm { omega0: PolyForm::zero(p, x, y), omega1: Some(omega1) }));
            }
        }
    }
    out
}

fn tilde_commutator_dim<G: Graded + ?Sized>(g: &G, n: usize, bound: usize) -> Result<usize> {
    let (off0, len0) = diagonal_layout(g, n);
    let (off1, len1) = if n == 0 { (Vec::new(), 0) } else { diagonal_layout(g, n - 1) };
    let ambient = (bound + 1) * (len0 + len1);
    let mut spanning = Vec::new();
    for p in 0..=n {
        let sign = if (p * (n - p)).is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
        for x in g.objects() {
            for y in g.objects() {
                let left = tilde_basis(g, p, x, y, bound);
                let right = tilde_basis(g, n - p, y, x, bound);
                for (i, a) in &left {
                    for (j, b) in &right {
                        if i + j > bound {
                            continue;
                        }
                        let ab = compose_tilde(g, a, b)?;
                        let ba = compose_tilde(g, b, a)?;
                        let mut v = zeros(ambient);
                        for (form, coef) in [(&ab, Scalar::one()), (&ba, -sign.clone())] {
                            let o = form.omega0.cod;
                            for (t, c) in form.omega0.coeffs.iter().enumerate() {
                                let base = t * len0 + off0[o.0];
                                for (k, val) in c.iter().enumerate() {
                                    v[base + k] += &coef * val;
                                }
                            }
                            if let Some(w1) = &form.omega1 {
                                for (t, c) in w1.coeffs.iter().enumerate() {
                                    let base = (bound + 1) * len0 + t * len1 + off1[o.0];
                                    for (k, val) in c.iter().enumerate() {
                                        v[base + k] += &coef * val;
                                    }
                                }
                            }
                        }
                        if !v.iter().all(Zero::is_zero) {
                            spanning.push(v);
                        }
                    }
                }
            }
        }
    }
    Ok(span_basis(ambient, &spanning)?.0.len())
}

/// `k∘δ + d∘k − (ev₁ − ev₀)` applied to a cochain of degree `≥ 1`; zero for
/// every cochain.
pub fn homotopy_defect(complex: &DeRhamComplex, cochain: &TildeCochain) -> Result<Vector> {
    let n = cochain.degree;
    let lhs = complex.homotopy_k(&complex.tilde_delta(cochain)?)?;
    let dk = complex.apply_d(n - 1, &complex.homotopy_k(cochain)?)?;
    let ev = crate::linalg::sub_vectors(&complex.ev_at(cochain, &Scalar::one()), &complex.ev_at(cochain, &Scalar::zero()));
    let mut out = crate::linalg::add_vectors(&lhs, &dk);
    axpy(&mut out, &-Scalar::one(), &ev);
    Ok(out)
}

/// A cochain of degree `n` with the given coefficients; `part1` is ignored in
/// degree 0.
pub fn tilde_cochain(complex: &DeRhamComplex, n: usize, part0: Vec<Vector>, part1: Vec<Vector>) -> Result<TildeCochain> {
    for c in &part0 {
        if c.len() != complex.dim(n) {
            return Err(Error::DimensionMismatch { expected: complex.dim(n), found: c.len() });
        }
    }
    let part1 = if n == 0 { vec![] } else { part1 };
    for c in &part1 {
        if c.len() != complex.dim(n - 1) {
            return Err(Error::DimensionMismatch { expected: complex.dim(n - 1), found: c.len() });
        }
    }
    Ok(TildeCochain { degree: n, part0, part1 }.trimmed())
}
