//! Right modules: free modules `C(I)`, projectives `eC(I)` presented by an
//! idempotent, the Hattori–Stallings trace, direct sums, tensor products with
//! forms, and a general module representation used as a cross-check.
//!
//! Elements of `M_x` are columns `v` with `v_i ∈ _{x_i}C_x` and `e·v = v`.
//! The generators are `m_i = e·(i-th standard column)` and the dual forms
//! `φ^i` are the rows of `e`, so the Gram matrix `Ψ = (φ^i(m_j))` is `e`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::category::Category;
use crate::error::{Error, Result};
use crate::graded::{DiagonalForm, FormMatrix, Graded, ObjectId};
use crate::linalg::{build_quotient, is_zero_vector, span_basis, unit_vector, zeros, Matrix, QuotientSpace, Scalar, Vector};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjectiveModule {
    family: Vec<ObjectId>,
    e: FormMatrix,
}

impl ProjectiveModule {
    /// `C(I)`, presented by the identity matrix.
    pub fn free(c: &Category, family: &[ObjectId]) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidInput("a module needs a nonempty index family".into()));
        }
        for &x in family {
            c.check_object(x)?;
        }
        Ok(Self { family: family.to_vec(), e: FormMatrix::identity(c, family) })
    }

    /// `eC(I)`; fails with the first entry where `e² ≠ e`.
    pub fn from_idempotent(c: &Category, family: &[ObjectId], e: FormMatrix) -> Result<Self> {
        if family.is_empty() {
            return Err(Error::InvalidInput("a module needs a nonempty index family".into()));
        }
        if e.degree() != 0 {
            return Err(Error::DegreeMismatch { expected: 0, found: e.degree() });
        }
        if e.rows() != family || e.cols() != family {
            return Err(Error::InvalidInput("idempotent is not indexed by the module's family".into()));
        }
        let square = e.mul(c, &e)?;
        if let Some((row, col)) = square.first_difference(&e) {
            return Err(Error::NotIdempotent { row, col });
        }
        Ok(Self { family: family.to_vec(), e })
    }

    pub fn family(&self) -> &[ObjectId] {
        &self.family
    }

    pub fn idempotent(&self) -> &FormMatrix {
        &self.e
    }

    /// Number of generators in the presentation.
    pub fn generator_count(&self) -> usize {
        self.family.len()
    }

    pub fn is_free<G: Graded + ?Sized>(&self, g: &G) -> bool {
        self.e == FormMatrix::identity(g, &self.family)
    }

    /// `m_i ∈ M_{x_i}`.
    pub fn generator(&self, i: usize) -> FormMatrix {
        self.e.column(i)
    }

    /// `φ^i ∈ _{x_i}M*`, the `i`-th row of `e`.
    pub fn dual(&self, i: usize) -> FormMatrix {
        self.e.row(i)
    }

    /// `Ψ = (φ^i(m_j))`.
    pub fn gram<G: Graded + ?Sized>(&self, g: &G) -> Result<FormMatrix> {
        let mut psi = FormMatrix::zero(g, &self.family, &self.family, 0);
        for i in 0..self.family.len() {
            for j in 0..self.family.len() {
                let value = self.dual(i).mul(g, &self.generator(j))?;
                psi.set_entry(i, j, value.entry(0, 0).clone())?;
            }
        }
        Ok(psi)
    }

    /// `e·v`, for a column or matrix of forms of any degree.
    pub fn project<G: Graded + ?Sized>(&self, g: &G, v: &FormMatrix) -> Result<FormMatrix> {
        self.e.mul(g, v)
    }

    pub fn contains<G: Graded + ?Sized>(&self, g: &G, v: &FormMatrix) -> Result<bool> {
        Ok(&self.project(g, v)? == v)
    }

    /// `eUe`, the compressed form of an endomorphism matrix.
    pub fn compress<G: Graded + ?Sized>(&self, g: &G, u: &FormMatrix) -> Result<FormMatrix> {
        self.e.mul(g, u)?.mul(g, &self.e)
    }

    /// `Σᵢ mᵢ·φ^i(v)`, which reproduces every `v ∈ M`.
    pub fn dual_basis_expansion<G: Graded + ?Sized>(&self, g: &G, v: &FormMatrix) -> Result<FormMatrix> {
        let mut acc = FormMatrix::zero(g, &self.family, v.cols(), v.degree());
        for i in 0..self.family.len() {
            let coefficient = self.dual(i).mul(g, v)?;
            acc = acc.add(&self.generator(i).mul(g, &coefficient)?)?;
        }
        Ok(acc)
    }
}

/// The e-fixed columns of degree `n` at object `x`: the realization of
/// `(M ⊗_C Ωⁿ)_x` used throughout. Its basis is in reduced echelon form, so
/// the coordinates of a member are its entries at the pivot positions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixedColumnSpace {
    family: Vec<ObjectId>,
    at: ObjectId,
    degree: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl FixedColumnSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn at(&self) -> ObjectId {
        self.at
    }

    pub fn basis_column<G: Graded + ?Sized>(&self, g: &G, k: usize) -> FormMatrix {
        FormMatrix::from_flat(g, &self.family, &[self.at], self.degree, &self.basis[k]).expect("basis has the column shape")
    }

    pub fn column<G: Graded + ?Sized>(&self, g: &G, coords: &[Scalar]) -> Result<FormMatrix> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: coords.len() });
        }
        let mut flat = FormMatrix::zero(g, &self.family, &[self.at], self.degree).flat_coords();
        for (c, b) in coords.iter().zip(&self.basis) {
            crate::linalg::axpy(&mut flat, c, b);
        }
        FormMatrix::from_flat(g, &self.family, &[self.at], self.degree, &flat)
    }

    /// Coordinates of a member of the space; errors if `v` is not e-fixed.
    pub fn coordinates<G: Graded + ?Sized>(&self, g: &G, v: &FormMatrix) -> Result<Vector> {
        if v.rows() != self.family.as_slice() || v.cols() != [self.at] || v.degree() != self.degree {
            return Err(Error::InvalidInput("column does not belong to this tensor space".into()));
        }
        let flat = v.flat_coords();
        let coords: Vector = self.pivots.iter().map(|&p| flat[p].clone()).collect();
        if self.column(g, &coords)? != *v {
            return Err(Error::InvalidInput("column is not fixed by the idempotent".into()));
        }
        Ok(coords)
    }
}

/// `(M ⊗_C Ωⁿ)_x` as the e-fixed columns over `_{x_i}Ωⁿ_x`.
pub fn tensor_with_forms<G: Graded + ?Sized>(g: &G, m: &ProjectiveModule, n: usize, x: ObjectId) -> Result<FixedColumnSpace> {
    g.check_object(x)?;
    let family = m.family().to_vec();
    let zero = FormMatrix::zero(g, &family, &[x], n);
    let ambient = zero.flat_coords().len();
    let mut images = Vec::with_capacity(ambient);
    for k in 0..ambient {
        let unit = FormMatrix::from_flat(g, &family, &[x], n, &unit_vector(ambient, k))?;
        images.push(m.project(g, &unit)?.flat_coords());
    }
    let (basis, pivots) = span_basis(ambient, &images)?;
    Ok(FixedColumnSpace { family, at: x, degree: n, basis, pivots })
}

/// The class of `Σᵢ (eUe)_ii` in `C_ab`.
pub fn hs_trace(c: &Category, m: &ProjectiveModule, u: &FormMatrix) -> Result<Vector> {
    c.abelianization().project(&trace_form(c, m, u)?.coords)
}

/// The diagonal element `Σᵢ (eUe)_ii` before passing to `C_ab`.
pub fn trace_form(c: &Category, m: &ProjectiveModule, u: &FormMatrix) -> Result<DiagonalForm> {
    if u.degree() != 0 {
        return Err(Error::DegreeMismatch { expected: 0, found: u.degree() });
    }
    m.compress(c, u)?.trace(c)
}

/// `ev(m ⊗ φ) = φ(m) + [C, C]`.
pub fn evaluation(c: &Category, element: &FormMatrix, dual: &FormMatrix) -> Result<Vector> {
    if element.cols().len() != 1 || dual.rows().len() != 1 {
        return Err(Error::InvalidInput("evaluation takes a column and a row".into()));
    }
    if element.cols()[0] != dual.rows()[0] {
        return Err(Error::ObjectMismatch { expected: element.cols()[0].0, found: dual.rows()[0].0 });
    }
    let value = dual.mul(c, element)?;
    let diagonal = value.trace(c)?;
    c.abelianization().project(&diagonal.coords)
}

/// The image of an endomorphism under `Hom_C(M, M) ≅ M ⊗_C M*`, as the pairs
/// `(u(mᵢ), φ^i)`.
pub fn endomorphism_as_tensor(c: &Category, m: &ProjectiveModule, u: &FormMatrix) -> Result<Vec<(FormMatrix, FormMatrix)>> {
    let compressed = m.compress(c, u)?;
    (0..m.generator_count()).map(|i| Ok((compressed.mul(c, &m.generator(i))?, m.dual(i)))).collect()
}

/// `M₁ ⊕ M₂` with its biproduct maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectSum {
    pub module: ProjectiveModule,
    pub injections: [FormMatrix; 2],
    pub projections: [FormMatrix; 2],
}

pub fn direct_sum(c: &Category, first: &ProjectiveModule, second: &ProjectiveModule) -> Result<DirectSum> {
    let e = first.e.block_diag(c, &second.e)?;
    let family: Vec<ObjectId> = first.family.iter().chain(&second.family).copied().collect();
    let (n1, n2) = (first.family.len(), second.family.len());
    let module = ProjectiveModule { family, e };
    let injections = [module.e.block(0..n1 + n2, 0..n1), module.e.block(0..n1 + n2, n1..n1 + n2)];
    let projections = [module.e.block(0..n1, 0..n1 + n2), module.e.block(n1..n1 + n2, 0..n1 + n2)];
    Ok(DirectSum { module, injections, projections })
}

/// A right module given by component bases and action tables; the unit and
/// associativity laws are checked separately.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralModule {
    dims: Vec<usize>,
    /// `action[x * k + y][m * dim _xC_y + f]`: coordinates of `m·f` in `M_y`.
    action: Vec<Vec<Vector>>,
}

impl GeneralModule {
    /// The components of `eC(I)` with bases read off the e-fixed columns.
    pub fn from_projective(c: &Category, m: &ProjectiveModule) -> Result<Self> {
        let spaces: Vec<FixedColumnSpace> = c.objects().into_iter().map(|x| tensor_with_forms(c, m, 0, x)).collect::<Result<_>>()?;
        let k = c.object_count();
        let mut action = Vec::with_capacity(k * k);
        for x in c.objects() {
            for y in c.objects() {
                let mut table = Vec::new();
                for a in 0..spaces[x.0].dim() {
                    let column = spaces[x.0].basis_column(c, a);
                    for f in 0..c.hom_dim(x, y) {
                        let arrow = FormMatrix::from_flat(c, &[x], &[y], 0, &unit_vector(c.hom_dim(x, y), f))?;
                        table.push(spaces[y.0].coordinates(c, &column.mul(c, &arrow)?)?);
                    }
                }
                action.push(table);
            }
        }
        Ok(Self { dims: spaces.iter().map(FixedColumnSpace::dim).collect(), action })
    }

    pub fn component_dim(&self, x: ObjectId) -> usize {
        self.dims[x.0]
    }

    /// `m·f` for `m ∈ M_x` and `f ∈ _xC_y`, both in coordinates.
    pub fn act(&self, c: &Category, x: ObjectId, y: ObjectId, m: &[Scalar], f: &[Scalar]) -> Vector {
        let k = self.dims.len();
        let table = &self.action[x.0 * k + y.0];
        let hom = c.hom_dim(x, y);
        let mut out = zeros(self.dims[y.0]);
        for (a, ma) in m.iter().enumerate() {
            for (b, fb) in f.iter().enumerate() {
                if ma.is_zero() || fb.is_zero() {
                    continue;
                }
                crate::linalg::axpy(&mut out, &(ma * fb), &table[a * hom + b]);
            }
        }
        out
    }

    /// Failures of `m·1 = m` and `(m·f)·g = m·(fg)` on basis elements.
    pub fn validate(&self, c: &Category) -> Vec<String> {
        let mut out = Vec::new();
        let objects = c.objects();
        for &x in &objects {
            for a in 0..self.dims[x.0] {
                let m = unit_vector(self.dims[x.0], a);
                if self.act(c, x, x, &m, c.identity(x)) != m {
                    out.push(format!("unit fails on basis element {a} of component {x}"));
                }
                for &y in &objects {
                    for &z in &objects {
                        for f in 0..c.hom_dim(x, y) {
                            let fv = unit_vector(c.hom_dim(x, y), f);
                            let mf = self.act(c, x, y, &m, &fv);
                            for h in 0..c.hom_dim(y, z) {
                                let hv = unit_vector(c.hom_dim(y, z), h);
                                let fh = c.compose_coords(0, 0, x, y, z, &fv, &hv);
                                if self.act(c, y, z, &mf, &hv) != self.act(c, x, z, &m, &fh) {
                                    out.push(format!("associativity fails on ({a}, {f}, {h}) through {x}, {y}, {z}"));
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// `(M ⊗_C Ωⁿ)_x` as the literal quotient of `⊕_z M_z ⊗ _zΩⁿ_x` by the
    /// relations `m·f ⊗ ω − m ⊗ fω`.
    pub fn tensor_quotient<G: Graded + ?Sized>(&self, g: &G, n: usize, x: ObjectId) -> Result<LiteralTensor> {
        let c = g.base();
        let mut offsets = Vec::new();
        let mut total = 0;
        for z in g.objects() {
            offsets.push(total);
            total += self.dims[z.0] * g.dim(n, z, x);
        }
        let slot = |z: ObjectId, m: usize, w: usize| offsets[z.0] + m * g.dim(n, z, x) + w;
        let mut relations = Vec::new();
        for y in g.objects() {
            for z in g.objects() {
                for m in 0..self.dims[y.0] {
                    let mv = unit_vector(self.dims[y.0], m);
                    for f in 0..c.hom_dim(y, z) {
                        let fv = unit_vector(c.hom_dim(y, z), f);
                        let mf = self.act(c, y, z, &mv, &fv);
                        for w in 0..g.dim(n, z, x) {
                            let wv = unit_vector(g.dim(n, z, x), w);
                            let fw = g.compose_coords(0, n, y, z, x, &fv, &wv);
                            let mut rel = zeros(total);
                            for (k, coef) in mf.iter().enumerate() {
                                rel[slot(z, k, w)] += coef;
                            }
                            for (k, coef) in fw.iter().enumerate() {
                                rel[slot(y, m, k)] -= coef;
                            }
                            if !is_zero_vector(&rel) {
                                relations.push(rel);
                            }
                        }
                    }
                }
            }
        }
        Ok(LiteralTensor { degree: n, at: x, offsets, quotient: build_quotient(total, &relations)? })
    }
}

/// The quotient model of `(M ⊗_C Ωⁿ)_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralTensor {
    pub degree: usize,
    pub at: ObjectId,
    /// Offset of the block `M_z ⊗ _zΩⁿ_x` in the ambient space.
    pub offsets: Vec<usize>,
    pub quotient: QuotientSpace,
}

/// Matrices between the literal quotient and the e-fixed-column model, in
/// both directions, after checking that they are mutually inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorIsomorphism {
    pub literal_dim: usize,
    pub fixed_dim: usize,
    /// Quotient coordinates to fixed-column coordinates.
    pub forward: Matrix,
    pub backward: Matrix,
}

/// Builds `m ⊗ ω ↦ m·ω` and `v ↦ Σᵢ mᵢ ⊗ vᵢ` and certifies they are inverse
/// isomorphisms; the forward map is also checked to vanish on every relation.
pub fn tensor_isomorphism<G: Graded + ?Sized>(g: &G, m: &ProjectiveModule, n: usize, x: ObjectId) -> Result<TensorIsomorphism> {
    let c = g.base();
    let general = GeneralModule::from_projective(c, m)?;
    let literal = general.tensor_quotient(g, n, x)?;
    let fixed = tensor_with_forms(g, m, n, x)?;
    let components: Vec<FixedColumnSpace> = g.objects().into_iter().map(|z| tensor_with_forms(c, m, 0, z)).collect::<Result<_>>()?;

    let ambient = literal.quotient.ambient_dim();
    let mut ambient_images = Vec::with_capacity(ambient);
    for z in g.objects() {
        let width = g.dim(n, z, x);
        for a in 0..components[z.0].dim() {
            let column = components[z.0].basis_column(c, a);
            for w in 0..width {
                let form = FormMatrix::from_flat(g, &[z], &[x], n, &unit_vector(width, w))?;
                ambient_images.push(fixed.coordinates(g, &column.mul(g, &form)?)?);
            }
        }
    }
    let ambient_map = Matrix::from_columns(fixed.dim(), &ambient_images)?;
    for relation in literal.quotient.subspace_basis() {
        if !is_zero_vector(&ambient_map.mul_vec(relation)?) {
            return Err(Error::CertificationFailed("tensor map does not vanish on a relation".into()));
        }
    }
    let lifts: Vec<Vector> =
        (0..literal.quotient.dim()).map(|q| literal.quotient.lift(&unit_vector(literal.quotient.dim(), q))).collect::<Result<_>>()?;
    let forward_columns: Vec<Vector> = lifts.iter().map(|l| ambient_map.mul_vec(l)).collect::<Result<_>>()?;
    let forward = Matrix::from_columns(fixed.dim(), &forward_columns)?;

    let mut backward_columns = Vec::with_capacity(fixed.dim());
    for k in 0..fixed.dim() {
        let v = fixed.basis_column(g, k);
        let mut ambient_vec = zeros(ambient);
        for (i, &xi) in m.family().iter().enumerate() {
            let mi = components[xi.0].coordinates(c, &m.generator(i))?;
            let vi = v.entry(i, 0);
            let width = g.dim(n, xi, x);
            for (a, ma) in mi.iter().enumerate() {
                for (w, vw) in vi.iter().enumerate() {
                    ambient_vec[literal.offsets[xi.0] + a * width + w] += ma * vw;
                }
            }
        }
        backward_columns.push(literal.quotient.project(&ambient_vec)?);
    }
    let backward = Matrix::from_columns(literal.quotient.dim(), &backward_columns)?;

    if forward.mul(&backward)? != Matrix::identity(fixed.dim()) || backward.mul(&forward)? != Matrix::identity(literal.quotient.dim()) {
        return Err(Error::CertificationFailed(format!(
            "tensor models at degree {n}, object {x} are not isomorphic ({} vs {})",
            literal.quotient.dim(),
            fixed.dim()
        )));
    }
    Ok(TensorIsomorphism { literal_dim: literal.quotient.dim(), fixed_dim: fixed.dim(), forward, backward })
}

/// `Σᵢ 1_{x_i}` as a diagonal element.
pub fn rank_element(c: &Category, family: &[ObjectId]) -> DiagonalForm {
    let mut out = DiagonalForm::zero(c, 0);
    for &x in family {
        out.add_component(c, x, c.identity(x));
    }
    out
}

/// Column-wise convenience: the standard column `i` at `x_i` of `C(I)`.
pub fn standard_column<G: Graded + ?Sized>(g: &G, family: &[ObjectId], i: usize) -> FormMatrix {
    let mut entries: Vec<Vector> = family.iter().map(|&xj| zeros(g.dim(0, xj, family[i]))).collect();
    entries[i] = g.base().identity(family[i]).to_vec();
    FormMatrix::column_from(g, family, family[i], 0, entries).expect("standard column has the right shape")
}
