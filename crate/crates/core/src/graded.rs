//! The graded substrate shared by plain linear categories and DG-categories:
//! homogeneous forms, the [`Graded`] structure-constant interface, matrices of
//! forms and diagonal forms.
//!
//! Hom-space convention: `_xΩⁿ_y` holds forms FROM `y` TO `x`. A form `ω` in
//! `_xΩᵖ_y` composes with `ζ` in `_yΩ^q_z` to give `ωζ` in `_xΩ^{p+q}_z`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Zero};

use crate::category::Category;
use crate::error::{Error, Result};
use crate::linalg::{add_vectors, is_zero_vector, scale_vector, sub_vectors, zeros, Scalar, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

impl fmt::Display for ObjectId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Sparse coordinate vector: `(basis index, coefficient)` pairs.
pub type SparseVec = Vec<(usize, Scalar)>;

/// Structure constants for one composition map `_xΩᵖ_y ⊗ _yΩ^q_z → _xΩ^{p+q}_z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct CompositionTable {
    pub right_dim: usize,
    /// Indexed by `a * right_dim + b`.
    pub entries: Vec<SparseVec>,
}

impl CompositionTable {
    pub fn zero(left_dim: usize, right_dim: usize) -> Self {
        Self { right_dim, entries: vec![Vec::new(); left_dim * right_dim] }
    }

    pub fn get(&self, a: usize, b: usize) -> &[(usize, Scalar)] {
        &self.entries[a * self.right_dim + b]
    }
}

pub(crate) fn dense_to_sparse(v: &[Scalar]) -> SparseVec {
    v.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, c)| (i, c.clone())).collect()
}

/// A finite graded linear category given by explicit bases and structure
/// constants, truncated above degree [`Graded::truncation`].
///
/// Degrees above the truncation have dimension zero, so products landing
/// there and differentials out of the top degree vanish.
pub trait Graded {
    fn base(&self) -> &Category;

    fn truncation(&self) -> usize;

    /// `dim _xΩⁿ_y`.
    fn dim(&self, n: usize, x: ObjectId, y: ObjectId) -> usize;

    /// Product of basis form `a` of `_xΩᵖ_y` with basis form `b` of `_yΩ^q_z`.
    #[allow(clippy::too_many_arguments)]
    fn compose_basis(&self, p: usize, q: usize, x: ObjectId, y: ObjectId, z: ObjectId, a: usize, b: usize) -> &[(usize, Scalar)];

    /// Differential of basis form `a` of `_xΩⁿ_y`, in `_xΩ^{n+1}_y`.
    fn diff_basis(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> &[(usize, Scalar)];

    fn basis_label(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> &str;

    fn object_count(&self) -> usize {
        self.base().object_count()
    }

    fn objects(&self) -> Vec<ObjectId> {
        (0..self.object_count()).map(ObjectId).collect()
    }

    fn check_object(&self, x: ObjectId) -> Result<()> {
        if x.0 < self.object_count() {
            Ok(())
        } else {
            Err(Error::UnknownObject(x.0))
        }
    }

    /// Coordinates of `ω ζ`, where `ω ∈ _xΩᵖ_y` and `ζ ∈ _yΩ^q_z`.
    #[allow(clippy::too_many_arguments)]
    fn compose_coords(&self, p: usize, q: usize, x: ObjectId, y: ObjectId, z: ObjectId, left: &[Scalar], right: &[Scalar]) -> Vector {
        let mut out = zeros(self.dim(p + q, x, z));
        if out.is_empty() {
            return out;
        }
        for (a, u) in left.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (b, v) in right.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                let uv = u * v;
                for (k, c) in self.compose_basis(p, q, x, y, z, a, b) {
                    out[*k] += &uv * c;
                }
            }
        }
        out
    }

    fn diff_coords(&self, n: usize, x: ObjectId, y: ObjectId, coords: &[Scalar]) -> Vector {
        let mut out = zeros(self.dim(n + 1, x, y));
        if out.is_empty() {
            return out;
        }
        for (a, u) in coords.iter().enumerate() {
            if u.is_zero() {
                continue;
            }
            for (k, c) in self.diff_basis(n, x, y, a) {
                out[*k] += u * c;
            }
        }
        out
    }

    /// Product of two forms; zero when the total degree exceeds the truncation.
    fn compose_forms(&self, left: &Form, right: &Form) -> Result<Form> {
        if left.dom != right.cod {
            return Err(Error::ObjectMismatch { expected: left.dom.0, found: right.cod.0 });
        }
        let coords = self.compose_coords(left.degree, right.degree, left.cod, left.dom, right.dom, &left.coords, &right.coords);
        Ok(Form { degree: left.degree + right.degree, cod: left.cod, dom: right.dom, coords })
    }

    fn differential(&self, form: &Form) -> Form {
        Form {
            degree: form.degree + 1,
            cod: form.cod,
            dom: form.dom,
            coords: self.diff_coords(form.degree, form.cod, form.dom, &form.coords),
        }
    }

    fn identity_form(&self, x: ObjectId) -> Form {
        Form { degree: 0, cod: x, dom: x, coords: self.base().identity(x).to_vec() }
    }

    fn zero_form(&self, n: usize, x: ObjectId, y: ObjectId) -> Form {
        Form::zero(self, n, x, y)
    }

    fn basis_form(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> Form {
        let mut f = Form::zero(self, n, x, y);
        f.coords[a] = Scalar::one();
        f
    }
}

/// A homogeneous form of degree `degree` in `_codΩ^degree_dom`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Form {
    pub degree: usize,
    pub cod: ObjectId,
    pub dom: ObjectId,
    pub coords: Vector,
}

impl Form {
    pub fn zero<G: Graded + ?Sized>(g: &G, degree: usize, cod: ObjectId, dom: ObjectId) -> Self {
        Self { degree, cod, dom, coords: zeros(g.dim(degree, cod, dom)) }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }

    fn check_same_space(&self, other: &Form) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        if self.cod != other.cod {
            return Err(Error::ObjectMismatch { expected: self.cod.0, found: other.cod.0 });
        }
        if self.dom != other.dom {
            return Err(Error::ObjectMismatch { expected: self.dom.0, found: other.dom.0 });
        }
        Ok(())
    }

    pub fn add(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        Ok(Form { coords: add_vectors(&self.coords, &other.coords), ..self.clone() })
    }

    pub fn sub(&self, other: &Form) -> Result<Form> {
        self.check_same_space(other)?;
        Ok(Form { coords: sub_vectors(&self.coords, &other.coords), ..self.clone() })
    }

    pub fn scale(&self, factor: &Scalar) -> Form {
        Form { coords: scale_vector(factor, &self.coords), ..self.clone() }
    }
}

/// Offsets of the blocks `_xΩⁿ_x` inside `⊕_x _xΩⁿ_x`, plus the total length.
pub fn diagonal_layout<G: Graded + ?Sized>(g: &G, n: usize) -> (Vec<usize>, usize) {
    let mut offsets = Vec::with_capacity(g.object_count());
    let mut total = 0;
    for x in g.objects() {
        offsets.push(total);
        total += g.dim(n, x, x);
    }
    (offsets, total)
}

/// An element of `⊕_x _xΩⁿ_x`, stored as one vector in object order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalForm {
    pub degree: usize,
    pub coords: Vector,
}

impl DiagonalForm {
    pub fn zero<G: Graded + ?Sized>(g: &G, degree: usize) -> Self {
        Self { degree, coords: zeros(diagonal_layout(g, degree).1) }
    }

    /// Embeds a form with `cod == dom`.
    pub fn from_form<G: Graded + ?Sized>(g: &G, form: &Form) -> Result<Self> {
        if form.cod != form.dom {
            return Err(Error::ObjectMismatch { expected: form.cod.0, found: form.dom.0 });
        }
        let mut d = Self::zero(g, form.degree);
        d.add_component(g, form.cod, &form.coords);
        Ok(d)
    }

    pub fn component<G: Graded + ?Sized>(&self, g: &G, x: ObjectId) -> Vector {
        let (offsets, _) = diagonal_layout(g, self.degree);
        let len = g.dim(self.degree, x, x);
        self.coords[offsets[x.0]..offsets[x.0] + len].to_vec()
    }

    pub fn add_component<G: Graded + ?Sized>(&mut self, g: &G, x: ObjectId, coords: &[Scalar]) {
        let (offsets, _) = diagonal_layout(g, self.degree);
        for (k, c) in coords.iter().enumerate() {
            self.coords[offsets[x.0] + k] += c;
        }
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vector(&self.coords)
    }

    pub fn add(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(DiagonalForm { degree: self.degree, coords: add_vectors(&self.coords, &other.coords) })
    }

    pub fn sub(&self, other: &DiagonalForm) -> Result<DiagonalForm> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        Ok(DiagonalForm { degree: self.degree, coords: sub_vectors(&self.coords, &other.coords) })
    }

    pub fn scale(&self, factor: &Scalar) -> DiagonalForm {
        DiagonalForm { degree: self.degree, coords: scale_vector(factor, &self.coords) }
    }

    /// Componentwise differential.
    pub fn differential<G: Graded + ?Sized>(&self, g: &G) -> DiagonalForm {
        let mut out = DiagonalForm::zero(g, self.degree + 1);
        for x in g.objects() {
            let d = g.diff_coords(self.degree, x, x, &self.component(g, x));
            out.add_component(g, x, &d);
        }
        out
    }
}

/// A matrix of homogeneous forms of a common degree, entry `(i, j)` lying in
/// `_{rows[i]}Ωⁿ_{cols[j]}`.
///
/// Matrices over an index family `I` with one column at object `x` are module
/// elements of `C(I)_x`. Matrices with a single row are dual elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormMatrix {
    rows: Vec<ObjectId>,
    cols: Vec<ObjectId>,
    degree: usize,
    entries: Vec<Vector>,
}

impl FormMatrix {
    pub fn zero<G: Graded + ?Sized>(g: &G, rows: &[ObjectId], cols: &[ObjectId], degree: usize) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &r in rows {
            for &c in cols {
                entries.push(zeros(g.dim(degree, r, c)));
            }
        }
        Self { rows: rows.to_vec(), cols: cols.to_vec(), degree, entries }
    }

    pub fn identity<G: Graded + ?Sized>(g: &G, family: &[ObjectId]) -> Self {
        let mut m = Self::zero(g, family, family, 0);
        for (i, &x) in family.iter().enumerate() {
            m.entries[i * family.len() + i] = g.base().identity(x).to_vec();
        }
        m
    }

    /// Builds from row-major entry coordinates, checking every length.
    pub fn from_entries<G: Graded + ?Sized>(
        g: &G,
        rows: &[ObjectId],
        cols: &[ObjectId],
        degree: usize,
        entries: Vec<Vec<Vector>>,
    ) -> Result<Self> {
        for &x in rows.iter().chain(cols) {
            g.check_object(x)?;
        }
        if entries.len() != rows.len() {
            return Err(Error::DimensionMismatch { expected: rows.len(), found: entries.len() });
        }
        let mut flat = Vec::with_capacity(rows.len() * cols.len());
        for (i, row) in entries.into_iter().enumerate() {
            if row.len() != cols.len() {
                return Err(Error::DimensionMismatch { expected: cols.len(), found: row.len() });
            }
            for (j, entry) in row.into_iter().enumerate() {
                let expected = g.dim(degree, rows[i], cols[j]);
                if entry.len() != expected {
                    return Err(Error::DimensionMismatch { expected, found: entry.len() });
                }
                flat.push(entry);
            }
        }
        Ok(Self { rows: rows.to_vec(), cols: cols.to_vec(), degree, entries: flat })
    }

    /// Inverse of [`flat_coords`](Self::flat_coords).
    pub fn from_flat<G: Graded + ?Sized>(g: &G, rows: &[ObjectId], cols: &[ObjectId], degree: usize, flat: &[Scalar]) -> Result<Self> {
        let mut m = Self::zero(g, rows, cols, degree);
        let total: usize = m.entries.iter().map(Vec::len).sum();
        if flat.len() != total {
            return Err(Error::DimensionMismatch { expected: total, found: flat.len() });
        }
        let mut offset = 0;
        for entry in &mut m.entries {
            let len = entry.len();
            entry.clone_from_slice(&flat[offset..offset + len]);
            offset += len;
        }
        Ok(m)
    }

    /// A single column at object `at` from per-row coordinates.
    pub fn column_from<G: Graded + ?Sized>(g: &G, family: &[ObjectId], at: ObjectId, degree: usize, entries: Vec<Vector>) -> Result<Self> {
        Self::from_entries(g, family, &[at], degree, entries.into_iter().map(|e| vec![e]).collect())
    }

    pub fn rows(&self) -> &[ObjectId] {
        &self.rows
    }

    pub fn cols(&self) -> &[ObjectId] {
        &self.cols
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn entry(&self, i: usize, j: usize) -> &Vector {
        &self.entries[i * self.cols.len() + j]
    }

    pub fn entry_form(&self, i: usize, j: usize) -> Form {
        Form { degree: self.degree, cod: self.rows[i], dom: self.cols[j], coords: self.entry(i, j).clone() }
    }

    pub fn set_entry(&mut self, i: usize, j: usize, coords: Vector) -> Result<()> {
        let slot = &mut self.entries[i * self.cols.len() + j];
        if slot.len() != coords.len() {
            return Err(Error::DimensionMismatch { expected: slot.len(), found: coords.len() });
        }
        *slot = coords;
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| is_zero_vector(e))
    }

    pub fn column(&self, j: usize) -> FormMatrix {
        FormMatrix {
            rows: self.rows.clone(),
            cols: vec![self.cols[j]],
            degree: self.degree,
            entries: (0..self.rows.len()).map(|i| self.entry(i, j).clone()).collect(),
        }
    }

    pub fn row(&self, i: usize) -> FormMatrix {
        FormMatrix {
            rows: vec![self.rows[i]],
            cols: self.cols.clone(),
            degree: self.degree,
            entries: (0..self.cols.len()).map(|j| self.entry(i, j).clone()).collect(),
        }
    }

    /// Concatenates coordinates of all entries, row-major.
    pub fn flat_coords(&self) -> Vector {
        self.entries.iter().flatten().cloned().collect()
    }

    fn check_shape(&self, other: &FormMatrix) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::InvalidInput("form matrices have different index families".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| add_vectors(a, b)).collect();
        Ok(FormMatrix { entries, ..self.clone() })
    }

    pub fn sub(&self, other: &FormMatrix) -> Result<FormMatrix> {
        self.check_shape(other)?;
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| sub_vectors(a, b)).collect();
        Ok(FormMatrix { entries, ..self.clone() })
    }

    pub fn scale(&self, factor: &Scalar) -> FormMatrix {
        let entries = self.entries.iter().map(|e| scale_vector(factor, e)).collect();
        FormMatrix { entries, ..self.clone() }
    }

    /// Matrix product with entries composed in `g`; degrees add.
    pub fn mul<G: Graded + ?Sized>(&self, g: &G, other: &FormMatrix) -> Result<FormMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("inner index families of a form-matrix product differ".into()));
        }
        let degree = self.degree + other.degree;
        let mut out = FormMatrix::zero(g, &self.rows, &other.cols, degree);
        if degree > g.truncation() {
            return Ok(out);
        }
        let n_out = other.cols.len();
        for (i, &x) in self.rows.iter().enumerate() {
            for (j, &z) in other.cols.iter().enumerate() {
                let slot = &mut out.entries[i * n_out + j];
                for (k, &y) in self.cols.iter().enumerate() {
                    let left = self.entry(i, k);
                    let right = other.entry(k, j);
                    if is_zero_vector(left) || is_zero_vector(right) {
                        continue;
                    }
                    let prod = g.compose_coords(self.degree, other.degree, x, y, z, left, right);
                    for (s, p) in slot.iter_mut().zip(prod) {
                        *s += p;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Entrywise differential.
    pub fn differential<G: Graded + ?Sized>(&self, g: &G) -> FormMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for (i, &x) in self.rows.iter().enumerate() {
            for (j, &y) in self.cols.iter().enumerate() {
                entries.push(g.diff_coords(self.degree, x, y, self.entry(i, j)));
            }
        }
        FormMatrix { rows: self.rows.clone(), cols: self.cols.clone(), degree: self.degree + 1, entries }
    }

    /// `Tr(X) = Σᵢ X_ii`, a diagonal form; requires equal row and column families.
    pub fn trace<G: Graded + ?Sized>(&self, g: &G) -> Result<DiagonalForm> {
        if self.rows != self.cols {
            return Err(Error::InvalidInput("trace of a non-square form matrix".into()));
        }
        let mut out = DiagonalForm::zero(g, self.degree);
        for (i, &x) in self.rows.iter().enumerate() {
            out.add_component(g, x, self.entry(i, i));
        }
        Ok(out)
    }

    /// Block-diagonal matrix `diag(self, other)`.
    pub fn block_diag<G: Graded + ?Sized>(&self, g: &G, other: &FormMatrix) -> Result<FormMatrix> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let rows: Vec<ObjectId> = self.rows.iter().chain(&other.rows).copied().collect();
        let cols: Vec<ObjectId> = self.cols.iter().chain(&other.cols).copied().collect();
        let mut out = FormMatrix::zero(g, &rows, &cols, self.degree);
        let (r1, c1) = (self.rows.len(), self.cols.len());
        for i in 0..r1 {
            for j in 0..c1 {
                out.entries[i * cols.len() + j] = self.entry(i, j).clone();
            }
        }
        for i in 0..other.rows.len() {
            for j in 0..other.cols.len() {
                out.entries[(r1 + i) * cols.len() + c1 + j] = other.entry(i, j).clone();
            }
        }
        Ok(out)
    }

    /// The sub-block with the given row and column index ranges.
    pub fn block(&self, rows: core::ops::Range<usize>, cols: core::ops::Range<usize>) -> FormMatrix {
        let mut entries = Vec::new();
        for i in rows.clone() {
            for j in cols.clone() {
                entries.push(self.entry(i, j).clone());
            }
        }
        FormMatrix { rows: self.rows[rows].to_vec(), cols: self.cols[cols].to_vec(), degree: self.degree, entries }
    }

    /// Index of the first entry where `self` and `other` differ.
    pub fn first_difference(&self, other: &FormMatrix) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((0, 0));
        }
        let n = self.cols.len();
        self.entries.iter().zip(&other.entries).position(|(a, b)| a != b).map(|k| (k / n, k % n))
    }
}

/// `[ω, ζ] = ωζ − (−1)^{|ω||ζ|} ζω` for `ω ∈ _xΩᵖ_y`, `ζ ∈ _yΩ^q_x`.
pub fn graded_commutator<G: Graded + ?Sized>(g: &G, left: &Form, right: &Form) -> Result<DiagonalForm> {
    if left.dom != right.cod || right.dom != left.cod {
        return Err(Error::ObjectMismatch { expected: left.dom.0, found: right.cod.0 });
    }
    let lr = g.compose_forms(left, right)?;
    let rl = g.compose_forms(right, left)?;
    let mut out = DiagonalForm::zero(g, left.degree + right.degree);
    out.add_component(g, lr.cod, &lr.coords);
    let sign = if (left.degree * right.degree).is_multiple_of(2) { -Scalar::one() } else { Scalar::one() };
    out.add_component(g, rl.cod, &scale_vector(&sign, &rl.coords));
    Ok(out)
}

/// One generator `[b, b']` of the commutator subspace, with `b` basis form
/// `left_basis` of `_xΩᵖ_y` and `b'` basis form `right_basis` of `_yΩ^{n−p}_x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorGenerator {
    pub left_degree: usize,
    pub x: ObjectId,
    pub y: ObjectId,
    pub left_basis: usize,
    pub right_basis: usize,
    pub value: DiagonalForm,
}

/// All commutators of basis pairs of total degree `n`. By bilinearity of the
/// bracket these span the full commutator subspace `[Ω, Ω]ⁿ`.
pub fn commutator_generators<G: Graded + ?Sized>(g: &G, n: usize) -> Vec<CommutatorGenerator> {
    let mut out = Vec::new();
    for p in 0..=n {
        for x in g.objects() {
            for y in g.objects() {
                for a in 0..g.dim(p, x, y) {
                    for b in 0..g.dim(n - p, y, x) {
                        let left = g.basis_form(p, x, y, a);
                        let right = g.basis_form(n - p, y, x, b);
                        let value = graded_commutator(g, &left, &right).expect("basis pair is composable both ways");
                        out.push(CommutatorGenerator { left_degree: p, x, y, left_basis: a, right_basis: b, value });
                    }
                }
            }
        }
    }
    out
}
