//! Truncated DG-categories of forms, the universal-forms builder, the
//! polynomial extension `Ω[t]` and the ε-extension `Ω̃`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::category::{check_associativity, check_units, Category, Violation};
use crate::error::{Error, Result};
use crate::graded::{dense_to_sparse, CompositionTable, Form, FormMatrix, Graded, ObjectId, SparseVec};
use crate::linalg::{add_vectors, build_quotient, int, is_zero_vector, scale_vector, sub_vectors, zeros, Scalar, Vector};

/// A DG-category truncated above degree `N`, with degree 0 equal to its base
/// category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DGCategory {
    base: Category,
    truncation: usize,
    /// `labels[n - 1][x * k + y]` for `1 ≤ n ≤ N`.
    labels: Vec<Vec<Vec<String>>>,
    /// `comp[p * (N + 1) + q][(x * k + y) * k + z]` for `p, q ≤ N`.
    comp: Vec<Vec<CompositionTable>>,
    /// `diff[n][x * k + y][a]` for `n < N`.
    diff: Vec<Vec<Vec<SparseVec>>>,
}

impl Graded for DGCategory {
    fn base(&self) -> &Category {
        &self.base
    }

    fn truncation(&self) -> usize {
        self.truncation
    }

    fn dim(&self, n: usize, x: ObjectId, y: ObjectId) -> usize {
        match n {
            0 => self.base.hom_dim(x, y),
            n if n > self.truncation => 0,
            n => self.labels[n - 1][self.pair(x, y)].len(),
        }
    }

    fn compose_basis(&self, p: usize, q: usize, x: ObjectId, y: ObjectId, z: ObjectId, a: usize, b: usize) -> &[(usize, Scalar)] {
        if p + q > self.truncation {
            return &[];
        }
        let k = self.object_count();
        self.comp[p * (self.truncation + 1) + q][(x.0 * k + y.0) * k + z.0].get(a, b)
    }

    fn diff_basis(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> &[(usize, Scalar)] {
        if n >= self.truncation {
            return &[];
        }
        &self.diff[n][self.pair(x, y)][a]
    }

    fn basis_label(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> &str {
        if n == 0 {
            &self.base.hom_labels(x, y)[a]
        } else {
            &self.labels[n - 1][self.pair(x, y)][a]
        }
    }
}

impl DGCategory {
    fn pair(&self, x: ObjectId, y: ObjectId) -> usize {
        x.0 * self.object_count() + y.0
    }

    /// Allocates zero tables for the given per-degree labels; degree-0
    /// composition is copied from the base.
    fn empty(base: Category, truncation: usize, labels: Vec<Vec<Vec<String>>>) -> Self {
        let k = base.object_count();
        let mut w = DGCategory { base, truncation, labels, comp: Vec::new(), diff: Vec::new() };
        for p in 0..=truncation {
            for q in 0..=truncation {
                let mut tables = Vec::new();
                if p + q <= truncation {
                    for x in 0..k {
                        for y in 0..k {
                            for z in 0..k {
                                let (x, y, z) = (ObjectId(x), ObjectId(y), ObjectId(z));
                                let mut t = CompositionTable::zero(w.dim(p, x, y), w.dim(q, y, z));
                                if p == 0 && q == 0 {
                                    for a in 0..w.dim(0, x, y) {
                                        for b in 0..w.dim(0, y, z) {
                                            t.entries[a * t.right_dim + b] = w.base.compose_basis(0, 0, x, y, z, a, b).to_vec();
                                        }
                                    }
                                }
                                tables.push(t);
                            }
                        }
                    }
                }
                w.comp.push(tables);
            }
        }
        for n in 0..truncation {
            let mut per_pair = Vec::with_capacity(k * k);
            for x in 0..k {
                for y in 0..k {
                    per_pair.push(vec![Vec::new(); w.dim(n, ObjectId(x), ObjectId(y))]);
                }
            }
            w.diff.push(per_pair);
        }
        w
    }

    /// `Ωⁿ = 0` for `n ≥ 1`.
    pub fn trivial(base: Category, truncation: usize) -> Self {
        let k = base.object_count();
        let labels = vec![vec![Vec::new(); k * k]; truncation];
        Self::empty(base, truncation, labels)
    }

    /// Universal forms truncated above `truncation`, in the normal form
    /// `_xΩⁿ_y = ⊕ _xC_{z₁} ⊗ _{z₁}C̄_{z₂} ⊗ ⋯ ⊗ _{zₙ}C̄_y`, where `C̄` drops the
    /// identity from each endomorphism space. The tensor `b₀⊗b₁⊗⋯⊗bₙ` stands for
    /// `b₀·db₁⋯dbₙ`; in degree 1 this is the kernel of composition `C⊗C → C`.
    pub fn universal(base: Category, truncation: usize) -> Result<Self> {
        if truncation == 0 {
            return Err(Error::InvalidInput("universal forms need truncation at least 1".into()));
        }
        let builder = UniversalBuilder::new(&base, truncation)?;
        let k = base.object_count();
        let labels = (1..=truncation)
            .map(|n| {
                builder.chains[n]
                    .iter()
                    .enumerate()
                    .map(|(xy, per_pair)| per_pair.iter().map(|c| builder.label(xy / k, xy % k, c)).collect())
                    .collect()
            })
            .collect();
        let mut w = Self::empty(base.clone(), truncation, labels);
        for p in 0..=truncation {
            for q in 0..=truncation - p {
                for x in 0..k {
                    for y in 0..k {
                        for z in 0..k {
                            let left = &builder.chains[p][x * k + y];
                            let right = &builder.chains[q][y * k + z];
                            let index = &builder.index[p + q][x * k + z];
                            let table = &mut w.comp[p * (truncation + 1) + q][(x * k + y) * k + z];
                            for (a, ca) in left.iter().enumerate() {
                                for (b, cb) in right.iter().enumerate() {
                                    let product = builder.compose(x, y, z, ca, cb)?;
                                    table.entries[a * table.right_dim + b] = to_sparse(index, product);
                                }
                            }
                        }
                    }
                }
            }
        }
        for n in 0..truncation {
            for x in 0..k {
                for y in 0..k {
                    let index = &builder.index[n + 1][x * k + y];
                    for (a, chain) in builder.chains[n][x * k + y].iter().enumerate() {
                        w.diff[n][x * k + y][a] = to_sparse(index, builder.differential(x, y, chain)?);
                    }
                }
            }
        }
        Ok(w)
    }

    /// A DG-category with the given bases in degrees `1..=N` and all products
    /// and differentials of positive degree set to zero; fill them with
    /// [`set_product`](Self::set_product) and
    /// [`set_differential`](Self::set_differential). `forms[n - 1][x * k + y]`
    /// labels the basis of `_xΩⁿ_y`.
    pub fn from_labels(base: Category, truncation: usize, forms: Vec<Vec<Vec<String>>>) -> Result<Self> {
        let k = base.object_count();
        if forms.len() != truncation {
            return Err(Error::DimensionMismatch { expected: truncation, found: forms.len() });
        }
        let mut seen: Vec<&str> = Vec::new();
        for x in 0..k {
            for y in 0..k {
                seen.extend(base.hom_labels(ObjectId(x), ObjectId(y)).iter().map(String::as_str));
            }
        }
        for per_degree in &forms {
            if per_degree.len() != k * k {
                return Err(Error::DimensionMismatch { expected: k * k, found: per_degree.len() });
            }
            seen.extend(per_degree.iter().flatten().map(String::as_str));
        }
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate basis label {:?}", w[0])));
        }
        let mut w = Self::empty(base, truncation, forms);
        w.fill_unit_products();
        Ok(w)
    }

    /// Sets `1ₓ·ω = ω = ω·1_y` in positive degrees wherever the identity is a
    /// single basis arrow.
    fn fill_unit_products(&mut self) {
        let k = self.object_count();
        let unit_index = |x: usize| {
            let id = self.base.identity(ObjectId(x));
            let nonzero: Vec<usize> = (0..id.len()).filter(|&i| !id[i].is_zero()).collect();
            (nonzero.len() == 1 && id[nonzero[0]].is_one()).then(|| nonzero[0])
        };
        let units: Vec<Option<usize>> = (0..k).map(unit_index).collect();
        let top = self.truncation;
        for n in 1..=top {
            for x in 0..k {
                for y in 0..k {
                    let (ox, oy) = (ObjectId(x), ObjectId(y));
                    for a in 0..self.dim(n, ox, oy) {
                        if let Some(i) = units[x] {
                            let t = &mut self.comp[n][(x * k + x) * k + y];
                            t.entries[i * t.right_dim + a] = vec![(a, Scalar::one())];
                        }
                        if let Some(j) = units[y] {
                            let t = &mut self.comp[n * (top + 1)][(x * k + y) * k + y];
                            t.entries[a * t.right_dim + j] = vec![(a, Scalar::one())];
                        }
                    }
                }
            }
        }
    }

    /// Overwrites the product of two basis forms. Intended for hand-built
    /// tables and for deliberately corrupting a valid instance.
    #[allow(clippy::too_many_arguments)]
    pub fn set_product(
        &mut self,
        p: usize,
        q: usize,
        x: ObjectId,
        y: ObjectId,
        z: ObjectId,
        a: usize,
        b: usize,
        coords: &[Scalar],
    ) -> Result<()> {
        self.check_slot(p + q, x, z, coords.len())?;
        let (left, right) = (self.dim(p, x, y), self.dim(q, y, z));
        if a >= left || b >= right {
            return Err(Error::InvalidInput(format!("basis pair ({a}, {b}) out of range")));
        }
        let k = self.object_count();
        let table = &mut self.comp[p * (self.truncation + 1) + q][(x.0 * k + y.0) * k + z.0];
        table.entries[a * table.right_dim + b] = dense_to_sparse(coords);
        Ok(())
    }

    /// Overwrites the differential of a basis form of degree `n < N`.
    pub fn set_differential(&mut self, n: usize, x: ObjectId, y: ObjectId, a: usize, coords: &[Scalar]) -> Result<()> {
        if n >= self.truncation {
            return Err(Error::TruncationExceeded { required: n + 1, truncation: self.truncation });
        }
        self.check_slot(n + 1, x, y, coords.len())?;
        if a >= self.dim(n, x, y) {
            return Err(Error::InvalidInput(format!("basis index {a} out of range")));
        }
        let xy = self.pair(x, y);
        self.diff[n][xy][a] = dense_to_sparse(coords);
        Ok(())
    }

    fn check_slot(&self, n: usize, x: ObjectId, y: ObjectId, len: usize) -> Result<()> {
        self.check_object(x)?;
        self.check_object(y)?;
        if n > self.truncation {
            return Err(Error::TruncationExceeded { required: n, truncation: self.truncation });
        }
        let expected = self.dim(n, x, y);
        if len != expected {
            return Err(Error::DimensionMismatch { expected, found: len });
        }
        Ok(())
    }

    /// Locates a basis form by label in any degree: `(degree, cod, dom, index)`.
    pub fn find_form(&self, label: &str) -> Option<(usize, ObjectId, ObjectId, usize)> {
        if let Some((x, y, a)) = self.base.find_basis(label) {
            return Some((0, x, y, a));
        }
        let k = self.object_count();
        self.labels.iter().enumerate().find_map(|(n, per_pair)| {
            per_pair
                .iter()
                .enumerate()
                .find_map(|(xy, labels)| labels.iter().position(|l| l == label).map(|a| (n + 1, ObjectId(xy / k), ObjectId(xy % k), a)))
        })
    }
}

type ChainKey = (Vec<usize>, Vec<usize>);

/// A basis tensor `b₀ ⊗ b₁ ⊗ ⋯ ⊗ bₙ` of the normal form. `objects` lists the
/// intermediate objects `z₁ … zₙ`; `indices[0]` is a basis index of
/// `_xC_{z₁}` and `indices[i]` a bar-basis index of `_{zᵢ}C̄_{zᵢ₊₁}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Chain {
    objects: Vec<usize>,
    indices: Vec<usize>,
}

struct UniversalBuilder<'a> {
    base: &'a Category,
    /// `bar[u * k + v]`: basis indices of `_uC_v` forming the bar basis.
    bar: Vec<Vec<usize>>,
    /// Quotients by `span{1_u}` on the diagonal pairs.
    bar_quotients: Vec<Option<crate::linalg::QuotientSpace>>,
    chains: Vec<Vec<Vec<Chain>>>,
    index: Vec<Vec<BTreeMap<ChainKey, usize>>>,
}

impl<'a> UniversalBuilder<'a> {
    fn new(base: &'a Category, truncation: usize) -> Result<Self> {
        let k = base.object_count();
        let mut bar = Vec::with_capacity(k * k);
        let mut bar_quotients = Vec::with_capacity(k * k);
        for u in 0..k {
            for v in 0..k {
                let dim = base.hom_dim(ObjectId(u), ObjectId(v));
                if u == v {
                    let q = build_quotient(dim, &[base.identity(ObjectId(u)).to_vec()])?;
                    bar.push(q.complement().to_vec());
                    bar_quotients.push(Some(q));
                } else {
                    bar.push((0..dim).collect());
                    bar_quotients.push(None);
                }
            }
        }
        let mut b = UniversalBuilder { base, bar, bar_quotients, chains: Vec::new(), index: Vec::new() };
        for n in 0..=truncation {
            let mut per_pair = Vec::with_capacity(k * k);
            let mut per_index = Vec::with_capacity(k * k);
            for x in 0..k {
                for y in 0..k {
                    let mut chains = b.enumerate(n, x, y);
                    chains.sort();
                    per_index.push(chains.iter().enumerate().map(|(i, c)| ((c.objects.clone(), c.indices.clone()), i)).collect());
                    per_pair.push(chains);
                }
            }
            b.chains.push(per_pair);
            b.index.push(per_index);
        }
        Ok(b)
    }

    fn k(&self) -> usize {
        self.base.object_count()
    }

    fn bar_dim(&self, u: usize, v: usize) -> usize {
        self.bar[u * self.k() + v].len()
    }

    fn enumerate(&self, n: usize, x: usize, y: usize) -> Vec<Chain> {
        let k = self.k();
        let mut out = Vec::new();
        let mut objects = vec![0; n];
        loop {
            let first = if n == 0 { y } else { objects[0] };
            let mut dims = vec![self.base.hom_dim(ObjectId(x), ObjectId(first))];
            for i in 0..n {
                let next = if i + 1 < n { objects[i + 1] } else { y };
                dims.push(self.bar_dim(objects[i], next));
            }
            push_index_tuples(&dims, &objects, &mut out);
            // advance the object sequence lexicographically
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                objects[i] += 1;
                if objects[i] < k {
                    break;
                }
                objects[i] = 0;
            }
        }
    }

    /// Bar coordinates of a morphism of `_uC_v`.
    fn to_bar(&self, u: usize, v: usize, coords: &[Scalar]) -> Result<Vector> {
        match &self.bar_quotients[u * self.k() + v] {
            Some(q) => q.project(coords),
            None => Ok(coords.to_vec()),
        }
    }

    fn compose_morphisms(&self, x: usize, y: usize, z: usize, a: usize, g: &[Scalar]) -> Vector {
        let mut left = zeros(self.base.hom_dim(ObjectId(x), ObjectId(y)));
        left[a] = Scalar::one();
        self.base.compose_coords(0, 0, ObjectId(x), ObjectId(y), ObjectId(z), &left, g)
    }

    /// `chain · g` for `chain ∈ _xΩⁿ_y` and `g ∈ _yC_w`, via
    /// `(ω·dfₙ)·g = ω·d(fₙg) − (ω·fₙ)·dg`.
    fn mul_right(&self, x: usize, y: usize, chain: &Chain, w: usize, g: &[Scalar]) -> Result<BTreeMap<Chain, Scalar>> {
        let mut out = BTreeMap::new();
        let n = chain.objects.len();
        if n == 0 {
            let product = self.compose_morphisms(x, y, w, chain.indices[0], g);
            for (r, c) in product.into_iter().enumerate() {
                accumulate(&mut out, Chain { objects: Vec::new(), indices: vec![r] }, c);
            }
            return Ok(out);
        }
        let zn = chain.objects[n - 1];
        let fn_index = self.bar[zn * self.k() + y][chain.indices[n]];
        let fg = self.compose_morphisms(zn, y, w, fn_index, g);
        for (j, c) in self.to_bar(zn, w, &fg)?.into_iter().enumerate() {
            let mut indices = chain.indices.clone();
            indices[n] = j;
            accumulate(&mut out, Chain { objects: chain.objects.clone(), indices }, c);
        }
        let prefix = Chain { objects: chain.objects[..n - 1].to_vec(), indices: chain.indices[..n].to_vec() };
        let mut fn_coords = zeros(self.base.hom_dim(ObjectId(zn), ObjectId(y)));
        fn_coords[fn_index] = Scalar::one();
        let shifted = self.mul_right(x, zn, &prefix, y, &fn_coords)?;
        let g_bar = self.to_bar(y, w, g)?;
        for (c, coef) in shifted {
            for (j, gc) in g_bar.iter().enumerate() {
                if gc.is_zero() {
                    continue;
                }
                let mut objects = c.objects.clone();
                objects.push(y);
                let mut indices = c.indices.clone();
                indices.push(j);
                accumulate(&mut out, Chain { objects, indices }, -(&coef * gc));
            }
        }
        Ok(out)
    }

    fn compose(&self, x: usize, y: usize, z: usize, left: &Chain, right: &Chain) -> Result<BTreeMap<Chain, Scalar>> {
        let first = right.objects.first().copied().unwrap_or(z);
        let mut g0 = zeros(self.base.hom_dim(ObjectId(y), ObjectId(first)));
        g0[right.indices[0]] = Scalar::one();
        let mut out = BTreeMap::new();
        for (c, coef) in self.mul_right(x, y, left, first, &g0)? {
            let mut objects = c.objects;
            objects.extend_from_slice(&right.objects);
            let mut indices = c.indices;
            indices.extend_from_slice(&right.indices[1..]);
            accumulate(&mut out, Chain { objects, indices }, coef);
        }
        Ok(out)
    }

    /// `d(b₀·db₁⋯dbₙ) = 1ₓ·db₀·db₁⋯dbₙ`.
    fn differential(&self, x: usize, y: usize, chain: &Chain) -> Result<BTreeMap<Chain, Scalar>> {
        let first = chain.objects.first().copied().unwrap_or(y);
        let mut f0 = zeros(self.base.hom_dim(ObjectId(x), ObjectId(first)));
        f0[chain.indices[0]] = Scalar::one();
        let f0_bar = self.to_bar(x, first, &f0)?;
        let mut out = BTreeMap::new();
        for (i, unit) in self.base.identity(ObjectId(x)).iter().enumerate() {
            for (j, c) in f0_bar.iter().enumerate() {
                let mut objects = vec![x];
                objects.extend_from_slice(&chain.objects);
                let mut indices = vec![i, j];
                indices.extend_from_slice(&chain.indices[1..]);
                accumulate(&mut out, Chain { objects, indices }, unit * c);
            }
        }
        Ok(out)
    }

    /// `b₀·db₁⋯dbₙ`, omitting `b₀` when it is the identity basis arrow.
    fn label(&self, x: usize, y: usize, chain: &Chain) -> String {
        let n = chain.objects.len();
        let first = chain.objects.first().copied().unwrap_or(y);
        let a0 = chain.indices[0];
        let identity = self.base.identity(ObjectId(x));
        let is_unit = first == x && identity.iter().enumerate().all(|(i, c)| if i == a0 { c.is_one() } else { c.is_zero() });
        let mut parts = Vec::with_capacity(n + 1);
        if n == 0 || !is_unit {
            parts.push(String::from(&self.base.hom_labels(ObjectId(x), ObjectId(first))[a0]));
        }
        for i in 0..n {
            let u = chain.objects[i];
            let v = chain.objects.get(i + 1).copied().unwrap_or(y);
            let arrow = self.bar[u * self.k() + v][chain.indices[i + 1]];
            parts.push(format!("d{}", self.base.hom_labels(ObjectId(u), ObjectId(v))[arrow]));
        }
        parts.join("·")
    }
}

fn push_index_tuples(dims: &[usize], objects: &[usize], out: &mut Vec<Chain>) {
    if dims.contains(&0) {
        return;
    }
    let mut indices = vec![0; dims.len()];
    loop {
        out.push(Chain { objects: objects.to_vec(), indices: indices.clone() });
        let mut i = dims.len();
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            indices[i] += 1;
            if indices[i] < dims[i] {
                break;
            }
            indices[i] = 0;
        }
    }
}

fn accumulate(map: &mut BTreeMap<Chain, Scalar>, key: Chain, value: Scalar) {
    if value.is_zero() {
        return;
    }
    let slot = map.entry(key).or_insert_with(Scalar::zero);
    *slot += value;
}

fn to_sparse(index: &BTreeMap<ChainKey, usize>, map: BTreeMap<Chain, Scalar>) -> SparseVec {
    let mut out: SparseVec = map
        .into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|(chain, c)| (*index.get(&(chain.objects, chain.indices)).expect("normal-form chain is indexed"), c))
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}

/// Empty iff `d² = 0`, the graded Leibniz rule holds, composition is
/// associative and unital in every degree, and degree 0 matches the base.
pub fn validate_dg(w: &DGCategory) -> Vec<Violation> {
    let mut out = Vec::new();
    check_base(w, &mut out);
    check_associativity(w, &mut out);
    check_units(w, &mut out);
    check_differential_square(w, &mut out);
    check_leibniz(w, &mut out);
    out
}

fn check_base(w: &DGCategory, out: &mut Vec<Violation>) {
    let base = w.base();
    for x in w.objects() {
        for y in w.objects() {
            for z in w.objects() {
                for a in 0..base.hom_dim(x, y) {
                    for b in 0..base.hom_dim(y, z) {
                        if w.compose_basis(0, 0, x, y, z, a, b) != base.compose_basis(0, 0, x, y, z, a, b) {
                            out.push(Violation::BaseMismatch(format!(
                                "product {} ∘ {} differs from the base category",
                                base.basis_label(0, x, y, a),
                                base.basis_label(0, y, z, b)
                            )));
                        }
                    }
                }
            }
        }
    }
}

fn check_differential_square(w: &DGCategory, out: &mut Vec<Violation>) {
    for n in 0..w.truncation() {
        for x in w.objects() {
            for y in w.objects() {
                for a in 0..w.dim(n, x, y) {
                    let f = w.basis_form(n, x, y, a);
                    if !w.differential(&w.differential(&f)).is_zero() {
                        out.push(Violation::DifferentialSquare { degree: n, cod: x, dom: y, basis: a });
                    }
                }
            }
        }
    }
}

fn check_leibniz(w: &DGCategory, out: &mut Vec<Violation>) {
    let top = w.truncation();
    let objects = w.objects();
    for p in 0..top {
        for q in 0..top - p {
            for &x in &objects {
                for &y in &objects {
                    for &z in &objects {
                        for a in 0..w.dim(p, x, y) {
                            let fa = w.basis_form(p, x, y, a);
                            let da = w.differential(&fa);
                            for b in 0..w.dim(q, y, z) {
                                let fb = w.basis_form(q, y, z, b);
                                let lhs = w.differential(&w.compose_forms(&fa, &fb).expect("composable"));
                                let first = w.compose_forms(&da, &fb).expect("composable");
                                let second = w.compose_forms(&fa, &w.differential(&fb)).expect("composable");
                                let rhs = if p % 2 == 0 { first.add(&second) } else { first.sub(&second) }.expect("same space");
                                if lhs != rhs {
                                    out.push(Violation::Leibniz { degrees: [p, q], objects: [x, y, z], basis: [a, b] });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// A polynomial `Σ ωᵢ tⁱ` whose coefficients are forms of a common degree
/// and endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyForm {
    pub degree: usize,
    pub cod: ObjectId,
    pub dom: ObjectId,
    /// Coefficient of `tⁱ` at index `i`.
    pub coeffs: Vec<Vector>,
}

impl PolyForm {
    pub fn zero(degree: usize, cod: ObjectId, dom: ObjectId) -> Self {
        Self { degree, cod, dom, coeffs: Vec::new() }
    }

    /// `ω tᵏ`.
    pub fn monomial(form: &Form, power: usize) -> Self {
        let mut coeffs = vec![zeros(form.coords.len()); power];
        coeffs.push(form.coords.clone());
        Self { degree: form.degree, cod: form.cod, dom: form.dom, coeffs }
    }

    pub fn constant(form: &Form) -> Self {
        Self::monomial(form, 0)
    }

    pub fn coefficient<G: Graded + ?Sized>(&self, g: &G, i: usize) -> Form {
        match self.coeffs.get(i) {
            Some(c) => Form { degree: self.degree, cod: self.cod, dom: self.dom, coords: c.clone() },
            None => Form::zero(g, self.degree, self.cod, self.dom),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| is_zero_vector(c))
    }

    /// Drops trailing zero coefficients.
    pub fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| is_zero_vector(c)) {
            self.coeffs.pop();
        }
        self
    }

    fn check_same_space(&self, other: &PolyForm) -> Result<()> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        if (self.cod, self.dom) != (other.cod, other.dom) {
            return Err(Error::ObjectMismatch { expected: self.cod.0, found: other.cod.0 });
        }
        Ok(())
    }

    pub fn add(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_same_space(other)?;
        Ok(PolyForm { coeffs: zip_longest(&self.coeffs, &other.coeffs, add_vectors), ..self.clone() }.trimmed())
    }

    pub fn sub(&self, other: &PolyForm) -> Result<PolyForm> {
        self.check_same_space(other)?;
        Ok(PolyForm { coeffs: zip_longest(&self.coeffs, &other.coeffs, sub_vectors), ..self.clone() }.trimmed())
    }

    pub fn scale(&self, factor: &Scalar) -> PolyForm {
        PolyForm { coeffs: self.coeffs.iter().map(|c| scale_vector(factor, c)).collect(), ..self.clone() }.trimmed()
    }

    /// Product with coefficients `Σ_{r} ω_r ζ_{k−r}`.
    pub fn compose<G: Graded + ?Sized>(&self, g: &G, other: &PolyForm) -> Result<PolyForm> {
        if self.dom != other.cod {
            return Err(Error::ObjectMismatch { expected: self.dom.0, found: other.cod.0 });
        }
        let degree = self.degree + other.degree;
        let mut out = PolyForm::zero(degree, self.cod, other.dom);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(out);
        }
        let len = g.dim(degree, self.cod, other.dom);
        out.coeffs = vec![zeros(len); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                let prod = g.compose_coords(self.degree, other.degree, self.cod, self.dom, other.dom, a, b);
                for (s, p) in out.coeffs[i + j].iter_mut().zip(prod) {
                    *s += p;
                }
            }
        }
        Ok(out.trimmed())
    }

    /// `d(Σ ωᵢ tⁱ) = Σ (dωᵢ) tⁱ`.
    pub fn differential<G: Graded + ?Sized>(&self, g: &G) -> PolyForm {
        let coeffs = self.coeffs.iter().map(|c| g.diff_coords(self.degree, self.cod, self.dom, c)).collect();
        PolyForm { degree: self.degree + 1, cod: self.cod, dom: self.dom, coeffs }.trimmed()
    }

    /// `Σ i ωᵢ t^{i−1}`.
    pub fn t_derivative(&self) -> PolyForm {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| scale_vector(&int(i as i64), c)).collect();
        PolyForm { coeffs, ..self.clone() }.trimmed()
    }

    /// `∫₀¹ Σ ωᵢ tⁱ dt = Σ ωᵢ / (i + 1)`.
    pub fn integral_01<G: Graded + ?Sized>(&self, g: &G) -> Form {
        let mut out = Form::zero(g, self.degree, self.cod, self.dom);
        for (i, c) in self.coeffs.iter().enumerate() {
            let w = Scalar::new(1.into(), ((i + 1) as i64).into());
            crate::linalg::axpy(&mut out.coords, &w, c);
        }
        out
    }

    /// The form obtained by substituting `t = a`.
    pub fn eval_at<G: Graded + ?Sized>(&self, g: &G, a: &Scalar) -> Form {
        let mut out = Form::zero(g, self.degree, self.cod, self.dom);
        let mut power = Scalar::one();
        for c in &self.coeffs {
            crate::linalg::axpy(&mut out.coords, &power, c);
            power *= a;
        }
        out
    }
}

fn zip_longest(a: &[Vector], b: &[Vector], f: fn(&[Scalar], &[Scalar]) -> Vector) -> Vec<Vector> {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => f(x, y),
            (Some(x), None) => x.clone(),
            (None, Some(y)) => f(&zeros(y.len()), y),
            (None, None) => unreachable!(),
        })
        .collect()
}

/// `ω₀ + ω₁ε` with `ω₀ ∈ Ωⁿ[t]` and `ω₁ ∈ Ω^{n−1}[t]`; `ε` has degree 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeForm {
    pub omega0: PolyForm,
    /// Absent in degree 0, and may be absent to mean zero otherwise.
    pub omega1: Option<PolyForm>,
}

impl TildeForm {
    pub fn new(omega0: PolyForm, omega1: Option<PolyForm>) -> Result<Self> {
        if let Some(o1) = &omega1 {
            if o1.degree + 1 != omega0.degree {
                return Err(Error::DegreeMismatch { expected: omega0.degree.saturating_sub(1), found: o1.degree });
            }
            if (o1.cod, o1.dom) != (omega0.cod, omega0.dom) {
                return Err(Error::ObjectMismatch { expected: omega0.cod.0, found: o1.cod.0 });
            }
        }
        Ok(Self { omega0, omega1 })
    }

    pub fn degree(&self) -> usize {
        self.omega0.degree
    }

    /// `1ₓ + 0ε`.
    pub fn identity<G: Graded + ?Sized>(g: &G, x: ObjectId) -> Self {
        Self { omega0: PolyForm::constant(&g.identity_form(x)), omega1: None }
    }

    fn omega1_or_zero(&self) -> Option<PolyForm> {
        let n = self.degree();
        match (&self.omega1, n) {
            (Some(o), _) => Some(o.clone()),
            (None, 0) => None,
            (None, _) => Some(PolyForm::zero(n - 1, self.omega0.cod, self.omega0.dom)),
        }
    }

    /// Same element with zero parts normalized, for comparisons.
    pub fn normalized(&self) -> Self {
        Self { omega0: self.omega0.clone().trimmed(), omega1: self.omega1_or_zero().map(PolyForm::trimmed) }
    }
}

/// `(ω₀+ω₁ε)(ζ₀+ζ₁ε) = ω₀ζ₀ + (ω₀ζ₁ + (−1)^{|ζ₀|} ω₁ζ₀)ε`.
pub fn compose_tilde<G: Graded + ?Sized>(g: &G, left: &TildeForm, right: &TildeForm) -> Result<TildeForm> {
    let omega0 = left.omega0.compose(g, &right.omega0)?;
    let n = omega0.degree;
    let mut omega1 = if n == 0 { None } else { Some(PolyForm::zero(n - 1, omega0.cod, omega0.dom)) };
    if let Some(z1) = right.omega1_or_zero() {
        let term = left.omega0.compose(g, &z1)?;
        omega1 = Some(omega1.expect("positive degree").add(&term)?);
    }
    if let Some(w1) = left.omega1_or_zero() {
        let term = w1.compose(g, &right.omega0)?;
        let acc = omega1.expect("positive degree");
        omega1 = Some(if right.degree().is_multiple_of(2) { acc.add(&term)? } else { acc.sub(&term)? });
    }
    Ok(TildeForm { omega0, omega1 })
}

/// `∂(ω₀+ω₁ε) = dω₀ + (dω₁ + (−1)^{n+1} ω̇₀)ε`, the sign making
/// `∂(Λt) = (dΛ)t + Λε` and giving the homotopy formula for `∫₀¹`.
pub fn partial<G: Graded + ?Sized>(g: &G, form: &TildeForm) -> TildeForm {
    let n = form.degree();
    let omega0 = form.omega0.differential(g);
    let dot = form.omega0.t_derivative();
    let mut omega1 = if n.is_multiple_of(2) { dot.scale(&-Scalar::one()) } else { dot };
    if let Some(w1) = form.omega1_or_zero() {
        omega1 = omega1.add(&w1.differential(g)).expect("same space");
    }
    TildeForm { omega0, omega1: Some(omega1) }
}

/// A matrix over `Ω̃`: polynomial form matrices `part0` (degree `n`) and
/// `part1` (degree `n − 1`), indexed by powers of `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TildeMatrix {
    rows: Vec<ObjectId>,
    cols: Vec<ObjectId>,
    degree: usize,
    part0: Vec<FormMatrix>,
    part1: Vec<FormMatrix>,
}

impl TildeMatrix {
    /// `Σ Xᵢ tⁱ + (Σ Yᵢ tⁱ)ε`; every coefficient must share the index families.
    pub fn new(rows: &[ObjectId], cols: &[ObjectId], degree: usize, part0: Vec<FormMatrix>, part1: Vec<FormMatrix>) -> Result<Self> {
        for m in part0.iter().chain(&part1) {
            if m.rows() != rows || m.cols() != cols {
                return Err(Error::InvalidInput("tilde matrix coefficients have different index families".into()));
            }
        }
        if let Some(m) = part0.iter().find(|m| m.degree() != degree) {
            return Err(Error::DegreeMismatch { expected: degree, found: m.degree() });
        }
        if let Some(m) = part1.iter().find(|m| m.degree() + 1 != degree) {
            return Err(Error::DegreeMismatch { expected: degree.saturating_sub(1), found: m.degree() });
        }
        Ok(Self { rows: rows.to_vec(), cols: cols.to_vec(), degree, part0, part1 })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn part0(&self) -> &[FormMatrix] {
        &self.part0
    }

    pub fn part1(&self) -> &[FormMatrix] {
        &self.part1
    }

    pub fn rows(&self) -> &[ObjectId] {
        &self.rows
    }

    pub fn mul<G: Graded + ?Sized>(&self, g: &G, other: &TildeMatrix) -> Result<TildeMatrix> {
        if self.cols != other.rows {
            return Err(Error::InvalidInput("inner index families of a tilde-matrix product differ".into()));
        }
        let degree = self.degree + other.degree;
        let part0 = convolve(g, &self.part0, &other.part0, &self.rows, &other.cols, degree)?;
        let mut part1 = Vec::new();
        if degree > 0 {
            let a = convolve(g, &self.part0, &other.part1, &self.rows, &other.cols, degree - 1)?;
            let b = convolve(g, &self.part1, &other.part0, &self.rows, &other.cols, degree - 1)?;
            let sign = if other.degree.is_multiple_of(2) { Scalar::one() } else { -Scalar::one() };
            part1 = add_poly_matrices(g, &a, &b, &sign, &self.rows, &other.cols, degree - 1)?;
        }
        Ok(TildeMatrix { rows: self.rows.clone(), cols: other.cols.clone(), degree, part0, part1 })
    }

    pub fn add<G: Graded + ?Sized>(&self, g: &G, other: &TildeMatrix) -> Result<TildeMatrix> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch { expected: self.degree, found: other.degree });
        }
        let one = Scalar::one();
        let part0 = add_poly_matrices(g, &self.part0, &other.part0, &one, &self.rows, &self.cols, self.degree)?;
        let part1 = if self.degree == 0 {
            Vec::new()
        } else {
            add_poly_matrices(g, &self.part1, &other.part1, &one, &self.rows, &self.cols, self.degree - 1)?
        };
        Ok(TildeMatrix { part0, part1, ..self.clone() })
    }

    /// Entrywise `∂`.
    pub fn partial<G: Graded + ?Sized>(&self, g: &G) -> TildeMatrix {
        let n = self.degree;
        let sign = if n.is_multiple_of(2) { -Scalar::one() } else { Scalar::one() };
        let part0 = self.part0.iter().map(|m| m.differential(g)).collect();
        let dot: Vec<FormMatrix> = self.part0.iter().enumerate().skip(1).map(|(i, m)| m.scale(&(int(i as i64) * &sign))).collect();
        let d1: Vec<FormMatrix> = self.part1.iter().map(|m| m.differential(g)).collect();
        let part1 = add_poly_matrices(g, &dot, &d1, &Scalar::one(), &self.rows, &self.cols, n).expect("same shape");
        TildeMatrix { rows: self.rows.clone(), cols: self.cols.clone(), degree: n + 1, part0, part1 }
    }

    pub fn entry<G: Graded + ?Sized>(&self, g: &G, i: usize, j: usize) -> TildeForm {
        let (cod, dom) = (self.rows[i], self.cols[j]);
        let omega0 =
            PolyForm { degree: self.degree, cod, dom, coeffs: self.part0.iter().map(|m| m.entry(i, j).clone()).collect() }.trimmed();
        let omega1 = (self.degree > 0).then(|| {
            PolyForm { degree: self.degree - 1, cod, dom, coeffs: self.part1.iter().map(|m| m.entry(i, j).clone()).collect() }.trimmed()
        });
        let _ = g;
        TildeForm { omega0, omega1 }
    }
}

fn convolve<G: Graded + ?Sized>(
    g: &G,
    a: &[FormMatrix],
    b: &[FormMatrix],
    rows: &[ObjectId],
    cols: &[ObjectId],
    degree: usize,
) -> Result<Vec<FormMatrix>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![FormMatrix::zero(g, rows, cols, degree); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(g, y)?)?;
        }
    }
    Ok(out)
}

/// `a + sign · b` coefficientwise.
fn add_poly_matrices<G: Graded + ?Sized>(
    g: &G,
    a: &[FormMatrix],
    b: &[FormMatrix],
    sign: &Scalar,
    rows: &[ObjectId],
    cols: &[ObjectId],
    degree: usize,
) -> Result<Vec<FormMatrix>> {
    let len = a.len().max(b.len());
    let zero = FormMatrix::zero(g, rows, cols, degree);
    (0..len)
        .map(|i| {
            let x = a.get(i).unwrap_or(&zero);
            let y = b.get(i).map(|m| m.scale(sign)).unwrap_or_else(|| zero.clone());
            x.add(&y)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::linalg::ratio;

    fn star() -> ObjectId {
        ObjectId(0)
    }

    #[test]
    fn universal_dimensions() {
        let point = DGCategory::universal(instances::point(), 3).unwrap();
        assert_eq!(point.dim(1, star(), star()), 0);
        assert_eq!(point.dim(3, star(), star()), 0);

        let dual = DGCategory::universal(instances::dual_numbers(), 4).unwrap();
        for n in 0..=4 {
            assert_eq!(dual.dim(n, star(), star()), 2);
        }
        assert_eq!(dual.basis_label(1, star(), star(), 0), "du");
        assert_eq!(dual.basis_label(1, star(), star(), 1), "u·du");
        assert_eq!(dual.basis_label(2, star(), star(), 0), "du·du");

        let a2 = DGCategory::universal(instances::a2_path(), 3).unwrap();
        let (one, two) = (ObjectId(0), ObjectId(1));
        assert_eq!(a2.dim(1, two, one), 1);
        assert_eq!(a2.dim(1, one, one), 0);
        assert_eq!(a2.dim(1, two, two), 0);
        assert_eq!(a2.dim(2, two, one), 0);
    }

    #[test]
    fn universal_instances_validate() {
        for c in [instances::point(), instances::dual_numbers(), instances::a2_path(), instances::cycle2()] {
            let w = DGCategory::universal(c.clone(), 3).unwrap();
            assert_eq!(validate_dg(&w), vec![]);
            assert_eq!(validate_dg(&DGCategory::trivial(c, 2)), vec![]);
        }
    }

    #[test]
    fn dual_number_relations() {
        let w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
        let (_, x, y, u_idx) = w.find_form("u").unwrap();
        let u = w.basis_form(0, x, y, u_idx);
        let du = w.differential(&u);
        let (_, _, _, du_idx) = w.find_form("du").unwrap();
        assert_eq!(du, w.basis_form(1, x, y, du_idx));
        let du_u = w.compose_forms(&du, &u).unwrap();
        let u_du = w.compose_forms(&u, &du).unwrap();
        assert_eq!(du_u, u_du.scale(&int(-1)));
        assert!(w.differential(&du).is_zero());
        assert!(w.differential(&w.identity_form(x)).is_zero());
        let two = w.basis_form(2, x, y, 0);
        assert!(w.compose_forms(&two, &two).unwrap().is_zero());
    }

    #[test]
    fn corruptions_are_detected() {
        let mut w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
        let (_, x, y, du) = w.find_form("du").unwrap();
        let mut coords = zeros(2);
        coords[0] = int(1);
        w.set_differential(1, x, y, du, &coords).unwrap();
        let violations = validate_dg(&w);
        assert!(violations.iter().any(|v| matches!(v, Violation::DifferentialSquare { .. })));
        assert!(violations.iter().any(|v| matches!(v, Violation::Leibniz { .. })));
    }

    #[test]
    fn poly_examples() {
        let w = DGCategory::universal(instances::dual_numbers(), 3).unwrap();
        let du = w.basis_form(1, star(), star(), 0);
        let half = PolyForm::monomial(&du, 1).integral_01(&w);
        assert_eq!(half, du.scale(&ratio(1, 2)));
        let d = PolyForm::monomial(&du, 2).t_derivative();
        assert_eq!(d, PolyForm::monomial(&du.scale(&int(2)), 1));
        let p = PolyForm::monomial(&du, 1).compose(&w, &PolyForm::monomial(&du, 1)).unwrap();
        let dudu = w.compose_forms(&du, &du).unwrap();
        assert_eq!(p, PolyForm::monomial(&dudu, 2));
        assert_eq!(PolyForm::monomial(&du, 2).eval_at(&w, &int(3)), du.scale(&int(9)));
    }

    #[test]
    fn tilde_differential_squares_to_zero() {
        let w = DGCategory::universal(instances::dual_numbers(), 4).unwrap();
        let u = w.basis_form(0, star(), star(), 1);
        let udu = w.basis_form(1, star(), star(), 1);
        let omega0 = PolyForm::monomial(&udu, 2).add(&PolyForm::monomial(&w.differential(&u), 1)).unwrap();
        let omega1 = PolyForm::monomial(&u, 3);
        let form = TildeForm::new(omega0, Some(omega1)).unwrap();
        let twice = partial(&w, &partial(&w, &form));
        assert!(twice.omega0.is_zero());
        assert!(twice.omega1.unwrap().is_zero());

        let lambda = TildeForm::new(PolyForm::monomial(&w.basis_form(1, star(), star(), 0), 1), None).unwrap();
        let d = partial(&w, &lambda);
        assert_eq!(d.omega1.unwrap(), PolyForm::constant(&w.basis_form(1, star(), star(), 0)));

        let id = TildeForm::identity(&w, star());
        assert_eq!(compose_tilde(&w, &id, &form).unwrap().normalized(), form.normalized());
    }
}
