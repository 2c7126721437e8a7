//! Finite ℚ-linear categories presented by basis morphisms and composition
//! structure constants.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{commutator_generators, dense_to_sparse, CompositionTable, DiagonalForm, Form, Graded, ObjectId};
use crate::linalg::{build_quotient, QuotientSpace, Scalar, Vector};

/// A morphism of `_codC_dom`: a degree-0 form.
pub type Morphism = Form;

/// An element of `⊕_z _zC_z`.
pub type DiagonalElement = DiagonalForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Category {
    objects: Vec<String>,
    /// Indexed by `x * k + y`: labels of the basis of `_xC_y`.
    hom_basis: Vec<Vec<String>>,
    /// Indexed by `(x * k + y) * k + z`.
    comp: Vec<CompositionTable>,
    identity: Vec<Vector>,
}

impl Category {
    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn object_label(&self, x: ObjectId) -> &str {
        &self.objects[x.0]
    }

    pub fn object_labels(&self) -> &[String] {
        &self.objects
    }

    pub fn find_object(&self, label: &str) -> Option<ObjectId> {
        self.objects.iter().position(|o| o == label).map(ObjectId)
    }

    pub fn hom_dim(&self, x: ObjectId, y: ObjectId) -> usize {
        self.hom_basis[x.0 * self.objects.len() + y.0].len()
    }

    pub fn hom_labels(&self, x: ObjectId, y: ObjectId) -> &[String] {
        &self.hom_basis[x.0 * self.objects.len() + y.0]
    }

    /// Coordinates of `1_x` in `_xC_x`.
    pub fn identity(&self, x: ObjectId) -> &[Scalar] {
        &self.identity[x.0]
    }

    /// Locates a basis morphism by label: `(cod, dom, index)`.
    pub fn find_basis(&self, label: &str) -> Option<(ObjectId, ObjectId, usize)> {
        let k = self.objects.len();
        self.hom_basis
            .iter()
            .enumerate()
            .find_map(|(xy, labels)| labels.iter().position(|l| l == label).map(|a| (ObjectId(xy / k), ObjectId(xy % k), a)))
    }

    fn table(&self, x: ObjectId, y: ObjectId, z: ObjectId) -> &CompositionTable {
        let k = self.objects.len();
        &self.comp[(x.0 * k + y.0) * k + z.0]
    }

    /// `f ∘ g` for `f ∈ _xC_y`, `g ∈ _yC_z`.
    pub fn compose(&self, f: &Morphism, g: &Morphism) -> Result<Morphism> {
        if f.degree != 0 || g.degree != 0 {
            return Err(Error::DegreeMismatch { expected: 0, found: f.degree.max(g.degree) });
        }
        self.compose_forms(f, g)
    }

    pub fn morphism(&self, cod: ObjectId, dom: ObjectId, coords: Vector) -> Result<Morphism> {
        self.check_object(cod)?;
        self.check_object(dom)?;
        let expected = self.hom_dim(cod, dom);
        if coords.len() != expected {
            return Err(Error::DimensionMismatch { expected, found: coords.len() });
        }
        Ok(Form { degree: 0, cod, dom, coords })
    }

    /// The quotient `C_ab = (⊕_z _zC_z) / [C, C]`.
    pub fn abelianization(&self) -> QuotientSpace {
        let spanning: Vec<Vector> = commutator_generators(self, 0).into_iter().map(|g| g.value.coords).collect();
        let ambient = crate::graded::diagonal_layout(self, 0).1;
        build_quotient(ambient, &spanning).expect("commutators live in the diagonal ambient space")
    }

    /// Image of a diagonal element in `C_ab`.
    pub fn commutator_class(&self, d: &DiagonalElement) -> Result<Vector> {
        if d.degree != 0 {
            return Err(Error::DegreeMismatch { expected: 0, found: d.degree });
        }
        self.abelianization().project(&d.coords)
    }
}

impl Graded for Category {
    fn base(&self) -> &Category {
        self
    }

    fn truncation(&self) -> usize {
        0
    }

    fn dim(&self, n: usize, x: ObjectId, y: ObjectId) -> usize {
        if n == 0 {
            self.hom_dim(x, y)
        } else {
            0
        }
    }

    fn compose_basis(&self, p: usize, q: usize, x: ObjectId, y: ObjectId, z: ObjectId, a: usize, b: usize) -> &[(usize, Scalar)] {
        if p == 0 && q == 0 {
            self.table(x, y, z).get(a, b)
        } else {
            &[]
        }
    }

    fn diff_basis(&self, _n: usize, _x: ObjectId, _y: ObjectId, _a: usize) -> &[(usize, Scalar)] {
        &[]
    }

    fn basis_label(&self, n: usize, x: ObjectId, y: ObjectId, a: usize) -> &str {
        debug_assert_eq!(n, 0);
        &self.hom_labels(x, y)[a]
    }
}

/// `left ∘ right = Σ coefficient · label`, by basis labels.
type Rule = (String, String, Vec<(String, Scalar)>);

/// Incremental construction of a [`Category`] from labelled basis morphisms.
///
/// Composition rules and identities are stated with basis labels; unstated
/// products are zero. Labels must be unique across the whole category.
#[derive(Clone, Debug, Default)]
pub struct CategoryBuilder {
    objects: Vec<String>,
    homs: BTreeMap<(usize, usize), Vec<String>>,
    identities: BTreeMap<usize, Vec<(String, Scalar)>>,
    rules: Vec<Rule>,
}

impl CategoryBuilder {
    pub fn new<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        Self { objects: objects.into_iter().map(Into::into).collect(), ..Self::default() }
    }

    /// Declares the basis of `_codC_dom`.
    pub fn hom<S: Into<String>>(mut self, cod: usize, dom: usize, labels: impl IntoIterator<Item = S>) -> Self {
        self.homs.entry((cod, dom)).or_default().extend(labels.into_iter().map(Into::into));
        self
    }

    pub fn identity<S: Into<String>>(mut self, x: usize, combination: impl IntoIterator<Item = (S, Scalar)>) -> Self {
        self.identities.insert(x, combination.into_iter().map(|(l, c)| (l.into(), c)).collect());
        self
    }

    /// `left ∘ right = Σ coefficient · label`.
    pub fn rule<S: Into<String>>(
        mut self,
        left: impl Into<String>,
        right: impl Into<String>,
        result: impl IntoIterator<Item = (S, Scalar)>,
    ) -> Self {
        self.rules.push((left.into(), right.into(), result.into_iter().map(|(l, c)| (l.into(), c)).collect()));
        self
    }

    pub fn build(self) -> Result<Category> {
        let k = self.objects.len();
        if k == 0 {
            return Err(Error::InvalidInput("a category needs at least one object".into()));
        }
        let mut hom_basis = alloc::vec![Vec::new(); k * k];
        let mut index: BTreeMap<String, (usize, usize, usize)> = BTreeMap::new();
        for ((x, y), labels) in self.homs {
            if x >= k || y >= k {
                return Err(Error::UnknownObject(x.max(y)));
            }
            for label in labels {
                if index.contains_key(&label) {
                    return Err(Error::InvalidInput(format!("duplicate basis label {label:?}")));
                }
                index.insert(label.clone(), (x, y, hom_basis[x * k + y].len()));
                hom_basis[x * k + y].push(label);
            }
        }
        let lookup = |label: &str| index.get(label).copied().ok_or_else(|| Error::InvalidInput(format!("unknown basis label {label:?}")));

        let mut identity: Vec<Vector> = (0..k).map(|x| crate::linalg::zeros(hom_basis[x * k + x].len())).collect();
        for (x, combination) in self.identities {
            if x >= k {
                return Err(Error::UnknownObject(x));
            }
            for (label, c) in combination {
                let (cx, cy, a) = lookup(&label)?;
                if cx != x || cy != x {
                    return Err(Error::InvalidInput(format!("identity of object {x} uses {label:?} outside its endomorphisms")));
                }
                identity[x][a] += c;
            }
        }

        let mut comp = Vec::with_capacity(k * k * k);
        for x in 0..k {
            for y in 0..k {
                for z in 0..k {
                    comp.push(CompositionTable::zero(hom_basis[x * k + y].len(), hom_basis[y * k + z].len()));
                }
            }
        }
        for (left, right, result) in self.rules {
            let (x, y, a) = lookup(&left)?;
            let (y2, z, b) = lookup(&right)?;
            if y != y2 {
                return Err(Error::InvalidInput(format!("{left:?} ∘ {right:?} is not composable")));
            }
            let mut coords = crate::linalg::zeros(hom_basis[x * k + z].len());
            for (label, c) in result {
                let (rx, rz, r) = lookup(&label)?;
                if rx != x || rz != z {
                    return Err(Error::InvalidInput(format!("{left:?} ∘ {right:?} cannot have the term {label:?} (wrong endpoints)")));
                }
                coords[r] += c;
            }
            let table = &mut comp[(x * k + y) * k + z];
            let slot = a * table.right_dim + b;
            table.entries[slot] = dense_to_sparse(&coords);
        }

        Ok(Category { objects: self.objects, hom_basis, comp, identity })
    }
}

/// A failed axiom, naming the offending basis data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `(ab)c ≠ a(bc)` for basis forms `a ∈ _wΩ^p_x`, `b ∈ _xΩ^q_y`, `c ∈ _yΩ^r_z`.
    Associativity {
        degrees: [usize; 3],
        objects: [ObjectId; 4],
        basis: [usize; 3],
    },
    LeftUnit {
        degree: usize,
        cod: ObjectId,
        dom: ObjectId,
        basis: usize,
    },
    RightUnit {
        degree: usize,
        cod: ObjectId,
        dom: ObjectId,
        basis: usize,
    },
    DifferentialSquare {
        degree: usize,
        cod: ObjectId,
        dom: ObjectId,
        basis: usize,
    },
    /// `d(ab) ≠ (da)b + (−1)ᵖ a(db)` for `a ∈ _xΩᵖ_y`, `b ∈ _yΩ^q_z`.
    Leibniz {
        degrees: [usize; 2],
        objects: [ObjectId; 3],
        basis: [usize; 2],
    },
    BaseMismatch(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Associativity { degrees, objects, basis } => write!(
                f,
                "associativity fails for basis triple {basis:?} of degrees {degrees:?} through objects {}",
                objects.iter().map(ToString::to_string).collect::<Vec<_>>().join("←")
            ),
            Violation::LeftUnit { degree, cod, dom, basis } => {
                write!(f, "left unit law fails on basis {basis} of degree {degree} in hom({dom}→{cod})")
            }
            Violation::RightUnit { degree, cod, dom, basis } => {
                write!(f, "right unit law fails on basis {basis} of degree {degree} in hom({dom}→{cod})")
            }
            Violation::DifferentialSquare { degree, cod, dom, basis } => {
                write!(f, "d∘d ≠ 0 on basis {basis} of degree {degree} in hom({dom}→{cod})")
            }
            Violation::Leibniz { degrees, objects, basis } => write!(
                f,
                "Leibniz rule fails for basis pair {basis:?} of degrees {degrees:?} through objects {}←{}←{}",
                objects[0], objects[1], objects[2]
            ),
            Violation::BaseMismatch(what) => write!(f, "degree-0 data differs from the base category: {what}"),
        }
    }
}

/// Checks `(ab)c = a(bc)` on every composable basis triple with total degree
/// within the truncation.
pub(crate) fn check_associativity<G: Graded + ?Sized>(g: &G, out: &mut Vec<Violation>) {
    let top = g.truncation();
    let objects = g.objects();
    for p in 0..=top {
        for q in 0..=top - p {
            for r in 0..=top - p - q {
                for &w in &objects {
                    for &x in &objects {
                        for &y in &objects {
                            for &z in &objects {
                                check_associativity_block(g, [p, q, r], [w, x, y, z], out);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn check_associativity_block<G: Graded + ?Sized>(g: &G, [p, q, r]: [usize; 3], [w, x, y, z]: [ObjectId; 4], out: &mut Vec<Violation>) {
    for a in 0..g.dim(p, w, x) {
        for b in 0..g.dim(q, x, y) {
            let ab = g.compose_forms(&g.basis_form(p, w, x, a), &g.basis_form(q, x, y, b)).expect("composable");
            for c in 0..g.dim(r, y, z) {
                let cf = g.basis_form(r, y, z, c);
                let left = g.compose_forms(&ab, &cf).expect("composable");
                let bc = g.compose_forms(&g.basis_form(q, x, y, b), &cf).expect("composable");
                let right = g.compose_forms(&g.basis_form(p, w, x, a), &bc).expect("composable");
                if left != right {
                    out.push(Violation::Associativity { degrees: [p, q, r], objects: [w, x, y, z], basis: [a, b, c] });
                }
            }
        }
    }
}

/// Checks that `1_x` is a two-sided unit on every basis form of every degree.
pub(crate) fn check_units<G: Graded + ?Sized>(g: &G, out: &mut Vec<Violation>) {
    for n in 0..=g.truncation() {
        for x in g.objects() {
            for y in g.objects() {
                for a in 0..g.dim(n, x, y) {
                    let f = g.basis_form(n, x, y, a);
                    if g.compose_forms(&g.identity_form(x), &f).expect("composable") != f {
                        out.push(Violation::LeftUnit { degree: n, cod: x, dom: y, basis: a });
                    }
                    if g.compose_forms(&f, &g.identity_form(y)).expect("composable") != f {
                        out.push(Violation::RightUnit { degree: n, cod: x, dom: y, basis: a });
                    }
                }
            }
        }
    }
}

/// Empty iff composition is associative on all basis triples and every
/// identity is a two-sided unit.
pub fn validate_category(c: &Category) -> Vec<Violation> {
    let mut out = Vec::new();
    check_associativity(c, &mut out);
    check_units(c, &mut out);
    out
}

/// True when every coordinate of `v` is zero; re-exported for callers that
/// inspect classes in `C_ab`.
pub fn is_zero_class(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances;
    use crate::linalg::{int, zeros};
    use alloc::vec;

    #[test]
    fn bundled_categories_validate() {
        for c in [instances::point(), instances::dual_numbers(), instances::a2_path(), instances::cycle2()] {
            assert_eq!(validate_category(&c), vec![]);
        }
    }

    #[test]
    fn broken_identity_is_reported() {
        let c = CategoryBuilder::new(["*"])
            .hom(0, 0, ["1", "u"])
            .rule("1", "1", [("1", int(1))])
            .rule("1", "u", [("u", int(1))])
            .rule("u", "1", [("u", int(1))])
            .build()
            .unwrap();
        let violations = validate_category(&c);
        assert!(violations.iter().any(|v| matches!(v, Violation::LeftUnit { .. })));
        assert!(violations.iter().any(|v| matches!(v, Violation::RightUnit { .. })));
    }

    #[test]
    fn compose_examples() {
        let a2 = instances::a2_path();
        let (x2, x1, a_idx) = a2.find_basis("a").unwrap();
        let a = a2.basis_form(0, x2, x1, a_idx);
        let one1 = a2.identity_form(x1);
        assert_eq!(a2.compose(&a, &one1).unwrap(), a);
        let two_a = a.scale(&int(2));
        assert_eq!(a2.compose(&two_a, &one1).unwrap(), two_a);
        assert!(matches!(a2.compose(&one1, &a), Err(Error::ObjectMismatch { .. })));

        let dual = instances::dual_numbers();
        let (s, _, u_idx) = dual.find_basis("u").unwrap();
        let u = dual.basis_form(0, s, s, u_idx);
        assert!(dual.compose(&u, &u).unwrap().is_zero());
    }

    #[test]
    fn abelianization_examples() {
        let a2 = instances::a2_path();
        let ab = a2.abelianization();
        assert_eq!(ab.dim(), 2);
        assert!(ab.subspace_basis().is_empty());

        let dual = instances::dual_numbers();
        assert_eq!(dual.abelianization().dim(), 2);
        let zero = DiagonalForm::zero(&dual, 0);
        assert_eq!(dual.commutator_class(&zero).unwrap(), zeros(2));
    }

    #[test]
    fn builder_rejects_bad_rules() {
        let err = CategoryBuilder::new(["1", "2"]).hom(1, 0, ["a"]).hom(0, 0, ["e1"]).rule("e1", "a", [("a", int(1))]).build();
        assert!(matches!(err, Err(Error::InvalidInput(_))));
        let err = CategoryBuilder::new(["1"]).hom(0, 0, ["e", "e"]).build();
        assert!(matches!(err, Err(Error::InvalidInput(_))));
    }
}
