//! Resolution of a [`WorkspaceDoc`] into engine structures, with findings
//! that name the offending item.

use std::collections::BTreeMap;

use lincat_core::category::{validate_category, CategoryBuilder, Violation};
use lincat_core::connection::{compress_connection, direct_sum_connection, free_connection, levi_civita, Connection};
use lincat_core::dg::validate_dg;
use lincat_core::module::direct_sum;
use lincat_core::{Category, DGCategory, Error, FormMatrix, Graded, ObjectId, ProjectiveModule, Scalar, Vector};
use num_traits::Zero;

use crate::doc::{Combination, ConnectionDoc, DgDoc, EndomorphismDoc, FormSpaceDoc, MatrixDoc, ModuleDoc, Rational, WorkspaceDoc};
use crate::error::LincatError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedConnection {
    pub name: String,
    pub module: String,
    pub connection: Connection,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedEndomorphism {
    pub name: String,
    pub module: String,
    pub matrix: FormMatrix,
}

/// A validated workspace: the document it came from and everything built
/// from it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    doc: WorkspaceDoc,
    dg: DGCategory,
    modules: Vec<(String, ProjectiveModule)>,
    connections: Vec<NamedConnection>,
    endomorphisms: Vec<NamedEndomorphism>,
}

/// Parses and fully validates a JSON workspace.
pub fn parse_workspace(text: &str) -> Result<Workspace, LincatError> {
    let doc: WorkspaceDoc = serde_json::from_str(text).map_err(|e| LincatError::invalid(format!("malformed document: {e}")))?;
    Workspace::from_doc(doc)
}

impl Workspace {
    pub fn from_doc(doc: WorkspaceDoc) -> Result<Self, LincatError> {
        if doc.field != "Q" {
            return Err(LincatError::invalid(format!("field: only \"Q\" is supported, found {:?}", doc.field)));
        }
        let category = build_category(&doc)?;
        let found: Vec<String> = validate_category(&category).iter().map(|v| describe_violation(&category, v)).collect();
        if !found.is_empty() {
            return Err(LincatError::Invalid(found.into_iter().map(|f| format!("category: {f}")).collect()));
        }
        let dg = build_dg(category, &doc.dg)?;
        let found: Vec<String> = validate_dg(&dg).iter().map(|v| format!("dg: {}", describe_violation(&dg, v))).collect();
        if !found.is_empty() {
            return Err(LincatError::Invalid(found));
        }
        let mut findings = Vec::new();
        let modules = build_modules(&dg, &doc.modules, &mut findings);
        let connections = build_connections(&dg, &modules, &doc.connections, &mut findings);
        let endomorphisms = build_endomorphisms(&dg, &modules, &doc.endomorphisms, &mut findings);
        if !findings.is_empty() {
            return Err(LincatError::Invalid(findings));
        }
        Ok(Self { doc, dg, modules, connections, endomorphisms })
    }

    pub fn doc(&self) -> &WorkspaceDoc {
        &self.doc
    }

    /// Pretty JSON; parsing it back yields an equal workspace.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.doc).expect("workspace documents always serialize")
    }

    pub fn name(&self) -> &str {
        self.doc.name.as_deref().unwrap_or("workspace")
    }

    pub fn dg(&self) -> &DGCategory {
        &self.dg
    }

    pub fn category(&self) -> &Category {
        self.dg.base()
    }

    pub fn modules(&self) -> &[(String, ProjectiveModule)] {
        &self.modules
    }

    pub fn connections(&self) -> &[NamedConnection] {
        &self.connections
    }

    pub fn endomorphisms(&self) -> &[NamedEndomorphism] {
        &self.endomorphisms
    }

    pub fn module_index(&self, name: &str) -> Result<usize, LincatError> {
        self.modules.iter().position(|(n, _)| n == name).ok_or_else(|| LincatError::invalid(format!("no module named {name:?}")))
    }

    pub fn module(&self, name: &str) -> Result<&ProjectiveModule, LincatError> {
        Ok(&self.modules[self.module_index(name)?].1)
    }

    pub fn connection(&self, name: &str) -> Result<&NamedConnection, LincatError> {
        self.connections.iter().find(|c| c.name == name).ok_or_else(|| LincatError::invalid(format!("no connection named {name:?}")))
    }

    pub fn endomorphism(&self, name: &str) -> Result<&NamedEndomorphism, LincatError> {
        self.endomorphisms.iter().find(|e| e.name == name).ok_or_else(|| LincatError::invalid(format!("no endomorphism named {name:?}")))
    }
}

fn object_index(labels: &[String], label: &str, at: &str) -> Result<usize, String> {
    labels.iter().position(|l| l == label).ok_or_else(|| format!("{at}: unknown object {label:?}"))
}

fn combination_pairs(c: &Combination) -> Vec<(String, Scalar)> {
    c.iter().map(|(label, r)| (label.clone(), r.0.clone())).collect()
}

fn build_category(doc: &WorkspaceDoc) -> Result<Category, LincatError> {
    let spec = &doc.category;
    let mut builder = CategoryBuilder::new(spec.objects.iter().cloned());
    let mut findings = Vec::new();
    for (i, hom) in spec.homs.iter().enumerate() {
        let at = format!("category.homs[{i}]");
        match (object_index(&spec.objects, &hom.cod, &at), object_index(&spec.objects, &hom.dom, &at)) {
            (Ok(cod), Ok(dom)) => builder = builder.hom(cod, dom, hom.basis.iter().cloned()),
            (cod, dom) => findings.extend(cod.err().into_iter().chain(dom.err())),
        }
    }
    for (object, combination) in &spec.identities {
        match object_index(&spec.objects, object, "category.identities") {
            Ok(x) => builder = builder.identity(x, combination_pairs(combination)),
            Err(f) => findings.push(f),
        }
    }
    for (left, right, result) in &spec.composition {
        builder = builder.rule(left.clone(), right.clone(), combination_pairs(result));
    }
    if !findings.is_empty() {
        return Err(LincatError::Invalid(findings));
    }
    builder.build().map_err(|e| LincatError::invalid(format!("category: {e}")))
}

fn build_dg(base: Category, spec: &DgDoc) -> Result<DGCategory, LincatError> {
    match spec {
        DgDoc::Universal { truncation } => DGCategory::universal(base, *truncation).map_err(|e| LincatError::invalid(format!("dg: {e}"))),
        DgDoc::Trivial { truncation } => Ok(DGCategory::trivial(base, *truncation)),
        DgDoc::Explicit { truncation, forms, products, differential } => build_explicit(base, *truncation, forms, products, differential),
    }
}

fn build_explicit(
    base: Category,
    truncation: usize,
    forms: &[FormSpaceDoc],
    products: &[(String, String, Combination)],
    differential: &[(String, Combination)],
) -> Result<DGCategory, LincatError> {
    let k = base.object_count();
    let objects = base.object_labels().to_vec();
    let mut findings = Vec::new();
    let mut tables = vec![vec![Vec::new(); k * k]; truncation];
    let mut seen = BTreeMap::new();
    for (i, space) in forms.iter().enumerate() {
        let at = format!("dg.forms[{i}]");
        if space.degree == 0 || space.degree > truncation {
            findings.push(format!("{at}: degree {} is outside 1..={truncation}", space.degree));
            continue;
        }
        let (x, y) = match (object_index(&objects, &space.cod, &at), object_index(&objects, &space.dom, &at)) {
            (Ok(x), Ok(y)) => (x, y),
            (x, y) => {
                findings.extend(x.err().into_iter().chain(y.err()));
                continue;
            }
        };
        if seen.insert((space.degree, x, y), i).is_some() {
            findings.push(format!("{at}: basis of degree {} from {:?} to {:?} given twice", space.degree, space.dom, space.cod));
            continue;
        }
        tables[space.degree - 1][x * k + y] = space.basis.clone();
    }
    if !findings.is_empty() {
        return Err(LincatError::Invalid(findings));
    }
    let mut w = DGCategory::from_labels(base, truncation, tables).map_err(|e| LincatError::invalid(format!("dg.forms: {e}")))?;
    let locate = |w: &DGCategory, label: &str, at: &str| w.find_form(label).ok_or_else(|| format!("{at}: unknown form {label:?}"));
    for (i, (left, right, result)) in products.iter().enumerate() {
        let at = format!("dg.products[{i}]");
        let outcome = (|| {
            let (p, x, y, a) = locate(&w, left, &at)?;
            let (q, y2, z, b) = locate(&w, right, &at)?;
            if y != y2 {
                return Err(format!("{at}: {left:?} and {right:?} are not composable"));
            }
            if p + q == 0 {
                return Err(format!("{at}: products of arrows belong in category.composition"));
            }
            if p + q > truncation {
                return Err(format!("{at}: product has degree {} above the truncation", p + q));
            }
            let coords = coordinates(&w, p + q, x, z, result, &at)?;
            w.set_product(p, q, x, y, z, a, b, &coords).map_err(|e| format!("{at}: {e}"))
        })();
        findings.extend(outcome.err());
    }
    for (i, (form, result)) in differential.iter().enumerate() {
        let at = format!("dg.differential[{i}]");
        let outcome = (|| {
            let (n, x, y, a) = locate(&w, form, &at)?;
            if n >= truncation {
                return Err(format!("{at}: {form:?} is in the top degree, its differential is zero"));
            }
            let coords = coordinates(&w, n + 1, x, y, result, &at)?;
            w.set_differential(n, x, y, a, &coords).map_err(|e| format!("{at}: {e}"))
        })();
        findings.extend(outcome.err());
    }
    if findings.is_empty() {
        Ok(w)
    } else {
        Err(LincatError::Invalid(findings))
    }
}

/// Coordinates of a combination of basis labels of `_xΩⁿ_y`.
pub fn coordinates<G: Graded + ?Sized>(g: &G, n: usize, x: ObjectId, y: ObjectId, combo: &Combination, at: &str) -> Result<Vector, String> {
    let dim = g.dim(n, x, y);
    let labels: Vec<&str> = (0..dim).map(|a| g.basis_label(n, x, y, a)).collect();
    let mut out = vec![Scalar::zero(); dim];
    for (label, value) in combo {
        let index = labels.iter().position(|l| l == label).ok_or_else(|| {
            format!(
                "{at}: {label:?} is not a degree-{n} form from {:?} to {:?} (basis: [{}])",
                g.base().object_label(y),
                g.base().object_label(x),
                labels.join(", ")
            )
        })?;
        out[index] = value.0.clone();
    }
    Ok(out)
}

/// The inverse of [`coordinates`], omitting zero coefficients.
pub fn combination<G: Graded + ?Sized>(g: &G, n: usize, x: ObjectId, y: ObjectId, coords: &[Scalar]) -> Combination {
    coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, c)| (g.basis_label(n, x, y, a).to_string(), Rational(c.clone())))
        .collect()
}

pub fn matrix_from_doc<G: Graded + ?Sized>(
    g: &G,
    rows: &[ObjectId],
    cols: &[ObjectId],
    degree: usize,
    doc: &MatrixDoc,
    at: &str,
) -> Result<FormMatrix, String> {
    if doc.len() != rows.len() || doc.iter().any(|r| r.len() != cols.len()) {
        return Err(format!("{at}: expected a {}×{} matrix", rows.len(), cols.len()));
    }
    let mut entries = Vec::with_capacity(rows.len());
    for (i, row) in doc.iter().enumerate() {
        let mut out = Vec::with_capacity(cols.len());
        for (j, combo) in row.iter().enumerate() {
            out.push(coordinates(g, degree, rows[i], cols[j], combo, &format!("{at}[{i}][{j}]"))?);
        }
        entries.push(out);
    }
    FormMatrix::from_entries(g, rows, cols, degree, entries).map_err(|e| format!("{at}: {e}"))
}

pub fn matrix_to_doc<G: Graded + ?Sized>(g: &G, m: &FormMatrix) -> MatrixDoc {
    (0..m.rows().len())
        .map(|i| (0..m.cols().len()).map(|j| combination(g, m.degree(), m.rows()[i], m.cols()[j], m.entry(i, j))).collect())
        .collect()
}

fn family(c: &Category, labels: &[String], at: &str) -> Result<Vec<ObjectId>, String> {
    if labels.is_empty() {
        return Err(format!("{at}: empty index family"));
    }
    labels.iter().map(|l| c.find_object(l).ok_or_else(|| format!("{at}: unknown object {l:?}"))).collect()
}

fn check_unique<'a>(kind: &str, names: impl Iterator<Item = &'a str>, findings: &mut Vec<String>) {
    let mut seen = BTreeMap::new();
    for name in names {
        if seen.insert(name, ()).is_some() {
            findings.push(format!("{kind} name {name:?} is used twice"));
        }
    }
}

fn build_modules(w: &DGCategory, docs: &[ModuleDoc], findings: &mut Vec<String>) -> Vec<(String, ProjectiveModule)> {
    check_unique("module", docs.iter().map(ModuleDoc::name), findings);
    let c = w.base();
    let mut out: Vec<(String, ProjectiveModule)> = Vec::new();
    for doc in docs {
        let at = format!("module {:?}", doc.name());
        let built = match doc {
            ModuleDoc::Free { family: f, .. } => {
                family(c, f, &at).and_then(|f| ProjectiveModule::free(c, &f).map_err(|e| format!("{at}: {e}")))
            }
            ModuleDoc::Idempotent { family: f, matrix, .. } => family(c, f, &at).and_then(|f| {
                let e = matrix_from_doc(c, &f, &f, 0, matrix, &format!("{at}: matrix"))?;
                ProjectiveModule::from_idempotent(c, &f, e).map_err(|e| match e {
                    Error::NotIdempotent { row, col } => format!("{at}: e² ≠ e at entry ({row}, {col})"),
                    other => format!("{at}: {other}"),
                })
            }),
            ModuleDoc::DirectSum { summands, .. } => summands
                .iter()
                .map(|s| {
                    out.iter()
                        .find(|(n, _)| n == s)
                        .map(|(_, m)| m)
                        .ok_or_else(|| format!("{at}: summand {s:?} is not a module defined before it"))
                })
                .collect::<Result<Vec<_>, _>>()
                .and_then(|parts| direct_sum(c, parts[0], parts[1]).map(|s| s.module).map_err(|e| format!("{at}: {e}"))),
        };
        match built {
            Ok(m) => out.push((doc.name().to_string(), m)),
            Err(f) => findings.push(f),
        }
    }
    out
}

fn build_connections(
    w: &DGCategory,
    modules: &[(String, ProjectiveModule)],
    docs: &[ConnectionDoc],
    findings: &mut Vec<String>,
) -> Vec<NamedConnection> {
    check_unique("connection", docs.iter().map(ConnectionDoc::name), findings);
    let mut out: Vec<NamedConnection> = Vec::new();
    for doc in docs {
        let at = format!("connection {:?}", doc.name());
        let Some((_, module)) = modules.iter().find(|(n, _)| n == doc.module()) else {
            findings.push(format!("{at}: module {:?} is not defined", doc.module()));
            continue;
        };
        let built = match doc {
            ConnectionDoc::Matrix { lambda, .. } => {
                matrix_from_doc(w, module.family(), module.family(), 1, lambda, &format!("{at}: lambda")).and_then(|l| {
                    let free = free_connection(w, module.family(), l).map_err(|e| format!("{at}: {e}"))?;
                    if module.is_free(w) {
                        Ok(free)
                    } else {
                        compress_connection(w, &free, module).map_err(|e| format!("{at}: {e}"))
                    }
                })
            }
            ConnectionDoc::LeviCivita { .. } => levi_civita(w, module).map_err(|e| format!("{at}: {e}")),
            ConnectionDoc::DirectSum { summands, .. } => summands
                .iter()
                .map(|s| {
                    out.iter()
                        .find(|c| &c.name == s)
                        .map(|c| &c.connection)
                        .ok_or_else(|| format!("{at}: summand {s:?} is not a connection defined before it"))
                })
                .collect::<Result<Vec<_>, _>>()
                .and_then(|parts| direct_sum_connection(w, parts[0], parts[1]).map_err(|e| format!("{at}: {e}")))
                .and_then(|c| {
                    if c.module() == module {
                        Ok(c)
                    } else {
                        Err(format!("{at}: the summands' direct sum is not module {:?}", doc.module()))
                    }
                }),
        };
        match built {
            Ok(connection) => out.push(NamedConnection { name: doc.name().to_string(), module: doc.module().to_string(), connection }),
            Err(f) => findings.push(f),
        }
    }
    out
}

fn build_endomorphisms(
    w: &DGCategory,
    modules: &[(String, ProjectiveModule)],
    docs: &[EndomorphismDoc],
    findings: &mut Vec<String>,
) -> Vec<NamedEndomorphism> {
    check_unique("endomorphism", docs.iter().map(|d| d.name.as_str()), findings);
    let mut out = Vec::new();
    for doc in docs {
        let at = format!("endomorphism {:?}", doc.name);
        let Some((_, module)) = modules.iter().find(|(n, _)| *n == doc.module) else {
            findings.push(format!("{at}: module {:?} is not defined", doc.module));
            continue;
        };
        match matrix_from_doc(w.base(), module.family(), module.family(), 0, &doc.matrix, &format!("{at}: matrix")) {
            Ok(matrix) => out.push(NamedEndomorphism { name: doc.name.clone(), module: doc.module.clone(), matrix }),
            Err(f) => findings.push(f),
        }
    }
    out
}

/// A violation with basis labels in place of indices.
pub fn describe_violation<G: Graded + ?Sized>(g: &G, v: &Violation) -> String {
    let label = |n, x, y, a| g.basis_label(n, x, y, a).to_string();
    match v {
        Violation::Associativity { degrees: [p, q, r], objects: [w, x, y, z], basis: [a, b, c] } => format!(
            "associativity fails: (f·g)·h ≠ f·(g·h) for f = {}, g = {}, h = {}",
            label(*p, *w, *x, *a),
            label(*q, *x, *y, *b),
            label(*r, *y, *z, *c)
        ),
        Violation::LeftUnit { degree, cod, dom, basis } => {
            format!("left unit law fails on {}", label(*degree, *cod, *dom, *basis))
        }
        Violation::RightUnit { degree, cod, dom, basis } => {
            format!("right unit law fails on {}", label(*degree, *cod, *dom, *basis))
        }
        Violation::DifferentialSquare { degree, cod, dom, basis } => format!("d(d(f)) ≠ 0 for f = {}", label(*degree, *cod, *dom, *basis)),
        Violation::Leibniz { degrees: [p, q], objects: [x, y, z], basis: [a, b] } => {
            format!("Leibniz rule fails for f·g with f = {}, g = {}", label(*p, *x, *y, *a), label(*q, *y, *z, *b))
        }
        Violation::BaseMismatch(what) => format!("degree-0 data differs from the category: {what}"),
    }
}

/// The same workspace with its DG-category written out as explicit tables.
pub fn explicit_dg_doc(w: &DGCategory) -> DgDoc {
    let top = w.truncation();
    let objects = w.objects();
    let label = |x: ObjectId| w.base().object_label(x).to_string();
    let mut forms = Vec::new();
    for n in 1..=top {
        for &x in &objects {
            for &y in &objects {
                let dim = w.dim(n, x, y);
                if dim > 0 {
                    let basis = (0..dim).map(|a| w.basis_label(n, x, y, a).to_string()).collect();
                    forms.push(FormSpaceDoc { degree: n, cod: label(x), dom: label(y), basis });
                }
            }
        }
    }
    let mut products = Vec::new();
    for p in 0..=top {
        for q in 0..=top - p {
            if p + q == 0 {
                continue;
            }
            for &x in &objects {
                for &y in &objects {
                    for &z in &objects {
                        for a in 0..w.dim(p, x, y) {
                            for b in 0..w.dim(q, y, z) {
                                let coords = w.compose_basis(p, q, x, y, z, a, b);
                                if coords.is_empty() {
                                    continue;
                                }
                                let mut dense = vec![Scalar::zero(); w.dim(p + q, x, z)];
                                for (i, c) in coords {
                                    dense[*i] = c.clone();
                                }
                                products.push((
                                    w.basis_label(p, x, y, a).to_string(),
                                    w.basis_label(q, y, z, b).to_string(),
                                    combination(w, p + q, x, z, &dense),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    let mut differential = Vec::new();
    for n in 0..top {
        for &x in &objects {
            for &y in &objects {
                for a in 0..w.dim(n, x, y) {
                    let image = w.diff_coords(n, x, y, &lincat_core::linalg::unit_vector(w.dim(n, x, y), a));
                    if !image.iter().all(Zero::is_zero) {
                        differential.push((w.basis_label(n, x, y, a).to_string(), combination(w, n + 1, x, y, &image)));
                    }
                }
            }
        }
    }
    DgDoc::Explicit { truncation: top, forms, products, differential }
}
