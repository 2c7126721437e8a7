//! Command dispatch.

use lincat_core::chern::{certify_cocycle, chern_class, invariance_certificate, k0_chern, K0Element};
use lincat_core::connection::curvature;
use lincat_core::derham::build_derham;
use lincat_core::graded::diagonal_layout;
use lincat_core::graded::CommutatorGenerator;
use lincat_core::linalg::format_scalar;
use lincat_core::module::{hs_trace, trace_form};
use lincat_core::{DeRhamComplex, DiagonalForm, Error, Graded, QuotientSpace, Scalar};
use num_traits::{One, Zero};

use crate::doc::Rational;
use crate::error::LincatError;
use crate::fixtures::load;
use crate::report::{
    ChernResult, CohomologyResult, CohomologyRow, ConnectionSummary, InvarianceResult, K0Result, K0Term, ModuleSummary, Outcome, Report,
    Status, TraceResult, ValidateResult,
};
use crate::workspace::Workspace;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cohomology { max_degree: Option<usize> },
    Trace { module: String, endomorphism: String },
    Chern { module: String, connection: Option<String>, q: usize },
    Invariance { module: String, connections: [String; 2], q: usize },
    K0 { element: String, q: usize },
}

impl Command {
    /// The command as it would be typed after `lincat`.
    pub fn echo(&self, source: &str) -> String {
        match self {
            Command::Validate => format!("validate {source}"),
            Command::Cohomology { max_degree: None } => format!("cohomology {source}"),
            Command::Cohomology { max_degree: Some(n) } => format!("cohomology {source} --max-degree {n}"),
            Command::Trace { module, endomorphism } => format!("trace {source} --module {module} --endo {endomorphism}"),
            Command::Chern { module, connection, q } => match connection {
                Some(c) => format!("chern {source} --module {module} --connection {c} --q {q}"),
                None => format!("chern {source} --module {module} --q {q}"),
            },
            Command::Invariance { module, connections: [a, b], q } => {
                format!("invariance {source} --module {module} --connection {a} --connection {b} --q {q}")
            }
            Command::K0 { element, q } => format!("k0 {source} --element {element:?} --q {q}"),
        }
    }
}

/// Loads the workspace and runs the command; failures become reports.
pub fn execute(source: &str, command: &Command) -> Report {
    let echo = command.echo(source);
    let (workspace, outcome) = match load(source) {
        Ok(ws) => (Some(ws.name().to_string()), run(command, &ws)),
        Err(e) => (None, Err(e)),
    };
    match outcome {
        Ok(result) => Report { command: echo, workspace, status: Status::Ok, exit_code: 0, result: Some(result), findings: Vec::new() },
        Err(e) => {
            let code = e.exit_code();
            Report { command: echo, workspace, status: Status::from_exit_code(code), exit_code: code, result: None, findings: e.findings() }
        }
    }
}

pub fn run(command: &Command, ws: &Workspace) -> Result<Outcome, LincatError> {
    match command {
        Command::Validate => validate(ws).map(Outcome::Validate),
        Command::Cohomology { max_degree } => cohomology(ws, *max_degree).map(Outcome::Cohomology),
        Command::Trace { module, endomorphism } => trace(ws, module, endomorphism).map(Outcome::Trace),
        Command::Chern { module, connection, q } => chern(ws, module, connection.as_deref(), *q).map(Outcome::Chern),
        Command::Invariance { module, connections, q } => invariance(ws, module, connections, *q).map(Outcome::Invariance),
        Command::K0 { element, q } => k0(ws, element, *q).map(Outcome::K0),
    }
}

/// `Σ cᵢ labelᵢ` with unit coefficients left implicit.
pub fn combination_text(terms: impl IntoIterator<Item = (String, Scalar)>) -> String {
    let mut out = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c < Scalar::zero();
        let magnitude = if negative { -c } else { c };
        out.push_str(match (out.is_empty(), negative) {
            (true, false) => "",
            (true, true) => "-",
            (false, false) => " + ",
            (false, true) => " - ",
        });
        if !magnitude.is_one() {
            out.push_str(&format_scalar(&magnitude));
            out.push('*');
        }
        out.push_str(&label);
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

/// Labels of the basis of `⊕ₓ ₓΩⁿₓ` in layout order.
fn diagonal_labels<G: Graded + ?Sized>(g: &G, n: usize) -> Vec<String> {
    g.objects().into_iter().flat_map(|x| (0..g.dim(n, x, x)).map(move |a| g.basis_label(n, x, x, a).to_string())).collect()
}

pub fn diagonal_text<G: Graded + ?Sized>(g: &G, form: &DiagonalForm) -> String {
    let labels = diagonal_labels(g, form.degree);
    debug_assert_eq!(labels.len(), diagonal_layout(g, form.degree).1);
    combination_text(labels.into_iter().zip(form.coords.iter().cloned()))
}

/// Basis of a quotient of `⊕ₓ ₓΩⁿₓ`: the complement basis forms.
fn quotient_basis<G: Graded + ?Sized>(g: &G, n: usize, q: &QuotientSpace) -> Vec<String> {
    let labels = diagonal_labels(g, n);
    q.complement().iter().map(|&i| labels[i].clone()).collect()
}

fn class_text<G: Graded + ?Sized>(g: &G, complex: &DeRhamComplex, n: usize, coords: &[Scalar]) -> Result<String, LincatError> {
    Ok(diagonal_text(g, &complex.representative(n, coords)?))
}

fn rationals(v: &[Scalar]) -> Vec<Rational> {
    v.iter().cloned().map(Rational).collect()
}

fn validate(ws: &Workspace) -> Result<ValidateResult, LincatError> {
    let w = ws.dg();
    let c = ws.category();
    let form_dims = (0..=w.truncation())
        .map(|n| w.objects().iter().flat_map(|&x| w.objects().into_iter().map(move |y| (x, y))).map(|(x, y)| w.dim(n, x, y)).sum())
        .collect();
    let ab = c.abelianization();
    let ab_basis = quotient_basis(c, 0, &ab);
    let modules = ws
        .modules()
        .iter()
        .map(|(name, m)| {
            let rank = hs_trace(c, m, m.idempotent())?;
            Ok(ModuleSummary {
                name: name.clone(),
                family: m.family().iter().map(|&x| c.object_label(x).to_string()).collect(),
                free: m.is_free(w),
                rank: combination_text(ab_basis.iter().cloned().zip(rank)),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let connections = ws
        .connections()
        .iter()
        .map(|c| {
            let curvature_zero = match curvature(w, &c.connection) {
                Ok(data) => Some(data.gamma.is_zero()),
                Err(Error::TruncationExceeded { .. }) => None,
                Err(e) => return Err(e),
            };
            Ok(ConnectionSummary { name: c.name.clone(), module: c.module.clone(), curvature_zero })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(ValidateResult {
        objects: c.object_labels().to_vec(),
        truncation: w.truncation(),
        form_dims,
        checks: vec![
            "category axioms".into(),
            "DG axioms (associativity, units, d² = 0, Leibniz)".into(),
            "idempotents e² = e".into(),
            "references resolve".into(),
        ],
        modules,
        connections,
        endomorphisms: ws.endomorphisms().iter().map(|e| format!("{} on {}", e.name, e.module)).collect(),
    })
}

fn cohomology(ws: &Workspace, max_degree: Option<usize>) -> Result<CohomologyResult, LincatError> {
    let w = ws.dg();
    let top = max_degree.unwrap_or(w.truncation());
    if top > w.truncation() {
        return Err(Error::TruncationExceeded { required: top, truncation: w.truncation() }.into());
    }
    let complex = build_derham(w)?;
    let mut rows = Vec::new();
    for n in 0..=top {
        let h = complex.cohomology(n)?;
        let basis = h.representatives.iter().map(|r| class_text(w, &complex, n, r)).collect::<Result<_, _>>()?;
        rows.push(CohomologyRow {
            degree: n,
            omega_ab_dim: complex.dim(n),
            cocycle_dim: h.cocycle_dim,
            coboundary_dim: h.coboundary_dim,
            h_dim: h.dim,
            basis,
            truncation_unreliable: h.truncation_unreliable,
        });
    }
    Ok(CohomologyResult { truncation: w.truncation(), rows })
}

fn trace(ws: &Workspace, module: &str, endomorphism: &str) -> Result<TraceResult, LincatError> {
    let c = ws.category();
    let m = ws.module(module)?;
    let endo = ws.endomorphism(endomorphism)?;
    if endo.module != module {
        return Err(LincatError::invalid(format!("endomorphism {endomorphism:?} acts on {:?}, not {module:?}", endo.module)));
    }
    let diagonal = trace_form(c, m, &endo.matrix)?;
    let class = hs_trace(c, m, &endo.matrix)?;
    let ab = c.abelianization();
    let basis = quotient_basis(c, 0, &ab);
    let class_text = combination_text(basis.iter().cloned().zip(class.iter().cloned()));
    Ok(TraceResult {
        module: module.into(),
        endomorphism: endomorphism.into(),
        diagonal: diagonal_text(c, &diagonal),
        basis,
        class: rationals(&class),
        class_text,
    })
}

fn commutator_text<G: Graded + ?Sized>(g: &G, n: usize, generator: &CommutatorGenerator, coefficient: &Scalar) -> String {
    let p = generator.left_degree;
    let left = g.basis_label(p, generator.x, generator.y, generator.left_basis);
    let right = g.basis_label(n - p, generator.y, generator.x, generator.right_basis);
    combination_text([(format!("[{left}, {right}]"), coefficient.clone())])
}

fn chern(ws: &Workspace, module: &str, connection: Option<&str>, q: usize) -> Result<ChernResult, LincatError> {
    let w = ws.dg();
    let m = ws.module(module)?;
    let conn = match connection {
        Some(name) => {
            let named = ws.connection(name)?;
            if named.module != module {
                return Err(LincatError::invalid(format!("connection {name:?} lives on {:?}, not {module:?}", named.module)));
            }
            named.connection.clone()
        }
        None => lincat_core::connection::levi_civita(w, m)?,
    };
    let complex = build_derham(w)?;
    let certificate = certify_cocycle(w, &conn, q)?;
    let class = chern_class(w, &complex, &conn, q)?;
    let degree = 2 * q;
    let h = complex.cohomology(degree)?;
    Ok(ChernResult {
        module: module.into(),
        connection: connection.unwrap_or("Levi-Civita").into(),
        q,
        degree,
        representative: diagonal_text(w, &class.representative),
        certificate: certificate.terms.iter().map(|(g, c)| commutator_text(w, degree + 1, g, c)).collect(),
        omega_ab_basis: quotient_basis(w, degree, complex.quotient(degree)),
        omega_ab_class: rationals(&class.class),
        cohomology_basis: h.representatives.iter().map(|r| class_text(w, &complex, degree, r)).collect::<Result<_, _>>()?,
        cohomology_class: rationals(&class.cohomology),
        zero_class: class.is_zero(),
        truncation_unreliable: h.truncation_unreliable,
    })
}

fn invariance(ws: &Workspace, module: &str, connections: &[String; 2], q: usize) -> Result<InvarianceResult, LincatError> {
    let w = ws.dg();
    let named = [ws.connection(&connections[0])?, ws.connection(&connections[1])?];
    for c in named {
        if c.module != module {
            return Err(LincatError::invalid(format!("connection {:?} lives on {:?}, not {module:?}", c.name, c.module)));
        }
    }
    let complex = build_derham(w)?;
    let cert = invariance_certificate(w, &complex, &named[0].connection, &named[1].connection, q)?;
    let cochains = [
        diagonal_text(w, &certify_cocycle(w, &named[0].connection, q)?.cochain),
        diagonal_text(w, &certify_cocycle(w, &named[1].connection, q)?.cochain),
    ];
    let eta_text = |eta: &[Scalar]| -> Result<String, LincatError> {
        if q == 0 {
            Ok("0".into())
        } else {
            class_text(w, &complex, 2 * q - 1, eta)
        }
    };
    Ok(InvarianceResult {
        module: module.into(),
        connections: connections.clone(),
        q,
        cochains,
        difference: diagonal_text(w, &cert.difference),
        eta: eta_text(&cert.eta)?,
        mechanism_eta: cert.mechanism_eta.as_deref().map(eta_text).transpose()?,
    })
}

/// Parses `"P + Q - S"`, `"2*F - E"` or `"-3 M"` into module names with
/// integer coefficients, merging repeated names.
pub fn parse_k0_expression(text: &str) -> Result<Vec<(String, i64)>, LincatError> {
    let err = |msg: String| LincatError::Usage(format!("K₀ expression {text:?}: {msg}"));
    let mut terms: Vec<(String, i64)> = Vec::new();
    let mut rest = text.trim();
    if rest.is_empty() {
        return Err(err("empty".into()));
    }
    let mut first = true;
    while !rest.is_empty() {
        let mut sign = 1;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('-') {
            sign = -1;
            rest = r.trim_start();
        } else if !first {
            return Err(err(format!("expected '+' or '-' before {rest:?}")));
        }
        first = false;
        let digits = rest.chars().take_while(char::is_ascii_digit).count();
        let mut coefficient = 1i64;
        if digits > 0 {
            coefficient = rest[..digits].parse().map_err(|_| err("coefficient out of range".into()))?;
            rest = rest[digits..].trim_start();
            if let Some(r) = rest.strip_prefix('*') {
                rest = r.trim_start();
            }
        }
        let len = rest.find(|ch: char| ch.is_whitespace() || "+-*".contains(ch)).unwrap_or(rest.len());
        if len == 0 {
            return Err(err("missing module name".into()));
        }
        let name = &rest[..len];
        rest = rest[len..].trim_start();
        match terms.iter_mut().find(|(n, _)| n == name) {
            Some((_, c)) => *c += sign * coefficient,
            None => terms.push((name.to_string(), sign * coefficient)),
        }
    }
    Ok(terms)
}

fn k0(ws: &Workspace, element: &str, q: usize) -> Result<K0Result, LincatError> {
    let w = ws.dg();
    let terms = parse_k0_expression(element)?;
    let mut z = K0Element::zero();
    for (name, c) in &terms {
        z = z.plus(ws.module_index(name)?, *c);
    }
    let modules: Vec<_> = ws.modules().iter().map(|(_, m)| m.clone()).collect();
    let complex = build_derham(w)?;
    let class = k0_chern(w, &complex, &modules, &z, q)?;
    let h = complex.cohomology(2 * q)?;
    let normalized = combination_text(terms.iter().map(|(n, c)| (format!("[{n}]"), Scalar::from_integer((*c).into()))));
    Ok(K0Result {
        element: normalized,
        q,
        terms: terms.into_iter().map(|(module, coefficient)| K0Term { module, coefficient }).collect(),
        representative: diagonal_text(w, &class.representative),
        cohomology_basis: h.representatives.iter().map(|r| class_text(w, &complex, 2 * q, r)).collect::<Result<_, _>>()?,
        cohomology_class: rationals(&class.cohomology),
        zero_class: class.is_zero(),
    })
}
