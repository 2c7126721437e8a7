//! Structured command results with a text view and a JSON view.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::doc::Rational;
use crate::error::{EXIT_CERTIFICATION, EXIT_OK, EXIT_TRUNCATION, EXIT_VALIDATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    ValidationFailure,
    TruncationTooSmall,
    CertificationFailure,
}

impl Status {
    pub fn from_exit_code(code: i32) -> Self {
        match code {
            EXIT_OK => Status::Ok,
            EXIT_TRUNCATION => Status::TruncationTooSmall,
            EXIT_CERTIFICATION => Status::CertificationFailure,
            _ => Status::ValidationFailure,
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => EXIT_OK,
            Status::ValidationFailure => EXIT_VALIDATION,
            Status::TruncationTooSmall => EXIT_TRUNCATION,
            Status::CertificationFailure => EXIT_CERTIFICATION,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    /// The command line that produced this report, minus global flags.
    pub command: String,
    pub workspace: Option<String>,
    pub status: Status,
    pub exit_code: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<Outcome>,
    #[serde(default)]
    pub findings: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Outcome {
    Validate(ValidateResult),
    Cohomology(CohomologyResult),
    Trace(TraceResult),
    Chern(ChernResult),
    Invariance(InvarianceResult),
    K0(K0Result),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateResult {
    pub objects: Vec<String>,
    pub truncation: usize,
    /// `dim ⊕_{x,y} _xΩⁿ_y` for `n = 0..=N`.
    pub form_dims: Vec<usize>,
    pub checks: Vec<String>,
    pub modules: Vec<ModuleSummary>,
    pub connections: Vec<ConnectionSummary>,
    pub endomorphisms: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSummary {
    pub name: String,
    pub family: Vec<String>,
    pub free: bool,
    /// `Tr(e)` in `C_ab`.
    pub rank: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConnectionSummary {
    pub name: String,
    pub module: String,
    pub curvature_zero: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyRow {
    pub degree: usize,
    pub omega_ab_dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub h_dim: usize,
    /// Representatives of the chosen basis of `Hⁿ`.
    pub basis: Vec<String>,
    /// The differential out of the top degree was truncated away.
    pub truncation_unreliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyResult {
    pub truncation: usize,
    pub rows: Vec<CohomologyRow>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceResult {
    pub module: String,
    pub endomorphism: String,
    /// `Σᵢ (eUe)ᵢᵢ` before passing to `C_ab`.
    pub diagonal: String,
    pub basis: Vec<String>,
    pub class: Vec<Rational>,
    pub class_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChernResult {
    pub module: String,
    pub connection: String,
    pub q: usize,
    pub degree: usize,
    pub representative: String,
    /// Commutators summing to `d(ω^q)`.
    pub certificate: Vec<String>,
    /// Basis of `Ω^{2q}_ab` and the class in it.
    pub omega_ab_basis: Vec<String>,
    pub omega_ab_class: Vec<Rational>,
    /// Chosen basis of `H^{2q}` and the class in it.
    pub cohomology_basis: Vec<String>,
    pub cohomology_class: Vec<Rational>,
    pub zero_class: bool,
    pub truncation_unreliable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceResult {
    pub module: String,
    pub connections: [String; 2],
    pub q: usize,
    pub cochains: [String; 2],
    pub difference: String,
    /// `η` with `d η = ⟨ω^q(∇₁) − ω^q(∇₂)⟩`.
    pub eta: String,
    /// `k(ϖ₁) − k(ϖ₂)` from the deformation argument on free modules.
    pub mechanism_eta: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Term {
    pub module: String,
    pub coefficient: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct K0Result {
    pub element: String,
    pub q: usize,
    pub terms: Vec<K0Term>,
    pub representative: String,
    pub cohomology_basis: Vec<String>,
    pub cohomology_class: Vec<Rational>,
    pub zero_class: bool,
}

fn vector_text(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn list_text(items: &[String]) -> String {
    if items.is_empty() {
        "(none)".into()
    } else {
        items.join(", ")
    }
}

impl Report {
    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize") + "\n"
    }

    pub fn from_machine(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "$ lincat {}", self.command);
        if let Some(result) = &self.result {
            render(&mut out, result);
        }
        if !self.findings.is_empty() {
            let _ = writeln!(out, "findings:");
            for f in &self.findings {
                let _ = writeln!(out, "  - {f}");
            }
        }
        let status = match self.status {
            Status::Ok => "ok",
            Status::ValidationFailure => "validation failure",
            Status::TruncationTooSmall => "truncation too small",
            Status::CertificationFailure => "certification failure",
        };
        let _ = writeln!(out, "status: {status} (exit {})", self.exit_code);
        out
    }
}

fn render(out: &mut String, result: &Outcome) {
    match result {
        Outcome::Validate(r) => {
            let _ = writeln!(out, "objects: {}", r.objects.join(", "));
            let _ = writeln!(out, "truncation: {}", r.truncation);
            let dims: Vec<String> = r.form_dims.iter().enumerate().map(|(n, d)| format!("Ω^{n}: {d}")).collect();
            let _ = writeln!(out, "form dimensions: {}", dims.join(", "));
            for check in &r.checks {
                let _ = writeln!(out, "passed: {check}");
            }
            for m in &r.modules {
                let kind = if m.free { "free" } else { "idempotent" };
                let _ = writeln!(out, "module {} over ({}), {kind}, rank {}", m.name, m.family.join(", "), m.rank);
            }
            for c in &r.connections {
                let flat = match c.curvature_zero {
                    Some(true) => ", flat",
                    Some(false) => ", curved",
                    None => "",
                };
                let _ = writeln!(out, "connection {} on {}{flat}", c.name, c.module);
            }
            if !r.endomorphisms.is_empty() {
                let _ = writeln!(out, "endomorphisms: {}", r.endomorphisms.join(", "));
            }
        }
        Outcome::Cohomology(r) => {
            let _ = writeln!(out, "truncation N = {}", r.truncation);
            let _ = writeln!(out, "{:>3}  {:>10}  {:>8}  {:>10}  {:>7}", "n", "dim Ω^n_ab", "cocycles", "coboundary", "dim H^n");
            for row in &r.rows {
                let mark = if row.truncation_unreliable { "  (top degree: d truncated)" } else { "" };
                let _ = writeln!(
                    out,
                    "{:>3}  {:>10}  {:>8}  {:>10}  {:>7}{mark}",
                    row.degree, row.omega_ab_dim, row.cocycle_dim, row.coboundary_dim, row.h_dim
                );
            }
            for row in r.rows.iter().filter(|row| row.h_dim > 0) {
                let _ = writeln!(out, "H^{} basis: {}", row.degree, row.basis.join(" ; "));
            }
        }
        Outcome::Trace(r) => {
            let _ = writeln!(out, "module {}, endomorphism {}", r.module, r.endomorphism);
            let _ = writeln!(out, "Σ (eUe)_ii = {}", r.diagonal);
            let _ = writeln!(out, "C_ab basis: {}", list_text(&r.basis));
            let _ = writeln!(out, "trace class: {} = {}", vector_text(&r.class), r.class_text);
        }
        Outcome::Chern(r) => {
            let _ = writeln!(out, "module {}, connection {}, q = {}", r.module, r.connection, r.q);
            let _ = writeln!(out, "representative ω^{}: {}", r.q, r.representative);
            let _ = writeln!(
                out,
                "d(ω^{}) as commutators: {}",
                r.q,
                if r.certificate.is_empty() { "0".into() } else { r.certificate.join(" + ") }
            );
            let _ = writeln!(out, "Ω^{}_ab basis: {}", r.degree, list_text(&r.omega_ab_basis));
            let _ = writeln!(out, "class in Ω^{}_ab: {}", r.degree, vector_text(&r.omega_ab_class));
            let _ = writeln!(out, "H^{} basis: {}", r.degree, list_text(&r.cohomology_basis));
            let _ = writeln!(out, "class in H^{}: {}", r.degree, vector_text(&r.cohomology_class));
            let _ = writeln!(out, "zero class: {}", if r.zero_class { "yes" } else { "no" });
            if r.truncation_unreliable {
                let _ = writeln!(out, "note: degree {} is the truncation, cohomology there is not reliable", r.degree);
            }
        }
        Outcome::Invariance(r) => {
            let _ = writeln!(out, "module {}, q = {}", r.module, r.q);
            for (name, cochain) in r.connections.iter().zip(&r.cochains) {
                let _ = writeln!(out, "ω^{}({name}) = {cochain}", r.q);
            }
            let _ = writeln!(out, "difference: {}", r.difference);
            let _ = writeln!(out, "η with dη = difference: {}", r.eta);
            if let Some(eta) = &r.mechanism_eta {
                let _ = writeln!(out, "η from the deformation t ↦ tΛ: {eta}");
            }
        }
        Outcome::K0(r) => {
            let _ = writeln!(out, "element: {}", r.element);
            let _ = writeln!(out, "q = {}, Levi-Civita connections", r.q);
            let _ = writeln!(out, "representative: {}", r.representative);
            let _ = writeln!(out, "H^{} basis: {}", 2 * r.q, list_text(&r.cohomology_basis));
            let _ = writeln!(out, "class in H^{}: {}", 2 * r.q, vector_text(&r.cohomology_class));
            let _ = writeln!(out, "zero class: {}", if r.zero_class { "yes" } else { "no" });
        }
    }
}
