//! The on-disk workspace document. Every type here is plain data that
//! serializes to the JSON layout described in the README; resolution into
//! engine structures happens in [`crate::workspace`].

use std::collections::BTreeMap;
use std::fmt;

use lincat_core::linalg::{format_scalar, parse_scalar};
use lincat_core::Scalar;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational written as `"p"` or `"p/q"`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rational(pub Scalar);

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_scalar(&text)
            .map(Rational)
            .map_err(|_| serde::de::Error::custom(format!("invalid rational {text:?}, expected \"p\" or \"p/q\"")))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_scalar(&self.0))
    }
}

/// A linear combination of basis labels.
pub type Combination = BTreeMap<String, Rational>;

/// Rows of entries, each a combination of forms in the hom space fixed by
/// its position.
pub type MatrixDoc = Vec<Vec<Combination>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceDoc {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub category: CategoryDoc,
    pub dg: DgDoc,
    #[serde(default)]
    pub modules: Vec<ModuleDoc>,
    #[serde(default)]
    pub connections: Vec<ConnectionDoc>,
    #[serde(default)]
    pub endomorphisms: Vec<EndomorphismDoc>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryDoc {
    pub objects: Vec<String>,
    pub homs: Vec<HomDoc>,
    pub identities: BTreeMap<String, Combination>,
    /// `(left, right, left∘right)`; products not listed are zero.
    #[serde(default)]
    pub composition: Vec<(String, String, Combination)>,
}

/// Basis of `_{cod}C_{dom}`, the arrows `dom → cod`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomDoc {
    pub cod: String,
    pub dom: String,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum DgDoc {
    Universal {
        truncation: usize,
    },
    Trivial {
        truncation: usize,
    },
    /// Bases in positive degrees with products and differentials. Products
    /// with an identity arrow are implied; everything else not listed is zero.
    Explicit {
        truncation: usize,
        forms: Vec<FormSpaceDoc>,
        #[serde(default)]
        products: Vec<(String, String, Combination)>,
        #[serde(default)]
        differential: Vec<(String, Combination)>,
    },
}

impl DgDoc {
    pub fn truncation(&self) -> usize {
        match self {
            DgDoc::Universal { truncation } | DgDoc::Trivial { truncation } | DgDoc::Explicit { truncation, .. } => *truncation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormSpaceDoc {
    pub degree: usize,
    pub cod: String,
    pub dom: String,
    pub basis: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ModuleDoc {
    Free { name: String, family: Vec<String> },
    Idempotent { name: String, family: Vec<String>, matrix: MatrixDoc },
    DirectSum { name: String, summands: [String; 2] },
}

impl ModuleDoc {
    pub fn name(&self) -> &str {
        match self {
            ModuleDoc::Free { name, .. } | ModuleDoc::Idempotent { name, .. } | ModuleDoc::DirectSum { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConnectionDoc {
    /// `Λ` over the free cover; compressed when the module is not free.
    Matrix {
        name: String,
        module: String,
        lambda: MatrixDoc,
    },
    LeviCivita {
        name: String,
        module: String,
    },
    DirectSum {
        name: String,
        module: String,
        summands: [String; 2],
    },
}

impl ConnectionDoc {
    pub fn name(&self) -> &str {
        match self {
            ConnectionDoc::Matrix { name, .. } | ConnectionDoc::LeviCivita { name, .. } | ConnectionDoc::DirectSum { name, .. } => name,
        }
    }

    pub fn module(&self) -> &str {
        match self {
            ConnectionDoc::Matrix { module, .. } | ConnectionDoc::LeviCivita { module, .. } | ConnectionDoc::DirectSum { module, .. } => {
                module
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndomorphismDoc {
    pub name: String,
    pub module: String,
    pub matrix: MatrixDoc,
}
