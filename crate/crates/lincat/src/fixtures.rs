//! Workspaces shipped with the binary, addressable as `builtin:NAME`.

use crate::error::LincatError;
use crate::workspace::{parse_workspace, Workspace};

pub const BUILTIN_PREFIX: &str = "builtin:";

pub const FIXTURES: &[(&str, &str)] = &[
    ("point_universal", include_str!("../fixtures/point_universal.json")),
    ("point_trivial", include_str!("../fixtures/point_trivial.json")),
    ("dual_numbers_universal", include_str!("../fixtures/dual_numbers_universal.json")),
    ("dual_numbers_trivial", include_str!("../fixtures/dual_numbers_trivial.json")),
    ("a2_universal", include_str!("../fixtures/a2_universal.json")),
    ("a2_trivial", include_str!("../fixtures/a2_trivial.json")),
    ("cycle2_universal", include_str!("../fixtures/cycle2_universal.json")),
];

pub fn fixture_text(name: &str) -> Option<&'static str> {
    FIXTURES.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

pub fn fixture(name: &str) -> Result<Workspace, LincatError> {
    let text = fixture_text(name).ok_or_else(|| {
        let known: Vec<&str> = FIXTURES.iter().map(|(n, _)| *n).collect();
        LincatError::Usage(format!("no bundled fixture {name:?}; available: {}", known.join(", ")))
    })?;
    parse_workspace(text)
}

/// Reads a workspace from a path, or from the bundled set for `builtin:NAME`.
pub fn load(source: &str) -> Result<Workspace, LincatError> {
    match source.strip_prefix(BUILTIN_PREFIX) {
        Some(name) => fixture(name),
        None => {
            let text = std::fs::read_to_string(source).map_err(|e| LincatError::Usage(format!("cannot read {source}: {e}")))?;
            parse_workspace(&text)
        }
    }
}
