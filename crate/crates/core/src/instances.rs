//! Small categories used as fixtures throughout the test suites and by the
//! bundled workspace files.

use crate::category::{Category, CategoryBuilder};
use crate::linalg::int;

/// `C = ℚ`: one object, hom space spanned by the identity.
pub fn point() -> Category {
    CategoryBuilder::new(["*"])
        .hom(0, 0, ["1"])
        .identity(0, [("1", int(1))])
        .rule("1", "1", [("1", int(1))])
        .build()
        .expect("point category is well formed")
}

/// The dual numbers `ℚ[u]/(u²)` as a one-object category.
pub fn dual_numbers() -> Category {
    CategoryBuilder::new(["*"])
        .hom(0, 0, ["1", "u"])
        .identity(0, [("1", int(1))])
        .rule("1", "1", [("1", int(1))])
        .rule("1", "u", [("u", int(1))])
        .rule("u", "1", [("u", int(1))])
        .build()
        .expect("dual numbers are well formed")
}

/// The path category of `1 → 2` with the single arrow `a ∈ ₂C₁`.
pub fn a2_path() -> Category {
    CategoryBuilder::new(["1", "2"])
        .hom(0, 0, ["1_1"])
        .hom(1, 1, ["1_2"])
        .hom(1, 0, ["a"])
        .identity(0, [("1_1", int(1))])
        .identity(1, [("1_2", int(1))])
        .rule("1_1", "1_1", [("1_1", int(1))])
        .rule("1_2", "1_2", [("1_2", int(1))])
        .rule("a", "1_1", [("a", int(1))])
        .rule("1_2", "a", [("a", int(1))])
        .build()
        .expect("A2 path category is well formed")
}

/// Two objects with arrows `a: 1 → 2`, `b: 2 → 1` and `ab = 0 = ba`. Unlike
/// the other fixtures it has nonzero commutators `[a, b] = ab − ba` in every
/// degree of its universal forms.
pub fn cycle2() -> Category {
    CategoryBuilder::new(["1", "2"])
        .hom(0, 0, ["1_1"])
        .hom(1, 1, ["1_2"])
        .hom(1, 0, ["a"])
        .hom(0, 1, ["b"])
        .identity(0, [("1_1", int(1))])
        .identity(1, [("1_2", int(1))])
        .rule("1_1", "1_1", [("1_1", int(1))])
        .rule("1_2", "1_2", [("1_2", int(1))])
        .rule("a", "1_1", [("a", int(1))])
        .rule("1_2", "a", [("a", int(1))])
        .rule("b", "1_2", [("b", int(1))])
        .rule("1_1", "b", [("b", int(1))])
        .build()
        .expect("two-cycle category is well formed")
}
