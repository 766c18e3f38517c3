#![allow(dead_code)]

use std::sync::OnceLock;

use singcert::cases::{build_case, BuildOptions, BuiltCase, CaseId};

static C23: OnceLock<BuiltCase> = OnceLock::new();
static C31: OnceLock<BuiltCase> = OnceLock::new();

/// Each case is built once per test binary.
pub fn case(id: CaseId) -> &'static BuiltCase {
    let cell = match id {
        CaseId::C23 => &C23,
        CaseId::C31 => &C31,
    };
    cell.get_or_init(|| build_case(id.spec(), &BuildOptions::default()).expect("case builds"))
}
