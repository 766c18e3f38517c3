//! The two discriminant pairs and the assembly of their case data.

use std::path::PathBuf;

use rug::Float;

use crate::bounds::CaseData;
use crate::error::{Error, Result, Stage};
use crate::localfield::{
    find_valuation_pattern, splitting_field_generator, valuation_pattern_at, SplittingField, ValuationPattern,
    DEFAULT_PRIME_LIMIT,
};
use crate::numfield::{pair_orbit, ConjugateTriple, OrbitPairing};
use crate::quadforms::{
    hilbert_class_poly, hilbert_class_poly_cached, ClassPolynomial, Discriminant, DEFAULT_PRECISION, PRECISION_CAP,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum CaseId {
    /// `{-92, -23}`
    #[serde(rename = "23")]
    C23,
    /// `{-124, -31}`
    #[serde(rename = "31")]
    C31,
}

/// Static description of a case.
#[derive(Clone, Copy, Debug)]
pub struct CaseSpec {
    pub id: CaseId,
    /// Discriminant of the `x` triple (the non-maximal order).
    pub disc_x: i64,
    /// Discriminant of the `y` triple.
    pub disc_y: i64,
    /// Prime whose place carries the local argument by default.
    pub reference_prime: u64,
    /// Reference value of `c1` for the comparison track, as a decimal.
    pub reference_c1: &'static str,
    /// Reference `n` ceilings of the small-exponent table, `m = 1..=12`.
    pub reference_table: [u64; 12],
}

pub const CASE_23: CaseSpec = CaseSpec {
    id: CaseId::C23,
    disc_x: -92,
    disc_y: -23,
    reference_prime: 23,
    reference_c1: "4973.14",
    reference_table: [2, 5, 8, 10, 13, 16, 18, 21, 24, 26, 29, 32],
};

pub const CASE_31: CaseSpec = CaseSpec {
    id: CaseId::C31,
    disc_x: -124,
    disc_y: -31,
    reference_prime: 11,
    reference_c1: "4820.16",
    reference_table: [3, 6, 10, 13, 16, 19, 22, 26, 29, 32, 36, 39],
};

impl CaseId {
    pub fn spec(self) -> &'static CaseSpec {
        match self {
            CaseId::C23 => &CASE_23,
            CaseId::C31 => &CASE_31,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CaseId::C23 => "23",
            CaseId::C31 => "31",
        }
    }

    pub fn all() -> [CaseId; 2] {
        [CaseId::C23, CaseId::C31]
    }
}

impl std::str::FromStr for CaseId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "23" => Ok(CaseId::C23),
            "31" => Ok(CaseId::C31),
            _ => Err(Error::precondition(Stage::Cli, format!("unknown case {s:?}; expected 23 or 31"))),
        }
    }
}

impl CaseSpec {
    pub fn reference_c1(&self) -> Float {
        Float::with_val(64, Float::parse(self.reference_c1).expect("valid decimal"))
    }
}

/// Knobs for assembling a case.
#[derive(Clone, Debug)]
pub struct BuildOptions {
    /// Prime for the local argument; the case's reference prime when `None`.
    pub prime: Option<u64>,
    pub prime_limit: u64,
    pub precision: u32,
    pub precision_cap: u32,
    pub cache_dir: Option<PathBuf>,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            prime: None,
            prime_limit: DEFAULT_PRIME_LIMIT,
            precision: DEFAULT_PRECISION,
            precision_cap: PRECISION_CAP,
            cache_dir: None,
        }
    }
}

/// Everything the bounds and the final check need for one case.
#[derive(Clone, Debug)]
pub struct BuiltCase {
    pub spec: CaseSpec,
    pub x_class: ClassPolynomial,
    pub y_class: ClassPolynomial,
    pub splitting: SplittingField,
    /// First match of the increasing prime scan.
    pub first_scan: ValuationPattern,
    pub data: CaseData,
}

pub fn class_poly(disc: i64, opts: &BuildOptions) -> Result<ClassPolynomial> {
    hilbert_class_poly_cached(Discriminant::new(disc)?, opts.precision, opts.precision_cap, opts.cache_dir.as_deref())
}

pub fn triple(disc: i64) -> Result<ConjugateTriple> {
    ConjugateTriple::new(&hilbert_class_poly(Discriminant::new(disc)?)?)
}

pub fn pairing(spec: &CaseSpec) -> Result<OrbitPairing> {
    pair_orbit(&triple(spec.disc_x)?, &triple(spec.disc_y)?)
}

pub fn build_case(spec: &CaseSpec, opts: &BuildOptions) -> Result<BuiltCase> {
    if opts.precision > opts.precision_cap {
        return Err(Error::precondition(Stage::Cli, "base precision exceeds the cap"));
    }
    let x_class = class_poly(spec.disc_x, opts)?;
    let y_class = class_poly(spec.disc_y, opts)?;
    let pairing = pair_orbit(&ConjugateTriple::new(&x_class)?, &ConjugateTriple::new(&y_class)?)?;
    let splitting = splitting_field_generator(&pairing)?;
    if !splitting.verify_exact() || !splitting.verify_embeddings(&pairing)? {
        return Err(Error::invariant(Stage::Localfield, "splitting field expressions fail their checks"));
    }
    let first_scan = find_valuation_pattern(&splitting, opts.prime_limit)?;
    let p = opts.prime.unwrap_or(spec.reference_prime);
    let pattern = if p == first_scan.p {
        first_scan.clone()
    } else {
        valuation_pattern_at(&splitting, p)?
    };
    let data = CaseData::new(pairing, pattern)?;
    Ok(BuiltCase {
        spec: *spec,
        x_class,
        y_class,
        splitting,
        first_scan,
        data,
    })
}
