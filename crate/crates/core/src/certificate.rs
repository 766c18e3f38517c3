//! Proof certificates: a TOML document with one entry per case.
//!
//! Exact integers and rationals are decimal strings. Reals are a decimal
//! midpoint plus `err_exp`, meaning the true value is within `2^err_exp`
//! of the printed midpoint.

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::ball::RBall;
use crate::error::{Error, Result, Stage};
use crate::lmn::ASYMPTOTIC_FROM;
use crate::localfield::max_exponent_for;
use crate::numfield::NumberField;
use crate::poly::QPoly;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Significant decimal digits printed for reals.
const REAL_DIGITS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Real {
    pub value: String,
    pub err_exp: i64,
}

impl Real {
    pub fn from_ball(b: &RBall) -> Real {
        let mid = b.mid();
        let value = if mid.is_zero() {
            "0".to_string()
        } else {
            mid.to_string_radix(10, Some(REAL_DIGITS))
        };
        // 30 digits leave a relative error below 2^-96
        let print_err = mid.get_exp().map(|e| e as i64 - 96).unwrap_or(i64::MIN);
        let rad_err = b.rad().log2_ceil().unwrap_or(i64::MIN);
        Real {
            value,
            err_exp: print_err.max(rad_err).saturating_add(1),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.parse().unwrap_or(f64::NAN)
    }
}

fn int_strings(v: &[Integer]) -> Vec<String> {
    v.iter().map(|c| c.to_string()).collect()
}

pub fn rational_strings(p: &QPoly) -> Vec<String> {
    p.coeffs().iter().map(|c| c.to_string()).collect()
}

fn parse_rationals(v: &[String]) -> Result<QPoly> {
    let cs = v
        .iter()
        .map(|s| s.parse::<Rational>().map_err(|_| Error::Certificate(format!("bad rational {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(QPoly::from_coeffs(cs))
}

fn parse_integer(s: &str) -> Result<Integer> {
    s.parse::<Integer>().map_err(|_| Error::Certificate(format!("bad integer {s:?}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassPolyRecord {
    pub disc: i64,
    /// Ascending coefficients.
    pub coeffs: Vec<String>,
    pub precision: u32,
    pub rounding_stable: bool,
}

impl ClassPolyRecord {
    pub fn new(h: &crate::quadforms::ClassPolynomial, rounding_stable: bool) -> Self {
        ClassPolyRecord {
            disc: h.disc.value(),
            coeffs: int_strings(&h.coeffs),
            precision: h.precision,
            rounding_stable,
        }
    }

    pub fn poly(&self) -> Result<QPoly> {
        parse_rationals(&self.coeffs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassPolys {
    pub stage: Stage,
    pub x: ClassPolyRecord,
    pub y: ClassPolyRecord,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairingRecord {
    pub stage: Stage,
    /// `y_i = P(x_i)`, ascending coefficients of `P`.
    pub relator: Vec<String>,
    pub y_swapped: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplittingRecord {
    pub stage: Stage,
    /// `theta = x1 + shift * x2`.
    pub shift: i64,
    pub minpoly: Vec<String>,
    /// `x_i` and `y_i` as polynomials in `theta`.
    pub x: Vec<Vec<String>>,
    pub y: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanRecord {
    pub p: u64,
    /// `(e, f, matches)` per place.
    pub places: Vec<(u64, u64, bool)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlaceRecord {
    pub stage: Stage,
    pub prime: u64,
    pub reference_prime: u64,
    pub first_scan_prime: u64,
    pub e: u64,
    pub f: u64,
    pub m0: u64,
    pub v0: i64,
    /// `v(x1), v(x2), v(x3), v(y1), v(y2), v(y3)`.
    pub valuations: Vec<i64>,
    pub local_precision: i64,
    pub scan: Vec<ScanRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BakerRecord {
    pub stage: Stage,
    pub d: u64,
    pub height: Real,
    pub c1_prime: Real,
    pub c1: Real,
    pub reference_c1: String,
    /// `c1` rounds to the reference value at two decimals.
    pub matches_reference: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsRecord {
    pub stage: Stage,
    /// `c1` the bounds were run with.
    pub c1_used: String,
    pub t1: u64,
    pub t2: u64,
    pub monotone_from: u64,
    pub n_master: u64,
    pub tight: bool,
    pub n_bound: u64,
    pub m_ceiling: u64,
    pub contradiction: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioRecord {
    pub stage: Stage,
    pub abs_x1_x2: Real,
    pub abs_y1_y2: Real,
    pub abs_x3_x1: Real,
    pub abs_y3_y1: Real,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableRow {
    pub m: u64,
    pub c2: Real,
    pub n_max: u64,
    pub reference_n_max: u64,
    /// `n_max` differs from the reference ceiling.
    pub discrepancy: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonvanishingRecord {
    pub m: u64,
    pub n: u64,
    /// Imaginary part of the determinant ball; the real part contains 0.
    pub ball_im: Real,
    pub ball_precision: u32,
    pub ball_nonzero: bool,
    /// `-delta^2`, exact.
    pub norm: String,
    pub routes_agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrecisionRecord {
    pub stage: Stage,
    pub what: String,
    pub bits: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Incomplete {
    pub stage: Stage,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CaseCertificate {
    pub case: String,
    pub verdict: String,
    pub orientation: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub incomplete: Option<Incomplete>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub class_polynomials: Option<ClassPolys>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub pairing: Option<PairingRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub splitting_field: Option<SplittingRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub place: Option<PlaceRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub baker: Option<BakerRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ratios: Option<RatioRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub bounds: Option<BoundsRecord>,
    /// The same bounds run with the reference value of `c1`.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reference_bounds: Option<BoundsRecord>,
    #[serde(default)]
    pub table: Vec<TableRow>,
    #[serde(default)]
    pub residual: Vec<(u64, u64)>,
    #[serde(default)]
    pub nonvanishing: Vec<NonvanishingRecord>,
    #[serde(default)]
    pub precision_trace: Vec<PrecisionRecord>,
}

pub const PROVEN: &str = "PROVEN";
pub const INCOMPLETE: &str = "INCOMPLETE";

impl CaseCertificate {
    pub fn is_proven(&self) -> bool {
        self.verdict == PROVEN
    }

    /// Re-check every claim that can be decided exactly from the document:
    /// the relator identity, the determinant norms in `Q(theta)`, the p-adic
    /// ceilings, the residual set and the verdict.
    pub fn recheck(&self) -> Result<()> {
        let fail = |what: String| Err(Error::Certificate(format!("case {}: {what}", self.case)));
        if !self.is_proven() {
            return if self.verdict == INCOMPLETE {
                Ok(())
            } else {
                fail(format!("unknown verdict {:?}", self.verdict))
            };
        }
        let (Some(cp), Some(pr), Some(sf), Some(pl), Some(bd)) = (
            &self.class_polynomials,
            &self.pairing,
            &self.splitting_field,
            &self.place,
            &self.bounds,
        ) else {
            return fail("proven certificate is missing sections".into());
        };
        let hx = cp.x.poly()?;
        let hy = cp.y.poly()?;
        if hx.deg() != 3 || hy.deg() != 3 || hx.lead() != 1 || hy.lead() != 1 {
            return fail("class polynomials are not monic cubics".into());
        }
        let rel = parse_rationals(&pr.relator)?;
        if !hy.compose_mod(&rel, &hx).is_zero() {
            return fail("relator does not map roots of H_x to roots of H_y".into());
        }

        let s = parse_rationals(&sf.minpoly)?;
        let k = NumberField::new(s.clone());
        let xs = sf.x.iter().map(|v| parse_rationals(v)).collect::<Result<Vec<_>>>()?;
        let ys = sf.y.iter().map(|v| parse_rationals(v)).collect::<Result<Vec<_>>>()?;
        if xs.len() != 3 || ys.len() != 3 {
            return fail("splitting field needs three x and three y expressions".into());
        }
        for i in 0..3 {
            if !hx.compose_mod(&xs[i], k.modulus()).is_zero()
                || !hy.compose_mod(&ys[i], k.modulus()).is_zero()
                || rel.compose_mod(&xs[i], k.modulus()) != ys[i]
            {
                return fail(format!("conjugate {i} fails its defining identities"));
            }
        }
        let theta = k.add(&xs[0], &xs[1].scale(&Rational::from(sf.shift)));
        if theta != k.generator() {
            return fail("theta is not x1 + shift * x2".into());
        }

        let ceiling = |n: u64| max_exponent_for(n, pl.prime, pl.e as u32, pl.v0);
        if ceiling(bd.n_bound) != bd.m_ceiling || bd.n_bound != bd.t2.max(bd.n_master) {
            return fail("m ceiling does not follow from the n bound".into());
        }
        if !(bd.contradiction && bd.m_ceiling < ASYMPTOTIC_FROM) {
            return fail("no contradiction for m >= 13".into());
        }
        if self.table.len() as u64 != ASYMPTOTIC_FROM - 1 {
            return fail("table must have a row for every m < 13".into());
        }
        let expected: Vec<(u64, u64)> = self
            .table
            .iter()
            .filter(|r| r.m <= ceiling(r.n_max))
            .flat_map(|r| (1..=r.n_max).map(move |n| (r.m, n)))
            .collect();
        if expected != self.residual {
            return fail("residual set does not follow from the table".into());
        }
        let checked: Vec<(u64, u64)> = self.nonvanishing.iter().map(|r| (r.m, r.n)).collect();
        if checked != self.residual {
            return fail("nonvanishing records do not cover the residual set".into());
        }
        for r in &self.nonvanishing {
            let norm = parse_integer(&r.norm)?;
            let xm: Vec<QPoly> = xs.iter().map(|v| k.pow(v, r.m)).collect();
            let yn: Vec<QPoly> = ys.iter().map(|v| k.pow(v, r.n)).collect();
            let t = |a: usize, b: usize| k.sub(&k.mul(&xm[a], &yn[b]), &k.mul(&xm[b], &yn[a]));
            let delta = k.add(&k.sub(&t(1, 2), &t(0, 2)), &t(0, 1));
            let sq = k.mul(&delta, &delta);
            if k.as_rational(&sq) != Some(Rational::from(-&norm)) {
                return fail(format!("norm at ({}, {}) does not match", r.m, r.n));
            }
            if norm == 0 || !r.ball_nonzero || !r.routes_agree {
                return fail(format!("determinant at ({}, {}) not certified nonzero", r.m, r.n));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub certificates: Vec<CaseCertificate>,
}

impl CertificateFile {
    pub fn new(certificates: Vec<CaseCertificate>) -> Self {
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            certificates,
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Parse a certificate, rejecting any schema version but the current one.
    pub fn from_toml(text: &str) -> Result<Self> {
        let raw: toml::Table = text.parse().map_err(|e: toml::de::Error| Error::Certificate(e.to_string()))?;
        match raw.get("schema_version").and_then(|v| v.as_integer()) {
            Some(v) if v == SCHEMA_VERSION as i64 => {}
            Some(v) => return Err(Error::Certificate(format!("unsupported schema version {v}"))),
            None => return Err(Error::Certificate("missing schema_version".into())),
        }
        toml::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }

    pub fn all_proven(&self) -> bool {
        !self.certificates.is_empty() && self.certificates.iter().all(|c| c.is_proven())
    }

    pub fn recheck(&self) -> Result<()> {
        self.certificates.iter().try_for_each(|c| c.recheck())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    #[test]
    fn real_error_covers_printing() {
        let b = RBall::exact(Float::with_val(256, 1) / 3u32);
        let r = Real::from_ball(&b);
        let printed: Float = Float::with_val(256, Float::parse(&r.value).unwrap());
        let diff = Float::with_val(256, &printed - b.mid()).abs();
        assert!(diff < Float::with_val(64, 2f64.powi(r.err_exp as i32)));
        assert!(r.err_exp < -90);
    }

    #[test]
    fn rejects_unknown_schema() {
        let doc = "schema_version = 99\ntool_version = \"x\"\ncertificates = []\n";
        assert!(CertificateFile::from_toml(doc).is_err());
        let ok = CertificateFile::new(vec![]).to_toml().unwrap();
        assert!(CertificateFile::from_toml(&ok).is_ok());
    }
}
