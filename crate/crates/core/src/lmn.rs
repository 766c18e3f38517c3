//! Explicit lower bounds for `|1 - alpha^m|` when `|alpha| = 1`.
//!
//! For `m >= 13` the bound is `0.99 * exp(-c1 * (log m)^2)` with `c1`
//! depending only on the degree and height of `alpha`. Below 13 the
//! quantity is evaluated directly with ball arithmetic.

use rug::float::Round;
use rug::Float;

use crate::ball::{CBall, RBall};
use crate::error::{Error, Result, Stage};
use crate::numfield::{on_unit_circle, AlgebraicNumber, HeightValue};
use crate::quadforms::PRECISION_CAP;

/// Exponent from which the asymptotic bound is used.
pub const ASYMPTOTIC_FROM: u64 = 13;

/// Working precision for the constant itself.
const CONST_PREC: u32 = 192;

#[derive(Clone, Debug)]
pub struct BakerConstant {
    pub d: usize,
    pub half_degree: u32,
    pub height: HeightValue,
    pub c1p: RBall,
    pub c1: RBall,
}

impl BakerConstant {
    /// Upper edge of `c1`; the value every downstream bound uses.
    pub fn upper(&self) -> Float {
        self.c1.upper()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundMode {
    Asymptotic,
    Direct,
}

#[derive(Clone, Debug)]
pub struct LowerBoundResult {
    pub m: u64,
    /// Certified lower bound, strictly positive.
    pub bound: Float,
    pub mode: BoundMode,
}

fn dec(num: i64, scale: u32) -> RBall {
    RBall::decimal(CONST_PREC, num, scale)
}

fn ln13() -> RBall {
    RBall::from_int(CONST_PREC, 13).ln().expect("positive")
}

/// `D + max{0, (4.49 - 0.96 D)/log 13}` with `D = d/2`.
pub fn c1_prime(d: usize) -> Result<RBall> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::precondition(Stage::Lmn, format!("degree {d} must be even and at least 2")));
    }
    let big_d = RBall::from_int(CONST_PREC, (d / 2) as i64);
    let num = dec(449, 2).sub(&dec(96, 2).mul(&big_d));
    let corr = num.div(&ln13()).expect("log 13 > 0");
    let zero = RBall::zero(CONST_PREC);
    Ok(big_d.add(&corr.max(&zero)))
}

/// `c1` as a function of the degree and an upper bound for the height.
pub fn c1_from_height(d: usize, h: &Float) -> Result<(RBall, RBall)> {
    let c1p = c1_prime(d)?;
    let big_d = RBall::from_int(CONST_PREC, (d / 2) as i64);
    let l13 = ln13();
    let l13_sq = l13.sqr();
    let dh = big_d.mul(&RBall::exact(Float::with_val(CONST_PREC, h))).add(&dec(2584, 2));

    let t1 = dec(903, 2).mul(&c1p.sqr()).mul(&dh);
    let t2 = c1p.mul_int(2).div(&l13).expect("nonzero");
    let t3 = l13.ln().expect("log 13 > 1").mul_int(2).div(&l13_sq).expect("nonzero");
    let inner = dec(23, 2)
        .mul(&dh)
        .add(&c1p.ln().expect("c1' > 0").mul_int(2))
        .add(&dec(7, 1).mul(&big_d))
        .sub(&dec(207, 2));
    let t4 = inner.div(&l13_sq).expect("nonzero");
    Ok((c1p, t1.add(&t2).add(&t3).add(&t4)))
}

/// Constant for an algebraic number on the unit circle that is not a root of unity.
pub fn c1(alpha: &AlgebraicNumber) -> Result<BakerConstant> {
    if !on_unit_circle(alpha) {
        return Err(Error::NotOnUnitCircle);
    }
    if alpha.is_root_of_unity() {
        return Err(Error::RootOfUnity);
    }
    let d = alpha.degree();
    let height = alpha.height()?;
    let (c1p, c1) = c1_from_height(d, &height.upper())?;
    Ok(BakerConstant {
        d,
        half_degree: (d / 2) as u32,
        height,
        c1p,
        c1,
    })
}

/// `0.99 * exp(-c1 * (log m)^2)`, lower edge, for a given `c1` upper value.
pub fn asymptotic_bound(c1: &Float, log_m: &RBall) -> Float {
    let prec = log_m.prec().max(CONST_PREC);
    let e = RBall::exact(Float::with_val(prec, c1)).mul(&log_m.sqr()).neg().exp();
    RBall::decimal(prec, 99, 2).mul(&e).lower()
}

/// `|1 - alpha^m|` as a ball at the precision of `alpha`.
pub fn one_minus_power(alpha: &CBall, m: u64) -> RBall {
    let prec = alpha.prec();
    CBall::from_int(prec, 1).sub(&alpha.pow(m)).abs()
}

/// Certified positive lower bound for `|1 - alpha^m|`.
pub fn lower_bound(baker: &BakerConstant, alpha: &AlgebraicNumber, m: u64) -> Result<LowerBoundResult> {
    if m == 0 {
        return Err(Error::precondition(Stage::Lmn, "exponent must be positive"));
    }
    if m >= ASYMPTOTIC_FROM {
        let log_m = RBall::from_int(CONST_PREC, m as i64).ln().expect("m >= 1");
        let bound = asymptotic_bound(&baker.upper(), &log_m);
        if bound <= 0 {
            return Err(Error::exhausted(Stage::Lmn, CONST_PREC, "asymptotic bound underflowed"));
        }
        return Ok(LowerBoundResult {
            m,
            bound,
            mode: BoundMode::Asymptotic,
        });
    }
    let bound = direct_lower_edge(alpha, m)?;
    Ok(LowerBoundResult {
        m,
        bound,
        mode: BoundMode::Direct,
    })
}

/// Lower edge of `|1 - alpha^m|`, refining `alpha` until it is positive.
pub fn direct_lower_edge(alpha: &AlgebraicNumber, m: u64) -> Result<Float> {
    let mut a = alpha.clone();
    loop {
        let lo = one_minus_power(a.value(), m).lower();
        if lo > 0 {
            return Ok(Float::with_val_round(CONST_PREC, &lo, Round::Down).0);
        }
        let prec = a.precision();
        if prec >= PRECISION_CAP {
            return Err(Error::exhausted(Stage::Lmn, prec, format!("|1 - alpha^{m}| straddles zero")));
        }
        a = a.refine(prec * 2)?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(b: &RBall, want: f64, tol: f64) -> bool {
        (b.to_f64() - want).abs() < tol
    }

    #[test]
    fn c1_prime_examples() {
        assert!(close(&c1_prime(6).unwrap(), 3.627692, 1e-6));
        assert!(close(&c1_prime(2).unwrap(), 1.0 + 3.53 / 13f64.ln(), 1e-9));
        let c12 = c1_prime(12).unwrap();
        assert!(c12.contains(&Float::with_val(64, 6)));
        assert!(c1_prime(3).is_err());
    }

    #[test]
    fn c1_grows_with_height() {
        let mut last = Float::with_val(64, 0);
        for h in [0.5, 1.0, 5.0, 14.0, 20.0] {
            let (_, c) = c1_from_height(6, &Float::with_val(64, h)).unwrap();
            assert!(c.lower() > last);
            last = c.upper();
        }
    }

    #[test]
    fn asymptotic_bound_is_tiny_but_positive() {
        let l = RBall::from_int(CONST_PREC, 13).ln().unwrap();
        let b = asymptotic_bound(&Float::with_val(64, 5000), &l);
        assert!(b > 0);
        assert!(b < 1e-10);
    }
}
