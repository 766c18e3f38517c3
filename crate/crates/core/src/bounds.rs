//! Archimedean bounds for the collinearity equation.
//!
//! Writing the collinearity of `(x_i^m, y_i^n)` as
//! `(x1/x2)^-m (y1/y2)^n = (1 - (y3/y2)^n - (x3/x1)^m) / (1 - (y3/y1)^n - (x3/x2)^m)`
//! gives an upper bound on `n` once the denominator is bounded below.
//! For `m >= 13` that lower bound comes from [`crate::lmn`], and `m` is
//! replaced by its p-adic ceiling `M(n) = e log n / log p + v0`.
//! For `m < 13` each row gets its own constant `c2(m)`.

use rayon::prelude::*;
use rug::float::Round;
use rug::Float;

use crate::ball::{CBall, RBall};
use crate::error::{Error, Result, Stage};
use crate::lmn::{self, BakerConstant, ASYMPTOTIC_FROM};
use crate::localfield::{max_exponent, padic_exponent_bound, ValuationPattern};
use crate::numfield::{conjugate_ratio, AlgebraicNumber, OrbitPairing};

/// Searches give up beyond this `n`.
pub const N_CAP: u64 = 1_000_000_000;

/// Rows of the small-exponent table are `m = 1 ..= TABLE_ROWS`.
pub const TABLE_ROWS: u64 = ASYMPTOTIC_FROM - 1;

#[derive(Clone, Debug)]
pub struct CaseData {
    pub pairing: OrbitPairing,
    pub pattern: ValuationPattern,
    /// `x3 / x2`.
    pub beta: AlgebraicNumber,
    /// `y3 / y2`.
    pub alpha: AlgebraicNumber,
    pub x12: RBall,
    pub y12: RBall,
    pub x31: RBall,
    pub y31: RBall,
    pub baker: BakerConstant,
    /// Value of `c1` the bounds are run with; the upper edge of `baker.c1`
    /// unless replaced through [`CaseData::with_c1`].
    pub c1: Float,
    pub prec: u32,
}

fn ratio(a: &CBall, b: &CBall) -> Result<CBall> {
    a.div(b).ok_or(Error::DivisionByZero)
}

impl CaseData {
    pub fn new(pairing: OrbitPairing, pattern: ValuationPattern) -> Result<Self> {
        let x = &pairing.x;
        let y = &pairing.y;
        let beta = conjugate_ratio(&x.members[2], &x.members[1])?;
        let alpha = conjugate_ratio(&y.members[2], &y.members[1])?;
        let baker = lmn::c1(&beta)?;
        let x12 = ratio(x.ball(0), x.ball(1))?.abs();
        let y12 = ratio(y.ball(0), y.ball(1))?.abs();
        let x31 = ratio(x.ball(2), x.ball(0))?.abs();
        let y31 = ratio(y.ball(2), y.ball(0))?.abs();
        let y32 = ratio(y.ball(2), y.ball(1))?.abs();
        let prec = pairing.precision;
        let one = RBall::from_int(prec, 1);
        if !(one.lt(&x12) && one.lt(&y12)) {
            return Err(Error::invariant(Stage::Bounds, "x1 or y1 is not dominant"));
        }
        if !(x31.lt(&one) && y31.lt(&one)) {
            return Err(Error::invariant(Stage::Bounds, "|x3/x1| or |y3/y1| not below 1"));
        }
        if !y32.contains(&Float::with_val(prec, 1)) {
            return Err(Error::invariant(Stage::Bounds, "y2, y3 are not a conjugate pair"));
        }
        let c1 = baker.upper();
        Ok(CaseData {
            pairing,
            pattern,
            beta,
            alpha,
            x12,
            y12,
            x31,
            y31,
            baker,
            c1,
            prec,
        })
    }

    /// Same data with a different value of `c1`.
    pub fn with_c1(&self, c1: Float) -> CaseData {
        CaseData { c1, ..self.clone() }
    }

    /// `log |x1/x2|`.
    pub fn lx(&self) -> RBall {
        self.x12.ln().expect("positive")
    }

    /// `log |y1/y2|`.
    pub fn ly(&self) -> RBall {
        self.y12.ln().expect("positive")
    }

    fn c1_ball(&self) -> RBall {
        RBall::exact(Float::with_val(self.prec, &self.c1))
    }

    /// `M(n) = e log n / log p + v0`.
    pub fn m_of(&self, n: u64) -> RBall {
        padic_exponent_bound(n, &self.pattern, self.prec)
    }

    /// `c1 (log M(n))^2`.
    fn baker_exponent(&self, n: u64) -> RBall {
        let l = self.m_of(n).ln().expect("M(n) >= v0 > 0");
        self.c1_ball().mul(&l.sqr())
    }

    /// `x3 / x2` as a ball.
    pub fn beta_ball(&self) -> CBall {
        ratio(self.pairing.x.ball(2), self.pairing.x.ball(1)).expect("x2 != 0")
    }

    /// `y3 / y1` as a ball.
    pub fn y31_ball(&self) -> CBall {
        ratio(self.pairing.y.ball(2), self.pairing.y.ball(0)).expect("y1 != 0")
    }

    /// Continuous bound past which `n a - K - c1 (log M(n))^2` increases,
    /// `a = -log|y3/y1|`. Uses `log M / M <= 1/e`.
    fn threshold_monotone_from(&self) -> u64 {
        let a = self.y31.ln().expect("positive").neg();
        let num = self.c1_ball().mul_int(2 * self.pattern.e as i64);
        let den = euler_e(self.prec).mul(&a).mul(&ln_u(self.pattern.p, self.prec));
        ceil_upper(&num.div(&den).expect("positive"))
    }

    /// Smallest `n` from which the master inequality's left side minus its right
    /// side increases.
    pub fn master_monotone_from(&self) -> u64 {
        let k = self.c1_ball().mul_int(2).div(&euler_e(self.prec)).expect("nonzero");
        let num = self.lx().add(&k).mul_int(self.pattern.e as i64);
        let den = self.ly().mul(&ln_u(self.pattern.p, self.prec));
        ceil_upper(&num.div(&den).expect("positive"))
    }
}

fn euler_e(prec: u32) -> RBall {
    RBall::from_int(prec, 1).exp()
}

fn ln_u(v: u64, prec: u32) -> RBall {
    RBall::from_int(prec, v as i64).ln().expect("positive")
}

fn ceil_upper(b: &RBall) -> u64 {
    let c = b.upper().ceil();
    c.to_f64().max(1.0) as u64
}

/// Least `n >= from` with `pred(n)`, assuming `pred` stays true once true.
fn first_true(from: u64, pred: impl Fn(u64) -> bool) -> Result<u64> {
    if pred(from) {
        return Ok(from);
    }
    let mut lo = from;
    let mut hi = from.max(1) * 2;
    while !pred(hi) {
        lo = hi;
        hi *= 2;
        if hi > N_CAP {
            return Err(Error::exhausted(Stage::Bounds, 0, format!("no crossing below {N_CAP}")));
        }
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Walk down from `start` while `pred` holds; the first failure, or 0.
fn last_false_below(start: u64, pred: impl Fn(u64) -> bool) -> u64 {
    let mut n = start;
    while n > 0 && pred(n) {
        n -= 1;
    }
    n
}

/// Where the asymptotic denominator bound becomes usable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thresholds {
    /// `0.99 E(n) - |y3/y1|^n > 0` for every `n > t1`, and not certified at `t1`.
    pub t1: u64,
    /// `0.99 E(n) - |y3/y1|^n > 0.98 E(n)` for every `n > t2`.
    pub t2: u64,
    /// Past this point both conditions are monotone in `n`.
    pub monotone_from: u64,
}

/// `n a - K - c1 (log M(n))^2 > 0`, certified.
fn margin_positive(case: &CaseData, k: &RBall, n: u64) -> bool {
    let a = case.y31.ln().expect("positive").neg();
    a.mul(&RBall::from_int(case.prec, n as i64))
        .sub(k)
        .sub(&case.baker_exponent(n))
        .is_positive()
}

fn threshold_for(case: &CaseData, k: &RBall, from: u64) -> Result<u64> {
    let first = first_true(from, |n| margin_positive(case, k, n))?;
    Ok(last_false_below(first - 1, |n| margin_positive(case, k, n)))
}

pub fn positivity_thresholds(case: &CaseData) -> Result<Thresholds> {
    let prec = case.prec;
    let from = case.threshold_monotone_from();
    // 0.99 E > r^n  <=>  n a > log(100/99) + c1 L^2
    let k1 = RBall::from_int(prec, 100).div(&RBall::from_int(prec, 99)).unwrap().ln().unwrap();
    // r^n < 0.01 E  <=>  n a > log 100 + c1 L^2
    let k2 = ln_u(100, prec);
    Ok(Thresholds {
        t1: threshold_for(case, &k1, from)?,
        t2: threshold_for(case, &k2, from)?,
        monotone_from: from,
    })
}

/// Certified lower bound for `|1 - (y3/y1)^n - (x3/x2)^m|`, when derivable.
///
/// For `m >= 13` the asymptotic route is used with `m` replaced by `M(n)`.
/// Below 13 the expression is evaluated directly.
pub fn denominator_lower_bound(case: &CaseData, m: u64, n: u64) -> Option<Float> {
    if m == 0 || n == 0 {
        return None;
    }
    let prec = case.prec;
    let bound = if m >= ASYMPTOTIC_FROM {
        let e = case.baker_exponent(n).neg().exp();
        RBall::decimal(prec, 99, 2).mul(&e).sub(&case.y31.pow(n))
    } else {
        let one = CBall::from_int(prec, 1);
        one.sub(&case.y31_ball().pow(n)).sub(&case.beta_ball().pow(m)).abs()
    };
    let lo = bound.lower();
    (lo > 0).then(|| Float::with_val_round(prec, &lo, Round::Down).0)
}

/// `E(n) = exp(-c1 (log M(n))^2)`, lower edge.
pub fn baker_envelope(case: &CaseData, n: u64) -> Float {
    case.baker_exponent(n).neg().exp().lower()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MasterBound {
    /// Past this `n` the master inequality's two sides separate monotonically.
    pub monotone_from: u64,
    /// Every `n > t2` with `m >= 13` satisfies `n <= n_master`.
    pub n_master: u64,
    /// `n_master` itself still satisfies the inequality (certified), so it is
    /// the largest solution rather than just an upper bound.
    pub tight: bool,
    pub thresholds: Thresholds,
    /// `max(t2, n_master)`.
    pub n_bound: u64,
    /// Largest `m` allowed by the p-adic bound at `n_bound`.
    pub m_ceiling: u64,
    /// `m_ceiling < 13`: no solution with `m >= 13`.
    pub contradiction: bool,
}

/// `log K` with `K = (2 + |x3/x1|^13) / 0.98`.
fn log_master_constant(case: &CaseData) -> RBall {
    let prec = case.prec;
    let num = RBall::from_int(prec, 2).add(&case.x31.pow(ASYMPTOTIC_FROM));
    num.div(&RBall::decimal(prec, 98, 2)).unwrap().ln().unwrap()
}

/// `n log|y1/y2| - M(n) log|x1/x2| - log K - c1 (log M(n))^2 > 0`, certified.
fn master_violated(case: &CaseData, log_k: &RBall, n: u64) -> bool {
    let lhs = case.ly().mul(&RBall::from_int(case.prec, n as i64));
    lhs.sub(&case.m_of(n).mul(&case.lx()))
        .sub(log_k)
        .sub(&case.baker_exponent(n))
        .is_positive()
}

pub fn master_n_bound(case: &CaseData) -> Result<MasterBound> {
    let thresholds = positivity_thresholds(case)?;
    let log_k = log_master_constant(case);
    let monotone_from = case.master_monotone_from();
    let from = monotone_from.max(thresholds.t2 + 1);
    let first = first_true(from, |n| master_violated(case, &log_k, n))?;
    let n_master = first - 1;
    let tight = n_master > 0 && {
        // certified the other way: the difference is <= 0
        let lhs = case.ly().mul(&RBall::from_int(case.prec, n_master as i64));
        let diff = lhs
            .sub(&case.m_of(n_master).mul(&case.lx()))
            .sub(&log_k)
            .sub(&case.baker_exponent(n_master));
        diff.upper() <= 0
    };
    let n_bound = thresholds.t2.max(n_master);
    let m_ceiling = max_exponent(n_bound, &case.pattern);
    Ok(MasterBound {
        monotone_from,
        n_master,
        tight,
        thresholds,
        n_bound,
        m_ceiling,
        contradiction: m_ceiling < ASYMPTOTIC_FROM,
    })
}

#[derive(Clone, Debug)]
pub struct BoundTableRow {
    pub m: u64,
    pub c2: RBall,
    pub n_max: u64,
}

/// `c2(m) = (2 + |x3/x1|^m) / (|1 - beta^m| - |y3/y1|)`.
pub fn c2_constant(case: &CaseData, m: u64) -> Result<RBall> {
    let prec = case.prec;
    let num = RBall::from_int(prec, 2).add(&case.x31.pow(m));
    let gap = lmn::one_minus_power(&case.beta_ball(), m).sub(&case.y31);
    if !gap.is_positive() {
        return Err(Error::exhausted(Stage::Bounds, prec, format!("|1 - beta^{m}| - |y3/y1| not positive")));
    }
    Ok(num.div(&gap).expect("positive"))
}

/// `floor((log c2 + m log|x1/x2|) / log|y1/y2|)`, with `c2` taken at its upper edge.
pub fn row_n_max(case: &CaseData, m: u64, c2: &RBall) -> Result<u64> {
    let c2_up = RBall::exact(c2.upper());
    let v = c2_up
        .ln()
        .expect("c2 > 0")
        .add(&case.lx().mul_int(m as i64))
        .div(&case.ly())
        .expect("positive");
    let f = v
        .floor_exact()
        .ok_or_else(|| Error::exhausted(Stage::Bounds, case.prec, format!("n ceiling for m = {m} is ambiguous")))?;
    f.to_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::invariant(Stage::Bounds, format!("row m = {m} leaves no n")))
}

pub fn c2_table(case: &CaseData) -> Result<Vec<BoundTableRow>> {
    (1..=TABLE_ROWS)
        .into_par_iter()
        .map(|m| {
            let c2 = c2_constant(case, m)?;
            let n_max = row_n_max(case, m, &c2)?;
            Ok(BoundTableRow { m, c2, n_max })
        })
        .collect()
}

/// Rows that survive the p-adic bound `m <= M(n_max(m))`, expanded to all
/// their pairs `(m, n)` with `1 <= n <= n_max(m)`.
pub fn residual_set(case: &CaseData, table: &[BoundTableRow]) -> Vec<(u64, u64)> {
    table
        .iter()
        .filter(|row| row.m <= max_exponent(row.n_max, &case.pattern))
        .flat_map(|row| (1..=row.n_max).map(move |n| (row.m, n)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_true_finds_crossing() {
        assert_eq!(first_true(1, |n| n >= 1234).unwrap(), 1234);
        assert_eq!(first_true(5000, |n| n >= 1234).unwrap(), 5000);
        assert!(first_true(1, |_| false).is_err());
    }

    #[test]
    fn last_false_walks_down() {
        assert_eq!(last_false_below(100, |n| n > 40), 40);
        assert_eq!(last_false_below(10, |_| true), 0);
    }
}
