//! Nonvanishing of `det [[1, x_i^m, y_i^n]]` on the residual pairs.
//!
//! Two independent routes: a ball evaluation on the labelled embeddings,
//! and exact arithmetic in `Q(theta)`. Rows 2 and 3 are complex conjugate,
//! so the determinant is purely imaginary and its square is a rational
//! integer.

use rayon::prelude::*;
use rug::Integer;

use crate::ball::CBall;
use crate::cases::BuiltCase;
use crate::error::{Error, Result, Stage};
use crate::localfield::SplittingField;
use crate::numfield::{FieldElem, NumberField, OrbitPairing};
use crate::quadforms::{DEFAULT_PRECISION, PRECISION_CAP};

/// `det [[1, a_i, b_i]]` for three rows.
fn det3<T>(a: [&T; 3], b: [&T; 3], ops: (impl Fn(&T, &T) -> T, impl Fn(&T, &T) -> T, impl Fn(&T, &T) -> T)) -> T {
    let (mul, add, sub) = ops;
    // (a2 b3 - a3 b2) - (a1 b3 - a3 b1) + (a1 b2 - a2 b1)
    let m1 = sub(&mul(a[1], b[2]), &mul(a[2], b[1]));
    let m2 = sub(&mul(a[0], b[2]), &mul(a[2], b[0]));
    let m3 = sub(&mul(a[0], b[1]), &mul(a[1], b[0]));
    add(&sub(&m1, &m2), &m3)
}

fn det_ball(x: [&CBall; 3], y: [&CBall; 3], m: u64, n: u64) -> CBall {
    let xm: Vec<CBall> = x.iter().map(|v| v.pow(m)).collect();
    let yn: Vec<CBall> = y.iter().map(|v| v.pow(n)).collect();
    det3(
        [&xm[0], &xm[1], &xm[2]],
        [&yn[0], &yn[1], &yn[2]],
        (|a: &CBall, b: &CBall| a.mul(b), |a: &CBall, b: &CBall| a.add(b), |a: &CBall, b: &CBall| a.sub(b)),
    )
}

/// Ball containing the determinant at `prec` bits.
pub fn determinant_ball(pairing: &OrbitPairing, m: u64, n: u64, prec: u32) -> Result<CBall> {
    let p = pairing.refine(prec)?;
    let x = [p.x.ball(0), p.x.ball(1), p.x.ball(2)];
    let y = [p.y.ball(0), p.y.ball(1), p.y.ball(2)];
    Ok(det_ball(x, y, m, n))
}

/// The determinant with rows 2 and 3 exchanged.
pub fn determinant_ball_swapped(pairing: &OrbitPairing, m: u64, n: u64, prec: u32) -> Result<CBall> {
    let p = pairing.refine(prec)?;
    let x = [p.x.ball(0), p.x.ball(2), p.x.ball(1)];
    let y = [p.y.ball(0), p.y.ball(2), p.y.ball(1)];
    Ok(det_ball(x, y, m, n))
}

#[derive(Clone, Debug)]
pub struct BallCheck {
    pub ball: CBall,
    pub precision: u32,
    pub nonzero: bool,
}

/// Ball route: the real part must contain 0 and the imaginary part must not.
pub fn ball_check(pairing: &OrbitPairing, m: u64, n: u64, start: u32, cap: u32) -> Result<BallCheck> {
    let mut prec = start.max(DEFAULT_PRECISION);
    loop {
        let ball = determinant_ball(pairing, m, n, prec)?;
        if !ball.re().contains_zero() {
            return Err(Error::invariant(Stage::Finale, format!("determinant for ({m}, {n}) is not purely imaginary")));
        }
        if !ball.im().contains_zero() {
            return Ok(BallCheck {
                ball,
                precision: prec,
                nonzero: true,
            });
        }
        if prec >= cap {
            return Ok(BallCheck {
                ball,
                precision: prec,
                nonzero: false,
            });
        }
        prec *= 2;
    }
}

#[derive(Clone, Debug)]
pub struct ExactCheck {
    /// The determinant as an element of `Q(theta)`.
    pub delta: FieldElem,
    /// `delta * conj(delta) = -delta^2`.
    pub norm: Integer,
}

/// Exact route in `Q(theta)`.
pub fn exact_norm_check(sf: &SplittingField, m: u64, n: u64) -> Result<ExactCheck> {
    let k: NumberField = sf.field();
    let xm: Vec<FieldElem> = sf.x.iter().map(|v| k.pow(v, m)).collect();
    let yn: Vec<FieldElem> = sf.y.iter().map(|v| k.pow(v, n)).collect();
    let delta = det3(
        [&xm[0], &xm[1], &xm[2]],
        [&yn[0], &yn[1], &yn[2]],
        (|a: &FieldElem, b: &FieldElem| k.mul(a, b), |a: &FieldElem, b: &FieldElem| k.add(a, b), |a: &FieldElem, b: &FieldElem| k.sub(a, b)),
    );
    let sq = k.mul(&delta, &delta);
    let sq = k
        .as_rational(&sq)
        .ok_or_else(|| Error::invariant(Stage::Finale, format!("square of determinant ({m}, {n}) is not rational")))?;
    let norm = -sq;
    if *norm.denom() != 1 {
        return Err(Error::invariant(Stage::Finale, format!("norm of determinant ({m}, {n}) is not integral")));
    }
    let norm = norm.into_numer_denom().0;
    if norm < 0 {
        return Err(Error::invariant(Stage::Finale, format!("determinant ({m}, {n}) is not purely imaginary")));
    }
    Ok(ExactCheck { delta, norm })
}

#[derive(Clone, Debug)]
pub struct NonvanishingCheck {
    pub m: u64,
    pub n: u64,
    pub ball: BallCheck,
    pub exact: ExactCheck,
    /// The exact determinant embedded through `theta` overlaps the ball.
    pub routes_agree: bool,
}

impl NonvanishingCheck {
    pub fn nonzero(&self) -> bool {
        self.ball.nonzero && self.exact.norm != 0 && self.routes_agree
    }
}

pub fn check_pair(case: &BuiltCase, m: u64, n: u64, start: u32, cap: u32) -> Result<NonvanishingCheck> {
    let pairing = &case.data.pairing;
    let ball = ball_check(pairing, m, n, start, cap)?;
    let exact = exact_norm_check(&case.splitting, m, n)?;
    let theta = case.splitting.theta.refine(ball.precision)?;
    let embedded = exact.delta.eval_ball(theta.value());
    let routes_agree = embedded.overlaps(&ball.ball) && (exact.norm == 0) == !ball.nonzero;
    Ok(NonvanishingCheck {
        m,
        n,
        ball,
        exact,
        routes_agree,
    })
}

/// Both checks on every pair, in the order given.
pub fn check_pairs(case: &BuiltCase, pairs: &[(u64, u64)], start: u32, cap: u32) -> Result<Vec<NonvanishingCheck>> {
    pairs
        .par_iter()
        .map(|&(m, n)| check_pair(case, m, n, start, cap))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    Incomplete { stage: Stage, reason: String },
}

impl Verdict {
    pub fn is_proven(&self) -> bool {
        matches!(self, Verdict::Proven)
    }
}

/// PROVEN when there is no solution with `m >= 13`, and every pair of
/// `residual` has a check in `checks` (same order) certifying nonvanishing.
pub fn close_case(contradiction: bool, residual: &[(u64, u64)], checks: &[NonvanishingCheck]) -> Verdict {
    if !contradiction {
        return Verdict::Incomplete {
            stage: Stage::Bounds,
            reason: "no contradiction for m >= 13".into(),
        };
    }
    let checked: Vec<(u64, u64)> = checks.iter().map(|c| (c.m, c.n)).collect();
    if checked != residual {
        return Verdict::Incomplete {
            stage: Stage::Finale,
            reason: format!("{} residual pairs, {} checked", residual.len(), checked.len()),
        };
    }
    if let Some(c) = checks.iter().find(|c| !c.nonzero()) {
        return Verdict::Incomplete {
            stage: Stage::Finale,
            reason: format!("determinant at ({}, {}) not certified nonzero", c.m, c.n),
        };
    }
    Verdict::Proven
}

/// Default ball-route precision range.
pub const BALL_PRECISION: (u32, u32) = (DEFAULT_PRECISION, PRECISION_CAP);
