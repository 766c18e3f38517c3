//! Midpoint-radius ball arithmetic over MPFR floats.
//!
//! Every operation returns a ball that contains the exact result of the
//! operation applied to any points of the input balls. Midpoints are
//! computed with round-to-nearest at the working precision and the
//! rounding error is folded into the radius; radii are low-precision
//! floats rounded upward.

use std::cmp::Ordering;
use std::fmt;

use rug::float::{Constant, Round};
use rug::ops::{AddAssignRound, DivAssignRound, MulAssignRound, SubAssignRound};
use rug::{Float, Integer, Rational};

const MAG_PREC: u32 = 32;

/// Nonnegative upper bound; all arithmetic rounds toward +inf.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Mag(Float);

impl Mag {
    pub fn zero() -> Self {
        Mag(Float::new(MAG_PREC))
    }

    /// Upper bound for `|x|`.
    pub fn from_abs(x: &Float) -> Self {
        let (f, _) = Float::with_val_round(MAG_PREC, &*x.as_abs(), Round::Up);
        Mag(f)
    }

    pub fn from_u64(v: u64) -> Self {
        let (f, _) = Float::with_val_round(MAG_PREC, v, Round::Up);
        Mag(f)
    }

    /// `2^e`, exact.
    pub fn pow2(e: i32) -> Self {
        let mut f = Float::with_val(MAG_PREC, 1);
        f <<= e;
        Mag(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn add(&self, other: &Mag) -> Mag {
        let mut f = self.0.clone();
        f.add_assign_round(&other.0, Round::Up);
        Mag(f)
    }

    pub fn mul(&self, other: &Mag) -> Mag {
        let mut f = self.0.clone();
        f.mul_assign_round(&other.0, Round::Up);
        Mag(f)
    }

    pub fn mul_float_abs(&self, x: &Float) -> Mag {
        self.mul(&Mag::from_abs(x))
    }

    /// `self / d` where `d` is a positive lower bound.
    pub fn div_lower(&self, d: &Float) -> Mag {
        debug_assert!(*d > 0);
        let mut f = self.0.clone();
        f.div_assign_round(d, Round::Up);
        Mag(f)
    }

    pub fn shl(&self, e: i32) -> Mag {
        let mut f = self.0.clone();
        f <<= e;
        Mag(f)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Upper bound for `exp(self) - 1`.
    pub fn exp_m1(&self) -> Mag {
        let mut f = self.0.clone();
        f.exp_m1_round(Round::Up);
        Mag(f)
    }

    /// Binary exponent `k` with `self <= 2^k`; `None` for zero.
    pub fn log2_ceil(&self) -> Option<i64> {
        if self.0.is_zero() {
            return None;
        }
        let e = self.0.get_exp()? as i64;
        // self < 2^e
        Some(e)
    }
}

/// `|x| * 2^(1 - prec)`: bound on the round-to-nearest error that produced `x`.
fn rounding_error(x: &Float) -> Mag {
    if x.is_zero() {
        return Mag::zero();
    }
    Mag::from_abs(x).shl(1 - x.prec() as i32)
}

fn work_prec(a: &Float, b: &Float) -> u32 {
    a.prec().max(b.prec())
}

/// Real ball `[mid - rad, mid + rad]`.
#[derive(Clone, Debug)]
pub struct RBall {
    mid: Float,
    rad: Mag,
}

impl RBall {
    pub fn new(mid: Float, rad: Mag) -> Self {
        RBall { mid, rad }
    }

    pub fn exact(mid: Float) -> Self {
        RBall {
            mid,
            rad: Mag::zero(),
        }
    }

    pub fn zero(prec: u32) -> Self {
        RBall::exact(Float::new(prec))
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        let (f, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = if ord == Ordering::Equal {
            Mag::zero()
        } else {
            rounding_error(&f)
        };
        RBall { mid: f, rad }
    }

    pub fn from_integer(prec: u32, v: &Integer) -> Self {
        let (f, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = if ord == Ordering::Equal {
            Mag::zero()
        } else {
            rounding_error(&f)
        };
        RBall { mid: f, rad }
    }

    pub fn from_rational(prec: u32, v: &Rational) -> Self {
        let (f, ord) = Float::with_val_round(prec, v, Round::Nearest);
        let rad = if ord == Ordering::Equal {
            Mag::zero()
        } else {
            rounding_error(&f)
        };
        RBall { mid: f, rad }
    }

    /// Ball for the decimal constant `num / 10^scale`.
    pub fn decimal(prec: u32, num: i64, scale: u32) -> Self {
        let r = Rational::from((Integer::from(num), Integer::from(Integer::u_pow_u(10, scale))));
        RBall::from_rational(prec, &r)
    }

    pub fn pi(prec: u32) -> Self {
        let f = Float::with_val(prec, Constant::Pi);
        let rad = rounding_error(&f);
        RBall { mid: f, rad }
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn lower(&self) -> Float {
        let mut f = self.mid.clone();
        f.sub_assign_round(self.rad.as_float(), Round::Down);
        f
    }

    pub fn upper(&self) -> Float {
        let mut f = self.mid.clone();
        f.add_assign_round(self.rad.as_float(), Round::Up);
        f
    }

    pub fn is_positive(&self) -> bool {
        self.lower() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.upper() < 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_positive() && !self.is_negative()
    }

    pub fn contains(&self, x: &Float) -> bool {
        self.lower() <= *x && *x <= self.upper()
    }

    pub fn contains_rational(&self, x: &Rational) -> bool {
        let lo = self.lower();
        let hi = self.upper();
        lo <= *x && hi >= *x
    }

    pub fn overlaps(&self, other: &RBall) -> bool {
        self.lower() <= other.upper() && other.lower() <= self.upper()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &RBall) -> bool {
        self.upper() < other.lower()
    }

    /// Certified `self <= other` up to the boundary.
    pub fn le(&self, other: &RBall) -> bool {
        self.upper() <= other.lower()
    }

    /// The unique integer in the ball, if there is exactly one.
    pub fn unique_integer(&self) -> Option<Integer> {
        let lo = self.lower().ceil();
        let hi = self.upper().floor();
        if lo == hi {
            lo.to_integer()
        } else {
            None
        }
    }

    /// `floor(x)` when it is the same for every point of the ball.
    pub fn floor_exact(&self) -> Option<Integer> {
        let lo = self.lower().floor();
        let hi = self.upper().floor();
        if lo == hi {
            lo.to_integer()
        } else {
            None
        }
    }

    pub fn neg(&self) -> RBall {
        RBall {
            mid: Float::with_val(self.prec(), -&self.mid),
            rad: self.rad.clone(),
        }
    }

    pub fn add(&self, other: &RBall) -> RBall {
        let mid = Float::with_val(work_prec(&self.mid, &other.mid), &self.mid + &other.mid);
        let rad = self.rad.add(&other.rad).add(&rounding_error(&mid));
        RBall { mid, rad }
    }

    pub fn sub(&self, other: &RBall) -> RBall {
        let mid = Float::with_val(work_prec(&self.mid, &other.mid), &self.mid - &other.mid);
        let rad = self.rad.add(&other.rad).add(&rounding_error(&mid));
        RBall { mid, rad }
    }

    pub fn mul(&self, other: &RBall) -> RBall {
        let mid = Float::with_val(work_prec(&self.mid, &other.mid), &self.mid * &other.mid);
        let rad = self
            .rad
            .mul_float_abs(&other.mid)
            .add(&other.rad.mul_float_abs(&self.mid))
            .add(&self.rad.mul(&other.rad))
            .add(&rounding_error(&mid));
        RBall { mid, rad }
    }

    pub fn mul_int(&self, k: i64) -> RBall {
        self.mul(&RBall::from_int(self.prec(), k))
    }

    pub fn sqr(&self) -> RBall {
        self.mul(self)
    }

    pub fn pow(&self, n: u64) -> RBall {
        let mut result = RBall::from_int(self.prec(), 1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Lower bound for `|self|`, zero if the ball straddles zero.
    pub fn abs_lower(&self) -> Float {
        if self.is_positive() {
            self.lower()
        } else if self.is_negative() {
            -self.upper()
        } else {
            Float::new(self.prec())
        }
    }

    pub fn abs_upper(&self) -> Float {
        let mut f = Float::with_val(self.prec(), &*self.mid.as_abs());
        f.add_assign_round(self.rad.as_float(), Round::Up);
        f
    }

    pub fn div(&self, other: &RBall) -> Option<RBall> {
        let d = other.abs_lower();
        if d <= 0 {
            return None;
        }
        let mid = Float::with_val(work_prec(&self.mid, &other.mid), &self.mid / &other.mid);
        // |a/b - a0/b0| <= (ra |b0| + |a0| rb) / (|b0| (|b0| - rb))
        let num = self
            .rad
            .mul_float_abs(&other.mid)
            .add(&other.rad.mul_float_abs(&self.mid));
        let mut den = Float::with_val_round(MAG_PREC, &*other.mid.as_abs(), Round::Down).0;
        den.mul_assign_round(&d, Round::Down);
        let rad = num.div_lower(&den).add(&rounding_error(&mid));
        Some(RBall { mid, rad })
    }

    pub fn recip(&self) -> Option<RBall> {
        RBall::from_int(self.prec(), 1).div(self)
    }

    pub fn exp(&self) -> RBall {
        let mid = Float::with_val(self.prec(), self.mid.exp_ref());
        // |exp(x) - exp(m)| <= exp(m) (exp(r) - 1)
        let e_up = Mag::from_abs(&mid).add(&rounding_error(&mid));
        let rad = e_up.mul(&self.rad.exp_m1()).add(&rounding_error(&mid));
        RBall { mid, rad }
    }

    /// Natural logarithm; `None` unless the ball is strictly positive.
    pub fn ln(&self) -> Option<RBall> {
        let lo = self.lower();
        if lo <= 0 {
            return None;
        }
        let mid = Float::with_val(self.prec(), self.mid.ln_ref());
        let rad = self.rad.div_lower(&lo).add(&rounding_error(&mid));
        Some(RBall { mid, rad })
    }

    pub fn sqrt(&self) -> Option<RBall> {
        let lo = self.lower();
        if lo <= 0 {
            if self.mid.is_zero() && self.rad.is_zero() {
                return Some(self.clone());
            }
            return None;
        }
        let mid = Float::with_val(self.prec(), self.mid.sqrt_ref());
        let mut slo = lo;
        slo.sqrt_round(Round::Down);
        let rad = self.rad.div_lower(&slo).add(&rounding_error(&mid));
        Some(RBall { mid, rad })
    }

    pub fn sin_cos(&self) -> (RBall, RBall) {
        let mut s = self.mid.clone();
        let mut c = Float::new(self.prec());
        s.sin_cos_round(&mut c, Round::Nearest);
        let rs = self.rad.add(&rounding_error(&s));
        let rc = self.rad.add(&rounding_error(&c));
        (RBall { mid: s, rad: rs }, RBall { mid: c, rad: rc })
    }

    /// `log(max(1, x))` for a nonnegative ball.
    pub fn ln_max1(&self) -> RBall {
        let prec = self.prec();
        let one = Float::with_val(prec, 1);
        if self.lower() >= one {
            return self.ln().expect("ball above one");
        }
        if self.upper() <= one {
            return RBall::zero(prec);
        }
        // straddles 1: the value lies in [0, ln(upper)]
        let up = RBall::exact(self.upper()).ln().expect("positive");
        let hi = up.upper();
        let mut half = hi.clone();
        half >>= 1;
        RBall {
            mid: half,
            rad: Mag::from_abs(&hi).shl(-1).add(&Mag::from_abs(&hi).shl(1 - MAG_PREC as i32)),
        }
    }

    pub fn max(&self, other: &RBall) -> RBall {
        // hull of the possible maxima
        let lo = if self.lower() > other.lower() {
            self.lower()
        } else {
            other.lower()
        };
        let hi = if self.upper() > other.upper() {
            self.upper()
        } else {
            other.upper()
        };
        RBall::from_endpoints(&lo, &hi)
    }

    /// Smallest-ish ball containing `[lo, hi]`.
    pub fn from_endpoints(lo: &Float, hi: &Float) -> RBall {
        let prec = lo.prec().max(hi.prec());
        let mut mid = Float::with_val(prec, lo + hi);
        mid >>= 1;
        let mut r1 = hi.clone();
        r1.sub_assign_round(&mid, Round::Up);
        let mut r2 = mid.clone();
        r2.sub_assign_round(lo, Round::Up);
        let r1 = Mag::from_abs(&r1);
        let r2 = Mag::from_abs(&r2);
        let rad = if r1 > r2 { r1 } else { r2 };
        RBall { mid, rad }
    }

    /// Widen the radius by `extra`.
    pub fn add_error(&self, extra: &Mag) -> RBall {
        RBall {
            mid: self.mid.clone(),
            rad: self.rad.add(extra),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        self.mid.to_string_radix(10, Some(digits))
    }

    pub fn set_prec(&self, prec: u32) -> RBall {
        let (mid, ord) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let rad = if ord == Ordering::Equal {
            self.rad.clone()
        } else {
            self.rad.add(&rounding_error(&mid))
        };
        RBall { mid, rad }
    }
}

impl fmt::Display for RBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{} +/- {}]",
            self.mid.to_string_radix(10, Some(20)),
            self.rad.as_float().to_string_radix(10, Some(3))
        )
    }
}

/// Complex ball: a closed disc `|z - center| <= rad`.
#[derive(Clone, Debug)]
pub struct CBall {
    re: Float,
    im: Float,
    rad: Mag,
}

fn c_rounding_error(re: &Float, im: &Float, shift: i32) -> Mag {
    // shift * |z| * 2^-prec style bound using |re| + |im| >= |z|
    let prec = re.prec().max(im.prec()) as i32;
    Mag::from_abs(re)
        .add(&Mag::from_abs(im))
        .shl(shift - prec)
}

impl CBall {
    pub fn new(re: Float, im: Float, rad: Mag) -> Self {
        CBall { re, im, rad }
    }

    pub fn zero(prec: u32) -> Self {
        CBall::new(Float::new(prec), Float::new(prec), Mag::zero())
    }

    pub fn from_int(prec: u32, v: i64) -> Self {
        CBall::from_real(&RBall::from_int(prec, v))
    }

    pub fn from_integer(prec: u32, v: &Integer) -> Self {
        CBall::from_real(&RBall::from_integer(prec, v))
    }

    pub fn from_rational(prec: u32, v: &Rational) -> Self {
        CBall::from_real(&RBall::from_rational(prec, v))
    }

    pub fn from_real(r: &RBall) -> Self {
        CBall {
            re: r.mid.clone(),
            im: Float::new(r.prec()),
            rad: r.rad.clone(),
        }
    }

    pub fn from_parts(re: &RBall, im: &RBall) -> Self {
        CBall {
            re: re.mid.clone(),
            im: im.mid.clone(),
            rad: re.rad.add(&im.rad),
        }
    }

    pub fn re_mid(&self) -> &Float {
        &self.re
    }

    pub fn im_mid(&self) -> &Float {
        &self.im
    }

    pub fn rad(&self) -> &Mag {
        &self.rad
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Real part as a real ball.
    pub fn re(&self) -> RBall {
        RBall::new(self.re.clone(), self.rad.clone())
    }

    pub fn im(&self) -> RBall {
        RBall::new(self.im.clone(), self.rad.clone())
    }

    /// Centre with zero radius.
    pub fn center(&self) -> CBall {
        CBall::new(self.re.clone(), self.im.clone(), Mag::zero())
    }

    pub fn with_rad(&self, rad: Mag) -> CBall {
        CBall::new(self.re.clone(), self.im.clone(), rad)
    }

    pub fn add_error(&self, extra: &Mag) -> CBall {
        CBall::new(self.re.clone(), self.im.clone(), self.rad.add(extra))
    }

    pub fn conj(&self) -> CBall {
        CBall::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im), self.rad.clone())
    }

    pub fn neg(&self) -> CBall {
        CBall::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
            self.rad.clone(),
        )
    }

    fn mag_center(&self) -> Mag {
        Mag::from_abs(&self.re).add(&Mag::from_abs(&self.im))
    }

    pub fn add(&self, other: &CBall) -> CBall {
        let p = self.prec().max(other.prec());
        let re = Float::with_val(p, &self.re + &other.re);
        let im = Float::with_val(p, &self.im + &other.im);
        let rad = self
            .rad
            .add(&other.rad)
            .add(&c_rounding_error(&re, &im, 1));
        CBall { re, im, rad }
    }

    pub fn sub(&self, other: &CBall) -> CBall {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &CBall) -> CBall {
        let p = self.prec().max(other.prec());
        let ac = Float::with_val(p, &self.re * &other.re);
        let bd = Float::with_val(p, &self.im * &other.im);
        let ad = Float::with_val(p, &self.re * &other.im);
        let bc = Float::with_val(p, &self.im * &other.re);
        let re = Float::with_val(p, &ac - &bd);
        let im = Float::with_val(p, &ad + &bc);
        let ma = self.mag_center();
        let mb = other.mag_center();
        let round = ma.mul(&mb).shl(3 - p as i32);
        let rad = ma
            .mul(&other.rad)
            .add(&mb.mul(&self.rad))
            .add(&self.rad.mul(&other.rad))
            .add(&round);
        CBall { re, im, rad }
    }

    pub fn mul_real(&self, r: &RBall) -> CBall {
        self.mul(&CBall::from_real(r))
    }

    pub fn sqr(&self) -> CBall {
        self.mul(self)
    }

    pub fn pow(&self, n: u64) -> CBall {
        let mut result = CBall::from_int(self.prec(), 1);
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.sqr();
            }
        }
        result
    }

    /// Lower bound on `|z|` over the ball (zero when it contains zero).
    pub fn abs_lower(&self) -> Float {
        let mut h = self.re.clone();
        h.hypot_round(&self.im, Round::Down);
        let mut l = Float::with_val(self.prec(), &h);
        l.sub_assign_round(self.rad.as_float(), Round::Down);
        if l < 0 {
            Float::new(self.prec())
        } else {
            l
        }
    }

    pub fn abs_upper(&self) -> Float {
        let mut h = self.re.clone();
        h.hypot_round(&self.im, Round::Up);
        h.add_assign_round(self.rad.as_float(), Round::Up);
        h
    }

    pub fn abs(&self) -> RBall {
        let mut h = Float::with_val(self.prec(), &self.re);
        h.hypot_round(&self.im, Round::Nearest);
        let rad = self.rad.add(&rounding_error(&h));
        RBall::new(h, rad)
    }

    pub fn excludes_zero(&self) -> bool {
        self.abs_lower() > 0
    }

    pub fn contains_zero(&self) -> bool {
        !self.excludes_zero()
    }

    /// Certified disjointness of two discs.
    pub fn disjoint(&self, other: &CBall) -> bool {
        let d = self.sub(&other.center()).center();
        let mut dist = d.re.clone();
        dist.hypot_round(&d.im, Round::Down);
        // rounding in the centre difference
        let slack = c_rounding_error(&d.re, &d.im, 1);
        let reach = self.rad.add(&other.rad).add(&slack);
        dist > *reach.as_float()
    }

    pub fn overlaps(&self, other: &CBall) -> bool {
        !self.disjoint(other)
    }

    pub fn contains_point(&self, other: &CBall) -> bool {
        // other taken as its centre
        let d = self.center().sub(&other.center());
        d.abs_upper() <= *self.rad.as_float()
    }

    pub fn recip(&self) -> Option<CBall> {
        let lo = self.abs_lower();
        if lo <= 0 {
            return None;
        }
        let p = self.prec();
        let n = Float::with_val(p, self.re.square_ref()) + Float::with_val(p, self.im.square_ref());
        let n = Float::with_val(p, n);
        let re = Float::with_val(p, &self.re / &n);
        let im = -Float::with_val(p, &self.im / &n);
        let mut habs = self.re.clone();
        habs.hypot_round(&self.im, Round::Down);
        let mut den = Float::with_val(MAG_PREC, &habs);
        den.set_prec_round(MAG_PREC, Round::Down);
        let mut den2 = den.clone();
        den2.mul_assign_round(&lo, Round::Down);
        let rad = self
            .rad
            .div_lower(&den2)
            .add(&c_rounding_error(&re, &im, 4));
        Some(CBall { re, im, rad })
    }

    pub fn div(&self, other: &CBall) -> Option<CBall> {
        Some(self.mul(&other.recip()?))
    }

    pub fn exp(&self) -> CBall {
        let p = self.prec();
        let e = Float::with_val(p, self.re.exp_ref());
        let mut s = self.im.clone();
        let mut c = Float::new(p);
        s.sin_cos_round(&mut c, Round::Nearest);
        let re = Float::with_val(p, &e * &c);
        let im = Float::with_val(p, &e * &s);
        let e_up = Mag::from_abs(&e).add(&rounding_error(&e));
        let rad = e_up
            .mul(&self.rad.exp_m1())
            .add(&c_rounding_error(&re, &im, 2));
        CBall { re, im, rad }
    }

    pub fn set_prec(&self, prec: u32) -> CBall {
        let re = Float::with_val(prec, &self.re);
        let im = Float::with_val(prec, &self.im);
        let rad = self.rad.add(&c_rounding_error(&re, &im, 1));
        CBall { re, im, rad }
    }

    /// Replace the imaginary part by zero, keeping the disc inside the
    /// original one's real section. Only valid when the value is known real.
    pub fn assume_real(&self) -> CBall {
        CBall {
            re: self.re.clone(),
            im: Float::new(self.im.prec()),
            rad: self.rad.clone(),
        }
    }

    pub fn to_string_short(&self) -> String {
        format!(
            "({} {:+}i) +/- {}",
            self.re.to_string_radix(10, Some(18)),
            self.im.to_f64(),
            self.rad.as_float().to_string_radix(10, Some(3))
        )
    }
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_short())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_encloses_known_digits() {
        let pi = RBall::pi(128);
        let approx = Float::with_val(200, Float::parse("3.14159265358979323846264338327950288419716939937510").unwrap());
        assert!(pi.contains(&approx));
    }

    #[test]
    fn exp_ln_roundtrip_contains_argument() {
        let x = RBall::decimal(256, 123456789, 4);
        let y = x.exp().ln().unwrap();
        assert!(y.overlaps(&x));
        assert!(y.rad().as_float() < &Float::with_val(64, 1e-60));
    }

    #[test]
    fn complex_exp_of_i_pi_is_minus_one() {
        let pi = RBall::pi(200);
        let z = CBall::from_parts(&RBall::zero(200), &pi);
        let w = z.exp();
        let minus_one = CBall::from_int(200, -1);
        assert!(w.overlaps(&minus_one));
        assert!(w.sub(&minus_one).abs_upper() < 1e-50);
    }

    #[test]
    fn recip_times_self_contains_one() {
        let z = CBall::from_parts(&RBall::decimal(128, -10773, 0), &RBall::decimal(128, 19933, 0));
        let w = z.mul(&z.recip().unwrap());
        assert!(w.overlaps(&CBall::from_int(128, 1)));
    }

    #[test]
    fn division_by_ball_containing_zero_fails() {
        let z = RBall::new(Float::with_val(64, 0.001), Mag::from_u64(1));
        assert!(RBall::from_int(64, 1).div(&z).is_none());
        assert!(CBall::from_real(&z).recip().is_none());
    }

    #[test]
    fn unique_integer_detection() {
        let b = RBall::new(Float::with_val(64, 41.9999), Mag::pow2(-8));
        assert_eq!(b.unique_integer(), Some(Integer::from(42)));
        let wide = RBall::new(Float::with_val(64, 41.5), Mag::from_u64(1));
        assert_eq!(wide.unique_integer(), None);
    }

    #[test]
    fn ln_max1_straddling_one_is_small_and_nonnegative() {
        let b = RBall::new(Float::with_val(128, 1), Mag::pow2(-100));
        let l = b.ln_max1();
        assert!(l.lower() >= -1e-20);
        assert!(l.upper() < 1e-20);
    }
}
