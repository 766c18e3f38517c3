//! Rational reconstruction from real balls by continued fractions.

use rug::{Integer, Rational};

use crate::ball::RBall;

/// Continued-fraction convergents of a rational number, in order.
pub fn convergents(x: &Rational) -> Vec<Rational> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rest = x.clone();
    loop {
        let a = Integer::from(rest.floor_ref());
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        out.push(Rational::from((h2.clone(), k2.clone())));
        h0 = std::mem::replace(&mut h1, h2);
        k0 = std::mem::replace(&mut k1, k2);
        let frac = rest - Rational::from(a);
        if frac == 0 {
            break;
        }
        rest = frac.recip();
    }
    out
}

/// The unique rational with denominator at most `2^den_bits` inside `ball`.
///
/// Requires `rad < 2^(-2 den_bits - 1)`, which makes any such rational a
/// convergent of the centre and rules out a second candidate. Returns
/// `None` if the radius is too large or no convergent fits.
pub fn reconstruct(ball: &RBall, den_bits: u32) -> Option<Rational> {
    let limit = Integer::from(1) << den_bits;
    let rad = ball.rad().as_float();
    let mut need = rug::Float::with_val(64, 1);
    need >>= (2 * den_bits + 1) as i32;
    if *rad >= need {
        return None;
    }
    let centre = ball.mid().to_rational()?;
    for c in convergents(&centre) {
        if *c.denom() > limit {
            return None;
        }
        if ball.contains_rational(&c) {
            return Some(c);
        }
    }
    None
}

/// Default denominator budget for a working precision.
pub fn default_den_bits(prec: u32) -> u32 {
    prec / 4
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::Mag;
    use rug::Float;

    #[test]
    fn convergents_of_355_113() {
        let c = convergents(&Rational::from((355, 113)));
        assert_eq!(c.first().unwrap(), &Rational::from(3));
        assert_eq!(c.last().unwrap(), &Rational::from((355, 113)));
        assert!(c.contains(&Rational::from((22, 7))));
    }

    #[test]
    fn negative_values_round_trip() {
        let target = Rational::from((-2217259040000i64, 10287808417i64));
        let f = Float::with_val(256, &target);
        let b = RBall::new(f, Mag::pow2(-200));
        assert_eq!(reconstruct(&b, 64), Some(target));
    }

    #[test]
    fn wide_ball_is_rejected() {
        let b = RBall::new(Float::with_val(64, 0.5), Mag::pow2(-10));
        assert_eq!(reconstruct(&b, 16), None);
    }
}
