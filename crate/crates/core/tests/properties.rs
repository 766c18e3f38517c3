mod common;

use proptest::prelude::*;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use singcert::ball::{CBall, Mag, RBall};
use singcert::cases::CaseId;
use singcert::certificate::Real;
use singcert::lmn::{c1_from_height, direct_lower_edge, one_minus_power};
use singcert::localfield::{max_exponent_for, prop_valuation};
use singcert::numfield::NumberField;
use singcert::oracles::height_laws;
use singcert::poly::QPoly;

use common::case;

fn ints(len: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..=50, len)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn max_exponent_brackets_the_power(n in 1u64..1_000_000, p in prop::sample::select(vec![11u64, 13, 23, 31, 97]), e in 1u32..=3, v0 in 1i64..=3) {
        let m = max_exponent_for(n, p, e, v0);
        let k = (m as i64 - v0) as u32;
        let ne = Integer::from(n).pow(e);
        prop_assert!(Integer::from(p).pow(k) <= ne);
        prop_assert!(Integer::from(p).pow(k + 1) > ne);
    }

    #[test]
    fn c1_grows_with_height(a in 0.0f64..100.0, b in 0.0f64..100.0, half in 1usize..=6) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let (_, c_lo) = c1_from_height(2 * half, &Float::with_val(128, lo)).unwrap();
        let (_, c_hi) = c1_from_height(2 * half, &Float::with_val(128, hi)).unwrap();
        prop_assert!(c_lo.upper() <= c_hi.upper());
        prop_assert!(c_lo.is_positive());
    }

    #[test]
    fn real_error_covers_the_ball(mant in -1_000_000_000i64..1_000_000_000, shift in -80i32..80, rad_exp in -300i32..0) {
        let mid = Float::with_val(256, mant) * Float::with_val(256, Float::i_exp(1, shift));
        let ball = RBall::new(mid, Mag::pow2(rad_exp));
        let real = Real::from_ball(&ball);
        let printed = Rational::from_str_radix(&decimal_to_fraction(&real.value), 10).unwrap();
        let bound = Rational::from((1, 1)) << (real.err_exp as i32);
        let lo = ball.lower().to_rational().unwrap();
        let hi = ball.upper().to_rational().unwrap();
        prop_assert!((lo - printed.clone()).abs() <= bound);
        prop_assert!((hi - printed).abs() <= bound);
    }

    #[test]
    fn inverse_in_a_cubic_field(c in ints(3)) {
        prop_assume!(c.iter().any(|&v| v != 0));
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 0, 1]));
        let a = k.reduce(&QPoly::from_ints(&c));
        let inv = k.inv(&a).unwrap();
        prop_assert_eq!(k.mul(&a, &inv), QPoly::one());
    }

    #[test]
    fn field_embedding_is_a_ring_map(a in ints(3), b in ints(3)) {
        let f = QPoly::from_ints(&[-2, 0, 0, 1]);
        let k = NumberField::new(f);
        let theta = CBall::from_real(&RBall::exact(Float::with_val(256, 2).cbrt()));
        let (a, b) = (k.reduce(&QPoly::from_ints(&a)), k.reduce(&QPoly::from_ints(&b)));
        let prod = k.embed(&k.mul(&a, &b), &theta);
        prop_assert!(prod.overlaps(&k.embed(&a, &theta).mul(&k.embed(&b, &theta))));
    }

    #[test]
    fn valuation_vanishes_off_the_order(m in 1u64..100_000) {
        for id in CaseId::all() {
            let p = &case(id).data.pattern;
            let v = prop_valuation(m, p).unwrap();
            if m % p.m0 != 0 {
                prop_assert_eq!(v, 0);
            } else {
                prop_assert!(v >= p.v0);
                prop_assert_eq!(prop_valuation(m * p.p, p).unwrap(), v + p.e as i64);
            }
        }
    }

    #[test]
    fn direct_edge_below_the_upper_edge(m in 1u64..20_000) {
        let beta = &case(CaseId::C31).data.beta;
        let direct = direct_lower_edge(beta, m).unwrap();
        prop_assert!(direct > 0);
        prop_assert!(direct <= one_minus_power(beta.value(), m).upper());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn height_laws_hold_for_any_seed(seed in any::<u64>()) {
        let rep = height_laws(4, seed).unwrap();
        prop_assert!(rep.ok(), "{}", rep);
    }
}

/// "1.25e-3" style decimal into "p/q".
fn decimal_to_fraction(s: &str) -> String {
    let (mant, exp) = match s.split_once(['e', 'E', '@']) {
        Some((m, e)) => (m, e.parse::<i32>().unwrap()),
        None => (s, 0),
    };
    let (neg, mant) = mant.strip_prefix('-').map_or((false, mant), |m| (true, m));
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    let digits = format!("{int}{frac}");
    let scale = exp - frac.len() as i32;
    let mut num = Integer::from_str_radix(&digits, 10).unwrap();
    let mut den = Integer::from(1);
    if scale >= 0 {
        num *= Integer::from(10).pow(scale as u32);
    } else {
        den = Integer::from(10).pow((-scale) as u32);
    }
    if neg {
        num = -num;
    }
    format!("{num}/{den}")
}
