mod common;

use rug::Float;

use singcert::ball::{CBall, RBall};
use singcert::bounds::{baker_envelope, c2_table, denominator_lower_bound, master_n_bound, residual_set, CaseData};
use singcert::cases::{CaseId, CASE_23, CASE_31};
use singcert::error::Error;
use singcert::lmn::{c1, direct_lower_edge, lower_bound, BoundMode};
use singcert::localfield::max_exponent;
use singcert::numfield::AlgebraicNumber;
use singcert::oracles::table_sample;
use singcert::poly::QPoly;
use singcert::roots::isolate_roots;

use common::case;

fn number(coeffs: &[i64], index: usize) -> AlgebraicNumber {
    let f = QPoly::from_ints(coeffs);
    let roots = isolate_roots(&f, 128).unwrap();
    AlgebraicNumber::with_embeddings(&f, roots, index).unwrap()
}

#[test]
fn c1_rejects_bad_inputs() {
    // primitive cube root of unity
    assert!(matches!(c1(&number(&[1, 1, 1], 1)), Err(Error::RootOfUnity)));
    assert!(matches!(c1(&number(&[-2, 0, 1], 0)), Err(Error::NotOnUnitCircle)));
}

#[test]
fn c1_is_stable_under_refinement() {
    let data = &case(CaseId::C23).data;
    let finer = data.beta.refine(data.beta.precision() * 2).unwrap();
    let again = c1(&finer).unwrap();
    let diff = (again.c1.to_f64() - data.baker.c1.to_f64()).abs();
    assert!(diff < 0.01, "{diff}");
    assert_eq!(again.d, 6);
}

#[test]
fn lower_bound_modes() {
    let data = &case(CaseId::C23).data;
    let one = lower_bound(&data.baker, &data.beta, 1).unwrap();
    assert_eq!(one.mode, BoundMode::Direct);
    assert!(one.bound > 0);
    let twelve = lower_bound(&data.baker, &data.beta, 12).unwrap();
    let thirteen = lower_bound(&data.baker, &data.beta, 13).unwrap();
    assert_eq!(twelve.mode, BoundMode::Direct);
    assert_eq!(thirteen.mode, BoundMode::Asymptotic);
    assert!(twelve.bound > 0 && thirteen.bound > 0);
    // 0.99 exp(-c1 (log 13)^2)
    let want = 0.99 * (-data.baker.c1.to_f64() * 13f64.ln().powi(2)).exp();
    let got = thirteen.bound.to_f64();
    assert!(want == 0.0 || ((got - want) / want).abs() < 1e-6);
    assert!(thirteen.bound <= direct_lower_edge(&data.beta, 13).unwrap());
}

#[test]
fn reference_track_thresholds_and_master_bounds() {
    let d1 = case(CaseId::C23).data.with_c1(CASE_23.reference_c1());
    let m1 = master_n_bound(&d1).unwrap();
    assert_eq!((m1.thresholds.t1, m1.thresholds.t2), (2074, 2075));
    assert_eq!((m1.n_master, m1.m_ceiling), (2092, 5));
    assert!(m1.tight && m1.contradiction);

    let d2 = case(CaseId::C31).data.with_c1(CASE_31.reference_c1());
    let m2 = master_n_bound(&d2).unwrap();
    assert_eq!(m2.thresholds.t2, 1440);
    assert_eq!((m2.n_master, m2.m_ceiling), (1457, 5));
    assert!(m2.contradiction);
}

#[test]
fn computed_master_bounds_still_contradict() {
    for id in CaseId::all() {
        let mb = master_n_bound(&case(id).data).unwrap();
        assert!(mb.contradiction, "{mb:?}");
        assert!(mb.n_master > mb.thresholds.t2);
    }
}

#[test]
fn denominator_bound_past_the_threshold() {
    let data = case(CaseId::C23).data.with_c1(CASE_23.reference_c1());
    let b = denominator_lower_bound(&data, 13, 2076).unwrap();
    let env = baker_envelope(&data, 2076);
    assert!(b >= Float::with_val(64, 0.98) * env);
    assert!(denominator_lower_bound(&data, 13, 2074).is_none());
    assert!(denominator_lower_bound(&data, 1, 1).is_some());
}

#[test]
fn master_bound_is_precision_independent() {
    let built = case(CaseId::C31);
    let finer = CaseData::new(built.data.pairing.refine(512).unwrap(), built.data.pattern.clone()).unwrap();
    assert_eq!(master_n_bound(&finer).unwrap(), master_n_bound(&built.data).unwrap());
}

#[test]
fn residual_rows_and_eliminated_rows() {
    for id in CaseId::all() {
        let data = &case(id).data;
        let table = c2_table(data).unwrap();
        let residual = residual_set(data, &table);
        for row in &table {
            let kept = residual.iter().any(|&(m, _)| m == row.m);
            assert_eq!(kept, row.m <= max_exponent(row.n_max, &data.pattern));
            if row.m >= 3 {
                assert!(!kept, "row {} of case {}", row.m, id.label());
            }
            assert!(row.c2.is_positive());
        }
    }
}

#[test]
fn table_soundness_by_sampling() {
    for id in CaseId::all() {
        let rep = table_sample(case(id), 100, 11).unwrap();
        assert!(rep.ok(), "{rep}");
    }
}

#[test]
fn conjugate_pair_moduli() {
    let data = &case(CaseId::C23).data;
    let y = &data.pairing.y;
    let r: CBall = y.ball(2).div(y.ball(1)).unwrap();
    assert!(r.abs().contains(&Float::with_val(64, 1)));
    assert!(data.x12.lt(&RBall::exact(Float::with_val(64, 1e9))));
}
