mod common;

use singcert::bounds::{c2_table, master_n_bound, residual_set};
use singcert::cases::CaseId;
use singcert::finale::{
    ball_check, check_pairs, close_case, determinant_ball, determinant_ball_swapped, exact_norm_check, Verdict,
    BALL_PRECISION,
};
use singcert::oracles::ball_vs_exact;

use common::case;

#[test]
fn one_one_is_nonzero_both_ways() {
    let built = case(CaseId::C23);
    let d = determinant_ball(&built.data.pairing, 1, 1, 256).unwrap();
    assert!(d.excludes_zero());
    assert!(d.re().contains_zero());
    let e = exact_norm_check(&built.splitting, 1, 1).unwrap();
    assert!(e.norm > 0);
    let e = exact_norm_check(&built.splitting, 2, 5).unwrap();
    assert!(e.norm > 0);
}

#[test]
fn swapping_conjugate_rows_negates() {
    let built = case(CaseId::C31);
    for (m, n) in [(1, 1), (2, 3)] {
        let d = determinant_ball(&built.data.pairing, m, n, 256).unwrap();
        let s = determinant_ball_swapped(&built.data.pairing, m, n, 256).unwrap();
        assert!(d.add(&s).contains_zero());
        assert!(d.neg().overlaps(&s));
    }
}

#[test]
fn routes_agree_on_residual_pairs() {
    for id in CaseId::all() {
        let rep = ball_vs_exact(case(id)).unwrap();
        assert!(rep.ok(), "{rep}");
    }
}

#[test]
fn higher_precision_keeps_the_verdict() {
    let built = case(CaseId::C23);
    for (m, n) in [(1, 2), (2, 5)] {
        let lo = ball_check(&built.data.pairing, m, n, 256, 256).unwrap();
        let hi = ball_check(&built.data.pairing, m, n, 1024, 1024).unwrap();
        assert!(lo.nonzero && hi.nonzero);
        assert!(hi.ball.rad() <= lo.ball.rad());
    }
}

#[test]
fn truncated_residual_set_is_incomplete() {
    let built = case(CaseId::C23);
    let data = &built.data;
    let residual = residual_set(data, &c2_table(data).unwrap());
    let contradiction = master_n_bound(data).unwrap().contradiction;
    let checks = check_pairs(built, &residual, BALL_PRECISION.0, BALL_PRECISION.1).unwrap();
    assert_eq!(close_case(contradiction, &residual, &checks), Verdict::Proven);
    let short = &checks[..checks.len() - 1];
    assert!(matches!(close_case(contradiction, &residual, short), Verdict::Incomplete { .. }));
    assert!(matches!(close_case(false, &residual, &checks), Verdict::Incomplete { .. }));
}
