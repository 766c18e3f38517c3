//! One test per acceptance criterion. Each writes a PASS/FAIL line to the
//! real stdout (not the captured one) before asserting.

mod common;

use std::io::Write as _;

use singcert::bounds::{c2_table, master_n_bound, residual_set};
use singcert::cases::{BuildOptions, CaseId, CASE_23, CASE_31};
use singcert::cli::certify_case;
use singcert::finale::{check_pairs, close_case, BALL_PRECISION};
use singcert::lmn::{direct_lower_edge, lower_bound};
use singcert::localfield::{places_above, prop_valuation};
use singcert::modp::primes_between;
use singcert::oracles::height_laws;
use singcert::quadforms::{class_number, hilbert_class_poly, reduced_forms, rounding_is_stable, Discriminant};
use singcert::roots::isolate_roots;

use common::case;

fn report(n: u32, ok: bool, detail: &str) {
    let line = format!("criterion {n:>2}: {} | {detail}\n", if ok { "PASS" } else { "FAIL" });
    let _ = std::io::stdout().lock().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

const DISCS: [i64; 4] = [-23, -92, -31, -124];

#[test]
fn criterion_01_class_numbers() {
    let counts: Vec<(i64, usize, usize)> = DISCS
        .iter()
        .map(|&d| {
            let disc = Discriminant::new(d).unwrap();
            (d, reduced_forms(disc).len(), class_number(disc))
        })
        .collect();
    let ok = counts.iter().all(|&(_, a, b)| a == 3 && b == 3);
    report(1, ok, &format!("(disc, forms, h) = {counts:?}"));
}

#[test]
fn criterion_02_class_polynomials() {
    let mut details = vec![];
    let mut ok = true;
    for d in DISCS {
        let h = hilbert_class_poly(Discriminant::new(d).unwrap()).unwrap();
        let stable = rounding_is_stable(&h).unwrap();
        let certified = isolate_roots(&h.poly(), 256).unwrap();
        let membership = h.roots_vanish()
            && h
                .roots
                .iter()
                .all(|r| certified.iter().filter(|c| c.overlaps(r)).count() == 1);
        let dominant = h.dominant_root() == Some(0);
        ok &= stable && membership && dominant;
        details.push(format!("{d}: stable={stable} roots={membership} dominant={dominant}"));
    }
    report(2, ok, &details.join(", "));
}

#[test]
fn criterion_03_prime_pattern_case_one() {
    let p = &case(CaseId::C23).data.pattern;
    let ok = (p.p, p.e, p.m0, p.v0) == (23, 2, 1, 1);
    report(3, ok, &format!("p={} e={} f={} m0={} v0={}", p.p, p.e, p.f, p.m0, p.v0));
}

#[test]
fn criterion_04_valuation_formula_oracle() {
    let mut details = vec![];
    let mut ok = true;
    for id in CaseId::all() {
        let p = &case(id).data.pattern;
        let matches = (1..=200u64)
            .filter(|&m| prop_valuation(m, p).unwrap() == p.direct_valuation(m).unwrap())
            .count();
        ok &= matches == 200;
        details.push(format!("case {}: {matches}/200 at p = {}", id.label(), p.p));
    }
    report(4, ok, &details.join(", "));
}

#[test]
fn criterion_05_baker_constants() {
    let mut details = vec![];
    let mut ok = true;
    for id in CaseId::all() {
        let b = &case(id).data.baker;
        let c1 = b.c1.to_f64();
        let want: f64 = id.spec().reference_c1.parse().unwrap();
        ok &= (c1 - want).abs() <= 0.5;
        details.push(format!(
            "case {}: c1 = {c1:.2} (d = {}, h = {:.4}) vs {want}",
            id.label(),
            b.d,
            b.height.to_f64()
        ));
    }
    report(5, ok, &details.join(", "));
}

#[test]
fn criterion_06_positivity_threshold() {
    let data = &case(CaseId::C23).data;
    let mb = master_n_bound(data).unwrap();
    let t = &mb.thresholds;
    let reference = master_n_bound(&data.with_c1(CASE_23.reference_c1())).unwrap();
    let ok = (2000..=2075).contains(&t.t1) && t.t2 <= 2075;
    report(
        6,
        ok,
        &format!(
            "computed c1: t1 = {}, t2 = {}; reference c1: t1 = {}, t2 = {}",
            t.t1, t.t2, reference.thresholds.t1, reference.thresholds.t2
        ),
    );
}

#[test]
fn criterion_07_master_bounds() {
    let mut details = vec![];
    let mut ok = true;
    for (id, target) in [(CaseId::C23, 2092u64), (CaseId::C31, 1720u64)] {
        let data = &case(id).data;
        let mb = master_n_bound(data).unwrap();
        let reference = master_n_bound(&data.with_c1(id.spec().reference_c1())).unwrap();
        ok &= mb.n_master.abs_diff(target) <= 10 && mb.m_ceiling <= 5 && mb.contradiction;
        details.push(format!(
            "case {}: n_max = {} m <= {} contradiction = {} (reference c1: n_max = {}, m <= {}; target {target})",
            id.label(),
            mb.n_master,
            mb.m_ceiling,
            mb.contradiction,
            reference.n_master,
            reference.m_ceiling
        ));
    }
    report(7, ok, &details.join("; "));
}

#[test]
fn criterion_08_tables_and_residual_sets() {
    let mut details = vec![];
    let mut ok = true;
    let expected = [
        vec![(1, 1), (1, 2), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5)],
        vec![(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (2, 6)],
    ];
    for (spec, want) in [(CASE_23, &expected[0]), (CASE_31, &expected[1])] {
        let data = &case(spec.id).data;
        let table = c2_table(data).unwrap();
        let ceilings: Vec<u64> = table.iter().map(|r| r.n_max).collect();
        let residual = residual_set(data, &table);
        ok &= ceilings == spec.reference_table && &residual == want;
        details.push(format!("case {}: ceilings {ceilings:?}, {} residual pairs", spec.id.label(), residual.len()));
    }
    report(8, ok, &details.join("; "));
}

#[test]
fn criterion_09_nonvanishing_and_verdict() {
    let mut details = vec![];
    let mut ok = true;
    for id in CaseId::all() {
        let built = case(id);
        let data = &built.data;
        let residual = residual_set(data, &c2_table(data).unwrap());
        let checks = check_pairs(built, &residual, BALL_PRECISION.0, BALL_PRECISION.1).unwrap();
        let both = checks
            .iter()
            .all(|c| c.ball.nonzero && c.exact.norm != 0 && c.routes_agree);
        let verdict = close_case(master_n_bound(data).unwrap().contradiction, &residual, &checks);
        ok &= both && verdict.is_proven();
        details.push(format!("case {}: {} pairs, both routes {both}, {verdict:?}", id.label(), checks.len()));
    }
    report(9, ok, &details.join("; "));
}

#[test]
fn criterion_10_property_suites() {
    let heights = height_laws(100, 2024).unwrap();

    let mut lower_ok = true;
    for id in CaseId::all() {
        let data = &case(id).data;
        let beta = &data.beta;
        for m in 1..=5000u64 {
            let lb = lower_bound(&data.baker, beta, m).unwrap();
            let direct = direct_lower_edge(beta, m).unwrap();
            let upper = singcert::lmn::one_minus_power(beta.value(), m).upper();
            if !(lb.bound > 0 && lb.bound <= direct && direct <= upper) {
                lower_ok = false;
            }
        }
    }

    let mut ef_ok = true;
    let mut scanned = 0;
    for id in CaseId::all() {
        let sf = &case(id).splitting;
        for p in primes_between(11, 200) {
            let sum: usize = places_above(sf, p).unwrap().iter().map(|pl| pl.e * pl.f).sum();
            ef_ok &= sum == 6;
            scanned += 1;
        }
    }

    let opts = BuildOptions::default();
    let render = || {
        let certs = CaseId::all()
            .iter()
            .map(|id| certify_case(id.spec(), &opts).unwrap())
            .collect();
        singcert::certificate::CertificateFile::new(certs).to_toml().unwrap()
    };
    let deterministic = render() == render();

    let ok = heights.ok() && heights.total == 300 && lower_ok && ef_ok && deterministic;
    report(
        10,
        ok,
        &format!(
            "height laws {}/{}, lower bound sound for m <= 5000: {lower_ok}, sum ef = 6 at {scanned} primes: {ef_ok}, byte-identical certificates: {deterministic}",
            heights.passed, heights.total
        ),
    );
}
