use singcert::localfield::{
    find_valuation_pattern, match_local_roots, valuation_pattern_at, places_above, prop_valuation, splitting_field_generator,
    DEFAULT_PRIME_LIMIT,
};
use singcert::numfield::{pair_orbit, ConjugateTriple};
use singcert::quadforms::{hilbert_class_poly, Discriminant};

fn triple(d: i64) -> ConjugateTriple {
    ConjugateTriple::new(&hilbert_class_poly(Discriminant::new(d).unwrap()).unwrap()).unwrap()
}

#[test]
fn case_one_pattern() {
    let pairing = pair_orbit(&triple(-92), &triple(-23)).unwrap();
    let sf = splitting_field_generator(&pairing).unwrap();
    let first = find_valuation_pattern(&sf, DEFAULT_PRIME_LIMIT).unwrap();
    assert_eq!((first.p, first.e, first.f, first.m0, first.v0), (11, 1, 2, 1, 2));
    let pat = valuation_pattern_at(&sf, 23).unwrap();
    assert_eq!((pat.p, pat.e, pat.m0, pat.v0), (23, 2, 1, 1));
    for m in 1..=200 {
        assert_eq!(prop_valuation(m, &pat).unwrap(), pat.direct_valuation(m).unwrap(), "m = {m}");
    }
    let rm = match_local_roots(&sf, pat.place()).unwrap();
    assert_eq!(rm.valuations, pat.valuations);
    for p in [11u64, 13, 17, 19, 23, 29] {
        let pl = places_above(&sf, p).unwrap();
        assert_eq!(pl.iter().map(|x| x.e * x.f).sum::<usize>(), 6);
    }
}

#[test]
fn case_two_pattern() {
    let pairing = pair_orbit(&triple(-124), &triple(-31)).unwrap();
    let sf = splitting_field_generator(&pairing).unwrap();
    let pat = find_valuation_pattern(&sf, DEFAULT_PRIME_LIMIT).unwrap();
    assert_eq!(pat.p, 11);
    let rm = match_local_roots(&sf, pat.place()).unwrap();
    assert_eq!(rm.valuations, pat.valuations);
}
