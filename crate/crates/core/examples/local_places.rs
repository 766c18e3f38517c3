//! Splitting field of a case, the places above small primes and the
//! valuation pattern used for the p-adic bound on m.

use singcert::localfield::{places_above, prop_valuation, splitting_field_generator, valuation_pattern_at};
use singcert::numfield::{pair_orbit, ConjugateTriple};
use singcert::quadforms::{hilbert_class_poly, Discriminant};

fn triple(d: i64) -> singcert::Result<ConjugateTriple> {
    ConjugateTriple::new(&hilbert_class_poly(Discriminant::new(d)?)?)
}

fn main() -> singcert::Result<()> {
    let pairing = pair_orbit(&triple(-92)?, &triple(-23)?)?;
    let sf = splitting_field_generator(&pairing)?;
    println!("theta = x1 + {} x2, S = {}", sf.shift, sf.minpoly());

    for p in [11u64, 13, 17, 19, 23] {
        let ef: Vec<String> = places_above(&sf, p)?
            .iter()
            .map(|pl| format!("e={} f={}", pl.e, pl.f))
            .collect();
        println!("p = {p}: {}", ef.join("; "));
    }

    let pat = valuation_pattern_at(&sf, 23)?;
    println!(
        "p = {}: e = {}, m0 = {}, v0 = {}, valuations {:?}",
        pat.p, pat.e, pat.m0, pat.v0, pat.valuations
    );
    let v: Vec<i64> = [1, 2, 23, 46, 529].iter().map(|&m| prop_valuation(m, &pat)).collect::<Result<_, _>>()?;
    println!("v(1 - alpha^m) for m = 1, 2, 23, 46, 529: {v:?}");
    Ok(())
}
