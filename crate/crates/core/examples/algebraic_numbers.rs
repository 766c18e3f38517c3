//! Conjugate triples, the Galois pairing between two class polynomials,
//! the ratio beta = x3/x2 and its height.

use singcert::numfield::{conjugate_ratio, on_unit_circle, pair_orbit, ConjugateTriple};
use singcert::quadforms::{hilbert_class_poly, Discriminant};

fn triple(d: i64) -> singcert::Result<ConjugateTriple> {
    ConjugateTriple::new(&hilbert_class_poly(Discriminant::new(d)?)?)
}

fn main() -> singcert::Result<()> {
    let x = triple(-92)?;
    let y = triple(-23)?;
    let pairing = pair_orbit(&x, &y)?;
    println!("y_i = P(x_i) with P = {}", pairing.relator);
    println!("exact relator check: {}", pairing.verify_exact());

    let beta = conjugate_ratio(&pairing.x.members[2], &pairing.x.members[1])?;
    println!("beta = {beta}");
    println!("degree {}, on the unit circle: {}", beta.degree(), on_unit_circle(&beta));
    println!("root of unity: {}", beta.is_root_of_unity());
    println!("h(beta) = {}", beta.height()?.ball());
    Ok(())
}
