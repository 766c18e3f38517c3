//! Reduced forms, class numbers and Hilbert class polynomials for the four
//! discriminants involved.

use singcert::quadforms::{class_number, hilbert_class_poly, reduced_forms, rounding_is_stable, Discriminant};

fn main() -> singcert::Result<()> {
    for d in [-23, -92, -31, -124] {
        let disc = Discriminant::new(d)?;
        let forms: Vec<String> = reduced_forms(disc).iter().map(|f| f.to_string()).collect();
        println!("D = {d}: h = {}, forms {}", class_number(disc), forms.join(" "));

        let h = hilbert_class_poly(disc)?;
        println!("  H = {}", h.poly());
        println!("  computed at {} bits, rounding stable: {}", h.precision, rounding_is_stable(&h)?);
        if let Some(i) = h.dominant_root() {
            println!("  dominant root j{} = {}", i + 1, h.roots[i]);
        }
    }
    Ok(())
}
