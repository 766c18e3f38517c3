//! The c2(m) table for m = 1..12 and the pairs (m, n) left after the
//! p-adic ceiling is applied row by row.

use singcert::bounds::{c2_table, residual_set};
use singcert::cases::{build_case, BuildOptions, CaseId};
use singcert::localfield::max_exponent;

fn main() -> singcert::Result<()> {
    for id in CaseId::all() {
        let built = build_case(id.spec(), &BuildOptions::default())?;
        let data = &built.data;
        println!("case {} (p = {})", id.label(), data.pattern.p);
        println!("   m  c2               n_max  m ceiling");
        let table = c2_table(data)?;
        for row in &table {
            println!(
                "  {:>2}  {:<15}  {:>5}  {}",
                row.m,
                row.c2.to_decimal(8),
                row.n_max,
                max_exponent(row.n_max, &data.pattern)
            );
        }
        println!("  residual: {:?}", residual_set(data, &table));
    }
    Ok(())
}
