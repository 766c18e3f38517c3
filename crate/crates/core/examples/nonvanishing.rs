//! Both routes for the 3x3 determinant on the residual pairs: a ball with
//! imaginary part away from zero, and an exact nonzero norm in Q(theta).

use singcert::bounds::{c2_table, master_n_bound, residual_set};
use singcert::cases::{build_case, BuildOptions, CaseId};
use singcert::finale::{check_pairs, close_case, BALL_PRECISION};

fn main() -> singcert::Result<()> {
    for id in CaseId::all() {
        let built = build_case(id.spec(), &BuildOptions::default())?;
        let data = &built.data;
        let residual = residual_set(data, &c2_table(data)?);
        let checks = check_pairs(&built, &residual, BALL_PRECISION.0, BALL_PRECISION.1)?;
        println!("case {}", id.label());
        for c in &checks {
            println!(
                "  ({}, {}): Im delta = {} at {} bits, norm = {}, agree = {}",
                c.m,
                c.n,
                c.ball.ball.im().to_decimal(6),
                c.ball.precision,
                c.exact.norm,
                c.routes_agree
            );
        }
        let verdict = close_case(master_n_bound(data)?.contradiction, &residual, &checks);
        println!("  verdict: {verdict:?}");
    }
    Ok(())
}
