//! The constant c1 for beta, lower bounds for |1 - beta^m|, and the
//! resulting thresholds and master bound on n.

use singcert::bounds::master_n_bound;
use singcert::cases::{build_case, BuildOptions, CASE_23, CASE_31};
use singcert::lmn::lower_bound;

fn main() -> singcert::Result<()> {
    let opts = BuildOptions::default();
    for spec in [CASE_23, CASE_31] {
        let built = build_case(&spec, &opts)?;
        let data = &built.data;
        let b = &data.baker;
        println!("case {}: d = {}, h(beta) = {}, c1 = {}", spec.id.label(), b.d, b.height.ball(), b.c1);

        for m in [1u64, 5, 12, 13, 1000] {
            let lb = lower_bound(b, &data.beta, m)?;
            println!("  m = {m:>4}: |1 - beta^m| >= {:.6e} ({:?})", lb.bound, lb.mode);
        }

        let mb = master_n_bound(data)?;
        println!(
            "  T1 = {}, T2 = {}, n <= {}, m <= {}, contradiction: {}",
            mb.thresholds.t1, mb.thresholds.t2, mb.n_bound, mb.m_ceiling, mb.contradiction
        );
        let r = master_n_bound(&data.with_c1(spec.reference_c1()))?;
        println!("  with c1 = {}: T2 = {}, n <= {}, m <= {}", spec.reference_c1, r.thresholds.t2, r.n_bound, r.m_ceiling);
    }
    Ok(())
}
