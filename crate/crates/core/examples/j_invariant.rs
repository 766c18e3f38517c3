//! q-expansion of j and certified evaluation at CM points, with the ball
//! radius shrinking as precision grows.

use singcert::quadforms::{eval_j, j_coefficients, QuadraticForm};

fn main() -> singcert::Result<()> {
    let c: Vec<String> = j_coefficients(6).iter().map(|v| v.to_string()).collect();
    println!("j = 1/q + {} + ...", c.join(", "));

    let form = QuadraticForm { a: 2, b: 1, c: 3 };
    for prec in [64, 128, 256, 512] {
        let j = eval_j(&form, prec)?;
        println!("{prec:>4} bits: j{form} = {j}");
    }

    // j(i) = 1728
    let j = eval_j(&QuadraticForm { a: 1, b: 0, c: 1 }, 128)?;
    println!("j(i) = {j}");
    Ok(())
}
