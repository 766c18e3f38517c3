//! Continued fractions and recovery of a rational from a tight ball.

use rug::{Float, Rational};
use singcert::ball::{Mag, RBall};
use singcert::ratrec::{convergents, reconstruct};

fn main() {
    let q = Rational::from((355, 113));
    let c: Vec<String> = convergents(&q).iter().map(|r| r.to_string()).collect();
    println!("convergents of 355/113: {}", c.join(", "));

    let x = Float::with_val(128, Rational::from((-4096, 1234567)));
    let ball = RBall::new(x, Mag::pow2(-100));
    match reconstruct(&ball, 40) {
        Some(r) => println!("reconstructed {r}"),
        None => println!("no small denominator fits"),
    }

    let pi = RBall::pi(64);
    println!("pi, denominators below 2^10: {:?}", reconstruct(&pi, 10).map(|r| r.to_string()));
}
