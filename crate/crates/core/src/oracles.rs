//! Brute-force and sampled cross-checks of the main pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Integer};

use crate::ball::{CBall, RBall};
use crate::bounds::{c2_table, residual_set, BoundTableRow, CaseData};
use crate::cases::BuiltCase;
use crate::error::Result;
use crate::finale::{ball_check, exact_norm_check};
use crate::localfield::{places_above, prop_valuation};
use crate::numfield::AlgebraicNumber;
use crate::poly::QPoly;
use crate::quadforms::DEFAULT_PRECISION;
use crate::roots::isolate_roots;

#[derive(Clone, Debug, Default)]
pub struct OracleReport {
    pub name: String,
    pub total: usize,
    pub passed: usize,
    /// Witness inputs for every mismatch.
    pub failures: Vec<String>,
}

impl OracleReport {
    fn new(name: &str) -> Self {
        OracleReport {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn record(&mut self, ok: bool, witness: impl FnOnce() -> String) {
        self.total += 1;
        if ok {
            self.passed += 1;
        } else {
            self.failures.push(witness());
        }
    }

    pub fn ok(&self) -> bool {
        self.failures.is_empty() && self.total > 0
    }
}

impl std::fmt::Display for OracleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}/{} passed", self.name, self.passed, self.total)?;
        for w in &self.failures {
            write!(f, "\n  mismatch: {w}")?;
        }
        Ok(())
    }
}

/// Closed-form valuation of `1 - alpha^m` against repeated multiplication,
/// plus `sum e f = 6` at every scanned prime.
pub fn valuation_scan(case: &BuiltCase, max_m: u64) -> Result<OracleReport> {
    let pattern = &case.data.pattern;
    let mut rep = OracleReport::new(&format!("valuation-scan case {}", case.spec.id.label()));
    for m in 1..=max_m {
        let formula = prop_valuation(m, pattern)?;
        let direct = pattern.direct_valuation(m)?;
        rep.record(formula == direct, || format!("m = {m}: formula {formula}, direct {direct}"));
    }
    // scans stop at the first matching place, so recount the full fibre
    let mut primes: Vec<u64> = case.first_scan.scanned.iter().chain(&pattern.scanned).map(|s| s.p).collect();
    primes.sort_unstable();
    primes.dedup();
    for p in primes {
        let sum: usize = places_above(&case.splitting, p)?.iter().map(|pl| pl.e * pl.f).sum();
        rep.record(sum == 6, || format!("p = {p}: sum e f = {sum}"));
    }
    Ok(rep)
}

/// `|1 - (y3/y2)^n - (x3/x1)^m| / |1 - (y3/y1)^n - (x3/x2)^m|`.
fn rhs_modulus(case: &CaseData, m: u64, n: u64) -> Option<RBall> {
    let x = &case.pairing.x;
    let y = &case.pairing.y;
    let prec = case.prec;
    let one = CBall::from_int(prec, 1);
    let y32 = y.ball(2).div(y.ball(1))?;
    let x31 = x.ball(2).div(x.ball(0))?;
    let num = one.sub(&y32.pow(n)).sub(&x31.pow(m)).abs();
    let den = one.sub(&case.y31_ball().pow(n)).sub(&case.beta_ball().pow(m)).abs();
    num.div(&den)
}

/// For random `n <= n_max(m) + 50`: the right-hand side is below `c2(m)`,
/// and past `n_max(m)` the left-hand side already exceeds it.
pub fn table_sample(case: &BuiltCase, samples: usize, seed: u64) -> Result<OracleReport> {
    let data = &case.data;
    let table = c2_table(data)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = OracleReport::new(&format!("table-sample case {}", case.spec.id.label()));
    for BoundTableRow { m, c2, n_max } in &table {
        let log_c2 = RBall::exact(c2.upper()).ln().expect("c2 > 0");
        for _ in 0..samples {
            let n = rng.gen_range(1..=n_max + 50);
            let rhs = rhs_modulus(data, *m, n);
            let below = rhs.as_ref().is_some_and(|r| r.upper() <= c2.lower());
            rep.record(below, || format!("m = {m}, n = {n}: rhs modulus not below c2"));
            if n > *n_max {
                let lhs = data.ly().mul(&RBall::from_int(data.prec, n as i64));
                let rhs = log_c2.add(&data.lx().mul_int(*m as i64));
                rep.record(rhs.lt(&lhs), || format!("m = {m}, n = {n}: n log|y1/y2| not above the ceiling"));
            }
        }
    }
    Ok(rep)
}

/// Ball and exact routes agree on every residual pair, and the exact
/// determinant embedded through `theta` lands in the ball.
pub fn ball_vs_exact(case: &BuiltCase) -> Result<OracleReport> {
    let data = &case.data;
    let table = c2_table(data)?;
    let pairs = residual_set(data, &table);
    let mut rep = OracleReport::new(&format!("ball-vs-exact case {}", case.spec.id.label()));
    for (m, n) in pairs {
        let ball = ball_check(&data.pairing, m, n, DEFAULT_PRECISION, DEFAULT_PRECISION * 4)?;
        let exact = exact_norm_check(&case.splitting, m, n)?;
        let theta = case.splitting.theta.refine(ball.precision)?;
        let embedded = exact.delta.eval_ball(theta.value());
        let agree = ball.nonzero == (exact.norm != 0) && embedded.overlaps(&ball.ball);
        rep.record(agree, || format!("(m, n) = ({m}, {n})"));
        // |delta|^2 = norm
        let sq = ball.ball.abs().sqr();
        let norm_ok = sq.contains(&Float::with_val(ball.precision * 2, &exact.norm));
        rep.record(norm_ok, || format!("(m, n) = ({m}, {n}): |ball|^2 misses the exact norm"));
    }
    Ok(rep)
}

/// A random monic irreducible quadratic or cubic with small coefficients.
pub fn random_irreducible(rng: &mut impl Rng) -> QPoly {
    loop {
        let deg = rng.gen_range(2..=3usize);
        let mut c: Vec<i64> = (0..deg).map(|_| rng.gen_range(-9..=9)).collect();
        c.push(1);
        if c[0] == 0 {
            continue;
        }
        if is_irreducible_small(&c) {
            return QPoly::from_ints(&c);
        }
    }
}

/// Monic of degree 2 or 3: irreducible over Q iff no integer root.
fn is_irreducible_small(c: &[i64]) -> bool {
    let c0 = c[0].unsigned_abs() as i64;
    !(1..=c0).filter(|d| c0 % d == 0).any(|d| {
        [d, -d].iter().any(|&r| {
            let v = c.iter().rev().fold(Integer::new(), |acc, &ci| acc * r + ci);
            v == 0
        })
    })
}

/// A random conjugate of a random small algebraic integer.
pub fn random_algebraic(rng: &mut impl Rng) -> Result<AlgebraicNumber> {
    let f = random_irreducible(rng);
    let roots = isolate_roots(&f, 128)?;
    let index = rng.gen_range(0..roots.len());
    AlgebraicNumber::with_embeddings(&f, roots, index)
}

/// `h(a^k) = k h(a)`, `h(1/a) = h(a)`, `h(ab) <= h(a) + h(b)` on random inputs.
pub fn height_laws(trials: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = OracleReport::new("height-laws");
    for t in 0..trials {
        let a = random_algebraic(&mut rng)?;
        let b = random_algebraic(&mut rng)?;
        let k = rng.gen_range(2..=3u32);
        let ha = a.height()?;
        let hk = a.pow(k)?.height()?;
        let scaled = ha.ball().mul_int(k as i64);
        rep.record(hk.ball().overlaps(&scaled), || format!("trial {t}: h(a^{k}) != {k} h(a) for a = {a}"));
        let hi = a.inverse()?.height()?;
        rep.record(hi.ball().overlaps(ha.ball()), || format!("trial {t}: h(1/a) != h(a) for a = {a}"));
        let hab = a.mul(&b)?.height()?;
        let sum = ha.ball().add(b.height()?.ball());
        rep.record(hab.lower() <= sum.upper(), || format!("trial {t}: h(ab) > h(a) + h(b) for a = {a}, b = {b}"));
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_irreducibility() {
        assert!(is_irreducible_small(&[-2, 0, 1]));
        assert!(!is_irreducible_small(&[-4, 0, 1]));
        assert!(!is_irreducible_small(&[-6, 11, -6, 1]));
        assert!(is_irreducible_small(&[-2, 0, 0, 1]));
    }

    #[test]
    fn a_few_height_laws() {
        let rep = height_laws(5, 7).unwrap();
        assert!(rep.ok(), "{rep}");
    }
}
