//! Reduced binary quadratic forms, the j-function at CM points and Hilbert
//! class polynomials.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::sync::{Mutex, OnceLock};

use rayon::prelude::*;
use rug::Integer;

use crate::ball::{CBall, Mag, RBall};
use crate::error::{Error, Result};
use crate::poly::QPoly;
use crate::roots::{poly_from_roots, round_coefficients};

pub const DEFAULT_PRECISION: u32 = 256;
pub const PRECISION_CAP: u32 = 4096;

/// Discriminant of a positive definite binary quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Discriminant(i64);

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value >= 0 || !matches!(value.rem_euclid(4), 0 | 1) {
            return Err(Error::InvalidDiscriminant(value));
        }
        Ok(Discriminant(value))
    }

    pub fn value(self) -> i64 {
        self.0
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadraticForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }

    /// The CM point `(-b + sqrt(disc)) / (2a)` as a complex ball.
    pub fn cm_point(&self, prec: u32) -> CBall {
        let d = RBall::from_int(prec, -self.discriminant()).sqrt().expect("positive");
        let two_a = RBall::from_int(prec, 2 * self.a);
        let re = RBall::from_int(prec, -self.b).div(&two_a).unwrap();
        let im = d.div(&two_a).unwrap();
        CBall::from_parts(&re, &im)
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// One reduced primitive form per class, ordered by `a`, then `|b|`, with
/// `b > 0` ahead of `-b`.
pub fn reduced_forms(disc: Discriminant) -> Vec<QuadraticForm> {
    let d = disc.value();
    let mut out = Vec::new();
    let mut a = 1i64;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let f = QuadraticForm { a, b, c: num / (4 * a) };
            if f.is_reduced() && f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort_by_key(|f| (f.a, f.b.abs(), -f.b));
    out
}

pub fn class_number(disc: Discriminant) -> usize {
    reduced_forms(disc).len()
}

fn sigma3(n: usize) -> Integer {
    let mut s = Integer::new();
    for d in 1..=n {
        if n.is_multiple_of(d) {
            s += Integer::from(Integer::u_pow_u(d as u32, 3));
        }
    }
    s
}

fn series_mul(a: &[Integer], b: &[Integer], n: usize) -> Vec<Integer> {
    let mut out = vec![Integer::new(); n];
    for (i, ai) in a.iter().enumerate().take(n) {
        if *ai == 0 {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(n - i) {
            out[i + j] += Integer::from(ai * bj);
        }
    }
    out
}

/// Coefficients `a_0..a_{n-1}` of `q j(q) = E4(q)^3 / prod (1 - q^k)^24`,
/// so that `a_0 = 1`, `a_1 = 744` and `a_{k+1}` is the coefficient of `q^k`
/// in `j`.
fn qj_coefficients(n: usize) -> Vec<Integer> {
    let mut e4 = vec![Integer::new(); n];
    e4[0] = Integer::from(1);
    for (k, c) in e4.iter_mut().enumerate().skip(1) {
        *c = sigma3(k) * 240u32;
    }
    let e4sq = series_mul(&e4, &e4, n);
    let e4cube = series_mul(&e4sq, &e4, n);
    // Euler's pentagonal series for prod (1 - q^k)
    let mut eta = vec![Integer::new(); n];
    let mut k = 0i64;
    loop {
        let mut any = false;
        for &kk in &[k, -k] {
            let idx = (kk * (3 * kk - 1) / 2) as usize;
            if idx < n {
                eta[idx] = Integer::from(if kk % 2 == 0 { 1 } else { -1 });
                any = true;
            }
            if k == 0 {
                break;
            }
        }
        if !any {
            break;
        }
        k += 1;
    }
    let mut p = eta.clone();
    let e2 = series_mul(&p, &p, n);
    let e4s = series_mul(&e2, &e2, n);
    let e8 = series_mul(&e4s, &e4s, n);
    let e16 = series_mul(&e8, &e8, n);
    p = series_mul(&e16, &e8, n);
    // invert p (constant term 1)
    let mut inv = vec![Integer::new(); n];
    inv[0] = Integer::from(1);
    for m in 1..n {
        let mut s = Integer::new();
        for i in 1..=m {
            if p[i] != 0 {
                s += Integer::from(&p[i] * &inv[m - i]);
            }
        }
        inv[m] = -s;
    }
    series_mul(&e4cube, &inv, n)
}

static J_COEFFS: OnceLock<Mutex<Vec<Integer>>> = OnceLock::new();

/// Coefficients `c_1..c_n` of `j = 1/q + 744 + sum c_k q^k`.
pub fn j_coefficients(n: usize) -> Vec<Integer> {
    let cache = J_COEFFS.get_or_init(|| Mutex::new(Vec::new()));
    let mut guard = cache.lock().unwrap();
    if guard.len() < n + 2 {
        let want = (n + 2).max(2 * guard.len()).max(64);
        *guard = qj_coefficients(want);
    }
    guard[2..n + 2].to_vec()
}

/// Bound on `|sum_{k > n} c_k q^k|` from `c_k <= exp(4 pi sqrt k)` and
/// `|q| = exp(-s)`; `None` when the geometric decay has not started.
fn j_tail_bound(n: usize, s: &RBall) -> Option<Mag> {
    let prec = s.prec();
    let pi = RBall::pi(prec);
    let k1 = RBall::from_int(prec, n as i64 + 1);
    let sqrt_k1 = k1.sqrt().unwrap();
    // delta = s - 2 pi / sqrt(n+1)
    let delta = s.sub(&pi.mul_int(2).div(&sqrt_k1).unwrap());
    if !delta.is_positive() {
        return None;
    }
    let f = pi.mul_int(4).mul(&sqrt_k1).sub(&s.mul(&k1));
    let num = f.exp();
    let den = RBall::from_int(prec, 1).sub(&delta.neg().exp());
    let t = num.div(&den)?;
    Some(Mag::from_abs(&t.upper()))
}

/// Certified `j(tau)` for the CM point of a form.
///
/// The series length is chosen so that the tail contributes at most
/// `2^-prec` absolutely.
pub fn eval_j(form: &QuadraticForm, prec: u32) -> Result<CBall> {
    let wp = prec + 32;
    let tau = form.cm_point(wp);
    let pi = RBall::pi(wp);
    let s = pi.mul_int(2).mul(&tau.im());
    // q = exp(2 pi i tau)
    let two_pi_i_tau = CBall::from_parts(&s.neg(), &pi.mul_int(2).mul(&tau.re()));
    let q = two_pi_i_tau.exp();
    let target = Mag::pow2(-(prec as i32));
    let mut n = 8usize;
    let tail = loop {
        if let Some(t) = j_tail_bound(n, &s) {
            if t <= target {
                break t;
            }
        }
        n += 8;
        if n > 20_000 {
            return Err(Error::exhausted(
                crate::error::Stage::Quadforms,
                prec,
                "q-series tail bound cannot reach the requested radius",
            ));
        }
    };
    let c = j_coefficients(n);
    let mut acc = CBall::zero(wp);
    for ck in c.iter().rev() {
        acc = acc.add(&CBall::from_integer(wp, ck)).mul(&q);
    }
    let inv_q = q
        .recip()
        .ok_or_else(|| Error::exhausted(crate::error::Stage::Quadforms, prec, "q ball contains zero"))?;
    let j = acc.add(&CBall::from_int(wp, 744)).add(&inv_q).add_error(&tail);
    Ok(j)
}

/// Monic class polynomial with its certified roots.
#[derive(Clone, Debug)]
pub struct ClassPolynomial {
    pub disc: Discriminant,
    pub forms: Vec<QuadraticForm>,
    /// Ascending coefficients, leading 1.
    pub coeffs: Vec<Integer>,
    /// `j` at the CM point of each form, in form order.
    pub roots: Vec<CBall>,
    pub precision: u32,
}

impl ClassPolynomial {
    pub fn poly(&self) -> QPoly {
        QPoly::from_integers(&self.coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Index of the unique real root of largest modulus.
    pub fn dominant_root(&self) -> Option<usize> {
        let real: Vec<usize> = (0..self.roots.len())
            .filter(|&i| crate::roots::root_is_real(i, &self.roots))
            .collect();
        real.into_iter().find(|&i| {
            let lo = self.roots[i].abs_lower();
            self.roots
                .iter()
                .enumerate()
                .all(|(j, r)| j == i || r.abs_upper() < lo)
        })
    }

    /// `H(root)` contains zero for every root ball.
    pub fn roots_vanish(&self) -> bool {
        let p = self.poly();
        self.roots.iter().all(|r| p.eval_ball(r).contains_zero())
    }

    /// Cache line `disc: c0,c1,...,ch`.
    pub fn cache_line(&self) -> String {
        let cs: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        format!("{}: {}", self.disc, cs.join(","))
    }
}

/// Hilbert class polynomial at one fixed precision.
pub fn hilbert_class_poly_at(disc: Discriminant, prec: u32) -> Result<ClassPolynomial> {
    let forms = reduced_forms(disc);
    let roots = forms
        .par_iter()
        .map(|f| eval_j(f, prec))
        .collect::<Result<Vec<_>>>()?;
    let prod = poly_from_roots(&roots);
    let mut coeffs = Vec::with_capacity(prod.len());
    for (index, c) in prod.iter().enumerate() {
        match round_coefficients(std::slice::from_ref(c)) {
            Some(mut v) => coeffs.push(v.pop().unwrap()),
            None => {
                return Err(Error::AmbiguousRounding {
                    disc: disc.value(),
                    index,
                    bits: prec,
                })
            }
        }
    }
    Ok(ClassPolynomial {
        disc,
        forms,
        coeffs,
        roots,
        precision: prec,
    })
}

/// Hilbert class polynomial, doubling precision from `prec` up to `cap`
/// until every coefficient ball isolates a single integer.
pub fn hilbert_class_poly_with(disc: Discriminant, prec: u32, cap: u32) -> Result<ClassPolynomial> {
    let mut p = prec;
    loop {
        match hilbert_class_poly_at(disc, p) {
            Ok(h) => return Ok(h),
            Err(e) if e.is_precision() && p < cap => {
                log::debug!("class polynomial {disc}: {e}; retrying at {} bits", 2 * p);
                p *= 2;
            }
            Err(e) => return Err(e),
        }
    }
}

pub fn hilbert_class_poly(disc: Discriminant) -> Result<ClassPolynomial> {
    hilbert_class_poly_with(disc, DEFAULT_PRECISION, PRECISION_CAP)
}

/// Recompute at twice the precision and compare the integers.
pub fn rounding_is_stable(h: &ClassPolynomial) -> Result<bool> {
    let again = hilbert_class_poly_at(h.disc, 2 * h.precision)?;
    Ok(again.coeffs == h.coeffs)
}

/// Parse a class polynomial cache file.
pub fn parse_cache(text: &str) -> Result<BTreeMap<i64, Vec<Integer>>> {
    let mut out = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (d, rest) = line
            .split_once(':')
            .ok_or_else(|| Error::Cache(format!("line {}: missing ':'", lineno + 1)))?;
        let d: i64 = d
            .trim()
            .parse()
            .map_err(|_| Error::Cache(format!("line {}: bad discriminant", lineno + 1)))?;
        let coeffs = rest
            .split(',')
            .map(|c| {
                c.trim()
                    .parse::<Integer>()
                    .map_err(|_| Error::Cache(format!("line {}: bad coefficient {c:?}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        out.insert(d, coeffs);
    }
    Ok(out)
}

pub const CACHE_FILE: &str = "class_polynomials.txt";

/// Compute the class polynomial and reconcile it with the on-disk cache.
///
/// The cache never replaces the computation; a mismatching entry is an
/// error and a missing one is appended.
pub fn hilbert_class_poly_cached(
    disc: Discriminant,
    prec: u32,
    cap: u32,
    cache_dir: Option<&Path>,
) -> Result<ClassPolynomial> {
    let h = hilbert_class_poly_with(disc, prec, cap)?;
    let Some(dir) = cache_dir else {
        return Ok(h);
    };
    let path = dir.join(CACHE_FILE);
    let mut entries = if path.exists() {
        parse_cache(&std::fs::read_to_string(&path)?)?
    } else {
        BTreeMap::new()
    };
    match entries.get(&disc.value()) {
        Some(cached) if *cached != h.coeffs => {
            return Err(Error::Cache(format!(
                "cached class polynomial for {disc} disagrees with a fresh computation"
            )));
        }
        Some(_) => {}
        None => {
            entries.insert(disc.value(), h.coeffs.clone());
            std::fs::create_dir_all(dir)?;
            let body: String = entries
                .iter()
                .map(|(d, cs)| {
                    let cs: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
                    format!("{d}: {}\n", cs.join(","))
                })
                .collect();
            std::fs::write(&path, body)?;
        }
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn rejects_invalid_discriminants() {
        assert!(Discriminant::new(5).is_err());
        assert!(Discriminant::new(-5).is_err());
        assert!(Discriminant::new(0).is_err());
        assert!(Discriminant::new(-4).is_ok());
    }

    #[test]
    fn forms_of_minus_23() {
        let f = reduced_forms(disc(-23));
        let abc: Vec<_> = f.iter().map(|f| (f.a, f.b, f.c)).collect();
        assert_eq!(abc, vec![(1, 1, 6), (2, 1, 3), (2, -1, 3)]);
    }

    #[test]
    fn forms_of_minus_3_and_minus_4() {
        assert_eq!(reduced_forms(disc(-3)), vec![QuadraticForm { a: 1, b: 1, c: 1 }]);
        assert_eq!(reduced_forms(disc(-4)), vec![QuadraticForm { a: 1, b: 0, c: 1 }]);
    }

    #[test]
    fn non_primitive_forms_are_excluded() {
        // (2,0,2) has discriminant -16 but is not primitive
        let f = reduced_forms(disc(-16));
        assert!(f.iter().all(|f| f.is_primitive()));
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn j_coefficients_prefix() {
        let c = j_coefficients(3);
        assert_eq!(c[0], 196884);
        assert_eq!(c[1], 21493760);
        assert_eq!(c[2], 864299970);
    }

    #[test]
    fn j_at_i_and_rho() {
        let ji = eval_j(&QuadraticForm { a: 1, b: 0, c: 1 }, 128).unwrap();
        assert!(ji.overlaps(&CBall::from_int(128, 1728)));
        let jr = eval_j(&QuadraticForm { a: 1, b: 1, c: 1 }, 128).unwrap();
        assert!(jr.overlaps(&CBall::zero(128)));
        assert!(jr.rad().as_float() < &Float::with_val(32, 1e-30));
    }

    #[test]
    fn trivial_class_polynomials() {
        assert_eq!(hilbert_class_poly(disc(-3)).unwrap().coeffs, vec![Integer::new(), Integer::from(1)]);
        assert_eq!(
            hilbert_class_poly(disc(-4)).unwrap().coeffs,
            vec![Integer::from(-1728), Integer::from(1)]
        );
    }

    #[test]
    fn cache_round_trip_and_mismatch() {
        let dir = tempfile::tempdir().unwrap();
        let h = hilbert_class_poly_cached(disc(-7), 128, 1024, Some(dir.path())).unwrap();
        let text = std::fs::read_to_string(dir.path().join(CACHE_FILE)).unwrap();
        assert_eq!(text.trim(), h.cache_line());
        std::fs::write(dir.path().join(CACHE_FILE), "-7: 1,2,1\n").unwrap();
        assert!(matches!(
            hilbert_class_poly_cached(disc(-7), 128, 1024, Some(dir.path())),
            Err(Error::Cache(_))
        ));
    }
}
