//! Polynomials over prime fields and their extensions: distinct-degree
//! factorization, irreducibility certificates and root finding.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use crate::poly::QPoly;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_between(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).filter(|&n| is_prime(n)).collect()
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

/// Reduce a rational modulo `p`; `None` if `p` divides the denominator.
pub fn reduce_rational(x: &Rational, p: u64) -> Option<u64> {
    let pi = Integer::from(p);
    let d = Integer::from(x.denom() % &pi).to_u64().unwrap();
    if d == 0 {
        return None;
    }
    let mut n = Integer::from(x.numer() % &pi);
    if n < 0 {
        n += &pi;
    }
    let n = n.to_u64().unwrap();
    Some(mulmod(n, inv_mod(d, p), p))
}

/// Polynomial over `F_p`, ascending coefficients, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    c: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, c: Vec<u64>) -> Self {
        let mut f = FpPoly {
            p,
            c: c.into_iter().map(|v| v % p).collect(),
        };
        f.trim();
        f
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        FpPoly::new(p, vec![1])
    }

    pub fn x(p: u64) -> Self {
        FpPoly::new(p, vec![0, 1])
    }

    pub fn constant(p: u64, v: u64) -> Self {
        FpPoly::new(p, vec![v])
    }

    pub fn from_qpoly(f: &QPoly, p: u64) -> Option<Self> {
        let c = f
            .coeffs()
            .iter()
            .map(|a| reduce_rational(a, p))
            .collect::<Option<Vec<_>>>()?;
        Some(FpPoly::new(p, c))
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.c.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    pub fn add(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n).map(|k| (self.coeff(k) + o.coeff(k)) % self.p).collect(),
        )
    }

    pub fn sub(&self, o: &FpPoly) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        FpPoly::new(
            self.p,
            (0..n)
                .map(|k| (self.coeff(k) + self.p - o.coeff(k)) % self.p)
                .collect(),
        )
    }

    pub fn scale(&self, k: u64) -> FpPoly {
        FpPoly::new(self.p, self.c.iter().map(|&a| mulmod(a, k, self.p)).collect())
    }

    pub fn mul(&self, o: &FpPoly) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero(self.p);
        }
        let p = self.p;
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = (out[i + j] + mulmod(a, b, p)) % p;
            }
        }
        FpPoly::new(p, out)
    }

    pub fn monic(&self) -> FpPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.lead(), self.p))
    }

    pub fn divrem(&self, d: &FpPoly) -> (FpPoly, FpPoly) {
        assert!(!d.is_zero(), "division by zero polynomial mod p");
        let p = self.p;
        if self.c.len() < d.c.len() {
            return (FpPoly::zero(p), self.clone());
        }
        let dd = d.deg();
        let inv = inv_mod(d.lead(), p);
        let mut r = self.c.clone();
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = mulmod(r[k + dd], inv, p);
            if top != 0 {
                for (i, &di) in d.c.iter().enumerate() {
                    r[k + i] = (r[k + i] + p - mulmod(top, di, p)) % p;
                }
            }
            q[k] = top;
        }
        r.truncate(dd);
        (FpPoly::new(p, q), FpPoly::new(p, r))
    }

    pub fn rem(&self, d: &FpPoly) -> FpPoly {
        self.divrem(d).1
    }

    pub fn gcd(&self, o: &FpPoly) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> FpPoly {
        FpPoly::new(
            self.p,
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &a)| mulmod(a, k as u64 % self.p, self.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0;
        for &a in self.c.iter().rev() {
            acc = (mulmod(acc, x, self.p) + a) % self.p;
        }
        acc
    }

    pub fn mul_mod(&self, o: &FpPoly, m: &FpPoly) -> FpPoly {
        self.mul(o).rem(m)
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, e: &Integer, m: &FpPoly) -> FpPoly {
        let mut result = FpPoly::one(self.p).rem(m);
        let base = self.rem(m);
        for i in (0..e.significant_bits()).rev() {
            result = result.mul_mod(&result, m);
            if e.get_bit(i) {
                result = result.mul_mod(&base, m);
            }
        }
        result
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).deg() == 0
    }

    /// Degrees of the irreducible factors of a squarefree polynomial, sorted.
    pub fn factor_degrees(&self) -> Vec<usize> {
        let p = self.p;
        let mut f = self.monic();
        let mut out = Vec::new();
        let x = FpPoly::x(p);
        let mut h = x.clone();
        let pi = Integer::from(p);
        let mut d = 0;
        while f.deg() > 0 {
            d += 1;
            if 2 * d > f.deg() {
                out.push(f.deg());
                break;
            }
            h = h.pow_mod(&pi, &f);
            let g = f.gcd(&h.sub(&x));
            if g.deg() > 0 {
                for _ in 0..g.deg() / d {
                    out.push(d);
                }
                f = f.divrem(&g).0;
                h = h.rem(&f);
            }
        }
        out.sort_unstable();
        out
    }

    pub fn is_irreducible(&self) -> bool {
        self.deg() > 0 && self.is_squarefree() && self.factor_degrees().len() == 1
    }

    /// Distinct roots in `F_p`, ascending.
    pub fn roots(&self) -> Vec<u64> {
        let mut r: Vec<u64> = (0..self.p).filter(|&x| self.eval(x) == 0).collect();
        r.sort_unstable();
        r
    }
}

/// Irreducibility over Q certified by factor degree patterns modulo primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityCertificate {
    /// `(p, factor degrees of f mod p)` for each prime used.
    pub patterns: Vec<(u64, Vec<usize>)>,
}

fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut reach = vec![false; n + 1];
    reach[0] = true;
    for &d in parts {
        for s in (d..=n).rev() {
            if reach[s - d] {
                reach[s] = true;
            }
        }
    }
    reach
}

/// Search primes up to `limit` for degree patterns excluding every proper
/// factor degree. `f` must have integer coefficients.
pub fn certify_irreducible(f: &QPoly, limit: u64) -> Option<IrreducibilityCertificate> {
    let n = f.deg();
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(IrreducibilityCertificate { patterns: vec![] });
    }
    let prim = QPoly::from_integers(&f.primitive_integer());
    let mut possible = vec![true; n + 1];
    let mut patterns = Vec::new();
    for p in primes_between(2, limit) {
        let fp = match FpPoly::from_qpoly(&prim, p) {
            Some(fp) if fp.deg() == n && fp.is_squarefree() => fp,
            _ => continue,
        };
        let degs = fp.factor_degrees();
        let reach = subset_sums(&degs, n);
        let mut useful = false;
        for k in 1..n {
            if possible[k] && !reach[k] {
                possible[k] = false;
                useful = true;
            }
        }
        if useful {
            patterns.push((p, degs));
        }
        if (1..n).all(|k| !possible[k]) {
            return Some(IrreducibilityCertificate { patterns });
        }
    }
    None
}

impl IrreducibilityCertificate {
    /// Recompute every pattern and confirm that together they exclude all
    /// proper factor degrees.
    pub fn verify(&self, f: &QPoly) -> bool {
        let n = f.deg();
        if n <= 1 {
            return n == 1;
        }
        let prim = QPoly::from_integers(&f.primitive_integer());
        let mut possible = vec![true; n + 1];
        for (p, degs) in &self.patterns {
            let fp = match FpPoly::from_qpoly(&prim, *p) {
                Some(fp) if fp.deg() == n && fp.is_squarefree() => fp,
                _ => return false,
            };
            if fp.factor_degrees() != *degs {
                return false;
            }
            let reach = subset_sums(degs, n);
            for (k, ok) in possible.iter_mut().enumerate().take(n).skip(1) {
                *ok &= reach[k];
            }
        }
        (1..n).all(|k| !possible[k])
    }
}

/// Finite field `F_p[z]/(phi)`; `phi` monic irreducible of degree `f >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fq {
    p: u64,
    phi: FpPoly,
}

/// Element of `Fq` as a reduced polynomial in `z`.
pub type FqElem = FpPoly;

impl Fq {
    pub fn new(phi: FpPoly) -> Self {
        assert!(phi.deg() >= 1 && phi.lead() == 1);
        Fq { p: phi.p(), phi }
    }

    pub fn prime_field(p: u64) -> Self {
        Fq::new(FpPoly::x(p))
    }

    /// Lexicographically smallest monic irreducible of degree `f` over `F_p`.
    pub fn conway_like(p: u64, f: usize) -> Self {
        if f == 1 {
            return Fq::prime_field(p);
        }
        let total = p.pow(f as u32);
        for idx in 0..total {
            let mut c = Vec::with_capacity(f + 1);
            let mut v = idx;
            for _ in 0..f {
                c.push(v % p);
                v /= p;
            }
            c.push(1);
            let cand = FpPoly::new(p, c);
            if cand.is_irreducible() {
                return Fq::new(cand);
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.phi.deg()
    }

    pub fn modulus(&self) -> &FpPoly {
        &self.phi
    }

    pub fn order(&self) -> Integer {
        Integer::from(Integer::u_pow_u(self.p as u32, self.degree() as u32))
    }

    pub fn zero(&self) -> FqElem {
        FpPoly::zero(self.p)
    }

    pub fn one(&self) -> FqElem {
        FpPoly::one(self.p)
    }

    pub fn elem(&self, c: Vec<u64>) -> FqElem {
        FpPoly::new(self.p, c).rem(&self.phi)
    }

    pub fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.add(b)
    }

    pub fn sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.sub(b)
    }

    pub fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        a.mul_mod(b, &self.phi)
    }

    pub fn pow(&self, a: &FqElem, e: &Integer) -> FqElem {
        a.pow_mod(e, &self.phi)
    }

    pub fn inv(&self, a: &FqElem) -> Option<FqElem> {
        if a.is_zero() {
            return None;
        }
        let e = self.order() - 2u32;
        Some(self.pow(a, &e))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: &FqElem) -> Option<Integer> {
        if a.is_zero() {
            return None;
        }
        let n = self.order() - 1u32;
        let mut m = n.clone();
        for (q, _) in factor_integer(&n) {
            while Integer::from(&m % &q) == 0 {
                let cand = Integer::from(&m / &q);
                if self.pow(a, &cand) == self.one() {
                    m = cand;
                } else {
                    break;
                }
            }
        }
        Some(m)
    }

    /// Enumerate all elements (small fields only).
    pub fn elements(&self) -> Vec<FqElem> {
        let f = self.degree();
        let total = self.p.pow(f as u32);
        (0..total)
            .map(|idx| {
                let mut c = Vec::with_capacity(f);
                let mut v = idx;
                for _ in 0..f {
                    c.push(v % self.p);
                    v /= self.p;
                }
                FpPoly::new(self.p, c)
            })
            .collect()
    }
}

/// Trial-division factorization of a positive integer.
pub fn factor_integer(n: &Integer) -> Vec<(Integer, u32)> {
    let mut out = Vec::new();
    let mut m = n.clone();
    let mut d = Integer::from(2);
    while Integer::from(&d * &d) <= m {
        let mut k = 0;
        while Integer::from(&m % &d) == 0 {
            m /= &d;
            k += 1;
        }
        if k > 0 {
            out.push((d.clone(), k));
        }
        d += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

/// Polynomial over an `Fq`, ascending, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqPoly {
    c: Vec<FqElem>,
}

impl FqPoly {
    pub fn new(c: Vec<FqElem>) -> Self {
        let mut f = FqPoly { c };
        while matches!(f.c.last(), Some(v) if v.is_zero()) {
            f.c.pop();
        }
        f
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn deg(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn coeff(&self, k: usize, fq: &Fq) -> FqElem {
        self.c.get(k).cloned().unwrap_or_else(|| fq.zero())
    }

    pub fn add(&self, o: &FqPoly, fq: &Fq) -> FqPoly {
        let n = self.c.len().max(o.c.len());
        FqPoly::new((0..n).map(|k| fq.add(&self.coeff(k, fq), &o.coeff(k, fq))).collect())
    }

    pub fn sub(&self, o: &FqPoly, fq: &Fq) -> FqPoly {
        let n = self.c.len().max(o.c.len());
        FqPoly::new((0..n).map(|k| fq.sub(&self.coeff(k, fq), &o.coeff(k, fq))).collect())
    }

    pub fn mul(&self, o: &FqPoly, fq: &Fq) -> FqPoly {
        if self.is_zero() || o.is_zero() {
            return FqPoly::new(vec![]);
        }
        let mut out = vec![fq.zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] = fq.add(&out[i + j], &fq.mul(a, b));
            }
        }
        FqPoly::new(out)
    }

    pub fn divrem(&self, d: &FqPoly, fq: &Fq) -> (FqPoly, FqPoly) {
        assert!(!d.is_zero());
        if self.c.len() < d.c.len() {
            return (FqPoly::new(vec![]), self.clone());
        }
        let dd = d.deg();
        let inv = fq.inv(d.c.last().unwrap()).expect("nonzero lead");
        let mut r = self.c.clone();
        let mut q = vec![fq.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = fq.mul(&r[k + dd], &inv);
            if !top.is_zero() {
                for (i, di) in d.c.iter().enumerate() {
                    r[k + i] = fq.sub(&r[k + i], &fq.mul(&top, di));
                }
            }
            q[k] = top;
        }
        r.truncate(dd);
        (FqPoly::new(q), FqPoly::new(r))
    }

    pub fn monic(&self, fq: &Fq) -> FqPoly {
        match self.c.last() {
            None => self.clone(),
            Some(l) => {
                let inv = fq.inv(l).unwrap();
                FqPoly::new(self.c.iter().map(|a| fq.mul(a, &inv)).collect())
            }
        }
    }

    pub fn gcd(&self, o: &FqPoly, fq: &Fq) -> FqPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b, fq).1;
            a = b;
            b = r;
        }
        a.monic(fq)
    }

    pub fn derivative(&self, fq: &Fq) -> FqPoly {
        FqPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a.scale(k as u64 % fq.p))
                .collect(),
        )
    }

    pub fn eval(&self, x: &FqElem, fq: &Fq) -> FqElem {
        let mut acc = fq.zero();
        for a in self.c.iter().rev() {
            acc = fq.add(&fq.mul(&acc, x), a);
        }
        acc
    }

    fn pow_mod(&self, e: &Integer, m: &FqPoly, fq: &Fq) -> FqPoly {
        let mut result = FqPoly::new(vec![fq.one()]).divrem(m, fq).1;
        let base = self.divrem(m, fq).1;
        for i in (0..e.significant_bits()).rev() {
            result = result.mul(&result, fq).divrem(m, fq).1;
            if e.get_bit(i) {
                result = result.mul(&base, fq).divrem(m, fq).1;
            }
        }
        result
    }

    /// Distinct roots in `Fq`, in a canonical order.
    pub fn roots(&self, fq: &Fq) -> Vec<FqElem> {
        if self.deg() == 0 {
            return vec![];
        }
        let g = self.monic(fq);
        let x = FqPoly::new(vec![fq.zero(), fq.one()]);
        let xq = x.pow_mod(&fq.order(), &g, fq);
        let h = g.gcd(&xq.sub(&x, fq), fq);
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ fq.p);
        split_linear(&h, fq, &mut rng, &mut out);
        out.sort_by(|a, b| a.coeffs().cmp(b.coeffs()));
        out
    }
}

/// Split a product of distinct linear factors.
fn split_linear(h: &FqPoly, fq: &Fq, rng: &mut ChaCha8Rng, out: &mut Vec<FqElem>) {
    match h.deg() {
        0 => {}
        1 => {
            let h = h.monic(fq);
            out.push(fq.sub(&fq.zero(), &h.c[0]));
        }
        _ => {
            let half = (fq.order() - 1u32) / 2u32;
            loop {
                let a: Vec<u64> = (0..fq.degree()).map(|_| rng.gen_range(0..fq.p)).collect();
                let shift = FqPoly::new(vec![fq.elem(a), fq.one()]);
                let w = shift.pow_mod(&half, h, fq);
                let d = h.gcd(&w.sub(&FqPoly::new(vec![fq.one()]), fq), fq);
                if d.deg() > 0 && d.deg() < h.deg() {
                    let rest = h.divrem(&d, fq).0;
                    split_linear(&d, fq, rng, out);
                    split_linear(&rest, fq, rng, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_degrees_match_known_splittings() {
        // x^3 - 2 over F_7: 2 is not a cube mod 7, so irreducible
        let f = FpPoly::new(7, vec![5, 0, 0, 1]);
        assert_eq!(f.factor_degrees(), vec![3]);
        // x^4 - 1 over F_5 splits completely
        let g = FpPoly::new(5, vec![4, 0, 0, 0, 1]);
        assert_eq!(g.factor_degrees(), vec![1, 1, 1, 1]);
        // x^4 + 1 over F_3 is two quadratics
        let h = FpPoly::new(3, vec![1, 0, 0, 0, 1]);
        assert_eq!(h.factor_degrees(), vec![2, 2]);
    }

    #[test]
    fn irreducibility_certificate_for_x4_plus_1_fails() {
        // x^4 + 1 is irreducible over Q but reducible mod every prime
        let f = QPoly::from_ints(&[1, 0, 0, 0, 1]);
        assert!(certify_irreducible(&f, 200).is_none());
        let g = QPoly::from_ints(&[-2, 0, 0, 1]);
        let cert = certify_irreducible(&g, 200).unwrap();
        assert!(cert.verify(&g));
    }

    #[test]
    fn reducible_polynomial_is_never_certified() {
        let f = &QPoly::from_ints(&[1, 1, 1]) * &QPoly::from_ints(&[-2, 0, 0, 1]);
        assert!(certify_irreducible(&f, 300).is_none());
    }

    #[test]
    fn roots_in_extension_field() {
        let fq = Fq::conway_like(11, 2);
        assert_eq!(fq.degree(), 2);
        // x^2 + 1 has no roots in F_11 but two in F_121
        let one = fq.one();
        let f = FqPoly::new(vec![one.clone(), fq.zero(), one]);
        let roots = f.roots(&fq);
        assert_eq!(roots.len(), 2);
        for r in &roots {
            assert!(f.eval(r, &fq).is_zero());
        }
    }

    #[test]
    fn multiplicative_order_divides_group_order() {
        let fq = Fq::conway_like(13, 3);
        let n = fq.order() - 1u32;
        for e in fq.elements().into_iter().skip(1).take(50) {
            let o = fq.mult_order(&e).unwrap();
            assert_eq!(Integer::from(&n % &o), 0);
            assert_eq!(fq.pow(&e, &o), fq.one());
        }
    }

    #[test]
    fn reduce_rational_inverts_denominator() {
        let x = Rational::from((3, 4));
        let r = reduce_rational(&x, 7).unwrap();
        assert_eq!(r * 4 % 7, 3);
        assert_eq!(reduce_rational(&Rational::from((1, 7)), 7), None);
    }
}
