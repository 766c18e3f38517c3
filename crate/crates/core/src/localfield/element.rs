//! Finite-precision arithmetic in tamely ramified extensions of `Q_p`.
//!
//! A field is `K(pi)` with `K` unramified of degree `f` (residue field
//! `F_p[z]/(phi)`) and `pi^e = p * u` for a unit `u` of `K`. Elements are
//! stored on the basis `pi^i z^j` (`i < e`, `j < f`) with coordinates
//! reduced mod `p^N`, together with an absolute precision counted in
//! powers of `pi`.

use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::modp::{Fq, FqElem, FqPoly, FpPoly};
use crate::poly::QPoly;

fn modp_reduce(x: Integer, m: &Integer) -> Integer {
    let r = x % m;
    if r < 0 {
        r + m
    } else {
        r
    }
}

fn vp(x: &Integer, p: u32) -> u32 {
    let mut v = 0;
    let mut y = x.clone();
    while y != 0 && y.is_divisible_u(p) {
        y /= p;
        v += 1;
    }
    v
}

/// An element known modulo `pi^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalElement {
    c: Vec<Integer>,
    prec: i64,
}

impl LocalElement {
    pub fn coords(&self) -> &[Integer] {
        &self.c
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }
}

#[derive(Clone, Debug)]
pub struct LocalField {
    p: u64,
    f: usize,
    e: usize,
    u_class: usize,
    digits: u32,
    pn: Integer,
    phi: Vec<Integer>,
    u: Vec<Integer>,
    u_inv: Vec<Integer>,
    residue: Fq,
}

impl LocalField {
    /// `f` is the residue degree, `e` the ramification index (prime to `p`),
    /// `u_class` selects `u = g^u_class` for the least generator `g` of the
    /// residue field's unit group. `prec` is the target precision in powers
    /// of the uniformizer.
    pub fn new(p: u64, f: usize, e: usize, u_class: usize, prec: i64) -> Self {
        let residue = Fq::conway_like(p, f);
        let g = unit_generator(&residue);
        let ures = residue.pow(&g, &Integer::from(u_class));
        Self::build(p, f, e, u_class, prec, residue, &ures)
    }

    fn build(p: u64, f: usize, e: usize, u_class: usize, prec: i64, residue: Fq, ures: &FqElem) -> Self {
        let digits = (prec.max(1) as usize).div_ceil(e) as u32;
        let pn = Integer::from(Integer::u_pow_u(p as u32, digits));
        let phi: Vec<Integer> = residue.modulus().coeffs().iter().map(|&c| Integer::from(c)).collect();
        let mut u: Vec<Integer> = ures.coeffs().iter().map(|&c| Integer::from(c)).collect();
        u.resize(f, Integer::new());
        let mut field = LocalField {
            p,
            f,
            e,
            u_class,
            digits,
            pn,
            phi,
            u: u.clone(),
            u_inv: vec![Integer::new(); f],
            residue,
        };
        field.u_inv = field.ur_inv(&u).expect("u is a unit");
        field
    }

    /// Same field at a different precision.
    pub fn with_precision(&self, prec: i64) -> Self {
        let ures = self.residue.elem(self.u.iter().map(|c| c.to_u64_wrapping() % self.p).collect());
        Self::build(self.p, self.f, self.e, self.u_class, prec, self.residue.clone(), &ures)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn e(&self) -> usize {
        self.e
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn u_class(&self) -> usize {
        self.u_class
    }

    pub fn degree(&self) -> usize {
        self.e * self.f
    }

    /// Maximal absolute precision, in powers of the uniformizer.
    pub fn max_precision(&self) -> i64 {
        (self.e as i64) * self.digits as i64
    }

    pub fn residue_field(&self) -> &Fq {
        &self.residue
    }

    /// Residue-field polynomial defining the unramified part.
    pub fn unramified_modulus(&self) -> &FpPoly {
        self.residue.modulus()
    }

    /// Residue of the unit `u` in `pi^e = p u`.
    pub fn unit_residue(&self) -> FqElem {
        self.residue.elem(self.u.iter().map(|c| Integer::from(c % self.p).to_u64().unwrap()).collect())
    }

    fn insufficient(&self, prec: i64, what: &str) -> Error {
        Error::InsufficientLocalPrecision {
            p: self.p,
            prec,
            what: what.into(),
        }
    }

    // unramified ring Z_p[z]/(phi) mod p^N

    fn ur_mul(&self, a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        let f = self.f;
        let mut prod = vec![Integer::new(); 2 * f - 1];
        for (i, ai) in a.iter().enumerate() {
            if *ai == 0 {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                prod[i + j] += Integer::from(ai * bj);
            }
        }
        for k in (f..prod.len()).rev() {
            let top = std::mem::take(&mut prod[k]);
            if top == 0 {
                continue;
            }
            for j in 0..f {
                prod[k - f + j] -= Integer::from(&top * &self.phi[j]);
            }
        }
        prod.truncate(f);
        prod.into_iter().map(|x| modp_reduce(x, &self.pn)).collect()
    }

    fn ur_add(&self, a: &[Integer], b: &[Integer]) -> Vec<Integer> {
        a.iter()
            .zip(b)
            .map(|(x, y)| modp_reduce(Integer::from(x + y), &self.pn))
            .collect()
    }

    fn ur_inv(&self, a: &[Integer]) -> Option<Vec<Integer>> {
        let res = self.residue.elem(a.iter().map(|c| Integer::from(c % self.p).to_u64().unwrap()).collect());
        let r0 = self.residue.inv(&res)?;
        let mut x: Vec<Integer> = r0.coeffs().iter().map(|&c| Integer::from(c)).collect();
        x.resize(self.f, Integer::new());
        // Newton: x <- x (2 - a x), doubling p-adic digits
        let mut known = 1u32;
        while known < self.digits {
            let ax = self.ur_mul(a, &x);
            let mut two_minus: Vec<Integer> = ax.iter().map(|c| modp_reduce(Integer::from(-c), &self.pn)).collect();
            two_minus[0] += 2;
            x = self.ur_mul(&x, &two_minus);
            known *= 2;
        }
        Some(x)
    }

    fn element(&self, c: Vec<Integer>, prec: i64) -> LocalElement {
        let mut x = LocalElement {
            c,
            prec: prec.min(self.max_precision()),
        };
        self.truncate(&mut x);
        x
    }

    /// Discard digits beyond the known precision.
    fn truncate(&self, x: &mut LocalElement) {
        let e = self.e as i64;
        for i in 0..self.e {
            let k = ((x.prec - i as i64 + e - 1).div_euclid(e)).clamp(0, self.digits as i64) as u32;
            let m = Integer::from(Integer::u_pow_u(self.p as u32, k));
            for j in 0..self.f {
                let idx = i * self.f + j;
                x.c[idx] = modp_reduce(std::mem::take(&mut x.c[idx]), &m);
            }
        }
    }

    fn split(&self, x: &LocalElement) -> Vec<Vec<Integer>> {
        x.c.chunks(self.f).map(|ch| ch.to_vec()).collect()
    }

    pub fn zero(&self) -> LocalElement {
        self.element(vec![Integer::new(); self.degree()], self.max_precision())
    }

    pub fn one(&self) -> LocalElement {
        self.from_integer(&Integer::from(1))
    }

    pub fn from_integer(&self, n: &Integer) -> LocalElement {
        let mut c = vec![Integer::new(); self.degree()];
        c[0] = modp_reduce(n.clone(), &self.pn);
        self.element(c, self.max_precision())
    }

    /// A rational with `p`-integral value.
    pub fn from_rational(&self, q: &Rational) -> Result<LocalElement> {
        let num = self.from_integer(q.numer());
        self.divide_by_integer(&num, q.denom())
    }

    pub fn pi(&self) -> LocalElement {
        let mut c = vec![Integer::new(); self.degree()];
        if self.e > 1 {
            c[self.f] = Integer::from(1);
        } else {
            c[0] = Integer::from(self.p);
        }
        self.element(c, self.max_precision())
    }

    pub fn zeta(&self) -> LocalElement {
        let mut c = vec![Integer::new(); self.degree()];
        if self.f > 1 {
            c[1] = Integer::from(1);
        } else {
            // the residue field is F_p; its generator is a class of F_p
            c[0] = Integer::from(self.residue.modulus().coeff(0));
            c[0] = modp_reduce(Integer::from(-&c[0]), &self.pn);
        }
        self.element(c, self.max_precision())
    }

    /// Coordinate lift of a residue-field element.
    pub fn lift(&self, a: &FqElem) -> LocalElement {
        let mut c = vec![Integer::new(); self.degree()];
        for (j, &v) in a.coeffs().iter().enumerate() {
            c[j] = Integer::from(v);
        }
        self.element(c, self.max_precision())
    }

    pub fn residue(&self, x: &LocalElement) -> FqElem {
        self.residue.elem(x.c[..self.f].iter().map(|c| Integer::from(c % self.p).to_u64().unwrap()).collect())
    }

    pub fn add(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        let c = a
            .c
            .iter()
            .zip(&b.c)
            .map(|(x, y)| modp_reduce(Integer::from(x + y), &self.pn))
            .collect();
        self.element(c, a.prec.min(b.prec))
    }

    pub fn neg(&self, a: &LocalElement) -> LocalElement {
        let c = a.c.iter().map(|x| modp_reduce(Integer::from(-x), &self.pn)).collect();
        self.element(c, a.prec)
    }

    pub fn sub(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &LocalElement, b: &LocalElement) -> LocalElement {
        let (sa, sb) = (self.split(a), self.split(b));
        let e = self.e;
        let mut acc = vec![vec![Integer::new(); self.f]; 2 * e - 1];
        for i in 0..e {
            for k in 0..e {
                let t = self.ur_mul(&sa[i], &sb[k]);
                acc[i + k] = self.ur_add(&acc[i + k], &t);
            }
        }
        // pi^e = p u
        let pu: Vec<Integer> = self.u.iter().map(|c| Integer::from(c * self.p)).collect();
        for t in (e..2 * e - 1).rev() {
            let top = std::mem::take(&mut acc[t]);
            let w = self.ur_mul(&top, &pu);
            acc[t - e] = self.ur_add(&acc[t - e], &w);
        }
        acc.truncate(e);
        let va = self.valuation(a).unwrap_or(a.prec);
        let vb = self.valuation(b).unwrap_or(b.prec);
        let prec = (a.prec + vb).min(b.prec + va);
        self.element(acc.concat(), prec)
    }

    pub fn pow(&self, a: &LocalElement, mut n: u64) -> LocalElement {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// Normalized valuation (`v(pi) = 1`), or `None` when the element is zero
    /// to its precision.
    pub fn valuation(&self, x: &LocalElement) -> Option<i64> {
        let mut best: Option<i64> = None;
        for i in 0..self.e {
            for j in 0..self.f {
                let c = &x.c[i * self.f + j];
                if *c != 0 {
                    let v = self.e as i64 * vp(c, self.p as u32) as i64 + i as i64;
                    best = Some(best.map_or(v, |b| b.min(v)));
                }
            }
        }
        best.filter(|&v| v < x.prec)
    }

    /// Valuation, failing when precision does not decide it.
    pub fn valuation_exact(&self, x: &LocalElement) -> Result<i64> {
        self.valuation(x)
            .ok_or_else(|| self.insufficient(x.prec, "element is zero to working precision"))
    }

    pub fn is_zero(&self, x: &LocalElement) -> bool {
        self.valuation(x).is_none()
    }

    /// Agreement to the precision of both operands.
    pub fn congruent(&self, a: &LocalElement, b: &LocalElement) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    /// Exact division by `pi^k`; the element must be divisible.
    pub fn div_pi(&self, x: &LocalElement, k: i64) -> Result<LocalElement> {
        if k <= 0 {
            return Ok(x.clone());
        }
        if let Some(v) = self.valuation(x) {
            if v < k {
                return Err(Error::invariant(crate::Stage::Localfield, "division by pi of an element of lower valuation"));
            }
        }
        if x.prec - k <= 0 {
            return Err(self.insufficient(x.prec, "precision lost dividing by the uniformizer"));
        }
        let mut cur = x.clone();
        for _ in 0..k {
            let mut parts = self.split(&cur);
            let low = parts.remove(0);
            // low = p * w, and p = pi^e / u
            let w: Vec<Integer> = low.iter().map(|c| Integer::from(c / self.p)).collect();
            parts.push(self.ur_mul(&w, &self.u_inv));
            cur = LocalElement {
                c: parts.concat(),
                prec: cur.prec - 1,
            };
            self.truncate(&mut cur);
        }
        Ok(cur)
    }

    /// Inverse of a unit.
    pub fn unit_inverse(&self, x: &LocalElement) -> Result<LocalElement> {
        match self.valuation(x) {
            Some(0) => {}
            Some(_) => return Err(Error::invariant(crate::Stage::Localfield, "inverting a non-unit")),
            None => return Err(self.insufficient(x.prec, "unit test undecided")),
        }
        let r = self
            .residue
            .inv(&self.residue(x))
            .ok_or_else(|| Error::invariant(crate::Stage::Localfield, "unit has zero residue"))?;
        let mut y = self.lift(&r);
        let two = self.from_integer(&Integer::from(2));
        let mut known = 1i64;
        while known < self.max_precision() {
            let xy = self.mul(x, &y);
            y = self.mul(&y, &self.sub(&two, &xy));
            known *= 2;
        }
        Ok(self.element(y.c, x.prec))
    }

    /// `x / d` for a nonzero integer `d`, when the quotient is integral.
    pub fn divide_by_integer(&self, x: &LocalElement, d: &Integer) -> Result<LocalElement> {
        if *d == 0 {
            return Err(Error::DivisionByZero);
        }
        let s = vp(d, self.p as u32);
        let unit = d / Integer::from(Integer::u_pow_u(self.p as u32, s));
        let inv = self.unit_inverse(&self.from_integer(&unit))?;
        let mut y = self.mul(x, &inv);
        if s > 0 {
            // 1/p^s = u^s / pi^(e s)
            y = self.div_pi(&y, self.e as i64 * s as i64)?;
            let mut us = self.one();
            let uel = self.element(
                {
                    let mut c = vec![Integer::new(); self.degree()];
                    c[..self.f].clone_from_slice(&self.u);
                    c
                },
                self.max_precision(),
            );
            for _ in 0..s {
                us = self.mul(&us, &uel);
            }
            y = self.mul(&y, &us);
        }
        Ok(y)
    }

    /// Evaluate an integer polynomial.
    pub fn eval_integer_poly(&self, coeffs: &[Integer], x: &LocalElement) -> LocalElement {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), &self.from_integer(c));
        }
        acc
    }

    /// Evaluate a rational polynomial whose value is known to be integral.
    pub fn eval_qpoly(&self, g: &QPoly, x: &LocalElement) -> Result<LocalElement> {
        let den = g
            .coeffs()
            .iter()
            .fold(Integer::from(1), |acc, c| acc.lcm(c.denom()));
        let num: Vec<Integer> = g
            .coeffs()
            .iter()
            .map(|c| Rational::from(c * &den).into_numer_denom().0)
            .collect();
        let top = self.eval_integer_poly(&num, x);
        self.divide_by_integer(&top, &den)
    }

    pub fn eval_poly(&self, g: &[LocalElement], x: &LocalElement) -> LocalElement {
        let mut acc = self.zero();
        for c in g.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    fn poly_derivative(&self, g: &[LocalElement]) -> Vec<LocalElement> {
        g.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| self.mul(c, &self.from_integer(&Integer::from(k))))
            .collect()
    }

    /// Coefficients of `g(a + pi X)`.
    fn taylor_shift(&self, g: &[LocalElement], a: &LocalElement) -> Vec<LocalElement> {
        let lin = [a.clone(), self.pi()];
        let mut acc: Vec<LocalElement> = vec![self.zero()];
        for c in g.iter().rev() {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (k, ak) in acc.iter().enumerate() {
                for (l, bl) in lin.iter().enumerate() {
                    next[k + l] = self.add(&next[k + l], &self.mul(ak, bl));
                }
            }
            next[0] = self.add(&next[0], c);
            acc = next;
        }
        acc
    }

    fn residue_poly(&self, g: &[LocalElement]) -> FqPoly {
        FqPoly::new(g.iter().map(|c| self.residue(c)).collect())
    }

    /// All roots in the valuation ring of a polynomial with integral
    /// coefficients and squarefree over the field. Roots come back in
    /// increasing coordinate order.
    pub fn roots(&self, g: &[LocalElement]) -> Result<Vec<LocalElement>> {
        let mut out = self.roots_rec(g)?;
        out.sort_by(|a, b| a.c.cmp(&b.c));
        Ok(out)
    }

    pub fn roots_of_qpoly(&self, g: &QPoly) -> Result<Vec<LocalElement>> {
        let prim = g.primitive_integer();
        let coeffs: Vec<LocalElement> = prim.iter().map(|c| self.from_integer(c)).collect();
        self.roots(&coeffs)
    }

    fn roots_rec(&self, g: &[LocalElement]) -> Result<Vec<LocalElement>> {
        let v = g
            .iter()
            .filter_map(|c| self.valuation(c))
            .min()
            .ok_or_else(|| self.insufficient(g.iter().map(|c| c.prec).min().unwrap_or(0), "polynomial vanishes to working precision"))?;
        let g: Vec<LocalElement> = g.iter().map(|c| self.div_pi(c, v)).collect::<Result<_>>()?;
        let gbar = self.residue_poly(&g);
        if gbar.deg() == 0 {
            return Ok(vec![]);
        }
        let fq = &self.residue;
        let dbar = gbar.derivative(fq);
        let mut out = Vec::new();
        for a in gbar.roots(fq) {
            let a_lift = self.lift(&a);
            if !dbar.eval(&a, fq).is_zero() {
                out.push(self.newton(&g, a_lift)?);
            } else {
                let h = self.taylor_shift(&g, &a_lift);
                for s in self.roots_rec(&h)? {
                    out.push(self.add(&a_lift, &self.mul(&self.pi(), &s)));
                }
            }
        }
        Ok(out)
    }

    fn newton(&self, g: &[LocalElement], start: LocalElement) -> Result<LocalElement> {
        let dg = self.poly_derivative(g);
        let target = g.iter().map(|c| c.prec).min().unwrap_or(0);
        let mut r = start;
        for _ in 0..64 {
            let val = self.eval_poly(g, &r);
            if self.is_zero(&val) {
                return Ok(self.element(r.c, target.min(val.prec)));
            }
            let d = self.unit_inverse(&self.eval_poly(&dg, &r))?;
            r = self.sub(&r, &self.mul(&val, &d));
            r.prec = self.max_precision();
        }
        Err(self.insufficient(target, "Newton iteration did not converge"))
    }
}

impl fmt::Display for LocalField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q_{}(e={}, f={}, u-class {})", self.p, self.e, self.f, self.u_class)
    }
}

/// Least element (in coefficient order) generating the unit group.
fn unit_generator(fq: &Fq) -> FqElem {
    let p = fq.p();
    let n = fq.order() - 1u32;
    let mut idx: u64 = 1;
    loop {
        let mut c = Vec::with_capacity(fq.degree());
        let mut v = idx;
        for _ in 0..fq.degree() {
            c.push(v % p);
            v /= p;
        }
        let a = fq.elem(c);
        if !a.is_zero() && fq.mult_order(&a).as_ref() == Some(&n) {
            return a;
        }
        idx += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unramified_inverse_round_trips() {
        let k = LocalField::new(7, 2, 1, 0, 10);
        let x = k.add(&k.zeta(), &k.from_integer(&Integer::from(3)));
        let y = k.unit_inverse(&x).unwrap();
        assert!(k.congruent(&k.mul(&x, &y), &k.one()));
    }

    #[test]
    fn uniformizer_squares_to_p_u() {
        let k = LocalField::new(11, 1, 2, 1, 12);
        let pi2 = k.mul(&k.pi(), &k.pi());
        assert_eq!(k.valuation(&pi2), Some(2));
        assert_eq!(k.valuation(&k.from_integer(&Integer::from(11))), Some(2));
        // p / pi^2 = 1 / u
        let back = k.div_pi(&k.from_integer(&Integer::from(11)), 2).unwrap();
        let fq = k.residue_field();
        assert_eq!(fq.mul(&k.residue(&back), &k.unit_residue()), fq.one());
    }

    #[test]
    fn square_roots_of_two_in_q7() {
        // 2 = 3^2 mod 7, so x^2 - 2 splits in Q_7
        let k = LocalField::new(7, 1, 1, 0, 20);
        let r = k.roots_of_qpoly(&QPoly::from_ints(&[-2, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        for x in &r {
            let sq = k.mul(x, x);
            assert!(k.congruent(&sq, &k.from_integer(&Integer::from(2))));
        }
    }

    #[test]
    fn ramified_roots_need_the_ramified_field() {
        // x^2 - 11 has no root in Q_11 but splits in Q_11(sqrt 11)
        let unram = LocalField::new(11, 1, 1, 0, 20);
        assert!(unram.roots_of_qpoly(&QPoly::from_ints(&[-11, 0, 1])).unwrap().is_empty());
        let ram = LocalField::new(11, 1, 2, 0, 20);
        let r = ram.roots_of_qpoly(&QPoly::from_ints(&[-11, 0, 1])).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(ram.valuation(&r[0]), Some(1));
    }

    #[test]
    fn repeated_residue_roots_are_separated() {
        // (x - 1)(x - 1 - 49) over Q_7: roots agree mod 7^2
        let f = &QPoly::from_ints(&[-1, 1]) * &QPoly::from_ints(&[-50, 1]);
        let k = LocalField::new(7, 1, 1, 0, 20);
        let r = k.roots_of_qpoly(&f).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(k.valuation(&k.sub(&r[0], &r[1])), Some(2));
    }

    #[test]
    fn rational_with_p_in_denominator() {
        let k = LocalField::new(5, 1, 2, 0, 20);
        // 25/5 = 5
        let x = k.from_rational(&Rational::from((25, 5))).unwrap();
        assert!(k.congruent(&x, &k.from_integer(&Integer::from(5))));
        let pi = k.pi();
        let y = k.divide_by_integer(&k.mul(&pi, &pi), &Integer::from(5)).unwrap();
        assert_eq!(k.valuation(&y), Some(0));
    }
}
