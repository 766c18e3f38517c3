//! Dense univariate polynomials over Q and bivariate polynomials used for
//! resultant-style eliminations.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::ball::CBall;

/// Polynomial with rational coefficients, stored in ascending degree order
/// with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<Rational>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        QPoly::constant(Rational::from(1))
    }

    pub fn x() -> Self {
        QPoly::from_coeffs(vec![Rational::new(), Rational::from(1)])
    }

    pub fn constant(v: Rational) -> Self {
        QPoly::from_coeffs(vec![v])
    }

    pub fn from_coeffs(c: Vec<Rational>) -> Self {
        let mut p = QPoly { c };
        p.trim();
        p
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::from_coeffs(c.iter().map(|&v| Rational::from(v)).collect())
    }

    pub fn from_integers(c: &[Integer]) -> Self {
        QPoly::from_coeffs(c.iter().map(|v| Rational::from(v.clone())).collect())
    }

    /// `x^k`.
    pub fn monomial(k: usize, coeff: Rational) -> Self {
        let mut c = vec![Rational::new(); k + 1];
        c[k] = coeff;
        QPoly::from_coeffs(c)
    }

    fn trim(&mut self) {
        while matches!(self.c.last(), Some(v) if *v == 0) {
            self.c.pop();
        }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.c.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial has no degree.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lead(&self) -> Rational {
        self.c.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn scale(&self, k: &Rational) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|a| Rational::from(a * k)).collect())
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        let inv = Rational::from(self.lead().recip_ref());
        self.scale(&inv)
    }

    /// `(quotient, remainder)`; panics on division by zero.
    pub fn divrem(&self, d: &QPoly) -> (QPoly, QPoly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.deg();
        if self.c.len() < d.c.len() {
            return (QPoly::zero(), self.clone());
        }
        let inv = Rational::from(d.lead().recip_ref());
        let mut r = self.c.clone();
        let mut q = vec![Rational::new(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let top = Rational::from(&r[k + dd] * &inv);
            if top != 0 {
                for (i, di) in d.c.iter().enumerate() {
                    r[k + i] -= Rational::from(&top * di);
                }
            }
            q[k] = top;
        }
        r.truncate(dd);
        (QPoly::from_coeffs(q), QPoly::from_coeffs(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.divrem(d).1
    }

    /// Quotient when the division is exact.
    pub fn div_exact(&self, d: &QPoly) -> Option<QPoly> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s*self + t*other = g` and `g` monic.
    pub fn xgcd(&self, other: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (QPoly::one(), QPoly::zero());
        let (mut t0, mut t1) = (QPoly::zero(), QPoly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s = &s0 - &(&q * &s1);
            let t = &t0 - &(&q * &t1);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = Rational::from(r0.lead().recip_ref());
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::from_coeffs(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| Rational::from(a * k as u32))
                .collect(),
        )
    }

    /// Squarefree part, monic.
    pub fn squarefree_part(&self) -> QPoly {
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).is_constant()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for a in self.c.iter().rev() {
            acc *= x;
            acc += a;
        }
        acc
    }

    pub fn eval_ball(&self, z: &CBall) -> CBall {
        let prec = z.prec();
        let mut acc = CBall::zero(prec);
        for a in self.c.iter().rev() {
            acc = acc.mul(z).add(&CBall::from_rational(prec, a));
        }
        acc
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = &(&acc * g) + &QPoly::constant(a.clone());
        }
        acc
    }

    /// `self(g(x)) mod m`, keeping intermediate degrees bounded.
    pub fn compose_mod(&self, g: &QPoly, m: &QPoly) -> QPoly {
        let mut acc = QPoly::zero();
        for a in self.c.iter().rev() {
            acc = (&(&acc * g) + &QPoly::constant(a.clone())).rem(m);
        }
        acc
    }

    pub fn mul_mod(&self, other: &QPoly, m: &QPoly) -> QPoly {
        (self * other).rem(m)
    }

    pub fn pow(&self, n: u32) -> QPoly {
        let mut r = QPoly::one();
        for _ in 0..n {
            r = &r * self;
        }
        r
    }

    pub fn pow_mod(&self, mut n: u64, m: &QPoly) -> QPoly {
        let mut result = QPoly::one().rem(m);
        let mut base = self.rem(m);
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_mod(&base, m);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_mod(&base, m);
            }
        }
        result
    }

    /// Integer coefficient vector of the primitive multiple with positive
    /// leading coefficient.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut den = Integer::from(1);
        for a in &self.c {
            den.lcm_mut(a.denom());
        }
        let mut ints: Vec<Integer> = self
            .c
            .iter()
            .map(|a| Rational::from(a * &den).into_numer_denom().0)
            .collect();
        let mut g = Integer::new();
        for v in &ints {
            g.gcd_mut(v);
        }
        if *ints.last().unwrap() < 0 {
            g = -g;
        }
        for v in ints.iter_mut() {
            v.div_exact_mut(&g);
        }
        ints
    }

    pub fn to_primitive(&self) -> QPoly {
        QPoly::from_integers(&self.primitive_integer())
    }

    pub fn is_integral(&self) -> bool {
        self.c.iter().all(|a| *a.denom() == 1)
    }

    /// `self(a*x)`.
    pub fn scale_var(&self, a: &Rational) -> QPoly {
        let mut pw = Rational::from(1);
        let mut out = Vec::with_capacity(self.c.len());
        for c in &self.c {
            out.push(Rational::from(c * &pw));
            pw *= a;
        }
        QPoly::from_coeffs(out)
    }

    /// `x^deg * self(1/x)`.
    pub fn reverse(&self) -> QPoly {
        let mut c = self.c.clone();
        c.reverse();
        QPoly::from_coeffs(c)
    }

    /// Bit size of the largest coefficient of the primitive form.
    pub fn max_coeff_bits(&self) -> u32 {
        self.primitive_integer()
            .iter()
            .map(|v| v.significant_bits())
            .max()
            .unwrap_or(0)
    }

    /// Discriminant of the primitive integer form, up to sign convention
    /// `(-1)^(n(n-1)/2) Res(f, f') / lc(f)`.
    pub fn discriminant(&self) -> Rational {
        let n = self.deg();
        let r = resultant(self, &self.derivative());
        let sign = if (n * n.saturating_sub(1) / 2).is_multiple_of(2) { 1 } else { -1 };
        (r * sign) / self.lead()
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let n = self.c.len().max(rhs.c.len());
        QPoly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let n = self.c.len().max(rhs.c.len());
        QPoly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly::from_coeffs(self.c.iter().map(|a| Rational::from(-a)).collect())
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        if self.is_zero() || rhs.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rational::new(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.c.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        QPoly::from_coeffs(out)
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, a) in self.c.iter().enumerate().rev() {
            if *a == 0 {
                continue;
            }
            if !first {
                f.write_str(if *a < 0 { " - " } else { " + " })?;
            } else if *a < 0 {
                f.write_str("-")?;
            }
            first = false;
            let abs = Rational::from(a.abs_ref());
            match k {
                0 => write!(f, "{abs}")?,
                1 if abs == 1 => f.write_str("x")?,
                1 => write!(f, "{abs}*x")?,
                _ if abs == 1 => write!(f, "x^{k}")?,
                _ => write!(f, "{abs}*x^{k}")?,
            }
        }
        Ok(())
    }
}

/// Resultant of two polynomials over Q, via the Euclidean remainder sequence.
pub fn resultant(a: &QPoly, b: &QPoly) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::new();
    }
    let (mut f, mut g) = (a.clone(), b.clone());
    let mut acc = Rational::from(1);
    loop {
        let (df, dg) = (f.deg(), g.deg());
        if dg == 0 {
            let mut p = Rational::from(1);
            for _ in 0..df {
                p *= g.lead();
            }
            return acc * p;
        }
        let r = f.rem(&g);
        if r.is_zero() {
            return Rational::new();
        }
        // Res(f, g) = (-1)^(df dg) lc(g)^(df - dr) Res(g, r)
        let dr = r.deg();
        if (df * dg) % 2 == 1 {
            acc = -acc;
        }
        for _ in 0..(df - dr) {
            acc *= g.lead();
        }
        f = g;
        g = r;
    }
}

/// Polynomial in `u` whose coefficients are polynomials in `t`:
/// `coeffs[k]` multiplies `u^k`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiPoly {
    coeffs: Vec<QPoly>,
}

impl BiPoly {
    pub fn new(mut coeffs: Vec<QPoly>) -> Self {
        while matches!(coeffs.last(), Some(c) if c.is_zero()) {
            coeffs.pop();
        }
        BiPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    /// `G(u, t) = p(t * u)`.
    pub fn scaled_product(p: &QPoly) -> Self {
        BiPoly::new(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(k, a)| QPoly::monomial(k, a.clone()))
                .collect(),
        )
    }

    /// `G(u, t) = p(t - c*u)`.
    pub fn shifted(p: &QPoly, c: &Rational) -> Self {
        // expand (t - c u)^k binomially
        let deg = p.deg();
        let mut out = vec![QPoly::zero(); deg + 1];
        for (k, a) in p.coeffs().iter().enumerate() {
            if *a == 0 {
                continue;
            }
            let mut binom = Integer::from(1);
            for j in 0..=k {
                // term: a * C(k, j) * t^(k-j) * (-c u)^j
                let mut coef = Rational::from(a * &binom);
                let mut cj = Rational::from(1);
                for _ in 0..j {
                    cj *= c;
                }
                coef *= cj;
                if j % 2 == 1 {
                    coef = -coef;
                }
                out[j] = &out[j] + &QPoly::monomial(k - j, coef);
                binom *= (k - j) as u32;
                binom /= (j + 1) as u32;
            }
        }
        BiPoly::new(out)
    }

    /// `G(u, t) = t - q(u)`.
    pub fn t_minus(q: &QPoly) -> Self {
        let mut out: Vec<QPoly> = q.coeffs().iter().map(|a| QPoly::constant(Rational::from(-a))).collect();
        if out.is_empty() {
            out.push(QPoly::zero());
        }
        out[0] = &out[0] + &QPoly::x();
        BiPoly::new(out)
    }

    /// Reduce modulo a monic `f(u)` with rational coefficients.
    fn reduce(&self, f: &QPoly) -> Vec<QPoly> {
        let d = f.deg();
        let mut c = self.coeffs.clone();
        let fm = f.monic();
        while c.len() > d {
            let top = c.pop().unwrap();
            let k = c.len() - d;
            for i in 0..d {
                let fi = fm.coeff(i);
                if fi != 0 {
                    c[k + i] = &c[k + i] - &top.scale(&fi);
                }
            }
        }
        c.resize(d, QPoly::zero());
        c
    }

    /// `prod_i G(a_i, t)` over the roots `a_i` of `f`, as a polynomial in
    /// `t`: the determinant of multiplication by `G` on `Q[t][u]/f(u)`.
    pub fn norm(&self, f: &QPoly) -> QPoly {
        let d = f.deg();
        let fm = f.monic();
        let mut rows = Vec::with_capacity(d);
        let mut cur = BiPoly::new(self.reduce(&fm));
        for _ in 0..d {
            rows.push(cur.reduce(&fm));
            let mut shifted = vec![QPoly::zero()];
            shifted.extend(cur.coeffs.iter().cloned());
            cur = BiPoly::new(BiPoly::new(shifted).reduce(&fm));
        }
        bareiss_det(rows)
    }
}

/// Determinant of a square matrix over `Q[t]` by fraction-free elimination.
pub fn bareiss_det(mut m: Vec<Vec<QPoly>>) -> QPoly {
    let n = m.len();
    if n == 0 {
        return QPoly::one();
    }
    let mut sign = false;
    let mut prev = QPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = !sign;
                }
                None => return QPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -&det
    } else {
        det
    }
}

/// The `n`-th cyclotomic polynomial.
pub fn cyclotomic(n: u64) -> QPoly {
    assert!(n >= 1);
    // x^n - 1 = prod_{d | n} Phi_d
    let mut p = &QPoly::monomial(n as usize, Rational::from(1)) - &QPoly::one();
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = p.div_exact(&cyclotomic(d)).expect("cyclotomic divides");
        }
    }
    p
}

/// Euler's totient.
pub fn totient(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> QPoly {
        QPoly::from_ints(c)
    }

    #[test]
    fn divrem_reconstructs() {
        let a = p(&[5, -3, 0, 2, 7]);
        let b = p(&[1, 2, 3]);
        let (q, r) = a.divrem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn gcd_of_shared_factor() {
        let f = p(&[-1, 1]);
        let a = &f * &p(&[2, 0, 1]);
        let b = &f * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), f);
    }

    #[test]
    fn xgcd_bezout() {
        let a = p(&[1, 0, 1]);
        let b = p(&[-2, 0, 0, 1]);
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(&(&s * &a) + &(&t * &b), g);
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 2, x - 3) = (-1)^(2*1) * (3^2 - 2) with monic first argument
        let r = resultant(&p(&[-2, 0, 1]), &p(&[-3, 1]));
        assert_eq!(r, Rational::from(7));
        let disc = p(&[-2, 0, 1]).discriminant();
        assert_eq!(disc, Rational::from(8));
    }

    #[test]
    fn norm_of_shift_gives_sums_of_roots() {
        // roots of x^2 - 2 are +-sqrt2; prod_j (t - c*a_j - a_i) over i, j
        let f = p(&[-2, 0, 1]);
        let g = BiPoly::shifted(&f, &Rational::from(1));
        let n = g.norm(&f);
        // sums a_i + a_j: 2sqrt2, -2sqrt2, 0, 0 -> (t^2 - 8) t^2
        assert_eq!(n, p(&[0, 0, -8, 0, 1]));
    }

    #[test]
    fn norm_of_power_is_charpoly() {
        let f = p(&[-2, 0, 1]);
        let g = BiPoly::t_minus(&p(&[0, 0, 1]));
        // sqrt2^2 = 2 twice
        assert_eq!(g.norm(&f), p(&[4, -4, 1]));
    }

    #[test]
    fn norm_of_scaled_product_gives_ratios() {
        let f = p(&[-2, 0, 1]);
        let n = BiPoly::scaled_product(&f).norm(&f);
        // ratios: 1, 1, -1, -1 scaled by prod a_j^2 = 4
        assert_eq!(n.monic(), p(&[1, 0, -2, 0, 1]));
    }

    #[test]
    fn cyclotomic_small_orders() {
        assert_eq!(cyclotomic(1), p(&[-1, 1]));
        assert_eq!(cyclotomic(4), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(12), p(&[1, 0, -1, 0, 1]));
        for n in 1..40 {
            assert_eq!(cyclotomic(n).deg() as u64, totient(n));
        }
    }

    #[test]
    fn primitive_integer_normalizes_sign_and_content() {
        let q = QPoly::from_coeffs(vec![Rational::from((3, 2)), Rational::from(-3)]);
        assert_eq!(q.primitive_integer(), vec![Integer::from(-1), Integer::from(2)]);
    }
}
