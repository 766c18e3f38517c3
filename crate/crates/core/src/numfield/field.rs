//! Exact arithmetic in `Q[t]/(S)` for an irreducible `S`.

use rug::Rational;

use crate::ball::CBall;
use crate::error::{Error, Result, Stage};
use crate::poly::QPoly;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberField {
    modulus: QPoly,
}

/// Element of a [`NumberField`]: a polynomial of degree below the modulus.
pub type FieldElem = QPoly;

impl NumberField {
    /// `modulus` must be irreducible over Q; that is the caller's contract.
    pub fn new(modulus: QPoly) -> Self {
        NumberField {
            modulus: modulus.monic(),
        }
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn reduce(&self, a: &QPoly) -> FieldElem {
        a.rem(&self.modulus)
    }

    pub fn generator(&self) -> FieldElem {
        self.reduce(&QPoly::x())
    }

    pub fn constant(&self, v: Rational) -> FieldElem {
        QPoly::constant(v)
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a + b
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a - b
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        a.mul_mod(b, &self.modulus)
    }

    pub fn pow(&self, a: &FieldElem, n: u64) -> FieldElem {
        a.pow_mod(n, &self.modulus)
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (g, s, _) = a.xgcd(&self.modulus);
        if !g.is_constant() {
            return Err(Error::invariant(Stage::Numfield, "field modulus is reducible"));
        }
        Ok(self.reduce(&s))
    }

    pub fn div(&self, a: &FieldElem, b: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    /// Evaluate a polynomial with rational coefficients at a field element.
    pub fn eval(&self, p: &QPoly, a: &FieldElem) -> FieldElem {
        p.compose_mod(a, &self.modulus)
    }

    /// Image under the embedding sending the generator to `theta`.
    pub fn embed(&self, a: &FieldElem, theta: &CBall) -> CBall {
        a.eval_ball(theta)
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn as_rational(&self, a: &FieldElem) -> Option<Rational> {
        if a.is_constant() {
            Some(a.coeff(0))
        } else {
            None
        }
    }

    /// Monic gcd of two polynomials over this field. Polynomials are given
    /// as coefficient vectors (ascending) of field elements.
    pub fn poly_gcd(&self, a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let trim = |mut v: Vec<FieldElem>| {
            while matches!(v.last(), Some(c) if c.is_zero()) {
                v.pop();
            }
            v
        };
        let mut a = trim(a.to_vec());
        let mut b = trim(b.to_vec());
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b)?;
            a = b;
            b = trim(r);
        }
        if a.is_empty() {
            return Ok(a);
        }
        let inv = self.inv(a.last().unwrap())?;
        Ok(a.iter().map(|c| self.mul(c, &inv)).collect())
    }

    fn poly_rem(&self, a: &[FieldElem], b: &[FieldElem]) -> Result<Vec<FieldElem>> {
        let db = b.len() - 1;
        let inv = self.inv(b.last().unwrap())?;
        let mut r = a.to_vec();
        while r.len() > db && !r.is_empty() {
            let top = self.mul(r.last().unwrap(), &inv);
            let shift = r.len() - 1 - db;
            for (i, bi) in b.iter().enumerate() {
                let t = self.mul(&top, bi);
                r[shift + i] = self.sub(&r[shift + i], &t);
            }
            r.pop();
            while matches!(r.last(), Some(c) if c.is_zero()) {
                r.pop();
            }
        }
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_in_cubic_field() {
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 0, 1]));
        let t = k.generator();
        let a = k.add(&t, &QPoly::one());
        let inv = k.inv(&a).unwrap();
        assert_eq!(k.mul(&a, &inv), QPoly::one());
    }

    #[test]
    fn gcd_over_field_finds_common_root() {
        // over Q(sqrt2): gcd(x^2 - 2, x - t) = x - t
        let k = NumberField::new(QPoly::from_ints(&[-2, 0, 1]));
        let t = k.generator();
        let f = vec![QPoly::from_ints(&[-2]), QPoly::zero(), QPoly::one()];
        let g = vec![-&t, QPoly::one()];
        let h = k.poly_gcd(&f, &g).unwrap();
        assert_eq!(h, vec![-&t, QPoly::one()]);
    }
}
