//! Exact algebraic numbers with labelled complex embeddings.

pub mod field;

use std::fmt;

use rug::{Float, Integer, Rational};

use crate::ball::{CBall, RBall};
use crate::error::{Error, Result, Stage};
use crate::modp::certify_irreducible;
use crate::poly::{cyclotomic, totient, BiPoly, QPoly};
use crate::quadforms::{ClassPolynomial, DEFAULT_PRECISION, PRECISION_CAP};
use crate::ratrec;
use crate::roots::{self, factor_containing, isolate_roots, root_is_real};

pub use field::{FieldElem, NumberField};

/// Prime bound for modular irreducibility certificates.
const IRREDUCIBILITY_PRIME_LIMIT: u64 = 2000;

/// An algebraic number: its primitive minimal polynomial over Z, certified
/// discs for all roots, and which root it is.
#[derive(Clone, Debug)]
pub struct AlgebraicNumber {
    minpoly: QPoly,
    embeddings: Vec<CBall>,
    index: usize,
}

impl AlgebraicNumber {
    /// Build from a polynomial known to be irreducible, selecting the root
    /// whose disc meets `approx`.
    pub fn from_irreducible(minpoly: &QPoly, approx: &CBall, prec: u32) -> Result<Self> {
        let minpoly = minpoly.to_primitive();
        let embeddings = isolate_roots(&minpoly, prec)?;
        let index = unique_overlap(&embeddings, approx)?;
        Ok(AlgebraicNumber {
            minpoly,
            embeddings,
            index,
        })
    }

    /// Build with caller-supplied root discs, which must be pairwise disjoint
    /// and each contain a root.
    pub fn with_embeddings(minpoly: &QPoly, embeddings: Vec<CBall>, index: usize) -> Result<Self> {
        let minpoly = minpoly.to_primitive();
        if embeddings.len() != minpoly.deg() {
            return Err(Error::precondition(Stage::Numfield, "one embedding per root required"));
        }
        for i in 0..embeddings.len() {
            if !minpoly.eval_ball(&embeddings[i]).contains_zero() {
                return Err(Error::invariant(Stage::Numfield, "embedding disc misses every root"));
            }
            for j in i + 1..embeddings.len() {
                if !embeddings[i].disjoint(&embeddings[j]) {
                    return Err(Error::exhausted(Stage::Numfield, embeddings[i].prec(), "embeddings overlap"));
                }
            }
        }
        Ok(AlgebraicNumber {
            minpoly,
            embeddings,
            index,
        })
    }

    pub fn rational(q: &Rational, prec: u32) -> Self {
        let minpoly = QPoly::from_coeffs(vec![Rational::from(-q), Rational::from(1)]).to_primitive();
        AlgebraicNumber {
            minpoly,
            embeddings: vec![CBall::from_rational(prec, q)],
            index: 0,
        }
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn degree(&self) -> usize {
        self.minpoly.deg()
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn embeddings(&self) -> &[CBall] {
        &self.embeddings
    }

    /// The embedding this number denotes.
    pub fn value(&self) -> &CBall {
        &self.embeddings[self.index]
    }

    pub fn precision(&self) -> u32 {
        self.value().prec()
    }

    /// Same number with embeddings recomputed at `prec`, labels preserved.
    pub fn refine(&self, prec: u32) -> Result<Self> {
        let fresh = isolate_roots(&self.minpoly, prec)?;
        let mut ordered = Vec::with_capacity(fresh.len());
        for old in &self.embeddings {
            let k = unique_overlap(&fresh, old)?;
            ordered.push(fresh[k].clone());
        }
        Ok(AlgebraicNumber {
            minpoly: self.minpoly.clone(),
            embeddings: ordered,
            index: self.index,
        })
    }

    /// The conjugate with label `index`.
    pub fn conjugate(&self, index: usize) -> Self {
        AlgebraicNumber {
            index,
            ..self.clone()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.minpoly.deg() == 1 && self.minpoly.coeff(0) == 0
    }

    /// Certify irreducibility of the minimal polynomial by modular degree
    /// patterns, falling back to the exact factor search over the roots.
    pub fn irreducibility_witness(&self) -> Result<IrreducibilityWitness> {
        if let Some(cert) = certify_irreducible(&self.minpoly, IRREDUCIBILITY_PRIME_LIMIT) {
            return Ok(IrreducibilityWitness::Modular(cert.patterns));
        }
        let f = factor_containing(&self.minpoly, &self.embeddings, self.index)?;
        if f.deg() == self.minpoly.deg() {
            Ok(IrreducibilityWitness::RootSubsets)
        } else {
            Err(Error::invariant(Stage::Numfield, "minimal polynomial factors"))
        }
    }

    /// `1 / self`.
    pub fn inverse(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let minpoly = self.minpoly.reverse().to_primitive();
        let embeddings = self
            .embeddings
            .iter()
            .map(|e| e.recip().ok_or(Error::DivisionByZero))
            .collect::<Result<Vec<_>>>()?;
        AlgebraicNumber::with_embeddings(&minpoly, embeddings, self.index)
    }

    /// `self^n` with its exact minimal polynomial.
    pub fn pow(&self, n: u32) -> Result<Self> {
        let charpoly = BiPoly::t_minus(&QPoly::monomial(n as usize, Rational::from(1))).norm(&self.minpoly);
        minimal_polynomial_of(&charpoly, |p| Ok(self.refine(p)?.value().pow(n as u64)), self.precision())
    }

    /// `self * other`.
    pub fn mul(&self, other: &AlgebraicNumber) -> Result<Self> {
        // prod_i a_i^m g(t / a_i)
        let prod = homogenized(&other.minpoly).norm(&self.minpoly);
        minimal_polynomial_of(
            &prod,
            |p| Ok(self.refine(p)?.value().mul(other.refine(p)?.value())),
            self.precision().max(other.precision()),
        )
    }

    /// The logarithmic height.
    pub fn height(&self) -> Result<HeightValue> {
        let mut me = self.clone();
        let target = Float::with_val(64, 1e-6);
        loop {
            let h = height_at(&me);
            if h.rad().as_float() <= &target {
                return Ok(HeightValue(h));
            }
            let p = me.precision() * 2;
            if p > PRECISION_CAP {
                return Err(Error::exhausted(Stage::Numfield, p, "height radius above 1e-6"));
            }
            me = me.refine(p)?;
        }
    }

    /// Root of unity test against all cyclotomic polynomials of matching
    /// degree.
    pub fn is_root_of_unity(&self) -> bool {
        let d = self.degree() as u64;
        let prim = self.minpoly.to_primitive();
        (1..=2 * d * d + 2)
            .filter(|&k| totient(k) == d)
            .any(|k| cyclotomic(k).to_primitive() == prim)
    }
}

impl fmt::Display for AlgebraicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root #{} of {} ~ {}", self.index, self.minpoly, self.value())
    }
}

/// Evidence that a minimal polynomial is irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrreducibilityWitness {
    /// `(p, factor degrees mod p)` patterns excluding every proper factor.
    Modular(Vec<(u64, Vec<usize>)>),
    /// No proper subset of the certified roots yields a rational factor.
    RootSubsets,
}

fn unique_overlap(discs: &[CBall], approx: &CBall) -> Result<usize> {
    let hits: Vec<usize> = (0..discs.len()).filter(|&i| discs[i].overlaps(approx)).collect();
    match hits.as_slice() {
        [i] => Ok(*i),
        [] => Err(Error::invariant(Stage::Numfield, "approximation meets no root disc")),
        _ => Err(Error::exhausted(Stage::Numfield, approx.prec(), "approximation meets several root discs")),
    }
}

/// `G(u, t) = sum g_k t^k u^(m-k)`, so that `G(a, t) = a^m g(t / a)`.
fn homogenized(g: &QPoly) -> BiPoly {
    let m = g.deg();
    let mut out = vec![QPoly::zero(); m + 1];
    for (k, c) in g.coeffs().iter().enumerate() {
        out[m - k] = QPoly::monomial(k, c.clone());
    }
    BiPoly::new(out)
}

/// Minimal polynomial of the number approximated by `approx(prec)`, which
/// must be a root of `poly`. Precision doubles until the root is isolated
/// and the factor search resolves.
pub fn minimal_polynomial_of<F>(poly: &QPoly, approx: F, prec: u32) -> Result<AlgebraicNumber>
where
    F: Fn(u32) -> Result<CBall>,
{
    let sqf = poly.squarefree_part();
    let mut p = prec.max(64);
    loop {
        let attempt = (|| {
            let roots = isolate_roots(&sqf, p)?;
            let a = approx(p)?;
            let target = unique_overlap(&roots, &a)?;
            let f = factor_containing(&sqf, &roots, target)?;
            AlgebraicNumber::from_irreducible(&f, &roots[target], p)
        })();
        match attempt {
            Err(e) if e.is_precision() && p < PRECISION_CAP => p *= 2,
            other => return other,
        }
    }
}

fn height_at(a: &AlgebraicNumber) -> RBall {
    let prec = a.precision();
    let lead = a.minpoly.lead();
    let mut sum = RBall::from_rational(prec, &lead).ln().expect("leading coefficient nonzero").abs_ball();
    for e in &a.embeddings {
        sum = sum.add(&e.abs().ln_max1());
    }
    sum.div(&RBall::from_int(prec, a.degree() as i64)).unwrap()
}

trait AbsBall {
    fn abs_ball(self) -> RBall;
}

impl AbsBall for RBall {
    fn abs_ball(self) -> RBall {
        if self.is_negative() {
            self.neg()
        } else {
            self
        }
    }
}

/// Logarithmic height as a real ball.
#[derive(Clone, Debug)]
pub struct HeightValue(pub RBall);

impl HeightValue {
    pub fn ball(&self) -> &RBall {
        &self.0
    }

    pub fn upper(&self) -> Float {
        self.0.upper()
    }

    pub fn lower(&self) -> Float {
        let l = self.0.lower();
        if l < 0 {
            Float::new(l.prec())
        } else {
            l
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
}

/// The three conjugates of a class polynomial root: index 0 real (and
/// dominant), index 1 with positive imaginary part, index 2 its conjugate.
pub fn label_conjugates(h: &ClassPolynomial) -> Result<[AlgebraicNumber; 3]> {
    if h.degree() != 3 {
        return Err(Error::precondition(Stage::Numfield, "conjugate labelling needs a cubic"));
    }
    let poly = h.poly();
    let mut roots = h.roots.clone();
    let real: Vec<usize> = (0..3).filter(|&i| root_is_real(i, &roots)).collect();
    if real.len() == 3 {
        return Err(Error::ThreeRealRoots);
    }
    if real.len() != 1 {
        return Err(Error::exhausted(Stage::Numfield, h.precision, "cannot separate real and complex roots"));
    }
    roots::canonical_order(&mut roots);
    let base = AlgebraicNumber::with_embeddings(&poly, roots, 0)?;
    if base.minpoly != poly {
        return Err(Error::invariant(Stage::Numfield, "class polynomial is not primitive"));
    }
    Ok([base.conjugate(0), base.conjugate(1), base.conjugate(2)])
}

/// Conjugate triple of a singular modulus together with its class polynomial.
#[derive(Clone, Debug)]
pub struct ConjugateTriple {
    pub class_poly: QPoly,
    pub members: [AlgebraicNumber; 3],
}

impl ConjugateTriple {
    pub fn new(h: &ClassPolynomial) -> Result<Self> {
        Ok(ConjugateTriple {
            class_poly: h.poly(),
            members: label_conjugates(h)?,
        })
    }

    pub fn ball(&self, i: usize) -> &CBall {
        self.members[i].value()
    }

    pub fn refine(&self, prec: u32) -> Result<Self> {
        let base = self.members[0].refine(prec)?;
        Ok(ConjugateTriple {
            class_poly: self.class_poly.clone(),
            members: [base.conjugate(0), base.conjugate(1), base.conjugate(2)],
        })
    }

    pub fn precision(&self) -> u32 {
        self.members[0].precision()
    }

    /// Relabel the complex pair.
    fn swapped(&self) -> Self {
        let [a, b, c] = self.members.clone();
        ConjugateTriple {
            class_poly: self.class_poly.clone(),
            members: [a, c, b],
        }
    }
}

/// The Galois-orbit pairing `y_i = P(x_i)` between two conjugate triples.
#[derive(Clone, Debug)]
pub struct OrbitPairing {
    pub x: ConjugateTriple,
    /// Labelled so that `y[i] = P(x[i])`.
    pub y: ConjugateTriple,
    pub relator: QPoly,
    /// Whether the complex labels of `y` were exchanged relative to the
    /// canonical labelling (positive imaginary part at index 1).
    pub y_swapped: bool,
    pub precision: u32,
}

impl OrbitPairing {
    /// Same pairing with every ball at `prec` bits, keeping the labels.
    pub fn refine(&self, prec: u32) -> Result<OrbitPairing> {
        let x = self.x.refine(prec)?;
        let y = self.y.refine(prec)?;
        let y = if self.y_swapped { y.swapped() } else { y };
        Ok(OrbitPairing {
            x,
            y,
            relator: self.relator.clone(),
            y_swapped: self.y_swapped,
            precision: prec,
        })
    }

    /// `H_y(P(t)) mod H_x(t) == 0`, exactly.
    pub fn verify_exact(&self) -> bool {
        self.y
            .class_poly
            .compose_mod(&self.relator, &self.x.class_poly)
            .is_zero()
    }
}

/// Interpolate `y_i = P(x_i)` on the three embeddings.
fn interpolate(x: [&CBall; 3], y: [&CBall; 3]) -> Option<[CBall; 3]> {
    let prec = x[0].prec();
    let mut coeffs = [CBall::zero(prec), CBall::zero(prec), CBall::zero(prec)];
    for i in 0..3 {
        let (j, k) = ((i + 1) % 3, (i + 2) % 3);
        let den = x[i].sub(x[j]).mul(&x[i].sub(x[k]));
        let w = y[i].div(&den)?;
        // w * (t - x_j)(t - x_k)
        coeffs[2] = coeffs[2].add(&w);
        coeffs[1] = coeffs[1].sub(&w.mul(&x[j].add(x[k])));
        coeffs[0] = coeffs[0].add(&w.mul(&x[j].mul(x[k])));
    }
    Some(coeffs)
}

/// Find the rational relator `P` (degree at most 2) with `y_i = P(x_i)`.
///
/// Both ways of matching the complex pairs are tried; only the one whose
/// reconstructed `P` satisfies the exact identity is accepted.
pub fn pair_orbit(x: &ConjugateTriple, y: &ConjugateTriple) -> Result<OrbitPairing> {
    let mut prec = x.precision().max(y.precision()).max(DEFAULT_PRECISION);
    loop {
        let xr = x.refine(prec)?;
        let yr = y.refine(prec)?;
        let mut resolved_all = true;
        for swap in [false, true] {
            let yy = if swap { yr.swapped() } else { yr.clone() };
            let Some(c) = interpolate([xr.ball(0), xr.ball(1), xr.ball(2)], [yy.ball(0), yy.ball(1), yy.ball(2)]) else {
                resolved_all = false;
                continue;
            };
            if c.iter().any(|ci| !ci.im().contains_zero()) {
                continue;
            }
            let rec: Option<Vec<Rational>> = c
                .iter()
                .map(|ci| ratrec::reconstruct(&ci.re(), ratrec::default_den_bits(prec)))
                .collect();
            let Some(rec) = rec else {
                resolved_all = false;
                continue;
            };
            let relator = QPoly::from_coeffs(rec);
            let pairing = OrbitPairing {
                x: xr.clone(),
                y: yy.clone(),
                relator,
                y_swapped: swap,
                precision: prec,
            };
            if pairing.verify_exact() {
                return Ok(pairing);
            }
        }
        if prec >= PRECISION_CAP {
            return Err(Error::ReconstructionFailed {
                stage: Stage::Numfield,
                what: "no rational relator between the conjugate triples".into(),
            });
        }
        if resolved_all {
            log::debug!("relator candidates failed exact check at {prec} bits; doubling");
        }
        prec *= 2;
    }
}

/// `u / v` as an exact algebraic number.
///
/// The minimal polynomial comes from the norm of `f_u(t w)` over the roots
/// `w` of `f_v`, reduced to the irreducible factor vanishing at `u / v`.
pub fn conjugate_ratio(u: &AlgebraicNumber, v: &AlgebraicNumber) -> Result<AlgebraicNumber> {
    if v.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let norm = BiPoly::scaled_product(&u.minpoly).norm(&v.minpoly);
    let prec = u.precision().max(v.precision());
    minimal_polynomial_of(
        &norm,
        |p| {
            let (a, b) = (u.refine(p)?, v.refine(p)?);
            a.value().div(b.value()).ok_or(Error::DivisionByZero)
        },
        prec,
    )
}

/// Independent route for the minimal polynomial of `x_j / x_i` (`i != j`)
/// over a conjugate triple whose Galois group is the full symmetric group:
/// round `lc * prod (t - x_a / x_b)` over all ordered pairs `a != b`.
pub fn ratio_minpoly_numeric(x: &ConjugateTriple, expected_lead: &Integer) -> Result<QPoly> {
    let mut prec = x.precision();
    loop {
        let xr = x.refine(prec)?;
        let mut quotients = Vec::with_capacity(6);
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    quotients.push(xr.ball(a).div(xr.ball(b)).ok_or(Error::DivisionByZero)?);
                }
            }
        }
        let lc = CBall::from_integer(prec, expected_lead);
        let coeffs: Vec<CBall> = roots::poly_from_roots(&quotients).iter().map(|c| c.mul(&lc)).collect();
        if let Some(ints) = roots::round_coefficients(&coeffs) {
            return Ok(QPoly::from_integers(&ints));
        }
        if prec >= PRECISION_CAP {
            return Err(Error::exhausted(Stage::Numfield, prec, "ratio polynomial coefficients not resolved"));
        }
        prec *= 2;
    }
}

/// Degree of `x^n`.
pub fn degree_of_power(x: &AlgebraicNumber, n: u32) -> Result<usize> {
    Ok(x.pow(n)?.degree())
}

/// Certified `|z|` compared against 1: `Some(true)` if the ball of `|z|`
/// contains 1 at the current precision.
pub fn on_unit_circle(z: &AlgebraicNumber) -> bool {
    let one = Float::with_val(z.precision(), 1);
    z.value().abs().contains(&one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(c: &[i64], approx: (f64, f64)) -> AlgebraicNumber {
        let p = QPoly::from_ints(c);
        let a = CBall::from_parts(
            &RBall::exact(Float::with_val(128, approx.0)),
            &RBall::exact(Float::with_val(128, approx.1)),
        )
        .with_rad(crate::ball::Mag::pow2(-8));
        AlgebraicNumber::from_irreducible(&p, &a, 128).unwrap()
    }

    #[test]
    fn heights_of_rationals() {
        let one = AlgebraicNumber::rational(&Rational::from(1), 128);
        assert!(one.height().unwrap().ball().contains(&Float::with_val(64, 0)));
        let two = AlgebraicNumber::rational(&Rational::from(2), 128);
        let ln2 = Float::with_val(128, 2).ln();
        assert!(two.height().unwrap().ball().contains(&ln2));
        let half = AlgebraicNumber::rational(&Rational::from((1, 2)), 128);
        assert!(half.height().unwrap().ball().contains(&ln2));
    }

    #[test]
    fn minus_one_and_i_are_roots_of_unity() {
        assert!(AlgebraicNumber::rational(&Rational::from(-1), 64).is_root_of_unity());
        assert!(num(&[1, 0, 1], (0.0, 1.0)).is_root_of_unity());
        assert!(!num(&[-2, 0, 0, 1], (1.26, 0.0)).is_root_of_unity());
        // (3 + 4i)/5 lies on the unit circle but is no root of unity
        assert!(!num(&[5, -6, 5], (0.6, 0.8)).is_root_of_unity());
    }

    #[test]
    fn ratio_of_equal_numbers_is_one() {
        let a = num(&[-2, 0, 0, 1], (1.26, 0.0));
        let r = conjugate_ratio(&a, &a).unwrap();
        assert_eq!(r.minpoly(), &QPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn ratio_of_cube_root_conjugates_is_cube_root_of_unity() {
        let a = num(&[-2, 0, 0, 1], (-0.63, 1.09));
        let b = a.conjugate((a.index() + 1) % 3);
        let r = conjugate_ratio(&a, &b).unwrap();
        assert_eq!(r.degree(), 2);
        assert!(r.is_root_of_unity());
    }

    #[test]
    fn power_and_inverse() {
        let a = num(&[-2, 0, 1], (1.414, 0.0));
        assert_eq!(a.pow(2).unwrap().minpoly(), &QPoly::from_ints(&[-2, 1]));
        let inv = a.inverse().unwrap();
        assert_eq!(inv.minpoly(), &QPoly::from_ints(&[-1, 0, 2]));
    }

    #[test]
    fn product_of_square_roots() {
        let a = num(&[-2, 0, 1], (1.414, 0.0));
        let b = num(&[-3, 0, 1], (1.732, 0.0));
        let c = a.mul(&b).unwrap();
        assert_eq!(c.minpoly(), &QPoly::from_ints(&[-6, 0, 1]));
    }
}
