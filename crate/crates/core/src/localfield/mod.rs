//! Places of the sextic splitting field above a rational prime, valuations
//! of the conjugates there, and the resulting bound on the exponent `m`.

pub mod element;

use rug::{Integer, Rational};

pub use element::{LocalElement, LocalField};

use crate::ball::CBall;
use crate::error::{Error, Result, Stage};
use crate::modp::{certify_irreducible, primes_between};
use crate::numfield::{AlgebraicNumber, FieldElem, NumberField, OrbitPairing};
use crate::poly::{BiPoly, QPoly};
use crate::quadforms::PRECISION_CAP;
use crate::roots::{factor_containing, isolate_roots};

/// Starting precision, in powers of the uniformizer.
pub const DEFAULT_LOCAL_PRECISION: i64 = 20;
pub const LOCAL_PRECISION_CAP: i64 = 1280;
/// Smallest prime allowed by the sextic degree bound `p > 7`.
pub const FIRST_PRIME: u64 = 11;
pub const DEFAULT_PRIME_LIMIT: u64 = 200;
pub const MAX_SHIFT: i64 = 20;

const GLOBAL_DEGREE: usize = 6;
const EMBEDDING_CHECK_BITS: u32 = 1024;

/// `Q(theta)` for a primitive element `theta = x1 + c x2`, with all six
/// conjugates written as rational polynomials in `theta`.
#[derive(Clone, Debug)]
pub struct SplittingField {
    pub theta: AlgebraicNumber,
    pub shift: i64,
    pub x: [QPoly; 3],
    pub y: [QPoly; 3],
    pub x_class: QPoly,
    pub y_class: QPoly,
    pub relator: QPoly,
}

impl SplittingField {
    pub fn minpoly(&self) -> &QPoly {
        self.theta.minpoly()
    }

    pub fn field(&self) -> NumberField {
        NumberField::new(self.minpoly().clone())
    }

    /// Exact identities: the `x_i` are the roots of `H_x`, the `y_i` roots of
    /// `H_y`, `y_i = P(x_i)`, and `theta = x1 + c x2`.
    pub fn verify_exact(&self) -> bool {
        let k = self.field();
        let s = k.modulus();
        let distinct = self.x[0] != self.x[1] && self.x[1] != self.x[2] && self.x[0] != self.x[2];
        let theta = k.add(&self.x[0], &self.x[1].scale(&Rational::from(self.shift)));
        distinct
            && theta == k.generator()
            && (0..3).all(|i| {
                self.x_class.compose_mod(&self.x[i], s).is_zero()
                    && self.y_class.compose_mod(&self.y[i], s).is_zero()
                    && self.relator.compose_mod(&self.x[i], s) == self.y[i]
            })
    }

    /// Re-evaluate every expression on the archimedean embedding of
    /// `theta` and compare with the labelled root balls.
    pub fn verify_embeddings(&self, pairing: &OrbitPairing) -> Result<bool> {
        let prec = EMBEDDING_CHECK_BITS;
        let th = self.theta.refine(prec)?;
        let x = pairing.x.refine(prec)?;
        let y = pairing.y.refine(prec)?;
        let y = if pairing.y_swapped { swap_pair(&y) } else { y };
        Ok((0..3).all(|i| {
            self.x[i].eval_ball(th.value()).overlaps(x.ball(i)) && self.y[i].eval_ball(th.value()).overlaps(y.ball(i))
        }))
    }
}

fn swap_pair(t: &crate::numfield::ConjugateTriple) -> crate::numfield::ConjugateTriple {
    let mut out = t.clone();
    out.members.swap(1, 2);
    out
}

fn kpoly_mul(k: &NumberField, a: &[FieldElem], b: &[FieldElem]) -> Vec<FieldElem> {
    let mut out = vec![QPoly::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = k.add(&out[i + j], &k.mul(ai, bj));
        }
    }
    out
}

/// `g(theta - c v)` as a polynomial in `v` over `Q(theta)`.
fn shifted_over_field(k: &NumberField, g: &QPoly, c: i64) -> Vec<FieldElem> {
    let lin = vec![k.generator(), QPoly::constant(Rational::from(-c))];
    let mut acc = vec![QPoly::zero()];
    for coef in g.coeffs().iter().rev() {
        acc = kpoly_mul(k, &acc, &lin);
        acc[0] = k.add(&acc[0], &QPoly::constant(coef.clone()));
    }
    acc
}

/// Irreducibility of a candidate sextic, with the exact root-subset search
/// as fallback when no modular pattern certificate is found.
fn is_irreducible(s: &QPoly) -> Result<bool> {
    if certify_irreducible(s, 2000).is_some() {
        return Ok(true);
    }
    let mut prec = 256;
    loop {
        match isolate_roots(s, prec).and_then(|r| factor_containing(s, &r, 0)) {
            Ok(f) => return Ok(f.deg() == s.deg()),
            Err(e) if e.is_precision() && prec < PRECISION_CAP => prec *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// Find `theta = x1 + c x2` generating the splitting field, trying
/// `c = 2, 3, ..., 20`.
pub fn splitting_field_generator(pairing: &OrbitPairing) -> Result<SplittingField> {
    let h = pairing.x.class_poly.monic();
    if h.deg() != 3 {
        return Err(Error::precondition(Stage::Localfield, "expected a cubic class polynomial"));
    }
    for c in 2..=MAX_SHIFT {
        let cq = Rational::from(c);
        let nine = BiPoly::shifted(&h, &cq).norm(&h);
        // remove the diagonal factor prod (t - (1 + c) x_i)
        let diag = QPoly::from_coeffs(
            (0..=3)
                .map(|k| h.coeff(k) * Rational::from(Integer::from(Integer::u_pow_u((1 + c) as u32, 3 - k as u32))))
                .collect(),
        );
        let Some(s) = nine.div_exact(&diag) else {
            return Err(Error::invariant(Stage::Localfield, "diagonal factor does not divide the norm"));
        };
        if !s.is_squarefree() || !is_irreducible(&s)? {
            log::debug!("c = {c}: x1 + c x2 is not primitive");
            continue;
        }
        let prec = pairing.precision.max(256);
        let x = pairing.x.refine(prec)?;
        let approx = x.ball(0).add(&x.ball(1).mul(&CBall::from_int(prec, c)));
        let theta = AlgebraicNumber::from_irreducible(&s, &approx, prec)?;
        let k = NumberField::new(s.clone());
        let hv: Vec<FieldElem> = h.coeffs().iter().map(|a| QPoly::constant(a.clone())).collect();
        let g = k.poly_gcd(&hv, &shifted_over_field(&k, &h, c))?;
        if g.len() != 2 {
            continue;
        }
        let x2 = k.reduce(&-&g[0]);
        let x1 = k.sub(&k.generator(), &x2.scale(&cq));
        let x3 = k.sub(&k.sub(&QPoly::constant(-h.coeff(2)), &x1), &x2);
        let xs = [x1, x2, x3];
        let ys = [0, 1, 2].map(|i| pairing.relator.compose_mod(&xs[i], k.modulus()));
        let sf = SplittingField {
            theta,
            shift: c,
            x: xs,
            y: ys,
            x_class: pairing.x.class_poly.clone(),
            y_class: pairing.y.class_poly.clone(),
            relator: pairing.relator.clone(),
        };
        if !sf.verify_exact() {
            return Err(Error::invariant(Stage::Localfield, "conjugate expressions fail exact verification"));
        }
        if !sf.verify_embeddings(pairing)? {
            return Err(Error::invariant(Stage::Localfield, "conjugate expressions do not match their embeddings"));
        }
        return Ok(sf);
    }
    Err(Error::NoPrimitiveElement(MAX_SHIFT))
}

/// A place of the splitting field above `p`, realised as an embedding of
/// `theta` into a local field.
#[derive(Clone, Debug)]
pub struct LocalPlace {
    pub p: u64,
    pub e: usize,
    pub f: usize,
    /// Position in the canonical order of places above `p`.
    pub index: usize,
    /// Indices (into the sorted local roots of the minimal polynomial of
    /// `theta`) of the embeddings inducing this place.
    pub orbit: Vec<usize>,
    field: LocalField,
    theta: LocalElement,
}

impl LocalPlace {
    pub fn field(&self) -> &LocalField {
        &self.field
    }

    pub fn theta(&self) -> &LocalElement {
        &self.theta
    }

    pub fn precision(&self) -> i64 {
        self.theta.precision()
    }

    /// Image of an element of `Q(theta)` that is integral at this place.
    pub fn eval(&self, g: &QPoly) -> Result<LocalElement> {
        self.field.eval_qpoly(g, &self.theta)
    }

    /// Exact valuation of a nonzero integral element.
    pub fn valuation_of(&self, g: &QPoly) -> Result<i64> {
        let x = self.eval(g)?;
        self.field.valuation_exact(&x)
    }
}

/// Candidate local fields in increasing degree; within a degree,
/// increasing ramification, then increasing unit class.
fn candidate_fields(p: u64, prec: i64) -> Vec<LocalField> {
    let mut out = Vec::new();
    for d in [1usize, 2, 3, 6] {
        for e in (1..=d).filter(|e| d % e == 0) {
            let f = d / e;
            let q1 = Integer::from(Integer::u_pow_u(p as u32, f as u32)) - 1u32;
            let classes = q1.gcd(&Integer::from(e)).to_usize().unwrap();
            for k in 0..classes {
                out.push(LocalField::new(p, f, e, k, prec));
            }
        }
    }
    out
}

fn is_padic_rational(x: &LocalElement) -> bool {
    x.coords().iter().skip(1).all(|c| *c == 0)
}

fn product_poly(k: &LocalField, roots: &[&LocalElement]) -> Vec<LocalElement> {
    let mut acc = vec![k.one()];
    for r in roots {
        let mut next = vec![k.zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = k.add(&next[i + 1], a);
            next[i] = k.sub(&next[i], &k.mul(a, r));
        }
        acc = next;
    }
    acc
}

/// Group the embeddings of `theta` into places: two embeddings induce the
/// same place exactly when their images are roots of one irreducible factor
/// over `Q_p`.
fn group_orbits(k: &LocalField, roots: &[LocalElement]) -> Result<Vec<Vec<usize>>> {
    let size = k.degree();
    let n = roots.len();
    let mut left: Vec<usize> = (0..n).collect();
    let mut out = Vec::new();
    while let Some(&lead) = left.first() {
        let rest: Vec<usize> = left[1..].to_vec();
        let mut hits = Vec::new();
        for mask in 0u32..(1 << rest.len()) {
            if mask.count_ones() as usize != size - 1 {
                continue;
            }
            let members: Vec<usize> = std::iter::once(lead)
                .chain(rest.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &r)| r))
                .collect();
            let refs: Vec<&LocalElement> = members.iter().map(|&i| &roots[i]).collect();
            if product_poly(k, &refs).iter().all(is_padic_rational) {
                hits.push(members);
            }
        }
        match hits.len() {
            1 => {
                let orbit = hits.pop().unwrap();
                left.retain(|i| !orbit.contains(i));
                out.push(orbit);
            }
            0 => return Err(Error::invariant(Stage::Localfield, "no Q_p-rational factor through a root")),
            _ => {
                return Err(Error::InsufficientLocalPrecision {
                    p: k.p(),
                    prec: roots[lead].precision(),
                    what: "several candidate Q_p-factors".into(),
                })
            }
        }
    }
    Ok(out)
}

/// All places above `p` at the given local precision.
pub fn places_above_at(sf: &SplittingField, p: u64, prec: i64) -> Result<Vec<LocalPlace>> {
    let s = sf.minpoly();
    for k in candidate_fields(p, prec) {
        let roots = k.roots_of_qpoly(s)?;
        if roots.is_empty() {
            continue;
        }
        if roots.len() != GLOBAL_DEGREE {
            return Err(Error::InsufficientLocalPrecision {
                p,
                prec,
                what: format!("found {} of {GLOBAL_DEGREE} local roots in {k}", roots.len()),
            });
        }
        let orbits = group_orbits(&k, &roots)?;
        let total: usize = orbits.len() * k.degree();
        if total != GLOBAL_DEGREE || orbits.iter().any(|o| o.len() != k.degree()) {
            return Err(Error::invariant(Stage::Localfield, "sum of e f over places differs from the degree"));
        }
        return Ok(orbits
            .into_iter()
            .enumerate()
            .map(|(index, orbit)| LocalPlace {
                p,
                e: k.e(),
                f: k.f(),
                index,
                theta: roots[orbit[0]].clone(),
                orbit,
                field: k.clone(),
            })
            .collect());
    }
    Err(Error::UnsupportedLocalField(p))
}

/// Retry `f` with doubled local precision while it reports precision loss.
pub fn with_local_precision<T>(start: i64, mut f: impl FnMut(i64) -> Result<T>) -> Result<T> {
    let mut prec = start;
    loop {
        match f(prec) {
            Err(Error::InsufficientLocalPrecision { p, prec: at, what }) => {
                if prec >= LOCAL_PRECISION_CAP {
                    return Err(Error::InsufficientLocalPrecision { p, prec: at, what });
                }
                log::debug!("p = {p}: {what} at precision {prec}; doubling");
                prec *= 2;
            }
            other => return other,
        }
    }
}

pub fn places_above(sf: &SplittingField, p: u64) -> Result<Vec<LocalPlace>> {
    with_local_precision(DEFAULT_LOCAL_PRECISION, |prec| places_above_at(sf, p, prec))
}

/// Valuations of `x1, x2, x3, y1, y2, y3` at a place.
pub fn conjugate_valuations(sf: &SplittingField, place: &LocalPlace) -> Result<[i64; 6]> {
    let mut out = [0i64; 6];
    for i in 0..3 {
        out[i] = place.valuation_of(&sf.x[i])?;
        out[3 + i] = place.valuation_of(&sf.y[i])?;
    }
    Ok(out)
}

/// `v(x2) > 0`, `v(x3) > 0`, `v(x1) = v(y2) = v(y3) = 0`.
pub fn has_required_pattern(v: &[i64; 6]) -> bool {
    v[1] > 0 && v[2] > 0 && v[0] == 0 && v[4] == 0 && v[5] == 0
}

/// What the scan saw at one place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlaceSummary {
    pub index: usize,
    pub e: usize,
    pub f: usize,
    pub valuations: [i64; 6],
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeScan {
    pub p: u64,
    pub places: Vec<PlaceSummary>,
}

/// The place used for the local argument and its invariants.
#[derive(Clone, Debug)]
pub struct ValuationPattern {
    pub p: u64,
    pub place_index: usize,
    pub e: usize,
    pub f: usize,
    /// `v(x1), v(x2), v(x3), v(y1), v(y2), v(y3)`.
    pub valuations: [i64; 6],
    /// Order of `alpha = y3 / y2` in the residue field.
    pub m0: u64,
    /// `v(1 - alpha^m0)`.
    pub v0: i64,
    /// Every prime examined, in order, ending with `p`.
    pub scanned: Vec<PrimeScan>,
    place: LocalPlace,
    alpha: LocalElement,
}

impl ValuationPattern {
    pub fn place(&self) -> &LocalPlace {
        &self.place
    }

    pub fn alpha(&self) -> &LocalElement {
        &self.alpha
    }

    /// `v(p)`.
    pub fn vp(&self) -> i64 {
        self.e as i64
    }

    /// `v(1 - alpha^m)` by plain repeated multiplication.
    pub fn direct_valuation(&self, m: u64) -> Result<i64> {
        let k = self.place.field();
        let mut acc = k.one();
        for _ in 0..m {
            acc = k.mul(&acc, &self.alpha);
        }
        k.valuation_exact(&k.sub(&k.one(), &acc))
    }
}

fn alpha_at(sf: &SplittingField, place: &LocalPlace) -> Result<LocalElement> {
    let k = place.field();
    let y2 = place.eval(&sf.y[1])?;
    let y3 = place.eval(&sf.y[2])?;
    Ok(k.mul(&y3, &k.unit_inverse(&y2)?))
}

/// Least `m0 >= 1` with `alpha^m0 = 1` in the residue field.
pub fn order_in_residue_field(alpha: &LocalElement, place: &LocalPlace) -> Result<u64> {
    let k = place.field();
    if k.valuation_exact(alpha)? != 0 {
        return Err(Error::precondition(Stage::Localfield, "alpha is not a unit at the place"));
    }
    let fq = k.residue_field();
    fq.mult_order(&k.residue(alpha))
        .and_then(|m| m.to_u64())
        .ok_or_else(|| Error::invariant(Stage::Localfield, "residue of a unit is zero"))
}

fn analyse_place(sf: &SplittingField, place: &LocalPlace) -> Result<PlaceSummary> {
    let v = conjugate_valuations(sf, place)?;
    Ok(PlaceSummary {
        index: place.index,
        e: place.e,
        f: place.f,
        valuations: v,
        matches: has_required_pattern(&v),
    })
}

struct PlaceHit {
    place: LocalPlace,
    summary: PlaceSummary,
    alpha: LocalElement,
    m0: u64,
    v0: i64,
}

/// Examine the places above `p` in canonical order, stopping at the first
/// one with the required pattern.
fn scan_prime(sf: &SplittingField, p: u64) -> Result<(PrimeScan, Option<PlaceHit>)> {
    with_local_precision(DEFAULT_LOCAL_PRECISION, |prec| {
        let places = places_above_at(sf, p, prec)?;
        let mut summaries = Vec::new();
        for place in &places {
            let s = analyse_place(sf, place)?;
            summaries.push(s.clone());
            if s.matches {
                let alpha = alpha_at(sf, place)?;
                let m0 = order_in_residue_field(&alpha, place)?;
                let k = place.field();
                let v0 = k.valuation_exact(&k.sub(&k.one(), &k.pow(&alpha, m0)))?;
                let hit = PlaceHit {
                    place: place.clone(),
                    summary: s,
                    alpha,
                    m0,
                    v0,
                };
                return Ok((PrimeScan { p, places: summaries }, Some(hit)));
            }
        }
        Ok((PrimeScan { p, places: summaries }, None))
    })
}

fn pattern_from(p: u64, hit: PlaceHit, scanned: Vec<PrimeScan>) -> ValuationPattern {
    ValuationPattern {
        p,
        place_index: hit.place.index,
        e: hit.place.e,
        f: hit.place.f,
        valuations: hit.summary.valuations,
        m0: hit.m0,
        v0: hit.v0,
        scanned,
        place: hit.place,
        alpha: hit.alpha,
    }
}

/// Scan primes `11 <= p <= limit` in increasing order, and the places above
/// each in canonical order, for the first place with the required pattern.
pub fn find_valuation_pattern(sf: &SplittingField, limit: u64) -> Result<ValuationPattern> {
    let mut scanned = Vec::new();
    for p in primes_between(FIRST_PRIME, limit + 1) {
        let (scan, hit) = scan_prime(sf, p)?;
        scanned.push(scan);
        if let Some(hit) = hit {
            return Ok(pattern_from(p, hit, scanned));
        }
    }
    Err(Error::NoValuationPattern(limit))
}

/// The first place above a given prime with the required pattern.
pub fn valuation_pattern_at(sf: &SplittingField, p: u64) -> Result<ValuationPattern> {
    if p < FIRST_PRIME || !crate::modp::is_prime(p) {
        return Err(Error::precondition(Stage::Localfield, format!("{p} is not a prime above 7")));
    }
    let (scan, hit) = scan_prime(sf, p)?;
    match hit {
        Some(hit) => Ok(pattern_from(p, hit, vec![scan])),
        None => Err(Error::NoValuationPattern(p)),
    }
}

/// `v(1 - alpha^m)` from the structure of the place: zero unless
/// `m0 | m`, and `s e + v0` when `m = m0 p^s r` with `p` not dividing `r`.
pub fn prop_valuation(m: u64, pattern: &ValuationPattern) -> Result<i64> {
    if m == 0 {
        return Err(Error::precondition(Stage::Localfield, "m must be positive"));
    }
    if pattern.p <= GLOBAL_DEGREE as u64 + 1 {
        return Err(Error::precondition(Stage::Localfield, "p must exceed the degree plus one"));
    }
    if !m.is_multiple_of(pattern.m0) {
        return Ok(0);
    }
    let mut r = m / pattern.m0;
    let mut s = 0i64;
    while r.is_multiple_of(pattern.p) {
        r /= pattern.p;
        s += 1;
    }
    Ok(s * pattern.e as i64 + pattern.v0)
}

/// `e log n / log p + v0` as a real ball.
pub fn padic_exponent_bound(n: u64, pattern: &ValuationPattern, prec: u32) -> crate::ball::RBall {
    use crate::ball::RBall;
    let ln = |v: u64| RBall::from_int(prec, v as i64).ln().expect("positive");
    let ratio = ln(n.max(1)).mul_int(pattern.e as i64).div(&ln(pattern.p)).expect("log p > 0");
    ratio.add(&RBall::from_int(prec, pattern.v0))
}

/// Largest integer `m` with `m <= e log n / log p + v0`, decided exactly:
/// `v0 + max { k : p^k <= n^e }`.
pub fn max_exponent(n: u64, pattern: &ValuationPattern) -> u64 {
    max_exponent_for(n, pattern.p, pattern.e as u32, pattern.v0)
}

/// [`max_exponent`] from the raw invariants of the place.
pub fn max_exponent_for(n: u64, p: u64, e: u32, v0: i64) -> u64 {
    use rug::ops::Pow;
    let ne = Integer::from(n.max(1)).pow(e);
    let mut k = 0u64;
    let mut pk = Integer::from(p);
    while pk <= ne {
        k += 1;
        pk *= p;
    }
    (k as i64 + v0) as u64
}

/// Independent check of the place/label correspondence: the roots of the
/// two class polynomials found directly in the local field must be exactly
/// the images of `x_i`, `y_i`, with matching valuations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootMatching {
    /// `x_perm[i]` is the index of the direct local root equal to `x_i`.
    pub x_perm: [usize; 3],
    pub y_perm: [usize; 3],
    pub valuations: [i64; 6],
}

pub fn match_local_roots(sf: &SplittingField, place: &LocalPlace) -> Result<RootMatching> {
    let k = place.field();
    let mut x_perm = [usize::MAX; 3];
    let mut y_perm = [usize::MAX; 3];
    let mut valuations = [0i64; 6];
    for (class, exprs, perm, off) in [(&sf.x_class, &sf.x, &mut x_perm, 0usize), (&sf.y_class, &sf.y, &mut y_perm, 3)] {
        let direct = k.roots_of_qpoly(class)?;
        if direct.len() != 3 {
            return Err(Error::invariant(Stage::Localfield, "class polynomial does not split in the local field"));
        }
        for i in 0..3 {
            let img = place.eval(&exprs[i])?;
            let hits: Vec<usize> = (0..3).filter(|&j| k.congruent(&img, &direct[j])).collect();
            match hits.as_slice() {
                [j] => {
                    perm[i] = *j;
                    valuations[off + i] = k.valuation_exact(&direct[*j])?;
                }
                [] => return Err(Error::invariant(Stage::Localfield, "local image matches no direct root")),
                _ => {
                    return Err(Error::InsufficientLocalPrecision {
                        p: place.p,
                        prec: img.precision(),
                        what: "local image matches several roots".into(),
                    })
                }
            }
        }
        let mut seen = *perm;
        seen.sort();
        if seen != [0, 1, 2] {
            return Err(Error::invariant(Stage::Localfield, "local root matching is not a bijection"));
        }
    }
    Ok(RootMatching {
        x_perm,
        y_perm,
        valuations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn candidate_order_starts_unramified() {
        let c = candidate_fields(11, 10);
        assert_eq!((c[0].e(), c[0].f()), (1, 1));
        assert_eq!((c[1].e(), c[1].f()), (1, 2));
        assert_eq!((c[2].e(), c[2].f(), c[2].u_class()), (2, 1, 0));
        assert_eq!((c[3].e(), c[3].f(), c[3].u_class()), (2, 1, 1));
        assert!(c.iter().all(|k| 6 % k.degree() == 0));
    }
}
