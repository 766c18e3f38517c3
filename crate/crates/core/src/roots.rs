//! Certified isolation of the complex roots of squarefree polynomials over Q.

use rug::{Float, Integer};

use crate::ball::{CBall, Mag, RBall};
use crate::error::{Error, Result, Stage};
use crate::poly::QPoly;

fn eval_center(f: &[CBall], z: &CBall) -> CBall {
    let mut acc = CBall::zero(z.prec());
    for a in f.iter().rev() {
        acc = acc.mul(z).add(a).center();
    }
    acc
}

/// Simultaneous Weierstrass iteration; returns approximations only.
fn weierstrass(f: &QPoly, prec: u32, max_iter: usize) -> Vec<CBall> {
    let n = f.deg();
    let fm = f.monic();
    let coeffs: Vec<CBall> = fm.coeffs().iter().map(|a| CBall::from_rational(prec, a)).collect();
    // Cauchy-style radius 1 + max |a_k|
    let bound = fm
        .coeffs()
        .iter()
        .take(n)
        .map(|a| a.to_f64().abs())
        .fold(0.0f64, f64::max);
    let r = (1.0 + bound).powf(1.0 / n as f64).max(1.0);
    let seed = CBall::from_parts(&RBall::decimal(prec, 4, 1), &RBall::decimal(prec, 9, 1));
    let mut z: Vec<CBall> = (0..n)
        .map(|k| seed.pow(k as u64).mul_real(&RBall::exact(Float::with_val(prec, r))).center())
        .collect();
    let tol = {
        let mut t = Float::with_val(prec, 1);
        t >>= prec as i32 - 16;
        t
    };
    for _ in 0..max_iter {
        let mut max_step = Float::new(prec);
        for i in 0..n {
            let num = eval_center(&coeffs, &z[i]);
            let mut den = CBall::from_int(prec, 1);
            for (j, zj) in z.iter().enumerate() {
                if j != i {
                    den = den.mul(&z[i].sub(zj)).center();
                }
            }
            let step = match num.center().div(&den) {
                Some(s) => s.center(),
                None => {
                    // coincident iterates: perturb
                    CBall::from_parts(&RBall::decimal(prec, 1, 3), &RBall::decimal(prec, 1, 3))
                }
            };
            let mag = step.abs_upper();
            let zabs = z[i].abs_upper();
            let rel = if zabs > 1 { Float::with_val(prec, &mag / &zabs) } else { mag };
            if rel > max_step {
                max_step = rel;
            }
            z[i] = z[i].sub(&step).center();
        }
        if max_step < tol {
            break;
        }
    }
    z
}

/// Certified inclusion discs for all roots of a squarefree `f`.
///
/// Each returned disc contains exactly one root; discs are pairwise
/// disjoint. Fails with a precision error when separation cannot be
/// certified at `prec`.
pub fn isolate_roots(f: &QPoly, prec: u32) -> Result<Vec<CBall>> {
    let n = f.deg();
    if n == 0 {
        return Ok(vec![]);
    }
    if !f.is_squarefree() {
        return Err(Error::precondition(Stage::Numfield, "root isolation needs a squarefree polynomial"));
    }
    let approx = weierstrass(f, prec, 2000);
    let df = f.derivative();
    let mut discs = Vec::with_capacity(n);
    for z in &approx {
        // Newton polish at the centre
        let mut z = z.clone();
        for _ in 0..3 {
            let v = f.eval_ball(&z);
            let d = df.eval_ball(&z);
            match v.div(&d) {
                Some(s) => z = z.sub(&s).center(),
                None => break,
            }
        }
        let v = f.eval_ball(&z);
        let d = df.eval_ball(&z);
        let q = v
            .div(&d)
            .ok_or_else(|| Error::exhausted(Stage::Numfield, prec, "derivative vanishes near a root"))?;
        // a disc of radius n |f/f'| about z contains a root
        let rad = Mag::from_abs(&q.abs_upper()).mul(&Mag::from_u64(n as u64));
        discs.push(z.center().with_rad(rad));
    }
    for i in 0..n {
        for j in i + 1..n {
            if !discs[i].disjoint(&discs[j]) {
                return Err(Error::exhausted(Stage::Numfield, prec, "root discs overlap"));
            }
        }
    }
    Ok(discs)
}

/// Root `i` is real when no disc other than its own meets its mirror image.
pub fn root_is_real(i: usize, all: &[CBall]) -> bool {
    let mirror = all[i].conj();
    !all[i].disjoint(&mirror)
        && all
            .iter()
            .enumerate()
            .all(|(j, d)| j == i || d.disjoint(&mirror))
}

/// Order roots as real roots by decreasing value, then complex roots by
/// decreasing real part with the upper half-plane member of each conjugate
/// pair first.
pub fn canonical_order(roots: &mut Vec<CBall>) {
    let mut tagged: Vec<(bool, CBall)> = (0..roots.len())
        .map(|i| (root_is_real(i, roots), roots[i].clone()))
        .collect();
    tagged.sort_by(|(ra, a), (rb, b)| {
        rb.cmp(ra)
            .then_with(|| b.re_mid().partial_cmp(a.re_mid()).unwrap())
            .then_with(|| b.im_mid().partial_cmp(a.im_mid()).unwrap())
    });
    *roots = tagged.into_iter().map(|(_, r)| r).collect();
}

/// Isolate with precision doubling from `prec` up to `cap`.
pub fn isolate_roots_adaptive(f: &QPoly, prec: u32, cap: u32) -> Result<(Vec<CBall>, u32)> {
    let mut p = prec;
    loop {
        match isolate_roots(f, p) {
            Ok(r) => return Ok((r, p)),
            Err(e) if e.is_precision() && p < cap => p *= 2,
            Err(e) => return Err(e),
        }
    }
}

/// The irreducible factor of `f` over Q that vanishes at root `target` of
/// `roots` (the full certified root list of the squarefree part of `f`).
///
/// Candidate factors are products over root subsets containing the target,
/// scaled by the leading coefficient of the primitive form and rounded to
/// integers, then confirmed by exact division. Irreducibility of the result
/// follows from minimality over subsets.
pub fn factor_containing(f: &QPoly, roots: &[CBall], target: usize) -> Result<QPoly> {
    let g = f.squarefree_part();
    let n = g.deg();
    if roots.len() != n {
        return Err(Error::precondition(Stage::Numfield, "root list does not match the squarefree part"));
    }
    let prim = QPoly::from_integers(&g.primitive_integer());
    let lc = prim.lead().into_numer_denom().0;
    let prec = roots[target].prec();
    let others: Vec<usize> = (0..n).filter(|&i| i != target).collect();
    let mut masks: Vec<u32> = (0..1u32 << others.len()).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    for mask in masks {
        let members = std::iter::once(target).chain(
            others
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &r)| r),
        );
        let chosen: Vec<CBall> = members.map(|r| roots[r].clone()).collect();
        let lc_ball = CBall::from_integer(prec, &lc);
        let prod: Vec<CBall> = poly_from_roots(&chosen).iter().map(|c| c.mul(&lc_ball)).collect();
        if prod.iter().any(|c| c.rad().as_float() > &Float::with_val(32, 0.25)) {
            return Err(Error::exhausted(Stage::Numfield, prec, "factor coefficients not resolved"));
        }
        if let Some(ints) = round_coefficients(&prod) {
            let cand = QPoly::from_integers(&ints);
            if prim.div_exact(&cand).is_some() {
                return Ok(QPoly::from_integers(&cand.primitive_integer()));
            }
        }
    }
    Ok(prim)
}

/// Coefficients of `prod (x - r)` over the given balls, leading coefficient 1.
pub fn poly_from_roots(roots: &[CBall]) -> Vec<CBall> {
    let prec = roots.first().map(|r| r.prec()).unwrap_or(64);
    let mut prod = vec![CBall::from_int(prec, 1)];
    for r in roots {
        let mut next = vec![CBall::zero(prec); prod.len() + 1];
        for (k, c) in prod.iter().enumerate() {
            next[k + 1] = next[k + 1].add(c);
            next[k] = next[k].sub(&c.mul(r));
        }
        prod = next;
    }
    prod
}

/// Round each coefficient ball to its unique integer.
pub fn round_coefficients(c: &[CBall]) -> Option<Vec<Integer>> {
    c.iter()
        .map(|b| {
            if b.im().contains_zero() {
                b.re().unique_integer()
            } else {
                None
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isolates_roots_of_cubic_with_one_real_root() {
        let f = QPoly::from_ints(&[-2, 0, 0, 1]);
        let mut r = isolate_roots(&f, 128).unwrap();
        canonical_order(&mut r);
        assert!(r[0].im().contains_zero());
        let cbrt2 = Float::with_val(128, 2).cbrt();
        assert!(r[0].re().contains(&cbrt2));
        assert!(r[1].im_mid() > &0);
        assert!(r[1].conj().overlaps(&r[2]));
    }

    #[test]
    fn factor_containing_picks_the_right_factor() {
        let a = QPoly::from_ints(&[1, 1, 1]);
        let b = QPoly::from_ints(&[-2, 0, 0, 1]);
        let f = &a * &b;
        let roots = isolate_roots(&f, 128).unwrap();
        let target = roots
            .iter()
            .position(|r| r.im().contains_zero())
            .unwrap();
        assert_eq!(factor_containing(&f, &roots, target).unwrap(), b);
    }

    #[test]
    fn overlapping_discs_report_precision() {
        // two roots 2^-60 apart are not separable at 32 bits
        let e = rug::Rational::from((1, 1u64 << 60));
        let f = &QPoly::from_coeffs(vec![-rug::Rational::from(1), rug::Rational::from(1)])
            * &QPoly::from_coeffs(vec![-(rug::Rational::from(1) + e), rug::Rational::from(1)]);
        assert!(isolate_roots(&f, 32).unwrap_err().is_precision());
        assert_eq!(isolate_roots(&f, 256).unwrap().len(), 2);
    }
}
