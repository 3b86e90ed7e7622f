use std::cmp::Ordering;

use num_rational::BigRational;

use super::rect::{split_point, split_ratio};
use super::{Budget, RootEnclosure, RootError, UniquenessProof};
use crate::ball::{BallReal, Dyadic, Mag};
use crate::expr::{differentiate, eval_real, Expr};

fn point(x: &Dyadic, prec: u32) -> BallReal {
    BallReal::exact(x.clone(), prec)
}

fn sign_at(h: &Expr, x: &Dyadic, prec: u32) -> Option<Ordering> {
    eval_real(h, &point(x, prec), prec).ok()?.sign()
}

/// Interval Newton: `m - h(m)/h'(X)` lands strictly inside `X`.
pub(crate) fn newton_contracts(h: &Expr, dh: &Expr, x: &BallReal, prec: u32) -> bool {
    newton_step(h, dh, x, prec).is_some_and(|n| x.contains_ball_strictly(&n))
}

fn newton_step(h: &Expr, dh: &Expr, x: &BallReal, prec: u32) -> Option<BallReal> {
    let m = x.mid().clone();
    let hm = eval_real(h, &point(&m, prec), prec).ok()?;
    let d = eval_real(dh, x, prec).ok()?;
    let q = hm.div(&d).ok()?;
    Some(point(&m, prec).sub(&q))
}

/// `h'` has constant sign on `X` and `h` has opposite strict signs at its ends.
pub(crate) fn sign_change_monotone(h: &Expr, dh: &Expr, x: &BallReal, prec: u32) -> bool {
    let monotone = eval_real(dh, x, prec).is_ok_and(|d| d.excludes_zero());
    if !monotone {
        return false;
    }
    match (sign_at(h, &x.lower(), prec), sign_at(h, &x.upper(), prec)) {
        (Some(a), Some(b)) => a != b && a != Ordering::Equal && b != Ordering::Equal,
        _ => false,
    }
}

enum Verdict {
    Discard,
    Root(UniquenessProof),
    Split,
}

fn examine(h: &Expr, dh: &Expr, lo: &BigRational, hi: &BigRational, prec: u32) -> Verdict {
    let x = BallReal::from_rational_interval(lo, hi, prec);
    match eval_real(h, &x, prec) {
        Ok(v) if v.excludes_zero() => return Verdict::Discard,
        Ok(_) => {}
        Err(_) => return Verdict::Split,
    }
    let Ok(d) = eval_real(dh, &x, prec) else {
        return Verdict::Split;
    };
    if d.contains_zero() {
        return Verdict::Split;
    }
    let (l, _) = Dyadic::from_rational(lo, prec);
    let (u, _) = Dyadic::from_rational(hi, prec);
    let exact_ends = l.to_rational() == *lo && u.to_rational() == *hi;
    if exact_ends {
        let ends = (sign_at(h, &l, prec), sign_at(h, &u, prec));
        if let (Some(a), Some(b)) = ends {
            if a != Ordering::Equal && b != Ordering::Equal {
                return if a == b {
                    Verdict::Discard
                } else {
                    Verdict::Root(UniquenessProof::SignChangeMonotone)
                };
            }
        }
    }
    if newton_contracts(h, dh, &x, prec) {
        return Verdict::Root(UniquenessProof::NewtonContraction);
    }
    Verdict::Split
}

fn choose_split(h: &Expr, lo: &BigRational, hi: &BigRational, prec: u32) -> BigRational {
    let base = split_ratio();
    let offsets = [0i64, -1, 1, -2, 2];
    let first = split_point(lo, hi, &base);
    for k in offsets {
        let t = &base + BigRational::new(k.into(), 31.into());
        let m = split_point(lo, hi, &t);
        let (d, _) = Dyadic::from_rational(&m, prec.max(64) * 2);
        if d.to_rational() == m && sign_at(h, &d, prec).is_some_and(|s| s != Ordering::Equal) {
            return m;
        }
    }
    first
}

type Found = Vec<(BigRational, BigRational, UniquenessProof)>;

fn isolate_at(h: &Expr, dh: &Expr, a: &BigRational, b: &BigRational, prec: u32, depth: u32) -> Result<Found, RootError> {
    let mut stack = vec![(a.clone(), b.clone(), 0u32)];
    let mut found = Vec::new();
    while let Some((lo, hi, level)) = stack.pop() {
        match examine(h, dh, &lo, &hi, prec) {
            Verdict::Discard => {}
            Verdict::Root(p) => found.push((lo, hi, p)),
            Verdict::Split => {
                if level >= depth {
                    return Err(RootError::Undecided {
                        region: format!("[{}, {}]", approx(&lo), approx(&hi)),
                        prec,
                    });
                }
                let m = choose_split(h, &lo, &hi, prec);
                stack.push((m.clone(), hi, level + 1));
                stack.push((lo, m, level + 1));
            }
        }
    }
    found.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(found)
}

fn approx(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Every real zero of `h` in `[a, b]`, each in its own enclosure of width
/// at most `2^-prec`.
pub fn isolate_real_roots(h: &Expr, a: &BigRational, b: &BigRational, prec: u32) -> Result<Vec<RootEnclosure>, RootError> {
    isolate_real_roots_with(h, a, b, prec, &Budget::default())
}

pub fn isolate_real_roots_with(
    h: &Expr,
    a: &BigRational,
    b: &BigRational,
    prec: u32,
    budget: &Budget,
) -> Result<Vec<RootEnclosure>, RootError> {
    if a >= b {
        return Err(RootError::InvalidRegion(format!("need a < b, got [{}, {}]", a, b)));
    }
    let dh = differentiate(h);
    let mut wp = budget.start_prec;
    let found = loop {
        match isolate_at(h, &dh, a, b, wp, budget.real_depth) {
            Ok(f) => break f,
            Err(RootError::Undecided { .. }) if wp < budget.max_prec => wp *= 2,
            Err(e) => return Err(e),
        }
    };
    found
        .into_iter()
        .map(|(lo, hi, proof)| {
            let enc = RootEnclosure::real_root(BallReal::from_rational_interval(&lo, &hi, wp), proof, wp);
            refine(h, &dh, &enc, prec)
        })
        .collect()
}

/// Newton iteration with a bisection fallback, then a final box of radius
/// `2^-(target+2)` around the last midpoint whose proof is replayed.
pub(crate) fn refine(h: &Expr, dh: &Expr, enc: &RootEnclosure, target: u32) -> Result<RootEnclosure, RootError> {
    let mut wp = enc.prec_used.max(target + 64);
    let max_prec = (target + 64).max(4096).max(wp);
    let mut x = enc.re().with_prec(wp);
    let goal = Mag::pow2(-(target as i64) - 4);
    let undecided = |wp| RootError::Undecided {
        region: format!("{:?}", enc.re()),
        prec: wp,
    };
    let mut lo_sign = None;
    let mut iterations = 0;
    while x.width() > goal {
        iterations += 1;
        if iterations > 4 * (target as usize + 64) {
            return Err(undecided(wp));
        }
        if let Some(n) = newton_step(h, dh, &x, wp) {
            if let Some(y) = x.intersect(&n) {
                if y.width() < x.width().mul_u64(3).mul_2exp(-2) {
                    x = y;
                    continue;
                }
            }
        }
        // bisection on the sign of h
        let m = x.mid().clone();
        let sm = sign_at(h, &m, wp).filter(|s| *s != Ordering::Equal);
        if lo_sign.is_none() {
            lo_sign = sign_at(h, &x.lower(), wp).filter(|s| *s != Ordering::Equal);
        }
        match (sm, lo_sign) {
            (Some(s), Some(l)) => {
                x = if s == l {
                    BallReal::from_interval(&m, &x.upper(), wp)
                } else {
                    BallReal::from_interval(&x.lower(), &m, wp)
                };
                if s == l {
                    lo_sign = Some(s);
                }
            }
            _ => {
                if wp >= max_prec {
                    return Err(undecided(wp));
                }
                wp = (wp * 2).min(max_prec);
                x = x.with_prec(wp);
                lo_sign = None;
            }
        }
    }
    let r = Mag::pow2(-(target as i64) - 2);
    let b = BallReal::new(x.mid().clone(), r, wp);
    if sign_change_monotone(h, dh, &b, wp) {
        return Ok(RootEnclosure::real_root(b, UniquenessProof::SignChangeMonotone, wp));
    }
    if newton_contracts(h, dh, &b, wp) {
        return Ok(RootEnclosure::real_root(b, UniquenessProof::NewtonContraction, wp));
    }
    Ok(RootEnclosure::real_root(x, enc.proof, wp))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn exp_root() {
        let h = parse_expr("e^x + x - 12").unwrap();
        let roots = isolate_real_roots(&h, &q(0, 1), &q(10, 1), 128).unwrap();
        assert_eq!(roots.len(), 1);
        let shown = roots[0].re().to_decimal(11);
        assert!(shown.starts_with("2.27472787148"), "{shown}");
        assert!(roots[0].narrower_than(128));
        assert!(super::super::verify(&h, &roots[0]));
    }

    #[test]
    fn no_real_roots() {
        let h = parse_expr("e^x - x + 7").unwrap();
        let roots = isolate_real_roots(&h, &q(-100, 1), &q(100, 1), 64).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn rational_roots_found_exactly() {
        // (x - 1/3)(x + 2)(x - 5/2)
        let h = parse_expr("(x - 1/3)*(x + 2)*(x - 5/2)").unwrap();
        let roots = isolate_real_roots(&h, &q(-10, 1), &q(10, 1), 80).unwrap();
        assert_eq!(roots.len(), 3);
        for (r, want) in roots.iter().zip([q(-2, 1), q(1, 3), q(5, 2)]) {
            assert!(r.re().contains_rational(&want));
        }
    }

    #[test]
    fn refine_is_noop_when_narrow() {
        let h = parse_expr("x - 1/3").unwrap();
        let roots = isolate_real_roots(&h, &q(0, 1), &q(1, 1), 100).unwrap();
        let same = super::super::refine_root(&h, &roots[0], 50).unwrap();
        assert_eq!(same, roots[0]);
        assert!(same.re().contains_rational(&q(1, 3)));
    }
}
