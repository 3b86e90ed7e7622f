use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::rect::split_ratio;
use super::{winding_number, Budget, Rect, RootEnclosure, RootError, UniquenessProof};
use crate::ball::{BallComplex, BallReal, Dyadic, Mag};
use crate::expr::{differentiate, eval, Expr};

/// Roots found in a rectangle, plus the pieces where `h` could not be
/// shown holomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexSearch {
    pub roots: Vec<RootEnclosure>,
    pub avoided: Vec<Rect>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalModulus {
    pub roots: Vec<RootEnclosure>,
    /// Half-side of each origin-centred square examined, with its winding number.
    pub scanned: Vec<(BigRational, i64)>,
}

const SEED: u64 = 0x7472_616e_7363_6572;

fn center(x: &BallComplex, prec: u32) -> BallComplex {
    BallComplex::new(
        BallReal::exact(x.re.mid().clone(), prec),
        BallReal::exact(x.im.mid().clone(), prec),
    )
}

/// Krawczyk operator `m - y h(m) + (1 - y h'(X)) (X - m)` with `y` a
/// point approximation of `1/h'(m)`.
fn krawczyk(h: &Expr, dh: &Expr, x: &BallComplex, prec: u32) -> Option<BallComplex> {
    let m = center(x, prec);
    let hm = eval(h, &m, prec).ok()?;
    let dm = eval(dh, &m, prec).ok()?;
    let y = center(&BallComplex::one(prec).div(&dm).ok()?, prec);
    let dx = eval(dh, x, prec).ok()?;
    let slope = BallComplex::one(prec).sub(&y.mul(&dx));
    Some(m.sub(&y.mul(&hm)).add(&slope.mul(&x.sub(&m))))
}

/// The Krawczyk image lands strictly inside `X`: exactly one zero in `X`.
pub(crate) fn newton_contracts(h: &Expr, dh: &Expr, x: &BallComplex, prec: u32) -> bool {
    krawczyk(h, dh, x, prec).is_some_and(|k| x.contains_ball_strictly(&k))
}

fn square_ball(x: &BallComplex, r: Mag, prec: u32) -> BallComplex {
    BallComplex::new(
        BallReal::new(x.re.mid().clone(), r, prec),
        BallReal::new(x.im.mid().clone(), r, prec),
    )
}

/// Narrow a unique-root box: Krawczyk steps, with quadrisection by winding
/// number when they stall.
pub(crate) fn refine(h: &Expr, dh: &Expr, enc: &RootEnclosure, target: u32) -> Result<RootEnclosure, RootError> {
    let mut wp = enc.prec_used.max(target + 64);
    let max_prec = (target + 64).max(4096).max(wp);
    let goal = Mag::pow2(-(target as i64) - 4);
    let mut x = enc.ball().with_prec(wp);
    let mut iterations = 0;
    while x.width() > goal {
        iterations += 1;
        if iterations > 4 * (target as usize + 64) {
            return Err(RootError::Undecided {
                region: Rect::from_ball(&x).to_string(),
                prec: wp,
            });
        }
        if let Some(k) = krawczyk(h, dh, &x, wp) {
            if let Some(y) = x.intersect(&k) {
                if y.width() < x.width().mul_u64(3).mul_2exp(-2) {
                    x = y;
                    continue;
                }
            }
        }
        match quadrisect_to_root(h, &Rect::from_ball(&x), wp) {
            Some(child) => x = child.to_ball(wp),
            None if wp < max_prec => {
                wp = (wp * 2).min(max_prec);
                x = x.with_prec(wp);
            }
            None => {
                return Err(RootError::Undecided {
                    region: Rect::from_ball(&x).to_string(),
                    prec: wp,
                })
            }
        }
    }
    let b = square_ball(&x, Mag::pow2(-(target as i64) - 2), wp);
    if newton_contracts(h, dh, &b, wp) {
        return Ok(RootEnclosure::complex_root(b, UniquenessProof::NewtonContraction, wp));
    }
    if winding_number(h, &Rect::from_ball(&b), wp) == Ok(1) {
        return Ok(RootEnclosure::winding_one(b, wp));
    }
    let proof = if newton_contracts(h, dh, &x, wp) {
        UniquenessProof::NewtonContraction
    } else {
        UniquenessProof::WindingOne
    };
    Ok(RootEnclosure::complex_root(x, proof, wp))
}

fn ratios() -> impl Iterator<Item = BigRational> {
    let base = split_ratio();
    [0i64, -1, 1, -2, 2, -3, 3]
        .into_iter()
        .map(move |k| &base + BigRational::new(k.into(), 31.into()))
}

/// The quadrant of `rect` holding its single zero.
fn quadrisect_to_root(h: &Expr, rect: &Rect, prec: u32) -> Option<Rect> {
    for t in ratios() {
        let (re, im) = rect.split_at(&t);
        let mut hit = None;
        let mut clean = true;
        for q in rect.quadrants_at(&re, &im) {
            match winding_number(h, &q, prec) {
                Ok(0) => {}
                Ok(1) if hit.is_none() => hit = Some(q),
                _ => {
                    clean = false;
                    break;
                }
            }
        }
        if clean {
            if let Some(q) = hit {
                return Some(q);
            }
        }
    }
    None
}

type Winding = Result<i64, RootError>;

/// Quadrants of `rect` with their winding numbers, choosing a split whose
/// cut lines keep clear of zeros.
fn subdivide(h: &Expr, rect: &Rect, prec: u32) -> Option<Vec<(Rect, Winding)>> {
    for t in ratios() {
        let (re, im) = rect.split_at(&t);
        let children: Vec<_> = rect
            .quadrants_at(&re, &im)
            .into_iter()
            .map(|q| {
                let w = winding_number(h, &q, prec);
                (q, w)
            })
            .collect();
        if !children.iter().any(|(_, w)| matches!(w, Err(RootError::BoundaryZero { .. }))) {
            return Some(children);
        }
    }
    None
}

fn random_eps(rng: &mut ChaCha8Rng, prec: u32) -> BigRational {
    let k: u64 = rng.gen_range(1..=1 << 16);
    let shift = (prec / 4 + 16) as usize;
    BigRational::new(BigInt::from(k), BigInt::one() << shift)
}

/// Winding number of `rect`, pushing the edges outward by a small random
/// amount when a zero sits on the boundary.
fn winding_perturbed(h: &Expr, rect: &Rect, prec: u32, budget: &Budget, rng: &mut ChaCha8Rng) -> Result<(Rect, i64), RootError> {
    let mut r = rect.clone();
    let mut retries = 0;
    loop {
        match winding_number(h, &r, prec) {
            Ok(w) => return Ok((r, w)),
            Err(RootError::BoundaryZero { .. }) if retries < budget.perturb_retries => {
                retries += 1;
                r = rect.inflate(&random_eps(rng, prec));
            }
            Err(e) => return Err(e),
        }
    }
}

/// Every zero of `h` in the rectangle, each in a box of width at most
/// `2^-prec`, together with sub-rectangles that had to be skipped.
pub fn find_complex_roots(h: &Expr, rect: &Rect, prec: u32) -> Result<ComplexSearch, RootError> {
    find_complex_roots_with(h, rect, prec, &Budget::default())
}

pub fn find_complex_roots_with(h: &Expr, rect: &Rect, prec: u32, budget: &Budget) -> Result<ComplexSearch, RootError> {
    if rect.is_degenerate() {
        return Err(RootError::InvalidRegion(format!("degenerate rectangle {rect}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let wp = budget.start_prec;
    let (top, w) = match winding_perturbed(h, rect, wp, budget, &mut rng) {
        Ok((r, w)) => (r, Ok(w)),
        Err(e @ RootError::NotHolomorphic { .. }) => (rect.clone(), Err(e)),
        Err(e) => return Err(e),
    };
    let dh = differentiate(h);
    let mut roots = Vec::new();
    let mut avoided = Vec::new();
    let mut stack = vec![(top, w, 0u32)];
    while let Some((r, w, depth)) = stack.pop() {
        match w {
            Ok(0) => continue,
            Ok(1) => {
                let b = r.to_ball(wp);
                let enc = if newton_contracts(h, &dh, &b, wp) {
                    RootEnclosure::complex_root(b, UniquenessProof::NewtonContraction, wp)
                } else {
                    RootEnclosure::winding_one(b, wp)
                };
                roots.push(refine(h, &dh, &enc, prec)?);
                continue;
            }
            Err(RootError::NotHolomorphic { .. }) if depth >= budget.complex_depth => {
                avoided.push(r);
                continue;
            }
            Ok(_) | Err(RootError::NotHolomorphic { .. }) if depth < budget.complex_depth => {}
            Ok(_) => {
                return Err(RootError::Undecided {
                    region: r.to_string(),
                    prec: wp,
                })
            }
            Err(e) => return Err(e),
        }
        let children = subdivide(h, &r, wp).ok_or_else(|| RootError::BoundaryZero { rect: r.to_string() })?;
        for (q, w) in children.into_iter().rev() {
            stack.push((q, w, depth + 1));
        }
    }
    for enc in roots.iter_mut() {
        if real_axis_root(h, &dh, enc) {
            enc.real = true;
        }
    }
    roots.sort_by(|a, b| {
        let key = |e: &RootEnclosure| (e.re().mid().clone(), e.im().mid().clone());
        key(a).cmp(&key(b))
    });
    Ok(ComplexSearch { roots, avoided })
}

/// A root box symmetric about the real axis of a function real on the
/// reals holds a real root; collapse it onto the axis when the real
/// proof goes through.
fn real_axis_root(h: &Expr, dh: &Expr, enc: &mut RootEnclosure) -> bool {
    if !enc.im().contains_zero() {
        return false;
    }
    let prec = enc.prec_used;
    let re = enc.re().clone();
    let real_valued = crate::expr::eval_real(h, &re, prec).is_ok();
    if !real_valued {
        return false;
    }
    let proof = if super::real::sign_change_monotone(h, dh, &re, prec) {
        UniquenessProof::SignChangeMonotone
    } else if super::real::newton_contracts(h, dh, &re, prec) {
        UniquenessProof::NewtonContraction
    } else {
        return false;
    };
    *enc = RootEnclosure::real_root(re, proof, prec);
    true
}

fn modulus_bounds(enc: &RootEnclosure) -> (Mag, Mag) {
    let n = enc.ball().norm_sqr();
    let lo = Mag::from_dyadic_down(&n.lower().max(Dyadic::zero())).sqrt_down();
    let hi = n.abs_upper().sqrt();
    (lo, hi)
}

fn mag_to_rational(m: &Mag) -> BigRational {
    m.to_dyadic().to_rational()
}

/// Roots of least modulus with `|z| <= r_max`, found by growing
/// origin-centred squares until one has positive winding number.
pub fn minimal_modulus_root(h: &Expr, r_max: &BigRational, prec: u32) -> Result<MinimalModulus, RootError> {
    let budget = Budget::default();
    if !r_max.is_positive() {
        return Err(RootError::InvalidRegion(format!("radius must be positive, got {r_max}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut scanned = Vec::new();
    for k in 1..=16u32 {
        let r = r_max * BigRational::new(k.into(), 16.into());
        let sq = Rect::square(&r).expect("positive radius");
        let (sq, w) = winding_perturbed(h, &sq, budget.start_prec, &budget, &mut rng)?;
        scanned.push((sq.re_hi.clone(), w));
        if w <= 0 {
            continue;
        }
        let mut side = sq;
        loop {
            let search = find_complex_roots_with(h, &side, prec, &budget)?;
            if let Some(a) = search.avoided.first() {
                return Err(RootError::Undecided {
                    region: a.to_string(),
                    prec,
                });
            }
            let bounds: Vec<_> = search.roots.iter().map(modulus_bounds).collect();
            let Some(best) = bounds.iter().map(|b| b.1).min() else {
                return Err(RootError::Undecided {
                    region: side.to_string(),
                    prec,
                });
            };
            let best_r = mag_to_rational(&best);
            if best_r > side.re_hi {
                side = Rect::square(&best_r).expect("positive radius");
                continue;
            }
            let roots = search
                .roots
                .into_iter()
                .zip(bounds)
                .filter(|(_, (lo, _))| *lo <= best)
                .map(|(e, _)| e)
                .collect();
            return Ok(MinimalModulus { roots, scanned });
        }
    }
    Err(RootError::NoRootWithin(format!("{r_max}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    #[test]
    fn gaussian_roots() {
        let h = parse_expr("x^2 + 4").unwrap();
        let found = find_complex_roots(&h, &Rect::from_ints(-3, 3, -3, 3).unwrap(), 64).unwrap();
        assert_eq!(found.roots.len(), 2);
        assert!(found.roots[0].im().contains_rational(&BigRational::from_integer((-2).into())));
        assert!(found.roots[1].im().contains_rational(&BigRational::from_integer(2.into())));
        for r in &found.roots {
            assert!(r.narrower_than(64));
            assert!(super::super::verify(&h, r));
        }
    }

    #[test]
    fn exponential_pair() {
        let h = parse_expr("e^x - x + 7").unwrap();
        let up = find_complex_roots(&h, &Rect::from_ints(0, 3, 0, 4).unwrap(), 64).unwrap();
        assert_eq!(up.roots.len(), 1);
        assert!(up.roots[0].re().to_decimal(4).starts_with("1.7701"));
        assert!(up.roots[0].im().to_decimal(6).starts_with("2.669613"));
    }

    #[test]
    fn real_roots_marked_real() {
        let h = parse_expr("x^2 - 2").unwrap();
        let found = find_complex_roots(&h, &Rect::from_ints(0, 3, -1, 1).unwrap(), 64).unwrap();
        assert_eq!(found.roots.len(), 1);
        assert!(found.roots[0].real);
        assert!(super::super::verify(&h, &found.roots[0]));
    }

    #[test]
    fn minimal_modulus_pair() {
        let h = parse_expr("e^x - x + 7").unwrap();
        let m = minimal_modulus_root(&h, &BigRational::from_integer(10.into()), 64).unwrap();
        assert_eq!(m.roots.len(), 2);
        assert!(m.scanned.iter().rev().skip(1).all(|(_, w)| *w == 0));
    }
}
