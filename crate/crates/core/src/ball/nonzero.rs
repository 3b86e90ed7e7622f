use serde::{Deserialize, Serialize};

use super::{BallComplex, BallReal};

/// Precision schedule for refinement loops: start bits, number of
/// doublings, and a hard cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefineBudget {
    pub start_prec: u32,
    pub doublings: u32,
    pub max_prec: u32,
}

impl Default for RefineBudget {
    fn default() -> Self {
        Self {
            start_prec: 64,
            doublings: 16,
            max_prec: 1 << 20,
        }
    }
}

impl RefineBudget {
    /// Precisions visited after the initial ball: `start * 2^k`, capped.
    pub fn schedule(&self) -> impl Iterator<Item = u32> + '_ {
        let mut last = 0u32;
        (1..=self.doublings).filter_map(move |k| {
            let p = (self.start_prec as u64) << k;
            let p = p.min(self.max_prec as u64) as u32;
            if p == last {
                None
            } else {
                last = p;
                Some(p)
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroTest {
    Nonzero,
    Zero,
    Undecided,
}

/// Outcome plus the precision of the ball that decided it (or the last
/// precision tried), and how many refinements were requested.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NonzeroOutcome {
    pub status: ZeroTest,
    pub witness_prec: u32,
    pub refinements: u32,
}

pub trait Enclosure {
    fn encloses_zero(&self) -> bool;
    fn exact_zero(&self) -> bool;
    fn precision(&self) -> u32;
}

impl Enclosure for BallReal {
    fn encloses_zero(&self) -> bool {
        self.contains_zero()
    }
    fn exact_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

impl Enclosure for BallComplex {
    fn encloses_zero(&self) -> bool {
        self.contains_zero()
    }
    fn exact_zero(&self) -> bool {
        self.is_exact_zero()
    }
    fn precision(&self) -> u32 {
        self.prec()
    }
}

/// Decide whether the value enclosed by `a` is nonzero, asking `refiner`
/// for tighter balls along the budget's precision schedule. A refiner
/// error counts as an undecided step.
pub fn refine_nonzero<B, E, F>(a: &B, mut refiner: F, budget: RefineBudget) -> NonzeroOutcome
where
    B: Enclosure,
    F: FnMut(u32) -> Result<B, E>,
{
    if a.exact_zero() {
        return NonzeroOutcome {
            status: ZeroTest::Zero,
            witness_prec: a.precision(),
            refinements: 0,
        };
    }
    if !a.encloses_zero() {
        return NonzeroOutcome {
            status: ZeroTest::Nonzero,
            witness_prec: a.precision(),
            refinements: 0,
        };
    }
    let mut last = a.precision();
    let mut count = 0;
    for prec in budget.schedule() {
        count += 1;
        last = prec;
        if let Ok(b) = refiner(prec) {
            if b.exact_zero() {
                return NonzeroOutcome {
                    status: ZeroTest::Zero,
                    witness_prec: prec,
                    refinements: count,
                };
            }
            if !b.encloses_zero() {
                return NonzeroOutcome {
                    status: ZeroTest::Nonzero,
                    witness_prec: prec,
                    refinements: count,
                };
            }
        }
    }
    NonzeroOutcome {
        status: ZeroTest::Undecided,
        witness_prec: last,
        refinements: count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ball::{Dyadic, Mag};
    use std::convert::Infallible;

    fn never(_: u32) -> Result<BallReal, Infallible> {
        panic!("refiner must not be called")
    }

    #[test]
    fn immediate_decisions() {
        let b = BallReal::new(Dyadic::from_i64(5), Mag::pow2(-3), 64);
        assert_eq!(refine_nonzero(&b, never, RefineBudget::default()).status, ZeroTest::Nonzero);
        let z = BallReal::zero(64);
        assert_eq!(refine_nonzero(&z, never, RefineBudget::default()).status, ZeroTest::Zero);
    }

    #[test]
    fn refinement_counts_halvings() {
        // mid 2^-133 (~1e-40), rad 2^-126 (~1e-38); each refinement halves the radius
        let mid = Dyadic::pow2(-133);
        let start = BallReal::new(mid.clone(), Mag::pow2(-126), 64);
        let out = refine_nonzero(
            &start,
            |prec| {
                let k = (prec / 64).trailing_zeros() as i64;
                Ok::<_, Infallible>(BallReal::new(mid.clone(), Mag::pow2(-126 - k), prec))
            },
            RefineBudget::default(),
        );
        assert_eq!(out.status, ZeroTest::Nonzero);
        // need rad < 2^-133, i.e. k = 8 halvings
        assert_eq!(out.refinements, 8);
        assert_eq!(out.witness_prec, 64 << 8);
    }

    #[test]
    fn budget_exhaustion() {
        let start = BallReal::new(Dyadic::zero(), Mag::pow2(-10), 64);
        let out = refine_nonzero(
            &start,
            |p| Ok::<_, Infallible>(BallReal::new(Dyadic::zero(), Mag::pow2(-20), p)),
            RefineBudget { start_prec: 64, doublings: 3, max_prec: 1 << 20 },
        );
        assert_eq!(out.status, ZeroTest::Undecided);
        assert_eq!(out.refinements, 3);
        assert_eq!(out.witness_prec, 512);
    }

    #[test]
    fn schedule_respects_cap() {
        let b = RefineBudget::default();
        let v: Vec<u32> = b.schedule().collect();
        assert_eq!(*v.last().unwrap(), 1 << 20);
        assert_eq!(v.len(), 14);
    }
}
