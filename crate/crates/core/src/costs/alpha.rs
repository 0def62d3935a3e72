//! Brute-force estimators for the three alpha parameterizations.
//!
//! Each estimator returns the least `α >= 1` for which the defining
//! inequality holds on every subset (or pair of subsets), or `Unbounded`
//! when no finite `α` works. The definitions are inequalities, so ratios
//! of the form 0/0 contribute 1 and positive/0 makes the result unbounded.

use rayon::prelude::*;

use crate::allocation::Allocation;
use crate::costs::{AllocationCostFn, CostFn};
use crate::error::{too_large, Error, Result};
use crate::rat::{Factor, Rat};
use crate::subset::Subset;

pub const MAX_AVG_DECREASING_PLAYERS: usize = 16;
pub const MAX_BOUNDED_PLAYERS: usize = 20;
/// Largest `n·m` for exhaustive non-separable estimation.
pub const MAX_NS_CELLS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub enum AlphaWitness {
    /// `S ⊆ T` maximizing `avg(T) / avg(S)`.
    Pair { s: Subset, t: Subset },
    /// `T` maximizing `c_min(T)` or `c_max(T)` over `avg(T)`.
    Set { t: Subset },
    /// Allocation `A` and player set `T` for the non-separable variants.
    Restriction { allocation: Allocation, t: Subset },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlphaReport {
    /// Least admissible alpha (clamped to at least 1).
    pub alpha: Factor,
    /// Ratio attained by the witness before clamping.
    pub witness_ratio: Factor,
    pub witness: Option<AlphaWitness>,
    /// `false` when computed from a sample of allocations; `alpha` is then
    /// only a lower bound.
    pub exhaustive: bool,
}

impl AlphaReport {
    fn from_max(best: Option<(Factor, AlphaWitness)>, exhaustive: bool) -> Self {
        let one = Factor::Finite(Rat::one());
        match best {
            Some((ratio, w)) => AlphaReport {
                alpha: ratio.max(one),
                witness_ratio: ratio,
                witness: Some(w),
                exhaustive,
            },
            None => AlphaReport {
                alpha: one,
                witness_ratio: one,
                witness: None,
                exhaustive,
            },
        }
    }
}

fn keep_max(best: &mut Option<(Factor, AlphaWitness)>, ratio: Factor, w: impl FnOnce() -> AlphaWitness) {
    if best.as_ref().is_none_or(|(b, _)| ratio > *b) {
        *best = Some((ratio, w()));
    }
}

fn avg(c: Rat, size: usize) -> Rat {
    c / Rat::from(size)
}

/// `max over ∅ ≠ S ⊆ T` of `(c(T)/|T|) / (c(S)/|S|)`, clamped to `>= 1`.
pub fn alpha_average_decreasing(c: &CostFn) -> Result<AlphaReport> {
    too_large("players", c.n(), MAX_AVG_DECREASING_PLAYERS)?;
    Ok(average_decreasing_table(&c.values()?, c.n()))
}

pub fn average_decreasing_table(values: &[Rat], n: usize) -> AlphaReport {
    // min_avg[T] = smallest average over non-empty subsets of T
    let size = 1usize << n;
    let mut min_avg: Vec<(Rat, Subset)> = vec![(Rat::zero(), Subset::EMPTY); size];
    let mut best = None;
    for t in 1..size {
        let ts = Subset(t as u32);
        let own = avg(values[t], ts.len());
        let mut m = (own, ts);
        for i in ts.iter() {
            let rest = ts.without(i);
            if !rest.is_empty() && min_avg[rest.0 as usize].0 < m.0 {
                m = min_avg[rest.0 as usize];
            }
        }
        min_avg[t] = m;
        let ratio = Factor::ratio(own, m.0);
        keep_max(&mut best, ratio, || AlphaWitness::Pair { s: m.1, t: ts });
    }
    AlphaReport::from_max(best, true)
}

/// `max over ∅ ≠ T` of `min_{j∈T} c({j}) / (c(T)/|T|)`, clamped to `>= 1`.
pub fn alpha_min_bounded(c: &CostFn) -> Result<AlphaReport> {
    too_large("players", c.n(), MAX_BOUNDED_PLAYERS)?;
    Ok(bounded_table(&c.values()?, c.n(), Extreme::Min))
}

/// As [`alpha_min_bounded`] with the largest standalone cost.
pub fn alpha_max_bounded(c: &CostFn) -> Result<AlphaReport> {
    too_large("players", c.n(), MAX_BOUNDED_PLAYERS)?;
    Ok(bounded_table(&c.values()?, c.n(), Extreme::Max))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extreme {
    Min,
    Max,
}

impl Extreme {
    fn pick(self, a: Rat, b: Rat) -> Rat {
        match self {
            Extreme::Min => a.min(b),
            Extreme::Max => a.max(b),
        }
    }
}

pub fn bounded_table(values: &[Rat], n: usize, which: Extreme) -> AlphaReport {
    let size = 1usize << n;
    let mut standalone = vec![Rat::zero(); size];
    let mut best = None;
    for t in 1..size {
        let ts = Subset(t as u32);
        let low = ts.first().unwrap();
        let single = values[1 << low];
        let rest = ts.without(low);
        standalone[t] = if rest.is_empty() {
            single
        } else {
            which.pick(single, standalone[rest.0 as usize])
        };
        let ratio = Factor::ratio(standalone[t] * Rat::from(ts.len()), values[t]);
        keep_max(&mut best, ratio, || AlphaWitness::Set { t: ts });
    }
    AlphaReport::from_max(best, true)
}

/// Non-separable min-bounded alpha: the max over allocations `A` and
/// `|T| >= 2` of `min_{j∈T} C(A|_j) / (C(A|_T)/|T|)`.
///
/// Exhaustive when `n·m <= 12`; otherwise `sample` must be given and the
/// report is marked as a lower bound.
pub fn alpha_min_bounded_ns(c: &AllocationCostFn, sample: Option<&[Allocation]>) -> Result<AlphaReport> {
    bounded_ns(c, sample, Extreme::Min)
}

pub fn alpha_max_bounded_ns(c: &AllocationCostFn, sample: Option<&[Allocation]>) -> Result<AlphaReport> {
    bounded_ns(c, sample, Extreme::Max)
}

fn bounded_ns(c: &AllocationCostFn, sample: Option<&[Allocation]>, which: Extreme) -> Result<AlphaReport> {
    let (n, m) = (c.n(), c.m());
    let exhaustive = n * m <= MAX_NS_CELLS;
    let per_alloc = |a: &Allocation| ns_best_for(c, a, which);
    let results: Vec<Option<(Factor, AlphaWitness)>> = if exhaustive {
        (0..Allocation::count(n, m))
            .into_par_iter()
            .map(|code| per_alloc(&Allocation::nth(n, m, code)))
            .collect()
    } else {
        let sample = sample.ok_or(Error::TooLarge {
            what: "allocation grid n·m (pass a sample)",
            size: n * m,
            limit: MAX_NS_CELLS,
        })?;
        sample.par_iter().map(per_alloc).collect()
    };
    let mut best = None;
    for (ratio, w) in results.into_iter().flatten() {
        keep_max(&mut best, ratio, || w);
    }
    Ok(AlphaReport::from_max(best, exhaustive))
}

fn ns_best_for(c: &AllocationCostFn, a: &Allocation, which: Extreme) -> Option<(Factor, AlphaWitness)> {
    let n = c.n();
    let single: Vec<Rat> = (0..n).map(|i| c.eval(&a.restrict(Subset::singleton(i)))).collect();
    let mut best = None;
    for t in Subset::all(n).filter(|t| t.len() >= 2) {
        let ext = t.iter().map(|i| single[i]).reduce(|x, y| which.pick(x, y)).unwrap();
        let ratio = Factor::ratio(ext * Rat::from(t.len()), c.eval(&a.restrict(t)));
        keep_max(&mut best, ratio, || AlphaWitness::Restriction {
            allocation: a.clone(),
            t,
        });
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{CatalogCost, Graph, NsKind};

    fn finite(r: &AlphaReport) -> Rat {
        r.alpha.finite().unwrap()
    }

    #[test]
    fn average_decreasing_examples() {
        let constant = CostFn::constant(4, Rat::int(7)).unwrap();
        assert_eq!(finite(&alpha_average_decreasing(&constant).unwrap()), Rat::one());
        let step = CostFn::Catalog(CatalogCost::Step { n: 5 });
        let r = alpha_average_decreasing(&step).unwrap();
        assert_eq!(finite(&r), Rat::int(2));
        let ex = CostFn::Catalog(CatalogCost::SubadditivityExample);
        assert_eq!(finite(&alpha_average_decreasing(&ex).unwrap()), Rat::one());
    }

    #[test]
    fn average_decreasing_unbounded() {
        // c({0}) = 0 but c({0,1}) > 0
        let c = CostFn::table(2, vec![Rat::zero(), Rat::zero(), Rat::one(), Rat::one()]).unwrap();
        let r = alpha_average_decreasing(&c).unwrap();
        assert_eq!(r.alpha, Factor::Unbounded);
        assert_eq!(
            r.witness,
            Some(AlphaWitness::Pair {
                s: Subset::singleton(0),
                t: Subset(0b11)
            })
        );
    }

    #[test]
    fn min_bounded_examples() {
        let additive = CostFn::additive(&[Rat::int(1), Rat::int(2), Rat::int(5)]).unwrap();
        assert_eq!(finite(&alpha_min_bounded(&additive).unwrap()), Rat::one());
        let tight = CostFn::Catalog(CatalogCost::Tight { n: 5, k: Rat::int(12) });
        assert_eq!(finite(&alpha_min_bounded(&tight).unwrap()), Rat::one());
        // public excludable good: T = N gives 4 · K / K
        let public = CostFn::constant(4, Rat::int(3)).unwrap();
        let r = alpha_min_bounded(&public).unwrap();
        assert_eq!(finite(&r), Rat::int(4));
        assert_eq!(r.witness, Some(AlphaWitness::Set { t: Subset::full(4) }));
    }

    #[test]
    fn max_bounded_examples() {
        let equal = CostFn::additive(&[Rat::int(2); 3]).unwrap();
        assert_eq!(finite(&alpha_max_bounded(&equal).unwrap()), Rat::one());
        let star = CostFn::VertexCover(Graph::star(3).unwrap());
        assert_eq!(finite(&alpha_max_bounded(&star).unwrap()), Rat::int(3));
    }

    #[test]
    fn ns_conventions() {
        let zero = AllocationCostFn::oracle(2, 2, |_| Rat::zero()).unwrap();
        assert_eq!(finite(&alpha_min_bounded_ns(&zero, None).unwrap()), Rat::one());
        let served = AllocationCostFn::new(3, 2, NsKind::ServedPlayers { weight: Rat::one() }).unwrap();
        assert_eq!(finite(&alpha_min_bounded_ns(&served, None).unwrap()), Rat::one());
        // one served player inside a pair: C(A|_T)/|T| = 1/2 vs C_max = 1
        let r = alpha_max_bounded_ns(&served, None).unwrap();
        assert_eq!(finite(&r), Rat::int(3));
        assert!(r.exhaustive);
    }

    #[test]
    fn ns_needs_sample_beyond_limit() {
        let served = AllocationCostFn::new(4, 4, NsKind::ServedPlayers { weight: Rat::one() }).unwrap();
        assert!(alpha_min_bounded_ns(&served, None).is_err());
        let sample = vec![Allocation::full(4, 4)];
        let r = alpha_min_bounded_ns(&served, Some(&sample)).unwrap();
        assert!(!r.exhaustive);
    }
}
