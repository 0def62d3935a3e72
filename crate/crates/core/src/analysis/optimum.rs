//! Minimum social cost by exhaustive search or, for symmetric valuations
//! over separable costs, by dynamic programming over items.

use rayon::prelude::*;

use crate::allocation::Allocation;
use crate::error::{too_large, Result};
use crate::instance::{CostModel, Instance};
use crate::rat::Rat;
use crate::subset::{Subset, MAX_GROUND};
use crate::valuations::SymmetricSubmodular;

/// Largest `n·m` searched by plain enumeration.
pub const MAX_EXHAUSTIVE_CELLS: usize = 20;
/// Largest `(m+1)^n · 2^n · m` work budget for the item-by-item program.
pub const MAX_DP_WORK: u64 = 1 << 30;

/// `π(A) = C(A) + Σ_i [v_i(M) - v_i(A_i)]`.
pub fn social_cost(inst: &Instance, a: &Allocation) -> Result<Rat> {
    inst.check_allocation(a)?;
    Ok(social_cost_unchecked(inst, a))
}

pub(crate) fn social_cost_unchecked(inst: &Instance, a: &Allocation) -> Rat {
    let all = Subset::full(inst.m());
    let missed: Rat = inst
        .valuations()
        .iter()
        .enumerate()
        .map(|(i, v)| v.value(all) - v.value(a.bundle(i)))
        .sum();
    inst.cost_unchecked(a) + missed
}

/// The minimum social cost and the lexicographically smallest allocation
/// attaining it, ordered by the item view `(T_1, .., T_m)` with each `T_j`
/// compared as a bitmask.
pub fn optimal_social_cost(inst: &Instance) -> Result<(Rat, Allocation)> {
    if let Some(plan) = SymmetricPlan::new(inst) {
        if plan.work() <= MAX_DP_WORK {
            return Ok(plan.solve());
        }
    }
    exhaustive(inst)
}

/// Plain enumeration of all `(2^m)^n` allocations.
pub fn exhaustive(inst: &Instance) -> Result<(Rat, Allocation)> {
    let (n, m) = (inst.n(), inst.m());
    too_large("allocation grid n·m", n * m, MAX_EXHAUSTIVE_CELLS)?;
    let all = Subset::full(m);
    let top: Rat = inst.valuations().iter().map(|v| v.value(all)).sum();
    let tables: Option<Vec<Vec<Rat>>> = match inst.cost_model() {
        CostModel::Separable(costs) => Some(costs.iter().map(|c| c.values()).collect::<Result<_>>()?),
        CostModel::NonSeparable(_) => None,
    };
    let eval = |code: u64| {
        let a = Allocation::nth(n, m, code);
        let cost = match &tables {
            Some(t) => (0..m).map(|j| t[j][a.served(j).0 as usize]).sum(),
            None => inst.cost_unchecked(&a),
        };
        let kept: Rat = inst
            .valuations()
            .iter()
            .enumerate()
            .map(|(i, v)| v.value(a.bundle(i)))
            .sum();
        (cost + top - kept, code)
    };
    let (best, code) = (0..Allocation::count(n, m))
        .into_par_iter()
        .map(eval)
        .min()
        .expect("at least the empty allocation");
    Ok((best, Allocation::nth(n, m, code)))
}

/// Separable costs with symmetric valuations: only the number of items each
/// player receives matters to the valuation term, so a program over items
/// with per-player counts as state finds the optimum.
struct SymmetricPlan<'a> {
    n: usize,
    m: usize,
    vals: Vec<&'a SymmetricSubmodular>,
    tables: Vec<Vec<Rat>>,
}

impl<'a> SymmetricPlan<'a> {
    fn new(inst: &'a Instance) -> Option<Self> {
        let costs = inst.item_costs()?;
        let vals = inst
            .valuations()
            .iter()
            .map(|v| v.as_symmetric())
            .collect::<Option<Vec<_>>>()?;
        if inst.n() > MAX_GROUND.min(20) {
            return None;
        }
        let tables = costs.iter().map(|c| c.values()).collect::<Result<Vec<_>>>().ok()?;
        Some(SymmetricPlan {
            n: inst.n(),
            m: inst.m(),
            vals,
            tables,
        })
    }

    fn states(&self) -> u64 {
        (self.m as u64 + 1).saturating_pow(self.n as u32)
    }

    fn work(&self) -> u64 {
        self.states()
            .saturating_mul(1 << self.n)
            .saturating_mul(self.m as u64)
    }

    fn step(&self, state: usize, t: Subset) -> usize {
        let base = self.m + 1;
        let mut next = state;
        let mut place = 1;
        for i in 0..self.n {
            if t.contains(i) {
                next += place;
            }
            place *= base;
        }
        next
    }

    fn counts(&self, mut state: usize) -> Vec<usize> {
        let base = self.m + 1;
        (0..self.n)
            .map(|_| {
                let c = state % base;
                state /= base;
                c
            })
            .collect()
    }

    fn solve(&self) -> (Rat, Allocation) {
        let (n, m) = (self.n, self.m);
        let size = self.states() as usize;
        let full: Vec<Rat> = self.vals.iter().map(|v| v.value_of_size(m)).collect();

        // layers[j][state]: best completion cost using items j.., given counts
        let mut layers: Vec<Vec<Option<Rat>>> = vec![vec![None; size]; m + 1];
        layers[m] = (0..size)
            .into_par_iter()
            .map(|s| {
                let c = self.counts(s);
                Some((0..n).map(|i| full[i] - self.vals[i].value_of_size(c[i])).sum())
            })
            .collect();
        for j in (0..m).rev() {
            let next = &layers[j + 1];
            let table = &self.tables[j];
            layers[j] = (0..size)
                .into_par_iter()
                .map(|s| {
                    if self.counts(s).iter().any(|&c| c > j) {
                        return None;
                    }
                    Subset::all(n)
                        .map(|t| table[t.0 as usize] + next[self.step(s, t)].unwrap())
                        .min()
                })
                .collect();
        }

        let best = layers[0][0].unwrap();
        let mut state = 0;
        let mut served = Vec::with_capacity(m);
        for j in 0..m {
            let target = layers[j][state].unwrap();
            let t = Subset::all(n)
                .find(|&t| self.tables[j][t.0 as usize] + layers[j + 1][self.step(state, t)].unwrap() == target)
                .expect("the optimum is attained");
            served.push(t);
            state = self.step(state, t);
        }
        (best, Allocation::from_served(n, &served).expect("dimensions match"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{CatalogCost, CostFn};
    use crate::valuations::{gen_symmetric_submodular, ValuationFn};

    fn single(d: Rat) -> ValuationFn {
        ValuationFn::symmetric(vec![d]).unwrap()
    }

    fn tight(eps: Rat) -> Instance {
        let vals = (1..=3).map(|j| single(Rat::int(6) / Rat::int(j) - eps)).collect();
        Instance::separable(vals, vec![CostFn::Catalog(CatalogCost::Tight { n: 3, k: Rat::int(6) })]).unwrap()
    }

    #[test]
    fn social_cost_cases() {
        let inst = tight(Rat::new(1, 10));
        assert_eq!(social_cost(&inst, &Allocation::empty(3, 1)).unwrap(), Rat::new(107, 10));
        assert_eq!(social_cost(&inst, &Allocation::full(3, 1)).unwrap(), Rat::int(6));
        let (opt, a) = optimal_social_cost(&inst).unwrap();
        assert_eq!(opt, Rat::int(6));
        assert_eq!(a, Allocation::full(3, 1));
    }

    #[test]
    fn single_player_serves() {
        let inst = Instance::separable(vec![single(Rat::int(3))], vec![CostFn::constant(1, Rat::int(2)).unwrap()]).unwrap();
        let (opt, a) = optimal_social_cost(&inst).unwrap();
        assert_eq!(opt, Rat::int(2));
        assert_eq!(a, Allocation::full(1, 1));
    }

    #[test]
    fn zero_costs_serve_everything() {
        let v = ValuationFn::symmetric(vec![Rat::int(2), Rat::int(1)]).unwrap();
        let inst = Instance::separable(vec![v.clone(), v], vec![CostFn::constant(2, Rat::zero()).unwrap(); 2]).unwrap();
        let (opt, a) = optimal_social_cost(&inst).unwrap();
        assert_eq!(opt, Rat::zero());
        assert_eq!(a, Allocation::full(2, 2));
    }

    #[test]
    fn ties_pick_smallest_item_view() {
        // serving costs exactly the value, so every allocation is optimal
        let inst = Instance::separable(vec![single(Rat::int(2))], vec![CostFn::constant(1, Rat::int(2)).unwrap()]).unwrap();
        let (_, a) = optimal_social_cost(&inst).unwrap();
        assert_eq!(a, Allocation::empty(1, 1));
        let (_, b) = exhaustive(&inst).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn program_agrees_with_enumeration() {
        let grid: Vec<Rat> = (0..5).map(|x| Rat::new(x, 2)).collect();
        for seed in 0..40u64 {
            let n = 2 + (seed % 3) as usize;
            let m = 1 + (seed % 4) as usize;
            let vals = (0..n)
                .map(|i| ValuationFn::Symmetric(gen_symmetric_submodular(m, &grid, seed * 31 + i as u64).unwrap()))
                .collect();
            let costs = (0..m)
                .map(|j| {
                    let g = gen_symmetric_submodular(n, &grid, seed * 97 + j as u64).unwrap();
                    let profile: Vec<Rat> = (0..=n).map(|k| g.value_of_size(k)).collect();
                    CostFn::symmetric(&profile).unwrap()
                })
                .collect();
            let inst = Instance::separable(vals, costs).unwrap();
            let dp = SymmetricPlan::new(&inst).unwrap().solve();
            let ex = exhaustive(&inst).unwrap();
            assert_eq!(dp, ex, "seed {seed}");
            assert_eq!(social_cost(&inst, &dp.1).unwrap(), dp.0);
        }
    }

    #[test]
    fn exhaustive_limit() {
        let v = ValuationFn::symmetric(vec![Rat::one(); 3]).unwrap();
        let costs = vec![CostFn::constant(7, Rat::one()).unwrap(); 3];
        let inst = Instance::separable(vec![v; 7], costs).unwrap();
        assert!(exhaustive(&inst).is_err());
        // the program still handles it
        assert!(optimal_social_cost(&inst).is_ok());
    }
}
