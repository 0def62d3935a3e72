//! Coalitional misreport search: a falsifier for weak group-strategyproofness.

use rayon::prelude::*;

use crate::analysis::{run_mechanism, Mechanism};
use crate::error::Result;
use crate::instance::Instance;
use crate::rat::Rat;
use crate::subset::Subset;
use crate::valuations::{enumerate_symmetric, TableValuation, ValuationFn};

/// A coalition whose joint misreport makes every member strictly better off.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationWitness {
    pub coalition: Subset,
    /// Declared valuation of each member, in increasing player order.
    pub misreports: Vec<ValuationFn>,
    /// Strictly positive utility gain of each member.
    pub gains: Vec<Rat>,
}

impl DeviationWitness {
    /// Re-run the deviation and confirm the recorded gains.
    pub fn verify(&self, inst: &Instance, mechanism: &Mechanism) -> Result<bool> {
        let truth = utilities(inst, inst, mechanism)?;
        let declared = declare(inst, self.coalition, &self.misreports)?;
        let after = utilities(inst, &declared, mechanism)?;
        let gains: Vec<Rat> = self.coalition.iter().map(|i| after[i] - truth[i]).collect();
        Ok(gains == self.gains && gains.iter().all(|g| g.is_positive()))
    }
}

/// True utilities `v_i(A_i) - p_i` when the mechanism sees `declared`.
fn utilities(truth: &Instance, declared: &Instance, mechanism: &Mechanism) -> Result<Vec<Rat>> {
    let (outcome, _) = run_mechanism(declared, mechanism)?;
    Ok((0..truth.n())
        .map(|i| truth.valuation(i).value(outcome.allocation.bundle(i)) - outcome.payments[i])
        .collect())
}

fn declare(inst: &Instance, coalition: Subset, reports: &[ValuationFn]) -> Result<Instance> {
    let mut vals = inst.valuations().to_vec();
    for (i, v) in coalition.iter().zip(reports) {
        vals[i] = v.clone();
    }
    inst.with_valuations(vals)
}

/// Try every coalition of size `1..=coalition_max` (by size, then bitmask)
/// and every joint misreport drawn from `space`; return the first deviation
/// that strictly helps all members, or `None`.
pub fn wgsp_search(
    inst: &Instance,
    mechanism: &Mechanism,
    coalition_max: usize,
    space: &[ValuationFn],
) -> Result<Option<DeviationWitness>> {
    let truth = utilities(inst, inst, mechanism)?;
    let k = space.len() as u64;
    for size in 1..=coalition_max.min(inst.n()) {
        for coalition in Subset::all(inst.n()).filter(|c| c.len() == size) {
            let joint = k.pow(size as u32);
            let found = (0..joint)
                .into_par_iter()
                .map(|code| -> Result<Option<DeviationWitness>> {
                    let mut rest = code;
                    let reports: Vec<ValuationFn> = (0..size)
                        .map(|_| {
                            let v = space[(rest % k) as usize].clone();
                            rest /= k;
                            v
                        })
                        .collect();
                    let after = utilities(inst, &declare(inst, coalition, &reports)?, mechanism)?;
                    let gains: Vec<Rat> = coalition.iter().map(|i| after[i] - truth[i]).collect();
                    Ok(gains.iter().all(|g| g.is_positive()).then(|| DeviationWitness {
                        coalition,
                        misreports: reports,
                        gains,
                    }))
                })
                .find_map_first(|r| match r {
                    Ok(None) => None,
                    other => Some(other),
                });
            if let Some(hit) = found {
                return hit;
            }
        }
    }
    Ok(None)
}

/// Symmetric submodular misreports with marginals from `grid`.
pub fn symmetric_space(m: usize, grid: &[Rat]) -> Vec<ValuationFn> {
    enumerate_symmetric(m, grid)
        .into_iter()
        .map(ValuationFn::Symmetric)
        .collect()
}

/// Misreports for the sequential mechanism: symmetric grid reports, every
/// table over `table_grid` (with `v(∅) = 0`), and the truthful valuations
/// of all players.
pub fn sequential_space(inst: &Instance, grid: &[Rat], table_grid: &[Rat]) -> Result<Vec<ValuationFn>> {
    let m = inst.m();
    let mut space = symmetric_space(m, grid);
    let cells = (1usize << m) - 1;
    let k = table_grid.len();
    let total = k.checked_pow(cells as u32).unwrap_or(usize::MAX);
    crate::error::too_large("table misreport space", total, 1 << 16)?;
    for code in 0..total {
        let mut rest = code;
        let mut values = vec![Rat::zero()];
        for _ in 0..cells {
            values.push(table_grid[rest % k]);
            rest /= k;
        }
        space.push(ValuationFn::Table(TableValuation::from_values(m, values)?));
    }
    for v in inst.valuations() {
        if !space.contains(v) {
            space.push(v.clone());
        }
    }
    Ok(space)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::CostFn;
    use crate::mechanisms::IacsmVariant;

    fn sym(d: &[i128]) -> ValuationFn {
        ValuationFn::symmetric(d.iter().map(|&x| Rat::int(x)).collect()).unwrap()
    }

    fn halved_control() -> Instance {
        Instance::separable(
            vec![sym(&[3, 2]), sym(&[3, 0])],
            vec![CostFn::constant(2, Rat::int(2)).unwrap(); 2],
        )
        .unwrap()
    }

    #[test]
    fn truth_only_space_finds_nothing() {
        let inst = halved_control();
        let space = vec![inst.valuation(0).clone(), inst.valuation(1).clone()];
        let honest = Mechanism::Iacsm(IacsmVariant::Standard);
        assert!(wgsp_search(&inst, &honest, 2, &space).unwrap().is_none());
    }

    #[test]
    fn broken_variant_is_manipulable() {
        let inst = halved_control();
        let grid: Vec<Rat> = (0..=4).map(Rat::int).collect();
        let space = symmetric_space(2, &grid);
        let broken = Mechanism::Iacsm(IacsmVariant::HalvedFirstShares);
        let w = wgsp_search(&inst, &broken, 1, &space).unwrap().expect("a deviation exists");
        assert_eq!(w.coalition, Subset::singleton(0));
        assert!(w.verify(&inst, &broken).unwrap());
        let honest = Mechanism::Iacsm(IacsmVariant::Standard);
        assert!(wgsp_search(&inst, &honest, 2, &space).unwrap().is_none());
    }

    #[test]
    fn sequential_space_contents() {
        let inst = halved_control();
        let grid = vec![Rat::zero(), Rat::one()];
        let space = sequential_space(&inst, &grid, &grid).unwrap();
        // 3 symmetric + 8 tables + 2 truthful
        assert_eq!(space.len(), 3 + 8 + 2);
        let sm = Mechanism::Sequential(None);
        assert!(wgsp_search(&inst, &sm, 2, &space).unwrap().is_none());
    }
}
