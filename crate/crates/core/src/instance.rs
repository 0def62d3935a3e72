//! Problem instances: players, items, valuations and the cost model.

use crate::allocation::Allocation;
use crate::costs::{AllocationCostFn, CostFn};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::subset::MAX_GROUND;
use crate::valuations::ValuationFn;

#[derive(Clone, Debug, PartialEq)]
pub enum CostModel {
    /// One cost function per item, each over the players.
    Separable(Vec<CostFn>),
    NonSeparable(AllocationCostFn),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    n: usize,
    m: usize,
    valuations: Vec<ValuationFn>,
    cost: CostModel,
}

impl Instance {
    pub fn new(valuations: Vec<ValuationFn>, cost: CostModel) -> Result<Self> {
        let n = valuations.len();
        if n == 0 {
            return Err(Error::Invalid("an instance needs at least one player".into()));
        }
        let m = valuations[0].m();
        if m == 0 {
            return Err(Error::Invalid("an instance needs at least one item".into()));
        }
        if n > MAX_GROUND || m > MAX_GROUND {
            return Err(Error::TooLarge {
                what: "players or items",
                size: n.max(m),
                limit: MAX_GROUND,
            });
        }
        if let Some(i) = valuations.iter().position(|v| v.m() != m) {
            return Err(Error::DimensionMismatch(format!(
                "valuation of player {i} is over {} items, expected {m}",
                valuations[i].m()
            )));
        }
        match &cost {
            CostModel::Separable(costs) => {
                if costs.len() != m {
                    return Err(Error::DimensionMismatch(format!(
                        "{} item costs for {m} items",
                        costs.len()
                    )));
                }
                if let Some(j) = costs.iter().position(|c| c.n() != n) {
                    return Err(Error::DimensionMismatch(format!(
                        "cost of item {j} is over {} players, expected {n}",
                        costs[j].n()
                    )));
                }
            }
            CostModel::NonSeparable(c) => {
                if (c.n(), c.m()) != (n, m) {
                    return Err(Error::DimensionMismatch(format!(
                        "allocation cost is {}x{}, instance is {n}x{m}",
                        c.n(),
                        c.m()
                    )));
                }
            }
        }
        Ok(Instance {
            n,
            m,
            valuations,
            cost,
        })
    }

    pub fn separable(valuations: Vec<ValuationFn>, costs: Vec<CostFn>) -> Result<Self> {
        Self::new(valuations, CostModel::Separable(costs))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn valuations(&self) -> &[ValuationFn] {
        &self.valuations
    }

    pub fn valuation(&self, i: usize) -> &ValuationFn {
        &self.valuations[i]
    }

    pub fn cost_model(&self) -> &CostModel {
        &self.cost
    }

    /// The per-item costs, when separable.
    pub fn item_costs(&self) -> Option<&[CostFn]> {
        match &self.cost {
            CostModel::Separable(c) => Some(c),
            CostModel::NonSeparable(_) => None,
        }
    }

    /// Same costs, different declared valuations.
    pub fn with_valuations(&self, valuations: Vec<ValuationFn>) -> Result<Instance> {
        Instance::new(valuations, self.cost.clone())
    }

    pub fn check_allocation(&self, a: &Allocation) -> Result<()> {
        if (a.n(), a.m()) != (self.n, self.m) {
            return Err(Error::DimensionMismatch(format!(
                "allocation is {}x{}, instance is {}x{}",
                a.n(),
                a.m(),
                self.n,
                self.m
            )));
        }
        Ok(())
    }

    /// `C(A)`: `Σ_j c_j(T_j)` for separable costs, the oracle value otherwise.
    pub fn allocation_cost(&self, a: &Allocation) -> Result<Rat> {
        self.check_allocation(a)?;
        Ok(self.cost_unchecked(a))
    }

    pub(crate) fn cost_unchecked(&self, a: &Allocation) -> Rat {
        match &self.cost {
            CostModel::Separable(costs) => costs
                .iter()
                .enumerate()
                .map(|(j, c)| c.eval(a.served(j)))
                .sum(),
            CostModel::NonSeparable(c) => c.eval(a),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::CatalogCost;
    use crate::subset::Subset;

    fn sym(d: &[i128]) -> ValuationFn {
        ValuationFn::symmetric(d.iter().map(|&x| Rat::int(x)).collect()).unwrap()
    }

    #[test]
    fn allocation_cost_cases() {
        let inst = Instance::separable(
            vec![sym(&[1, 1]), sym(&[1, 1])],
            vec![
                CostFn::constant(2, Rat::int(3)).unwrap(),
                CostFn::additive(&[Rat::int(1), Rat::int(2)]).unwrap(),
            ],
        )
        .unwrap();
        assert_eq!(inst.allocation_cost(&Allocation::empty(2, 2)).unwrap(), Rat::zero());
        assert_eq!(inst.allocation_cost(&Allocation::full(2, 2)).unwrap(), Rat::int(6));
        assert!(inst.allocation_cost(&Allocation::empty(3, 2)).is_err());

        let ex = Instance::separable(
            vec![sym(&[1]), sym(&[1]), sym(&[1])],
            vec![CostFn::Catalog(CatalogCost::SubadditivityExample)],
        )
        .unwrap();
        let a = Allocation::from_served(3, &[Subset::from_elems([0, 1])]).unwrap();
        assert_eq!(ex.allocation_cost(&a).unwrap(), Rat::int(10));
    }

    #[test]
    fn dimension_checks() {
        assert!(Instance::separable(vec![], vec![]).is_err());
        assert!(Instance::separable(vec![sym(&[1]), sym(&[1, 0])], vec![]).is_err());
        assert!(Instance::separable(vec![sym(&[1])], vec![CostFn::constant(2, Rat::one()).unwrap()]).is_err());
    }
}
