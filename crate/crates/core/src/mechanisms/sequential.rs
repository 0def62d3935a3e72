//! The sequential mechanism: players arrive in a fixed order and each buys
//! her best bundle at its incremental cost given the earlier purchases.

use crate::allocation::{Allocation, Outcome};
use crate::error::{too_large, Error, Result};
use crate::instance::{CostModel, Instance};
use crate::rat::Rat;
use crate::subset::Subset;

/// Item limit for the `2^m` bundle search.
pub const MAX_SM_ITEMS: usize = 20;

pub fn validate_order(n: usize, order: &[usize]) -> Result<()> {
    let mut seen = Subset::EMPTY;
    for &i in order {
        if i >= n || seen.contains(i) {
            return Err(Error::Invalid(format!("order {order:?} is not a permutation of 0..{n}")));
        }
        seen = seen.with(i);
    }
    if order.len() != n {
        return Err(Error::Invalid(format!("order {order:?} is not a permutation of 0..{n}")));
    }
    Ok(())
}

/// Incremental cost `Δ_i(A, S) = C(A with A_i = S) - C(A)` of giving
/// bundle `s` to player `i`, who holds nothing in `a`.
pub fn incremental_cost(inst: &Instance, a: &Allocation, i: usize, s: Subset) -> Rat {
    debug_assert!(a.bundle(i).is_empty());
    match inst.cost_model() {
        CostModel::Separable(costs) => s
            .iter()
            .map(|j| {
                let t = a.served(j);
                costs[j].eval(t.with(i)) - costs[j].eval(t)
            })
            .sum(),
        CostModel::NonSeparable(c) => {
            let mut with = a.clone();
            with.set_bundle(i, s);
            c.eval(&with) - c.eval(a)
        }
    }
}

/// Run with the identity order `0, 1, .., n-1`.
pub fn sm_run_default(inst: &Instance) -> Result<Outcome> {
    let order: Vec<usize> = (0..inst.n()).collect();
    sm_run(inst, &order)
}

/// Players in `order` each take the bundle maximizing declared value
/// minus incremental cost; ties go to the smallest bitmask. Payments are
/// the incremental costs, so they sum to `C(A)` exactly.
pub fn sm_run(inst: &Instance, order: &[usize]) -> Result<Outcome> {
    let (n, m) = (inst.n(), inst.m());
    validate_order(n, order)?;
    too_large("items", m, MAX_SM_ITEMS)?;
    let mut a = Allocation::empty(n, m);
    let mut payments = vec![Rat::zero(); n];

    for &i in order {
        let v = inst.valuation(i);
        let (bundle, price) = {
            let prices = bundle_prices(inst, &a, i);
            let mut best: Option<(Rat, Subset, Rat)> = None;
            for s in Subset::all(m) {
                let price = prices(s);
                let utility = v.value(s) - price;
                if best.as_ref().is_none_or(|(u, _, _)| utility > *u) {
                    best = Some((utility, s, price));
                }
            }
            let (_, bundle, price) = best.expect("at least the empty bundle");
            (bundle, price)
        };
        a.set_bundle(i, bundle);
        payments[i] = price;
    }
    Ok(Outcome {
        allocation: a,
        payments,
    })
}

/// Pricing closure for player `i`; separable costs reuse per-item increments.
fn bundle_prices<'a>(inst: &'a Instance, a: &'a Allocation, i: usize) -> Box<dyn Fn(Subset) -> Rat + 'a> {
    match inst.cost_model() {
        CostModel::Separable(costs) => {
            let inc: Vec<Rat> = costs
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    let t = a.served(j);
                    c.eval(t.with(i)) - c.eval(t)
                })
                .collect();
            Box::new(move |s: Subset| s.iter().map(|j| inc[j]).sum())
        }
        CostModel::NonSeparable(_) => Box::new(move |s| incremental_cost(inst, a, i, s)),
    }
}
