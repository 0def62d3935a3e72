//! Execution traces of the ascending mechanism and the checks run on them.

use crate::allocation::Outcome;
use crate::costs::CostFn;
use crate::rat::Rat;
use crate::subset::Subset;

/// What happened during one ascending run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    /// Players in the order they were finalized.
    pub order: Vec<usize>,
    /// Per item, the players who withdrew from it, in withdrawal order.
    pub withdrawals: Vec<Vec<usize>>,
    /// Per item, the share offered at the start of each iteration, followed
    /// by the final share (`n + 1` entries).
    pub share_history: Vec<Vec<Rat>>,
    /// Bundle finalized in each iteration.
    pub bundle_history: Vec<Subset>,
}

impl Trace {
    pub fn iterations(&self) -> usize {
        self.order.len()
    }
}

/// Shares never decrease along any item's history.
pub fn verify_p1(trace: &Trace) -> bool {
    trace
        .share_history
        .iter()
        .all(|h| h.windows(2).all(|w| w[0] <= w[1]))
}

/// Bundles are nested in finalization order: `A_τ1 ⊆ A_τ2 ⊆ ..`.
pub fn verify_p2(trace: &Trace) -> bool {
    trace.bundle_history.windows(2).all(|w| w[0].is_subset_of(w[1]))
}

/// Every withdrawal sequence is a subsequence of the finalization order.
pub fn withdrawals_follow_order(trace: &Trace) -> bool {
    trace.withdrawals.iter().all(|w| {
        let mut pos = trace.order.iter();
        w.iter().all(|p| pos.any(|q| q == p))
    })
}

/// Each served item goes to exactly the suffix of the finalization order
/// that starts at its first holder.
pub fn verify_final_set_structure(outcome: &Outcome, trace: &Trace) -> bool {
    let a = &outcome.allocation;
    (0..a.m()).all(|j| {
        let served = a.served(j);
        match trace.order.iter().position(|&i| a.bundle(i).contains(j)) {
            None => served.is_empty(),
            Some(first) => served == Subset::from_elems(trace.order[first..].iter().copied()),
        }
    })
}

/// The share of an item after `k` withdrawals, recomputed from scratch as
/// the largest average cost over the player sets the item has passed
/// through: `max_{ℓ<=k} c(R^ℓ) / (n - ℓ)`, skipping the empty set.
pub fn share_from_trace(cost: &CostFn, n: usize, withdrawals: &[usize], k: usize) -> Rat {
    let mut remaining = Subset::full(n);
    let mut best = cost.eval(remaining) / Rat::from(n);
    for (l, &p) in withdrawals[..k].iter().enumerate() {
        remaining = remaining.without(p);
        let left = n - l - 1;
        if left > 0 {
            best = best.max(cost.eval(remaining) / Rat::from(left));
        }
    }
    best
}
