//! The iterative ascending cost-sharing mechanism.
//!
//! Every item runs its own ascending auction. All players start active and
//! tentatively assigned to every item; the price of item `j` is the largest
//! average cost `c_j(T)/|T|` over the tentative sets it has passed through.
//! Each iteration, every active player picks a utility-maximizing bundle
//! at the current prices, the player with the smallest bundle is finalized
//! with it, and she withdraws from all other items.

use crate::allocation::{Allocation, Outcome};
use crate::costs::CostFn;
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::mechanisms::trace::Trace;
use crate::rat::Rat;
use crate::subset::Subset;
use crate::valuations::SymmetricSubmodular;

/// Utility-maximizing bundle for a symmetric submodular valuation.
///
/// Items are taken cheapest first (ties by index) while the next marginal
/// value is at least the item's share, so among optimal bundles the largest
/// one made of the cheapest items is returned.
pub fn greedy_bundle(v: &SymmetricSubmodular, shares: &[Rat]) -> Subset {
    debug_assert_eq!(v.m(), shares.len());
    let mut items: Vec<usize> = (0..shares.len()).collect();
    items.sort_by(|&a, &b| shares[a].cmp(&shares[b]).then(a.cmp(&b)));
    let mut bundle = Subset::EMPTY;
    for (&j, &delta) in items.iter().zip(v.marginals()) {
        if delta < shares[j] {
            break;
        }
        bundle = bundle.with(j);
    }
    bundle
}

/// Mechanism variants. `HalvedFirstShares` is a deliberately flawed
/// version used as a negative control for the manipulation search: prices
/// offered in the first iteration are halved, and the first finalized
/// player pays those halved prices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum IacsmVariant {
    #[default]
    Standard,
    HalvedFirstShares,
}

struct State<'a> {
    costs: &'a [CostFn],
    active: Subset,
    tentative: Vec<Subset>,
    shares: Vec<Rat>,
    trace: Trace,
}

impl<'a> State<'a> {
    fn new(n: usize, costs: &'a [CostFn]) -> Self {
        let m = costs.len();
        let all = Subset::full(n);
        State {
            costs,
            active: all,
            tentative: vec![all; m],
            shares: costs.iter().map(|c| c.eval(all) / Rat::from(n)).collect(),
            trace: Trace {
                order: Vec::with_capacity(n),
                withdrawals: vec![Vec::new(); m],
                share_history: vec![Vec::with_capacity(n + 1); m],
                bundle_history: Vec::with_capacity(n),
            },
        }
    }

    fn record_shares(&mut self) {
        for (h, s) in self.trace.share_history.iter_mut().zip(&self.shares) {
            h.push(*s);
        }
    }

    /// Finalize `player` with `bundle`: withdraw her from every other item
    /// and raise those items' shares to the new average when it is larger.
    fn finalize(&mut self, player: usize, bundle: Subset) {
        self.active = self.active.without(player);
        for j in 0..self.costs.len() {
            if bundle.contains(j) {
                continue;
            }
            let t = self.tentative[j].without(player);
            self.tentative[j] = t;
            self.trace.withdrawals[j].push(player);
            if !t.is_empty() {
                let average = self.costs[j].eval(t) / Rat::from(t.len());
                self.shares[j] = self.shares[j].max(average);
            }
        }
        self.trace.order.push(player);
        self.trace.bundle_history.push(bundle);
    }
}

fn preconditions(inst: &Instance) -> Result<(&[CostFn], Vec<&SymmetricSubmodular>)> {
    let costs = inst.item_costs().ok_or_else(|| {
        Error::Precondition("IACSM requires a separable cost model".into())
    })?;
    let vals = inst
        .valuations()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            v.as_symmetric().ok_or_else(|| {
                Error::Precondition(format!(
                    "IACSM requires symmetric submodular valuations (player {i} has a table)"
                ))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((costs, vals))
}

/// Run the mechanism on the declared valuations in `inst`.
pub fn iacsm_run(inst: &Instance) -> Result<(Outcome, Trace)> {
    iacsm_run_variant(inst, IacsmVariant::Standard)
}

pub fn iacsm_run_variant(inst: &Instance, variant: IacsmVariant) -> Result<(Outcome, Trace)> {
    let (costs, vals) = preconditions(inst)?;
    let (n, m) = (inst.n(), inst.m());
    let mut st = State::new(n, costs);
    let mut allocation = Allocation::empty(n, m);
    let mut first_payment = None;

    for iteration in 0..n {
        st.record_shares();
        let offered: Vec<Rat> = match variant {
            IacsmVariant::HalvedFirstShares if iteration == 0 => {
                st.shares.iter().map(|s| *s / Rat::int(2)).collect()
            }
            _ => st.shares.clone(),
        };
        let (player, bundle) = st
            .active
            .iter()
            .map(|i| (i, greedy_bundle(vals[i], &offered)))
            .min_by_key(|&(i, b)| (b.len(), i))
            .expect("an active player remains in every iteration");
        if iteration == 0 && variant == IacsmVariant::HalvedFirstShares {
            first_payment = Some((player, bundle.iter().map(|j| offered[j]).sum::<Rat>()));
        }
        allocation.set_bundle(player, bundle);
        st.finalize(player, bundle);
    }
    st.record_shares();
    debug_assert!((0..m).all(|j| st.tentative[j] == allocation.served(j)));

    let mut payments: Vec<Rat> = (0..n)
        .map(|i| allocation.bundle(i).iter().map(|j| st.shares[j]).sum())
        .collect();
    if let Some((player, p)) = first_payment {
        payments[player] = p;
    }
    Ok((
        Outcome {
            allocation,
            payments,
        },
        st.trace,
    ))
}
