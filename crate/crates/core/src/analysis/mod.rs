//! Social cost, optima, run reports and strategyproofness falsification.

mod optimum;
mod wgsp;

pub use optimum::{exhaustive, optimal_social_cost, social_cost, MAX_DP_WORK, MAX_EXHAUSTIVE_CELLS};
pub use wgsp::{sequential_space, symmetric_space, wgsp_search, DeviationWitness};

use std::fmt;
use std::str::FromStr;

use crate::allocation::{Allocation, Outcome};
use crate::costs::alpha::{alpha_max_bounded, alpha_max_bounded_ns, alpha_min_bounded, alpha_min_bounded_ns};
use crate::error::{Error, Result};
use crate::instance::{CostModel, Instance};
use crate::mechanisms::trace::{verify_final_set_structure, verify_p1, verify_p2, Trace};
use crate::mechanisms::{iacsm_run_variant, incremental_cost, sm_run, IacsmVariant};
use crate::rat::{harmonic, Factor, Rat};
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mechanism {
    Iacsm(IacsmVariant),
    /// Sequential mechanism with an explicit order, or `0..n` when `None`.
    Sequential(Option<Vec<usize>>),
}

impl Mechanism {
    pub fn iacsm() -> Self {
        Mechanism::Iacsm(IacsmVariant::Standard)
    }

    pub fn sm() -> Self {
        Mechanism::Sequential(None)
    }

    pub fn name(&self) -> &'static str {
        match self {
            Mechanism::Iacsm(IacsmVariant::Standard) => "iacsm",
            Mechanism::Iacsm(IacsmVariant::HalvedFirstShares) => "iacsm-halved",
            Mechanism::Sequential(_) => "sm",
        }
    }
}

impl fmt::Display for Mechanism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Mechanism {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iacsm" => Ok(Mechanism::iacsm()),
            "iacsm-halved" => Ok(Mechanism::Iacsm(IacsmVariant::HalvedFirstShares)),
            "sm" => Ok(Mechanism::sm()),
            other => Err(Error::Invalid(format!("unknown mechanism `{other}` (expected iacsm or sm)"))),
        }
    }
}

/// Run a mechanism on the valuations declared in `inst`.
pub fn run_mechanism(inst: &Instance, mechanism: &Mechanism) -> Result<(Outcome, Option<Trace>)> {
    match mechanism {
        Mechanism::Iacsm(variant) => iacsm_run_variant(inst, *variant).map(|(o, t)| (o, Some(t))),
        Mechanism::Sequential(order) => {
            let identity: Vec<usize>;
            let order = match order {
                Some(o) => o.as_slice(),
                None => {
                    identity = (0..inst.n()).collect();
                    &identity
                }
            };
            sm_run(inst, order).map(|o| (o, None))
        }
    }
}

/// Invariants checked after a truthful run. Trace checks are `None` for
/// mechanisms without a trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InvariantFlags {
    pub p1: Option<bool>,
    pub p2: Option<bool>,
    pub final_set: Option<bool>,
    pub ir: bool,
    pub npt: bool,
}

impl InvariantFlags {
    pub fn all_pass(&self) -> bool {
        self.ir && self.npt && [self.p1, self.p2, self.final_set].iter().all(|f| f.unwrap_or(true))
    }
}

#[derive(Clone, Debug)]
pub struct RunReport {
    pub mechanism: Mechanism,
    pub outcome: Outcome,
    pub trace: Option<Trace>,
    pub allocation_cost: Rat,
    pub total_payment: Rat,
    /// `Σp / C(A)`, 1 when both vanish.
    pub budget_ratio: Factor,
    pub social_cost: Rat,
    pub optimal_social_cost: Rat,
    pub optimum: Allocation,
    /// `π(A) / π(A*)`, 1 when both vanish.
    pub approx_ratio: Factor,
    pub flags: InvariantFlags,
}

/// Run truthfully and fill every report field, including the exact optimum.
pub fn evaluate_run(inst: &Instance, mechanism: &Mechanism) -> Result<RunReport> {
    let (outcome, trace) = run_mechanism(inst, mechanism)?;
    let a = &outcome.allocation;
    let allocation_cost = inst.allocation_cost(a)?;
    let total_payment = outcome.total_payment();
    let social = social_cost(inst, a)?;
    let (opt, optimum) = optimal_social_cost(inst)?;
    let ir = (0..inst.n()).all(|i| outcome.payments[i] <= inst.valuation(i).value(a.bundle(i)));
    let flags = InvariantFlags {
        p1: trace.as_ref().map(verify_p1),
        p2: trace.as_ref().map(verify_p2),
        final_set: trace.as_ref().map(|t| verify_final_set_structure(&outcome, t)),
        ir,
        npt: outcome.npt(),
    };
    Ok(RunReport {
        mechanism: mechanism.clone(),
        budget_ratio: Factor::ratio(total_payment, allocation_cost),
        approx_ratio: Factor::ratio(social, opt),
        outcome,
        trace,
        allocation_cost,
        total_payment,
        social_cost: social,
        optimal_social_cost: opt,
        optimum,
        flags,
    })
}

/// Largest alpha over the instance's cost functions for the min- and
/// max-bounded parameterizations. Non-separable costs must be within the
/// exhaustive limit.
pub fn instance_bounded_alphas(inst: &Instance) -> Result<(Factor, Factor)> {
    match inst.cost_model() {
        CostModel::Separable(costs) => {
            let mut lo = Factor::Finite(Rat::one());
            let mut hi = Factor::Finite(Rat::one());
            for c in costs {
                lo = lo.max(alpha_min_bounded(c)?.alpha);
                hi = hi.max(alpha_max_bounded(c)?.alpha);
            }
            Ok((lo, hi))
        }
        CostModel::NonSeparable(c) => Ok((
            alpha_min_bounded_ns(c, None)?.alpha,
            alpha_max_bounded_ns(c, None)?.alpha,
        )),
    }
}

/// The incremental-cost sum of the optimal bundles against the sequential
/// mechanism's partial allocations, and the two benchmark bounds.
#[derive(Clone, Debug, PartialEq)]
pub struct IcbReport {
    /// `Σ_i Δ_i(A_{<i}, A*_i)`.
    pub incremental_sum: Rat,
    /// `C(A*)` for the lexicographically smallest optimum.
    pub optimal_cost: Rat,
    pub alpha_min: Factor,
    pub alpha_max: Factor,
    /// `α_min · H_n`.
    pub beta_harmonic: Factor,
    /// `α_max`.
    pub beta_max: Factor,
}

impl IcbReport {
    fn within(&self, beta: Factor) -> bool {
        match beta {
            Factor::Unbounded => true,
            Factor::Finite(b) => self.incremental_sum <= b * self.optimal_cost,
        }
    }

    pub fn holds_harmonic(&self) -> bool {
        self.within(self.beta_harmonic)
    }

    pub fn holds_max(&self) -> bool {
        self.within(self.beta_max)
    }

    pub fn holds(&self) -> bool {
        self.holds_harmonic() && self.holds_max()
    }
}

pub fn check_icb_bound(inst: &Instance, order: &[usize]) -> Result<IcbReport> {
    let outcome = sm_run(inst, order)?;
    let (_, optimum) = optimal_social_cost(inst)?;
    let mut before = Allocation::empty(inst.n(), inst.m());
    let mut sum = Rat::zero();
    for &i in order {
        sum += incremental_cost(inst, &before, i, optimum.bundle(i));
        before.set_bundle(i, outcome.allocation.bundle(i));
    }
    let (alpha_min, alpha_max) = instance_bounded_alphas(inst)?;
    let h = harmonic(inst.n());
    Ok(IcbReport {
        incremental_sum: sum,
        optimal_cost: inst.allocation_cost(&optimum)?,
        alpha_min,
        alpha_max,
        beta_harmonic: match alpha_min {
            Factor::Finite(a) => Factor::Finite(a * h),
            Factor::Unbounded => Factor::Unbounded,
        },
        beta_max: alpha_max,
    })
}

/// Players with a non-empty bundle.
pub fn served_players(a: &Allocation) -> Subset {
    Subset::from_elems((0..a.n()).filter(|&i| !a.bundle(i).is_empty()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::costs::{CatalogCost, CostFn, Graph};
    use crate::valuations::ValuationFn;

    fn single(d: Rat) -> ValuationFn {
        ValuationFn::symmetric(vec![d]).unwrap()
    }

    fn tight() -> Instance {
        let vals = (1..=3).map(|j| single(Rat::int(6) / Rat::int(j) - Rat::new(1, 10))).collect();
        Instance::separable(vals, vec![CostFn::Catalog(CatalogCost::Tight { n: 3, k: Rat::int(6) })]).unwrap()
    }

    #[test]
    fn mechanism_names_round_trip() {
        for m in [Mechanism::iacsm(), Mechanism::sm(), Mechanism::Iacsm(IacsmVariant::HalvedFirstShares)] {
            assert_eq!(m.name().parse::<Mechanism>().unwrap().name(), m.name());
        }
        assert!("vcg".parse::<Mechanism>().is_err());
    }

    #[test]
    fn tight_report() {
        let r = evaluate_run(&tight(), &Mechanism::sm()).unwrap();
        assert_eq!(r.social_cost, Rat::new(107, 10));
        assert_eq!(r.optimal_social_cost, Rat::int(6));
        assert_eq!(r.approx_ratio, Factor::Finite(Rat::new(107, 60)));
        assert_eq!(r.budget_ratio, Factor::Finite(Rat::one()));
        assert!(r.flags.all_pass());
        assert_eq!(r.flags.p1, None);
    }

    #[test]
    fn step_cost_budget_window() {
        let v = ValuationFn::symmetric(vec![Rat::int(2)]).unwrap();
        let inst = Instance::separable(vec![v; 4], vec![CostFn::Catalog(CatalogCost::Step { n: 4 })]).unwrap();
        let r = evaluate_run(&inst, &Mechanism::iacsm()).unwrap();
        let b = r.budget_ratio.finite().unwrap();
        assert!(Rat::one() <= b && b <= Rat::int(2));
        assert!(r.flags.all_pass());
    }

    #[test]
    fn icb_examples() {
        let r = check_icb_bound(&tight(), &[0, 1, 2]).unwrap();
        assert_eq!(r.alpha_min, Factor::Finite(Rat::one()));
        assert_eq!(r.beta_harmonic, Factor::Finite(Rat::new(11, 6)));
        assert!(r.holds_harmonic());

        let zero = Instance::separable(vec![single(Rat::one()); 2], vec![CostFn::constant(2, Rat::zero()).unwrap()]).unwrap();
        let z = check_icb_bound(&zero, &[0, 1]).unwrap();
        assert_eq!(z.incremental_sum, Rat::zero());
        assert!(z.holds());

        let star = Instance::separable(
            vec![single(Rat::int(2)); 3],
            vec![CostFn::VertexCover(Graph::star(3).unwrap())],
        )
        .unwrap();
        let s = check_icb_bound(&star, &[0, 1, 2]).unwrap();
        assert_eq!(s.beta_max, Factor::Finite(Rat::int(3)));
        assert!(s.holds_max());
    }
}
