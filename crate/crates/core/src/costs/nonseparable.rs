//! Cost functions on whole allocations, `C: (2^M)^n -> Q≥0`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::allocation::Allocation;
use crate::costs::CostFn;
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::set_function::DEFAULT_CACHE_CAP;
use crate::subset::Subset;

type AllocationOracle = dyn Fn(&Allocation) -> Rat + Send + Sync;

#[derive(Clone)]
pub enum NsKind {
    /// `Σ_j c_j(T_j)`: a separable cost viewed as a function of the allocation.
    Lifted(Vec<CostFn>),
    /// `w · |{i : A_i ≠ ∅}|`: a per-customer connection fee.
    ServedPlayers { weight: Rat },
    /// `w · max_j |T_j|`: capacity sized for the busiest item.
    MaxLoad { weight: Rat },
    /// `w · |∪_i A_i|`: each distinct item is produced once.
    ItemsUsed { weight: Rat },
    Oracle(Arc<AllocationOracle>),
}

impl NsKind {
    pub fn name(&self) -> &'static str {
        match self {
            NsKind::Lifted(_) => "lifted",
            NsKind::ServedPlayers { .. } => "served-players",
            NsKind::MaxLoad { .. } => "max-load",
            NsKind::ItemsUsed { .. } => "items-used",
            NsKind::Oracle(_) => "oracle",
        }
    }
}

impl fmt::Debug for NsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NsKind::Lifted(c) => f.debug_tuple("Lifted").field(c).finish(),
            NsKind::ServedPlayers { weight } => write!(f, "ServedPlayers({weight})"),
            NsKind::MaxLoad { weight } => write!(f, "MaxLoad({weight})"),
            NsKind::ItemsUsed { weight } => write!(f, "ItemsUsed({weight})"),
            NsKind::Oracle(_) => write!(f, "Oracle(..)"),
        }
    }
}

/// A non-separable allocation cost with a memoized evaluator.
#[derive(Clone)]
pub struct AllocationCostFn {
    n: usize,
    m: usize,
    kind: NsKind,
    cache: Arc<Mutex<HashMap<Vec<Subset>, Rat>>>,
    cap: usize,
}

impl AllocationCostFn {
    pub fn new(n: usize, m: usize, kind: NsKind) -> Result<Self> {
        match &kind {
            NsKind::Lifted(costs) => {
                if costs.len() != m {
                    return Err(Error::DimensionMismatch(format!(
                        "lifted cost needs {m} item costs, got {}",
                        costs.len()
                    )));
                }
                if let Some(c) = costs.iter().find(|c| c.n() != n) {
                    return Err(Error::DimensionMismatch(format!(
                        "item cost over {} players, expected {n}",
                        c.n()
                    )));
                }
            }
            NsKind::ServedPlayers { weight } | NsKind::MaxLoad { weight } | NsKind::ItemsUsed { weight } => {
                if weight.is_negative() {
                    return Err(Error::Invalid("weight must be non-negative".into()));
                }
            }
            NsKind::Oracle(_) => {}
        }
        let c = AllocationCostFn {
            n,
            m,
            kind,
            cache: Arc::new(Mutex::new(HashMap::new())),
            cap: DEFAULT_CACHE_CAP,
        };
        if !c.eval(&Allocation::empty(n, m)).is_zero() {
            return Err(Error::Invalid("allocation cost must vanish on the empty allocation".into()));
        }
        Ok(c)
    }

    pub fn oracle(
        n: usize,
        m: usize,
        f: impl Fn(&Allocation) -> Rat + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(n, m, NsKind::Oracle(Arc::new(f)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn kind(&self) -> &NsKind {
        &self.kind
    }

    pub fn eval(&self, a: &Allocation) -> Rat {
        debug_assert_eq!((a.n(), a.m()), (self.n, self.m));
        let key = a.bundles();
        if let Some(v) = self.cache.lock().unwrap().get(key) {
            return *v;
        }
        let v = match &self.kind {
            NsKind::Lifted(costs) => costs
                .iter()
                .enumerate()
                .map(|(j, c)| c.eval(a.served(j)))
                .sum(),
            NsKind::ServedPlayers { weight } => {
                *weight * Rat::from(a.bundles().iter().filter(|b| !b.is_empty()).count())
            }
            NsKind::MaxLoad { weight } => {
                let load = (0..self.m).map(|j| a.served(j).len()).max().unwrap_or(0);
                *weight * Rat::from(load)
            }
            NsKind::ItemsUsed { weight } => {
                let used = a.bundles().iter().fold(Subset::EMPTY, |u, b| u.union(*b));
                *weight * Rat::from(used.len())
            }
            NsKind::Oracle(f) => f(a),
        };
        let mut cache = self.cache.lock().unwrap();
        if cache.len() < self.cap {
            cache.insert(key.to_vec(), v);
        }
        v
    }
}

impl fmt::Debug for AllocationCostFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AllocationCostFn")
            .field("n", &self.n)
            .field("m", &self.m)
            .field("kind", &self.kind)
            .finish()
    }
}

impl PartialEq for AllocationCostFn {
    fn eq(&self, other: &Self) -> bool {
        if (self.n, self.m) != (other.n, other.m) {
            return false;
        }
        match (&self.kind, &other.kind) {
            (NsKind::Lifted(a), NsKind::Lifted(b)) => a == b,
            (NsKind::ServedPlayers { weight: a }, NsKind::ServedPlayers { weight: b })
            | (NsKind::MaxLoad { weight: a }, NsKind::MaxLoad { weight: b })
            | (NsKind::ItemsUsed { weight: a }, NsKind::ItemsUsed { weight: b }) => a == b,
            (NsKind::Oracle(a), NsKind::Oracle(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_values() {
        let a = Allocation::from_bundles(2, vec![Subset(0b01), Subset(0b11), Subset(0)]).unwrap();
        let w = Rat::int(2);
        let served = AllocationCostFn::new(3, 2, NsKind::ServedPlayers { weight: w }).unwrap();
        assert_eq!(served.eval(&a), Rat::int(4));
        let load = AllocationCostFn::new(3, 2, NsKind::MaxLoad { weight: w }).unwrap();
        assert_eq!(load.eval(&a), Rat::int(4));
        let used = AllocationCostFn::new(3, 2, NsKind::ItemsUsed { weight: w }).unwrap();
        assert_eq!(used.eval(&a), Rat::int(4));
        let lifted = AllocationCostFn::new(
            3,
            2,
            NsKind::Lifted(vec![
                CostFn::constant(3, Rat::int(5)).unwrap(),
                CostFn::additive(&[Rat::one(), Rat::int(10), Rat::int(100)]).unwrap(),
            ]),
        )
        .unwrap();
        assert_eq!(lifted.eval(&a), Rat::int(15));
    }

    #[test]
    fn rejects_bad_oracles() {
        assert!(AllocationCostFn::oracle(1, 1, |_| Rat::one()).is_err());
        assert!(AllocationCostFn::new(2, 1, NsKind::Lifted(vec![])).is_err());
    }
}
