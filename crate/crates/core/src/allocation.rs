//! Allocations of items to players and mechanism outcomes.

use std::fmt;

use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::subset::Subset;

/// Per-player bundles `A_i ⊆ M`. The item view `T_j = {i : j ∈ A_i}` is
/// derived on demand, so the two views cannot disagree.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Allocation {
    m: usize,
    bundles: Vec<Subset>,
}

impl Allocation {
    pub fn empty(n: usize, m: usize) -> Self {
        Allocation {
            m,
            bundles: vec![Subset::EMPTY; n],
        }
    }

    pub fn full(n: usize, m: usize) -> Self {
        Allocation {
            m,
            bundles: vec![Subset::full(m); n],
        }
    }

    pub fn from_bundles(m: usize, bundles: Vec<Subset>) -> Result<Self> {
        let items = Subset::full(m);
        if let Some(i) = bundles.iter().position(|b| !b.is_subset_of(items)) {
            return Err(Error::DimensionMismatch(format!(
                "bundle of player {i} mentions items outside 0..{m}"
            )));
        }
        Ok(Allocation { m, bundles })
    }

    /// Build from the item view: `served[j]` is the player set of item `j`.
    pub fn from_served(n: usize, served: &[Subset]) -> Result<Self> {
        let players = Subset::full(n);
        let mut bundles = vec![Subset::EMPTY; n];
        for (j, t) in served.iter().enumerate() {
            if !t.is_subset_of(players) {
                return Err(Error::DimensionMismatch(format!(
                    "item {j} is served to players outside 0..{n}"
                )));
            }
            for i in t.iter() {
                bundles[i] = bundles[i].with(j);
            }
        }
        Ok(Allocation {
            m: served.len(),
            bundles,
        })
    }

    pub fn n(&self) -> usize {
        self.bundles.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn bundle(&self, i: usize) -> Subset {
        self.bundles[i]
    }

    pub fn bundles(&self) -> &[Subset] {
        &self.bundles
    }

    pub fn set_bundle(&mut self, i: usize, bundle: Subset) {
        debug_assert!(bundle.is_subset_of(Subset::full(self.m)));
        self.bundles[i] = bundle;
    }

    /// `T_j`: the players receiving item `j`.
    pub fn served(&self, j: usize) -> Subset {
        Subset::from_elems(
            self.bundles
                .iter()
                .enumerate()
                .filter(|(_, b)| b.contains(j))
                .map(|(i, _)| i),
        )
    }

    pub fn served_sets(&self) -> Vec<Subset> {
        (0..self.m).map(|j| self.served(j)).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.bundles.iter().all(|b| b.is_empty())
    }

    fn check_dims(&self, other: &Allocation) -> Result<()> {
        if self.n() != other.n() || self.m != other.m {
            return Err(Error::DimensionMismatch(format!(
                "allocations are {}x{} and {}x{}",
                self.n(),
                self.m,
                other.n(),
                other.m
            )));
        }
        Ok(())
    }

    /// Componentwise union `(S_1 ∪ T_1, .., S_n ∪ T_n)`.
    pub fn union(&self, other: &Allocation) -> Result<Allocation> {
        self.check_dims(other)?;
        Ok(Allocation {
            m: self.m,
            bundles: self
                .bundles
                .iter()
                .zip(&other.bundles)
                .map(|(a, b)| a.union(*b))
                .collect(),
        })
    }

    /// Componentwise inclusion.
    pub fn is_subset_of(&self, other: &Allocation) -> bool {
        self.n() == other.n()
            && self.m == other.m
            && self
                .bundles
                .iter()
                .zip(&other.bundles)
                .all(|(a, b)| a.is_subset_of(*b))
    }

    /// `A|_S`: players in `s` keep their bundles, everyone else gets nothing.
    pub fn restrict(&self, s: Subset) -> Allocation {
        Allocation {
            m: self.m,
            bundles: self
                .bundles
                .iter()
                .enumerate()
                .map(|(i, b)| if s.contains(i) { *b } else { Subset::EMPTY })
                .collect(),
        }
    }
}

/// Largest `n·m` for which allocations are enumerated exhaustively.
pub const MAX_ENUMERATED_CELLS: usize = 24;

impl Allocation {
    /// Every allocation of `m` items among `n` players, ordered
    /// lexicographically by the item view `(T_1, .., T_m)` with each `T_j`
    /// compared as a bitmask.
    pub fn enumerate(n: usize, m: usize) -> impl Iterator<Item = Allocation> {
        assert!(n * m <= MAX_ENUMERATED_CELLS, "too many allocations to enumerate");
        let mask = (1u64 << n) - 1;
        (0..1u64 << (n * m)).map(move |code| Self::decode(n, m, code, mask))
    }

    /// Number of allocations visited by [`Allocation::enumerate`].
    pub fn count(n: usize, m: usize) -> u64 {
        1u64 << (n * m)
    }

    /// The `code`-th allocation in [`Allocation::enumerate`] order.
    pub fn nth(n: usize, m: usize, code: u64) -> Allocation {
        Self::decode(n, m, code, (1u64 << n) - 1)
    }

    fn decode(n: usize, m: usize, code: u64, mask: u64) -> Allocation {
        let mut bundles = vec![Subset::EMPTY; n];
        for j in 0..m {
            // item 0 occupies the most significant chunk
            let t = (code >> ((m - 1 - j) * n)) & mask;
            for i in Subset(t as u32).iter() {
                bundles[i] = bundles[i].with(j);
            }
        }
        Allocation { m, bundles }
    }
}

impl fmt::Debug for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.bundles).finish()
    }
}

impl fmt::Display for Allocation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, b) in self.bundles.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, ")")
    }
}

/// An allocation together with per-player payments.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub allocation: Allocation,
    pub payments: Vec<Rat>,
}

impl Outcome {
    pub fn total_payment(&self) -> Rat {
        self.payments.iter().sum()
    }

    /// No positive transfers: every payment is non-negative.
    pub fn npt(&self) -> bool {
        self.payments.iter().all(|p| !p.is_negative())
    }
}
