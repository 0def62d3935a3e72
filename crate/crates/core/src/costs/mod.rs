//! Per-item cost functions over player sets, their class checks and the
//! alpha estimators.

pub mod alpha;
pub mod catalog;
pub mod combinatorial;
pub mod nonseparable;

use crate::classes::{self, ClassFlags};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::set_function::SetFunction;
use crate::subset::Subset;

pub use alpha::{
    alpha_average_decreasing, alpha_max_bounded, alpha_max_bounded_ns, alpha_min_bounded,
    alpha_min_bounded_ns, AlphaReport, AlphaWitness,
};
pub use catalog::{paper_examples, CatalogCost};
pub use combinatorial::{Graph, SetCover};
pub use nonseparable::{AllocationCostFn, NsKind};

/// A cost function `c: 2^N -> Q≥0` with `c(∅) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub enum CostFn {
    Table(SetFunction),
    SetCover(SetCover),
    /// Minimum vertex cover of the served edges.
    VertexCover(Graph),
    /// Maximum matching among the served edges.
    Matching(Graph),
    Catalog(CatalogCost),
}

impl CostFn {
    /// Dense table; must vanish on ∅.
    pub fn table(n: usize, values: Vec<Rat>) -> Result<Self> {
        SetFunction::cost_table(n, values).map(CostFn::Table)
    }

    /// `c(S) = value` for every non-empty `S`.
    pub fn constant(n: usize, value: Rat) -> Result<Self> {
        Self::tabulate(n, |s| if s.is_empty() { Rat::zero() } else { value })
    }

    /// `c(S) = Σ_{i∈S} weights[i]`.
    pub fn additive(weights: &[Rat]) -> Result<Self> {
        Self::tabulate(weights.len(), |s| s.iter().map(|i| weights[i]).sum())
    }

    /// `c(S) = g(|S|)` from a cardinality profile `g(0) = 0, g(1), .., g(n)`.
    pub fn symmetric(profile: &[Rat]) -> Result<Self> {
        Self::tabulate(profile.len() - 1, |s| profile[s.len()])
    }

    pub fn tabulate(n: usize, f: impl Fn(Subset) -> Rat) -> Result<Self> {
        let values = SetFunction::tabulate(n, f)?.values()?;
        Self::table(n, values)
    }

    /// Number of players the function is defined over.
    pub fn n(&self) -> usize {
        match self {
            CostFn::Table(f) => f.ground_size(),
            CostFn::SetCover(sc) => sc.n(),
            CostFn::VertexCover(g) | CostFn::Matching(g) => g.n(),
            CostFn::Catalog(c) => c.n(),
        }
    }

    pub fn eval(&self, t: Subset) -> Rat {
        match self {
            CostFn::Table(f) => f.eval(t),
            CostFn::SetCover(sc) => {
                // coverage of the whole universe is checked at construction
                Rat::from(sc.min_cover(t).expect("set cover family covers the universe"))
            }
            CostFn::VertexCover(g) => Rat::from(g.min_vertex_cover(t)),
            CostFn::Matching(g) => Rat::from(g.max_matching(t)),
            CostFn::Catalog(c) => c.eval(t),
        }
    }

    /// All `2^n` values indexed by bitmask.
    pub fn values(&self) -> Result<Vec<Rat>> {
        match self {
            CostFn::Table(f) => f.values(),
            _ => Ok(SetFunction::tabulate(self.n(), |s| self.eval(s))?.values()?),
        }
    }

    pub fn to_table(&self) -> Result<CostFn> {
        Ok(CostFn::Table(SetFunction::table(self.n(), self.values()?)?))
    }

    pub fn is_approximate(&self) -> bool {
        matches!(self, CostFn::Catalog(c) if c.is_approximate())
    }
}

/// Exhaustive class verdicts; subadditivity needs `n <= 16` (monotone) or
/// `n <= 12` (general).
pub fn check_cost_class(c: &CostFn) -> Result<ClassFlags> {
    let values = c.values()?;
    classes::check_table(&values, c.n())
}

/// Convenience check that `n` matches the function's player count.
pub fn expect_players(c: &CostFn, n: usize) -> Result<()> {
    if c.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "cost function is over {} players, instance has {n}",
            c.n()
        )));
    }
    Ok(())
}
