//! Closed-form cost functions used as reference instances.

use crate::rat::Rat;
use crate::subset::Subset;

/// Denominator of the rational square roots used by [`CatalogCost::Separating`].
pub const SQRT_SCALE: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CatalogCost {
    /// Three players, average-decreasing but neither symmetric nor
    /// submodular: 5, 7, 8 alone; 10 for {0,1}; 9 for {0,2} and {1,2};
    /// 11 for everyone.
    SubadditivityExample,
    /// 0 on ∅, 1 on sets of size 1 or 2, 3 on sets of size at least 3.
    Step { n: usize },
    /// Player `j` (1-based) costs `k/j` alone; a group costs
    /// `min(k, Σ k/j)`.
    Tight { n: usize, k: Rat },
    /// Player `j` (1-based) costs `√j` alone; a group costs its largest
    /// standalone cost. Square roots are rounded down to multiples of
    /// `1/SQRT_SCALE`.
    Separating { n: usize },
}

impl CatalogCost {
    pub fn n(&self) -> usize {
        match *self {
            CatalogCost::SubadditivityExample => 3,
            CatalogCost::Step { n } | CatalogCost::Tight { n, .. } | CatalogCost::Separating { n } => n,
        }
    }

    /// Whether values are rational approximations of an irrational formula.
    pub fn is_approximate(&self) -> bool {
        matches!(self, CatalogCost::Separating { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            CatalogCost::SubadditivityExample => "subadditivity-example",
            CatalogCost::Step { .. } => "step",
            CatalogCost::Tight { .. } => "tight",
            CatalogCost::Separating { .. } => "separating",
        }
    }

    pub fn eval(&self, t: Subset) -> Rat {
        if t.is_empty() {
            return Rat::zero();
        }
        match *self {
            CatalogCost::SubadditivityExample => {
                const TABLE: [i128; 8] = [0, 5, 7, 10, 8, 9, 9, 11];
                Rat::int(TABLE[t.0 as usize])
            }
            CatalogCost::Step { .. } => match t.len() {
                1 | 2 => Rat::one(),
                _ => Rat::int(3),
            },
            CatalogCost::Tight { k, .. } => {
                let sum: Rat = t.iter().map(|i| k / Rat::from(i + 1)).sum();
                sum.min(k)
            }
            CatalogCost::Separating { .. } => {
                let j = t.iter().last().unwrap() + 1;
                Rat::sqrt_floor(j as u64, SQRT_SCALE)
            }
        }
    }
}

/// The reference functions with their display names.
pub fn paper_examples(n: usize, k: Rat) -> Vec<CatalogCost> {
    vec![
        CatalogCost::SubadditivityExample,
        CatalogCost::Step { n },
        CatalogCost::Tight { n, k },
        CatalogCost::Separating { n },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tight_values() {
        let c = CatalogCost::Tight { n: 3, k: Rat::int(6) };
        assert_eq!(c.eval(Subset::singleton(0)), Rat::int(6));
        assert_eq!(c.eval(Subset::singleton(1)), Rat::int(3));
        assert_eq!(c.eval(Subset::singleton(2)), Rat::int(2));
        assert_eq!(c.eval(Subset::from_elems([1, 2])), Rat::int(5));
        assert_eq!(c.eval(Subset::full(3)), Rat::int(6));
    }

    #[test]
    fn separating_values() {
        let c = CatalogCost::Separating { n: 4 };
        assert_eq!(c.eval(Subset::singleton(3)), Rat::int(2));
        let v = c.eval(Subset::from_elems([1, 2])).to_f64();
        assert!((v - 3f64.sqrt()).abs() < 1e-6);
        assert!(c.is_approximate());
    }

    #[test]
    fn step_values() {
        let c = CatalogCost::Step { n: 3 };
        assert_eq!(c.eval(Subset::full(3)), Rat::int(3));
        assert_eq!(c.eval(Subset(0b101)), Rat::one());
    }

    #[test]
    fn subadditivity_example_pair() {
        let c = CatalogCost::SubadditivityExample;
        assert_eq!(c.eval(Subset::from_elems([0, 1])), Rat::int(10));
        // c(N) - c({0,2}) = 2 > 1 = c({1,2}) - c({2})
        let lhs = c.eval(Subset::full(3)) - c.eval(Subset::from_elems([0, 2]));
        let rhs = c.eval(Subset::from_elems([1, 2])) - c.eval(Subset::singleton(2));
        assert_eq!((lhs, rhs), (Rat::int(2), Rat::one()));
    }
}
