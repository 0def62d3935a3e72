//! Player valuation functions over item bundles.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classes::{self, ClassFlags};
use crate::error::{Error, Result};
use crate::rat::Rat;
use crate::set_function::SetFunction;
use crate::subset::Subset;

/// A valuation whose value depends only on the bundle size, with
/// non-increasing non-negative marginals `δ_1 >= δ_2 >= .. >= δ_m >= 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricSubmodular {
    marginals: Vec<Rat>,
}

impl SymmetricSubmodular {
    pub fn new(marginals: Vec<Rat>) -> Result<Self> {
        if marginals.iter().any(|d| d.is_negative()) {
            return Err(Error::Invalid("marginals must be non-negative".into()));
        }
        if marginals.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("marginals must be non-increasing".into()));
        }
        Ok(SymmetricSubmodular { marginals })
    }

    pub fn marginals(&self) -> &[Rat] {
        &self.marginals
    }

    pub fn m(&self) -> usize {
        self.marginals.len()
    }

    /// Value of any bundle with `k` items.
    pub fn value_of_size(&self, k: usize) -> Rat {
        self.marginals[..k].iter().sum()
    }
}

/// An arbitrary valuation given by its table over item bundles; `v(∅) = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct TableValuation {
    table: SetFunction,
}

impl TableValuation {
    pub fn new(table: SetFunction) -> Result<Self> {
        if !table.eval(Subset::EMPTY).is_zero() {
            return Err(Error::Invalid("table valuations must have v(∅) = 0".into()));
        }
        Ok(TableValuation {
            table: table.to_table()?,
        })
    }

    pub fn from_values(m: usize, values: Vec<Rat>) -> Result<Self> {
        Self::new(SetFunction::table(m, values)?)
    }

    pub fn m(&self) -> usize {
        self.table.ground_size()
    }

    pub fn table(&self) -> &SetFunction {
        &self.table
    }

    pub fn check_class(&self) -> Result<ClassFlags> {
        check_class(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ValuationFn {
    Symmetric(SymmetricSubmodular),
    Table(TableValuation),
}

impl ValuationFn {
    pub fn symmetric(marginals: Vec<Rat>) -> Result<Self> {
        SymmetricSubmodular::new(marginals).map(ValuationFn::Symmetric)
    }

    pub fn m(&self) -> usize {
        match self {
            ValuationFn::Symmetric(v) => v.m(),
            ValuationFn::Table(v) => v.m(),
        }
    }

    pub fn value(&self, s: Subset) -> Rat {
        match self {
            ValuationFn::Symmetric(v) => v.value_of_size(s.len()),
            ValuationFn::Table(v) => v.table.eval(s),
        }
    }

    pub fn as_symmetric(&self) -> Option<&SymmetricSubmodular> {
        match self {
            ValuationFn::Symmetric(v) => Some(v),
            ValuationFn::Table(_) => None,
        }
    }

    pub fn to_table(&self) -> Result<TableValuation> {
        match self {
            ValuationFn::Table(t) => Ok(t.clone()),
            ValuationFn::Symmetric(v) => {
                let values = Subset::all(v.m()).map(|s| v.value_of_size(s.len())).collect();
                TableValuation::from_values(v.m(), values)
            }
        }
    }
}

/// Class membership of a table valuation, decided exhaustively (`m <= 20`).
pub fn check_class(v: &TableValuation) -> Result<ClassFlags> {
    let values = v.table.values()?;
    classes::check_table(&values, v.m())
}

/// `m` marginals drawn uniformly from `grid`, sorted non-increasing.
pub fn gen_symmetric_submodular(m: usize, grid: &[Rat], seed: u64) -> Result<SymmetricSubmodular> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_symmetric_submodular_with(m, grid, &mut rng)
}

pub fn gen_symmetric_submodular_with<R: Rng>(
    m: usize,
    grid: &[Rat],
    rng: &mut R,
) -> Result<SymmetricSubmodular> {
    if grid.is_empty() {
        return Err(Error::Invalid("marginal grid is empty".into()));
    }
    let mut marginals: Vec<Rat> = (0..m).map(|_| *grid.choose(rng).unwrap()).collect();
    marginals.sort_by(|a, b| b.cmp(a));
    SymmetricSubmodular::new(marginals)
}

/// Every non-increasing marginal sequence of length `m` over `grid`.
pub fn enumerate_symmetric(m: usize, grid: &[Rat]) -> Vec<SymmetricSubmodular> {
    let mut sorted: Vec<Rat> = grid.to_vec();
    sorted.sort_by(|a, b| b.cmp(a));
    sorted.dedup();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(m);
    fn rec(
        sorted: &[Rat],
        start: usize,
        m: usize,
        cur: &mut Vec<Rat>,
        out: &mut Vec<SymmetricSubmodular>,
    ) {
        if cur.len() == m {
            out.push(SymmetricSubmodular {
                marginals: cur.clone(),
            });
            return;
        }
        for k in start..sorted.len() {
            cur.push(sorted[k]);
            rec(sorted, k, m, cur, out);
            cur.pop();
        }
    }
    rec(&sorted, 0, m, &mut cur, &mut out);
    out
}

/// The grid `{0, step, 2·step, .., max}`.
pub fn uniform_grid(step: Rat, max: Rat) -> Vec<Rat> {
    let mut grid = vec![Rat::zero()];
    let mut x = step;
    while x <= max {
        grid.push(x);
        x += step;
    }
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i128, q: i128) -> Rat {
        Rat::new(p, q)
    }

    #[test]
    fn symmetric_values() {
        let v = ValuationFn::symmetric(vec![Rat::int(3), Rat::int(1)]).unwrap();
        assert_eq!(v.value(Subset::EMPTY), Rat::zero());
        assert_eq!(v.value(Subset(0b11)), Rat::int(4));
        assert_eq!(v.value(Subset(0b10)), Rat::int(3));
        assert!(ValuationFn::symmetric(vec![Rat::int(1), Rat::int(3)]).is_err());
        assert!(ValuationFn::symmetric(vec![Rat::int(-1)]).is_err());
    }

    #[test]
    fn class_of_additive_table() {
        // item weights 1, 2, 4
        let t = TableValuation::from_values(3, Subset::all(3).map(|s| Rat::int(s.0 as i128)).collect())
            .unwrap();
        let f = check_class(&t).unwrap();
        assert!(f.nondecreasing && f.submodular && f.subadditive);
        assert!(!f.symmetric);
    }

    #[test]
    fn class_of_average_decreasing_example() {
        // c({1})=5, c({2})=7, c({3})=8, c({1,2})=10, c({1,3})=c({2,3})=9, c(N)=11
        let vals = [0, 5, 7, 10, 8, 9, 9, 11].iter().map(|&x| Rat::int(x)).collect();
        let t = TableValuation::from_values(3, vals).unwrap();
        let f = check_class(&t).unwrap();
        assert!(f.subadditive);
        assert!(!f.submodular);
        assert!(!f.symmetric);
    }

    #[test]
    fn class_of_step_function() {
        let vals = Subset::all(3)
            .map(|s| match s.len() {
                0 => Rat::zero(),
                1 | 2 => Rat::one(),
                _ => Rat::int(3),
            })
            .collect();
        let t = TableValuation::from_values(3, vals).unwrap();
        let f = check_class(&t).unwrap();
        assert!(!f.subadditive);
        assert!(f.symmetric && f.nondecreasing);
        assert!(!f.xos_symmetric);
    }

    #[test]
    fn symmetric_tables_pass_every_check() {
        let grid = uniform_grid(r(1, 2), Rat::int(2));
        for v in enumerate_symmetric(3, &grid) {
            let t = ValuationFn::Symmetric(v).to_table().unwrap();
            let f = check_class(&t).unwrap();
            assert!(f.nondecreasing && f.submodular && f.symmetric && f.subadditive && f.xos_symmetric);
        }
    }

    #[test]
    fn generator_cases() {
        let zero = gen_symmetric_submodular(4, &[Rat::zero()], 1).unwrap();
        assert!(zero.marginals().iter().all(|d| d.is_zero()));
        let twos = gen_symmetric_submodular(3, &[Rat::int(2)], 9).unwrap();
        assert_eq!(twos.marginals(), &[Rat::int(2); 3]);
        assert!(gen_symmetric_submodular(2, &[], 0).is_err());

        let grid: Vec<Rat> = (0..4).map(Rat::int).collect();
        let a = gen_symmetric_submodular(2, &grid, 7).unwrap();
        let b = gen_symmetric_submodular(2, &grid, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.marginals(), &[Rat::int(1), Rat::int(0)]);
    }

    #[test]
    fn enumerate_counts_multisets() {
        // multisets of size 2 from 9 values: C(10, 2) = 45
        let grid = uniform_grid(r(1, 2), Rat::int(4));
        assert_eq!(grid.len(), 9);
        assert_eq!(enumerate_symmetric(2, &grid).len(), 45);
    }
}
