//! Exhaustive membership checks for the standard set-function classes.

use crate::error::{too_large, Result};
use crate::rat::Rat;
use crate::subset::Subset;

/// Ground-set limit for checks that are polynomial in `2^n`.
pub const MAX_CLASS_GROUND: usize = 20;
/// Ground-set limit for the subadditivity check of monotone functions (3^n).
pub const MAX_SUBADDITIVE_GROUND: usize = 16;
/// Ground-set limit for the subadditivity check of general functions (4^n).
pub const MAX_SUBADDITIVE_GROUND_GENERAL: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct ClassFlags {
    pub nondecreasing: bool,
    pub submodular: bool,
    pub symmetric: bool,
    pub xos_symmetric: bool,
    pub subadditive: bool,
}

pub fn is_nondecreasing(values: &[Rat], n: usize) -> bool {
    Subset::all(n).all(|s| {
        Subset::full(n)
            .difference(s)
            .iter()
            .all(|i| values[s.with(i).0 as usize] >= values[s.0 as usize])
    })
}

/// Diminishing marginals: `f(S+i) - f(S) >= f(S+k+i) - f(S+k)` for all
/// `S` and distinct `i, k` outside `S`. Equivalent to the usual
/// `S ⊆ T, i ∉ T` definition.
pub fn is_submodular(values: &[Rat], n: usize) -> bool {
    let f = |s: Subset| values[s.0 as usize];
    Subset::all(n).all(|s| {
        let outside = Subset::full(n).difference(s);
        outside.iter().all(|i| {
            let gain = f(s.with(i)) - f(s);
            outside
                .without(i)
                .iter()
                .all(|k| gain >= f(s.with(k).with(i)) - f(s.with(k)))
        })
    })
}

pub fn is_symmetric(values: &[Rat], n: usize) -> bool {
    let by_size = cardinality_profile(values, n);
    Subset::all(n).all(|s| values[s.0 as usize] == by_size[s.len()])
}

/// Symmetric with non-increasing average `f(S)/|S|` over non-empty sets.
pub fn is_xos_symmetric(values: &[Rat], n: usize) -> bool {
    if !is_symmetric(values, n) {
        return false;
    }
    let g = cardinality_profile(values, n);
    (1..n).all(|s| g[s] / Rat::from(s) >= g[s + 1] / Rat::from(s + 1))
}

pub fn is_subadditive(values: &[Rat], n: usize, nondecreasing: bool) -> Result<bool> {
    let f = |s: Subset| values[s.0 as usize];
    if nondecreasing {
        // overlapping pairs reduce to disjoint ones under monotonicity
        too_large("subadditivity ground set", n, MAX_SUBADDITIVE_GROUND)?;
        Ok(Subset::all(n).all(|u| {
            let fu = f(u);
            u.subsets().all(|s| fu <= f(s) + f(u.difference(s)))
        }))
    } else {
        too_large("subadditivity ground set", n, MAX_SUBADDITIVE_GROUND_GENERAL)?;
        Ok(Subset::all(n).all(|u| {
            let fu = f(u);
            u.subsets().all(|s| {
                let rest = u.difference(s);
                let fs = f(s);
                s.subsets().all(|z| fu <= fs + f(rest.union(z)))
            })
        }))
    }
}

/// Run every check on a dense table over `n` elements.
pub fn check_table(values: &[Rat], n: usize) -> Result<ClassFlags> {
    too_large("class-check ground set", n, MAX_CLASS_GROUND)?;
    let nondecreasing = is_nondecreasing(values, n);
    Ok(ClassFlags {
        nondecreasing,
        submodular: is_submodular(values, n),
        symmetric: is_symmetric(values, n),
        xos_symmetric: is_xos_symmetric(values, n),
        subadditive: is_subadditive(values, n, nondecreasing)?,
    })
}

fn cardinality_profile(values: &[Rat], n: usize) -> Vec<Rat> {
    // value on {0, .., s-1} for each size s
    (0..=n).map(|s| values[Subset::full(s).0 as usize]).collect()
}
