//! Set functions over a small ground set, stored densely or evaluated by a
//! memoized oracle.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{too_large, Error, Result};
use crate::rat::Rat;
use crate::subset::Subset;

/// Largest ground set for dense tables (2^20 entries).
pub const MAX_TABLE_GROUND: usize = 20;

/// Default number of memoized oracle values.
pub const DEFAULT_CACHE_CAP: usize = 1 << 20;

type OracleFn = dyn Fn(Subset) -> Rat + Send + Sync;

#[derive(Clone)]
enum Backing {
    Table(Arc<Vec<Rat>>),
    Oracle {
        eval: Arc<OracleFn>,
        cache: Arc<Mutex<HashMap<u32, Rat>>>,
        cap: usize,
    },
}

/// A map from subsets of `{0, .., ground_size-1}` to non-negative rationals.
#[derive(Clone)]
pub struct SetFunction {
    ground_size: usize,
    backing: Backing,
}

impl SetFunction {
    /// Dense table indexed by bitmask; `values.len()` must be `2^ground_size`.
    pub fn table(ground_size: usize, values: Vec<Rat>) -> Result<Self> {
        too_large("table ground set", ground_size, MAX_TABLE_GROUND)?;
        if values.len() != 1 << ground_size {
            return Err(Error::DimensionMismatch(format!(
                "table over {ground_size} elements needs {} values, got {}",
                1usize << ground_size,
                values.len()
            )));
        }
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
            return Err(Error::Invalid(format!("negative value {v} at subset {i:#b}")));
        }
        Ok(SetFunction {
            ground_size,
            backing: Backing::Table(Arc::new(values)),
        })
    }

    /// Dense table that must additionally vanish on the empty set.
    pub fn cost_table(ground_size: usize, values: Vec<Rat>) -> Result<Self> {
        let f = Self::table(ground_size, values)?;
        if !f.eval(Subset::EMPTY).is_zero() {
            return Err(Error::Invalid("cost function must be 0 on the empty set".into()));
        }
        Ok(f)
    }

    /// Table built by evaluating `f` on every subset.
    pub fn tabulate(ground_size: usize, f: impl Fn(Subset) -> Rat) -> Result<Self> {
        too_large("table ground set", ground_size, MAX_TABLE_GROUND)?;
        Self::table(ground_size, Subset::all(ground_size).map(f).collect())
    }

    /// Oracle-backed function; values are cached up to `cap` entries.
    pub fn oracle(
        ground_size: usize,
        cap: usize,
        eval: impl Fn(Subset) -> Rat + Send + Sync + 'static,
    ) -> Self {
        SetFunction {
            ground_size,
            backing: Backing::Oracle {
                eval: Arc::new(eval),
                cache: Arc::new(Mutex::new(HashMap::new())),
                cap,
            },
        }
    }

    pub fn ground_size(&self) -> usize {
        self.ground_size
    }

    pub fn is_table(&self) -> bool {
        matches!(self.backing, Backing::Table(_))
    }

    pub fn eval(&self, s: Subset) -> Rat {
        match &self.backing {
            Backing::Table(t) => t[s.0 as usize],
            Backing::Oracle { eval, cache, cap } => {
                if let Some(v) = cache.lock().unwrap().get(&s.0) {
                    return *v;
                }
                let v = eval(s);
                let mut cache = cache.lock().unwrap();
                if cache.len() < *cap {
                    cache.insert(s.0, v);
                }
                v
            }
        }
    }

    /// All values, indexed by bitmask.
    pub fn values(&self) -> Result<Vec<Rat>> {
        match &self.backing {
            Backing::Table(t) => Ok(t.as_ref().clone()),
            Backing::Oracle { .. } => {
                too_large("table ground set", self.ground_size, MAX_TABLE_GROUND)?;
                Ok(Subset::all(self.ground_size).map(|s| self.eval(s)).collect())
            }
        }
    }

    /// Materialize into a dense table.
    pub fn to_table(&self) -> Result<SetFunction> {
        SetFunction::table(self.ground_size, self.values()?)
    }
}

impl fmt::Debug for SetFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.backing {
            Backing::Table(t) => f
                .debug_struct("SetFunction")
                .field("ground_size", &self.ground_size)
                .field("table", t)
                .finish(),
            Backing::Oracle { .. } => f
                .debug_struct("SetFunction")
                .field("ground_size", &self.ground_size)
                .field("oracle", &"..")
                .finish(),
        }
    }
}

impl PartialEq for SetFunction {
    /// Extensional equality; oracles are compared by their values.
    fn eq(&self, other: &Self) -> bool {
        self.ground_size == other.ground_size
            && Subset::all(self.ground_size).all(|s| self.eval(s) == other.eval(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_validation() {
        assert!(SetFunction::table(2, vec![Rat::zero(); 3]).is_err());
        assert!(SetFunction::cost_table(1, vec![Rat::one(), Rat::one()]).is_err());
        assert!(SetFunction::table(1, vec![Rat::zero(), Rat::int(-1)]).is_err());
        assert!(matches!(
            SetFunction::table(21, vec![]),
            Err(Error::TooLarge { limit: 20, .. })
        ));
    }

    #[test]
    fn oracle_memoizes_and_matches_table() {
        let calls = Arc::new(Mutex::new(0usize));
        let c2 = calls.clone();
        let f = SetFunction::oracle(3, 4, move |s| {
            *c2.lock().unwrap() += 1;
            Rat::from(s.len())
        });
        assert_eq!(f.eval(Subset(0b101)), Rat::int(2));
        assert_eq!(f.eval(Subset(0b101)), Rat::int(2));
        assert_eq!(*calls.lock().unwrap(), 1);
        let t = f.to_table().unwrap();
        assert!(t.is_table());
        assert_eq!(t, f);
    }
}
