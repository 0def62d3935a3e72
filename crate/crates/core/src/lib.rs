//! Exact-arithmetic cost-sharing mechanisms for combinatorial settings.
//!
//! Players hold symmetric submodular (or general table) valuations over a
//! set of items; serving a set of players an item costs `c_j(T)`. Two
//! mechanisms are provided: an iterative ascending mechanism and a
//! sequential one, with tools to measure budget balance, efficiency and
//! resistance to coalitional misreports on small instances.

pub mod allocation;
pub mod analysis;
pub mod classes;
pub mod costs;
pub mod error;
pub mod format;
pub mod generators;
pub mod instance;
pub mod mechanisms;
pub mod rat;
pub mod set_function;
pub mod subset;
pub mod valuations;

pub use allocation::{Allocation, Outcome};
pub use costs::{AllocationCostFn, CatalogCost, CostFn, Graph, NsKind, SetCover};
pub use error::{Error, Result};
pub use instance::{CostModel, Instance};
pub use rat::{harmonic, Factor, Rat};
pub use set_function::SetFunction;
pub use subset::Subset;
pub use valuations::{SymmetricSubmodular, TableValuation, ValuationFn};
