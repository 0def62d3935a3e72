//! The two mechanisms and the trace checks for the ascending one.

pub mod iacsm;
pub mod sequential;
pub mod trace;

pub use iacsm::{greedy_bundle, iacsm_run, iacsm_run_variant, IacsmVariant};
pub use sequential::{incremental_cost, sm_run, sm_run_default, validate_order};
pub use trace::Trace;
