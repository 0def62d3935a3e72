//! CSV report rows and the invariant checks attached to them.

use std::io::Write;
use std::time::Instant;

use serde::Serialize;

use costshare::analysis::{evaluate_run, Mechanism, RunReport};
use costshare::costs::alpha::{
    alpha_average_decreasing, alpha_max_bounded, alpha_max_bounded_ns, alpha_min_bounded, alpha_min_bounded_ns,
};
use costshare::mechanisms::Trace;
use costshare::{CostModel, Error, Factor, Instance, Rat, Result};

pub const HEADER: [&str; 17] = [
    "instance",
    "mechanism",
    "n",
    "m",
    "budget_ratio",
    "social_cost",
    "optimal_social_cost",
    "approx_ratio",
    "alpha_avg_decreasing",
    "alpha_min_bounded",
    "alpha_max_bounded",
    "p1",
    "p2",
    "final_set",
    "ir",
    "npt",
    "wall_ms",
];

#[derive(Debug, Serialize)]
pub struct Row {
    pub instance: String,
    pub mechanism: String,
    pub n: usize,
    pub m: usize,
    pub budget_ratio: String,
    pub social_cost: String,
    pub optimal_social_cost: String,
    pub approx_ratio: String,
    pub alpha_avg_decreasing: String,
    pub alpha_min_bounded: String,
    pub alpha_max_bounded: String,
    pub p1: String,
    pub p2: String,
    pub final_set: String,
    pub ir: String,
    pub npt: String,
    pub wall_ms: u128,
}

/// Largest alpha per parameterization over the instance's cost functions;
/// `None` when a function is beyond the estimator's size limit.
#[derive(Clone, Copy, Debug, Default)]
pub struct Alphas {
    pub avg: Option<Factor>,
    pub min: Option<Factor>,
    pub max: Option<Factor>,
}

fn within_limits<T>(r: Result<T>) -> Result<Option<T>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::TooLarge { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn max_over(items: impl IntoIterator<Item = Result<Option<Factor>>>) -> Result<Option<Factor>> {
    let mut best = Some(Factor::Finite(Rat::one()));
    for x in items {
        best = match (best, x?) {
            (Some(a), Some(b)) => Some(a.max(b)),
            _ => None,
        };
    }
    Ok(best)
}

pub fn instance_alphas(inst: &Instance) -> Result<Alphas> {
    match inst.cost_model() {
        CostModel::Separable(costs) => Ok(Alphas {
            avg: max_over(costs.iter().map(|c| within_limits(alpha_average_decreasing(c)).map(|r| r.map(|r| r.alpha))))?,
            min: max_over(costs.iter().map(|c| within_limits(alpha_min_bounded(c)).map(|r| r.map(|r| r.alpha))))?,
            max: max_over(costs.iter().map(|c| within_limits(alpha_max_bounded(c)).map(|r| r.map(|r| r.alpha))))?,
        }),
        CostModel::NonSeparable(c) => Ok(Alphas {
            avg: None,
            min: within_limits(alpha_min_bounded_ns(c, None))?.map(|r| r.alpha),
            max: within_limits(alpha_max_bounded_ns(c, None))?.map(|r| r.alpha),
        }),
    }
}

fn show(f: Option<Factor>) -> String {
    f.map_or_else(|| "n/a".into(), |f| f.to_string())
}

fn flag(f: Option<bool>) -> String {
    f.map_or_else(|| "n/a".into(), |b| b.to_string())
}

/// One evaluated run with its row and any failed invariants.
pub struct Evaluated {
    pub row: Row,
    pub report: RunReport,
    pub alphas: Alphas,
    pub failures: Vec<String>,
}

/// Run, fill the row, and apply the checks that hold for every instance:
/// trace invariants, IR, NPT and the mechanism's budget guarantee.
pub fn evaluate(id: &str, inst: &Instance, mechanism: &Mechanism) -> Result<Evaluated> {
    let start = Instant::now();
    let report = evaluate_run(inst, mechanism)?;
    let alphas = instance_alphas(inst)?;
    let wall_ms = start.elapsed().as_millis();

    let mut failures = Vec::new();
    let f = report.flags;
    for (name, ok) in [("P1", f.p1), ("P2", f.p2), ("final-set structure", f.final_set)] {
        if ok == Some(false) {
            failures.push(format!("{name} violated"));
        }
    }
    if !f.ir {
        failures.push("individual rationality violated".into());
    }
    if !f.npt {
        failures.push("negative payment".into());
    }
    let (c, p) = (report.allocation_cost, report.total_payment);
    match mechanism {
        Mechanism::Sequential(_) => {
            if p != c {
                failures.push(format!("payments {p} differ from cost {c}"));
            }
        }
        Mechanism::Iacsm(_) => {
            if p < c {
                failures.push(format!("payments {p} below cost {c}"));
            }
            if let Some(Factor::Finite(a)) = alphas.avg {
                if p > a * c {
                    failures.push(format!("payments {p} above alpha {a} times cost {c}"));
                }
            }
        }
    }

    let row = Row {
        instance: id.to_string(),
        mechanism: mechanism.name().to_string(),
        n: inst.n(),
        m: inst.m(),
        budget_ratio: report.budget_ratio.to_string(),
        social_cost: report.social_cost.to_string(),
        optimal_social_cost: report.optimal_social_cost.to_string(),
        approx_ratio: report.approx_ratio.to_string(),
        alpha_avg_decreasing: show(alphas.avg),
        alpha_min_bounded: show(alphas.min),
        alpha_max_bounded: show(alphas.max),
        p1: flag(f.p1),
        p2: flag(f.p2),
        final_set: flag(f.final_set),
        ir: f.ir.to_string(),
        npt: f.npt.to_string(),
        wall_ms,
    };
    Ok(Evaluated {
        row,
        report,
        alphas,
        failures,
    })
}

pub fn write_rows<W: Write>(out: W, rows: &[&Row]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let csv_err = |e: csv::Error| Error::Io(std::io::Error::other(e));
    w.write_record(HEADER).map_err(csv_err)?;
    for row in rows {
        w.serialize(row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Human-readable dump of an ascending run.
pub fn format_trace(trace: &Trace) -> String {
    fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
        xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    }
    let mut lines = vec![format!("order {}", join(&trace.order))];
    for (k, (&player, bundle)) in trace.order.iter().zip(&trace.bundle_history).enumerate() {
        let shares = join(trace.share_history.iter().map(|h| h[k]));
        lines.push(format!("iteration {k} shares {shares} finalized {player} bundle {bundle}"));
    }
    let last = trace.order.len();
    lines.push(format!("final shares {}", join(trace.share_history.iter().map(|h| h[last]))));
    for (j, w) in trace.withdrawals.iter().enumerate() {
        lines.push(format!("item {j} withdrawals {}", join(w)).trim_end().to_string());
    }
    lines.join("\n") + "\n"
}
