//! Experiment suites: a TOML config names a built-in suite and/or lists
//! instance files and generator specs.
//!
//! ```toml
//! suite = "corollary-adm"   # optional built-in suite
//! count = 20                # instances per suite or generator entry
//! seed = 0
//! mechanism = "sm"          # for listed instances; default runs both where applicable
//! instances = ["instances"] # files or directories of .inst files
//! generate = ["set-cover:n=6,sets=4,d=3"]
//! ```

use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Deserialize;

use costshare::analysis::Mechanism;
use costshare::format::read_instance;
use costshare::generators::{
    default_grid, generate, paper_tight, random_avg_decreasing_table, random_graph, random_set_cover, rng, GenKind,
};
use rand::Rng;
use costshare::valuations::gen_symmetric_submodular_with;
use costshare::{harmonic, CatalogCost, CostFn, Error, Factor, Instance, Rat, Result, ValuationFn};

use crate::report::{evaluate, Evaluated};

pub const SUITES: [&str; 6] = [
    "corollary-adm",
    "envelope",
    "thm-appl-vc",
    "thm-appl-sc",
    "thm-appl-matching",
    "tight",
];

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub suite: Option<String>,
    pub count: Option<usize>,
    pub seed: Option<u64>,
    pub mechanism: Option<String>,
    #[serde(default)]
    pub instances: Vec<PathBuf>,
    #[serde(default)]
    pub generate: Vec<String>,
}

impl SuiteConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let (line, column) = e
                .span()
                .map(|s| line_col(text, s.start))
                .unwrap_or((1, 1));
            Error::Parse {
                line,
                column,
                message: e.message().to_string(),
            }
        })
    }
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.len() - before.rfind('\n').map_or(0, |p| p + 1) + 1;
    (line, column)
}

/// Checks a built-in suite adds on top of the generic ones.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Claim {
    /// Exact budget balance and `π(A) <= H_n π(A*)`.
    Corollary,
    /// `C(A) <= Σp <= α C(A)` and `π(A) <= 2α³ H_n π(A*)`.
    Envelope,
    /// `α_max <= bound` and `π(A) <= α_max π(A*)`.
    Cover(Bound),
    /// Nobody served and `π(A) / π(A*) >= (k H_n - n ε) / k`.
    Tight { k: Rat, eps: Rat },
    None,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Bound {
    SetSize,
    Degree,
    GeneralMatching,
}

struct Job {
    id: String,
    instance: Instance,
    mechanism: Mechanism,
    claim: Claim,
}

pub struct SuiteRun {
    pub results: Vec<(Evaluated, Vec<String>)>,
}

impl SuiteRun {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|(_, f)| !f.is_empty()).count()
    }
}

fn builtin(name: &str, count: usize, seed: u64) -> Result<Vec<Job>> {
    let mut jobs = Vec::new();
    for k in 0..count {
        let s = seed + k as u64;
        let mut r = rng(s);
        let id = format!("{name}/{s:05}");
        let (instance, mechanism, claim) = match name {
            "corollary-adm" => {
                let (n, m) = (r.gen_range(2..=5), r.gen_range(1..=3));
                let kind = GenKind::RandomSymmetric { n, m };
                (generate(&kind, s)?, Mechanism::iacsm(), Claim::Corollary)
            }
            "envelope" => {
                let (n, m) = (r.gen_range(2..=5), r.gen_range(1..=3));
                let costs = (0..m)
                    .map(|j| {
                        if s.is_multiple_of(2) && j == 0 {
                            Ok(CostFn::Catalog(CatalogCost::Step { n }))
                        } else {
                            random_avg_decreasing_table(n, Rat::int(3), &mut r)
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let grid: Vec<Rat> = (0..=8).map(Rat::int).collect();
                let vals = (0..n)
                    .map(|_| gen_symmetric_submodular_with(m, &grid, &mut r).map(ValuationFn::Symmetric))
                    .collect::<Result<Vec<_>>>()?;
                (Instance::separable(vals, costs)?, Mechanism::iacsm(), Claim::Envelope)
            }
            "thm-appl-vc" | "thm-appl-matching" => {
                let edges = r.gen_range(3..=8);
                let degree = r.gen_range(1..=4);
                let bipartite = name == "thm-appl-matching" && s.is_multiple_of(2);
                let g = random_graph(2 * edges, edges, degree, bipartite, &mut r)?;
                let (cost, bound) = match (name, bipartite) {
                    ("thm-appl-vc", _) => (CostFn::VertexCover(g), Bound::Degree),
                    (_, true) => (CostFn::Matching(g), Bound::Degree),
                    _ => (CostFn::Matching(g), Bound::GeneralMatching),
                };
                let inst = single_item(cost, &mut r)?;
                (inst, Mechanism::sm(), Claim::Cover(bound))
            }
            "thm-appl-sc" => {
                let n = r.gen_range(4..=8);
                let sc = random_set_cover(n, r.gen_range(2..=5), r.gen_range(1..=4), &mut r)?;
                (single_item(CostFn::SetCover(sc), &mut r)?, Mechanism::sm(), Claim::Cover(Bound::SetSize))
            }
            "tight" => {
                let t = (k % 8) as u32 + 1;
                let (kk, eps) = (Rat::int(6), Rat::new(1, 10i128.pow(t)));
                (paper_tight(3, kk, eps)?, Mechanism::sm(), Claim::Tight { k: kk, eps })
            }
            other => {
                return Err(Error::Invalid(format!(
                    "unknown suite `{other}` (known: {})",
                    SUITES.join(", ")
                )))
            }
        };
        jobs.push(Job {
            id,
            instance,
            mechanism,
            claim,
        });
    }
    Ok(jobs)
}

fn single_item(cost: CostFn, r: &mut impl Rng) -> Result<Instance> {
    let grid = default_grid();
    let vals = (0..cost.n())
        .map(|_| ValuationFn::symmetric(vec![grid[r.gen_range(0..grid.len())]]))
        .collect::<Result<Vec<_>>>()?;
    Instance::separable(vals, vec![cost])
}

fn mechanisms_for(inst: &Instance, requested: &Option<String>) -> Result<Vec<Mechanism>> {
    if let Some(name) = requested {
        return Ok(vec![name.parse()?]);
    }
    let iacsm_ok = inst.item_costs().is_some() && inst.valuations().iter().all(|v| v.as_symmetric().is_some());
    Ok(if iacsm_ok {
        vec![Mechanism::iacsm(), Mechanism::sm()]
    } else {
        vec![Mechanism::sm()]
    })
}

fn collect_files(base: &Path, entry: &Path) -> Result<Vec<PathBuf>> {
    let path = if entry.is_absolute() { entry.to_path_buf() } else { base.join(entry) };
    if path.is_dir() {
        let mut files: Vec<PathBuf> = std::fs::read_dir(&path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "inst"))
            .collect();
        files.sort();
        Ok(files)
    } else {
        Ok(vec![path])
    }
}

/// Build and run every job; rows come back sorted by instance id, then
/// mechanism.
pub fn run_suite(config: &SuiteConfig, base: &Path) -> Result<SuiteRun> {
    let count = config.count.unwrap_or(20);
    let seed = config.seed.unwrap_or(0);
    let mut jobs = Vec::new();
    if let Some(name) = &config.suite {
        jobs.extend(builtin(name, count, seed)?);
    }
    for entry in &config.instances {
        for file in collect_files(base, entry)? {
            let instance = read_instance(&file)
                .map_err(|e| Error::Invalid(format!("{}: {e}", file.display())))?;
            for mechanism in mechanisms_for(&instance, &config.mechanism)? {
                jobs.push(Job {
                    id: file.display().to_string(),
                    instance: instance.clone(),
                    mechanism,
                    claim: Claim::None,
                });
            }
        }
    }
    for spec in &config.generate {
        let kind: GenKind = spec.parse()?;
        for k in 0..count {
            let s = seed + k as u64;
            let instance = generate(&kind, s)?;
            for mechanism in mechanisms_for(&instance, &config.mechanism)? {
                jobs.push(Job {
                    id: format!("{spec}#{s:05}"),
                    instance: instance.clone(),
                    mechanism,
                    claim: Claim::None,
                });
            }
        }
    }

    let mut results = jobs
        .par_iter()
        .map(|job| {
            let ev = evaluate(&job.id, &job.instance, &job.mechanism)?;
            let mut failures = ev.failures.clone();
            failures.extend(check_claim(job, &ev)?);
            Ok((ev, failures))
        })
        .collect::<Result<Vec<_>>>()?;
    results.sort_by(|a, b| {
        (&a.0.row.instance, &a.0.row.mechanism).cmp(&(&b.0.row.instance, &b.0.row.mechanism))
    });
    Ok(SuiteRun { results })
}

fn check_claim(job: &Job, ev: &Evaluated) -> Result<Vec<String>> {
    let r = &ev.report;
    let n = job.instance.n();
    let h = harmonic(n);
    let mut fails = Vec::new();
    let approx_at_most = |bound: Rat| r.social_cost <= bound * r.optimal_social_cost;
    match job.claim {
        Claim::Corollary => {
            if r.budget_ratio != Factor::Finite(Rat::one()) {
                fails.push(format!("budget ratio {} is not 1", r.budget_ratio));
            }
            if !approx_at_most(h) {
                fails.push(format!("approximation {} above H_n = {h}", r.approx_ratio));
            }
        }
        Claim::Envelope => match ev.alphas.avg {
            Some(Factor::Finite(a)) => {
                let bound = Rat::int(2) * a * a * a * h;
                if !approx_at_most(bound) {
                    fails.push(format!("approximation {} above 2α³H_n = {bound}", r.approx_ratio));
                }
            }
            other => fails.push(format!("average-decreasing alpha {other:?} is not finite")),
        },
        Claim::Cover(kind) => {
            let cost = &job.instance.item_costs().expect("separable")[0];
            let bound = match (kind, cost) {
                (Bound::SetSize, CostFn::SetCover(sc)) => Rat::from(sc.max_set_size()),
                (Bound::Degree, CostFn::VertexCover(g) | CostFn::Matching(g)) => Rat::from(g.max_degree()),
                (Bound::GeneralMatching, CostFn::Matching(g)) => Rat::new(5 * g.max_degree() as i128 + 3, 4),
                _ => unreachable!("claims are built with matching costs"),
            };
            match ev.alphas.max {
                Some(Factor::Finite(a)) => {
                    if a > bound {
                        fails.push(format!("max-bounded alpha {a} above {bound}"));
                    }
                    if !approx_at_most(a) {
                        fails.push(format!("approximation {} above alpha {a}", r.approx_ratio));
                    }
                }
                other => fails.push(format!("max-bounded alpha {other:?} is not finite")),
            }
        }
        Claim::Tight { k, eps } => {
            if !r.outcome.allocation.is_empty() {
                fails.push("somebody was served".into());
            }
            let floor = (k * h - Rat::from(n) * eps) / k;
            if r.approx_ratio < Factor::Finite(floor) {
                fails.push(format!("approximation {} below {floor}", r.approx_ratio));
            }
        }
        Claim::None => {}
    }
    Ok(fails)
}
