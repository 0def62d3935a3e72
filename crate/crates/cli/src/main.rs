mod report;
mod suite;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use costshare::analysis::Mechanism;
use costshare::costs::alpha::{
    alpha_average_decreasing, alpha_max_bounded, alpha_max_bounded_ns, alpha_min_bounded, alpha_min_bounded_ns,
    AlphaReport, AlphaWitness,
};
use costshare::costs::check_cost_class;
use costshare::format::{read_instance, write_instance};
use costshare::generators::{generate, GenKind};
use costshare::{CatalogCost, CostFn, CostModel, Error, Rat, Result, ValuationFn};

use report::{evaluate, format_trace, write_rows};
use suite::{run_suite, SuiteConfig};

#[derive(Parser)]
#[command(name = "costshare", version, about = "Cost-sharing mechanisms on exact rationals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MechanismArg {
    Iacsm,
    Sm,
}

#[derive(Subcommand)]
enum Command {
    /// Run a mechanism on an instance and print a CSV report row.
    Run {
        instance: PathBuf,
        #[arg(long, value_enum)]
        mechanism: MechanismArg,
        /// Player order for the sequential mechanism, e.g. `2,0,1`.
        #[arg(long, value_delimiter = ',')]
        order: Option<Vec<usize>>,
        /// Write the ascending-run trace here.
        #[arg(long)]
        trace_out: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate the alpha parameters of every cost function.
    Alpha {
        #[arg(required_unless_present = "catalog", conflicts_with = "catalog")]
        instance: Option<PathBuf>,
        /// subadditivity-example, step, tight or separating.
        #[arg(long, requires = "players")]
        catalog: Option<String>,
        #[arg(long)]
        players: Option<usize>,
        /// Scale of the tight cost.
        #[arg(long, default_value = "6")]
        k: Rat,
    },
    /// Generate an instance, e.g. `set-cover:n=6,sets=4,d=3`.
    Gen {
        kind: GenKind,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an experiment suite described by a TOML file.
    Suite {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Report class membership of costs and table valuations.
    Check { instance: PathBuf },
}

fn emit(out: &Option<PathBuf>, text: &[u8]) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text)?,
        None => io::stdout().write_all(text)?,
    }
    Ok(())
}

fn cmd_run(
    instance: &Path,
    mechanism: MechanismArg,
    order: Option<Vec<usize>>,
    trace_out: &Option<PathBuf>,
    out: &Option<PathBuf>,
) -> Result<ExitCode> {
    let inst = read_instance(instance)?;
    let mech = match (mechanism, order) {
        (MechanismArg::Iacsm, Some(_)) => {
            return Err(Error::Invalid("--order applies only to the sequential mechanism".into()))
        }
        (MechanismArg::Iacsm, None) => Mechanism::iacsm(),
        (MechanismArg::Sm, order) => Mechanism::Sequential(order),
    };
    let ev = evaluate(&instance.display().to_string(), &inst, &mech)?;
    let mut buf = Vec::new();
    write_rows(&mut buf, &[&ev.row])?;
    emit(out, &buf)?;
    if let Some(path) = trace_out {
        let text = ev.report.trace.as_ref().map(format_trace).unwrap_or_default();
        fs::write(path, text)?;
    }
    for f in &ev.failures {
        eprintln!("invariant failed: {f}");
    }
    Ok(if ev.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn describe(label: &str, r: &AlphaReport) -> String {
    let witness = match &r.witness {
        None => String::new(),
        Some(AlphaWitness::Pair { s, t }) => format!(" witness S={s} T={t}"),
        Some(AlphaWitness::Set { t }) => format!(" witness T={t}"),
        Some(AlphaWitness::Restriction { allocation, t }) => format!(" witness A={allocation:?} T={t}"),
    };
    let scope = if r.exhaustive { "" } else { " (sampled lower bound)" };
    format!("{label} {}{witness}{scope}", r.alpha)
}

fn alpha_lines(name: &str, c: &CostFn) -> String {
    let line = |label: &str, r: Result<AlphaReport>| match r {
        Ok(r) => describe(label, &r),
        Err(e) => format!("{label} unavailable: {e}"),
    };
    [
        name.to_string(),
        line("  average-decreasing", alpha_average_decreasing(c)),
        line("  min-bounded", alpha_min_bounded(c)),
        line("  max-bounded", alpha_max_bounded(c)),
    ]
    .join("\n")
}

fn catalog(name: &str, n: usize, k: Rat) -> Result<CatalogCost> {
    Ok(match name {
        "subadditivity-example" => {
            if n != 3 {
                return Err(Error::Invalid("subadditivity-example has exactly 3 players".into()));
            }
            CatalogCost::SubadditivityExample
        }
        "step" => CatalogCost::Step { n },
        "tight" => CatalogCost::Tight { n, k },
        "separating" => CatalogCost::Separating { n },
        other => return Err(Error::Invalid(format!("unknown catalog cost `{other}`"))),
    })
}

fn cmd_alpha(instance: &Option<PathBuf>, cat: &Option<String>, players: Option<usize>, k: Rat) -> Result<()> {
    if let Some(name) = cat {
        let c = CostFn::Catalog(catalog(name, players.unwrap_or(0), k)?);
        println!("{}", alpha_lines(name, &c));
        return Ok(());
    }
    let inst = read_instance(instance.as_ref().expect("clap requires an instance"))?;
    match inst.cost_model() {
        CostModel::Separable(costs) => {
            for (j, c) in costs.iter().enumerate() {
                println!("{}", alpha_lines(&format!("item {j}"), c));
            }
        }
        CostModel::NonSeparable(c) => {
            println!("non-separable {}", c.kind().name());
            for (label, r) in [
                ("  min-bounded", alpha_min_bounded_ns(c, None)),
                ("  max-bounded", alpha_max_bounded_ns(c, None)),
            ] {
                match r {
                    Ok(r) => println!("{}", describe(label, &r)),
                    Err(e) => println!("{label} unavailable: {e}"),
                }
            }
        }
    }
    Ok(())
}

fn cmd_suite(config: &Path, out: &Option<PathBuf>) -> Result<ExitCode> {
    let text = fs::read_to_string(config)?;
    let cfg = SuiteConfig::parse(&text).map_err(|e| Error::Invalid(format!("{}: {e}", config.display())))?;
    let base = config.parent().unwrap_or(Path::new("."));
    let run = run_suite(&cfg, base)?;
    let rows: Vec<_> = run.results.iter().map(|(ev, _)| &ev.row).collect();
    let mut buf = Vec::new();
    write_rows(&mut buf, &rows)?;
    emit(out, &buf)?;
    for (ev, fails) in &run.results {
        for f in fails {
            eprintln!("FAIL {} [{}]: {f}", ev.row.instance, ev.row.mechanism);
        }
    }
    let failed = run.failed();
    eprintln!("{} passed, {failed} failed", run.results.len() - failed);
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}

fn flags_line(label: &str, f: Result<costshare::classes::ClassFlags>) -> String {
    match f {
        Ok(f) => format!(
            "{label}: nondecreasing={} submodular={} symmetric={} xos-symmetric={} subadditive={}",
            f.nondecreasing, f.submodular, f.symmetric, f.xos_symmetric, f.subadditive
        ),
        Err(e) => format!("{label}: unavailable: {e}"),
    }
}

fn cmd_check(instance: &Path) -> Result<()> {
    let inst = read_instance(instance)?;
    println!("players {} items {}", inst.n(), inst.m());
    match inst.cost_model() {
        CostModel::Separable(costs) => {
            for (j, c) in costs.iter().enumerate() {
                println!("{}", flags_line(&format!("cost {j}"), check_cost_class(c)));
            }
        }
        CostModel::NonSeparable(c) => println!("cost: non-separable {}", c.kind().name()),
    }
    for (i, v) in inst.valuations().iter().enumerate() {
        match v {
            ValuationFn::Symmetric(_) => println!("valuation {i}: symmetric submodular"),
            ValuationFn::Table(t) => println!("{}", flags_line(&format!("valuation {i}"), t.check_class())),
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run {
            instance,
            mechanism,
            order,
            trace_out,
            out,
        } => cmd_run(&instance, mechanism, order, &trace_out, &out),
        Command::Alpha {
            instance,
            catalog,
            players,
            k,
        } => cmd_alpha(&instance, &catalog, players, k).map(|_| ExitCode::SUCCESS),
        Command::Gen { kind, seed, out } => {
            let text = write_instance(&generate(&kind, seed)?)?;
            emit(&out, text.as_bytes()).map(|_| ExitCode::SUCCESS)
        }
        Command::Suite { config, out } => cmd_suite(&config, &out),
        Command::Check { instance } => cmd_check(&instance).map(|_| ExitCode::SUCCESS),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
