use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_costshare"))
}

fn bundled(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("instances").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn costshare")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn field<'a>(csv: &'a str, column: &str) -> &'a str {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    row[header.iter().position(|h| *h == column).unwrap()]
}

#[test]
fn unknown_mechanism_is_a_usage_error() {
    let path = bundled("paper_corollary.inst");
    let o = run(&["run", path.to_str().unwrap(), "--mechanism", "vcg"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("possible values"));
}

#[test]
fn corollary_instance_balances_budget_exactly() {
    let path = bundled("paper_corollary.inst");
    let o = run(&["run", path.to_str().unwrap(), "--mechanism", "iacsm"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(field(&out, "budget_ratio"), "1/1");
    assert_eq!(field(&out, "p1"), "true");
    assert_eq!(field(&out, "final_set"), "true");
}

#[test]
fn tight_instance_social_cost() {
    let path = bundled("prop_tight_n3_k6.inst");
    let o = run(&["run", path.to_str().unwrap(), "--mechanism", "sm"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(field(&out, "social_cost"), "107/10");
    assert_eq!(field(&out, "optimal_social_cost"), "6/1");
}

#[test]
fn order_is_validated() {
    let path = bundled("prop_tight_n3_k6.inst");
    let o = run(&["run", path.to_str().unwrap(), "--mechanism", "sm", "--order", "0,0,1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["run", path.to_str().unwrap(), "--mechanism", "sm", "--order", "2,1,0"]);
    assert!(o.status.success());
}

#[test]
fn trace_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.txt");
    let path = bundled("paper_corollary.inst");
    let o = run(&[
        "run",
        path.to_str().unwrap(),
        "--mechanism",
        "iacsm",
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(trace).unwrap();
    assert!(text.starts_with("order "));
    assert_eq!(text.lines().filter(|l| l.starts_with("iteration")).count(), 4);
}

#[test]
fn gen_is_deterministic() {
    for kind in ["random-symmetric:n=5,m=3", "set-cover:n=7,sets=5,d=3", "matching:edges=6,k=2"] {
        let a = run(&["gen", kind, "--seed", "17"]);
        let b = run(&["gen", kind, "--seed", "17"]);
        assert!(a.status.success(), "{kind}");
        assert_eq!(a.stdout, b.stdout, "{kind}");
        let c = run(&["gen", kind, "--seed", "18"]);
        assert_ne!(a.stdout, c.stdout, "{kind}");
    }
}

#[test]
fn gen_rejects_unknown_parameters() {
    let o = run(&["gen", "set-cover:radius=3"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bundled_instances_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for entry in std::fs::read_dir(bundled("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let inst = costshare::format::parse_instance(&text).unwrap();
        let written = costshare::format::write_instance(&inst).unwrap();
        let copy = dir.path().join("copy.inst");
        std::fs::write(&copy, &written).unwrap();
        let reparsed = costshare::format::read_instance(&copy).unwrap();
        assert_eq!(costshare::format::write_instance(&reparsed).unwrap(), written, "{}", path.display());

        let a = run(&["run", path.to_str().unwrap(), "--mechanism", "sm"]);
        let b = run(&["run", copy.to_str().unwrap(), "--mechanism", "sm"]);
        assert!(a.status.success(), "{}", path.display());
        for col in ["social_cost", "optimal_social_cost", "budget_ratio"] {
            assert_eq!(field(&stdout(&a), col), field(&stdout(&b), col), "{}", path.display());
        }
    }
}

#[test]
fn empty_suite_prints_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.toml");
    std::fs::write(&cfg, "").unwrap();
    let o = run(&["suite", cfg.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 1);
    assert!(out.starts_with("instance,mechanism,n,m,"));
}

#[test]
fn suite_rows_are_sorted_and_stable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("s.toml");
    std::fs::write(&cfg, "suite = \"corollary-adm\"\ncount = 12\nseed = 5\n").unwrap();
    let a = run(&["suite", cfg.to_str().unwrap()]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let out = stdout(&a);
    let ids: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ids.len(), 12);
    assert!(ids.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(ids[0], "corollary-adm/00005");

    let strip = |s: &str| -> Vec<String> {
        s.lines().map(|l| l.rsplit_once(',').unwrap().0.to_string()).collect()
    };
    let b = run(&["suite", cfg.to_str().unwrap()]);
    assert_eq!(strip(&out), strip(&stdout(&b)));
}

#[test]
fn suite_config_errors_name_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "count = 3\nflavour = \"x\"\n").unwrap();
    let o = run(&["suite", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn alpha_reports_catalog_and_limits() {
    let o = run(&["alpha", "--catalog", "step", "--players", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("average-decreasing 2/1"));

    let o = run(&["alpha", "--catalog", "step", "--players", "21"]);
    assert!(stdout(&o).contains("unavailable"));
}

#[test]
fn check_lists_every_cost() {
    let path = bundled("subadditivity.inst");
    let o = run(&["check", path.to_str().unwrap()]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("cost 0: nondecreasing=true submodular=false"));
    assert!(out.contains("subadditive=true"));
}
