//! Line-oriented text format for instances.
//!
//! ```text
//! # three players, one item
//! players 3
//! items 1
//! valuation 0 symmetric 59/10
//! valuation 1 table 0 2 3 4
//! cost 0 table 0 5 7 10 8 9 9 11
//! cost 1 setcover 0,1 1,2
//! cost 2 vertexcover 4 0-1 0-2 0-3
//! cost 3 matching 4 0-1 1-2 2-3
//! cost 4 catalog tight 6
//! nonseparable served-players 1
//! ```
//!
//! Numbers are integers or `p/q` rationals. Symmetric valuations list their
//! marginals, tables list all values in bitmask order. Set-cover families
//! list member sets as comma-separated players (`-` for the empty set);
//! graph costs give the vertex count, then one `u-v` edge per player.
//! A `nonseparable` line replaces the per-item costs, except for `lifted`,
//! which combines them into one allocation cost.

use std::fmt::Write as _;

use crate::costs::{AllocationCostFn, CatalogCost, CostFn, Graph, NsKind, SetCover};
use crate::error::{Error, Result};
use crate::instance::{CostModel, Instance};
use crate::rat::Rat;
use crate::subset::Subset;
use crate::valuations::{TableValuation, ValuationFn};

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl<'a> Token<'a> {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn rat(&self) -> Result<Rat> {
        self.text
            .parse()
            .map_err(|_| self.err(format!("expected a rational, found `{}`", self.text)))
    }

    fn index(&self) -> Result<usize> {
        self.text
            .parse()
            .map_err(|_| self.err(format!("expected a non-negative integer, found `{}`", self.text)))
    }

    fn set(&self) -> Result<Subset> {
        if self.text == "-" {
            return Ok(Subset::EMPTY);
        }
        let mut s = Subset::EMPTY;
        for part in self.text.split(',') {
            let e: usize = part
                .parse()
                .map_err(|_| self.err(format!("bad set element `{part}`")))?;
            if e >= crate::subset::MAX_GROUND {
                return Err(self.err(format!("set element {e} out of range")));
            }
            s = s.with(e);
        }
        Ok(s)
    }

    fn edge(&self) -> Result<(usize, usize)> {
        let (u, v) = self
            .text
            .split_once('-')
            .ok_or_else(|| self.err(format!("expected an edge `u-v`, found `{}`", self.text)))?;
        let parse = |x: &str| x.parse::<usize>().map_err(|_| self.err(format!("bad vertex `{x}`")));
        Ok((parse(u)?, parse(v)?))
    }
}

struct Line<'a> {
    number: usize,
    tokens: Vec<Token<'a>>,
}

impl<'a> Line<'a> {
    fn at(&self, k: usize) -> Result<Token<'a>> {
        self.tokens.get(k).copied().ok_or_else(|| Error::Parse {
            line: self.number,
            column: self.tokens.last().map_or(1, |t| t.column + t.text.len()),
            message: format!("`{}` line is missing fields", self.tokens[0].text),
        })
    }

    fn rest(&self, from: usize) -> &[Token<'a>] {
        self.tokens.get(from..).unwrap_or(&[])
    }
}

fn tokenize(text: &str) -> Vec<Line<'_>> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let body = raw.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut start = None;
            for (pos, ch) in body.char_indices().chain(std::iter::once((body.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(pos),
                    (true, Some(s)) => {
                        tokens.push(Token {
                            text: &body[s..pos],
                            line: k + 1,
                            column: s + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            (!tokens.is_empty()).then_some(Line {
                number: k + 1,
                tokens,
            })
        })
        .collect()
}

fn with_message(e: Error, line: usize, message: String) -> Error {
    match e {
        Error::Parse { .. } => e,
        _ => Error::Parse {
            line,
            column: 1,
            message,
        },
    }
}

/// Parse an instance from its text form.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let lines = tokenize(text);
    let mut n = None;
    let mut m = None;
    let mut valuations: Vec<Option<ValuationFn>> = Vec::new();
    let mut costs: Vec<Option<CostFn>> = Vec::new();
    let mut nonseparable: Option<(usize, NsSpec)> = None;

    for line in &lines {
        let head = line.tokens[0];
        match head.text {
            "players" | "items" => {
                let value = line.at(1)?;
                let k = value.index()?;
                if k == 0 {
                    return Err(value.err("count must be positive"));
                }
                if line.tokens.len() > 2 {
                    return Err(line.tokens[2].err("unexpected trailing field"));
                }
                let (slot, other) = if head.text == "players" { (&mut n, "players") } else { (&mut m, "items") };
                if slot.replace(k).is_some() {
                    return Err(head.err(format!("`{other}` given twice")));
                }
                if head.text == "players" {
                    valuations = vec![None; k];
                } else {
                    costs = vec![None; k];
                }
            }
            "valuation" => {
                let (n, m) = dims(n, m, head)?;
                let idx = line.at(1)?;
                let i = idx.index()?;
                if i >= n {
                    return Err(idx.err(format!("player {i} out of range (players {n})")));
                }
                if valuations[i].is_some() {
                    return Err(idx.err(format!("valuation of player {i} given twice")));
                }
                valuations[i] = Some(parse_valuation(line, m)?);
            }
            "cost" => {
                let (n, m) = dims(n, m, head)?;
                let idx = line.at(1)?;
                let j = idx.index()?;
                if j >= m {
                    return Err(idx.err(format!("item {j} out of range (items {m})")));
                }
                if costs[j].is_some() {
                    return Err(idx.err(format!("cost of item {j} given twice")));
                }
                costs[j] = Some(parse_cost(line, n)?);
            }
            "nonseparable" => {
                dims(n, m, head)?;
                if nonseparable.is_some() {
                    return Err(head.err("`nonseparable` given twice"));
                }
                nonseparable = Some((line.number, parse_ns(line)?));
            }
            other => return Err(head.err(format!("unknown directive `{other}`"))),
        }
    }

    let (n, m) = match (n, m) {
        (Some(n), Some(m)) => (n, m),
        _ => return Err(missing(&lines, "missing `players` or `items`".into())),
    };
    let valuations: Vec<ValuationFn> = valuations
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or_else(|| missing(&lines, format!("no valuation for player {i}"))))
        .collect::<Result<_>>()?;

    let cost = match nonseparable {
        Some((number, NsSpec::Builtin(kind))) => {
            if let Some(j) = costs.iter().position(Option::is_some) {
                return Err(Error::Parse {
                    line: number,
                    column: 1,
                    message: format!("item cost {j} given alongside a non-separable cost"),
                });
            }
            let c = AllocationCostFn::new(n, m, kind).map_err(|e| {
                let message = e.to_string();
                with_message(e, number, message)
            })?;
            CostModel::NonSeparable(c)
        }
        ns => {
            let item_costs: Vec<CostFn> = costs
                .into_iter()
                .enumerate()
                .map(|(j, c)| c.ok_or_else(|| missing(&lines, format!("no cost for item {j}"))))
                .collect::<Result<_>>()?;
            match ns {
                Some((number, NsSpec::Lifted)) => {
                    let c = AllocationCostFn::new(n, m, NsKind::Lifted(item_costs)).map_err(|e| {
                        let message = e.to_string();
                        with_message(e, number, message)
                    })?;
                    CostModel::NonSeparable(c)
                }
                _ => CostModel::Separable(item_costs),
            }
        }
    };
    Instance::new(valuations, cost).map_err(|e| {
        let message = e.to_string();
        with_message(e, lines.last().map_or(1, |l| l.number), message)
    })
}

fn missing(lines: &[Line<'_>], message: String) -> Error {
    Error::Parse {
        line: lines.last().map_or(1, |l| l.number),
        column: 1,
        message,
    }
}

fn dims(n: Option<usize>, m: Option<usize>, at: Token<'_>) -> Result<(usize, usize)> {
    match (n, m) {
        (Some(n), Some(m)) => Ok((n, m)),
        _ => Err(at.err("`players` and `items` must come first")),
    }
}

fn rats(tokens: &[Token<'_>]) -> Result<Vec<Rat>> {
    tokens.iter().map(Token::rat).collect()
}

fn parse_valuation(line: &Line<'_>, m: usize) -> Result<ValuationFn> {
    let kind = line.at(2)?;
    let values = line.rest(3);
    let fail = |e: Error| match e {
        Error::Parse { .. } => e,
        other => kind.err(other.to_string()),
    };
    match kind.text {
        "symmetric" => {
            if values.len() != m {
                return Err(kind.err(format!("expected {m} marginals, found {}", values.len())));
            }
            ValuationFn::symmetric(rats(values)?).map_err(fail)
        }
        "table" => {
            if values.len() != 1 << m {
                return Err(kind.err(format!("expected {} table values, found {}", 1 << m, values.len())));
            }
            TableValuation::from_values(m, rats(values)?)
                .map(ValuationFn::Table)
                .map_err(fail)
        }
        other => Err(kind.err(format!("unknown valuation kind `{other}`"))),
    }
}

fn parse_cost(line: &Line<'_>, n: usize) -> Result<CostFn> {
    let kind = line.at(2)?;
    let args = line.rest(3);
    let fail = |e: Error| match e {
        Error::Parse { .. } => e,
        other => kind.err(other.to_string()),
    };
    let cost = match kind.text {
        "table" => {
            if args.len() != 1 << n {
                return Err(kind.err(format!("expected {} table values, found {}", 1 << n, args.len())));
            }
            CostFn::table(n, rats(args)?).map_err(fail)?
        }
        "setcover" => {
            let family = args.iter().map(Token::set).collect::<Result<Vec<_>>>()?;
            CostFn::SetCover(SetCover::new(n, family).map_err(fail)?)
        }
        "vertexcover" | "matching" => {
            let vertices = line.at(3)?.index()?;
            let edges = line.rest(4).iter().map(Token::edge).collect::<Result<Vec<_>>>()?;
            if edges.len() != n {
                return Err(kind.err(format!("expected one edge per player ({n}), found {}", edges.len())));
            }
            let g = Graph::new(vertices, edges).map_err(fail)?;
            if kind.text == "vertexcover" {
                CostFn::VertexCover(g)
            } else {
                CostFn::Matching(g)
            }
        }
        "catalog" => {
            let name = line.at(3)?;
            let c = match name.text {
                "subadditivity-example" => CatalogCost::SubadditivityExample,
                "step" => CatalogCost::Step { n },
                "tight" => CatalogCost::Tight { n, k: line.at(4)?.rat()? },
                "separating" => CatalogCost::Separating { n },
                other => return Err(name.err(format!("unknown catalog cost `{other}`"))),
            };
            let expected = 3 + if matches!(c, CatalogCost::Tight { .. }) { 2 } else { 1 };
            if let Some(extra) = line.tokens.get(expected) {
                return Err(extra.err("unexpected trailing field"));
            }
            if c.n() != n {
                return Err(name.err(format!("`{}` is defined for {} players, instance has {n}", c.name(), c.n())));
            }
            CostFn::Catalog(c)
        }
        other => return Err(kind.err(format!("unknown cost kind `{other}`"))),
    };
    Ok(cost)
}

enum NsSpec {
    Lifted,
    Builtin(NsKind),
}

fn parse_ns(line: &Line<'_>) -> Result<NsSpec> {
    let kind = line.at(1)?;
    let weight = || -> Result<Rat> {
        let w = line.at(2)?;
        let r = w.rat()?;
        if r.is_negative() {
            return Err(w.err("weight must be non-negative"));
        }
        Ok(r)
    };
    let spec = match kind.text {
        "lifted" => NsSpec::Lifted,
        "served-players" => NsSpec::Builtin(NsKind::ServedPlayers { weight: weight()? }),
        "max-load" => NsSpec::Builtin(NsKind::MaxLoad { weight: weight()? }),
        "items-used" => NsSpec::Builtin(NsKind::ItemsUsed { weight: weight()? }),
        other => return Err(kind.err(format!("unknown non-separable cost `{other}`"))),
    };
    Ok(spec)
}

fn join<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn set_token(s: Subset) -> String {
    if s.is_empty() {
        "-".into()
    } else {
        s.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
    }
}

fn write_cost(out: &mut String, j: usize, c: &CostFn) -> Result<()> {
    let body = match c {
        CostFn::Table(f) => format!("table {}", join(f.values()?)),
        CostFn::SetCover(sc) => format!("setcover {}", join(sc.family().iter().map(|s| set_token(*s)))),
        CostFn::VertexCover(g) | CostFn::Matching(g) => {
            let tag = if matches!(c, CostFn::VertexCover(_)) { "vertexcover" } else { "matching" };
            format!("{tag} {} {}", g.vertices(), join(g.edges().iter().map(|(u, v)| format!("{u}-{v}"))))
        }
        CostFn::Catalog(cat) => match cat {
            CatalogCost::Tight { k, .. } => format!("catalog tight {k}"),
            other => format!("catalog {}", other.name()),
        },
    };
    writeln!(out, "cost {j} {}", body.trim_end()).unwrap();
    Ok(())
}

/// Canonical text form; oracle-backed costs cannot be written.
pub fn write_instance(inst: &Instance) -> Result<String> {
    let mut out = String::new();
    writeln!(out, "players {}", inst.n()).unwrap();
    writeln!(out, "items {}", inst.m()).unwrap();
    for (i, v) in inst.valuations().iter().enumerate() {
        match v {
            ValuationFn::Symmetric(s) => writeln!(out, "valuation {i} symmetric {}", join(s.marginals())).unwrap(),
            ValuationFn::Table(t) => writeln!(out, "valuation {i} table {}", join(t.table().values()?)).unwrap(),
        }
    }
    match inst.cost_model() {
        CostModel::Separable(costs) => {
            for (j, c) in costs.iter().enumerate() {
                write_cost(&mut out, j, c)?;
            }
        }
        CostModel::NonSeparable(c) => match c.kind() {
            NsKind::Lifted(costs) => {
                for (j, c) in costs.iter().enumerate() {
                    write_cost(&mut out, j, c)?;
                }
                writeln!(out, "nonseparable lifted").unwrap();
            }
            NsKind::ServedPlayers { weight } => writeln!(out, "nonseparable served-players {weight}").unwrap(),
            NsKind::MaxLoad { weight } => writeln!(out, "nonseparable max-load {weight}").unwrap(),
            NsKind::ItemsUsed { weight } => writeln!(out, "nonseparable items-used {weight}").unwrap(),
            NsKind::Oracle(_) => {
                return Err(Error::Invalid("oracle-backed allocation costs have no text form".into()))
            }
        },
    }
    Ok(out)
}

pub fn read_instance(path: impl AsRef<std::path::Path>) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = "\
# three players, one item
players 3
items 1
valuation 0 symmetric 59/10
valuation 1 symmetric 29/10
valuation 2 table 0 19/10
cost 0 catalog tight 6
";

    #[test]
    fn parses_sample() {
        let inst = parse_instance(SAMPLE).unwrap();
        assert_eq!((inst.n(), inst.m()), (3, 1));
        assert_eq!(inst.valuation(0).value(Subset(1)), Rat::new(59, 10));
        let text = write_instance(&inst).unwrap();
        assert_eq!(parse_instance(&text).unwrap(), inst);
        assert_eq!(write_instance(&parse_instance(&text).unwrap()).unwrap(), text);
    }

    #[test]
    fn combinatorial_and_nonseparable() {
        let text = "\
players 3
items 3
valuation 0 symmetric 2 1 0
valuation 1 symmetric 2 1 0
valuation 2 table 0 1 1 2 1 2 2 2
cost 0 setcover 0,1 1,2
cost 1 vertexcover 4 0-1 0-2 0-3
cost 2 matching 4 0-1 1-2 2-3
nonseparable lifted
";
        let inst = parse_instance(text).unwrap();
        assert!(matches!(inst.cost_model(), CostModel::NonSeparable(_)));
        assert_eq!(parse_instance(&write_instance(&inst).unwrap()).unwrap(), inst);

        let ns = "players 2\nitems 2\nvaluation 0 symmetric 1 1\nvaluation 1 symmetric 1 0\nnonseparable max-load 3/2\n";
        let inst = parse_instance(ns).unwrap();
        // numbers are always written as p/q
        assert_eq!(
            write_instance(&inst).unwrap(),
            "players 2\nitems 2\nvaluation 0 symmetric 1/1 1/1\nvaluation 1 symmetric 1/1 0/1\nnonseparable max-load 3/2\n"
        );
    }

    fn parse_err(text: &str) -> (usize, usize, String) {
        match parse_instance(text) {
            Err(Error::Parse { line, column, message }) => (line, column, message),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn error_positions() {
        let (l, c, _) = parse_err("players 2\nitems 1\nvaluation 0 symmetric 1/x\n");
        assert_eq!((l, c), (3, 23));
        let (l, c, msg) = parse_err("players 2\nitems 1\nvaluation 0 bogus 1\n");
        assert_eq!((l, c), (3, 13));
        assert!(msg.contains("bogus"));
        let (l, _, msg) = parse_err("players 1\nitems 1\nvaluation 0 symmetric 1\n");
        assert_eq!(l, 3);
        assert!(msg.contains("no cost for item 0"));
        let (l, c, _) = parse_err("valuation 0 symmetric 1\n");
        assert_eq!((l, c), (1, 1));
        let (l, c, msg) = parse_err("players 2\nitems 1\nvaluation 0 symmetric 1\nvaluation 1 symmetric 1\ncost 0 catalog subadditivity-example\n");
        assert_eq!((l, c), (5, 16));
        assert!(msg.contains("3 players"));
        // decreasing marginals are required
        let (l, _, _) = parse_err("players 1\nitems 2\nvaluation 0 symmetric 1 2\ncost 0 table 0 1\ncost 1 table 0 1\n");
        assert_eq!(l, 3);
        // set cover must cover every player
        let (_, _, msg) = parse_err("players 2\nitems 1\nvaluation 0 symmetric 1\nvaluation 1 symmetric 1\ncost 0 setcover 0\n");
        assert!(msg.contains("covered"));
    }

    fn arb_rat() -> impl Strategy<Value = Rat> {
        (0i128..50, 1i128..7).prop_map(|(p, q)| Rat::new(p, q))
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (1usize..4, 1usize..3).prop_flat_map(|(n, m)| {
            let vals = proptest::collection::vec(
                prop_oneof![
                    proptest::collection::vec(arb_rat(), m).prop_map(|mut d| {
                        d.sort_by(|a, b| b.cmp(a));
                        ValuationFn::symmetric(d).unwrap()
                    }),
                    proptest::collection::vec(arb_rat(), (1 << m) - 1).prop_map(move |mut t| {
                        t.insert(0, Rat::zero());
                        ValuationFn::Table(TableValuation::from_values(m, t).unwrap())
                    }),
                ],
                n,
            );
            let costs = proptest::collection::vec(
                prop_oneof![
                    proptest::collection::vec(arb_rat(), (1 << n) - 1).prop_map(move |mut t| {
                        t.insert(0, Rat::zero());
                        CostFn::table(n, t).unwrap()
                    }),
                    arb_rat().prop_map(move |k| CostFn::Catalog(CatalogCost::Tight { n, k })),
                    Just(CostFn::Catalog(CatalogCost::Step { n })),
                    Just(CostFn::VertexCover(Graph::star(n).unwrap())),
                ],
                m,
            );
            (vals, costs, 0u8..3).prop_map(move |(v, c, ns)| match ns {
                0 => Instance::separable(v, c).unwrap(),
                1 => Instance::new(v, CostModel::NonSeparable(AllocationCostFn::new(n, m, NsKind::Lifted(c)).unwrap()))
                    .unwrap(),
                _ => Instance::new(
                    v,
                    CostModel::NonSeparable(
                        AllocationCostFn::new(n, m, NsKind::ItemsUsed { weight: Rat::new(3, 2) }).unwrap(),
                    ),
                )
                .unwrap(),
            })
        })
    }

    proptest! {
        #[test]
        fn round_trip(inst in arb_instance()) {
            let text = write_instance(&inst).unwrap();
            let back = parse_instance(&text).unwrap();
            prop_assert_eq!(&back, &inst);
            prop_assert_eq!(write_instance(&back).unwrap(), text);
        }
    }
}
