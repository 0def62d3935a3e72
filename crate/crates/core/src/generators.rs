//! Seeded instance generators. Identical parameters and seed always give
//! an identical instance.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costs::alpha::average_decreasing_table;
use crate::costs::{CatalogCost, CostFn, Graph, SetCover};
use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::rat::{Factor, Rat};
use crate::subset::Subset;
use crate::valuations::{gen_symmetric_submodular_with, uniform_grid, ValuationFn};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Marginals `{0, 1/2, 1, .., 4}`.
pub fn default_grid() -> Vec<Rat> {
    uniform_grid(Rat::new(1, 2), Rat::int(4))
}

/// A non-decreasing concave cardinality profile `g(0) = 0, .., g(n)`.
pub fn concave_profile<R: Rng>(n: usize, grid: &[Rat], rng: &mut R) -> Result<Vec<Rat>> {
    let marginals = gen_symmetric_submodular_with(n, grid, rng)?;
    Ok((0..=n).map(|k| marginals.value_of_size(k)).collect())
}

/// Symmetric submodular valuations and per-item symmetric submodular costs.
pub fn random_symmetric<R: Rng>(n: usize, m: usize, grid: &[Rat], rng: &mut R) -> Result<Instance> {
    let vals = (0..n)
        .map(|_| gen_symmetric_submodular_with(m, grid, rng).map(ValuationFn::Symmetric))
        .collect::<Result<Vec<_>>>()?;
    let costs = (0..m)
        .map(|_| CostFn::symmetric(&concave_profile(n, grid, rng)?))
        .collect::<Result<Vec<_>>>()?;
    Instance::separable(vals, costs)
}

/// A random non-decreasing cost table with positive standalone costs; each
/// set adds a step from `steps` on top of its largest proper subset.
pub fn random_nondecreasing_table<R: Rng>(n: usize, steps: &[Rat], rng: &mut R) -> Result<CostFn> {
    let size = 1usize << n;
    let mut values = vec![Rat::zero(); size];
    for t in 1..size {
        let ts = Subset(t as u32);
        let floor = ts
            .iter()
            .map(|i| values[ts.without(i).0 as usize])
            .max()
            .unwrap_or_else(Rat::zero);
        let step = *steps.choose(rng).ok_or_else(|| Error::Invalid("empty step grid".into()))?;
        values[t] = if ts.len() == 1 { floor + step.max(Rat::one()) } else { floor + step };
    }
    CostFn::table(n, values)
}

/// A random non-decreasing table whose least average-decreasing alpha is
/// at most `cap`, by rejection; the table is built as `min(additive, cap
/// on a random scale)` which keeps averages from growing quickly.
pub fn random_avg_decreasing_table<R: Rng>(n: usize, cap: Rat, rng: &mut R) -> Result<CostFn> {
    for _ in 0..1000 {
        let weights: Vec<i128> = (0..n).map(|_| rng.gen_range(1..=4)).collect();
        let ceiling = Rat::int(rng.gen_range(2..=4 * n as i128));
        let size = 1usize << n;
        let mut values = vec![Rat::zero(); size];
        for t in 1..size {
            let ts = Subset(t as u32);
            let additive: Rat = ts.iter().map(|i| Rat::int(weights[i])).sum();
            let bump = Rat::new(rng.gen_range(0..=2), 2);
            let floor = ts
                .iter()
                .map(|i| values[ts.without(i).0 as usize])
                .max()
                .unwrap_or_else(Rat::zero);
            values[t] = floor.max((additive + bump).min(ceiling));
        }
        let alpha = average_decreasing_table(&values, n).alpha;
        if alpha <= Factor::Finite(cap) {
            return CostFn::table(n, values);
        }
    }
    Err(Error::Invalid(format!("no table with alpha <= {cap} found")))
}

/// Each player values one item at a grid value.
fn single_item_valuations<R: Rng>(n: usize, grid: &[Rat], rng: &mut R) -> Vec<ValuationFn> {
    (0..n)
        .map(|_| ValuationFn::symmetric(vec![*grid.choose(rng).unwrap()]).unwrap())
        .collect()
}

/// A random simple graph with `edges` edges on `vertices` vertices and
/// maximum degree at most `max_degree`; bipartite across an even/odd split
/// when asked.
pub fn random_graph<R: Rng>(
    vertices: usize,
    edges: usize,
    max_degree: usize,
    bipartite: bool,
    rng: &mut R,
) -> Result<Graph> {
    let mut candidates: Vec<(usize, usize)> = (0..vertices)
        .flat_map(|u| (u + 1..vertices).map(move |v| (u, v)))
        .filter(|&(u, v)| !bipartite || (u + v) % 2 == 1)
        .collect();
    candidates.shuffle(rng);
    let mut degree = vec![0usize; vertices];
    let mut chosen = Vec::with_capacity(edges);
    for (u, v) in candidates {
        if chosen.len() == edges {
            break;
        }
        if degree[u] < max_degree && degree[v] < max_degree {
            degree[u] += 1;
            degree[v] += 1;
            chosen.push((u, v));
        }
    }
    if chosen.len() < edges {
        return Err(Error::Invalid(format!(
            "could not place {edges} edges on {vertices} vertices with degree <= {max_degree}"
        )));
    }
    Graph::new(vertices, chosen)
}

/// A random covering family over `n` elements whose sets have at most `d`
/// elements.
pub fn random_set_cover<R: Rng>(n: usize, sets: usize, d: usize, rng: &mut R) -> Result<SetCover> {
    if d == 0 {
        return Err(Error::Invalid("set size bound must be positive".into()));
    }
    let elems: Vec<usize> = (0..n).collect();
    let mut family = Vec::with_capacity(sets);
    for _ in 0..sets {
        let size = rng.gen_range(1..=d.min(n));
        family.push(Subset::from_elems(elems.choose_multiple(rng, size).copied()));
    }
    // patch coverage with sets built around uncovered elements
    loop {
        let covered = family.iter().fold(Subset::EMPTY, |a, f| a.union(*f));
        let Some(e) = Subset::full(n).difference(covered).first() else {
            break;
        };
        let size = rng.gen_range(1..=d.min(n));
        let others = elems.iter().copied().filter(|&x| x != e).collect::<Vec<_>>();
        let extra = others.choose_multiple(rng, size - 1).copied();
        family.push(Subset::from_elems(extra).with(e));
    }
    SetCover::new(n, family)
}

/// Generator kinds exposed on the command line.
#[derive(Clone, Debug, PartialEq)]
pub enum GenKind {
    RandomSymmetric { n: usize, m: usize },
    VertexCover { edges: usize, max_degree: usize },
    /// The star `K_{1,k}` as a vertex-cover instance.
    VertexCoverStar { k: usize },
    SetCover { n: usize, sets: usize, d: usize },
    Matching { edges: usize, max_degree: usize, bipartite: bool },
    PaperTight { n: usize, k: Rat, eps: Rat },
    PaperIntersection { n: usize },
    PaperSubadditivity,
}

impl GenKind {
    pub fn name(&self) -> &'static str {
        match self {
            GenKind::RandomSymmetric { .. } => "random-symmetric",
            GenKind::VertexCover { .. } | GenKind::VertexCoverStar { .. } => "vertex-cover",
            GenKind::SetCover { .. } => "set-cover",
            GenKind::Matching { .. } => "matching",
            GenKind::PaperTight { .. } => "paper-tight",
            GenKind::PaperIntersection { .. } => "paper-intersection",
            GenKind::PaperSubadditivity => "paper-subadditivity",
        }
    }
}

impl fmt::Display for GenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Build the instance for `kind`. Paper constructions ignore the seed.
pub fn generate(kind: &GenKind, seed: u64) -> Result<Instance> {
    let mut rng = rng(seed);
    let grid = default_grid();
    match *kind {
        GenKind::RandomSymmetric { n, m } => random_symmetric(n, m, &grid, &mut rng),
        GenKind::VertexCover { edges, max_degree } => {
            let g = random_graph(2 * edges, edges, max_degree, false, &mut rng)?;
            Instance::separable(single_item_valuations(edges, &grid, &mut rng), vec![CostFn::VertexCover(g)])
        }
        GenKind::VertexCoverStar { k } => {
            Instance::separable(single_item_valuations(k, &grid, &mut rng), vec![CostFn::VertexCover(Graph::star(k)?)])
        }
        GenKind::SetCover { n, sets, d } => {
            let sc = random_set_cover(n, sets, d, &mut rng)?;
            Instance::separable(single_item_valuations(n, &grid, &mut rng), vec![CostFn::SetCover(sc)])
        }
        GenKind::Matching {
            edges,
            max_degree,
            bipartite,
        } => {
            let g = random_graph(2 * edges, edges, max_degree, bipartite, &mut rng)?;
            Instance::separable(single_item_valuations(edges, &grid, &mut rng), vec![CostFn::Matching(g)])
        }
        GenKind::PaperTight { n, k, eps } => paper_tight(n, k, eps),
        GenKind::PaperIntersection { n } => paper_intersection(n),
        GenKind::PaperSubadditivity => paper_subadditivity(),
    }
}

/// One item with cost `min(k, Σ k/j)`; player `j` (1-based) values it at
/// `k/j - eps`.
pub fn paper_tight(n: usize, k: Rat, eps: Rat) -> Result<Instance> {
    let vals = (1..=n)
        .map(|j| ValuationFn::symmetric(vec![k / Rat::from(j) - eps]))
        .collect::<Result<Vec<_>>>()?;
    Instance::separable(vals, vec![CostFn::Catalog(CatalogCost::Tight { n, k })])
}

/// One item with the max-of-square-roots cost; each player values the item
/// at her standalone cost.
pub fn paper_intersection(n: usize) -> Result<Instance> {
    let cost = CatalogCost::Separating { n };
    let vals = (0..n)
        .map(|i| ValuationFn::symmetric(vec![cost.eval(Subset::singleton(i))]))
        .collect::<Result<Vec<_>>>()?;
    Instance::separable(vals, vec![CostFn::Catalog(cost)])
}

/// Three players on one item with the subadditive, non-submodular example
/// cost; each values the item at her standalone cost.
pub fn paper_subadditivity() -> Result<Instance> {
    let cost = CatalogCost::SubadditivityExample;
    let vals = (0..3)
        .map(|i| ValuationFn::symmetric(vec![cost.eval(Subset::singleton(i))]))
        .collect::<Result<Vec<_>>>()?;
    Instance::separable(vals, vec![CostFn::Catalog(cost)])
}

/// Parse `key=value` parameters for a kind name.
pub fn parse_kind(name: &str, params: &[(String, String)]) -> Result<GenKind> {
    let get = |key: &str| params.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str());
    let num = |key: &str, default: Option<usize>| -> Result<usize> {
        match get(key) {
            Some(v) => v
                .parse()
                .map_err(|_| Error::Invalid(format!("parameter {key}={v} is not a non-negative integer"))),
            None => default.ok_or_else(|| Error::Invalid(format!("`{name}` needs parameter `{key}`"))),
        }
    };
    let rat = |key: &str, default: Rat| -> Result<Rat> {
        get(key).map_or(Ok(default), |v| v.parse())
    };
    let known: &[&str] = match name {
        "random-symmetric" => &["n", "m"],
        "vertex-cover" => &["edges", "k", "star"],
        "set-cover" => &["n", "sets", "d"],
        "matching" => &["edges", "k", "bipartite"],
        "paper-tight" => &["n", "k", "eps"],
        "paper-intersection" => &["n"],
        "paper-subadditivity" => &[],
        other => return Err(Error::Invalid(format!("unknown generator `{other}`"))),
    };
    if let Some((k, _)) = params.iter().find(|(k, _)| !known.contains(&k.as_str())) {
        return Err(Error::Invalid(format!("`{name}` does not take parameter `{k}`")));
    }
    Ok(match name {
        "random-symmetric" => GenKind::RandomSymmetric {
            n: num("n", Some(4))?,
            m: num("m", Some(2))?,
        },
        "vertex-cover" => match get("star") {
            Some(k) => GenKind::VertexCoverStar {
                k: k.parse().map_err(|_| Error::Invalid(format!("star={k} is not an integer")))?,
            },
            None => GenKind::VertexCover {
                edges: num("edges", Some(6))?,
                max_degree: num("k", Some(3))?,
            },
        },
        "set-cover" => GenKind::SetCover {
            n: num("n", Some(6))?,
            sets: num("sets", Some(4))?,
            d: num("d", Some(3))?,
        },
        "matching" => GenKind::Matching {
            edges: num("edges", Some(6))?,
            max_degree: num("k", Some(3))?,
            bipartite: matches!(get("bipartite"), Some("true" | "1" | "yes")),
        },
        "paper-tight" => GenKind::PaperTight {
            n: num("n", Some(3))?,
            k: rat("k", Rat::int(6))?,
            eps: rat("eps", Rat::new(1, 10))?,
        },
        "paper-intersection" => GenKind::PaperIntersection { n: num("n", Some(4))? },
        _ => GenKind::PaperSubadditivity,
    })
}

impl FromStr for GenKind {
    type Err = Error;
    /// `name` or `name:key=value,key=value`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let params = rest
            .split(',')
            .filter(|p| !p.is_empty())
            .map(|p| {
                p.split_once('=')
                    .map(|(k, v)| (k.trim().to_string(), v.trim().to_string()))
                    .ok_or_else(|| Error::Invalid(format!("expected key=value, found `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        parse_kind(name.trim(), &params)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classes::is_nondecreasing;
    use crate::format::write_instance;

    #[test]
    fn tight_matches_construction() {
        let inst = generate(&"paper-tight:n=3,k=6,eps=1/10".parse().unwrap(), 0).unwrap();
        let values: Vec<Rat> = (0..3).map(|i| inst.valuation(i).value(Subset(1))).collect();
        assert_eq!(values, vec![Rat::new(59, 10), Rat::new(29, 10), Rat::new(19, 10)]);
    }

    #[test]
    fn star_instance() {
        let inst = generate(&"vertex-cover:star=3".parse().unwrap(), 5).unwrap();
        assert_eq!((inst.n(), inst.m()), (3, 1));
        let c = &inst.item_costs().unwrap()[0];
        assert_eq!(c.eval(Subset::full(3)), Rat::one());
    }

    #[test]
    fn seeds_reproduce() {
        for spec in ["random-symmetric:n=4,m=3", "set-cover:n=7,sets=3,d=3", "matching:edges=6,k=2,bipartite=true", "vertex-cover:edges=5,k=2"] {
            let kind: GenKind = spec.parse().unwrap();
            let a = write_instance(&generate(&kind, 11).unwrap()).unwrap();
            let b = write_instance(&generate(&kind, 11).unwrap()).unwrap();
            assert_eq!(a, b, "{spec}");
        }
    }

    #[test]
    fn structural_bounds() {
        let mut r = rng(3);
        for _ in 0..20 {
            let g = random_graph(12, 6, 2, true, &mut r).unwrap();
            assert!(g.max_degree() <= 2);
            assert!(g.is_bipartite());
            let sc = random_set_cover(8, 3, 3, &mut r).unwrap();
            assert!(sc.max_set_size() <= 3);
            let c = random_nondecreasing_table(5, &[Rat::zero(), Rat::one()], &mut r).unwrap();
            assert!(is_nondecreasing(&c.values().unwrap(), 5));
            let c = random_avg_decreasing_table(5, Rat::int(3), &mut r).unwrap();
            assert!(average_decreasing_table(&c.values().unwrap(), 5).alpha <= Factor::Finite(Rat::int(3)));
        }
    }

    #[test]
    fn bad_params() {
        assert!("nope".parse::<GenKind>().is_err());
        assert!("paper-tight:q=1".parse::<GenKind>().is_err());
        assert!("set-cover:n=x".parse::<GenKind>().is_err());
    }
}
