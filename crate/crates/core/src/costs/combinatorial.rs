//! Exact combinatorial cost oracles: players are set-cover elements or
//! graph edges.

use crate::error::{too_large, Error, Result};
use crate::subset::Subset;

/// Player limit for the exhaustive oracles.
pub const MAX_COMBINATORIAL_PLAYERS: usize = 20;

/// Set Cover: players are the elements `0..n` of the universe, the cost of
/// serving `T` is the size of a minimum subfamily covering `T`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetCover {
    n: usize,
    family: Vec<Subset>,
}

impl SetCover {
    /// Every element must lie in some member of the family, which makes
    /// the cost total on `2^N`.
    pub fn new(n: usize, family: Vec<Subset>) -> Result<Self> {
        too_large("set cover universe", n, MAX_COMBINATORIAL_PLAYERS)?;
        let universe = Subset::full(n);
        if let Some(f) = family.iter().find(|f| !f.is_subset_of(universe)) {
            return Err(Error::Invalid(format!("family member {f} leaves the universe")));
        }
        let covered = family.iter().fold(Subset::EMPTY, |a, f| a.union(*f));
        if covered != universe {
            return Err(Error::Infeasible(universe.difference(covered).0));
        }
        Ok(SetCover { n, family })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &[Subset] {
        &self.family
    }

    pub fn max_set_size(&self) -> usize {
        self.family.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Minimum number of family members covering `t`.
    pub fn min_cover(&self, t: Subset) -> Result<usize> {
        let covered = self.family.iter().fold(Subset::EMPTY, |a, f| a.union(*f));
        if !t.is_subset_of(covered) {
            return Err(Error::Infeasible(t.difference(covered).0));
        }
        let d = self.max_set_size().max(1);
        let mut best = t.len();
        self.branch(t, 0, d, &mut best);
        Ok(best)
    }

    fn branch(&self, uncovered: Subset, used: usize, d: usize, best: &mut usize) {
        let Some(e) = uncovered.first() else {
            *best = (*best).min(used);
            return;
        };
        // every remaining set covers at most d elements
        if used + uncovered.len().div_ceil(d) >= *best {
            return;
        }
        for f in self.family.iter().filter(|f| f.contains(e)) {
            self.branch(uncovered.difference(*f), used + 1, d, best);
        }
    }
}

/// Undirected simple graph whose edges are the players.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        too_large("edge count", edges.len(), MAX_COMBINATORIAL_PLAYERS)?;
        too_large("vertex count", vertices, 64)?;
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::Invalid(format!("edge {k} ({u},{v}) has an unknown endpoint")));
            }
            if u == v {
                return Err(Error::Invalid(format!("edge {k} is a self-loop")));
            }
        }
        Ok(Graph { vertices, edges })
    }

    /// The star `K_{1,k}` with centre 0.
    pub fn star(k: usize) -> Result<Self> {
        Graph::new(k + 1, (1..=k).map(|v| (0, v)).collect())
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn n(&self) -> usize {
        self.edges.len()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.vertices];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }

    /// Two-colouring of the vertices, if one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut color: Vec<Option<bool>> = vec![None; self.vertices];
        let adj = self.adjacency();
        for start in 0..self.vertices {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(u) = stack.pop() {
                let cu = color[u].unwrap();
                for &w in &adj[u] {
                    match color[w] {
                        None => {
                            color[w] = Some(!cu);
                            stack.push(w);
                        }
                        Some(cw) if cw == cu => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(color.into_iter().map(|c| c.unwrap_or(false)).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Edges (as a player mask) touching vertex `x`.
    fn incident(&self) -> Vec<u32> {
        let mut inc = vec![0u32; self.vertices];
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            inc[u] |= 1 << k;
            inc[v] |= 1 << k;
        }
        inc
    }

    /// Size of a minimum vertex cover of the edges in `t`.
    pub fn min_vertex_cover(&self, t: Subset) -> usize {
        let inc = self.incident();
        let mut best = t.len();
        self.vc_branch(t.0, 0, &inc, &mut best);
        best
    }

    fn vc_branch(&self, remaining: u32, used: usize, inc: &[u32], best: &mut usize) {
        if remaining == 0 {
            *best = (*best).min(used);
            return;
        }
        if used + 1 >= *best {
            return;
        }
        let k = remaining.trailing_zeros() as usize;
        let (u, v) = self.edges[k];
        self.vc_branch(remaining & !inc[u], used + 1, inc, best);
        self.vc_branch(remaining & !inc[v], used + 1, inc, best);
    }

    /// Size of a maximum matching among the edges in `t`: augmenting paths
    /// on bipartite graphs, exhaustive branching otherwise.
    pub fn max_matching(&self, t: Subset) -> usize {
        match self.bipartition() {
            Some(side) => self.matching_augmenting(t, &side),
            None => self.matching_exhaustive(t),
        }
    }

    /// Kuhn's augmenting-path algorithm on a bipartite graph.
    pub fn matching_augmenting(&self, t: Subset, side: &[bool]) -> usize {
        let mut adj = vec![Vec::new(); self.vertices];
        for k in t.iter() {
            let (u, v) = self.edges[k];
            let (l, r) = if side[u] { (v, u) } else { (u, v) };
            adj[l].push(r);
        }
        let mut mate: Vec<Option<usize>> = vec![None; self.vertices];
        let mut size = 0;
        for l in (0..self.vertices).filter(|&l| !side[l]) {
            let mut seen = vec![false; self.vertices];
            if augment(l, &adj, &mut mate, &mut seen) {
                size += 1;
            }
        }
        size
    }

    /// Branch on the lowest edge: leave it out, or take it and drop every
    /// edge sharing an endpoint.
    pub fn matching_exhaustive(&self, t: Subset) -> usize {
        let inc = self.incident();
        fn rec(edges: &[(usize, usize)], inc: &[u32], remaining: u32) -> usize {
            if remaining == 0 {
                return 0;
            }
            let k = remaining.trailing_zeros() as usize;
            let (u, v) = edges[k];
            let skip = rec(edges, inc, remaining & !(1 << k));
            let take = 1 + rec(edges, inc, remaining & !inc[u] & !inc[v]);
            skip.max(take)
        }
        rec(&self.edges, &inc, t.0)
    }
}

fn augment(l: usize, adj: &[Vec<usize>], mate: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &r in &adj[l] {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        if mate[r].is_none() || augment(mate[r].unwrap(), adj, mate, seen) {
            mate[r] = Some(l);
            return true;
        }
    }
    false
}
