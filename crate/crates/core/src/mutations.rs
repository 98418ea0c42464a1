//! Square moves on maximal weakly separated collections and the implicit
//! graph they generate.
//!
//! Nodes are canonical collections. The visited table is keyed by an FNV-1a
//! hash of the mask bytes; hash hits are confirmed by full comparison.

use std::collections::{HashMap, VecDeque};
use std::hash::Hasher;

use fnv::{FnvBuildHasher, FnvHasher};
use rayon::prelude::*;
use serde::Serialize;

use crate::cliques::{complete_to_maximal, Collection, Relation};
use crate::error::{Error, Result};
use crate::ground::{k_subsets, same_ground, Subset};

pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Above this value of `k(n - k)` distance searches need explicit consent.
pub const DESK_SCALE: usize = 12;

/// `S∪{a,c} → S∪{b,d}` with `a, b, c, d` cyclically ordered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SquareMove {
    pub from: Subset,
    pub to: Subset,
    pub s: Subset,
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub d: usize,
}

impl SquareMove {
    pub fn reversed(self) -> SquareMove {
        SquareMove { from: self.to, to: self.from, s: self.s, a: self.b, b: self.c, c: self.d, d: self.a }
    }

    /// `S∪{a,b}, S∪{b,c}, S∪{c,d}, S∪{a,d}`.
    pub fn neighbours(self) -> [Subset; 4] {
        let s = self.s;
        [s.with(self.a).with(self.b), s.with(self.b).with(self.c), s.with(self.c).with(self.d), s.with(self.a).with(self.d)]
    }
}

/// Stable 64-bit key of a canonical collection.
pub fn collection_key(c: &Collection) -> u64 {
    let mut h = FnvHasher::default();
    for s in c.iter() {
        h.write(&s.mask().to_le_bytes());
    }
    h.finish()
}

/// Moves available in `c`, without the maximality check. Moves are listed by
/// `from` in canonical order, then by `a, c, b, d`.
pub fn square_moves_unchecked(c: &Collection) -> Vec<SquareMove> {
    let mut moves = Vec::new();
    for &x in c.iter() {
        if x.len() < 2 {
            continue;
        }
        let n = x.n();
        let elems: Vec<usize> = x.elements().collect();
        for (ia, &a) in elems.iter().enumerate() {
            for &cc in &elems[ia + 1..] {
                let s = x.without(a).without(cc);
                // b strictly between a and c, d strictly outside, both off X.
                for b in a + 1..cc {
                    if x.contains(b) || !c.contains(s.with(a).with(b)) || !c.contains(s.with(b).with(cc)) {
                        continue;
                    }
                    for d in (cc + 1..=n).chain(1..a) {
                        if x.contains(d) {
                            continue;
                        }
                        if c.contains(s.with(cc).with(d)) && c.contains(s.with(a).with(d)) {
                            moves.push(SquareMove { from: x, to: s.with(b).with(d), s, a, b, c: cc, d });
                        }
                    }
                }
            }
        }
    }
    moves
}

fn check_maximal(c: &Collection) -> Result<(usize, usize)> {
    let first = *c.items().first().ok_or_else(|| Error::Precondition("empty collection".into()))?;
    let (n, k) = (first.n(), first.len());
    if let Some(s) = c.iter().find(|s| s.len() != k) {
        return Err(Error::Cardinality { expected: k, found: s.len() });
    }
    if let Some((a, b)) = c.first_conflict(Relation::Weak) {
        return Err(Error::NotSeparated(a.to_string(), b.to_string()));
    }
    let all = Collection::new(k_subsets(n, k)?)?;
    if let Some(x) = c.first_extension(&all, Relation::Weak) {
        return Err(Error::NotMaximal(x.to_string()));
    }
    Ok((n, k))
}

pub fn find_square_moves(c: &Collection) -> Result<Vec<SquareMove>> {
    check_maximal(c)?;
    Ok(square_moves_unchecked(c))
}

fn apply_unchecked(c: &Collection, m: &SquareMove) -> Collection {
    let mut items: Vec<Subset> = c.items().iter().copied().filter(|&s| s != m.from).collect();
    let pos = items.binary_search(&m.to).unwrap_or_else(|p| p);
    items.insert(pos, m.to);
    Collection::new(items).expect("same ground set")
}

pub fn apply_square_move(c: &Collection, m: &SquareMove) -> Result<Collection> {
    if !c.contains(m.from) {
        return Err(Error::MoveNotApplicable(format!("{{{}}} is not in the collection", m.from)));
    }
    if c.contains(m.to) {
        return Err(Error::MoveNotApplicable(format!("{{{}}} is already present", m.to)));
    }
    if let Some(missing) = m.neighbours().into_iter().find(|&x| !c.contains(x)) {
        return Err(Error::MoveNotApplicable(format!("{{{missing}}} is missing")));
    }
    let out = apply_unchecked(c, m);
    debug_assert!(out.is_pairwise(Relation::Weak), "square move broke weak separation");
    Ok(out)
}

/// Explored part of the mutation graph.
#[derive(Clone, Debug, Default)]
pub struct MutationGraph {
    pub nodes: Vec<Collection>,
    /// Neighbour indices, ascending, for every expanded node.
    pub adjacency: Vec<Vec<usize>>,
    pub edge_count: usize,
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub nodes: usize,
    pub edges: usize,
    pub complete: bool,
}

impl MutationGraph {
    pub fn summary(&self) -> GraphSummary {
        GraphSummary { nodes: self.nodes.len(), edges: self.edge_count, complete: self.complete }
    }

    /// Ascending-index list of nodes that contain `s`.
    pub fn containing(&self, s: Subset) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.nodes[i].contains(s)).collect()
    }
}

struct Visited {
    table: HashMap<u64, Vec<usize>, FnvBuildHasher>,
}

impl Visited {
    fn find(&self, nodes: &[Collection], c: &Collection, key: u64) -> Option<usize> {
        self.table.get(&key)?.iter().copied().find(|&i| nodes[i] == *c)
    }
}

/// Breadth-first closure of `seed` under square moves, stopping once `budget`
/// nodes are known. With a `scope`, only moves landing inside it are taken.
pub fn explore_mutation_graph(seed: &Collection, budget: usize, scope: Option<&Collection>) -> MutationGraph {
    let mut graph = MutationGraph::default();
    if budget == 0 {
        return graph;
    }
    let mut visited = Visited { table: HashMap::default() };
    visited.table.entry(collection_key(seed)).or_default().push(0);
    graph.nodes.push(seed.clone());
    let mut complete = true;
    let mut layer_start = 0;
    // Nodes are expanded in index order, a block at a time. Neighbours of a
    // block are computed in parallel and merged in node order, so numbering
    // does not depend on the pool.
    // Chunks bound the memory held by pending neighbour lists.
    const CHUNK: usize = 4096;
    while layer_start < graph.nodes.len() {
        let layer_end = (layer_start + CHUNK).min(graph.nodes.len());
        let found: Vec<Vec<(u64, Collection)>> = graph.nodes[layer_start..layer_end]
            .par_iter()
            .map(|c| {
                square_moves_unchecked(c)
                    .into_iter()
                    .filter(|m| scope.is_none_or(|d| d.contains(m.to)))
                    .map(|m| {
                        let next = apply_unchecked(c, &m);
                        (collection_key(&next), next)
                    })
                    .collect()
            })
            .collect();
        for (offset, neighbours) in found.into_iter().enumerate() {
            let u = layer_start + offset;
            let mut adj = Vec::with_capacity(neighbours.len());
            for (key, next) in neighbours {
                let v = match visited.find(&graph.nodes, &next, key) {
                    Some(v) => v,
                    None if graph.nodes.len() < budget => {
                        let v = graph.nodes.len();
                        visited.table.entry(key).or_default().push(v);
                        graph.nodes.push(next);
                        v
                    }
                    None => {
                        complete = false;
                        continue;
                    }
                };
                // Nodes below u were expanded earlier and already counted the edge.
                if v > u {
                    graph.edge_count += 1;
                }
                adj.push(v);
            }
            adj.sort_unstable();
            adj.dedup();
            graph.adjacency.push(adj);
        }
        layer_start = layer_end;
    }
    graph.complete = complete;
    graph
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathStep {
    pub remove: Subset,
    pub add: Subset,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceResult {
    /// `None` when the budget ran out before the answer was certain.
    pub distance: Option<usize>,
    pub budget_exhausted: bool,
    /// Shortest link found in the explored part; exact when not exhausted.
    pub upper_bound: Option<usize>,
    pub nodes_explored: usize,
    pub path: Vec<PathStep>,
    pub source: Option<Collection>,
    pub target: Option<Collection>,
}

fn bfs_from(adjacency: &[Vec<usize>], starts: &[usize]) -> Vec<usize> {
    let mut dist = vec![usize::MAX; adjacency.len()];
    let mut queue = VecDeque::new();
    for &s in starts {
        dist[s] = 0;
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        for &v in &adjacency[u] {
            if v < adjacency.len() && dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

fn diff_step(from: &Collection, to: &Collection) -> PathStep {
    let remove = *from.iter().find(|&&s| !to.contains(s)).expect("adjacent nodes differ");
    let add = *to.iter().find(|&&s| !from.contains(s)).expect("adjacent nodes differ");
    PathStep { remove, add }
}

/// Mutation distance `D(I, J)`: fewest square moves from a maximal collection
/// containing `I` to one containing `J`. Among shortest routes the witness is
/// the lexicographically least sequence of collections.
pub fn mutation_distance(i: Subset, j: Subset, budget: usize, allow_large: bool) -> Result<DistanceResult> {
    same_ground(i, j)?;
    if i.len() != j.len() {
        return Err(Error::Cardinality { expected: i.len(), found: j.len() });
    }
    let (n, k) = (i.n(), i.len());
    let all = Collection::new(k_subsets(n, k)?)?;
    if i.is_weakly_separated(j)? {
        let both = complete_to_maximal(&Collection::new([i, j])?, &all)?;
        return Ok(DistanceResult {
            distance: Some(0),
            budget_exhausted: false,
            upper_bound: Some(0),
            nodes_explored: 1,
            path: Vec::new(),
            source: Some(both.clone()),
            target: Some(both),
        });
    }
    if k * (n - k) > DESK_SCALE && !allow_large {
        return Err(Error::Gated { k, n });
    }
    let seed = complete_to_maximal(&Collection::new([i])?, &all)?;
    let graph = explore_mutation_graph(&seed, budget, None);
    let sources = graph.containing(i);
    let targets = graph.containing(j);
    let to_target = bfs_from(&graph.adjacency, &targets);
    let best = sources.iter().map(|&s| to_target[s]).filter(|&d| d != usize::MAX).min();
    let exhausted = !graph.complete;
    let mut result = DistanceResult {
        distance: if exhausted { None } else { best },
        budget_exhausted: exhausted,
        upper_bound: best,
        nodes_explored: graph.nodes.len(),
        path: Vec::new(),
        source: None,
        target: None,
    };
    let Some(d) = best else {
        return Ok(result);
    };
    let start = sources
        .iter()
        .copied()
        .filter(|&s| to_target[s] == d)
        .min_by(|&x, &y| graph.nodes[x].cmp(&graph.nodes[y]))
        .expect("some source attains the minimum");
    let mut cur = start;
    while to_target[cur] > 0 {
        let next = graph.adjacency[cur]
            .iter()
            .copied()
            .filter(|&v| v < to_target.len() && to_target[v] + 1 == to_target[cur])
            .min_by(|&x, &y| graph.nodes[x].cmp(&graph.nodes[y]))
            .expect("a shortest route continues");
        result.path.push(diff_step(&graph.nodes[cur], &graph.nodes[next]));
        cur = next;
    }
    result.source = Some(graph.nodes[start].clone());
    result.target = Some(graph.nodes[cur].clone());
    Ok(result)
}
