//! Collections of subsets, compatibility graphs, and the clique engine behind
//! every purity check: Bron–Kerbosch enumeration of maximal cliques and an
//! independent branch-and-bound maximum clique.

use std::collections::BTreeMap;
use std::fmt;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ground::{chord_separated_unchecked, same_ground, weakly_separated_unchecked, Subset};

/// Duplicate-free list of subsets on one ground set, ascending by mask.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Collection {
    items: Vec<Subset>,
}

impl Collection {
    /// Sorts and deduplicates. Mixing ground sets is an error.
    pub fn new<I: IntoIterator<Item = Subset>>(items: I) -> Result<Self> {
        let mut items: Vec<Subset> = items.into_iter().collect();
        if let Some(&first) = items.first() {
            for &s in &items[1..] {
                same_ground(first, s)?;
            }
        }
        items.sort_unstable();
        items.dedup();
        Ok(Collection { items })
    }

    /// Caller guarantees the items are strictly increasing and share `n`.
    pub(crate) fn from_sorted(items: Vec<Subset>) -> Self {
        debug_assert!(items.windows(2).all(|w| w[0] < w[1] && w[0].n() == w[1].n()));
        Collection { items }
    }

    pub fn empty() -> Self {
        Collection { items: Vec::new() }
    }

    pub fn items(&self) -> &[Subset] {
        &self.items
    }

    pub fn into_items(self) -> Vec<Subset> {
        self.items
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Subset> {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Ground-set size, unknown for the empty collection.
    pub fn n(&self) -> Option<usize> {
        self.items.first().map(|s| s.n())
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.items.binary_search(&s).is_ok()
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.items.binary_search(&s).ok()
    }

    pub fn is_subset_of(&self, other: &Collection) -> bool {
        self.items.iter().all(|&s| other.contains(s))
    }

    pub fn with(&self, s: Subset) -> Result<Collection> {
        if let Some(first) = self.items.first() {
            same_ground(*first, s)?;
        }
        let mut items = self.items.clone();
        if let Err(pos) = items.binary_search(&s) {
            items.insert(pos, s);
        }
        Ok(Collection { items })
    }

    pub fn without(&self, s: Subset) -> Collection {
        let mut items = self.items.clone();
        if let Ok(pos) = items.binary_search(&s) {
            items.remove(pos);
        }
        Collection { items }
    }

    pub fn union(&self, other: &Collection) -> Result<Collection> {
        Collection::new(self.items.iter().chain(other.items.iter()).copied())
    }

    /// First pair (in canonical order) violating the relation, if any.
    pub fn first_conflict(&self, relation: Relation) -> Option<(Subset, Subset)> {
        for (i, &a) in self.items.iter().enumerate() {
            for &b in &self.items[i + 1..] {
                if !relation.holds(a, b) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_pairwise(&self, relation: Relation) -> bool {
        self.first_conflict(relation).is_none()
    }

    /// True iff no element of `domain` outside `self` is related to every
    /// member of `self`.
    pub fn is_maximal_in(&self, domain: &Collection, relation: Relation) -> bool {
        self.first_extension(domain, relation).is_none()
    }

    pub fn first_extension(&self, domain: &Collection, relation: Relation) -> Option<Subset> {
        domain
            .iter()
            .copied()
            .find(|&x| !self.contains(x) && self.items.iter().all(|&c| relation.holds(x, c)))
    }
}

impl<'a> IntoIterator for &'a Collection {
    type Item = &'a Subset;
    type IntoIter = std::slice::Iter<'a, Subset>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

impl fmt::Debug for Collection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, s) in self.items.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{{{s}}}")?;
        }
        f.write_str("]")
    }
}

impl Serialize for Collection {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.items.iter())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Weak,
    Chord,
}

impl Relation {
    /// The predicate itself; callers keep both arguments on one ground set.
    #[inline]
    pub fn holds(self, a: Subset, b: Subset) -> bool {
        match self {
            Relation::Weak => weakly_separated_unchecked(a, b),
            Relation::Chord => chord_separated_unchecked(a, b),
        }
    }
}

impl std::str::FromStr for Relation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weak" => Ok(Relation::Weak),
            "chord" => Ok(Relation::Chord),
            other => Err(Error::Parse { input: other.to_string(), reason: "expected weak or chord".into() }),
        }
    }
}

/// Simple undirected graph on `0..len` with bitset rows.
#[derive(Clone, Debug)]
pub struct BitGraph {
    rows: Vec<FixedBitSet>,
}

impl BitGraph {
    pub fn new(len: usize) -> Self {
        BitGraph { rows: vec![FixedBitSet::with_capacity(len); len] }
    }

    /// Loops are dropped; edges are stored symmetrically.
    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(len: usize, edges: I) -> Self {
        let mut g = BitGraph::new(len);
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        if u != v {
            self.rows[u].insert(v);
            self.rows[v].insert(u);
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, v: usize) -> &FixedBitSet {
        &self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones(..)
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }

    /// Every inclusion-maximal clique as a sorted index list, in
    /// lexicographic order. Independent of the thread pool size.
    pub fn maximal_cliques(&self) -> Vec<Vec<usize>> {
        let mut all: Vec<Vec<usize>> = self
            .top_branches()
            .into_par_iter()
            .flat_map_iter(|(r, p, x)| {
                let mut found = Vec::new();
                let mut r = r;
                self.bron_kerbosch(&mut r, p, x, &mut |c: &[usize]| {
                    let mut c = c.to_vec();
                    c.sort_unstable();
                    found.push(c);
                });
                found
            })
            .collect();
        all.sort_unstable();
        all
    }

    /// Visits every maximal clique (unsorted members) on the calling thread.
    pub fn for_each_maximal_clique<F: FnMut(&[usize])>(&self, mut visit: F) {
        let mut r = Vec::new();
        let mut p = FixedBitSet::with_capacity(self.len());
        p.insert_range(..);
        let x = FixedBitSet::with_capacity(self.len());
        self.bron_kerbosch(&mut r, p, x, &mut visit);
    }

    /// Folds per-branch accumulators over all maximal cliques in parallel.
    /// `merge` must be associative and commutative for a deterministic result.
    pub fn fold_maximal_cliques<T, Init, Visit, Merge>(&self, init: Init, visit: Visit, merge: Merge) -> T
    where
        T: Send,
        Init: Fn() -> T + Sync + Send,
        Visit: Fn(&mut T, &[usize]) + Sync + Send,
        Merge: Fn(T, T) -> T + Sync + Send,
    {
        self.top_branches()
            .into_par_iter()
            .map(|(r, p, x)| {
                let mut acc = init();
                let mut r = r;
                self.bron_kerbosch(&mut r, p, x, &mut |c: &[usize]| visit(&mut acc, c));
                acc
            })
            .reduce(&init, &merge)
    }

    /// The top level of the pivoted recursion, unrolled so that each branch
    /// can run on its own worker.
    fn top_branches(&self) -> Vec<(Vec<usize>, FixedBitSet, FixedBitSet)> {
        let len = self.len();
        if len == 0 {
            return vec![(Vec::new(), FixedBitSet::with_capacity(0), FixedBitSet::with_capacity(0))];
        }
        let mut p = FixedBitSet::with_capacity(len);
        p.insert_range(..);
        let mut x = FixedBitSet::with_capacity(len);
        let pivot = self.choose_pivot(&p, &x);
        let mut branches = Vec::new();
        for v in self.non_neighbors_in(&p, pivot) {
            let mut np = p.clone();
            np.intersect_with(&self.rows[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.rows[v]);
            branches.push((vec![v], np, nx));
            p.remove(v);
            x.insert(v);
        }
        branches
    }

    fn non_neighbors_in(&self, p: &FixedBitSet, pivot: usize) -> Vec<usize> {
        p.ones().filter(|&v| !self.rows[pivot].contains(v)).collect()
    }

    /// Vertex of P ∪ X with the most neighbours in P; lowest index on ties.
    fn choose_pivot(&self, p: &FixedBitSet, x: &FixedBitSet) -> usize {
        let mut best = usize::MAX;
        let mut best_deg = 0;
        for u in p.union(x) {
            let deg = self.rows[u].intersection_count(p);
            if best == usize::MAX || deg > best_deg || (deg == best_deg && u < best) {
                best = u;
                best_deg = deg;
            }
        }
        best
    }

    fn bron_kerbosch<F: FnMut(&[usize])>(
        &self,
        r: &mut Vec<usize>,
        mut p: FixedBitSet,
        mut x: FixedBitSet,
        visit: &mut F,
    ) {
        if p.is_clear() {
            if x.is_clear() {
                visit(r);
            }
            return;
        }
        let pivot = self.choose_pivot(&p, &x);
        for v in self.non_neighbors_in(&p, pivot) {
            let mut np = p.clone();
            np.intersect_with(&self.rows[v]);
            let mut nx = x.clone();
            nx.intersect_with(&self.rows[v]);
            r.push(v);
            self.bron_kerbosch(r, np, nx, visit);
            r.pop();
            p.remove(v);
            x.insert(v);
        }
    }

    /// Maximum clique size by branch and bound with greedy colouring bounds.
    /// Shares no code with the enumerator.
    pub fn max_clique_size(&self) -> usize {
        self.max_clique().len()
    }

    /// A maximum clique, sorted.
    pub fn max_clique(&self) -> Vec<usize> {
        let len = self.len();
        if len == 0 {
            return Vec::new();
        }
        // Vertices in non-increasing degree order give tighter colourings.
        let mut order: Vec<usize> = (0..len).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(self.degree(v)), v));
        let mut best = Vec::new();
        let mut current = Vec::new();
        self.expand(&mut current, order, &mut best);
        best.sort_unstable();
        best
    }

    fn expand(&self, current: &mut Vec<usize>, candidates: Vec<usize>, best: &mut Vec<usize>) {
        let (ordered, colors) = self.color_sort(&candidates);
        for idx in (0..ordered.len()).rev() {
            if current.len() + colors[idx] <= best.len() {
                return;
            }
            let v = ordered[idx];
            current.push(v);
            let next: Vec<usize> = ordered[..idx].iter().copied().filter(|&w| self.adjacent(v, w)).collect();
            if next.is_empty() {
                if current.len() > best.len() {
                    best.clone_from(current);
                }
            } else {
                self.expand(current, next, best);
            }
            current.pop();
        }
    }

    /// Greedy sequential colouring; returns the vertices sorted by colour
    /// and, per position, the number of colours used up to it.
    fn color_sort(&self, candidates: &[usize]) -> (Vec<usize>, Vec<usize>) {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in candidates {
            match classes.iter_mut().find(|class| class.iter().all(|&w| !self.adjacent(v, w))) {
                Some(class) => class.push(v),
                None => classes.push(vec![v]),
            }
        }
        let mut ordered = Vec::with_capacity(candidates.len());
        let mut colors = Vec::with_capacity(candidates.len());
        for (c, class) in classes.into_iter().enumerate() {
            for v in class {
                ordered.push(v);
                colors.push(c + 1);
            }
        }
        (ordered, colors)
    }
}

/// Domain together with the graph of related pairs.
#[derive(Clone, Debug)]
pub struct CompatGraph {
    vertices: Collection,
    relation: Relation,
    graph: BitGraph,
}

pub fn build_compat_graph(domain: &Collection, relation: Relation) -> Result<CompatGraph> {
    if domain.is_empty() {
        return Err(Error::Precondition("domain is empty".into()));
    }
    let items = domain.items();
    let rows: Vec<FixedBitSet> = (0..items.len())
        .into_par_iter()
        .map(|u| {
            let mut row = FixedBitSet::with_capacity(items.len());
            for v in 0..items.len() {
                if u != v && relation.holds(items[u], items[v]) {
                    row.insert(v);
                }
            }
            row
        })
        .collect();
    Ok(CompatGraph { vertices: domain.clone(), relation, graph: BitGraph { rows } })
}

impl CompatGraph {
    pub fn vertices(&self) -> &Collection {
        &self.vertices
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn graph(&self) -> &BitGraph {
        &self.graph
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    fn collect(&self, indices: &[usize]) -> Collection {
        let items = self.vertices.items();
        let mut sorted = indices.to_vec();
        sorted.sort_unstable();
        Collection::from_sorted(sorted.into_iter().map(|i| items[i]).collect())
    }

    /// Maximal cliques in canonical order.
    pub fn maximal_cliques(&self) -> Vec<Collection> {
        self.graph.maximal_cliques().iter().map(|c| self.collect(c)).collect()
    }

    pub fn max_clique_size(&self) -> usize {
        self.graph.max_clique_size()
    }

    pub fn max_clique(&self) -> Collection {
        self.collect(&self.graph.max_clique())
    }
}

pub fn enumerate_maximal_cliques(g: &CompatGraph) -> Vec<Collection> {
    g.maximal_cliques()
}

pub fn max_clique_size(g: &CompatGraph) -> usize {
    g.max_clique_size()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurityMode {
    /// Full histogram of maximal-clique sizes.
    Histogram,
    /// Only the smallest and largest size; counts are not tracked.
    Streaming,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurityReport {
    pub domain_size: usize,
    pub pure: bool,
    pub rank: Option<usize>,
    pub min_size: usize,
    pub max_size: usize,
    /// `None` in streaming mode.
    pub clique_sizes: Option<BTreeMap<usize, u64>>,
    pub clique_count: Option<u64>,
}

#[derive(Clone, Default)]
struct SizeAcc {
    min: Option<usize>,
    max: usize,
    hist: BTreeMap<usize, u64>,
}

pub fn purity_report(domain: &Collection, relation: Relation, mode: PurityMode) -> Result<PurityReport> {
    let g = build_compat_graph(domain, relation)?;
    Ok(purity_of_graph(&g, mode))
}

pub fn purity_of_graph(g: &CompatGraph, mode: PurityMode) -> PurityReport {
    let track = mode == PurityMode::Histogram;
    let acc = g.graph.fold_maximal_cliques(
        SizeAcc::default,
        |acc, c| {
            let s = c.len();
            acc.min = Some(acc.min.map_or(s, |m| m.min(s)));
            acc.max = acc.max.max(s);
            if track {
                *acc.hist.entry(s).or_insert(0) += 1;
            }
        },
        |mut a, b| {
            a.min = match (a.min, b.min) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
            a.max = a.max.max(b.max);
            for (s, c) in b.hist {
                *a.hist.entry(s).or_insert(0) += c;
            }
            a
        },
    );
    let min = acc.min.unwrap_or(0);
    let pure = min == acc.max;
    PurityReport {
        domain_size: g.vertices.len(),
        pure,
        rank: pure.then_some(acc.max),
        min_size: min,
        max_size: acc.max,
        clique_count: track.then(|| acc.hist.values().sum()),
        clique_sizes: track.then_some(acc.hist),
    }
}

/// Greedily extends `partial` to a maximal weakly separated collection inside
/// `domain`, scanning the domain in canonical order.
pub fn complete_to_maximal(partial: &Collection, domain: &Collection) -> Result<Collection> {
    if let (Some(a), Some(b)) = (partial.n(), domain.n()) {
        if a != b {
            return Err(Error::MismatchedGround { left: a, right: b });
        }
    }
    if let Some((a, b)) = partial.first_conflict(Relation::Weak) {
        return Err(Error::NotSeparated(a.to_string(), b.to_string()));
    }
    if let Some(outside) = partial.iter().find(|&&s| !domain.contains(s)) {
        return Err(Error::Precondition(format!("{{{outside}}} is not in the domain")));
    }
    let mut chosen: Vec<Subset> = partial.items().to_vec();
    for &x in domain.iter() {
        if !partial.contains(x) && chosen.iter().all(|&c| weakly_separated_unchecked(x, c)) {
            chosen.push(x);
        }
    }
    Collection::new(chosen)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::k_subsets;

    fn s(elems: &[usize], n: usize) -> Subset {
        Subset::from_elements(elems.iter().copied(), n).unwrap()
    }

    fn coll(sets: &[&[usize]], n: usize) -> Collection {
        Collection::new(sets.iter().map(|e| s(e, n))).unwrap()
    }

    #[test]
    fn collection_is_canonical() {
        let c = coll(&[&[3], &[1], &[2], &[1]], 4);
        assert_eq!(c.len(), 3);
        assert_eq!(c.items()[0], s(&[1], 4));
        assert!(Collection::new([s(&[1], 4), s(&[1], 5)]).is_err());
        assert_eq!(serde_json::to_string(&Collection::empty()).unwrap(), "[]");
    }

    #[test]
    fn two_cycle_has_no_triangles() {
        let c = coll(&[&[1, 2, 3, 4, 9], &[1, 3, 4, 5, 6], &[5, 6, 7, 8, 10], &[2, 7, 8, 9, 10]], 10);
        let g = build_compat_graph(&c, Relation::Weak).unwrap();
        assert_eq!(g.edge_count(), 4);
        let cliques = g.maximal_cliques();
        assert_eq!(cliques.len(), 4);
        assert!(cliques.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn trivial_graphs() {
        let g = BitGraph::new(3);
        assert_eq!(g.maximal_cliques(), vec![vec![0], vec![1], vec![2]]);
        let k3 = BitGraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]);
        assert_eq!(k3.maximal_cliques(), vec![vec![0, 1, 2]]);
        assert_eq!(k3.max_clique_size(), 3);
        let single = build_compat_graph(&coll(&[&[1]], 3), Relation::Weak).unwrap();
        assert_eq!(single.edge_count(), 0);
        assert_eq!(single.max_clique_size(), 1);
        assert_eq!(BitGraph::new(0).maximal_cliques(), vec![Vec::<usize>::new()]);
        assert!(build_compat_graph(&Collection::empty(), Relation::Weak).is_err());
    }

    #[test]
    fn non_separated_pair_has_no_edge() {
        let g = build_compat_graph(&coll(&[&[1, 2, 4], &[3, 5, 6]], 6), Relation::Weak).unwrap();
        assert_eq!(g.vertices().len(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn grassmannian_purity() {
        let domain = Collection::new(k_subsets(6, 3).unwrap()).unwrap();
        let report = purity_report(&domain, Relation::Weak, PurityMode::Histogram).unwrap();
        assert!(report.pure);
        assert_eq!(report.rank, Some(10));
        let streamed = purity_report(&domain, Relation::Weak, PurityMode::Streaming).unwrap();
        assert_eq!(streamed.rank, Some(10));
        assert_eq!(streamed.clique_count, None);
        assert_eq!(streamed.clique_sizes, None);
    }

    #[test]
    fn completion() {
        let domain = Collection::new(k_subsets(6, 3).unwrap()).unwrap();
        let start = coll(&[&[1, 2, 4]], 6);
        let done = complete_to_maximal(&start, &domain).unwrap();
        assert_eq!(done.len(), 10);
        assert!(done.contains(s(&[1, 2, 4], 6)));
        assert!(done.is_maximal_in(&domain, Relation::Weak));
        let small = Collection::new(k_subsets(4, 2).unwrap()).unwrap();
        assert_eq!(complete_to_maximal(&Collection::empty(), &small).unwrap().len(), 5);
        let bad = coll(&[&[1, 2, 4], &[3, 5, 6]], 6);
        assert!(matches!(complete_to_maximal(&bad, &domain), Err(Error::NotSeparated(..))));
    }
}
