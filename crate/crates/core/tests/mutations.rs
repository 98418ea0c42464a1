use std::collections::BTreeSet;

use wsep::cliques::{build_compat_graph, complete_to_maximal};
use wsep::ground::{all_subsets, k_subsets};
use wsep::mutations::{
    apply_square_move, explore_mutation_graph, find_square_moves, mutation_distance, DEFAULT_BUDGET,
};
use wsep::octahedron::{check_no_interior, four_splits, move_projection_effect, ProjectionEffect};
use wsep::{Collection, Relation, Subset};

fn grid(n: usize, k: usize) -> Collection {
    Collection::new(k_subsets(n, k).unwrap()).unwrap()
}

fn set(elems: &[usize], n: usize) -> Subset {
    Subset::from_elements(elems.iter().copied(), n).unwrap()
}

#[test]
fn graphs_are_connected_and_cover_every_maximal_collection() {
    for (n, k) in [(4, 2), (5, 2), (6, 2), (6, 3), (7, 2), (7, 3)] {
        let all = grid(n, k);
        let seed = complete_to_maximal(&Collection::empty(), &all).unwrap();
        let graph = explore_mutation_graph(&seed, DEFAULT_BUDGET, None);
        assert!(graph.complete);
        let cliques: BTreeSet<Collection> =
            build_compat_graph(&all, Relation::Weak).unwrap().maximal_cliques().into_iter().collect();
        let nodes: BTreeSet<Collection> = graph.nodes.iter().cloned().collect();
        assert_eq!(nodes, cliques, "({k},{n})");
        let degree_sum: usize = graph.adjacency.iter().map(Vec::len).sum();
        assert_eq!(degree_sum, 2 * graph.edge_count);
    }
}

#[test]
fn moves_are_involutions_and_keep_separation() {
    let all = grid(6, 3);
    let seed = complete_to_maximal(&Collection::empty(), &all).unwrap();
    let graph = explore_mutation_graph(&seed, DEFAULT_BUDGET, None);
    for c in &graph.nodes {
        assert_eq!(c.len(), 10);
        for m in find_square_moves(c).unwrap() {
            let next = apply_square_move(c, &m).unwrap();
            assert!(next.is_pairwise(Relation::Weak));
            assert!(next.is_maximal_in(&all, Relation::Weak));
            assert_eq!(&apply_square_move(&next, &m.reversed()).unwrap(), c);
        }
    }
}

#[test]
fn known_distances() {
    let d = mutation_distance(set(&[1, 3], 4), set(&[2, 4], 4), DEFAULT_BUDGET, false).unwrap();
    assert_eq!(d.distance, Some(1));
    let d = mutation_distance(set(&[1, 2, 4], 6), set(&[3, 5, 6], 6), DEFAULT_BUDGET, false).unwrap();
    assert_eq!(d.distance, Some(2));
    assert_eq!(d.path.len(), 2);
    let mut c = d.source.clone().unwrap();
    assert!(c.contains(set(&[1, 2, 4], 6)));
    for step in &d.path {
        c = c.without(step.remove).with(step.add).unwrap();
        assert!(c.is_pairwise(Relation::Weak));
    }
    assert_eq!(Some(c), d.target);
    assert!(d.target.unwrap().contains(set(&[3, 5, 6], 6)));
}

#[test]
fn zero_exactly_for_separated_pairs() {
    let sets = k_subsets(6, 3).unwrap();
    for &i in &sets {
        for &j in &sets {
            let d = mutation_distance(i, j, DEFAULT_BUDGET, false).unwrap();
            assert_eq!(d.distance == Some(0), i.is_weakly_separated(j).unwrap());
        }
    }
}

#[test]
fn budget_exhaustion_is_reported() {
    let d = mutation_distance(set(&[1, 2, 4], 6), set(&[3, 5, 6], 6), 3, false).unwrap();
    assert!(d.budget_exhausted);
    assert_eq!(d.distance, None);
    assert!(mutation_distance(set(&[1, 2, 5, 6], 8), set(&[3, 4, 7, 8], 8), 10, false).is_err());
}

/// Every node satisfies the no-interior property and every edge moves the
/// projection the expected way, under all splits of `n` into four parts.
fn projection_properties(n: usize, k: usize) {
    let all = grid(n, k);
    let seed = complete_to_maximal(&Collection::empty(), &all).unwrap();
    let graph = explore_mutation_graph(&seed, DEFAULT_BUDGET, None);
    assert!(graph.complete);
    let splits = four_splits(n);
    for c in &graph.nodes {
        for &split in &splits {
            assert_eq!(check_no_interior(c, split).unwrap(), None, "{c:?} {split:?}");
        }
        for m in find_square_moves(c).unwrap() {
            for &split in &splits {
                let effect = move_projection_effect(c, &m, split).unwrap();
                if let ProjectionEffect::Shift { sign } = effect {
                    assert!(sign == 1 || sign == -1);
                }
            }
        }
    }
}

#[test]
fn projection_properties_small_grids() {
    projection_properties(6, 3);
    for n in 4..=6 {
        projection_properties(n, 2);
    }
}

#[test]
fn projection_detects_non_separated_pairs() {
    // Non-separated pairs of 2^[5] subsets land in each other's pyramids for
    // at least one split.
    let sets = all_subsets(5).unwrap();
    let mut caught = 0;
    for &a in &sets {
        for &b in &sets {
            if a.len() != b.len() || a.is_weakly_separated(b).unwrap() {
                continue;
            }
            let c = Collection::new([a, b]).unwrap();
            if four_splits(5).into_iter().any(|s| check_no_interior(&c, s).unwrap().is_some()) {
                caught += 1;
            }
        }
    }
    assert!(caught > 0);
}
