//! The recursive shortest-unorthodox-path solver: find a lowest blossom,
//! answer directly if the target sits on it, otherwise shrink, recurse,
//! expand, and simplify. Also the up-front parallel-edge reduction that
//! keeps every recursion level within twice the original edge count.

use crate::blossom::{detour_path, expand, find_lowest_blossom, shrink, simplify};
use crate::graph::{EdgeId, LabeledGraph, PathWitness, VertexId};
use crate::prune::{PairReducer, ProtoEdge};
use crate::solve::SolveError;
use crate::spt::ShortestPathTree;

/// A graph with redundant parallel edges removed, plus the map from its
/// dense edge ids back to the input's.
#[derive(Debug, Clone)]
pub struct ReducedGraph {
    pub graph: LabeledGraph,
    pub edge_map: Vec<EdgeId>,
}

/// Keep at most two parallel edges between each vertex pair: per label a
/// shortest (ties keep the smallest id), and when three distinct labels
/// meet, a longest is dropped (ties drop the largest id). Optimal values
/// of non-zero and unorthodox path queries are unchanged.
pub fn reduce_parallel_edges(g: &LabeledGraph) -> ReducedGraph {
    let mut reducer: PairReducer<EdgeId> = PairReducer::new(g.descriptor());
    for edge in g.edges() {
        reducer.admit(ProtoEdge {
            tail: edge.tail,
            head: edge.head,
            length: edge.length,
            label: edge.label.clone(),
            is_tree: false,
            origin: edge.id,
        });
    }
    let mut edge_map = Vec::new();
    let mut specs = Vec::new();
    for proto in reducer.finish() {
        edge_map.push(proto.origin);
        specs.push((proto.tail, proto.head, proto.length, proto.label));
    }
    ReducedGraph {
        graph: LabeledGraph::new(g.descriptor().clone(), g.vertex_count(), specs)
            .expect("reduction keeps edges valid"),
        edge_map,
    }
}

/// Vertex and edge counts of one recursion level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelStats {
    pub vertices: usize,
    pub edges: usize,
}

/// Instrumentation of one recursive solve.
#[derive(Debug, Clone, Default)]
pub struct RecursionStats {
    /// One entry per recursion level, outermost first.
    pub levels: Vec<LevelStats>,
}

impl RecursionStats {
    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// Find a shortest unorthodox root-`target` path, or `None` when every
/// root-`target` path carries the tree label. `tree` must be a
/// shortest-path tree of the connected graph `g`.
pub fn sup_recursive(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    target: VertexId,
) -> Result<(Option<PathWitness>, RecursionStats), SolveError> {
    if target == tree.root() {
        return Err(SolveError::SameEndpoints { vertex: target });
    }
    if (0..g.vertex_count()).any(|v| !tree.is_reachable(v)) {
        return Err(SolveError::Disconnected);
    }
    let mut stats = RecursionStats::default();
    let path = sup_level(g, tree, target, &mut stats);
    Ok((path, stats))
}

fn sup_level(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    target: VertexId,
    stats: &mut RecursionStats,
) -> Option<PathWitness> {
    stats.levels.push(LevelStats {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
    });

    let blossom = find_lowest_blossom(g, tree)?;
    if blossom.contains_nonbase(target) {
        return Some(
            detour_path(g, tree, &blossom, target).expect("target is a non-base cycle vertex"),
        );
    }

    let shrunk = shrink(g, tree, &blossom);
    let target_new = shrunk.new_vertex[target].expect("target survives the shrink");
    let inner = sup_level(&shrunk.graph, &shrunk.tree, target_new, stats)?;
    let walk = expand(g, tree, &blossom, &shrunk, &inner);
    let path = simplify(g, tree, &blossom, &walk, target)
        .expect("expanded optimal paths satisfy the simplification contract");
    Some(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Length, Walk};
    use crate::group::GroupDescriptor;
    use crate::spt::dijkstra;

    const S: usize = 0;
    const A: usize = 1;
    const B: usize = 2;
    const T: usize = 3;

    #[test]
    fn reduction_keeps_a_shortest_per_label() {
        let d = GroupDescriptor::z2();
        let one = d.parse("1").unwrap();
        let g = LabeledGraph::new(
            d.clone(),
            2,
            vec![
                (0, 1, Length::from(5), one.clone()),
                (0, 1, Length::from(3), one),
            ],
        )
        .unwrap();
        let red = reduce_parallel_edges(&g);
        assert_eq!(red.graph.edge_count(), 1);
        assert_eq!(red.graph.edge(0).length, Length::from(3));
        assert_eq!(red.edge_map, vec![1]);
    }

    #[test]
    fn reduction_drops_a_longest_of_three() {
        let d = GroupDescriptor::z2();
        let zero = d.identity();
        let one = d.parse("1").unwrap();
        let g = LabeledGraph::new(
            d,
            2,
            vec![
                (0, 1, Length::from(1), zero),
                (0, 1, Length::from(2), one.clone()),
                (0, 1, Length::from(4), one),
            ],
        )
        .unwrap();
        let red = reduce_parallel_edges(&g);
        assert_eq!(red.graph.edge_count(), 2);
        assert!(red.graph.edges().iter().all(|e| e.length < Length::from(4)));
    }

    #[test]
    fn reduced_graphs_pass_through() {
        let g = fixtures::diamond();
        let red = reduce_parallel_edges(&g);
        assert_eq!(red.graph.edge_count(), g.edge_count());
        assert_eq!(red.edge_map, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn diamond_unorthodox_path() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (path, stats) = sup_recursive(&g, &tree, T).unwrap();
        let path = path.unwrap();
        assert_eq!(path.length(), Length::from(3));
        assert_eq!(*path.label(), g.descriptor().parse("1").unwrap());
        assert_eq!(stats.depth(), 2);
        assert_eq!(stats.levels[0], LevelStats { vertices: 4, edges: 5 });
    }

    #[test]
    fn consistent_diamond_is_infeasible() {
        let d = GroupDescriptor::z2();
        let zero = d.identity();
        let g = LabeledGraph::new(
            d,
            4,
            vec![
                (S, A, Length::from(1), zero.clone()),
                (S, B, Length::from(1), zero.clone()),
                (A, B, Length::from(1), zero.clone()),
                (A, T, Length::from(1), zero.clone()),
                (B, T, Length::from(1), zero),
            ],
        )
        .unwrap();
        let tree = dijkstra(&g, S);
        let (path, _) = sup_recursive(&g, &tree, T).unwrap();
        assert!(path.is_none());
    }

    #[test]
    fn target_on_the_first_blossom_short_circuits() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (path, stats) = sup_recursive(&g, &tree, B).unwrap();
        let path = path.unwrap();
        assert_eq!(path.vertices(), &[S, A, B]);
        assert_eq!(path.length(), Length::from(2));
        assert_eq!(stats.depth(), 1);
    }

    #[test]
    fn disconnected_input_is_a_usage_error() {
        let d = GroupDescriptor::z2();
        let g = LabeledGraph::new(d.clone(), 3, vec![(0, 1, Length::from(1), d.identity())])
            .unwrap();
        let tree = dijkstra(&g, 0);
        assert!(matches!(
            sup_recursive(&g, &tree, 1),
            Err(SolveError::Disconnected)
        ));
    }

    #[test]
    fn witnesses_revalidate_against_the_graph() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (path, _) = sup_recursive(&g, &tree, T).unwrap();
        let path = path.unwrap();
        let rebuilt = Walk::from_steps(&g, path.start(), path.steps().to_vec()).unwrap();
        assert_eq!(rebuilt.length(), path.length());
        assert_eq!(rebuilt.label(), path.label());
    }
}
