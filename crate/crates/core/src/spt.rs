//! Shortest-path trees with per-vertex distance, label potential, and
//! depth, plus the consistency test that drives blossom detection.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::{EdgeId, LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
use crate::group::GroupElement;

#[derive(Debug, Error, PartialEq)]
pub enum SptError {
    #[error("vertex {vertex} is unreachable from the root")]
    Unreachable { vertex: VertexId },
}

/// A shortest-path tree rooted at `root`. Unreachable vertices carry an
/// infinite distance and no parent.
#[derive(Debug, Clone)]
pub struct ShortestPathTree {
    pub(crate) root: VertexId,
    /// Parent step oriented parent -> child; `None` for the root and for
    /// unreachable vertices.
    pub(crate) parent: Vec<Option<Step>>,
    pub(crate) dist: Vec<Length>,
    /// Label of the tree path from the root; identity placeholder where
    /// unreachable.
    pub(crate) psi: Vec<GroupElement>,
    /// Number of tree edges on the root path.
    pub(crate) depth: Vec<u32>,
}

/// Dijkstra's algorithm adapted to labeled graphs: alongside distances it
/// accumulates the label of each tree path.
///
/// Deterministic tie-breaking: among equal-distance heap candidates the
/// smallest vertex id settles first, and an equal-length relaxation never
/// replaces an already-set parent.
pub fn dijkstra(g: &LabeledGraph, source: VertexId) -> ShortestPathTree {
    let n = g.vertex_count();
    assert!(source < n, "source vertex out of range");
    let mut dist = vec![Length::INFINITY; n];
    let mut psi = vec![g.identity(); n];
    let mut parent: Vec<Option<Step>> = vec![None; n];
    let mut depth = vec![0u32; n];
    let mut settled = vec![false; n];

    let mut heap = BinaryHeap::new();
    dist[source] = Length::ZERO;
    heap.push(Reverse((Length::ZERO, source)));

    while let Some(Reverse((d, v))) = heap.pop() {
        if settled[v] || d > dist[v] {
            continue;
        }
        settled[v] = true;
        for &(e, v_is_tail) in g.incident(v) {
            let edge = g.edge(e);
            let w = edge.other(v);
            if settled[w] {
                continue;
            }
            let candidate = d + edge.length;
            if candidate < dist[w] {
                dist[w] = candidate;
                psi[w] = g.mul(&psi[v], &g.traversal_label(e, v));
                parent[w] = Some(Step {
                    edge: e,
                    forward: v_is_tail,
                });
                depth[w] = depth[v] + 1;
                heap.push(Reverse((candidate, w)));
            }
        }
    }

    ShortestPathTree {
        root: source,
        parent,
        dist,
        psi,
        depth,
    }
}

impl ShortestPathTree {
    pub fn root(&self) -> VertexId {
        self.root
    }

    pub fn dist(&self, v: VertexId) -> Length {
        self.dist[v]
    }

    pub fn is_reachable(&self, v: VertexId) -> bool {
        self.dist[v].is_finite()
    }

    /// Label of the tree path root -> `v`; meaningful only when reachable.
    pub fn psi(&self, v: VertexId) -> &GroupElement {
        debug_assert!(self.is_reachable(v));
        &self.psi[v]
    }

    pub fn depth(&self, v: VertexId) -> u32 {
        self.depth[v]
    }

    pub fn parent_step(&self, v: VertexId) -> Option<Step> {
        self.parent[v]
    }

    pub fn parent_edge(&self, v: VertexId) -> Option<EdgeId> {
        self.parent[v].map(|s| s.edge)
    }

    pub fn parent_vertex(&self, g: &LabeledGraph, v: VertexId) -> Option<VertexId> {
        self.parent[v].map(|s| g.step_endpoints(s).0)
    }

    /// Marks of the tree edges, indexed by edge id.
    pub fn tree_edge_marks(&self, g: &LabeledGraph) -> Vec<bool> {
        let mut marks = vec![false; g.edge_count()];
        for step in self.parent.iter().flatten() {
            marks[step.edge] = true;
        }
        marks
    }

    /// The unique tree path from the root to `v`.
    pub fn tree_path(&self, g: &LabeledGraph, v: VertexId) -> Result<PathWitness, SptError> {
        if !self.is_reachable(v) {
            return Err(SptError::Unreachable { vertex: v });
        }
        let steps = self.steps_down_to(g, self.root, v);
        let walk = Walk::from_steps(g, self.root, steps).expect("tree path is a valid walk");
        debug_assert_eq!(walk.length(), self.dist[v]);
        debug_assert_eq!(*walk.label(), self.psi[v]);
        Ok(PathWitness::from_walk(walk).expect("tree paths are simple"))
    }

    /// Steps of the tree path `top -> v`, where `top` is an ancestor of
    /// `v` (checked in debug builds).
    pub(crate) fn steps_down_to(&self, g: &LabeledGraph, top: VertexId, v: VertexId) -> Vec<Step> {
        let mut steps = Vec::new();
        let mut cur = v;
        while cur != top {
            let step = self.parent[cur].expect("walked past the root looking for an ancestor");
            steps.push(step);
            cur = g.step_endpoints(step).0;
        }
        steps.reverse();
        steps
    }

    /// The ancestor of `v` at the given tree depth.
    pub fn ancestor_at_depth(&self, g: &LabeledGraph, v: VertexId, target: u32) -> VertexId {
        debug_assert!(self.depth[v] >= target);
        let mut cur = v;
        while self.depth[cur] > target {
            cur = self
                .parent_vertex(g, cur)
                .expect("vertex of positive depth has a parent");
        }
        cur
    }

    /// Whether `x` lies on the tree path from the root to `v`.
    pub fn on_tree_path(&self, g: &LabeledGraph, x: VertexId, v: VertexId) -> bool {
        self.is_reachable(v)
            && self.is_reachable(x)
            && self.depth[x] <= self.depth[v]
            && self.ancestor_at_depth(g, v, self.depth[x]) == x
    }

    /// Whether the edge satisfies `psi(u) · label(e, u->v) = psi(v)`.
    /// Every tree edge does.
    pub fn is_consistent(&self, g: &LabeledGraph, e: EdgeId) -> Result<bool, SptError> {
        let edge = g.edge(e);
        for v in [edge.tail, edge.head] {
            if !self.is_reachable(v) {
                return Err(SptError::Unreachable { vertex: v });
            }
        }
        Ok(self.consistent_unchecked(g, e))
    }

    pub(crate) fn consistent_unchecked(&self, g: &LabeledGraph, e: EdgeId) -> bool {
        let edge = g.edge(e);
        let via = g.mul(&self.psi[edge.tail], &edge.label);
        via == self.psi[edge.head]
    }

    /// Per-edge consistency flags; edges with an unreachable endpoint are
    /// reported as consistent (they cannot witness a blossom).
    pub(crate) fn consistency_marks(&self, g: &LabeledGraph) -> Vec<bool> {
        (0..g.edge_count())
            .map(|e| {
                let edge = g.edge(e);
                if !self.is_reachable(edge.tail) || !self.is_reachable(edge.head) {
                    true
                } else {
                    self.consistent_unchecked(g, e)
                }
            })
            .collect()
    }
}

/// Check that `dist` is a feasible potential for the unconstrained
/// shortest-path dual and that the tree attains it: a test oracle for
/// Dijkstra's output.
pub fn check_potential(g: &LabeledGraph, tree: &ShortestPathTree) -> bool {
    if tree.dist[tree.root] != Length::ZERO || !g.descriptor().is_identity(&tree.psi[tree.root]) {
        return false;
    }
    if (0..g.vertex_count()).any(|v| !tree.is_reachable(v)) {
        return false;
    }
    // Feasibility: every edge bounds the distance difference.
    for edge in g.edges() {
        let (du, dv) = (tree.dist[edge.tail], tree.dist[edge.head]);
        let diff = if du > dv { du - dv } else { dv - du };
        if diff > edge.length {
            return false;
        }
    }
    // Attainment: each parent edge is tight and labels telescope.
    for v in 0..g.vertex_count() {
        if v == tree.root {
            continue;
        }
        let Some(step) = tree.parent[v] else {
            return false;
        };
        let (p, child) = g.step_endpoints(step);
        if child != v {
            return false;
        }
        if tree.dist[v] != tree.dist[p] + g.edge(step.edge).length {
            return false;
        }
        if tree.psi[v] != g.mul(&tree.psi[p], &g.step_label(step)) {
            return false;
        }
        if tree.depth[v] != tree.depth[p] + 1 {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::GroupDescriptor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const S: usize = 0;
    const A: usize = 1;
    const B: usize = 2;
    const T: usize = 3;

    #[test]
    fn diamond_tree_matches_hand_computation() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        assert_eq!(tree.dist(S), Length::ZERO);
        assert_eq!(tree.dist(A), Length::from(1));
        assert_eq!(tree.dist(B), Length::from(1));
        assert_eq!(tree.dist(T), Length::from(2));
        // parents: e1 for a, e2 for b, e4 for t (first-set parent wins the tie with e5)
        assert_eq!(tree.parent_edge(A), Some(0));
        assert_eq!(tree.parent_edge(B), Some(1));
        assert_eq!(tree.parent_edge(T), Some(3));
        assert!(g.descriptor().is_identity(tree.psi(T)));
        assert_eq!(tree.depth(T), 2);
        assert!(check_potential(&g, &tree));
    }

    #[test]
    fn single_vertex_graph() {
        let g = LabeledGraph::new(GroupDescriptor::z2(), 1, vec![]).unwrap();
        let tree = dijkstra(&g, 0);
        assert_eq!(tree.dist(0), Length::ZERO);
        assert!(g.descriptor().is_identity(tree.psi(0)));
        assert_eq!(tree.parent_edge(0), None);
    }

    #[test]
    fn unreachable_vertices_have_infinite_distance() {
        let z2 = GroupDescriptor::z2();
        let id = z2.identity();
        let g = LabeledGraph::new(
            z2,
            4,
            vec![(0, 1, Length::from(1), id.clone()), (2, 3, Length::from(1), id)],
        )
        .unwrap();
        let tree = dijkstra(&g, 0);
        assert!(!tree.is_reachable(2));
        assert_eq!(tree.dist(3), Length::INFINITY);
        assert!(tree.tree_path(&g, 2).is_err());
        assert!(matches!(
            tree.is_consistent(&g, 1),
            Err(SptError::Unreachable { .. })
        ));
    }

    #[test]
    fn tree_paths_on_diamond() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let to_root = tree.tree_path(&g, S).unwrap();
        assert!(to_root.walk().is_empty());
        let to_t = tree.tree_path(&g, T).unwrap();
        assert_eq!(to_t.vertices(), &[S, A, T]);
        assert_eq!(to_t.length(), Length::from(2));
        let to_b = tree.tree_path(&g, B).unwrap();
        assert_eq!(to_b.vertices(), &[S, B]);
        assert_eq!(to_b.length(), Length::from(1));
    }

    #[test]
    fn consistency_on_diamond() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        for v in [A, B, T] {
            let e = tree.parent_edge(v).unwrap();
            assert!(tree.is_consistent(&g, e).unwrap());
        }
        assert!(!tree.is_consistent(&g, 2).unwrap(), "e3 flips the label");
        assert!(tree.is_consistent(&g, 4).unwrap(), "e5 is consistent");
    }

    #[test]
    fn corrupted_distances_fail_the_potential_check() {
        let g = fixtures::diamond();
        let mut tree = dijkstra(&g, S);
        tree.dist[A] += Length::from(1);
        assert!(!check_potential(&g, &tree));
    }

    #[test]
    fn dijkstra_agrees_with_oracle_distances() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..200 {
            let g = crate::gen::random_graph(
                &crate::gen::InstanceConfig {
                    vertices: rng.gen_range(2..8),
                    edges: rng.gen_range(1..14),
                    descriptor: GroupDescriptor::Cyclic(3),
                    max_length: 6,
                    ensure_connected: false,
                },
                &mut rng,
            );
            let s = rng.gen_range(0..g.vertex_count());
            let tree = dijkstra(&g, s);
            for t in 0..g.vertex_count() {
                if t == s {
                    continue;
                }
                let best = crate::oracle::shortest_path_with_label_constraint(
                    &g,
                    s,
                    t,
                    None,
                    crate::oracle::OracleBudget::default(),
                )
                .unwrap();
                match best {
                    Some(p) => assert_eq!(tree.dist(t), p.length()),
                    None => assert!(!tree.is_reachable(t)),
                }
            }
        }
    }
}
