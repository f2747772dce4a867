//! The near-linear shortest-unorthodox-path solver. Instead of shrinking
//! blossoms explicitly, it sweeps edges out of a priority queue in order
//! of the closed-walk length they certify, merging settled tree segments
//! in a disjoint-set forest whose roots are always the shallowest member
//! of their component. The per-vertex values it produces form a feasible
//! dual solution whose value at each vertex equals the shortest
//! unorthodox distance, and a witness path is rebuilt from provenance
//! records without any search.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::{EdgeId, LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
use crate::spt::ShortestPathTree;

#[derive(Debug, Error, PartialEq)]
pub enum DualError {
    #[error("vertex {vertex} has no unorthodox path from the root")]
    Infeasible { vertex: VertexId },
}

/// Disjoint-set forest with path compression. Unions attach a root under
/// a dictated new parent rather than by rank: the algorithm requires each
/// component's root to be its unique minimum-depth vertex.
#[derive(Debug, Clone)]
pub struct DisjointSetForest {
    parent: Vec<VertexId>,
}

impl DisjointSetForest {
    pub fn new(n: usize) -> Self {
        DisjointSetForest {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, v: VertexId) -> VertexId {
        let mut root = v;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = v;
        while self.parent[cur] != cur {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Attach the root `child` under `parent`.
    pub fn link(&mut self, child: VertexId, parent: VertexId) {
        debug_assert_eq!(self.parent[child], child, "only roots are linked");
        self.parent[child] = parent;
    }

    /// Root of `v` without path compression; usable on a shared snapshot.
    pub fn root_of(&self, v: VertexId) -> VertexId {
        let mut cur = v;
        while self.parent[cur] != cur {
            cur = self.parent[cur];
        }
        cur
    }
}

/// How a vertex's dual value was set, enough to rebuild its witness path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Provenance {
    /// An inconsistent edge: the witness runs through the whole closed
    /// walk down to the vertex. `on_tail_path` says which endpoint's tree
    /// path the vertex lies on.
    AroundEdge { edge: EdgeId, on_tail_path: bool },
    /// A consistent edge seen from `anchor` (the endpoint whose value was
    /// already set): the witness extends the anchor's witness across the
    /// edge. `on_anchor_path` distinguishes the two splice shapes.
    ThroughEdge {
        edge: EdgeId,
        anchor: VertexId,
        on_anchor_path: bool,
    },
}

/// Per-vertex shortest unorthodox distances (`+inf` where no unorthodox
/// path exists) together with reconstruction records.
#[derive(Debug, Clone)]
pub struct DualSolution {
    values: Vec<Length>,
    provenance: Vec<Option<Provenance>>,
}

impl DualSolution {
    pub fn value(&self, v: VertexId) -> Length {
        self.values[v]
    }

    pub fn is_finite(&self, v: VertexId) -> bool {
        self.values[v].is_finite()
    }

    pub fn values(&self) -> &[Length] {
        &self.values
    }
}

/// Counters exposed for benchmarking and the work-bound assertions.
#[derive(Debug, Clone, Default)]
pub struct FastSupStats {
    pub queue_pops: u64,
    pub queue_pushes: u64,
    pub finds: u64,
    pub unions: u64,
    /// Number of times each vertex was settled into a batch.
    pub batch_entries: Vec<u32>,
    /// Number of queue insertions per consistent edge.
    pub consistent_enqueues: Vec<u32>,
    /// Priorities in pop order.
    pub popped_priorities: Vec<Length>,
    /// Final forest, for component-structure checks.
    pub forest: Option<DisjointSetForest>,
}

/// Queue entry ordering: priority, then edge id, then the endpoint that
/// enqueued it (0 = tail, 1 = head).
type QueueItem = Reverse<(Length, EdgeId, u8)>;

pub fn fast_sup(g: &LabeledGraph, tree: &ShortestPathTree) -> DualSolution {
    run(g, tree, None)
}

pub fn fast_sup_instrumented(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
) -> (DualSolution, FastSupStats) {
    let mut stats = FastSupStats {
        batch_entries: vec![0; g.vertex_count()],
        consistent_enqueues: vec![0; g.edge_count()],
        ..FastSupStats::default()
    };
    let dual = run(g, tree, Some(&mut stats));
    (dual, stats)
}

fn run(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    mut stats: Option<&mut FastSupStats>,
) -> DualSolution {
    let n = g.vertex_count();
    debug_assert!(
        (0..n).all(|v| tree.is_reachable(v)),
        "the fast solver expects a connected input"
    );
    let consistent = tree.consistency_marks(g);

    let mut values = vec![Length::INFINITY; n];
    let mut provenance: Vec<Option<Provenance>> = vec![None; n];
    let mut forest = DisjointSetForest::new(n);
    let mut queue: BinaryHeap<QueueItem> = BinaryHeap::new();

    for edge in g.edges() {
        if !consistent[edge.id] {
            let h = tree.dist(edge.tail) + tree.dist(edge.head) + edge.length;
            queue.push(Reverse((h, edge.id, 0)));
            if let Some(s) = stats.as_deref_mut() {
                s.queue_pushes += 1;
            }
        }
    }

    while let Some(Reverse((h, e, dir))) = queue.pop() {
        if let Some(s) = stats.as_deref_mut() {
            s.queue_pops += 1;
            s.popped_priorities.push(h);
        }
        let edge = g.edge(e);
        let mut frontier_tail = forest.find(edge.tail);
        let mut frontier_head = forest.find(edge.head);
        if let Some(s) = stats.as_deref_mut() {
            s.finds += 2;
        }

        // Climb both tree paths one component root at a time, always
        // advancing the deeper root; everything passed is settled in
        // this batch. Roots are read before any union happens.
        let mut batch: Vec<(VertexId, bool)> = Vec::new();
        while frontier_tail != frontier_head {
            let (frontier, on_tail_path) =
                if tree.depth(frontier_tail) >= tree.depth(frontier_head) {
                    (&mut frontier_tail, true)
                } else {
                    (&mut frontier_head, false)
                };
            batch.push((*frontier, on_tail_path));
            let parent = tree
                .parent_vertex(g, *frontier)
                .expect("distinct roots cannot both be the tree root");
            *frontier = forest.find(parent);
            if let Some(s) = stats.as_deref_mut() {
                s.finds += 1;
            }
        }
        let meet = frontier_tail;

        let anchor = if dir == 0 { edge.tail } else { edge.head };
        for &(w, on_tail_path) in &batch {
            forest.link(w, meet);
            values[w] = h - tree.dist(w);
            provenance[w] = Some(if consistent[e] {
                Provenance::ThroughEdge {
                    edge: e,
                    anchor,
                    on_anchor_path: (anchor == edge.tail) == on_tail_path,
                }
            } else {
                Provenance::AroundEdge {
                    edge: e,
                    on_tail_path,
                }
            });
            if let Some(s) = stats.as_deref_mut() {
                s.unions += 1;
                s.batch_entries[w] += 1;
            }
            for &(f, w_is_tail) in g.incident(w) {
                if !consistent[f] {
                    continue;
                }
                let other = g.edge(f).other(w);
                let priority = values[w] + tree.dist(other) + g.edge(f).length;
                queue.push(Reverse((priority, f, if w_is_tail { 0 } else { 1 })));
                if let Some(s) = stats.as_deref_mut() {
                    s.queue_pushes += 1;
                    s.consistent_enqueues[f] += 1;
                }
            }
        }
    }

    if let Some(s) = stats {
        s.forest = Some(forest);
    }
    DualSolution { values, provenance }
}

/// Rebuild an unorthodox root-`w` path of length exactly `value(w)` from
/// the provenance records.
pub fn reconstruct_path(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    dual: &DualSolution,
    w: VertexId,
) -> Result<PathWitness, DualError> {
    if !dual.is_finite(w) {
        return Err(DualError::Infeasible { vertex: w });
    }
    let walk = rebuild(g, tree, dual, w);
    assert_eq!(walk.length(), dual.value(w), "witness length matches the dual value");
    assert_ne!(walk.label(), tree.psi(w), "witness is unorthodox");
    Ok(PathWitness::from_walk(walk).expect("reconstructed witnesses are simple"))
}

fn rebuild(g: &LabeledGraph, tree: &ShortestPathTree, dual: &DualSolution, w: VertexId) -> Walk {
    let prov = dual.provenance[w].expect("finite values carry provenance");
    match prov {
        Provenance::AroundEdge { edge, on_tail_path } => {
            let e = g.edge(edge);
            // from the root down the far side, across the edge, back up to w
            let (far, near) = if on_tail_path {
                (e.head, e.tail)
            } else {
                (e.tail, e.head)
            };
            let mut steps = tree.steps_down_to(g, tree.root(), far);
            steps.push(Step {
                edge,
                forward: far == e.tail,
            });
            steps.extend(steps_up(g, tree, near, w));
            Walk::from_steps(g, tree.root(), steps).expect("detour steps are incident")
        }
        Provenance::ThroughEdge {
            edge,
            anchor,
            on_anchor_path,
        } => {
            let e = g.edge(edge);
            let other = e.other(anchor);
            let anchor_walk = rebuild(g, tree, dual, anchor);
            if !on_anchor_path {
                // w hangs below `other`: anchor's witness, the edge, then
                // up the tree from `other` to w
                let mut walk = anchor_walk;
                walk.push(
                    g,
                    Step {
                        edge,
                        forward: anchor == e.tail,
                    },
                )
                .expect("edge leaves the anchor");
                for s in steps_up(g, tree, other, w) {
                    walk.push(g, s).expect("tree steps are incident");
                }
                walk
            } else {
                // w lies on the anchor's witness: tree path to `other`,
                // the edge, then the anchor's witness walked backwards to w
                let mut steps = tree.steps_down_to(g, tree.root(), other);
                steps.push(Step {
                    edge,
                    forward: other == e.tail,
                });
                let walk =
                    Walk::from_steps(g, tree.root(), steps).expect("tree steps are incident");
                let back = anchor_walk.reversed(g);
                let stop = back
                    .position_of(w)
                    .expect("the settled vertex lies on its anchor's witness");
                let seg = back.subwalk(g, 0, stop).expect("in range");
                walk.concat(g, &seg).expect("segment starts at the anchor")
            }
        }
    }
}

fn steps_up(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    from: VertexId,
    top: VertexId,
) -> Vec<Step> {
    let mut steps = Vec::new();
    let mut cur = from;
    while cur != top {
        let step = tree
            .parent_step(cur)
            .expect("ascended past the root looking for an ancestor");
        steps.push(step.reversed());
        cur = g.step_endpoints(step).0;
    }
    steps
}

/// Check every dual constraint: for each inconsistent edge, settled
/// vertices on exactly one endpoint's tree path are bounded by the
/// closed-walk length; for each consistent edge, both orientations of the
/// relayed bound hold. Rows whose left value is infinite, and rows whose
/// right-hand side contains an infinite value, are vacuous.
pub fn check_dual_feasibility(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    dual: &DualSolution,
) -> bool {
    let consistent = tree.consistency_marks(g);
    let mut stamp = vec![usize::MAX; g.vertex_count()];
    for edge in g.edges() {
        let mark = edge.id;
        let mut sym_diff = Vec::new();
        let mut cur = Some(edge.tail);
        while let Some(v) = cur {
            stamp[v] = mark;
            cur = tree.parent_vertex(g, v);
        }
        let mut cur = Some(edge.head);
        while let Some(v) = cur {
            if stamp[v] == mark {
                stamp[v] = usize::MAX; // common ancestor: not in the difference
            } else {
                sym_diff.push(v);
            }
            cur = tree.parent_vertex(g, v);
        }
        let mut cur = Some(edge.tail);
        while let Some(v) = cur {
            if stamp[v] == mark {
                sym_diff.push(v);
            }
            cur = tree.parent_vertex(g, v);
        }

        for &w in &sym_diff {
            if !dual.is_finite(w) {
                continue;
            }
            let lhs = dual.value(w) + tree.dist(w);
            if consistent[edge.id] {
                for (a, b) in [(edge.tail, edge.head), (edge.head, edge.tail)] {
                    if dual.is_finite(a) && lhs > dual.value(a) + tree.dist(b) + edge.length {
                        return false;
                    }
                }
            } else if lhs > tree.dist(edge.tail) + tree.dist(edge.head) + edge.length {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::GroupDescriptor;
    use crate::spt::dijkstra;

    const S: usize = 0;
    const A: usize = 1;
    const B: usize = 2;
    const T: usize = 3;

    #[test]
    fn diamond_dual_values() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (dual, stats) = fast_sup_instrumented(&g, &tree);
        assert_eq!(dual.value(A), Length::from(2));
        assert_eq!(dual.value(B), Length::from(2));
        assert_eq!(dual.value(T), Length::from(3));
        assert!(!dual.is_finite(S), "the root keeps an infinite value");
        assert_eq!(stats.popped_priorities[0], Length::from(3), "the blossom edge pops first");
    }

    #[test]
    fn all_consistent_graphs_stay_infinite() {
        let d = GroupDescriptor::z2();
        let zero = d.identity();
        let g = LabeledGraph::new(
            d,
            3,
            vec![
                (0, 1, Length::from(1), zero.clone()),
                (1, 2, Length::from(1), zero.clone()),
                (0, 2, Length::from(2), zero),
            ],
        )
        .unwrap();
        let tree = dijkstra(&g, 0);
        let (dual, stats) = fast_sup_instrumented(&g, &tree);
        assert!((0..3).all(|v| !dual.is_finite(v)));
        assert_eq!(stats.queue_pops, 0, "the queue starts empty");
    }

    #[test]
    fn popped_priorities_never_decrease() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (_, stats) = fast_sup_instrumented(&g, &tree);
        assert!(stats
            .popped_priorities
            .windows(2)
            .all(|w| w[0] <= w[1]));
    }

    #[test]
    fn reconstruction_on_the_diamond() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let dual = fast_sup(&g, &tree);

        let qa = reconstruct_path(&g, &tree, &dual, A).unwrap();
        assert_eq!(qa.vertices(), &[S, B, A]);
        assert_eq!(qa.length(), Length::from(2));

        let qt = reconstruct_path(&g, &tree, &dual, T).unwrap();
        assert_eq!(qt.length(), Length::from(3));
        assert!(qt.vertices() == [S, A, B, T] || qt.vertices() == [S, B, A, T]);

        assert_eq!(
            reconstruct_path(&g, &tree, &dual, S).unwrap_err(),
            DualError::Infeasible { vertex: S }
        );
    }

    #[test]
    fn feasibility_checker_on_the_diamond() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let dual = fast_sup(&g, &tree);
        assert!(check_dual_feasibility(&g, &tree, &dual));

        let mut bumped = dual.clone();
        bumped.values[T] += Length::from(1);
        assert!(!check_dual_feasibility(&g, &tree, &bumped));

        let zeros = DualSolution {
            values: vec![Length::ZERO; 4],
            provenance: vec![None; 4],
        };
        assert!(
            check_dual_feasibility(&g, &tree, &zeros),
            "all-zero values satisfy nonnegative bounds on this instance"
        );
    }

    #[test]
    fn work_bounds_on_the_diamond() {
        let g = fixtures::diamond();
        let tree = dijkstra(&g, S);
        let (_, stats) = fast_sup_instrumented(&g, &tree);
        assert!(stats.batch_entries.iter().all(|&c| c <= 1));
        assert!(stats.consistent_enqueues.iter().all(|&c| c <= 2));
    }

    #[test]
    fn forest_components_stay_connected_in_the_tree() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(61);
        for case in 0..300 {
            let d = match case % 3 {
                0 => GroupDescriptor::z2(),
                1 => GroupDescriptor::Cyclic(5),
                _ => GroupDescriptor::Free(2),
            };
            let n = rng.gen_range(2..9);
            let g = crate::gen::random_graph(
                &crate::gen::InstanceConfig {
                    vertices: n,
                    edges: rng.gen_range(n - 1..=16.max(n - 1)),
                    descriptor: d,
                    max_length: 6,
                    ensure_connected: true,
                },
                &mut rng,
            );
            let tree = dijkstra(&g, 0);
            let (_, stats) = fast_sup_instrumented(&g, &tree);
            let forest = stats.forest.unwrap();
            for v in 0..n {
                let root = forest.root_of(v);
                // the unique minimum-depth member of each component is
                // its root, and walking tree parents towards it never
                // leaves the component
                let mut cur = v;
                while cur != root {
                    assert!(
                        tree.depth(cur) > tree.depth(root),
                        "roots are the unique shallowest members"
                    );
                    let parent = tree.parent_vertex(&g, cur).expect("below the root");
                    assert_eq!(
                        forest.root_of(parent),
                        root,
                        "components are connected in the tree"
                    );
                    cur = parent;
                }
            }
        }
    }
}
