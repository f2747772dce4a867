//! Shortest non-zero cycle: one shortest-path tree and one lowest blossom
//! per root, taking the global minimum. The lowest blossom at `r` closes
//! a shortest non-zero closed walk through `r`, so scanning all roots
//! covers every cycle. A slower cross-check removes each edge in turn and
//! closes it with a constrained path query.

use crate::blossom::find_lowest_blossom;
use crate::graph::{EdgeId, LabeledGraph, Length, Step, VertexId, Walk};
use crate::solve::{shortest_nonzero_path, Algorithm, Outcome};
use crate::spt::dijkstra;

#[derive(Debug, Clone)]
pub enum CycleOutcome {
    Found {
        cycle: Walk,
        root: VertexId,
        edge: EdgeId,
    },
    Infeasible,
}

impl CycleOutcome {
    pub fn found(&self) -> Option<&Walk> {
        match self {
            CycleOutcome::Found { cycle, .. } => Some(cycle),
            CycleOutcome::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<Length> {
        self.found().map(|c| c.length())
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, CycleOutcome::Found { .. })
    }
}

#[derive(Debug, Clone)]
pub struct CycleResult {
    pub outcome: CycleOutcome,
    /// Lowest blossom height per root, for diagnostics.
    pub blossom_heights: Vec<Option<Length>>,
}

/// Shortest non-zero cycle via per-root lowest blossoms. Disconnected
/// graphs are covered because every root only sees its own component.
/// Ties break by cycle length, then root id, then blossom edge id.
pub fn shortest_nonzero_cycle(g: &LabeledGraph) -> CycleResult {
    let mut heights = vec![None; g.vertex_count()];
    let mut best: Option<(Length, VertexId, EdgeId, Walk)> = None;
    for (root, height_slot) in heights.iter_mut().enumerate() {
        let tree = dijkstra(g, root);
        let Some(blossom) = find_lowest_blossom(g, &tree) else {
            continue;
        };
        *height_slot = Some(blossom.height());
        let cycle = blossom.cycle().clone();
        let key = (cycle.length(), root, blossom.edge());
        if best
            .as_ref()
            .is_none_or(|(l, r, e, _)| key < (*l, *r, *e))
        {
            best = Some((key.0, key.1, key.2, cycle));
        }
    }
    let outcome = match best {
        Some((_, root, edge, cycle)) => {
            debug_assert!(!g.descriptor().is_identity(cycle.label()));
            CycleOutcome::Found { cycle, root, edge }
        }
        None => CycleOutcome::Infeasible,
    };
    CycleResult {
        outcome,
        blossom_heights: heights,
    }
}

/// Shortest non-zero cycle by deleting each edge and asking for a
/// shortest path between its endpoints whose label keeps the closed-up
/// cycle non-zero. Quadratic, used as a cross-check of intermediate
/// strength.
pub fn shortest_nonzero_cycle_naive(g: &LabeledGraph) -> CycleResult {
    let mut best: Option<(Length, EdgeId, Walk)> = None;
    for removed in 0..g.edge_count() {
        let mut edge_map = Vec::with_capacity(g.edge_count() - 1);
        let mut specs = Vec::with_capacity(g.edge_count() - 1);
        for e in g.edges() {
            if e.id != removed {
                edge_map.push(e.id);
                specs.push((e.tail, e.head, e.length, e.label.clone()));
            }
        }
        let without =
            LabeledGraph::new(g.descriptor().clone(), g.vertex_count(), specs)
                .expect("removing an edge keeps the graph valid");

        // the path runs head -> tail and the removed edge closes it
        // tail -> head, so the path label must avoid the inverse of the
        // edge's forward label
        let e = g.edge(removed);
        let forbidden = g.traversal_label(removed, e.head);
        let res =
            shortest_nonzero_path(&without, e.head, e.tail, &forbidden, Algorithm::Recursive)
                .expect("endpoints are distinct and the label belongs to the group");
        if let Outcome::Found(path) = res.outcome {
            let mut steps: Vec<Step> = path
                .steps()
                .iter()
                .map(|s| Step {
                    edge: edge_map[s.edge],
                    forward: s.forward,
                })
                .collect();
            steps.push(Step {
                edge: removed,
                forward: true,
            });
            let cycle =
                Walk::from_steps(g, e.head, steps).expect("closed witness lies in the graph");
            debug_assert!(!g.descriptor().is_identity(cycle.label()));
            let key = (cycle.length(), removed);
            if best.as_ref().is_none_or(|(l, e2, _)| key < (*l, *e2)) {
                best = Some((key.0, key.1, cycle));
            }
        }
    }
    let outcome = match best {
        Some((_, edge, cycle)) => {
            let root = cycle.start();
            CycleOutcome::Found { cycle, root, edge }
        }
        None => CycleOutcome::Infeasible,
    };
    CycleResult {
        outcome,
        blossom_heights: Vec::new(),
    }
}
