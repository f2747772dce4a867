//! Query drivers for shortest non-zero (or any-forbidden-label) paths.
//!
//! The pipeline shared by all engines: replace a non-identity forbidden
//! label by a zero-length tail edge carrying its inverse, restrict to the
//! source's component, remove redundant parallel edges, compute a
//! shortest-path tree, answer from the tree when its own path already
//! avoids the forbidden label, and otherwise run the requested solver.
//! Witnesses are mapped back to the caller's vertex and edge ids and
//! re-evaluated against the original graph.

use thiserror::Error;

use crate::fast::{fast_sup, reconstruct_path};
use crate::graph::{EdgeId, LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
use crate::group::{GroupElement, GroupError};
use crate::oracle::{self, OracleBudget, OracleError};
use crate::recursive::{reduce_parallel_edges, sup_recursive, RecursionStats};
use crate::spt::dijkstra;

#[derive(Debug, Error, PartialEq)]
pub enum SolveError {
    #[error("source and target must be distinct (both are {vertex})")]
    SameEndpoints { vertex: VertexId },
    #[error("vertex {vertex} is out of range for a graph with {n} vertices")]
    BadVertex { vertex: VertexId, n: usize },
    #[error("the input graph is not connected")]
    Disconnected,
    #[error(transparent)]
    BadLabel(#[from] GroupError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Recursive,
    Fast,
    Oracle,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Found(PathWitness),
    Infeasible,
}

impl Outcome {
    pub fn found(&self) -> Option<&PathWitness> {
        match self {
            Outcome::Found(p) => Some(p),
            Outcome::Infeasible => None,
        }
    }

    pub fn value(&self) -> Option<Length> {
        self.found().map(|p| p.length())
    }

    pub fn is_feasible(&self) -> bool {
        matches!(self, Outcome::Found(_))
    }
}

#[derive(Debug, Clone)]
pub struct PathQueryResult {
    pub outcome: Outcome,
    pub algorithm: Algorithm,
    /// Present for the recursive engine.
    pub stats: Option<RecursionStats>,
}

/// Shortest simple `source`-`target` path whose label differs from
/// `forbidden`. Pass the group identity to forbid zero-label paths.
pub fn shortest_nonzero_path(
    g: &LabeledGraph,
    source: VertexId,
    target: VertexId,
    forbidden: &GroupElement,
    algorithm: Algorithm,
) -> Result<PathQueryResult, SolveError> {
    let n = g.vertex_count();
    for v in [source, target] {
        if v >= n {
            return Err(SolveError::BadVertex { vertex: v, n });
        }
    }
    if source == target {
        return Err(SolveError::SameEndpoints { vertex: source });
    }
    if !g.descriptor().contains(forbidden) {
        return Err(GroupError::Mismatch {
            group: g.descriptor().to_string(),
        }
        .into());
    }

    if !g.descriptor().is_identity(forbidden) {
        // forbid an arbitrary label by chasing the query through a fresh
        // end vertex, reached by a zero-length edge labeled with the
        // forbidden label's inverse
        let mut specs: Vec<_> = g
            .edges()
            .iter()
            .map(|e| (e.tail, e.head, e.length, e.label.clone()))
            .collect();
        specs.push((target, n, Length::ZERO, g.descriptor().inverse(forbidden)?));
        let gadget = LabeledGraph::new(g.descriptor().clone(), n + 1, specs)
            .expect("adding the tail edge keeps the graph valid");
        let inner = shortest_nonzero_path(&gadget, source, n, &g.descriptor().identity(), algorithm)?;
        let outcome = match inner.outcome {
            Outcome::Infeasible => Outcome::Infeasible,
            Outcome::Found(path) => {
                let steps = path.steps();
                debug_assert_eq!(steps.last().map(|s| s.edge), Some(g.edge_count()));
                let trimmed = &steps[..steps.len() - 1];
                let walk = Walk::from_steps(g, source, trimmed.to_vec())
                    .expect("trimmed witness lies in the original graph");
                debug_assert_eq!(walk.end(), target);
                debug_assert_ne!(walk.label(), forbidden);
                Outcome::Found(PathWitness::from_walk(walk).expect("witness stays simple"))
            }
        };
        return Ok(PathQueryResult { outcome, ..inner });
    }

    solve_identity_forbidden(g, source, target, algorithm)
}

fn solve_identity_forbidden(
    g: &LabeledGraph,
    source: VertexId,
    target: VertexId,
    algorithm: Algorithm,
) -> Result<PathQueryResult, SolveError> {
    let (component, vertex_map, edge_map) = source_component(g, source);
    let Some(target_local) = position(&vertex_map, target) else {
        return Ok(PathQueryResult {
            outcome: Outcome::Infeasible,
            algorithm,
            stats: None,
        });
    };
    let source_local = position(&vertex_map, source).expect("source is in its own component");

    let reduced = reduce_parallel_edges(&component);
    let local = &reduced.graph;

    if algorithm == Algorithm::Oracle {
        let best = oracle::shortest_path_with_label_constraint(
            local,
            source_local,
            target_local,
            Some(&g.descriptor().identity()),
            OracleBudget::default(),
        )?;
        let outcome = match best {
            None => Outcome::Infeasible,
            Some(path) => Outcome::Found(map_back(
                g,
                source,
                path.walk(),
                &reduced.edge_map,
                &edge_map,
            )),
        };
        return Ok(PathQueryResult {
            outcome,
            algorithm,
            stats: None,
        });
    }

    let tree = dijkstra(local, source_local);
    if !g.descriptor().is_identity(tree.psi(target_local)) {
        // the tree path itself is non-zero
        let path = tree
            .tree_path(local, target_local)
            .expect("component vertices are reachable");
        return Ok(PathQueryResult {
            outcome: Outcome::Found(map_back(
                g,
                source,
                path.walk(),
                &reduced.edge_map,
                &edge_map,
            )),
            algorithm,
            stats: None,
        });
    }

    // with the tree label at the target trivial, non-zero means unorthodox
    let (outcome, stats) = match algorithm {
        Algorithm::Recursive => {
            let (best, stats) = sup_recursive(local, &tree, target_local)?;
            let outcome = match best {
                None => Outcome::Infeasible,
                Some(path) => Outcome::Found(map_back(
                    g,
                    source,
                    path.walk(),
                    &reduced.edge_map,
                    &edge_map,
                )),
            };
            (outcome, Some(stats))
        }
        Algorithm::Fast => {
            let dual = fast_sup(local, &tree);
            let outcome = if dual.is_finite(target_local) {
                let path = reconstruct_path(local, &tree, &dual, target_local)
                    .expect("finite dual values reconstruct");
                Outcome::Found(map_back(
                    g,
                    source,
                    path.walk(),
                    &reduced.edge_map,
                    &edge_map,
                ))
            } else {
                Outcome::Infeasible
            };
            (outcome, None)
        }
        Algorithm::Oracle => unreachable!("handled above"),
    };
    Ok(PathQueryResult {
        outcome,
        algorithm,
        stats,
    })
}

/// The connected component of `source` as a dense graph, plus vertex and
/// edge maps back to the input (`local id -> original id`).
fn source_component(
    g: &LabeledGraph,
    source: VertexId,
) -> (LabeledGraph, Vec<VertexId>, Vec<EdgeId>) {
    let n = g.vertex_count();
    let mut in_component = vec![false; n];
    let mut stack = vec![source];
    in_component[source] = true;
    while let Some(v) = stack.pop() {
        for &(e, _) in g.incident(v) {
            let w = g.edge(e).other(v);
            if !in_component[w] {
                in_component[w] = true;
                stack.push(w);
            }
        }
    }
    let mut local_of = vec![None; n];
    let mut vertex_map = Vec::new();
    for v in 0..n {
        if in_component[v] {
            local_of[v] = Some(vertex_map.len());
            vertex_map.push(v);
        }
    }
    let mut edge_map = Vec::new();
    let mut specs = Vec::new();
    for e in g.edges() {
        if in_component[e.tail] {
            specs.push((
                local_of[e.tail].expect("endpoint in component"),
                local_of[e.head].expect("edges stay within components"),
                e.length,
                e.label.clone(),
            ));
            edge_map.push(e.id);
        }
    }
    let component = LabeledGraph::new(g.descriptor().clone(), vertex_map.len(), specs)
        .expect("component extraction keeps edges valid");
    (component, vertex_map, edge_map)
}

fn position(vertex_map: &[VertexId], original: VertexId) -> Option<VertexId> {
    vertex_map.iter().position(|&v| v == original)
}

/// Translate a walk of the reduced component back into the original
/// graph's ids and re-evaluate it there.
fn map_back(
    g: &LabeledGraph,
    source: VertexId,
    walk: &Walk,
    reduced_edge_map: &[EdgeId],
    component_edge_map: &[EdgeId],
) -> PathWitness {
    let steps: Vec<Step> = walk
        .steps()
        .iter()
        .map(|s| Step {
            edge: component_edge_map[reduced_edge_map[s.edge]],
            forward: s.forward,
        })
        .collect();
    let rebuilt =
        Walk::from_steps(g, source, steps).expect("mapped witness lies in the original graph");
    debug_assert_eq!(rebuilt.length(), walk.length());
    debug_assert_eq!(rebuilt.label(), walk.label());
    PathWitness::from_walk(rebuilt).expect("mapped witness stays simple")
}
