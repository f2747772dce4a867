//! Application layers: parity-constrained paths over Z2 labels, and
//! shortest non-separating cycles of combinatorially embedded graphs via
//! Z2-homology labels from a tree-cotree split.

use thiserror::Error;

use crate::graph::{EdgeId, GraphError, LabeledGraph, Length, VertexId};
use crate::group::{GroupDescriptor, GroupElement};
use crate::solve::{shortest_nonzero_path, Algorithm, PathQueryResult, SolveError};

#[derive(Debug, Error, PartialEq)]
pub enum EmbedError {
    #[error("rotation of vertex {vertex} does not list its incident edges exactly once")]
    BadRotation { vertex: VertexId },
    #[error("expected {expected} rotations, got {got}")]
    WrongRotationCount { expected: usize, got: usize },
    #[error("the embedded graph must be connected")]
    Disconnected,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Label every edge 1 in Z2, so a walk is non-zero exactly when it
/// traverses an odd number of edges. Edges are oriented low id to high.
pub fn parity_labeling(
    n: usize,
    edges: &[(VertexId, VertexId, Length)],
) -> Result<LabeledGraph, GraphError> {
    let z2 = GroupDescriptor::z2();
    let one = z2.parse("1").expect("1 is a Z2 label");
    let specs = edges
        .iter()
        .map(|&(u, v, len)| (u.min(v), u.max(v), len, one.clone()))
        .collect();
    LabeledGraph::new(z2, n, specs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Odd,
    Even,
}

/// Shortest `s`-`t` path with an odd or even edge count in a
/// parity-labeled graph.
pub fn shortest_parity_path(
    parity_graph: &LabeledGraph,
    s: VertexId,
    t: VertexId,
    parity: Parity,
    algorithm: Algorithm,
) -> Result<PathQueryResult, SolveError> {
    let d = parity_graph.descriptor();
    debug_assert_eq!(*d, GroupDescriptor::z2());
    let forbidden = match parity {
        // an odd path is a non-zero one; an even path avoids label 1
        Parity::Odd => d.identity(),
        Parity::Even => GroupElement::Residue(1),
    };
    shortest_nonzero_path(parity_graph, s, t, &forbidden, algorithm)
}

/// An orientable combinatorial embedding: an undirected weighted graph
/// plus, for each vertex, the cyclic order of its incident edges.
#[derive(Debug, Clone)]
pub struct RotationSystem {
    n: usize,
    edges: Vec<(VertexId, VertexId, Length)>,
    rotations: Vec<Vec<EdgeId>>,
    /// Face walks as sequences of directed edge sides `(edge, forward)`.
    faces: Vec<Vec<(EdgeId, bool)>>,
}

impl RotationSystem {
    pub fn new(
        n: usize,
        edges: Vec<(VertexId, VertexId, Length)>,
        rotations: Vec<Vec<EdgeId>>,
    ) -> Result<Self, EmbedError> {
        if rotations.len() != n {
            return Err(EmbedError::WrongRotationCount {
                expected: n,
                got: rotations.len(),
            });
        }
        for (id, &(u, v, len)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::BadEndpoint {
                    edge: id,
                    vertex: u.max(v),
                    n,
                }
                .into());
            }
            if u == v {
                return Err(GraphError::LoopEdge { edge: id, vertex: u }.into());
            }
            if !len.is_finite() {
                return Err(GraphError::InvalidLength { value: len.value() }.into());
            }
        }
        // each rotation must list exactly the edges incident to its vertex
        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
        for (id, &(u, v, _)) in edges.iter().enumerate() {
            incident[u].push(id);
            incident[v].push(id);
        }
        for v in 0..n {
            let mut listed = rotations[v].clone();
            listed.sort_unstable();
            let mut expected = incident[v].clone();
            expected.sort_unstable();
            if listed != expected {
                return Err(EmbedError::BadRotation { vertex: v });
            }
        }
        if n > 0 {
            let mut seen = vec![false; n];
            let mut stack = vec![0];
            seen[0] = true;
            while let Some(v) = stack.pop() {
                for &e in &incident[v] {
                    let (a, b, _) = edges[e];
                    let w = if a == v { b } else { a };
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return Err(EmbedError::Disconnected);
            }
        }

        let faces = trace_faces(n, &edges, &rotations);
        Ok(RotationSystem {
            n,
            edges,
            rotations,
            faces,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(VertexId, VertexId, Length)] {
        &self.edges
    }

    pub fn rotations(&self) -> &[Vec<EdgeId>] {
        &self.rotations
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    /// Face walks as `(edge, traversed-forward)` sequences.
    pub fn faces(&self) -> &[Vec<(EdgeId, bool)>] {
        &self.faces
    }

    /// Genus from the Euler characteristic of the cellular embedding.
    pub fn genus(&self) -> usize {
        let euler = self.n as i64 - self.edges.len() as i64 + self.faces.len() as i64;
        debug_assert!(euler <= 2 && (2 - euler) % 2 == 0);
        ((2 - euler) / 2) as usize
    }

    /// Edge sets of face boundaries mod 2: an edge with both sides on the
    /// same face cancels out.
    pub fn face_boundary_sets(&self) -> Vec<Vec<EdgeId>> {
        self.faces
            .iter()
            .map(|face| {
                let mut count = std::collections::HashMap::new();
                for &(e, _) in face {
                    *count.entry(e).or_insert(0u32) += 1;
                }
                let mut odd: Vec<EdgeId> = count
                    .into_iter()
                    .filter(|&(_, c)| c % 2 == 1)
                    .map(|(e, _)| e)
                    .collect();
                odd.sort_unstable();
                odd
            })
            .collect()
    }
}

/// Cotree edges on the unique dual-tree path between two faces.
fn dual_tree_path(
    dual_adj: &[Vec<(usize, EdgeId)>],
    from: usize,
    to: usize,
) -> Vec<EdgeId> {
    let mut parent: Vec<Option<(usize, EdgeId)>> = vec![None; dual_adj.len()];
    let mut seen = vec![false; dual_adj.len()];
    seen[from] = true;
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(f) = queue.pop_front() {
        if f == to {
            break;
        }
        for &(g, e) in &dual_adj[f] {
            if !seen[g] {
                seen[g] = true;
                parent[g] = Some((f, e));
                queue.push_back(g);
            }
        }
    }
    let mut path = Vec::new();
    let mut cur = to;
    while cur != from {
        let (prev, e) = parent[cur].expect("cotree spans the faces");
        path.push(e);
        cur = prev;
    }
    path
}

/// Faces as orbits of the next-dart map: arrive at a vertex, take the
/// next edge in its rotation, leave along it.
fn trace_faces(
    n: usize,
    edges: &[(VertexId, VertexId, Length)],
    rotations: &[Vec<EdgeId>],
) -> Vec<Vec<(EdgeId, bool)>> {
    let m = edges.len();
    let mut pos = vec![std::collections::HashMap::new(); n];
    for v in 0..n {
        for (i, &e) in rotations[v].iter().enumerate() {
            pos[v].insert(e, i);
        }
    }
    // dart 2e = forward (tail -> head), 2e + 1 = backward
    let next_dart = |dart: usize| -> usize {
        let e = dart / 2;
        let (tail, head, _) = edges[e];
        let arrive = if dart.is_multiple_of(2) { head } else { tail };
        let rot = &rotations[arrive];
        let i = pos[arrive][&e];
        let e2 = rot[(i + 1) % rot.len()];
        let (t2, _, _) = edges[e2];
        if t2 == arrive {
            2 * e2
        } else {
            2 * e2 + 1
        }
    };
    let mut visited = vec![false; 2 * m];
    let mut faces = Vec::new();
    for start in 0..2 * m {
        if visited[start] {
            continue;
        }
        let mut face = Vec::new();
        let mut d = start;
        loop {
            visited[d] = true;
            face.push((d / 2, d % 2 == 0));
            d = next_dart(d);
            if d == start {
                break;
            }
        }
        faces.push(face);
    }
    faces
}

/// The tree-cotree labeling of an embedded graph.
#[derive(Debug, Clone)]
pub struct HomologyLabeling {
    /// The graph relabeled over `Z2^k`, `k = 2 * genus`.
    pub graph: LabeledGraph,
    pub spanning_tree: Vec<EdgeId>,
    /// Edges whose duals span the face adjacency.
    pub cotree: Vec<EdgeId>,
    /// The `k` leftover edges; edge `leftover[i]` carries basis vector `i`.
    pub leftover: Vec<EdgeId>,
}

/// Assign each leftover edge of a tree-cotree split a distinct Z2 basis
/// vector and all other edges the identity. A cycle's label is then
/// trivial exactly when its edge set is a symmetric difference of face
/// boundaries, so the shortest non-zero cycle of the result is a shortest
/// non-separating cycle of the embedding.
pub fn homology_labeling(rs: &RotationSystem) -> HomologyLabeling {
    let n = rs.vertex_count();
    let m = rs.edge_count();

    // spanning tree by breadth-first search in edge-id order
    let mut in_tree = vec![false; m];
    let mut seen = vec![false; n];
    let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); n];
    for (id, &(u, v, _)) in rs.edges().iter().enumerate() {
        incident[u].push(id);
        incident[v].push(id);
    }
    if n > 0 {
        seen[0] = true;
        let mut queue = std::collections::VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            for &e in &incident[v] {
                let (a, b, _) = rs.edges()[e];
                let w = if a == v { b } else { a };
                if !seen[w] {
                    seen[w] = true;
                    in_tree[e] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    // cotree: spanning tree of the face adjacency over non-tree edges
    let faces = rs.face_count();
    let mut side_faces = vec![(usize::MAX, usize::MAX); m];
    for (f, face) in rs.faces().iter().enumerate() {
        for &(e, forward) in face {
            if forward {
                side_faces[e].0 = f;
            } else {
                side_faces[e].1 = f;
            }
        }
    }
    let mut in_cotree = vec![false; m];
    if faces > 0 {
        let mut face_seen = vec![false; faces];
        face_seen[0] = true;
        let mut frontier = true;
        while frontier {
            frontier = false;
            for e in 0..m {
                if in_tree[e] || in_cotree[e] {
                    continue;
                }
                let (fa, fb) = side_faces[e];
                if face_seen[fa] != face_seen[fb] {
                    in_cotree[e] = true;
                    face_seen[fa] = true;
                    face_seen[fb] = true;
                    frontier = true;
                }
            }
        }
        debug_assert!(face_seen.iter().all(|&s| s));
    }

    let leftover: Vec<EdgeId> = (0..m).filter(|&e| !in_tree[e] && !in_cotree[e]).collect();
    debug_assert_eq!(leftover.len(), 2 * rs.genus());

    // Each leftover edge closes a loop in the dual graph: itself plus the
    // cotree path between its two faces. A cycle's homology class is read
    // off by counting crossings with these dual loops mod 2, so an edge's
    // label coordinate i is 1 exactly when the edge lies on dual loop i.
    // Boundaries cross every loop evenly and get the identity.
    let mut dual_adj: Vec<Vec<(usize, EdgeId)>> = vec![Vec::new(); faces.max(1)];
    for e in 0..m {
        if in_cotree[e] {
            let (fa, fb) = side_faces[e];
            dual_adj[fa].push((fb, e));
            dual_adj[fb].push((fa, e));
        }
    }
    let k = leftover.len();
    let descriptor = GroupDescriptor::Product(vec![GroupDescriptor::z2(); k]);
    let mut coords = vec![vec![GroupElement::Residue(0); k]; m];
    for (i, &x) in leftover.iter().enumerate() {
        coords[x][i] = GroupElement::Residue(1);
        let (from, to) = side_faces[x];
        for e in dual_tree_path(&dual_adj, from, to) {
            coords[e][i] = GroupElement::Residue(1);
        }
    }
    let labels: Vec<GroupElement> = coords.into_iter().map(GroupElement::Tuple).collect();
    let specs = rs
        .edges()
        .iter()
        .zip(labels)
        .map(|(&(u, v, len), label)| (u, v, len, label))
        .collect();
    let graph = LabeledGraph::new(descriptor, n, specs)
        .expect("relabeling preserves graph validity");

    HomologyLabeling {
        graph,
        spanning_tree: (0..m).filter(|&e| in_tree[e]).collect(),
        cotree: (0..m).filter(|&e| in_cotree[e]).collect(),
        leftover,
    }
}
