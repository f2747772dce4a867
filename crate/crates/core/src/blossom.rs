//! Lowest blossoms and the three structural operations built on them:
//! shrinking a blossom into its base, expanding a path of the shrunk graph
//! back into a walk, and simplifying such a walk into an unorthodox path
//! that is no longer.
//!
//! An inconsistent non-tree edge `e = {u, v}` closes a non-zero cycle
//! through the deepest common ancestor of `u` and `v` (the base). The
//! closed walk `P_u * (u,e,v) * reversed(P_v)` has length
//! `dist(u) + dist(v) + len(e)`; half of that is the blossom's height, and
//! a blossom of minimum height is "lowest". For every non-base vertex `w`
//! of a lowest blossom, the unique path from the root that crosses `e`
//! (the detour) is a shortest unorthodox root-`w` path.

use thiserror::Error;

use crate::graph::{EdgeId, LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
use crate::group::GroupElement;
use crate::prune::{PairReducer, ProtoEdge};
use crate::spt::ShortestPathTree;

/// Which endpoint's tree path a cycle vertex lies on, in the blossom
/// edge's stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CycleBranch {
    Tail,
    Head,
}

#[derive(Debug, Error, PartialEq)]
pub enum BlossomError {
    #[error("vertex {vertex} is not a non-base vertex of the blossom")]
    NotOnBlossom { vertex: VertexId },
}

#[derive(Debug, Error, PartialEq)]
pub enum SimplifyError {
    #[error("walk revisits vertex {vertex}, which is outside the shrunk blossom")]
    Revisit { vertex: VertexId },
    #[error("walk is orthodox and cannot be simplified into an unorthodox path")]
    Orthodox,
    #[error("walk runs {found_start}..{found_end}, expected {root}..{target}")]
    WrongEndpoints {
        found_start: VertexId,
        found_end: VertexId,
        root: VertexId,
        target: VertexId,
    },
}

/// A blossom: the non-zero cycle closed by an inconsistent non-tree edge.
#[derive(Debug, Clone)]
pub struct Blossom {
    edge: EdgeId,
    base: VertexId,
    /// Half the closed-walk length.
    height: Length,
    /// The cycle as a closed walk base -> tail branch -> edge -> base.
    cycle: Walk,
    /// `Some(branch)` exactly for the cycle vertices other than the base.
    branch: Vec<Option<CycleBranch>>,
    closed_walk_label: GroupElement,
    closed_walk_length: Length,
}

impl Blossom {
    pub fn edge(&self) -> EdgeId {
        self.edge
    }

    pub fn base(&self) -> VertexId {
        self.base
    }

    pub fn height(&self) -> Length {
        self.height
    }

    pub fn cycle(&self) -> &Walk {
        &self.cycle
    }

    pub fn branch(&self, v: VertexId) -> Option<CycleBranch> {
        self.branch[v]
    }

    /// Whether `v` is a cycle vertex other than the base.
    pub fn contains_nonbase(&self, v: VertexId) -> bool {
        self.branch[v].is_some()
    }

    pub fn closed_walk_label(&self) -> &GroupElement {
        &self.closed_walk_label
    }

    pub fn closed_walk_length(&self) -> Length {
        self.closed_walk_length
    }

    /// Length of the detour path to a non-base cycle vertex, in closed
    /// form: the closed walk minus the tree path to `w`.
    pub fn detour_length(&self, tree: &ShortestPathTree, w: VertexId) -> Length {
        self.closed_walk_length - tree.dist(w)
    }

    /// Label of the detour path to `w`: the closed-walk label (or its
    /// inverse, on the tail branch) times the tree label of `w`.
    pub fn detour_label(
        &self,
        g: &LabeledGraph,
        tree: &ShortestPathTree,
        w: VertexId,
    ) -> GroupElement {
        match self.branch[w].expect("detours exist only for non-base cycle vertices") {
            CycleBranch::Head => g.mul(&self.closed_walk_label, tree.psi(w)),
            CycleBranch::Tail => g.mul(&g.inv(&self.closed_walk_label), tree.psi(w)),
        }
    }

    /// Steps of the tree segment base -> `w`.
    fn tree_route_steps(
        &self,
        g: &LabeledGraph,
        tree: &ShortestPathTree,
        w: VertexId,
    ) -> Vec<Step> {
        tree.steps_down_to(g, self.base, w)
    }

    /// Steps of the segment base -> `w` going the other way around the
    /// cycle, crossing the blossom edge.
    fn detour_route_steps(
        &self,
        g: &LabeledGraph,
        tree: &ShortestPathTree,
        w: VertexId,
    ) -> Vec<Step> {
        let edge = g.edge(self.edge);
        let mut steps = match self.branch[w].expect("non-base cycle vertex") {
            CycleBranch::Head => {
                let mut s = tree.steps_down_to(g, self.base, edge.tail);
                s.push(Step { edge: self.edge, forward: true });
                s.extend(steps_up_from(g, tree, edge.head, w));
                s
            }
            CycleBranch::Tail => {
                let mut s = tree.steps_down_to(g, self.base, edge.head);
                s.push(Step { edge: self.edge, forward: false });
                s.extend(steps_up_from(g, tree, edge.tail, w));
                s
            }
        };
        steps.shrink_to_fit();
        steps
    }
}

/// Flipped parent steps ascending from `from` to the ancestor `top`.
fn steps_up_from(
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

/// Scan the non-tree edges for inconsistent ones and return a blossom of
/// minimum height, ties broken by smallest edge id. `None` means every
/// edge is consistent, so all root-`t` paths are orthodox.
pub fn find_lowest_blossom(g: &LabeledGraph, tree: &ShortestPathTree) -> Option<Blossom> {
    let tree_marks = tree.tree_edge_marks(g);
    let mut best: Option<(Length, EdgeId)> = None;
    for edge in g.edges() {
        if tree_marks[edge.id]
            || !tree.is_reachable(edge.tail)
            || !tree.is_reachable(edge.head)
            || tree.consistent_unchecked(g, edge.id)
        {
            continue;
        }
        let doubled = tree.dist(edge.tail) + tree.dist(edge.head) + edge.length;
        if best.is_none_or(|(h, _)| doubled < h) {
            best = Some((doubled, edge.id));
        }
    }
    let (doubled, e) = best?;
    Some(build_blossom(g, tree, e, doubled))
}

fn build_blossom(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    e: EdgeId,
    doubled_height: Length,
) -> Blossom {
    let edge = g.edge(e);
    let (u, v) = (edge.tail, edge.head);

    // deepest common ancestor
    let (mut x, mut y) = (u, v);
    while x != y {
        if tree.depth(x) >= tree.depth(y) {
            x = tree.parent_vertex(g, x).expect("non-root has a parent");
        } else {
            y = tree.parent_vertex(g, y).expect("non-root has a parent");
        }
    }
    let base = x;

    let mut branch = vec![None; g.vertex_count()];
    let mut cur = u;
    while cur != base {
        branch[cur] = Some(CycleBranch::Tail);
        cur = tree.parent_vertex(g, cur).expect("non-root has a parent");
    }
    let mut cur = v;
    while cur != base {
        branch[cur] = Some(CycleBranch::Head);
        cur = tree.parent_vertex(g, cur).expect("non-root has a parent");
    }

    let mut steps = tree.steps_down_to(g, base, u);
    steps.push(Step { edge: e, forward: true });
    steps.extend(steps_up_from(g, tree, v, base));
    let cycle = Walk::from_steps(g, base, steps).expect("cycle steps are incident");
    debug_assert!(
        !g.descriptor().is_identity(cycle.label()),
        "blossoms are non-zero cycles"
    );

    let closed_walk_label = g.mul(
        &g.mul(tree.psi(u), &edge.label),
        &g.inv(tree.psi(v)),
    );
    Blossom {
        edge: e,
        base,
        height: doubled_height.halved(),
        cycle,
        branch,
        closed_walk_label,
        closed_walk_length: doubled_height,
    }
}

/// The unique root-`w` path through the blossom edge, for a non-base
/// cycle vertex `w`. For a lowest blossom this is a shortest unorthodox
/// root-`w` path.
pub fn detour_path(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    blossom: &Blossom,
    w: VertexId,
) -> Result<PathWitness, BlossomError> {
    if !blossom.contains_nonbase(w) {
        return Err(BlossomError::NotOnBlossom { vertex: w });
    }
    let mut steps = tree.steps_down_to(g, tree.root(), blossom.base());
    steps.extend(blossom.detour_route_steps(g, tree, w));
    let walk = Walk::from_steps(g, tree.root(), steps).expect("detour steps are incident");
    debug_assert_eq!(walk.length(), blossom.detour_length(tree, w));
    debug_assert_eq!(*walk.label(), blossom.detour_label(g, tree, w));
    Ok(PathWitness::from_walk(walk).expect("detour paths are simple"))
}

/// Where a shrunk-graph edge came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    Kept {
        original: EdgeId,
    },
    /// Replacement for an edge `{w, x}` with `w` on the cycle: base-to-`x`
    /// via the tree segment to `w` or via the detour around the blossom.
    Detour {
        original: EdgeId,
        via: DetourVia,
        cycle_vertex: VertexId,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetourVia {
    TreeSide,
    BlossomSide,
}

/// The graph obtained by shrinking a blossom into its base, its
/// shortest-path tree, and the bookkeeping needed to expand paths back.
#[derive(Debug, Clone)]
pub struct ShrinkResult {
    pub graph: LabeledGraph,
    pub tree: ShortestPathTree,
    /// Cycle vertices (other than the base) deleted by the shrink.
    pub removed: Vec<VertexId>,
    /// New dense vertex id -> original id.
    pub old_vertex: Vec<VertexId>,
    /// Original vertex id -> new id, `None` for removed vertices.
    pub new_vertex: Vec<Option<VertexId>>,
    /// Per new edge id.
    pub edge_origin: Vec<EdgeOrigin>,
}

/// Shrink the blossom into its base. Edges inside the cycle disappear;
/// every edge from a non-base cycle vertex `w` to an outside vertex `x`
/// becomes two base-`x` edges whose labels and lengths prepend the
/// tree-side and blossom-side base-`w` segments. Distances and labels of
/// surviving vertices are unchanged, so the restricted tree is again a
/// shortest-path tree. Redundant parallel edges are removed on the fly.
pub fn shrink(g: &LabeledGraph, tree: &ShortestPathTree, blossom: &Blossom) -> ShrinkResult {
    let n = g.vertex_count();
    let removed_mark: Vec<bool> = (0..n).map(|v| blossom.contains_nonbase(v)).collect();
    let removed: Vec<VertexId> = (0..n).filter(|&v| removed_mark[v]).collect();

    let mut new_vertex = vec![None; n];
    let mut old_vertex = Vec::with_capacity(n - removed.len());
    for v in 0..n {
        if !removed_mark[v] {
            new_vertex[v] = Some(old_vertex.len());
            old_vertex.push(v);
        }
    }
    let base_new = new_vertex[blossom.base()].expect("base survives");

    let tree_marks = tree.tree_edge_marks(g);
    let psi_base_inv = g.inv(tree.psi(blossom.base()));
    let dist_base = tree.dist(blossom.base());

    let mut reducer: PairReducer<EdgeOrigin> = PairReducer::new(g.descriptor());
    for edge in g.edges() {
        let (tu, tv) = (edge.tail, edge.head);
        match (removed_mark[tu], removed_mark[tv]) {
            (true, true) => continue,
            (false, false) => reducer.admit(ProtoEdge {
                tail: new_vertex[tu].expect("survivor"),
                head: new_vertex[tv].expect("survivor"),
                length: edge.length,
                label: edge.label.clone(),
                is_tree: tree_marks[edge.id],
                origin: EdgeOrigin::Kept { original: edge.id },
            }),
            _ => {
                let (w, x) = if removed_mark[tu] { (tu, tv) } else { (tv, tu) };
                if x == blossom.base() {
                    // both endpoints inside the cycle
                    continue;
                }
                let x_new = new_vertex[x].expect("survivor");
                let out_label = g.traversal_label(edge.id, w);

                let tree_side_label =
                    g.mul(&g.mul(&psi_base_inv, tree.psi(w)), &out_label);
                let tree_side_len = (tree.dist(w) - dist_base) + edge.length;
                reducer.admit(ProtoEdge {
                    tail: base_new,
                    head: x_new,
                    length: tree_side_len,
                    label: tree_side_label,
                    is_tree: tree_marks[edge.id],
                    origin: EdgeOrigin::Detour {
                        original: edge.id,
                        via: DetourVia::TreeSide,
                        cycle_vertex: w,
                    },
                });

                let detour_label_w = blossom.detour_label(g, tree, w);
                let blossom_side_label =
                    g.mul(&g.mul(&psi_base_inv, &detour_label_w), &out_label);
                let blossom_side_len =
                    (blossom.detour_length(tree, w) - dist_base) + edge.length;
                reducer.admit(ProtoEdge {
                    tail: base_new,
                    head: x_new,
                    length: blossom_side_len,
                    label: blossom_side_label,
                    is_tree: false,
                    origin: EdgeOrigin::Detour {
                        original: edge.id,
                        via: DetourVia::BlossomSide,
                        cycle_vertex: w,
                    },
                });
            }
        }
    }

    let retained = reducer.finish();
    let mut edge_specs = Vec::with_capacity(retained.len());
    let mut edge_origin = Vec::with_capacity(retained.len());
    // translation for parent edges of the restricted tree
    let mut kept_new_id = vec![None; g.edge_count()];
    let mut tree_detour_new_id = vec![None; g.edge_count()];
    for (new_id, proto) in retained.into_iter().enumerate() {
        match proto.origin {
            EdgeOrigin::Kept { original } => kept_new_id[original] = Some(new_id),
            EdgeOrigin::Detour { original, .. } if proto.is_tree => {
                tree_detour_new_id[original] = Some(new_id)
            }
            _ => {}
        }
        edge_origin.push(proto.origin);
        edge_specs.push((proto.tail, proto.head, proto.length, proto.label));
    }
    let shrunk = LabeledGraph::new(g.descriptor().clone(), old_vertex.len(), edge_specs)
        .expect("shrunk edges are valid");

    // restrict the tree to the survivors
    let root_new = new_vertex[tree.root()].expect("the root survives");
    let mut parent = vec![None; old_vertex.len()];
    let mut dist = vec![Length::INFINITY; old_vertex.len()];
    let mut psi = vec![g.identity(); old_vertex.len()];
    for (v_new, &v_old) in old_vertex.iter().enumerate() {
        dist[v_new] = tree.dist(v_old);
        if tree.is_reachable(v_old) {
            psi[v_new] = tree.psi(v_old).clone();
        }
        if v_old == tree.root() {
            continue;
        }
        if let Some(step) = tree.parent_step(v_old) {
            let parent_old = g.step_endpoints(step).0;
            parent[v_new] = if removed_mark[parent_old] {
                let e = tree_detour_new_id[step.edge]
                    .expect("tree edges out of the cycle yield tree-side detours");
                Some(Step { edge: e, forward: true })
            } else {
                let e = kept_new_id[step.edge].expect("surviving tree edges are retained");
                Some(Step { edge: e, forward: step.forward })
            };
        }
    }
    let depth = recompute_depths(&shrunk, root_new, &parent);
    let shrunk_tree = ShortestPathTree {
        root: root_new,
        parent,
        dist,
        psi,
        depth,
    };

    #[cfg(debug_assertions)]
    {
        let fresh = crate::spt::dijkstra(&shrunk, root_new);
        for v in 0..shrunk.vertex_count() {
            debug_assert_eq!(
                fresh.dist(v),
                shrunk_tree.dist(v),
                "restricted distances match a fresh shortest-path run"
            );
        }
    }

    ShrinkResult {
        graph: shrunk,
        tree: shrunk_tree,
        removed,
        old_vertex,
        new_vertex,
        edge_origin,
    }
}

fn recompute_depths(g: &LabeledGraph, root: VertexId, parent: &[Option<Step>]) -> Vec<u32> {
    let n = g.vertex_count();
    let mut depth = vec![None; n];
    depth[root] = Some(0u32);
    for start in 0..n {
        if depth[start].is_some() {
            continue;
        }
        let mut chain = vec![start];
        let mut cur = start;
        // unreachable vertices have no parent and keep depth 0
        while let Some(step) = parent[cur] {
            cur = g.step_endpoints(step).0;
            if depth[cur].is_some() {
                break;
            }
            chain.push(cur);
        }
        let mut d = depth[cur].unwrap_or(0);
        for &v in chain.iter().rev() {
            d += 1;
            if parent[v].is_some() {
                depth[v] = Some(d);
            } else {
                depth[v] = Some(0);
            }
        }
    }
    depth.into_iter().map(|d| d.unwrap_or(0)).collect()
}

/// Expand a path of the shrunk graph back into a walk of the original
/// graph by splicing the recorded base-`w` segment into each detour edge.
/// Length and label are preserved exactly. The result is a path when at
/// most one detour edge is used; either way every surviving vertex appears
/// at most once.
pub fn expand(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    blossom: &Blossom,
    shrunk: &ShrinkResult,
    path: &PathWitness,
) -> Walk {
    let mut walk = Walk::empty(g, shrunk.old_vertex[path.start()]);
    let push = |walk: &mut Walk, step: Step| {
        walk.push(g, step).expect("expanded steps are incident");
    };
    for &step in path.steps() {
        match shrunk.edge_origin[step.edge] {
            EdgeOrigin::Kept { original } => push(
                &mut walk,
                Step {
                    edge: original,
                    forward: step.forward,
                },
            ),
            EdgeOrigin::Detour {
                original,
                via,
                cycle_vertex,
            } => {
                let route = match via {
                    DetourVia::TreeSide => blossom.tree_route_steps(g, tree, cycle_vertex),
                    DetourVia::BlossomSide => blossom.detour_route_steps(g, tree, cycle_vertex),
                };
                let crossing = Step {
                    edge: original,
                    forward: g.edge(original).tail == cycle_vertex,
                };
                if step.forward {
                    for s in route {
                        push(&mut walk, s);
                    }
                    push(&mut walk, crossing);
                } else {
                    push(&mut walk, crossing.reversed());
                    for s in route.into_iter().rev() {
                        push(&mut walk, s.reversed());
                    }
                }
            }
        }
    }
    walk
}

/// Turn an unorthodox walk (in which every vertex outside the shrunk
/// blossom appears at most once) into an unorthodox path no longer than
/// the walk, using only edges of the walk, the cycle, and the stem.
pub fn simplify(
    g: &LabeledGraph,
    tree: &ShortestPathTree,
    blossom: &Blossom,
    walk: &Walk,
    target: VertexId,
) -> Result<PathWitness, SimplifyError> {
    if walk.start() != tree.root() || walk.end() != target {
        return Err(SimplifyError::WrongEndpoints {
            found_start: walk.start(),
            found_end: walk.end(),
            root: tree.root(),
            target,
        });
    }
    let mut counts = vec![0u32; g.vertex_count()];
    for &v in walk.vertices() {
        counts[v] += 1;
        if counts[v] > 1 && !blossom.contains_nonbase(v) {
            return Err(SimplifyError::Revisit { vertex: v });
        }
    }
    if walk.label() == tree.psi(target) {
        return Err(SimplifyError::Orthodox);
    }

    let verts = walk.vertices();
    if !verts.iter().any(|&v| blossom.contains_nonbase(v)) {
        return Ok(PathWitness::from_walk(walk.clone())
            .expect("walks avoiding the cycle repeat no vertex"));
    }

    // stem: tree path from the root to the base, inclusive
    let mut stem = vec![false; g.vertex_count()];
    let mut cur = blossom.base();
    loop {
        stem[cur] = true;
        match tree.parent_vertex(g, cur) {
            Some(p) => cur = p,
            None => break,
        }
    }

    let last_touch = verts
        .iter()
        .rposition(|&v| blossom.contains_nonbase(v) || stem[v])
        .expect("the walk meets the cycle");
    let w = verts[last_touch];

    let result = if blossom.contains_nonbase(w) {
        // the walk leaves the blossom for good at a cycle vertex: prepend
        // either the tree path or the detour, whichever keeps the label
        // away from the target's
        let tail = walk.subwalk(g, last_touch, walk.len()).expect("in range");
        let keeps_unorthodox = g.mul(tree.psi(w), tail.label()) != *tree.psi(target);
        let head = if keeps_unorthodox {
            tree.tree_path(g, w).expect("cycle vertices are reachable")
        } else {
            detour_path(g, tree, blossom, w).expect("w is a non-base cycle vertex")
        };
        head.walk().concat(g, &tail).expect("head ends at w")
    } else {
        // the walk returns to the stem after visiting the cycle
        let first_cycle = verts
            .iter()
            .position(|&v| blossom.contains_nonbase(v))
            .expect("the walk meets the cycle");
        let last_cycle = verts
            .iter()
            .rposition(|&v| blossom.contains_nonbase(v))
            .expect("the walk meets the cycle");
        let enter = verts[first_cycle];
        let exit = verts[last_cycle];

        let deepest_stem = |range: std::ops::RangeInclusive<usize>| {
            range
                .filter(|&p| stem[verts[p]])
                .max_by_key(|&p| tree.depth(verts[p]))
        };
        let before = deepest_stem(0..=first_cycle).expect("the root is on the stem");
        let after = deepest_stem(last_cycle..=walk.len()).expect("w is on the stem");
        debug_assert_ne!(verts[before], verts[after]);

        if tree.depth(verts[before]) > tree.depth(verts[after]) {
            // bridge from the deep stem vertex reached before the cycle to
            // the last cycle vertex
            let y = verts[before];
            let prefix = walk.subwalk(g, 0, before).expect("in range");
            let suffix = walk.subwalk(g, last_cycle, walk.len()).expect("in range");
            let via_tree = g.mul(
                &g.mul(&g.mul(prefix.label(), &g.inv(tree.psi(y))), tree.psi(exit)),
                suffix.label(),
            ) != *tree.psi(target);
            let bridge = if via_tree {
                descend_segment(g, tree.tree_path(g, exit).expect("reachable").into_walk(), y)
            } else {
                let q = detour_path(g, tree, blossom, exit).expect("non-base cycle vertex");
                descend_segment(g, q.into_walk(), y)
            };
            prefix
                .concat(g, &bridge)
                .and_then(|w| w.concat(g, &suffix))
                .expect("bridge joins prefix to suffix")
        } else {
            // bridge from the first cycle vertex back down to the deep
            // stem vertex reached after it
            let y = verts[after];
            let prefix = walk.subwalk(g, 0, first_cycle).expect("in range");
            let suffix = walk.subwalk(g, after, walk.len()).expect("in range");
            let via_tree = g.mul(
                &g.mul(&g.mul(prefix.label(), &g.inv(tree.psi(enter))), tree.psi(y)),
                suffix.label(),
            ) != *tree.psi(target);
            let bridge = if via_tree {
                ascend_segment(g, tree.tree_path(g, enter).expect("reachable").into_walk(), y)
            } else {
                let q = detour_path(g, tree, blossom, enter).expect("non-base cycle vertex");
                ascend_segment(g, q.into_walk(), y)
            };
            prefix
                .concat(g, &bridge)
                .and_then(|w| w.concat(g, &suffix))
                .expect("bridge joins prefix to suffix")
        }
    };

    debug_assert!(result.length() <= walk.length());
    debug_assert!(result.label() != tree.psi(target));
    Ok(PathWitness::from_walk(result).expect("simplified walk is a path"))
}

/// Suffix of `path` from the unique occurrence of `from` to its end.
fn descend_segment(g: &LabeledGraph, path: Walk, from: VertexId) -> Walk {
    let pos = path.position_of(from).expect("vertex lies on the path");
    path.subwalk(g, pos, path.len()).expect("in range")
}

/// Reversed prefix: from the end of `path` back to the unique occurrence
/// of `to`.
fn ascend_segment(g: &LabeledGraph, path: Walk, to: VertexId) -> Walk {
    let rev = path.reversed(g);
    let pos = rev.position_of(to).expect("vertex lies on the path");
    rev.subwalk(g, 0, pos).expect("in range")
}
