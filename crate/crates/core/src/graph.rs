//! The group-labeled graph data model: vertices, oriented labeled
//! multi-edges with nonnegative lengths, and walks with cached length and
//! label.
//!
//! Graphs are immutable after construction. Each edge stores one
//! orientation (`tail -> head`) together with that orientation's label;
//! traversing it backwards contributes the inverse label. Loops are
//! rejected, parallel edges are allowed.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Sub};

use thiserror::Error;

use crate::group::{GroupDescriptor, GroupElement};

pub type VertexId = usize;
pub type EdgeId = usize;

/// A nonnegative 64-bit length, compared exactly. Edge lengths are finite;
/// `Length::INFINITY` marks unreachable distances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Length(f64);

impl Length {
    pub const ZERO: Length = Length(0.0);
    pub const INFINITY: Length = Length(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self, GraphError> {
        if !value.is_finite() || value < 0.0 {
            return Err(GraphError::InvalidLength { value });
        }
        Ok(Length(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn halved(self) -> Length {
        Length(self.0 / 2.0)
    }
}

impl From<u64> for Length {
    fn from(v: u64) -> Self {
        Length(v as f64)
    }
}

impl Eq for Length {}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.partial_cmp(&other.0).expect("lengths are never NaN")
    }
}

impl Add for Length {
    type Output = Length;
    fn add(self, rhs: Length) -> Length {
        Length(self.0 + rhs.0)
    }
}

impl AddAssign for Length {
    fn add_assign(&mut self, rhs: Length) {
        self.0 += rhs.0;
    }
}

impl Sub for Length {
    type Output = Length;
    fn sub(self, rhs: Length) -> Length {
        debug_assert!(rhs.is_finite(), "cannot subtract an infinite length");
        Length(self.0 - rhs.0)
    }
}

impl Sum for Length {
    fn sum<I: Iterator<Item = Length>>(iter: I) -> Length {
        iter.fold(Length::ZERO, |a, b| a + b)
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("edge {edge} is a loop at vertex {vertex}")]
    LoopEdge { edge: EdgeId, vertex: VertexId },
    #[error("edge {edge} endpoint {vertex} out of range for {n} vertices")]
    BadEndpoint {
        edge: EdgeId,
        vertex: VertexId,
        n: usize,
    },
    #[error("length must be finite and nonnegative, got {value}")]
    InvalidLength { value: f64 },
    #[error("edge {edge} label does not belong to the graph's group")]
    ForeignLabel { edge: EdgeId },
}

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("step {position} does not leave the current vertex {vertex}")]
    NotIncident { position: usize, vertex: VertexId },
    #[error("walks meet at different vertices ({expected} vs {found})")]
    EndpointMismatch { expected: VertexId, found: VertexId },
    #[error("positions {i}..{j} out of range for a walk of {len} edges")]
    PositionOutOfRange { i: usize, j: usize, len: usize },
    #[error("walk revisits vertex {vertex} and is not a path")]
    NotSimple { vertex: VertexId },
}

/// One stored edge: the orientation `tail -> head` carries `label`;
/// `head -> tail` carries its inverse.
#[derive(Debug, Clone)]
pub struct EdgeRecord {
    pub id: EdgeId,
    pub tail: VertexId,
    pub head: VertexId,
    pub label: GroupElement,
    pub length: Length,
}

impl EdgeRecord {
    pub fn other(&self, v: VertexId) -> VertexId {
        debug_assert!(v == self.tail || v == self.head);
        if v == self.tail {
            self.head
        } else {
            self.tail
        }
    }
}

/// A traversal of one edge: `forward` follows the stored orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Step {
    pub edge: EdgeId,
    pub forward: bool,
}

impl Step {
    pub fn forward(edge: EdgeId) -> Step {
        Step {
            edge,
            forward: true,
        }
    }

    pub fn reversed(self) -> Step {
        Step {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

/// An immutable group-labeled multigraph.
#[derive(Debug, Clone)]
pub struct LabeledGraph {
    descriptor: GroupDescriptor,
    n: usize,
    edges: Vec<EdgeRecord>,
    /// Per-vertex incidence: `(edge id, vertex is the tail)`.
    adjacency: Vec<Vec<(EdgeId, bool)>>,
}

impl LabeledGraph {
    /// Build a graph from `(tail, head, length, label)` records. Rejects
    /// loops, out-of-range endpoints, and labels foreign to `descriptor`.
    pub fn new(
        descriptor: GroupDescriptor,
        n: usize,
        edge_specs: Vec<(VertexId, VertexId, Length, GroupElement)>,
    ) -> Result<Self, GraphError> {
        let mut edges = Vec::with_capacity(edge_specs.len());
        let mut adjacency = vec![Vec::new(); n];
        for (id, (tail, head, length, label)) in edge_specs.into_iter().enumerate() {
            for v in [tail, head] {
                if v >= n {
                    return Err(GraphError::BadEndpoint { edge: id, vertex: v, n });
                }
            }
            if tail == head {
                return Err(GraphError::LoopEdge { edge: id, vertex: tail });
            }
            if !length.is_finite() {
                return Err(GraphError::InvalidLength {
                    value: length.value(),
                });
            }
            if !descriptor.contains(&label) {
                return Err(GraphError::ForeignLabel { edge: id });
            }
            adjacency[tail].push((id, true));
            adjacency[head].push((id, false));
            edges.push(EdgeRecord {
                id,
                tail,
                head,
                label,
                length,
            });
        }
        Ok(LabeledGraph {
            descriptor,
            n,
            edges,
            adjacency,
        })
    }

    pub fn descriptor(&self) -> &GroupDescriptor {
        &self.descriptor
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: EdgeId) -> &EdgeRecord {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    /// Incidence list of `v` as `(edge id, v is the tail)` pairs, in edge
    /// insertion order.
    pub fn incident(&self, v: VertexId) -> &[(EdgeId, bool)] {
        &self.adjacency[v]
    }

    pub fn identity(&self) -> GroupElement {
        self.descriptor.identity()
    }

    /// Label contributed by traversing `edge` out of `from`.
    pub fn traversal_label(&self, edge: EdgeId, from: VertexId) -> GroupElement {
        let e = &self.edges[edge];
        debug_assert!(from == e.tail || from == e.head);
        if from == e.tail {
            e.label.clone()
        } else {
            self.descriptor.inv(&e.label)
        }
    }

    pub(crate) fn step_label(&self, step: Step) -> GroupElement {
        let e = &self.edges[step.edge];
        if step.forward {
            e.label.clone()
        } else {
            self.descriptor.inv(&e.label)
        }
    }

    /// `(from, to)` endpoints of a step.
    pub fn step_endpoints(&self, step: Step) -> (VertexId, VertexId) {
        let e = &self.edges[step.edge];
        if step.forward {
            (e.tail, e.head)
        } else {
            (e.head, e.tail)
        }
    }

    pub(crate) fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.descriptor.mul(a, b)
    }

    pub(crate) fn inv(&self, a: &GroupElement) -> GroupElement {
        self.descriptor.inv(a)
    }
}

/// A walk: a start vertex plus consecutive edge traversals, with cached
/// vertex sequence, total length, and ordered label product.
#[derive(Debug, Clone, PartialEq)]
pub struct Walk {
    start: VertexId,
    steps: Vec<Step>,
    vertices: Vec<VertexId>,
    length: Length,
    label: GroupElement,
}

impl Walk {
    pub fn empty(g: &LabeledGraph, at: VertexId) -> Walk {
        Walk {
            start: at,
            steps: Vec::new(),
            vertices: vec![at],
            length: Length::ZERO,
            label: g.identity(),
        }
    }

    pub fn from_steps(
        g: &LabeledGraph,
        start: VertexId,
        steps: Vec<Step>,
    ) -> Result<Walk, WalkError> {
        let mut walk = Walk::empty(g, start);
        for step in steps {
            walk.push(g, step)?;
        }
        Ok(walk)
    }

    pub fn push(&mut self, g: &LabeledGraph, step: Step) -> Result<(), WalkError> {
        let (from, to) = g.step_endpoints(step);
        if from != self.end() {
            return Err(WalkError::NotIncident {
                position: self.steps.len(),
                vertex: self.end(),
            });
        }
        self.label = g.mul(&self.label, &g.step_label(step));
        self.length += g.edge(step.edge).length;
        self.vertices.push(to);
        self.steps.push(step);
        Ok(())
    }

    pub fn start(&self) -> VertexId {
        self.start
    }

    pub fn end(&self) -> VertexId {
        *self.vertices.last().expect("walk has at least one vertex")
    }

    /// Number of traversed edges.
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    /// Vertex sequence; position `i` is the vertex before step `i`.
    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn length(&self) -> Length {
        self.length
    }

    pub fn label(&self) -> &GroupElement {
        &self.label
    }

    pub fn concat(&self, g: &LabeledGraph, other: &Walk) -> Result<Walk, WalkError> {
        if self.end() != other.start() {
            return Err(WalkError::EndpointMismatch {
                expected: self.end(),
                found: other.start(),
            });
        }
        let mut out = self.clone();
        out.steps.extend_from_slice(&other.steps);
        out.vertices.extend_from_slice(&other.vertices[1..]);
        out.length += other.length;
        out.label = g.mul(&out.label, &other.label);
        Ok(out)
    }

    pub fn reversed(&self, g: &LabeledGraph) -> Walk {
        Walk {
            start: self.end(),
            steps: self.steps.iter().rev().map(|s| s.reversed()).collect(),
            vertices: self.vertices.iter().rev().copied().collect(),
            length: self.length,
            label: g.inv(&self.label),
        }
    }

    /// Contiguous subwalk between vertex occurrences `i` and `j`
    /// (`0 <= i <= j <= len`). Occurrences index positions, not vertex
    /// ids, so repeated vertices are unambiguous.
    pub fn subwalk(&self, g: &LabeledGraph, i: usize, j: usize) -> Result<Walk, WalkError> {
        if i > j || j > self.steps.len() {
            return Err(WalkError::PositionOutOfRange {
                i,
                j,
                len: self.steps.len(),
            });
        }
        Walk::from_steps(g, self.vertices[i], self.steps[i..j].to_vec())
    }

    /// First occurrence position of `v`, if any.
    pub fn position_of(&self, v: VertexId) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn is_path(&self) -> bool {
        let mut seen = self.vertices.clone();
        seen.sort_unstable();
        seen.windows(2).all(|w| w[0] != w[1])
    }
}

/// Recompute the ordered label product of a walk from its steps.
pub fn walk_label(g: &LabeledGraph, walk: &Walk) -> GroupElement {
    walk.steps()
        .iter()
        .fold(g.identity(), |acc, &s| g.mul(&acc, &g.step_label(s)))
}

/// A walk whose vertices are pairwise distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct PathWitness {
    walk: Walk,
}

impl PathWitness {
    pub fn from_walk(walk: Walk) -> Result<PathWitness, WalkError> {
        let mut sorted = walk.vertices().to_vec();
        sorted.sort_unstable();
        if let Some(dup) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(WalkError::NotSimple { vertex: dup[0] });
        }
        Ok(PathWitness { walk })
    }

    pub fn walk(&self) -> &Walk {
        &self.walk
    }

    pub fn into_walk(self) -> Walk {
        self.walk
    }

    pub fn start(&self) -> VertexId {
        self.walk.start()
    }

    pub fn end(&self) -> VertexId {
        self.walk.end()
    }

    pub fn length(&self) -> Length {
        self.walk.length()
    }

    pub fn label(&self) -> &GroupElement {
        self.walk.label()
    }

    pub fn vertices(&self) -> &[VertexId] {
        self.walk.vertices()
    }

    pub fn steps(&self) -> &[Step] {
        self.walk.steps()
    }
}
