//! Small hand-checked graphs used throughout the test suites and docs.

use crate::graph::{LabeledGraph, Length};
use crate::group::GroupDescriptor;
use crate::reductions::RotationSystem;

/// The 4-vertex diamond over Z2: vertices `s=0, a=1, b=2, t=3`, unit
/// lengths, with the single label-1 edge `{a, b}`.
///
/// Edges (by id): 0 `{s,a}` label 0, 1 `{s,b}` label 0, 2 `{a,b}` label 1,
/// 3 `{a,t}` label 0, 4 `{b,t}` label 0. The shortest `s`-`t` path has
/// length 2 and label 0; the shortest non-zero one has length 3.
pub fn diamond() -> LabeledGraph {
    let z2 = GroupDescriptor::z2();
    let zero = z2.identity();
    let one = z2.parse("1").unwrap();
    LabeledGraph::new(
        z2,
        4,
        vec![
            (0, 1, Length::from(1), zero.clone()),
            (0, 2, Length::from(1), zero.clone()),
            (1, 2, Length::from(1), one),
            (1, 3, Length::from(1), zero.clone()),
            (2, 3, Length::from(1), zero),
        ],
    )
    .unwrap()
}

/// The 3x3 grid embedded on the torus with unit lengths: 9 vertices, 18
/// edges, 9 quadrilateral faces, genus 1. Vertex `(i, j)` has id
/// `3*i + j`; each vertex has a rightward and a downward edge with
/// wraparound, in rotation order right, down, left, up.
pub fn torus_grid_3x3() -> RotationSystem {
    let n = 9;
    let at = |i: usize, j: usize| 3 * (i % 3) + (j % 3);
    let mut edges = Vec::with_capacity(18);
    // edge ids: 2*(3i+j) is the rightward edge of (i,j), 2*(3i+j)+1 the downward one
    for i in 0..3 {
        for j in 0..3 {
            edges.push((at(i, j), at(i, j + 1), Length::from(1)));
            edges.push((at(i, j), at(i + 1, j), Length::from(1)));
        }
    }
    let right = |i: usize, j: usize| 2 * (3 * (i % 3) + (j % 3));
    let down = |i: usize, j: usize| 2 * (3 * (i % 3) + (j % 3)) + 1;
    let mut rotations = Vec::with_capacity(n);
    for i in 0..3 {
        for j in 0..3 {
            rotations.push(vec![
                right(i, j),
                down(i, j),
                right(i, j + 2), // edge arriving from the left
                down(i + 2, j),  // edge arriving from above
            ]);
        }
    }
    RotationSystem::new(n, edges, rotations).unwrap()
}
