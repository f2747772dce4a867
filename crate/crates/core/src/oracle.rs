//! Brute-force reference implementations. Deliberately exponential and
//! unoptimized: these are the trust anchor every solver is tested against.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{LabeledGraph, Length, PathWitness, Step, VertexId, Walk};
use crate::group::GroupElement;

#[derive(Debug, Clone, Copy)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_paths: u64,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 10,
            max_paths: 1_000_000,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("graph has {n} vertices, over the enumeration limit {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("enumeration exceeded the budget of {max} walks")]
    BudgetExceeded { max: u64 },
}

/// Every simple `s`-`t` path, each exactly once.
pub fn enumerate_st_paths(
    g: &LabeledGraph,
    s: VertexId,
    t: VertexId,
    budget: OracleBudget,
) -> Result<Vec<PathWitness>, OracleError> {
    check_size(g, budget)?;
    let mut out = Vec::new();
    let mut visited = vec![false; g.vertex_count()];
    visited[s] = true;
    let mut walk = Walk::empty(g, s);
    dfs_paths(g, t, &mut visited, &mut walk, budget.max_paths, &mut out)?;
    Ok(out)
}

fn dfs_paths(
    g: &LabeledGraph,
    t: VertexId,
    visited: &mut Vec<bool>,
    walk: &mut Walk,
    max_paths: u64,
    out: &mut Vec<PathWitness>,
) -> Result<(), OracleError> {
    let v = walk.end();
    if v == t {
        if out.len() as u64 >= max_paths {
            return Err(OracleError::BudgetExceeded { max: max_paths });
        }
        out.push(PathWitness::from_walk(walk.clone()).expect("visited set keeps paths simple"));
        return Ok(());
    }
    for &(e, v_is_tail) in g.incident(v) {
        let w = g.edge(e).other(v);
        if visited[w] {
            continue;
        }
        visited[w] = true;
        let before = walk.clone();
        walk.push(g, Step { edge: e, forward: v_is_tail })
            .expect("incident step extends the walk");
        dfs_paths(g, t, visited, walk, max_paths, out)?;
        *walk = before;
        visited[w] = false;
    }
    Ok(())
}

/// Minimum-length simple `s`-`t` path whose label differs from
/// `forbidden`; `None` forbids nothing. Ties are broken towards the path
/// enumerated first, which is deterministic.
pub fn shortest_path_with_label_constraint(
    g: &LabeledGraph,
    s: VertexId,
    t: VertexId,
    forbidden: Option<&GroupElement>,
    budget: OracleBudget,
) -> Result<Option<PathWitness>, OracleError> {
    let paths = enumerate_st_paths(g, s, t, budget)?;
    Ok(paths
        .into_iter()
        .filter(|p| forbidden.is_none_or(|f| p.label() != f))
        .min_by_key(|p| p.length()))
}

/// Every simple cycle, once up to rotation and reflection, anchored at its
/// smallest vertex. Each returned walk is closed and vertex-simple apart
/// from its endpoints.
pub fn enumerate_simple_cycles(
    g: &LabeledGraph,
    budget: OracleBudget,
) -> Result<Vec<Walk>, OracleError> {
    check_size(g, budget)?;
    let mut found = 0u64;
    let mut seen: HashSet<Vec<(VertexId, usize)>> = HashSet::new();
    let mut out = Vec::new();
    for anchor in 0..g.vertex_count() {
        let mut visited = vec![false; g.vertex_count()];
        visited[anchor] = true;
        let mut walk = Walk::empty(g, anchor);
        dfs_cycles(
            g,
            anchor,
            &mut visited,
            &mut walk,
            budget.max_paths,
            &mut found,
            &mut seen,
            &mut out,
        )?;
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn dfs_cycles(
    g: &LabeledGraph,
    anchor: VertexId,
    visited: &mut Vec<bool>,
    walk: &mut Walk,
    max_paths: u64,
    found: &mut u64,
    seen: &mut HashSet<Vec<(VertexId, usize)>>,
    out: &mut Vec<Walk>,
) -> Result<(), OracleError> {
    let v = walk.end();
    for &(e, v_is_tail) in g.incident(v) {
        let w = g.edge(e).other(v);
        let step = Step { edge: e, forward: v_is_tail };
        if w == anchor && !walk.is_empty() {
            // closing the cycle: a 2-cycle needs two distinct parallel edges
            if walk.len() == 1 && walk.steps()[0].edge == e {
                continue;
            }
            *found += 1;
            if *found > max_paths {
                return Err(OracleError::BudgetExceeded { max: max_paths });
            }
            let mut cycle = walk.clone();
            cycle.push(g, step).expect("closing step is incident");
            let key = canonical_cycle_key(g, &cycle);
            if seen.insert(key) {
                out.push(cycle);
            }
            continue;
        }
        if w < anchor || visited[w] {
            continue;
        }
        visited[w] = true;
        let before = walk.clone();
        walk.push(g, step).expect("incident step extends the walk");
        dfs_cycles(g, anchor, visited, walk, max_paths, found, seen, out)?;
        *walk = before;
        visited[w] = false;
    }
    Ok(())
}

/// Canonical key of a closed walk anchored at its minimum vertex: the
/// lexicographically smaller of the two directions' `(vertex, edge)`
/// sequences.
fn canonical_cycle_key(g: &LabeledGraph, cycle: &Walk) -> Vec<(VertexId, usize)> {
    let fwd: Vec<(VertexId, usize)> = cycle
        .steps()
        .iter()
        .zip(&cycle.vertices()[1..])
        .map(|(s, &v)| (v, s.edge))
        .collect();
    let rev_walk = cycle.reversed(g);
    let rev: Vec<(VertexId, usize)> = rev_walk
        .steps()
        .iter()
        .zip(&rev_walk.vertices()[1..])
        .map(|(s, &v)| (v, s.edge))
        .collect();
    fwd.min(rev)
}

/// Minimum-length non-zero simple cycle by exhaustive enumeration.
pub fn shortest_nonzero_cycle_oracle(
    g: &LabeledGraph,
    budget: OracleBudget,
) -> Result<Option<Walk>, OracleError> {
    let cycles = enumerate_simple_cycles(g, budget)?;
    Ok(cycles
        .into_iter()
        .filter(|c| !g.descriptor().is_identity(c.label()))
        .min_by_key(|c| c.length()))
}

/// Minimum length over simple `s`-`w` paths that are unorthodox with
/// respect to the given potentials, i.e. `psi(s) · label != psi(w)`.
pub fn shortest_unorthodox_distance(
    g: &LabeledGraph,
    s: VertexId,
    w: VertexId,
    psi_s: &GroupElement,
    psi_w: &GroupElement,
    budget: OracleBudget,
) -> Result<Option<Length>, OracleError> {
    let paths = enumerate_st_paths(g, s, w, budget)?;
    Ok(paths
        .into_iter()
        .filter(|p| g.descriptor().mul(psi_s, p.label()) != *psi_w)
        .map(|p| p.length())
        .min())
}

fn check_size(g: &LabeledGraph, budget: OracleBudget) -> Result<(), OracleError> {
    if g.vertex_count() > budget.max_vertices {
        return Err(OracleError::TooManyVertices {
            n: g.vertex_count(),
            max: budget.max_vertices,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::group::GroupDescriptor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn diamond_has_four_st_paths() {
        let g = fixtures::diamond();
        let paths = enumerate_st_paths(&g, 0, 3, OracleBudget::default()).unwrap();
        assert_eq!(paths.len(), 4);
        let mut summary: Vec<(usize, String)> = paths
            .iter()
            .map(|p| (p.steps().len(), g.descriptor().render(p.label())))
            .collect();
        summary.sort();
        assert_eq!(
            summary,
            vec![
                (2, "0".to_string()),
                (2, "0".to_string()),
                (3, "1".to_string()),
                (3, "1".to_string())
            ]
        );
    }

    #[test]
    fn constrained_shortest_on_diamond() {
        let g = fixtures::diamond();
        let zero = g.descriptor().identity();
        let one = g.descriptor().parse("1").unwrap();
        let nz = shortest_path_with_label_constraint(&g, 0, 3, Some(&zero), OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(nz.length(), Length::from(3));
        let even = shortest_path_with_label_constraint(&g, 0, 3, Some(&one), OracleBudget::default())
            .unwrap()
            .unwrap();
        assert_eq!(even.length(), Length::from(2));
    }

    #[test]
    fn infeasible_single_edge() {
        let z2 = GroupDescriptor::z2();
        let id = z2.identity();
        let g = LabeledGraph::new(z2.clone(), 2, vec![(0, 1, Length::from(1), id.clone())]).unwrap();
        let res =
            shortest_path_with_label_constraint(&g, 0, 1, Some(&id), OracleBudget::default())
                .unwrap();
        assert!(res.is_none());
    }

    #[test]
    fn trees_have_one_path_and_no_cycles() {
        let z2 = GroupDescriptor::z2();
        let id = z2.identity();
        let g = LabeledGraph::new(
            z2,
            4,
            vec![
                (0, 1, Length::from(1), id.clone()),
                (1, 2, Length::from(1), id.clone()),
                (1, 3, Length::from(1), id),
            ],
        )
        .unwrap();
        assert_eq!(
            enumerate_st_paths(&g, 0, 2, OracleBudget::default())
                .unwrap()
                .len(),
            1
        );
        assert!(enumerate_simple_cycles(&g, OracleBudget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn disconnected_pairs_have_no_paths() {
        let z2 = GroupDescriptor::z2();
        let g = LabeledGraph::new(z2.clone(), 3, vec![(0, 1, Length::from(1), z2.identity())])
            .unwrap();
        assert!(enumerate_st_paths(&g, 0, 2, OracleBudget::default())
            .unwrap()
            .is_empty());
    }

    #[test]
    fn diamond_has_three_cycles() {
        let g = fixtures::diamond();
        let cycles = enumerate_simple_cycles(&g, OracleBudget::default()).unwrap();
        assert_eq!(cycles.len(), 3);
        let mut lens: Vec<usize> = cycles.iter().map(|c| c.len()).collect();
        lens.sort();
        assert_eq!(lens, vec![3, 3, 4]);
        // non-zeroness of each cycle is invariant under rotation and reflection
        for c in &cycles {
            let nonzero = !g.descriptor().is_identity(c.label());
            for rot in 0..c.len() {
                let rotated = c
                    .subwalk(&g, rot, c.len())
                    .unwrap()
                    .concat(&g, &c.subwalk(&g, 0, rot).unwrap())
                    .unwrap();
                assert_eq!(!g.descriptor().is_identity(rotated.label()), nonzero);
                let refl = rotated.reversed(&g);
                assert_eq!(!g.descriptor().is_identity(refl.label()), nonzero);
            }
        }
    }

    #[test]
    fn parallel_two_cycle_counted_once() {
        let z2 = GroupDescriptor::z2();
        let id = z2.identity();
        let one = z2.parse("1").unwrap();
        let g = LabeledGraph::new(
            z2,
            2,
            vec![
                (0, 1, Length::from(1), id),
                (0, 1, Length::from(2), one),
            ],
        )
        .unwrap();
        let cycles = enumerate_simple_cycles(&g, OracleBudget::default()).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].length(), Length::from(3));
    }

    #[test]
    fn budget_violations_are_errors() {
        let z2 = GroupDescriptor::z2();
        let g = LabeledGraph::new(z2, 12, vec![]).unwrap();
        assert!(matches!(
            enumerate_st_paths(&g, 0, 1, OracleBudget::default()),
            Err(OracleError::TooManyVertices { .. })
        ));
        let g = fixtures::diamond();
        let tiny = OracleBudget { max_vertices: 10, max_paths: 2 };
        assert!(matches!(
            enumerate_st_paths(&g, 0, 3, tiny),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    /// Independent count of simple s-t paths by bitmask dynamic
    /// programming, including parallel-edge multiplicities.
    fn count_paths_dp(g: &LabeledGraph, s: VertexId, t: VertexId) -> u64 {
        let n = g.vertex_count();
        let mut mult = vec![vec![0u64; n]; n];
        for e in g.edges() {
            mult[e.tail][e.head] += 1;
            mult[e.head][e.tail] += 1;
        }
        // f[mask][v]: number of simple walks from s to v visiting exactly mask
        let mut f = vec![vec![0u64; n]; 1 << n];
        f[1 << s][s] = 1;
        let mut total = 0;
        for mask in 0..(1usize << n) {
            for v in 0..n {
                let ways = f[mask][v];
                if ways == 0 || mask & (1 << v) == 0 {
                    continue;
                }
                if v == t {
                    total += ways;
                    continue;
                }
                for w in 0..n {
                    if mask & (1 << w) == 0 && mult[v][w] > 0 {
                        f[mask | (1 << w)][w] += ways * mult[v][w];
                    }
                }
            }
        }
        total
    }

    #[test]
    fn path_count_matches_independent_dp() {
        let mut rng = ChaCha8Rng::seed_from_u64(57);
        for _ in 0..120 {
            let g = crate::gen::random_graph(
                &crate::gen::InstanceConfig {
                    vertices: rng.gen_range(2..=6),
                    edges: rng.gen_range(0..10),
                    descriptor: GroupDescriptor::z2(),
                    max_length: 4,
                    ensure_connected: false,
                },
                &mut rng,
            );
            let s = 0;
            let t = g.vertex_count() - 1;
            if s == t {
                continue;
            }
            let listed = enumerate_st_paths(&g, s, t, OracleBudget::default())
                .unwrap()
                .len() as u64;
            assert_eq!(listed, count_paths_dp(&g, s, t));
        }
    }
}
