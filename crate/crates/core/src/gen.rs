//! Seeded random instance generation, shared by the test harnesses and
//! the CLI's `gen` subcommand.

use rand::Rng;

use crate::graph::{LabeledGraph, Length, VertexId};
use crate::group::{GroupDescriptor, GroupElement};

#[derive(Debug, Clone)]
pub struct InstanceConfig {
    pub vertices: usize,
    pub edges: usize,
    pub descriptor: GroupDescriptor,
    /// Edge lengths are uniform integers in `0..=max_length`.
    pub max_length: u64,
    /// Start from a random spanning tree so every vertex is reachable.
    pub ensure_connected: bool,
}

/// A uniform-ish random element; small enough to keep free-group words and
/// integers readable in rendered instances.
pub fn random_element(d: &GroupDescriptor, rng: &mut impl Rng) -> GroupElement {
    match d {
        GroupDescriptor::Cyclic(k) => GroupElement::Residue(rng.gen_range(0..*k)),
        GroupDescriptor::Integers => {
            GroupElement::Integer(num_bigint::BigInt::from(rng.gen_range(-3i64..=3)))
        }
        GroupDescriptor::Free(rank) => {
            let len = rng.gen_range(0..=2);
            let letters: Vec<i32> = (0..len)
                .map(|_| {
                    let g = rng.gen_range(1..=*rank) as i32;
                    if rng.gen_bool(0.5) {
                        g
                    } else {
                        -g
                    }
                })
                .collect();
            // canonicalize through the group itself
            letters.into_iter().fold(d.identity(), |acc, x| {
                d.op(&acc, &GroupElement::Word(vec![x])).expect("valid letter")
            })
        }
        GroupDescriptor::Product(parts) => {
            GroupElement::Tuple(parts.iter().map(|p| random_element(p, rng)).collect())
        }
    }
}

/// A random loop-free multigraph with the requested vertex and edge
/// counts. Deterministic for a fixed RNG state.
pub fn random_graph(cfg: &InstanceConfig, rng: &mut impl Rng) -> LabeledGraph {
    assert!(cfg.vertices >= 1, "graphs need at least one vertex");
    let n = cfg.vertices;
    let mut specs = Vec::with_capacity(cfg.edges);
    let mut remaining = cfg.edges;

    if cfg.ensure_connected && n >= 2 {
        assert!(
            cfg.edges >= n - 1,
            "a connected graph on {n} vertices needs at least {} edges",
            n - 1
        );
        for v in 1..n {
            let u = rng.gen_range(0..v);
            specs.push(random_edge_between(cfg, rng, u, v));
            remaining -= 1;
        }
    }
    for _ in 0..remaining {
        if n < 2 {
            break;
        }
        let u = rng.gen_range(0..n);
        let mut v = rng.gen_range(0..n - 1);
        if v >= u {
            v += 1;
        }
        specs.push(random_edge_between(cfg, rng, u, v));
    }
    LabeledGraph::new(cfg.descriptor.clone(), n, specs).expect("generated edges are valid")
}

fn random_edge_between(
    cfg: &InstanceConfig,
    rng: &mut impl Rng,
    u: VertexId,
    v: VertexId,
) -> (VertexId, VertexId, Length, GroupElement) {
    let len = Length::from(rng.gen_range(0..=cfg.max_length));
    let label = random_element(&cfg.descriptor, rng);
    (u, v, len, label)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generation_is_deterministic_per_seed() {
        let cfg = InstanceConfig {
            vertices: 7,
            edges: 15,
            descriptor: GroupDescriptor::Free(2),
            max_length: 10,
            ensure_connected: true,
        };
        let a = random_graph(&cfg, &mut ChaCha8Rng::seed_from_u64(99));
        let b = random_graph(&cfg, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a.edge_count(), b.edge_count());
        for (x, y) in a.edges().iter().zip(b.edges()) {
            assert_eq!((x.tail, x.head, x.length, &x.label), (y.tail, y.head, y.length, &y.label));
        }
    }

    #[test]
    fn connected_graphs_reach_every_vertex() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let n = rng.gen_range(2..10);
            let cfg = InstanceConfig {
                vertices: n,
                edges: n + rng.gen_range(0..6),
                descriptor: GroupDescriptor::z2(),
                max_length: 4,
                ensure_connected: true,
            };
            let g = random_graph(&cfg, &mut rng);
            let tree = crate::spt::dijkstra(&g, 0);
            assert!((0..n).all(|v| tree.is_reachable(v)));
        }
    }
}
