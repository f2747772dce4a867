//! Redundant parallel-edge removal, shared by the up-front reduction pass
//! and by shrinking.
//!
//! Invariant maintained per vertex pair: at most two retained edges, with
//! pairwise distinct labels when read in the same direction. A newcomer
//! with the label of a retained edge survives only if strictly shorter;
//! when three distinct labels meet, a longest non-tree edge is dropped.
//! Tree edges are never removed (they are never longer than a parallel
//! edge, since tree edge lengths equal the endpoint distance difference).

use std::collections::HashMap;

use crate::graph::{Length, VertexId};
use crate::group::{GroupDescriptor, GroupElement};

pub(crate) struct ProtoEdge<O> {
    pub tail: VertexId,
    pub head: VertexId,
    pub length: Length,
    pub label: GroupElement,
    pub is_tree: bool,
    pub origin: O,
}

pub(crate) struct PairReducer<'d, O> {
    descriptor: &'d GroupDescriptor,
    slots: Vec<Option<ProtoEdge<O>>>,
    /// Oriented label (low endpoint to high endpoint) per live slot.
    oriented: Vec<GroupElement>,
    pairs: HashMap<(VertexId, VertexId), Vec<usize>>,
}

impl<'d, O> PairReducer<'d, O> {
    pub fn new(descriptor: &'d GroupDescriptor) -> Self {
        PairReducer {
            descriptor,
            slots: Vec::new(),
            oriented: Vec::new(),
            pairs: HashMap::new(),
        }
    }

    /// Sequentially add one edge, immediately dropping whichever parallel
    /// edge the redundancy rules make unnecessary.
    pub fn admit(&mut self, proto: ProtoEdge<O>) {
        let key = (proto.tail.min(proto.head), proto.tail.max(proto.head));
        let oriented = if proto.tail <= proto.head {
            proto.label.clone()
        } else {
            self.descriptor.inv(&proto.label)
        };
        let slot = self.slots.len();
        let members = self.pairs.entry(key).or_default();

        if let Some(pos) = members
            .iter()
            .position(|&i| self.oriented[i] == oriented)
        {
            let i = members[pos];
            let existing = self.slots[i].as_ref().expect("member slots are live");
            let replace = if proto.is_tree {
                debug_assert!(!existing.is_tree, "two parallel tree edges");
                debug_assert!(existing.length >= proto.length);
                true
            } else if existing.is_tree {
                debug_assert!(proto.length >= existing.length);
                false
            } else {
                proto.length < existing.length
            };
            if replace {
                self.slots[i] = None;
                members[pos] = slot;
                self.slots.push(Some(proto));
                self.oriented.push(oriented);
            } else {
                // drop the newcomer; keep slot numbering aligned
                self.slots.push(None);
                self.oriented.push(oriented);
            }
            return;
        }

        members.push(slot);
        self.slots.push(Some(proto));
        self.oriented.push(oriented);

        if members.len() == 3 {
            let longest = members
                .iter()
                .map(|&i| self.slots[i].as_ref().expect("live").length)
                .max()
                .expect("three members");
            let drop = members
                .iter()
                .copied()
                .filter(|&i| {
                    let e = self.slots[i].as_ref().expect("live");
                    !e.is_tree && e.length == longest
                })
                .max()
                .expect("a longest parallel edge is never uniquely the tree edge");
            self.slots[drop] = None;
            members.retain(|&i| i != drop);
        }
    }

    /// Retained edges in admission order.
    pub fn finish(self) -> Vec<ProtoEdge<O>> {
        self.slots.into_iter().flatten().collect()
    }
}
