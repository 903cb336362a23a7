//! Conflict graph over delivery windows, clique number and optimal colouring.
//!
//! All routines are sweeps over sorted endpoints. At equal coordinates a
//! window start is processed before a window end, so windows that merely
//! touch are treated as overlapping.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use crate::model::{DeliveryId, Instance};

/// Interval graph of an instance. Vertex `v` is delivery `DeliveryId(v + 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntervalGraph {
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    max_degree: usize,
    clique_number: usize,
}

impl IntervalGraph {
    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Sorted zero-based neighbours of vertex `v`.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Conflict count of every delivery, indexed by zero-based position.
    pub fn degrees(&self) -> Vec<usize> {
        self.adjacency.iter().map(Vec::len).collect()
    }

    #[inline]
    pub fn degree(&self, id: DeliveryId) -> usize {
        self.adjacency[id.index()].len()
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    #[inline]
    pub fn clique_number(&self) -> usize {
        self.clique_number
    }

    /// Edges as `(j, k)` id pairs with `j < k`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (DeliveryId, DeliveryId)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(u, ns)| {
            ns.iter()
                .filter(move |&&v| v > u)
                .map(move |&v| (DeliveryId::from_index(u), DeliveryId::from_index(v)))
        })
    }

    #[inline]
    pub fn has_edge(&self, a: DeliveryId, b: DeliveryId) -> bool {
        self.adjacency[a.index()].binary_search(&b.index()).is_ok()
    }
}

/// Builds the conflict graph in `O(n log n + n_e)`.
///
/// Deliveries are swept in launch order while an ordered active set keyed by
/// rendezvous is maintained; every window still active when a new one starts
/// intersects it.
pub fn build_graph(inst: &Instance) -> IntervalGraph {
    let ds = inst.deliveries();
    let mut adjacency = vec![Vec::new(); ds.len()];
    let mut active: BTreeSet<(u64, usize)> = BTreeSet::new();
    let mut clique_number = 0;
    for id in inst.launch_order() {
        let v = id.index();
        let launch = ds[v].launch;
        while let Some(&(end, u)) = active.first() {
            if end >= launch {
                break;
            }
            active.remove(&(end, u));
        }
        for &(_, u) in &active {
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        active.insert((ds[v].rendezvous, v));
        clique_number = clique_number.max(active.len());
    }
    for ns in &mut adjacency {
        ns.sort_unstable();
    }
    let edge_count = adjacency.iter().map(Vec::len).sum::<usize>() / 2;
    let max_degree = adjacency.iter().map(Vec::len).max().unwrap_or(0);
    IntervalGraph {
        adjacency,
        edge_count,
        max_degree,
        clique_number,
    }
}

/// Maximum number of windows covering a single instant, which for interval
/// graphs equals the largest clique.
pub fn clique_number(inst: &Instance) -> usize {
    // (coordinate, 0 = start / 1 = end): starts sort first at equal coordinates.
    let mut events: Vec<(u64, u8)> = Vec::with_capacity(inst.len() * 2);
    for d in inst.deliveries() {
        events.push((d.launch, 0));
        events.push((d.rendezvous, 1));
    }
    events.sort_unstable();
    let mut depth = 0usize;
    let mut best = 0usize;
    for (_, kind) in events {
        if kind == 0 {
            depth += 1;
            best = best.max(depth);
        } else {
            depth -= 1;
        }
    }
    best
}

/// A proper colouring with colours `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    color_of: Vec<usize>,
    classes: Vec<Vec<DeliveryId>>,
}

impl Coloring {
    #[inline]
    pub fn color_of(&self, id: DeliveryId) -> usize {
        self.color_of[id.index()]
    }

    #[inline]
    pub fn color_count(&self) -> usize {
        self.classes.len()
    }

    /// Colour classes in colour order; class `k - 1` holds colour `k`. Ids in
    /// each class follow the sweep order.
    #[inline]
    pub fn classes(&self) -> &[Vec<DeliveryId>] {
        &self.classes
    }

    pub fn into_classes(self) -> Vec<Vec<DeliveryId>> {
        self.classes
    }
}

/// Colours the graph with exactly `ω` colours.
///
/// Windows are scanned by `(launch, rendezvous, id)`; each takes the smallest
/// colour not held by a window still in progress.
pub fn color_intervals(inst: &Instance, g: &IntervalGraph) -> Coloring {
    debug_assert_eq!(g.vertex_count(), inst.len());
    let ds = inst.deliveries();
    let mut color_of = vec![0usize; ds.len()];
    let mut classes: Vec<Vec<DeliveryId>> = Vec::new();
    let mut free: BinaryHeap<Reverse<usize>> = BinaryHeap::new();
    let mut active: BinaryHeap<Reverse<(u64, usize)>> = BinaryHeap::new();
    for id in inst.launch_order() {
        let d = &ds[id.index()];
        while let Some(&Reverse((end, color))) = active.peek() {
            if end >= d.launch {
                break;
            }
            active.pop();
            free.push(Reverse(color));
        }
        let color = match free.pop() {
            Some(Reverse(c)) => c,
            None => {
                classes.push(Vec::new());
                classes.len()
            }
        };
        color_of[id.index()] = color;
        classes[color - 1].push(id);
        active.push(Reverse((d.rendezvous, color)));
    }
    Coloring { color_of, classes }
}
