//! Brute-force reference implementations shared by the integration tests.
//! None of these call into the solver code paths they are used to check.

#![allow(dead_code)]

use std::collections::BTreeMap;

use ddp_core::greedy::GreedyObserver;
use ddp_core::harness::{generate, GeneratorConfig};
use ddp_core::tree::{DroneNode, DroneTree, ProbeBudget};
use ddp_core::{Delivery, DeliveryId, Instance};

pub fn fixture_a() -> Instance {
    Instance::new(10, [(0, 2, 6), (1, 3, 6), (4, 5, 5), (4, 6, 5)]).unwrap()
}

pub fn fixture_b() -> Instance {
    Instance::new(10, [(0, 1, 3), (0, 1, 3), (2, 3, 3)]).unwrap()
}

fn overlaps(a: &Delivery, b: &Delivery) -> bool {
    !(a.rendezvous < b.launch || b.rendezvous < a.launch)
}

/// Feasibility of a set given as zero-based positions.
pub fn brute_feasible(inst: &Instance, members: &[usize]) -> bool {
    let ds = inst.deliveries();
    let cost: u64 = members.iter().map(|&i| ds[i].cost).sum();
    if cost > inst.budget() {
        return false;
    }
    members
        .iter()
        .enumerate()
        .all(|(x, &i)| members[x + 1..].iter().all(|&j| !overlaps(&ds[i], &ds[j])))
}

/// Minimum number of blocks over every set partition of the deliveries whose
/// blocks are all feasible. Enumerates restricted growth strings.
pub fn brute_opt(inst: &Instance) -> usize {
    let n = inst.len();
    if n == 0 {
        return 0;
    }
    let mut best = n;
    let mut labels = vec![0usize; n];
    fn rec(inst: &Instance, pos: usize, blocks: usize, labels: &mut Vec<usize>, best: &mut usize) {
        let n = labels.len();
        if blocks >= *best {
            return;
        }
        if pos == n {
            let ok = (0..blocks).all(|b| {
                let members: Vec<usize> = (0..n).filter(|&i| labels[i] == b).collect();
                brute_feasible(inst, &members)
            });
            if ok {
                *best = blocks;
            }
            return;
        }
        for b in 0..=blocks {
            labels[pos] = b;
            rec(inst, pos + 1, blocks.max(b + 1), labels, best);
        }
    }
    // label of the first element is fixed at 0
    rec(inst, 1, 1, &mut labels, &mut best);
    best
}

/// Largest pairwise-conflicting subset, by subset enumeration.
pub fn brute_max_clique(inst: &Instance) -> usize {
    let ds = inst.deliveries();
    let n = ds.len();
    assert!(n <= 20);
    (0u32..1 << n)
        .filter(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            members
                .iter()
                .enumerate()
                .all(|(x, &i)| members[x + 1..].iter().all(|&j| overlaps(&ds[i], &ds[j])))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// All-pairs adjacency lists, zero-based and sorted.
pub fn all_pairs_adjacency(inst: &Instance) -> Vec<Vec<usize>> {
    let ds = inst.deliveries();
    (0..ds.len())
        .map(|i| {
            (0..ds.len())
                .filter(|&j| j != i && overlaps(&ds[i], &ds[j]))
                .collect()
        })
        .collect()
}

/// Minimum bins by brute force over item-to-bin labelings.
pub fn brute_bins(capacity: u64, sizes: &[u64]) -> usize {
    let inst = Instance::new(capacity, sizes.iter().enumerate().map(|(i, &s)| (10 * i as u64, 10 * i as u64 + 1, s)))
        .unwrap();
    brute_opt(&inst)
}

/// Reference worst-fit: scan open drones for the largest remaining capacity
/// (ties to the higher index) and use it if the item fits.
pub fn reference_worst_fit(budget: u64, costs: &[u64]) -> Vec<Vec<usize>> {
    let mut remaining: Vec<u64> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, &c) in costs.iter().enumerate() {
        let best = (0..remaining.len()).max_by_key(|&d| (remaining[d], d));
        match best {
            Some(d) if remaining[d] >= c => {
                remaining[d] -= c;
                groups[d].push(i);
            }
            _ => {
                remaining.push(budget - c);
                groups.push(vec![i]);
            }
        }
    }
    groups
}

/// Varied small-instance corpus: sizes cycle through `1..=max_n`, overlap and
/// cost regimes cycle independently.
pub fn corpus(count: usize, max_n: usize, base_seed: u64) -> Vec<Instance> {
    const OVERLAP: [f64; 5] = [0.2, 0.8, 1.5, 3.0, 6.0];
    const COSTS: [(u64, u64); 4] = [(1, 25), (1, 100), (30, 100), (45, 60)];
    (0..count)
        .map(|i| {
            let n = 1 + i % max_n;
            let (lo, hi) = COSTS[(i / max_n) % COSTS.len()];
            let cfg = GeneratorConfig::new(n, OVERLAP[(i / 3) % OVERLAP.len()], base_seed + i as u64)
                .with_costs(lo, hi);
            generate(&cfg).unwrap()
        })
        .collect()
}

/// Open drone as tracked independently of the tree.
#[derive(Debug, Clone)]
pub struct ShadowDrone {
    pub members: Vec<Delivery>,
    pub remaining: u64,
}

impl ShadowDrone {
    pub fn max_rendezvous(&self) -> u64 {
        self.members.iter().map(|d| d.rendezvous).max().unwrap()
    }
}

/// Observer that replays every greedy step against a linear scan and a
/// shadow model of the drones, recording any divergence.
#[derive(Debug, Default)]
pub struct TreeAuditor {
    pub budget: u64,
    pub drones: Vec<ShadowDrone>,
    pub expected: Option<usize>,
    pub pending: Option<Delivery>,
    pub probes: usize,
    pub mutations: usize,
    pub divergences: Vec<String>,
}

impl TreeAuditor {
    pub fn new(budget: u64) -> Self {
        TreeAuditor {
            budget,
            ..Default::default()
        }
    }

    /// Decreasing `(remaining, index)`, stop at the first drone that is too
    /// small, take the first whose last window ends before this launch.
    fn linear_scan(&self, d: &Delivery) -> Option<usize> {
        let mut order: Vec<usize> = (0..self.drones.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse((self.drones[i].remaining, i + 1)));
        for i in order {
            let dr = &self.drones[i];
            if dr.remaining < d.cost {
                return None;
            }
            if dr.max_rendezvous() < d.launch {
                return Some(i + 1);
            }
        }
        None
    }
}

impl GreedyObserver for TreeAuditor {
    fn before_find(&mut self, _tree: &DroneTree, d: &Delivery, budget: ProbeBudget) {
        self.probes += 1;
        if budget.remaining() == 0 {
            self.divergences.push(format!("delivery {} starts with an empty probe budget", d.id));
        }
        self.expected = self.linear_scan(d);
        self.pending = Some(*d);
    }

    fn after_find(&mut self, _tree: &DroneTree, d: &Delivery, found: Option<&DroneNode<u64>>) {
        let got = found.map(|n| n.index);
        if got != self.expected {
            self.divergences.push(format!(
                "delivery {}: tree found {:?}, linear scan {:?}",
                d.id, got, self.expected
            ));
        }
        if got.is_none() {
            // completeness: no open drone could have taken it
            for (i, dr) in self.drones.iter().enumerate() {
                let fits = dr.remaining >= d.cost && dr.members.iter().all(|m| !overlaps(m, d));
                if fits {
                    self.divergences
                        .push(format!("delivery {}: drone {} was feasible but missed", d.id, i + 1));
                }
            }
        }
    }

    fn after_mutation(&mut self, tree: &DroneTree) {
        self.mutations += 1;
        let d = self.pending.take().expect("mutation follows a find");
        match self.expected {
            Some(idx) => {
                let dr = &mut self.drones[idx - 1];
                let before = dr.max_rendezvous();
                dr.members.push(d);
                dr.remaining -= d.cost;
                if dr.max_rendezvous() < before {
                    self.divergences.push(format!("drone {idx}: data decreased"));
                }
            }
            None => self.drones.push(ShadowDrone {
                members: vec![d],
                remaining: self.budget - d.cost,
            }),
        }
        if let Err(e) = tree.audit() {
            self.divergences.push(format!("audit after delivery {}: {e}", d.id));
        }
        if tree.len() != self.drones.len() {
            self.divergences.push("tree size differs from shadow".into());
        }
        for (i, dr) in self.drones.iter().enumerate() {
            match tree.get(i + 1) {
                Some(node) if node.key == dr.remaining && node.data == dr.max_rendezvous() => {}
                other => self
                    .divergences
                    .push(format!("drone {}: tree node {:?} disagrees with shadow", i + 1, other)),
            }
        }
    }
}

pub fn ids(v: &[usize]) -> Vec<DeliveryId> {
    v.iter().map(|&i| DeliveryId(i)).collect()
}

/// Groups an assignment list by drone for readable comparisons.
pub fn groups(sol: &ddp_core::Solution) -> BTreeMap<usize, Vec<usize>> {
    sol.assignments
        .iter()
        .map(|a| (a.drone, a.delivery_ids.iter().map(|d| d.0).collect()))
        .collect()
}
